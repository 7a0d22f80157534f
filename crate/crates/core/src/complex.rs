//! Explicit simplicial complexes given by their maximal faces.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

/// Face counts `(f_0, ..., f_d)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FVector(pub Vec<usize>);

impl FVector {
    pub fn euler_characteristic(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &f)| if i % 2 == 0 { f as i64 } else { -(f as i64) })
            .sum()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Display for FVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A simplicial complex on vertex labels `0..n`, stored as its maximal faces.
///
/// Every face is a strictly ascending vertex list. The face list is sorted and
/// duplicate-free.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FacetComplex {
    n: u32,
    facets: Vec<Vec<u32>>,
}

impl FacetComplex {
    /// Builds a complex from faces that are already pairwise non-nested.
    pub fn new(n: u32, facets: Vec<Vec<u32>>) -> Self {
        let mut facets: Vec<Vec<u32>> = facets
            .into_iter()
            .map(|mut f| {
                f.sort_unstable();
                f.dedup();
                f
            })
            .filter(|f| !f.is_empty())
            .collect();
        facets.sort();
        facets.dedup();
        FacetComplex { n, facets }
    }

    /// Builds a complex from arbitrary faces, keeping only the maximal ones.
    pub fn from_faces(n: u32, faces: Vec<Vec<u32>>) -> Self {
        let mut all = FacetComplex::new(n, faces).facets;
        // larger faces first so containment only has to look backwards
        all.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        let mut kept: Vec<Vec<u32>> = Vec::new();
        let mut covered: BTreeSet<Vec<u32>> = BTreeSet::new();
        for f in all {
            if covered.contains(&f) {
                continue;
            }
            for size in 1..f.len() {
                for s in subsets(&f, size) {
                    covered.insert(s);
                }
            }
            kept.push(f);
        }
        FacetComplex::new(n, kept)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn facets(&self) -> &[Vec<u32>] {
        &self.facets
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    /// Dimension of the largest face; `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.facets.iter().map(|f| f.len() - 1).max()
    }

    pub fn is_pure(&self) -> bool {
        match self.facets.first() {
            None => true,
            Some(f) => self.facets.iter().all(|g| g.len() == f.len()),
        }
    }

    pub fn vertices(&self) -> Vec<u32> {
        let set: BTreeSet<u32> = self.facets.iter().flatten().copied().collect();
        set.into_iter().collect()
    }

    pub fn has_vertex(&self, v: u32) -> bool {
        self.facets.iter().any(|f| f.binary_search(&v).is_ok())
    }

    /// All `k`-dimensional faces, sorted.
    pub fn faces(&self, k: usize) -> Vec<Vec<u32>> {
        let set: BTreeSet<Vec<u32>> = self
            .facets
            .iter()
            .filter(|f| f.len() > k)
            .flat_map(|f| subsets(f, k + 1))
            .collect();
        set.into_iter().collect()
    }

    pub fn f_vector(&self) -> FVector {
        match self.dim() {
            None => FVector(Vec::new()),
            Some(d) => FVector((0..=d).map(|k| self.faces(k).len()).collect()),
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().euler_characteristic()
    }

    /// Number of maximal faces containing each `k`-face (only faces of maximal faces
    /// of dimension `> k` are counted).
    pub fn face_degrees(&self, k: usize) -> HashMap<Vec<u32>, usize> {
        let mut deg = HashMap::new();
        for f in &self.facets {
            if f.len() > k + 1 {
                for s in subsets(f, k + 1) {
                    *deg.entry(s).or_insert(0) += 1;
                }
            }
        }
        deg
    }

    /// Disjoint union, relabelling the second complex by `+self.n`.
    pub fn disjoint_union(&self, other: &FacetComplex) -> FacetComplex {
        let shift = self.n;
        let mut facets = self.facets.clone();
        facets.extend(
            other
                .facets
                .iter()
                .map(|f| f.iter().map(|&v| v + shift).collect()),
        );
        FacetComplex::new(self.n + other.n, facets)
    }

    /// The same complex with one maximal face removed.
    pub fn without_facet(&self, facet: &[u32]) -> FacetComplex {
        let facets = self
            .facets
            .iter()
            .filter(|f| f.as_slice() != facet)
            .cloned()
            .collect();
        FacetComplex::new(self.n, facets)
    }

    /// Image under a vertex relabelling.
    pub fn relabel(&self, n: u32, map: impl Fn(u32) -> u32) -> FacetComplex {
        let facets = self
            .facets
            .iter()
            .map(|f| f.iter().map(|&v| map(v)).collect())
            .collect();
        FacetComplex::new(n, facets)
    }

    /// Plain-text OFF export. Vertices are placed on the moment curve so the file
    /// loads in ordinary viewers; faces are the maximal faces.
    pub fn to_off(&self) -> String {
        let mut out = String::from("OFF\n");
        let edges = self.faces(1).len();
        out.push_str(&format!("{} {} {}\n", self.n, self.facets.len(), edges));
        for v in 0..self.n {
            let t = v as f64 / self.n.max(1) as f64;
            out.push_str(&format!("{t:.6} {:.6} {:.6}\n", t * t, t * t * t));
        }
        for f in &self.facets {
            let idx: Vec<String> = f.iter().map(|v| v.to_string()).collect();
            out.push_str(&format!("{} {}\n", f.len(), idx.join(" ")));
        }
        out
    }
}

/// All `size`-element subsets of a sorted slice, in lexicographic order.
pub fn subsets(items: &[u32], size: usize) -> Vec<Vec<u32>> {
    let n = items.len();
    if size > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let Some(i) = (0..size).rev().find(|&i| idx[i] < i + n - size) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
