//! Combinatorics of explicit complexes: links, spans, pseudomanifold and sphere
//! recognition in low dimension, collapsing and solid-torus certificates.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::complex::{subsets, FacetComplex};
use crate::cycle::CyclicComplex;
use crate::error::{Error, Result};
use crate::invariants::homology;

/// `{f \ {v} : v in f}`.
pub fn link(k: &FacetComplex, v: u32) -> Result<FacetComplex> {
    if !k.has_vertex(v) {
        return Err(Error::MissingVertex(v));
    }
    let faces = k
        .facets()
        .iter()
        .filter(|f| f.binary_search(&v).is_ok())
        .map(|f| f.iter().copied().filter(|&w| w != v).collect())
        .collect();
    Ok(FacetComplex::from_faces(k.n(), faces))
}

/// Induced subcomplex on `vertices`, given by its maximal faces.
pub fn span(k: &FacetComplex, vertices: &BTreeSet<u32>) -> FacetComplex {
    let faces = k
        .facets()
        .iter()
        .map(|f| {
            f.iter()
                .copied()
                .filter(|v| vertices.contains(v))
                .collect::<Vec<_>>()
        })
        .filter(|f| !f.is_empty())
        .collect();
    FacetComplex::from_faces(k.n(), faces)
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Number of connected components (isolated labels not occurring in any face are ignored).
pub fn component_count(k: &FacetComplex) -> usize {
    let verts = k.vertices();
    let mut uf = UnionFind::new(k.n() as usize);
    for f in k.facets() {
        for w in f.windows(2) {
            uf.union(w[0] as usize, w[1] as usize);
        }
    }
    let roots: BTreeSet<usize> = verts.iter().map(|&v| uf.find(v as usize)).collect();
    roots.len()
}

pub fn is_connected(k: &FacetComplex) -> bool {
    !k.is_empty() && component_count(k) == 1
}

/// Every codimension-one face lies in exactly two facets.
pub fn is_closed_pseudomanifold(k: &FacetComplex) -> Result<bool> {
    if !k.is_pure() {
        return Err(Error::Impure);
    }
    let Some(d) = k.dim() else {
        return Ok(false);
    };
    if d == 0 {
        return Ok(false);
    }
    Ok(k.face_degrees(d - 1).values().all(|&c| c == 2))
}

/// Codimension-one faces lying in exactly one facet.
pub fn boundary(k: &FacetComplex) -> Result<FacetComplex> {
    if !k.is_pure() {
        return Err(Error::Impure);
    }
    let Some(d) = k.dim() else {
        return Ok(FacetComplex::new(k.n(), Vec::new()));
    };
    if d == 0 {
        return Ok(FacetComplex::new(k.n(), Vec::new()));
    }
    let faces = k
        .face_degrees(d - 1)
        .into_iter()
        .filter(|&(_, c)| c == 1)
        .map(|(f, _)| f)
        .collect();
    Ok(FacetComplex::new(k.n(), faces))
}

fn graph_connected(edges: &[(u32, u32)]) -> bool {
    let mut adj: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for &(a, b) in edges {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    let Some(&start) = adj.keys().next() else {
        return false;
    };
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[&v] {
            if seen.insert(w) {
                queue.push_back(w);
            }
        }
    }
    seen.len() == adj.len()
}

/// A 1-complex that is a single cycle.
pub fn is_circle(k: &FacetComplex) -> bool {
    if k.is_empty() || !k.is_pure() || k.dim() != Some(1) {
        return false;
    }
    let mut deg: HashMap<u32, usize> = HashMap::new();
    for e in k.facets() {
        *deg.entry(e[0]).or_insert(0) += 1;
        *deg.entry(e[1]).or_insert(0) += 1;
    }
    let edges: Vec<(u32, u32)> = k.facets().iter().map(|e| (e[0], e[1])).collect();
    deg.len() >= 3 && deg.values().all(|&x| x == 2) && graph_connected(&edges)
}

/// Closed surface test for a 2-complex: every edge in two triangles and every
/// vertex link a single cycle.
pub fn is_closed_surface(k: &FacetComplex) -> bool {
    if k.is_empty() || !k.is_pure() || k.dim() != Some(2) {
        return false;
    }
    if !k.face_degrees(1).values().all(|&c| c == 2) {
        return false;
    }
    let mut links: HashMap<u32, Vec<(u32, u32)>> = HashMap::new();
    for t in k.facets() {
        links.entry(t[0]).or_default().push((t[1], t[2]));
        links.entry(t[1]).or_default().push((t[0], t[2]));
        links.entry(t[2]).or_default().push((t[0], t[1]));
    }
    links.values().all(|edges| graph_connected(edges))
}

/// Combinatorial 2-sphere recognition.
pub fn is_sphere_2d(k: &FacetComplex) -> Result<bool> {
    if k.dim() != Some(2) {
        return Err(Error::UnsupportedDimension(k.dim().unwrap_or(0)));
    }
    Ok(is_closed_surface(k) && is_connected(k) && k.euler_characteristic() == 2)
}

/// Manifold test for a cyclic complex of dimension 2 or 3. All vertex links are
/// isomorphic under the shift, so only the link of 0 is examined.
pub fn is_combinatorial_manifold(c: &CyclicComplex) -> Result<bool> {
    let d = c.dim();
    if !(2..=3).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    if c.is_empty() {
        return Ok(false);
    }
    let k = c.expand();
    Ok(vertex_link_is_sphere(&k, 0, d)? && is_connected(&k))
}

fn vertex_link_is_sphere(k: &FacetComplex, v: u32, d: usize) -> Result<bool> {
    let lk = link(k, v)?;
    Ok(match d {
        3 => lk.dim() == Some(2) && is_sphere_2d(&lk)?,
        2 => is_circle(&lk),
        _ => return Err(Error::UnsupportedDimension(d)),
    })
}

/// Generic manifold test checking every vertex link; independent of cyclic symmetry.
pub fn is_manifold_all_links(k: &FacetComplex) -> Result<bool> {
    let Some(d) = k.dim() else {
        return Ok(false);
    };
    if !(2..=3).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    if !k.is_pure() {
        return Ok(false);
    }
    for v in k.vertices() {
        if !vertex_link_is_sphere(k, v, d)? {
            return Ok(false);
        }
    }
    Ok(is_connected(k))
}

/// Signs making a pure pseudomanifold coherently oriented, or `None` if none exist.
/// Each connected component (through codimension-one faces) gets its first facet
/// positively oriented.
pub fn coherent_orientation(k: &FacetComplex) -> Option<Vec<i8>> {
    let d = k.dim()?;
    let facets = k.facets();
    let mut ridges: HashMap<Vec<u32>, Vec<(usize, i8)>> = HashMap::new();
    for (idx, f) in facets.iter().enumerate() {
        for i in 0..=d {
            let mut r = f.clone();
            r.remove(i);
            let sign = if i % 2 == 0 { 1 } else { -1 };
            ridges.entry(r).or_default().push((idx, sign));
        }
    }
    let mut adj: Vec<Vec<(usize, i8)>> = vec![Vec::new(); facets.len()];
    for inc in ridges.values() {
        if inc.len() > 2 {
            return None;
        }
        if let [(a, sa), (b, sb)] = inc[..] {
            // coherent iff the induced orientations on the ridge cancel
            let rel = -sa * sb;
            adj[a].push((b, rel));
            adj[b].push((a, rel));
        }
    }
    let mut sign = vec![0i8; facets.len()];
    for start in 0..facets.len() {
        if sign[start] != 0 {
            continue;
        }
        sign[start] = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(a) = queue.pop_front() {
            for &(b, rel) in &adj[a] {
                let want = sign[a] * rel;
                if sign[b] == 0 {
                    sign[b] = want;
                    queue.push_back(b);
                } else if sign[b] != want {
                    return None;
                }
            }
        }
    }
    Some(sign)
}

/// Greedy collapse. At each step the lowest-dimensional free face (lexicographically
/// first among equals) is removed together with every face containing it.
pub fn collapse(k: &FacetComplex) -> FacetComplex {
    let mut maximal: BTreeSet<Vec<u32>> = k.facets().iter().cloned().collect();
    loop {
        let mut owners: HashMap<Vec<u32>, (usize, Vec<u32>)> = HashMap::new();
        for tau in &maximal {
            for size in 1..tau.len() {
                for s in subsets(tau, size) {
                    let e = owners.entry(s).or_insert((0, tau.clone()));
                    e.0 += 1;
                }
            }
        }
        let free = owners
            .into_iter()
            .filter(|(_, (c, _))| *c == 1)
            .min_by(|(a, _), (b, _)| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let Some((sigma, (_, tau))) = free else {
            break;
        };
        maximal.remove(&tau);
        for &v in &sigma {
            let rest: Vec<u32> = tau.iter().copied().filter(|&w| w != v).collect();
            let covered = maximal
                .iter()
                .any(|m| rest.iter().all(|x| m.binary_search(x).is_ok()));
            if !covered {
                maximal.insert(rest);
            }
        }
    }
    FacetComplex::new(k.n(), maximal.into_iter().collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolidTorusVerdict {
    Certified,
    Inconclusive(String),
}

impl SolidTorusVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, SolidTorusVerdict::Certified)
    }
}

/// Sufficient evidence that a pure 3-complex is a solid torus: torus boundary,
/// homology of a circle and a collapse onto a circle.
pub fn solid_torus_certificate(k: &FacetComplex) -> Result<SolidTorusVerdict> {
    use SolidTorusVerdict::*;
    if !k.is_pure() {
        return Err(Error::Impure);
    }
    if k.dim() != Some(3) {
        return Err(Error::UnsupportedDimension(k.dim().unwrap_or(0)));
    }
    let bd = boundary(k)?;
    if bd.is_empty() {
        return Err(Error::NotApplicable("complex has no boundary".into()));
    }
    if !is_closed_surface(&bd) || !is_connected(&bd) {
        return Ok(Inconclusive(
            "boundary is not a connected closed surface".into(),
        ));
    }
    if bd.euler_characteristic() != 0 {
        return Ok(Inconclusive(format!(
            "boundary has Euler characteristic {}",
            bd.euler_characteristic()
        )));
    }
    if coherent_orientation(&bd).is_none() {
        return Ok(Inconclusive("boundary is non-orientable".into()));
    }
    let h = homology(k);
    if h.betti != [1, 1, 0, 0] || h.torsion.iter().any(|t| !t.is_empty()) {
        return Ok(Inconclusive(format!("homology is {h}")));
    }
    let core = collapse(k);
    let is_graph_circle = core.dim() == Some(1)
        && core.is_pure()
        && is_connected(&core)
        && core.euler_characteristic() == 0;
    if !is_graph_circle {
        return Ok(Inconclusive(format!(
            "greedy collapse stopped at a complex of dimension {:?} with {} maximal faces",
            core.dim(),
            core.facets().len()
        )));
    }
    Ok(Certified)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn boundary_simplex(d: u32) -> FacetComplex {
        let facets = (0..=d + 1)
            .map(|skip| (0..=d + 1).filter(|&v| v != skip).collect())
            .collect();
        FacetComplex::new(d + 2, facets)
    }

    fn cyc(s: &str) -> CyclicComplex {
        s.parse().unwrap()
    }

    #[test]
    fn link_of_simplex_boundary() {
        let k = boundary_simplex(3);
        let lk = link(&k, 0).unwrap();
        let expected = FacetComplex::new(
            5,
            vec![vec![1, 2, 3], vec![1, 2, 4], vec![1, 3, 4], vec![2, 3, 4]],
        );
        assert_eq!(lk, expected);
        assert!(matches!(link(&k, 7), Err(Error::MissingVertex(7))));
    }

    #[test]
    fn spans() {
        let k = boundary_simplex(3);
        let s = span(&k, &BTreeSet::from([0, 1, 2, 3]));
        assert_eq!(s.facets(), &[vec![0, 1, 2, 3]]);
        assert!(span(&k, &BTreeSet::new()).is_empty());
    }

    #[test]
    fn pseudomanifold_and_connectivity() {
        let k = boundary_simplex(3);
        assert!(is_closed_pseudomanifold(&k).unwrap());
        assert!(is_connected(&k));
        let two = k.disjoint_union(&k);
        assert!(is_closed_pseudomanifold(&two).unwrap());
        assert!(!is_connected(&two));
        let holed = k.without_facet(&[0, 1, 2, 3]);
        assert!(!is_closed_pseudomanifold(&holed).unwrap());
        let impure = FacetComplex::from_faces(5, vec![vec![0, 1, 2], vec![3, 4]]);
        assert_eq!(is_closed_pseudomanifold(&impure), Err(Error::Impure));
    }

    #[test]
    fn two_spheres() {
        let tet = boundary_simplex(2);
        assert!(is_sphere_2d(&tet).unwrap());
        let torus = cyc("{(1:2:4),(1:4:2)}").expand();
        assert_eq!(torus.euler_characteristic(), 0);
        assert!(is_closed_surface(&torus));
        assert!(!is_sphere_2d(&torus).unwrap());
        assert!(!is_sphere_2d(&tet.disjoint_union(&tet)).unwrap());
        assert!(is_sphere_2d(&boundary_simplex(3)).is_err());
    }

    #[test]
    fn cyclic_manifold_checks() {
        assert!(is_combinatorial_manifold(&cyc("{(1:1:1:2)}")).unwrap());
        assert!(is_combinatorial_manifold(&cyc("{(1:1:2:5),(1:1:5:2),(1:2:1:5)}")).unwrap());
        assert!(!is_combinatorial_manifold(&cyc("{(1:2:4:7)}")).unwrap());
        assert!(is_combinatorial_manifold(&cyc("{(1:2:4),(1:4:2)}")).unwrap());
        assert!(matches!(
            is_combinatorial_manifold(&cyc("{(1:1:1:1:2)}")),
            Err(Error::UnsupportedDimension(4))
        ));
        let c = cyc("{(1:1:2:5),(1:1:5:2),(1:2:1:5)}");
        assert!(is_manifold_all_links(&c.expand()).unwrap());
    }

    #[test]
    fn orientation_of_surfaces() {
        assert!(coherent_orientation(&boundary_simplex(2)).is_some());
        assert!(coherent_orientation(&cyc("{(1:2:4),(1:4:2)}").expand()).is_some());
        // 6-vertex real projective plane
        let rp2 = FacetComplex::new(
            6,
            vec![
                vec![0, 1, 2],
                vec![0, 2, 3],
                vec![0, 3, 4],
                vec![0, 4, 5],
                vec![0, 1, 5],
                vec![1, 2, 4],
                vec![2, 3, 5],
                vec![1, 3, 4],
                vec![2, 4, 5],
                vec![1, 3, 5],
            ],
        );
        assert!(is_closed_surface(&rp2));
        assert_eq!(rp2.euler_characteristic(), 1);
        assert!(coherent_orientation(&rp2).is_none());
    }

    #[test]
    fn collapses() {
        let tet = FacetComplex::new(4, vec![vec![0, 1, 2, 3]]);
        assert_eq!(collapse(&tet).facets().len(), 1);
        assert_eq!(collapse(&tet).dim(), Some(0));
        let circle = FacetComplex::new(4, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]]);
        assert_eq!(collapse(&circle), circle);
        let t0 = cyc("{(1:1:1:4)}").expand();
        let core = collapse(&t0);
        assert_eq!(core.dim(), Some(1));
        assert_eq!(core.euler_characteristic(), 0);
        assert!(is_connected(&core));
    }

    #[test]
    fn solid_torus_certificates() {
        let t0 = cyc("{(1:1:1:4)}").expand();
        assert_eq!(
            solid_torus_certificate(&t0).unwrap(),
            SolidTorusVerdict::Certified
        );
        let tet = FacetComplex::new(4, vec![vec![0, 1, 2, 3]]);
        assert!(!solid_torus_certificate(&tet).unwrap().is_certified());
        assert!(matches!(
            solid_torus_certificate(&boundary_simplex(3)),
            Err(Error::NotApplicable(_))
        ));
    }
}
