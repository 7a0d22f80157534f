//! Combinatorial isomorphism of explicit complexes.
//!
//! Candidates are first compared by a cheap [`Fingerprint`]. Two complexes with the
//! same fingerprint are then compared by a backtracking search over vertex labels
//! in breadth-first order, checking edge degrees against the labels already fixed
//! and every triangle and facet as soon as all its vertices are labelled.

use std::collections::{HashSet, VecDeque};

use serde::Serialize;

use crate::complex::{FVector, FacetComplex};
use crate::invariants::HomologyGroups;
use crate::topology::link;

/// Invariants that agree on isomorphic complexes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Fingerprint {
    pub fvector: FVector,
    pub homology: HomologyGroups,
    /// Sorted number of facets around each edge.
    pub edge_degrees: Vec<usize>,
    /// Sorted f-vectors of the vertex links.
    pub link_fvectors: Vec<FVector>,
}

impl Fingerprint {
    pub fn new(k: &FacetComplex, homology: HomologyGroups) -> Self {
        let mut edge_degrees: Vec<usize> = k.face_degrees(1).into_values().collect();
        edge_degrees.sort_unstable();
        let mut link_fvectors: Vec<FVector> = k
            .vertices()
            .into_iter()
            .map(|v| link(k, v).expect("vertex of the complex").f_vector())
            .collect();
        link_fvectors.sort();
        Fingerprint {
            fvector: k.f_vector(),
            homology,
            edge_degrees,
            link_fvectors,
        }
    }
}

struct Side {
    /// `adj[u][v]`: facets containing the edge `uv`, zero when it is not an edge.
    adj: Vec<Vec<u32>>,
    /// `(graph degree, facet degree)` per vertex.
    signature: Vec<(usize, usize)>,
}

impl Side {
    fn new(k: &FacetComplex) -> Self {
        let n = k.n() as usize;
        let mut adj = vec![vec![0u32; n]; n];
        for (e, d) in k.face_degrees(1) {
            let (a, b) = (e[0] as usize, e[1] as usize);
            adj[a][b] = d as u32;
            adj[b][a] = d as u32;
        }
        let mut facet_deg = vec![0usize; n];
        for f in k.facets() {
            for &v in f {
                facet_deg[v as usize] += 1;
            }
        }
        let signature = (0..n)
            .map(|v| (adj[v].iter().filter(|&&d| d > 0).count(), facet_deg[v]))
            .collect();
        Side { adj, signature }
    }
}

/// Vertices in breadth-first order from `root`, then any unreached ones.
fn bfs_order(k: &FacetComplex, adj: &[Vec<u32>], root: u32) -> Vec<u32> {
    let verts = k.vertices();
    let mut seen = vec![false; k.n() as usize];
    let mut order = Vec::with_capacity(verts.len());
    for start in std::iter::once(root).chain(verts.iter().copied()) {
        if seen[start as usize] {
            continue;
        }
        seen[start as usize] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for (w, &d) in adj[u as usize].iter().enumerate() {
                if d > 0 && !seen[w] {
                    seen[w] = true;
                    queue.push_back(w as u32);
                }
            }
        }
    }
    order
}

struct Matcher<'a> {
    a: &'a Side,
    b: &'a Side,
    order: Vec<u32>,
    /// Per position, the triangles and facets of `a` completed by that vertex.
    closing: Vec<Vec<Vec<u32>>>,
    b_faces: HashSet<Vec<u32>>,
    b_vertices: Vec<u32>,
    map: Vec<Option<u32>>,
    used: Vec<bool>,
}

impl Matcher<'_> {
    fn extend(&mut self, pos: usize, first: Option<u32>) -> bool {
        if pos == self.order.len() {
            return true;
        }
        let v = self.order[pos] as usize;
        let candidates: Vec<u32> = match (pos, first) {
            (0, Some(w)) => vec![w],
            _ => self.b_vertices.clone(),
        };
        for w in candidates {
            if self.used[w as usize] || self.a.signature[v] != self.b.signature[w as usize] {
                continue;
            }
            let edges_ok = self.order[..pos].iter().all(|&u| {
                let image = self.map[u as usize].unwrap() as usize;
                self.a.adj[v][u as usize] == self.b.adj[w as usize][image]
            });
            if !edges_ok {
                continue;
            }
            self.map[v] = Some(w);
            let faces_ok = self.closing[pos].iter().all(|face| {
                let mut image: Vec<u32> = face
                    .iter()
                    .map(|&x| self.map[x as usize].unwrap())
                    .collect();
                image.sort_unstable();
                self.b_faces.contains(&image)
            });
            if faces_ok {
                self.used[w as usize] = true;
                if self.extend(pos + 1, first) {
                    return true;
                }
                self.used[w as usize] = false;
            }
            self.map[v] = None;
        }
        false
    }
}

fn matcher_search(a: &FacetComplex, b: &FacetComplex, first: Option<u32>) -> Option<Vec<u32>> {
    if a.n() != b.n()
        || a.f_vector() != b.f_vector()
        || a.vertices().len() != b.vertices().len()
        || a.dim() != b.dim()
    {
        return None;
    }
    let Some(d) = a.dim() else {
        return Some((0..a.n()).collect());
    };
    let (sa, sb) = (Side::new(a), Side::new(b));
    let root = a.vertices()[0];
    let order = bfs_order(a, &sa.adj, root);
    let mut position = vec![usize::MAX; a.n() as usize];
    for (i, &v) in order.iter().enumerate() {
        position[v as usize] = i;
    }
    let mut closing = vec![Vec::new(); order.len()];
    let mut b_faces = HashSet::new();
    let dims: Vec<usize> = if d >= 2 { vec![2, d] } else { vec![d] };
    for &k in &dims {
        for face in a.faces(k) {
            let last = face.iter().map(|&x| position[x as usize]).max().unwrap();
            closing[last].push(face);
        }
        b_faces.extend(b.faces(k));
    }
    let mut m = Matcher {
        a: &sa,
        b: &sb,
        order,
        closing,
        b_faces,
        b_vertices: b.vertices(),
        map: vec![None; a.n() as usize],
        used: vec![false; b.n() as usize],
    };
    if !m.extend(0, first) {
        return None;
    }
    Some((0..a.n()).map(|v| m.map[v as usize].unwrap_or(v)).collect())
}

/// A vertex map `sigma` (indexed by the vertices of `a`) taking the facets of `a`
/// exactly onto the facets of `b`, if one exists.
pub fn find_isomorphism(a: &FacetComplex, b: &FacetComplex) -> Option<Vec<u32>> {
    matcher_search(a, b, None)
}

/// Isomorphism test. When both complexes are invariant under `v -> v + 1 mod n`,
/// any isomorphism can be composed with a shift, so the first vertex of `a` is only
/// tried against the first vertex of `b`.
pub fn are_isomorphic(a: &FacetComplex, b: &FacetComplex) -> bool {
    if is_shift_invariant(a) && is_shift_invariant(b) && a.vertices().len() == a.n() as usize {
        matcher_search(a, b, Some(b.vertices()[0])).is_some()
    } else {
        find_isomorphism(a, b).is_some()
    }
}

fn is_shift_invariant(k: &FacetComplex) -> bool {
    let shifted = k.relabel(k.n(), |v| (v + 1) % k.n());
    shifted.facets() == k.facets()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle::CyclicComplex;

    fn expand(s: &str) -> FacetComplex {
        s.parse::<CyclicComplex>().unwrap().expand()
    }

    fn apply(k: &FacetComplex, sigma: &[u32]) -> FacetComplex {
        k.relabel(k.n(), |v| sigma[v as usize])
    }

    #[test]
    fn multiples_are_isomorphic() {
        let a: CyclicComplex = "{(1:1:2:5),(1:1:5:2),(1:2:1:5)}".parse().unwrap();
        let b = a.multiply(2).unwrap();
        let (ka, kb) = (a.expand(), b.expand());
        let sigma = find_isomorphism(&ka, &kb).unwrap();
        assert_eq!(apply(&ka, &sigma), kb);
        assert!(are_isomorphic(&ka, &kb));
    }

    #[test]
    fn relabelled_copy_is_found() {
        let a = expand("{(1:1:1:5),(1:2:2:3)}");
        // a fixed non-affine permutation of 8 vertices
        let perm = [3, 7, 0, 5, 1, 6, 2, 4];
        let b = apply(&a, &perm);
        let sigma = find_isomorphism(&a, &b).unwrap();
        assert_eq!(apply(&a, &sigma), b);
    }

    #[test]
    fn different_complexes_are_not() {
        let a = expand("{(1:1:2:5),(1:1:5:2),(1:2:1:5)}");
        let b = expand("{(1:1:1:6),(1:2:3:3)}");
        assert!(!are_isomorphic(&a, &b));
        assert!(find_isomorphism(&a, &b).is_none());
    }

    #[test]
    fn fingerprint_separates_by_homology() {
        let a = expand("{(1:1:1:2)}");
        let h = crate::invariants::homology(&a);
        let fp = Fingerprint::new(&a, h.clone());
        assert_eq!(fp.fvector.0, vec![5, 10, 10, 5]);
        assert_eq!(fp.edge_degrees, vec![3; 10]);
        assert_eq!(fp.link_fvectors.len(), 5);
        assert_ne!(fp, Fingerprint::new(&a, HomologyGroups::default()));
    }
}
