//! Integral homology, orientability, neighborliness and edge-path groups.

mod group;
mod snf;

use std::collections::HashMap;
use std::fmt;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::complex::FacetComplex;
use crate::error::{Error, Result};
use crate::topology::{coherent_orientation, is_closed_pseudomanifold, is_connected};

pub use group::{
    abelianization, export_presentation, fundamental_group, parse_presentation, tietze_simplify,
    GroupPresentation, DEFAULT_TIETZE_BUDGET,
};
pub use snf::{smith_normal_form, smith_normal_form_i64, IntegerMatrix};

/// Ranks and torsion coefficients of `H_0, ..., H_d`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HomologyGroups {
    pub betti: Vec<usize>,
    /// Per dimension, the torsion coefficients `>= 2`, each dividing the next.
    pub torsion: Vec<Vec<u64>>,
}

pub(crate) fn format_group(rank: usize, torsion: &[u64]) -> String {
    let mut terms = Vec::new();
    match rank {
        0 => {}
        1 => terms.push("Z".to_string()),
        r => terms.push(format!("Z^{r}")),
    }
    terms.extend(torsion.iter().map(|t| format!("Z_{t}")));
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

impl fmt::Display for HomologyGroups {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let groups: Vec<String> = self
            .betti
            .iter()
            .zip(&self.torsion)
            .map(|(&b, t)| format_group(b, t))
            .collect();
        write!(f, "({})", groups.join(", "))
    }
}

impl HomologyGroups {
    /// Alternating sum of the Betti numbers.
    pub fn euler_characteristic(&self) -> i64 {
        self.betti
            .iter()
            .enumerate()
            .map(|(i, &b)| if i % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }
}

fn face_index(faces: &[Vec<u32>]) -> HashMap<&[u32], usize> {
    faces
        .iter()
        .enumerate()
        .map(|(i, f)| (f.as_slice(), i))
        .collect()
}

fn boundary_from_faces(lower: &[Vec<u32>], upper: &[Vec<u32>]) -> IntegerMatrix {
    let index = face_index(lower);
    let mut m = IntegerMatrix::zeros(lower.len(), upper.len());
    for (c, face) in upper.iter().enumerate() {
        for i in 0..face.len() {
            let mut sub = face.clone();
            sub.remove(i);
            let sign = if i % 2 == 0 { 1 } else { -1 };
            m.set(index[sub.as_slice()], c, sign);
        }
    }
    m
}

/// Matrix of `∂_k` from `k`-chains to `(k-1)`-chains; rows and columns follow the
/// sorted face lists, faces oriented by ascending vertex order.
pub fn boundary_matrix(k: &FacetComplex, dim: usize) -> Result<IntegerMatrix> {
    let top = k.dim().unwrap_or(0);
    if dim == 0 || dim > top {
        return Err(Error::NotApplicable(format!(
            "boundary operator of dimension {dim} on a complex of dimension {top}"
        )));
    }
    Ok(boundary_from_faces(&k.faces(dim - 1), &k.faces(dim)))
}

/// Integral simplicial homology in every dimension up to `dim(K)`.
pub fn homology(k: &FacetComplex) -> HomologyGroups {
    let Some(top) = k.dim() else {
        return HomologyGroups::default();
    };
    let faces: Vec<Vec<Vec<u32>>> = (0..=top).map(|i| k.faces(i)).collect();
    // invariant factors of ∂_i for i = 1..=top; index 0 and top+1 are zero maps
    let mut factors: Vec<Vec<u64>> = vec![Vec::new(); top + 2];
    for i in 1..=top {
        let m = boundary_from_faces(&faces[i - 1], &faces[i]);
        factors[i] = smith_normal_form(&m)
            .iter()
            .map(|x| x.to_u64().expect("torsion coefficient exceeds u64"))
            .collect();
    }
    let mut betti = Vec::with_capacity(top + 1);
    let mut torsion = Vec::with_capacity(top + 1);
    for i in 0..=top {
        betti.push(faces[i].len() - factors[i].len() - factors[i + 1].len());
        torsion.push(factors[i + 1].iter().copied().filter(|&d| d > 1).collect());
    }
    HomologyGroups { betti, torsion }
}

/// Whether a closed connected pseudomanifold admits a coherent orientation.
pub fn is_orientable(k: &FacetComplex) -> Result<bool> {
    if k.is_empty() || !is_closed_pseudomanifold(k)? || !is_connected(k) {
        return Err(Error::NotApplicable(
            "orientability needs a closed connected pseudomanifold".into(),
        ));
    }
    Ok(coherent_orientation(k).is_some())
}

/// Every pair of the `n` vertices spans an edge.
pub fn is_2_neighborly(k: &FacetComplex) -> bool {
    let n = k.n() as usize;
    k.faces(1).len() == n * n.saturating_sub(1) / 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle::CyclicComplex;

    fn expand(s: &str) -> FacetComplex {
        s.parse::<CyclicComplex>().unwrap().expand()
    }

    fn simplex_boundary(d: u32) -> FacetComplex {
        let facets = (0..=d + 1)
            .map(|skip| (0..=d + 1).filter(|&v| v != skip).collect())
            .collect();
        FacetComplex::new(d + 2, facets)
    }

    #[test]
    fn boundary_of_triangle() {
        let k = simplex_boundary(1);
        let m = boundary_matrix(&k, 1).unwrap();
        assert_eq!((m.rows(), m.cols()), (3, 3));
        for c in 0..3 {
            let nz = (0..3).filter(|&r| m.get(r, c) != 0).count();
            assert_eq!(nz, 2);
        }
        assert!(boundary_matrix(&k, 2).is_err());
        assert!(boundary_matrix(&k, 0).is_err());
    }

    #[test]
    fn boundary_squares_to_zero() {
        let k = expand("{(1:1:2:5),(1:1:5:2),(1:2:1:5)}");
        for d in 2..=3 {
            let a = boundary_matrix(&k, d - 1).unwrap();
            let b = boundary_matrix(&k, d).unwrap();
            assert!(a.checked_mul(&b).unwrap().is_zero());
        }
    }

    #[test]
    fn sphere_and_torus() {
        let s3 = simplex_boundary(3);
        let h = homology(&s3);
        assert_eq!(h.betti, vec![1, 0, 0, 1]);
        assert_eq!(h.to_string(), "(Z, 0, 0, Z)");
        let torus = expand("{(1:2:4),(1:4:2)}");
        assert_eq!(homology(&torus).to_string(), "(Z, Z^2, Z)");
    }

    #[test]
    fn projective_plane_torsion() {
        // six-vertex projective plane
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
        let h = homology(&rp2);
        assert_eq!(h.betti, vec![1, 0, 0]);
        assert_eq!(h.torsion, vec![vec![], vec![2], vec![]]);
        assert!(!is_orientable(&rp2).unwrap());
    }

    #[test]
    fn twisted_bundle() {
        let k = expand("{(1:1:2:5),(1:1:5:2),(1:2:1:5)}");
        assert_eq!(homology(&k).to_string(), "(Z, Z, Z_2, 0)");
        assert!(!is_orientable(&k).unwrap());
    }

    #[test]
    fn orientability_and_neighborliness() {
        let s3 = simplex_boundary(3);
        assert!(is_orientable(&s3).unwrap());
        assert!(is_2_neighborly(&s3));
        assert!(is_orientable(&s3.without_facet(&[0, 1, 2, 3])).is_err());
        assert!(!is_2_neighborly(
            &expand("{(1:2:4),(1:4:2)}").disjoint_union(&s3)
        ));
    }

    #[test]
    fn homology_serializes() {
        let h = homology(&simplex_boundary(2));
        let v = serde_json::to_value(&h).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"betti": [1, 0, 1], "torsion": [[], [], []]})
        );
        assert_eq!(h.euler_characteristic(), 2);
    }
}
