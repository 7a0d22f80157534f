use std::collections::BTreeSet;

use diffcyc::enumerate::{are_isomorphic, classify, Registry};
use diffcyc::series::{
    enumerate_dense_series, extend_dense, link_relabel_holds, minimal_start, order_l_admissible,
    reduce_by_unit, SeriesSpec,
};
use diffcyc::topology::is_combinatorial_manifold;
use diffcyc::CyclicComplex;

const BUNDLE: &str = "{(1:1:2:5),(1:1:5:2),(1:2:1:5)}";

fn c(s: &str) -> CyclicComplex {
    s.parse().unwrap()
}

/// Facets of `m` under `v -> l v mod n`.
fn scaled_facets(m: &CyclicComplex, l: u32) -> BTreeSet<Vec<u32>> {
    let n = m.n();
    m.expand()
        .facets()
        .iter()
        .map(|f| {
            let mut g: Vec<u32> = f.iter().map(|&v| v * l % n).collect();
            g.sort_unstable();
            g
        })
        .collect()
}

#[test]
fn order_three_series_reduces_to_a_dense_series() {
    let s = SeriesSpec::new(vec![vec![1, 3, 3, 3]], 3, vec![vec![0, 1, 1, 1]]).unwrap();
    assert!(order_l_admissible(&s));
    assert_eq!(s.member(1).unwrap(), c("{(1:4:4:4)}"));
    for k in 1..4 {
        assert!(link_relabel_holds(&s, k).unwrap());
    }
    let r = reduce_by_unit(&s).unwrap();
    assert_eq!(r.dense.order(), 1);
    for t in 0..6 {
        let member = s.member(r.k0 + t).unwrap();
        let dense = r.dense.member(3 * t).unwrap();
        assert_eq!(member.n(), dense.n());
        let dense_facets: BTreeSet<Vec<u32>> = dense.expand().facets().iter().cloned().collect();
        assert_eq!(scaled_facets(&member, 3), dense_facets, "t = {t}");
        assert_eq!(
            is_combinatorial_manifold(&member).unwrap(),
            is_combinatorial_manifold(&dense).unwrap()
        );
    }
}

#[test]
fn extension_and_minimal_start_are_inverse() {
    let m = c(BUNDLE);
    for k in 1..6 {
        let grown = extend_dense(&m, k).unwrap();
        assert_eq!(grown.n(), 9 + k);
        assert!(is_combinatorial_manifold(&grown).unwrap());
        assert_eq!(minimal_start(&grown).unwrap(), (-(k as i64), m.clone()));
    }
}

#[test]
fn dense_series_census_from_a_registry() {
    let dir = tempfile::tempdir().unwrap();
    let reg = Registry::new(dir.path());
    let empty = enumerate_dense_series(&reg, 9).unwrap();
    assert_eq!(empty.count, 0);
    assert_eq!(empty.missing, vec![5, 6, 7, 8, 9]);

    for n in 5..=9 {
        reg.store(&classify(n).unwrap()).unwrap();
    }
    assert_eq!(enumerate_dense_series(&reg, 5).unwrap().count, 0);
    let census = enumerate_dense_series(&reg, 9).unwrap();
    assert!(census.missing.is_empty());
    assert_eq!(census.count, census.starts.len());
    let bundle = c(BUNDLE).expand();
    assert!(census
        .starts
        .iter()
        .any(|s| s.n == 9 && are_isomorphic(&s.complex.expand(), &bundle)));
    assert!(census.starts.iter().all(|s| s.n % 2 == 1));
}
