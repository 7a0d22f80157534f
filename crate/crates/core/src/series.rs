//! Infinite series of cyclic manifolds obtained by growing difference-cycle entries.
//!
//! A dense series adds `k` to the largest entry of every cycle. A series of order `l`
//! adds `l_i^j * k` to entry `j` of cycle `i`, where the increments of each cycle sum
//! to `l`.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::cycle::{rotated, CyclicComplex, DifferenceCycle};
use crate::enumerate::Registry;
use crate::error::{Error, Result};
use crate::notation;
use crate::topology::{is_combinatorial_manifold, link};

/// Series of order `l`: the base cycles in a fixed rotation plus per-entry increments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesSpec {
    base: Vec<Vec<u32>>,
    n: u32,
    l: u32,
    increments: Vec<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct SeriesSpecJson {
    base: String,
    l: u32,
    increments: Vec<Vec<u32>>,
}

impl SeriesSpec {
    /// `base` entries are taken in the given rotation, since increments are positional.
    pub fn new(base: Vec<Vec<u32>>, l: u32, increments: Vec<Vec<u32>>) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidSpec(msg));
        if base.is_empty() {
            return invalid("series needs at least one cycle".into());
        }
        if l == 0 {
            return invalid("order must be positive".into());
        }
        if base.len() != increments.len() {
            return invalid(format!(
                "{} cycles but {} increment vectors",
                base.len(),
                increments.len()
            ));
        }
        let len = base[0].len();
        let n: u32 = base[0].iter().sum();
        for (i, (c, inc)) in base.iter().zip(&increments).enumerate() {
            DifferenceCycle::new(c)?;
            if c.len() != len || c.iter().sum::<u32>() != n {
                return invalid(format!(
                    "cycle {i} does not match modulus {n} and dimension {}",
                    len - 1
                ));
            }
            if inc.len() != len {
                return invalid(format!(
                    "increment vector {i} has length {}, expected {len}",
                    inc.len()
                ));
            }
            let s: u32 = inc.iter().sum();
            if s != l {
                return invalid(format!("increments of cycle {i} sum to {s}, expected {l}"));
            }
        }
        CyclicComplex::from_parts(&base)?;
        Ok(SeriesSpec {
            base,
            n,
            l,
            increments,
        })
    }

    /// Dense series of a complex: every cycle rotated with a maximal entry last, which
    /// grows by one per step.
    pub fn dense(m: &CyclicComplex) -> Result<Self> {
        let base: Vec<Vec<u32>> = m.cycles().map(|c| c.max_last()).collect();
        let increments = base
            .iter()
            .map(|c| {
                let mut v = vec![0; c.len()];
                v[c.len() - 1] = 1;
                v
            })
            .collect();
        Self::new(base, 1, increments)
    }

    pub fn base(&self) -> &[Vec<u32>] {
        &self.base
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.l
    }

    pub fn increments(&self) -> &[Vec<u32>] {
        &self.increments
    }

    pub fn dim(&self) -> usize {
        self.base[0].len() - 1
    }

    pub fn base_complex(&self) -> CyclicComplex {
        CyclicComplex::from_parts(&self.base).expect("validated on construction")
    }

    /// Entry sequences of the `k`-th member, in the base rotation.
    pub fn member_parts(&self, k: u32) -> Vec<Vec<u32>> {
        self.base
            .iter()
            .zip(&self.increments)
            .map(|(c, inc)| c.iter().zip(inc).map(|(&a, &e)| a + e * k).collect())
            .collect()
    }

    /// The `k`-th member on `n + l k` vertices. Fails if two cycles coincide.
    pub fn member(&self, k: u32) -> Result<CyclicComplex> {
        CyclicComplex::from_parts(&self.member_parts(k))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(SeriesSpecJson {
            base: notation::format_raw_complex(&self.base),
            l: self.l,
            increments: self.increments.clone(),
        })
        .expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: SeriesSpecJson = serde_json::from_str(text)?;
        let base = notation::parse_raw_complex(&raw.base)?
            .into_iter()
            .map(|(_, p)| p)
            .collect();
        Self::new(base, raw.l, raw.increments)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DenseSeriesReport {
    pub complex: String,
    /// Each cycle rotated with a maximal entry last.
    pub rotated: Vec<Vec<u32>>,
    /// `a^d - (a^0 + ... + a^{d-1})` per cycle.
    pub margins: Vec<i64>,
    pub passes: bool,
    /// Passing, and the predecessor obtained by shrinking the maxima is not a manifold.
    pub minimal_start: bool,
}

fn refuse_non_manifold(m: &CyclicComplex) -> Result<()> {
    if m.dim() != 3 {
        return Err(Error::Refused(format!(
            "dense series criterion needs dimension 3, got {}",
            m.dim()
        )));
    }
    if !is_combinatorial_manifold(m)? {
        return Err(Error::Refused(format!(
            "{m} is not a combinatorial 3-manifold: the link of vertex 0 is not a 2-sphere or the complex is disconnected"
        )));
    }
    Ok(())
}

fn margin(parts: &[u32]) -> i64 {
    let (last, rest) = parts.split_last().unwrap();
    *last as i64 - rest.iter().map(|&a| a as i64).sum::<i64>()
}

/// Whether a shifted complex exists and is a combinatorial manifold; colliding or
/// degenerate cycles count as a failure.
fn manifold_or_false(m: Result<CyclicComplex>) -> Result<bool> {
    match m {
        Ok(c) => is_combinatorial_manifold(&c),
        Err(Error::InvalidCycle(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Adds `k` (possibly negative) to the last entry of the lexicographically smallest
/// max-last rotation of every cycle.
pub fn shift_max_last(m: &CyclicComplex, k: i64) -> Result<CyclicComplex> {
    let parts = m
        .cycles()
        .map(|c| {
            let mut p = c.max_last();
            let last = p.len() - 1;
            let v = p[last] as i64 + k;
            if v < 1 {
                return Err(Error::InvalidCycle(format!(
                    "shifting {c} by {k} empties an entry"
                )));
            }
            p[last] = v as u32;
            Ok(p)
        })
        .collect::<Result<Vec<_>>>()?;
    CyclicComplex::from_parts(&parts)
}

/// Evaluates the dense-series criterion on a combinatorial 3-manifold.
pub fn dense_extendable(m: &CyclicComplex) -> Result<DenseSeriesReport> {
    refuse_non_manifold(m)?;
    let rotated: Vec<Vec<u32>> = m.cycles().map(|c| c.max_last()).collect();
    let margins: Vec<i64> = rotated.iter().map(|p| margin(p)).collect();
    let passes = margins.iter().all(|&x| x > 0);
    let minimal_start = passes && !manifold_or_false(shift_max_last(m, -1))?;
    Ok(DenseSeriesReport {
        complex: m.to_string(),
        rotated,
        margins,
        passes,
        minimal_start,
    })
}

/// Member `k` of the dense series of `m`. Refused when some cycle has a repeated
/// maximum, since then the criterion fails and the growing entry is ambiguous.
pub fn extend_dense(m: &CyclicComplex, k: u32) -> Result<CyclicComplex> {
    for c in m.cycles() {
        let max = c.parts().iter().max().unwrap();
        if c.parts().iter().filter(|&a| a == max).count() > 1 {
            return Err(Error::Refused(format!(
                "{c} attains its maximum twice; the criterion fails and the entry to grow is ambiguous"
            )));
        }
    }
    shift_max_last(m, k as i64)
}

/// Walks the dense series of `m` backwards while the predecessor is still a
/// manifold. Returns the (non-positive) shift and the first member.
pub fn minimal_start(m: &CyclicComplex) -> Result<(i64, CyclicComplex)> {
    let report = dense_extendable(m)?;
    if !report.passes {
        return Err(Error::Refused(format!(
            "{m} fails the dense series criterion (margins {:?})",
            report.margins
        )));
    }
    let mut shift = 0i64;
    let mut current = m.clone();
    loop {
        let pred = shift_max_last(&current, -1);
        if !manifold_or_false(pred.clone())? {
            break;
        }
        current = pred?;
        shift -= 1;
    }
    if current.n() % 2 == 0 {
        return Err(Error::Internal(format!(
            "minimal start {current} of a dense series has an even number of vertices"
        )));
    }
    Ok((shift, current))
}

/// Exact check of `(l_i^j + 1) n > a_i^j (l + 1) > l_i^j n` for all entries.
pub fn order_l_admissible(s: &SeriesSpec) -> bool {
    let (n, l1) = (s.n as u64, s.l as u64 + 1);
    s.base.iter().zip(&s.increments).all(|(c, inc)| {
        c.iter().zip(inc).all(|(&a, &e)| {
            let (a, e) = (a as u64, e as u64);
            (e + 1) * n > a * l1 && a * l1 > e * n
        })
    })
}

pub fn extend_order_l(s: &SeriesSpec, k: u32) -> Result<CyclicComplex> {
    s.member(k)
}

/// Vertex relabelling carrying the link of 0 in the base onto the link of 0 in member
/// `k` for admissible specs: `v -> v + floor((l + 1) v / n) k`.
pub fn link_relabel(s: &SeriesSpec, k: u32) -> impl Fn(u32) -> u32 {
    let (n, l1) = (s.n as u64, s.l as u64 + 1);
    move |v| v + ((l1 * v as u64 / n) as u32) * k
}

/// Whether [`link_relabel`] maps the link of 0 in the base facet-for-facet onto
/// the link of 0 in member `k`.
pub fn link_relabel_holds(s: &SeriesSpec, k: u32) -> Result<bool> {
    let base = link(&s.base_complex().expand(), 0)?;
    let member = s.member(k)?;
    let target = link(&member.expand(), 0)?;
    Ok(base.relabel(member.n(), link_relabel(s, k)) == target)
}

/// A dense series containing all but finitely many members of an order-`l` series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitReduction {
    pub dense: SeriesSpec,
    /// `l * member(k0 + t) = dense.member(l * t)` for all `t >= 0`.
    pub k0: u32,
}

/// Images `l * s_t - L_t n` of the generator vertices under multiplication by `l`;
/// modulo `n + l k` these are the multiplied vertices for every `k`.
fn scaled_offsets(parts: &[u32], inc: &[u32], n: u32, l: u32) -> Vec<i64> {
    let (mut s, mut big_l) = (0i64, 0i64);
    let mut out = Vec::with_capacity(parts.len());
    for (&a, &e) in parts.iter().zip(inc) {
        out.push(l as i64 * s - big_l * n as i64);
        s += a as i64;
        big_l += e as i64;
    }
    out
}

/// Sorted gaps of the multiplied generator on `m` vertices, starting at vertex 0.
fn scaled_gaps(offsets: &[i64], m: i64) -> Vec<u32> {
    let mut v: Vec<i64> = offsets.iter().map(|c| c.rem_euclid(m)).collect();
    v.sort_unstable();
    let mut gaps: Vec<u32> = v.windows(2).map(|w| (w[1] - w[0]) as u32).collect();
    gaps.push((m - v[v.len() - 1] + v[0]) as u32);
    gaps
}

/// Multiplies an order-`l` series by `l` and rearranges it into a dense series.
pub fn reduce_by_unit(s: &SeriesSpec) -> Result<UnitReduction> {
    if s.l == 1 {
        return Ok(UnitReduction {
            dense: s.clone(),
            k0: 0,
        });
    }
    if s.l.gcd(&s.n) != 1 {
        return Err(Error::NotApplicable(format!(
            "order {} is not a unit modulo {}",
            s.l, s.n
        )));
    }
    let offsets: Vec<Vec<i64>> = s
        .base
        .iter()
        .zip(&s.increments)
        .map(|(c, inc)| scaled_offsets(c, inc, s.n, s.l))
        .collect();
    // once n + l k exceeds the spread of the offsets, the cyclic order is frozen
    let lo = offsets.iter().flatten().copied().min().unwrap();
    let hi = offsets.iter().flatten().copied().max().unwrap();
    let spread = hi - lo;
    let mut k0 = 0u32;
    while (s.n as i64 + s.l as i64 * k0 as i64) <= spread {
        k0 += 1;
    }
    let m0 = s.n as i64 + s.l as i64 * k0 as i64;
    let mut base = Vec::new();
    for off in &offsets {
        let g0 = scaled_gaps(off, m0);
        let g1 = scaled_gaps(off, m0 + s.l as i64);
        let grow: Vec<usize> = (0..g0.len()).filter(|&i| g0[i] != g1[i]).collect();
        if grow.len() != 1 || g1[grow[0]] != g0[grow[0]] + s.l {
            return Err(Error::Internal(format!(
                "multiplied gaps {g0:?} -> {g1:?} do not grow in a single entry"
            )));
        }
        base.push(rotated(&g0, (grow[0] + 1) % g0.len()));
    }
    let increments = base
        .iter()
        .map(|c| {
            let mut v = vec![0; c.len()];
            v[c.len() - 1] = 1;
            v
        })
        .collect();
    let dense = SeriesSpec::new(base, 1, increments)?;
    for t in 0..3 {
        let lhs = s.member(k0 + t)?.multiply(s.l)?;
        let rhs = dense.member(s.l * t)?;
        if lhs != rhs {
            return Err(Error::Internal(format!(
                "multiplied member {} is {lhs}, dense member is {rhs}",
                k0 + t
            )));
        }
    }
    Ok(UnitReduction { dense, k0 })
}

/// A classified complex starting a dense series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DenseSeriesStart {
    pub n: u32,
    /// Registry index of the first member of its isomorphism class that starts a series.
    pub index: usize,
    pub complex: CyclicComplex,
    pub margins: Vec<i64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DenseSeriesCensus {
    /// Isomorphism classes containing a passing minimal start.
    pub count: usize,
    pub starts: Vec<DenseSeriesStart>,
    /// Vertex counts without stored classification data.
    pub missing: Vec<u32>,
}

/// Counts combinatorially distinct minimal starts of dense series among the
/// classified complexes with `5 <= n <= n_max`.
pub fn enumerate_dense_series(registry: &Registry, n_max: u32) -> Result<DenseSeriesCensus> {
    let mut census = DenseSeriesCensus::default();
    for n in 5..=n_max {
        if !registry.has(n) {
            census.missing.push(n);
            continue;
        }
        let mut seen = BTreeSet::new();
        for e in registry.load(n)? {
            if seen.contains(&e.iso_class) {
                continue;
            }
            let complex = e.complex()?;
            let report = dense_extendable(&complex)?;
            if report.minimal_start {
                seen.insert(e.iso_class);
                census.starts.push(DenseSeriesStart {
                    n,
                    index: e.index,
                    complex,
                    margins: report.margins,
                });
            }
        }
    }
    census.count = census.starts.len();
    Ok(census)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(s: &str) -> CyclicComplex {
        s.parse().unwrap()
    }

    const BUNDLE9: &str = "{(1:1:2:5),(1:1:5:2),(1:2:1:5)}";

    #[test]
    fn criterion_on_small_complexes() {
        let r = dense_extendable(&cyc(BUNDLE9)).unwrap();
        assert!(r.passes);
        assert_eq!(r.margins, vec![1, 1, 1]);
        assert!(r.minimal_start);
        let r = dense_extendable(&cyc("{(1:1:1:2)}")).unwrap();
        assert!(!r.passes);
        assert_eq!(r.margins, vec![-1]);
        assert!(matches!(
            dense_extendable(&cyc("{(1:2:4:7)}")),
            Err(Error::Refused(_))
        ));
    }

    #[test]
    fn extension_grows_the_maximum() {
        let m = cyc(BUNDLE9);
        assert_eq!(
            extend_dense(&m, 1).unwrap(),
            cyc("{(1:1:2:6),(1:1:6:2),(1:2:1:6)}")
        );
        assert_eq!(extend_dense(&m, 0).unwrap(), m);
        assert!(matches!(
            extend_dense(&cyc("{(2:5:2:5)}"), 1),
            Err(Error::Refused(_))
        ));
    }

    #[test]
    fn failing_sphere_breaks_somewhere() {
        let m = cyc("{(1:1:1:2)}");
        let broken =
            (0..=5).any(|k| !is_combinatorial_manifold(&extend_dense(&m, k).unwrap()).unwrap());
        assert!(broken);
    }

    #[test]
    fn minimal_start_walks_back() {
        let (shift, start) = minimal_start(&cyc("{(1:1:2:6),(1:1:6:2),(1:2:1:6)}")).unwrap();
        assert_eq!(shift, -1);
        assert_eq!(start, cyc(BUNDLE9));
        assert_eq!(minimal_start(&cyc(BUNDLE9)).unwrap(), (0, cyc(BUNDLE9)));
        assert!(matches!(
            minimal_start(&cyc("{(1:1:1:2)}")),
            Err(Error::Refused(_))
        ));
    }

    #[test]
    fn order_one_admissibility() {
        let single = SeriesSpec::new(vec![vec![1, 1, 2, 5]], 1, vec![vec![0, 0, 0, 1]]).unwrap();
        assert!(order_l_admissible(&single));
        let full = SeriesSpec::dense(&cyc(BUNDLE9)).unwrap();
        assert!(order_l_admissible(&full));
        assert_eq!(
            extend_order_l(&full, 1).unwrap(),
            cyc("{(1:1:2:6),(1:1:6:2),(1:2:1:6)}")
        );
        assert_eq!(extend_order_l(&full, 0).unwrap(), cyc(BUNDLE9));
    }

    #[test]
    fn lens_cycle_is_not_admissible() {
        let s = SeriesSpec::new(vec![vec![1, 1, 1, 11]], 4, vec![vec![0, 0, 0, 4]]).unwrap();
        assert!(!order_l_admissible(&s));
    }

    #[test]
    fn invalid_specs() {
        let e = SeriesSpec::new(vec![vec![1, 1, 2, 5]], 1, vec![vec![0, 0, 0, 2]]);
        assert!(matches!(e, Err(Error::InvalidSpec(_))));
        let e = SeriesSpec::new(vec![vec![1, 1, 2, 5]], 2, vec![vec![0, 0, 0, 3]]);
        assert!(matches!(e, Err(Error::InvalidSpec(_))));
        let e = SeriesSpec::new(vec![vec![1, 1, 2, 5]], 1, vec![vec![0, 1]]);
        assert!(matches!(e, Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn json_round_trip() {
        let s = SeriesSpec::dense(&cyc(BUNDLE9)).unwrap();
        let text = s.to_json().to_string();
        assert_eq!(SeriesSpec::from_json(&text).unwrap(), s);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["l"], 1);
        assert_eq!(v["base"], "{(1:1:2:5),(2:1:1:5),(1:2:1:5)}");
    }

    #[test]
    fn relabel_on_dense_series() {
        let s = SeriesSpec::dense(&cyc(BUNDLE9)).unwrap();
        for k in 0..4 {
            assert!(link_relabel_holds(&s, k).unwrap());
        }
    }

    #[test]
    fn unit_reduction_trivial_and_refused() {
        let s = SeriesSpec::dense(&cyc(BUNDLE9)).unwrap();
        assert_eq!(
            reduce_by_unit(&s).unwrap(),
            UnitReduction {
                dense: s.clone(),
                k0: 0
            }
        );
        let even = SeriesSpec::new(vec![vec![1, 1, 1, 3]], 2, vec![vec![0, 0, 0, 2]]).unwrap();
        assert!(matches!(
            reduce_by_unit(&even),
            Err(Error::NotApplicable(_))
        ));
    }
}
