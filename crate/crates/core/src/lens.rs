//! The neighborly lens-space family `L_k` on `14 + 4k` vertices and its
//! Heegaard-splitting checks.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::Serialize;

use crate::cycle::{inverse_mod, CyclicComplex, DifferenceCycle};
use crate::error::{Error, Result};
use crate::invariants::{homology, is_2_neighborly, HomologyGroups};
use crate::slicing::{parity_class, slicing, SlicingFVector, SurfaceType};
use crate::topology::{is_combinatorial_manifold, solid_torus_certificate, span};

/// The 18-vertex complex of type `L(5,1)`.
pub const C18: &str =
    "{(1:1:1:15),(1:2:5:10),(1:5:2:10),(1:5:10:2),(2:5:2:9),(2:6:4:6),(2:7:2:7),(4:4:4:6)}";

/// The 22-vertex complex of type `L(7,1)`.
pub const D22: &str = "{(1:1:1:19),(1:2:5:14),(1:7:12:2),(2:5:2:13),(2:7:2:11),(2:8:4:8),(2:9:2:9),(2:12:3:5),(4:6:4:8),(4:6:6:6)}";

fn cycle(parts: &[u32]) -> DifferenceCycle {
    DifferenceCycle::new(parts).expect("positive entries")
}

/// `L_k`: four fixed cycles plus the pairs `(2:5+2i:2:5+4k-2i)`, `(4:2+2i:4:4+4k-2i)`
/// for `i = 0..=k`.
pub fn lens_series(k: u32) -> CyclicComplex {
    let n = 14 + 4 * k;
    let mut cycles = vec![
        cycle(&[1, 1, 1, 11 + 4 * k]),
        cycle(&[1, 2, 4, 7 + 4 * k]),
        cycle(&[1, 4, 2, 7 + 4 * k]),
        cycle(&[1, 4, 7 + 4 * k, 2]),
    ];
    for i in 0..=k {
        cycles.push(cycle(&[2, 5 + 2 * i, 2, 5 + 4 * k - 2 * i]));
        cycles.push(cycle(&[4, 2 + 2 * i, 4, 4 + 4 * k - 2 * i]));
    }
    CyclicComplex::new(n, 3, cycles).expect("all cycles sum to 14 + 4k")
}

/// Closed-form f-vector of the odd/even slicing of `L_k`.
pub fn slicing_formula(k: u32) -> SlicingFVector {
    let k = k as usize;
    SlicingFVector {
        vertices: 4 * k * k + 28 * k + 49,
        edges: 8 * k * k + 60 * k + 112,
        triangles: 8 * k + 28,
        quadrilaterals: 4 * k * k + 24 * k + 35,
    }
}

/// `(k+2)^2 - 1`, the order of `H_1(L_k)`.
pub fn h1_order(k: u32) -> u64 {
    let k = k as u64;
    (k + 2) * (k + 2) - 1
}

/// Outcome of a named check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LensReport {
    pub label: String,
    pub n: u32,
    pub complex: String,
    pub homology: HomologyGroups,
    pub slicing_fvector: SlicingFVector,
    pub surface: Option<SurfaceType>,
    pub checks: Vec<Check>,
}

impl LensReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

/// Shared Heegaard checks: manifold, solid-torus spans, torus slicing and `H_1`.
fn heegaard_report(label: String, c: &CyclicComplex, expected_h1: u64) -> Result<LensReport> {
    let n = c.n();
    let k = c.expand();
    let mut checks = vec![check(
        "manifold",
        is_combinatorial_manifold(c)?,
        "link of vertex 0 is a 2-sphere and the complex is connected",
    )];
    for (name, odd) in [
        ("even span solid torus", false),
        ("odd span solid torus", true),
    ] {
        let verdict = solid_torus_certificate(&span(&k, &parity_class(n, odd)))?;
        let detail = match &verdict {
            crate::topology::SolidTorusVerdict::Certified => "certified".to_string(),
            crate::topology::SolidTorusVerdict::Inconclusive(why) => why.clone(),
        };
        checks.push(check(name, verdict.is_certified(), detail));
    }
    let s = slicing(&k, &parity_class(n, true))?;
    let f = s.f_vector();
    let surface = s.surface_type().ok();
    checks.push(check(
        "slicing is a torus",
        surface
            == Some(SurfaceType {
                orientable: true,
                genus: 1,
            })
            && s.is_connected(),
        format!(
            "{}, Euler characteristic {}",
            match surface {
                Some(t) if t.orientable => format!("orientable genus {}", t.genus),
                Some(t) => format!("non-orientable genus {}", t.genus),
                None => "not a closed surface".into(),
            },
            f.euler_characteristic()
        ),
    ));
    let h = homology(&k);
    let h1_ok = h.betti == [1, 0, 0, 1]
        && h.torsion[1] == [expected_h1]
        && h.torsion[0].is_empty()
        && h.torsion[2].is_empty()
        && h.torsion[3].is_empty();
    checks.push(check(
        "homology",
        h1_ok,
        format!("{h}, expected (Z, Z_{expected_h1}, 0, Z)"),
    ));
    Ok(LensReport {
        label,
        n,
        complex: c.to_string(),
        homology: h,
        slicing_fvector: f,
        surface,
        checks,
    })
}

/// All checks on `L_k`, including neighborliness and the slicing f-vector formula.
pub fn lens_member_report(k: u32) -> Result<LensReport> {
    let c = lens_series(k);
    let mut report = heegaard_report(format!("L_{k}"), &c, h1_order(k))?;
    report.checks.insert(
        1,
        check(
            "2-neighborly",
            is_2_neighborly(&c.expand()),
            "every vertex pair spans an edge",
        ),
    );
    let expected = slicing_formula(k);
    report.checks.push(check(
        "slicing f-vector",
        report.slicing_fvector == expected,
        format!("{}, formula {expected}", report.slicing_fvector),
    ));
    Ok(report)
}

fn fail_on_report(report: LensReport) -> Result<LensReport> {
    if report.passed() {
        return Ok(report);
    }
    let msgs: Vec<String> = report
        .failures()
        .iter()
        .map(|c| format!("{}: {}", c.name, c.detail))
        .collect();
    Err(Error::Internal(format!(
        "{} failed: {}",
        report.label,
        msgs.join("; ")
    )))
}

/// Like [`lens_member_report`] but failing with the list of violated checks.
pub fn verify_lens_member(k: u32) -> Result<LensReport> {
    fail_on_report(lens_member_report(k)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LensFixture {
    C18,
    D22,
}

impl LensFixture {
    pub fn complex(self) -> CyclicComplex {
        match self {
            LensFixture::C18 => C18,
            LensFixture::D22 => D22,
        }
        .parse()
        .expect("fixture parses")
    }

    pub fn expected_h1(self) -> u64 {
        match self {
            LensFixture::C18 => 5,
            LensFixture::D22 => 7,
        }
    }
}

impl fmt::Display for LensFixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LensFixture::C18 => "C18",
            LensFixture::D22 => "D22",
        })
    }
}

impl FromStr for LensFixture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "C18" | "C" => Ok(LensFixture::C18),
            "D22" | "D" => Ok(LensFixture::D22),
            _ => Err(Error::NotApplicable(format!(
                "unknown fixture {s}, expected C18 or D22"
            ))),
        }
    }
}

pub fn fixture_report(which: LensFixture) -> Result<LensReport> {
    heegaard_report(which.to_string(), &which.complex(), which.expected_h1())
}

pub fn verify_fixture(which: LensFixture) -> Result<LensReport> {
    fail_on_report(fixture_report(which)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindingData {
    pub k: u32,
    /// Grid vector of the transported curve.
    pub grid: (i64, i64),
    pub alpha: (i64, i64),
    pub beta: (i64, i64),
    pub q: i64,
    pub p: i64,
}

/// Solves `q alpha + p beta = grid` exactly for `alpha = (k+2, -1)`,
/// `beta = (k-1, -3)`, `grid = (2k^2+8k+5, 2k^2+9k+8)`.
pub fn winding_solve(k: u32) -> Result<WindingData> {
    let k = k as i64;
    let alpha = (k + 2, -1);
    let beta = (k - 1, -3);
    let grid = (2 * k * k + 8 * k + 5, 2 * k * k + 9 * k + 8);
    // first row is the rightward component, second row the downward one
    let det = alpha.0 * beta.1 - beta.0 * alpha.1;
    if det == 0 {
        return Err(Error::Internal(format!(
            "singular winding system at k = {k}"
        )));
    }
    let q_num = grid.0 * beta.1 - beta.0 * grid.1;
    let p_num = alpha.0 * grid.1 - grid.0 * alpha.1;
    if q_num % det != 0 || p_num % det != 0 {
        return Err(Error::Internal(format!(
            "winding system at k = {k} has no integer solution"
        )));
    }
    Ok(WindingData {
        k: k as u32,
        grid,
        alpha,
        beta,
        q: q_num / det,
        p: p_num / det,
    })
}

/// Segment counts `(diagonal, down)` of the transported curve. With a diagonal step
/// read as `(1, 1)` and a down step as `(0, 1)` they add up to the grid vector.
pub fn segment_census(k: u32) -> (u64, u64) {
    let k = k as u64;
    ((k + 2) * (2 * k + 2) + 2 * k + 1, k + 3)
}

/// Lens space parameters in normalized form: `p >= 1` and `q` the smallest
/// positive representative of `{±q, ±q^{-1}} mod p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LensParams {
    pub p: u64,
    pub q: u64,
}

fn reduce_coprime(p: i64, q: i64) -> Result<(u64, u64)> {
    if p == 0 || q.gcd(&p) != 1 {
        return Err(Error::InvalidLensParams { p, q });
    }
    let m = p.unsigned_abs();
    Ok((m, q.rem_euclid(m as i64) as u64))
}

fn orbit(m: u64, q: u64) -> Vec<u64> {
    if m == 1 {
        return vec![0];
    }
    let inv = inverse_mod(q as u32, m as u32).expect("coprime") as u64;
    vec![q, (m - q) % m, inv, (m - inv) % m]
}

impl LensParams {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        let (m, r) = reduce_coprime(p, q)?;
        let q = orbit(m, r).into_iter().min().unwrap();
        Ok(LensParams { p: m, q })
    }
}

impl fmt::Display for LensParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({},{})", self.p, self.q)
    }
}

/// `L(p,q1) ≅ L(p,q2)`, i.e. `q1 ≡ ±q2^{±1} mod p`.
pub fn lens_equivalent(p: i64, q1: i64, q2: i64) -> Result<bool> {
    let (m, a) = reduce_coprime(p, q1)?;
    let (_, b) = reduce_coprime(p, q2)?;
    Ok(orbit(m, b).contains(&a))
}

/// Lens type of `L_k` from the winding solution, checked against `L((k+2)^2-1, k+2)`.
pub fn lens_type_of_series(k: u32) -> Result<LensParams> {
    let w = winding_solve(k)?;
    let (p, q) = (w.p.abs(), w.q);
    if !lens_equivalent(p, q, k as i64 + 2)? {
        return Err(Error::Internal(format!(
            "L({p},{q}) is not equivalent to L({p},{})",
            k + 2
        )));
    }
    LensParams::new(p, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_sizes() {
        for k in 0..4 {
            let c = lens_series(k);
            assert_eq!(c.n(), 14 + 4 * k);
            assert_eq!(c.len() as u32, 4 + 2 * (k + 1));
        }
    }

    #[test]
    fn winding_closed_form() {
        let w = winding_solve(0).unwrap();
        assert_eq!((w.q, w.p), (1, -3));
        assert_eq!(w.grid, (5, 8));
        let w = winding_solve(1).unwrap();
        assert_eq!((w.q, w.p), (5, -8));
    }

    #[test]
    fn census_adds_up() {
        for k in 0..20 {
            let (diag, down) = segment_census(k);
            let w = winding_solve(k).unwrap();
            assert_eq!((diag as i64, (diag + down) as i64), w.grid);
        }
        assert_eq!(segment_census(0), (5, 3));
        assert_eq!(segment_census(1), (15, 4));
    }

    #[test]
    fn lens_equivalence() {
        assert!(lens_equivalent(5, 4, 1).unwrap());
        assert!(lens_equivalent(-5, 4, 1).unwrap());
        assert!(lens_equivalent(7, -1, 1).unwrap());
        assert!(!lens_equivalent(7, 2, 1).unwrap());
        assert!(matches!(
            lens_equivalent(6, 2, 1),
            Err(Error::InvalidLensParams { .. })
        ));
        assert!(lens_equivalent(0, 1, 1).is_err());
    }

    #[test]
    fn series_types() {
        assert_eq!(lens_type_of_series(0).unwrap().to_string(), "L(3,1)");
        assert_eq!(lens_type_of_series(1).unwrap().to_string(), "L(8,3)");
        assert_eq!(lens_type_of_series(2).unwrap().to_string(), "L(15,4)");
        assert_eq!(
            LensParams::new(-5, 4).unwrap(),
            LensParams::new(5, 1).unwrap()
        );
    }

    #[test]
    fn fixture_names() {
        assert_eq!("c18".parse::<LensFixture>().unwrap(), LensFixture::C18);
        assert_eq!(LensFixture::D22.complex().n(), 22);
        assert!("E9".parse::<LensFixture>().is_err());
    }
}
