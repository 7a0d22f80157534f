//! Difference cycles and cyclic complexes.
//!
//! A difference cycle `(a_0 : ... : a_d)` with `n = a_0 + ... + a_d` stands for the
//! orbit of the simplex `<0, a_0, a_0 + a_1, ..., a_0 + ... + a_{d-1}>` under the
//! shift `v -> v + 1 mod n`. Two simplices lie in the same orbit exactly when their
//! cyclic gap sequences agree up to rotation, so a cycle is stored in its
//! lexicographically minimal rotation and compared by that key.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::complex::FacetComplex;
use crate::error::{Error, Result};
use crate::notation;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DifferenceCycle {
    parts: Vec<u32>,
    n: u32,
}

/// Lexicographically minimal rotation of `parts`.
pub fn min_rotation(parts: &[u32]) -> Vec<u32> {
    let len = parts.len();
    (0..len)
        .map(|r| rotated(parts, r))
        .min()
        .unwrap_or_default()
}

pub(crate) fn rotated(parts: &[u32], r: usize) -> Vec<u32> {
    let len = parts.len();
    (0..len).map(|i| parts[(i + r) % len]).collect()
}

/// Brings a positive sequence into canonical (minimal rotation) form.
pub fn canonicalize(parts: &[u32]) -> Result<DifferenceCycle> {
    DifferenceCycle::new(parts)
}

impl DifferenceCycle {
    pub fn new(parts: &[u32]) -> Result<Self> {
        if parts.len() < 2 {
            return Err(Error::InvalidCycle(format!(
                "need at least two entries, got {}",
                parts.len()
            )));
        }
        if let Some(pos) = parts.iter().position(|&a| a == 0) {
            return Err(Error::InvalidCycle(format!("entry {pos} is zero")));
        }
        let n = parts
            .iter()
            .try_fold(0u32, |acc, &a| acc.checked_add(a))
            .ok_or_else(|| Error::InvalidCycle("modulus overflows u32".into()))?;
        let parts = min_rotation(parts);
        debug_assert!({
            let g = generator_of(&parts);
            g.windows(2).all(|w| w[0] < w[1]) && *g.last().unwrap() < n
        });
        Ok(DifferenceCycle { parts, n })
    }

    /// Difference cycle of the orbit containing `simplex` (vertices taken mod `n`).
    pub fn from_simplex(simplex: &[u32], n: u32) -> Result<Self> {
        let mut v: Vec<u32> = simplex.iter().map(|&x| x % n).collect();
        v.sort_unstable();
        v.dedup();
        if v.len() != simplex.len() {
            return Err(Error::InvalidCycle("repeated vertex in simplex".into()));
        }
        let gaps: Vec<u32> = (0..v.len())
            .map(|i| {
                if i + 1 < v.len() {
                    v[i + 1] - v[i]
                } else {
                    v[0] + n - v[i]
                }
            })
            .collect();
        Self::new(&gaps)
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn dim(&self) -> usize {
        self.parts.len() - 1
    }

    pub fn modulus(&self) -> u32 {
        self.n
    }

    /// Vertices `0, a_0, a_0 + a_1, ...` of the orbit representative.
    pub fn generator(&self) -> Vec<u32> {
        generator_of(&self.parts)
    }

    /// Smallest period `k` dividing `d + 1` of the entry sequence.
    pub fn period(&self) -> usize {
        let len = self.parts.len();
        (1..=len)
            .filter(|k| len % k == 0)
            .find(|&k| (0..len - k).all(|i| self.parts[i] == self.parts[i + k]))
            .unwrap_or(len)
    }

    /// Number of simplices in the orbit: `a_0 + ... + a_{k-1}` for the period `k`.
    pub fn orbit_length(&self) -> u32 {
        self.parts[..self.period()].iter().sum()
    }

    /// All simplices of the orbit, each sorted ascending.
    pub fn simplices(&self) -> Vec<Vec<u32>> {
        let g = self.generator();
        (0..self.orbit_length())
            .map(|t| {
                let mut s: Vec<u32> = g.iter().map(|&v| (v + t) % self.n).collect();
                s.sort_unstable();
                s
            })
            .collect()
    }

    /// Image of the orbit under `v -> lambda * v mod n`.
    pub fn scaled(&self, lambda: u32) -> DifferenceCycle {
        let n = self.n as u64;
        let image: Vec<u32> = self
            .generator()
            .iter()
            .map(|&v| ((v as u64 * lambda as u64) % n) as u32)
            .collect();
        DifferenceCycle::from_simplex(&image, self.n)
            .expect("unit multiple of a simplex is a simplex")
    }

    /// Rotation putting a maximal entry last. Among several such rotations the
    /// lexicographically smallest is returned.
    pub fn max_last(&self) -> Vec<u32> {
        let max = *self.parts.iter().max().unwrap();
        let len = self.parts.len();
        (0..len)
            .map(|r| rotated(&self.parts, r))
            .filter(|p| p[len - 1] == max)
            .min()
            .unwrap()
    }
}

fn generator_of(parts: &[u32]) -> Vec<u32> {
    let mut acc = 0;
    let mut out = Vec::with_capacity(parts.len());
    for &a in &parts[..parts.len() - 1] {
        out.push(acc);
        acc += a;
    }
    out.push(acc);
    out
}

impl fmt::Display for DifferenceCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        notation::write_parts(f, &self.parts)
    }
}

impl FromStr for DifferenceCycle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let raw = notation::parse_raw_cycle(s)?;
        DifferenceCycle::new(&raw)
    }
}

/// Units of `Z_n` in ascending order.
pub fn units(n: u32) -> Vec<u32> {
    (1..n.max(2)).filter(|&l| l.gcd(&n) == 1).collect()
}

/// Modular inverse of a unit.
pub fn inverse_mod(lambda: u32, n: u32) -> Option<u32> {
    let e = (lambda as i64).extended_gcd(&(n as i64));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(n as i64) as u32)
}

/// A union of difference cycles sharing modulus and dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicComplex {
    n: u32,
    d: usize,
    cycles: BTreeSet<DifferenceCycle>,
}

impl CyclicComplex {
    pub fn new<I>(n: u32, d: usize, cycles: I) -> Result<Self>
    where
        I: IntoIterator<Item = DifferenceCycle>,
    {
        let mut set = BTreeSet::new();
        for c in cycles {
            if c.modulus() != n || c.dim() != d {
                return Err(Error::InvalidCycle(format!(
                    "{c} does not have modulus {n} and dimension {d}"
                )));
            }
            if !set.insert(c.clone()) {
                return Err(Error::InvalidCycle(format!("duplicate cycle {c}")));
            }
        }
        Ok(CyclicComplex { n, d, cycles: set })
    }

    /// Complex from a non-empty list of cycles; modulus and dimension are taken from them.
    pub fn from_cycles(cycles: Vec<DifferenceCycle>) -> Result<Self> {
        let first = cycles
            .first()
            .ok_or_else(|| Error::InvalidCycle("empty cycle list".into()))?;
        let (n, d) = (first.modulus(), first.dim());
        Self::new(n, d, cycles)
    }

    /// Complex from raw (not necessarily canonical) entry sequences.
    pub fn from_parts(parts: &[Vec<u32>]) -> Result<Self> {
        let cycles = parts
            .iter()
            .map(|p| DifferenceCycle::new(p))
            .collect::<Result<Vec<_>>>()?;
        Self::from_cycles(cycles)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn cycles(&self) -> impl Iterator<Item = &DifferenceCycle> + '_ {
        self.cycles.iter()
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn contains(&self, c: &DifferenceCycle) -> bool {
        self.cycles.contains(c)
    }

    /// Number of facets of the expansion.
    pub fn facet_count(&self) -> usize {
        self.cycles.iter().map(|c| c.orbit_length() as usize).sum()
    }

    pub fn expand(&self) -> FacetComplex {
        let facets = self.cycles.iter().flat_map(|c| c.simplices()).collect();
        FacetComplex::new(self.n, facets)
    }

    pub fn multiply(&self, lambda: u32) -> Result<CyclicComplex> {
        let lambda_red = lambda % self.n;
        if (lambda_red as u64).gcd(&(self.n as u64)) != 1 {
            return Err(Error::InvalidMultiplier {
                lambda: lambda as u64,
                n: self.n,
            });
        }
        let cycles = self.cycles.iter().map(|c| c.scaled(lambda_red)).collect();
        Ok(CyclicComplex {
            n: self.n,
            d: self.d,
            cycles,
        })
    }

    /// All units `lambda` with `lambda * C = C`.
    pub fn multipliers(&self) -> Vec<u32> {
        units(self.n)
            .into_iter()
            .filter(|&l| self.multiply(l).map(|m| m == *self).unwrap_or(false))
            .collect()
    }

    /// Union of `lambda * C` over all units; every unit is a multiplier of the result.
    pub fn unit_orbit_union(&self) -> CyclicComplex {
        let cycles = units(self.n)
            .into_iter()
            .flat_map(|l| self.multiply(l).unwrap().cycles)
            .collect();
        CyclicComplex {
            n: self.n,
            d: self.d,
            cycles,
        }
    }

    /// Smallest text rendering over all unit multiples; a key for the multiplier orbit.
    pub fn multiplier_orbit_key(&self) -> String {
        units(self.n)
            .into_iter()
            .map(|l| self.multiply(l).unwrap().to_string())
            .min()
            .unwrap_or_else(|| self.to_string())
    }
}

impl fmt::Display for CyclicComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.cycles.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

impl FromStr for CyclicComplex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let raw = notation::parse_raw_complex(s)?;
        let n: u32 = raw[0].1.iter().sum();
        let d = raw[0].1.len() - 1;
        for (pos, parts) in &raw {
            let sum: u64 = parts.iter().map(|&a| a as u64).sum();
            if sum != n as u64 || parts.len() != d + 1 {
                return Err(Error::Parse {
                    pos: *pos,
                    msg: format!(
                        "cycle has modulus {sum} and dimension {}, expected {n} and {d}",
                        parts.len() - 1
                    ),
                });
            }
        }
        let cycles = raw
            .iter()
            .map(|(_, p)| DifferenceCycle::new(p))
            .collect::<Result<Vec<_>>>()?;
        CyclicComplex::new(n, d, cycles)
    }
}

macro_rules! text_serde {
    ($t:ty) => {
        impl serde::Serialize for $t {
            fn serialize<S: serde::Serializer>(
                &self,
                s: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }

        impl<'de> serde::Deserialize<'de> for $t {
            fn deserialize<D: serde::Deserializer<'de>>(
                d: D,
            ) -> std::result::Result<Self, D::Error> {
                let text = String::deserialize(d)?;
                text.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

text_serde!(DifferenceCycle);
text_serde!(CyclicComplex);
