//! Finitely presented groups from edge paths, with Tietze simplification.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_traits::ToPrimitive;

use super::snf::{smith_normal_form, IntegerMatrix};
use crate::complex::FacetComplex;
use crate::error::{Error, Result};
use crate::topology::is_connected;

pub const DEFAULT_TIETZE_BUDGET: usize = 10_000;

/// Generators are `1..=generators`; a letter `-g` is the inverse of `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    pub generators: usize,
    pub relators: Vec<Vec<i32>>,
}

fn free_reduce(word: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(word.len());
    for &x in word {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

fn cyclic_reduce(word: &[i32]) -> Vec<i32> {
    let mut w = free_reduce(word);
    while w.len() >= 2 && w[0] == -w[w.len() - 1] {
        w.pop();
        w.remove(0);
    }
    w
}

fn inverse(word: &[i32]) -> Vec<i32> {
    word.iter().rev().map(|&x| -x).collect()
}

/// Smallest rotation of the word or its inverse, letters ordered as
/// `1 < -1 < 2 < -2 < ...`; relators equal up to conjugacy and inversion share this key.
fn relator_key(word: &[i32]) -> Vec<i32> {
    let inv = inverse(word);
    (0..word.len())
        .flat_map(|r| {
            [
                [&word[r..], &word[..r]].concat(),
                [&inv[r..], &inv[..r]].concat(),
            ]
        })
        .min_by_key(|w| w.iter().map(|&x| (x.abs(), x < 0)).collect::<Vec<_>>())
        .unwrap_or_default()
}

impl GroupPresentation {
    pub fn new(generators: usize, relators: Vec<Vec<i32>>) -> Result<Self> {
        for r in &relators {
            if let Some(&x) = r
                .iter()
                .find(|&&x| x == 0 || x.unsigned_abs() as usize > generators)
            {
                return Err(Error::InvalidSpec(format!(
                    "letter {x} outside generators 1..={generators}"
                )));
            }
        }
        let mut p = GroupPresentation {
            generators,
            relators,
        };
        p.normalize();
        Ok(p)
    }

    /// Free and cyclic reduction, then removal of empty and repeated relators.
    fn normalize(&mut self) {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for r in &self.relators {
            let w = cyclic_reduce(r);
            if w.is_empty() {
                continue;
            }
            let key = relator_key(&w);
            if seen.insert(key.clone()) {
                out.push(key);
            }
        }
        self.relators = out;
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(Vec::len).sum()
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = (1..=self.generators).map(|g| format!("x{g}")).collect();
        let rels: Vec<String> = self
            .relators
            .iter()
            .map(|r| {
                runs(r)
                    .into_iter()
                    .map(|(g, e)| {
                        if e == 1 {
                            format!("x{g}")
                        } else {
                            format!("x{g}^{e}")
                        }
                    })
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        let join = |v: &[String]| {
            if v.is_empty() {
                " ".to_string()
            } else {
                format!(" {} ", v.join(", "))
            }
        };
        write!(f, "<{}|{}>", join(&gens), join(&rels))
    }
}

/// Edge-path presentation. The spanning tree is a breadth-first tree from the
/// smallest vertex, neighbors taken in ascending order; every other edge is a
/// generator and every triangle a relator.
pub fn fundamental_group(k: &FacetComplex) -> Result<GroupPresentation> {
    if k.is_empty() || !is_connected(k) {
        return Err(Error::Disconnected);
    }
    let edges = k.faces(1);
    let mut adj: BTreeMap<u32, BTreeSet<u32>> = BTreeMap::new();
    for e in &edges {
        adj.entry(e[0]).or_default().insert(e[1]);
        adj.entry(e[1]).or_default().insert(e[0]);
    }
    let root = k.vertices()[0];
    let mut tree: BTreeSet<(u32, u32)> = BTreeSet::new();
    let mut seen = BTreeSet::from([root]);
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &w in adj.get(&v).into_iter().flatten() {
            if seen.insert(w) {
                tree.insert((v.min(w), v.max(w)));
                queue.push_back(w);
            }
        }
    }
    let mut gen_of: BTreeMap<(u32, u32), i32> = BTreeMap::new();
    for e in &edges {
        let key = (e[0], e[1]);
        if !tree.contains(&key) {
            let g = gen_of.len() as i32 + 1;
            gen_of.insert(key, g);
        }
    }
    let letter = |a: u32, b: u32| -> Option<i32> {
        if a < b {
            gen_of.get(&(a, b)).copied()
        } else {
            gen_of.get(&(b, a)).map(|&g| -g)
        }
    };
    let relators = k
        .faces(2)
        .iter()
        .map(|t| {
            let (a, b, c) = (t[0], t[1], t[2]);
            [letter(a, b), letter(b, c), letter(c, a)]
                .into_iter()
                .flatten()
                .collect()
        })
        .collect();
    GroupPresentation::new(gen_of.len(), relators)
}

fn substitute(word: &[i32], g: i32, image: &[i32]) -> Vec<i32> {
    let inv = inverse(image);
    let mut out = Vec::with_capacity(word.len());
    for &x in word {
        if x == g {
            out.extend_from_slice(image);
        } else if x == -g {
            out.extend_from_slice(&inv);
        } else {
            out.push(x);
        }
    }
    free_reduce(&out)
}

/// Finds the shortest relator in which some generator occurs exactly once and
/// returns `(relator index, generator, expression for the generator)`.
fn elimination(p: &GroupPresentation) -> Option<(usize, i32, Vec<i32>)> {
    let mut order: Vec<usize> = (0..p.relators.len()).collect();
    order.sort_by_key(|&i| (p.relators[i].len(), i));
    for i in order {
        let r = &p.relators[i];
        let mut count: BTreeMap<i32, usize> = BTreeMap::new();
        for &x in r {
            *count.entry(x.abs()).or_insert(0) += 1;
        }
        let Some((&g, _)) = count.iter().find(|(_, &c)| c == 1) else {
            continue;
        };
        let pos = r.iter().position(|&x| x.abs() == g).unwrap();
        // rotate to g^e w = 1
        let w: Vec<i32> = [&r[pos + 1..], &r[..pos]].concat();
        let image = if r[pos] > 0 { inverse(&w) } else { w };
        return Some((i, g, image));
    }
    None
}

/// Replaces the longer half of a cyclic rotation of one relator, found inside
/// another relator, by the inverse of the shorter half.
fn shorten(p: &mut GroupPresentation) -> bool {
    for i in 0..p.relators.len() {
        let r = p.relators[i].clone();
        let len = r.len();
        let inv = inverse(&r);
        for base in [&r, &inv] {
            for rot in 0..len {
                let w: Vec<i32> = [&base[rot..], &base[..rot]].concat();
                let cut = len / 2 + 1;
                let (x, y) = w.split_at(cut);
                for j in 0..p.relators.len() {
                    if j == i || p.relators[j].len() < x.len() {
                        continue;
                    }
                    let s = &p.relators[j];
                    if let Some(at) = s.windows(x.len()).position(|win| win == x) {
                        let replaced = [&s[..at], &inverse(y)[..], &s[at + x.len()..]].concat();
                        let replaced = cyclic_reduce(&replaced);
                        if replaced.len() < s.len() {
                            p.relators[j] = replaced;
                            return true;
                        }
                    }
                }
            }
        }
    }
    false
}

/// Best-effort Tietze simplification. Each relator rewrite costs one unit of
/// `budget`; the result presents an isomorphic group.
pub fn tietze_simplify(p: &GroupPresentation, budget: usize) -> GroupPresentation {
    let mut p = p.clone();
    p.normalize();
    let mut spent = 0usize;
    while spent < budget {
        if let Some((i, g, image)) = elimination(&p) {
            p.relators.remove(i);
            let last = p.generators as i32;
            for r in p.relators.iter_mut() {
                *r = substitute(r, g, &image);
                // renumber the last generator into the freed slot
                for x in r.iter_mut() {
                    if x.abs() == last {
                        *x = x.signum() * g;
                    }
                }
                spent += 1;
            }
            p.generators -= 1;
            p.normalize();
            continue;
        }
        if shorten(&mut p) {
            spent += 1;
            p.normalize();
            continue;
        }
        break;
    }
    p
}

/// Rank and torsion coefficients of the abelianized group.
pub fn abelianization(p: &GroupPresentation) -> (usize, Vec<u64>) {
    let mut m = IntegerMatrix::zeros(p.relators.len(), p.generators);
    for (i, r) in p.relators.iter().enumerate() {
        for &x in r {
            let c = x.unsigned_abs() as usize - 1;
            m.set(i, c, m.get(i, c) + x.signum() as i64);
        }
    }
    let d = smith_normal_form(&m);
    let torsion = d
        .iter()
        .map(|x| x.to_u64().expect("torsion coefficient exceeds u64"))
        .filter(|&x| x > 1)
        .collect();
    (p.generators - d.len(), torsion)
}

fn runs(word: &[i32]) -> Vec<(i32, i64)> {
    let mut out: Vec<(i32, i64)> = Vec::new();
    for &x in word {
        let (g, e) = (x.abs(), x.signum() as i64);
        match out.last_mut() {
            Some((h, f)) if *h == g && f.signum() == e => *f += e,
            _ => out.push((g, e)),
        }
    }
    out
}

/// Text consumable by common computer-algebra systems, for example
/// `F := FreeGroup(2); G := F / [ F.1^3*F.2^-1 ];`.
pub fn export_presentation(p: &GroupPresentation) -> String {
    let rels: Vec<String> = p
        .relators
        .iter()
        .map(|r| {
            runs(r)
                .into_iter()
                .map(|(g, e)| {
                    if e == 1 {
                        format!("F.{g}")
                    } else {
                        format!("F.{g}^{e}")
                    }
                })
                .collect::<Vec<_>>()
                .join("*")
        })
        .collect();
    if rels.is_empty() {
        format!("F := FreeGroup({}); G := F / [ ];", p.generators)
    } else {
        format!(
            "F := FreeGroup({}); G := F / [ {} ];",
            p.generators,
            rels.join(", ")
        )
    }
}

/// Inverse of [`export_presentation`].
pub fn parse_presentation(text: &str) -> Result<GroupPresentation> {
    let bad = |msg: &str| Error::Parse {
        pos: 0,
        msg: msg.into(),
    };
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let rest = compact
        .strip_prefix("F:=FreeGroup(")
        .ok_or_else(|| bad("expected 'F := FreeGroup('"))?;
    let close = rest
        .find(')')
        .ok_or_else(|| bad("unterminated FreeGroup"))?;
    let generators: usize = rest[..close]
        .parse()
        .map_err(|_| bad("bad generator count"))?;
    let rest = rest[close + 1..]
        .strip_prefix(";G:=F/[")
        .ok_or_else(|| bad("expected 'G := F / ['"))?;
    let body = rest
        .strip_suffix("];")
        .ok_or_else(|| bad("expected closing '];'"))?;
    let mut relators = Vec::new();
    for word in body.split(',').filter(|w| !w.is_empty()) {
        let mut r = Vec::new();
        for letter in word.split('*') {
            let letter = letter
                .strip_prefix("F.")
                .ok_or_else(|| bad("expected 'F.'"))?;
            let (g, e) = match letter.split_once('^') {
                Some((g, e)) => (g, e.parse::<i64>().map_err(|_| bad("bad exponent"))?),
                None => (letter, 1),
            };
            let g: i32 = g.parse().map_err(|_| bad("bad generator index"))?;
            for _ in 0..e.unsigned_abs() {
                r.push(if e > 0 { g } else { -g });
            }
        }
        relators.push(r);
    }
    GroupPresentation::new(generators, relators)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simplex_boundary(d: u32) -> FacetComplex {
        let facets = (0..=d + 1)
            .map(|skip| (0..=d + 1).filter(|&v| v != skip).collect())
            .collect();
        FacetComplex::new(d + 2, facets)
    }

    #[test]
    fn eliminates_free_relator_generator() {
        let p = GroupPresentation::new(2, vec![vec![1]]).unwrap();
        let s = tietze_simplify(&p, DEFAULT_TIETZE_BUDGET);
        assert_eq!(
            s,
            GroupPresentation {
                generators: 1,
                relators: vec![]
            }
        );
    }

    #[test]
    fn cyclic_group_is_a_fixpoint() {
        let p = GroupPresentation::new(1, vec![vec![1, 1, 1]]).unwrap();
        assert_eq!(tietze_simplify(&p, DEFAULT_TIETZE_BUDGET), p);
        assert_eq!(abelianization(&p), (0, vec![3]));
        assert_eq!(
            export_presentation(&p),
            "F := FreeGroup(1); G := F / [ F.1^3 ];"
        );
    }

    #[test]
    fn simply_connected_sphere() {
        let p = fundamental_group(&simplex_boundary(3)).unwrap();
        assert_eq!(p.generators, 6);
        let s = tietze_simplify(&p, DEFAULT_TIETZE_BUDGET);
        assert_eq!(s.generators, 0);
        assert_eq!(export_presentation(&s), "F := FreeGroup(0); G := F / [ ];");
    }

    #[test]
    fn free_group_abelianizes_freely() {
        let p = GroupPresentation::new(2, vec![]).unwrap();
        assert_eq!(abelianization(&p), (2, vec![]));
    }

    #[test]
    fn disconnected_is_rejected() {
        let k = simplex_boundary(2);
        assert_eq!(
            fundamental_group(&k.disjoint_union(&k)),
            Err(Error::Disconnected)
        );
    }

    #[test]
    fn export_round_trip() {
        let p = GroupPresentation::new(3, vec![vec![1, 1, -2, 3], vec![2, 2, 2, -1]]).unwrap();
        let text = export_presentation(&p);
        assert_eq!(parse_presentation(&text).unwrap(), p);
        assert!(parse_presentation("nonsense").is_err());
    }

    #[test]
    fn reduction_helpers() {
        assert_eq!(free_reduce(&[1, 2, -2, -1, 3]), vec![3]);
        assert_eq!(cyclic_reduce(&[-1, 2, 3, 1]), vec![2, 3]);
        assert_eq!(relator_key(&[2, 1]), relator_key(&[-1, -2]));
    }
}
