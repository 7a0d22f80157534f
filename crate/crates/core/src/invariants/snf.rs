//! Integer matrices and their Smith normal form.
//!
//! Elimination first runs on machine words with checked arithmetic; on any overflow
//! the whole computation is repeated with arbitrary-precision integers.

use std::collections::HashSet;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.set(i, i, 1);
        }
        m
    }

    pub fn diagonal(values: &[i64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        IntegerMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.entries[r * self.cols + c] = v;
    }

    /// Matrix product; `None` on overflow or shape mismatch.
    pub fn checked_mul(&self, other: &IntegerMatrix) -> Option<IntegerMatrix> {
        if self.cols != other.rows {
            return None;
        }
        let mut out = IntegerMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j).checked_add(a.checked_mul(other.get(k, j))?)?;
                    out.set(i, j, v);
                }
            }
        }
        Some(out)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    fn sparse_rows(&self) -> Vec<Vec<(usize, i64)>> {
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .filter_map(|c| {
                        let v = self.get(r, c);
                        (v != 0).then_some((c, v))
                    })
                    .collect()
            })
            .collect()
    }
}

pub(crate) trait Scalar: Clone + PartialEq + Debug {
    fn from_i64(v: i64) -> Self;
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn is_unit(&self) -> bool;
    /// `|self| < |other|`
    fn abs_lt(&self, other: &Self) -> bool;
    /// `self - f * x`
    fn sub_mul(&self, f: &Self, x: &Self) -> Option<Self>;
    /// Truncated quotient.
    fn quot(&self, d: &Self) -> Self;
    fn abs(&self) -> Option<Self>;
    fn gcd_lcm(&self, other: &Self) -> Option<(Self, Self)>;
    fn into_big(self) -> BigInt;
}

impl Scalar for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
    fn zero() -> Self {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.unsigned_abs() < other.unsigned_abs()
    }
    fn sub_mul(&self, f: &Self, x: &Self) -> Option<Self> {
        self.checked_sub(f.checked_mul(*x)?)
    }
    fn quot(&self, d: &Self) -> Self {
        self / d
    }
    fn abs(&self) -> Option<Self> {
        self.checked_abs()
    }
    fn gcd_lcm(&self, other: &Self) -> Option<(Self, Self)> {
        let (a, b) = (self.checked_abs()?, other.checked_abs()?);
        let g = a.gcd(&b);
        if g == 0 {
            return Some((0, 0));
        }
        Some((g, (a / g).checked_mul(b)?))
    }
    fn into_big(self) -> BigInt {
        BigInt::from(self)
    }
}

impl Scalar for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        Signed::abs(self).is_one()
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.magnitude() < other.magnitude()
    }
    fn sub_mul(&self, f: &Self, x: &Self) -> Option<Self> {
        Some(self - f * x)
    }
    fn quot(&self, d: &Self) -> Self {
        self / d
    }
    fn abs(&self) -> Option<Self> {
        Some(Signed::abs(self))
    }
    fn gcd_lcm(&self, other: &Self) -> Option<(Self, Self)> {
        let g = Integer::gcd(self, other);
        if Zero::is_zero(&g) {
            return Some((g.clone(), g));
        }
        let l = Integer::lcm(self, other);
        Some((g, l))
    }
    fn into_big(self) -> BigInt {
        self
    }
}

fn merge_sub<T: Scalar>(
    row: &[(usize, T)],
    f: &T,
    pivot: &[(usize, T)],
) -> Option<Vec<(usize, T)>> {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let take_row = j >= pivot.len() || (i < row.len() && row[i].0 < pivot[j].0);
        let take_piv = i >= row.len() || (j < pivot.len() && pivot[j].0 < row[i].0);
        if take_row {
            out.push(row[i].clone());
            i += 1;
        } else if take_piv {
            let v = T::zero().sub_mul(f, &pivot[j].1)?;
            out.push((pivot[j].0, v));
            j += 1;
        } else {
            let v = row[i].1.sub_mul(f, &pivot[j].1)?;
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Some(out)
}

/// Nonzero invariant factors `d_1 | d_2 | ... | d_r`; `None` on overflow.
fn snf_generic<T: Scalar>(m: &IntegerMatrix) -> Option<Vec<T>> {
    let mut rows: Vec<Vec<(usize, T)>> = m
        .sparse_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|(c, v)| (c, T::from_i64(v))).collect())
        .collect();
    let mut col_rows: Vec<HashSet<usize>> = vec![HashSet::new(); m.cols];
    for (r, row) in rows.iter().enumerate() {
        for (c, _) in row {
            col_rows[*c].insert(r);
        }
    }
    let mut alive = vec![true; m.rows];
    let mut diag: Vec<T> = Vec::new();

    // unit pivots: eliminate column, drop the pivot row and column
    loop {
        let mut best: Option<(usize, usize, usize)> = None;
        for (r, row) in rows.iter().enumerate() {
            if !alive[r] || row.is_empty() {
                continue;
            }
            for (c, v) in row {
                if v.is_unit() {
                    let cost = (row.len() - 1) * (col_rows[*c].len() - 1);
                    if best.map_or(true, |(_, _, b)| cost < b) {
                        best = Some((r, *c, cost));
                    }
                }
            }
            if matches!(best, Some((_, _, 0))) {
                break;
            }
        }
        let Some((p, c, _)) = best else { break };
        let pivot_row = std::mem::take(&mut rows[p]);
        let unit = pivot_row.iter().find(|(cc, _)| *cc == c).unwrap().1.clone();
        let targets: Vec<usize> = col_rows[c].iter().copied().filter(|&r| r != p).collect();
        for r in targets {
            let coeff = rows[r].iter().find(|(cc, _)| *cc == c).unwrap().1.clone();
            // the unit is its own inverse, so the multiplier is coeff * unit
            let f = T::zero().sub_mul(&T::zero().sub_mul(&coeff, &unit)?, &T::from_i64(1))?;
            let old = std::mem::take(&mut rows[r]);
            let new = merge_sub(&old, &f, &pivot_row)?;
            for (cc, _) in &old {
                col_rows[*cc].remove(&r);
            }
            for (cc, _) in &new {
                col_rows[*cc].insert(r);
            }
            rows[r] = new;
        }
        for (cc, _) in &pivot_row {
            col_rows[*cc].remove(&p);
        }
        alive[p] = false;
        diag.push(T::from_i64(1));
    }

    // dense remainder
    let rest_rows: Vec<usize> = (0..m.rows)
        .filter(|&r| alive[r] && !rows[r].is_empty())
        .collect();
    let rest_cols: Vec<usize> = (0..m.cols).filter(|&c| !col_rows[c].is_empty()).collect();
    if !rest_rows.is_empty() {
        let col_pos: std::collections::HashMap<usize, usize> =
            rest_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut dense: Vec<Vec<T>> = rest_rows
            .iter()
            .map(|&r| {
                let mut v = vec![T::zero(); rest_cols.len()];
                for (c, x) in &rows[r] {
                    v[col_pos[c]] = x.clone();
                }
                v
            })
            .collect();
        diag.extend(dense_diagonalize(&mut dense)?);
    }
    normalize_chain(diag)
}

fn smallest_nonzero<T: Scalar>(m: &[Vec<T>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in m.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().skip(t) {
            if !x.is_zero() && best.map_or(true, |(bi, bj)| x.abs_lt(&m[bi][bj])) {
                best = Some((i, j));
                if x.is_unit() {
                    return best;
                }
            }
        }
    }
    best
}

fn dense_diagonalize<T: Scalar>(m: &mut [Vec<T>]) -> Option<Vec<T>> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = smallest_nonzero(m, t) else {
            break;
        };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = m[t][t].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if !m[i][t].is_zero() {
                    let q = m[i][t].quot(&p);
                    for j in t..cols {
                        let v = m[i][j].sub_mul(&q, &m[t][j])?;
                        m[i][j] = v;
                    }
                    clean &= m[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !m[t][j].is_zero() {
                    let q = m[t][j].quot(&p);
                    for row in m.iter_mut().skip(t) {
                        let v = row[j].sub_mul(&q, &row[t])?;
                        row[j] = v;
                    }
                    clean &= m[t][j].is_zero();
                }
            }
            if clean {
                break;
            }
            // move a smaller remainder into the pivot position
            let mut best = (t, t);
            for i in t + 1..rows {
                if !m[i][t].is_zero() && m[i][t].abs_lt(&m[best.0][best.1]) {
                    best = (i, t);
                }
            }
            for j in t + 1..cols {
                if !m[t][j].is_zero() && m[t][j].abs_lt(&m[best.0][best.1]) {
                    best = (t, j);
                }
            }
            m.swap(t, best.0);
            for row in m.iter_mut() {
                row.swap(t, best.1);
            }
        }
        diag.push(m[t][t].abs()?);
        t += 1;
    }
    Some(diag)
}

fn normalize_chain<T: Scalar>(diag: Vec<T>) -> Option<Vec<T>> {
    let mut d: Vec<T> = diag.into_iter().map(|x| x.abs()).collect::<Option<_>>()?;
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let (g, l) = d[i].gcd_lcm(&d[j])?;
            d[i] = g;
            d[j] = l;
        }
    }
    Some(d)
}

/// Invariant factors of `m`: the nonzero diagonal of its Smith normal form, each
/// dividing the next. The length is the rank.
pub fn smith_normal_form(m: &IntegerMatrix) -> Vec<BigInt> {
    match snf_generic::<i64>(m) {
        Some(d) => d.into_iter().map(Scalar::into_big).collect(),
        None => {
            log::debug!(
                "snf overflowed machine words on {}x{}; using bigints",
                m.rows,
                m.cols
            );
            snf_generic::<BigInt>(m).expect("bigint arithmetic cannot overflow")
        }
    }
}

/// Machine-word-only variant; `None` when an intermediate value would overflow.
pub fn smith_normal_form_i64(m: &IntegerMatrix) -> Option<Vec<i64>> {
    snf_generic::<i64>(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn snf_u(m: &IntegerMatrix) -> Vec<u64> {
        smith_normal_form(m)
            .iter()
            .map(|x| x.try_into().unwrap())
            .collect()
    }

    #[test]
    fn small_cases() {
        assert_eq!(snf_u(&IntegerMatrix::diagonal(&[6, 4])), vec![2, 12]);
        assert!(snf_u(&IntegerMatrix::zeros(3, 4)).is_empty());
        assert_eq!(snf_u(&IntegerMatrix::identity(3)), vec![1, 1, 1]);
        let m = IntegerMatrix::from_rows(vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(snf_u(&m), vec![2, 6, 12]);
    }

    #[test]
    fn gcd_lcm_oracle_on_diagonals() {
        for a in 1..30i64 {
            for b in 1..30i64 {
                let g = a.gcd(&b);
                let l = a.lcm(&b);
                assert_eq!(
                    snf_u(&IntegerMatrix::diagonal(&[a, b])),
                    vec![g as u64, l as u64],
                    "diag({a},{b})"
                );
            }
        }
    }

    #[test]
    fn escalates_on_overflow() {
        let p = (1i64 << 40) + 15; // odd
        let q = (1i64 << 41) + 1;
        let m = IntegerMatrix::diagonal(&[p, q]);
        assert!(smith_normal_form_i64(&m).is_none());
        let d = smith_normal_form(&m);
        let g = Integer::gcd(&BigInt::from(p), &BigInt::from(q));
        assert_eq!(d, vec![g.clone(), BigInt::from(p) * BigInt::from(q) / g]);
    }

    fn unimodular(size: usize, ops: &[(usize, usize, i64)]) -> IntegerMatrix {
        let mut m = IntegerMatrix::identity(size);
        for &(i, j, f) in ops {
            let (i, j) = (i % size, j % size);
            if i == j {
                continue;
            }
            for c in 0..size {
                let v = m.get(i, c) + f * m.get(j, c);
                m.set(i, c, v);
            }
        }
        m
    }

    proptest! {
        #[test]
        fn invariant_under_unimodular_transforms(
            entries in proptest::collection::vec(-6i64..7, 12),
            left in proptest::collection::vec((0usize..3, 0usize..3, -2i64..3), 0..5),
            right in proptest::collection::vec((0usize..4, 0usize..4, -2i64..3), 0..5),
        ) {
            let m = IntegerMatrix::from_rows(entries.chunks(4).map(|c| c.to_vec()).collect());
            let base = smith_normal_form(&m);
            for w in base.windows(2) {
                prop_assert!(Zero::is_zero(&(&w[1] % &w[0])));
            }
            let t = unimodular(3, &left).checked_mul(&m).unwrap().checked_mul(&unimodular(4, &right)).unwrap();
            prop_assert_eq!(smith_normal_form(&t), base);
        }
    }
}
