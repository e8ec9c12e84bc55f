//! Dense linear algebra over `ℤ/m`.
//!
//! Diagonalisation uses unimodular integer row and column operations with
//! every entry kept in `[0, m)`; gcd steps strictly lower the pivot, so the
//! elimination terminates. The diagonal need not form a divisibility chain,
//! which is all the callers require: `(ℤ/m)/(d) ≅ ℤ/gcd(d, m)` per entry.

use num_integer::Integer;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZmodMatrix {
    pub rows: usize,
    pub cols: usize,
    pub modulus: u64,
    data: Vec<u64>,
}

/// Result of diagonalising `A`: `U·A·V = D` with `D` diagonal.
#[derive(Debug, Clone)]
pub struct Diagonal {
    /// `D[i][i]` for `i < min(rows, cols)`.
    pub diagonal: Vec<u64>,
    pub v: Option<ZmodMatrix>,
    pub v_inverse: Option<ZmodMatrix>,
}

/// `(g, s, t)` with `s·a + t·b = g = gcd(a, b)`.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    (e.gcd, e.x, e.y)
}

impl ZmodMatrix {
    pub fn zeros(rows: usize, cols: usize, modulus: u64) -> Self {
        assert!(modulus >= 1);
        ZmodMatrix {
            rows,
            cols,
            modulus,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize, modulus: u64) -> Self {
        let mut m = Self::zeros(n, n, modulus);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % self.modulus;
    }

    /// Adds a signed integer to an entry.
    pub fn add(&mut self, r: usize, c: usize, v: i64) {
        let m = self.modulus as i64;
        let cur = self.get(r, c) as i64;
        self.data[r * self.cols + c] = (cur + v).rem_euclid(m) as u64;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        let m = self.modulus as u128;
        (0..self.rows)
            .map(|r| {
                let s: u128 = self
                    .row(r)
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| a as u128 * b as u128)
                    .sum();
                (s % m) as u64
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// `(row_a, row_b) ← (p·row_a + q·row_b, r·row_a + s·row_b)`.
    fn mix_rows(&mut self, a: usize, b: usize, [p, q, r, s]: [i64; 4]) {
        let m = self.modulus as i128;
        for c in 0..self.cols {
            let x = self.get(a, c) as i128;
            let y = self.get(b, c) as i128;
            self.data[a * self.cols + c] = (p as i128 * x + q as i128 * y).rem_euclid(m) as u64;
            self.data[b * self.cols + c] = (r as i128 * x + s as i128 * y).rem_euclid(m) as u64;
        }
    }

    /// `(col_a, col_b) ← (p·col_a + q·col_b, r·col_a + s·col_b)`.
    fn mix_cols(&mut self, a: usize, b: usize, [p, q, r, s]: [i64; 4]) {
        let m = self.modulus as i128;
        for row in 0..self.rows {
            let x = self.get(row, a) as i128;
            let y = self.get(row, b) as i128;
            self.data[row * self.cols + a] = (p as i128 * x + q as i128 * y).rem_euclid(m) as u64;
            self.data[row * self.cols + b] = (r as i128 * x + s as i128 * y).rem_euclid(m) as u64;
        }
    }

    /// Diagonalises in place. Row operations are mirrored on `rhs` (extra
    /// columns that receive only row operations); `V` and `V⁻¹` are tracked
    /// on request.
    pub fn diagonalize(&mut self, rhs: Option<&mut ZmodMatrix>, track: Track) -> Diagonal {
        let mut rhs = rhs;
        let mut v = track.v.then(|| ZmodMatrix::identity(self.cols, self.modulus));
        let mut vinv = track.v_inverse.then(|| ZmodMatrix::identity(self.cols, self.modulus));
        let m = self.modulus;
        let steps = self.rows.min(self.cols);
        let mut diagonal = Vec::with_capacity(steps);
        for t in 0..steps {
            // pivot: the nonzero entry generating the largest ideal
            let mut best: Option<(u64, usize, usize)> = None;
            for r in t..self.rows {
                for c in t..self.cols {
                    let x = self.get(r, c);
                    if x != 0 {
                        let key = x.gcd(&m);
                        if best.is_none_or(|(k, _, _)| key < k) {
                            best = Some((key, r, c));
                        }
                    }
                }
                if best.is_some_and(|(k, _, _)| k == 1) {
                    break;
                }
            }
            let Some((_, pr, pc)) = best else {
                diagonal.extend(std::iter::repeat_n(0, steps - t));
                break;
            };
            self.swap_rows(t, pr);
            if let Some(b) = rhs.as_deref_mut() {
                b.swap_rows(t, pr);
            }
            self.swap_cols(t, pc);
            if let Some(v) = v.as_mut() {
                v.swap_cols(t, pc);
            }
            if let Some(vi) = vinv.as_mut() {
                vi.swap_rows(t, pc);
            }
            loop {
                for r in t + 1..self.rows {
                    let b = self.get(r, t);
                    if b == 0 {
                        continue;
                    }
                    let a = self.get(t, t);
                    let ops = if b.is_multiple_of(a) {
                        [1, 0, -((b / a) as i64), 1]
                    } else {
                        let (g, s, u) = ext_gcd(a as i64, b as i64);
                        [s, u, -(b as i64 / g), a as i64 / g]
                    };
                    self.mix_rows(t, r, ops);
                    if let Some(x) = rhs.as_deref_mut() {
                        x.mix_rows(t, r, ops);
                    }
                }
                let mut disturbed = false;
                for c in t + 1..self.cols {
                    let b = self.get(t, c);
                    if b == 0 {
                        continue;
                    }
                    let a = self.get(t, t);
                    let (ops, inv) = if b.is_multiple_of(a) {
                        let k = (b / a) as i64;
                        ([1, 0, -k, 1], [1, k, 0, 1])
                    } else {
                        disturbed = true;
                        let (g, s, u) = ext_gcd(a as i64, b as i64);
                        let (ag, bg) = (a as i64 / g, b as i64 / g);
                        ([s, u, -bg, ag], [ag, bg, -u, s])
                    };
                    self.mix_cols(t, c, ops);
                    if let Some(v) = v.as_mut() {
                        v.mix_cols(t, c, ops);
                    }
                    if let Some(vi) = vinv.as_mut() {
                        vi.mix_rows(t, c, inv);
                    }
                }
                if !disturbed || (t + 1..self.rows).all(|r| self.get(r, t) == 0) {
                    break;
                }
            }
            diagonal.push(self.get(t, t));
        }
        Diagonal {
            diagonal,
            v,
            v_inverse: vinv,
        }
    }

    /// One solution of `A·x ≡ b (mod m)`.
    pub fn solve(&self, b: &[u64]) -> Result<Vec<u64>> {
        assert_eq!(b.len(), self.rows);
        let m = self.modulus;
        let mut a = self.clone();
        let mut rhs = ZmodMatrix::zeros(self.rows, 1, m);
        for (i, &x) in b.iter().enumerate() {
            rhs.set(i, 0, x);
        }
        let diag = a.diagonalize(
            Some(&mut rhs),
            Track {
                v: true,
                v_inverse: false,
            },
        );
        let mut y = vec![0u64; self.cols];
        for i in 0..self.rows {
            let c = rhs.get(i, 0);
            let d = diag.diagonal.get(i).copied().unwrap_or(0);
            if d == 0 {
                if c != 0 {
                    return Err(Error::Unsolvable { modulus: m as u32 });
                }
                continue;
            }
            let g = d.gcd(&m);
            if !c.is_multiple_of(g) {
                return Err(Error::Unsolvable { modulus: m as u32 });
            }
            let mg = m / g;
            let (_, inv, _) = ext_gcd((d / g) as i64, mg as i64);
            y[i] = ((c / g) as i128 * inv as i128).rem_euclid(mg as i128) as u64;
        }
        Ok(diag.v.expect("tracked").mul_vec(&y))
    }

    pub fn mul(&self, other: &ZmodMatrix) -> ZmodMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = ZmodMatrix::zeros(self.rows, other.cols, self.modulus);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let s: u128 = (0..self.cols)
                    .map(|k| self.get(r, k) as u128 * other.get(k, c) as u128)
                    .sum();
                out.data[r * other.cols + c] = (s % self.modulus as u128) as u64;
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Track {
    pub v: bool,
    pub v_inverse: bool,
}

/// Cyclic orders `ℤ/d` of a finite abelian group as invariant factors
/// `d₁ | d₂ | ⋯`, with trivial factors dropped.
pub fn invariant_factors(cyclic_orders: &[u64]) -> Vec<u64> {
    // collect prime-power parts, then recombine largest-first
    let mut by_prime: std::collections::BTreeMap<u64, Vec<u64>> = Default::default();
    for &d in cyclic_orders {
        for (p, e) in factorize(d) {
            by_prime.entry(p).or_default().push(p.pow(e));
        }
    }
    let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut out = vec![1u64; len];
    for powers in by_prime.values_mut() {
        powers.sort_unstable_by(|a, b| b.cmp(a));
        for (i, q) in powers.iter().enumerate() {
            out[len - 1 - i] *= q;
        }
    }
    out
}

/// Prime-power decomposition of the same group.
pub fn elementary_divisors(cyclic_orders: &[u64]) -> Vec<u64> {
    let mut out: Vec<u64> = cyclic_orders
        .iter()
        .flat_map(|&d| factorize(d).into_iter().map(|(p, e)| p.pow(e)))
        .collect();
    out.sort_unstable();
    out
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn from_rows(rows: &[&[u64]], m: u64) -> ZmodMatrix {
        let mut a = ZmodMatrix::zeros(rows.len(), rows[0].len(), m);
        for (r, row) in rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                a.set(r, c, v);
            }
        }
        a
    }

    #[test]
    fn solves_with_zero_divisors() {
        // 4x ≡ 2 (mod 6): x ∈ {2, 5}
        let a = from_rows(&[&[4]], 6);
        let x = a.solve(&[2]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![2]);
        assert!(a.solve(&[1]).is_err());
    }

    #[test]
    fn invariant_factor_grouping() {
        assert_eq!(invariant_factors(&[2, 3]), vec![6]);
        assert_eq!(invariant_factors(&[2, 2, 4, 1]), vec![2, 2, 4]);
        assert_eq!(invariant_factors(&[1, 1]), Vec::<u64>::new());
        assert_eq!(elementary_divisors(&[12]), vec![3, 4]);
    }

    proptest! {
        #[test]
        fn solve_finds_a_preimage(
            m in 2u64..13,
            entries in proptest::collection::vec(0u64..1000, 12),
            x in proptest::collection::vec(0u64..1000, 4),
        ) {
            let mut a = ZmodMatrix::zeros(3, 4, m);
            for (i, &e) in entries.iter().enumerate() {
                a.set(i / 4, i % 4, e);
            }
            let x: Vec<u64> = x.iter().map(|v| v % m).collect();
            let b = a.mul_vec(&x);
            let sol = a.solve(&b).unwrap();
            prop_assert_eq!(a.mul_vec(&sol), b);
        }

        #[test]
        fn tracked_transforms_are_inverse(
            m in 2u64..13,
            entries in proptest::collection::vec(0u64..1000, 20),
        ) {
            let mut a = ZmodMatrix::zeros(4, 5, m);
            for (i, &e) in entries.iter().enumerate() {
                a.set(i / 5, i % 5, e);
            }
            let d = a.diagonalize(None, Track { v: true, v_inverse: true });
            let prod = d.v.unwrap().mul(&d.v_inverse.unwrap());
            prop_assert_eq!(prod, ZmodMatrix::identity(5, m));
            for r in 0..4 {
                for c in 0..5 {
                    if r != c {
                        prop_assert_eq!(a.get(r, c), 0);
                    }
                }
            }
        }
    }
}
