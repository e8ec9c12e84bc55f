//! Exact arithmetic in cyclotomic fields `ℚ(ζ_M)`.
//!
//! A [`CycSum`] is `Σ cᵢ ζ_Mⁱ` with rational `cᵢ`. Values are kept reduced
//! modulo the cyclotomic polynomial `Φ_M`, i.e. in the power basis
//! `1, ζ, …, ζ^{φ(M)−1}`, so two values at the same level are equal exactly
//! when their coefficient vectors are. Values at different levels are
//! compared and combined in `ℚ(ζ_lcm)`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

struct Tables {
    /// `xᵏ mod Φ_M` for `k < M`, as integer coefficient vectors.
    powers: Vec<Vec<i64>>,
}

fn cyclotomic_polynomial(n: u32, cache: &mut HashMap<u32, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = cache.get(&n) {
        return p.clone();
    }
    // xⁿ − 1 divided by Φ_d for every proper divisor d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi_d = cyclotomic_polynomial(d, cache);
            num = divide_exact(&num, &phi_d);
        }
    }
    cache.insert(n, num.clone());
    num
}

/// Quotient of integer polynomials (low degree first) by a monic divisor.
fn divide_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut q = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd];
        q[i] = c;
        for (j, &b) in den.iter().enumerate() {
            rem[i + j] -= c * b;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

fn tables(level: u32) -> Arc<Tables> {
    static CACHE: OnceLock<Mutex<(HashMap<u32, Arc<Tables>>, HashMap<u32, Vec<i64>>)>> = OnceLock::new();
    let mut guard = CACHE
        .get_or_init(Default::default)
        .lock()
        .expect("cyclotomic cache poisoned");
    let (tabs, polys) = &mut *guard;
    if let Some(t) = tabs.get(&level) {
        return Arc::clone(t);
    }
    let phi = cyclotomic_polynomial(level, polys);
    let deg = phi.len() - 1;
    let mut powers = Vec::with_capacity(level as usize);
    let mut cur = vec![0i64; deg];
    cur[0] = 1;
    for _ in 0..level {
        powers.push(cur.clone());
        // multiply by x and reduce the overflow with the monic Φ
        let top = cur[deg - 1];
        let mut next = vec![0i64; deg];
        next[1..deg].copy_from_slice(&cur[..deg - 1]);
        for (j, n) in next.iter_mut().enumerate() {
            *n -= top * phi[j];
        }
        cur = next;
    }
    let t = Arc::new(Tables { powers });
    tabs.insert(level, Arc::clone(&t));
    t
}

/// Euler's totient of the level: the dimension of `ℚ(ζ_M)`.
pub fn totient(level: u32) -> usize {
    tables(level).powers[0].len()
}

#[derive(Clone)]
pub struct CycSum {
    level: u32,
    coeffs: Vec<Rational64>,
}

impl CycSum {
    pub fn zero(level: u32) -> Self {
        assert!(level >= 1, "level must be positive");
        CycSum {
            level,
            coeffs: vec![Rational64::zero(); totient(level)],
        }
    }

    pub fn from_rational(level: u32, r: Rational64) -> Self {
        let mut z = Self::zero(level);
        z.coeffs[0] = r;
        z
    }

    pub fn from_int(level: u32, n: i64) -> Self {
        Self::from_rational(level, Rational64::from_integer(n))
    }

    pub fn one(level: u32) -> Self {
        Self::from_int(level, 1)
    }

    /// `ζ_M^k`.
    pub fn root(level: u32, k: i64) -> Self {
        let mut z = Self::zero(level);
        z.add_power(k, Rational64::one());
        z
    }

    /// `Σ cᵢ ζ_Mⁱ` for arbitrary-length input; indices are read mod `M`.
    pub fn from_coefficients(level: u32, coeffs: &[Rational64]) -> Self {
        let mut z = Self::zero(level);
        for (i, &c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                z.add_power(i as i64, c);
            }
        }
        z
    }

    fn add_power(&mut self, k: i64, c: Rational64) {
        let t = tables(self.level);
        let row = &t.powers[k.rem_euclid(self.level as i64) as usize];
        for (x, &r) in self.coeffs.iter_mut().zip(row) {
            if r != 0 {
                *x += c * Rational64::from_integer(r);
            }
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Coefficients in the power basis `1, ζ, …, ζ^{φ(M)−1}`.
    pub fn coefficients(&self) -> &[Rational64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The same value in `ℚ(ζ_N)` for a multiple `N` of the level.
    pub fn embed(&self, level: u32) -> Self {
        assert!(
            level.is_multiple_of(self.level),
            "ℚ(ζ_{}) does not embed in ℚ(ζ_{level})",
            self.level
        );
        if level == self.level {
            return self.clone();
        }
        let step = (level / self.level) as i64;
        let mut z = Self::zero(level);
        for (i, &c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                z.add_power(i as i64 * step, c);
            }
        }
        z
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        if self.level == other.level {
            return (self.clone(), other.clone());
        }
        let l = self.level.lcm(&other.level);
        (self.embed(l), other.embed(l))
    }

    pub fn scale(&self, r: Rational64) -> Self {
        CycSum {
            level: self.level,
            coeffs: self.coeffs.iter().map(|&c| c * r).collect(),
        }
    }

    /// The rational value, when the sum is rational.
    pub fn as_rational(&self) -> Option<Rational64> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| self.coeffs[0])
    }

    /// Complex approximation `(re, im)`.
    pub fn to_complex(&self) -> (f64, f64) {
        let m = self.level as f64;
        self.coeffs.iter().enumerate().fold((0.0, 0.0), |(re, im), (i, c)| {
            let v = *c.numer() as f64 / *c.denom() as f64;
            let t = std::f64::consts::TAU * i as f64 / m;
            (re + v * t.cos(), im + v * t.sin())
        })
    }

    /// `a+bi` with 12 significant digits, small parts printed as 0.
    pub fn render_complex(&self) -> String {
        let (re, im) = self.to_complex();
        let clean = |x: f64| if x.abs() < 1e-12 { 0.0 } else { x };
        let (re, im) = (clean(re), clean(im));
        let fmt = |x: f64| {
            let s = format!("{:.12}", x);
            let s = s.trim_end_matches('0').trim_end_matches('.').to_string();
            if s == "-0" {
                "0".to_string()
            } else {
                s
            }
        };
        if im == 0.0 {
            fmt(re)
        } else if im < 0.0 {
            format!("{}-{}i", fmt(re), fmt(-im))
        } else {
            format!("{}+{}i", fmt(re), fmt(im))
        }
    }
}

impl PartialEq for CycSum {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.aligned(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycSum {}

impl fmt::Debug for CycSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => write!(f, "ζ{}^{i}", self.level)?,
                (_, false) => write!(f, "{a}·ζ{}^{i}", self.level)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &CycSum {
    type Output = CycSum;
    fn add(self, rhs: &CycSum) -> CycSum {
        let (mut a, b) = self.aligned(rhs);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x += y;
        }
        a
    }
}

impl Add for CycSum {
    type Output = CycSum;
    fn add(self, rhs: CycSum) -> CycSum {
        &self + &rhs
    }
}

impl AddAssign<&CycSum> for CycSum {
    fn add_assign(&mut self, rhs: &CycSum) {
        if self.level == rhs.level {
            for (x, y) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *x += y;
            }
        } else {
            *self = &*self + rhs;
        }
    }
}

impl Neg for &CycSum {
    type Output = CycSum;
    fn neg(self) -> CycSum {
        self.scale(-Rational64::one())
    }
}

impl Neg for CycSum {
    type Output = CycSum;
    fn neg(self) -> CycSum {
        -&self
    }
}

impl Sub for &CycSum {
    type Output = CycSum;
    fn sub(self, rhs: &CycSum) -> CycSum {
        self + &(-rhs)
    }
}

impl Sub for CycSum {
    type Output = CycSum;
    fn sub(self, rhs: CycSum) -> CycSum {
        &self - &rhs
    }
}

impl Mul for &CycSum {
    type Output = CycSum;
    fn mul(self, rhs: &CycSum) -> CycSum {
        if self.level != rhs.level {
            let (a, b) = self.aligned(rhs);
            return &a * &b;
        }
        let (a, b) = (self, rhs);
        let mut out = CycSum::zero(a.level);
        let t = tables(a.level);
        let m = a.level as usize;
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let c = x * y;
                for (o, &r) in out.coeffs.iter_mut().zip(&t.powers[(i + j) % m]) {
                    if r != 0 {
                        *o += c * Rational64::from_integer(r);
                    }
                }
            }
        }
        out
    }
}

impl Mul for CycSum {
    type Output = CycSum;
    fn mul(self, rhs: CycSum) -> CycSum {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn totients() {
        let phi: Vec<usize> = (1..=12).map(totient).collect();
        assert_eq!(phi, vec![1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]);
    }

    #[test]
    fn roots_satisfy_their_relations() {
        // ζ₄² = −1
        assert_eq!(CycSum::root(4, 2), CycSum::from_int(4, -1));
        // 1 + ζ₃ + ζ₃² = 0
        let s = &(&CycSum::root(3, 0) + &CycSum::root(3, 1)) + &CycSum::root(3, 2);
        assert!(s.is_zero());
        // sum of all 12th roots vanishes
        let mut s = CycSum::zero(12);
        for k in 0..12 {
            s += &CycSum::root(12, k);
        }
        assert!(s.is_zero());
        assert_eq!(CycSum::root(6, 3), CycSum::from_int(1, -1));
    }

    #[test]
    fn mixed_levels_compare_in_the_lcm() {
        assert_eq!(CycSum::root(2, 1), CycSum::root(4, 2));
        assert_eq!(CycSum::root(3, 1), CycSum::root(6, 2));
        let p = &CycSum::root(4, 1) * &CycSum::root(6, 1);
        assert_eq!(p, CycSum::root(12, 5));
        assert_eq!(p.level(), 12);
    }

    #[test]
    fn rendering() {
        assert_eq!(CycSum::root(4, 1).render_complex(), "0+1i");
        assert_eq!(CycSum::from_rational(4, r(1, 2)).render_complex(), "0.5");
        assert_eq!(CycSum::root(4, 3).to_string(), "-ζ4^1");
        assert_eq!(CycSum::zero(3).to_string(), "0");
        let x = &CycSum::from_rational(8, r(1, 2)) - &CycSum::root(8, 1).scale(r(3, 2));
        assert_eq!(x.to_string(), "1/2 - 3/2·ζ8^1");
    }

    #[test]
    fn numeric_agreement() {
        let x = &CycSum::root(5, 1) + &CycSum::root(5, 4);
        let (re, im) = x.to_complex();
        assert!((re - 2.0 * (std::f64::consts::TAU / 5.0).cos()).abs() < 1e-12);
        assert!(im.abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn ring_axioms(
            level in 1u32..16,
            a in proptest::collection::vec(-5i64..5, 0..8),
            b in proptest::collection::vec(-5i64..5, 0..8),
            c in proptest::collection::vec(-5i64..5, 0..8),
        ) {
            let mk = |v: &[i64]| CycSum::from_coefficients(
                level,
                &v.iter().map(|&x| Rational64::from_integer(x)).collect::<Vec<_>>(),
            );
            let (a, b, c) = (mk(&a), mk(&b), mk(&c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            // evaluation is a ring map into ℂ
            let (pr, pi) = (&a * &b).to_complex();
            let ((ar, ai), (br, bi)) = (a.to_complex(), b.to_complex());
            prop_assert!((pr - (ar * br - ai * bi)).abs() < 1e-6);
            prop_assert!((pi - (ar * bi + ai * br)).abs() < 1e-6);
        }

        #[test]
        fn embedding_is_multiplicative(k in -20i64..20, j in -20i64..20, level in 1u32..10, mult in 1u32..4) {
            let a = CycSum::root(level, k);
            let b = CycSum::root(level, j);
            let big = level * mult;
            prop_assert_eq!((&a * &b).embed(big), &a.embed(big) * &b.embed(big));
            prop_assert_eq!(&a * &b, CycSum::root(level, k + j));
        }
    }
}
