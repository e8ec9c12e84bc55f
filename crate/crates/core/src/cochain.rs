//! `μ_m`-valued cochains on groupoid nerves.
//!
//! A degree-`p` cochain assigns to each composable `p`-tuple a root of unity
//! `e^{2πi·k/m}`, stored as the exponent `k ∈ [0, m)` in the nerve's
//! lexicographic order. Multiplication of values is addition of exponents, so
//! the multiplicative coboundary becomes the alternating sum
//! `(δc)(t) = Σᵢ (−1)ⁱ c(dᵢ t)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use rand::Rng;

use crate::error::{Error, Result};
use crate::exec::Strategy;
use crate::functor::GroupoidFunctor;
use crate::groupoid::FiniteGroupoid;
use crate::nerve::Nerve;
use crate::zmod::ZmodMatrix;

/// `e^{2πi·exponent/modulus}` with the exponent reduced to `[0, modulus)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RootOfUnity {
    modulus: u32,
    exponent: u32,
}

impl RootOfUnity {
    pub fn new(modulus: u32, exponent: i64) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        RootOfUnity {
            modulus,
            exponent: exponent.rem_euclid(modulus as i64) as u32,
        }
    }

    pub fn one(modulus: u32) -> Self {
        Self::new(modulus, 0)
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn exponent(self) -> u32 {
        self.exponent
    }

    pub fn is_one(self) -> bool {
        self.exponent == 0
    }

    /// The same root written over a multiple of its modulus.
    pub fn embed(self, modulus: u32) -> Self {
        assert!(
            modulus.is_multiple_of(self.modulus),
            "cannot embed μ_{} into μ_{modulus}",
            self.modulus
        );
        RootOfUnity {
            modulus,
            exponent: self.exponent * (modulus / self.modulus),
        }
    }

    /// Product, taken over the lcm of the two moduli.
    pub fn mul(self, other: Self) -> Self {
        let m = self.modulus.lcm(&other.modulus);
        let (a, b) = (self.embed(m), other.embed(m));
        RootOfUnity::new(m, a.exponent as i64 + b.exponent as i64)
    }

    pub fn inv(self) -> Self {
        RootOfUnity::new(self.modulus, -(self.exponent as i64))
    }

    pub fn pow(self, k: i64) -> Self {
        let e = (self.exponent as i128 * k as i128).rem_euclid(self.modulus as i128);
        RootOfUnity::new(self.modulus, e as i64)
    }

    /// Multiplicative order.
    pub fn order(self) -> u32 {
        self.modulus / self.exponent.gcd(&self.modulus)
    }

    /// Equal as complex numbers, whatever the moduli.
    pub fn same_value(self, other: Self) -> bool {
        let m = self.modulus.lcm(&other.modulus);
        self.embed(m) == other.embed(m)
    }

    pub fn to_complex(self) -> (f64, f64) {
        let t = std::f64::consts::TAU * self.exponent as f64 / self.modulus as f64;
        (t.cos(), t.sin())
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exponent {
            0 => write!(f, "1"),
            e if 2 * e == self.modulus => write!(f, "-1"),
            e => write!(f, "ζ{}^{}", self.modulus, e),
        }
    }
}

/// A failed cocycle check: the first tuple (in nerve order) where the
/// coboundary is not trivial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocycleViolation {
    pub tuple: Vec<usize>,
    pub exponent: u32,
}

#[derive(Clone)]
pub struct Cochain {
    groupoid: Arc<FiniteGroupoid>,
    nerve: Arc<Nerve>,
    degree: usize,
    modulus: u32,
    values: Vec<u32>,
}

impl fmt::Debug for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Cochain")
            .field("degree", &self.degree)
            .field("modulus", &self.modulus)
            .field("values", &self.values)
            .finish()
    }
}

impl PartialEq for Cochain {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree
            && self.modulus == other.modulus
            && self.values == other.values
            && same_groupoid(&self.groupoid, &other.groupoid)
    }
}

impl Eq for Cochain {}

pub(crate) fn same_groupoid(a: &Arc<FiniteGroupoid>, b: &Arc<FiniteGroupoid>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Cochain {
    /// The constant-one cochain.
    pub fn trivial(groupoid: Arc<FiniteGroupoid>, degree: usize, modulus: u32) -> Result<Self> {
        let nerve = groupoid.nerve(degree)?;
        let values = vec![0; nerve.len()];
        Self::assemble(groupoid, nerve, degree, modulus, values)
    }

    /// Exponents in nerve order, each required to lie in `[0, modulus)`.
    pub fn from_values(
        groupoid: Arc<FiniteGroupoid>,
        degree: usize,
        modulus: u32,
        values: Vec<u32>,
    ) -> Result<Self> {
        let nerve = groupoid.nerve(degree)?;
        if values.len() != nerve.len() {
            return Err(Error::InvalidCochain(format!(
                "{} entries given, the degree-{degree} nerve has {} tuples",
                values.len(),
                nerve.len()
            )));
        }
        if let Some(i) = values.iter().position(|&v| v >= modulus) {
            return Err(Error::InvalidCochain(format!(
                "entry {i} is {} (must be < {modulus})",
                values[i]
            )));
        }
        Self::assemble(groupoid, nerve, degree, modulus, values)
    }

    /// Evaluates `f` on every tuple (the object index in degree 0) and
    /// reduces the result mod `modulus`.
    pub fn from_fn<F>(groupoid: Arc<FiniteGroupoid>, degree: usize, modulus: u32, f: F) -> Result<Self>
    where
        F: Fn(&[usize]) -> i64 + Sync + Send,
    {
        Self::from_fn_with(groupoid, degree, modulus, Strategy::default(), f)
    }

    pub fn from_fn_with<F>(
        groupoid: Arc<FiniteGroupoid>,
        degree: usize,
        modulus: u32,
        strategy: Strategy,
        f: F,
    ) -> Result<Self>
    where
        F: Fn(&[usize]) -> i64 + Sync + Send,
    {
        let nerve = groupoid.nerve_with(degree, strategy)?;
        let m = modulus as i64;
        let values = if degree == 0 {
            (0..nerve.len()).map(|x| f(&[x]).rem_euclid(m) as u32).collect()
        } else {
            strategy.map(nerve.len(), |i| f(&nerve.tuple_usize(i)).rem_euclid(m) as u32)
        };
        Self::assemble(groupoid, nerve, degree, modulus, values)
    }

    /// Uniformly random exponents.
    pub fn random<R: Rng + ?Sized>(
        groupoid: Arc<FiniteGroupoid>,
        degree: usize,
        modulus: u32,
        rng: &mut R,
    ) -> Result<Self> {
        let nerve = groupoid.nerve(degree)?;
        let values = (0..nerve.len()).map(|_| rng.random_range(0..modulus)).collect();
        Self::assemble(groupoid, nerve, degree, modulus, values)
    }

    /// Exponents keyed by tuple; absent tuples are 0.
    pub fn from_sparse(
        groupoid: Arc<FiniteGroupoid>,
        degree: usize,
        modulus: u32,
        entries: &BTreeMap<Vec<usize>, i64>,
    ) -> Result<Self> {
        let mut c = Self::trivial(groupoid, degree, modulus)?;
        for (t, &e) in entries {
            let i = c.index_of(t)?;
            c.values[i] = e.rem_euclid(modulus as i64) as u32;
        }
        Ok(c)
    }

    fn assemble(
        groupoid: Arc<FiniteGroupoid>,
        nerve: Arc<Nerve>,
        degree: usize,
        modulus: u32,
        values: Vec<u32>,
    ) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidCochain("modulus must be positive".into()));
        }
        Ok(Cochain {
            groupoid,
            nerve,
            degree,
            modulus,
            values,
        })
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.groupoid
    }

    pub fn nerve(&self) -> &Arc<Nerve> {
        &self.nerve
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The `i`-th tuple of the nerve (`[x]` in degree 0).
    pub fn tuple(&self, i: usize) -> Vec<usize> {
        if self.degree == 0 {
            vec![i]
        } else {
            self.nerve.tuple_usize(i)
        }
    }

    /// Position of a tuple in the nerve, after checking composability.
    pub fn index_of(&self, t: &[usize]) -> Result<usize> {
        if self.degree == 0 {
            return match t {
                [x] if *x < self.groupoid.objects() => Ok(*x),
                _ => Err(Error::InvalidCochain(format!("{t:?} is not an object"))),
            };
        }
        if t.len() != self.degree || !self.groupoid.is_composable(t) {
            return Err(Error::InvalidCochain(format!(
                "{t:?} is not a composable {}-tuple",
                self.degree
            )));
        }
        Ok(self.nerve.index_of(t))
    }

    /// Exponent at a composable tuple; composability is only debug-checked.
    #[inline]
    pub fn exponent(&self, t: &[usize]) -> u32 {
        if self.degree == 0 {
            return self.values[t[0]];
        }
        debug_assert!(self.groupoid.is_composable(t), "{t:?} not composable");
        self.values[self.nerve.index_of(t)]
    }

    pub fn value(&self, t: &[usize]) -> RootOfUnity {
        RootOfUnity::new(self.modulus, self.exponent(t) as i64)
    }

    /// Overwrites one entry; for fault injection and hand-built tables.
    pub fn set(&mut self, t: &[usize], exponent: i64) -> Result<()> {
        let i = self.index_of(t)?;
        self.values[i] = exponent.rem_euclid(self.modulus as i64) as u32;
        Ok(())
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    fn check_compatible(&self, other: &Cochain) -> Result<()> {
        if self.degree != other.degree || !same_groupoid(&self.groupoid, &other.groupoid) {
            return Err(Error::Dimension(format!(
                "cochains of degree {} and {} on different nerves",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    /// The same values over `μ_modulus`, a multiple of the current modulus.
    pub fn embed(&self, modulus: u32) -> Result<Cochain> {
        if modulus == 0 || !modulus.is_multiple_of(self.modulus) {
            return Err(Error::Dimension(format!(
                "μ_{} does not embed in μ_{modulus}",
                self.modulus
            )));
        }
        let k = modulus / self.modulus;
        let mut c = self.clone();
        c.modulus = modulus;
        c.values.iter_mut().for_each(|v| *v *= k);
        Ok(c)
    }

    /// Pointwise product of values, over the lcm of the moduli.
    pub fn mul(&self, other: &Cochain) -> Result<Cochain> {
        self.check_compatible(other)?;
        let m = self.modulus.lcm(&other.modulus);
        let (a, b) = (self.embed(m)?, other.embed(m)?);
        let mut out = a;
        for (x, &y) in out.values.iter_mut().zip(&b.values) {
            *x = ((*x as u64 + y as u64) % m as u64) as u32;
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Cochain {
        let mut c = self.clone();
        let m = self.modulus;
        c.values.iter_mut().for_each(|v| *v = (m - *v) % m);
        c
    }

    /// `self · other⁻¹`.
    pub fn div(&self, other: &Cochain) -> Result<Cochain> {
        self.mul(&other.inverse())
    }

    /// `δc` under the default strategy.
    pub fn coboundary(&self) -> Result<Cochain> {
        self.coboundary_with(Strategy::default())
    }

    pub fn coboundary_with(&self, strategy: Strategy) -> Result<Cochain> {
        let g = &self.groupoid;
        let next = g.nerve_with(self.degree + 1, strategy)?;
        let values = strategy.map(next.len(), |i| self.coboundary_at(&next, i));
        Self::assemble(Arc::clone(g), next, self.degree + 1, self.modulus, values)
    }

    #[inline]
    fn coboundary_at(&self, next: &Nerve, i: usize) -> u32 {
        let mut faces = Vec::with_capacity(self.degree + 2);
        next.face_indices(&self.groupoid, &self.nerve, i, &mut faces);
        let m = self.modulus as i64;
        let s: i64 = faces
            .iter()
            .enumerate()
            .map(|(j, &f)| {
                let v = self.values[f] as i64;
                if j % 2 == 0 {
                    v
                } else {
                    -v
                }
            })
            .sum();
        s.rem_euclid(m) as u32
    }

    /// The first tuple where `δc` is not trivial, scanning the degree-`p+1`
    /// nerve without materialising the coboundary.
    pub fn cocycle_violation(&self) -> Result<Option<CocycleViolation>> {
        self.cocycle_violation_with(Strategy::default())
    }

    pub fn cocycle_violation_with(&self, strategy: Strategy) -> Result<Option<CocycleViolation>> {
        let next = self.groupoid.nerve_with(self.degree + 1, strategy)?;
        Ok(strategy
            .position(next.len(), |i| self.coboundary_at(&next, i) != 0)
            .map(|i| CocycleViolation {
                tuple: next.tuple_usize(i),
                exponent: self.coboundary_at(&next, i),
            }))
    }

    pub fn is_cocycle(&self) -> Result<bool> {
        Ok(self.cocycle_violation()?.is_none())
    }

    /// `Ok` for a cocycle, otherwise [`Error::NotCocycle`] with the witness.
    pub fn check_cocycle(&self) -> Result<()> {
        match self.cocycle_violation()? {
            None => Ok(()),
            Some(v) => Err(Error::NotCocycle {
                tuple: v.tuple,
                exponent: v.exponent,
                modulus: self.modulus,
            }),
        }
    }

    fn contains_unit(&self, i: usize) -> bool {
        self.degree > 0 && self.nerve.tuple(i).iter().any(|&a| self.groupoid.is_unit(a as usize))
    }

    /// First tuple containing a unit arrow with a nontrivial value.
    pub fn normalization_violation(&self) -> Option<(Vec<usize>, u32)> {
        (0..self.values.len())
            .find(|&i| self.values[i] != 0 && self.contains_unit(i))
            .map(|i| (self.tuple(i), self.values[i]))
    }

    /// Trivial on every tuple containing a unit arrow.
    pub fn is_normalized(&self) -> bool {
        self.normalization_violation().is_none()
    }

    pub fn check_normalized(&self) -> Result<()> {
        match self.normalization_violation() {
            None => Ok(()),
            Some((tuple, exponent)) => Err(Error::NotNormalized { tuple, exponent }),
        }
    }

    /// A cohomologous normalised cocycle `α' = α·δβ` together with `β`.
    ///
    /// `δβ` restricted to unit-containing tuples only involves `β` on
    /// unit-containing tuples, so the linear system over `ℤ/m` is small:
    /// one row per unit-containing `p`-tuple, one column per lower tuple
    /// that appears with a nonzero net coefficient.
    pub fn normalize(&self) -> Result<(Cochain, Cochain)> {
        if self.degree == 0 {
            return Err(Error::Precondition("degree-0 cochains have no normalisation".into()));
        }
        self.check_cocycle()?;
        let g = Arc::clone(&self.groupoid);
        let lower_nerve = g.nerve(self.degree - 1)?;
        let lower_len = lower_nerve.len();
        if self.is_normalized() {
            let beta = Cochain::trivial(g, self.degree - 1, self.modulus)?;
            return Ok((self.clone(), beta));
        }
        let rows: Vec<usize> = (0..self.values.len()).filter(|&i| self.contains_unit(i)).collect();
        let m = self.modulus as i64;
        let mut coeffs: Vec<BTreeMap<usize, i64>> = Vec::with_capacity(rows.len());
        let mut faces = Vec::new();
        for &i in &rows {
            self.nerve.face_indices(&g, &lower_nerve, i, &mut faces);
            let mut row = BTreeMap::new();
            for (j, &f) in faces.iter().enumerate() {
                *row.entry(f).or_insert(0) += if j % 2 == 0 { 1 } else { -1 };
            }
            row.retain(|_, c: &mut i64| c.rem_euclid(m) != 0);
            coeffs.push(row);
        }
        let mut column_of = BTreeMap::new();
        for row in &coeffs {
            for &f in row.keys() {
                let n = column_of.len();
                column_of.entry(f).or_insert(n);
            }
        }
        let mut a = ZmodMatrix::zeros(rows.len(), column_of.len(), self.modulus as u64);
        for (r, row) in coeffs.iter().enumerate() {
            for (f, &c) in row {
                a.add(r, column_of[f], c);
            }
        }
        let rhs: Vec<u64> = rows
            .iter()
            .map(|&i| (-(self.values[i] as i64)).rem_euclid(m) as u64)
            .collect();
        let x = a.solve(&rhs)?;
        let mut beta_values = vec![0u32; lower_len];
        for (&f, &c) in &column_of {
            beta_values[f] = x[c] as u32;
        }
        let beta = Cochain::from_values(Arc::clone(&g), self.degree - 1, self.modulus, beta_values)?;
        let normalized = self.mul(&beta.coboundary()?)?;
        debug_assert!(normalized.is_normalized());
        Ok((normalized, beta))
    }

    /// [`Cochain::normalize`] for 3-cocycles.
    pub fn normalize_3cocycle(&self) -> Result<(Cochain, Cochain)> {
        if self.degree != 3 {
            return Err(Error::Dimension(format!(
                "expected a degree-3 cochain, got degree {}",
                self.degree
            )));
        }
        self.normalize()
    }

    /// `F*c`, the cochain `t ↦ c(F t)` on the domain of `F`.
    pub fn pullback(&self, functor: &GroupoidFunctor) -> Result<Cochain> {
        if !same_groupoid(&functor.codomain, &self.groupoid) {
            return Err(Error::Dimension("functor codomain is not the cochain's groupoid".into()));
        }
        let d = Arc::clone(&functor.domain);
        if self.degree == 0 {
            return Cochain::from_fn(d, 0, self.modulus, |t| self.values[functor.obj_map[t[0]]] as i64);
        }
        Cochain::from_fn(d, self.degree, self.modulus, |t| {
            let image: Vec<usize> = t.iter().map(|&a| functor.arr_map[a]).collect();
            self.exponent(&image) as i64
        })
    }

    /// Least `k ≥ 1` such that `c^k` is trivial on the given tuples.
    pub fn order_on<'a>(&self, tuples: impl IntoIterator<Item = &'a [usize]>) -> u32 {
        let g = tuples
            .into_iter()
            .fold(self.modulus, |acc, t| acc.gcd(&self.exponent(t)));
        self.modulus / g
    }

    /// Least `k ≥ 1` with `c^k` trivial.
    pub fn order(&self) -> u32 {
        let g = self.values.iter().fold(self.modulus, |acc, &v| acc.gcd(&v));
        self.modulus / g
    }
}

/// The 3-cocycle on `𝔹ℤ/n` with exponent `k·a·⌊(b + c)/n⌋ mod n`.
pub fn standard_cyclic_3cocycle(n: usize, k: usize) -> Result<Cochain> {
    if n == 0 || k >= n {
        return Err(Error::Precondition(format!("need 0 ≤ k < n, got n = {n}, k = {k}")));
    }
    let g = Arc::new(FiniteGroupoid::from_group(&crate::group::FiniteGroup::cyclic(n)));
    let alpha = Cochain::from_fn(g, 3, n as u32, |t| {
        let (a, b, c) = (t[0], t[1], t[2]);
        (k * a * ((b + c) / n)) as i64
    })?;
    debug_assert!(alpha.is_cocycle().unwrap_or(false));
    Ok(alpha)
}
