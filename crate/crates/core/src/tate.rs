//! Laurent series of class functions and the rotation condition.
//!
//! Class functions live on a finite groupoid `T` (a twisted groupoid, or `𝔹C̃`
//! for an extension): one value per conjugacy class of loops, where loops
//! `ℓ` and `h⁻¹ℓh` are conjugate for any arrow `h` out of `src ℓ`. A series
//! `Σ_j V_j q^{j/N}` satisfies the rotation condition for a central family
//! `ξ` of order `N` when `V_j(ξ·x) = ζ_N^j · V_j(x)` for every `j` and loop
//! `x`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::Rational64;

use crate::center::{family_order, family_pow, is_central_family, Family};
use crate::cochain::Cochain;
use crate::cyclotomic::CycSum;
use crate::error::{Error, Result};
use crate::extension::{cyclic_restriction_order, LiftOrder, TwistedGroupoid};
use crate::groupoid::FiniteGroupoid;
use crate::inertia::InertiaDecomposition;
use crate::rep::twisted_regular_bundle;
use crate::transgression::{transgress3, TransgressionResult};

/// Conjugacy classes of loops. Representatives are least arrow indices.
#[derive(Debug)]
pub struct LoopClasses {
    groupoid: Arc<FiniteGroupoid>,
    reps: Vec<usize>,
    class_of: Vec<Option<usize>>,
}

impl LoopClasses {
    pub fn new(groupoid: Arc<FiniteGroupoid>) -> Self {
        let mut class_of = vec![None; groupoid.arrows()];
        let mut reps = Vec::new();
        for l in groupoid.loops() {
            if class_of[l].is_some() {
                continue;
            }
            let c = reps.len();
            reps.push(l);
            for &h in groupoid.out_arrows(groupoid.src(l)) {
                class_of[groupoid.conjugate(l, h)] = Some(c);
            }
        }
        LoopClasses {
            groupoid,
            reps,
            class_of,
        }
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.groupoid
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn representatives(&self) -> &[usize] {
        &self.reps
    }

    /// Class index of a loop; `None` for arrows that are not loops.
    pub fn class_of(&self, l: usize) -> Option<usize> {
        self.class_of.get(l).copied().flatten()
    }
}

/// One exact value per loop class.
#[derive(Debug, Clone)]
pub struct ClassFunction {
    classes: Arc<LoopClasses>,
    values: Vec<CycSum>,
}

impl PartialEq for ClassFunction {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.classes, &other.classes) && self.values == other.values
    }
}

impl ClassFunction {
    pub fn new(classes: Arc<LoopClasses>, values: Vec<CycSum>) -> Result<Self> {
        if values.len() != classes.len() {
            return Err(Error::Dimension(format!(
                "{} values for {} classes",
                values.len(),
                classes.len()
            )));
        }
        Ok(ClassFunction { classes, values })
    }

    pub fn zero(classes: Arc<LoopClasses>, level: u32) -> Self {
        let values = vec![CycSum::zero(level); classes.len()];
        ClassFunction { classes, values }
    }

    /// Evaluates `f` at each class representative.
    pub fn from_fn(classes: Arc<LoopClasses>, f: impl Fn(usize) -> CycSum) -> Self {
        let values = classes.reps.iter().map(|&r| f(r)).collect();
        ClassFunction { classes, values }
    }

    pub fn classes(&self) -> &Arc<LoopClasses> {
        &self.classes
    }

    pub fn values(&self) -> &[CycSum] {
        &self.values
    }

    /// Value at a loop, through its class.
    pub fn eval(&self, l: usize) -> Result<&CycSum> {
        self.classes
            .class_of(l)
            .map(|c| &self.values[c])
            .ok_or_else(|| Error::Precondition(format!("arrow {l} is not a loop")))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(CycSum::is_zero)
    }

    fn check_same(&self, other: &ClassFunction) -> Result<()> {
        if !Arc::ptr_eq(&self.classes, &other.classes) {
            return Err(Error::Dimension("class functions on different groupoids".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &ClassFunction) -> Result<ClassFunction> {
        self.check_same(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(ClassFunction {
            classes: Arc::clone(&self.classes),
            values,
        })
    }

    pub fn scale(&self, s: &CycSum) -> ClassFunction {
        ClassFunction {
            classes: Arc::clone(&self.classes),
            values: self.values.iter().map(|v| v * s).collect(),
        }
    }

    /// `x ↦ f(ξ·x)` for a central family `ξ`.
    pub fn translate(&self, xi: &[usize]) -> Result<ClassFunction> {
        let g = &self.classes.groupoid;
        let values = self
            .classes
            .reps
            .iter()
            .map(|&r| self.eval(g.compose(xi[g.src(r)], r)).cloned())
            .collect::<Result<Vec<_>>>()?;
        Ok(ClassFunction {
            classes: Arc::clone(&self.classes),
            values,
        })
    }
}

/// `Σ_j V_j q^{j/N}` with finitely many nonzero `V_j`.
#[derive(Debug, Clone)]
pub struct TateSeries {
    denominator: usize,
    classes: Arc<LoopClasses>,
    coefficients: BTreeMap<i64, ClassFunction>,
}

impl PartialEq for TateSeries {
    fn eq(&self, other: &Self) -> bool {
        self.denominator == other.denominator
            && Arc::ptr_eq(&self.classes, &other.classes)
            && self.coefficients == other.coefficients
    }
}

impl TateSeries {
    /// Zero coefficients are dropped.
    pub fn new(
        denominator: usize,
        classes: Arc<LoopClasses>,
        coefficients: BTreeMap<i64, ClassFunction>,
    ) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::Precondition("the denominator must be at least 1".into()));
        }
        if coefficients.values().any(|f| !Arc::ptr_eq(f.classes(), &classes)) {
            return Err(Error::Dimension("coefficients on different groupoids".into()));
        }
        let coefficients = coefficients.into_iter().filter(|(_, f)| !f.is_zero()).collect();
        Ok(TateSeries {
            denominator,
            classes,
            coefficients,
        })
    }

    pub fn zero(denominator: usize, classes: Arc<LoopClasses>) -> Result<Self> {
        Self::new(denominator, classes, BTreeMap::new())
    }

    pub fn denominator(&self) -> usize {
        self.denominator
    }

    pub fn classes(&self) -> &Arc<LoopClasses> {
        &self.classes
    }

    pub fn coefficients(&self) -> &BTreeMap<i64, ClassFunction> {
        &self.coefficients
    }

    pub fn coefficient(&self, j: i64) -> Option<&ClassFunction> {
        self.coefficients.get(&j)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// `Σ_j V_j`, the value at `q = 1`.
    pub fn sum_coefficients(&self, level: u32) -> ClassFunction {
        self.coefficients
            .values()
            .fold(ClassFunction::zero(Arc::clone(&self.classes), level), |acc, f| {
                acc.add(f).expect("same classes")
            })
    }

    /// Every coefficient precomposed with `x ↦ ξ·x`.
    pub fn translate(&self, xi: &[usize]) -> Result<TateSeries> {
        let coefficients = self
            .coefficients
            .iter()
            .map(|(&j, f)| Ok((j, f.translate(xi)?)))
            .collect::<Result<_>>()?;
        TateSeries::new(self.denominator, Arc::clone(&self.classes), coefficients)
    }

    /// Substitutes `q^{1/N} ↦ ζ_N^k q^{1/N}`: coefficient `j` is scaled by
    /// `ζ_N^{jk}`.
    pub fn rotate_q(&self, k: i64) -> TateSeries {
        let n = self.denominator as u32;
        let coefficients = self
            .coefficients
            .iter()
            .map(|(&j, f)| (j, f.scale(&CycSum::root(n, j * k))))
            .collect();
        TateSeries {
            denominator: self.denominator,
            classes: Arc::clone(&self.classes),
            coefficients,
        }
    }

    /// Moves every coefficient `by` slots up.
    pub fn shift(&self, by: i64) -> TateSeries {
        TateSeries {
            denominator: self.denominator,
            classes: Arc::clone(&self.classes),
            coefficients: self.coefficients.iter().map(|(&j, f)| (j + by, f.clone())).collect(),
        }
    }

    /// Only integral powers of `q` occur.
    pub fn is_integral(&self) -> bool {
        let n = self.denominator as i64;
        self.coefficients.keys().all(|j| j.rem_euclid(n) == 0)
    }

    /// Invariance under `q ↦ e^{2πi}q`, i.e. under `τ ↦ τ + 1`.
    pub fn is_tau_shift_invariant(&self) -> bool {
        self.rotate_q(1) == *self
    }
}

/// Where the rotation condition fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationViolation {
    pub j: i64,
    /// Representative of the failing loop class.
    pub class_rep: usize,
}

fn check_lift(series: &TateSeries, xi: &[usize]) -> Result<()> {
    let g = &series.classes.groupoid;
    if !is_central_family(g, xi) {
        return Err(Error::Precondition("the lift is not a central family".into()));
    }
    let n = family_order(g, xi);
    if n != series.denominator {
        return Err(Error::Dimension(format!(
            "series denominator {} differs from the lift order {n}",
            series.denominator
        )));
    }
    Ok(())
}

/// `V_j(ξ·x) = ζ_N^j·V_j(x)` for all `j` and classes; the first failure.
pub fn rotation_check(series: &TateSeries, xi: &[usize]) -> Result<Option<RotationViolation>> {
    check_lift(series, xi)?;
    let g = &series.classes.groupoid;
    let n = series.denominator as u32;
    for (&j, f) in &series.coefficients {
        let z = CycSum::root(n, j);
        for &r in series.classes.representatives() {
            let moved = f.eval(g.compose(xi[g.src(r)], r))?;
            if *moved != f.eval(r)? * &z {
                return Ok(Some(RotationViolation { j, class_rep: r }));
            }
        }
    }
    Ok(None)
}

/// The same condition computed on whole series: translating by `ξ` equals
/// rotating `q^{1/N}` by `ζ_N`.
pub fn moonshine_transform_check(series: &TateSeries, xi: &[usize]) -> Result<bool> {
    check_lift(series, xi)?;
    Ok(series.translate(xi)? == series.rotate_q(1))
}

/// `V_j(x) = (1/N) Σ_t ζ_N^{−jt} χ(ξ^t·x)` for `j = 0..N`.
pub fn q_graded_projection(chi: &ClassFunction, xi: &[usize]) -> Result<TateSeries> {
    let g = Arc::clone(&chi.classes.groupoid);
    if !is_central_family(&g, xi) {
        return Err(Error::Precondition("the lift is not a central family".into()));
    }
    let n = family_order(&g, xi);
    let powers: Vec<Family> = (0..n).map(|t| family_pow(&g, xi, t)).collect();
    let nn = n as u32;
    let inv_n = Rational64::new(1, n as i64);
    let roots: Vec<CycSum> = (0..n as i64).map(|k| CycSum::root(nn, -k)).collect();
    // χ(ξ^t·r) for every class representative r, zeros dropped
    let orbits: Vec<Vec<(usize, &CycSum)>> = chi
        .classes
        .reps
        .iter()
        .map(|&r| {
            let x = g.src(r);
            powers
                .iter()
                .enumerate()
                .map(|(t, p)| (t, chi.eval(g.compose(p[x], r)).expect("translate of a loop is a loop")))
                .filter(|(_, v)| !v.is_zero())
                .collect()
        })
        .collect();
    let mut coefficients = BTreeMap::new();
    for j in 0..n {
        let values = orbits
            .iter()
            .map(|orbit| {
                let mut acc = CycSum::zero(nn);
                for &(t, v) in orbit {
                    acc += &(v * &roots[(j * t) % n]);
                }
                acc.scale(inv_n)
            })
            .collect();
        coefficients.insert(j as i64, ClassFunction::new(Arc::clone(&chi.classes), values)?);
    }
    TateSeries::new(n, Arc::clone(&chi.classes), coefficients)
}

/// Character of the twisted regular bundle extended to the twisted
/// groupoid: `(a, z) ↦ ζ_m^z · trace μ(a)`.
pub fn twisted_regular_character(tw: &TwistedGroupoid, classes: Arc<LoopClasses>) -> Result<ClassFunction> {
    let bundle = twisted_regular_bundle(tw.theta())?;
    let m = tw.modulus();
    Ok(ClassFunction::from_fn(classes, |r| {
        let (a, z) = tw.split(r);
        &CycSum::root(m, z as i64) * &bundle.character_at(a)
    }))
}

/// For a normalised `α`, the identity class restricts to the trivial twist.
pub fn identity_summand_triviality(alpha: &Cochain, decomposition: Arc<InertiaDecomposition>) -> Result<bool> {
    alpha.check_normalized()?;
    let res = transgress3(alpha, decomposition)?;
    Ok(res.restrict_to_centralizer(0)?.is_trivial())
}

/// The summand of one conjugacy class.
#[derive(Debug, Clone)]
pub struct TateSummand {
    pub rep: usize,
    /// `(X^g⫽C_g)_{θ_g}`.
    pub twisted: Arc<TwistedGroupoid>,
    pub classes: Arc<LoopClasses>,
    /// `g̃`, one loop of the twisted groupoid per object of `X^g⫽C_g`.
    pub lift: Family,
    pub lift_order: LiftOrder,
    pub series: TateSeries,
}

impl TateSummand {
    pub fn denominator(&self) -> usize {
        self.series.denominator()
    }
}

#[derive(Debug, Clone)]
pub struct TateElement {
    pub transgression: TransgressionResult,
    /// One per conjugacy class, in class order.
    pub summands: Vec<TateSummand>,
}

/// The twisted groupoid, loop classes and central lift `g̃ = (g, 0)` for
/// each conjugacy class.
pub struct SummandFrame {
    pub rep: usize,
    pub twisted: Arc<TwistedGroupoid>,
    pub classes: Arc<LoopClasses>,
    pub lift: Family,
    pub lift_order: LiftOrder,
}

/// Builds the per-class frames of a transgression.
pub fn summand_frames(res: &TransgressionResult) -> Result<Vec<SummandFrame>> {
    let ag = &res.decomposition.action_groupoid;
    res.classes
        .iter()
        .map(|ct| {
            let comp = res.component(ct.rep).expect("class has a component");
            let twisted = Arc::new(TwistedGroupoid::new(ct.theta.clone())?);
            let local_g = comp.centralizer.position(ct.rep).expect("g centralises itself");
            let domain = &comp.domain;
            let base_family: Family = (0..domain.groupoid.objects())
                .map(|x| domain.arrow(x, local_g))
                .collect();
            let zero = twisted.zero_lift(&base_family);
            let lift = if is_central_family(twisted.groupoid(), &zero) {
                zero
            } else {
                twisted.central_lift(&base_family)?.ok_or_else(|| {
                    Error::Precondition(format!("class {}: no central lift of g exists", ct.rep))
                })?
            };
            let h = cyclic_restriction_order(&res.alpha, ag, ct.rep)?;
            let lift_order = twisted.lift_order(&lift, &base_family, h);
            let classes = Arc::new(LoopClasses::new(Arc::clone(twisted.groupoid())));
            Ok(SummandFrame {
                rep: ct.rep,
                twisted,
                classes,
                lift,
                lift_order,
            })
        })
        .collect()
}

/// Assembles an element from per-class series, or from the `q`-graded
/// projections of the twisted regular characters when `series` is `None`.
/// Supplied series must be built on the classes of [`summand_frames`].
pub fn assemble_tetk_element(
    alpha: &Cochain,
    decomposition: Arc<InertiaDecomposition>,
    series: Option<BTreeMap<usize, TateSeries>>,
) -> Result<TateElement> {
    let res = transgress3(alpha, decomposition)?;
    let frames = summand_frames(&res)?;
    let mut supplied = series;
    let summands = frames
        .into_iter()
        .map(|fr| {
            let s = match supplied.as_mut() {
                Some(map) => map
                    .remove(&fr.rep)
                    .ok_or_else(|| Error::Precondition(format!("no series for class {}", fr.rep)))?,
                None => {
                    let chi = twisted_regular_character(&fr.twisted, Arc::clone(&fr.classes))?;
                    q_graded_projection(&chi, &fr.lift)?
                }
            };
            if let Some(v) = rotation_check(&s, &fr.lift)? {
                return Err(Error::Precondition(format!(
                    "class {}: rotation condition fails at q^{}/{} on loop {}",
                    fr.rep,
                    v.j,
                    s.denominator(),
                    v.class_rep
                )));
            }
            Ok(TateSummand {
                rep: fr.rep,
                twisted: fr.twisted,
                classes: fr.classes,
                lift: fr.lift,
                lift_order: fr.lift_order,
                series: s,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(extra) = supplied.and_then(|m| m.keys().next().copied()) {
        return Err(Error::Precondition(format!("{extra} is not a class representative")));
    }
    Ok(TateElement {
        transgression: res,
        summands,
    })
}
