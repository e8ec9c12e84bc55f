//! Transgression of cochains on a groupoid to its inertia groupoid.
//!
//! For a loop `ℓ` at `x` and composable arrows `a : x → y`, `b : y → z` the
//! 2-cochain on `ΛG` is
//!
//! ```text
//! θ(ℓ; a, b) = α(ℓ, a, b) · α(a, b, (ab)⁻¹ℓ(ab)) · α(a, a⁻¹ℓa, b)⁻¹
//! ```
//!
//! and one degree lower `F(ℓ; a) = β(a, a⁻¹ℓa) · β(ℓ, a)⁻¹`, so that the
//! transgression of `δβ` is `δF`. On `X⫽G` restricted to the class of `g`
//! the first formula becomes `θ_g(x; h, k) = α(x; g, h, k) · α(x; h, k, g) ·
//! α(x; h, g, k)⁻¹` on `X^g⫽C_g`.

use std::sync::Arc;

use crate::cochain::{same_groupoid, Cochain, CocycleViolation};
use crate::error::{Error, Result};
use crate::exec::Strategy;
use crate::inertia::{DecompositionComponent, InertiaDecomposition, InertiaGroupoid};

fn check_base(c: &Cochain, inertia: &InertiaGroupoid, degree: usize) -> Result<()> {
    if c.degree() != degree {
        return Err(Error::Dimension(format!(
            "expected a degree-{degree} cochain, got degree {}",
            c.degree()
        )));
    }
    if !same_groupoid(c.groupoid(), &inertia.base) {
        return Err(Error::Dimension("cochain does not live on the inertia base".into()));
    }
    Ok(())
}

/// The transgression formula with no precondition checks. Used where the
/// input is deliberately not a normalised cocycle, e.g. `δβ` for random `β`.
pub fn transgression_formula(alpha: &Cochain, inertia: &InertiaGroupoid) -> Result<Cochain> {
    check_base(alpha, inertia, 3)?;
    let base = &inertia.base;
    let m = alpha.modulus() as i64;
    Cochain::from_fn(Arc::clone(&inertia.groupoid), 2, alpha.modulus(), |t| {
        let (o, a) = inertia.split(t[0]);
        let (_, b) = inertia.split(t[1]);
        let l = inertia.loops[o];
        let ab = base.compose(a, b);
        let l_a = base.conjugate(l, a);
        let l_ab = base.conjugate(l, ab);
        let v = alpha.exponent(&[l, a, b]) as i64 + alpha.exponent(&[a, b, l_ab]) as i64
            - alpha.exponent(&[a, l_a, b]) as i64;
        v.rem_euclid(m)
    })
}

/// `F(ℓ; a) = β(a, a⁻¹ℓa) · β(ℓ, a)⁻¹`, a 1-cochain on the inertia groupoid.
pub fn transgress2(beta: &Cochain, inertia: &InertiaGroupoid) -> Result<Cochain> {
    check_base(beta, inertia, 2)?;
    let base = &inertia.base;
    Cochain::from_fn(Arc::clone(&inertia.groupoid), 1, beta.modulus(), |t| {
        let (o, a) = inertia.split(t[0]);
        let l = inertia.loops[o];
        beta.exponent(&[a, base.conjugate(l, a)]) as i64 - beta.exponent(&[l, a]) as i64
    })
}

/// `θ_g` on `X^g⫽C_g`, straight from `α`.
pub fn restrict_to_centralizer(
    alpha: &Cochain,
    decomposition: &InertiaDecomposition,
    component: &DecompositionComponent,
) -> Result<Cochain> {
    let ag = &decomposition.action_groupoid;
    if alpha.degree() != 3 || !same_groupoid(alpha.groupoid(), &ag.groupoid) {
        return Err(Error::Dimension(
            "expected a degree-3 cochain on the decomposed action groupoid".into(),
        ));
    }
    let g = component.rep;
    let r = &component.restricted;
    let domain = &component.domain;
    Cochain::from_fn(Arc::clone(&domain.groupoid), 2, alpha.modulus(), |t| {
        let (x, h) = domain.split(t[0]);
        let (_, k) = domain.split(t[1]);
        let (x, h, k) = (r.points[x], r.embedding[h], r.embedding[k]);
        let e = |els: [usize; 3]| alpha.exponent(&ag.tuple(x, &els)) as i64;
        e([g, h, k]) + e([h, k, g]) - e([h, g, k])
    })
}

/// `θ_g` for one conjugacy class.
#[derive(Debug, Clone)]
pub struct ClassTransgression {
    pub rep: usize,
    /// On `decomposition.component(rep).domain`.
    pub theta: Cochain,
}

#[derive(Debug, Clone)]
pub struct TransgressionResult {
    pub alpha: Cochain,
    pub decomposition: Arc<InertiaDecomposition>,
    /// On the full inertia groupoid.
    pub theta: Cochain,
    /// One entry per conjugacy class, in class order.
    pub classes: Vec<ClassTransgression>,
}

impl TransgressionResult {
    /// `θ_g` for a class representative `g`.
    pub fn restrict_to_centralizer(&self, rep: usize) -> Result<&Cochain> {
        self.classes
            .iter()
            .find(|c| c.rep == rep)
            .map(|c| &c.theta)
            .ok_or_else(|| {
                Error::Precondition(format!("{rep} is not a conjugacy class representative"))
            })
    }

    pub fn component(&self, rep: usize) -> Option<&DecompositionComponent> {
        self.decomposition.component(rep)
    }
}

/// Transgression of a normalised 3-cocycle on `X⫽G`.
///
/// Checks the input, computes `θ` on `Λ(X⫽G)` and each `θ_g`, and
/// cross-checks that `θ_g` is the pullback of `θ` along the class functor
/// and that `θ` is a cocycle.
pub fn transgress3(alpha: &Cochain, decomposition: Arc<InertiaDecomposition>) -> Result<TransgressionResult> {
    alpha.check_cocycle()?;
    alpha.check_normalized()?;
    let theta = transgression_formula(alpha, &decomposition.inertia)?;
    if let Some(v) = theta.cocycle_violation()? {
        return Err(Error::NotCocycle {
            tuple: v.tuple,
            exponent: v.exponent,
            modulus: theta.modulus(),
        });
    }
    let classes = decomposition
        .components
        .iter()
        .map(|comp| {
            let restricted = restrict_to_centralizer(alpha, &decomposition, comp)?;
            let pulled = theta.pullback(&comp.into_inertia)?;
            if pulled != restricted {
                let i = (0..pulled.len())
                    .find(|&i| pulled.values()[i] != restricted.values()[i])
                    .expect("values differ");
                return Err(Error::Precondition(format!(
                    "class {}: restriction and pullback differ at {:?}",
                    comp.rep,
                    restricted.tuple(i)
                )));
            }
            Ok(ClassTransgression {
                rep: comp.rep,
                theta: restricted,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TransgressionResult {
        alpha: alpha.clone(),
        decomposition,
        theta,
        classes,
    })
}

/// A tuple where the transgression of `δβ` and `δF` disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareCounterexample {
    pub tuple: Vec<usize>,
    pub transgressed: u32,
    pub coboundary: u32,
}

#[derive(Debug, Clone)]
pub enum LemmaReport {
    /// Degree-3 input: the transgression of a cocycle is a cocycle.
    Cocycle {
        theta: Cochain,
        violation: Option<CocycleViolation>,
    },
    /// Degree-2 input: the transgression of `δβ` is `δF` with `F` the
    /// transgression of `β`.
    Coboundary {
        witness: Cochain,
        counterexample: Option<SquareCounterexample>,
    },
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        match self {
            LemmaReport::Cocycle { violation, .. } => violation.is_none(),
            LemmaReport::Coboundary { counterexample, .. } => counterexample.is_none(),
        }
    }
}

/// Checks the lemma matching the input degree: a 3-cocycle `α` or an
/// arbitrary 2-cochain `β`.
pub fn verify_transgression_lemmas(c: &Cochain, inertia: &InertiaGroupoid) -> Result<LemmaReport> {
    verify_transgression_lemmas_with(c, inertia, Strategy::default())
}

pub fn verify_transgression_lemmas_with(
    c: &Cochain,
    inertia: &InertiaGroupoid,
    strategy: Strategy,
) -> Result<LemmaReport> {
    match c.degree() {
        3 => {
            c.check_cocycle()?;
            let theta = transgression_formula(c, inertia)?;
            let violation = theta.cocycle_violation_with(strategy)?;
            Ok(LemmaReport::Cocycle { theta, violation })
        }
        2 => {
            let lhs = transgression_formula(&c.coboundary_with(strategy)?, inertia)?;
            let witness = transgress2(c, inertia)?;
            let rhs = witness.coboundary_with(strategy)?;
            let counterexample = (0..lhs.len())
                .find(|&i| lhs.values()[i] != rhs.values()[i])
                .map(|i| SquareCounterexample {
                    tuple: lhs.tuple(i),
                    transgressed: lhs.values()[i],
                    coboundary: rhs.values()[i],
                });
            Ok(LemmaReport::Coboundary {
                witness,
                counterexample,
            })
        }
        d => Err(Error::Dimension(format!("no transgression lemma in degree {d}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::standard_cyclic_3cocycle;
    use crate::group::FiniteGroup;
    use crate::groupoid::ActionGroupoid;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn point_decomposition(g: FiniteGroup) -> Arc<InertiaDecomposition> {
        Arc::new(InertiaDecomposition::from_action_groupoid(ActionGroupoid::point(Arc::new(g))))
    }

    #[test]
    fn bz2_worked_example() {
        let alpha = standard_cyclic_3cocycle(2, 1).unwrap();
        let res = transgress3(&alpha, point_decomposition(FiniteGroup::cyclic(2))).unwrap();
        assert!(res.restrict_to_centralizer(0).unwrap().is_trivial());
        let t1 = res.restrict_to_centralizer(1).unwrap();
        assert_eq!(t1.exponent(&[1, 1]), 1);
        assert_eq!(t1.values(), &[0, 0, 0, 1]);
        assert!(res.restrict_to_centralizer(5).is_err());
    }

    #[test]
    fn cyclic_order_four_closed_form() {
        let alpha = standard_cyclic_3cocycle(4, 1).unwrap();
        let res = transgress3(&alpha, point_decomposition(FiniteGroup::cyclic(4))).unwrap();
        for a in 0..4 {
            let t = res.restrict_to_centralizer(a).unwrap();
            for b in 0..4 {
                for c in 0..4 {
                    assert_eq!(t.exponent(&[b, c]) as usize, a * ((b + c) / 4) % 4);
                }
            }
        }
    }

    #[test]
    fn rejects_non_normalized() {
        let g = Arc::new(crate::groupoid::FiniteGroupoid::from_group(&FiniteGroup::cyclic(2)));
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let beta = Cochain::random(g, 2, 2, &mut rng).unwrap();
        let alpha = standard_cyclic_3cocycle(2, 1)
            .unwrap()
            .mul(&beta.coboundary().unwrap())
            .unwrap();
        if !alpha.is_normalized() {
            let e = transgress3(&alpha, point_decomposition(FiniteGroup::cyclic(2))).unwrap_err();
            assert!(matches!(e, Error::NotNormalized { .. }));
        }
    }

    #[test]
    fn square_commutes_on_s3() {
        let dec = point_decomposition(FiniteGroup::symmetric(3));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let beta = Cochain::random(Arc::clone(&dec.action_groupoid.groupoid), 2, 6, &mut rng).unwrap();
            let report = verify_transgression_lemmas(&beta, &dec.inertia).unwrap();
            assert!(report.passed(), "{report:?}");
        }
    }

    #[test]
    fn two_cocycle_transgresses_to_one_cocycle() {
        let dec = point_decomposition(FiniteGroup::klein4());
        // a bilinear form is a 2-cocycle
        let beta = Cochain::from_fn(Arc::clone(&dec.action_groupoid.groupoid), 2, 2, |t| {
            ((t[0] >> 1) & t[1] & 1) as i64
        })
        .unwrap();
        assert!(beta.is_cocycle().unwrap());
        assert!(transgress2(&beta, &dec.inertia).unwrap().is_cocycle().unwrap());
    }

    #[test]
    fn normalized_input_gives_normalized_theta() {
        let alpha = standard_cyclic_3cocycle(3, 2).unwrap();
        let res = transgress3(&alpha, point_decomposition(FiniteGroup::cyclic(3))).unwrap();
        assert!(res.theta.is_normalized());
    }
}
