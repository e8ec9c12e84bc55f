use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tetk_core::center::groupoid_center;
use tetk_core::extension::{cyclic_restriction_order, order_of_lift};
use tetk_core::fixtures;
use tetk_core::inertia::{InertiaDecomposition, InertiaGroupoid};
use tetk_core::transgression::{transgress2, transgress3, transgression_formula, verify_transgression_lemmas};
use tetk_core::{ActionGroupoid, CentralExtension, Cochain, FiniteGroup, FiniteGroupoid, GroupAction};

fn square_bases() -> Vec<Arc<FiniteGroupoid>> {
    vec![
        Arc::new(FiniteGroupoid::from_group(&FiniteGroup::cyclic(2))),
        Arc::new(FiniteGroupoid::from_group(&FiniteGroup::cyclic(4))),
        Arc::new(FiniteGroupoid::from_group(&FiniteGroup::symmetric(3))),
        ActionGroupoid::new(Arc::new(GroupAction::regular(Arc::new(FiniteGroup::cyclic(2))))).groupoid,
    ]
}

/// `θ(ℓ; a, b)` written out from group elements on `𝔹G`, with no inertia
/// indexing: `α(ℓ,a,b) + α(a,b,(ab)⁻¹ℓ(ab)) − α(a,a⁻¹ℓa,b)`.
fn theta_on_group(alpha: &Cochain, g: &FiniteGroup, l: usize, a: usize, b: usize) -> u32 {
    let m = alpha.modulus() as i64;
    let ab = g.mul(a, b);
    let e = |x: usize, y: usize, z: usize| alpha.exponent(&[x, y, z]) as i64;
    (e(l, a, b) + e(a, b, g.conj(l, ab)) - e(a, g.conj(l, a), b)).rem_euclid(m) as u32
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn transgression_commutes_with_coboundary(seed in any::<u64>(), which in 0usize..4, m in 2u32..7) {
        let base = Arc::clone(&square_bases()[which]);
        let inertia = InertiaGroupoid::new(Arc::clone(&base));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let beta = Cochain::random(base, 2, m, &mut rng).unwrap();
        let lhs = transgression_formula(&beta.coboundary().unwrap(), &inertia).unwrap();
        let rhs = transgress2(&beta, &inertia).unwrap().coboundary().unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(verify_transgression_lemmas(&beta, &inertia).unwrap().passed());
    }
}

#[test]
fn every_fixture_transgresses_to_a_cocycle() {
    for f in fixtures::cocycles().unwrap() {
        let res = transgress3(&f.alpha, Arc::clone(&f.decomposition)).unwrap();
        assert!(res.theta.is_cocycle().unwrap(), "{}", f.name);
        for c in &res.classes {
            assert!(c.theta.is_cocycle().unwrap(), "{} class {}", f.name, c.rep);
            assert!(c.theta.is_normalized(), "{} class {}", f.name, c.rep);
        }
        assert!(res.restrict_to_centralizer(0).unwrap().is_trivial(), "{}", f.name);
    }
}

#[test]
fn point_transgression_matches_the_group_formula() {
    let g = FiniteGroup::symmetric(3);
    let f = fixtures::random_s3_cocycle(11).unwrap();
    let res = transgress3(&f.alpha, Arc::clone(&f.decomposition)).unwrap();
    for c in &res.classes {
        let comp = res.component(c.rep).unwrap();
        let cent = &comp.centralizer;
        let t = &c.theta;
        for i in 0..t.len() {
            let tuple = t.tuple(i);
            let (a, b) = (comp.domain.split(tuple[0]).1, comp.domain.split(tuple[1]).1);
            let (a, b) = (cent.embedding[a], cent.embedding[b]);
            assert_eq!(t.values()[i], theta_on_group(&f.alpha, &g, c.rep, a, b));
        }
    }
}

#[test]
fn z2_worked_chain() {
    let f = &fixtures::standard_cocycles().unwrap()[2];
    assert_eq!(f.name, "std(2,1)");
    let res = transgress3(&f.alpha, Arc::clone(&f.decomposition)).unwrap();
    let theta = res.restrict_to_centralizer(1).unwrap();
    assert_eq!(theta.values(), &[0, 0, 0, 1]);
    let ext = CentralExtension::new(Arc::new(FiniteGroup::cyclic(2)), theta.clone()).unwrap();
    assert_eq!(ext.group().order(), 4);
    assert!(ext.group().is_abelian());
    let h = cyclic_restriction_order(&f.alpha, &f.decomposition.action_groupoid, 1).unwrap();
    let order = order_of_lift(&ext, 1, Some(h));
    assert_eq!((order.lift, order.h, order.base), (4, 2, 2));
    assert!(order.divides());
}

#[test]
fn lift_orders_divide_for_all_standard_cocycles() {
    for f in fixtures::standard_cocycles().unwrap() {
        let res = transgress3(&f.alpha, Arc::clone(&f.decomposition)).unwrap();
        let g = f.decomposition.action_groupoid.group();
        for c in &res.classes {
            let ext = CentralExtension::new(Arc::clone(g), c.theta.clone()).unwrap();
            assert!(!ext.find_central_lifts(c.rep).unwrap().is_empty());
            let h = cyclic_restriction_order(&f.alpha, &f.decomposition.action_groupoid, c.rep).unwrap();
            assert!(order_of_lift(&ext, c.rep, Some(h)).divides(), "{} at {}", f.name, c.rep);
        }
    }
}

#[test]
fn class_functors_are_equivalences() {
    for action in [
        GroupAction::point(Arc::new(FiniteGroup::symmetric(3))),
        GroupAction::regular(Arc::new(FiniteGroup::cyclic(2))),
        GroupAction::natural_symmetric(3),
    ] {
        let d = InertiaDecomposition::new(Arc::new(action));
        for comp in &d.components {
            assert!(comp.functor.is_equivalence().holds());
            let local_g = comp.centralizer.position(comp.rep).unwrap();
            let family: Vec<usize> = (0..comp.domain.groupoid.objects())
                .map(|x| comp.domain.arrow(x, local_g))
                .collect();
            assert!(groupoid_center(&comp.domain.groupoid).contains(&family));
        }
    }
}
