use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tetk_core::extension::TwistedGroupoid;
use tetk_core::fixtures;
use tetk_core::loops::DiscreteLoop;
use tetk_core::rep::{twisted_regular_bundle, twisted_regular_rep, verify_twisted_bundle, verify_twisted_rep};
use tetk_core::tate::{
    assemble_tetk_element, moonshine_transform_check, q_graded_projection, rotation_check, summand_frames,
    twisted_regular_character, ClassFunction,
};
use tetk_core::transgression::transgress3;
use tetk_core::{CentralExtension, CycSum, FiniteGroup, GroupAction};

#[test]
fn fourier_inversion_on_every_fixture() {
    for f in fixtures::cocycles().unwrap() {
        let el = assemble_tetk_element(&f.alpha, Arc::clone(&f.decomposition), None).unwrap();
        for s in &el.summands {
            let chi = twisted_regular_character(&s.twisted, Arc::clone(&s.classes)).unwrap();
            let level = s.series.denominator() as u32 * s.twisted.modulus();
            assert_eq!(s.series.sum_coefficients(level).values(), chi.values(), "{} class {}", f.name, s.rep);
            assert!(s.lift_order.divides(), "{} class {}", f.name, s.rep);
            assert_eq!(s.lift_order.lift, s.series.denominator());
            assert!(moonshine_transform_check(&s.series, &s.lift).unwrap());
        }
        assert!(el.summands[0].series.is_integral(), "{}", f.name);
        assert!(el.summands[0].series.is_tau_shift_invariant(), "{}", f.name);
    }
}

#[test]
fn regular_bundles_satisfy_the_twisted_law() {
    for f in fixtures::cocycles().unwrap() {
        let res = transgress3(&f.alpha, Arc::clone(&f.decomposition)).unwrap();
        for c in &res.classes {
            let bundle = twisted_regular_bundle(&c.theta).unwrap();
            assert_eq!(verify_twisted_bundle(&bundle, &c.theta).unwrap(), None, "{}", f.name);
            if c.theta.groupoid().objects() == 1 {
                let rep = twisted_regular_rep(&c.theta).unwrap();
                assert_eq!(verify_twisted_rep(&rep, &c.theta).unwrap(), None, "{}", f.name);
            }
        }
    }
}

#[test]
fn transgressed_twists_have_central_lifts() {
    for f in fixtures::cocycles().unwrap() {
        let res = transgress3(&f.alpha, Arc::clone(&f.decomposition)).unwrap();
        let frames = summand_frames(&res).unwrap();
        assert_eq!(frames.len(), res.classes.len());
        for fr in frames {
            let comp = res.component(fr.rep).unwrap();
            let local_g = comp.centralizer.position(fr.rep).unwrap();
            if comp.domain.groupoid.objects() == 1 {
                let ext = CentralExtension::new(Arc::new(comp.centralizer.group.clone()), fr.twisted.theta().clone()).unwrap();
                assert!(!ext.find_central_lifts(local_g).unwrap().is_empty(), "{}", f.name);
            }
        }
    }
}

#[test]
fn asymmetric_v4_twist_has_no_central_lift() {
    let theta = fixtures::v4_asymmetric_theta().unwrap();
    let ext = CentralExtension::new(Arc::new(FiniteGroup::klein4()), theta.clone()).unwrap();
    assert!(ext.find_central_lifts(fixtures::V4_ASYMMETRIC_G).unwrap().is_empty());
    let tw = TwistedGroupoid::new(theta).unwrap();
    assert_eq!(tw.central_lift(&[fixtures::V4_ASYMMETRIC_G]).unwrap(), None);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Any class function projects onto a series satisfying the rotation
    /// condition, and the projection sums back to the input.
    #[test]
    fn projections_rotate(seed in any::<u64>(), which in 0usize..3) {
        let fixture = [2usize, 5, 9][which];
        let f = &fixtures::cocycles().unwrap()[fixture];
        let res = transgress3(&f.alpha, Arc::clone(&f.decomposition)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for fr in summand_frames(&res).unwrap() {
            let values = (0..fr.classes.len())
                .map(|_| CycSum::root(12, rng.random_range(0..12)).scale(rng.random_range(-3i64..4).into()))
                .collect();
            let chi = ClassFunction::new(Arc::clone(&fr.classes), values).unwrap();
            let s = q_graded_projection(&chi, &fr.lift).unwrap();
            prop_assert_eq!(rotation_check(&s, &fr.lift).unwrap(), None);
            prop_assert_eq!(s.translate(&fr.lift).unwrap(), s.rotate_q(1));
            let total = s.sum_coefficients(12);
            prop_assert_eq!(total.values(), chi.values());
        }
    }

    #[test]
    fn loops_reduce_and_recompose(seed in any::<u64>(), n in 1usize..7) {
        let act = GroupAction::natural_symmetric(3);
        let g = act.group().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // random walk, closed up by the element taking the end back to the start
        let mut vertices = vec![rng.random_range(0..3)];
        let mut edges = Vec::new();
        for _ in 0..n - 1 {
            let e = rng.random_range(0..g.order());
            edges.push(e);
            vertices.push(act.act(*vertices.last().unwrap(), e));
        }
        let last = *vertices.last().unwrap();
        let closing: Vec<usize> = (0..g.order()).filter(|&e| act.act(last, e) == vertices[0]).collect();
        edges.push(closing[rng.random_range(0..closing.len())]);
        let l = DiscreteLoop::new(&act, vertices, edges).unwrap();
        let r = l.reduce(&act);
        prop_assert!(r.is_closed(&act));
        prop_assert_eq!(r.recompose(&act), l);
    }
}
