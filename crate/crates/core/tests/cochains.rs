use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tetk_core::cochain::standard_cyclic_3cocycle;
use tetk_core::cohomology::{cohomology_group, coboundary_witness};
use tetk_core::fixtures;
use tetk_core::{ActionGroupoid, Cochain, FiniteGroup, FiniteGroupoid, Strategy};

fn groupoids() -> Vec<Arc<FiniteGroupoid>> {
    vec![
        Arc::new(FiniteGroupoid::from_group(&FiniteGroup::cyclic(4))),
        Arc::new(FiniteGroupoid::from_group(&FiniteGroup::symmetric(3))),
        ActionGroupoid::new(Arc::new(fixtures::z2_on_four_points())).groupoid,
    ]
}

/// Evaluates `(δc)(t)` straight from the face formula on tuples, with no
/// nerve indexing.
fn naive_coboundary(c: &Cochain, t: &[usize]) -> u32 {
    let g = c.groupoid();
    let m = c.modulus() as i64;
    let p = t.len();
    let mut acc = 0i64;
    for i in 0..=p {
        let face: Vec<usize> = if p == 1 {
            // faces of an arrow are its endpoints
            vec![if i == 0 { g.tgt(t[0]) } else { g.src(t[0]) }]
        } else if i == 0 {
            t[1..].to_vec()
        } else if i == p {
            t[..p - 1].to_vec()
        } else {
            let mut f = t[..i - 1].to_vec();
            f.push(g.compose(t[i - 1], t[i]));
            f.extend_from_slice(&t[i + 1..]);
            f
        };
        let v = c.exponent(&face) as i64;
        acc += if i % 2 == 0 { v } else { -v };
    }
    acc.rem_euclid(m) as u32
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn coboundary_squares_to_zero(seed in any::<u64>(), which in 0usize..3, p in 0usize..4, m in 2u32..7) {
        let g = Arc::clone(&groupoids()[which]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = Cochain::random(g, p, m, &mut rng).unwrap();
        prop_assert!(c.coboundary().unwrap().coboundary().unwrap().is_trivial());
    }

    #[test]
    fn coboundary_matches_face_formula(seed in any::<u64>(), which in 0usize..3, p in 1usize..4) {
        let g = Arc::clone(&groupoids()[which]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = Cochain::random(g, p, 5, &mut rng).unwrap();
        let d = c.coboundary().unwrap();
        for i in (0..d.len()).step_by(7) {
            prop_assert_eq!(d.values()[i], naive_coboundary(&c, &d.tuple(i)));
        }
    }

    #[test]
    fn strategies_agree(seed in any::<u64>(), which in 0usize..3) {
        let g = Arc::clone(&groupoids()[which]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = Cochain::random(g, 2, 6, &mut rng).unwrap();
        prop_assert_eq!(
            c.coboundary_with(Strategy::Sequential).unwrap(),
            c.coboundary_with(Strategy::Parallel).unwrap()
        );
    }

    #[test]
    fn normalisation_keeps_the_class(seed in any::<u64>(), n in prop::sample::select(vec![2usize, 4]), k in 0usize..4) {
        let k = k % n;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alpha = standard_cyclic_3cocycle(n, k).unwrap();
        let beta = Cochain::random(Arc::clone(alpha.groupoid()), 2, n as u32, &mut rng).unwrap();
        let perturbed = alpha.mul(&beta.coboundary().unwrap()).unwrap();
        let (normal, witness) = perturbed.normalize_3cocycle().unwrap();
        prop_assert!(normal.is_normalized());
        prop_assert!(normal.is_cocycle().unwrap());
        prop_assert_eq!(&normal, &perturbed.mul(&witness.coboundary().unwrap()).unwrap());
        prop_assert!(coboundary_witness(&normal.div(&alpha).unwrap()).unwrap().is_some());
    }

    #[test]
    fn low_cohomology_of_cyclic_groups(n in 1usize..7, m in 1u32..9, p in 1usize..4) {
        // H^p(ℤ/n; μ_m) = ℤ/gcd(n, m) for p ≥ 1
        let g = FiniteGroupoid::from_group(&FiniteGroup::cyclic(n));
        let h = cohomology_group(&g, p, m).unwrap();
        prop_assert_eq!(h.order(), num_integer::gcd(n as u64, m as u64));
    }
}

#[test]
fn standard_cocycles_pass_an_exhaustive_scan() {
    for n in 1..=6 {
        for k in 0..n {
            let alpha = standard_cyclic_3cocycle(n, k).unwrap();
            let nerve = alpha.groupoid().nerve(4).unwrap();
            for i in 0..nerve.len() {
                assert_eq!(naive_coboundary(&alpha, &nerve.tuple_usize(i)), 0, "std({n},{k})");
            }
        }
    }
}

/// Counts cocycles and coboundaries over all `2⁸` cochains on `𝔹ℤ/2`.
#[test]
fn brute_force_h3_of_z2() {
    let g = Arc::new(FiniteGroupoid::from_group(&FiniteGroup::cyclic(2)));
    let all = |p: usize| -> Vec<Cochain> {
        let len = g.nerve(p).unwrap().len();
        (0..1u32 << len)
            .map(|bits| {
                let v = (0..len).map(|i| (bits >> i) & 1).collect();
                Cochain::from_values(Arc::clone(&g), p, 2, v).unwrap()
            })
            .collect()
    };
    let cocycles: Vec<Cochain> = all(3).into_iter().filter(|c| c.is_cocycle().unwrap()).collect();
    let mut boundaries: Vec<Vec<u32>> = all(2).iter().map(|b| b.coboundary().unwrap().values().to_vec()).collect();
    boundaries.sort();
    boundaries.dedup();
    assert_eq!(cocycles.len() / boundaries.len(), 2);
    let alpha = standard_cyclic_3cocycle(2, 1).unwrap();
    assert!(cocycles.contains(&alpha));
    assert!(!boundaries.contains(&alpha.values().to_vec()));
    let h = cohomology_group(&g, 3, 2).unwrap();
    assert_eq!(h.invariant_factors, vec![2]);
    assert!(coboundary_witness(&alpha).unwrap().is_none());
}

#[test]
fn h3_of_small_cyclic_groups() {
    for n in [3, 4] {
        let g = FiniteGroupoid::from_group(&FiniteGroup::cyclic(n));
        assert_eq!(cohomology_group(&g, 3, n as u32).unwrap().order(), n as u64);
    }
}
