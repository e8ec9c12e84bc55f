//! A small bundled corpus of groups, actions and cocycles.
//!
//! Every 3-cocycle here lives on the action groupoid of its
//! [`InertiaDecomposition`], so it can be fed straight into the
//! transgression. The list is deterministic.

use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::action::GroupAction;
use crate::cochain::Cochain;
use crate::error::Result;
use crate::group::FiniteGroup;
use crate::groupoid::{ActionGroupoid, FiniteGroupoid};
use crate::inertia::InertiaDecomposition;

/// Seed used for the bundled random cocycles.
pub const DEFAULT_SEED: u64 = 0x7e7c;

/// `ℤ/1, …, ℤ/8`, `V4`, `S3`, `D4` and `Q8`.
pub fn groups() -> Vec<(String, Arc<FiniteGroup>)> {
    let mut out: Vec<(String, Arc<FiniteGroup>)> = (1..=8)
        .map(|n| (format!("Z/{n}"), Arc::new(FiniteGroup::cyclic(n))))
        .collect();
    out.push(("V4".into(), Arc::new(FiniteGroup::klein4())));
    out.push(("S3".into(), Arc::new(FiniteGroup::symmetric(3))));
    out.push(("D4".into(), Arc::new(FiniteGroup::dihedral(4))));
    out.push(("Q8".into(), Arc::new(FiniteGroup::quaternion8())));
    out
}

/// Looks up one of [`groups`] by name.
pub fn group(name: &str) -> Option<Arc<FiniteGroup>> {
    groups().into_iter().find(|(n, _)| n == name).map(|(_, g)| g)
}

/// Named actions: the point for every group in [`groups`], plus a few
/// actions on more than one point.
pub fn actions() -> Vec<(String, Arc<GroupAction>)> {
    let mut out: Vec<(String, Arc<GroupAction>)> = groups()
        .into_iter()
        .map(|(n, g)| (format!("pt/{n}"), Arc::new(GroupAction::point(g))))
        .collect();
    let z2 = Arc::new(FiniteGroup::cyclic(2));
    out.push(("Z/2 swap".into(), Arc::new(GroupAction::regular(Arc::clone(&z2)))));
    out.push(("S3 on 3 points".into(), Arc::new(GroupAction::natural_symmetric(3))));
    out.push(("Z/2 on 4 points".into(), Arc::new(z2_on_four_points())));
    out
}

/// `ℤ/2` swapping points 0 and 1 and fixing 2 and 3.
pub fn z2_on_four_points() -> GroupAction {
    let table = vec![vec![0, 1], vec![1, 0], vec![2, 2], vec![3, 3]];
    GroupAction::new(Arc::new(FiniteGroup::cyclic(2)), 4, table).expect("valid action table")
}

/// Smallest subgroup containing `gens`.
fn closure(g: &FiniteGroup, gens: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; g.order()];
    seen[0] = true;
    let mut stack = vec![0];
    while let Some(a) = stack.pop() {
        for &s in gens {
            let b = g.mul(a, s);
            if !seen[b] {
                seen[b] = true;
                stack.push(b);
            }
        }
    }
    (0..g.order()).filter(|&a| seen[a]).collect()
}

/// A homomorphism onto `ℤ/2`, as the indicator of the complement of the
/// first index-2 subgroup found; `None` when there is none.
///
/// Index-2 subgroups contain every square, so the search runs over unions
/// of cosets of the subgroup generated by squares.
pub fn sign_homomorphism(g: &FiniteGroup) -> Option<Vec<usize>> {
    let n = g.order();
    let squares: Vec<usize> = (0..n).map(|a| g.mul(a, a)).collect();
    let q = closure(g, &squares);
    if q.len() == n {
        return None;
    }
    let mut coset = vec![usize::MAX; n];
    let mut cosets = 0;
    for a in 0..n {
        if coset[a] == usize::MAX {
            for &s in &q {
                coset[g.mul(s, a)] = cosets;
            }
            cosets += 1;
        }
    }
    // coset 0 is q itself; pick half of the others
    (0u64..1 << (cosets - 1))
        .filter(|m| m.count_ones() as usize + 1 == cosets / 2)
        .map(|m| {
            (0..n)
                .filter(|&a| coset[a] == 0 || m >> (coset[a] - 1) & 1 == 1)
                .collect::<Vec<_>>()
        })
        .find(|k| k.iter().all(|&a| k.iter().all(|&b| k.binary_search(&g.mul(a, b)).is_ok())))
        .map(|k| (0..n).map(|a| usize::from(k.binary_search(&a).is_err())).collect())
}

/// `α(x; a, b, c) = k·a·⌊(b + c)/n⌋` pulled back along the projection of
/// an action groupoid of `ℤ/n` onto `𝔹ℤ/n`.
pub fn standard_on(ag: &ActionGroupoid, k: usize) -> Result<Cochain> {
    let n = ag.group().order();
    Cochain::from_fn(Arc::clone(&ag.groupoid), 3, n as u32, |t| {
        let (_, e) = ag.elements(t);
        (k * e[0] * ((e[1] + e[2]) / n)) as i64
    })
}

/// `(m/2)·s(a)s(b)s(c)` for a homomorphism `s` onto `ℤ/2`, pulled back to
/// an action groupoid. `modulus` should be even.
pub fn sign_cocycle_on(ag: &ActionGroupoid, sign: &[usize], modulus: u32) -> Result<Cochain> {
    let scale = (modulus / 2) as i64;
    Cochain::from_fn(Arc::clone(&ag.groupoid), 3, modulus, |t| {
        let (_, e) = ag.elements(t);
        scale * (sign[e[0]] * sign[e[1]] * sign[e[2]]) as i64
    })
}

/// `α·δβ` for a uniformly random 2-cochain `β`.
pub fn perturb<R: Rng + ?Sized>(alpha: &Cochain, rng: &mut R) -> Result<Cochain> {
    let beta = Cochain::random(Arc::clone(alpha.groupoid()), 2, alpha.modulus(), rng)?;
    alpha.mul(&beta.coboundary()?)
}

/// A bundled 3-cocycle together with the decomposition it lives on.
#[derive(Debug, Clone)]
pub struct CocycleFixture {
    pub name: String,
    pub decomposition: Arc<InertiaDecomposition>,
    pub alpha: Cochain,
}

fn fixture(name: String, action: Arc<GroupAction>, build: impl FnOnce(&ActionGroupoid) -> Result<Cochain>) -> Result<CocycleFixture> {
    let decomposition = Arc::new(InertiaDecomposition::new(action));
    let alpha = build(&decomposition.action_groupoid)?;
    Ok(CocycleFixture {
        name,
        decomposition,
        alpha,
    })
}

/// Every `α_std(n, k)` on a point, `1 ≤ n ≤ 8`, `0 ≤ k < n`.
pub fn standard_cocycles() -> Result<Vec<CocycleFixture>> {
    let mut out = Vec::new();
    for n in 1..=8 {
        for k in 0..n {
            let action = Arc::new(GroupAction::point(Arc::new(FiniteGroup::cyclic(n))));
            out.push(fixture(format!("std({n},{k})"), action, |ag| standard_on(ag, k))?);
        }
    }
    Ok(out)
}

/// A random normalised 3-cocycle on `𝔹S3` at modulus 6: a random power of
/// the pulled-back sign class times a random coboundary.
pub fn random_s3_cocycle(seed: u64) -> Result<CocycleFixture> {
    let mut rng = StdRng::seed_from_u64(seed);
    let s3 = Arc::new(FiniteGroup::symmetric(3));
    let sign = sign_homomorphism(&s3).expect("S3 has a sign");
    let power: i64 = rng.random_range(0..2);
    fixture(format!("random S3 #{seed}"), Arc::new(GroupAction::point(s3)), |ag| {
        let base = sign_cocycle_on(ag, &sign, 6)?;
        let base = Cochain::from_fn(Arc::clone(&ag.groupoid), 3, 6, |t| power * base.exponent(t) as i64)?;
        let (alpha, _) = perturb(&base, &mut rng)?.normalize_3cocycle()?;
        Ok(alpha)
    })
}

/// The whole 3-cocycle corpus: standard cocycles, sign pullbacks on the
/// non-cyclic groups, cocycles on actions with several points and a few
/// random `S3` cocycles. All are normalised.
pub fn cocycles() -> Result<Vec<CocycleFixture>> {
    let mut out = standard_cocycles()?;
    for name in ["V4", "S3", "D4", "Q8"] {
        let g = group(name).expect("bundled group");
        let sign = sign_homomorphism(&g).expect("even order");
        out.push(fixture(format!("sign({name})"), Arc::new(GroupAction::point(g)), |ag| {
            sign_cocycle_on(ag, &sign, 2)
        })?);
    }
    let z2 = Arc::new(FiniteGroup::cyclic(2));
    out.push(fixture("std(2,1) on Z/2 swap".into(), Arc::new(GroupAction::regular(z2)), |ag| {
        standard_on(ag, 1)
    })?);
    out.push(fixture("std(2,1) on 4 points".into(), Arc::new(z2_on_four_points()), |ag| {
        standard_on(ag, 1)
    })?);
    let s3 = FiniteGroup::symmetric(3);
    let sign = sign_homomorphism(&s3).expect("S3 has a sign");
    out.push(fixture(
        "sign on S3 on 3 points".into(),
        Arc::new(GroupAction::natural_symmetric(3)),
        |ag| sign_cocycle_on(ag, &sign, 2),
    )?);
    for seed in DEFAULT_SEED..DEFAULT_SEED + 3 {
        out.push(random_s3_cocycle(seed)?);
    }
    Ok(out)
}

/// The sign class of `S4` at modulus 24 times a random coboundary. Not
/// normalised; used to time the cocycle check on the 4-simplices.
pub fn s4_perf_cocycle(seed: u64) -> Result<Cochain> {
    let mut rng = StdRng::seed_from_u64(seed);
    let s4 = Arc::new(FiniteGroup::symmetric(4));
    let sign = sign_homomorphism(&s4).expect("S4 has a sign");
    let ag = ActionGroupoid::point(s4);
    perturb(&sign_cocycle_on(&ag, &sign, 24)?, &mut rng)
}

/// `θ(1, 1) = −1` on `𝔹ℤ/2`; its extension is `ℤ/4`.
pub fn z2_theta() -> Result<Cochain> {
    let g = Arc::new(FiniteGroupoid::from_group(&FiniteGroup::cyclic(2)));
    Cochain::from_fn(g, 2, 2, |t| (t[0] * t[1]) as i64)
}

/// `θ(a, b) = a₁b₀` on `𝔹V4` with `V4 = (ℤ/2)²` (bit 0 first). It is a
/// normalised 2-cocycle, and `(1, 0)` has no central lift in its extension
/// because `θ(g, h) ≠ θ(h, g)` for `h = (0, 1)`.
pub fn v4_asymmetric_theta() -> Result<Cochain> {
    let g = Arc::new(FiniteGroupoid::from_group(&FiniteGroup::klein4()));
    Cochain::from_fn(g, 2, 2, |t| ((t[0] >> 1) & t[1] & 1) as i64)
}

/// The element `(1, 0)` of `V4`.
pub const V4_ASYMMETRIC_G: usize = 1;
