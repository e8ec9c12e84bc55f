//! Central extensions of groups and twisted groupoids.
//!
//! For a normalised 2-cocycle `θ` with values in `μ_m`, the extension of `H`
//! has elements `(h, z)`, `z ∈ ℤ/m`, at index `h·m + z`, with
//! `(h, z)(k, w) = (hk, θ(h, k) + z + w)`. The twisted groupoid does the same
//! arrow by arrow: `(a, z)` sits at index `a·m + z`.

use std::sync::Arc;

use crate::center::{family_order, is_central_family, Family};
use crate::cochain::{same_groupoid, Cochain};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::groupoid::{ActionGroupoid, FiniteGroupoid};

/// `m / gcd(m, e₁, e₂, …)`: the order of a set of exponents in `ℤ/m`.
fn exponent_order(m: u32, exps: impl IntoIterator<Item = u32>) -> u32 {
    let g = exps.into_iter().fold(m, num_integer::gcd);
    m / g
}

#[derive(Debug, Clone)]
pub struct CentralExtension {
    base: Arc<FiniteGroup>,
    theta: Cochain,
    group: Arc<FiniteGroup>,
}

impl CentralExtension {
    /// Builds and validates the extension of `base` by a normalised 2-cochain
    /// on `𝔹base`. A non-cocycle is reported as the first non-associative
    /// triple of base elements.
    pub fn new(base: Arc<FiniteGroup>, theta: Cochain) -> Result<Self> {
        let bg = Arc::new(FiniteGroupoid::from_group(&base));
        if theta.degree() != 2 || !same_groupoid(theta.groupoid(), &bg) {
            return Err(Error::Dimension(
                "the twist must be a 2-cochain on the base group".into(),
            ));
        }
        theta.check_normalized()?;
        let n = base.order();
        let m = theta.modulus() as usize;
        let table: Vec<Vec<usize>> = (0..n * m)
            .map(|x| {
                let (h, z) = (x / m, x % m);
                (0..n * m)
                    .map(|y| {
                        let (k, w) = (y / m, y % m);
                        let e = (theta.exponent(&[h, k]) as usize + z + w) % m;
                        base.mul(h, k) * m + e
                    })
                    .collect()
            })
            .collect();
        let group = FiniteGroup::from_table(table).map_err(|e| match e {
            Error::NotAssociative(a, b, c) => Error::NotAssociative(a / m, b / m, c / m),
            other => other,
        })?;
        Ok(CentralExtension {
            base,
            theta,
            group: Arc::new(group),
        })
    }

    pub fn base(&self) -> &Arc<FiniteGroup> {
        &self.base
    }

    pub fn theta(&self) -> &Cochain {
        &self.theta
    }

    pub fn modulus(&self) -> u32 {
        self.theta.modulus()
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn element(&self, h: usize, z: u32) -> usize {
        let m = self.modulus();
        h * m as usize + (z % m) as usize
    }

    pub fn split(&self, e: usize) -> (usize, u32) {
        let m = self.modulus() as usize;
        (e / m, (e % m) as u32)
    }

    /// `(h, z) ↦ h`.
    pub fn project(&self, e: usize) -> usize {
        self.split(e).0
    }

    /// All `z` such that `(g, z)` is central. Every `(g, z)` differs from
    /// `(g, 0)` by a central element, so the result is empty or all of `ℤ/m`.
    pub fn find_central_lifts(&self, g: usize) -> Result<Vec<u32>> {
        if g >= self.base.order() {
            return Err(Error::Precondition(format!("{g} is not a base element")));
        }
        if !(0..self.base.order()).all(|h| self.base.commute(g, h)) {
            return Err(Error::NotCentral(g));
        }
        let ext = &self.group;
        Ok((0..self.modulus())
            .filter(|&z| {
                let e = self.element(g, z);
                (0..ext.order()).all(|x| ext.commute(e, x))
            })
            .collect())
    }
}

/// Order data for a lift `g̃` of `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LiftOrder {
    /// `N = |g̃|`.
    pub lift: usize,
    /// Order of the originating cochain restricted to `⟨g⟩`.
    pub h: u32,
    /// `|g|`.
    pub base: usize,
}

impl LiftOrder {
    /// `N | h·|g|`.
    pub fn divides(&self) -> bool {
        (self.h as usize * self.base).is_multiple_of(self.lift)
    }
}

/// Order of `(g, 0)` in the extension. `h` is the order of `origin` when
/// given (typically the 3-cocycle restricted to `⟨g⟩`, see
/// [`cyclic_restriction_order`]), otherwise the order of `θ` on `⟨g⟩ × ⟨g⟩`.
pub fn order_of_lift(ext: &CentralExtension, g: usize, origin: Option<u32>) -> LiftOrder {
    let lift = ext.group.element_order(ext.element(g, 0));
    let powers = ext.base.powers(g);
    let h = origin.unwrap_or_else(|| {
        exponent_order(
            ext.modulus(),
            powers
                .iter()
                .flat_map(|&a| powers.iter().map(move |&b| (a, b)))
                .map(|(a, b)| ext.theta.exponent(&[a, b])),
        )
    });
    LiftOrder {
        lift,
        h,
        base: ext.base.element_order(g),
    }
}

/// Order of a 3-cochain on `X⫽G` restricted to the tuples `(x; a, b, c)`
/// with `x ∈ X^g` and `a, b, c ∈ ⟨g⟩`.
pub fn cyclic_restriction_order(alpha: &Cochain, ag: &ActionGroupoid, g: usize) -> Result<u32> {
    if alpha.degree() != 3 || !same_groupoid(alpha.groupoid(), &ag.groupoid) {
        return Err(Error::Dimension("expected a 3-cochain on the action groupoid".into()));
    }
    let powers = ag.group().powers(g);
    let mut exps = Vec::new();
    for x in ag.action.fixed_set(g) {
        for &a in &powers {
            for &b in &powers {
                for &c in &powers {
                    exps.push(alpha.exponent(&ag.tuple(x, &[a, b, c])));
                }
            }
        }
    }
    Ok(exponent_order(alpha.modulus(), exps))
}

/// A groupoid with arrows `(a, z)`, `z ∈ ℤ/m`, composed through `θ`.
#[derive(Debug, Clone)]
pub struct TwistedGroupoid {
    base: Arc<FiniteGroupoid>,
    theta: Cochain,
    groupoid: Arc<FiniteGroupoid>,
}

impl TwistedGroupoid {
    /// Builds and validates. A non-cocycle twist is reported as the first
    /// non-associative triple of base arrows.
    pub fn new(theta: Cochain) -> Result<Self> {
        let t = Self::unchecked(theta)?;
        t.groupoid.validate().map_err(|e| match e {
            Error::GroupoidNotAssociative(a, b, c) => {
                let (a, b, c) = (t.split(a).0, t.split(b).0, t.split(c).0);
                Error::GroupoidNotAssociative(a, b, c)
            }
            other => other,
        })?;
        Ok(t)
    }

    /// Builds the tables without the associativity check, for inspecting
    /// a twist that may not be a cocycle. The twist must still be normalised
    /// so that `(unit, 0)` are units.
    pub fn unchecked(theta: Cochain) -> Result<Self> {
        if theta.degree() != 2 {
            return Err(Error::Dimension(format!(
                "the twist must have degree 2, got {}",
                theta.degree()
            )));
        }
        theta.check_normalized()?;
        let base = Arc::clone(theta.groupoid());
        let m = theta.modulus() as usize;
        let arrows = (0..base.arrows() * m)
            .map(|t| (base.src(t / m), base.tgt(t / m)))
            .collect();
        let unit = (0..base.objects()).map(|x| base.unit(x) * m).collect();
        let inverse = (0..base.arrows() * m)
            .map(|t| {
                let (a, z) = (t / m, t % m);
                let ai = base.inverse(a);
                let w = (2 * m - z - theta.exponent(&[a, ai]) as usize) % m;
                ai * m + w
            })
            .collect();
        let groupoid = FiniteGroupoid::from_parts(base.objects(), arrows, unit, inverse, |s, t| {
            let (a, z) = (s / m, s % m);
            let (b, w) = (t / m, t % m);
            base.compose(a, b) * m + (theta.exponent(&[a, b]) as usize + z + w) % m
        })?;
        Ok(TwistedGroupoid {
            base,
            theta,
            groupoid: Arc::new(groupoid),
        })
    }

    pub fn base(&self) -> &Arc<FiniteGroupoid> {
        &self.base
    }

    pub fn theta(&self) -> &Cochain {
        &self.theta
    }

    pub fn modulus(&self) -> u32 {
        self.theta.modulus()
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.groupoid
    }

    pub fn arrow(&self, a: usize, z: u32) -> usize {
        let m = self.modulus();
        a * m as usize + (z % m) as usize
    }

    pub fn split(&self, t: usize) -> (usize, u32) {
        let m = self.modulus() as usize;
        (t / m, (t % m) as u32)
    }

    /// Triples of base arrows on which composition fails to associate.
    pub fn associativity_violations(&self) -> Vec<(usize, usize, usize)> {
        let mut v: Vec<(usize, usize, usize)> = self
            .groupoid
            .associativity_violations()
            .into_iter()
            .map(|(a, b, c)| (self.split(a).0, self.split(b).0, self.split(c).0))
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// `x ↦ (ξ_x, 0)`.
    pub fn zero_lift(&self, base_family: &[usize]) -> Family {
        base_family.iter().map(|&l| self.arrow(l, 0)).collect()
    }

    /// A central lift `x ↦ (ξ_x, z_x)` of a central base family, normalised
    /// to `z = 0` at the least object of each component, or `None` when the
    /// twist obstructs every lift.
    ///
    /// For an arrow `h : x → y`, commuting `(ξ_x, z_x)` past `(h, 0)` forces
    /// `z_x − z_y = θ(h, ξ_y) − θ(ξ_x, h)`; the values are propagated from
    /// each component root and then checked on every arrow. Adding a constant
    /// on a component gives all other lifts.
    pub fn central_lift(&self, base_family: &[usize]) -> Result<Option<Family>> {
        let b = &self.base;
        if !is_central_family(b, base_family) {
            return Err(Error::Precondition("base family is not central".into()));
        }
        let m = self.modulus() as i64;
        let th = |a: usize, c: usize| self.theta.exponent(&[a, c]) as i64;
        let mut z: Vec<Option<i64>> = vec![None; b.objects()];
        for root in 0..b.objects() {
            if z[root].is_some() {
                continue;
            }
            z[root] = Some(0);
            let mut stack = vec![root];
            while let Some(x) = stack.pop() {
                let zx = z[x].expect("assigned");
                for &h in b.out_arrows(x) {
                    let y = b.tgt(h);
                    if z[y].is_none() {
                        let d = th(h, base_family[y]) - th(base_family[x], h);
                        z[y] = Some((zx - d).rem_euclid(m));
                        stack.push(y);
                    }
                }
            }
        }
        let z: Vec<i64> = z.into_iter().map(|v| v.expect("every object reached")).collect();
        let consistent = (0..b.arrows()).all(|h| {
            let (x, y) = (b.src(h), b.tgt(h));
            let d = th(h, base_family[y]) - th(base_family[x], h);
            (z[x] - z[y] - d).rem_euclid(m) == 0
        });
        if !consistent {
            return Ok(None);
        }
        let lift: Family = base_family
            .iter()
            .zip(&z)
            .map(|(&l, &zx)| self.arrow(l, zx as u32))
            .collect();
        debug_assert!(is_central_family(&self.groupoid, &lift));
        Ok(Some(lift))
    }

    /// Order data for a central lift: `N` is the lcm of the loop orders.
    pub fn lift_order(&self, lift: &[usize], base_family: &[usize], h: u32) -> LiftOrder {
        LiftOrder {
            lift: family_order(&self.groupoid, lift),
            h,
            base: family_order(&self.base, base_family),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::center::groupoid_center;

    fn bg(g: &FiniteGroup) -> Arc<FiniteGroupoid> {
        Arc::new(FiniteGroupoid::from_group(g))
    }

    fn z2_theta() -> (Arc<FiniteGroup>, Cochain) {
        let h = Arc::new(FiniteGroup::cyclic(2));
        let mut theta = Cochain::trivial(bg(&h), 2, 2).unwrap();
        theta.set(&[1, 1], 1).unwrap();
        (h, theta)
    }

    #[test]
    fn z2_extension_is_cyclic_of_order_four() {
        let (h, theta) = z2_theta();
        let ext = CentralExtension::new(h, theta).unwrap();
        assert_eq!(ext.group().order(), 4);
        let g = ext.element(1, 0);
        assert_eq!(ext.group().element_order(g), 4);
        assert_eq!(ext.group().pow(g, 2), ext.element(0, 1));
        let lo = order_of_lift(&ext, 1, None);
        assert_eq!((lo.lift, lo.h, lo.base), (4, 2, 2));
        assert!(lo.divides());
        assert_eq!(ext.find_central_lifts(1).unwrap(), vec![0, 1]);
    }

    #[test]
    fn trivial_twist_gives_direct_product() {
        let h = Arc::new(FiniteGroup::symmetric(3));
        let theta = Cochain::trivial(bg(&h), 2, 3).unwrap();
        let ext = CentralExtension::new(Arc::clone(&h), theta).unwrap();
        let direct = FiniteGroup::product(&FiniteGroup::cyclic(3), &h);
        // (h, z) ↦ z + 3h in the product indexing
        for x in 0..18 {
            for y in 0..18 {
                let (a, b) = (ext.split(x), ext.split(y));
                let p = ext.split(ext.group().mul(x, y));
                let dx = a.1 as usize + 3 * a.0;
                let dy = b.1 as usize + 3 * b.0;
                assert_eq!(direct.mul(dx, dy), p.1 as usize + 3 * p.0);
            }
        }
        assert_eq!(order_of_lift(&ext, 1, None).lift, 2);
        assert!(ext.find_central_lifts(1).is_err());
    }

    #[test]
    fn non_cocycle_reports_base_triple() {
        let h = Arc::new(FiniteGroup::cyclic(3));
        let mut theta = Cochain::trivial(bg(&h), 2, 3).unwrap();
        theta.set(&[1, 1], 1).unwrap();
        let e = CentralExtension::new(h, theta.clone()).unwrap_err();
        let Error::NotAssociative(a, b, c) = e else { panic!("{e:?}") };
        // δθ at the reported triple is nonzero
        let d = theta.coboundary().unwrap();
        assert_ne!(d.exponent(&[a, b, c]), 0);
    }

    #[test]
    fn v4_asymmetric_twist_has_no_central_lift() {
        let v4 = Arc::new(FiniteGroup::klein4());
        let theta = Cochain::from_fn(bg(&v4), 2, 2, |t| ((t[0] >> 1) & t[1] & 1) as i64).unwrap();
        let ext = CentralExtension::new(Arc::clone(&v4), theta.clone()).unwrap();
        assert!(ext.find_central_lifts(1).unwrap().is_empty());
        let tw = TwistedGroupoid::new(theta).unwrap();
        assert_eq!(tw.central_lift(&[1]).unwrap(), None);
        assert!(tw.central_lift(&[3]).unwrap().is_none());
        assert!(tw.central_lift(&[0]).unwrap().is_some());
    }

    #[test]
    fn twisted_bg_matches_extension() {
        let (h, theta) = z2_theta();
        let ext = CentralExtension::new(h, theta.clone()).unwrap();
        let tw = TwistedGroupoid::new(theta).unwrap();
        assert_eq!(**tw.groupoid(), FiniteGroupoid::from_group(ext.group()));
    }

    #[test]
    fn fault_injection_matches_coboundary_support() {
        let v4 = FiniteGroup::klein4();
        let mut theta = Cochain::trivial(bg(&v4), 2, 2).unwrap();
        theta.set(&[1, 2], 1).unwrap();
        theta.set(&[3, 3], 1).unwrap();
        let d = theta.coboundary().unwrap();
        let expected: Vec<(usize, usize, usize)> = (0..d.len())
            .filter(|&i| d.values()[i] != 0)
            .map(|i| {
                let t = d.tuple(i);
                (t[0], t[1], t[2])
            })
            .collect();
        assert!(!expected.is_empty());
        let tw = TwistedGroupoid::unchecked(theta.clone()).unwrap();
        assert_eq!(tw.associativity_violations(), expected);
        assert!(matches!(
            TwistedGroupoid::new(theta),
            Err(Error::GroupoidNotAssociative(..))
        ));
    }

    #[test]
    fn groupoid_lifts_are_central() {
        // S3 on three points restricted to a transposition's centralizer
        let act = Arc::new(crate::action::GroupAction::natural_symmetric(3));
        let ag = ActionGroupoid::new(act);
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(1);
        let beta = Cochain::random(Arc::clone(&ag.groupoid), 1, 4, &mut rng).unwrap();
        // a coboundary twist, normalised by construction: δβ(1, a) = β(a) − β(a) + β(1)
        let beta = Cochain::from_fn(Arc::clone(&ag.groupoid), 1, 4, |t| {
            if ag.groupoid.is_unit(t[0]) {
                0
            } else {
                beta.exponent(t) as i64
            }
        })
        .unwrap();
        let theta = beta.coboundary().unwrap();
        let tw = TwistedGroupoid::new(theta).unwrap();
        for fam in groupoid_center(&ag.groupoid) {
            let lift = tw.central_lift(&fam).unwrap().expect("coboundary twists lift");
            assert!(is_central_family(tw.groupoid(), &lift));
        }
    }

    #[test]
    fn cohomologous_twists_give_isomorphic_extensions() {
        let h = Arc::new(FiniteGroup::dihedral(4));
        let g = bg(&h);
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(9);
        let raw = Cochain::random(Arc::clone(&g), 1, 4, &mut rng).unwrap();
        let beta = Cochain::from_fn(Arc::clone(&g), 1, 4, |t| if t[0] == 0 { 0 } else { raw.exponent(t) as i64 }).unwrap();
        let theta = Cochain::from_fn(Arc::clone(&g), 2, 4, |t| ((t[0] / 4) * (t[1] / 4)) as i64).unwrap();
        let e1 = CentralExtension::new(Arc::clone(&h), theta.clone()).unwrap();
        let twisted = theta.mul(&beta.coboundary().unwrap()).unwrap();
        let e2 = CentralExtension::new(Arc::clone(&h), twisted).unwrap();
        // (h, z) ↦ (h, z + β(h)) carries e2 onto e1
        let phi = |x: usize| {
            let (a, z) = e2.split(x);
            e1.element(a, z + beta.exponent(&[a]))
        };
        for x in 0..e2.group().order() {
            for y in 0..e2.group().order() {
                assert_eq!(phi(e2.group().mul(x, y)), e1.group().mul(phi(x), phi(y)));
            }
        }
    }
}
