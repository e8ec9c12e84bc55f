use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groupoid::FiniteGroupoid;

/// A functor between finite groupoids given by object and arrow tables.
#[derive(Debug, Clone)]
pub struct GroupoidFunctor {
    pub domain: Arc<FiniteGroupoid>,
    pub codomain: Arc<FiniteGroupoid>,
    pub obj_map: Vec<usize>,
    pub arr_map: Vec<usize>,
}

/// Outcome of [`GroupoidFunctor::is_equivalence`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalence {
    Equivalence,
    /// No image object is isomorphic to this codomain object.
    NotEssentiallySurjective { object: usize },
    /// Two arrows `x → y` with the same image.
    NotFaithful { arrows: (usize, usize) },
    /// A codomain arrow `F x → F y` outside the image of `Hom(x, y)`.
    NotFull { source: usize, target: usize, arrow: usize },
}

impl Equivalence {
    pub fn holds(&self) -> bool {
        matches!(self, Equivalence::Equivalence)
    }
}

impl GroupoidFunctor {
    /// Validates that the tables preserve endpoints, units and composition.
    pub fn new(
        domain: Arc<FiniteGroupoid>,
        codomain: Arc<FiniteGroupoid>,
        obj_map: Vec<usize>,
        arr_map: Vec<usize>,
    ) -> Result<Self> {
        let f = GroupoidFunctor {
            domain,
            codomain,
            obj_map,
            arr_map,
        };
        f.check()?;
        Ok(f)
    }

    pub fn identity(g: Arc<FiniteGroupoid>) -> Self {
        GroupoidFunctor {
            obj_map: (0..g.objects()).collect(),
            arr_map: (0..g.arrows()).collect(),
            domain: Arc::clone(&g),
            codomain: g,
        }
    }

    fn check(&self) -> Result<()> {
        let (d, c) = (&self.domain, &self.codomain);
        if self.obj_map.len() != d.objects() || self.arr_map.len() != d.arrows() {
            return Err(Error::InvalidFunctor("table sizes do not match the domain".into()));
        }
        if self.obj_map.iter().any(|&y| y >= c.objects()) || self.arr_map.iter().any(|&b| b >= c.arrows()) {
            return Err(Error::InvalidFunctor("image index outside the codomain".into()));
        }
        for a in 0..d.arrows() {
            let b = self.arr_map[a];
            if c.src(b) != self.obj_map[d.src(a)] || c.tgt(b) != self.obj_map[d.tgt(a)] {
                return Err(Error::InvalidFunctor(format!("arrow {a} changes endpoints")));
            }
        }
        for x in 0..d.objects() {
            if self.arr_map[d.unit(x)] != c.unit(self.obj_map[x]) {
                return Err(Error::InvalidFunctor(format!("unit of object {x} not preserved")));
            }
        }
        for a in 0..d.arrows() {
            for &b in d.out_arrows(d.tgt(a)) {
                if self.arr_map[d.compose(a, b)] != c.compose(self.arr_map[a], self.arr_map[b]) {
                    return Err(Error::InvalidFunctor(format!(
                        "composition of arrows {a}, {b} not preserved"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Essential surjectivity plus bijectivity on every hom-set, by
    /// exhaustive scan. Returns the first failure found.
    pub fn is_equivalence(&self) -> Equivalence {
        let (d, c) = (&self.domain, &self.codomain);
        let comp = c.components();
        let mut hit = vec![false; c.objects()];
        for &y in &self.obj_map {
            hit[comp[y]] = true;
        }
        if let Some(y) = (0..c.objects()).find(|&y| !hit[comp[y]]) {
            return Equivalence::NotEssentiallySurjective { object: y };
        }
        for x in 0..d.objects() {
            let fx = self.obj_map[x];
            for y in 0..d.objects() {
                let fy = self.obj_map[y];
                let mut seen: Vec<Option<usize>> = vec![None; c.arrows()];
                for a in d.hom(x, y) {
                    let b = self.arr_map[a];
                    if let Some(prev) = seen[b] {
                        return Equivalence::NotFaithful { arrows: (prev, a) };
                    }
                    seen[b] = Some(a);
                }
                if let Some(b) = c.hom(fx, fy).into_iter().find(|&b| seen[b].is_none()) {
                    return Equivalence::NotFull {
                        source: x,
                        target: y,
                        arrow: b,
                    };
                }
            }
        }
        Equivalence::Equivalence
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    #[test]
    fn identity_is_equivalence() {
        let g = Arc::new(FiniteGroupoid::from_group(&FiniteGroup::symmetric(3)));
        assert!(GroupoidFunctor::identity(g).is_equivalence().holds());
    }

    #[test]
    fn collapse_is_not_faithful() {
        let z2 = Arc::new(FiniteGroupoid::from_group(&FiniteGroup::cyclic(2)));
        let one = Arc::new(FiniteGroupoid::from_group(&FiniteGroup::trivial()));
        let f = GroupoidFunctor::new(z2, one, vec![0], vec![0, 0]).unwrap();
        assert_eq!(f.is_equivalence(), Equivalence::NotFaithful { arrows: (0, 1) });
    }

    #[test]
    fn inclusion_of_trivial_group_is_not_full() {
        let z2 = Arc::new(FiniteGroupoid::from_group(&FiniteGroup::cyclic(2)));
        let one = Arc::new(FiniteGroupoid::from_group(&FiniteGroup::trivial()));
        let f = GroupoidFunctor::new(one, z2, vec![0], vec![0]).unwrap();
        assert_eq!(
            f.is_equivalence(),
            Equivalence::NotFull {
                source: 0,
                target: 0,
                arrow: 1
            }
        );
    }

    #[test]
    fn missing_component_detected() {
        let one = Arc::new(FiniteGroupoid::discrete(1));
        let two = Arc::new(FiniteGroupoid::discrete(2));
        let f = GroupoidFunctor::new(one, two, vec![0], vec![0]).unwrap();
        assert_eq!(f.is_equivalence(), Equivalence::NotEssentiallySurjective { object: 1 });
    }

    #[test]
    fn non_functor_rejected() {
        let z2 = Arc::new(FiniteGroupoid::from_group(&FiniteGroup::cyclic(2)));
        let z3 = Arc::new(FiniteGroupoid::from_group(&FiniteGroup::cyclic(3)));
        assert!(GroupoidFunctor::new(z2, z3, vec![0], vec![0, 1]).is_err());
    }
}
