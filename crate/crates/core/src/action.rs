use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};

/// A right action `x·g` of a finite group on the points `0..points`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAction {
    group: Arc<FiniteGroup>,
    points: usize,
    act: Vec<usize>,
}

impl GroupAction {
    /// Validates a `points × order` table.
    pub fn new(group: Arc<FiniteGroup>, points: usize, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = group.order();
        if points == 0 {
            return Err(Error::InvalidAction("an action needs at least one point".into()));
        }
        if table.len() != points {
            return Err(Error::InvalidAction(format!(
                "table has {} rows, expected {points}",
                table.len()
            )));
        }
        for (x, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidAction(format!(
                    "row {x} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(g) = row.iter().position(|&y| y >= points) {
                return Err(Error::InvalidAction(format!(
                    "entry at row {x}, column {g} is {} (must be < {points})",
                    row[g]
                )));
            }
            if row[0] != x {
                return Err(Error::InvalidAction(format!(
                    "identity moves point: row {x}, column 0 is {}",
                    row[0]
                )));
            }
        }
        for x in 0..points {
            for g in 0..n {
                for h in 0..n {
                    if table[table[x][g]][h] != table[x][group.mul(g, h)] {
                        return Err(Error::InvalidAction(format!(
                            "(x·g)·h != x·(gh) at row {x}, columns {g}, {h}"
                        )));
                    }
                }
            }
        }
        Ok(GroupAction {
            group,
            points,
            act: table.into_iter().flatten().collect(),
        })
    }

    pub(crate) fn from_fn_trusted(
        group: Arc<FiniteGroup>,
        points: usize,
        f: impl Fn(usize, usize) -> usize,
    ) -> Self {
        let n = group.order();
        let act = (0..points)
            .flat_map(|x| (0..n).map(move |g| (x, g)))
            .map(|(x, g)| f(x, g))
            .collect();
        GroupAction { group, points, act }
    }

    /// The one-point space.
    pub fn point(group: Arc<FiniteGroup>) -> Self {
        Self::from_fn_trusted(group, 1, |_, _| 0)
    }

    pub fn trivial(group: Arc<FiniteGroup>, points: usize) -> Self {
        Self::from_fn_trusted(group, points, |x, _| x)
    }

    /// The group acting on itself by right multiplication.
    pub fn regular(group: Arc<FiniteGroup>) -> Self {
        let g2 = Arc::clone(&group);
        let n = group.order();
        Self::from_fn_trusted(group, n, move |x, g| g2.mul(x, g))
    }

    /// `S_n` acting on `n` letters, `x·σ = σ(x)`.
    pub fn natural_symmetric(n: usize) -> Self {
        let group = Arc::new(FiniteGroup::symmetric(n));
        let perms: Vec<Vec<usize>> = (0..group.order())
            .map(|g| FiniteGroup::symmetric_permutation(n, g))
            .collect();
        Self::from_fn_trusted(group, n, |x, g| perms[g][x])
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn points(&self) -> usize {
        self.points
    }

    #[inline]
    pub fn act(&self, x: usize, g: usize) -> usize {
        self.act[x * self.group.order() + g]
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.act
            .chunks(self.group.order())
            .map(<[usize]>::to_vec)
            .collect()
    }

    /// `X^a = {x : x·a = x}`.
    pub fn fixed_set(&self, a: usize) -> Vec<usize> {
        (0..self.points).filter(|&x| self.act(x, a) == x).collect()
    }

    pub fn orbit(&self, x: usize) -> Vec<usize> {
        let mut o: Vec<usize> = (0..self.group.order()).map(|g| self.act(x, g)).collect();
        o.sort_unstable();
        o.dedup();
        o
    }

    /// Restriction to a subgroup acting on an invariant subset of points.
    /// Points are renumbered in the order of `subset` (which is sorted first).
    pub fn restrict(&self, sub: &Subgroup, subset: &[usize]) -> Result<RestrictedAction> {
        let mut subset = subset.to_vec();
        subset.sort_unstable();
        subset.dedup();
        let mut local = vec![None; self.points];
        for (i, &x) in subset.iter().enumerate() {
            local[x] = Some(i);
        }
        let m = sub.group.order();
        let mut table = Vec::with_capacity(subset.len() * m);
        for &x in &subset {
            for h in 0..m {
                let y = self.act(x, sub.embedding[h]);
                match local[y] {
                    Some(i) => table.push(i),
                    None => {
                        return Err(Error::InvalidAction(format!(
                            "subset is not invariant: point {x} moves to {y}"
                        )))
                    }
                }
            }
        }
        Ok(RestrictedAction {
            action: GroupAction {
                group: Arc::new(sub.group.clone()),
                points: subset.len(),
                act: table,
            },
            points: subset,
            embedding: sub.embedding.clone(),
        })
    }
}

/// An action of a subgroup on an invariant subset, with the maps back to the
/// ambient action. The inner action may have zero points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedAction {
    pub action: GroupAction,
    /// Local point -> ambient point.
    pub points: Vec<usize>,
    /// Local group element -> ambient group element.
    pub embedding: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(2))
    }

    #[test]
    fn fixed_sets() {
        assert_eq!(GroupAction::trivial(z2(), 3).fixed_set(1), vec![0, 1, 2]);
        assert!(GroupAction::regular(z2()).fixed_set(1).is_empty());
        let swap = GroupAction::new(z2(), 3, vec![vec![0, 1], vec![1, 0], vec![2, 2]]).unwrap();
        assert_eq!(swap.fixed_set(1), vec![2]);
    }

    #[test]
    fn conjugate_fixed_sets_have_equal_size() {
        let act = GroupAction::natural_symmetric(4);
        let g = act.group().clone();
        for a in 0..g.order() {
            for h in 0..g.order() {
                assert_eq!(
                    act.fixed_set(a).len(),
                    act.fixed_set(g.mul(g.mul(h, a), g.inv(h))).len()
                );
            }
        }
    }

    #[test]
    fn validation_names_location() {
        let e = GroupAction::new(z2(), 2, vec![vec![0, 1], vec![1, 1]]).unwrap_err();
        assert!(e.to_string().contains("row 0, columns 1, 1"), "{e}");
        let e = GroupAction::new(z2(), 2, vec![vec![0, 2], vec![1, 0]]).unwrap_err();
        assert!(e.to_string().contains("row 0, column 1"), "{e}");
        let e = GroupAction::new(z2(), 2, vec![vec![1, 0], vec![0, 1]]).unwrap_err();
        assert!(e.to_string().contains("identity"), "{e}");
    }

    #[test]
    fn natural_action_validates() {
        let a = GroupAction::natural_symmetric(3);
        GroupAction::new(a.group().clone(), 3, a.table()).unwrap();
        assert_eq!(a.orbit(0), vec![0, 1, 2]);
    }
}
