//! The center of a finite groupoid: natural transformations from the
//! identity functor to itself, i.e. families `ξ_x : x → x` with
//! `ξ_{src g}·g = g·ξ_{tgt g}` for every arrow `g`.

use crate::exec::Strategy;
use crate::groupoid::FiniteGroupoid;

/// One loop per object.
pub type Family = Vec<usize>;

pub fn is_central_family(g: &FiniteGroupoid, family: &[usize]) -> bool {
    family.len() == g.objects()
        && family
            .iter()
            .enumerate()
            .all(|(x, &l)| l < g.arrows() && g.src(l) == x && g.tgt(l) == x)
        && (0..g.arrows()).all(|a| {
            g.compose(family[g.src(a)], a) == g.compose(a, family[g.tgt(a)])
        })
}

/// Order of a family of loops: the least `k ≥ 1` with every `ξ_x^k` a unit.
pub fn family_order(g: &FiniteGroupoid, family: &[usize]) -> usize {
    family
        .iter()
        .map(|&l| g.loop_order(l))
        .fold(1, num_integer::lcm)
}

/// `ξ^k`, objectwise.
pub fn family_pow(g: &FiniteGroupoid, family: &[usize], k: usize) -> Family {
    family
        .iter()
        .enumerate()
        .map(|(x, &l)| (0..k).fold(g.unit(x), |acc, _| g.compose(acc, l)))
        .collect()
}

/// Every central family, in lexicographic order.
///
/// Each connected component is searched separately: a central family is
/// determined by its value at the least object of the component, which must
/// be central in that object's automorphism group, and is transported along a
/// spanning tree. Every candidate is then checked against all arrows of the
/// component. The result is the product of the per-component solutions.
pub fn groupoid_center(g: &FiniteGroupoid) -> Vec<Family> {
    groupoid_center_with(g, Strategy::default())
}

pub fn groupoid_center_with(g: &FiniteGroupoid, strategy: Strategy) -> Vec<Family> {
    let comp = g.components();
    let ncomp = comp.iter().copied().max().map_or(0, |c| c + 1);
    // path[y] = an arrow from the component root to y
    let mut root = vec![usize::MAX; ncomp];
    let mut path = vec![usize::MAX; g.objects()];
    for x in 0..g.objects() {
        if root[comp[x]] != usize::MAX {
            continue;
        }
        root[comp[x]] = x;
        path[x] = g.unit(x);
        let mut stack = vec![x];
        while let Some(y) = stack.pop() {
            for &a in g.out_arrows(y) {
                let z = g.tgt(a);
                if path[z] == usize::MAX {
                    path[z] = g.compose(path[y], a);
                    stack.push(z);
                }
            }
        }
    }
    let members: Vec<Vec<usize>> = (0..ncomp)
        .map(|c| (0..g.objects()).filter(|&x| comp[x] == c).collect())
        .collect();
    let per_component: Vec<Vec<Vec<(usize, usize)>>> = strategy.map(ncomp, |c| {
        let r = root[c];
        let auts = g.automorphisms(r);
        auts.iter()
            .filter_map(|&xi| {
                let assignment: Vec<(usize, usize)> = members[c]
                    .iter()
                    .map(|&y| (y, g.conjugate(xi, path[y])))
                    .collect();
                let mut local = vec![usize::MAX; g.objects()];
                for &(y, l) in &assignment {
                    local[y] = l;
                }
                let natural = members[c].iter().all(|&y| {
                    g.out_arrows(y)
                        .iter()
                        .all(|&a| g.compose(local[y], a) == g.compose(a, local[g.tgt(a)]))
                });
                natural.then_some(assignment)
            })
            .collect()
    });
    let mut out: Vec<Family> = vec![vec![usize::MAX; g.objects()]];
    for choices in per_component {
        let mut next = Vec::with_capacity(out.len() * choices.len());
        for partial in &out {
            for choice in &choices {
                let mut f = partial.clone();
                for &(y, l) in choice {
                    f[y] = l;
                }
                next.push(f);
            }
        }
        out = next;
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::GroupAction;
    use crate::group::FiniteGroup;
    use crate::groupoid::ActionGroupoid;
    use std::sync::Arc;

    // independent oracle: try every assignment of a loop to each object
    fn brute_center(g: &FiniteGroupoid) -> Vec<Family> {
        let choices: Vec<Vec<usize>> = (0..g.objects()).map(|x| g.automorphisms(x)).collect();
        let mut all: Vec<Family> = vec![vec![]];
        for c in &choices {
            all = all
                .into_iter()
                .flat_map(|f| {
                    c.iter().map(move |&l| {
                        let mut f = f.clone();
                        f.push(l);
                        f
                    })
                })
                .collect();
        }
        all.into_iter().filter(|f| is_central_family(g, f)).collect()
    }

    #[test]
    fn center_of_bg_is_group_center() {
        for grp in [
            FiniteGroup::symmetric(3),
            FiniteGroup::quaternion8(),
            FiniteGroup::dihedral(4),
            FiniteGroup::cyclic(5),
        ] {
            let bg = FiniteGroupoid::from_group(&grp);
            let c: Vec<usize> = groupoid_center(&bg).into_iter().map(|f| f[0]).collect();
            assert_eq!(c, grp.center());
        }
    }

    #[test]
    fn discrete_center_is_units() {
        let d = FiniteGroupoid::discrete(4);
        assert_eq!(groupoid_center(&d), vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn matches_brute_force() {
        let act = GroupAction::natural_symmetric(3);
        let ag = ActionGroupoid::new(Arc::new(act));
        assert_eq!(groupoid_center(&ag.groupoid), brute_center(&ag.groupoid));
        let swap = GroupAction::new(
            Arc::new(FiniteGroup::cyclic(2)),
            3,
            vec![vec![0, 1], vec![1, 0], vec![2, 2]],
        )
        .unwrap();
        let ag = ActionGroupoid::new(Arc::new(swap));
        let c = groupoid_center(&ag.groupoid);
        assert_eq!(c, brute_center(&ag.groupoid));
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn family_powers() {
        let q8 = FiniteGroup::quaternion8();
        let bg = FiniteGroupoid::from_group(&q8);
        assert_eq!(family_order(&bg, &[1]), 2);
        assert_eq!(family_pow(&bg, &[1], 2), vec![0]);
    }
}
