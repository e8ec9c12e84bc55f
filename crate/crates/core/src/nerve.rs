//! Nerves of finite groupoids.
//!
//! The degree-`p` nerve is the list of composable `p`-tuples of arrows
//! `(a₁, …, a_p)` with `tgt(aᵢ) = src(aᵢ₊₁)`, in lexicographic order of arrow
//! indices. Degree 0 is the list of objects. Tuples are ranked in `O(p)` from
//! prefix sums of path counts, so no hash lookups are needed.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exec::Strategy;
use crate::groupoid::{FiniteGroupoid, NERVE_CACHE_DEPTH};
use crate::DEFAULT_TUPLE_BUDGET;

static TUPLE_BUDGET: AtomicU64 = AtomicU64::new(DEFAULT_TUPLE_BUDGET);

/// Sets the process-wide cap on nerve sizes.
pub fn set_tuple_budget(budget: u64) {
    TUPLE_BUDGET.store(budget, Ordering::Relaxed);
}

pub fn tuple_budget() -> u64 {
    TUPLE_BUDGET.load(Ordering::Relaxed)
}

#[derive(Debug, Clone)]
pub struct Nerve {
    degree: usize,
    len: usize,
    tuples: Vec<u32>,
    // first[a] = number of tuples whose first arrow is < a
    first: Vec<u64>,
    // later[r][a] = number of r-tails after arrows b < a with src(b) = src(a)
    later: Vec<Vec<u64>>,
}

/// Number of `r`-tuples starting at each object, for `r = 0..=p`.
fn path_counts(g: &FiniteGroupoid, p: usize) -> Vec<Vec<u64>> {
    let mut counts = vec![vec![1u64; g.objects()]];
    for r in 1..=p {
        let prev = &counts[r - 1];
        let next = (0..g.objects())
            .map(|x| {
                g.out_arrows(x)
                    .iter()
                    .fold(0u64, |acc, &a| acc.saturating_add(prev[g.tgt(a)]))
            })
            .collect();
        counts.push(next);
    }
    counts
}

impl Nerve {
    /// Number of degree-`p` tuples, saturating at `u64::MAX`.
    pub fn size(g: &FiniteGroupoid, p: usize) -> u64 {
        let counts = path_counts(g, p);
        counts[p].iter().fold(0u64, |acc, &c| acc.saturating_add(c))
    }

    pub fn build(g: &FiniteGroupoid, p: usize, budget: u64, strategy: Strategy) -> Result<Self> {
        let needed = Self::size(g, p);
        if needed > budget {
            return Err(Error::Budget {
                what: format!("degree-{p} nerve"),
                needed,
                budget,
            });
        }
        let len = needed as usize;
        if p == 0 {
            return Ok(Nerve {
                degree: 0,
                len,
                tuples: Vec::new(),
                first: Vec::new(),
                later: Vec::new(),
            });
        }
        let counts = path_counts(g, p);
        let mut first = Vec::with_capacity(g.arrows());
        let mut acc = 0u64;
        for a in 0..g.arrows() {
            first.push(acc);
            acc += counts[p - 1][g.tgt(a)];
        }
        let later = (0..p.saturating_sub(1))
            .map(|r| {
                let mut v = vec![0u64; g.arrows()];
                for x in 0..g.objects() {
                    let mut acc = 0u64;
                    for &a in g.out_arrows(x) {
                        v[a] = acc;
                        acc += counts[r][g.tgt(a)];
                    }
                }
                v
            })
            .collect();
        let tuples = strategy.flat_map(g.arrows(), |a| {
            let mut out = Vec::new();
            let mut stack = vec![a as u32];
            extend(g, p, &mut stack, &mut out);
            out
        });
        debug_assert_eq!(tuples.len(), len * p);
        Ok(Nerve {
            degree: p,
            len,
            tuples,
            first,
            later,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// The `i`-th tuple. Empty for degree 0 (the tuple is the object `i`).
    #[inline]
    pub fn tuple(&self, i: usize) -> &[u32] {
        &self.tuples[i * self.degree..(i + 1) * self.degree]
    }

    pub fn tuple_usize(&self, i: usize) -> Vec<usize> {
        self.tuple(i).iter().map(|&a| a as usize).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> {
        (0..self.len).map(move |i| self.tuple(i))
    }

    /// Rank of a composable tuple. The tuple must have length `degree ≥ 1`
    /// and be composable; this is not rechecked.
    #[inline]
    pub fn index_of(&self, t: &[usize]) -> usize {
        debug_assert_eq!(t.len(), self.degree);
        let p = self.degree;
        let mut idx = self.first[t[0]];
        for (i, &a) in t.iter().enumerate().skip(1) {
            idx += self.later[p - 1 - i][a];
        }
        idx as usize
    }

    /// Indices into the degree-`(p−1)` nerve of all `p + 1` faces of tuple
    /// `i` of this nerve. Degree-1 faces are objects.
    pub fn face_indices(&self, g: &FiniteGroupoid, lower: &Nerve, i: usize, out: &mut Vec<usize>) {
        out.clear();
        let t = self.tuple(i);
        let p = self.degree;
        if p == 1 {
            let a = t[0] as usize;
            out.push(g.tgt(a));
            out.push(g.src(a));
            return;
        }
        let mut buf = [0usize; 8];
        let mut scratch = Vec::new();
        let face: &mut [usize] = if p - 1 <= buf.len() {
            &mut buf[..p - 1]
        } else {
            scratch.resize(p - 1, 0);
            &mut scratch
        };
        for j in 0..=p {
            face_into(g, t, j, face);
            out.push(lower.index_of(face));
        }
    }
}

fn extend(g: &FiniteGroupoid, p: usize, stack: &mut Vec<u32>, out: &mut Vec<u32>) {
    if stack.len() == p {
        out.extend_from_slice(stack);
        return;
    }
    let last = *stack.last().expect("nonempty") as usize;
    for &b in g.out_arrows(g.tgt(last)) {
        stack.push(b as u32);
        extend(g, p, stack, out);
        stack.pop();
    }
}

/// Face `d_j` of a tuple of degree `p ≥ 2`: `d₀` drops the first arrow,
/// `d_p` drops the last, and `d_j` for `0 < j < p` composes arrows `j` and
/// `j + 1` (counting from 1).
fn face_into(g: &FiniteGroupoid, t: &[u32], j: usize, face: &mut [usize]) {
    let p = t.len();
    let mut k = 0;
    let mut i = 0;
    while i < p {
        if j == 0 && i == 0 || j == p && i == p - 1 {
            i += 1;
            continue;
        }
        if j > 0 && j < p && i == j - 1 {
            face[k] = g.compose(t[i] as usize, t[i + 1] as usize);
            i += 2;
        } else {
            face[k] = t[i] as usize;
            i += 1;
        }
        k += 1;
    }
}

/// A face of a composable tuple, as arrow indices. For `p = 1` the result is
/// the one-element vector holding the object `tgt` (`j = 0`) or `src`
/// (`j = 1`).
pub fn face(g: &FiniteGroupoid, t: &[usize], j: usize) -> Vec<usize> {
    let p = t.len();
    assert!(p >= 1 && j <= p, "face d_{j} undefined in degree {p}");
    if p == 1 {
        return vec![if j == 0 { g.tgt(t[0]) } else { g.src(t[0]) }];
    }
    let t32: Vec<u32> = t.iter().map(|&a| a as u32).collect();
    let mut out = vec![0; p - 1];
    face_into(g, &t32, j, &mut out);
    out
}

impl FiniteGroupoid {
    /// The degree-`p` nerve under the process-wide tuple budget; cached for
    /// small degrees.
    pub fn nerve(&self, p: usize) -> Result<Arc<Nerve>> {
        self.nerve_with(p, Strategy::default())
    }

    pub fn nerve_with(&self, p: usize, strategy: Strategy) -> Result<Arc<Nerve>> {
        if p < NERVE_CACHE_DEPTH {
            if let Some(n) = self.nerves[p].get() {
                return Ok(Arc::clone(n));
            }
            let n = Arc::new(Nerve::build(self, p, tuple_budget(), strategy)?);
            Ok(Arc::clone(self.nerves[p].get_or_init(|| n)))
        } else {
            Ok(Arc::new(Nerve::build(self, p, tuple_budget(), strategy)?))
        }
    }

    pub fn is_composable(&self, t: &[usize]) -> bool {
        t.iter().all(|&a| a < self.arrows()) && t.windows(2).all(|w| self.tgt(w[0]) == self.src(w[1]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::GroupAction;
    use crate::group::FiniteGroup;
    use crate::groupoid::ActionGroupoid;

    #[test]
    fn faces_of_pairs() {
        let g = FiniteGroup::symmetric(3);
        let bg = FiniteGroupoid::from_group(&g);
        let (a, b) = (1, 3);
        assert_eq!(face(&bg, &[a, b], 0), vec![b]);
        assert_eq!(face(&bg, &[a, b], 1), vec![g.mul(a, b)]);
        assert_eq!(face(&bg, &[a, b], 2), vec![a]);
        assert_eq!(face(&bg, &[0, 0, 0], 1), vec![0, 0]);
    }

    #[test]
    fn degree_one_faces_are_endpoints() {
        let act = GroupAction::regular(std::sync::Arc::new(FiniteGroup::cyclic(3)));
        let ag = ActionGroupoid::new(std::sync::Arc::new(act));
        let a = ag.arrow(1, 2);
        assert_eq!(face(&ag.groupoid, &[a], 0), vec![0]);
        assert_eq!(face(&ag.groupoid, &[a], 1), vec![1]);
    }

    #[test]
    fn ranks_match_enumeration_order() {
        let act = GroupAction::natural_symmetric(3);
        let ag = ActionGroupoid::new(std::sync::Arc::new(act));
        for p in 1..=3 {
            let n = ag.groupoid.nerve(p).unwrap();
            assert_eq!(n.len(), 3 * 6usize.pow(p as u32));
            for i in 0..n.len() {
                assert_eq!(n.index_of(&n.tuple_usize(i)), i);
            }
            // lexicographic in (x, g1, ..., gp)
            let (x, gs) = ag.elements(&n.tuple_usize(n.len() - 1));
            assert_eq!((x, gs), (2, vec![5; p]));
        }
    }

    #[test]
    fn budget_is_enforced() {
        let bg = FiniteGroupoid::from_group(&FiniteGroup::symmetric(4));
        let e = Nerve::build(&bg, 4, 1000, Strategy::Sequential).unwrap_err();
        assert!(e.is_budget());
        assert_eq!(Nerve::size(&bg, 4), 331_776);
    }

    #[test]
    fn strategies_enumerate_identically() {
        let bg = FiniteGroupoid::from_group(&FiniteGroup::symmetric(3));
        let a = Nerve::build(&bg, 3, 1 << 20, Strategy::Sequential).unwrap();
        let b = Nerve::build(&bg, 3, 1 << 20, Strategy::Parallel).unwrap();
        assert_eq!(a.tuples, b.tuples);
    }
}
