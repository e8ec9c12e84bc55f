//! Finite groupoids given by arrow tables.
//!
//! Composition is written left to right: for `a: x → y` and `b: y → z` the
//! composite is `a·b: x → z`. Composable pairs are stored densely in the
//! lexicographic order of arrow indices, which is also the order of the
//! degree-2 nerve.

use std::sync::{Arc, OnceLock};

use crate::action::GroupAction;
use crate::error::{Error, Result};
use crate::exec::Strategy;
use crate::group::FiniteGroup;
use crate::nerve::Nerve;

pub(crate) const NERVE_CACHE_DEPTH: usize = 6;

#[derive(Debug, Clone)]
pub struct FiniteGroupoid {
    objects: usize,
    src: Vec<usize>,
    tgt: Vec<usize>,
    unit: Vec<usize>,
    inverse: Vec<usize>,
    out: Vec<Vec<usize>>,
    out_rank: Vec<usize>,
    pair_offset: Vec<usize>,
    compose: Vec<usize>,
    pub(crate) nerves: Vec<OnceLock<Arc<Nerve>>>,
}

impl PartialEq for FiniteGroupoid {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.src == other.src
            && self.tgt == other.tgt
            && self.unit == other.unit
            && self.inverse == other.inverse
            && self.compose == other.compose
    }
}

impl Eq for FiniteGroupoid {}

impl FiniteGroupoid {
    /// Builds and validates a groupoid. `compose(a, b)` is only called on
    /// composable pairs.
    pub fn new(
        objects: usize,
        arrows: Vec<(usize, usize)>,
        unit: Vec<usize>,
        inverse: Vec<usize>,
        compose: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let g = Self::from_parts(objects, arrows, unit, inverse, compose)?;
        g.validate()?;
        Ok(g)
    }

    /// Builds the tables without the algebraic checks. Shape errors (indices
    /// out of range, units of the wrong type) are still reported.
    pub fn from_parts(
        objects: usize,
        arrows: Vec<(usize, usize)>,
        unit: Vec<usize>,
        inverse: Vec<usize>,
        compose: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let n = arrows.len();
        if let Some(a) = arrows.iter().position(|&(s, t)| s >= objects || t >= objects) {
            return Err(Error::InvalidGroupoid(format!(
                "arrow {a} has an endpoint outside 0..{objects}"
            )));
        }
        if unit.len() != objects {
            return Err(Error::InvalidGroupoid(format!(
                "{} units for {objects} objects",
                unit.len()
            )));
        }
        if inverse.len() != n {
            return Err(Error::InvalidGroupoid(format!(
                "{} inverses for {n} arrows",
                inverse.len()
            )));
        }
        let (src, tgt): (Vec<usize>, Vec<usize>) = arrows.into_iter().unzip();
        for (x, &u) in unit.iter().enumerate() {
            if u >= n || src[u] != x || tgt[u] != x {
                return Err(Error::InvalidGroupoid(format!(
                    "unit of object {x} is not a loop at {x}"
                )));
            }
        }
        if let Some(a) = inverse.iter().position(|&b| b >= n) {
            return Err(Error::InvalidGroupoid(format!("inverse of arrow {a} out of range")));
        }
        let mut out = vec![Vec::new(); objects];
        let mut out_rank = vec![0; n];
        for a in 0..n {
            out_rank[a] = out[src[a]].len();
            out[src[a]].push(a);
        }
        let mut pair_offset = Vec::with_capacity(n);
        let mut acc = 0;
        for a in 0..n {
            pair_offset.push(acc);
            acc += out[tgt[a]].len();
        }
        let mut compose_table = Vec::with_capacity(acc);
        for a in 0..n {
            for &b in &out[tgt[a]] {
                let c = compose(a, b);
                if c >= n || src[c] != src[a] || tgt[c] != tgt[b] {
                    return Err(Error::InvalidGroupoid(format!(
                        "composite of arrows {a} and {b} has the wrong endpoints"
                    )));
                }
                compose_table.push(c);
            }
        }
        Ok(FiniteGroupoid {
            objects,
            src,
            tgt,
            unit,
            inverse,
            out,
            out_rank,
            pair_offset,
            compose: compose_table,
            nerves: (0..NERVE_CACHE_DEPTH).map(|_| OnceLock::new()).collect(),
        })
    }

    /// Exhaustive unit, associativity and inverse checks.
    pub fn validate(&self) -> Result<()> {
        self.validate_with(Strategy::default())
    }

    pub fn validate_with(&self, strategy: Strategy) -> Result<()> {
        for a in 0..self.arrows() {
            if self.compose(self.unit[self.src[a]], a) != a
                || self.compose(a, self.unit[self.tgt[a]]) != a
            {
                return Err(Error::InvalidGroupoid(format!("unit law fails for arrow {a}")));
            }
        }
        if let Some((a, b, c)) = self.first_associativity_violation(strategy) {
            return Err(Error::GroupoidNotAssociative(a, b, c));
        }
        for a in 0..self.arrows() {
            let i = self.inverse[a];
            if self.src[i] != self.tgt[a]
                || self.tgt[i] != self.src[a]
                || self.compose(a, i) != self.unit[self.src[a]]
                || self.compose(i, a) != self.unit[self.tgt[a]]
            {
                return Err(Error::InvalidGroupoid(format!("inverse law fails for arrow {a}")));
            }
        }
        Ok(())
    }

    fn assoc_fails(&self, a: usize, b: usize, c: usize) -> bool {
        self.compose(self.compose(a, b), c) != self.compose(a, self.compose(b, c))
    }

    fn first_associativity_violation(&self, strategy: Strategy) -> Option<(usize, usize, usize)> {
        let pairs = self.pairs();
        let idx = strategy.position(pairs.len(), |i| {
            let (a, b) = pairs[i];
            self.out[self.tgt[b]].iter().any(|&c| self.assoc_fails(a, b, c))
        })?;
        let (a, b) = pairs[idx];
        let c = *self.out[self.tgt[b]]
            .iter()
            .find(|&&c| self.assoc_fails(a, b, c))
            .expect("violating arrow");
        Some((a, b, c))
    }

    /// Every composable triple on which associativity fails, in
    /// lexicographic order.
    pub fn associativity_violations(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (a, b) in self.pairs() {
            for &c in &self.out[self.tgt[b]] {
                if self.assoc_fails(a, b, c) {
                    out.push((a, b, c));
                }
            }
        }
        out
    }

    fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.arrows())
            .flat_map(|a| self.out[self.tgt[a]].iter().map(move |&b| (a, b)))
            .collect()
    }

    // ----- accessors -----

    pub fn objects(&self) -> usize {
        self.objects
    }

    pub fn arrows(&self) -> usize {
        self.src.len()
    }

    #[inline]
    pub fn src(&self, a: usize) -> usize {
        self.src[a]
    }

    #[inline]
    pub fn tgt(&self, a: usize) -> usize {
        self.tgt[a]
    }

    #[inline]
    pub fn unit(&self, x: usize) -> usize {
        self.unit[x]
    }

    #[inline]
    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn is_unit(&self, a: usize) -> bool {
        self.unit[self.src[a]] == a
    }

    /// `a·b`. Panics in debug builds if the pair is not composable.
    #[inline]
    pub fn compose(&self, a: usize, b: usize) -> usize {
        debug_assert_eq!(self.tgt[a], self.src[b], "arrows {a}, {b} not composable");
        self.compose[self.pair_offset[a] + self.out_rank[b]]
    }

    pub fn try_compose(&self, a: usize, b: usize) -> Option<usize> {
        (self.tgt[a] == self.src[b]).then(|| self.compose(a, b))
    }

    /// `h⁻¹·ℓ·h` for a loop `ℓ` at `src(h)`.
    pub fn conjugate(&self, l: usize, h: usize) -> usize {
        self.compose(self.compose(self.inverse[h], l), h)
    }

    /// Arrows with source `x`, ascending.
    pub fn out_arrows(&self, x: usize) -> &[usize] {
        &self.out[x]
    }

    pub(crate) fn out_rank(&self, a: usize) -> usize {
        self.out_rank[a]
    }

    pub fn hom(&self, x: usize, y: usize) -> Vec<usize> {
        self.out[x].iter().copied().filter(|&a| self.tgt[a] == y).collect()
    }

    /// Loops (arrows with equal source and target), ascending.
    pub fn loops(&self) -> Vec<usize> {
        (0..self.arrows()).filter(|&a| self.src[a] == self.tgt[a]).collect()
    }

    /// Loops at `x`, ascending.
    pub fn automorphisms(&self, x: usize) -> Vec<usize> {
        self.hom(x, x)
    }

    /// Order of a loop under composition.
    pub fn loop_order(&self, l: usize) -> usize {
        let u = self.unit[self.src[l]];
        let mut x = l;
        let mut k = 1;
        while x != u {
            x = self.compose(x, l);
            k += 1;
        }
        k
    }

    pub fn arrow_list(&self) -> Vec<(usize, usize)> {
        self.src.iter().copied().zip(self.tgt.iter().copied()).collect()
    }

    pub fn unit_table(&self) -> &[usize] {
        &self.unit
    }

    pub fn inverse_table(&self) -> &[usize] {
        &self.inverse
    }

    /// Component label per object; labels are numbered by least object.
    pub fn components(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.objects];
        let mut next = 0;
        for x in 0..self.objects {
            if label[x] != usize::MAX {
                continue;
            }
            let mut stack = vec![x];
            label[x] = next;
            while let Some(y) = stack.pop() {
                for &a in &self.out[y] {
                    let z = self.tgt[a];
                    if label[z] == usize::MAX {
                        label[z] = next;
                        stack.push(z);
                    }
                }
            }
            next += 1;
        }
        label
    }

    // ----- constructions -----

    /// `𝔹G`: one object, one arrow per group element.
    pub fn from_group(g: &FiniteGroup) -> Self {
        let n = g.order();
        Self::from_parts(
            1,
            vec![(0, 0); n],
            vec![0],
            (0..n).map(|a| g.inv(a)).collect(),
            |a, b| g.mul(a, b),
        )
        .expect("group tables are well formed")
    }

    /// Objects only, each with its unit.
    pub fn discrete(objects: usize) -> Self {
        Self::from_parts(
            objects,
            (0..objects).map(|x| (x, x)).collect(),
            (0..objects).collect(),
            (0..objects).collect(),
            |a, _| a,
        )
        .expect("discrete groupoid")
    }

    /// The full subgroupoid on the given objects, with embeddings.
    pub fn full_subgroupoid(&self, objects: &[usize]) -> Subgroupoid {
        let mut objects = objects.to_vec();
        objects.sort_unstable();
        objects.dedup();
        let mut local_obj = vec![None; self.objects];
        for (i, &x) in objects.iter().enumerate() {
            local_obj[x] = Some(i);
        }
        let arrows: Vec<usize> = (0..self.arrows())
            .filter(|&a| local_obj[self.src[a]].is_some() && local_obj[self.tgt[a]].is_some())
            .collect();
        let mut local_arrow = vec![usize::MAX; self.arrows()];
        for (i, &a) in arrows.iter().enumerate() {
            local_arrow[a] = i;
        }
        let groupoid = Self::from_parts(
            objects.len(),
            arrows
                .iter()
                .map(|&a| (local_obj[self.src[a]].unwrap(), local_obj[self.tgt[a]].unwrap()))
                .collect(),
            objects.iter().map(|&x| local_arrow[self.unit[x]]).collect(),
            arrows.iter().map(|&a| local_arrow[self.inverse[a]]).collect(),
            |a, b| local_arrow[self.compose(arrows[a], arrows[b])],
        )
        .expect("full subgroupoid of a valid groupoid");
        Subgroupoid {
            groupoid: Arc::new(groupoid),
            objects,
            arrows,
        }
    }
}

/// A full subgroupoid with its object and arrow embeddings.
#[derive(Debug, Clone)]
pub struct Subgroupoid {
    pub groupoid: Arc<FiniteGroupoid>,
    pub objects: Vec<usize>,
    pub arrows: Vec<usize>,
}

/// The action groupoid `X⫽G`: objects are points, the arrow `(x, g)` goes
/// from `x` to `x·g` and sits at index `x·|G| + g`.
#[derive(Debug, Clone)]
pub struct ActionGroupoid {
    pub groupoid: Arc<FiniteGroupoid>,
    pub action: Arc<GroupAction>,
}

impl ActionGroupoid {
    pub fn new(action: Arc<GroupAction>) -> Self {
        let g = Arc::clone(action.group());
        let n = g.order();
        let k = action.points();
        let arrows = (0..k)
            .flat_map(|x| (0..n).map(move |h| (x, h)))
            .map(|(x, h)| (x, action.act(x, h)))
            .collect();
        let groupoid = FiniteGroupoid::from_parts(
            k,
            arrows,
            (0..k).map(|x| x * n).collect(),
            (0..k * n)
                .map(|a| {
                    let (x, h) = (a / n, a % n);
                    action.act(x, h) * n + g.inv(h)
                })
                .collect(),
            |a, b| (a / n) * n + g.mul(a % n, b % n),
        )
        .expect("action groupoid tables are well formed");
        ActionGroupoid {
            groupoid: Arc::new(groupoid),
            action,
        }
    }

    /// Action groupoid of a group acting on a single point, i.e. `𝔹G`.
    pub fn point(group: Arc<FiniteGroup>) -> Self {
        Self::new(Arc::new(GroupAction::point(group)))
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.action.group()
    }

    #[inline]
    pub fn arrow(&self, x: usize, g: usize) -> usize {
        x * self.group().order() + g
    }

    #[inline]
    pub fn split(&self, a: usize) -> (usize, usize) {
        let n = self.group().order();
        (a / n, a % n)
    }

    /// The composable tuple `x →g₁ x·g₁ →g₂ ⋯`.
    pub fn tuple(&self, x: usize, elements: &[usize]) -> Vec<usize> {
        let mut y = x;
        elements
            .iter()
            .map(|&g| {
                let a = self.arrow(y, g);
                y = self.action.act(y, g);
                a
            })
            .collect()
    }

    /// Inverse of [`tuple`](Self::tuple): base point and group elements.
    pub fn elements(&self, tuple: &[usize]) -> (usize, Vec<usize>) {
        let x = tuple.first().map_or(0, |&a| self.split(a).0);
        (x, tuple.iter().map(|&a| self.split(a).1).collect())
    }
}
