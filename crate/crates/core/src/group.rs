//! Finite groups given by multiplication tables.
//!
//! Elements are indices `0..order`; the identity is always index 0.

use std::fmt;

use crate::error::{Error, Result};
use crate::exec::Strategy;

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    label: Option<String>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.label {
            Some(l) => write!(f, "FiniteGroup({l}, order {})", self.order),
            None => write!(f, "FiniteGroup(order {})", self.order),
        }
    }
}

/// A subgroup carried as a group in its own right together with its
/// embedding into the ambient group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    pub group: FiniteGroup,
    /// Subgroup index -> ambient index. Ascending, so `embedding[0] == 0`.
    pub embedding: Vec<usize>,
    position: Vec<Option<usize>>,
}

impl Subgroup {
    /// Subgroup index of an ambient element, if it belongs to the subgroup.
    pub fn position(&self, ambient: usize) -> Option<usize> {
        self.position.get(ambient).copied().flatten()
    }

    pub fn contains(&self, ambient: usize) -> bool {
        self.position(ambient).is_some()
    }
}

/// Partition of a group into conjugacy classes. Classes are listed in order
/// of their representatives, and each representative is the least index in
/// its class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyClasses {
    pub classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl ConjugacyClasses {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn representative(&self, class: usize) -> usize {
        self.classes[class][0]
    }

    pub fn representatives(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c[0]).collect()
    }

    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }
}

impl FiniteGroup {
    /// Validates a square multiplication table with identity at index 0.
    ///
    /// Checks run in order: shape, entry range, identity, inverses,
    /// associativity. The error names the first violation found.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        Self::from_table_with(table, Strategy::default())
    }

    pub fn from_table_with(table: Vec<Vec<usize>>, strategy: Strategy) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        for (r, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!(
                    "row {r} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(c) = row.iter().position(|&v| v >= n) {
                return Err(Error::InvalidGroup(format!(
                    "entry at row {r}, column {c} is {} (must be < {n})",
                    row[c]
                )));
            }
        }
        let mul: Vec<usize> = table.into_iter().flatten().collect();
        Self::from_flat(n, mul, strategy)
    }

    fn from_flat(n: usize, mul: Vec<usize>, strategy: Strategy) -> Result<Self> {
        for g in 0..n {
            if mul[g] != g {
                return Err(Error::InvalidGroup(format!(
                    "index 0 is not a left identity: row 0, column {g}"
                )));
            }
            if mul[g * n] != g {
                return Err(Error::InvalidGroup(format!(
                    "index 0 is not a right identity: row {g}, column 0"
                )));
            }
        }
        let mut inv = Vec::with_capacity(n);
        for g in 0..n {
            match (0..n).find(|&h| mul[g * n + h] == 0 && mul[h * n + g] == 0) {
                Some(h) => inv.push(h),
                None => {
                    return Err(Error::InvalidGroup(format!("element {g} has no inverse")));
                }
            }
        }
        let bad = strategy.position(n * n, |ab| {
            let (a, b) = (ab / n, ab % n);
            let left = mul[ab];
            (0..n).any(|c| mul[left * n + c] != mul[a * n + mul[b * n + c]])
        });
        if let Some(ab) = bad {
            let (a, b) = (ab / n, ab % n);
            let c = (0..n)
                .find(|&c| mul[mul[ab] * n + c] != mul[a * n + mul[b * n + c]])
                .expect("violating c exists");
            return Err(Error::NotAssociative(a, b, c));
        }
        Ok(FiniteGroup {
            order: n,
            mul,
            inv,
            label: None,
        })
    }

    /// Builds from a multiplication rule already known to be a group law.
    pub(crate) fn from_fn_trusted(n: usize, f: impl Fn(usize, usize) -> usize) -> Self {
        let mut mul = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                mul.push(f(a, b));
            }
        }
        let inv = (0..n)
            .map(|g| (0..n).find(|&h| mul[g * n + h] == 0).expect("group law"))
            .collect();
        FiniteGroup {
            order: n,
            mul,
            inv,
            label: None,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn inverse_table(&self) -> &[usize] {
        &self.inv
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    /// `h⁻¹ a h`.
    #[inline]
    pub fn conj(&self, a: usize, h: usize) -> usize {
        self.mul(self.mul(self.inv(h), a), h)
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Elements of the cyclic subgroup generated by `a`, as `a^0, a^1, ...`.
    pub fn powers(&self, a: usize) -> Vec<usize> {
        let mut out = vec![0];
        let mut x = a;
        while x != 0 {
            out.push(x);
            x = self.mul(x, a);
        }
        out
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.commute(a, b)))
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&a| (0..self.order).all(|h| self.commute(a, h)))
            .collect()
    }

    pub fn conjugacy_classes(&self) -> ConjugacyClasses {
        let n = self.order;
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for g in 0..n {
            if class_of[g] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut members: Vec<usize> = (0..n).map(|h| self.conj(g, h)).collect();
            members.sort_unstable();
            members.dedup();
            for &x in &members {
                class_of[x] = id;
            }
            classes.push(members);
        }
        ConjugacyClasses { classes, class_of }
    }

    /// `{h : ha = ah}` with its own multiplication table.
    pub fn centralizer(&self, a: usize) -> Subgroup {
        let elems: Vec<usize> = (0..self.order).filter(|&h| self.commute(a, h)).collect();
        self.subgroup_from_sorted(elems)
    }

    /// The subgroup on a sorted element list closed under multiplication.
    pub fn subgroup(&self, mut elems: Vec<usize>) -> Result<Subgroup> {
        elems.sort_unstable();
        elems.dedup();
        if elems.first() != Some(&0) {
            return Err(Error::InvalidGroup("subgroup must contain the identity".into()));
        }
        let mut member = vec![false; self.order];
        for &e in &elems {
            member[e] = true;
        }
        for &a in &elems {
            for &b in &elems {
                if !member[self.mul(a, b)] {
                    return Err(Error::InvalidGroup(format!(
                        "subset not closed: {a}·{b} = {}",
                        self.mul(a, b)
                    )));
                }
            }
        }
        Ok(self.subgroup_from_sorted(elems))
    }

    fn subgroup_from_sorted(&self, elems: Vec<usize>) -> Subgroup {
        let mut position = vec![None; self.order];
        for (i, &e) in elems.iter().enumerate() {
            position[e] = Some(i);
        }
        let group = FiniteGroup::from_fn_trusted(elems.len(), |i, j| {
            position[self.mul(elems[i], elems[j])].expect("closed subset")
        });
        Subgroup {
            group,
            embedding: elems,
            position,
        }
    }

    // ----- built-in groups -----

    pub fn trivial() -> Self {
        Self::cyclic(1).with_label("1")
    }

    /// `ℤ/n` with element `k` at index `k`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1, "cyclic group needs n >= 1");
        Self::from_fn_trusted(n, |a, b| (a + b) % n).with_label(format!("Z/{n}"))
    }

    /// Dihedral group of order `2n`; `r^i s^j` sits at index `i + n·j`, with
    /// `s r = r⁻¹ s`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 1, "dihedral group needs n >= 1");
        let split = |x: usize| (x % n, x / n);
        Self::from_fn_trusted(2 * n, |a, b| {
            let (i, j) = split(a);
            let (k, l) = split(b);
            // r^i s^j r^k s^l = r^(i ± k) s^(j + l)
            let rot = if j == 0 { (i + k) % n } else { (i + n - k) % n };
            rot + n * ((j + l) % 2)
        })
        .with_label(format!("D{n}"))
    }

    /// `ℤ/2 × ℤ/2`; `(a₁, a₂)` sits at index `a₁ + 2·a₂`.
    pub fn klein4() -> Self {
        Self::from_fn_trusted(4, |a, b| a ^ b).with_label("V4")
    }

    /// Quaternion group; indices `0..8` are `1, −1, i, −i, j, −j, k, −k`.
    pub fn quaternion8() -> Self {
        // unit index (0=1, 1=i, 2=j, 3=k) and sign bit
        let split = |x: usize| (x / 2, x % 2);
        // products of basis units: (unit, sign)
        const UNIT: [[(usize, usize); 4]; 4] = [
            [(0, 0), (1, 0), (2, 0), (3, 0)],
            [(1, 0), (0, 1), (3, 0), (2, 1)],
            [(2, 0), (3, 1), (0, 1), (1, 0)],
            [(3, 0), (2, 0), (1, 1), (0, 1)],
        ];
        Self::from_fn_trusted(8, |a, b| {
            let (ua, sa) = split(a);
            let (ub, sb) = split(b);
            let (u, s) = UNIT[ua][ub];
            2 * u + ((sa + sb + s) % 2)
        })
        .with_label("Q8")
    }

    /// Symmetric group on `n` letters. Elements are permutations in
    /// lexicographic order (identity first); the product `g·h` applies `g`
    /// first, matching right actions `x·g = g(x)`.
    pub fn symmetric(n: usize) -> Self {
        let perms = permutations(n);
        let index = |p: &[usize]| perms.binary_search_by(|q| q.as_slice().cmp(p)).unwrap();
        let mut table = Vec::with_capacity(perms.len());
        for g in &perms {
            let row: Vec<usize> = perms
                .iter()
                .map(|h| {
                    let gh: Vec<usize> = (0..n).map(|x| h[g[x]]).collect();
                    index(&gh)
                })
                .collect();
            table.push(row);
        }
        let n_elems = perms.len();
        Self::from_fn_trusted(n_elems, |a, b| table[a][b]).with_label(format!("S{n}"))
    }

    /// The permutation of `0..n` represented by an element of [`symmetric`].
    ///
    /// [`symmetric`]: FiniteGroup::symmetric
    pub fn symmetric_permutation(n: usize, element: usize) -> Vec<usize> {
        permutations(n)[element].clone()
    }

    /// Direct product; `(a, b)` sits at index `a + |G|·b`.
    pub fn product(g: &FiniteGroup, h: &FiniteGroup) -> Self {
        let n = g.order();
        let label = match (g.label(), h.label()) {
            (Some(a), Some(b)) => Some(format!("{a}x{b}")),
            _ => None,
        };
        let out = Self::from_fn_trusted(n * h.order(), |x, y| {
            g.mul(x % n, y % n) + n * h.mul(x / n, y / n)
        });
        match label {
            Some(l) => out.with_label(l),
            None => out,
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                prefix.push(x);
                rec(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_classes(g: &FiniteGroup) -> Vec<Vec<usize>> {
        // independent sweep: x ~ y iff some h has h x h⁻¹ = y (left conjugation)
        let n = g.order();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for x in 0..n {
            if seen[x] {
                continue;
            }
            let mut class = Vec::new();
            for y in 0..n {
                if (0..n).any(|h| g.mul(g.mul(h, x), g.inv(h)) == y) {
                    class.push(y);
                    seen[y] = true;
                }
            }
            out.push(class);
        }
        out
    }

    #[test]
    fn z2_from_table() {
        let g = FiniteGroup::from_table(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(g.inverse_table(), &[0, 1]);
    }

    #[test]
    fn missing_inverse_rejected() {
        let err = FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]).unwrap_err();
        assert_eq!(err, Error::InvalidGroup("element 1 has no inverse".into()));
    }

    #[test]
    fn non_associative_names_triple() {
        // a loop of order 5 with identity and inverses but no associativity
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        match FiniteGroup::from_table(t) {
            Err(Error::NotAssociative(a, b, c)) => assert!(a > 0 && b > 0 && c > 0),
            other => panic!("expected associativity failure, got {other:?}"),
        }
    }

    #[test]
    fn bad_shape_and_range() {
        assert!(matches!(
            FiniteGroup::from_table(vec![vec![0, 1], vec![1]]),
            Err(Error::InvalidGroup(_))
        ));
        let e = FiniteGroup::from_table(vec![vec![0, 1], vec![1, 2]]).unwrap_err();
        assert!(e.to_string().contains("row 1, column 1"));
        assert!(FiniteGroup::from_table(vec![vec![1, 0], vec![0, 1]]).is_err());
    }

    #[test]
    fn builtins_validate() {
        for g in [
            FiniteGroup::trivial(),
            FiniteGroup::cyclic(6),
            FiniteGroup::dihedral(4),
            FiniteGroup::klein4(),
            FiniteGroup::quaternion8(),
            FiniteGroup::symmetric(3),
            FiniteGroup::symmetric(4),
        ] {
            let again = FiniteGroup::from_table(g.table()).unwrap();
            assert_eq!(again.table(), g.table(), "{g:?}");
        }
    }

    #[test]
    fn class_sizes() {
        assert_eq!(FiniteGroup::cyclic(4).conjugacy_classes().len(), 4);
        assert_eq!(FiniteGroup::trivial().conjugacy_classes().classes, vec![vec![0]]);
        let s3 = FiniteGroup::symmetric(3);
        let mut sizes = s3.conjugacy_classes().sizes();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3]);
        for g in [s3, FiniteGroup::dihedral(4), FiniteGroup::quaternion8(), FiniteGroup::symmetric(4)] {
            assert_eq!(g.conjugacy_classes().classes, brute_classes(&g));
        }
    }

    #[test]
    fn centralizers() {
        let z6 = FiniteGroup::cyclic(6);
        assert_eq!(z6.centralizer(2).group.order(), 6);
        let s3 = FiniteGroup::symmetric(3);
        assert_eq!(s3.centralizer(0).group.order(), 6);
        // index 1 is the permutation [0, 2, 1], a transposition
        assert_eq!(FiniteGroup::symmetric_permutation(3, 1), vec![0, 2, 1]);
        let c = s3.centralizer(1);
        assert_eq!(c.embedding, vec![0, 1]);
        assert!(c.contains(1));
        let q8 = FiniteGroup::quaternion8();
        assert_eq!(q8.center(), vec![0, 1]);
        assert_eq!(q8.centralizer(2).group.order(), 4);
    }

    #[test]
    fn element_orders() {
        let q8 = FiniteGroup::quaternion8();
        assert_eq!(q8.element_order(2), 4);
        assert_eq!(q8.pow(2, 2), 1);
        let d4 = FiniteGroup::dihedral(4);
        assert_eq!(d4.element_order(1), 4);
        assert_eq!(d4.element_order(4), 2);
        assert!(!d4.is_abelian());
        assert_eq!(d4.powers(1), vec![0, 1, 2, 3]);
    }
}
