//! Cohomology `Hᵖ(G; μ_m) = ker δ_p / im δ_{p−1}` of a finite groupoid.
//!
//! Both maps are written as dense matrices over `ℤ/m` on exponent vectors.
//! Diagonalising `δ_p` gives coordinates `y = V⁻¹x` in which the kernel is
//! `⊕ (m/gᵢ)ℤ/m ≅ ⊕ ℤ/gᵢ`, `gᵢ = gcd(dᵢ, m)`. The image of `δ_{p−1}` lands in
//! that kernel; rewriting its columns in the kernel coordinates and
//! diagonalising the relation matrix `[diag(gᵢ) | W]` yields the quotient.

use std::sync::Arc;

use crate::cochain::Cochain;
use crate::error::{Error, Result};
use crate::groupoid::FiniteGroupoid;
use crate::nerve::{tuple_budget, Nerve};
use crate::zmod::{elementary_divisors, invariant_factors, Track, ZmodMatrix};

/// Dense matrices may hold this many cells per tuple of budget.
pub const CELLS_PER_TUPLE: u64 = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyGroup {
    pub degree: usize,
    pub modulus: u32,
    /// `d₁ | d₂ | ⋯`, trivial factors dropped.
    pub invariant_factors: Vec<u64>,
    /// Prime powers, ascending.
    pub elementary_divisors: Vec<u64>,
}

impl CohomologyGroup {
    /// Group order, saturating.
    pub fn order(&self) -> u64 {
        self.invariant_factors
            .iter()
            .fold(1u64, |acc, &d| acc.saturating_mul(d))
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }
}

/// Matrix of `δ_p : Cᵖ → Cᵖ⁺¹` (rows: degree-`p+1` tuples).
fn coboundary_matrix(g: &FiniteGroupoid, p: usize, m: u32, budget: u64) -> Result<ZmodMatrix> {
    let lower = g.nerve(p)?;
    let upper = g.nerve(p + 1)?;
    check_cells(upper.len(), lower.len(), p, budget)?;
    let mut a = ZmodMatrix::zeros(upper.len(), lower.len(), m as u64);
    let mut faces = Vec::new();
    for i in 0..upper.len() {
        upper.face_indices(g, &lower, i, &mut faces);
        for (j, &f) in faces.iter().enumerate() {
            a.add(i, f, if j % 2 == 0 { 1 } else { -1 });
        }
    }
    Ok(a)
}

fn check_cells(rows: usize, cols: usize, p: usize, budget: u64) -> Result<()> {
    let cells = (rows as u64).saturating_mul(cols as u64);
    let limit = budget.saturating_mul(CELLS_PER_TUPLE);
    if cells > limit {
        return Err(Error::Budget {
            what: format!("dense matrix of δ_{p}"),
            needed: cells,
            budget: limit,
        });
    }
    Ok(())
}

/// `Hᵖ(G; μ_m)` under the process-wide tuple budget.
pub fn cohomology_group(g: &FiniteGroupoid, p: usize, m: u32) -> Result<CohomologyGroup> {
    cohomology_group_with_budget(g, p, m, tuple_budget())
}

/// `Hᵖ(G; μ_m)`, refusing nerves above `budget` tuples and dense matrices
/// above `budget · CELLS_PER_TUPLE` cells.
pub fn cohomology_group_with_budget(
    g: &FiniteGroupoid,
    p: usize,
    m: u32,
    budget: u64,
) -> Result<CohomologyGroup> {
    if m == 0 {
        return Err(Error::Precondition("modulus must be positive".into()));
    }
    // fail fast on the largest nerve before building anything
    let needed = Nerve::size(g, p + 1);
    if needed > budget {
        return Err(Error::Budget {
            what: format!("degree-{} nerve", p + 1),
            needed,
            budget,
        });
    }
    let mm = m as u64;
    let mut a = coboundary_matrix(g, p, m, budget)?;
    let n = a.cols;
    let diag = a.diagonalize(
        None,
        Track {
            v: false,
            v_inverse: true,
        },
    );
    let vinv = diag.v_inverse.expect("tracked");
    let gs: Vec<u64> = (0..n)
        .map(|i| match diag.diagonal.get(i) {
            Some(&d) if d != 0 => num_integer::gcd(d, mm),
            _ => mm,
        })
        .collect();
    let image_cols = if p == 0 {
        Vec::new()
    } else {
        let b = coboundary_matrix(g, p - 1, m, budget)?;
        (0..b.cols).map(|c| vinv.mul_vec(&b.column(c))).collect::<Vec<_>>()
    };
    let mut rel = ZmodMatrix::zeros(n, n + image_cols.len(), mm);
    for (i, &gi) in gs.iter().enumerate() {
        rel.set(i, i, gi);
    }
    for (c, y) in image_cols.iter().enumerate() {
        for i in 0..n {
            let step = mm / gs[i];
            debug_assert_eq!(y[i] % step, 0, "image not inside the kernel");
            rel.set(i, n + c, y[i] / step);
        }
    }
    let d = rel.diagonalize(None, Track::default());
    let cyclic: Vec<u64> = (0..n)
        .map(|i| match d.diagonal.get(i) {
            Some(&x) if x != 0 => num_integer::gcd(x, mm),
            _ => mm,
        })
        .collect();
    Ok(CohomologyGroup {
        degree: p,
        modulus: m,
        invariant_factors: invariant_factors(&cyclic),
        elementary_divisors: elementary_divisors(&cyclic)
            .into_iter()
            .filter(|&q| q > 1)
            .collect(),
    })
}

/// A cochain `β` with `δβ = c`, if one exists.
pub fn coboundary_witness(c: &Cochain) -> Result<Option<Cochain>> {
    if c.degree() == 0 {
        return Err(Error::Precondition("degree-0 cochains are never coboundaries".into()));
    }
    let g = c.groupoid();
    let b = coboundary_matrix(g, c.degree() - 1, c.modulus(), tuple_budget())?;
    let rhs: Vec<u64> = c.values().iter().map(|&v| v as u64).collect();
    match b.solve(&rhs) {
        Ok(x) => Ok(Some(Cochain::from_values(
            Arc::clone(g),
            c.degree() - 1,
            c.modulus(),
            x.into_iter().map(|v| v as u32).collect(),
        )?)),
        Err(Error::Unsolvable { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Whether two cocycles represent the same class.
pub fn cohomologous(a: &Cochain, b: &Cochain) -> Result<bool> {
    Ok(coboundary_witness(&a.div(b)?)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    fn bg(g: FiniteGroup) -> FiniteGroupoid {
        FiniteGroupoid::from_group(&g)
    }

    #[test]
    fn trivial_group() {
        let g = bg(FiniteGroup::trivial());
        for p in 1..4 {
            assert!(cohomology_group(&g, p, 6).unwrap().is_trivial());
        }
        // H⁰ of a connected groupoid: constant functions
        assert_eq!(cohomology_group(&g, 0, 6).unwrap().invariant_factors, vec![6]);
    }

    #[test]
    fn cyclic_groups() {
        // H¹(ℤ/n; μ_m) = Hom(ℤ/n, ℤ/m) = ℤ/gcd(n, m)
        assert_eq!(cohomology_group(&bg(FiniteGroup::cyclic(2)), 1, 2).unwrap().invariant_factors, vec![2]);
        assert_eq!(cohomology_group(&bg(FiniteGroup::cyclic(4)), 1, 6).unwrap().invariant_factors, vec![2]);
        // H²(ℤ/n; μ_n) = ℤ/n as well
        assert_eq!(cohomology_group(&bg(FiniteGroup::cyclic(3)), 2, 3).unwrap().order(), 3);
    }

    #[test]
    fn klein_four_second_cohomology() {
        // H²(V4; μ₂) = (ℤ/2)³
        let h = cohomology_group(&bg(FiniteGroup::klein4()), 2, 2).unwrap();
        assert_eq!(h.invariant_factors, vec![2, 2, 2]);
    }

    #[test]
    fn discrete_groupoid_h0() {
        let h = cohomology_group(&FiniteGroupoid::discrete(3), 0, 4).unwrap();
        assert_eq!(h.invariant_factors, vec![4, 4, 4]);
        assert_eq!(h.elementary_divisors, vec![4, 4, 4]);
    }

    #[test]
    fn witness_for_coboundary() {
        let g = Arc::new(bg(FiniteGroup::symmetric(3)));
        let beta = Cochain::from_fn(Arc::clone(&g), 1, 6, |t| t[0] as i64).unwrap();
        let d = beta.coboundary().unwrap();
        let w = coboundary_witness(&d).unwrap().expect("coboundary");
        assert_eq!(w.coboundary().unwrap(), d);
        let alpha = crate::cochain::standard_cyclic_3cocycle(2, 1).unwrap();
        assert!(coboundary_witness(&alpha).unwrap().is_none());
    }

    #[test]
    fn budget_is_enforced() {
        let r = cohomology_group_with_budget(&bg(FiniteGroup::cyclic(4)), 2, 4, 10);
        assert!(r.unwrap_err().is_budget());
        // 125 tuples in degree 3 fit, the 125×25 matrix does not
        let r = cohomology_group_with_budget(&bg(FiniteGroup::cyclic(5)), 2, 5, 125);
        assert!(r.unwrap_err().is_budget());
    }
}
