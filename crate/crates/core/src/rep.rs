//! Twisted representations and twisted vector bundles with exact entries.
//!
//! A bundle on a groupoid assigns a dimension to each object and to each
//! arrow `a : x → y` a `dim x × dim y` matrix `μ(a)`, mapping the fibre over
//! the target to the fibre over the source. It is `θ`-twisted when
//! `μ(a)·μ(b) = θ(a, b)·μ(ab)` for composable pairs and units act as
//! identities. On `𝔹H` this is a twisted representation.

use std::sync::Arc;

use crate::cochain::{same_groupoid, Cochain};
use crate::cyclotomic::CycSum;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::groupoid::FiniteGroupoid;
use crate::matrix::CycMatrix;

#[derive(Debug, Clone)]
pub struct MatrixRep {
    groupoid: Arc<FiniteGroupoid>,
    dims: Vec<usize>,
    matrices: Vec<CycMatrix>,
}

/// Why a bundle failed the twisted law.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RepViolation {
    /// `μ(unit x)` is not the identity.
    Unit { object: usize },
    /// `μ(a)μ(b) ≠ θ(a, b)μ(ab)`.
    Law { pair: (usize, usize) },
}

impl MatrixRep {
    /// Checks shapes: `μ(a)` must be `dim(src a) × dim(tgt a)`.
    pub fn new(groupoid: Arc<FiniteGroupoid>, dims: Vec<usize>, matrices: Vec<CycMatrix>) -> Result<Self> {
        if dims.len() != groupoid.objects() {
            return Err(Error::Dimension(format!(
                "{} fibre dimensions for {} objects",
                dims.len(),
                groupoid.objects()
            )));
        }
        if matrices.len() != groupoid.arrows() {
            return Err(Error::Dimension(format!(
                "{} matrices for {} arrows",
                matrices.len(),
                groupoid.arrows()
            )));
        }
        for (a, mat) in matrices.iter().enumerate() {
            let want = (dims[groupoid.src(a)], dims[groupoid.tgt(a)]);
            if (mat.rows(), mat.cols()) != want {
                return Err(Error::Dimension(format!(
                    "arrow {a}: matrix is {}×{}, fibres need {}×{}",
                    mat.rows(),
                    mat.cols(),
                    want.0,
                    want.1
                )));
            }
        }
        Ok(MatrixRep {
            groupoid,
            dims,
            matrices,
        })
    }

    /// A representation of a group: one square matrix per element.
    pub fn for_group(group: &FiniteGroup, matrices: Vec<CycMatrix>) -> Result<Self> {
        let dim = matrices.first().map_or(0, CycMatrix::rows);
        Self::new(Arc::new(FiniteGroupoid::from_group(group)), vec![dim], matrices)
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.groupoid
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self, a: usize) -> &CycMatrix {
        &self.matrices[a]
    }

    pub fn matrices(&self) -> &[CycMatrix] {
        &self.matrices
    }

    /// `trace μ(ℓ)` for a loop `ℓ`.
    pub fn character_at(&self, l: usize) -> CycSum {
        self.matrices[l].trace()
    }
}

/// First violation of the `θ`-twisted law, or `None`.
pub fn verify_twisted_bundle(rep: &MatrixRep, theta: &Cochain) -> Result<Option<RepViolation>> {
    if theta.degree() != 2 || !same_groupoid(theta.groupoid(), &rep.groupoid) {
        return Err(Error::Dimension(
            "the twist must be a 2-cochain on the bundle's groupoid".into(),
        ));
    }
    let g = &rep.groupoid;
    let m = theta.modulus();
    for x in 0..g.objects() {
        let level = rep.matrices[g.unit(x)].level();
        if rep.matrices[g.unit(x)] != CycMatrix::identity(rep.dims[x], level) {
            return Ok(Some(RepViolation::Unit { object: x }));
        }
    }
    for a in 0..g.arrows() {
        for &b in g.out_arrows(g.tgt(a)) {
            let lhs = rep.matrices[a].mul(&rep.matrices[b])?;
            let z = CycSum::root(m, theta.exponent(&[a, b]) as i64);
            let rhs = rep.matrices[g.compose(a, b)].scale(&z);
            if lhs != rhs {
                return Ok(Some(RepViolation::Law { pair: (a, b) }));
            }
        }
    }
    Ok(None)
}

/// [`verify_twisted_bundle`] on `𝔹H`.
pub fn verify_twisted_rep(rep: &MatrixRep, theta: &Cochain) -> Result<Option<RepViolation>> {
    if rep.groupoid.objects() != 1 {
        return Err(Error::Dimension("a group representation has one object".into()));
    }
    if !rep.matrices.iter().all(CycMatrix::is_square) {
        return Err(Error::Dimension("representation matrices must be square".into()));
    }
    verify_twisted_bundle(rep, theta)
}

/// The twisted regular bundle: the fibre over `x` has a basis `e_b` indexed
/// by arrows `b` out of `x`, and `μ(a)e_b = θ(a, b)·e_{ab}`. On `𝔹H` this
/// is `ρ(g)e_h = θ(g, h)e_{gh}`.
pub fn twisted_regular_bundle(theta: &Cochain) -> Result<MatrixRep> {
    if theta.degree() != 2 {
        return Err(Error::Dimension("the twist must have degree 2".into()));
    }
    theta.check_normalized()?;
    let g = Arc::clone(theta.groupoid());
    let m = theta.modulus();
    let dims: Vec<usize> = (0..g.objects()).map(|x| g.out_arrows(x).len()).collect();
    let position = |b: usize| {
        g.out_arrows(g.src(b))
            .iter()
            .position(|&c| c == b)
            .expect("arrow out of its source")
    };
    let matrices = (0..g.arrows())
        .map(|a| {
            let (x, y) = (g.src(a), g.tgt(a));
            let mut mat = CycMatrix::zeros(dims[x], dims[y], m);
            for (col, &b) in g.out_arrows(y).iter().enumerate() {
                let row = position(g.compose(a, b));
                mat.set(row, col, CycSum::root(m, theta.exponent(&[a, b]) as i64));
            }
            mat
        })
        .collect();
    MatrixRep::new(g, dims, matrices)
}

/// [`twisted_regular_bundle`] for a group, i.e. on `𝔹H`.
pub fn twisted_regular_rep(theta: &Cochain) -> Result<MatrixRep> {
    if theta.groupoid().objects() != 1 {
        return Err(Error::Dimension("expected a twist on a one-object groupoid".into()));
    }
    twisted_regular_bundle(theta)
}
