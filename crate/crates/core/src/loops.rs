//! Loops in `X⫽G` for discrete `X`.
//!
//! A loop over a cover with `n` segments is a cyclic chain of points
//! `x₀, …, x_{n−1}` joined by group elements with `xᵢ·gᵢ = x_{i+1 mod n}`.
//! Paths in a discrete space are constant, so such a loop is isomorphic to
//! the one-segment loop at `x₀` labelled by the product `g₀g₁⋯g_{n−1}`.

use crate::action::GroupAction;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteLoop {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

/// A one-segment loop together with the natural isomorphism to the loop it
/// was reduced from: segment `i` is carried to the base segment by
/// `witness[i]`, with `witness[0]` the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedLoop {
    pub point: usize,
    pub element: usize,
    pub witness: Vec<usize>,
}

impl DiscreteLoop {
    pub fn new(action: &GroupAction, vertices: Vec<usize>, edges: Vec<usize>) -> Result<Self> {
        let n = vertices.len();
        if n == 0 || edges.len() != n {
            return Err(Error::InvalidLoop(format!(
                "{n} vertices and {} edges; need the same positive count",
                edges.len()
            )));
        }
        if let Some(&x) = vertices.iter().find(|&&x| x >= action.points()) {
            return Err(Error::InvalidLoop(format!("vertex {x} is not a point")));
        }
        if let Some(&g) = edges.iter().find(|&&g| g >= action.group().order()) {
            return Err(Error::InvalidLoop(format!("edge {g} is not a group element")));
        }
        for i in 0..n {
            let next = vertices[(i + 1) % n];
            if action.act(vertices[i], edges[i]) != next {
                return Err(Error::InvalidLoop(format!(
                    "segment {i}: {}·{} is not {next}",
                    vertices[i], edges[i]
                )));
            }
        }
        Ok(DiscreteLoop { vertices, edges })
    }

    pub fn cover_size(&self) -> usize {
        self.vertices.len()
    }

    /// Collapses the loop onto the trivial cover.
    pub fn reduce(&self, action: &GroupAction) -> ReducedLoop {
        let g = action.group();
        let mut witness = Vec::with_capacity(self.edges.len());
        let mut acc = 0;
        for &e in &self.edges {
            witness.push(acc);
            acc = g.mul(acc, e);
        }
        ReducedLoop {
            point: self.vertices[0],
            element: acc,
            witness,
        }
    }
}

impl ReducedLoop {
    /// Spreads the one-segment loop back over the cover through the witness:
    /// vertex `i` is `x·wᵢ` and edge `i` is `wᵢ⁻¹·w_{i+1}`, where going once
    /// around closes up with `w_n = g`.
    pub fn recompose(&self, action: &GroupAction) -> DiscreteLoop {
        let g = action.group();
        let n = self.witness.len();
        let vertices = self.witness.iter().map(|&w| action.act(self.point, w)).collect();
        let edges = (0..n)
            .map(|i| {
                let next = if i + 1 < n {
                    self.witness[i + 1]
                } else {
                    g.mul(self.element, self.witness[0])
                };
                g.mul(g.inv(self.witness[i]), next)
            })
            .collect();
        DiscreteLoop { vertices, edges }
    }

    /// The reduced loop is itself a loop: `x·g = x`.
    pub fn is_closed(&self, action: &GroupAction) -> bool {
        action.act(self.point, self.element) == self.point
    }
}
