//! Exact finite-groupoid cohomology with roots-of-unity coefficients.
//!
//! The crate covers four layers that build on each other:
//!
//! * [`group`], [`action`], [`groupoid`]: finite groups, right actions and
//!   finite groupoids given by tables, together with the action groupoid,
//!   the inertia groupoid and its decomposition over conjugacy classes.
//! * [`nerve`], [`cochain`], [`cohomology`]: `μ_m`-valued cochains on groupoid
//!   nerves, the multiplicative coboundary, normalisation of 3-cocycles and
//!   brute-force cohomology groups.
//! * [`transgression`]: the map from 3-cocycles on a groupoid to 2-cocycles on
//!   its inertia groupoid, and the companion map in one degree lower.
//! * [`extension`], [`rep`], [`tate`]: central extensions and twisted
//!   groupoids, twisted representations with exact cyclotomic entries, and
//!   Laurent series of class functions subject to the rotation condition.
//!
//! All values are exact. Exponents of roots of unity are stored modulo the
//! cochain modulus and scalars live in [`cyclotomic::CycSum`].

pub mod action;
pub mod center;
pub mod cochain;
pub mod cohomology;
pub mod cyclotomic;
pub mod error;
pub mod exec;
pub mod extension;
pub mod fixtures;
pub mod functor;
pub mod group;
pub mod groupoid;
pub mod inertia;
pub mod loops;
pub mod matrix;
pub mod nerve;
pub mod rep;
pub mod tate;
pub mod transgression;
pub mod zmod;

pub use action::GroupAction;
pub use cochain::{Cochain, RootOfUnity};
pub use cyclotomic::CycSum;
pub use error::{Error, Result};
pub use exec::Strategy;
pub use extension::{CentralExtension, TwistedGroupoid};
pub use group::FiniteGroup;
pub use groupoid::{ActionGroupoid, FiniteGroupoid};

/// Default cap on the number of nerve tuples a single computation may touch.
pub const DEFAULT_TUPLE_BUDGET: u64 = 1_000_000;
