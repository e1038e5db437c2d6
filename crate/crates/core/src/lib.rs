//! Numerical convex analysis on coercive convex functions of one or two
//! variables: conjugation, epi-operations, outer linearizations, rotational
//! epi-symmetrization, log-concave masses and the extremal drivers built on
//! them.

pub mod calculus;
pub mod cli;
pub mod config;
pub mod domain;
pub mod dsl;
pub mod error;
pub mod ext_real;
pub mod extremal;
pub mod families;
pub mod geometry;
pub mod grid;
pub mod handle;
pub mod linearization;
pub mod logconcave;
pub mod rotation;
pub mod slopes;
pub mod symmetrize;
pub mod transform;
pub mod vector;

pub use domain::DomainDescriptor;
pub use error::{Error, Result};
pub use ext_real::ExtReal;
pub use grid::{GridFunction, GridSpec};
pub use handle::{ConvexFunction, FunctionHandle};
pub use rotation::{Rotation, RotationGrid};
pub use slopes::{DiscreteMeasure, SlopeSet};
pub use vector::Vector;
