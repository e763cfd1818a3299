//! Thin-film Darcy-Brinkman toolkit.
//!
//! Two complementary solvers for pressure-driven flow with viscous heating in
//! a thin saturated gap:
//!
//! * a reduced model — closed-form vertical velocity and temperature profiles
//!   per gap column coupled through a planar Reynolds-type pressure equation
//!   ([`reduced_flow`], [`reduced_heat`]);
//! * a coarse 3D solver of the full dilated system on a box ([`brinkman3d`]),
//!   used to verify the reduced model: as the slenderness parameter shrinks,
//!   the 3D fields approach the reduced ones, with a priori norm scalings that
//!   stay bounded.
//!
//! Shared numerical kernels live in [`numerics`]; geometry, parameters and
//! field containers in [`params`], [`grid`] and [`fields`]. All types are
//! immutable after construction and safe to share across threads; every
//! reduction uses a fixed summation order, so results are bit-reproducible.

pub mod brinkman3d;
pub mod error;
pub mod fields;
pub mod grid;
pub mod numerics;
pub mod params;
pub mod reduced_flow;
pub mod reduced_heat;

pub use error::{CoreError, Result};
pub use fields::{
    ColumnScalarField, ColumnVectorField, ForcingSpec, PotentialSpec, ScalarField2D, VectorField2D,
};
pub use grid::{GapField, GapSpec, Grid2D};
pub use params::PhysicalParams;
