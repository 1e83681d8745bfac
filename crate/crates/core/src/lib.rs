//! Numerical laboratory for Steklov and Steklov–Dirichlet eigenvalue problems
//! on planar domains perforated by a small centered disk.
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`]: star-shaped outer domains, graded polar meshes, areas and perimeters.
//! - [`shells`]: closed-form spectra on spherical shells `r < |x| < R` in any dimension,
//!   plus the capacity-type corrector function and its norms.
//! - [`discretize`]: P1 stiffness/mass assembly, Dirichlet elimination, discrete norms.
//! - [`eigensolve`]: Schur reduction to the outer boundary (discrete Dirichlet-to-Neumann map)
//!   and a dense generalized symmetric eigensolver.
//! - [`analysis`]: nodal-domain counting and structural checks on eigenfields.
//! - [`experiments`]: radius and resolution sweeps producing CSV/JSON reports.

pub mod analysis;
pub mod discretize;
pub mod eigensolve;
mod error;
pub mod experiments;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod quadrature;
pub mod shells;

pub use error::{Error, Result};
