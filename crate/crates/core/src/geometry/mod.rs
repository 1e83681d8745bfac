//! Star-shaped outer domains, graded polar meshes of the perforated domain, and
//! geometric functionals (area, perimeter, equivalent radii).
//!
//! Curved boundaries are replaced by the polygon through the boundary vertices; every
//! discrete boundary integral elsewhere in the crate uses that same polygon.

mod domain;
mod locate;
mod mesh;

pub use domain::{measure_equivalent_radius, DomainSpec, OuterBoundary};
pub use locate::PointLocator;
pub use mesh::{
    area, build_polar_mesh, graded_fractions, perimeter, signed_area, BoundaryMarker, Mesh, Point,
    PolarLayout, VertexMarker,
};

/// Default ratio between consecutive radial cells (small cells at the hole).
pub const DEFAULT_GRADING: f64 = 0.85;
