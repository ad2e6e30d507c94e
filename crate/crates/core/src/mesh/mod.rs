//! Curved-boundary triangulations of the disk chart.
//!
//! Regions are bounded by chart segments and circular arcs, which covers
//! geodesics, equidistants, horocycles and geodesic circles. Meshes carry the
//! curve parameters of their boundary nodes so that refinement stays on the
//! curves and boundary data can be evaluated exactly.

mod builders;
mod curve;
mod domain;
mod generate;
mod locate;
mod trimesh;

pub use builders::*;
pub use curve::Curve;
pub use domain::{BoundaryTag, Domain, Piece, Sizing, Symmetry};
pub use generate::{generate, MeshOptions};
pub use locate::Locator;
pub use trimesh::{CurveEdge, TriMesh};
