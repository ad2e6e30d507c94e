//! Minimal graphs over ideal polygons in a negatively curved disk.
//!
//! The crate is organised bottom-up:
//!
//! * [`hyperbolic`] exact geometry of the Poincaré disk of curvature `κ < 0`:
//!   distances, geodesics, Busemann functions, horocycles, Fermi charts.
//! * [`polygon`] ideal polygons, horocycle families, the Jenkins–Serrin
//!   feasibility decision procedure and the quadrilateral constructions used
//!   to grow Scherk domains.
//! * [`barrier`] the closed-form Scherk barrier and its ODE identities.
//! * [`mesh`] curved-boundary triangulations of truncated domains.
//! * [`solver`] P1 finite elements for the minimal surface equation with
//!   truncated infinite data.
//! * [`diagnostics`] flux integrals, the stability gap, conformal moduli and
//!   the exhaustion driver.
//! * [`io`] and [`cli`] configuration files, reports and the command line.

// `!(x > 0.0)` is used on purpose: it rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod barrier;
pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod hyperbolic;
pub mod io;
pub mod mesh;
pub mod numdiff;
pub mod polygon;
pub mod solver;

pub use error::{Error, Result};
pub use hyperbolic::{Endpoint, FermiChart, Geodesic, Horocycle, IdealPoint, Metric, SurfacePoint};
pub use num_complex::Complex64;
