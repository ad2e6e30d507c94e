//! Crate-wide error type.

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point ({x}, {y}) is not inside the open unit disk")]
    OutsideDisk { x: f64, y: f64 },
    #[error("curvature must be finite and negative, got {0}")]
    InvalidCurvature(f64),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("horocycles share the ideal point; their level gap is {gap}")]
    ConcentricHorocycles { gap: f64 },
    #[error("horocycles do not sit at the endpoints of the side")]
    MismatchedIdealPoints,
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("horocycle family is not pairwise disjoint: vertices {i} and {j} overlap by {overlap}")]
    OverlappingHorocycles { i: usize, j: usize, overlap: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("root not bracketed: {0}")]
    NotBracketed(String),
    #[error("mesh generation failed: {0}")]
    Mesh(String),
    #[error("curve leaves the mesh at ({x}, {y})")]
    OutsideMesh { x: f64, y: f64 },
    #[error("nonlinear solve did not converge after {iterations} iterations (last residual {last:.3e})")]
    NotConverged { iterations: usize, last: f64, history: Vec<f64> },
    #[error("linear solve failed: {0}")]
    Linear(String),
    #[error("polygon is not admissible: {0}")]
    Infeasible(String),
    #[error("refused: {reason}")]
    Refused { reason: String, report: Option<Box<crate::polygon::FeasibilityReport>> },
    #[error("inapplicable: {0}")]
    Inapplicable(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
