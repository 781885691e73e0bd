//! 0-dimensional persistent homology transform of planar embedded graphs.
//!
//! Heights are `h_θ(v) = x·cosθ + y·sinθ`, so every diagram coordinate is a
//! sinusoid in θ between critical directions. A vine follows one diagram point
//! around the circle as a chain of such ellipse arcs; the distance between two
//! transforms is then a kinetic bottleneck problem over the circle.

mod diagram;
mod distance;
mod graph;
mod vines;

use thiserror::Error;

use crate::curves::CurveError;
use crate::hourglass::HourglassError;
use crate::matching::MatchingError;

pub use diagram::{lower_star_diagram, DirectionDiagram, FinitePoint};
pub use distance::{
    direction_distance, distance_between, essential_gap, integrated_distance,
    pht_bipartite_graph, sampled_oracle, PhtDistance, CLOSURE_TOL,
};
pub use graph::{
    critical_directions, extremal_vertices, EmbeddedGraph, ExtremalVertex, ANGLE_TOL,
    STAR_SAMPLES,
};
pub use vines::{compute_vines, EssentialPiece, PhtVineyard, Vine, VineArc, STITCH_TOL};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PhtError {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("not generic: parallel vertex-pair lines near direction {angle}")]
    NotGeneric { angle: f64 },
    #[error("not star-shaped: ({x}, {y}) does not see the center")]
    NotStarShaped { x: f64, y: f64 },
    #[error("nontrivial monodromy / not star-shaped at direction {angle}: {reason}")]
    Monodromy { angle: f64, reason: String },
    #[error("at least 4 samples needed, got {0}")]
    TooFewSamples(usize),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error(transparent)]
    Hourglass(#[from] HourglassError),
}
