//! # kinetic-hourglass
//!
//! Kinetic maintenance of the bottleneck cost and a min-cost perfect matching of a
//! bipartite graph whose edge weights move along known flight plans, and its
//! application to the exact integrated bottleneck distance between the
//! 0-dimensional persistent homology transforms of two planar embedded graphs.
//!
//! * [`curves`] - piecewise cost curves, closed-form crossings and integrals.
//! * [`kinetic_pq`] - kinetic heap and kinetic hanger over flight plans.
//! * [`matching`] - Hopcroft-Karp, augmenting paths, static bottleneck and the
//!   persistence-diagram reduction.
//! * [`hourglass`] - the paired lower/upper kinetic structure with its L/M/U events.
//! * [`pht`] - lower-star diagrams, vines and the integrated distance.
//! * [`io`] - JSON and CSV formats used by the command-line tool.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below fix the common `f64` instantiation.

pub mod curves;
pub mod hourglass;
pub mod io;
pub mod kinetic_pq;
pub mod matching;
pub mod pht;
mod scalar;

pub use scalar::{wrap_angle, Scalar};

pub type Sinusoid64 = curves::Sinusoid<f64>;
pub type CostPiece64 = curves::CostPiece<f64>;
pub type FlightPlan64 = curves::FlightPlan<f64>;
pub type FlightPlan32 = curves::FlightPlan<f32>;
pub type KineticPq64 = kinetic_pq::KineticPq<f64>;
pub type KinematicGraph64 = matching::BipartiteGraph<curves::FlightPlan<f64>>;
pub type WeightedGraph64 = matching::BipartiteGraph<f64>;
pub type Hourglass64 = hourglass::Hourglass<f64>;
pub type Hourglass32 = hourglass::Hourglass<f32>;
pub type Trajectory64 = hourglass::BottleneckTrajectory<f64>;
pub type EmbeddedGraph64 = pht::EmbeddedGraph<f64>;
pub type Vineyard64 = pht::PhtVineyard<f64>;
