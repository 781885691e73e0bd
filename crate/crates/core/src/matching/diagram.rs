use serde::{Deserialize, Serialize};

use super::{static_bottleneck, BipartiteGraph, MatchingError};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagramPoint<T> {
    pub birth: T,
    pub death: T,
}

impl<T: Scalar> DiagramPoint<T> {
    pub fn new(birth: T, death: T) -> Self {
        Self { birth, death }
    }

    /// L∞ distance to the nearest diagonal point.
    pub fn diagonal_distance(&self) -> T {
        (self.death - self.birth) * T::half()
    }

    pub fn linf(&self, other: &Self) -> T {
        (self.birth - other.birth).abs().max((self.death - other.death).abs())
    }
}

/// Bipartite graph whose bottleneck equals the bottleneck distance of `x` and `y`.
///
/// Left vertices are `x` followed by the diagonal projections of `y`; right
/// vertices are `y` followed by the projections of `x`. Edges: every
/// `x_i`–`y_j` at L∞ distance, each point to its own projection at half its
/// persistence, and every projection pair at zero.
pub fn diagram_reduction<T: Scalar>(
    x: &[DiagramPoint<T>],
    y: &[DiagramPoint<T>],
) -> Result<BipartiteGraph<T>, MatchingError> {
    for (index, p) in x.iter().chain(y).enumerate() {
        if !(p.death > p.birth) {
            return Err(MatchingError::InvalidPoint {
                index,
                birth: p.birth.to_f64().unwrap_or(f64::NAN),
                death: p.death.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    let (nx, ny) = (x.len(), y.len());
    let n = nx + ny;
    let mut g = BipartiteGraph::new(n, n);
    for (i, p) in x.iter().enumerate() {
        for (j, q) in y.iter().enumerate() {
            g.add_edge(i, j, p.linf(q))?;
        }
        g.add_edge(i, ny + i, p.diagonal_distance())?;
    }
    for (j, q) in y.iter().enumerate() {
        g.add_edge(nx + j, j, q.diagonal_distance())?;
        for i in 0..nx {
            g.add_edge(nx + j, ny + i, T::zero())?;
        }
    }
    Ok(g)
}

/// Bottleneck distance between two finite diagrams.
pub fn bottleneck_distance<T: Scalar>(
    x: &[DiagramPoint<T>],
    y: &[DiagramPoint<T>],
) -> Result<T, MatchingError> {
    Ok(static_bottleneck(&diagram_reduction(x, y)?)?.value)
}
