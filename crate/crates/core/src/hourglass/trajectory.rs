use std::io::Write;

use serde::Serialize;

use crate::curves::{integrate, CostForm, CostPiece};
use crate::matching::EdgeId;
use crate::scalar::Scalar;

/// Stretch of time on which one edge is the bottleneck.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySegment<T> {
    pub t0: T,
    pub t1: T,
    /// `None` only for the empty graph.
    pub edge: Option<EdgeId>,
    pub pieces: Vec<CostPiece<T>>,
}

/// Bottleneck cost over a run, as closed-form pieces tagged by edge.
#[derive(Debug, Clone, PartialEq)]
pub struct BottleneckTrajectory<T> {
    pub(crate) segments: Vec<TrajectorySegment<T>>,
}

impl<T: Scalar> Default for BottleneckTrajectory<T> {
    fn default() -> Self {
        Self { segments: Vec::new() }
    }
}

impl<T: Scalar> BottleneckTrajectory<T> {
    pub fn segments(&self) -> &[TrajectorySegment<T>] {
        &self.segments
    }

    pub fn start(&self) -> Option<T> {
        self.segments.first().map(|s| s.t0)
    }

    pub fn end(&self) -> Option<T> {
        self.segments.last().map(|s| s.t1)
    }

    /// All pieces in time order.
    pub fn pieces(&self) -> Vec<CostPiece<T>> {
        self.segments.iter().flat_map(|s| s.pieces.iter().cloned()).collect()
    }

    /// Bottleneck edge on the segment containing `t`.
    pub fn edge_at(&self, t: T) -> Option<EdgeId> {
        self.segment_at(t).and_then(|s| s.edge)
    }

    /// Value at `t`; the final instant belongs to the last segment.
    pub fn value_at(&self, t: T) -> Option<T> {
        let seg = self.segment_at(t)?;
        let idx = seg
            .pieces
            .partition_point(|p| p.t0 <= t)
            .saturating_sub(1)
            .min(seg.pieces.len().saturating_sub(1));
        seg.pieces.get(idx).map(|p| p.form.eval(t))
    }

    fn segment_at(&self, t: T) -> Option<&TrajectorySegment<T>> {
        let idx = self.segments.partition_point(|s| s.t0 <= t);
        let seg = self.segments.get(idx.checked_sub(1)?)?;
        (t <= seg.t1).then_some(seg)
    }

    /// Exact integral over the whole run.
    pub fn integral(&self) -> T {
        integrate(&self.pieces())
    }

    pub(crate) fn push(&mut self, t0: T, t1: T, edge: Option<EdgeId>, pieces: Vec<CostPiece<T>>) {
        if !(t1 > t0) {
            return;
        }
        let pieces = if pieces.is_empty() {
            vec![CostPiece::new(t0, t1, CostForm::Zero)]
        } else {
            pieces
        };
        self.segments.push(TrajectorySegment { t0, t1, edge, pieces });
    }

    /// CSV with one row per piece: `t_start,t_end,root_edge,value_at_midpoint`.
    /// Exact piece parameters go through [`crate::io::trajectory_json`].
    pub fn write_csv<W: Write>(&self, w: W) -> csv::Result<()> {
        #[derive(Serialize)]
        struct Row {
            t_start: f64,
            t_end: f64,
            root_edge: String,
            value_at_midpoint: f64,
        }
        let f = |x: T| x.to_f64().unwrap_or(f64::NAN);
        let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
        out.write_record(["t_start", "t_end", "root_edge", "value_at_midpoint"])?;
        for seg in &self.segments {
            for p in &seg.pieces {
                out.serialize(Row {
                    t_start: f(p.t0),
                    t_end: f(p.t1),
                    root_edge: seg.edge.map_or_else(String::new, |e| e.to_string()),
                    value_at_midpoint: f(p.eval((p.t0 + p.t1) * T::half())),
                })?;
            }
        }
        out.flush()?;
        Ok(())
    }
}
