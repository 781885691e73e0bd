//! JSON input/output formats for the command-line tool.
//!
//! Flight plan:
//! `{"domain": {"kind":"interval","end":T} | {"kind":"circle"},
//!   "pieces": [{"t0":..,"t1":..,"form": {"linear":{"a":..,"b":..}}
//!                                     | {"maxabs":[{"A":..,"B":..},...]}
//!                                     | "zero"}]}`
//! where `A`, `B` are the cosθ/sinθ coefficients.
//!
//! Graphs list their side sizes and edges in id order; a kinetic graph carries
//! a flight plan per edge, a weighted graph a number. Diagrams are
//! `{"points":[[b,d],...]}`, embedded graphs
//! `{"vertices":[[x,y],...], "edges":[[i,j],...], "center":[x,y]?}`.

use std::io::Write;
use std::path::Path;

use serde::{de::DeserializeOwned, Deserialize, Serialize};
use thiserror::Error;

use crate::curves::{CostForm, CostPiece, CurveError, Domain, FlightPlan, Sinusoid};
use crate::hourglass::BottleneckTrajectory;
use crate::matching::{BipartiteGraph, DiagramPoint, MatchingError};
use crate::pht::{EmbeddedGraph, PhtError, PhtVineyard};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error(transparent)]
    Pht(#[from] PhtError),
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DomainJson {
    Interval { end: f64 },
    Circle,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct SinusoidJson {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "lowercase")]
pub enum FormJson {
    Linear { a: f64, b: f64 },
    Maxabs(Vec<SinusoidJson>),
    Zero,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PieceJson {
    pub t0: f64,
    pub t1: f64,
    pub form: FormJson,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PlanJson {
    pub domain: DomainJson,
    pub pieces: Vec<PieceJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct KineticEdgeJson {
    pub left: usize,
    pub right: usize,
    pub plan: PlanJson,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct KineticGraphJson {
    pub n_left: usize,
    pub n_right: usize,
    pub edges: Vec<KineticEdgeJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct WeightedEdgeJson {
    pub left: usize,
    pub right: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct WeightedGraphJson {
    pub n_left: usize,
    pub n_right: usize,
    pub edges: Vec<WeightedEdgeJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DiagramJson {
    pub points: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EmbeddedGraphJson {
    pub vertices: Vec<[f64; 2]>,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<[f64; 2]>,
}

fn form_from_json(f: &FormJson) -> CostForm<f64> {
    match f {
        FormJson::Linear { a, b } => CostForm::Linear { a: *a, b: *b },
        FormJson::Maxabs(list) => {
            CostForm::MaxAbs(list.iter().map(|s| Sinusoid::from_coeffs(s.a, s.b)).collect())
        }
        FormJson::Zero => CostForm::Zero,
    }
}

fn form_to_json(f: &CostForm<f64>) -> FormJson {
    match f {
        CostForm::Linear { a, b } => FormJson::Linear { a: *a, b: *b },
        CostForm::MaxAbs(list) => FormJson::Maxabs(
            list.iter()
                .map(|s| {
                    let (a, b) = s.coeffs();
                    SinusoidJson { a, b }
                })
                .collect(),
        ),
        CostForm::Zero => FormJson::Zero,
    }
}

fn pieces_to_json(pieces: &[CostPiece<f64>]) -> Vec<PieceJson> {
    pieces
        .iter()
        .map(|p| PieceJson {
            t0: p.t0,
            t1: p.t1,
            form: form_to_json(&p.form),
        })
        .collect()
}

impl PlanJson {
    pub fn to_plan(&self) -> Result<FlightPlan<f64>, CurveError> {
        let domain = match self.domain {
            DomainJson::Interval { end } => Domain::Interval { end },
            DomainJson::Circle => Domain::Circle,
        };
        let pieces = self
            .pieces
            .iter()
            .map(|p| CostPiece::new(p.t0, p.t1, form_from_json(&p.form)))
            .collect();
        FlightPlan::new(domain, pieces)
    }

    pub fn from_plan(plan: &FlightPlan<f64>) -> Self {
        let domain = match plan.domain() {
            Domain::Interval { end } => DomainJson::Interval { end },
            Domain::Circle => DomainJson::Circle,
        };
        Self {
            domain,
            pieces: pieces_to_json(plan.pieces()),
        }
    }
}

impl KineticGraphJson {
    pub fn to_graph(&self) -> Result<BipartiteGraph<FlightPlan<f64>>, IoError> {
        let mut g = BipartiteGraph::new(self.n_left, self.n_right);
        for e in &self.edges {
            g.add_edge(e.left, e.right, e.plan.to_plan()?)?;
        }
        Ok(g)
    }

    pub fn from_graph(g: &BipartiteGraph<FlightPlan<f64>>) -> Self {
        Self {
            n_left: g.n_left(),
            n_right: g.n_right(),
            edges: g
                .edges()
                .iter()
                .map(|e| KineticEdgeJson {
                    left: e.left,
                    right: e.right,
                    plan: PlanJson::from_plan(&e.weight),
                })
                .collect(),
        }
    }
}

impl WeightedGraphJson {
    pub fn to_graph(&self) -> Result<BipartiteGraph<f64>, IoError> {
        let mut g = BipartiteGraph::new(self.n_left, self.n_right);
        for (id, e) in self.edges.iter().enumerate() {
            if e.weight.is_nan() {
                return Err(MatchingError::NanWeight(id).into());
            }
            g.add_edge(e.left, e.right, e.weight)?;
        }
        Ok(g)
    }
}

impl DiagramJson {
    pub fn to_points(&self) -> Vec<DiagramPoint<f64>> {
        self.points.iter().map(|p| DiagramPoint::new(p[0], p[1])).collect()
    }
}

impl EmbeddedGraphJson {
    pub fn to_graph(&self) -> Result<EmbeddedGraph<f64>, PhtError> {
        EmbeddedGraph::new(self.vertices.clone(), self.edges.clone(), self.center)
    }

    pub fn from_graph(g: &EmbeddedGraph<f64>) -> Self {
        Self {
            vertices: g.vertices().to_vec(),
            edges: g.edges().to_vec(),
            center: g.center(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ArcDump {
    pub t0: f64,
    pub t1: f64,
    pub birth_vertex: usize,
    pub death_vertex: usize,
    pub birth: SinusoidJson,
    pub death: SinusoidJson,
}

#[derive(Debug, Clone, Serialize)]
pub struct VineDump {
    pub birth_vertex: usize,
    pub start: f64,
    pub end: f64,
    pub closed: bool,
    pub arcs: Vec<ArcDump>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EssentialDump {
    pub t0: f64,
    pub t1: f64,
    pub vertex: usize,
    pub height: SinusoidJson,
}

/// Inspection dump of a vineyard: critical angles, the essential class and
/// every finite vine with its arcs.
#[derive(Debug, Clone, Serialize)]
pub struct VineyardDump {
    pub critical: Vec<f64>,
    pub essential: Vec<EssentialDump>,
    pub vines: Vec<VineDump>,
}

fn sin_json(c: [f64; 2]) -> SinusoidJson {
    SinusoidJson { a: c[0], b: c[1] }
}

impl VineyardDump {
    pub fn new(v: &PhtVineyard<f64>) -> Self {
        Self {
            critical: v.critical.clone(),
            essential: v
                .essential
                .iter()
                .map(|p| EssentialDump {
                    t0: p.t0,
                    t1: p.t1,
                    vertex: p.vertex,
                    height: sin_json(p.coords),
                })
                .collect(),
            vines: v
                .finite_vines
                .iter()
                .map(|vine| VineDump {
                    birth_vertex: vine.birth_vertex,
                    start: vine.start,
                    end: vine.end,
                    closed: vine.closed,
                    arcs: vine
                        .arcs
                        .iter()
                        .map(|a| ArcDump {
                            t0: a.t0,
                            t1: a.t1,
                            birth_vertex: a.birth_vertex,
                            death_vertex: a.death_vertex,
                            birth: sin_json(a.birth_coords),
                            death: sin_json(a.death_coords),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SegmentJson {
    pub t0: f64,
    pub t1: f64,
    pub root_edge: Option<usize>,
    pub pieces: Vec<PieceJson>,
}

/// Exact piece parameters of a trajectory, one entry per root segment.
pub fn trajectory_json(t: &BottleneckTrajectory<f64>) -> Vec<SegmentJson> {
    t.segments()
        .iter()
        .map(|s| SegmentJson {
            t0: s.t0,
            t1: s.t1,
            root_edge: s.edge,
            pieces: pieces_to_json(&s.pieces),
        })
        .collect()
}

/// Pieces of any piecewise curve in the flight-plan piece format.
pub fn pieces_json(pieces: &[CostPiece<f64>]) -> Vec<PieceJson> {
    pieces_to_json(pieces)
}

/// CSV of a piecewise curve for plotting: `theta,value` at every breakpoint
/// and at `per_piece − 1` evenly spaced points inside each piece.
pub fn write_curve_csv<W: Write>(pieces: &[CostPiece<f64>], per_piece: usize, w: W) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["theta", "value"])?;
    let per_piece = per_piece.max(1);
    for p in pieces {
        for k in 0..per_piece {
            let t = p.t0 + (p.t1 - p.t0) * k as f64 / per_piece as f64;
            out.write_record([t.to_string(), p.eval(t).to_string()])?;
        }
    }
    if let Some(p) = pieces.last() {
        out.write_record([p.t1.to_string(), p.eval(p.t1).to_string()])?;
    }
    out.flush()?;
    Ok(())
}

pub fn parse<D: DeserializeOwned>(text: &str) -> Result<D, IoError> {
    Ok(serde_json::from_str(text)?)
}

pub fn read_json<D: DeserializeOwned>(path: &Path) -> Result<D, IoError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })?;
    parse(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plan_round_trip() {
        let text = r#"{"domain":{"kind":"circle"},"pieces":[
            {"t0":0.0,"t1":1.5707963267948966,"form":{"maxabs":[{"A":1.0,"B":0.0}]}},
            {"t0":1.5707963267948966,"t1":4.71238898038469,"form":"zero"},
            {"t0":4.71238898038469,"t1":6.283185307179586,"form":{"maxabs":[{"A":1.0,"B":0.0}]}}]}"#;
        let pj: PlanJson = parse(text).unwrap();
        let plan = pj.to_plan().unwrap();
        assert!(plan.domain().is_circle());
        assert!((plan.value_at(0.0) - 1.0).abs() < 1e-15);
        let back = PlanJson::from_plan(&plan);
        assert_eq!(back.domain, DomainJson::Circle);
        assert_eq!(back.pieces[1].form, FormJson::Zero);
        let again = back.to_plan().unwrap();
        for t in [0.0, 1.0, 2.5, 4.0] {
            assert!((again.value_at(t) - plan.value_at(t)).abs() < 1e-15);
        }
    }

    #[test]
    fn linear_interval_plan() {
        let text = r#"{"domain":{"kind":"interval","end":4},"pieces":[{"t0":0,"t1":4,"form":{"linear":{"a":2,"b":1}}}]}"#;
        let plan = parse::<PlanJson>(text).unwrap().to_plan().unwrap();
        assert_eq!(plan.value_at(1.0), 3.0);
    }

    #[test]
    fn malformed_input_is_a_json_error() {
        assert!(matches!(parse::<DiagramJson>("{\"points\": [1,"), Err(IoError::Json(_))));
    }

    #[test]
    fn embedded_graph_center_is_optional() {
        let g: EmbeddedGraphJson = parse(r#"{"vertices":[[0,0],[1,0]],"edges":[[0,1]]}"#).unwrap();
        assert_eq!(g.center, None);
        assert_eq!(g.to_graph().unwrap().vertex_count(), 2);
    }
}
