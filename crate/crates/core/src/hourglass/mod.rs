//! The kinetic hourglass: a kinetic max-structure over the edges at or below
//! the bottleneck edge `ê` (all matched edges plus the cheap unmatched ones),
//! stacked on a kinetic min-structure over the edges above it.
//!
//! `ê` is the root of the lower structure. A third certificate, "upper root
//! beats `ê`", joins the two. Events touching `ê` are the only ones that can
//! change the matching:
//!
//! * `L`: an unmatched lower edge rises past `ê` and moves up.
//! * `M1`/`M2`: a matched edge rises past `ê`; an augmenting path that avoids
//!   it either exists (it moves up) or not (it becomes the new `ê`).
//! * `U1`/`U2`: an upper edge falls below `ê`; an augmenting path through it
//!   that avoids `ê` either exists (they trade places) or not (it moves down).
//!
//! Everything else is an internal swap inside one of the two structures.

mod trajectory;

use std::cmp::Ordering;
use std::io::Write;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::curves::{cmp_after, next_sign_change, Domain, FlightPlan};
use crate::kinetic_pq::{Flavor, KineticPq, Order, PqError, PqEvent};
use crate::matching::{
    augment, bottleneck_by_rank, find_augmenting_path, BipartiteGraph, EdgeId, Matching,
    MatchingError,
};
use crate::scalar::Scalar;

pub use trajectory::{BottleneckTrajectory, TrajectorySegment};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HourglassError {
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error(transparent)]
    Pq(#[from] PqError),
    #[error("edge plans do not share one domain")]
    MixedDomains,
    #[error("start time {0} lies outside the plan domain")]
    StartOutOfDomain(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Label {
    /// Unmatched, at or below `ê`.
    L,
    /// Matched (includes `ê`).
    M,
    /// Above `ê`.
    U,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum EventKind {
    #[serde(rename = "internal")]
    Internal,
    L,
    M1,
    M2,
    U1,
    U2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EventRecord<T> {
    pub time: T,
    pub kind: EventKind,
    /// The edge whose certificate failed (the child, or the upper root).
    pub edge: EdgeId,
    pub root_after: Option<EdgeId>,
    pub bottleneck_after: T,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct EventCounters {
    pub internal: usize,
    pub l: usize,
    pub m1: usize,
    pub m2: usize,
    pub u1: usize,
    pub u2: usize,
    pub augmenting_searches: usize,
    /// Full rebuilds after an inconsistency; stays 0 in a healthy run.
    pub resyncs: usize,
}

impl EventCounters {
    pub fn total(&self) -> usize {
        self.internal + self.l + self.m1 + self.m2 + self.u1 + self.u2
    }

    /// Events that can change the matching or `ê`, i.e. those needing a search.
    pub fn m_and_u(&self) -> usize {
        self.m1 + self.m2 + self.u1 + self.u2
    }
}

#[derive(Debug, Clone, Copy)]
enum Source {
    Lower,
    Upper,
    Cross,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct CrossCert<T> {
    upper_root: EdgeId,
    root: EdgeId,
    failure: Option<T>,
}

/// Kinetic bottleneck matching over a graph whose edge weights follow flight plans.
#[derive(Debug, Clone)]
pub struct Hourglass<T: Scalar> {
    graph: BipartiteGraph<FlightPlan<T>>,
    plans: Vec<Arc<FlightPlan<T>>>,
    flavor: Flavor,
    lower: KineticPq<T>,
    upper: KineticPq<T>,
    root: Option<EdgeId>,
    matching: Matching,
    labels: Vec<Label>,
    cross: Option<CrossCert<T>>,
    now: T,
    seg_start: T,
    trajectory: BottleneckTrajectory<T>,
    events: Vec<EventRecord<T>>,
    counters: EventCounters,
}

impl<T: Scalar> Hourglass<T> {
    /// Solves the static problem just after `t0` and builds both structures.
    pub fn new(
        graph: BipartiteGraph<FlightPlan<T>>,
        t0: T,
        flavor: Flavor,
    ) -> Result<Self, HourglassError> {
        graph.require_square()?;
        let domain = graph.edges().first().map(|e| e.weight.domain());
        if let Some(d) = domain {
            if graph.edges().iter().any(|e| e.weight.domain() != d) {
                return Err(HourglassError::MixedDomains);
            }
            if let Domain::Interval { end } = d {
                if !(t0 >= T::zero() && t0 <= end) {
                    return Err(HourglassError::StartOutOfDomain(t0.to_f64().unwrap_or(f64::NAN)));
                }
            }
        }
        let plans: Vec<Arc<FlightPlan<T>>> =
            graph.edges().iter().map(|e| Arc::new(e.weight.clone())).collect();
        let m = graph.edge_count();
        let mut hg = Self {
            plans,
            flavor,
            lower: KineticPq::new(Order::Max, flavor, t0),
            upper: KineticPq::new(Order::Min, flavor, t0),
            root: None,
            matching: Matching::empty(&graph),
            labels: vec![Label::U; m],
            cross: None,
            now: t0,
            seg_start: t0,
            trajectory: BottleneckTrajectory::default(),
            events: Vec::new(),
            counters: EventCounters::default(),
            graph,
        };
        hg.rebuild()?;
        Ok(hg)
    }

    /// Static solve at `now⁺` and fresh structures.
    fn rebuild(&mut self) -> Result<(), HourglassError> {
        let t = self.now;
        let mut ranking: Vec<EdgeId> = (0..self.graph.edge_count()).collect();
        ranking.sort_by(|&a, &b| cmp_after(&self.plans[a], &self.plans[b], t).then(a.cmp(&b)));
        let (matching, root) = bottleneck_by_rank(&self.graph, &ranking)?;
        let cut = root.map_or(0, |r| ranking.iter().position(|&e| e == r).expect("ranked") + 1);
        let mut lower_elems = Vec::new();
        let mut upper_elems = Vec::new();
        for (i, &e) in ranking.iter().enumerate() {
            if i < cut {
                self.labels[e] = if matching.contains(e) { Label::M } else { Label::L };
                lower_elems.push((e, self.plans[e].clone()));
            } else {
                self.labels[e] = Label::U;
                upper_elems.push((e, self.plans[e].clone()));
            }
        }
        let (lower_flavor, upper_flavor) = match self.flavor {
            Flavor::Heap => (Flavor::Heap, Flavor::Heap),
            Flavor::Hanger { seed } => (
                Flavor::Hanger { seed },
                Flavor::Hanger {
                    seed: seed.wrapping_add(1),
                },
            ),
        };
        self.lower = KineticPq::build(lower_elems, t, Order::Max, lower_flavor)?;
        self.upper = KineticPq::build(upper_elems, t, Order::Min, upper_flavor)?;
        self.matching = matching;
        self.root = root;
        self.cross = None;
        debug_assert_eq!(self.lower.root(), self.root);
        Ok(())
    }

    pub fn graph(&self) -> &BipartiteGraph<FlightPlan<T>> {
        &self.graph
    }

    pub fn now(&self) -> T {
        self.now
    }

    pub fn matching(&self) -> &Matching {
        &self.matching
    }

    pub fn bottleneck_edge(&self) -> Option<EdgeId> {
        self.root
    }

    /// Current bottleneck cost (0 on the empty graph).
    pub fn bottleneck_value(&self) -> T {
        self.root.map_or(T::zero(), |e| self.plans[e].value_at(self.now))
    }

    pub fn label(&self, e: EdgeId) -> Label {
        self.labels[e]
    }

    pub fn lower(&self) -> &KineticPq<T> {
        &self.lower
    }

    pub fn upper(&self) -> &KineticPq<T> {
        &self.upper
    }

    pub fn events(&self) -> &[EventRecord<T>] {
        &self.events
    }

    pub fn counters(&self) -> EventCounters {
        self.counters
    }

    /// Closed part of the trajectory (everything before the last `ê` change,
    /// or the whole run once [`run`](Self::run) has returned).
    pub fn trajectory(&self) -> &BottleneckTrajectory<T> {
        &self.trajectory
    }

    fn cross_failure(&mut self) -> Option<T> {
        let (Some(u), Some(r)) = (self.upper.root(), self.root) else {
            self.cross = None;
            return None;
        };
        if let Some(c) = self.cross {
            if c.upper_root == u && c.root == r {
                return c.failure;
            }
        }
        let (pu, pr) = (&self.plans[u], &self.plans[r]);
        let valid = cmp_after(pu, pr, self.now).then(u.cmp(&r)) == Ordering::Greater;
        let failure = if valid {
            next_sign_change(pu, pr, self.now, Some(u.cmp(&r)))
        } else {
            Some(self.now)
        };
        self.cross = Some(CrossCert {
            upper_root: u,
            root: r,
            failure,
        });
        failure
    }

    /// Time of the next certificate failure, if any.
    pub fn next_event_time(&mut self) -> Option<T> {
        self.peek_next().map(|(t, _, _)| t)
    }

    fn peek_next(&mut self) -> Option<(T, EdgeId, Source)> {
        let mut best: Option<(T, EdgeId, Source)> = None;
        let mut consider = |cand: Option<(T, EdgeId, Source)>| {
            if let Some(c) = cand {
                let better = best.is_none_or(|b| {
                    c.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal).then(c.1.cmp(&b.1))
                        == Ordering::Less
                });
                if better {
                    best = Some(c);
                }
            }
        };
        consider(self.lower.next_event().map(|e| (e.time, e.child, Source::Lower)));
        consider(self.upper.next_event().map(|e| (e.time, e.child, Source::Upper)));
        let cross = self.cross_failure();
        consider(cross.zip(self.upper.root()).map(|(t, u)| (t, u, Source::Cross)));
        best
    }

    /// Processes the next event if it happens strictly before `until`.
    pub fn step(&mut self, until: T) -> Option<EventRecord<T>> {
        let (time, _, source) = self.peek_next()?;
        if !(time < until) {
            return None;
        }
        let t = time.max(self.now);
        self.now = t;
        let (kind, edge) = match source {
            Source::Lower => {
                let ev = self.lower.pop_event().expect("peeked event");
                self.on_lower(ev, t)
            }
            Source::Upper => {
                let ev = self.upper.pop_event().expect("peeked event");
                self.upper.handle_swap(&ev);
                (EventKind::Internal, ev.child)
            }
            Source::Cross => {
                let e = self.upper.root().expect("upper root");
                self.cross = None;
                (self.on_cross(e, t), e)
            }
        };
        let rec = self.record(kind, edge, t);
        self.settle_root(t);
        Some(rec)
    }

    fn record(&mut self, kind: EventKind, edge: EdgeId, t: T) -> EventRecord<T> {
        match kind {
            EventKind::Internal => self.counters.internal += 1,
            EventKind::L => self.counters.l += 1,
            EventKind::M1 => self.counters.m1 += 1,
            EventKind::M2 => self.counters.m2 += 1,
            EventKind::U1 => self.counters.u1 += 1,
            EventKind::U2 => self.counters.u2 += 1,
        }
        let rec = EventRecord {
            time: t,
            kind,
            edge,
            root_after: self.root,
            bottleneck_after: self.bottleneck_value(),
        };
        log::trace!("{:?} at {} on edge {}", kind, t, edge);
        self.events.push(rec.clone());
        rec
    }

    /// A deletion or insertion in the lower structure can lift another edge
    /// over `ê` when several weights meet at `t`; each such lift is an
    /// overtake of `ê` in its own right.
    fn settle_root(&mut self, t: T) {
        while let Some(c) = self.lower.root().filter(|&c| Some(c) != self.root) {
            if self.root.is_none() {
                self.set_root(c, t);
                break;
            }
            let kind = self.overtake(c, t, None);
            self.record(kind, c, t);
        }
    }

    /// Processes every event before `until` and closes the trajectory there.
    pub fn run(&mut self, until: T) -> &BottleneckTrajectory<T> {
        while self.step(until).is_some() {}
        if until > self.now {
            self.now = until;
            self.lower.advance_clock(until);
            self.upper.advance_clock(until);
        }
        self.close_segment(until);
        &self.trajectory
    }

    fn close_segment(&mut self, t: T) {
        let pieces = self
            .root
            .map_or_else(Vec::new, |e| self.plans[e].pieces_in(self.seg_start, t));
        self.trajectory.push(self.seg_start, t, self.root, pieces);
        if t > self.seg_start {
            self.seg_start = t;
        }
    }

    fn set_root(&mut self, e: EdgeId, t: T) {
        if self.root != Some(e) {
            self.close_segment(t);
            self.root = Some(e);
        }
    }

    fn relabel_after_augment(&mut self, path_edges: &[EdgeId]) {
        for &e in path_edges {
            self.labels[e] = if self.matching.contains(e) { Label::M } else { Label::L };
        }
    }

    fn on_lower(&mut self, ev: PqEvent<T>, t: T) -> (EventKind, EdgeId) {
        let c = ev.child;
        if Some(ev.parent) != self.root {
            self.lower.handle_swap(&ev);
            return (EventKind::Internal, c);
        }
        (self.overtake(c, t, Some(&ev)), c)
    }

    /// `c` overtakes `ê` from below. With `ev` the swap is still pending;
    /// without it `c` already sits at the lower root.
    fn overtake(&mut self, c: EdgeId, t: T, ev: Option<&PqEvent<T>>) -> EventKind {
        match self.labels[c] {
            Label::L => {
                self.move_up(c, t);
                EventKind::L
            }
            Label::M => {
                self.counters.augmenting_searches += 1;
                let mut rest = self.matching.clone();
                rest.remove(&self.graph, c);
                let (u, v) = (self.graph.edge(c).left, self.graph.edge(c).right);
                let lower = &self.lower;
                let path = find_augmenting_path(&self.graph, &rest, u, Some(v), |e| {
                    e != c && lower.contains(e)
                });
                match path.map(|p| augment(&self.graph, &rest, &p).map(|m| (m, p))) {
                    Some(Ok((m, p))) => {
                        self.matching = m;
                        self.relabel_after_augment(&p.edges);
                        self.move_up(c, t);
                        EventKind::M1
                    }
                    None => {
                        if let Some(ev) = ev {
                            self.lower.handle_swap(ev);
                        }
                        self.set_root(c, t);
                        EventKind::M2
                    }
                    Some(Err(_)) => {
                        self.resync(t);
                        EventKind::M1
                    }
                }
            }
            Label::U => {
                self.resync(t);
                EventKind::Internal
            }
        }
    }

    fn move_up(&mut self, c: EdgeId, t: T) {
        let plan = self.lower.delete(c, t).expect("edge in lower");
        self.upper.insert(c, plan, t).expect("edge not in upper");
        self.labels[c] = Label::U;
    }

    fn on_cross(&mut self, e: EdgeId, t: T) -> EventKind {
        let r = self.root.expect("cross certificate needs a root");
        self.counters.augmenting_searches += 1;
        let mut rest = self.matching.clone();
        rest.remove(&self.graph, r);
        let (u, v) = (self.graph.edge(r).left, self.graph.edge(r).right);
        let lower = &self.lower;
        let path = find_augmenting_path(&self.graph, &rest, u, Some(v), |x| {
            x == e || (x != r && lower.contains(x))
        });
        match path.map(|p| augment(&self.graph, &rest, &p).map(|m| (m, p))) {
            Some(Ok((m, p))) if m.contains(e) => {
                self.matching = m;
                self.relabel_after_augment(&p.edges);
                let plan_e = self.upper.delete(e, t).expect("edge in upper");
                let (old, plan_r) = self.lower.replace_root(e, plan_e, t).expect("root swap");
                debug_assert_eq!(old, r);
                self.upper.insert(r, plan_r, t).expect("old root not in upper");
                self.labels[r] = Label::U;
                self.set_root(e, t);
                EventKind::U1
            }
            None => {
                let plan = self.upper.delete(e, t).expect("edge in upper");
                self.lower.insert(e, plan, t).expect("edge not in lower");
                self.labels[e] = Label::L;
                EventKind::U2
            }
            Some(_) => {
                self.resync(t);
                EventKind::U1
            }
        }
    }

    fn resync(&mut self, t: T) {
        log::warn!("hourglass inconsistency at {}; rebuilding", t);
        self.counters.resyncs += 1;
        let before = self.root;
        self.now = t;
        self.rebuild().expect("perfect matching persists");
        if self.root != before {
            let new = self.root;
            self.root = before;
            self.close_segment(t);
            self.root = new;
        }
    }

    /// Checks the structural invariants; returns a description of the first
    /// violation found.
    pub fn check_invariants(&self) -> Result<(), String> {
        if self.lower.root() != self.root {
            return Err(format!("lower root {:?} is not ê {:?}", self.lower.root(), self.root));
        }
        if !self.matching.is_perfect() {
            return Err("matching is not perfect".into());
        }
        for (e, &label) in self.labels.iter().enumerate() {
            let ok = match label {
                Label::L => self.lower.contains(e) && !self.matching.contains(e),
                Label::M => self.lower.contains(e) && self.matching.contains(e),
                Label::U => self.upper.contains(e) && !self.matching.contains(e),
            };
            if !ok {
                return Err(format!("edge {e} mislabelled as {label:?}"));
            }
        }
        Ok(())
    }

    /// Event log as CSV `time,kind,edge,root_after,bottleneck_after`.
    pub fn write_trace_csv<W: Write>(&self, w: W) -> csv::Result<()> {
        #[derive(Serialize)]
        struct Row {
            time: f64,
            kind: EventKind,
            edge: EdgeId,
            root_after: String,
            bottleneck_after: f64,
        }
        let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
        out.write_record(["time", "kind", "edge", "root_after", "bottleneck_after"])?;
        for r in &self.events {
            out.serialize(Row {
                time: r.time.to_f64().unwrap_or(f64::NAN),
                kind: r.kind,
                edge: r.edge,
                root_after: r.root_after.map_or_else(String::new, |e| e.to_string()),
                bottleneck_after: r.bottleneck_after.to_f64().unwrap_or(f64::NAN),
            })?;
        }
        out.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::FlightPlan;

    /// K₂,₂ with x1y1 = 1, x1y2 = 5, x2y1 = 4, x2y2 = 2 + t on [0, 4].
    fn k22() -> BipartiteGraph<FlightPlan<f64>> {
        let c = |v: f64| FlightPlan::constant(Domain::Interval { end: 4.0 }, v).unwrap();
        BipartiteGraph::from_edges(
            2,
            2,
            [
                (0, 0, c(1.0)),
                (0, 1, c(5.0)),
                (1, 0, c(4.0)),
                (1, 1, FlightPlan::linear(4.0, 2.0, 1.0).unwrap()),
            ],
        )
        .unwrap()
    }

    #[test]
    fn k22_scripted_events() {
        for flavor in [Flavor::Heap, Flavor::Hanger { seed: 3 }] {
            let mut hg = Hourglass::new(k22(), 0.0, flavor).unwrap();
            assert_eq!(hg.bottleneck_edge(), Some(3));
            hg.check_invariants().unwrap();
            let traj = hg.run(4.0).clone();
            let kinds: Vec<(EventKind, f64)> = hg
                .events()
                .iter()
                .filter(|e| e.kind != EventKind::Internal)
                .map(|e| (e.kind, e.time))
                .collect();
            assert_eq!(kinds.len(), 2);
            assert_eq!(kinds[0].0, EventKind::U2);
            assert!((kinds[0].1 - 2.0).abs() < 1e-12);
            assert_eq!(kinds[1].0, EventKind::U1);
            assert!((kinds[1].1 - 3.0).abs() < 1e-12);
            assert_eq!(hg.matching().edges(), vec![1, 2]);
            hg.check_invariants().unwrap();
            assert_eq!(traj.segments().len(), 2);
            assert!((traj.value_at(1.5).unwrap() - 3.5).abs() < 1e-12);
            assert!((traj.value_at(3.5).unwrap() - 5.0).abs() < 1e-12);
            let c = hg.counters();
            assert_eq!(c.augmenting_searches, c.m_and_u());
            assert_eq!(c.resyncs, 0);
        }
    }

    #[test]
    fn empty_graph_runs() {
        let g = BipartiteGraph::<FlightPlan<f64>>::new(0, 0);
        let mut hg = Hourglass::new(g, 0.0, Flavor::Heap).unwrap();
        let traj = hg.run(1.0);
        assert_eq!(traj.value_at(0.5), Some(0.0));
    }

    #[test]
    fn infeasible_graph_rejected() {
        let c = FlightPlan::constant(Domain::Interval { end: 1.0 }, 1.0).unwrap();
        let g = BipartiteGraph::from_edges(2, 2, [(0, 0, c.clone()), (1, 0, c)]).unwrap();
        assert!(matches!(
            Hourglass::new(g, 0.0, Flavor::Heap),
            Err(HourglassError::Matching(MatchingError::NoPerfectMatching { .. }))
        ));
    }

    #[test]
    fn trace_csv_lists_events() {
        let mut hg = Hourglass::new(k22(), 0.0, Flavor::Heap).unwrap();
        hg.run(4.0);
        let mut buf = Vec::new();
        hg.write_trace_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("time,kind,edge,root_after,bottleneck_after\n"));
        assert!(text.contains("2.0,U2,2,3,4.0"));
        assert!(text.contains("3.0,U1,1,1,5.0"));
    }
}
