//! Kinetic priority structures: the deterministic kinetic heap and the
//! randomized kinetic hanger.
//!
//! Every parent/child pair of the tree carries a certificate "parent beats
//! child". A certificate's failure time is the next sign change of the two
//! flight plans; failures sit in an event queue ordered by
//! `(time, child id, parent id)`. Rescheduling bumps a generation counter and the
//! queue drops outdated entries lazily when they surface.
//!
//! Ordering is always decided "just after" the current time (see
//! [`cmp_after`](crate::curves::cmp_after)) with element ids as the final
//! tiebreak, so simultaneous crossings resolve deterministically.

mod tree;

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap};
use std::io::Write;
use std::sync::Arc;

use ordered_float::OrderedFloat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::curves::{cmp_after, next_sign_change, Domain, FlightPlan};
use crate::scalar::Scalar;
use tree::Tree;

pub type ElemId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Order {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    Heap,
    Hanger { seed: u64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PqError {
    #[error("element {0} is already stored")]
    DuplicateId(ElemId),
    #[error("element {0} is not stored")]
    UnknownId(ElemId),
    #[error("time {t} outside the plan domain of element {id}")]
    OutOfDomain { id: ElemId, t: f64 },
}

/// Certificate "parent beats child" on one tree edge.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate<T> {
    pub parent: ElemId,
    pub child: ElemId,
    pub failure_time: Option<T>,
}

/// A queued certificate failure.
#[derive(Debug, Clone, PartialEq)]
pub struct PqEvent<T> {
    pub time: T,
    pub parent: ElemId,
    pub child: ElemId,
    node: usize,
    generation: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PqEventKind {
    Swap,
    Insert,
    Delete,
}

/// One line of the event trace.
#[derive(Debug, Clone, PartialEq)]
pub struct PqTraceRecord<T> {
    pub time: T,
    pub kind: PqEventKind,
    pub ids: Vec<ElemId>,
    pub root_after: Option<ElemId>,
}

#[derive(Debug, Clone, Copy)]
struct CertSlot<T> {
    generation: u64,
    failure: Option<T>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct QueueKey {
    // f32 -> f64 is exact, so the order is that of `T`
    time: OrderedFloat<f64>,
    child: ElemId,
    parent: ElemId,
    generation: u64,
    node: usize,
}

/// Kinetic max- or min-structure over elements with flight-plan priorities.
#[derive(Debug, Clone)]
pub struct KineticPq<T: Scalar> {
    order: Order,
    flavor: Flavor,
    rng: Option<ChaCha8Rng>,
    tree: Tree,
    plans: HashMap<ElemId, Arc<FlightPlan<T>>>,
    node_of: HashMap<ElemId, usize>,
    certs: Vec<Option<CertSlot<T>>>,
    queue: BinaryHeap<Reverse<QueueKey>>,
    next_generation: u64,
    now: T,
    trace: Vec<PqTraceRecord<T>>,
}

impl<T: Scalar> KineticPq<T> {
    pub fn new(order: Order, flavor: Flavor, t0: T) -> Self {
        let (tree, rng) = match flavor {
            Flavor::Heap => (Tree::Complete(Vec::new()), None),
            Flavor::Hanger { seed } => (
                Tree::Linked {
                    nodes: Vec::new(),
                    free: Vec::new(),
                    root: None,
                },
                Some(ChaCha8Rng::seed_from_u64(seed)),
            ),
        };
        Self {
            order,
            flavor,
            rng,
            tree,
            plans: HashMap::new(),
            node_of: HashMap::new(),
            certs: Vec::new(),
            queue: BinaryHeap::new(),
            next_generation: 0,
            now: t0,
            trace: Vec::new(),
        }
    }

    /// Builds a valid structure at `t0`. Hanger elements are hung in priority order.
    pub fn build(
        elements: Vec<(ElemId, Arc<FlightPlan<T>>)>,
        t0: T,
        order: Order,
        flavor: Flavor,
    ) -> Result<Self, PqError> {
        let mut pq = Self::new(order, flavor, t0);
        for (id, plan) in elements {
            check_domain(id, &plan, t0)?;
            if pq.plans.insert(id, plan).is_some() {
                return Err(PqError::DuplicateId(id));
            }
        }
        let mut ids: Vec<ElemId> = pq.plans.keys().copied().collect();
        ids.sort_unstable();
        ids.sort_by(|&a, &b| pq.priority_cmp(a, b).reverse());
        match &mut pq.tree {
            Tree::Complete(v) => *v = ids,
            Tree::Linked { .. } => {
                for id in ids {
                    pq.hang_sorted(id);
                }
            }
        }
        pq.node_of = (0..pq.tree.capacity())
            .filter(|&p| pq.tree.is_live(p))
            .map(|p| (pq.tree.elem(p), p))
            .collect();
        let all: Vec<usize> = pq.node_of.values().copied().collect();
        pq.refresh(&all);
        Ok(pq)
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn now(&self) -> T {
        self.now
    }

    pub fn len(&self) -> usize {
        self.tree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, id: ElemId) -> bool {
        self.node_of.contains_key(&id)
    }

    pub fn root(&self) -> Option<ElemId> {
        self.tree.root().map(|p| self.tree.elem(p))
    }

    pub fn plan(&self, id: ElemId) -> Option<&Arc<FlightPlan<T>>> {
        self.plans.get(&id)
    }

    pub fn ids(&self) -> impl Iterator<Item = ElemId> + '_ {
        self.node_of.keys().copied()
    }

    pub fn trace(&self) -> &[PqTraceRecord<T>] {
        &self.trace
    }

    /// Parent element of `id`, `None` for the root.
    pub fn parent_of(&self, id: ElemId) -> Option<ElemId> {
        let p = *self.node_of.get(&id)?;
        self.tree.parent(p).map(|q| self.tree.elem(q))
    }

    pub fn children_of(&self, id: ElemId) -> Vec<ElemId> {
        self.node_of.get(&id).map_or_else(Vec::new, |&p| {
            self.tree.kids(p).iter().flatten().map(|&k| self.tree.elem(k)).collect()
        })
    }

    pub fn depth_of(&self, id: ElemId) -> Option<usize> {
        self.node_of.get(&id).map(|&p| self.tree.depth(p))
    }

    pub fn mean_depth(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        let total: usize = self.node_of.values().map(|&p| self.tree.depth(p)).sum();
        total as f64 / self.len() as f64
    }

    /// Number of certificates an element takes part in (one with its parent, one per child).
    pub fn certificates_of(&self, id: ElemId) -> usize {
        self.node_of.get(&id).map_or(0, |&p| {
            usize::from(self.tree.parent(p).is_some())
                + self.tree.kids(p).iter().flatten().count()
        })
    }

    pub fn certificates(&self) -> Vec<Certificate<T>> {
        let mut out: Vec<Certificate<T>> = self
            .node_of
            .values()
            .filter_map(|&p| {
                let q = self.tree.parent(p)?;
                let slot = self.certs.get(p).copied().flatten()?;
                Some(Certificate {
                    parent: self.tree.elem(q),
                    child: self.tree.elem(p),
                    failure_time: slot.failure,
                })
            })
            .collect();
        out.sort_by_key(|c| (c.parent, c.child));
        out
    }

    /// `Ordering::Greater` when `a` has the higher priority just after `now`.
    pub fn priority_cmp(&self, a: ElemId, b: ElemId) -> Ordering {
        let by_key = cmp_after(&self.plans[&a], &self.plans[&b], self.now).then(a.cmp(&b));
        match self.order {
            Order::Max => by_key,
            Order::Min => by_key.reverse(),
        }
    }

    fn beats(&self, a: ElemId, b: ElemId) -> bool {
        self.priority_cmp(a, b) == Ordering::Greater
    }

    /// Moves the clock forward without processing anything.
    pub fn advance_clock(&mut self, t: T) {
        if t > self.now {
            self.now = t;
        }
    }

    /// Earliest live certificate failure.
    pub fn next_event(&mut self) -> Option<PqEvent<T>> {
        self.discard_stale();
        self.queue.peek().map(|Reverse(k)| self.event_of(k))
    }

    /// Removes and returns the earliest live certificate failure.
    pub fn pop_event(&mut self) -> Option<PqEvent<T>> {
        self.discard_stale();
        self.queue.pop().map(|Reverse(k)| self.event_of(&k))
    }

    fn event_of(&self, k: &QueueKey) -> PqEvent<T> {
        let slot = self.certs[k.node].expect("live certificate");
        PqEvent {
            time: slot.failure.expect("scheduled certificate"),
            parent: k.parent,
            child: k.child,
            node: k.node,
            generation: k.generation,
        }
    }

    fn discard_stale(&mut self) {
        while let Some(Reverse(k)) = self.queue.peek() {
            if self.is_current(k.node, k.generation) {
                break;
            }
            self.queue.pop();
        }
    }

    fn is_current(&self, node: usize, generation: u64) -> bool {
        self.tree.is_live(node)
            && self
                .certs
                .get(node)
                .copied()
                .flatten()
                .is_some_and(|s| s.generation == generation)
    }

    /// Swaps the failed pair and reschedules the affected certificates.
    /// Returns the (parent, child) pairs whose relation changed; empty for a
    /// stale event.
    pub fn handle_swap(&mut self, ev: &PqEvent<T>) -> Vec<(ElemId, ElemId)> {
        if !self.is_current(ev.node, ev.generation) {
            return Vec::new();
        }
        let c = ev.node;
        let Some(p) = self.tree.parent(c) else {
            return Vec::new();
        };
        if self.tree.elem(c) != ev.child || self.tree.elem(p) != ev.parent {
            return Vec::new();
        }
        self.advance_clock(ev.time);
        self.swap_nodes(p, c);
        let mut touched = vec![p, c];
        touched.extend(self.tree.kids(p).iter().flatten());
        touched.extend(self.tree.kids(c).iter().flatten());
        touched.sort_unstable();
        touched.dedup();
        self.refresh(&touched);
        let mut changed = Vec::new();
        for &n in &touched {
            if let Some(q) = self.tree.parent(n) {
                changed.push((self.tree.elem(q), self.tree.elem(n)));
            }
        }
        self.log(PqEventKind::Swap, vec![ev.parent, ev.child]);
        changed
    }

    /// Inserts a new element at time `t`.
    pub fn insert(&mut self, id: ElemId, plan: Arc<FlightPlan<T>>, t: T) -> Result<(), PqError> {
        if self.plans.contains_key(&id) {
            return Err(PqError::DuplicateId(id));
        }
        check_domain(id, &plan, t)?;
        self.advance_clock(t);
        self.plans.insert(id, plan);
        let touched = match self.tree {
            Tree::Complete(_) => self.heap_insert(id),
            Tree::Linked { .. } => self.hanger_insert(id),
        };
        self.refresh(&touched);
        self.log(PqEventKind::Insert, vec![id]);
        Ok(())
    }

    /// Removes an element at time `t`, returning its plan.
    pub fn delete(&mut self, id: ElemId, t: T) -> Result<Arc<FlightPlan<T>>, PqError> {
        let Some(&p) = self.node_of.get(&id) else {
            return Err(PqError::UnknownId(id));
        };
        self.advance_clock(t);
        let touched = match self.tree {
            Tree::Complete(_) => self.heap_delete(p),
            Tree::Linked { .. } => self.hanger_delete(p),
        };
        self.node_of.remove(&id);
        let plan = self.plans.remove(&id).expect("plan of stored element");
        self.refresh(&touched);
        self.log(PqEventKind::Delete, vec![id]);
        Ok(plan)
    }

    /// Replaces the root element in place without restoring order, at time `t`.
    /// Only the root's child certificates are recomputed; any inversion shows
    /// up as an immediate event. Returns the previous root and its plan.
    pub fn replace_root(
        &mut self,
        id: ElemId,
        plan: Arc<FlightPlan<T>>,
        t: T,
    ) -> Result<(ElemId, Arc<FlightPlan<T>>), PqError> {
        if self.plans.contains_key(&id) {
            return Err(PqError::DuplicateId(id));
        }
        let r = self.tree.root().ok_or(PqError::UnknownId(id))?;
        check_domain(id, &plan, t)?;
        self.advance_clock(t);
        let old = self.tree.elem(r);
        self.tree.set_elem(r, id);
        self.node_of.remove(&old);
        self.node_of.insert(id, r);
        let old_plan = self.plans.remove(&old).expect("plan of root");
        self.plans.insert(id, plan);
        let kids: Vec<usize> = self.tree.kids(r).iter().flatten().copied().collect();
        self.refresh(&kids);
        self.log(PqEventKind::Delete, vec![old]);
        self.log(PqEventKind::Insert, vec![id]);
        Ok((old, old_plan))
    }

    fn log(&mut self, kind: PqEventKind, ids: Vec<ElemId>) {
        let root_after = self.root();
        self.trace.push(PqTraceRecord {
            time: self.now,
            kind,
            ids,
            root_after,
        });
    }

    fn swap_nodes(&mut self, p: usize, c: usize) {
        let (ep, ec) = (self.tree.elem(p), self.tree.elem(c));
        self.tree.set_elem(p, ec);
        self.tree.set_elem(c, ep);
        self.node_of.insert(ec, p);
        self.node_of.insert(ep, c);
    }

    fn heap_insert(&mut self, id: ElemId) -> Vec<usize> {
        let Tree::Complete(v) = &mut self.tree else { unreachable!() };
        v.push(id);
        let mut p = v.len() - 1;
        self.node_of.insert(id, p);
        let mut touched = vec![p];
        while let Some(q) = self.tree.parent(p) {
            if !self.beats(self.tree.elem(p), self.tree.elem(q)) {
                break;
            }
            self.swap_nodes(q, p);
            p = q;
            touched.push(p);
        }
        self.with_kids(touched)
    }

    fn heap_delete(&mut self, p: usize) -> Vec<usize> {
        let Tree::Complete(v) = &mut self.tree else { unreachable!() };
        let last = v.len() - 1;
        let moved = v[last];
        v[p] = moved;
        v.pop();
        if p == last {
            let touched = self.tree.parent(p).map_or_else(Vec::new, |q| vec![q]);
            return self.with_kids(touched);
        }
        self.node_of.insert(moved, p);
        let mut touched = vec![p];
        let mut cur = p;
        while let Some(q) = self.tree.parent(cur) {
            if !self.beats(self.tree.elem(cur), self.tree.elem(q)) {
                break;
            }
            self.swap_nodes(q, cur);
            cur = q;
            touched.push(cur);
        }
        if cur == p {
            touched.extend(self.sift_down(p));
        }
        self.with_kids(touched)
    }

    fn sift_down(&mut self, mut p: usize) -> Vec<usize> {
        let mut touched = Vec::new();
        loop {
            let best = self
                .tree
                .kids(p)
                .into_iter()
                .flatten()
                .max_by(|&a, &b| self.priority_cmp(self.tree.elem(a), self.tree.elem(b)));
            match best {
                Some(k) if self.beats(self.tree.elem(k), self.tree.elem(p)) => {
                    self.swap_nodes(p, k);
                    p = k;
                    touched.push(p);
                }
                _ => return touched,
            }
        }
    }

    fn coin(&mut self) -> usize {
        usize::from(self.rng.as_mut().expect("hanger rng").gen::<bool>())
    }

    /// Hangs `id` below every stored element (input arrives in priority order).
    fn hang_sorted(&mut self, id: ElemId) {
        let Some(mut v) = self.tree.root() else {
            self.tree.alloc_linked(id, None);
            return;
        };
        loop {
            let slot = self.coin();
            match self.tree.kids(v)[slot] {
                Some(k) => v = k,
                None => {
                    self.tree.alloc_linked(id, Some((v, slot)));
                    return;
                }
            }
        }
    }

    fn hanger_insert(&mut self, id: ElemId) -> Vec<usize> {
        let mut carry = id;
        let mut touched = Vec::new();
        let Some(mut v) = self.tree.root() else {
            let n = self.tree.alloc_linked(id, None);
            self.node_of.insert(id, n);
            return vec![n];
        };
        loop {
            let here = self.tree.elem(v);
            if self.beats(carry, here) {
                self.tree.set_elem(v, carry);
                self.node_of.insert(carry, v);
                touched.push(v);
                carry = here;
            }
            let slot = self.coin();
            match self.tree.kids(v)[slot] {
                Some(k) => v = k,
                None => {
                    let n = self.tree.alloc_linked(carry, Some((v, slot)));
                    self.node_of.insert(carry, n);
                    touched.push(n);
                    return self.with_kids(touched);
                }
            }
        }
    }

    fn hanger_delete(&mut self, mut p: usize) -> Vec<usize> {
        let mut touched = Vec::new();
        loop {
            let best = self
                .tree
                .kids(p)
                .into_iter()
                .flatten()
                .max_by(|&a, &b| self.priority_cmp(self.tree.elem(a), self.tree.elem(b)));
            match best {
                Some(k) => {
                    let e = self.tree.elem(k);
                    self.tree.set_elem(p, e);
                    self.node_of.insert(e, p);
                    touched.push(p);
                    p = k;
                }
                None => {
                    let parent = self.tree.parent(p);
                    self.tree.free_linked_leaf(p);
                    if let Some(slot) = self.certs.get_mut(p) {
                        *slot = None;
                    }
                    touched.extend(parent);
                    touched.retain(|&n| n != p);
                    return self.with_kids(touched);
                }
            }
        }
    }

    fn with_kids(&self, mut nodes: Vec<usize>) -> Vec<usize> {
        let extra: Vec<usize> = nodes
            .iter()
            .filter(|&&n| self.tree.is_live(n))
            .flat_map(|&n| self.tree.kids(n).into_iter().flatten())
            .collect();
        nodes.extend(extra);
        nodes.retain(|&n| self.tree.is_live(n));
        nodes.sort_unstable();
        nodes.dedup();
        nodes
    }

    /// Recomputes and reschedules the parent certificate of every listed node.
    fn refresh(&mut self, nodes: &[usize]) {
        if self.certs.len() < self.tree.capacity() {
            self.certs.resize(self.tree.capacity(), None);
        }
        if let Tree::Complete(v) = &self.tree {
            // nodes past the end after a heap delete
            let len = v.len();
            for slot in self.certs.iter_mut().skip(len) {
                *slot = None;
            }
        }
        for &c in nodes {
            if !self.tree.is_live(c) {
                continue;
            }
            let Some(p) = self.tree.parent(c) else {
                self.certs[c] = None;
                continue;
            };
            let (ep, ec) = (self.tree.elem(p), self.tree.elem(c));
            let failure = if !self.beats(ep, ec) {
                Some(self.now)
            } else {
                // equal values fall back to the id order, same as `priority_cmp`
                let tie = ep.cmp(&ec);
                next_sign_change(&self.plans[&ep], &self.plans[&ec], self.now, Some(tie))
            };
            let generation = self.next_generation;
            self.next_generation += 1;
            self.certs[c] = Some(CertSlot { generation, failure });
            if let Some(time) = failure {
                self.queue.push(Reverse(QueueKey {
                    time: OrderedFloat(time.to_f64().unwrap_or(f64::NAN)),
                    child: ec,
                    parent: ep,
                    generation,
                    node: c,
                }));
            }
        }
    }

    /// Verifies the heap property at `t` by direct evaluation. Returns the first
    /// violating (parent, child) pair, ignoring pairs closer than `tol`.
    pub fn find_violation(&self, t: T, tol: T) -> Option<(ElemId, ElemId)> {
        for (&id, &p) in &self.node_of {
            if let Some(q) = self.tree.parent(p) {
                let parent = self.tree.elem(q);
                let vp = self.plans[&parent].value_at(t);
                let vc = self.plans[&id].value_at(t);
                let bad = match self.order {
                    Order::Max => vc > vp + tol,
                    Order::Min => vc < vp - tol,
                };
                if bad {
                    return Some((parent, id));
                }
            }
        }
        None
    }

    /// Writes the event trace as CSV `time,kind,ids,root_after`.
    pub fn write_trace_csv<W: Write>(&self, w: W) -> csv::Result<()> {
        #[derive(Serialize)]
        struct Row {
            time: f64,
            kind: PqEventKind,
            ids: String,
            root_after: String,
        }
        let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
        out.write_record(["time", "kind", "ids", "root_after"])?;
        for r in &self.trace {
            out.serialize(Row {
                time: r.time.to_f64().unwrap_or(f64::NAN),
                kind: r.kind,
                ids: r
                    .ids
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(";"),
                root_after: r.root_after.map_or_else(String::new, |x| x.to_string()),
            })?;
        }
        out.flush()?;
        Ok(())
    }
}

fn check_domain<T: Scalar>(id: ElemId, plan: &FlightPlan<T>, t: T) -> Result<(), PqError> {
    if let Domain::Interval { end } = plan.domain() {
        if !(t >= T::zero() && t <= end) {
            return Err(PqError::OutOfDomain {
                id,
                t: t.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant(c: f64) -> Arc<FlightPlan<f64>> {
        Arc::new(FlightPlan::constant(Domain::Interval { end: 3.0 }, c).unwrap())
    }

    fn line(a: f64, b: f64) -> Arc<FlightPlan<f64>> {
        Arc::new(FlightPlan::linear(3.0, a, b).unwrap())
    }

    fn flavors() -> [Flavor; 2] {
        [Flavor::Heap, Flavor::Hanger { seed: 7 }]
    }

    #[test]
    fn max_root_of_constants() {
        for fl in flavors() {
            let pq = KineticPq::build(
                vec![(0, constant(5.0)), (1, constant(3.0)), (2, constant(8.0))],
                0.0,
                Order::Max,
                fl,
            )
            .unwrap();
            assert_eq!(pq.root(), Some(2));
            let mut pq = pq;
            assert!(pq.next_event().is_none());
        }
    }

    #[test]
    fn empty_structure_has_no_events() {
        let mut pq = KineticPq::<f64>::build(vec![], 0.0, Order::Max, Flavor::Heap).unwrap();
        assert!(pq.is_empty());
        assert_eq!(pq.root(), None);
        assert!(pq.next_event().is_none());
    }

    #[test]
    fn duplicate_id_rejected() {
        let err = KineticPq::build(
            vec![(0, constant(1.0)), (0, constant(2.0))],
            0.0,
            Order::Max,
            Flavor::Heap,
        )
        .unwrap_err();
        assert_eq!(err, PqError::DuplicateId(0));
    }

    #[test]
    fn two_lines_swap_at_one() {
        for fl in flavors() {
            let mut pq = KineticPq::build(
                vec![(0, line(1.0, 1.0)), (1, line(3.0, -1.0))],
                0.0,
                Order::Max,
                fl,
            )
            .unwrap();
            assert_eq!(pq.root(), Some(1));
            let ev = pq.pop_event().unwrap();
            assert!((ev.time - 1.0).abs() < 1e-15);
            let changed = pq.handle_swap(&ev);
            assert_eq!(changed, vec![(0, 1)]);
            assert_eq!(pq.root(), Some(0));
            assert!(pq.next_event().is_none());
        }
    }

    #[test]
    fn stale_event_is_dropped() {
        let mut pq = KineticPq::build(
            vec![(0, line(1.0, 1.0)), (1, line(3.0, -1.0))],
            0.0,
            Order::Max,
            Flavor::Heap,
        )
        .unwrap();
        let ev = pq.pop_event().unwrap();
        assert!(!pq.handle_swap(&ev).is_empty());
        assert!(pq.handle_swap(&ev).is_empty());
        assert_eq!(pq.root(), Some(0));
    }

    #[test]
    fn insert_above_root_and_delete_root() {
        for fl in flavors() {
            let mut pq = KineticPq::build(
                vec![(0, constant(5.0)), (1, constant(3.0)), (2, constant(8.0))],
                0.0,
                Order::Max,
                fl,
            )
            .unwrap();
            pq.insert(3, constant(9.0), 0.0).unwrap();
            assert_eq!(pq.root(), Some(3));
            pq.delete(3, 0.0).unwrap();
            pq.delete(2, 0.0).unwrap();
            assert_eq!(pq.root(), Some(0));
            assert_eq!(pq.delete(2, 0.0).unwrap_err(), PqError::UnknownId(2));
            assert_eq!(pq.insert(0, constant(1.0), 0.0).unwrap_err(), PqError::DuplicateId(0));
        }
    }

    #[test]
    fn min_order_tracks_minimum() {
        let mut pq = KineticPq::build(
            vec![(0, line(1.0, 1.0)), (1, line(3.0, -1.0)), (2, constant(2.5))],
            0.0,
            Order::Min,
            Flavor::Heap,
        )
        .unwrap();
        assert_eq!(pq.root(), Some(0));
        while let Some(ev) = pq.pop_event() {
            pq.handle_swap(&ev);
        }
        assert_eq!(pq.root(), Some(1));
    }

    #[test]
    fn trace_csv_has_header_and_rows() {
        let mut pq = KineticPq::build(
            vec![(0, line(1.0, 1.0)), (1, line(3.0, -1.0))],
            0.0,
            Order::Max,
            Flavor::Heap,
        )
        .unwrap();
        let ev = pq.pop_event().unwrap();
        pq.handle_swap(&ev);
        pq.insert(5, constant(0.5), 2.0).unwrap();
        let mut buf = Vec::new();
        pq.write_trace_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "time,kind,ids,root_after");
        assert_eq!(lines[1], "1.0,swap,1;0,0");
        assert_eq!(lines[2], "2.0,insert,5,0");
    }
}
