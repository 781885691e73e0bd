//! Bipartite graphs, matchings and augmenting paths, plus the static bottleneck
//! solver and the persistence-diagram reduction built on them.

mod bottleneck;
mod diagram;
mod hopcroft_karp;

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::curves::FlightPlan;
use crate::scalar::Scalar;

pub use bottleneck::{
    bottleneck_by_rank, brute_force_bottleneck, hall_witness, static_bottleneck,
    BottleneckSolution, BRUTE_FORCE_LIMIT,
};
pub use diagram::{bottleneck_distance, diagram_reduction, DiagramPoint};
pub use hopcroft_karp::hopcroft_karp;

pub type EdgeId = usize;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatchingError {
    #[error("vertex ({left}, {right}) outside a {n_left}x{n_right} graph")]
    VertexOutOfRange {
        left: usize,
        right: usize,
        n_left: usize,
        n_right: usize,
    },
    #[error("edge ({0}, {1}) given twice")]
    DuplicateEdge(usize, usize),
    #[error("sides differ in size: {left} left vs {right} right")]
    NotSquare { left: usize, right: usize },
    #[error("no perfect matching: left set {witness:?} only reaches {neighborhood:?}")]
    NoPerfectMatching {
        witness: Vec<usize>,
        neighborhood: Vec<usize>,
    },
    #[error("edge {0} has a NaN weight")]
    NanWeight(EdgeId),
    #[error("seed is not a matching of this graph")]
    InvalidSeed,
    #[error("path does not alternate with respect to the matching")]
    InvalidPath,
    #[error("brute force refused for n = {0}")]
    TooLarge(usize),
    #[error("diagram point {index} has death {death} <= birth {birth}")]
    InvalidPoint { index: usize, birth: f64, death: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge<W> {
    pub left: usize,
    pub right: usize,
    pub weight: W,
}

/// Bipartite graph with edge ids assigned in insertion order.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteGraph<W> {
    n_left: usize,
    n_right: usize,
    edges: Vec<Edge<W>>,
    adj_left: Vec<Vec<EdgeId>>,
    index: HashMap<(usize, usize), EdgeId>,
}

impl<W> BipartiteGraph<W> {
    pub fn new(n_left: usize, n_right: usize) -> Self {
        Self {
            n_left,
            n_right,
            edges: Vec::new(),
            adj_left: vec![Vec::new(); n_left],
            index: HashMap::new(),
        }
    }

    pub fn from_edges(
        n_left: usize,
        n_right: usize,
        edges: impl IntoIterator<Item = (usize, usize, W)>,
    ) -> Result<Self, MatchingError> {
        let mut g = Self::new(n_left, n_right);
        for (l, r, w) in edges {
            g.add_edge(l, r, w)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, left: usize, right: usize, weight: W) -> Result<EdgeId, MatchingError> {
        if left >= self.n_left || right >= self.n_right {
            return Err(MatchingError::VertexOutOfRange {
                left,
                right,
                n_left: self.n_left,
                n_right: self.n_right,
            });
        }
        if self.index.contains_key(&(left, right)) {
            return Err(MatchingError::DuplicateEdge(left, right));
        }
        let id = self.edges.len();
        self.edges.push(Edge { left, right, weight });
        self.adj_left[left].push(id);
        self.index.insert((left, right), id);
        Ok(id)
    }

    pub fn n_left(&self) -> usize {
        self.n_left
    }

    pub fn n_right(&self) -> usize {
        self.n_right
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, id: EdgeId) -> &Edge<W> {
        &self.edges[id]
    }

    pub fn edges(&self) -> &[Edge<W>] {
        &self.edges
    }

    pub fn edge_id(&self, left: usize, right: usize) -> Option<EdgeId> {
        self.index.get(&(left, right)).copied()
    }

    /// Edge ids at a left vertex, ascending.
    pub fn adjacent(&self, left: usize) -> &[EdgeId] {
        &self.adj_left[left]
    }

    /// Same topology with every weight mapped through `f`.
    pub fn map<U>(&self, mut f: impl FnMut(EdgeId, &W) -> U) -> BipartiteGraph<U> {
        BipartiteGraph {
            n_left: self.n_left,
            n_right: self.n_right,
            edges: self
                .edges
                .iter()
                .enumerate()
                .map(|(i, e)| Edge {
                    left: e.left,
                    right: e.right,
                    weight: f(i, &e.weight),
                })
                .collect(),
            adj_left: self.adj_left.clone(),
            index: self.index.clone(),
        }
    }

    pub(crate) fn require_square(&self) -> Result<usize, MatchingError> {
        if self.n_left == self.n_right {
            Ok(self.n_left)
        } else {
            Err(MatchingError::NotSquare {
                left: self.n_left,
                right: self.n_right,
            })
        }
    }
}

impl<T: Scalar> BipartiteGraph<FlightPlan<T>> {
    /// Static snapshot of every edge weight at time `t`.
    pub fn freeze(&self, t: T) -> BipartiteGraph<T> {
        self.map(|_, plan| plan.value_at(t))
    }
}

/// A matching stored as the matched edge at each vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    left: Vec<Option<EdgeId>>,
    right: Vec<Option<EdgeId>>,
}

impl Matching {
    pub fn empty<W>(g: &BipartiteGraph<W>) -> Self {
        Self {
            left: vec![None; g.n_left()],
            right: vec![None; g.n_right()],
        }
    }

    /// Matching from a list of edge ids; fails if two edges share a vertex.
    pub fn from_edges<W>(g: &BipartiteGraph<W>, edges: &[EdgeId]) -> Result<Self, MatchingError> {
        let mut m = Self::empty(g);
        for &e in edges {
            if e >= g.edge_count() {
                return Err(MatchingError::InvalidSeed);
            }
            let Edge { left, right, .. } = *g.edge(e);
            if m.left[left].is_some() || m.right[right].is_some() {
                return Err(MatchingError::InvalidSeed);
            }
            m.left[left] = Some(e);
            m.right[right] = Some(e);
        }
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.left.iter().flatten().count()
    }

    pub fn is_perfect(&self) -> bool {
        self.left.iter().all(Option::is_some) && self.right.iter().all(Option::is_some)
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.left.contains(&Some(e))
    }

    pub fn edge_at_left(&self, l: usize) -> Option<EdgeId> {
        self.left[l]
    }

    pub fn edge_at_right(&self, r: usize) -> Option<EdgeId> {
        self.right[r]
    }

    /// Matched edge ids, ascending.
    pub fn edges(&self) -> Vec<EdgeId> {
        let mut v: Vec<EdgeId> = self.left.iter().flatten().copied().collect();
        v.sort_unstable();
        v
    }

    pub fn insert<W>(&mut self, g: &BipartiteGraph<W>, e: EdgeId) {
        let Edge { left, right, .. } = *g.edge(e);
        debug_assert!(self.left[left].is_none() && self.right[right].is_none());
        self.left[left] = Some(e);
        self.right[right] = Some(e);
    }

    pub fn remove<W>(&mut self, g: &BipartiteGraph<W>, e: EdgeId) {
        let Edge { left, right, .. } = *g.edge(e);
        debug_assert_eq!(self.left[left], Some(e));
        self.left[left] = None;
        self.right[right] = None;
    }

    /// Largest weight among matched edges under `key`.
    pub fn max_by_key<W, K: PartialOrd>(
        &self,
        g: &BipartiteGraph<W>,
        key: impl Fn(EdgeId, &W) -> K,
    ) -> Option<EdgeId> {
        let mut best: Option<(EdgeId, K)> = None;
        for e in self.edges() {
            let k = key(e, &g.edge(e).weight);
            if best.as_ref().is_none_or(|(_, bk)| k > *bk) {
                best = Some((e, k));
            }
        }
        best.map(|(e, _)| e)
    }
}

/// Alternating path from a free left vertex to a free right vertex. Edges at
/// even positions are unmatched, edges at odd positions matched.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentingPath {
    pub edges: Vec<EdgeId>,
}

impl AugmentingPath {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Breadth-first search for a shortest augmenting path that starts at the
/// free left vertex `from` and uses only edges accepted by `allowed`. When `to`
/// is given the path must end at that right vertex. Neighbours are scanned in
/// ascending edge id, so the result is deterministic.
pub fn find_augmenting_path<W>(
    g: &BipartiteGraph<W>,
    m: &Matching,
    from: usize,
    to: Option<usize>,
    allowed: impl Fn(EdgeId) -> bool,
) -> Option<AugmentingPath> {
    if m.edge_at_left(from).is_some() {
        return None;
    }
    // via[r] = unmatched edge used to reach right vertex r
    let mut via: Vec<Option<EdgeId>> = vec![None; g.n_right()];
    let mut queue = VecDeque::from([from]);
    let mut seen_left = vec![false; g.n_left()];
    seen_left[from] = true;
    while let Some(l) = queue.pop_front() {
        for &e in g.adjacent(l) {
            if !allowed(e) || m.edge_at_left(l) == Some(e) {
                continue;
            }
            let r = g.edge(e).right;
            if via[r].is_some() {
                continue;
            }
            via[r] = Some(e);
            match m.edge_at_right(r) {
                None => {
                    if to.is_none_or(|t| t == r) {
                        return Some(trace_back(g, m, &via, r));
                    }
                }
                Some(me) => {
                    if !allowed(me) {
                        continue;
                    }
                    let l2 = g.edge(me).left;
                    if !seen_left[l2] {
                        seen_left[l2] = true;
                        queue.push_back(l2);
                    }
                }
            }
        }
    }
    None
}

fn trace_back<W>(
    g: &BipartiteGraph<W>,
    m: &Matching,
    via: &[Option<EdgeId>],
    mut r: usize,
) -> AugmentingPath {
    let mut rev = Vec::new();
    loop {
        let e = via[r].expect("reached right vertex");
        rev.push(e);
        let l = g.edge(e).left;
        match m.edge_at_left(l) {
            Some(me) => {
                rev.push(me);
                r = g.edge(me).right;
            }
            None => break,
        }
    }
    rev.reverse();
    AugmentingPath { edges: rev }
}

/// Symmetric difference `M ⊕ P`; the matching grows by one edge.
pub fn augment<W>(
    g: &BipartiteGraph<W>,
    m: &Matching,
    p: &AugmentingPath,
) -> Result<Matching, MatchingError> {
    if p.edges.len().is_multiple_of(2) {
        return Err(MatchingError::InvalidPath);
    }
    let first = g.edge(p.edges[0]);
    let last = g.edge(*p.edges.last().expect("nonempty"));
    if m.edge_at_left(first.left).is_some() || m.edge_at_right(last.right).is_some() {
        return Err(MatchingError::InvalidPath);
    }
    for (i, w) in p.edges.windows(2).enumerate() {
        let (a, b) = (g.edge(w[0]), g.edge(w[1]));
        let joined = if i % 2 == 0 { a.right == b.right } else { a.left == b.left };
        if !joined {
            return Err(MatchingError::InvalidPath);
        }
    }
    let mut out = m.clone();
    for (i, &e) in p.edges.iter().enumerate() {
        if i % 2 == 1 {
            if !m.contains(e) {
                return Err(MatchingError::InvalidPath);
            }
            out.remove(g, e);
        } else if m.contains(e) {
            return Err(MatchingError::InvalidPath);
        }
    }
    for &e in p.edges.iter().step_by(2) {
        out.insert(g, e);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k22() -> BipartiteGraph<f64> {
        BipartiteGraph::from_edges(2, 2, [(0, 0, 1.0), (0, 1, 5.0), (1, 0, 4.0), (1, 1, 2.0)])
            .unwrap()
    }

    #[test]
    fn graph_rejects_bad_edges() {
        let mut g = BipartiteGraph::new(1, 1);
        g.add_edge(0, 0, 1.0).unwrap();
        assert_eq!(g.add_edge(0, 0, 2.0), Err(MatchingError::DuplicateEdge(0, 0)));
        assert!(matches!(
            g.add_edge(1, 0, 2.0),
            Err(MatchingError::VertexOutOfRange { .. })
        ));
    }

    #[test]
    fn path_and_augment() {
        let g = k22();
        let m = Matching::from_edges(&g, &[2]).unwrap();
        // free: left 1? no, left 1 is matched via edge 2 (1,0); free left 0, free right 1
        let p = find_augmenting_path(&g, &m, 0, None, |_| true).unwrap();
        assert_eq!(p.edges, vec![1]);
        let p2 = find_augmenting_path(&g, &m, 0, None, |e| e != 1).unwrap();
        assert_eq!(p2.edges, vec![0, 2, 3]);
        let m2 = augment(&g, &m, &p2).unwrap();
        assert_eq!(m2.edges(), vec![0, 3]);
        assert!(m2.is_perfect());
        assert!(find_augmenting_path(&g, &m, 0, None, |e| e == 0).is_none());
    }

    #[test]
    fn augment_rejects_non_alternating() {
        let g = k22();
        let m = Matching::from_edges(&g, &[2]).unwrap();
        assert_eq!(
            augment(&g, &m, &AugmentingPath { edges: vec![0, 3] }),
            Err(MatchingError::InvalidPath)
        );
        assert_eq!(
            augment(&g, &m, &AugmentingPath { edges: vec![2] }),
            Err(MatchingError::InvalidPath)
        );
    }

    #[test]
    fn targeted_search_respects_endpoint() {
        let g = k22();
        let m = Matching::empty(&g);
        let p = find_augmenting_path(&g, &m, 0, Some(1), |_| true).unwrap();
        assert_eq!(p.edges, vec![1]);
    }

    #[test]
    fn matching_rejects_conflicts() {
        let g = k22();
        assert_eq!(Matching::from_edges(&g, &[0, 1]), Err(MatchingError::InvalidSeed));
    }
}
