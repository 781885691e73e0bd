use std::cmp::Ordering;

use super::{hopcroft_karp, BipartiteGraph, EdgeId, Matching, MatchingError};
use crate::scalar::Scalar;

/// Largest `n` accepted by [`brute_force_bottleneck`].
pub const BRUTE_FORCE_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct BottleneckSolution<T> {
    pub value: T,
    pub matching: Matching,
    /// Heaviest edge of the matching; `None` on the empty graph.
    pub bottleneck_edge: Option<EdgeId>,
}

/// Min-bottleneck perfect matching for a fixed ranking of the edges (best
/// first). Returns the matching and its worst-ranked edge.
///
/// Binary search over the rank prefix, each probe reseeded with the last
/// feasible matching restricted to the probe's prefix.
pub fn bottleneck_by_rank<W>(
    g: &BipartiteGraph<W>,
    ranking: &[EdgeId],
) -> Result<(Matching, Option<EdgeId>), MatchingError> {
    let n = g.require_square()?;
    if n == 0 {
        return Ok((Matching::empty(g), None));
    }
    let mut rank = vec![usize::MAX; g.edge_count()];
    for (i, &e) in ranking.iter().enumerate() {
        rank[e] = i;
    }
    let full = hopcroft_karp(g, |e| rank[e] != usize::MAX, None)?;
    if !full.is_perfect() {
        let (witness, neighborhood) = hall_witness(g, &full);
        return Err(MatchingError::NoPerfectMatching {
            witness,
            neighborhood,
        });
    }
    let (mut lo, mut hi) = (n - 1, ranking.len() - 1);
    let mut best = full;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        let kept: Vec<EdgeId> = best.edges().into_iter().filter(|&e| rank[e] <= mid).collect();
        let seed = Matching::from_edges(g, &kept)?;
        let m = hopcroft_karp(g, |e| rank[e] <= mid, Some(seed))?;
        if m.is_perfect() {
            best = m;
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let top = best.max_by_key(g, |e, _| rank[e]);
    Ok((best, top))
}

/// Minimum bottleneck cost over perfect matchings of a static weighted graph.
/// Ties among equal weights are broken by edge id.
pub fn static_bottleneck<T: Scalar>(
    g: &BipartiteGraph<T>,
) -> Result<BottleneckSolution<T>, MatchingError> {
    if let Some(bad) = g.edges().iter().position(|e| e.weight.is_nan()) {
        return Err(MatchingError::NanWeight(bad));
    }
    let mut ranking: Vec<EdgeId> = (0..g.edge_count()).collect();
    ranking.sort_by(|&a, &b| {
        g.edge(a)
            .weight
            .partial_cmp(&g.edge(b).weight)
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(&b))
    });
    let (matching, top) = bottleneck_by_rank(g, &ranking)?;
    Ok(BottleneckSolution {
        value: top.map_or(T::zero(), |e| g.edge(e).weight),
        matching,
        bottleneck_edge: top,
    })
}

/// König alternating reachability from the free left vertices of a maximum
/// matching. The reached left set violates Hall's condition: it is strictly
/// larger than its neighbourhood (the reached right set).
pub fn hall_witness<W>(g: &BipartiteGraph<W>, m: &Matching) -> (Vec<usize>, Vec<usize>) {
    let mut seen_left = vec![false; g.n_left()];
    let mut seen_right = vec![false; g.n_right()];
    let mut stack: Vec<usize> = (0..g.n_left()).filter(|&l| m.edge_at_left(l).is_none()).collect();
    for &l in &stack {
        seen_left[l] = true;
    }
    while let Some(l) = stack.pop() {
        for &e in g.adjacent(l) {
            let r = g.edge(e).right;
            if seen_right[r] {
                continue;
            }
            seen_right[r] = true;
            if let Some(me) = m.edge_at_right(r) {
                let l2 = g.edge(me).left;
                if !seen_left[l2] {
                    seen_left[l2] = true;
                    stack.push(l2);
                }
            }
        }
    }
    let pick = |v: &[bool]| v.iter().enumerate().filter(|(_, &s)| s).map(|(i, _)| i).collect();
    (pick(&seen_left), pick(&seen_right))
}

/// Exhaustive minimum bottleneck over all permutations, `n <= 8`. `None` when
/// no perfect matching exists.
pub fn brute_force_bottleneck<T: Scalar>(
    g: &BipartiteGraph<T>,
) -> Result<Option<T>, MatchingError> {
    let n = g.require_square()?;
    if n > BRUTE_FORCE_LIMIT {
        return Err(MatchingError::TooLarge(n));
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<T> = None;
    permute(g, &mut perm, 0, T::neg_infinity(), &mut best);
    Ok(best.map(|b| if n == 0 { T::zero() } else { b }))
}

fn permute<T: Scalar>(
    g: &BipartiteGraph<T>,
    perm: &mut [usize],
    k: usize,
    worst: T,
    best: &mut Option<T>,
) {
    if k == perm.len() {
        if best.is_none_or(|b| worst < b) {
            *best = Some(worst);
        }
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        if let Some(e) = g.edge_id(k, perm[k]) {
            let w = worst.max(g.edge(e).weight);
            if best.is_none_or(|b| w < b) {
                permute(g, perm, k + 1, w, best);
            }
        }
        perm.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k22_at_zero() {
        let g = BipartiteGraph::from_edges(2, 2, [(0, 0, 1.0), (0, 1, 5.0), (1, 0, 4.0), (1, 1, 2.0)])
            .unwrap();
        let s = static_bottleneck(&g).unwrap();
        assert_eq!(s.value, 2.0);
        assert_eq!(s.bottleneck_edge, Some(3));
        assert_eq!(s.matching.edges(), vec![0, 3]);
        assert_eq!(brute_force_bottleneck(&g).unwrap(), Some(2.0));
    }

    #[test]
    fn hall_violation_reported() {
        let g = BipartiteGraph::from_edges(2, 2, [(0, 0, 1.0), (1, 0, 1.0)]).unwrap();
        match static_bottleneck(&g) {
            Err(MatchingError::NoPerfectMatching {
                witness,
                neighborhood,
            }) => {
                assert_eq!(witness, vec![0, 1]);
                assert_eq!(neighborhood, vec![0]);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(brute_force_bottleneck(&g).unwrap(), None);
    }

    #[test]
    fn empty_and_non_square() {
        let g = BipartiteGraph::<f64>::new(0, 0);
        assert_eq!(static_bottleneck(&g).unwrap().value, 0.0);
        let h = BipartiteGraph::<f64>::new(1, 2);
        assert!(matches!(static_bottleneck(&h), Err(MatchingError::NotSquare { .. })));
    }

    #[test]
    fn brute_force_limit() {
        let g = BipartiteGraph::<f64>::new(9, 9);
        assert_eq!(brute_force_bottleneck(&g), Err(MatchingError::TooLarge(9)));
    }
}
