use std::collections::VecDeque;

use super::{BipartiteGraph, EdgeId, Matching, MatchingError};

const INF: usize = usize::MAX;

/// Maximum-cardinality matching over the edges accepted by `allowed`.
///
/// `seed`, if given, must be a matching of `g` whose edges are all allowed; the
/// search then only adds the missing augmentations.
pub fn hopcroft_karp<W>(
    g: &BipartiteGraph<W>,
    allowed: impl Fn(EdgeId) -> bool,
    seed: Option<Matching>,
) -> Result<Matching, MatchingError> {
    let mut m = match seed {
        Some(s) => {
            let ok = s.left.len() == g.n_left()
                && s.right.len() == g.n_right()
                && s.edges().iter().all(|&e| {
                    let ed = g.edge(e);
                    allowed(e) && s.left[ed.left] == Some(e) && s.right[ed.right] == Some(e)
                });
            if !ok {
                return Err(MatchingError::InvalidSeed);
            }
            s
        }
        None => Matching::empty(g),
    };
    let mut dist = vec![INF; g.n_left()];
    let mut cursor = vec![0usize; g.n_left()];
    while bfs(g, &m, &allowed, &mut dist) {
        cursor.iter_mut().for_each(|c| *c = 0);
        for l in 0..g.n_left() {
            if m.left[l].is_none() {
                dfs(g, &mut m, &allowed, &mut dist, &mut cursor, l);
            }
        }
    }
    Ok(m)
}

fn bfs<W>(
    g: &BipartiteGraph<W>,
    m: &Matching,
    allowed: &impl Fn(EdgeId) -> bool,
    dist: &mut [usize],
) -> bool {
    let mut queue = VecDeque::new();
    for l in 0..g.n_left() {
        if m.left[l].is_none() {
            dist[l] = 0;
            queue.push_back(l);
        } else {
            dist[l] = INF;
        }
    }
    let mut found = false;
    while let Some(l) = queue.pop_front() {
        for &e in g.adjacent(l) {
            if !allowed(e) {
                continue;
            }
            match m.right[g.edge(e).right] {
                None => found = true,
                Some(me) => {
                    let l2 = g.edge(me).left;
                    if dist[l2] == INF {
                        dist[l2] = dist[l] + 1;
                        queue.push_back(l2);
                    }
                }
            }
        }
    }
    found
}

/// Iterative layered DFS from free left vertex `start`.
fn dfs<W>(
    g: &BipartiteGraph<W>,
    m: &mut Matching,
    allowed: &impl Fn(EdgeId) -> bool,
    dist: &mut [usize],
    cursor: &mut [usize],
    start: usize,
) -> bool {
    // stack of (left vertex, edge taken from it)
    let mut stack: Vec<(usize, EdgeId)> = Vec::new();
    let mut l = start;
    loop {
        let adj = g.adjacent(l);
        let mut advanced = false;
        while cursor[l] < adj.len() {
            let e = adj[cursor[l]];
            cursor[l] += 1;
            if !allowed(e) {
                continue;
            }
            let r = g.edge(e).right;
            match m.right[r] {
                None => {
                    stack.push((l, e));
                    for &(_, pe) in stack.iter().rev() {
                        let pe_left = g.edge(pe).left;
                        let pe_right = g.edge(pe).right;
                        m.left[pe_left] = Some(pe);
                        m.right[pe_right] = Some(pe);
                    }
                    return true;
                }
                Some(me) => {
                    let l2 = g.edge(me).left;
                    if dist[l2] != INF && dist[l2] == dist[l] + 1 {
                        stack.push((l, e));
                        l = l2;
                        advanced = true;
                        break;
                    }
                }
            }
        }
        if !advanced {
            dist[l] = INF;
            match stack.pop() {
                Some((prev, _)) => l = prev,
                None => return false,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_on_k33() {
        let edges = (0..3).flat_map(|l| (0..3).map(move |r| (l, r, ())));
        let g = BipartiteGraph::from_edges(3, 3, edges).unwrap();
        let m = hopcroft_karp(&g, |_| true, None).unwrap();
        assert!(m.is_perfect());
    }

    #[test]
    fn respects_filter_and_seed() {
        let g = BipartiteGraph::from_edges(2, 2, [(0, 0, ()), (0, 1, ()), (1, 0, ())]).unwrap();
        let m = hopcroft_karp(&g, |e| e != 1, None).unwrap();
        assert_eq!(m.size(), 1);
        let seed = Matching::from_edges(&g, &[0]).unwrap();
        let m = hopcroft_karp(&g, |_| true, Some(seed)).unwrap();
        assert_eq!(m.edges(), vec![1, 2]);
        let bad = Matching::from_edges(&g, &[1]).unwrap();
        assert_eq!(
            hopcroft_karp(&g, |e| e != 1, Some(bad)),
            Err(MatchingError::InvalidSeed)
        );
    }

    #[test]
    fn needs_augmentation_through_matched_edge() {
        // greedy would take (0,0) then fail for left 1
        let g = BipartiteGraph::from_edges(2, 2, [(0, 0, ()), (0, 1, ()), (1, 0, ())]).unwrap();
        let m = hopcroft_karp(&g, |_| true, None).unwrap();
        assert!(m.is_perfect());
    }
}
