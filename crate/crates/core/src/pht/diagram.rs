use std::cmp::Ordering;

use super::EmbeddedGraph;
use crate::matching::DiagramPoint;
use crate::scalar::Scalar;

/// Finite point of a direction diagram together with the vertices that
/// create and kill it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FinitePoint<T> {
    pub birth: T,
    pub death: T,
    pub birth_vertex: usize,
    pub death_vertex: usize,
}

/// 0-dimensional diagram of the lower-star filtration in one direction.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionDiagram<T> {
    pub essential_birth: T,
    /// Global minimum vertex, birth vertex of the essential class.
    pub essential_vertex: usize,
    pub finite_points: Vec<FinitePoint<T>>,
}

impl<T: Scalar> DirectionDiagram<T> {
    pub fn points(&self) -> Vec<DiagramPoint<T>> {
        self.finite_points
            .iter()
            .map(|p| DiagramPoint::new(p.birth, p.death))
            .collect()
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Union-find over the vertices in height order. At a merge the component
/// with the older birth (lower height, then lower id) survives; the other
/// dies at the current height. Zero-persistence pairs are dropped.
pub fn lower_star_diagram<T: Scalar>(g: &EmbeddedGraph<T>, theta: T) -> DirectionDiagram<T> {
    let n = g.vertex_count();
    let h: Vec<T> = (0..n).map(|v| g.height(v, theta)).collect();
    let older = |a: usize, b: usize| h[a].partial_cmp(&h[b]).unwrap_or(Ordering::Equal).then(a.cmp(&b));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| older(a, b));
    let mut rank = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    // birth vertex of the component rooted at each root
    let birth: Vec<usize> = (0..n).collect();
    let mut points = Vec::new();
    for &v in &order {
        for &u in g.neighbors(v) {
            if rank[u] > rank[v] {
                continue;
            }
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru == rv {
                continue;
            }
            let (keep, die) = if older(birth[ru], birth[rv]) == Ordering::Less {
                (ru, rv)
            } else {
                (rv, ru)
            };
            let bv = birth[die];
            if h[bv] < h[v] {
                points.push(FinitePoint {
                    birth: h[bv],
                    death: h[v],
                    birth_vertex: bv,
                    death_vertex: v,
                });
            }
            parent[die] = keep;
        }
    }
    let root = find(&mut parent, order[0]);
    let ev = birth[root];
    DirectionDiagram {
        essential_birth: h[ev],
        essential_vertex: ev,
        finite_points: points,
    }
}
