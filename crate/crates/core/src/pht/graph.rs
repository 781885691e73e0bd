use std::collections::VecDeque;

use crate::scalar::{wrap_angle, Scalar};

use super::PhtError;

/// Angular tolerance below which two critical directions count as one.
pub const ANGLE_TOL: f64 = 1e-9;

/// Samples used by [`EmbeddedGraph::check_star_shaped`].
pub const STAR_SAMPLES: usize = 1000;

/// Straight-line embedding of a connected graph in the plane.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedGraph<T> {
    vertices: Vec<[T; 2]>,
    edges: Vec<[usize; 2]>,
    center: Option<[T; 2]>,
    adj: Vec<Vec<usize>>,
}

impl<T: Scalar> EmbeddedGraph<T> {
    pub fn new(
        vertices: Vec<[T; 2]>,
        edges: Vec<[usize; 2]>,
        center: Option<[T; 2]>,
    ) -> Result<Self, PhtError> {
        let n = vertices.len();
        if n == 0 {
            return Err(PhtError::InvalidGraph("no vertices".into()));
        }
        if vertices.iter().flatten().any(|c| !c.is_finite()) {
            return Err(PhtError::InvalidGraph("non-finite coordinate".into()));
        }
        for i in 0..n {
            for j in i + 1..n {
                if vertices[i] == vertices[j] {
                    return Err(PhtError::InvalidGraph(format!(
                        "vertices {i} and {j} coincide"
                    )));
                }
            }
        }
        let mut adj = vec![Vec::new(); n];
        for &[a, b] in &edges {
            if a >= n || b >= n {
                return Err(PhtError::InvalidGraph(format!("edge ({a}, {b}) out of range")));
            }
            if a == b {
                return Err(PhtError::InvalidGraph(format!("self-loop at {a}")));
            }
            if adj[a].contains(&b) {
                return Err(PhtError::InvalidGraph(format!("edge ({a}, {b}) repeated")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(PhtError::Disconnected);
        }
        Ok(Self {
            vertices,
            edges,
            center,
            adj,
        })
    }

    pub fn vertices(&self) -> &[[T; 2]] {
        &self.vertices
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn center(&self) -> Option<[T; 2]> {
        self.center
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Height of vertex `v` in direction `θ`.
    pub fn height(&self, v: usize, theta: T) -> T {
        let [x, y] = self.vertices[v];
        x * theta.cos() + y * theta.sin()
    }

    /// Largest absolute coordinate, used to scale tolerances.
    pub fn scale(&self) -> T {
        self.vertices
            .iter()
            .flatten()
            .fold(T::zero(), |m, c| m.max(c.abs()))
    }

    pub fn translated(&self, by: [T; 2]) -> Self {
        Self {
            vertices: self
                .vertices
                .iter()
                .map(|[x, y]| [*x + by[0], *y + by[1]])
                .collect(),
            edges: self.edges.clone(),
            center: self.center.map(|[x, y]| [x + by[0], y + by[1]]),
            adj: self.adj.clone(),
        }
    }

    /// Same combinatorics, new coordinates.
    pub fn with_vertices(&self, vertices: Vec<[T; 2]>) -> Result<Self, PhtError> {
        Self::new(vertices, self.edges.clone(), self.center)
    }

    /// Spot-checks star-shapedness about the stored center: points spread
    /// along the edges must see the center along a segment covered by edges.
    /// Passes trivially without a center.
    pub fn check_star_shaped(&self) -> Result<(), PhtError> {
        let Some(c) = self.center else {
            return Ok(());
        };
        if self.edges.is_empty() {
            return Ok(());
        }
        let tol = T::lit(1e-9) * (T::one() + self.scale());
        let per_edge = STAR_SAMPLES.div_ceil(self.edges.len()).max(1);
        let along = 16;
        for &[a, b] in &self.edges {
            for s in 0..=per_edge {
                let f = T::lit(s as f64 / per_edge as f64);
                let p = lerp(self.vertices[a], self.vertices[b], f);
                for k in 0..=along {
                    let q = lerp(c, p, T::lit(k as f64 / along as f64));
                    if !self.covers(q, tol) {
                        return Err(PhtError::NotStarShaped {
                            x: p[0].to_f64().unwrap_or(f64::NAN),
                            y: p[1].to_f64().unwrap_or(f64::NAN),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn covers(&self, q: [T; 2], tol: T) -> bool {
        self.edges
            .iter()
            .any(|&[a, b]| segment_distance(q, self.vertices[a], self.vertices[b]) <= tol)
            || (self.edges.is_empty() && self.vertices.iter().any(|v| dist(*v, q) <= tol))
    }
}

fn lerp<T: Scalar>(a: [T; 2], b: [T; 2], f: T) -> [T; 2] {
    [a[0] + (b[0] - a[0]) * f, a[1] + (b[1] - a[1]) * f]
}

fn dist<T: Scalar>(a: [T; 2], b: [T; 2]) -> T {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn segment_distance<T: Scalar>(q: [T; 2], a: [T; 2], b: [T; 2]) -> T {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let f = (((q[0] - a[0]) * dx + (q[1] - a[1]) * dy) / len2)
        .max(T::zero())
        .min(T::one());
    dist(q, lerp(a, b, f))
}

/// A vertex that is not in the convex hull of its neighbours, with the open
/// arc of directions in which it is a strict local minimum.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalVertex<T> {
    pub vertex: usize,
    /// Arc start in `[0, 2π)`.
    pub start: T,
    /// Arc end, `start < end <= start + 2π`.
    pub end: T,
    /// The edges bordering the widest angular gap (one for a leaf).
    pub external_edges: Vec<[usize; 2]>,
}

impl<T: Scalar> ExtremalVertex<T> {
    pub fn contains(&self, theta: T) -> bool {
        let u = self.start + wrap_angle(theta - self.start);
        u > self.start && u < self.end
    }
}

/// All extremal vertices, ascending by id.
pub fn extremal_vertices<T: Scalar>(g: &EmbeddedGraph<T>) -> Vec<ExtremalVertex<T>> {
    let pi = T::PI();
    let half_pi = T::FRAC_PI_2();
    let mut out = Vec::new();
    for v in 0..g.vertex_count() {
        let [vx, vy] = g.vertices[v];
        let mut dirs: Vec<(T, usize)> = g
            .neighbors(v)
            .iter()
            .map(|&u| {
                let [ux, uy] = g.vertices[u];
                (wrap_angle((uy - vy).atan2(ux - vx)), u)
            })
            .collect();
        if dirs.is_empty() {
            out.push(ExtremalVertex {
                vertex: v,
                start: T::zero(),
                end: T::two_pi(),
                external_edges: Vec::new(),
            });
            continue;
        }
        dirs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite angle"));
        // widest gap runs counter-clockwise from dirs[i] to dirs[i+1]
        let k = dirs.len();
        let mut best = (T::neg_infinity(), 0);
        for i in 0..k {
            let next = if i + 1 < k { dirs[i + 1].0 } else { dirs[0].0 + T::two_pi() };
            let gap = next - dirs[i].0;
            if gap > best.0 {
                best = (gap, i);
            }
        }
        let (gap, i) = best;
        if gap > pi {
            let da = dirs[i].0;
            let start = wrap_angle(da + pi + half_pi);
            let end = start + (gap - pi);
            let mut external = vec![[v, dirs[i].1]];
            let j = (i + 1) % k;
            if j != i {
                external.push([v, dirs[j].1]);
            }
            out.push(ExtremalVertex {
                vertex: v,
                start,
                end,
                external_edges: external,
            });
        }
    }
    out
}

/// Directions perpendicular to some vertex-pair line, sorted on `[0, 2π)`.
///
/// Directions closer than [`ANGLE_TOL`] are merged when all pairs involved lie
/// on one line (several vertices tie at once) and rejected otherwise.
pub fn critical_directions<T: Scalar>(g: &EmbeddedGraph<T>) -> Result<Vec<T>, PhtError> {
    let n = g.vertex_count();
    let half_pi = T::FRAC_PI_2();
    let mut all: Vec<(T, usize, usize)> = Vec::with_capacity(n * n.saturating_sub(1));
    for i in 0..n {
        for j in i + 1..n {
            let [xi, yi] = g.vertices[i];
            let [xj, yj] = g.vertices[j];
            let phi = (yj - yi).atan2(xj - xi);
            all.push((wrap_angle(phi + half_pi), i, j));
            all.push((wrap_angle(phi - half_pi), i, j));
        }
    }
    all.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite angle"));
    let tol = T::lit(ANGLE_TOL);
    let mut groups: Vec<Vec<(T, usize, usize)>> = Vec::new();
    for item in all {
        match groups.last_mut() {
            Some(grp) if item.0 - grp.last().expect("nonempty").0 <= tol => grp.push(item),
            _ => groups.push(vec![item]),
        }
    }
    // the last group may wrap onto the first
    if groups.len() > 1 {
        let first = groups[0][0].0;
        let last = groups.last().expect("nonempty").last().expect("nonempty").0;
        if first + T::two_pi() - last <= tol {
            let head = groups.remove(0);
            groups.last_mut().expect("nonempty").extend(head);
        }
    }
    let mut out = Vec::with_capacity(groups.len());
    for grp in groups {
        if grp.len() > 1 && !collinear_pairs(g, &grp) {
            return Err(PhtError::NotGeneric {
                angle: grp[0].0.to_f64().unwrap_or(f64::NAN),
            });
        }
        out.push(grp[0].0);
    }
    out.sort_by(|a, b| a.partial_cmp(b).expect("finite angle"));
    Ok(out)
}

fn collinear_pairs<T: Scalar>(g: &EmbeddedGraph<T>, grp: &[(T, usize, usize)]) -> bool {
    let (_, a, b) = grp[0];
    let pa = g.vertices[a];
    let pb = g.vertices[b];
    let (dx, dy) = (pb[0] - pa[0], pb[1] - pa[1]);
    let len = dx.hypot(dy);
    let tol = T::lit(ANGLE_TOL) * (T::one() + g.scale());
    grp.iter().all(|&(_, i, j)| {
        [i, j].iter().all(|&v| {
            let p = g.vertices[v];
            ((p[0] - pa[0]) * dy - (p[1] - pa[1]) * dx).abs() / len <= tol
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn v_shape() -> EmbeddedGraph<f64> {
        EmbeddedGraph::new(vec![[0.0, 0.0], [1.0, 1.0], [2.0, 0.0]], vec![[0, 1], [1, 2]], None)
            .unwrap()
    }

    #[test]
    fn rejects_disconnected_and_bad_edges() {
        assert_eq!(
            EmbeddedGraph::new(vec![[0.0, 0.0], [1.0, 0.0]], vec![], None),
            Err(PhtError::Disconnected)
        );
        assert!(EmbeddedGraph::new(vec![[0.0, 0.0]], vec![[0, 0]], None).is_err());
        assert!(EmbeddedGraph::new(vec![[0.0, 0.0], [0.0, 0.0]], vec![[0, 1]], None).is_err());
    }

    #[test]
    fn v_shape_all_extremal() {
        let ext = extremal_vertices(&v_shape());
        assert_eq!(ext.iter().map(|e| e.vertex).collect::<Vec<_>>(), vec![0, 1, 2]);
        // v1 is the apex: a local min for directions pointing down, between the
        // normals of its two edges
        let apex = &ext[1];
        assert!((apex.start - 5.0 * FRAC_PI_4).abs() < 1e-12);
        assert!((apex.end - 7.0 * FRAC_PI_4).abs() < 1e-12);
        assert_eq!(apex.external_edges.len(), 2);
        assert!(apex.contains(3.0 * FRAC_PI_2));
        assert!(!apex.contains(FRAC_PI_2));
    }

    #[test]
    fn collinear_midpoint_not_extremal() {
        let g = EmbeddedGraph::new(
            vec![[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]],
            vec![[0, 1], [1, 2]],
            None,
        )
        .unwrap();
        let ext: Vec<usize> = extremal_vertices(&g).iter().map(|e| e.vertex).collect();
        assert_eq!(ext, vec![0, 2]);
    }

    #[test]
    fn leaf_interval_is_a_half_circle() {
        let g = EmbeddedGraph::new(vec![[0.0, 0.0], [1.0, 0.0]], vec![[0, 1]], None).unwrap();
        let ext = extremal_vertices(&g);
        assert!((ext[0].end - ext[0].start - PI).abs() < 1e-12);
        assert!(ext[0].contains(0.0));
        assert!(ext[1].contains(PI));
    }

    #[test]
    fn v_shape_critical_directions() {
        let c = critical_directions(&v_shape()).unwrap();
        let want = [45.0, 90.0, 135.0, 225.0, 270.0, 315.0];
        assert_eq!(c.len(), 6);
        for (a, w) in c.iter().zip(want) {
            assert!((a.to_degrees() - w).abs() < 1e-9);
        }
    }

    #[test]
    fn collinear_triple_merges_parallel_rejects() {
        let path = EmbeddedGraph::new(
            vec![[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]],
            vec![[0, 1], [1, 2]],
            None,
        )
        .unwrap();
        assert_eq!(critical_directions(&path).unwrap().len(), 2);
        let square = EmbeddedGraph::new(
            vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
            vec![[0, 1], [1, 2], [2, 3]],
            None,
        )
        .unwrap();
        assert!(matches!(
            critical_directions(&square),
            Err(PhtError::NotGeneric { .. })
        ));
        let two = EmbeddedGraph::new(vec![[0.0, 0.0], [1.0, 0.3]], vec![[0, 1]], None).unwrap();
        assert_eq!(critical_directions(&two).unwrap().len(), 2);
    }

    #[test]
    fn star_check() {
        let star = EmbeddedGraph::new(
            vec![[0.0, 0.0], [1.0, 0.0], [0.0, 2.0], [-1.0, -1.0]],
            vec![[0, 1], [0, 2], [0, 3]],
            Some([0.0, 0.0]),
        )
        .unwrap();
        star.check_star_shaped().unwrap();
        let bent = EmbeddedGraph::new(
            vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]],
            vec![[0, 1], [1, 2]],
            Some([0.0, 0.0]),
        )
        .unwrap();
        assert!(matches!(
            bent.check_star_shaped(),
            Err(PhtError::NotStarShaped { .. })
        ));
    }
}
