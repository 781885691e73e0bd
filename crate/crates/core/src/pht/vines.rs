use super::{critical_directions, lower_star_diagram, EmbeddedGraph, PhtError};
use crate::curves::Sinusoid;
use crate::scalar::{wrap_angle, Scalar};

/// Relative tolerance for limit agreement at critical directions.
pub const STITCH_TOL: f64 = 1e-9;

/// One ellipse arc of a vine: the point `(h_θ(birth), h_θ(death))` for θ in
/// `[t0, t1]` (unrolled angles).
#[derive(Debug, Clone, PartialEq)]
pub struct VineArc<T> {
    pub t0: T,
    pub t1: T,
    pub birth_vertex: usize,
    pub death_vertex: usize,
    pub birth_coords: [T; 2],
    pub death_coords: [T; 2],
}

impl<T: Scalar> VineArc<T> {
    pub fn birth(&self) -> Sinusoid<T> {
        Sinusoid::from_coeffs(self.birth_coords[0], self.birth_coords[1])
    }

    pub fn death(&self) -> Sinusoid<T> {
        Sinusoid::from_coeffs(self.death_coords[0], self.death_coords[1])
    }

    pub fn position(&self, theta: T) -> (T, T) {
        (self.birth().eval(theta), self.death().eval(theta))
    }
}

/// Path of one diagram point over the directions where it is off the diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct Vine<T> {
    /// Birth vertex on the first arc. It can change along the vine when the
    /// global minimum hands over.
    pub birth_vertex: usize,
    /// Unrolled interval `[start, end]`, `start ∈ [0, 2π)`.
    pub start: T,
    pub end: T,
    /// Alive on the whole circle.
    pub closed: bool,
    pub arcs: Vec<VineArc<T>>,
}

/// Position of a vine node on `[t0, t1)`; dead stretches have `birth == death`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct NodePiece<T> {
    pub t0: T,
    pub t1: T,
    pub birth: Sinusoid<T>,
    pub death: Sinusoid<T>,
}

impl<T: Scalar> Vine<T> {
    pub fn interval(&self) -> (T, T) {
        (self.start, self.end)
    }

    fn unroll(&self, theta: T) -> T {
        self.start + wrap_angle(theta - self.start)
    }

    /// Diagram position at `θ` if the vine is alive there (endpoints included).
    pub fn position(&self, theta: T) -> Option<(T, T)> {
        let mut u = self.unroll(theta);
        if u > self.end {
            // the end itself may sit exactly one turn above the start
            if (u - T::two_pi() - self.start).abs() <= T::time_eps() {
                u = self.start;
            } else {
                return None;
            }
        }
        let idx = self
            .arcs
            .partition_point(|a| a.t0 <= u)
            .saturating_sub(1);
        Some(self.arcs[idx].position(u))
    }

    /// Whether `θ` lies strictly inside the vine's interval.
    pub fn alive_at(&self, theta: T) -> bool {
        self.closed || {
            let u = self.unroll(theta);
            u > self.start && u < self.end
        }
    }

    /// Full-turn position pieces on `[0, 2π)`, dead stretches placed on the
    /// diagonal so that every coordinate is continuous.
    pub(crate) fn node_pieces(&self) -> Vec<NodePiece<T>> {
        let mut unrolled: Vec<NodePiece<T>> = self
            .arcs
            .iter()
            .map(|a| NodePiece {
                t0: a.t0,
                t1: a.t1,
                birth: a.birth(),
                death: a.death(),
            })
            .collect();
        let turn_end = self.start + T::two_pi();
        if !self.closed && turn_end - self.end > T::time_eps() {
            unrolled.extend(self.dead_pieces(self.end, turn_end));
        } else if let Some(last) = unrolled.last_mut() {
            last.t1 = turn_end;
        }
        let mut out = Vec::new();
        for p in unrolled {
            let two_pi = T::two_pi();
            if p.t1 <= two_pi {
                out.push(p);
            } else if p.t0 >= two_pi {
                out.push(NodePiece {
                    t0: p.t0 - two_pi,
                    t1: p.t1 - two_pi,
                    ..p
                });
            } else {
                out.push(NodePiece {
                    t1: two_pi,
                    ..p.clone()
                });
                out.push(NodePiece {
                    t0: T::zero(),
                    t1: p.t1 - two_pi,
                    ..p
                });
            }
        }
        out.retain(|p| p.t1 > p.t0);
        out.sort_by(|a, b| a.t0.partial_cmp(&b.t0).expect("finite angle"));
        out
    }

    /// Diagonal placement on `[from, to]`: the height of the birth vertex when
    /// both ends share it, otherwise sinusoids through linearly interpolated
    /// values on sub-arcs of at most a quarter turn.
    fn dead_pieces(&self, from: T, to: T) -> Vec<NodePiece<T>> {
        let first = self.arcs.first().expect("vine has arcs");
        let last = self.arcs.last().expect("vine has arcs");
        if first.birth_vertex == last.birth_vertex {
            let s = first.birth();
            return vec![NodePiece {
                t0: from,
                t1: to,
                birth: s,
                death: s,
            }];
        }
        let y0 = last.birth().eval(from);
        let y1 = first.birth().eval(to);
        let quarter = T::FRAC_PI_2();
        let k = ((to - from) / quarter).ceil().max(T::one());
        let steps = k.to_usize().unwrap_or(1);
        let mut out = Vec::with_capacity(steps);
        for i in 0..steps {
            let fa = T::lit(i as f64) / k;
            let fb = T::lit((i + 1) as f64) / k;
            let (ta, tb) = (from + (to - from) * fa, from + (to - from) * fb);
            let (ya, yb) = (y0 + (y1 - y0) * fa, y0 + (y1 - y0) * fb);
            let s = through_two_points(ta, ya, tb, yb);
            out.push(NodePiece {
                t0: ta,
                t1: tb,
                birth: s,
                death: s,
            });
        }
        out
    }
}

/// `A cosθ + B sinθ` through `(ta, ya)` and `(tb, yb)`, `0 < tb − ta <= π/2`.
fn through_two_points<T: Scalar>(ta: T, ya: T, tb: T, yb: T) -> Sinusoid<T> {
    let det = (tb - ta).sin();
    let a = (ya * tb.sin() - yb * ta.sin()) / det;
    let b = (yb * ta.cos() - ya * tb.cos()) / det;
    Sinusoid::from_coeffs(a, b)
}

/// Birth curve of the essential class on `[t0, t1)`: the height of `vertex`.
#[derive(Debug, Clone, PartialEq)]
pub struct EssentialPiece<T> {
    pub t0: T,
    pub t1: T,
    pub vertex: usize,
    pub coords: [T; 2],
}

impl<T: Scalar> EssentialPiece<T> {
    pub fn height(&self) -> Sinusoid<T> {
        Sinusoid::from_coeffs(self.coords[0], self.coords[1])
    }
}

/// 0-dimensional PHT of one embedded graph as vines.
#[derive(Debug, Clone, PartialEq)]
pub struct PhtVineyard<T> {
    pub critical: Vec<T>,
    /// Tiles `[0, 2π)`.
    pub essential: Vec<EssentialPiece<T>>,
    pub finite_vines: Vec<Vine<T>>,
}

impl<T: Scalar> PhtVineyard<T> {
    pub fn essential_birth(&self, theta: T) -> T {
        let r = wrap_angle(theta);
        let idx = self
            .essential
            .partition_point(|p| p.t0 <= r)
            .saturating_sub(1);
        self.essential[idx].height().eval(r)
    }

    /// Off-diagonal points at `θ`, from the vines alive there.
    pub fn points_at(&self, theta: T) -> Vec<(T, T)> {
        self.finite_vines
            .iter()
            .filter(|v| v.alive_at(theta))
            .filter_map(|v| v.position(theta))
            .collect()
    }
}

/// Builds the vines of `g` from one diagram per arc between critical directions
/// and stitches them across each critical direction.
///
/// At a critical direction the arcs on either side are joined first by equal
/// (birth, death) vertices, then by equal birth vertex, then by position.
/// Joined limits must agree; unjoined limits must lie on the diagonal. Any
/// other outcome, or a vine wrapping more than once, means nontrivial
/// monodromy.
pub fn compute_vines<T: Scalar>(g: &EmbeddedGraph<T>) -> Result<PhtVineyard<T>, PhtError> {
    g.check_star_shaped()?;
    let crit = critical_directions(g)?;
    let k = crit.len();
    let coords = |v: usize| g.vertices()[v];
    if k == 0 {
        return Ok(PhtVineyard {
            critical: crit,
            essential: vec![EssentialPiece {
                t0: T::zero(),
                t1: T::two_pi(),
                vertex: 0,
                coords: coords(0),
            }],
            finite_vines: Vec::new(),
        });
    }
    let arc_end = |i: usize| if i + 1 < k { crit[i + 1] } else { crit[0] + T::two_pi() };
    let diagrams: Vec<_> = (0..k)
        .map(|i| lower_star_diagram(g, (crit[i] + arc_end(i)) * T::half()))
        .collect();
    let tol = T::lit(STITCH_TOL) * (T::one() + g.scale());

    // next[i][p]: continuation of point p of arc i on arc i+1
    let mut next: Vec<Vec<Option<usize>>> = diagrams
        .iter()
        .map(|d| vec![None; d.finite_points.len()])
        .collect();
    let mut has_prev: Vec<Vec<bool>> = diagrams
        .iter()
        .map(|d| vec![false; d.finite_points.len()])
        .collect();
    for j in 0..k {
        let theta = crit[j];
        let li = (j + k - 1) % k;
        let left = &diagrams[li].finite_points;
        let right = &diagrams[j].finite_points;
        let at = |p: &super::FinitePoint<T>| (g.height(p.birth_vertex, theta), g.height(p.death_vertex, theta));
        let lpos: Vec<(T, T)> = left.iter().map(at).collect();
        let rpos: Vec<(T, T)> = right.iter().map(at).collect();
        let gap = |a: (T, T), b: (T, T)| (a.0 - b.0).abs().max((a.1 - b.1).abs());
        let on_diag = |a: (T, T)| (a.1 - a.0).abs() <= tol;
        let mut used = vec![false; right.len()];
        let mut link = vec![None; left.len()];
        let passes: [&dyn Fn(usize, usize) -> bool; 2] = [
            &|a, b| {
                left[a].birth_vertex == right[b].birth_vertex
                    && left[a].death_vertex == right[b].death_vertex
            },
            &|a, b| left[a].birth_vertex == right[b].birth_vertex,
        ];
        for pass in passes {
            for a in 0..left.len() {
                if link[a].is_some() {
                    continue;
                }
                if let Some(b) = (0..right.len()).find(|&b| !used[b] && pass(a, b)) {
                    if gap(lpos[a], rpos[b]) > tol {
                        return Err(PhtError::Monodromy {
                            angle: theta.to_f64().unwrap_or(f64::NAN),
                            reason: format!(
                                "point born at vertex {} jumps across the critical direction",
                                left[a].birth_vertex
                            ),
                        });
                    }
                    used[b] = true;
                    link[a] = Some(b);
                }
            }
        }
        for a in 0..left.len() {
            if link[a].is_some() || on_diag(lpos[a]) {
                continue;
            }
            let best = (0..right.len())
                .filter(|&b| !used[b] && !on_diag(rpos[b]))
                .min_by(|&x, &y| {
                    gap(lpos[a], rpos[x])
                        .partial_cmp(&gap(lpos[a], rpos[y]))
                        .expect("finite")
                });
            match best {
                Some(b) if gap(lpos[a], rpos[b]) <= tol => {
                    used[b] = true;
                    link[a] = Some(b);
                }
                _ => {
                    return Err(PhtError::Monodromy {
                        angle: theta.to_f64().unwrap_or(f64::NAN),
                        reason: format!(
                            "point born at vertex {} ends off the diagonal",
                            left[a].birth_vertex
                        ),
                    })
                }
            }
        }
        if let Some(b) = (0..right.len()).find(|&b| !used[b] && !on_diag(rpos[b])) {
            return Err(PhtError::Monodromy {
                angle: theta.to_f64().unwrap_or(f64::NAN),
                reason: format!(
                    "point born at vertex {} starts off the diagonal",
                    right[b].birth_vertex
                ),
            });
        }
        for (a, l) in link.into_iter().enumerate() {
            next[li][a] = l;
            if let Some(b) = l {
                has_prev[j][b] = true;
            }
        }
    }

    let monodromy = |reason: &str| PhtError::Monodromy {
        angle: f64::NAN,
        reason: reason.to_string(),
    };
    let mut visited: Vec<Vec<bool>> = next.iter().map(|v| vec![false; v.len()]).collect();
    let mut vines = Vec::new();
    let make_arc = |i: usize, p: usize, offset: T| {
        let fp = diagrams[i].finite_points[p];
        VineArc {
            t0: crit[i] + offset,
            t1: arc_end(i) + offset,
            birth_vertex: fp.birth_vertex,
            death_vertex: fp.death_vertex,
            birth_coords: coords(fp.birth_vertex),
            death_coords: coords(fp.death_vertex),
        }
    };
    let follow = |i0: usize, p0: usize, visited: &mut Vec<Vec<bool>>| -> Result<(Vec<VineArc<T>>, bool), PhtError> {
        let mut arcs = Vec::new();
        let (mut i, mut p) = (i0, p0);
        let mut offset = T::zero();
        loop {
            if visited[i][p] {
                return if i == i0 && p == p0 && arcs.len() == k {
                    Ok((arcs, true))
                } else {
                    Err(monodromy("vine revisits an arc"))
                };
            }
            visited[i][p] = true;
            arcs.push(make_arc(i, p, offset));
            if arcs.len() > k {
                return Err(monodromy("vine wraps more than once"));
            }
            match next[i][p] {
                Some(q) => {
                    if i + 1 == k {
                        offset = offset + T::two_pi();
                    }
                    i = (i + 1) % k;
                    p = q;
                }
                None => return Ok((arcs, false)),
            }
        }
    };
    for i in 0..k {
        for p in 0..next[i].len() {
            if !has_prev[i][p] {
                let (arcs, closed) = follow(i, p, &mut visited)?;
                vines.push((arcs, closed));
            }
        }
    }
    for i in 0..k {
        for p in 0..next[i].len() {
            if !visited[i][p] {
                let (arcs, closed) = follow(i, p, &mut visited)?;
                if !closed {
                    return Err(monodromy("vine without a start"));
                }
                vines.push((arcs, closed));
            }
        }
    }
    let finite_vines = vines
        .into_iter()
        .map(|(arcs, closed)| Vine {
            birth_vertex: arcs[0].birth_vertex,
            start: arcs[0].t0,
            end: arcs.last().expect("nonempty").t1,
            closed,
            arcs,
        })
        .collect();

    let mut essential: Vec<EssentialPiece<T>> = Vec::new();
    let mut push = |t0: T, t1: T, v: usize| {
        if !(t1 > t0) {
            return;
        }
        match essential.last_mut() {
            Some(last) if last.vertex == v && last.t1 == t0 => last.t1 = t1,
            _ => essential.push(EssentialPiece {
                t0,
                t1,
                vertex: v,
                coords: coords(v),
            }),
        }
    };
    let wrap_vertex = diagrams[k - 1].essential_vertex;
    push(T::zero(), crit[0], wrap_vertex);
    for i in 0..k {
        let v = diagrams[i].essential_vertex;
        push(crit[i], arc_end(i).min(T::two_pi()), v);
    }

    Ok(PhtVineyard {
        critical: crit,
        essential,
        finite_vines,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pht::{extremal_vertices, lower_star_diagram};

    fn v_shape() -> EmbeddedGraph<f64> {
        EmbeddedGraph::new(vec![[0.0, 0.0], [1.0, 1.0], [2.0, 0.0]], vec![[0, 1], [1, 2]], None)
            .unwrap()
    }

    #[test]
    fn single_edge_essential_only() {
        let g = EmbeddedGraph::new(vec![[0.0, 0.0], [1.0, 0.0]], vec![[0, 1]], None).unwrap();
        let vy = compute_vines(&g).unwrap();
        assert!(vy.finite_vines.is_empty());
        for i in 0..50 {
            let t = i as f64 * 0.13;
            assert!((vy.essential_birth(t) - 0f64.min(t.cos())).abs() < 1e-15);
        }
    }

    #[test]
    fn v_shape_vines_touch_diagonal_only_at_ends() {
        let g = v_shape();
        let vy = compute_vines(&g).unwrap();
        let ext = extremal_vertices(&g);
        assert!(!vy.finite_vines.is_empty());
        assert!(vy.finite_vines.len() <= ext.len());
        for vine in &vy.finite_vines {
            let (s, e) = vine.interval();
            let start = vine.position(s).unwrap();
            assert!((start.0 - start.1).abs() < 1e-12);
            let end = vine.position(e).unwrap();
            assert!((end.0 - end.1).abs() < 1e-12);
            for i in 1..100 {
                let t = s + (e - s) * i as f64 / 100.0;
                let (b, d) = vine.position(t).unwrap();
                assert!(d - b > 1e-9, "touches at {t}");
            }
        }
    }

    #[test]
    fn v_shape_matches_direct_diagrams() {
        let g = v_shape();
        let vy = compute_vines(&g).unwrap();
        for i in 0..97 {
            let t = 0.01 + i as f64 * 0.0645;
            let mut direct: Vec<(f64, f64)> = lower_star_diagram(&g, t)
                .finite_points
                .iter()
                .map(|p| (p.birth, p.death))
                .collect();
            let mut vines = vy.points_at(t);
            direct.sort_by(|a, b| a.partial_cmp(b).unwrap());
            vines.sort_by(|a, b| a.partial_cmp(b).unwrap());
            assert_eq!(direct.len(), vines.len(), "at {t}");
            for (a, b) in direct.iter().zip(&vines) {
                assert!((a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12);
            }
            let e = lower_star_diagram(&g, t).essential_birth;
            assert!((vy.essential_birth(t) - e).abs() < 1e-12);
        }
    }

    #[test]
    fn node_pieces_tile_and_stay_continuous() {
        let vy = compute_vines(&v_shape()).unwrap();
        for vine in &vy.finite_vines {
            let ps = vine.node_pieces();
            assert!(ps[0].t0.abs() < 1e-15);
            assert!((ps.last().unwrap().t1 - std::f64::consts::TAU).abs() < 1e-12);
            for w in ps.windows(2) {
                assert!((w[0].t1 - w[1].t0).abs() < 1e-12);
                let t = w[1].t0;
                assert!((w[0].birth.eval(t) - w[1].birth.eval(t)).abs() < 1e-9);
                assert!((w[0].death.eval(t) - w[1].death.eval(t)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn two_point_sinusoid() {
        let s = through_two_points(0.2f64, 1.0, 1.5, -0.5);
        assert!((s.eval(0.2) - 1.0).abs() < 1e-12);
        assert!((s.eval(1.5) + 0.5).abs() < 1e-12);
    }
}
