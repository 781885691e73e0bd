use super::vines::NodePiece;
use super::{compute_vines, lower_star_diagram, EmbeddedGraph, PhtError, PhtVineyard, Vine};
use crate::curves::{integrate, upper_envelope, CostForm, CostPiece, Domain, FlightPlan, Sinusoid};
use crate::hourglass::{BottleneckTrajectory, EventCounters, Hourglass};
use crate::kinetic_pq::Flavor;
use crate::matching::{bottleneck_distance, BipartiteGraph};
use crate::scalar::Scalar;

/// Tolerance for the wraparound check of a full-turn run.
pub const CLOSURE_TOL: f64 = 1e-9;

/// Breakpoints of the common refinement of two tilings of `[0, 2π)`.
fn refine<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    let mut cuts: Vec<T> = a.iter().chain(b).copied().collect();
    cuts.sort_by(|x, y| x.partial_cmp(y).expect("finite angle"));
    cuts.dedup_by(|x, y| (*x - *y).abs() <= T::time_eps());
    cuts
}

fn starts<T: Scalar>(pieces: &[NodePiece<T>]) -> Vec<T> {
    pieces.iter().map(|p| p.t0).chain([T::two_pi()]).collect()
}

fn piece_at<T: Scalar>(pieces: &[NodePiece<T>], t: T) -> &NodePiece<T> {
    let idx = pieces.partition_point(|p| p.t0 <= t).saturating_sub(1);
    &pieces[idx]
}

fn circle_plan<T: Scalar>(pieces: Vec<CostPiece<T>>) -> Result<FlightPlan<T>, PhtError> {
    let mut merged: Vec<CostPiece<T>> = Vec::with_capacity(pieces.len());
    for p in pieces {
        match merged.last_mut() {
            Some(last) if last.form == p.form => last.t1 = p.t1,
            _ => merged.push(p),
        }
    }
    Ok(FlightPlan::new(Domain::Circle, merged)?)
}

/// `max(|b_u − b_v|, |d_u − d_v|)` over the full turn.
fn linf_plan<T: Scalar>(u: &[NodePiece<T>], v: &[NodePiece<T>]) -> Result<FlightPlan<T>, PhtError> {
    let cuts = refine(&starts(u), &starts(v));
    let mut out = Vec::with_capacity(cuts.len());
    for w in cuts.windows(2) {
        let mid = (w[0] + w[1]) * T::half();
        let (pu, pv) = (piece_at(u, mid), piece_at(v, mid));
        let form = CostForm::max_abs2(pu.birth.sub(&pv.birth), pu.death.sub(&pv.death));
        out.push(CostPiece::new(w[0], w[1], form));
    }
    circle_plan(out)
}

/// Distance from a vine node to its own diagonal projection, `(d − b)/2`.
fn diagonal_plan<T: Scalar>(u: &[NodePiece<T>]) -> Result<FlightPlan<T>, PhtError> {
    let out = u
        .iter()
        .map(|p| {
            let half = p.death.sub(&p.birth).scale(T::half());
            let form = if half.amplitude() <= T::zero_tol() {
                CostForm::Zero
            } else {
                CostForm::abs_sinusoid(half)
            };
            CostPiece::new(p.t0, p.t1, form)
        })
        .collect();
    circle_plan(out)
}

/// Kinetic bipartite graph between the finite vines of two vineyards.
///
/// Same layout as [`diagram_reduction`](crate::matching::diagram_reduction):
/// left = A's vines then B's projections, right = B's vines then A's
/// projections. Dead vines sit on the diagonal, so every weight is a
/// continuous plan over the circle.
pub fn pht_bipartite_graph<T: Scalar>(
    a: &PhtVineyard<T>,
    b: &PhtVineyard<T>,
) -> Result<BipartiteGraph<FlightPlan<T>>, PhtError> {
    let na: Vec<Vec<NodePiece<T>>> = a.finite_vines.iter().map(Vine::node_pieces).collect();
    let nb: Vec<Vec<NodePiece<T>>> = b.finite_vines.iter().map(Vine::node_pieces).collect();
    let (nx, ny) = (na.len(), nb.len());
    let n = nx + ny;
    let zero = FlightPlan::single(Domain::Circle, CostForm::Zero)?;
    let mut g = BipartiteGraph::new(n, n);
    for (i, pu) in na.iter().enumerate() {
        for (j, pv) in nb.iter().enumerate() {
            g.add_edge(i, j, linf_plan(pu, pv)?)?;
        }
        g.add_edge(i, ny + i, diagonal_plan(pu)?)?;
    }
    for (j, pv) in nb.iter().enumerate() {
        g.add_edge(nx + j, j, diagonal_plan(pv)?)?;
        for i in 0..nx {
            g.add_edge(nx + j, ny + i, zero.clone())?;
        }
    }
    Ok(g)
}

/// `|γ̃₁ − γ̃₂|` as pieces on `[0, 2π)`.
pub fn essential_gap<T: Scalar>(a: &PhtVineyard<T>, b: &PhtVineyard<T>) -> Vec<CostPiece<T>> {
    let sa: Vec<T> = a.essential.iter().map(|p| p.t0).chain([T::two_pi()]).collect();
    let sb: Vec<T> = b.essential.iter().map(|p| p.t0).chain([T::two_pi()]).collect();
    let cuts = refine(&sa, &sb);
    let pick = |v: &PhtVineyard<T>, t: T| -> Sinusoid<T> {
        let idx = v.essential.partition_point(|p| p.t0 <= t).saturating_sub(1);
        v.essential[idx].height()
    };
    cuts.windows(2)
        .map(|w| {
            let mid = (w[0] + w[1]) * T::half();
            let diff = pick(a, mid).sub(&pick(b, mid));
            let form = if diff.amplitude() <= T::zero_tol() {
                CostForm::Zero
            } else {
                CostForm::abs_sinusoid(diff)
            };
            CostPiece::new(w[0], w[1], form)
        })
        .collect()
}

/// Result of an exact integrated-distance run.
#[derive(Debug, Clone)]
pub struct PhtDistance<T: Scalar> {
    pub value: T,
    /// `d(θ)` on `[0, 2π)`.
    pub pieces: Vec<CostPiece<T>>,
    /// Bottleneck over the finite vines alone.
    pub finite: BottleneckTrajectory<T>,
    pub essential: Vec<CostPiece<T>>,
    pub counters: EventCounters,
    pub vines: (usize, usize),
    /// `|d(2π⁻) − d(0⁺)|`.
    pub closure_gap: T,
}

impl<T: Scalar> PhtDistance<T> {
    pub fn value_at(&self, theta: T) -> T {
        let idx = self
            .pieces
            .partition_point(|p| p.t0 <= theta)
            .saturating_sub(1);
        self.pieces[idx].form.eval(theta)
    }
}

/// Exact `∫₀^{2π} d(θ) dθ` between the PHTs of two graphs.
pub fn integrated_distance<T: Scalar>(
    k1: &EmbeddedGraph<T>,
    k2: &EmbeddedGraph<T>,
    flavor: Flavor,
) -> Result<PhtDistance<T>, PhtError> {
    let a = compute_vines(k1)?;
    let b = compute_vines(k2)?;
    distance_between(&a, &b, flavor)
}

/// Same as [`integrated_distance`] for precomputed vineyards.
pub fn distance_between<T: Scalar>(
    a: &PhtVineyard<T>,
    b: &PhtVineyard<T>,
    flavor: Flavor,
) -> Result<PhtDistance<T>, PhtError> {
    let graph = pht_bipartite_graph(a, b)?;
    let mut hg = Hourglass::new(graph, T::zero(), flavor)?;
    let finite = hg.run(T::two_pi()).clone();
    let essential = essential_gap(a, b);
    let pieces = upper_envelope(&finite.pieces(), &essential);
    let value = integrate(&pieces);
    let first = pieces.first().map_or(T::zero(), |p| p.form.eval(p.t0));
    let last = pieces.last().map_or(T::zero(), |p| p.form.eval(p.t1));
    let closure_gap = (last - first).abs();
    if closure_gap > T::lit(CLOSURE_TOL) * (T::one() + first.abs()) {
        log::warn!("distance does not close up after one turn: gap {}", closure_gap);
    }
    Ok(PhtDistance {
        value,
        pieces,
        finite,
        essential,
        counters: hg.counters(),
        vines: (a.finite_vines.len(), b.finite_vines.len()),
        closure_gap,
    })
}

/// Bottleneck distance between the two direction diagrams at `θ`, essential
/// classes included.
pub fn direction_distance<T: Scalar>(
    k1: &EmbeddedGraph<T>,
    k2: &EmbeddedGraph<T>,
    theta: T,
) -> Result<T, PhtError> {
    let (d1, d2) = (lower_star_diagram(k1, theta), lower_star_diagram(k2, theta));
    let finite = bottleneck_distance(&d1.points(), &d2.points())?;
    Ok(finite.max((d1.essential_birth - d2.essential_birth).abs()))
}

/// Midpoint Riemann sum of the per-direction distance over `samples` directions
/// `θ_i = (i + ½)·2π/samples`.
pub fn sampled_oracle<T: Scalar>(
    k1: &EmbeddedGraph<T>,
    k2: &EmbeddedGraph<T>,
    samples: usize,
) -> Result<T, PhtError> {
    if samples < 4 {
        return Err(PhtError::TooFewSamples(samples));
    }
    let step = T::two_pi() / T::lit(samples as f64);
    let mut total = T::zero();
    for i in 0..samples {
        let theta = (T::lit(i as f64) + T::half()) * step;
        total = total + direction_distance(k1, k2, theta)?;
    }
    Ok(total * step)
}
