#![allow(dead_code)]

use kinetic_hourglass::curves::FlightPlan;
use kinetic_hourglass::matching::BipartiteGraph;
use rand::Rng;

/// Random piecewise-linear plan on `[0, end]` with `knots` interior breakpoints.
pub fn random_pl_plan<R: Rng>(rng: &mut R, end: f64, knots: usize) -> FlightPlan<f64> {
    let mut ts: Vec<f64> = (0..knots).map(|_| rng.gen_range(0.0..end)).collect();
    ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ts.dedup();
    let mut pts = vec![(0.0, rng.gen_range(0.0..10.0))];
    for t in ts {
        if t > 1e-6 && t < end - 1e-6 {
            pts.push((t, rng.gen_range(0.0..10.0)));
        }
    }
    pts.push((end, rng.gen_range(0.0..10.0)));
    FlightPlan::piecewise_linear(&pts).unwrap()
}

/// Random graph with a planted perfect matching and at most `m` edges.
pub fn random_kinetic_graph<R: Rng>(
    rng: &mut R,
    n: usize,
    m: usize,
    end: f64,
) -> BipartiteGraph<FlightPlan<f64>> {
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    for (l, &r) in perm.iter().enumerate() {
        pairs.push((l, r));
    }
    let mut tries = 0;
    while pairs.len() < m && tries < 10 * m {
        tries += 1;
        let p = (rng.gen_range(0..n), rng.gen_range(0..n));
        if !pairs.contains(&p) {
            pairs.push(p);
        }
    }
    // shuffle so the planted matching does not always get the low ids
    for i in (1..pairs.len()).rev() {
        pairs.swap(i, rng.gen_range(0..=i));
    }
    let knots = 4;
    BipartiteGraph::from_edges(
        n,
        n,
        pairs
            .into_iter()
            .map(|(l, r)| (l, r, random_pl_plan(rng, end, knots))),
    )
    .unwrap()
}

use kinetic_hourglass::pht::EmbeddedGraph;

/// Star tree: a center vertex plus leaves at random angles and radii, some
/// rays subdivided by an intermediate vertex. At most `max_vertices` vertices.
pub fn random_star<R: Rng>(rng: &mut R, max_vertices: usize) -> EmbeddedGraph<f64> {
    let c = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
    let mut vertices = vec![c];
    let mut edges = Vec::new();
    let rays = rng.gen_range(1..=(max_vertices - 1).min(6));
    for _ in 0..rays {
        let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let r: f64 = rng.gen_range(0.3..2.0);
        let tip = [c[0] + r * phi.cos(), c[1] + r * phi.sin()];
        if vertices.len() + 2 <= max_vertices && rng.gen_bool(0.3) {
            let f: f64 = rng.gen_range(0.3..0.7);
            let mid = [c[0] + f * r * phi.cos(), c[1] + f * r * phi.sin()];
            vertices.push(mid);
            edges.push([0, vertices.len() - 1]);
            vertices.push(tip);
            edges.push([vertices.len() - 2, vertices.len() - 1]);
        } else if vertices.len() < max_vertices {
            vertices.push(tip);
            edges.push([0, vertices.len() - 1]);
        }
    }
    EmbeddedGraph::new(vertices, edges, Some(c)).unwrap()
}

/// Random star graph that passes the genericity check.
pub fn random_generic_star<R: Rng>(rng: &mut R, max_vertices: usize) -> EmbeddedGraph<f64> {
    loop {
        let g = random_star(rng, max_vertices);
        if kinetic_hourglass::pht::critical_directions(&g).is_ok() {
            return g;
        }
    }
}

/// Moves the center and every ray tip of a [`random_star`] graph by up to
/// `scale` per coordinate; subdivision vertices keep their fraction along the
/// new ray so the result stays star-shaped with the same abstract complex.
pub fn perturb_star<R: Rng>(rng: &mut R, g: &EmbeddedGraph<f64>, scale: f64) -> EmbeddedGraph<f64> {
    let old = g.vertices();
    let mut jitter = || [rng.gen_range(-scale..scale), rng.gen_range(-scale..scale)];
    let mut new: Vec<[f64; 2]> = old.iter().map(|p| {
        let d = jitter();
        [p[0] + d[0], p[1] + d[1]]
    }).collect();
    let (c0, c1) = (old[0], new[0]);
    for v in 1..old.len() {
        if g.neighbors(v).len() != 2 {
            continue;
        }
        let tip = *g.neighbors(v).iter().find(|&&u| u != 0).unwrap();
        let f = (old[v][0] - c0[0]).hypot(old[v][1] - c0[1]) / (old[tip][0] - c0[0]).hypot(old[tip][1] - c0[1]);
        new[v] = [c1[0] + f * (new[tip][0] - c1[0]), c1[1] + f * (new[tip][1] - c1[1])];
    }
    EmbeddedGraph::new(new.clone(), g.edges().to_vec(), Some(new[0])).unwrap()
}
