mod common;

use kinetic_hourglass::kinetic_pq::Flavor;
use kinetic_hourglass::pht::{compute_vines, integrated_distance, sampled_oracle};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn exact_vs_sampled_on_stars() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for case in 0..20 {
        let a = common::random_generic_star(&mut rng, 10);
        let b = common::random_generic_star(&mut rng, 10);
        let va = compute_vines(&a).unwrap();
        let vb = compute_vines(&b).unwrap();
        let d = integrated_distance(&a, &b, Flavor::Heap).unwrap();
        let s = sampled_oracle(&a, &b, 4000).unwrap();
        println!(
            "case {case}: vines {} {} exact {} sampled {} closure {:e} counters {:?}",
            va.finite_vines.len(),
            vb.finite_vines.len(),
            d.value,
            s,
            d.closure_gap,
            d.counters
        );
        assert_eq!(d.counters.resyncs, 0, "case {case}");
        assert!(d.closure_gap <= 1e-9, "case {case}");
        assert!((d.value - s).abs() / d.value.max(1e-12) < 1e-3, "case {case}");
    }
}
