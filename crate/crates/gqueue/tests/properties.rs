//! Property tests over randomly generated stable models.

use gqueue::testkit::{random_stable_params, TestRng};
use gqueue::*;
use num_complex::Complex64;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Multiplying every rate by a common factor rescales time only; the
    /// stationary laws are dimensionless and must not move.
    #[test]
    fn time_rescaling_leaves_laws_unchanged(seed in any::<u64>(), kappa in 0.2f64..8.0) {
        let mut rng = TestRng::new(seed);
        let params = random_stable_params(&mut rng, 6, false);
        let scaled_ia = match &params.inter_arrival {
            InterArrivalModel::Exponential { rate } =>
                InterArrivalModel::exponential(rate * kappa).unwrap(),
            InterArrivalModel::Erlang { phases, phase_rate } =>
                InterArrivalModel::erlang_per_phase(*phases, phase_rate * kappa).unwrap(),
            InterArrivalModel::Deterministic { value } =>
                InterArrivalModel::deterministic(value / kappa).unwrap(),
            InterArrivalModel::Hyperexponential { weights, rates } =>
                InterArrivalModel::hyperexponential(
                    weights.clone(),
                    rates.iter().map(|r| r * kappa).collect(),
                ).unwrap(),
        };
        let scaled = ModelParams::new(
            scaled_ia,
            params.batch.clone(),
            params.mu * kappa,
            params.eta * kappa,
            params.delta * kappa,
        ).unwrap();
        let base = solve(&params).unwrap();
        let moved = solve(&scaled).unwrap();
        for n in 0..150 {
            prop_assert!((base.prearrival_pmf(n) - moved.prearrival_pmf(n)).abs() < 1e-10);
            prop_assert!((base.arbitrary_pmf(n) - moved.arbitrary_pmf(n)).abs() < 1e-10);
        }
    }

    /// Root-set postconditions on arbitrary stable models.
    #[test]
    fn root_sets_are_interior_conjugate_and_sized(seed in any::<u64>()) {
        let mut rng = TestRng::new(seed);
        let params = random_stable_params(&mut rng, 8, false);
        let roots = find_roots(&params).unwrap();
        prop_assert_eq!(roots.len(), params.batch.max_size());
        for r in &roots.roots {
            prop_assert!(r.norm() < 1.0 - 1e-9);
            prop_assert!(char_fn(&params, *r).unwrap().norm() < 1e-9);
            if r.im != 0.0 {
                prop_assert!(roots.roots.iter().any(|w| *w == r.conj()));
            }
        }
        prop_assert!(roots.multiplicity_gap >= 1e-7);
    }

    /// Transform values on the positive real axis are probabilities' Laplace
    /// ordinates: inside (0, 1], decreasing.
    #[test]
    fn lst_is_decreasing_on_the_real_axis(seed in any::<u64>()) {
        let mut rng = TestRng::new(seed);
        let params = random_stable_params(&mut rng, 4, false);
        let model = &params.inter_arrival;
        let mut prev = 1.0f64;
        for k in 0..40 {
            let s = 0.5 * (k + 1) as f64;
            let v = model.lst(Complex64::new(s, 0.0)).unwrap();
            prop_assert!(v.im.abs() < 1e-14);
            prop_assert!(v.re > 0.0 && v.re <= 1.0);
            prop_assert!(v.re <= prev + 1e-14);
            prev = v.re;
        }
    }

    /// Sparse batch construction never panics and always yields a proper law.
    #[test]
    fn sparse_batch_construction_is_total(pairs in proptest::collection::vec(
        (1usize..=15, 0.0f64..1.0), 1..8))
    {
        if let Ok(batch) = BatchSizeDistribution::from_sparse(&pairs) {
            let total: f64 = batch.probs().iter().sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
            prop_assert!(*batch.probs().last().unwrap() > 0.0);
            prop_assert!(batch.mean() >= 1.0);
            prop_assert!(batch.mean() <= batch.max_size() as f64);
        }
    }
}

#[test]
fn normalization_holds_across_families() {
    let mut rng = TestRng::new(7);
    for _ in 0..20 {
        let params = random_stable_params(&mut rng, 8, false);
        let dist = solve(&params).unwrap();
        let sol = dist.solution();
        let pre: Complex64 = sol
            .constants
            .iter()
            .zip(&sol.roots.roots)
            .map(|(c, r)| c / (1.0 - r))
            .sum();
        assert!((pre.re / sol.lambda - 1.0).abs() < 1e-10);
        let head: f64 = (0..params.batch.max_size())
            .map(|n| dist.arbitrary_pmf(n))
            .sum();
        let arb = head + tail_mass(&dist, params.batch.max_size());
        assert!((arb - 1.0).abs() < 1e-10, "arbitrary mass {arb}");
    }
}

fn tail_mass(dist: &SystemDistribution, from: usize) -> f64 {
    // Geometric continuation of the arbitrary-epoch law.
    let mut total = 0.0;
    let mut n = from;
    let cut = dist.reporting_truncation(1e-16).max(from + 1);
    while n <= cut {
        total += dist.arbitrary_pmf(n);
        n += 1;
    }
    let r = dist.tail_decay();
    total + dist.arbitrary_pmf(cut + 1) / (1.0 - r)
}
