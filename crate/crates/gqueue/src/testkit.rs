//! Deterministic random-model generation for the test and acceptance suites.

use crate::arrival::{BatchSizeDistribution, InterArrivalModel};
use crate::model::ModelParams;

/// SplitMix64; a tiny self-contained generator keeps the suites reproducible
/// without coupling them to the simulator's streams.
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        Self(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn int(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}

/// A random batch law with support up to `max_b` and positive mass at its
/// maximum size.
pub fn random_batch(rng: &mut TestRng, max_b: usize) -> BatchSizeDistribution {
    let b = 1 + rng.int(max_b);
    let mut probs: Vec<f64> = (0..b).map(|_| rng.uniform().max(1e-3)).collect();
    if probs[b - 1] < 0.05 {
        probs[b - 1] += 0.05;
    }
    let total: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= total;
    }
    // Exact renormalization of the largest entry absorbs rounding.
    let drift: f64 = 1.0 - probs.iter().sum::<f64>();
    probs[b - 1] += drift;
    BatchSizeDistribution::new(probs).expect("generated law is valid")
}

/// A random stable parameter set across the supported families.
///
/// A third of the draws set `delta = 0` with a comfortable drift margin; the
/// rest rely on disasters for stability. Rates stay within ranges where the
/// closed forms are numerically meaningful (root moduli above ~1e-3).
pub fn random_stable_params(
    rng: &mut TestRng,
    max_b: usize,
    exponential_only: bool,
) -> ModelParams {
    let batch = random_batch(rng, max_b);
    let lambda = rng.range(0.5, 10.0);
    let inter_arrival = if exponential_only {
        InterArrivalModel::exponential(lambda).unwrap()
    } else {
        match rng.int(4) {
            0 => InterArrivalModel::exponential(lambda).unwrap(),
            1 => InterArrivalModel::erlang(1 + rng.int(5) as u32, lambda).unwrap(),
            2 => InterArrivalModel::deterministic(1.0 / lambda).unwrap(),
            _ => {
                let q = rng.range(0.2, 0.8);
                let r1 = rng.range(0.5, 2.0);
                let r2 = rng.range(2.0, 8.0);
                let mean = q / r1 + (1.0 - q) / r2;
                let scale = mean * lambda;
                InterArrivalModel::hyperexponential(vec![q, 1.0 - q], vec![r1 * scale, r2 * scale])
                    .unwrap()
            }
        }
    };
    let load = lambda * batch.mean();
    let mut mu = rng.range(0.3, 2.5) * load;
    let eta = rng.range(0.0, 0.5) * mu;
    let delta = if rng.int(3) == 0 {
        // Disaster-free draw: enforce the drift condition with margin.
        let needed = load / 0.85;
        if mu + eta < needed {
            mu = needed - eta;
        }
        0.0
    } else {
        rng.range(0.2, 5.0)
    };
    ModelParams::new(inter_arrival, batch, mu, eta, delta).expect("generated params are valid")
}
