//! Inter-arrival time laws and batch-size distributions.
//!
//! Batches arrive according to a renewal process whose inter-arrival law is
//! represented by its Laplace-Stieltjes transform, evaluated at complex
//! arguments. Only transforms (and their first two derivatives) are needed
//! anywhere in the solver; densities and CDFs are never evaluated.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest supported batch size. The constants system is Vandermonde-like and
/// its accuracy degrades past roughly 30; beyond 100 it is refused outright.
pub const MAX_BATCH: usize = 100;

/// Proximity threshold (relative) for flagging an evaluation at a rational
/// transform's pole.
const POLE_TOL: f64 = 1e-12;

/// A renewal inter-arrival time distribution.
///
/// Each family exposes its transform `A*(s)` in closed form. The batch
/// arrival rate is the reciprocal of the mean inter-arrival time.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum InterArrivalModel {
    /// Exponential with the given rate: `A*(s) = rate / (rate + s)`.
    Exponential { rate: f64 },
    /// Erlang with `phases` stages, each at `phase_rate`:
    /// `A*(s) = (phase_rate / (phase_rate + s))^phases`.
    Erlang { phases: u32, phase_rate: f64 },
    /// A constant inter-arrival time: `A*(s) = exp(-s * value)`.
    Deterministic { value: f64 },
    /// Mixture of exponentials: `A*(s) = sum_i weights[i] * rates[i] / (rates[i] + s)`.
    Hyperexponential { weights: Vec<f64>, rates: Vec<f64> },
}

impl InterArrivalModel {
    pub fn exponential(rate: f64) -> Result<Self> {
        require_positive(rate, "exponential rate")?;
        Ok(Self::Exponential { rate })
    }

    /// Erlang parameterized by the overall batch arrival rate; the per-phase
    /// rate becomes `phases * rate` so the mean stays `1 / rate`.
    pub fn erlang(phases: u32, rate: f64) -> Result<Self> {
        require_positive(rate, "erlang rate")?;
        Self::erlang_per_phase(phases, phases as f64 * rate)
    }

    /// Erlang parameterized by the rate of each individual phase; the mean is
    /// `phases / phase_rate`.
    pub fn erlang_per_phase(phases: u32, phase_rate: f64) -> Result<Self> {
        require_positive(phase_rate, "erlang phase rate")?;
        if phases == 0 || phases > 100 {
            return Err(Error::InvalidParameter(format!(
                "erlang phase count must be in 1..=100, got {phases}"
            )));
        }
        Ok(Self::Erlang { phases, phase_rate })
    }

    pub fn deterministic(value: f64) -> Result<Self> {
        require_positive(value, "deterministic inter-arrival time")?;
        Ok(Self::Deterministic { value })
    }

    pub fn hyperexponential(weights: Vec<f64>, rates: Vec<f64>) -> Result<Self> {
        if weights.is_empty() || weights.len() != rates.len() {
            return Err(Error::InvalidParameter(
                "hyperexponential weights and rates must be non-empty and equal length".into(),
            ));
        }
        if weights.len() > 16 {
            return Err(Error::InvalidParameter(
                "hyperexponential supports at most 16 branches".into(),
            ));
        }
        for &w in &weights {
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "hyperexponential weight {w} must be positive and finite"
                )));
            }
        }
        for &r in &rates {
            require_positive(r, "hyperexponential rate")?;
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "hyperexponential weights sum to {total}, expected 1 within 1e-12"
            )));
        }
        Ok(Self::Hyperexponential { weights, rates })
    }

    /// Mean inter-arrival time.
    pub fn mean(&self) -> f64 {
        match self {
            Self::Exponential { rate } => 1.0 / rate,
            Self::Erlang { phases, phase_rate } => *phases as f64 / phase_rate,
            Self::Deterministic { value } => *value,
            Self::Hyperexponential { weights, rates } => {
                weights.iter().zip(rates).map(|(w, r)| w / r).sum()
            }
        }
    }

    /// Batch arrival rate, the reciprocal of the mean inter-arrival time.
    pub fn batch_rate(&self) -> f64 {
        1.0 / self.mean()
    }

    /// Evaluate the transform `A*(s)`.
    pub fn lst(&self, s: Complex64) -> Result<Complex64> {
        match self {
            Self::Exponential { rate } => {
                let den = rate + s;
                if den.norm() < POLE_TOL * rate {
                    return Err(Error::LstPole { s });
                }
                Ok(rate / den)
            }
            Self::Erlang { phases, phase_rate } => {
                let den = phase_rate + s;
                if den.norm() < POLE_TOL * phase_rate {
                    return Err(Error::LstPole { s });
                }
                Ok((phase_rate / den).powu(*phases))
            }
            Self::Deterministic { value } => Ok((-s * *value).exp()),
            Self::Hyperexponential { weights, rates } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (w, r) in weights.iter().zip(rates) {
                    let den = r + s;
                    if den.norm() < POLE_TOL * r {
                        return Err(Error::LstPole { s });
                    }
                    acc += w * r / den;
                }
                Ok(acc)
            }
        }
    }

    /// First or second derivative of the transform. Order 1 at `s = 0`
    /// returns the negated mean.
    pub fn lst_derivative(&self, s: Complex64, order: u32) -> Result<Complex64> {
        if order == 0 || order > 2 {
            return Err(Error::UnsupportedOrder { order });
        }
        match self {
            Self::Exponential { rate } => {
                let den = rate + s;
                if den.norm() < POLE_TOL * rate {
                    return Err(Error::LstPole { s });
                }
                Ok(match order {
                    1 => -rate / (den * den),
                    _ => 2.0 * rate / (den * den * den),
                })
            }
            Self::Erlang { phases, phase_rate } => {
                let k = *phases as f64;
                let den = phase_rate + s;
                if den.norm() < POLE_TOL * phase_rate {
                    return Err(Error::LstPole { s });
                }
                let base = (phase_rate / den).powu(*phases);
                Ok(match order {
                    1 => -k * base / den,
                    _ => k * (k + 1.0) * base / (den * den),
                })
            }
            Self::Deterministic { value } => {
                let a = *value;
                let e = (-s * a).exp();
                Ok(match order {
                    1 => -a * e,
                    _ => a * a * e,
                })
            }
            Self::Hyperexponential { weights, rates } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (w, r) in weights.iter().zip(rates) {
                    let den = r + s;
                    if den.norm() < POLE_TOL * r {
                        return Err(Error::LstPole { s });
                    }
                    acc += match order {
                        1 => -w * r / (den * den),
                        _ => 2.0 * w * r / (den * den * den),
                    };
                }
                Ok(acc)
            }
        }
    }
}

fn require_positive(x: f64, what: &str) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{what} must be positive and finite, got {x}"
        )))
    }
}

/// Batch-size law with finite support `1..=b`, `g_b > 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BatchSizeDistribution {
    /// `probs[i]` is the probability of batch size `i + 1`.
    probs: Vec<f64>,
    mean: f64,
}

impl BatchSizeDistribution {
    /// Construct from a dense vector where `probs[i] = P(X = i + 1)`.
    ///
    /// Rejects a zero probability at the maximum size (trailing zeros must be
    /// stripped by the caller) and mass that does not sum to 1 within 1e-12.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidParameter(
                "batch law has empty support".into(),
            ));
        }
        if probs.len() > MAX_BATCH {
            return Err(Error::InvalidParameter(format!(
                "maximum batch size {} exceeds the supported cap {MAX_BATCH}",
                probs.len()
            )));
        }
        for (i, &p) in probs.iter().enumerate() {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "batch probability g_{} = {p} must be finite and nonnegative",
                    i + 1
                )));
            }
        }
        if *probs.last().unwrap() <= 0.0 {
            return Err(Error::InvalidParameter(
                "batch law must have positive mass at its maximum size; strip trailing zeros"
                    .into(),
            ));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "batch probabilities sum to {total}, expected 1 within 1e-12"
            )));
        }
        let mean = probs
            .iter()
            .enumerate()
            .map(|(i, &p)| (i + 1) as f64 * p)
            .sum();
        Ok(Self { probs, mean })
    }

    /// Construct from sparse `(size, probability)` pairs.
    ///
    /// The mass must sum to 1 within 1e-9 and is then renormalized exactly;
    /// the highest size with positive mass defines the maximum batch size.
    pub fn from_sparse(pairs: &[(usize, f64)]) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidParameter(
                "batch law has empty support".into(),
            ));
        }
        let mut max_size = 0;
        for &(size, p) in pairs {
            if size == 0 {
                return Err(Error::InvalidParameter(
                    "batch size 0 is not allowed".into(),
                ));
            }
            if size > MAX_BATCH {
                return Err(Error::InvalidParameter(format!(
                    "batch size {size} exceeds the supported cap {MAX_BATCH}"
                )));
            }
            if !p.is_finite() || p < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "batch probability for size {size} is {p}"
                )));
            }
            if p > 0.0 {
                max_size = max_size.max(size);
            }
        }
        if max_size == 0 {
            return Err(Error::InvalidParameter(
                "batch law has no positive mass".into(),
            ));
        }
        let mut probs = vec![0.0; max_size];
        for &(size, p) in pairs {
            if size <= max_size {
                probs[size - 1] += p;
            }
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "batch probabilities sum to {total}, expected 1 within 1e-9"
            )));
        }
        for p in &mut probs {
            *p /= total;
        }
        Self::new(probs)
    }

    /// The law putting all mass on batches of one customer.
    pub fn single() -> Self {
        Self {
            probs: vec![1.0],
            mean: 1.0,
        }
    }

    /// Maximum batch size `b`.
    pub fn max_size(&self) -> usize {
        self.probs.len()
    }

    /// Mean batch size.
    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// `P(X = size)` for `size >= 1`.
    pub fn prob(&self, size: usize) -> f64 {
        if size >= 1 && size <= self.probs.len() {
            self.probs[size - 1]
        } else {
            0.0
        }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Generating function `sum_i g_i z^i` by Horner recurrence.
    pub fn pgf(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &p in self.probs.iter().rev() {
            acc = (acc + p) * z;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn lst_at_zero_is_one() {
        let models = [
            InterArrivalModel::exponential(10.0).unwrap(),
            InterArrivalModel::erlang(4, 10.0).unwrap(),
            InterArrivalModel::deterministic(0.1).unwrap(),
            InterArrivalModel::hyperexponential(vec![0.4, 0.6], vec![20.0, 5.0]).unwrap(),
        ];
        for m in &models {
            let v = m.lst(c(0.0)).unwrap();
            assert!((v - 1.0).norm() < 1e-12, "{m:?}: A*(0) = {v}");
        }
    }

    #[test]
    fn deterministic_lst_closed_form() {
        let m = InterArrivalModel::deterministic(0.1).unwrap();
        let v = m.lst(c(2.0)).unwrap();
        assert!((v.re - (-0.2f64).exp()).abs() < 1e-15);
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn erlang_lst_at_shifted_argument() {
        // s = delta + (mu + eta)(1 - z) with z = 0.5, delta = 2, mu = 10, eta = 5.
        let m = InterArrivalModel::erlang(4, 10.0).unwrap();
        let s = 2.0 + 15.0 * 0.5;
        let v = m.lst(c(s)).unwrap();
        let expect = (40.0f64 / 49.5).powi(4);
        assert!((v.re - expect).abs() < 1e-14, "{} vs {expect}", v.re);
    }

    #[test]
    fn erlang_lst_matches_numerical_integration() {
        // Quadrature of the Erlang-4 pdf against exp(-s t) over a wide window.
        let m = InterArrivalModel::erlang(4, 10.0).unwrap();
        let (k, nu) = (4u32, 40.0f64);
        let s = 9.5;
        let pdf = |t: f64| nu.powi(k as i32) * t.powi(k as i32 - 1) * (-nu * t).exp() / 6.0;
        let n = 400_000;
        let h = 2.0 / n as f64;
        let mut acc = 0.0;
        for i in 0..n {
            let t = (i as f64 + 0.5) * h;
            acc += (-s * t).exp() * pdf(t) * h;
        }
        let v = m.lst(c(s)).unwrap().re;
        assert!(
            (acc - v).abs() < 1e-8,
            "quadrature {acc} vs closed form {v}"
        );
    }

    #[test]
    fn first_derivative_at_zero_is_negated_mean() {
        let models = [
            InterArrivalModel::exponential(10.0).unwrap(),
            InterArrivalModel::erlang(4, 10.0).unwrap(),
            InterArrivalModel::deterministic(0.1).unwrap(),
            InterArrivalModel::hyperexponential(vec![0.4, 0.6], vec![20.0, 5.0]).unwrap(),
        ];
        for m in &models {
            let d = m.lst_derivative(c(0.0), 1).unwrap();
            assert!((d.re + m.mean()).abs() < 1e-12, "{m:?}: {d}");
            assert!(d.im.abs() < 1e-15);
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let models = [
            InterArrivalModel::exponential(10.0).unwrap(),
            InterArrivalModel::erlang(4, 10.0).unwrap(),
            InterArrivalModel::deterministic(0.1).unwrap(),
            InterArrivalModel::hyperexponential(vec![0.3, 0.7], vec![2.0, 30.0]).unwrap(),
        ];
        // Deterministic sweep over (0, 50]; a seeded linear congruence keeps
        // the point set reproducible without pulling an RNG into unit tests.
        let mut state: u64 = 0x9E3779B97F4A7C15;
        for m in &models {
            for _ in 0..1000 {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                let u = (state >> 11) as f64 / (1u64 << 53) as f64;
                let s = 50.0 * u.max(1e-3);
                let h = 1e-6;
                let fd = (m.lst(c(s + h)).unwrap() - m.lst(c(s - h)).unwrap()) / (2.0 * h);
                let an = m.lst_derivative(c(s), 1).unwrap();
                let tol = 1e-6 * (1.0 + an.norm());
                assert!(
                    (fd - an).norm() < tol,
                    "{m:?} at s={s}: fd={fd}, analytic={an}"
                );
            }
        }
    }

    #[test]
    fn second_derivative_finite_difference() {
        let m = InterArrivalModel::erlang(3, 7.0).unwrap();
        let s = 1.3;
        let h = 1e-4;
        let fd = (m.lst(c(s + h)).unwrap() - 2.0 * m.lst(c(s)).unwrap() + m.lst(c(s - h)).unwrap())
            / (h * h);
        let an = m.lst_derivative(c(s), 2).unwrap();
        assert!((fd - an).norm() < 1e-6 * (1.0 + an.norm()));
    }

    #[test]
    fn pole_evaluation_is_an_error() {
        let m = InterArrivalModel::exponential(10.0).unwrap();
        assert!(matches!(m.lst(c(-10.0)), Err(Error::LstPole { .. })));
    }

    #[test]
    fn unsupported_derivative_order() {
        let m = InterArrivalModel::exponential(10.0).unwrap();
        assert!(matches!(
            m.lst_derivative(c(0.0), 3),
            Err(Error::UnsupportedOrder { order: 3 })
        ));
    }

    #[test]
    fn pgf_normalization_and_zero() {
        let batch =
            BatchSizeDistribution::from_sparse(&[(1, 0.2), (3, 0.4), (6, 0.3), (10, 0.1)]).unwrap();
        assert!((batch.pgf(c(1.0)) - 1.0).norm() < 1e-12);
        assert_eq!(batch.pgf(c(0.0)), Complex64::new(0.0, 0.0));
        let v = batch.pgf(c(0.5)).re;
        assert!((v - 0.15478515625).abs() < 1e-15, "{v}");
        assert!((batch.mean() - 4.2).abs() < 1e-12);
        assert_eq!(batch.max_size(), 10);
    }

    #[test]
    fn batch_rejects_trailing_zero_and_bad_mass() {
        assert!(BatchSizeDistribution::new(vec![0.5, 0.5, 0.0]).is_err());
        assert!(BatchSizeDistribution::new(vec![0.5, 0.4]).is_err());
        assert!(BatchSizeDistribution::new(vec![]).is_err());
        assert!(BatchSizeDistribution::from_sparse(&[(1, 0.5), (2, 0.6)]).is_err());
        assert!(BatchSizeDistribution::from_sparse(&[(0, 1.0)]).is_err());
    }

    #[test]
    fn sparse_batch_renormalizes_small_drift() {
        let b = BatchSizeDistribution::from_sparse(&[(1, 0.5 + 2e-10), (4, 0.5)]).unwrap();
        assert!((b.probs().iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn erlang_parameterizations_agree_on_mean() {
        let by_rate = InterArrivalModel::erlang(4, 10.0).unwrap();
        let by_phase = InterArrivalModel::erlang_per_phase(4, 40.0).unwrap();
        assert_eq!(by_rate, by_phase);
        assert!((by_rate.mean() - 0.1).abs() < 1e-15);
    }
}
