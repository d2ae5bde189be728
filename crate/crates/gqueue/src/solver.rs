//! Spectral solution of the steady-state distributions.
//!
//! Given the `b` interior characteristic roots, the boundary sequence is
//! `sum_j c_j r_j^n`; the constants solve a linear system made of `b - 1`
//! homogeneous rows in negative root powers plus one row tying the sum of
//! `c_j / (1 - r_j)` to the batch arrival rate. The pre-arrival and
//! arbitrary-epoch laws, their means, and the tail decay rate all follow in
//! closed form.

use num_complex::Complex64;
use serde::Serialize;

use crate::charroots::{find_roots, RootSet};
use crate::error::{Error, Result};
use crate::linalg;
use crate::model::ModelParams;

/// Construction-time validation horizon for realness and nonnegativity.
const VALIDATION_HORIZON: usize = 2000;
/// Probabilities may round to at worst this value before construction fails.
const NEGATIVE_FLOOR: f64 = -1e-12;
/// Imaginary parts above this are an error, never silently dropped.
const IMAG_TOL: f64 = 1e-9;
/// Condition estimate above which the constants system is refused.
const CONDITION_LIMIT: f64 = 1e12;
/// Largest inner-term magnitude (relative to the arrival rate) for which the
/// direct geometric formulas are evaluated below `n = b`; past it the exact
/// balance recurrence is used instead, avoiding catastrophic cancellation
/// from negative powers of near-zero roots.
const DIRECT_TERM_BUDGET: f64 = 1e3;
/// Roots smaller than this flag a conditioning warning in the diagnostics.
const SMALL_ROOT: f64 = 1e-6;

/// Characteristic roots with their expansion constants.
#[derive(Clone, Debug)]
pub struct SpectralSolution {
    pub roots: RootSet,
    pub constants: Vec<Complex64>,
    /// Batch arrival rate.
    pub lambda: f64,
    /// Condition estimate of the (row-equilibrated) constants system.
    pub condition_estimate: f64,
    /// Largest residual over the homogeneous rows.
    pub residual_homogeneous: f64,
    /// Residual of the arrival-rate row.
    pub residual_rate: f64,
}

/// Solve the constants system for the given interior roots.
pub fn solve_constants(roots: &RootSet, lambda: f64) -> Result<SpectralSolution> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "arrival rate must be positive, got {lambda}"
        )));
    }
    let b = roots.len();
    if b == 0 {
        return Err(Error::InvalidParameter("empty root set".into()));
    }
    let r = &roots.roots;
    let mut matrix = vec![vec![Complex64::new(0.0, 0.0); b]; b];
    let mut rhs = vec![Complex64::new(0.0, 0.0); b];
    for n in 1..b {
        for j in 0..b {
            matrix[n - 1][j] = r[j].powi(n as i32 - b as i32);
        }
    }
    for j in 0..b {
        matrix[b - 1][j] = 1.0 / (1.0 - r[j]);
    }
    rhs[b - 1] = Complex64::new(lambda, 0.0);

    let solved = linalg::solve(&matrix, &rhs)?;
    if solved.condition_estimate > CONDITION_LIMIT {
        return Err(Error::IllConditioned {
            cond: solved.condition_estimate,
        });
    }
    let constants = solved.x;

    // Residuals of both equation families. The tolerance carries a roundoff
    // allowance proportional to the summed term magnitudes: when roots are
    // tiny, the negative powers make the homogeneous rows astronomically
    // larger than the arrival rate and exact cancellation in f64 is not
    // representable.
    let mut residual_homogeneous = 0.0f64;
    for n in 1..b {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut magnitude = 0.0f64;
        for j in 0..b {
            let term = constants[j] * r[j].powi(n as i32 - b as i32);
            acc += term;
            magnitude += term.norm();
        }
        let tolerance = 1e-9 * lambda + 64.0 * f64::EPSILON * magnitude;
        if acc.norm() > tolerance {
            return Err(Error::ResidualTooLarge {
                residual: acc.norm(),
                tolerance,
                context: "homogeneous constant equations",
            });
        }
        residual_homogeneous = residual_homogeneous.max(acc.norm());
    }
    let mut rate_acc = Complex64::new(-lambda, 0.0);
    let mut rate_magnitude = lambda;
    for j in 0..b {
        let term = constants[j] / (1.0 - r[j]);
        rate_acc += term;
        rate_magnitude += term.norm();
    }
    let rate_tolerance = 1e-9 * lambda + 64.0 * f64::EPSILON * rate_magnitude;
    if rate_acc.norm() > rate_tolerance {
        return Err(Error::ResidualTooLarge {
            residual: rate_acc.norm(),
            tolerance: rate_tolerance,
            context: "arrival-rate constant equation",
        });
    }

    // The boundary sequence must be essentially real and nonnegative.
    let mut powers = vec![Complex64::new(1.0, 0.0); b];
    for n in 0..=VALIDATION_HORIZON {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..b {
            acc += constants[j] * powers[j];
        }
        if acc.im.abs() > IMAG_TOL * lambda {
            return Err(Error::ImaginaryResidue {
                n,
                imag: acc.im / lambda,
            });
        }
        if acc.re < NEGATIVE_FLOOR * lambda {
            return Err(Error::NegativeProbability {
                n,
                value: acc.re / lambda,
            });
        }
        for j in 0..b {
            powers[j] *= r[j];
        }
    }

    Ok(SpectralSolution {
        roots: roots.clone(),
        constants,
        lambda,
        condition_estimate: solved.condition_estimate,
        residual_homogeneous,
        residual_rate: rate_acc.norm(),
    })
}

/// Which evaluation route produced the arbitrary-epoch head probabilities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HeadRoute {
    /// Closed-form geometric expansion, including the negative root powers
    /// below `n = b`.
    Direct,
    /// Exact stationary balance recurrence seeded by the boundary sequence;
    /// used when near-zero roots make the direct form cancel catastrophically.
    BalanceRecurrence,
}

/// Evaluable steady-state laws at pre-arrival and arbitrary epochs.
#[derive(Clone, Debug)]
pub struct SystemDistribution {
    solution: SpectralSolution,
    params: ModelParams,
    p0_arbitrary: f64,
    decay_rate: f64,
    l_pre: f64,
    l_arb: f64,
    /// Arbitrary-epoch probabilities for `n = 0..b`.
    arb_head: Vec<f64>,
    /// `c_j (P(r_j) - r_j^b) / (delta + (mu + eta)(1 - r_j))`; the
    /// arbitrary-epoch law for `n >= b` is `sum_j tail_weights[j] r_j^(n-b)`.
    tail_weights: Vec<Complex64>,
    head_route: HeadRoute,
    small_root_warning: bool,
}

/// Full pipeline: roots, constants, distributions.
pub fn solve(params: &ModelParams) -> Result<SystemDistribution> {
    let roots = find_roots(params)?;
    let solution = solve_constants(&roots, params.batch_rate())?;
    SystemDistribution::new(solution, params.clone())
}

/// Which reduced model a parameter set represents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecialCase {
    /// No negative arrivals at all.
    Classical,
    /// Negative customers only.
    NegativeCustomers,
    /// Disasters only.
    Disasters,
}

/// Run the identical pipeline on a reduced model and report which classical
/// case it is. Requires `eta` and/or `delta` to vanish.
pub fn reduce_special_case(params: &ModelParams) -> Result<(SpecialCase, SystemDistribution)> {
    let case = match (params.eta == 0.0, params.delta == 0.0) {
        (true, true) => SpecialCase::Classical,
        (false, true) => SpecialCase::NegativeCustomers,
        (true, false) => SpecialCase::Disasters,
        (false, false) => {
            return Err(Error::InvalidParameter(
                "not a special case: both eta and delta are positive".into(),
            ))
        }
    };
    Ok((case, solve(params)?))
}

impl SystemDistribution {
    pub fn new(solution: SpectralSolution, params: ModelParams) -> Result<Self> {
        let b = solution.roots.len();
        if b != params.batch.max_size() {
            return Err(Error::InvalidParameter(format!(
                "root count {b} does not match the maximum batch size {}",
                params.batch.max_size()
            )));
        }
        let r = &solution.roots.roots;
        let c = &solution.constants;
        let lambda = solution.lambda;
        let denom: Vec<Complex64> = r
            .iter()
            .map(|rj| params.delta + (params.mu + params.eta) * (1.0 - rj))
            .collect();
        let small_root_warning = r.iter().any(|rj| rj.norm() < SMALL_ROOT);
        if small_root_warning {
            log::warn!(
                "a characteristic root is below {SMALL_ROOT:.0e}; arbitrary-epoch head \
                 values degrade in accuracy"
            );
        }

        // P(r_j) - r_j^b = r_j^b (G(1/r_j) - 1) without any negative power.
        let pc: Vec<f64> = {
            let probs = params.batch.probs();
            (0..b).map(|k| probs[b - 1 - k]).collect()
        };
        let tail_weights: Vec<Complex64> = (0..b)
            .map(|j| {
                let p = crate::poly::eval(&pc, r[j]);
                c[j] * (p - r[j].powu(b as u32)) / denom[j]
            })
            .collect();

        // Decide whether the geometric form is usable below n = b.
        let worst_term = (0..b)
            .map(|j| c[j].norm() * r[j].norm().powi(1 - b as i32) / denom[j].norm())
            .fold(0.0f64, f64::max);
        let head_route = if worst_term <= DIRECT_TERM_BUDGET * lambda.max(1.0) {
            HeadRoute::Direct
        } else {
            HeadRoute::BalanceRecurrence
        };

        let boundary = |n: usize| -> f64 {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..b {
                acc += c[j] * r[j].powu(n as u32);
            }
            acc.re
        };

        let arb_head = match head_route {
            HeadRoute::Direct => {
                let mut head = Vec::with_capacity(b.max(1));
                // Complement form for n = 0.
                let mut occupied = Complex64::new(0.0, 0.0);
                for j in 0..b {
                    // tail weight already carries r^b * (G(1/r)-1) / denom;
                    // multiply by r^(1-b) / (1-r) to sum the series from 1.
                    occupied += tail_weights[j] * r[j].powi(1 - b as i32) / (1.0 - r[j]);
                }
                head.push(1.0 - occupied.re);
                for n in 1..b {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for j in 0..b {
                        let mut inner = -r[j].powu(n as u32);
                        for i in 1..=b {
                            inner += params.batch.prob(i) * r[j].powi(n as i32 - i as i32);
                        }
                        acc += c[j] * inner / denom[j];
                    }
                    if acc.im.abs() > IMAG_TOL {
                        return Err(Error::ImaginaryResidue { n, imag: acc.im });
                    }
                    head.push(acc.re);
                }
                head
            }
            HeadRoute::BalanceRecurrence => balance_head(&params, r, &tail_weights, boundary)?,
        };

        // Realness and the nonnegativity floor of the arbitrary-epoch tail
        // over the horizon; the boundary sequence itself was validated when
        // the constants were solved.
        let mut powers = vec![Complex64::new(1.0, 0.0); b];
        for n in 0..=VALIDATION_HORIZON {
            let mut tail = Complex64::new(0.0, 0.0);
            for j in 0..b {
                tail += tail_weights[j] * powers[j];
            }
            // `tail` is the arbitrary-epoch value at n + b.
            if tail.im.abs() > IMAG_TOL {
                return Err(Error::ImaginaryResidue {
                    n: n + b,
                    imag: tail.im,
                });
            }
            if tail.re < NEGATIVE_FLOOR {
                return Err(Error::NegativeProbability {
                    n: n + b,
                    value: tail.re,
                });
            }
            for j in 0..b {
                powers[j] *= r[j];
            }
        }
        for (n, &v) in arb_head.iter().enumerate() {
            if v < NEGATIVE_FLOOR {
                return Err(Error::NegativeProbability { n, value: v });
            }
        }
        let p0_arbitrary = arb_head[0];
        if p0_arbitrary > 1.0 + 1e-10 {
            return Err(Error::InvalidParameter(format!(
                "empty-system probability {p0_arbitrary} escaped [0, 1]"
            )));
        }

        // Closed-form normalization of both laws.
        let mut pre_sum = Complex64::new(0.0, 0.0);
        let mut tail_sum = Complex64::new(0.0, 0.0);
        for j in 0..b {
            pre_sum += c[j] / (1.0 - r[j]);
            tail_sum += tail_weights[j] / (1.0 - r[j]);
        }
        let pre_norm = pre_sum.re / lambda;
        if (pre_norm - 1.0).abs() > 1e-10 {
            return Err(Error::ResidualTooLarge {
                residual: (pre_norm - 1.0).abs(),
                tolerance: 1e-10,
                context: "pre-arrival normalization",
            });
        }
        let head_sum: f64 = arb_head.iter().sum();
        let arb_norm = head_sum + tail_sum.re;
        if (arb_norm - 1.0).abs() > 1e-10 {
            return Err(Error::ResidualTooLarge {
                residual: (arb_norm - 1.0).abs(),
                tolerance: 1e-10,
                context: "arbitrary-epoch normalization",
            });
        }

        let decay_rate = solution.roots.largest_real().ok_or(Error::NoRealRoot)?;
        if !(0.0 < decay_rate && decay_rate < 1.0) {
            return Err(Error::NoRealRoot);
        }

        // Means. The pre-arrival form never involves negative powers; the
        // arbitrary-epoch mean is assembled from the head values plus the
        // geometric tail so it stays valid on both routes.
        let mut l_pre_acc = Complex64::new(0.0, 0.0);
        let mut l_tail = Complex64::new(0.0, 0.0);
        for j in 0..b {
            l_pre_acc += c[j] * r[j] / ((1.0 - r[j]) * (1.0 - r[j]));
            l_tail +=
                tail_weights[j] * (b as f64 / (1.0 - r[j]) + r[j] / ((1.0 - r[j]) * (1.0 - r[j])));
        }
        if l_pre_acc.im.abs() > IMAG_TOL * lambda || l_tail.im.abs() > IMAG_TOL {
            return Err(Error::ImaginaryResidue {
                n: 0,
                imag: l_pre_acc.im.abs().max(l_tail.im.abs()),
            });
        }
        let l_pre = l_pre_acc.re / lambda;
        let head_mean: f64 = arb_head
            .iter()
            .enumerate()
            .map(|(n, &v)| n as f64 * v)
            .sum();
        let l_arb = head_mean + l_tail.re;

        Ok(Self {
            solution,
            params,
            p0_arbitrary,
            decay_rate,
            l_pre,
            l_arb,
            arb_head,
            tail_weights,
            head_route,
            small_root_warning,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn solution(&self) -> &SpectralSolution {
        &self.solution
    }

    pub fn head_route(&self) -> HeadRoute {
        self.head_route
    }

    pub fn small_root_warning(&self) -> bool {
        self.small_root_warning
    }

    /// Pre-arrival probability of `n` customers.
    pub fn prearrival_pmf(&self, n: usize) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, r) in self
            .solution
            .constants
            .iter()
            .zip(&self.solution.roots.roots)
        {
            acc += c * r.powu(n as u32);
        }
        clamp_probability(acc.re / self.solution.lambda)
    }

    /// Arbitrary-epoch probability of `n` customers.
    pub fn arbitrary_pmf(&self, n: usize) -> f64 {
        let b = self.solution.roots.len();
        if n < self.arb_head.len() {
            return clamp_probability(self.arb_head[n]);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (w, r) in self.tail_weights.iter().zip(&self.solution.roots.roots) {
            acc += w * r.powu((n - b) as u32);
        }
        clamp_probability(acc.re)
    }

    /// Probability the system is empty at an arbitrary epoch.
    pub fn p0_arbitrary(&self) -> f64 {
        self.p0_arbitrary
    }

    /// Mean system size at pre-arrival and arbitrary epochs.
    pub fn mean_system_size(&self) -> (f64, f64) {
        (self.l_pre, self.l_arb)
    }

    /// Geometric decay rate of the tail: the largest real root.
    pub fn tail_decay(&self) -> f64 {
        self.decay_rate
    }

    /// Smallest `n` from which both laws stay below `threshold`, capped at
    /// one million. The mixture oscillates inside its geometric envelope, so
    /// a candidate only counts once a full window past it stays quiet.
    pub fn reporting_truncation(&self, threshold: f64) -> usize {
        let cap = 1_000_000;
        let window = (2 * self.solution.roots.len()).max(16);
        let mut quiet = 0usize;
        let mut n = self.solution.roots.len().max(1);
        while n < cap {
            if self.prearrival_pmf(n) < threshold && self.arbitrary_pmf(n) < threshold {
                quiet += 1;
                if quiet >= window {
                    return n + 1 - quiet;
                }
            } else {
                quiet = 0;
            }
            n += 1;
        }
        cap
    }
}

fn clamp_probability(v: f64) -> f64 {
    if v < 0.0 {
        // Values below the floor were rejected at construction.
        0.0
    } else {
        v
    }
}

/// Head probabilities from the stationary balance equations.
///
/// The transform-free balance relations propagate the arbitrary-epoch values
/// forward from `p_1` using only the boundary sequence, which is benign. The
/// unknown empty-system probability enters affinely, so it is closed by
/// normalization against the geometric tail; the propagated values are then
/// cross-checked against the closed form where both are valid (n >= b).
fn balance_head<F>(
    params: &ModelParams,
    roots: &[Complex64],
    tail_weights: &[Complex64],
    boundary: F,
) -> Result<Vec<f64>>
where
    F: Fn(usize) -> f64,
{
    let b = roots.len();
    let rate = params.mu + params.eta;
    let growth = (rate + params.delta) / rate;
    // p_n = base[n] + slope[n] * p_0 for n = 1..
    let extent = b + 6;
    let mut base = vec![0.0f64; extent];
    let mut slope = vec![0.0f64; extent];
    if extent > 1 {
        base[1] = (boundary(0) - params.delta) / rate;
        slope[1] = params.delta / rate;
    }
    for n in 1..extent - 1 {
        let mut conv = 0.0;
        for i in 1..=n.min(b) {
            conv += params.batch.prob(i) * boundary(n - i);
        }
        base[n + 1] = (growth * rate * base[n] - conv + boundary(n)) / rate;
        slope[n + 1] = growth * slope[n];
    }
    // Geometric tail from n = b onward.
    let mut tail_sum = Complex64::new(0.0, 0.0);
    for (w, r) in tail_weights.iter().zip(roots) {
        tail_sum += w / (1.0 - r);
    }
    let head_base: f64 = base[1..b].iter().sum();
    let head_slope: f64 = slope[1..b].iter().sum();
    let p0 = (1.0 - head_base - tail_sum.re) / (1.0 + head_slope);

    let mut head = Vec::with_capacity(b);
    head.push(p0);
    for n in 1..b {
        head.push(base[n] + slope[n] * p0);
    }

    // Overlap check: the recurrence continued past b must agree with the
    // closed form there.
    for n in b..extent {
        let recurrence = base[n] + slope[n] * p0;
        let mut closed = Complex64::new(0.0, 0.0);
        for (w, r) in tail_weights.iter().zip(roots) {
            closed += w * r.powu((n - b) as u32);
        }
        let err = (recurrence - closed.re).abs();
        if err > 1e-8 * (1.0 + closed.re.abs()) {
            return Err(Error::ResidualTooLarge {
                residual: err,
                tolerance: 1e-8,
                context: "balance recurrence closure",
            });
        }
    }
    Ok(head)
}
