//! Characteristic-function root location inside the unit disc.
//!
//! The boundary sequence of the queue admits a geometric expansion over the
//! roots of
//!
//! ```text
//! A*(delta + (mu + eta)(1 - z)) * sum_i g_i z^(b-i) - z^b = 0
//! ```
//!
//! which has exactly `b` roots in the open unit disc for every stable model.
//! Rational transforms clear to an exact polynomial whose full root set is
//! computed and filtered to the disc. The deterministic transform is
//! transcendental: roots are localized on a rational-surrogate polynomial and
//! every root is then re-converged by Newton iteration on the exact function,
//! so the final roots never inherit surrogate error. When the surrogate
//! cannot cover the evaluation disc, localization falls back to simultaneous
//! iteration on the exact function started from a modulus-balance ring.

use num_complex::Complex64;

use crate::arrival::InterArrivalModel;
use crate::error::{Error, Result};
use crate::model::{require_stable, ModelParams};
use crate::pade::pade_surrogate;
use crate::poly;

/// Roots are accepted only strictly inside the unit circle by this margin.
const INTERIOR_MARGIN: f64 = 1e-9;
/// Minimum pairwise root distance before the distinct-roots solution form is
/// refused.
const DISTINCT_TOL: f64 = 1e-7;
/// Candidates closer than this are treated as one root found twice.
const DEDUPE_TOL: f64 = 1e-9;
/// Conjugate pairs must match within this tolerance.
const CONJUGATE_TOL: f64 = 1e-10;
/// Newton refinement target relative to the characteristic scale.
const NEWTON_RESIDUAL: f64 = 1e-13;
/// Root residuals are accepted below this multiple of the characteristic
/// scale on the unit circle.
const RESIDUAL_BUDGET: f64 = 1e-10;
/// Surrogate localization is trusted only below this sampled relative error.
const SURROGATE_ERROR_BUDGET: f64 = 1e-6;

/// The `b` characteristic roots inside the unit disc.
#[derive(Clone, Debug)]
pub struct RootSet {
    /// Roots sorted by descending real part, then descending imaginary part.
    /// Non-real roots appear in exactly conjugate pairs.
    pub roots: Vec<Complex64>,
    /// Maximum `|f(r_j)|` over the returned roots.
    pub residual_max: f64,
    /// Minimum pairwise distance between returned roots.
    pub multiplicity_gap: f64,
}

impl RootSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Largest real root; present for every valid parameterization.
    pub fn largest_real(&self) -> Option<f64> {
        self.roots
            .iter()
            .filter(|r| r.im == 0.0)
            .map(|r| r.re)
            .fold(None, |acc, v| Some(acc.map_or(v, |m: f64| m.max(v))))
    }
}

/// Shift argument of the transform: `s(z) = delta + (mu + eta)(1 - z)`.
fn shift(params: &ModelParams, z: Complex64) -> Complex64 {
    params.delta + (params.mu + params.eta) * (1.0 - z)
}

/// Coefficients (low to high) of `sum_i g_i z^(b-i)`.
fn batch_power_coeffs(params: &ModelParams) -> Vec<f64> {
    let probs = params.batch.probs();
    let b = probs.len();
    (0..b).map(|k| probs[b - 1 - k]).collect()
}

/// Evaluate the characteristic function at `z`.
pub fn char_fn(params: &ModelParams, z: Complex64) -> Result<Complex64> {
    let lst = params.inter_arrival.lst(shift(params, z))?;
    let p = poly::eval(&batch_power_coeffs(params), z);
    let b = params.batch.max_size() as u32;
    Ok(lst * p - z.powu(b))
}

/// Analytic derivative of the characteristic function at `z`.
pub fn char_fn_derivative(params: &ModelParams, z: Complex64) -> Result<Complex64> {
    let s = shift(params, z);
    let lst = params.inter_arrival.lst(s)?;
    let dlst = params.inter_arrival.lst_derivative(s, 1)?;
    let pc = batch_power_coeffs(params);
    let p = poly::eval(&pc, z);
    let dp = poly::eval(&poly::derivative(&pc), z);
    let b = params.batch.max_size() as u32;
    let rate = params.mu + params.eta;
    Ok(-rate * dlst * p + lst * dp - f64::from(b) * z.powu(b - 1))
}

/// Characteristic scale: the largest magnitude of the function on the unit
/// circle, used to normalize residual tolerances.
fn circle_scale(params: &ModelParams) -> Result<f64> {
    let mut scale = 0.0f64;
    for k in 0..128 {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / 128.0;
        let z = Complex64::from_polar(1.0, theta);
        scale = scale.max(char_fn(params, z)?.norm());
    }
    Ok(scale.max(f64::MIN_POSITIVE))
}

/// Locate the `b` characteristic roots inside the unit disc.
pub fn find_roots(params: &ModelParams) -> Result<RootSet> {
    require_stable(params)?;
    let b = params.batch.max_size();
    let scale = circle_scale(params)?;

    let (candidates, already_exact) = match &params.inter_arrival {
        InterArrivalModel::Deterministic { .. } => (deterministic_candidates(params, b)?, false),
        _ => (rational_candidates(params)?, true),
    };

    let mut roots = refine_and_filter(params, candidates, scale, already_exact)?;
    if roots.len() != b
        && !matches!(
            params.inter_arrival,
            InterArrivalModel::Deterministic { .. }
        )
    {
        // A rational clearance finding the wrong count is a hard
        // inconsistency, not a localization artifact.
        return Err(root_count_error(params, b, roots.len()));
    }
    if roots.len() != b {
        // Surrogate localization lost or merged candidates; restart from the
        // modulus-balance ring on the exact function.
        let ring = ring_start(params, b)?;
        let iterated = poly::aberth_on(
            |z| char_fn(params, z),
            |z| char_fn_derivative(params, z),
            &ring,
        )?;
        roots = refine_and_filter(params, iterated, scale, false)?;
        if roots.len() != b {
            return Err(root_count_error(params, b, roots.len()));
        }
    }

    // Rational clearances enumerate every root of an exact polynomial, so a
    // correct count there is conclusive. Surrogate or ring localization is
    // not exhaustive; verify the count independently through the argument
    // principle, treating only a definite disagreement as fatal.
    if matches!(
        params.inter_arrival,
        InterArrivalModel::Deterministic { .. }
    ) {
        match winding_count(params, 1.0 - 1e-6) {
            Ok(w) if w != b => {
                return Err(Error::RootCount {
                    expected: b,
                    found: roots.len(),
                    winding: w as i64,
                })
            }
            Ok(_) => {}
            Err(e) => log::warn!("winding verification unavailable: {e}"),
        }
    }

    let roots = symmetrize_conjugates(roots)?;

    let mut residual_max = 0.0f64;
    for &r in &roots {
        residual_max = residual_max.max(char_fn(params, r)?.norm());
    }
    if residual_max > RESIDUAL_BUDGET * scale {
        return Err(Error::ResidualTooLarge {
            residual: residual_max,
            tolerance: RESIDUAL_BUDGET * scale,
            context: "characteristic roots",
        });
    }

    let mut multiplicity_gap = f64::INFINITY;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            multiplicity_gap = multiplicity_gap.min((roots[i] - roots[j]).norm());
        }
    }
    if multiplicity_gap < DISTINCT_TOL {
        return Err(Error::DegenerateSpectrum {
            gap: multiplicity_gap,
        });
    }

    Ok(RootSet {
        roots,
        residual_max,
        multiplicity_gap,
    })
}

fn root_count_error(params: &ModelParams, expected: usize, found: usize) -> Error {
    let winding = winding_count(params, 1.0 - 1e-6)
        .map(|w| w as i64)
        .unwrap_or(-1);
    Error::RootCount {
        expected,
        found,
        winding,
    }
}

/// Clear the rational-transform characteristic function to a polynomial and
/// return its full root set.
fn rational_candidates(params: &ModelParams) -> Result<Vec<Complex64>> {
    let b = params.batch.max_size();
    let c0 = params.delta + params.mu + params.eta;
    let c1 = -(params.mu + params.eta);
    let pc = batch_power_coeffs(params);

    // F(z) = N(z) * P(z) - z^b * D(z) where A*(s(z)) = N(z) / D(z).
    let (num_z, den_z): (Vec<f64>, Vec<f64>) = match &params.inter_arrival {
        InterArrivalModel::Exponential { rate } => (vec![1.0], vec![(rate + c0) / rate, c1 / rate]),
        InterArrivalModel::Erlang { phases, phase_rate } => {
            let lin = [(phase_rate + c0) / phase_rate, c1 / phase_rate];
            let mut den = vec![1.0];
            for _ in 0..*phases {
                den = poly::mul(&den, &lin);
            }
            (vec![1.0], den)
        }
        InterArrivalModel::Hyperexponential { weights, rates } => {
            let lins: Vec<[f64; 2]> = rates.iter().map(|r| [r + c0, c1]).collect();
            let mut den = vec![1.0];
            for lin in &lins {
                den = poly::mul(&den, lin);
            }
            let mut num = vec![0.0; lins.len().max(1)];
            for (i, (w, r)) in weights.iter().zip(rates).enumerate() {
                let mut partial = vec![w * r];
                for (j, lin) in lins.iter().enumerate() {
                    if j != i {
                        partial = poly::mul(&partial, lin);
                    }
                }
                for (k, v) in partial.iter().enumerate() {
                    num[k] += v;
                }
            }
            (num, den)
        }
        InterArrivalModel::Deterministic { .. } => unreachable!("handled by the surrogate path"),
    };

    let lhs = poly::mul(&num_z, &pc);
    let mut coeffs = vec![0.0; (b + den_z.len()).max(lhs.len())];
    for (k, v) in lhs.iter().enumerate() {
        coeffs[k] += v;
    }
    for (k, v) in den_z.iter().enumerate() {
        coeffs[b + k] -= v;
    }
    poly::all_roots(&coeffs)
}

/// Localize candidates for the deterministic family on the surrogate
/// polynomial, or fall back to the modulus-balance ring when the surrogate
/// cannot cover the evaluation disc.
fn deterministic_candidates(params: &ModelParams, b: usize) -> Result<Vec<Complex64>> {
    let rate = params.mu + params.eta;
    let eval_radius = params.delta + 2.0 * rate;
    let surrogate = pade_surrogate(&params.inter_arrival, 15, 15, eval_radius)?;
    if surrogate.validity_radius + 1e-12 < eval_radius
        || surrogate.max_rel_error > SURROGATE_ERROR_BUDGET
    {
        log::debug!(
            "surrogate unusable on |s| <= {eval_radius:.3} (validity {:.3}, error {:.2e}); \
             using ring localization",
            surrogate.validity_radius,
            surrogate.max_rel_error
        );
        return ring_start(params, b);
    }
    let c0 = params.delta + rate;
    let c1 = -rate;
    let num_z = poly::compose_affine(&surrogate.numerator, c0, c1);
    let den_z = poly::compose_affine(&surrogate.denominator, c0, c1);
    let pc = batch_power_coeffs(params);
    let lhs = poly::mul(&num_z, &pc);
    let mut coeffs = vec![0.0; (b + den_z.len()).max(lhs.len())];
    for (k, v) in lhs.iter().enumerate() {
        coeffs[k] += v;
    }
    for (k, v) in den_z.iter().enumerate() {
        coeffs[b + k] -= v;
    }
    Ok(poly::all_roots(&coeffs)?
        .into_iter()
        .filter(|z| z.norm() < 1.0)
        .collect())
}

/// Starting ring for exact-function iteration: `b` points on the circle whose
/// radius balances `|z|^b` against `|A*(s(|z|))| P(|z|)` on the real axis.
fn ring_start(params: &ModelParams, b: usize) -> Result<Vec<Complex64>> {
    let pc = batch_power_coeffs(params);
    let balance = |rho: f64| -> Result<f64> {
        let lst = params
            .inter_arrival
            .lst(shift(params, Complex64::new(rho, 0.0)))?;
        let p = poly::eval(&pc, Complex64::new(rho, 0.0))
            .re
            .max(f64::MIN_POSITIVE);
        Ok(b as f64 * rho.ln() - (lst.norm().max(f64::MIN_POSITIVE).ln() + p.ln()))
    };
    let mut lo = 1e-12f64;
    let mut hi = 1.0 - 1e-9;
    let rho = if balance(lo)? < 0.0 && balance(hi)? >= 0.0 {
        for _ in 0..200 {
            let mid = (lo.ln() + hi.ln()).mul_add(0.5, 0.0).exp();
            if balance(mid)? >= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        ((lo.ln() + hi.ln()) * 0.5).exp()
    } else {
        0.5
    };
    let rho = rho.clamp(1e-6, 0.95);
    Ok((0..b)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.37) / b as f64;
            Complex64::from_polar(rho, theta)
        })
        .collect())
}

/// Newton-converge candidates on the exact characteristic function, then keep
/// distinct interior roots meeting the residual target.
fn refine_and_filter(
    params: &ModelParams,
    candidates: Vec<Complex64>,
    scale: f64,
    already_exact: bool,
) -> Result<Vec<Complex64>> {
    let target = NEWTON_RESIDUAL * scale;
    let mut kept: Vec<Complex64> = Vec::new();
    'next: for start in candidates {
        if start.norm() >= 1.0 + 1e-9 {
            continue;
        }
        let mut z = start;
        let mut best = z;
        let mut best_res = match char_fn(params, z) {
            Ok(v) => v.norm(),
            Err(_) => continue,
        };
        // Iterate to step-size convergence: near clustered roots the
        // derivative is exponentially small and a residual-based stop would
        // leave the location orders of magnitude less accurate than the
        // residual suggests.
        let max_iter = if already_exact { 16 } else { 100 };
        for _ in 0..max_iter {
            let f = match char_fn(params, z) {
                Ok(v) => v,
                Err(_) => break,
            };
            let fp = match char_fn_derivative(params, z) {
                Ok(v) => v,
                Err(_) => break,
            };
            if fp.norm() == 0.0 {
                break;
            }
            let step = f / fp;
            if !step.re.is_finite() || !step.im.is_finite() {
                break;
            }
            z -= step;
            if let Ok(v) = char_fn(params, z) {
                let res = v.norm();
                if res <= best_res {
                    best_res = res;
                    best = z;
                }
            } else {
                break;
            }
            if step.norm() <= 1e-15 * (1.0 + z.norm()) {
                break;
            }
        }
        if best_res > target || best.norm() >= 1.0 - INTERIOR_MARGIN {
            continue;
        }
        for existing in &kept {
            if (existing - best).norm() < DEDUPE_TOL {
                continue 'next;
            }
        }
        kept.push(best);
    }
    Ok(kept)
}

/// Snap near-real roots onto the axis and average conjugate pairs so the
/// returned multiset is exactly closed under conjugation.
fn symmetrize_conjugates(mut roots: Vec<Complex64>) -> Result<Vec<Complex64>> {
    let mut out: Vec<Complex64> = Vec::with_capacity(roots.len());
    roots.sort_by(|a, b| {
        (b.re, b.im)
            .partial_cmp(&(a.re, a.im))
            .expect("finite roots")
    });
    let mut used = vec![false; roots.len()];
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        let z = roots[i];
        if z.im.abs() <= CONJUGATE_TOL * (1.0 + z.norm()) {
            out.push(Complex64::new(z.re, 0.0));
            used[i] = true;
            continue;
        }
        let mut partner = None;
        let mut best = f64::INFINITY;
        for (j, candidate) in roots.iter().enumerate().skip(i + 1) {
            if used[j] {
                continue;
            }
            let d = (candidate.conj() - z).norm();
            if d < best {
                best = d;
                partner = Some(j);
            }
        }
        let Some(j) = partner.filter(|_| best <= CONJUGATE_TOL * (1.0 + z.norm())) else {
            return Err(Error::RootFinding(format!(
                "root {z} has no conjugate partner within {CONJUGATE_TOL:.1e}"
            )));
        };
        let w = 0.5 * (z + roots[j].conj());
        let w = Complex64::new(w.re, w.im.abs());
        out.push(w);
        out.push(w.conj());
        used[i] = true;
        used[j] = true;
    }
    out.sort_by(|a, b| {
        (b.re, b.im)
            .partial_cmp(&(a.re, a.im))
            .expect("finite roots")
    });
    Ok(out)
}

/// Count zeros of the characteristic function strictly inside `|z| = radius`
/// by trapezoidal quadrature of the logarithmic derivative, doubling the node
/// count until the pre-rounding value sits within 1e-3 of the same integer on
/// two consecutive levels.
pub fn winding_count(params: &ModelParams, radius: f64) -> Result<usize> {
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "winding radius must lie in (0, 1), got {radius}"
        )));
    }
    let scale = circle_scale(params)?;
    // Without disasters the function has an exact simple zero at z = 1, just
    // outside every admissible contour. Its logarithmic-derivative pole is
    // subtracted pointwise (the subtraction integrates to zero exactly since
    // the zero lies outside), which keeps the trapezoid rule converging at
    // radii within a hair of the circle.
    let boundary_zero = params.delta == 0.0;
    let node_term = |k: usize, nodes: usize| -> Result<Complex64> {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / nodes as f64;
        let z = Complex64::from_polar(radius, theta);
        let f = char_fn(params, z)?;
        if f.norm() < 1e-12 * scale {
            return Err(Error::QuadratureDiverged { nodes });
        }
        let mut term = char_fn_derivative(params, z)? / f * z;
        if boundary_zero {
            term -= z / (z - 1.0);
        }
        Ok(term)
    };

    let mut nodes = 1 << 10;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..nodes {
        sum += node_term(k, nodes)?;
    }
    let mut previous: Option<i64> = None;
    loop {
        let value = sum / nodes as f64;
        let rounded = value.re.round();
        if (value.re - rounded).abs() < 1e-3 && value.im.abs() < 1e-3 && rounded >= 0.0 {
            if previous == Some(rounded as i64) {
                return Ok(rounded as usize);
            }
            previous = Some(rounded as i64);
        } else {
            previous = None;
        }
        if nodes >= 1 << 20 {
            return Err(Error::QuadratureDiverged { nodes });
        }
        // Double the grid; existing nodes stay valid, add the odd ones.
        nodes *= 2;
        for k in (1..nodes).step_by(2) {
            sum += node_term(k, nodes)?;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrival::BatchSizeDistribution;

    fn table1_params(ia: InterArrivalModel) -> ModelParams {
        ModelParams::new(
            ia,
            BatchSizeDistribution::from_sparse(&[(1, 0.2), (3, 0.4), (6, 0.3), (10, 0.1)]).unwrap(),
            10.0,
            5.0,
            2.0,
        )
        .unwrap()
    }

    fn gi_m_1(lambda: f64, mu: f64) -> ModelParams {
        ModelParams::new(
            InterArrivalModel::exponential(lambda).unwrap(),
            BatchSizeDistribution::single(),
            mu,
            0.0,
            0.0,
        )
        .unwrap()
    }

    #[test]
    fn classical_reduction_has_the_known_root() {
        // Single arrivals, no negative arrivals: root of
        // mu r^2 - (lambda + mu) r + lambda inside (0, 1).
        let params = gi_m_1(5.0, 10.0);
        let z = Complex64::new(0.5, 0.0);
        assert!(char_fn(&params, z).unwrap().norm() < 1e-14);
        let roots = find_roots(&params).unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots.roots[0] - 0.5).norm() < 1e-12);
    }

    #[test]
    fn unity_is_a_root_without_disasters() {
        let mut params = gi_m_1(5.0, 10.0);
        params.eta = 3.0;
        let v = char_fn(&params, Complex64::new(1.0, 0.0)).unwrap();
        assert!(v.norm() < 1e-14);
    }

    #[test]
    fn table1_exponential_roots() {
        let params = table1_params(InterArrivalModel::exponential(10.0).unwrap());
        let roots = find_roots(&params).unwrap();
        assert_eq!(roots.len(), 10);
        let scale = circle_scale(&params).unwrap();
        assert!(roots.residual_max < 1e-10 * scale);
        let rb = roots.largest_real().unwrap();
        assert!((rb - 0.94509121).abs() < 1e-7, "largest real root {rb}");
        for r in &roots.roots {
            assert!(r.norm() < 1.0 - 1e-9);
        }
    }

    #[test]
    fn table1_deterministic_roots() {
        let params = table1_params(InterArrivalModel::deterministic(0.1).unwrap());
        let roots = find_roots(&params).unwrap();
        assert_eq!(roots.len(), 10);
        let rb = roots.largest_real().unwrap();
        assert!((rb - 0.93533903).abs() < 1e-7, "largest real root {rb}");
    }

    #[test]
    fn conjugate_symmetry_is_exact() {
        let params = table1_params(InterArrivalModel::exponential(10.0).unwrap());
        let roots = find_roots(&params).unwrap().roots;
        for r in &roots {
            if r.im != 0.0 {
                assert!(
                    roots.iter().any(|w| *w == r.conj()),
                    "missing conjugate of {r}"
                );
            }
        }
    }

    #[test]
    fn winding_count_matches_batch_size() {
        let params = table1_params(InterArrivalModel::exponential(10.0).unwrap());
        assert_eq!(winding_count(&params, 1.0 - 1e-6).unwrap(), 10);
        assert_eq!(winding_count(&gi_m_1(5.0, 10.0), 1.0 - 1e-6).unwrap(), 1);
    }

    #[test]
    fn winding_rejects_bad_radius() {
        let params = gi_m_1(5.0, 10.0);
        assert!(winding_count(&params, 1.5).is_err());
        assert!(winding_count(&params, 0.0).is_err());
    }

    #[test]
    fn unstable_models_are_refused() {
        let params = ModelParams::new(
            InterArrivalModel::exponential(10.0).unwrap(),
            BatchSizeDistribution::from_sparse(&[(5, 1.0)]).unwrap(),
            10.0,
            5.0,
            0.0,
        )
        .unwrap();
        assert!(matches!(find_roots(&params), Err(Error::Unstable { .. })));
    }

    #[test]
    fn roots_move_continuously_in_delta() {
        let params = table1_params(InterArrivalModel::exponential(10.0).unwrap());
        let mut perturbed = params.clone();
        perturbed.delta += 1e-8;
        let a = find_roots(&params).unwrap().roots;
        let b = find_roots(&perturbed).unwrap().roots;
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-4, "{x} moved to {y}");
        }
    }

    #[test]
    fn high_order_erlang_clears_to_a_steeply_graded_polynomial() {
        // One hundred stages push the cleared polynomial's leading
        // coefficient ~150 orders of magnitude under its largest; the
        // Newton-polygon starting points must still deliver the interior
        // roots.
        let params = ModelParams::new(
            InterArrivalModel::erlang_per_phase(100, 1000.0).unwrap(),
            BatchSizeDistribution::from_sparse(&[(1, 0.7), (3, 0.3)]).unwrap(),
            30.0,
            0.0,
            1.0,
        )
        .unwrap();
        let roots = find_roots(&params).unwrap();
        assert_eq!(roots.len(), 3);
        for r in &roots.roots {
            assert!(char_fn(&params, *r).unwrap().norm() < 1e-12);
        }
        assert_eq!(winding_count(&params, 1.0 - 1e-6).unwrap(), 3);
    }

    #[test]
    fn winding_reports_roots_hugging_the_contour() {
        // Dominant root within ~3e-7 of the contour radius: the quadrature
        // cannot stabilize within its node cap and must say so.
        let params = ModelParams::new(
            InterArrivalModel::exponential(10.0 * (1.0 - 1e-6)).unwrap(),
            BatchSizeDistribution::from_sparse(&[(2, 1.0)]).unwrap(),
            15.0,
            5.0,
            0.0,
        )
        .unwrap();
        assert!(matches!(
            winding_count(&params, 1.0 - 1e-6),
            Err(Error::QuadratureDiverged { .. })
        ));
    }

    #[test]
    fn light_load_deterministic_uses_ring_localization() {
        // The surrogate cannot cover |s| <= delta + 2(mu + eta) at this
        // inter-arrival time; the exact-function ring path must deliver.
        let params = ModelParams::new(
            InterArrivalModel::deterministic(1.25).unwrap(),
            BatchSizeDistribution::new(vec![0.1; 10]).unwrap(),
            23.0,
            6.0,
            2.0,
        )
        .unwrap();
        let roots = find_roots(&params).unwrap();
        assert_eq!(roots.len(), 10);
        // Roots live on a tiny ring; every one must satisfy the exact
        // characteristic equation.
        for r in &roots.roots {
            assert!(r.norm() < 0.1);
            assert!(char_fn(&params, *r).unwrap().norm() < 1e-16);
        }
        assert_eq!(winding_count(&params, 1.0 - 1e-6).unwrap(), 10);
    }
}
