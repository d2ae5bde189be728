//! Dense complex polynomial helpers and a simultaneous-iteration root finder.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Evaluate a polynomial with coefficients ordered low to high.
pub fn eval(coeffs: &[f64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// Evaluate together with a bound on the roundoff noise of the evaluation
/// itself; a value below the bound is numerically indistinguishable from a
/// root.
fn eval_with_noise(coeffs: &[f64], z: Complex64) -> (Complex64, f64) {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut bound = 0.0f64;
    let zn = z.norm();
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
        bound = bound * zn + c.abs();
    }
    (acc, 4.0 * f64::EPSILON * bound)
}

/// Derivative coefficients, low to high.
pub fn derivative(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| k as f64 * c)
        .collect()
}

/// Multiply two polynomials (low to high).
pub fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Coefficients of `p(c0 + c1 * z)` given `p` (low to high).
pub fn compose_affine(p: &[f64], c0: f64, c1: f64) -> Vec<f64> {
    let mut out = vec![*p.last().expect("non-empty polynomial")];
    for &coef in p.iter().rev().skip(1) {
        let mut next = vec![0.0; out.len() + 1];
        for (k, &v) in out.iter().enumerate() {
            next[k] += v * c0;
            next[k + 1] += v * c1;
        }
        next[0] += coef;
        out = next;
    }
    out
}

/// All complex roots of a real-coefficient polynomial via Aberth-Ehrlich
/// simultaneous iteration, in deterministic order of computation.
pub fn all_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if scale == 0.0 {
        return Err(Error::RootFinding("zero polynomial".into()));
    }
    let normalized: Vec<f64> = coeffs.iter().map(|c| c / scale).collect();
    let degree = match normalized.iter().rposition(|c| c.abs() > 1e-300) {
        Some(d) => d,
        None => return Err(Error::RootFinding("zero polynomial".into())),
    };
    let coeffs = &normalized[..=degree];
    if degree == 0 {
        return Ok(Vec::new());
    }
    if degree == 1 {
        return Ok(vec![Complex64::new(-coeffs[0] / coeffs[1], 0.0)]);
    }
    let deriv = derivative(coeffs);

    // Largest modulus at which the (normalized) polynomial still evaluates
    // within f64 range; guesses and iterates are kept inside it.
    let r_safe = ((f64::MAX.ln() - ((degree + 1) as f64).ln()) / degree as f64).exp() * 0.25;
    let mut z = initial_guesses(coeffs);
    for zk in z.iter_mut() {
        if zk.norm() > r_safe {
            *zk *= r_safe / zk.norm();
        }
    }

    let max_sweeps = 600;
    for _ in 0..max_sweeps {
        let mut all_settled = true;
        for k in 0..degree {
            let (fz, noise) = eval_with_noise(coeffs, z[k]);
            if !fz.re.is_finite() || !fz.im.is_finite() {
                // Wandered into overflow territory; pull the iterate inward.
                z[k] *= 0.5;
                all_settled = false;
                continue;
            }
            // Below the evaluation noise floor the root cannot be improved.
            if fz.norm() <= noise {
                continue;
            }
            let dz = eval(&deriv, z[k]);
            let newton = if dz.norm() > 0.0 {
                fz / dz
            } else {
                Complex64::new(1e-3, 1e-3)
            };
            let mut repulsion = Complex64::new(0.0, 0.0);
            for (j, &zj) in z.iter().enumerate() {
                if j != k {
                    let d = z[k] - zj;
                    if d.norm() > 1e-300 {
                        repulsion += 1.0 / d;
                    }
                }
            }
            let denom = 1.0 - newton * repulsion;
            let step = if denom.norm() > 1e-300 {
                newton / denom
            } else {
                newton
            };
            if !step.re.is_finite() || !step.im.is_finite() {
                z[k] *= 0.5;
                all_settled = false;
                continue;
            }
            z[k] -= step;
            let mag = z[k].norm();
            if mag > r_safe {
                z[k] *= r_safe / mag;
            }
            if step.norm() > 1e-14 * (1.0 + z[k].norm()) {
                all_settled = false;
            }
        }
        if all_settled {
            return Ok(z);
        }
    }
    Err(Error::RootFinding(format!(
        "simultaneous iteration did not converge within {max_sweeps} sweeps (degree {degree})"
    )))
}

/// Starting points from the Newton polygon: the upper convex hull of
/// `(k, ln |c_k|)` partitions the roots into modulus groups, so steeply
/// graded polynomials (for instance a high-order factor with a tiny leading
/// coefficient) get guesses near each group instead of one common ring.
fn initial_guesses(coeffs: &[f64]) -> Vec<Complex64> {
    let pts: Vec<(usize, f64)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.abs() > 0.0)
        .map(|(k, c)| (k, c.abs().ln()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (b.0 - a.0) as f64 * (p.1 - a.1) - (p.0 - a.0) as f64 * (b.1 - a.1);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut guesses = Vec::with_capacity(coeffs.len() - 1);
    // Roots below the lowest hull vertex are exact zeros.
    for _ in 0..hull[0].0 {
        guesses.push(Complex64::new(0.0, 0.0));
    }
    for (segment, pair) in hull.windows(2).enumerate() {
        let (k1, u1) = pair[0];
        let (k2, u2) = pair[1];
        let m = k2 - k1;
        let radius = ((u1 - u2) / m as f64).exp().clamp(1e-9, 1e9);
        for j in 0..m {
            let theta =
                2.0 * std::f64::consts::PI * (j as f64 + 0.37) / m as f64 + 0.5 * segment as f64;
            guesses.push(Complex64::from_polar(radius, theta));
        }
    }
    guesses
}

/// Aberth-Ehrlich iteration on an arbitrary analytic function, used when the
/// characteristic function cannot be cleared to a polynomial. `start` fixes
/// the number of roots sought; the function must have that many roots near
/// the starting configuration.
pub fn aberth_on<F, G>(f: F, fp: G, start: &[Complex64]) -> Result<Vec<Complex64>>
where
    F: Fn(Complex64) -> Result<Complex64>,
    G: Fn(Complex64) -> Result<Complex64>,
{
    let m = start.len();
    let mut z = start.to_vec();
    for _ in 0..500 {
        let mut max_step = 0.0f64;
        for k in 0..m {
            let fz = f(z[k])?;
            let dz = fp(z[k])?;
            if fz.norm() == 0.0 {
                continue;
            }
            if dz.norm() == 0.0 {
                return Err(Error::RootFinding(
                    "vanishing derivative during iteration".into(),
                ));
            }
            let newton = fz / dz;
            let mut repulsion = Complex64::new(0.0, 0.0);
            for (j, &zj) in z.iter().enumerate() {
                if j != k {
                    let d = z[k] - zj;
                    if d.norm() > 1e-300 {
                        repulsion += 1.0 / d;
                    }
                }
            }
            let denom = 1.0 - newton * repulsion;
            let step = if denom.norm() > 1e-300 {
                newton / denom
            } else {
                newton
            };
            if !step.re.is_finite() || !step.im.is_finite() {
                return Err(Error::RootFinding(
                    "iteration produced a non-finite step".into(),
                ));
            }
            z[k] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[k].norm()));
        }
        if max_step < 1e-14 {
            return Ok(z);
        }
    }
    Err(Error::RootFinding(
        "simultaneous iteration on the exact characteristic function did not converge".into(),
    ))
}
