//! Rational approximation of the deterministic inter-arrival transform.
//!
//! `exp(-a s)` is the only transcendental transform in the model. Root
//! localization clears the characteristic function to a polynomial, which
//! needs a rational stand-in for the exponential; the stand-in is never used
//! where a point value of the transform is reported.

use num_complex::Complex64;

use crate::arrival::InterArrivalModel;
use crate::error::{Error, Result};
use crate::{linalg, poly};

/// A rational function `N(s) / D(s)` approximating a transform near `s = 0`.
#[derive(Clone, Debug)]
pub struct RationalSurrogate {
    /// Numerator coefficients, low to high.
    pub numerator: Vec<f64>,
    /// Denominator coefficients, low to high, normalized to `D(0) = 1`.
    pub denominator: Vec<f64>,
    pub order: (usize, usize),
    /// Radius of the disc (centred at 0) on which `max_rel_error` was
    /// measured; never larger than the largest pole-free disc.
    pub validity_radius: f64,
    /// Sampled maximum relative error against the exact transform on the
    /// validity circle.
    pub max_rel_error: f64,
    /// Condition estimate of the coefficient solve.
    pub condition_estimate: f64,
}

impl RationalSurrogate {
    pub fn eval(&self, s: Complex64) -> Complex64 {
        poly::eval(&self.numerator, s) / poly::eval(&self.denominator, s)
    }
}

/// Build the `(m, n)` rational approximant of the model's transform about
/// `s = 0` and measure its accuracy over a disc of radius `eval_radius`.
///
/// Only the deterministic family is supported; every other family is already
/// rational. The coefficient system is solved for the unit-time exponential
/// and rescaled, which keeps its conditioning independent of the model.
pub fn pade_surrogate(
    model: &InterArrivalModel,
    m: usize,
    n: usize,
    eval_radius: f64,
) -> Result<RationalSurrogate> {
    let a = match model {
        InterArrivalModel::Deterministic { value } => *value,
        other => {
            return Err(Error::InvalidParameter(format!(
                "rational surrogate is only defined for the deterministic family, got {other:?}"
            )))
        }
    };
    if m == 0 || n == 0 || m > 40 || n > 40 {
        return Err(Error::InvalidParameter(format!(
            "surrogate orders must be in 1..=40, got ({m}, {n})"
        )));
    }
    if !(eval_radius > 0.0) || !eval_radius.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "surrogate evaluation radius must be positive, got {eval_radius}"
        )));
    }

    // Taylor coefficients of exp(-x): (-1)^k / k!.
    let mut taylor = vec![0.0f64; m + n + 1];
    taylor[0] = 1.0;
    for k in 1..=m + n {
        taylor[k] = -taylor[k - 1] / k as f64;
    }
    let t = |k: isize| -> f64 {
        if k < 0 {
            0.0
        } else {
            taylor[k as usize]
        }
    };

    // Denominator coefficients d_1..d_n (d_0 = 1) from the moment-matching
    // rows m+1..m+n, then the numerator by convolution. The unknowns span
    // many orders of magnitude (they inherit factorial decay), so columns
    // are equilibrated before the solve and the solution unscaled after.
    let mut matrix = vec![vec![0.0f64; n]; n];
    let mut rhs = vec![0.0f64; n];
    for i in 1..=n {
        for j in 1..=n {
            matrix[i - 1][j - 1] = t((m + i) as isize - j as isize);
        }
        rhs[i - 1] = -t((m + i) as isize);
    }
    let col_scale: Vec<f64> = (0..n)
        .map(|j| {
            let max = (0..n).map(|i| matrix[i][j].abs()).fold(0.0f64, f64::max);
            if max > 0.0 {
                max
            } else {
                1.0
            }
        })
        .collect();
    for row in matrix.iter_mut() {
        for (j, v) in row.iter_mut().enumerate() {
            *v /= col_scale[j];
        }
    }
    let (scaled_tail, condition_estimate) = linalg::solve_real(&matrix, &rhs)?;
    if condition_estimate > 1e30 {
        return Err(Error::IllConditioned {
            cond: condition_estimate,
        });
    }
    let d_tail: Vec<f64> = scaled_tail
        .iter()
        .zip(&col_scale)
        .map(|(v, s)| v / s)
        .collect();
    let mut den_unit = vec![1.0];
    den_unit.extend_from_slice(&d_tail);
    let mut num_unit = vec![0.0f64; m + 1];
    for (i, dst) in num_unit.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (j, &dj) in den_unit.iter().enumerate().take(i + 1) {
            acc += dj * t(i as isize - j as isize);
        }
        *dst = acc;
    }

    // Rescale from exp(-x) to exp(-a s): coefficient k picks up a^k.
    let rescale = |unit: &[f64]| -> Vec<f64> {
        let mut pw = 1.0;
        unit.iter()
            .map(|&c| {
                let v = c * pw;
                pw *= a;
                v
            })
            .collect()
    };
    let numerator = rescale(&num_unit);
    let denominator = rescale(&den_unit);

    // The approximant is only trustworthy inside its pole-free disc.
    let poles = poly::all_roots(&denominator)?;
    let min_pole = poles.iter().map(|p| p.norm()).fold(f64::INFINITY, f64::min);
    let validity_radius = eval_radius.min(0.999 * min_pole);

    let surrogate = RationalSurrogate {
        numerator,
        denominator,
        order: (m, n),
        validity_radius,
        max_rel_error: 0.0,
        condition_estimate,
    };
    let mut max_rel_error = 0.0f64;
    for k in 0..512 {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / 512.0;
        let s = Complex64::from_polar(validity_radius, theta);
        let exact = (-s * a).exp();
        let err = (surrogate.eval(s) - exact).norm() / exact.norm();
        max_rel_error = max_rel_error.max(err);
    }
    Ok(RationalSurrogate {
        max_rel_error,
        ..surrogate
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn det(a: f64) -> InterArrivalModel {
        InterArrivalModel::deterministic(a).unwrap()
    }

    /// Closed-form approximant coefficients for the exponential, used as an
    /// independent oracle for the linear-system construction.
    fn closed_form(a: f64, m: usize, n: usize) -> (Vec<f64>, Vec<f64>) {
        let mut num = vec![0.0; m + 1];
        let mut den = vec![0.0; n + 1];
        let mut c = 1.0;
        for j in 0..=m {
            num[j] = c * (-a).powi(j as i32);
            if j < m {
                c *= (m - j) as f64 / (((m + n - j) * (j + 1)) as f64);
            }
        }
        c = 1.0;
        for j in 0..=n {
            den[j] = c * a.powi(j as i32);
            if j < n {
                c *= (n - j) as f64 / (((m + n - j) * (j + 1)) as f64);
            }
        }
        (num, den)
    }

    #[test]
    fn first_order_is_textbook() {
        let s = pade_surrogate(&det(1.0), 1, 1, 1.0).unwrap();
        assert!((s.numerator[0] - 1.0).abs() < 1e-14);
        assert!((s.numerator[1] + 0.5).abs() < 1e-14);
        assert!((s.denominator[0] - 1.0).abs() < 1e-14);
        assert!((s.denominator[1] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn agrees_with_the_closed_form_approximant() {
        // The moment system is near rank-deficient in f64, so individual
        // coefficients are only determined to the system's conditioning; the
        // rational function itself is what the construction pins down.
        // Compare against the approximant built from the closed-form
        // coefficients across the evaluation disc.
        let s = pade_surrogate(&det(0.1), 15, 15, 32.0).unwrap();
        let (num, den) = closed_form(0.1, 15, 15);
        for k in 0..64 {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / 64.0;
            for radius in [0.5, 4.0, 17.0, 32.0] {
                let z = Complex64::from_polar(radius, theta);
                let reference = crate::poly::eval(&num, z) / crate::poly::eval(&den, z);
                let got = s.eval(z);
                assert!(
                    (got - reference).norm() <= 1e-10 * reference.norm(),
                    "at {z}: {got} vs {reference}"
                );
            }
        }
        // Low orders are well conditioned and match coefficientwise.
        let s2 = pade_surrogate(&det(0.7), 3, 3, 1.0).unwrap();
        let (num2, den2) = closed_form(0.7, 3, 3);
        for (got, want) in s2
            .numerator
            .iter()
            .zip(&num2)
            .chain(s2.denominator.iter().zip(&den2))
        {
            assert!(
                (got - want).abs() <= 1e-10 * want.abs().max(1e-12),
                "{got} vs {want}"
            );
        }
    }

    #[test]
    fn value_at_origin_is_one() {
        let s = pade_surrogate(&det(0.25), 15, 15, 10.0).unwrap();
        let v = s.eval(Complex64::new(0.0, 0.0));
        assert!((v - 1.0).norm() < 1e-12);
    }

    #[test]
    fn accurate_at_moderate_arguments() {
        let s = pade_surrogate(&det(0.1), 15, 15, 32.0).unwrap();
        let v = s.eval(Complex64::new(17.0, 0.0));
        let exact = (-1.7f64).exp();
        assert!((v.re - exact).abs() < 1e-12 * exact, "{} vs {exact}", v.re);
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn relative_error_within_budget_on_small_disc() {
        // |s a| <= 5 must hold to 1e-10 relative.
        let a = 0.5;
        let s = pade_surrogate(&det(a), 15, 15, 5.0 / a).unwrap();
        assert!(s.validity_radius >= 5.0 / a);
        assert!(s.max_rel_error < 1e-10, "max rel error {}", s.max_rel_error);
    }

    #[test]
    fn validity_shrinks_to_pole_free_disc() {
        // Huge requested radius: the surrogate reports the disc it can serve.
        let s = pade_surrogate(&det(1.0), 15, 15, 1e6).unwrap();
        assert!(s.validity_radius < 1e6);
        let poles = poly::all_roots(&s.denominator).unwrap();
        for p in poles {
            assert!(p.norm() > s.validity_radius);
        }
    }

    #[test]
    fn rational_families_are_rejected() {
        let m = InterArrivalModel::exponential(2.0).unwrap();
        assert!(pade_surrogate(&m, 15, 15, 10.0).is_err());
    }
}
