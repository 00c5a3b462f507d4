//! Normalized Bessel function of the first kind,
//! `j_alpha(x) = Gamma(alpha+1) (x/2)^(-alpha) J_alpha(x)`.
//!
//! For `|x| <= SERIES_LIMIT` the power series
//! `sum_k (-x^2/4)^k / (k! (alpha+1)_k)` is summed in double-double
//! arithmetic, which absorbs the cancellation between the large
//! intermediate terms (about `e^|x|`) and the O(1) result. Beyond that the
//! Hankel asymptotic expansion is used, and an accuracy error is raised if
//! it does not converge to double precision.

use super::dd::DoubleDouble;
use super::{gamma, ln_gamma};
use crate::error::{Error, Result};

/// Largest |x| summed by the power series.
pub const SERIES_LIMIT: f64 = 40.0;

const MAX_SERIES_TERMS: usize = 400;
const MAX_ASYMPTOTIC_TERMS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselMethod {
    /// Series up to `SERIES_LIMIT`, asymptotic expansion beyond.
    Auto,
    Series,
    Asymptotic,
}

/// `j_alpha(x)` for `alpha > -1/2`.
pub fn bessel_j_norm(alpha: f64, x: f64) -> Result<f64> {
    bessel_j_norm_with(alpha, x, BesselMethod::Auto)
}

pub fn bessel_j_norm_with(alpha: f64, x: f64, method: BesselMethod) -> Result<f64> {
    if !(alpha > -0.5) || !alpha.is_finite() {
        return Err(Error::domain(format!(
            "bessel order alpha = {alpha} must exceed -1/2"
        )));
    }
    if !x.is_finite() {
        return Err(Error::domain("bessel argument must be finite"));
    }
    let ax = x.abs();
    if ax == 0.0 {
        return Ok(1.0);
    }
    match method {
        BesselMethod::Series => series(alpha, ax),
        BesselMethod::Asymptotic => asymptotic(alpha, ax),
        BesselMethod::Auto if ax <= SERIES_LIMIT => series(alpha, ax),
        BesselMethod::Auto => asymptotic(alpha, ax),
    }
}

fn series(alpha: f64, x: f64) -> Result<f64> {
    let q = DoubleDouble::from_prod(x, x).mul_f64(0.25);
    let mut term = DoubleDouble::ONE;
    let mut sum = DoubleDouble::ONE;
    for k in 1..=MAX_SERIES_TERMS {
        let kf = k as f64;
        let denom = DoubleDouble::from_sum(alpha, kf).mul_f64(kf);
        term = -(term * q) / denom;
        sum = sum + term;
        // past the peak the tail alternates and decreases, so it is bounded
        // by the last term
        if denom.hi > q.hi && term.hi.abs() <= 1e-33 * sum.hi.abs().max(1e-300) {
            return Ok(sum.to_f64());
        }
    }
    Err(Error::accuracy(format!(
        "bessel series for alpha={alpha}, x={x} did not terminate"
    )))
}

fn asymptotic(alpha: f64, x: f64) -> Result<f64> {
    let mu = 4.0 * alpha * alpha;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut t: f64 = 1.0;
    let mut prev = f64::INFINITY;
    let mut converged = false;
    for k in 1..=MAX_ASYMPTOTIC_TERMS {
        let odd = (2 * k - 1) as f64;
        t *= (mu - odd * odd) / (8.0 * k as f64 * x);
        if t.abs() > prev {
            // divergent tail begins; accept only if we are already below
            // double precision
            converged = prev <= 1e-16;
            break;
        }
        match k % 4 {
            1 => q += t,
            2 => p -= t,
            3 => q -= t,
            _ => p += t,
        }
        if t == 0.0 || t.abs() <= 1e-17 * p.abs().max(q.abs()) {
            converged = true;
            break;
        }
        prev = t.abs();
    }
    if !converged {
        return Err(Error::accuracy(format!(
            "asymptotic expansion for j_{alpha}({x}) does not reach double precision; \
             argument is outside the validated region"
        )));
    }
    let chi = x - (0.5 * alpha + 0.25) * std::f64::consts::PI;
    let big_j = (2.0 / (std::f64::consts::PI * x)).sqrt() * (p * chi.cos() - q * chi.sin());
    let scale = if alpha < 100.0 {
        gamma(alpha + 1.0) * (2.0 / x).powf(alpha)
    } else {
        (ln_gamma(alpha + 1.0) + alpha * (2.0 / x).ln()).exp()
    };
    let value = scale * big_j;
    if !value.is_finite() {
        return Err(Error::accuracy(format!("j_{alpha}({x}) overflows")));
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_at_origin_is_one() {
        assert_eq!(bessel_j_norm(0.75, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j_norm(2.0, -0.0).unwrap(), 1.0);
    }

    #[test]
    fn half_order_is_sinc() {
        // j_{1/2}(x) = sin(x)/x
        for &x in &[0.1, 1.0, 2.5, 7.0, 15.0, 33.0] {
            let v = bessel_j_norm(0.5, x).unwrap();
            assert!((v - x.sin() / x).abs() < 1e-15, "x={x}");
        }
        assert!(bessel_j_norm(0.5, std::f64::consts::PI).unwrap().abs() < 1e-12);
    }

    #[test]
    fn order_minus_half_is_cosine() {
        // alpha -> -1/2 is excluded, but alpha = 3/2 has a closed form:
        // j_{3/2}(x) = 3 (sin x - x cos x) / x^3
        for &x in &[0.5, 3.0, 9.0, 25.0, 39.0, 45.0, 80.0] {
            let v = bessel_j_norm(1.5, x).unwrap();
            let exact = 3.0 * (x.sin() - x * x.cos()) / (x * x * x);
            assert!((v - exact).abs() < 1e-15, "x={x}: {v} vs {exact}");
        }
    }

    #[test]
    fn series_and_asymptotic_agree_in_overlap() {
        for &alpha in &[0.0, 0.3, 1.1, 2.6] {
            for &x in &[30.0, 36.0, 40.0] {
                let s = bessel_j_norm_with(alpha, x, BesselMethod::Series).unwrap();
                let a = bessel_j_norm_with(alpha, x, BesselMethod::Asymptotic).unwrap();
                assert!((s - a).abs() < 1e-15, "alpha={alpha} x={x}: {s} vs {a}");
            }
        }
    }

    #[test]
    fn is_even() {
        for &x in &[0.3, 4.1, 17.0, 52.0] {
            assert_eq!(
                bessel_j_norm(1.3, x).unwrap(),
                bessel_j_norm(1.3, -x).unwrap()
            );
        }
    }

    #[test]
    fn rejects_bad_order() {
        assert!(bessel_j_norm(-0.5, 1.0).is_err());
        assert!(bessel_j_norm(f64::NAN, 1.0).is_err());
        assert!(bessel_j_norm(1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn large_order_far_out_is_reported() {
        // the asymptotic series diverges immediately here
        assert!(matches!(
            bessel_j_norm(60.0, 45.0),
            Err(Error::Accuracy(_))
        ));
    }

    #[test]
    fn derivative_formula() {
        // d/dx j_a(x) = -x j_{a+1}(x) / (2(a+1))
        let h = 1e-5;
        for &alpha in &[0.2, 1.3, 3.0] {
            for &x in &[0.7, 2.9, 8.5] {
                let fd = (bessel_j_norm(alpha, x + h).unwrap() - bessel_j_norm(alpha, x - h).unwrap())
                    / (2.0 * h);
                let exact = -x * bessel_j_norm(alpha + 1.0, x).unwrap() / (2.0 * (alpha + 1.0));
                assert!((fd - exact).abs() <= 1e-6 * exact.abs(), "alpha={alpha} x={x}");
            }
        }
    }

    #[test]
    fn three_term_relation() {
        for n in 1..=4u32 {
            for &alpha in &[0.1, 0.9, 2.4] {
                let a = alpha + n as f64;
                if a - 2.0 <= -0.5 {
                    continue;
                }
                for i in 0..=40 {
                    let u = 0.25 * i as f64;
                    let r = bessel_j_norm(a - 1.0, u).unwrap()
                        - bessel_j_norm(a - 2.0, u).unwrap()
                        - u * u / (4.0 * (a - 1.0) * a) * bessel_j_norm(a, u).unwrap();
                    assert!(r.abs() < 1e-11, "n={n} alpha={alpha} u={u}: {r}");
                }
            }
        }
    }
}
