//! Gegenbauer (ultraspherical) polynomials and the homogeneous
//! polynomial `psi_n` built from them.

use super::{gamma, pochhammer};
use crate::error::{Error, Result};

/// Highest degree evaluated by the recurrences.
pub const MAX_DEGREE: u32 = 4096;

/// `C_m^alpha(t)` by the forward three-term recurrence
/// `m C_m = 2(m+alpha-1) t C_{m-1} - (m+2alpha-2) C_{m-2}`.
pub fn gegenbauer(m: u32, alpha: f64, t: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::domain(format!(
            "gegenbauer index alpha = {alpha} must be positive"
        )));
    }
    if m > MAX_DEGREE {
        return Err(Error::accuracy(format!(
            "gegenbauer degree {m} exceeds {MAX_DEGREE}"
        )));
    }
    let mut prev = 1.0;
    if m == 0 {
        return Ok(prev);
    }
    let mut cur = 2.0 * alpha * t;
    for k in 2..=m {
        let kf = k as f64;
        let next = (2.0 * (kf + alpha - 1.0) * t * cur - (kf + 2.0 * alpha - 2.0) * prev) / kf;
        prev = cur;
        cur = next;
    }
    if !cur.is_finite() {
        return Err(Error::accuracy(format!(
            "C_{m}^{alpha}({t}) overflows"
        )));
    }
    Ok(cur)
}

/// Normalized polynomial `R_n(t) = n!/(2alpha)_n C_n^alpha(t)`, so `R_n(1) = 1`.
///
/// Evaluated by its own recurrence
/// `(2alpha+m-1) R_m = 2(m+alpha-1) t R_{m-1} - (m-1) R_{m-2}`,
/// which stays finite for every `alpha > -1/2` (at `alpha = 0` it is the
/// Chebyshev recurrence).
pub fn gegenbauer_normalized(n: u32, alpha: f64, t: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = t;
    for m in 2..=n {
        let mf = m as f64;
        let next = (2.0 * (mf + alpha - 1.0) * t * cur - (mf - 1.0) * prev) / (2.0 * alpha + mf - 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `C_m^alpha(t)` from the explicit finite sum
/// `1/Gamma(alpha) sum_k (-1)^k Gamma(m-k+alpha) / (k! (m-2k)!) (2t)^(m-2k)`.
///
/// Independent of the recurrence; used as a cross-check.
pub fn gegenbauer_explicit(m: u32, alpha: f64, t: f64) -> f64 {
    let g_alpha = gamma(alpha);
    let mut sum = 0.0;
    let mut k_fact = 1.0;
    for k in 0..=(m / 2) {
        if k > 0 {
            k_fact *= k as f64;
        }
        let rest = (m - 2 * k) as i32;
        let rest_fact = gamma(rest as f64 + 1.0);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * gamma((m - k) as f64 + alpha) / (k_fact * rest_fact) * (2.0 * t).powi(rest);
    }
    sum / g_alpha
}

/// `psi_n(u, v, phi) = n!/(2alpha)_n delta^n C_n^alpha((u - v cos phi)/delta)`
/// with `delta^2 = u^2 + v^2 - 2uv cos phi`.
///
/// Evaluated as a homogeneous polynomial in `(u - v cos phi, delta^2)`, so it
/// is finite (and continuous) where `delta = 0`.
pub fn psi(n: u32, alpha: f64, u: f64, v: f64, phi: f64) -> f64 {
    let c = phi.cos();
    let p = u - v * c;
    let d2 = (u - v).powi(2) + 2.0 * u * v * (1.0 - c);
    psi_from_parts(n, alpha, p, d2)
}

/// `psi_n` given `p = u - v cos phi` and `d2 = delta^2` directly.
///
/// Homogeneous form of the normalized recurrence:
/// `(2alpha+m-1) Psi_m = 2(m+alpha-1) p Psi_{m-1} - (m-1) d2 Psi_{m-2}`.
pub(crate) fn psi_from_parts(n: u32, alpha: f64, p: f64, d2: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = p;
    for m in 2..=n {
        let mf = m as f64;
        let next =
            (2.0 * (mf + alpha - 1.0) * p * cur - (mf - 1.0) * d2 * prev) / (2.0 * alpha + mf - 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `psi_n` from the explicit expansion
/// `n!/(Gamma(alpha)(2alpha)_n) sum_k (-1)^k 2^(n-2k) Gamma(n-k+alpha)/(k!(n-2k)!) p^(n-2k) d2^k`.
pub fn psi_explicit(n: u32, alpha: f64, u: f64, v: f64, phi: f64) -> Result<f64> {
    let c = phi.cos();
    let p = u - v * c;
    let d2 = u * u + v * v - 2.0 * u * v * c;
    let n_fact = gamma(n as f64 + 1.0);
    let pref = n_fact / (gamma(alpha) * pochhammer(2.0 * alpha, n)?);
    let mut sum = 0.0;
    for k in 0..=(n / 2) {
        let rest = (n - 2 * k) as i32;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * 2f64.powi(rest) * gamma((n - k) as f64 + alpha)
            / (gamma(k as f64 + 1.0) * gamma(rest as f64 + 1.0))
            * p.powi(rest)
            * d2.powi(k as i32);
    }
    Ok(pref * sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn base_cases() {
        assert_eq!(gegenbauer(0, 1.5, -0.2).unwrap(), 1.0);
        assert!((gegenbauer(1, 2.0, 0.3).unwrap() - 1.2).abs() < 1e-15);
    }

    #[test]
    fn value_at_one_is_pochhammer_ratio() {
        let v = gegenbauer(5, 0.9, 1.0).unwrap();
        let exact = pochhammer(1.8, 5).unwrap() / 120.0;
        assert!((v - exact).abs() < 1e-12 * exact);
    }

    #[test]
    fn low_degree_closed_forms() {
        let a: f64 = 1.7;
        let t: f64 = 0.37;
        let c2 = 2.0 * a * (a + 1.0) * t * t - a;
        let c3 = 4.0 / 3.0 * a * (a + 1.0) * (a + 2.0) * t.powi(3) - 2.0 * a * (a + 1.0) * t;
        assert!((gegenbauer(2, a, t).unwrap() - c2).abs() < 1e-14);
        assert!((gegenbauer(3, a, t).unwrap() - c3).abs() < 1e-14);
    }

    #[test]
    fn normalized_at_zero_index_is_chebyshev() {
        for n in 0..8u32 {
            for &t in &[-0.9, -0.2, 0.4, 1.0] {
                let cheb = (n as f64 * f64::acos(t)).cos();
                assert!((gegenbauer_normalized(n, 0.0, t) - cheb).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn rejects_nonpositive_index() {
        assert!(gegenbauer(3, 0.0, 0.5).is_err());
        assert!(gegenbauer(3, -0.2, 0.5).is_err());
        assert!(gegenbauer(MAX_DEGREE + 1, 1.0, 0.5).is_err());
    }

    #[test]
    fn psi_small_orders() {
        assert_eq!(psi(0, 1.3, 2.0, 1.0, 0.7), 1.0);
        let v = psi(1, 1.3, 2.0, 1.0, std::f64::consts::FRAC_PI_3);
        assert!((v - 1.5).abs() < 1e-15);
    }

    #[test]
    fn psi_is_finite_where_delta_vanishes() {
        // u = v, phi = 0: delta = 0 and u - v cos(phi) = 0
        for n in 0..6 {
            let v = psi(n, 0.8, 1.5, 1.5, 0.0);
            assert!(v.is_finite());
            if n > 0 {
                assert_eq!(v, 0.0);
            }
        }
    }

    proptest! {
        #[test]
        fn recurrence_matches_explicit_sum(m in 0u32..=12, alpha in 0.01f64..5.0, t in -1.0f64..=1.0) {
            let rec = gegenbauer(m, alpha, t).unwrap();
            let exp = gegenbauer_explicit(m, alpha, t);
            let scale = gegenbauer(m, alpha, 1.0).unwrap();
            prop_assert!((rec - exp).abs() <= 1e-10 * scale.max(rec.abs()));
        }

        #[test]
        fn normalized_matches_definition(n in 0u32..=10, alpha in 0.05f64..4.0, t in -1.0f64..=1.0) {
            let r = gegenbauer_normalized(n, alpha, t);
            let c = gegenbauer(n, alpha, t).unwrap();
            let norm = gamma(n as f64 + 1.0) / pochhammer(2.0 * alpha, n).unwrap();
            prop_assert!((r - norm * c).abs() <= 1e-12);
        }

        #[test]
        fn psi_matches_explicit_expansion(n in 0u32..=7, alpha in 0.1f64..3.0,
                                          u in 0.0f64..4.0, v in 0.0f64..4.0, phi in 0.0f64..std::f64::consts::PI) {
            let a = psi(n, alpha, u, v, phi);
            let b = psi_explicit(n, alpha, u, v, phi).unwrap();
            let scale = (u + v).powi(n as i32).max(1.0);
            prop_assert!((a - b).abs() <= 1e-11 * scale);
        }
    }

    #[test]
    fn special_values_at_both_ends() {
        for m in 0..=10u32 {
            for &a in &[0.3, 1.0, 2.7] {
                let top = pochhammer(2.0 * a, m).unwrap() / gamma(m as f64 + 1.0);
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                assert!((gegenbauer(m, a, 1.0).unwrap() - top).abs() <= 1e-12 * top);
                assert!((gegenbauer(m, a, -1.0).unwrap() - sign * top).abs() <= 1e-12 * top);
            }
        }
    }

    #[test]
    fn bounded_by_value_at_one() {
        for m in 0..=9u32 {
            for &a in &[0.2, 0.5, 1.7] {
                let top = gegenbauer(m, a, 1.0).unwrap();
                for i in 0..=2000 {
                    let t = -1.0 + 1e-3 * i as f64;
                    assert!(gegenbauer(m, a, t).unwrap().abs() <= top * (1.0 + 1e-14));
                }
            }
        }
    }

    #[test]
    fn orthogonality_with_sixteen_point_rule() {
        use crate::specfun::quadrature::{gauss_rule, RuleKind};
        let alpha: f64 = 1.2;
        let rule = gauss_rule(16, RuleKind::Jacobi(alpha - 0.5)).unwrap();
        let norm = |m: u32| {
            std::f64::consts::PI * gamma(2.0 * alpha + m as f64)
                / (2f64.powf(2.0 * alpha - 1.0) * gamma(m as f64 + 1.0) * (m as f64 + alpha) * gamma(alpha).powi(2))
        };
        let q = rule.integrate(|t| gegenbauer(3, alpha, t).unwrap().powi(2));
        assert!((q - norm(3)).abs() < 1e-10);
        let off = rule.integrate(|t| gegenbauer(3, alpha, t).unwrap() * gegenbauer(5, alpha, t).unwrap());
        assert!(off.abs() < 1e-10);
    }
}
