//! Scalar special functions and quadrature rules.
//!
//! Everything downstream (kernels, transforms, operators) is built on the
//! normalized Bessel function `j_alpha`, Gegenbauer polynomials, and the
//! Gauss-Jacobi rules in [`quadrature`].

pub mod bessel;
pub mod dd;
pub mod gegenbauer;
pub mod quadrature;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use bessel::{bessel_j_norm, bessel_j_norm_with, BesselMethod};
pub use gegenbauer::{gegenbauer, gegenbauer_explicit, gegenbauer_normalized, psi, psi_explicit};
pub use quadrature::{gauss_rule, Integrator, JacobiWeight, QuadratureRule, RuleKind};

/// Gamma function (`libm::tgamma`).
#[inline]
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// Natural log of |Gamma(x)|.
#[inline]
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// Ratio Gamma(a) / Gamma(b) for positive a, b, switching to logs when
/// either argument is large enough to overflow.
pub fn gamma_ratio(a: f64, b: f64) -> f64 {
    if a < 150.0 && b < 150.0 {
        gamma(a) / gamma(b)
    } else {
        (ln_gamma(a) - ln_gamma(b)).exp()
    }
}

/// Rising factorial `(a)_m = Gamma(a+m)/Gamma(a)` by direct product.
///
/// The product is exact in structure for every real `a`, including the
/// non-positive integers where the gamma ratio has poles (the product then
/// contains a zero factor and the value is 0).
pub fn pochhammer(a: f64, m: u32) -> Result<f64> {
    if !a.is_finite() {
        return Err(Error::domain(format!("pochhammer: non-finite argument {a}")));
    }
    let mut acc = 1.0;
    for k in 0..m {
        acc *= a + k as f64;
    }
    if !acc.is_finite() {
        return Err(Error::accuracy(format!("pochhammer({a}, {m}) overflows")));
    }
    Ok(acc)
}

/// Sonine constant `C_alpha = Gamma(alpha+1) / (sqrt(pi) Gamma(alpha+1/2))`.
pub fn sonine_constant(alpha: f64) -> f64 {
    gamma_ratio(alpha + 1.0, alpha + 0.5) / std::f64::consts::PI.sqrt()
}

/// The `(n, kappa)` parameter pair with its derived constants.
///
/// `alpha = kappa n - n/2` is the Bessel order of the even part of the
/// generalized Hankel kernel, `m` the normalization of the measure
/// `d mu(x) = |x|^(2 kappa + 2/n - 2) dx / m`, and `c_alpha` the Sonine constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    n: u32,
    kappa: f64,
    alpha: f64,
    m: f64,
    c_alpha: f64,
}

impl Params {
    pub fn new(n: u32, kappa: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("n must be a positive integer"));
        }
        let nf = n as f64;
        if !kappa.is_finite() || kappa <= (nf - 1.0) / (2.0 * nf) {
            return Err(Error::domain(format!(
                "kappa = {kappa} must exceed (n-1)/(2n) = {}",
                (nf - 1.0) / (2.0 * nf)
            )));
        }
        let alpha = kappa * nf - nf / 2.0;
        let m = if alpha < 150.0 {
            2.0 * (2.0 / nf).powf(alpha) * gamma(alpha + 1.0)
        } else {
            (std::f64::consts::LN_2 + alpha * (2.0 / nf).ln() + ln_gamma(alpha + 1.0)).exp()
        };
        let c_alpha = sonine_constant(alpha);
        if !(m.is_finite() && m > 0.0 && c_alpha > 0.0) {
            return Err(Error::accuracy(format!(
                "normalization constants overflow for n={n}, kappa={kappa}"
            )));
        }
        Ok(Self {
            n,
            kappa,
            alpha,
            m,
            c_alpha,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Normalization `M_{kappa,n}` of the measure.
    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn c_alpha(&self) -> f64 {
        self.c_alpha
    }

    /// `(-1)^n`.
    pub fn parity_sign(&self) -> f64 {
        if self.n % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Exponent of `|x|` in the density of the measure.
    pub fn mu_exponent(&self) -> f64 {
        2.0 * self.kappa + 2.0 / self.n as f64 - 2.0
    }

    /// Whether `kappa > (n-1)/n`, the stronger of the two admissibility
    /// bounds on `kappa`. Parameters between `(n-1)/(2n)` and `(n-1)/n` are accepted but
    /// flagged in reports.
    pub fn in_strong_regime(&self) -> bool {
        let nf = self.n as f64;
        self.kappa > (nf - 1.0) / nf
    }

    /// `|x|^(1/n)`.
    #[inline]
    pub fn root(&self, x: f64) -> f64 {
        nth_root(x.abs(), self.n)
    }
}

/// `x^(1/n)` for `x >= 0`, with exact square and cube roots.
#[inline]
pub fn nth_root(x: f64, n: u32) -> f64 {
    match n {
        1 => x,
        2 => x.sqrt(),
        3 => x.cbrt(),
        _ => x.powf(1.0 / n as f64),
    }
}
