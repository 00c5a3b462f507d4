//! Product-formula kernels and the signed measure `nu_{x,y}`.
//!
//! Every integral over the output variable is taken in the angular
//! parametrization `w = delta(u, v, phi)`, `t = cos(phi)`, where the
//! Bessel kernel turns into the Gauss-Jacobi weight
//! `C_alpha (1 - t^2)^(alpha - 1/2) dt`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::gegenbauer::psi_from_parts;
use crate::specfun::quadrature::Scalar;
use crate::specfun::{
    bessel_j_norm, gamma, gegenbauer, gegenbauer_normalized, nth_root, pochhammer,
    sonine_constant, Integrator, JacobiWeight, Params,
};

pub use crate::specfun::psi;

/// Roundoff allowance for `|sigma| > 1` before it is treated as an error.
pub const SIGMA_CLAMP: f64 = 1e-12;

/// Bessel arguments `u, v`, output radius `w` and angle `phi`, with
/// `delta = delta(u, v, phi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeomArgs {
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub phi: f64,
    pub delta: f64,
}

impl GeomArgs {
    /// Point on the angular parametrization; `w` is set to `delta`.
    pub fn new(u: f64, v: f64, phi: f64) -> Result<Self> {
        if !(u >= 0.0 && v >= 0.0) {
            return Err(Error::domain(format!("u = {u}, v = {v} must be nonnegative")));
        }
        if !(0.0..=std::f64::consts::PI).contains(&phi) {
            return Err(Error::domain(format!("phi = {phi} must lie in [0, pi]")));
        }
        let d = delta(u, v, phi);
        Ok(Self {
            u,
            v,
            w: d,
            phi,
            delta: d,
        })
    }
}

/// A point `(x, y, z)` of the kernel together with a spectral parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriplePoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub lambda: f64,
}

/// `sqrt(u^2 + v^2 - 2uv cos(phi))`, in a form that stays accurate near
/// `phi = 0`.
pub fn delta(u: f64, v: f64, phi: f64) -> f64 {
    let half = (0.5 * phi).sin();
    ((u - v).powi(2) + 4.0 * u * v * half * half).sqrt()
}

/// `delta` as a function of `t = cos(phi)`.
#[inline]
pub(crate) fn delta_t(u: f64, v: f64, t: f64) -> f64 {
    ((u - v).powi(2) + 2.0 * u * v * (1.0 - t)).max(0.0).sqrt()
}

/// Bessel kernel `K_B^alpha(u, v, w)`; zero outside `|u - v| <= w <= u + v`.
pub fn k_bessel(alpha: f64, u: f64, v: f64, w: f64) -> Result<f64> {
    if !(alpha > -0.5) {
        return Err(Error::domain(format!("alpha = {alpha} must exceed -1/2")));
    }
    if !(u > 0.0 && v > 0.0 && w > 0.0) {
        return Err(Error::domain("k_bessel needs u, v, w > 0"));
    }
    let lo = (u - v).abs();
    let hi = u + v;
    if w < lo || w > hi {
        return Ok(0.0);
    }
    // factored form of [(u+v)^2 - w^2][w^2 - (u-v)^2]
    let prod = (hi - w) * (hi + w) * (w - lo) * (w + lo);
    let c = 2f64.powf(1.0 - 2.0 * alpha) * sonine_constant(alpha);
    Ok(c * prod.powf(alpha - 0.5) / (u * v * w).powf(2.0 * alpha))
}

/// `sigma_{x,y,z} = (|x|^(2/n) + |y|^(2/n) - |z|^(2/n)) / (2 |xy|^(1/n))`.
pub fn sigma(x: f64, y: f64, z: f64, n: u32) -> f64 {
    let a = nth_root(x.abs(), n);
    let b = nth_root(y.abs(), n);
    let c = nth_root(z.abs(), n);
    (a * a + b * b - c * c) / (2.0 * a * b)
}

fn clamp_sigma(s: f64) -> Result<f64> {
    if s.is_nan() || s.abs() > 1.0 + SIGMA_CLAMP {
        return Err(Error::domain(format!("sigma = {s} lies outside [-1, 1]")));
    }
    Ok(s.clamp(-1.0, 1.0))
}

/// `xi(x, y, z) = sgn(xy) n!/(2alpha)_n C_n^alpha(sigma_{x,y,z})`.
pub fn xi(p: &Params, x: f64, y: f64, z: f64) -> Result<f64> {
    if x == 0.0 || y == 0.0 {
        return Err(Error::domain("xi needs x and y nonzero"));
    }
    let s = clamp_sigma(sigma(x, y, z, p.n()))?;
    let sign = (x * y).signum();
    Ok(sign * gegenbauer_normalized(p.n(), p.alpha(), s))
}

/// `1 + (-1)^n xi(x,y,z) + xi(z,x,y) + xi(y,z,x)`, for `x, y, z` nonzero.
pub fn kernel_factor(p: &Params, x: f64, y: f64, z: f64) -> Result<f64> {
    if z == 0.0 {
        return Err(Error::domain("kernel factor needs z nonzero"));
    }
    Ok(1.0 + p.parity_sign() * xi(p, x, y, z)? + xi(p, z, x, y)? + xi(p, y, z, x)?)
}

/// `K_{kappa,n}(x, y, z)`, the density of `nu_{x,y}` against `mu`.
///
/// Zero at `z = 0` and for `|z|^(1/n)` outside the open interval
/// `(| |x|^(1/n) - |y|^(1/n) |, |x|^(1/n) + |y|^(1/n))`.
pub fn kernel_k(p: &Params, x: f64, y: f64, z: f64) -> Result<f64> {
    if x == 0.0 || y == 0.0 {
        return Err(Error::domain("kernel_k needs x and y nonzero"));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    let a = p.root(x);
    let b = p.root(y);
    let c = p.root(z);
    if !(c > (a - b).abs() && c < a + b) {
        return Ok(0.0);
    }
    let kb = k_bessel(p.alpha(), a, b, c)?;
    let factor = kernel_factor(p, x, y, z)?;
    Ok(p.m() / (2.0 * p.n() as f64) * kb * factor)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NuCase {
    KernelDensity,
    PointMassAtX,
    PointMassAtY,
}

/// The measure `nu_{x,y}` with `int B_lambda d nu = B_lambda(x) B_lambda(y)`.
#[derive(Debug, Clone, Copy)]
pub struct MeasureNu {
    params: Params,
    x: f64,
    y: f64,
    case: NuCase,
    integrator: Integrator,
}

impl MeasureNu {
    pub fn new(params: Params, x: f64, y: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite()) {
            return Err(Error::domain("measure endpoints must be finite"));
        }
        let case = if y == 0.0 {
            NuCase::PointMassAtX
        } else if x == 0.0 {
            NuCase::PointMassAtY
        } else {
            NuCase::KernelDensity
        };
        Ok(Self {
            params,
            x,
            y,
            case,
            integrator: Integrator::default(),
        })
    }

    pub fn with_integrator(self, integrator: Integrator) -> Self {
        Self { integrator, ..self }
    }

    pub fn case(&self) -> NuCase {
        self.case
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    /// `(| |x|^(1/n) - |y|^(1/n) |, |x|^(1/n) + |y|^(1/n))`, the support in the
    /// `|z|^(1/n)` variable, for the density case.
    pub fn support_radii(&self) -> Option<(f64, f64)> {
        match self.case {
            NuCase::KernelDensity => {
                let a = self.params.root(self.x);
                let b = self.params.root(self.y);
                Some(((a - b).abs(), a + b))
            }
            _ => None,
        }
    }

    /// Whether `z` lies in the open support set `I_{x,y}`.
    pub fn in_support(&self, z: f64) -> bool {
        match self.case {
            NuCase::KernelDensity => {
                let (lo, hi) = self.support_radii().expect("density case");
                let c = self.params.root(z);
                z != 0.0 && c > lo && c < hi
            }
            NuCase::PointMassAtX => z == self.x,
            NuCase::PointMassAtY => z == self.y,
        }
    }

    /// Density against `mu` (density case only).
    pub fn density(&self, z: f64) -> Result<f64> {
        match self.case {
            NuCase::KernelDensity => kernel_k(&self.params, self.x, self.y, z),
            _ => Err(Error::invalid("a point mass has no density")),
        }
    }

    /// Branch factors `(E_+, E_-)` at `t`: the kernel factor evaluated at
    /// `z = +delta(t)^n` and `z = -delta(t)^n`.
    fn branch_factors(&self, t: f64) -> (f64, f64, f64) {
        let p = &self.params;
        let n = p.n();
        let alpha = p.alpha();
        let a = p.root(self.x);
        let b = p.root(self.y);
        let d = delta_t(a, b, t);
        let sx = self.x.signum();
        let sy = self.y.signum();
        let base = 1.0 + p.parity_sign() * sx * sy * gegenbauer_normalized(n, alpha, t);
        let (ra, rb) = if d > 0.0 {
            (
                gegenbauer_normalized(n, alpha, ((a - b * t) / d).clamp(-1.0, 1.0)),
                gegenbauer_normalized(n, alpha, ((b - a * t) / d).clamp(-1.0, 1.0)),
            )
        } else {
            (gegenbauer_normalized(n, alpha, 0.0), gegenbauer_normalized(n, alpha, 0.0))
        };
        let odd = sx * ra + sy * rb;
        (d.powi(n as i32), base + odd, base - odd)
    }

    fn t_breaks(&self, z_breaks: &[f64]) -> Vec<f64> {
        let a = self.params.root(self.x);
        let b = self.params.root(self.y);
        let mut out: Vec<f64> = z_breaks
            .iter()
            .filter(|z| **z != 0.0 && z.is_finite())
            .map(|&z| {
                let c = self.params.root(z);
                (a * a + b * b - c * c) / (2.0 * a * b)
            })
            .filter(|t| *t > -1.0 && *t < 1.0)
            .collect();
        // delta(t) varies on the scale 1 - t ~ (a - b)^2 / (2ab) near t = 1
        let eps = (a - b).powi(2) / (2.0 * a * b);
        let mut gap = eps;
        while gap > 1e-300 && gap < 0.5 {
            out.push(1.0 - gap);
            gap *= 4.0;
        }
        out
    }

    /// `int f d nu`. `z_breaks` lists points where `f` is not smooth.
    pub fn integrate<T, F>(&self, z_breaks: &[f64], mut f: F) -> Result<T>
    where
        T: Scalar,
        F: FnMut(f64) -> Result<T>,
    {
        match self.case {
            NuCase::PointMassAtX => f(self.x),
            NuCase::PointMassAtY => f(self.y),
            NuCase::KernelDensity => {
                let breaks = self.t_breaks(z_breaks);
                let w = JacobiWeight::symmetric(self.params.alpha() - 0.5);
                let v = self.integrator.try_integrate(w, &breaks, |t| {
                    let (zn, ep, em) = self.branch_factors(t);
                    Ok(f(zn)? * ep + f(-zn)? * em)
                })?;
                Ok(v * (0.5 * self.params.c_alpha()))
            }
        }
    }

    /// `nu(R)`.
    pub fn mass(&self) -> Result<f64> {
        self.integrate(&[], |_| Ok(1.0))
    }

    /// `int |d nu|`. The zeros of the branch factors are located first and
    /// used as breakpoints so that each piece is smooth.
    pub fn total_variation(&self) -> Result<f64> {
        if self.case != NuCase::KernelDensity {
            return Ok(1.0);
        }
        let mut breaks = Vec::new();
        for branch in 0..2 {
            let e = |t: f64| {
                let (_, ep, em) = self.branch_factors(t);
                if branch == 0 {
                    ep
                } else {
                    em
                }
            };
            breaks.extend(sign_changes(e, 400));
        }
        let w = JacobiWeight::symmetric(self.params.alpha() - 0.5);
        let v: f64 = self.integrator.with_tol(1e-10).try_integrate(w, &breaks, |t| {
            let (_, ep, em) = self.branch_factors(t);
            Ok(ep.abs() + em.abs())
        })?;
        Ok(0.5 * self.params.c_alpha() * v)
    }
}

/// Roots of `f` on `(-1, 1)` bracketed on a uniform-in-angle grid and
/// refined by bisection.
fn sign_changes<F: Fn(f64) -> f64>(f: F, samples: usize) -> Vec<f64> {
    let mut roots = Vec::new();
    let node = |i: usize| -(std::f64::consts::PI * i as f64 / samples as f64).cos();
    let mut t0 = node(1);
    let mut f0 = f(t0);
    for i in 2..samples {
        let t1 = node(i);
        let f1 = f(t1);
        if f0 == 0.0 {
            roots.push(t0);
        } else if f0 * f1 < 0.0 {
            let (mut lo, mut hi, mut flo) = (t0, t1, f0);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid);
                if fm * flo > 0.0 {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        t0 = t1;
        f0 = f1;
    }
    roots
}

/// `int f d nu_{x,y}` with the default integrator.
pub fn nu_integrate<T, F>(p: &Params, x: f64, y: f64, f: F) -> Result<T>
where
    T: Scalar,
    F: FnMut(f64) -> Result<T>,
{
    MeasureNu::new(*p, x, y)?.integrate(&[], f)
}

/// Both sides of an identity and their discrepancy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualRecord {
    pub lhs: f64,
    pub rhs: f64,
    pub abs_err: f64,
    pub rel_err: f64,
}

impl ResidualRecord {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        let abs_err = (lhs - rhs).abs();
        let rel_err = abs_err / lhs.abs().max(rhs.abs()).max(1e-300);
        Self {
            lhs,
            rhs,
            abs_err,
            rel_err,
        }
    }
}

fn require_alpha(alpha: f64, n: u32) -> Result<()> {
    let ok = if n == 0 { alpha > -0.5 } else { alpha > 0.0 };
    if !ok || !alpha.is_finite() {
        return Err(Error::domain(format!(
            "alpha = {alpha} is outside the admissible range for n = {n}"
        )));
    }
    Ok(())
}

fn require_nonnegative(u: f64, v: f64) -> Result<()> {
    if !(u >= 0.0 && v >= 0.0 && u.is_finite() && v.is_finite()) {
        return Err(Error::domain(format!("u = {u}, v = {v} must be finite and >= 0")));
    }
    Ok(())
}

/// `C_alpha int_{-1}^{1} g(t) (1 - t^2)^(alpha - 1/2) dt`.
fn angular_mean<F: FnMut(f64) -> Result<f64>>(alpha: f64, ig: &Integrator, f: F) -> Result<f64> {
    let v = ig.try_integrate(JacobiWeight::symmetric(alpha - 0.5), &[], f)?;
    Ok(sonine_constant(alpha) * v)
}

/// Sonine product formula `j(u) j(v) = C_alpha int_0^pi j(delta) sin^(2alpha)`.
pub fn check_sonine(alpha: f64, u: f64, v: f64) -> Result<ResidualRecord> {
    require_alpha(alpha, 0)?;
    require_nonnegative(u, v)?;
    let lhs = bessel_j_norm(alpha, u)? * bessel_j_norm(alpha, v)?;
    let rhs = angular_mean(alpha, &Integrator::default(), |t| {
        bessel_j_norm(alpha, delta_t(u, v, t))
    })?;
    Ok(ResidualRecord::new(lhs, rhs))
}

/// `u^n j_{alpha+n}(u) j_alpha(v) = C_alpha int_0^pi j_{alpha+n}(delta) psi_n sin^(2alpha)`.
pub fn check_th0(alpha: f64, n: u32, u: f64, v: f64) -> Result<ResidualRecord> {
    require_alpha(alpha, n)?;
    require_nonnegative(u, v)?;
    let an = alpha + n as f64;
    let lhs = u.powi(n as i32) * bessel_j_norm(an, u)? * bessel_j_norm(alpha, v)?;
    let rhs = angular_mean(alpha, &Integrator::default(), |t| {
        let d2 = (u - v).powi(2) + 2.0 * u * v * (1.0 - t);
        let ps = psi_from_parts(n, alpha, u - v * t, d2.max(0.0));
        Ok(bessel_j_norm(an, d2.max(0.0).sqrt())? * ps)
    })?;
    Ok(ResidualRecord::new(lhs, rhs))
}

/// `(uv)^n / 2^(2n) j_{alpha+n}(u) j_{alpha+n}(v)
///   = n! ((alpha+1)_n)^2 / (2alpha)_n int j_alpha(w) K_B C_n^alpha((u^2+v^2-w^2)/(2uv)) w^(2alpha+1) dw`.
pub fn check_key1(alpha: f64, n: u32, u: f64, v: f64) -> Result<ResidualRecord> {
    if !(alpha > 0.0) {
        return Err(Error::domain(format!("alpha = {alpha} must be positive")));
    }
    if !(u > 0.0 && v > 0.0) {
        return Err(Error::domain("check_key1 needs u, v > 0"));
    }
    let an = alpha + n as f64;
    let lhs = (u * v).powi(n as i32) / 4f64.powi(n as i32)
        * bessel_j_norm(an, u)?
        * bessel_j_norm(an, v)?;
    let pre = gamma(n as f64 + 1.0) * pochhammer(alpha + 1.0, n)?.powi(2)
        / pochhammer(2.0 * alpha, n)?;
    let integral = angular_mean(alpha, &Integrator::default(), |t| {
        Ok(bessel_j_norm(alpha, delta_t(u, v, t))? * gegenbauer(n, alpha, t)?)
    })?;
    Ok(ResidualRecord::new(lhs, pre * integral))
}

/// `int_0^inf K_B(u, v, w) w^(2alpha+1) dw = 1`, with `K_B` evaluated
/// explicitly at `w = delta(u, v, phi)`.
pub fn check_kalpha(alpha: f64, u: f64, v: f64) -> Result<ResidualRecord> {
    if !(u > 0.0 && v > 0.0) {
        return Err(Error::domain("check_kalpha needs u, v > 0"));
    }
    // dw = uv dt / w, and the rule carries (1 - t^2)^(alpha - 1/2)
    let ig = Integrator::default();
    let v_int = ig.try_integrate(JacobiWeight::symmetric(alpha - 0.5), &[], |t| {
        let w = delta_t(u, v, t);
        let kb = k_bessel(alpha, u, v, w)?;
        Ok(kb * w.powf(2.0 * alpha) * u * v / (1.0 - t * t).powf(alpha - 0.5))
    })?;
    Ok(ResidualRecord::new(v_int, 1.0))
}

/// Sonine's integral
/// `j_alpha(x) = 2 Gamma(alpha+1)/(Gamma(beta+1) Gamma(alpha-beta))
///   int_0^1 j_beta(xt) (1-t^2)^(alpha-beta-1) t^(2beta+1) dt`, `alpha > beta > -1/2`,
/// evaluated after `s = t^2`.
pub fn check_sonine_integral(alpha: f64, beta: f64, x: f64) -> Result<ResidualRecord> {
    if !(alpha > beta && beta > -0.5) {
        return Err(Error::domain(format!(
            "need alpha > beta > -1/2, got alpha = {alpha}, beta = {beta}"
        )));
    }
    let lhs = bessel_j_norm(alpha, x)?;
    // s = (1 + tau)/2: (1-s)^(alpha-beta-1) s^beta ds/2 becomes a Jacobi weight
    let a = alpha - beta - 1.0;
    let w = JacobiWeight { a, b: beta };
    let integral = Integrator::default().try_integrate(w, &[], |tau| {
        let s = 0.5 * (1.0 + tau);
        bessel_j_norm(beta, x * s.sqrt())
    })?;
    let scale = 0.5f64.powf(a + beta + 1.0) * 0.5;
    let pre = 2.0 * gamma(alpha + 1.0) / (gamma(beta + 1.0) * gamma(alpha - beta));
    Ok(ResidualRecord::new(lhs, pre * scale * integral))
}

/// Central difference of `psi_n` in `u` against `n psi_{n-1}`.
pub fn check_psi_ladder(n: u32, alpha: f64, u: f64, v: f64, phi: f64, h: f64) -> Result<ResidualRecord> {
    if n == 0 {
        return Err(Error::domain("the ladder starts at n = 1"));
    }
    require_alpha(alpha, n)?;
    let fd = (psi(n, alpha, u + h, v, phi) - psi(n, alpha, u - h, v, phi)) / (2.0 * h);
    Ok(ResidualRecord::new(fd, n as f64 * psi(n - 1, alpha, u, v, phi)))
}

/// Interior point of the negative part of `nu_{X,Y}` with `X = x^n`,
/// `Y = y^n`, `0 < y < x`.
///
/// For odd `n` the kernel is negative just outside the inner edge
/// `|z|^(1/n) = x - y` on the negative axis; for even `n`, just inside the
/// outer edge `|z|^(1/n) = x + y`. At the edges themselves the kernel factor
/// vanishes. Returns `(z, K(X, Y, z))`.
pub fn negativity_witness(p: &Params, x: f64, y: f64, eta: f64) -> Result<(f64, f64)> {
    if !(x > y && y > 0.0 && eta > 0.0 && eta < 1.0) {
        return Err(Error::domain("witness needs 0 < y < x and 0 < eta < 1"));
    }
    let n = p.n() as i32;
    let big_x = x.powi(n);
    let big_y = y.powi(n);
    let r = if p.n() % 2 == 1 {
        (x - y) * (1.0 + eta)
    } else {
        (x + y) * (1.0 - eta)
    };
    let z = -r.powi(n);
    Ok((z, kernel_k(p, big_x, big_y, z)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn delta_examples() {
        assert_eq!(delta(1.0, 1.0, 0.0), 0.0);
        assert!((delta(1.0, 1.0, PI) - 2.0).abs() < 1e-15);
        assert!((delta(3.0, 4.0, PI / 2.0) - 5.0).abs() < 1e-15);
        let g = GeomArgs::new(2.0, 0.5, 0.0).unwrap();
        assert!((g.delta - 1.5).abs() < 1e-15);
        assert!(GeomArgs::new(-1.0, 1.0, 0.2).is_err());
    }

    #[test]
    fn k_bessel_support_and_homogeneity() {
        assert_eq!(k_bessel(1.0, 1.0, 1.0, 3.0).unwrap(), 0.0);
        let (a, u, v, w) = (0.8, 1.0, 1.5, 2.0);
        let lhs = k_bessel(a, 2.0 * u, 2.0 * v, 2.0 * w).unwrap();
        let rhs = 2f64.powf(-2.0 * a - 2.0) * k_bessel(a, u, v, w).unwrap();
        assert!((lhs - rhs).abs() < 1e-14 * rhs);
        assert!(k_bessel(-0.5, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn k_bessel_normalization() {
        let r = check_kalpha(0.6, 1.2, 0.7).unwrap();
        assert!(r.abs_err < 1e-9, "{r:?}");
    }

    #[test]
    fn sigma_examples() {
        assert!(sigma(3.0, 4.0, 5.0, 1).abs() < 1e-15);
        assert!((sigma(1.0, 1.0, 0.0, 2) - 1.0).abs() < 1e-15);
        let s1 = sigma(7.0, 14.0, 10.5, 3);
        let s0 = sigma(1.0, 2.0, 1.5, 3);
        assert!((s1 - s0).abs() < 1e-14);
    }

    #[test]
    fn xi_examples() {
        let p = Params::new(3, 0.9).unwrap();
        // |z|^(1/3) = |x^(1/3) - y^(1/3)| gives sigma = 1
        let (x, y): (f64, f64) = (8.0, 1.0);
        let z = (x.cbrt() - y.cbrt()).powi(3);
        assert!((xi(&p, x, y, z).unwrap() - 1.0).abs() < 1e-12);
        let v = xi(&p, 2.0, 1.3, 0.9).unwrap();
        assert_eq!(xi(&p, -2.0, 1.3, 0.9).unwrap(), -v);
        assert!(xi(&p, 1.0, 1.0, 100.0).is_err());
        assert!(xi(&p, 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn xi_clamps_roundoff() {
        let p = Params::new(2, 0.8).unwrap();
        // z at the outer edge; sigma = -1 up to rounding
        let z = (1.0f64.sqrt() + 2.0f64.sqrt()).powi(2);
        assert!(xi(&p, 1.0, 2.0, z).is_ok());
    }

    #[test]
    fn kernel_symmetries() {
        let p = Params::new(2, 0.8).unwrap();
        let (x, y, z) = (1.1, 0.5, 1.3);
        let k = kernel_k(&p, x, y, z).unwrap();
        assert!(k != 0.0);
        assert!((k - kernel_k(&p, y, x, z).unwrap()).abs() < 1e-12 * k.abs());
        assert!((k - kernel_k(&p, x, z, y).unwrap()).abs() < 1e-12 * k.abs());
        assert!((k - kernel_k(&p, z, y, x).unwrap()).abs() < 1e-12 * k.abs());
        assert_eq!(kernel_k(&p, x, y, 0.0).unwrap(), 0.0);
        assert_eq!(kernel_k(&p, x, y, 50.0).unwrap(), 0.0);
    }

    #[test]
    fn witness_is_negative() {
        for &(n, kappa) in &[(1u32, 1.0), (2, 0.8), (3, 0.7), (4, 0.6)] {
            let p = Params::new(n, kappa).unwrap();
            let (_, k) = negativity_witness(&p, 2.0, 1.0, 0.01).unwrap();
            assert!(k < 0.0, "n={n}: {k}");
        }
    }

    #[test]
    fn measure_mass_is_one() {
        let p = Params::new(3, 0.7).unwrap();
        let nu = MeasureNu::new(p, 1.2, 0.4).unwrap();
        assert!((nu.mass().unwrap() - 1.0).abs() < 1e-8);
        let tv = nu.total_variation().unwrap();
        assert!((1.0 - 1e-12..=4.0 + 1e-8).contains(&tv), "{tv}");
    }

    #[test]
    fn point_masses() {
        let p = Params::new(2, 0.8).unwrap();
        let v: f64 = nu_integrate(&p, 1.7, 0.0, |z| Ok(z * z)).unwrap();
        assert_eq!(v, 1.7 * 1.7);
        let v: f64 = nu_integrate(&p, 0.0, -0.4, Ok).unwrap();
        assert_eq!(v, -0.4);
        let nu = MeasureNu::new(p, 0.0, 0.0).unwrap();
        assert_eq!(nu.case(), NuCase::PointMassAtX);
    }

    #[test]
    fn density_route_matches_angular_route() {
        // int z^2 d nu computed from the kernel density by plain quadrature in z
        let p = Params::new(2, 0.8).unwrap();
        let (x, y) = (1.3, -0.6);
        let nu = MeasureNu::new(p, x, y).unwrap();
        let angular: f64 = nu.integrate(&[], |z| Ok(z * z + z.powi(3))).unwrap();
        let (lo, hi) = nu.support_radii().unwrap();
        let (mid, half) = (0.5 * (hi + lo), 0.5 * (hi - lo));
        // z = sign r^n on the radial support; the Jacobi rule absorbs the
        // (r - lo)^(alpha-1/2) (hi - r)^(alpha-1/2) edge behaviour of K
        let ea = p.alpha() - 0.5;
        let ig = Integrator::default();
        let mut direct = 0.0;
        for sign in [-1.0, 1.0] {
            let part: f64 = ig
                .try_integrate(JacobiWeight::symmetric(ea), &[], |s| {
                    let r = mid + half * s;
                    let z = sign * r * r;
                    let k = kernel_k(&p, x, y, z)?;
                    let jac = 2.0 * r.powf(2.0 * p.alpha() + 1.0) / p.m() * half;
                    Ok((z * z + z.powi(3)) * k * jac / (1.0 - s * s).powf(ea))
                })
                .unwrap();
            direct += part;
        }
        assert!((angular - direct).abs() < 1e-9 * angular.abs().max(1.0), "{angular} vs {direct}");
    }

    #[test]
    fn sonine_and_th0_small_cases() {
        let r = check_sonine(0.9, 1.0, 2.0).unwrap();
        assert!(r.abs_err < 1e-10, "{r:?}");
        let r = check_th0(0.9, 0, 1.0, 2.0).unwrap();
        assert!(r.abs_err < 1e-10, "{r:?}");
        let r = check_th0(1.0, 2, 0.0, 1.5).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert!(r.rhs.abs() < 1e-12, "{r:?}");
        let r = check_th0(0.7, 3, 1.3, 0.8).unwrap();
        assert!(r.abs_err < 1e-9, "{r:?}");
    }

    #[test]
    fn key1_small_cases() {
        let r = check_key1(1.1, 0, 0.7, 1.9).unwrap();
        assert!(r.abs_err < 1e-10, "{r:?}");
        let r = check_key1(0.6, 2, 1.0, 1.0).unwrap();
        assert!(r.rel_err < 1e-9, "{r:?}");
        let a = check_key1(0.8, 1, 0.5, 2.5).unwrap();
        let b = check_key1(0.8, 1, 2.5, 0.5).unwrap();
        assert!((a.lhs - b.lhs).abs() < 1e-15 && (a.rhs - b.rhs).abs() < 1e-14);
    }

    #[test]
    fn sonine_integral_formula() {
        for &(alpha, beta) in &[(1.5, 0.25), (2.0, 0.5)] {
            for i in 0..=16 {
                let x = 0.5 * i as f64;
                let r = check_sonine_integral(alpha, beta, x).unwrap();
                assert!(r.abs_err < 1e-9, "alpha={alpha} beta={beta} x={x}: {r:?}");
            }
        }
    }

    #[test]
    fn psi_ladder_small() {
        let r = check_psi_ladder(3, 1.1, 1.4, 0.6, 1.0, 1e-5).unwrap();
        assert!(r.rel_err < 1e-6, "{r:?}");
    }
}
