//! Translation `tau_x`, convolution, the differential-difference operator
//! `T`, and `L^p(mu)` norms.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::MeasureNu;
use crate::specfun::{nth_root, Integrator, Params};
use crate::transform::{integrate_mu, pow_n, Evaluable, FnEvaluable};

/// Outer tolerance of `convolve`; the inner translations run ten times tighter.
pub const CONVOLVE_TOL: f64 = 1e-10;

/// Tolerance of the `L^p` integrals.
pub const NORM_TOL: f64 = 1e-10;

/// Number of samples per side used for the sup norm and for locating
/// sign changes.
pub const NORM_GRID: usize = 1000;

/// A Lebesgue exponent and its conjugate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormSpec {
    p: f64,
    conjugate: f64,
}

impl NormSpec {
    pub fn new(p: f64) -> Result<Self> {
        if !(p >= 1.0) {
            return Err(Error::invalid(format!("exponent {p} is not in [1, inf]")));
        }
        let conjugate = if p == 1.0 {
            f64::INFINITY
        } else if p.is_infinite() {
            1.0
        } else {
            p / (p - 1.0)
        };
        Ok(Self { p, conjugate })
    }

    pub fn infinity() -> Self {
        Self {
            p: f64::INFINITY,
            conjugate: 1.0,
        }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn conjugate(&self) -> f64 {
        self.conjugate
    }

    pub fn is_infinite(&self) -> bool {
        self.p.is_infinite()
    }

    /// The exponent `r` with `1/p + 1/q = 1 + 1/r`.
    pub fn young(p: NormSpec, q: NormSpec) -> Result<NormSpec> {
        let inv = 1.0 / p.p + 1.0 / q.p - 1.0;
        if inv < 0.0 {
            return Err(Error::invalid(format!(
                "1/{} + 1/{} < 1: no Young exponent",
                p.p, q.p
            )));
        }
        if inv == 0.0 {
            Ok(NormSpec::infinity())
        } else {
            NormSpec::new(1.0 / inv)
        }
    }
}

/// A function with optional closed-form first and second derivatives.
pub trait Smooth: Evaluable {
    /// `(f'(x), f''(x))`, or `None` to fall back to finite differences.
    fn derivatives(&self, _x: f64) -> Option<(Complex64, Complex64)> {
        None
    }
}

impl<F: Fn(f64) -> Complex64 + Sync> Smooth for FnEvaluable<F> {}

impl<S: Smooth + ?Sized> Smooth for &S {
    fn derivatives(&self, x: f64) -> Option<(Complex64, Complex64)> {
        (**self).derivatives(x)
    }
}

/// Breakpoints of `f` together with the finite ends of its support.
fn support_breaks<E: Evaluable + ?Sized>(f: &E) -> Vec<f64> {
    let (lo, hi) = f.support();
    let mut b = f.breakpoints();
    b.extend([lo, hi].into_iter().filter(|v| v.is_finite()));
    b
}

/// `max |z|^(1/n)` over the support of `f`.
fn support_radius<E: Evaluable + ?Sized>(p: &Params, f: &E) -> f64 {
    let (lo, hi) = f.support();
    p.root(lo.abs().max(hi.abs()))
}

/// `tau_x f(y) = int f d nu_{x,y}`.
pub fn translate<E: Evaluable + ?Sized>(p: &Params, f: &E, x: f64, y: f64) -> Result<Complex64> {
    translate_with(p, f, x, y, Integrator::default())
}

/// `translate` with explicit quadrature settings.
pub fn translate_with<E: Evaluable + ?Sized>(
    p: &Params,
    f: &E,
    x: f64,
    y: f64,
    ig: Integrator,
) -> Result<Complex64> {
    let breaks = support_breaks(f);
    MeasureNu::new(*p, x, y)?
        .with_integrator(ig)
        .integrate(&breaks, |z| f.try_eval(z))
}

/// The function `y -> tau_x f(y)`.
pub struct Translated<E> {
    params: Params,
    f: E,
    x: f64,
    inner: Integrator,
    radii: Vec<f64>,
}

impl<E: Evaluable> Translated<E> {
    pub fn new(params: Params, f: E, x: f64) -> Self {
        let mut radii: Vec<f64> = support_breaks(&f).iter().map(|&z| params.root(z)).collect();
        radii.sort_by(|a, b| a.total_cmp(b));
        radii.dedup();
        Self {
            params,
            f,
            x,
            inner: Integrator::default(),
            radii,
        }
    }

    /// Settings for the inner integral against `nu_{x,y}`.
    pub fn with_inner(mut self, inner: Integrator) -> Self {
        self.inner = inner;
        self
    }

    pub fn shift(&self) -> f64 {
        self.x
    }
}

impl<E: Evaluable> Evaluable for Translated<E> {
    fn eval(&self, y: f64) -> Complex64 {
        self.try_eval(y).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }

    fn try_eval(&self, y: f64) -> Result<Complex64> {
        let (lo, hi) = self.support();
        if y < lo || y > hi {
            return Ok(Complex64::default());
        }
        translate_with(&self.params, &self.f, self.x, y, self.inner)
    }

    fn support(&self) -> (f64, f64) {
        let a = self.params.root(self.x);
        let r = pow_n(a + support_radius(&self.params, &self.f), self.params.n());
        (-r, r)
    }

    /// Points `|y|^(1/n) = |x|^(1/n) +- r` for each radius `r` where `f`
    /// has a break, since the support of `nu_{x,y}` sweeps across them there.
    fn breakpoints(&self) -> Vec<f64> {
        let n = self.params.n();
        let a = self.params.root(self.x);
        let mut out = vec![0.0];
        for &r in &self.radii {
            for b in [a + r, (a - r).abs()] {
                if b > 0.0 {
                    let y = pow_n(b, n);
                    out.extend([y, -y]);
                }
            }
        }
        out.sort_by(|a, b| a.total_cmp(b));
        out.dedup();
        out
    }

    fn integrator(&self) -> Integrator {
        self.f.integrator()
    }
}

impl<E: Evaluable> Smooth for Translated<E> {}

/// `(f * g)(x) = int f(y) tau_x g((-1)^n y) d mu(y)`.
pub fn convolve<F, G>(p: &Params, f: &F, g: &G, x: f64) -> Result<Complex64>
where
    F: Evaluable + ?Sized,
    G: Evaluable + ?Sized,
{
    convolve_with(p, f, g, x, f.integrator().with_tol(CONVOLVE_TOL))
}

/// `convolve` with explicit outer settings.
pub fn convolve_with<F, G>(p: &Params, f: &F, g: &G, x: f64, outer: Integrator) -> Result<Complex64>
where
    F: Evaluable + ?Sized,
    G: Evaluable + ?Sized,
{
    let inner = g.integrator().with_tol(outer.tol / 10.0);
    let s = p.parity_sign();
    let tg = Translated::new(*p, g, x).with_inner(inner);
    let mut breaks = support_breaks(f);
    breaks.extend(tg.breakpoints());
    integrate_mu(p, f.support(), &breaks, &outer, |y| {
        let fy = f.try_eval(y)?;
        if fy == Complex64::default() {
            return Ok(fy);
        }
        Ok(fy * tg.try_eval(s * y)?)
    })
    .map_err(|e| match e {
        Error::NonConvergence { change, order, .. } => Error::accuracy(format!(
            "nested convolution quadrature did not converge (change {change:.3e} at order {order})"
        )),
        other => other,
    })
}

/// Support of `f * g`: `|x|^(1/n) <= R_f + R_g`.
pub fn convolution_support<F, G>(p: &Params, f: &F, g: &G) -> (f64, f64)
where
    F: Evaluable + ?Sized,
    G: Evaluable + ?Sized,
{
    let r = pow_n(support_radius(p, f) + support_radius(p, g), p.n());
    (-r, r)
}

/// Piecewise Chebyshev interpolant of a function on each half-line, in the
/// variable `r = |x|^(1/n)`.
///
/// Used to make nested operations (convolution of a convolution, transform
/// of a convolution) affordable.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChebyshevTable {
    n: u32,
    /// Radius of each side: `[positive, negative]`.
    rho: [f64; 2],
    panels: usize,
    nodes: usize,
    /// `values[side][panel * nodes + j]`.
    values: [Vec<Complex64>; 2],
}

impl ChebyshevTable {
    /// Samples `f` at Chebyshev-Lobatto points on `panels` equal pieces of
    /// `[0, R]` per side, where `support` is `[-R_-^n, R_+^n]`.
    pub fn build<F>(p: &Params, support: (f64, f64), panels: usize, nodes: usize, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Result<Complex64> + Sync,
    {
        if panels == 0 || nodes < 2 {
            return Err(Error::invalid("a table needs at least one panel of two nodes"));
        }
        let n = p.n();
        let rho = [p.root(support.1.max(0.0)), p.root((-support.0).max(0.0))];
        let mut values: [Vec<Complex64>; 2] = [Vec::new(), Vec::new()];
        for side in 0..2 {
            let sign = if side == 0 { 1.0 } else { -1.0 };
            let pts: Vec<f64> = (0..panels * nodes)
                .map(|k| sign * pow_n(node_radius(rho[side], panels, nodes, k / nodes, k % nodes), n))
                .collect();
            values[side] = pts.par_iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
        }
        Ok(Self {
            n,
            rho,
            panels,
            nodes,
            values,
        })
    }

    /// Table of an `Evaluable` over its own support.
    pub fn of<E: Evaluable + ?Sized>(p: &Params, f: &E, panels: usize, nodes: usize) -> Result<Self> {
        Self::build(p, f.support(), panels, nodes, |x| f.try_eval(x))
    }

    /// Table of `f * g` over its support.
    pub fn convolution<F, G>(p: &Params, f: &F, g: &G, panels: usize, nodes: usize) -> Result<Self>
    where
        F: Evaluable + ?Sized,
        G: Evaluable + ?Sized,
    {
        Self::build(p, convolution_support(p, f, g), panels, nodes, |x| convolve(p, f, g, x))
    }

    fn interpolate(&self, side: usize, r: f64) -> Complex64 {
        let rho = self.rho[side];
        if rho == 0.0 {
            return self.values[side][0];
        }
        let width = rho / self.panels as f64;
        let panel = ((r / width) as usize).min(self.panels - 1);
        let a = panel as f64 * width;
        // map to [-1, 1]; node j sits at cos(j pi / (m - 1)) reversed
        let t = 2.0 * (r - a) / width - 1.0;
        let m = self.nodes;
        let vals = &self.values[side][panel * m..(panel + 1) * m];
        let mut num = Complex64::default();
        let mut den = 0.0;
        for (j, v) in vals.iter().enumerate() {
            let tj = -(std::f64::consts::PI * j as f64 / (m - 1) as f64).cos();
            let d = t - tj;
            if d == 0.0 {
                return *v;
            }
            let mut w = if j % 2 == 0 { 1.0 } else { -1.0 };
            if j == 0 || j == m - 1 {
                w *= 0.5;
            }
            let c = w / d;
            num += v * c;
            den += c;
        }
        num / den
    }
}

fn node_radius(rho: f64, panels: usize, nodes: usize, panel: usize, j: usize) -> f64 {
    let width = rho / panels as f64;
    let t = -(std::f64::consts::PI * j as f64 / (nodes - 1) as f64).cos();
    panel as f64 * width + 0.5 * width * (t + 1.0)
}

impl Evaluable for ChebyshevTable {
    fn eval(&self, x: f64) -> Complex64 {
        let side = usize::from(x < 0.0);
        let r = nth_root(x.abs(), self.n);
        if r > self.rho[side] {
            return Complex64::default();
        }
        self.interpolate(side, r)
    }

    fn support(&self) -> (f64, f64) {
        (-pow_n(self.rho[1], self.n), pow_n(self.rho[0], self.n))
    }

    fn breakpoints(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for (side, sign) in [(0, 1.0), (1, -1.0)] {
            for k in 1..self.panels {
                let r = self.rho[side] * k as f64 / self.panels as f64;
                out.push(sign * pow_n(r, self.n));
            }
        }
        out
    }
}

impl Smooth for ChebyshevTable {}

/// Default finite-difference step `1e-4 max(1, |x|)`.
pub fn t_step(x: f64) -> f64 {
    1e-4 * x.abs().max(1.0)
}

fn t_combine(p: &Params, x: f64, fx: Complex64, fmx: Complex64, d1: Complex64, d2: Complex64) -> Complex64 {
    let kappa = p.kappa();
    let pre = x.abs().powf(2.0 * (1.0 - 1.0 / p.n() as f64));
    (d2 + d1 * (2.0 * kappa / x) - (fx - fmx) * (kappa / (x * x))) * pre
}

/// `T f(x) = |x|^(2 - 2/n) [f''(x) + (2 kappa / x) f'(x) - (kappa / x^2)(f(x) - f(-x))]`.
///
/// Uses the closed-form derivatives of `f` when available and central
/// differences with step `t_step(x)` otherwise.
pub fn operator_t<S: Smooth + ?Sized>(p: &Params, f: &S, x: f64) -> Result<Complex64> {
    match f.derivatives(x) {
        Some((d1, d2)) => {
            if x == 0.0 {
                return Err(Error::domain("T is singular at x = 0"));
            }
            Ok(t_combine(p, x, f.try_eval(x)?, f.try_eval(-x)?, d1, d2))
        }
        None => operator_t_fd(p, f, x, t_step(x)),
    }
}

/// `T f(x)` with central differences of step `h`.
pub fn operator_t_fd<E: Evaluable + ?Sized>(p: &Params, f: &E, x: f64, h: f64) -> Result<Complex64> {
    if x == 0.0 {
        return Err(Error::domain("T is singular at x = 0"));
    }
    if !(h > 0.0) {
        return Err(Error::invalid(format!("finite-difference step {h} must be positive")));
    }
    let fx = f.try_eval(x)?;
    let fp = f.try_eval(x + h)?;
    let fm = f.try_eval(x - h)?;
    let d1 = (fp - fm) / (2.0 * h);
    let d2 = (fp - fx * 2.0 + fm) / (h * h);
    Ok(t_combine(p, x, fx, f.try_eval(-x)?, d1, d2))
}

/// The function `x -> T f(x)`; zero at the origin.
pub struct ApplyT<'a, S: ?Sized> {
    params: Params,
    f: &'a S,
    integrator: Option<Integrator>,
}

impl<'a, S: Smooth + ?Sized> ApplyT<'a, S> {
    pub fn new(params: Params, f: &'a S) -> Self {
        Self {
            params,
            f,
            integrator: None,
        }
    }

    /// Quadrature settings for integrals of `T f`; finite differences of a
    /// function computed by quadrature are noisy at the `1e-8` level.
    pub fn with_integrator(mut self, integrator: Integrator) -> Self {
        self.integrator = Some(integrator);
        self
    }
}

impl<S: Smooth + ?Sized> Evaluable for ApplyT<'_, S> {
    fn eval(&self, x: f64) -> Complex64 {
        self.try_eval(x).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }

    fn try_eval(&self, x: f64) -> Result<Complex64> {
        if x == 0.0 {
            return Ok(Complex64::default());
        }
        operator_t(&self.params, self.f, x)
    }

    fn support(&self) -> (f64, f64) {
        let (lo, hi) = self.f.support();
        let r = lo.abs().max(hi.abs());
        (-r, r)
    }

    fn breakpoints(&self) -> Vec<f64> {
        let mut b = self.f.breakpoints();
        b.extend(self.f.breakpoints().iter().map(|x| -x));
        b
    }

    fn integrator(&self) -> Integrator {
        self.integrator.unwrap_or_else(|| self.f.integrator())
    }
}

/// Sample points per side, uniform in `r = |x|^(1/n)`, clipped to the support.
fn sample_points(p: &Params, support: (f64, f64), count: usize) -> Vec<f64> {
    let n = p.n();
    let mut pts = Vec::with_capacity(2 * count + 1);
    pts.push(0.0);
    for (sign, edge) in [(1.0, support.1), (-1.0, support.0)] {
        let far = edge * sign;
        if far <= 0.0 {
            continue;
        }
        let rho = nth_root(far, n);
        for i in 1..=count {
            pts.push(sign * pow_n(rho * i as f64 / count as f64, n));
        }
    }
    pts.retain(|&x| x >= support.0 && x <= support.1);
    pts.sort_by(|a, b| a.total_cmp(b));
    pts
}

/// `||f||_{p}` against `mu`; for `p = inf` the maximum of `|f|` over a
/// sample grid and the breakpoints.
///
/// For real-valued `f` the sign changes are located first and used as
/// breakpoints, since `|f|^p` has a kink at each of them.
pub fn lp_norm<E: Evaluable + ?Sized>(p: &Params, f: &E, spec: NormSpec) -> Result<f64> {
    let support = f.support();
    let pts = sample_points(p, support, NORM_GRID);
    let vals = pts.par_iter().map(|&x| f.try_eval(x)).collect::<Result<Vec<_>>>()?;
    let sup = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if spec.is_infinite() {
        let at_breaks = f
            .breakpoints()
            .iter()
            .filter(|&&x| x >= support.0 && x <= support.1)
            .map(|&x| f.try_eval(x).map(|v| v.norm()))
            .collect::<Result<Vec<_>>>()?;
        return Ok(at_breaks.into_iter().fold(sup, f64::max));
    }
    if sup == 0.0 {
        return Ok(0.0);
    }
    let mut breaks = f.breakpoints();
    let imag = vals.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
    if imag <= 1e-14 * sup {
        for w in pts.windows(2).zip(vals.windows(2)) {
            let ((x0, x1), (v0, v1)) = ((w.0[0], w.0[1]), (w.1[0].re, w.1[1].re));
            if v0 * v1 < 0.0 {
                breaks.push(bisect_sign(|x| f.try_eval(x).map(|v| v.re), x0, x1, v0)?);
            }
        }
    }
    let q = spec.p();
    let ig = f.integrator().with_tol(NORM_TOL);
    let v: f64 = integrate_mu(p, support, &breaks, &ig, |x| Ok(f.try_eval(x)?.norm().powf(q)))?;
    Ok(v.max(0.0).powf(1.0 / q))
}

fn bisect_sign<F: Fn(f64) -> Result<f64>>(f: F, mut lo: f64, mut hi: f64, mut flo: f64) -> Result<f64> {
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid)?;
        if fm * flo > 0.0 {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testfns::{BumpSum, Gaussian, PolyBump};
    use crate::transform::{b_kernel, transform_f_at};

    fn params(n: u32, kappa: f64) -> Params {
        Params::new(n, kappa).unwrap()
    }

    #[test]
    fn norm_spec_conjugates() {
        assert_eq!(NormSpec::new(1.0).unwrap().conjugate(), f64::INFINITY);
        assert_eq!(NormSpec::new(2.0).unwrap().conjugate(), 2.0);
        assert_eq!(NormSpec::infinity().conjugate(), 1.0);
        assert!((NormSpec::new(3.0).unwrap().conjugate() - 1.5).abs() < 1e-15);
        assert!(NormSpec::new(0.5).is_err());
        assert!(NormSpec::new(f64::NAN).is_err());
        let two = NormSpec::new(2.0).unwrap();
        let one = NormSpec::new(1.0).unwrap();
        assert!(NormSpec::young(two, two).unwrap().is_infinite());
        assert_eq!(NormSpec::young(one, two).unwrap().p(), 2.0);
        assert!(NormSpec::young(NormSpec::infinity(), two).is_err());
    }

    #[test]
    fn translation_by_zero_is_identity() {
        let p = params(3, 0.7);
        let f = Gaussian::new(0.4, 0.8);
        for &y in &[-1.3, 0.0, 0.2, 2.0] {
            let v = translate(&p, &f, 0.0, y).unwrap();
            assert!((v - f.eval(y)).norm() < 1e-9);
        }
    }

    #[test]
    fn translation_is_symmetric() {
        let p = params(2, 0.8);
        let f = FnEvaluable::new(|z: f64| Complex64::new((-z * z).exp(), 0.0), (-9.0, 9.0));
        let a = translate(&p, &f, 1.0, 0.3).unwrap();
        let b = translate(&p, &f, 0.3, 1.0).unwrap();
        assert!((a - b).norm() < 1e-10, "{a} vs {b}");
    }

    #[test]
    fn translated_kernel_is_a_product() {
        let p = params(3, 0.7);
        let lambda = 1.1;
        let f = FnEvaluable::new(move |z| b_kernel(&p, lambda, z).unwrap(), (-100.0, 100.0));
        let (x, y) = (0.8, -1.4);
        let v = translate(&p, &f, x, y).unwrap();
        let want = b_kernel(&p, lambda, x).unwrap() * b_kernel(&p, lambda, y).unwrap();
        assert!((v - want).norm() < 1e-10);
    }

    #[test]
    fn translated_support_and_zeros() {
        let p = params(2, 0.8);
        let f = PolyBump::unit_peak(1.0, 2.25, 4);
        let t = Translated::new(p, f, 0.25);
        // radii: a = 0.5, f lives on r in [1, 1.5], so tau_x f lives on b in (0.5, 2)
        assert_eq!(t.support(), (-4.0, 4.0));
        assert_eq!(t.eval(0.2), Complex64::default());
        assert_eq!(t.eval(4.5), Complex64::default());
        assert!(t.eval(1.5).norm() > 0.0);
        assert!(t.breakpoints().contains(&0.25));
    }

    #[test]
    fn spectral_translation() {
        let p = params(2, 0.8);
        let f = PolyBump::unit_peak(0.3, 1.7, 6);
        let x = 0.6;
        let t = Translated::new(p, f, x);
        for &lambda in &[0.7, 2.2] {
            let lhs = transform_f_at(&p, &t, lambda).unwrap();
            let rhs = b_kernel(&p, lambda, p.parity_sign() * x).unwrap() * transform_f_at(&p, &f, lambda).unwrap();
            assert!((lhs - rhs).norm() < 1e-7, "lambda {lambda}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn convolution_commutes() {
        let p = params(3, 0.7);
        let f = Gaussian::new(0.3, 0.5);
        let g = Gaussian::new(-0.5, 0.4);
        let a = convolve(&p, &f, &g, 0.5).unwrap();
        let b = convolve(&p, &g, &f, 0.5).unwrap();
        assert!((a - b).norm() < 1e-7, "{a} vs {b}");
    }

    #[test]
    fn convolution_support_is_additive() {
        let p = params(2, 0.8);
        let f = PolyBump::unit_peak(-1.0, 1.0, 3);
        let g = PolyBump::unit_peak(-0.25, 0.25, 3);
        // radii 1 and 0.5: f * g vanishes for |x| > 2.25
        assert_eq!(convolution_support(&p, &f, &g), (-2.25, 2.25));
        for &x in &[2.3, -2.6, 4.0] {
            assert_eq!(convolve(&p, &f, &g, x).unwrap(), Complex64::default());
        }
        assert!(convolve(&p, &f, &g, 1.0).unwrap().norm() > 0.0);
    }

    #[test]
    fn chebyshev_table_reproduces_smooth_function() {
        let p = params(3, 0.7);
        let f = Gaussian::new(0.2, 0.6);
        let t = ChebyshevTable::of(&p, &f, 4, 24).unwrap();
        for &x in &[-2.0, -0.3, 0.0, 0.05, 0.7, 1.9] {
            assert!((t.eval(x) - f.eval(x)).norm() < 1e-9, "x = {x}");
        }
    }

    #[test]
    fn t_of_even_function_drops_reflection() {
        let p = params(2, 0.8);
        let g = Gaussian::new(0.0, 1.0);
        let x: f64 = 0.7;
        let e = (-x * x).exp();
        let bessel_form = x.abs() * ((4.0 * x * x - 2.0) * e + 2.0 * 0.8 / x * (-2.0 * x * e));
        let v = operator_t(&p, &g, x).unwrap();
        assert!((v.re - bessel_form).abs() < 1e-13);
        let fd = operator_t_fd(&p, &g, x, t_step(x)).unwrap();
        assert!((fd.re - bessel_form).abs() < 1e-6);
        assert!(operator_t(&p, &g, 0.0).is_err());
    }

    #[test]
    fn kernel_is_an_eigenfunction_of_t() {
        let p = params(2, 0.8);
        let lambda: f64 = 1.5;
        let x = 0.9;
        let b = FnEvaluable::new(move |z| b_kernel(&p, lambda, z).unwrap(), (-50.0, 50.0));
        let want = b_kernel(&p, lambda, x).unwrap() * -lambda.abs().powf(2.0 / p.n() as f64);
        let err = |h: f64| (operator_t_fd(&p, &b, x, h).unwrap() - want).norm();
        let (e1, e2) = (err(0.02), err(0.01));
        assert!(operator_t(&p, &b, x).unwrap().norm() > 0.0);
        assert!(e1 < 1e-3);
        let ratio = e1 / e2;
        assert!(ratio > 3.2 && ratio < 4.8, "ratio {ratio}");
    }

    #[test]
    fn t_form_is_symmetric() {
        let p = params(3, 0.7);
        let f = BumpSum(vec![PolyBump::unit_peak(0.3, 2.5, 5), PolyBump::unit_peak(-1.8, -0.6, 5)]);
        let g = BumpSum(vec![
            PolyBump::unit_peak(0.9, 2.1, 5),
            PolyBump::unit_peak(-2.5, -0.3, 5).scaled(Complex64::new(-0.7, 0.0)),
        ]);
        let ig = Integrator::default().with_orders(32, 1024);
        let lhs: Complex64 = integrate_mu(&p, (-2.5, 2.5), &[-2.5, -1.8, -0.6, -0.3, 0.3, 0.9, 2.1, 2.5, 1.8, 0.6], &ig, |x| {
            if x == 0.0 {
                return Ok(Complex64::default());
            }
            Ok(operator_t(&p, &f, x)? * g.eval(x))
        })
        .unwrap();
        let rhs: Complex64 = integrate_mu(&p, (-2.5, 2.5), &[-2.5, -1.8, -0.6, -0.3, 0.3, 0.9, 2.1, 2.5, 1.8, 0.6], &ig, |x| {
            if x == 0.0 {
                return Ok(Complex64::default());
            }
            Ok(f.eval(x) * operator_t(&p, &g, x)?)
        })
        .unwrap();
        assert!(lhs.norm() > 1e-3);
        assert!((lhs - rhs).norm() < 1e-6, "{lhs} vs {rhs}");
    }

    #[test]
    fn norms_of_zero_and_scaled() {
        let p = params(2, 0.8);
        let zero = FnEvaluable::new(|_| Complex64::default(), (-1.0, 1.0));
        for q in [1.0, 2.0, f64::INFINITY] {
            let spec = NormSpec::new(q).unwrap();
            assert_eq!(lp_norm(&p, &zero, spec).unwrap(), 0.0);
            let f = Gaussian::new(0.2, 0.5);
            let g = f.scaled(Complex64::new(3.0, 0.0));
            let a = lp_norm(&p, &f, spec).unwrap();
            let b = lp_norm(&p, &g, spec).unwrap();
            assert!((b - 3.0 * a).abs() < 1e-10 * b);
        }
    }

    #[test]
    fn sup_norm_of_bump_is_its_peak() {
        let p = params(1, 1.0);
        let f = PolyBump::unit_peak(-1.0, 1.0, 2);
        assert_eq!(lp_norm(&p, &f, NormSpec::infinity()).unwrap(), 1.0);
    }

    #[test]
    fn translation_bound() {
        let p = params(2, 0.8);
        let f = PolyBump::unit_peak(-0.7, 1.2, 4);
        let t = Translated::new(p, f, 0.9);
        for q in [1.0, 2.0, f64::INFINITY] {
            let spec = NormSpec::new(q).unwrap();
            let a = lp_norm(&p, &t, spec).unwrap();
            let b = lp_norm(&p, &f, spec).unwrap();
            assert!(a <= 4.0 * b + 1e-8, "p = {q}: {a} > 4 * {b}");
        }
    }
}
