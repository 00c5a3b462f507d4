//! The generalized Hankel kernel `B_lambda`, the transform `F_{kappa,n}`
//! and its inverse, the classical Hankel transform `H_alpha`, and the
//! even/odd decomposition of `F` into two Hankel transforms.
//!
//! Integrals against `mu` are split at the origin and taken in the
//! variable `r = |x|^(1/n)`, where `d mu = n r^(2 alpha + 1) dr / M` and the
//! power weight is absorbed by a Gauss-Jacobi rule. In that variable the
//! kernel `B_lambda` is an entire function of `r`.

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::quadrature::Scalar;
use crate::specfun::{bessel_j_norm, gamma, nth_root, pochhammer, Integrator, Params};

/// A function of one real variable with known compact support.
pub trait Evaluable: Sync {
    fn eval(&self, x: f64) -> Complex64;

    /// Fallible evaluation; functions defined by inner quadratures report
    /// their failures here. Integrators always go through this method.
    fn try_eval(&self, x: f64) -> Result<Complex64> {
        Ok(self.eval(x))
    }

    /// Closed interval outside which the function vanishes.
    fn support(&self) -> (f64, f64);

    /// Points where the function is not smooth.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }

    /// Quadrature settings suited to the function's smoothness.
    fn integrator(&self) -> Integrator {
        Integrator::default()
    }
}

impl<E: Evaluable + ?Sized> Evaluable for &E {
    fn eval(&self, x: f64) -> Complex64 {
        (**self).eval(x)
    }
    fn try_eval(&self, x: f64) -> Result<Complex64> {
        (**self).try_eval(x)
    }
    fn support(&self) -> (f64, f64) {
        (**self).support()
    }
    fn breakpoints(&self) -> Vec<f64> {
        (**self).breakpoints()
    }
    fn integrator(&self) -> Integrator {
        (**self).integrator()
    }
}

/// A closure with declared support and breakpoints.
pub struct FnEvaluable<F> {
    f: F,
    support: (f64, f64),
    breaks: Vec<f64>,
}

impl<F: Fn(f64) -> Complex64 + Sync> FnEvaluable<F> {
    pub fn new(f: F, support: (f64, f64)) -> Self {
        Self {
            f,
            support,
            breaks: Vec::new(),
        }
    }

    pub fn with_breakpoints(mut self, breaks: Vec<f64>) -> Self {
        self.breaks = breaks;
        self
    }
}

impl<F: Fn(f64) -> Complex64 + Sync> Evaluable for FnEvaluable<F> {
    fn eval(&self, x: f64) -> Complex64 {
        if x < self.support.0 || x > self.support.1 {
            return Complex64::new(0.0, 0.0);
        }
        (self.f)(x)
    }
    fn support(&self) -> (f64, f64) {
        self.support
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.breaks.clone()
    }
}

/// `(f(x) + f(-x)) / 2`.
pub struct EvenPart<E>(pub E);
/// `(f(x) - f(-x)) / 2`.
pub struct OddPart<E>(pub E);

fn symmetric_hull(s: (f64, f64)) -> (f64, f64) {
    let r = s.0.abs().max(s.1.abs());
    (-r, r)
}

fn symmetric_breaks(b: Vec<f64>) -> Vec<f64> {
    let mut out: Vec<f64> = b.iter().flat_map(|&x| [x, -x]).collect();
    out.sort_by(|a, b| a.total_cmp(b));
    out.dedup();
    out
}

impl<E: Evaluable> Evaluable for EvenPart<E> {
    fn eval(&self, x: f64) -> Complex64 {
        (self.0.eval(x) + self.0.eval(-x)) * 0.5
    }
    fn try_eval(&self, x: f64) -> Result<Complex64> {
        Ok((self.0.try_eval(x)? + self.0.try_eval(-x)?) * 0.5)
    }
    fn support(&self) -> (f64, f64) {
        symmetric_hull(self.0.support())
    }
    fn breakpoints(&self) -> Vec<f64> {
        symmetric_breaks(self.0.breakpoints())
    }
    fn integrator(&self) -> Integrator {
        self.0.integrator()
    }
}

impl<E: Evaluable> Evaluable for OddPart<E> {
    fn eval(&self, x: f64) -> Complex64 {
        (self.0.eval(x) - self.0.eval(-x)) * 0.5
    }
    fn try_eval(&self, x: f64) -> Result<Complex64> {
        Ok((self.0.try_eval(x)? - self.0.try_eval(-x)?) * 0.5)
    }
    fn support(&self) -> (f64, f64) {
        symmetric_hull(self.0.support())
    }
    fn breakpoints(&self) -> Vec<f64> {
        symmetric_breaks(self.0.breakpoints())
    }
    fn integrator(&self) -> Integrator {
        self.0.integrator()
    }
}

/// Complex samples on a strictly increasing grid, interpolated by
/// piecewise cubic Hermite polynomials and zero off the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledFunction {
    grid: Vec<f64>,
    values: Vec<Complex64>,
    slopes: Vec<Complex64>,
    support: (f64, f64),
}

impl SampledFunction {
    pub fn new(grid: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::invalid("grid and values differ in length"));
        }
        if grid.len() < 2 {
            return Err(Error::invalid("a sampled function needs at least two points"));
        }
        if grid.iter().any(|x| !x.is_finite()) || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("grid and values must be finite"));
        }
        if grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("grid must be strictly increasing"));
        }
        let slopes = hermite_slopes(&grid, &values);
        let support = sampled_support(&grid, &values);
        Ok(Self {
            grid,
            values,
            slopes,
            support,
        })
    }

    pub fn from_fn<F: Fn(f64) -> Complex64>(grid: Vec<f64>, f: F) -> Result<Self> {
        let values = grid.iter().map(|&x| f(x)).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Reads `x,re[,im]` rows after a header line.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
        let mut grid = Vec::new();
        let mut values = Vec::new();
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let field = |i: usize| -> Result<f64> {
                rec.get(i)
                    .ok_or_else(|| Error::invalid(format!("row {}: missing column {}", line + 2, i + 1)))?
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| Error::invalid(format!("row {}: {e}", line + 2)))
            };
            if !(2..=3).contains(&rec.len()) {
                return Err(Error::invalid(format!(
                    "row {}: expected 2 or 3 columns, found {}",
                    line + 2,
                    rec.len()
                )));
            }
            grid.push(field(0)?);
            let im = if rec.len() == 3 { field(2)? } else { 0.0 };
            values.push(Complex64::new(field(1)?, im));
        }
        Self::new(grid, values)
    }

    pub fn read_csv_path(path: &Path) -> Result<Self> {
        Self::read_csv(std::fs::File::open(path)?)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        write_complex_csv(writer, "x", &self.grid, &self.values)
    }
}

fn sampled_support(grid: &[f64], values: &[Complex64]) -> (f64, f64) {
    let nz: Vec<usize> = (0..values.len()).filter(|&i| values[i] != Complex64::default()).collect();
    match (nz.first(), nz.last()) {
        (Some(&i), Some(&j)) => {
            let a = grid[i.saturating_sub(1)];
            let b = grid[(j + 1).min(grid.len() - 1)];
            (a.min(0.0), b.max(0.0))
        }
        _ => (0.0, 0.0),
    }
}

/// Three-point (second-order) derivative estimates on a nonuniform grid.
fn hermite_slopes(x: &[f64], y: &[Complex64]) -> Vec<Complex64> {
    let n = x.len();
    let mut d = vec![Complex64::default(); n];
    if n == 2 {
        let s = (y[1] - y[0]) / (x[1] - x[0]);
        return vec![s, s];
    }
    for i in 1..n - 1 {
        let h0 = x[i] - x[i - 1];
        let h1 = x[i + 1] - x[i];
        let s0 = (y[i] - y[i - 1]) / h0;
        let s1 = (y[i + 1] - y[i]) / h1;
        d[i] = (s0 * h1 + s1 * h0) / (h0 + h1);
    }
    let (h0, h1) = (x[1] - x[0], x[2] - x[1]);
    let (s0, s1) = ((y[1] - y[0]) / h0, (y[2] - y[1]) / h1);
    d[0] = s0 * ((2.0 * h0 + h1) / (h0 + h1)) - s1 * (h0 / (h0 + h1));
    let (h0, h1) = (x[n - 2] - x[n - 3], x[n - 1] - x[n - 2]);
    let (s0, s1) = ((y[n - 2] - y[n - 3]) / h0, (y[n - 1] - y[n - 2]) / h1);
    d[n - 1] = s1 * ((2.0 * h1 + h0) / (h0 + h1)) - s0 * (h1 / (h0 + h1));
    d
}

impl Evaluable for SampledFunction {
    fn eval(&self, x: f64) -> Complex64 {
        let g = &self.grid;
        if x < g[0] || x > g[g.len() - 1] {
            return Complex64::default();
        }
        let i = match g.partition_point(|&v| v <= x) {
            0 => 0,
            k if k >= g.len() => g.len() - 2,
            k => k - 1,
        };
        let h = g[i + 1] - g[i];
        let s = (x - g[i]) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        self.values[i] * h00
            + self.slopes[i] * (h10 * h)
            + self.values[i + 1] * h01
            + self.slopes[i + 1] * (h11 * h)
    }

    fn support(&self) -> (f64, f64) {
        self.support
    }

    fn breakpoints(&self) -> Vec<f64> {
        let (a, b) = self.support;
        self.grid.iter().copied().filter(|&x| x >= a && x <= b).collect()
    }

    fn integrator(&self) -> Integrator {
        // cubic pieces: low orders per cell suffice
        Integrator::default().with_orders(8, 256)
    }
}

/// Values of a transform on a list of spectral parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralSamples {
    pub lambdas: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl SpectralSamples {
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        write_complex_csv(writer, "lambda", &self.lambdas, &self.values)
    }

    /// Reinterprets the samples as a function of `lambda`.
    pub fn to_sampled(&self) -> Result<SampledFunction> {
        SampledFunction::new(self.lambdas.clone(), self.values.clone())
    }
}

fn write_complex_csv<W: Write>(writer: W, head: &str, xs: &[f64], vs: &[Complex64]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([head, "re", "im"])?;
    for (x, v) in xs.iter().zip(vs) {
        w.write_record([fmt17(*x), fmt17(v.re), fmt17(v.im)])?;
    }
    w.flush()?;
    Ok(())
}

/// 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// `(-i)^n`.
fn minus_i_pow(n: u32) -> Complex64 {
    match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// Generalized Hankel kernel
/// `B_lambda(x) = j_alpha(n |lambda x|^(1/n))
///   + (-i)^n (n/2)^n / (alpha+1)_n * lambda x * j_{alpha+n}(n |lambda x|^(1/n))`.
pub fn b_kernel(p: &Params, lambda: f64, x: f64) -> Result<Complex64> {
    let n = p.n();
    let nf = n as f64;
    let prod = lambda * x;
    if prod == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let arg = nf * nth_root(prod.abs(), n);
    let even = bessel_j_norm(p.alpha(), arg)?;
    let coef = (0.5 * nf).powi(n as i32) / pochhammer(p.alpha() + 1.0, n)?;
    let odd = coef * prod * bessel_j_norm(p.alpha() + nf, arg)?;
    Ok(Complex64::new(even, 0.0) + minus_i_pow(n) * odd)
}

/// Density `|x|^(2 kappa + 2/n - 2) / M` of `mu`.
pub fn mu_weight(p: &Params, x: f64) -> f64 {
    let e = p.mu_exponent();
    if x == 0.0 {
        return match e.partial_cmp(&0.0) {
            Some(std::cmp::Ordering::Greater) => 0.0,
            Some(std::cmp::Ordering::Equal) => 1.0 / p.m(),
            _ => f64::INFINITY,
        };
    }
    x.abs().powf(e) / p.m()
}

/// `int_lo^hi h(x) d mu(x)`, split at 0 and at `breaks`.
pub fn integrate_mu<T, F>(
    p: &Params,
    support: (f64, f64),
    breaks: &[f64],
    ig: &Integrator,
    mut h: F,
) -> Result<T>
where
    T: Scalar,
    F: FnMut(f64) -> Result<T>,
{
    let (lo, hi) = support;
    if !(lo <= hi) {
        return Err(Error::invalid(format!("empty support [{lo}, {hi}]")));
    }
    let n = p.n();
    let gamma_r = 2.0 * p.alpha() + 1.0;
    let scale = n as f64 / p.m();
    let mut total = T::default();
    for sign in [1.0f64, -1.0] {
        // portion of [lo, hi] on this side of 0, as radii
        let (near, far) = if sign > 0.0 {
            (lo.max(0.0), hi)
        } else {
            ((-hi).max(0.0), -lo)
        };
        if far <= 0.0 || far <= near {
            continue;
        }
        let rho = nth_root(far, n);
        let mut rb: Vec<f64> = breaks
            .iter()
            .filter(|&&x| x * sign > 0.0)
            .map(|&x| nth_root(x.abs(), n))
            .collect();
        if near > 0.0 {
            rb.push(nth_root(near, n));
        }
        let near_r = nth_root(near, n);
        let part: T = ig.integrate_power(rho, gamma_r, &rb, |r| {
            if r < near_r {
                return Ok(T::default());
            }
            let x = sign * pow_n(r, n);
            h(x)
        })?;
        total = total + part * scale;
    }
    Ok(total)
}

#[inline]
pub(crate) fn pow_n(r: f64, n: u32) -> f64 {
    r.powi(n as i32)
}

/// `F f(lambda) = int f(x) B_lambda(x) d mu(x)` at one `lambda`.
pub fn transform_f_at<E: Evaluable + ?Sized>(p: &Params, f: &E, lambda: f64) -> Result<Complex64> {
    let breaks = f.breakpoints();
    integrate_mu(p, f.support(), &breaks, &f.integrator(), |x| {
        Ok(f.try_eval(x)? * b_kernel(p, lambda, x)?)
    })
}

/// `F f` on a list of spectral parameters (evaluated in parallel).
pub fn transform_f<E: Evaluable + ?Sized>(p: &Params, f: &E, lambdas: &[f64]) -> Result<SpectralSamples> {
    let values = lambdas
        .par_iter()
        .map(|&l| transform_f_at(p, f, l))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectralSamples {
        lambdas: lambdas.to_vec(),
        values,
    })
}

/// Inverse transform `g -> F(g)((-1)^n x)` at the points `xs`.
pub fn inverse_f<E: Evaluable + ?Sized>(p: &Params, g: &E, xs: &[f64]) -> Result<SpectralSamples> {
    let s = p.parity_sign();
    let reflected: Vec<f64> = xs.iter().map(|&x| s * x).collect();
    let out = transform_f(p, g, &reflected)?;
    Ok(SpectralSamples {
        lambdas: xs.to_vec(),
        values: out.values,
    })
}

/// `int |f|^q d mu`.
pub fn mu_norm_pow<E: Evaluable + ?Sized>(p: &Params, f: &E, q: f64) -> Result<f64> {
    let breaks = f.breakpoints();
    integrate_mu(p, f.support(), &breaks, &f.integrator(), |x| Ok(f.try_eval(x)?.norm().powf(q)))
}

/// Classical Hankel transform
/// `H_alpha f(lambda) = [2^(alpha-1) Gamma(alpha+1)]^(-1) int_0^inf f(t) j_alpha(t lambda) t^(2alpha+1) dt`
/// for `f` supported in `[0, rho]` and smooth between `breaks`.
pub fn hankel_integral<T, F>(
    alpha: f64,
    rho: f64,
    breaks: &[f64],
    ig: &Integrator,
    lambda: f64,
    mut f: F,
) -> Result<T>
where
    T: Scalar,
    F: FnMut(f64) -> Result<T>,
{
    if !(alpha > -0.5) {
        return Err(Error::domain(format!("alpha = {alpha} must exceed -1/2")));
    }
    let norm = 1.0 / (2f64.powf(alpha - 1.0) * gamma(alpha + 1.0));
    let v: T = ig.integrate_power(rho, 2.0 * alpha + 1.0, breaks, |t| {
        Ok(f(t)? * bessel_j_norm(alpha, t * lambda)?)
    })?;
    Ok(v * norm)
}

/// `H_alpha f(lambda)` for an evaluable `f` on `[0, inf)`.
pub fn transform_h<E: Evaluable + ?Sized>(alpha: f64, f: &E, lambda: f64) -> Result<Complex64> {
    let (lo, hi) = f.support();
    if lo < 0.0 && f.try_eval(lo)? != Complex64::default() {
        return Err(Error::invalid("transform_h expects a function on [0, inf)"));
    }
    let breaks: Vec<f64> = f.breakpoints().into_iter().filter(|&t| t > 0.0).collect();
    hankel_integral(alpha, hi.max(0.0), &breaks, &f.integrator(), lambda, |t| f.try_eval(t))
}

/// The two terms of `F f(lambda)` obtained from Hankel transforms of
/// `g_n(t) = f_e((t/n)^n)` and `J_n f_o(s) = int_s^inf f_o((t/n)^n) (t^2 - s^2)^(n-1) t^(1-n) dt`:
///
/// `F f(lambda) = H(g_n)(|lambda|^(1/n)) / (2 n^(alpha+1))
///   + (-i)^n lambda / ((n-1)! 2^n n^(alpha+1)) H(J_n f_o)(|lambda|^(1/n))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decomposition {
    pub even_term: Complex64,
    pub odd_term: Complex64,
}

impl Decomposition {
    pub fn total(&self) -> Complex64 {
        self.even_term + self.odd_term
    }
}

/// `F f(lambda)` through the even/odd Hankel decomposition.
pub fn decompose_f_via_h<E: Evaluable + ?Sized>(p: &Params, f: &E, lambda: f64) -> Result<Decomposition> {
    let n = p.n();
    let nf = n as f64;
    let alpha = p.alpha();
    let (lo, hi) = f.support();
    let big_r = lo.abs().max(hi.abs());
    let t_max = nf * nth_root(big_r, n);
    // breakpoints of f mapped to t = n |x|^(1/n)
    let mut t_breaks: Vec<f64> = f
        .breakpoints()
        .iter()
        .filter(|x| **x != 0.0)
        .map(|&x| nf * nth_root(x.abs(), n))
        .filter(|&t| t < t_max)
        .collect();
    t_breaks.sort_by(|a, b| a.total_cmp(b));
    t_breaks.dedup();
    let ig = f.integrator();
    let lam_r = nth_root(lambda.abs(), n);
    let x_of = |t: f64| pow_n(t / nf, n);
    let f_e = |x: f64| -> Result<Complex64> { Ok((f.try_eval(x)? + f.try_eval(-x)?) * 0.5) };
    let f_o = |x: f64| -> Result<Complex64> { Ok((f.try_eval(x)? - f.try_eval(-x)?) * 0.5) };

    let h_even: Complex64 = hankel_integral(alpha, t_max, &t_breaks, &ig, lam_r, |t| f_e(x_of(t)))?;
    let even_term = h_even / (2.0 * nf.powf(alpha + 1.0));

    let odd_term = if lambda == 0.0 {
        Complex64::default()
    } else {
        let j_n = |s: f64| -> Result<Complex64> {
            if s >= t_max {
                return Ok(Complex64::default());
            }
            let inner_breaks: Vec<f64> = t_breaks.iter().copied().filter(|&t| t > s).collect();
            ig.integrate_interval(s, t_max, &inner_breaks, |t| {
                let w = (t * t - s * s).powi(n as i32 - 1) * t.powi(1 - n as i32);
                Ok(f_o(x_of(t))? * w)
            })
        };
        let h_odd: Complex64 = hankel_integral(alpha, t_max, &t_breaks, &ig, lam_r, j_n)?;
        // Sonine's integral with orders (alpha, alpha + n) contributes 1/Gamma(n)
        minus_i_pow(n) * lambda / (gamma(nf) * 2f64.powi(n as i32) * nf.powf(alpha + 1.0)) * h_odd
    };
    Ok(Decomposition {
        even_term,
        odd_term,
    })
}
