//! Verification suites. Each suite sweeps one identity or bound over a
//! parameter grid (plus seeded random samples) and records both sides.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::oracle::{flatten_endpoints, oracle_bessel_j, oracle_integral, OracleConfig};
use super::report::{CaseRecord, Check, VerificationReport};
use crate::error::{Error, Result};
use crate::harmonic_ops::{
    convolution_support, convolve, lp_norm, operator_t, operator_t_fd, t_step, translate, ApplyT,
    ChebyshevTable, NormSpec, Translated,
};
use crate::kernels::{
    check_kalpha, check_key1, check_psi_ladder, check_sonine, check_th0, k_bessel, kernel_k,
    negativity_witness, xi, MeasureNu,
};
use crate::specfun::{bessel_j_norm, gamma, gauss_rule, gegenbauer, Integrator, Params, RuleKind};
use crate::testfns::{BumpSum, Gaussian, PolyBump};
use crate::transform::{b_kernel, decompose_f_via_h, transform_f_at, Evaluable, FnEvaluable};

/// The verification suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Sonine,
    Th0,
    Key1,
    PsiLadder,
    Gegenbauer,
    KernelProps,
    ProductFormula,
    MeasureProps,
    TransformDecomp,
    Translation,
    Convolution,
    #[serde(rename = "operator_T")]
    OperatorT,
    LpBounds,
    Oracle,
}

impl Suite {
    pub const ALL: [Suite; 14] = [
        Suite::Sonine,
        Suite::Th0,
        Suite::Key1,
        Suite::PsiLadder,
        Suite::Gegenbauer,
        Suite::KernelProps,
        Suite::ProductFormula,
        Suite::MeasureProps,
        Suite::TransformDecomp,
        Suite::Translation,
        Suite::Convolution,
        Suite::OperatorT,
        Suite::LpBounds,
        Suite::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Sonine => "sonine",
            Suite::Th0 => "th0",
            Suite::Key1 => "key1",
            Suite::PsiLadder => "psi_ladder",
            Suite::Gegenbauer => "gegenbauer",
            Suite::KernelProps => "kernel_props",
            Suite::ProductFormula => "product_formula",
            Suite::MeasureProps => "measure_props",
            Suite::TransformDecomp => "transform_decomp",
            Suite::Translation => "translation",
            Suite::Convolution => "convolution",
            Suite::OperatorT => "operator_T",
            Suite::LpBounds => "lp_bounds",
            Suite::Oracle => "oracle",
        }
    }

    /// Tolerance of the suite's main check.
    pub fn default_tolerance(self) -> f64 {
        match self {
            Suite::Sonine | Suite::Th0 | Suite::Key1 | Suite::MeasureProps | Suite::LpBounds => 1e-8,
            Suite::PsiLadder | Suite::TransformDecomp | Suite::Convolution | Suite::OperatorT => 1e-6,
            Suite::Gegenbauer => 1e-10,
            Suite::KernelProps => 1e-9,
            Suite::ProductFormula | Suite::Translation => 1e-7,
            Suite::Oracle => 1e-12,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

/// The four `(n, kappa)` pairs used throughout.
pub const STANDARD_PARAMS: [(u32, f64); 4] = [(1, 1.0), (2, 0.8), (3, 0.7), (4, 0.6)];

const BESSEL_ALPHAS: [f64; 3] = [0.55, 1.0, 2.3];
const BESSEL_POINTS: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 5.0];

/// Parameter grid of a suite. Each suite reads the fields it needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Grid {
    /// `(n, kappa)` pairs.
    pub params: Vec<(u32, f64)>,
    pub alphas: Vec<f64>,
    pub points: Vec<f64>,
    /// Orders `n` or polynomial degrees.
    pub orders: Vec<u32>,
    /// Random samples per parameter set.
    pub samples: usize,
    /// Cap on the per-piece Gauss order.
    pub max_order: usize,
    pub oracle: OracleConfig,
}

impl Default for Grid {
    fn default() -> Self {
        Self {
            params: STANDARD_PARAMS.to_vec(),
            alphas: BESSEL_ALPHAS.to_vec(),
            points: BESSEL_POINTS.to_vec(),
            orders: vec![0, 1, 2, 3, 4],
            samples: 10,
            max_order: 512,
            oracle: OracleConfig::default(),
        }
    }
}

impl Grid {
    pub fn default_for(suite: Suite) -> Self {
        let base = Grid::default();
        match suite {
            Suite::Sonine => Grid {
                orders: vec![0],
                ..base
            },
            Suite::Th0 | Suite::Key1 => base,
            Suite::PsiLadder => Grid {
                orders: vec![1, 2, 3, 4, 5],
                points: vec![0.1, 0.5, 1.0, 2.0, 5.0],
                ..base
            },
            Suite::Gegenbauer => Grid {
                alphas: vec![0.6, 1.5],
                orders: (0..=8).collect(),
                ..base
            },
            Suite::KernelProps => Grid { samples: 20, ..base },
            Suite::ProductFormula => Grid { samples: 100, ..base },
            Suite::MeasureProps => Grid { samples: 20, ..base },
            Suite::TransformDecomp => Grid {
                params: vec![(1, 1.0), (2, 0.8), (3, 0.7)],
                samples: 6,
                ..base
            },
            Suite::Translation => Grid { samples: 3, ..base },
            Suite::Convolution => Grid {
                params: vec![(2, 0.8), (3, 0.7)],
                samples: 6,
                ..base
            },
            Suite::OperatorT => base,
            Suite::LpBounds => Grid {
                params: vec![(2, 0.8), (3, 0.7)],
                samples: 2,
                ..base
            },
            Suite::Oracle => Grid {
                alphas: vec![0.0, 0.5, 1.3, 2.75, 5.0, 10.0],
                points: vec![0.0, 0.7, 3.0, 8.25, 14.5, 20.0],
                samples: 6,
                ..base
            },
        }
    }

    fn integrator(&self) -> Integrator {
        Integrator::default().with_orders(64, self.max_order.max(128))
    }

    fn param_list(&self) -> Result<Vec<Params>> {
        self.params.iter().map(|&(n, k)| Params::new(n, k)).collect()
    }

    /// Grid as JSON, with the derived `alpha` and regime flag of each
    /// `(n, kappa)` pair.
    fn describe(&self, suite: Suite) -> serde_json::Value {
        let mut v = serde_json::to_value(self).unwrap_or(serde_json::Value::Null);
        if uses_params(suite) {
            let derived: Vec<_> = self
                .params
                .iter()
                .filter_map(|&(n, k)| Params::new(n, k).ok())
                .map(|p| {
                    json!({
                        "n": p.n(),
                        "kappa": p.kappa(),
                        "alpha": p.alpha(),
                        "strong_regime": p.in_strong_regime(),
                    })
                })
                .collect();
            v["derived"] = json!(derived);
        }
        v
    }
}

fn uses_params(suite: Suite) -> bool {
    matches!(
        suite,
        Suite::KernelProps
            | Suite::ProductFormula
            | Suite::MeasureProps
            | Suite::TransformDecomp
            | Suite::Translation
            | Suite::Convolution
            | Suite::OperatorT
            | Suite::LpBounds
    )
}

/// Uniform on `[-5, 5]` with `|x| < 0.05` rejected.
fn sample_point(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let x: f64 = rng.random_range(-5.0..=5.0);
        if x.abs() >= 0.05 {
            return x;
        }
    }
}

fn sample_in(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..=hi)
}

fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![lo],
        _ => (0..count)
            .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
            .collect(),
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Runs one suite. Identical arguments give identical reports apart from
/// `runtime_ms`.
pub fn run_suite(suite: Suite, grid: &Grid, tol: f64, seed: u64) -> Result<VerificationReport> {
    if !(tol >= 0.0) {
        return Err(Error::invalid(format!("tolerance {tol} must be >= 0")));
    }
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases = match suite {
        Suite::Sonine => sonine(grid, tol),
        Suite::Th0 => th0(grid, tol),
        Suite::Key1 => key1(grid, tol),
        Suite::PsiLadder => psi_ladder(grid, tol),
        Suite::Gegenbauer => gegenbauer_orthogonality(grid, tol),
        Suite::KernelProps => kernel_props(grid, tol, &mut rng),
        Suite::ProductFormula => product_formula(grid, tol, &mut rng),
        Suite::MeasureProps => measure_props(grid, tol, &mut rng),
        Suite::TransformDecomp => transform_decomp(grid, tol, &mut rng),
        Suite::Translation => translation(grid, tol, &mut rng),
        Suite::Convolution => convolution(grid, tol, &mut rng),
        Suite::OperatorT => operator_t_suite(grid, tol),
        Suite::LpBounds => lp_bounds(grid, tol, &mut rng),
        Suite::Oracle => oracle(grid, tol, &mut rng),
    }?;
    let runtime_ms = start.elapsed().as_millis() as u64;
    Ok(VerificationReport::new(
        suite.name(),
        grid.describe(suite),
        tol,
        seed,
        cases,
        runtime_ms,
    ))
}

/// `run_suite` with the suite's default grid and tolerance.
pub fn run_default(suite: Suite, seed: u64) -> Result<VerificationReport> {
    run_suite(suite, &Grid::default_for(suite), suite.default_tolerance(), seed)
}

fn bessel_triples(grid: &Grid) -> Vec<(f64, f64, f64)> {
    let mut out = Vec::new();
    for &a in &grid.alphas {
        for &u in &grid.points {
            for &v in &grid.points {
                out.push((a, u, v));
            }
        }
    }
    out
}

fn sonine(grid: &Grid, tol: f64) -> Result<Vec<CaseRecord>> {
    bessel_triples(grid)
        .par_iter()
        .map(|&(a, u, v)| {
            let r = check_sonine(a, u, v)?;
            Ok(CaseRecord::real(
                "sonine",
                &[("alpha", a), ("u", u), ("v", v)],
                r.lhs,
                r.rhs,
                Check::Absolute,
                tol,
            ))
        })
        .collect()
}

fn with_orders(grid: &Grid) -> Vec<(u32, f64, f64, f64)> {
    grid.orders
        .iter()
        .flat_map(|&n| bessel_triples(grid).into_iter().map(move |(a, u, v)| (n, a, u, v)))
        .collect()
}

fn th0(grid: &Grid, tol: f64) -> Result<Vec<CaseRecord>> {
    with_orders(grid)
        .par_iter()
        .map(|&(n, a, u, v)| {
            let r = check_th0(a, n, u, v)?;
            Ok(CaseRecord::real(
                "th0",
                &[("n", n as f64), ("alpha", a), ("u", u), ("v", v)],
                r.lhs,
                r.rhs,
                Check::Absolute,
                tol,
            ))
        })
        .collect()
}

fn key1(grid: &Grid, tol: f64) -> Result<Vec<CaseRecord>> {
    with_orders(grid)
        .par_iter()
        .map(|&(n, a, u, v)| {
            let r = check_key1(a, n, u, v)?;
            Ok(CaseRecord::real(
                "key1",
                &[("n", n as f64), ("alpha", a), ("u", u), ("v", v)],
                r.lhs,
                r.rhs,
                Check::Absolute,
                tol,
            ))
        })
        .collect()
}

const LADDER_ANGLES: [f64; 3] = [0.4, 1.3, 2.6];

fn psi_ladder(grid: &Grid, tol: f64) -> Result<Vec<CaseRecord>> {
    let mut inputs = Vec::new();
    for (n, a, u, v) in with_orders(grid) {
        for &phi in &LADDER_ANGLES {
            inputs.push((n, a, u, v, phi));
        }
    }
    inputs
        .par_iter()
        .map(|&(n, a, u, v, phi)| {
            let h = 1e-5;
            let r = check_psi_ladder(n, a, u, v, phi, h)?;
            Ok(CaseRecord::real(
                "psi_ladder",
                &[("n", n as f64), ("alpha", a), ("u", u), ("v", v), ("phi", phi), ("h", h)],
                r.lhs,
                r.rhs,
                Check::Relative,
                tol,
            ))
        })
        .collect()
}

/// `int (C_m^alpha)^2 (1-t^2)^(alpha-1/2) dt`.
fn gegenbauer_norm(alpha: f64, m: u32) -> f64 {
    let mf = m as f64;
    std::f64::consts::PI * gamma(2.0 * alpha + mf)
        / (2f64.powf(2.0 * alpha - 1.0) * gamma(mf + 1.0) * (mf + alpha) * gamma(alpha).powi(2))
}

fn gegenbauer_orthogonality(grid: &Grid, tol: f64) -> Result<Vec<CaseRecord>> {
    let mut out = Vec::new();
    let top = grid.orders.iter().copied().max().unwrap_or(0);
    for &a in &grid.alphas {
        // exact for degree <= 2 * order - 1
        let rule = gauss_rule(top as usize + 2, RuleKind::Jacobi(a - 0.5))?;
        for &m in &grid.orders {
            for &k in &grid.orders {
                let lhs = rule.integrate(|t| {
                    gegenbauer(m, a, t).unwrap_or(f64::NAN) * gegenbauer(k, a, t).unwrap_or(f64::NAN)
                });
                let rhs = if m == k { gegenbauer_norm(a, m) } else { 0.0 };
                out.push(CaseRecord::real(
                    "orthogonality",
                    &[("alpha", a), ("m", m as f64), ("m_prime", k as f64)],
                    lhs,
                    rhs,
                    Check::Absolute,
                    tol,
                ));
            }
        }
    }
    Ok(out)
}

fn kernel_props(grid: &Grid, tol: f64, rng: &mut ChaCha8Rng) -> Result<Vec<CaseRecord>> {
    let triples: Vec<(f64, f64, f64)> = (0..grid.samples)
        .map(|_| (sample_in(rng, 0.1, 3.0), sample_in(rng, 0.1, 5.0), sample_in(rng, 0.1, 5.0)))
        .collect();
    let mut out = triples
        .par_iter()
        .map(|&(a, u, v)| {
            let r = check_kalpha(a, u, v)?;
            Ok(CaseRecord::real(
                "kalpha_mass",
                &[("alpha", a), ("u", u), ("v", v)],
                r.lhs,
                r.rhs,
                Check::Absolute,
                tol,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    // |xi| <= 1 inside the support
    for p in grid.param_list()? {
        for _ in 0..grid.samples.min(10) {
            let x = sample_point(rng);
            let y = sample_point(rng);
            let a = p.root(x);
            let b = p.root(y);
            let r = sample_in(rng, (a - b).abs(), a + b);
            let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            let z = sign * r.powi(p.n() as i32);
            let v = xi(&p, x, y, z)?;
            out.push(CaseRecord::real(
                "xi_bound",
                &[("n", p.n() as f64), ("kappa", p.kappa()), ("x", x), ("y", y), ("z", z)],
                v.abs(),
                1.0,
                Check::AtMost,
                1e-12,
            ));
        }
    }
    Ok(out)
}

fn product_formula(grid: &Grid, tol: f64, rng: &mut ChaCha8Rng) -> Result<Vec<CaseRecord>> {
    let ig = grid.integrator();
    let mut inputs = Vec::new();
    for p in grid.param_list()? {
        for _ in 0..grid.samples {
            inputs.push((p, sample_point(rng), sample_point(rng), sample_point(rng)));
        }
    }
    inputs
        .par_iter()
        .map(|&(p, lambda, x, y)| {
            let lhs = b_kernel(&p, lambda, x)? * b_kernel(&p, lambda, y)?;
            let rhs: Complex64 = MeasureNu::new(p, x, y)?
                .with_integrator(ig)
                .integrate(&[], |z| b_kernel(&p, lambda, z))?;
            Ok(CaseRecord::new(
                "product_formula",
                &[("n", p.n() as f64), ("kappa", p.kappa()), ("lambda", lambda), ("x", x), ("y", y)],
                lhs,
                rhs,
                Check::Absolute,
                tol,
            ))
        })
        .collect()
}

/// Witness pair `(x, y)` for the negative part of `nu`, in the `|.|^(1/n)`
/// variable, and the relative offset from the support edge.
const WITNESS: (f64, f64, f64) = (2.0, 1.0, 0.01);

fn measure_props(grid: &Grid, tol: f64, rng: &mut ChaCha8Rng) -> Result<Vec<CaseRecord>> {
    let ig = grid.integrator();
    let mut inputs = Vec::new();
    for p in grid.param_list()? {
        for _ in 0..grid.samples {
            inputs.push((p, sample_point(rng), sample_point(rng)));
        }
    }
    let per_pair = inputs
        .par_iter()
        .map(|&(p, x, y)| {
            let keys = [("n", p.n() as f64), ("kappa", p.kappa()), ("x", x), ("y", y)];
            let nu = MeasureNu::new(p, x, y)?.with_integrator(ig);
            let mass = nu.mass()?;
            let tv = nu.total_variation()?;
            let mut cases = vec![
                CaseRecord::real("mass", &keys, mass, 1.0, Check::Absolute, tol),
                CaseRecord::real("total_variation", &keys, tv, 4.0, Check::AtMost, tol),
            ];
            let (lo, hi) = nu.support_radii().expect("x, y are nonzero");
            let n = p.n() as i32;
            let mut outside = vec![hi * 1.01, hi * 1.5 + 0.1];
            if lo > 0.0 {
                outside.push(lo * 0.99);
                outside.push(lo * 0.5);
            }
            for r in outside {
                for z in [r.powi(n), -r.powi(n)] {
                    let k = kernel_k(&p, x, y, z)?;
                    let mut inp = keys.to_vec();
                    inp.push(("z", z));
                    cases.push(CaseRecord::real("zero_outside_support", &inp, k, 0.0, Check::Absolute, 0.0));
                }
            }
            Ok(cases)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out: Vec<CaseRecord> = per_pair.into_iter().flatten().collect();
    for p in grid.param_list()? {
        let (x, y, eta) = WITNESS;
        let (z, k) = negativity_witness(&p, x, y, eta)?;
        out.push(CaseRecord::real(
            "negativity_witness",
            &[("n", p.n() as f64), ("kappa", p.kappa()), ("x", x), ("y", y), ("z", z)],
            k,
            0.0,
            Check::Negative,
            0.0,
        ));
    }
    Ok(out)
}

fn transform_decomp(grid: &Grid, tol: f64, rng: &mut ChaCha8Rng) -> Result<Vec<CaseRecord>> {
    let bumps = [
        BumpSum(vec![PolyBump::unit_peak(-0.9, 1.6, 4)]),
        BumpSum(vec![
            PolyBump::unit_peak(0.2, 1.4, 3),
            PolyBump::unit_peak(-2.0, -0.5, 5).scaled(Complex64::new(0.5, -0.25)),
        ]),
    ];
    let mut inputs = Vec::new();
    for p in grid.param_list()? {
        for (i, _) in bumps.iter().enumerate() {
            for _ in 0..grid.samples {
                let mag = sample_in(rng, 0.2, 4.0);
                let lambda = if rng.random_bool(0.5) { mag } else { -mag };
                inputs.push((p, i, lambda));
            }
        }
    }
    inputs
        .par_iter()
        .map(|&(p, i, lambda)| {
            let f = &bumps[i];
            let direct = transform_f_at(&p, f, lambda)?;
            let split = decompose_f_via_h(&p, f, lambda)?.total();
            Ok(CaseRecord::new(
                "decomposition",
                &[("n", p.n() as f64), ("kappa", p.kappa()), ("function", i as f64), ("lambda", lambda)],
                split,
                direct,
                Check::Relative,
                tol,
            ))
        })
        .collect()
}

fn translation(grid: &Grid, tol: f64, rng: &mut ChaCha8Rng) -> Result<Vec<CaseRecord>> {
    let mut out = Vec::new();
    let gauss = Gaussian::new(0.3, 0.6);
    let unit_gauss = Gaussian::new(0.0, 1.0);
    let bump = PolyBump::unit_peak(-0.8, 1.4, 6);
    for p in grid.param_list()? {
        let n = p.n() as f64;
        let keys = [("n", n), ("kappa", p.kappa())];
        // identity at x = 0
        for _ in 0..grid.samples {
            let y = sample_point(rng);
            let v = translate(&p, &gauss, 0.0, y)?;
            let mut inp = keys.to_vec();
            inp.push(("y", y));
            out.push(CaseRecord::new("identity", &inp, v, gauss.eval(y), Check::Absolute, 1e-9));
        }
        // symmetry in (x, y)
        let mut pairs = vec![(1.0, 0.3)];
        for _ in 0..grid.samples {
            pairs.push((sample_in(rng, -2.5, 2.5), sample_in(rng, -2.5, 2.5)));
        }
        for (x, y) in pairs {
            let a = translate(&p, &unit_gauss, x, y)?;
            let b = translate(&p, &unit_gauss, y, x)?;
            let mut inp = keys.to_vec();
            inp.extend([("x", x), ("y", y)]);
            out.push(CaseRecord::new("symmetry", &inp, a, b, Check::Absolute, 1e-9));
        }
        // F(tau_x f)(lambda) = B_lambda((-1)^n x) F f(lambda)
        for _ in 0..grid.samples {
            let x = loop {
                let x = sample_in(rng, -2.0, 2.0);
                if x.abs() >= 0.05 {
                    break x;
                }
            };
            let lambda = sample_in(rng, 0.2, 3.0);
            let t = Translated::new(p, bump, x);
            let lhs = transform_f_at(&p, &t, lambda)?;
            let rhs = b_kernel(&p, lambda, p.parity_sign() * x)? * transform_f_at(&p, &bump, lambda)?;
            let mut inp = keys.to_vec();
            inp.extend([("x", x), ("lambda", lambda)]);
            out.push(CaseRecord::new("spectral", &inp, lhs, rhs, Check::Absolute, tol));
        }
        // F(T tau_x f) = -|lambda|^(2/n) B_lambda((-1)^n x) F f, with f living
        // on radii [1, 1.6] and |x|^(1/n) = 0.35, so tau_x f vanishes near 0
        let ring = PolyBump::unit_peak(1.0, 1.6f64.powi(p.n() as i32), 6);
        let x = p.parity_sign() * 0.35f64.powi(p.n() as i32);
        let t = Translated::new(p, ring, x);
        let tt = ApplyT::new(p, &t).with_integrator(ring.integrator().with_tol(1e-8));
        for lambda in [0.6, 1.7] {
            let lhs = transform_f_at(&p, &tt, lambda)?;
            let rhs = b_kernel(&p, lambda, p.parity_sign() * x)?
                * transform_f_at(&p, &ring, lambda)?
                * -lambda.abs().powf(2.0 / n);
            let mut inp = keys.to_vec();
            inp.extend([("x", x), ("lambda", lambda)]);
            out.push(CaseRecord::new("t_commutes", &inp, lhs, rhs, Check::Absolute, 1e-5));
        }
    }
    Ok(out)
}

/// Panels and nodes per panel of the convolution tables.
const TABLE_SHAPE: (usize, usize) = (4, 24);

fn convolution(grid: &Grid, tol: f64, rng: &mut ChaCha8Rng) -> Result<Vec<CaseRecord>> {
    let mut out = Vec::new();
    let f = Gaussian::new(0.3, 0.5);
    let g = Gaussian::new(-0.2, 0.4);
    let h = Gaussian::new(0.1, 0.45);
    let b1 = PolyBump::unit_peak(-0.6, 1.1, 4);
    let b2 = PolyBump::unit_peak(-1.3, 0.4, 5);
    let (panels, nodes) = TABLE_SHAPE;
    for p in grid.param_list()? {
        let keys = [("n", p.n() as f64), ("kappa", p.kappa())];
        let fg = ChebyshevTable::convolution(&p, &f, &g, panels, nodes)?;
        // convolution theorem
        for lambda in linspace(0.2, 3.0, grid.samples) {
            let lhs = transform_f_at(&p, &fg, lambda)?;
            let rhs = transform_f_at(&p, &f, lambda)? * transform_f_at(&p, &g, lambda)?;
            let mut inp = keys.to_vec();
            inp.push(("lambda", lambda));
            out.push(CaseRecord::new("convolution_theorem", &inp, lhs, rhs, Check::Relative, tol));
        }
        // commutativity
        let mut xs = vec![0.5];
        for _ in 0..2 {
            xs.push(sample_in(rng, -2.0, 2.0));
        }
        for x in xs {
            let a = convolve(&p, &b1, &b2, x)?;
            let b = convolve(&p, &b2, &b1, x)?;
            let mut inp = keys.to_vec();
            inp.push(("x", x));
            out.push(CaseRecord::new("commutativity", &inp, a, b, Check::Absolute, 1e-7));
        }
        // support growth
        let (_, edge) = convolution_support(&p, &b1, &b2);
        let r = p.root(edge);
        for factor in [1.02, 1.3] {
            let x = (r * factor).powi(p.n() as i32);
            for x in [x, -x] {
                let v = convolve(&p, &b1, &b2, x)?;
                let mut inp = keys.to_vec();
                inp.extend([("x", x), ("edge", edge)]);
                out.push(CaseRecord::new("outside_support", &inp, v, c(0.0), Check::Absolute, 0.0));
            }
        }
        // associativity
        let gh = ChebyshevTable::convolution(&p, &g, &h, panels, nodes)?;
        for x in linspace(-1.5, 1.5, 5) {
            let left = convolve(&p, &fg, &h, x)?;
            let right = convolve(&p, &f, &gh, x)?;
            let mut inp = keys.to_vec();
            inp.push(("x", x));
            out.push(CaseRecord::new("associativity", &inp, left, right, Check::Absolute, 1e-5));
        }
    }
    Ok(out)
}

/// Eigenrelation points `(lambda, x)`.
const EIGEN_POINTS: [(f64, f64); 3] = [(1.5, 0.9), (-0.7, 1.3), (2.4, -0.6)];

fn operator_t_suite(grid: &Grid, tol: f64) -> Result<Vec<CaseRecord>> {
    let mut out = Vec::new();
    for p in grid.param_list()? {
        let nf = p.n() as f64;
        let keys = [("n", nf), ("kappa", p.kappa())];
        for (lambda, x) in EIGEN_POINTS {
            let b = FnEvaluable::new(move |z| b_kernel(&p, lambda, z).unwrap_or(c(f64::NAN)), (-1e3, 1e3));
            let want = b_kernel(&p, lambda, x)? * -lambda.abs().powf(2.0 / nf);
            let mut inp = keys.to_vec();
            inp.extend([("lambda", lambda), ("x", x)]);
            // default step
            let v = operator_t(&p, &b, x)?;
            let mut at = inp.clone();
            at.push(("h", t_step(x)));
            out.push(CaseRecord::new("eigenrelation", &at, v, want, Check::Absolute, tol));
            // second-order convergence of the central differences
            let h = x.abs() / 40.0;
            let e1 = (operator_t_fd(&p, &b, x, h)? - want).norm();
            let e2 = (operator_t_fd(&p, &b, x, 0.5 * h)? - want).norm();
            inp.push(("h", h));
            out.push(CaseRecord::real("fd_error_ratio", &inp, e1 / e2, 4.0, Check::Absolute, 0.8));
        }
        // even functions: the reflection term drops out
        let g = Gaussian::new(0.0, 1.0);
        for x in [0.4f64, -1.1, 2.0] {
            let e = (-x * x).exp();
            let bessel_form = x.abs().powf(2.0 - 2.0 / nf)
                * ((4.0 * x * x - 2.0) * e + 2.0 * p.kappa() / x * (-2.0 * x * e));
            let mut inp = keys.to_vec();
            inp.push(("x", x));
            out.push(CaseRecord::new(
                "even_reduction",
                &inp,
                operator_t(&p, &g, x)?,
                c(bessel_form),
                Check::Relative,
                1e-12,
            ));
        }
        // symmetry of the bilinear form
        let f = BumpSum(vec![PolyBump::unit_peak(0.3, 2.5, 5), PolyBump::unit_peak(-1.8, -0.6, 5)]);
        let g = BumpSum(vec![
            PolyBump::unit_peak(0.9, 2.1, 5),
            PolyBump::unit_peak(-2.5, -0.3, 5).scaled(Complex64::new(-0.7, 0.4)),
        ]);
        let ig = grid.integrator().with_orders(32, grid.max_order.max(128));
        let mut breaks = f.breakpoints();
        breaks.extend(g.breakpoints());
        let form = |a: &BumpSum, b: &BumpSum| -> Result<Complex64> {
            crate::transform::integrate_mu(&p, (-2.5, 2.5), &breaks, &ig, |x| {
                if x == 0.0 {
                    return Ok(Complex64::default());
                }
                Ok(operator_t(&p, a, x)? * b.eval(x))
            })
        };
        out.push(CaseRecord::new("t_symmetry", &keys, form(&f, &g)?, form(&g, &f)?, Check::Absolute, tol));
    }
    Ok(out)
}

fn lp_bounds(grid: &Grid, tol: f64, rng: &mut ChaCha8Rng) -> Result<Vec<CaseRecord>> {
    let mut out = Vec::new();
    let f = Gaussian::new(0.3, 0.5);
    let g = Gaussian::new(-0.2, 0.4).scaled(Complex64::new(0.8, 0.3));
    let bump = PolyBump::unit_peak(-0.7, 1.2, 4);
    let one = NormSpec::new(1.0)?;
    let two = NormSpec::new(2.0)?;
    let inf = NormSpec::infinity();
    let (panels, nodes) = TABLE_SHAPE;
    for p in grid.param_list()? {
        let keys = [("n", p.n() as f64), ("kappa", p.kappa())];
        let fg = ChebyshevTable::convolution(&p, &f, &g, panels, nodes)?;
        for (pp, qq) in [(one, one), (one, two), (two, two)] {
            let r = NormSpec::young(pp, qq)?;
            let lhs = lp_norm(&p, &fg, r)?;
            let rhs = 4.0 * lp_norm(&p, &f, pp)? * lp_norm(&p, &g, qq)?;
            let mut inp = keys.to_vec();
            inp.extend([("p", pp.p()), ("q", qq.p()), ("r", r.p())]);
            out.push(CaseRecord::real("young", &inp, lhs, rhs, Check::AtMost, tol));
        }
        for _ in 0..grid.samples {
            let x = sample_in(rng, -2.0, 2.0);
            let t = Translated::new(p, bump, x);
            for spec in [one, two, inf] {
                let lhs = lp_norm(&p, &t, spec)?;
                let rhs = 4.0 * lp_norm(&p, &bump, spec)?;
                let mut inp = keys.to_vec();
                inp.extend([("x", x), ("p", spec.p())]);
                out.push(CaseRecord::real("translation_bound", &inp, lhs, rhs, Check::AtMost, tol));
            }
        }
        for spec in [one, two, inf] {
            let scaled = bump.scaled(3.0 * bump.scale);
            let mut inp = keys.to_vec();
            inp.push(("p", spec.p()));
            out.push(CaseRecord::real(
                "scaling",
                &inp,
                lp_norm(&p, &scaled, spec)?,
                3.0 * lp_norm(&p, &bump, spec)?,
                Check::Relative,
                1e-12,
            ));
        }
    }
    Ok(out)
}

/// `sin(1)` to 40 significant digits.
const SIN_ONE: &str = "0.8414709848078965066525023216302989996226";

fn parse_decimal(s: &str) -> Result<BigRational> {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let digits: BigInt = format!("{int}{frac}")
        .parse()
        .map_err(|_| Error::invalid(format!("bad decimal {s}")))?;
    Ok(BigRational::new(digits, num_traits::pow(BigInt::from(10u32), frac.len())))
}

fn oracle(grid: &Grid, tol: f64, rng: &mut ChaCha8Rng) -> Result<Vec<CaseRecord>> {
    let cfg = grid.oracle;
    cfg.validate()?;
    let mut pairs = Vec::new();
    for &a in &grid.alphas {
        for &x in &grid.points {
            pairs.push((a, x));
        }
        for _ in 0..grid.samples {
            pairs.push((a, sample_in(rng, 0.0, 20.0)));
        }
    }
    let mut out = pairs
        .par_iter()
        .map(|&(a, x)| {
            let fast = bessel_j_norm(a, x)?;
            let slow = oracle_bessel_j(a, x, &cfg)?;
            Ok(CaseRecord::real(
                "bessel_agreement",
                &[("alpha", a), ("x", x)],
                fast,
                slow.to_f64(),
                Check::Relative,
                tol,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    // closed form: j_{1/2}(1) = sin(1), compared in exact arithmetic
    let half = oracle_bessel_j(0.5, 1.0, &cfg)?;
    let diff = (half.value - parse_decimal(SIN_ONE)?).to_f64().unwrap_or(f64::NAN);
    out.push(CaseRecord::real(
        "closed_form_sin",
        &[("alpha", 0.5), ("x", 1.0)],
        diff,
        0.0,
        Check::Absolute,
        1e-30,
    ));
    // Wallis integral and the kernel mass by brute force
    let pi = std::f64::consts::PI;
    let wallis = oracle_integral(|t: f64| t.sin().powi(2), 0.0, pi, &cfg)?;
    out.push(CaseRecord::real(
        "wallis",
        &[("alpha", 1.0)],
        wallis.value,
        0.5 * pi,
        Check::Absolute,
        1e-13,
    ));
    let (a, u, v): (f64, f64, f64) = (0.6, 1.2, 0.7);
    let lo = (u - v).abs();
    let mass_integrand = move |w: f64| k_bessel(a, u, v, w).unwrap_or(f64::NAN) * w.powf(2.0 * a + 1.0);
    let mass = oracle_integral(flatten_endpoints(mass_integrand, lo, u + v), 0.0, 1.0, &cfg)?;
    out.push(CaseRecord::real(
        "kalpha_mass",
        &[("alpha", a), ("u", u), ("v", v)],
        mass.value,
        1.0,
        Check::Absolute,
        1e-10,
    ));
    Ok(out)
}
