//! Test functions with closed-form derivatives: truncated Gaussians and
//! polynomial bumps.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::harmonic_ops::Smooth;
use crate::specfun::Integrator;
use crate::transform::Evaluable;

/// Widths beyond which a Gaussian is treated as zero (`exp(-81)`).
pub const GAUSSIAN_CUTOFF: f64 = 9.0;

/// `scale * exp(-((x - center) / width)^2)`, truncated at
/// `GAUSSIAN_CUTOFF` widths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gaussian {
    pub center: f64,
    pub width: f64,
    pub scale: Complex64,
}

impl Gaussian {
    pub fn new(center: f64, width: f64) -> Self {
        Self {
            center,
            width,
            scale: Complex64::new(1.0, 0.0),
        }
    }

    pub fn scaled(self, scale: Complex64) -> Self {
        Self { scale, ..self }
    }

    fn core(&self, x: f64) -> f64 {
        let s = (x - self.center) / self.width;
        (-s * s).exp()
    }
}

impl Evaluable for Gaussian {
    fn eval(&self, x: f64) -> Complex64 {
        let (lo, hi) = self.support();
        if x < lo || x > hi {
            return Complex64::default();
        }
        self.scale * self.core(x)
    }

    fn support(&self) -> (f64, f64) {
        let r = GAUSSIAN_CUTOFF * self.width;
        (self.center - r, self.center + r)
    }

    fn integrator(&self) -> Integrator {
        Integrator::default().with_orders(32, 512)
    }
}

impl Smooth for Gaussian {
    fn derivatives(&self, x: f64) -> Option<(Complex64, Complex64)> {
        let (lo, hi) = self.support();
        if x < lo || x > hi {
            return Some((Complex64::default(), Complex64::default()));
        }
        let w2 = self.width * self.width;
        let d = x - self.center;
        let g = self.core(x);
        let d1 = -2.0 * d / w2 * g;
        let d2 = (4.0 * d * d / (w2 * w2) - 2.0 / w2) * g;
        Some((self.scale * d1, self.scale * d2))
    }
}

/// `scale * ((x - lo)(hi - x))^power` on `[lo, hi]`, zero elsewhere.
/// Of class `C^(power - 1)` on the line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolyBump {
    pub lo: f64,
    pub hi: f64,
    pub power: u32,
    pub scale: Complex64,
}

impl PolyBump {
    pub fn new(lo: f64, hi: f64, power: u32) -> Self {
        assert!(lo < hi, "empty bump [{lo}, {hi}]");
        Self {
            lo,
            hi,
            power,
            scale: Complex64::new(1.0, 0.0),
        }
    }

    /// Bump with peak value one.
    pub fn unit_peak(lo: f64, hi: f64, power: u32) -> Self {
        let half = 0.5 * (hi - lo);
        let peak = (half * half).powi(power as i32);
        Self::new(lo, hi, power).scaled(Complex64::new(1.0 / peak, 0.0))
    }

    pub fn scaled(self, scale: Complex64) -> Self {
        Self { scale, ..self }
    }

    fn inside(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }
}

impl Evaluable for PolyBump {
    fn eval(&self, x: f64) -> Complex64 {
        if !self.inside(x) {
            return Complex64::default();
        }
        let q = (x - self.lo) * (self.hi - x);
        self.scale * q.powi(self.power as i32)
    }

    fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    fn breakpoints(&self) -> Vec<f64> {
        vec![self.lo, self.hi]
    }

    fn integrator(&self) -> Integrator {
        Integrator::default().with_orders(16, 512)
    }
}

impl Smooth for PolyBump {
    fn derivatives(&self, x: f64) -> Option<(Complex64, Complex64)> {
        if !self.inside(x) {
            return Some((Complex64::default(), Complex64::default()));
        }
        let k = self.power as i32;
        let kf = k as f64;
        let q = (x - self.lo) * (self.hi - x);
        let dq = self.hi + self.lo - 2.0 * x;
        let (d1, d2) = match k {
            0 => (0.0, 0.0),
            1 => (dq, -2.0),
            _ => (
                kf * q.powi(k - 1) * dq,
                kf * ((kf - 1.0) * q.powi(k - 2) * dq * dq - 2.0 * q.powi(k - 1)),
            ),
        };
        Some((self.scale * d1, self.scale * d2))
    }
}

/// Sum of polynomial bumps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BumpSum(pub Vec<PolyBump>);

impl Evaluable for BumpSum {
    fn eval(&self, x: f64) -> Complex64 {
        self.0.iter().map(|b| b.eval(x)).sum()
    }

    fn support(&self) -> (f64, f64) {
        self.0.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), b| {
            (lo.min(b.lo), hi.max(b.hi))
        })
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.0.iter().flat_map(|b| [b.lo, b.hi]).collect()
    }

    fn integrator(&self) -> Integrator {
        Integrator::default().with_orders(16, 512)
    }
}

impl Smooth for BumpSum {
    fn derivatives(&self, x: f64) -> Option<(Complex64, Complex64)> {
        let mut d1 = Complex64::default();
        let mut d2 = Complex64::default();
        for b in &self.0 {
            let (a, c) = b.derivatives(x)?;
            d1 += a;
            d2 += c;
        }
        Some((d1, d2))
    }
}
