//! Verification reports and their JSON encoding.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::Result;

/// How a case compares its two sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// `|lhs - rhs| <= tolerance`.
    Absolute,
    /// `|lhs - rhs| / max(|lhs|, |rhs|) <= tolerance`.
    Relative,
    /// `Re lhs <= Re rhs + tolerance`.
    AtMost,
    /// `Re lhs < 0`.
    Negative,
}

/// One evaluated instance of an identity or bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub label: String,
    pub inputs: BTreeMap<String, f64>,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub check: Check,
    pub tolerance: f64,
    pub pass: bool,
}

impl CaseRecord {
    pub fn new(
        label: &str,
        inputs: &[(&str, f64)],
        lhs: Complex64,
        rhs: Complex64,
        check: Check,
        tolerance: f64,
    ) -> Self {
        let (abs_err, rel_err) = match check {
            Check::Absolute | Check::Relative => {
                let d = (lhs - rhs).norm();
                let scale = lhs.norm().max(rhs.norm());
                (d, if d == 0.0 { 0.0 } else { d / scale.max(1e-300) })
            }
            Check::AtMost => {
                let d = (lhs.re - rhs.re).max(0.0);
                (d, if d == 0.0 { 0.0 } else { d / rhs.re.abs().max(1e-300) })
            }
            Check::Negative => {
                let d = lhs.re.max(0.0);
                (d, d)
            }
        };
        let pass = match check {
            Check::Absolute => abs_err <= tolerance,
            Check::Relative => rel_err <= tolerance,
            Check::AtMost => lhs.re <= rhs.re + tolerance,
            Check::Negative => lhs.re < 0.0,
        };
        Self {
            label: label.to_string(),
            inputs: inputs.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            lhs,
            rhs,
            abs_err: if abs_err.is_nan() { f64::INFINITY } else { abs_err },
            rel_err: if rel_err.is_nan() { f64::INFINITY } else { rel_err },
            check,
            tolerance,
            pass,
        }
    }

    pub fn real(label: &str, inputs: &[(&str, f64)], lhs: f64, rhs: f64, check: Check, tolerance: f64) -> Self {
        Self::new(label, inputs, Complex64::new(lhs, 0.0), Complex64::new(rhs, 0.0), check, tolerance)
    }
}

/// Outcome of one verification suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub params: serde_json::Value,
    pub tolerance: f64,
    pub seed: u64,
    pub cases: Vec<CaseRecord>,
    pub max_abs_err: f64,
    pub max_rel_err: f64,
    pub pass: bool,
    pub runtime_ms: u64,
}

impl VerificationReport {
    pub fn new(
        suite: &str,
        params: serde_json::Value,
        tolerance: f64,
        seed: u64,
        cases: Vec<CaseRecord>,
        runtime_ms: u64,
    ) -> Self {
        let max_abs_err = cases.iter().map(|c| c.abs_err).fold(0.0, f64::max);
        let max_rel_err = cases.iter().map(|c| c.rel_err).fold(0.0, f64::max);
        let pass = !cases.is_empty() && cases.iter().all(|c| c.pass);
        Self {
            suite: suite.to_string(),
            params,
            tolerance,
            seed,
            cases,
            max_abs_err,
            max_rel_err,
            pass,
            runtime_ms,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseRecord> {
        self.cases.iter().filter(|c| !c.pass)
    }

    /// Pretty JSON with every number written to 17 significant digits and
    /// non-finite values as `null`.
    pub fn to_json(&self) -> Result<String> {
        let mut buf = Vec::new();
        write_json17(&mut buf, self)?;
        Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    /// One-line summary.
    pub fn summary(&self) -> String {
        let failed = self.failures().count();
        format!(
            "{}: {} ({} cases, {} failed, max abs err {:.3e}, max rel err {:.3e}, {} ms)",
            self.suite,
            if self.pass { "PASS" } else { "FAIL" },
            self.cases.len(),
            failed,
            self.max_abs_err,
            self.max_rel_err,
            self.runtime_ms
        )
    }
}

/// Serialize any value as pretty JSON with 17-significant-digit numbers.
pub fn write_json17<W: Write, T: Serialize + ?Sized>(writer: W, value: &T) -> Result<()> {
    let mut ser = serde_json::Serializer::with_formatter(writer, Digits17(PrettyFormatter::new()));
    value.serialize(&mut ser)?;
    Ok(())
}

/// Pretty formatter that writes floats as `d.dddddddddddddddde±x`.
struct Digits17<'a>(PrettyFormatter<'a>);

impl Formatter for Digits17<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn begin_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_array(writer)
    }

    fn end_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object(writer)
    }

    fn end_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object_value(writer)
    }
}
