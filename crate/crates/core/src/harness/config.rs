//! Harness configuration file.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::oracle::OracleConfig;
use super::suites::Suite;
use crate::error::{Error, Result};

/// Contents of the `--config` JSON file. Every field is optional.
///
/// ```json
/// { "tolerances": { "product_formula": 1e-7 }, "max_order": 1024,
///   "oracle": { "precision_digits": 50 } }
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HarnessConfig {
    /// Per-suite tolerance overrides, keyed by suite name.
    pub tolerances: BTreeMap<String, f64>,
    /// Cap on the per-piece Gauss order of the suites' adaptive integrals.
    pub max_order: usize,
    pub oracle: OracleConfig,
    pub seed: u64,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        Self {
            tolerances: BTreeMap::new(),
            max_order: 512,
            oracle: OracleConfig::default(),
            seed: 42,
        }
    }
}

impl HarnessConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, tol) in &self.tolerances {
            name.parse::<Suite>()?;
            if !(*tol >= 0.0) {
                return Err(Error::invalid(format!("tolerance for {name} must be >= 0")));
            }
        }
        if self.max_order < 64 || !self.max_order.is_power_of_two() {
            return Err(Error::invalid("max_order must be a power of two >= 64"));
        }
        self.oracle.validate()
    }

    /// Tolerance for `suite`: the configured override or the suite default.
    pub fn tolerance(&self, suite: Suite) -> f64 {
        self.tolerances
            .get(suite.name())
            .copied()
            .unwrap_or_else(|| suite.default_tolerance())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_file() {
        let c = HarnessConfig::from_json(r#"{"tolerances": {"sonine": 1e-9}, "oracle": {"series_terms": 80}}"#).unwrap();
        assert_eq!(c.tolerance(Suite::Sonine), 1e-9);
        assert_eq!(c.tolerance(Suite::Th0), Suite::Th0.default_tolerance());
        assert_eq!(c.oracle.series_terms, 80);
        assert_eq!(c.oracle.precision_digits, 40);
        assert_eq!(c.max_order, 512);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(HarnessConfig::from_json(r#"{"tolerances": {"nope": 1.0}}"#).is_err());
        assert!(HarnessConfig::from_json(r#"{"max_order": 100}"#).is_err());
        assert!(HarnessConfig::from_json(r#"{"oracle": {"precision_digits": 10}}"#).is_err());
        assert!(HarnessConfig::from_json(r#"{"bogus": 1}"#).is_err());
    }
}
