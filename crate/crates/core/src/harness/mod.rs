//! Verification harness: extended-precision oracle, suites and reports.

pub mod config;
pub mod oracle;
pub mod report;
pub mod suites;

pub use config::HarnessConfig;
pub use oracle::{oracle_bessel_j, oracle_integral, OracleConfig, OracleIntegral, OracleValue};
pub use report::{CaseRecord, Check, VerificationReport};
pub use suites::{run_default, run_suite, Grid, Suite, STANDARD_PARAMS};
