//! Shared fixtures for the benchmarks.

use genhankel::testfns::{Gaussian, PolyBump};
use genhankel::Params;

/// The parameter sets exercised by every benchmark.
pub fn param_sets() -> Vec<Params> {
    genhankel::harness::STANDARD_PARAMS
        .iter()
        .map(|&(n, k)| Params::new(n, k).expect("standard parameters are valid"))
        .collect()
}

pub fn bump() -> PolyBump {
    PolyBump::unit_peak(-0.8, 1.4, 6)
}

pub fn gaussian() -> Gaussian {
    Gaussian::new(0.4, 0.5)
}
