pub mod error;
pub mod harmonic_ops;
pub mod harness;
pub mod kernels;
pub mod specfun;
pub mod testfns;
pub mod transform;

pub use error::{Error, Result};
pub use specfun::Params;
