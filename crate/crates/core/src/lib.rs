pub mod closed_form;
pub mod error;
pub mod mb_engine;
pub mod oracles;
pub mod quad;
pub mod series;
pub mod specfun;

pub use error::{Error, Result};
pub use num_complex::Complex64;
