pub mod agp;
pub mod autocorr;
pub mod cli;
pub mod error;
pub mod exact;
pub mod krylov;
pub mod models;
pub mod operator;

pub use error::{Error, Result};
