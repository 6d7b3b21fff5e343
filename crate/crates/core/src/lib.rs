pub mod arith;
pub mod classify;
pub mod config;
pub mod error;
pub mod galois_verify;
pub mod indexcheck;
pub mod poly;
pub mod report;
pub mod scan;

pub use config::Config;
pub use error::{Error, Result};
