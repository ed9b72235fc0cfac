pub mod check;
pub mod error;
pub mod floor;
pub mod gw;
pub mod local_factors;
pub mod springer;
pub mod suite;
pub mod wallcross;

pub use error::{Error, Result};
