pub mod altsum;
pub mod digitseq;
pub mod error;
pub mod harness;
pub mod identities;
pub mod lambert;
pub mod poly;
pub mod precision;
pub mod report;
pub mod scalar;
pub mod solver;
pub mod specfun;
pub mod sum;

pub use error::{Error, Result};
pub use precision::{Approx, PrecisionContext, Truncation};
