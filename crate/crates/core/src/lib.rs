//! Minimum embeddings of Steiner triple systems into 3-sun systems.
//!
//! Every STS(n) is completed to a 3-sun system of order `n + u_min(n)`; each
//! construction is returned with a certificate that [`certificate::verify_embedding`]
//! re-checks from scratch.

pub mod bulls;
pub mod certificate;
pub mod design;
pub mod embed;
pub mod error;
pub mod matching;
pub mod notation;
pub mod sts;
pub mod suns;
pub mod tables;

pub use error::{Error, Result};
