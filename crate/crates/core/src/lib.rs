//! Exact analysis of cyclic covers of ℙ¹ branched at four points, their
//! hypergeometric monodromy, and the fibred surfaces built from them.

pub mod certify;
pub mod cyclotomic;
pub mod error;
pub mod hodge;
pub mod monodromy;
pub mod ratio_string;
pub mod residue;
pub mod surface;

pub use error::{Error, Result};
