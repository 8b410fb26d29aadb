//! Exact q-series laboratory: sparse Laurent-polynomial arithmetic, truncated
//! theta-shifted-factorial products, residue-class sign analysis, threshold
//! search, and multisum representations with exact and modular verification.

pub mod analysis;
pub mod cli;
pub(crate) mod dense;
pub mod modular;
pub mod multisum;
pub mod poly;
pub mod qseries;
