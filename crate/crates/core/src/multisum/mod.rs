//! Single-sum and multisum representations of the truncated products:
//! q-binomial sums for m = 0, the (2m+1)-fold sum for the residue components
//! F^l, the trivariate sum lemma they specialize, and exact/modular
//! verification of all of them against direct expansion.

mod factored;
mod kaneko;
mod partitions;
mod qbinom;
mod theorem;
mod verify;

pub use kaneko::{kaneko_product_lhs, kaneko_sum_rhs};
pub use partitions::{enumerate_partitions, PartitionSeq};
pub use qbinom::{andrews_abc, q_binomial};
pub use theorem::{general_multisum, theorem_multisum, theorem_term, MultisumParams};
pub use verify::{
    verify_andrews_exact, verify_general_exact, verify_general_modular, verify_lemma_exact,
    verify_lemma_modular, verify_polys_modular, verify_theorem_exact, verify_theorem_modular,
    VerifyReport,
};

use crate::poly::LaurentPoly;
use crate::qseries::QSeriesError;

/// One λ-summand as an explicit ratio; den is never zero. Equality of terms
/// is tested by cross multiplication.
#[derive(Clone, Debug)]
pub struct RationalTerm {
    pub num: LaurentPoly,
    pub den: LaurentPoly,
}

impl RationalTerm {
    /// num/den == other.num/other.den, via cross multiplication.
    pub fn equivalent(&self, other: &RationalTerm) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum MultisumError {
    #[error("q-exponent correction (|lambda|+l)/3 is not an integer: |lambda|={weight}, l={residue}")]
    NonIntegralExponent { weight: i64, residue: u8 },
    #[error("sum is not a Laurent polynomial: dividing by (1 - {xvar}^{x_exp} {yvar}^{y_exp}) leaves a remainder", xvar = .xvar.name(), yvar = .yvar.name())]
    NotPolynomial {
        x_exp: i64,
        y_exp: i64,
        xvar: crate::poly::Var,
        yvar: crate::poly::Var,
    },
    #[error("more than 90% of sampled points hit a vanishing denominator")]
    DegenerateSampling,
    #[error(transparent)]
    BadParameters(#[from] QSeriesError),
}
