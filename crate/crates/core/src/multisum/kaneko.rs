//! The trivariate product/sum identity behind the multisum: for L variables,
//! ∏_{i=1}^L (z t^{1-i}, z^{-1} q t^{i-1}; q)_N equals a sum over
//! non-increasing λ in [-N, N]^L graded by powers of z.

use num_bigint::BigInt;

use crate::poly::{LaurentPoly, Var};

use super::factored::sum_factored_terms;
use super::partitions::enumerate_partitions;
use super::theorem::lemma_term;
use super::MultisumError;

/// Left-hand side: the product expanded directly in (z, q, t).
pub fn kaneko_product_lhs(n_vars: u32, big_n: u32) -> LaurentPoly {
    assert!(n_vars >= 1);
    let mut acc = LaurentPoly::one();
    for i in 1..=n_vars as i64 {
        for s in 0..big_n as i64 {
            acc = acc.mul(&LaurentPoly::one_minus_monomial(&[
                (Var::Z, 1),
                (Var::T, 1 - i),
                (Var::Q, s),
            ]));
            acc = acc.mul(&LaurentPoly::one_minus_monomial(&[
                (Var::Z, -1),
                (Var::Q, 1 + s),
                (Var::T, i - 1),
            ]));
        }
    }
    acc
}

/// Right-hand side: the λ-sum, accumulated exactly. Terms are grouped by the
/// z-exponent -|λ|; each group is a polynomial identity in (q, t) on its own,
/// so each group reduces exactly.
pub fn kaneko_sum_rhs(n_vars: u32, big_n: u32) -> Result<LaurentPoly, MultisumError> {
    assert!(n_vars >= 1);
    let mut groups: std::collections::BTreeMap<i64, Vec<super::factored::FactoredTerm>> =
        std::collections::BTreeMap::new();
    for lam in enumerate_partitions(n_vars as usize, big_n as i64, None) {
        let t = lemma_term(big_n as i64, 1, &lam);
        groups.entry(-lam.weight()).or_default().push(t);
    }
    let mut acc = LaurentPoly::zero();
    for (z_exp, terms) in groups {
        // X = t, Y = q in the shared term shape
        let part = sum_factored_terms(&terms, Var::T, Var::Q)?;
        acc = acc.add(&LaurentPoly::monomial(BigInt::from(1), &[(Var::Z, z_exp)]).mul(&part));
    }
    Ok(acc)
}
