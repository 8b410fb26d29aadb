//! The (2m+1)-fold multisum for the residue components F^l of the truncated
//! product, and its general-(a, K) variant obtained by specializing the same
//! sum lemma at (q, t, z) = (q^{2K+1}, p, p^m q^a).

use num_bigint::BigInt;

use crate::poly::{LaurentPoly, Var};

use super::factored::{sum_factored_terms, term_to_rational, FactoredTerm};
use super::partitions::{enumerate_partitions, PartitionSeq};
use super::{MultisumError, RationalTerm};

/// Parameters of one residue component F^l_{m,n}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MultisumParams {
    pub m: u32,
    pub n: u32,
    pub l: u8,
}

impl MultisumParams {
    pub fn new(m: u32, n: u32, l: u8) -> Self {
        assert!(l < 3, "l must be 0, 1 or 2");
        MultisumParams { m, n, l }
    }

    /// (-1)^{l(l+1)/2}: +1, -1, -1 for l = 0, 1, 2.
    pub fn sign_prefactor(&self) -> i64 {
        if (self.l * (self.l + 1) / 2) % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// x(x+1)/2, the algebraic binomial C(x+1, 2) extended to negative x.
fn tri(x: i64) -> i64 {
    x * (x + 1) / 2
}

/// The λ-summand shared by the sum lemma and its specializations, over
/// formal variables X (the t-like variable) and Y (the q-like variable),
/// with every Y-exponent scaled by `step`. Carries sign (-1)^{|λ|},
/// X^{Σ(i-1)λ_i}, Y^{step·ΣC(λ_i+1,2)} and all cross/per-row factors;
/// the z-monomial and any prefactor adjustments are the caller's business.
pub(super) fn lemma_term(big_n: i64, step: i64, lam: &PartitionSeq) -> FactoredTerm {
    let parts = lam.parts();
    let big_l = parts.len();
    let w = lam.weight();
    let sign = if w.rem_euclid(2) == 0 { 1 } else { -1 };
    let x_exp: i64 = parts.iter().enumerate().map(|(i, &v)| i as i64 * v).sum();
    let y_exp: i64 = step * parts.iter().map(|&v| tri(v)).sum::<i64>();
    let mut t = FactoredTerm::new(sign, x_exp, y_exp);

    for i in 0..big_l {
        for j in (i + 1)..big_l {
            let g = (j - i) as i64;
            let d = parts[i] - parts[j];
            debug_assert!(d >= 0);
            if d > 0 {
                t.push_factor(g, step * d, 1);
            } else {
                // (1 - X^g Y^0) in the numerator cancels the denominator
            }
            t.push_pochhammer(g + 1, 0, step, 0, d - 1, 1);
            if d > 0 {
                t.push_factor(g, 0, -1);
            }
            t.push_pochhammer(g - 1, 0, step, 1, d, -1);
        }
    }
    let n = big_n;
    for (i0, &li) in parts.iter().enumerate() {
        let i = i0 as i64 + 1;
        t.push_pochhammer(i - 1, 0, step, 1, 2 * n, 1);
        t.push_pochhammer(i - 1, 0, step, 1, n - li, -1);
        t.push_pochhammer(big_l as i64 - i, 0, step, 1, n + li, -1);
    }
    t
}

/// The full λ-summand of the F^l multisum as a FactoredTerm in (p, q):
/// lemma core specialized at step 1 with the z-monomial p^{-m|λ|} and the
/// residue correction q^{-(|λ|+l)/3} folded in.
fn component_term(params: MultisumParams, lam: &PartitionSeq) -> Result<FactoredTerm, MultisumError> {
    let w = lam.weight();
    let l = params.l as i64;
    if (w + l).rem_euclid(3) != 0 {
        return Err(MultisumError::NonIntegralExponent { weight: w, residue: params.l });
    }
    let mut t = lemma_term(params.n as i64, 1, lam);
    t.x_exp -= params.m as i64 * w;
    t.y_exp -= (w + l) / 3;
    Ok(t)
}

/// One λ-summand of the F^l multisum as an explicit ratio of Laurent
/// polynomials in (p, q). The global prefactor is not included.
pub fn theorem_term(params: MultisumParams, lam: &PartitionSeq) -> Result<RationalTerm, MultisumError> {
    assert_eq!(lam.len(), 2 * params.m as usize + 1, "λ must have 2m+1 parts");
    let t = component_term(params, lam)?;
    let (num, den) = term_to_rational(&t, Var::P, Var::Q);
    Ok(RationalTerm { num, den })
}

/// F^l_{m,n}(p, q): prefactor (-1)^{l(l+1)/2} p^{m(m+1)n} q^{-mn²} times the
/// sum over admissible λ. A Laurent polynomial in q and a polynomial in p
/// of degree 2m(m+1)n.
pub fn theorem_multisum(params: MultisumParams) -> Result<LaurentPoly, MultisumError> {
    let m = params.m as i64;
    let n = params.n as i64;
    let big_l = (2 * params.m + 1) as usize;
    let lams = enumerate_partitions(big_l, n, Some(params.l));
    let mut terms = Vec::with_capacity(lams.len());
    for lam in &lams {
        terms.push(component_term(params, lam)?);
    }
    let sum = sum_factored_terms(&terms, Var::P, Var::Q)?;
    let pre = LaurentPoly::monomial(
        BigInt::from(params.sign_prefactor()),
        &[(Var::P, m * (m + 1) * n), (Var::Q, -m * n * n)],
    );
    Ok(pre.mul(&sum))
}

/// The multisum for the general truncated product
/// ∏_{j=0}^m (p^j q^a, p^j q^{2K+1-a}; q^{2K+1})_n
/// ∏_{j=1}^m (p^j q^{-a}, p^j q^{a-1-2K}; q^{-2K-1})_n,
/// from the specialization (z, q, t) = (p^m q^a, q^{2K+1}, p) of the sum
/// lemma, with prefactor p^{m(m+1)n} q^{-(2K+1)mn²}. No residue dissection:
/// the value equals the product itself.
pub fn general_multisum(m: u32, n: u32, a: u32, big_k: u32) -> Result<LaurentPoly, MultisumError> {
    assert!(a >= 1 && big_k >= 1);
    let step = 2 * big_k as i64 + 1;
    let m_i = m as i64;
    let n_i = n as i64;
    let big_l = (2 * m + 1) as usize;
    let lams = enumerate_partitions(big_l, n_i, None);
    let mut terms = Vec::with_capacity(lams.len());
    for lam in &lams {
        let w = lam.weight();
        let mut t = lemma_term(n_i, step, lam);
        // (-z^{-1})^{|λ|} at z = p^m q^a
        t.x_exp -= m_i * w;
        t.y_exp -= a as i64 * w;
        terms.push(t);
    }
    let sum = sum_factored_terms(&terms, Var::P, Var::Q)?;
    let pre = LaurentPoly::monomial(
        BigInt::from(1),
        &[(Var::P, m_i * (m_i + 1) * n_i), (Var::Q, -step * m_i * n_i * n_i)],
    );
    Ok(pre.mul(&sum))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multisum::qbinom::andrews_abc;
    use crate::poly::PolyError;
    use crate::qseries::{conj1_spec, expand_full};

    #[test]
    fn base_case_components() {
        // m=0, n=1: F^0 = 1+q, F^1 = 1, F^2 = 1
        let f0 = theorem_multisum(MultisumParams::new(0, 1, 0)).unwrap();
        let f1 = theorem_multisum(MultisumParams::new(0, 1, 1)).unwrap();
        let f2 = theorem_multisum(MultisumParams::new(0, 1, 2)).unwrap();
        let one_plus_q = LaurentPoly::one().add(&LaurentPoly::monomial(BigInt::from(1), &[(Var::Q, 1)]));
        assert_eq!(f0, one_plus_q);
        assert_eq!(f1, LaurentPoly::one());
        assert_eq!(f2, LaurentPoly::one());
    }

    #[test]
    fn base_case_terms() {
        // the λ-summands behind the n=1 base case, before the prefactor
        let p = MultisumParams::new(0, 1, 0);
        let t = theorem_term(p, &PartitionSeq::new(vec![0])).unwrap();
        let one_plus_q = LaurentPoly::one().add(&LaurentPoly::monomial(BigInt::from(1), &[(Var::Q, 1)]));
        // num/den = 1+q, tested by cross multiplication
        assert_eq!(t.num, one_plus_q.mul(&t.den));

        let p = MultisumParams::new(0, 1, 1);
        let t = theorem_term(p, &PartitionSeq::new(vec![-1])).unwrap();
        assert_eq!(t.num, t.den.neg());

        let p = MultisumParams::new(0, 1, 2);
        let t = theorem_term(p, &PartitionSeq::new(vec![1])).unwrap();
        assert_eq!(t.num, t.den.neg());
    }

    #[test]
    fn inadmissible_lambda_rejected() {
        let p = MultisumParams::new(0, 1, 1);
        let err = theorem_term(p, &PartitionSeq::new(vec![0])).unwrap_err();
        assert!(matches!(err, MultisumError::NonIntegralExponent { .. }));
    }

    #[test]
    fn matches_andrews_for_m0() {
        for n in 0..=6u32 {
            let (a, b, c) = andrews_abc(n as usize);
            assert_eq!(theorem_multisum(MultisumParams::new(0, n, 0)).unwrap(), a);
            assert_eq!(theorem_multisum(MultisumParams::new(0, n, 1)).unwrap(), b);
            assert_eq!(theorem_multisum(MultisumParams::new(0, n, 2)).unwrap(), c);
        }
    }

    /// Components of the full product read off by the q ↦ q^3 substitution:
    /// f(p, q) = F0(p, q^3) - q F1(p, q^3) - q^2 F2(p, q^3).
    fn components_by_expansion(m: u32, n: u32) -> [LaurentPoly; 3] {
        let series = expand_full(&conj1_spec(m, n));
        let f = series.to_bivariate();
        let d = crate::analysis::dissect(&f, 3);
        [d.components[0].clone(), d.components[1].neg(), d.components[2].neg()]
    }

    #[test]
    fn matches_expansion_m1() {
        for n in 1..=3u32 {
            let want = components_by_expansion(1, n);
            for l in 0..3u8 {
                let got = theorem_multisum(MultisumParams::new(1, n, l)).unwrap();
                assert_eq!(got, want[l as usize], "m=1 n={} l={}", n, l);
            }
        }
    }

    #[test]
    fn p_degree_is_exact() {
        for (m, n) in [(1u32, 1u32), (1, 2), (2, 1)] {
            for l in 0..3u8 {
                let f = theorem_multisum(MultisumParams::new(m, n, l)).unwrap();
                let r = f.exponent_range(Var::P).unwrap();
                assert_eq!(r.min, 0, "m={} n={} l={}", m, n, l);
                assert_eq!(r.max, (2 * m * (m + 1) * n) as i64, "m={} n={} l={}", m, n, l);
            }
        }
    }

    #[test]
    fn general_matches_recombination() {
        // a=1, K=1: F0(p,q^3) - q F1(p,q^3) - q^2 F2(p,q^3) = full product
        for (m, n) in [(0u32, 2u32), (1, 1), (1, 2)] {
            let g = general_multisum(m, n, 1, 1).unwrap();
            let series = expand_full(&conj1_spec(m, n));
            assert_eq!(g, series.to_bivariate(), "m={} n={}", m, n);
        }
    }

    #[test]
    fn general_matches_direct_product() -> Result<(), PolyError> {
        use crate::qseries::{general_product_spec, expand_full};
        for (m, n, a, k) in [(0u32, 2u32, 1u32, 2u32), (1, 1, 2, 2), (1, 2, 2, 2), (1, 1, 1, 3)] {
            let g = general_multisum(m, n, a, k).unwrap();
            let series = expand_full(&general_product_spec(m, n, a, k).unwrap());
            assert_eq!(g, series.to_bivariate(), "m={} n={} a={} K={}", m, n, a, k);
        }
        Ok(())
    }
}
