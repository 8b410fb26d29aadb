//! Truncated theta-shifted-factorial products as explicit factor lists,
//! and their exact p-graded expansion.
//!
//! A product is a finite list of binomial factors `(1 - p^α q^β)`. Expansion
//! keeps every coefficient of `p^0 .. p^kmax` exactly; q-support is never
//! truncated. The hot loop runs on dense `i128` rows and falls back to
//! `BigInt` rows if any coefficient overflows.

use crate::poly::{LaurentPoly, Var};
use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

/// One factor `(1 - p^{p_exp} q^{q_exp})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinomialFactor {
    pub p_exp: i64,
    pub q_exp: i64,
}

#[derive(Debug, Error)]
pub enum QSeriesError {
    #[error("bad parameters: {0}")]
    BadParameters(String),
}

/// Which construction generated a factor list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Conj1 { m: u32, n: u32 },
    Conj3 { m1: u32, m2: u32, n1: u32, n2: u32, n3: u32, big_k: u32 },
    Iks { a: u32, big_k: u32, n: u32 },
    Pochhammer { a_pexp: i64, a_qexp: i64, base_qexp: i64, n: u32 },
    Custom(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductSpec {
    pub factors: Vec<BinomialFactor>,
    pub provenance: Provenance,
}

impl ProductSpec {
    /// Upper bound on the p-degree of the expanded product.
    pub fn p_degree_bound(&self) -> i64 {
        self.factors.iter().map(|f| f.p_exp).sum()
    }

    pub fn to_json(&self) -> Value {
        let factors: Vec<Value> = self.factors.iter().map(|f| json!([f.p_exp, f.q_exp])).collect();
        json!({
            "provenance": serde_json::to_value(&self.provenance).unwrap(),
            "factors": factors,
        })
    }

    /// The product as an untruncated Laurent polynomial; small inputs only.
    pub fn expand_full_poly(&self) -> LaurentPoly {
        let kmax = self.p_degree_bound().max(0) as usize;
        expand(self, kmax).to_bivariate()
    }
}

/// `(a; q^base)_n` with `a = p^{a_pexp} q^{a_qexp}`: the n factors
/// `(1 - p^{a_pexp} q^{a_qexp + j*base_qexp})`, j = 0..n-1.
pub fn qpochhammer_spec(a_pexp: i64, a_qexp: i64, base_qexp: i64, n: u32) -> Vec<BinomialFactor> {
    (0..n as i64)
        .map(|j| BinomialFactor { p_exp: a_pexp, q_exp: a_qexp + j * base_qexp })
        .collect()
}

/// The product of Conjecture 1:
/// `(q,q^2;q^3)_n ∏_{j=1}^m (p^j q, p^j q^2; q^3)_n (p^j q^{-1}, p^j q^{-2}; q^{-3})_n`.
pub fn conj1_spec(m: u32, n: u32) -> ProductSpec {
    let mut spec = conj3_spec(m, m, n, n, n, 1);
    spec.provenance = Provenance::Conj1 { m, n };
    spec
}

/// The general product of Conjecture 3 (K = 1 gives Conjecture 2):
/// `(q^K, q^{K+1}; q^{2K+1})_{n1}
///  ∏_{j=1}^{m1} (p^j q^K, p^j q^{K+1}; q^{2K+1})_{n2}
///  ∏_{j=1}^{m2} (p^j q^{-K}, p^j q^{-K-1}; q^{-2K-1})_{n3}`.
pub fn conj3_spec(m1: u32, m2: u32, n1: u32, n2: u32, n3: u32, big_k: u32) -> ProductSpec {
    assert!(big_k >= 1, "K must be a positive integer");
    let k = big_k as i64;
    let base = 2 * k + 1;
    let mut factors = Vec::new();
    factors.extend(qpochhammer_spec(0, k, base, n1));
    factors.extend(qpochhammer_spec(0, k + 1, base, n1));
    for j in 1..=m1 as i64 {
        factors.extend(qpochhammer_spec(j, k, base, n2));
        factors.extend(qpochhammer_spec(j, k + 1, base, n2));
    }
    for j in 1..=m2 as i64 {
        factors.extend(qpochhammer_spec(j, -k, -base, n3));
        factors.extend(qpochhammer_spec(j, -k - 1, -base, n3));
    }
    ProductSpec { factors, provenance: Provenance::Conj3 { m1, m2, n1, n2, n3, big_k } }
}

/// The general-(a, K) truncated product
/// `∏_{j=0}^{m} (p^j q^a, p^j q^{2K+1-a}; q^{2K+1})_n
///  ∏_{j=1}^{m} (p^j q^{-a}, p^j q^{a-1-2K}; q^{-2K-1})_n`;
/// a = K, K = 1 gives the symmetric (n1 = n2 = n3) product of Conjecture 1.
pub fn general_product_spec(m: u32, n: u32, a: u32, big_k: u32) -> Result<ProductSpec, QSeriesError> {
    if a == 0 || big_k == 0 {
        return Err(QSeriesError::BadParameters(format!("need a, K positive; got a={a}, K={big_k}")));
    }
    let (a, k) = (a as i64, big_k as i64);
    let base = 2 * k + 1;
    let mut factors = Vec::new();
    for j in 0..=m as i64 {
        factors.extend(qpochhammer_spec(j, a, base, n));
        factors.extend(qpochhammer_spec(j, base - a, base, n));
    }
    for j in 1..=m as i64 {
        factors.extend(qpochhammer_spec(j, -a, -base, n));
        factors.extend(qpochhammer_spec(j, a - base, -base, n));
    }
    Ok(ProductSpec {
        factors,
        provenance: Provenance::Custom(format!("general m={m} n={n} a={a} K={big_k}")),
    })
}

/// The Ismail–Kim–Stanton product `(q^a; q^K)_n (q^{K-a}; q^K)_n`,
/// under the hypotheses gcd(a, K) = 1 and a < K/2.
pub fn iks_spec(a: u32, big_k: u32, n: u32) -> Result<ProductSpec, QSeriesError> {
    if a == 0 || big_k == 0 || (a as u64).gcd(&(big_k as u64)) != 1 {
        return Err(QSeriesError::BadParameters(format!("need gcd(a, K) = 1 with a, K positive; got a={a}, K={big_k}")));
    }
    if 2 * a >= big_k {
        return Err(QSeriesError::BadParameters(format!("need a < K/2; got a={a}, K={big_k}")));
    }
    let (a, k) = (a as i64, big_k as i64);
    let mut factors = qpochhammer_spec(0, a, k, n);
    factors.extend(qpochhammer_spec(0, k - a, k, n));
    Ok(ProductSpec { factors, provenance: Provenance::Iks { a: a as u32, big_k: big_k as u32, n } })
}

/// A p-truncated expansion: exact coefficient of `p^k` for k in 0..=kmax,
/// each a Laurent polynomial in q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PGradedSeries {
    slices: Vec<LaurentPoly>,
}

impl PGradedSeries {
    pub fn kmax(&self) -> usize {
        self.slices.len() - 1
    }

    pub fn slice(&self, k: usize) -> &LaurentPoly {
        &self.slices[k]
    }

    pub fn slices(&self) -> &[LaurentPoly] {
        &self.slices
    }

    /// `Σ_k p^k * slice_k` as a single Laurent polynomial in (p, q).
    pub fn to_bivariate(&self) -> LaurentPoly {
        let mut acc = LaurentPoly::zero();
        for (k, s) in self.slices.iter().enumerate() {
            let pk = LaurentPoly::monomial(1, &[(Var::P, k as i64)]);
            acc = acc.add(&pk.mul(s));
        }
        acc
    }

    /// Specialization p = 1: the plain sum of all slices.
    pub fn at_p_one(&self) -> LaurentPoly {
        let mut acc = LaurentPoly::zero();
        for s in &self.slices {
            acc = acc.add(s);
        }
        acc
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kmax": self.kmax(),
            "slices": self.slices.iter().map(LaurentPoly::to_json).collect::<Vec<_>>(),
        })
    }
}

use crate::dense::{Coef, Overflow};

fn expand_dense<C: Coef>(factors: &[BinomialFactor], kmax: usize) -> Result<(Vec<Vec<C>>, i64), Overflow> {
    // Every partial product's q-support fits in [qlo, qhi].
    let qlo: i64 = factors.iter().map(|f| f.q_exp.min(0)).sum();
    let qhi: i64 = factors.iter().map(|f| f.q_exp.max(0)).sum();
    let width = (qhi - qlo + 1) as usize;
    let mut slices: Vec<Vec<C>> = (0..=kmax).map(|_| vec![C::zero(); width]).collect();
    slices[0][(-qlo) as usize] = C::one();

    // Ascending p-exponent keeps intermediate p-support minimal; the result
    // is order-independent either way.
    let mut order: Vec<&BinomialFactor> = factors.iter().filter(|f| f.p_exp <= kmax as i64).collect();
    order.sort_by_key(|f| (f.p_exp, f.q_exp));

    for f in order {
        let b = f.q_exp;
        if f.p_exp == 0 {
            if b == 0 {
                // (1 - 1) = 0: the whole product vanishes.
                for s in slices.iter_mut() {
                    s.iter_mut().for_each(|c| *c = C::zero());
                }
                continue;
            }
            for s in slices.iter_mut() {
                if !sub_shifted_inplace(s, b) {
                    return Err(Overflow);
                }
            }
        } else {
            let a = f.p_exp as usize;
            for k in (a..=kmax).rev() {
                let (lo, hi) = slices.split_at_mut(k);
                if !sub_shifted_from(&mut hi[0], &lo[k - a], b) {
                    return Err(Overflow);
                }
            }
        }
    }
    Ok((slices, qlo))
}

/// `row -= shift_q(row, b)` in place; false on overflow.
fn sub_shifted_inplace<C: Coef>(row: &mut [C], b: i64) -> bool {
    let w = row.len() as i64;
    if b > 0 {
        for i in (b..w).rev() {
            let src = row[(i - b) as usize].clone();
            if !row[i as usize].sub_assign_checked(&src) {
                return false;
            }
        }
    } else {
        for i in 0..(w + b).max(0) {
            let src = row[(i - b) as usize].clone();
            if !row[i as usize].sub_assign_checked(&src) {
                return false;
            }
        }
    }
    true
}

/// `dst -= shift_q(src, b)`; false on overflow.
fn sub_shifted_from<C: Coef>(dst: &mut [C], src: &[C], b: i64) -> bool {
    let w = dst.len() as i64;
    for i in 0..w {
        let j = i - b;
        if j < 0 || j >= w {
            continue;
        }
        let s = src[j as usize].clone();
        if s.is_zero() {
            continue;
        }
        if !dst[i as usize].sub_assign_checked(&s) {
            return false;
        }
    }
    true
}

fn dense_to_poly<C: Coef>(row: Vec<C>, qlo: i64) -> LaurentPoly {
    LaurentPoly::from_terms(
        vec![Var::Q],
        row.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| {
            let mut key = crate::poly::Exponents::new();
            key.push(qlo + i as i64);
            (key, c.into_bigint())
        }),
    )
}

/// Exact coefficients of `p^0..p^kmax` of the product. Factors whose
/// p-exponent exceeds `kmax` are dropped before any multiplication.
pub fn expand(spec: &ProductSpec, kmax: usize) -> PGradedSeries {
    match expand_dense::<i128>(&spec.factors, kmax) {
        Ok((rows, qlo)) => PGradedSeries { slices: rows.into_iter().map(|r| dense_to_poly(r, qlo)).collect() },
        Err(Overflow) => {
            let (rows, qlo) = expand_dense::<BigInt>(&spec.factors, kmax).unwrap_or_else(|_| unreachable!());
            PGradedSeries { slices: rows.into_iter().map(|r| dense_to_poly(r, qlo)).collect() }
        }
    }
}

/// Expand the full (untruncated) product: kmax = sum of p-exponents.
pub fn expand_full(spec: &ProductSpec) -> PGradedSeries {
    expand(spec, spec.p_degree_bound().max(0) as usize)
}

/// Split the factor list into `jobs` chunks, expand each truncated
/// subproduct, and combine pairwise. Exact arithmetic makes the result
/// bit-identical to the sequential expansion for any chunking.
pub fn expand_with_jobs(spec: &ProductSpec, kmax: usize, jobs: usize) -> PGradedSeries {
    if jobs <= 1 || spec.factors.len() < 2 {
        return expand(spec, kmax);
    }
    let chunk = spec.factors.len().div_ceil(jobs);
    let parts: Vec<PGradedSeries> = spec
        .factors
        .chunks(chunk)
        .map(|fs| expand(&ProductSpec { factors: fs.to_vec(), provenance: spec.provenance.clone() }, kmax))
        .collect();
    parts
        .into_iter()
        .reduce(|a, b| combine_truncated(&a, &b))
        .expect("at least one chunk")
}

fn combine_truncated(a: &PGradedSeries, b: &PGradedSeries) -> PGradedSeries {
    let kmax = a.kmax().min(b.kmax());
    let slices = (0..=kmax)
        .map(|k| {
            let mut acc = LaurentPoly::zero();
            for i in 0..=k {
                acc = acc.add(&a.slice(i).mul(b.slice(k - i)));
            }
            acc
        })
        .collect();
    PGradedSeries { slices }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly_q(pairs: &[(i64, i64)]) -> LaurentPoly {
        let mut acc = LaurentPoly::zero();
        for &(e, c) in pairs {
            acc = acc.add(&LaurentPoly::monomial(c, &[(Var::Q, e)]));
        }
        acc
    }

    #[test]
    fn qpochhammer_unrolling() {
        // (q; q^3)_2 -> [(1-q), (1-q^4)]
        assert_eq!(
            qpochhammer_spec(0, 1, 3, 2),
            vec![BinomialFactor { p_exp: 0, q_exp: 1 }, BinomialFactor { p_exp: 0, q_exp: 4 }]
        );
        // (p q^{-1}; q^{-3})_2 -> [(1-p q^{-1}), (1-p q^{-4})]
        assert_eq!(
            qpochhammer_spec(1, -1, -3, 2),
            vec![BinomialFactor { p_exp: 1, q_exp: -1 }, BinomialFactor { p_exp: 1, q_exp: -4 }]
        );
        assert!(qpochhammer_spec(0, 5, 2, 0).is_empty());
    }

    #[test]
    fn conj1_factor_counts_and_m0() {
        for (m, n) in [(0u32, 3u32), (1, 1), (2, 4), (3, 2)] {
            let spec = conj1_spec(m, n);
            assert_eq!(spec.factors.len() as u32, 2 * n * (2 * m + 1));
        }
        // m = 0 is the first-Borwein product (q, q^2; q^3)_n
        let spec = conj1_spec(0, 2);
        let mut expect = qpochhammer_spec(0, 1, 3, 2);
        expect.extend(qpochhammer_spec(0, 2, 3, 2));
        assert_eq!(spec.factors, expect);
        assert!(conj1_spec(5, 0).factors.is_empty());
    }

    #[test]
    fn conj1_1_1_factors() {
        let spec = conj1_spec(1, 1);
        let mut got: Vec<(i64, i64)> = spec.factors.iter().map(|f| (f.p_exp, f.q_exp)).collect();
        got.sort();
        assert_eq!(got, vec![(0, 1), (0, 2), (1, -2), (1, -1), (1, 1), (1, 2)]);
    }

    #[test]
    fn conj3_reductions() {
        // conj3(m,m,n,n,n,1) = conj1(m,n) as factor multisets
        let mut a: Vec<_> = conj3_spec(2, 2, 3, 3, 3, 1).factors;
        let mut b: Vec<_> = conj1_spec(2, 3).factors;
        a.sort_by_key(|f| (f.p_exp, f.q_exp));
        b.sort_by_key(|f| (f.p_exp, f.q_exp));
        assert_eq!(a, b);

        // conj3(0,0,n,_,_,K) = (q^K, q^{K+1}; q^{2K+1})_n
        let spec = conj3_spec(0, 0, 2, 7, 9, 5);
        let mut expect = qpochhammer_spec(0, 5, 11, 2);
        expect.extend(qpochhammer_spec(0, 6, 11, 2));
        assert_eq!(spec.factors, expect);

        // conj3(1,1,1,1,1,2): q-exponents {2,3,2,3,-2,-3}
        let mut qs: Vec<i64> = conj3_spec(1, 1, 1, 1, 1, 2).factors.iter().map(|f| f.q_exp).collect();
        qs.sort();
        assert_eq!(qs, vec![-3, -2, 2, 2, 3, 3]);

        // factor count invariant 2*n1 + m1*2*n2 + m2*2*n3
        let spec = conj3_spec(3, 2, 4, 5, 6, 7);
        assert_eq!(spec.factors.len(), 2 * 4 + 3 * 2 * 5 + 2 * 2 * 6);
    }

    #[test]
    fn iks_examples() {
        let spec = iks_spec(1, 3, 2).unwrap();
        let mut b = conj1_spec(0, 2).factors;
        let mut a = spec.factors.clone();
        a.sort_by_key(|f| f.q_exp);
        b.sort_by_key(|f| f.q_exp);
        assert_eq!(a, b);

        let spec = iks_spec(2, 5, 1).unwrap();
        let mut qs: Vec<i64> = spec.factors.iter().map(|f| f.q_exp).collect();
        qs.sort();
        assert_eq!(qs, vec![2, 3]);

        assert!(iks_spec(2, 4, 1).is_err());
        assert!(iks_spec(3, 6, 1).is_err());
        assert!(iks_spec(3, 7, 1).is_ok()); // 3 < 7/2
        assert!(iks_spec(4, 7, 1).is_err()); // a >= K/2
    }

    #[test]
    fn expand_small_products() {
        // (q,q^2;q^3)_1 = (1-q)(1-q^2) = 1 - q - q^2 + q^3
        let s = expand(&conj1_spec(0, 1), 0);
        assert_eq!(*s.slice(0), poly_q(&[(0, 1), (1, -1), (2, -1), (3, 1)]));

        // slice 1 of conj1(1,1): -(q + q^2 + q^{-1} + q^{-2}) * (1-q)(1-q^2)
        let s = expand(&conj1_spec(1, 1), 2);
        let base = poly_q(&[(0, 1), (1, -1), (2, -1), (3, 1)]);
        let sum = poly_q(&[(1, -1), (2, -1), (-1, -1), (-2, -1)]);
        assert_eq!(*s.slice(1), sum.mul(&base));
        assert_eq!(*s.slice(0), base);
    }

    #[test]
    fn truncation_matches_full_product() {
        let spec = conj1_spec(1, 2);
        let full = expand_full(&spec);
        let trunc = expand(&spec, 3);
        for k in 0..=3 {
            assert_eq!(trunc.slice(k), full.slice(k));
        }
        // degree bound: slices vanish beyond 2m(m+1)n = 8
        assert_eq!(full.kmax() as i64, spec.p_degree_bound());
        for k in 9..=full.kmax() {
            assert!(full.slice(k).is_zero());
        }
        assert!(!full.slice(8).is_zero());
    }

    #[test]
    fn expand_with_jobs_is_bit_identical() {
        let spec = conj1_spec(2, 2);
        let seq = expand(&spec, 6);
        for jobs in [2, 3, 5] {
            assert_eq!(expand_with_jobs(&spec, 6, jobs), seq);
        }
    }

    #[test]
    fn order_independence() {
        let spec = conj1_spec(1, 2);
        let mut shuffled = spec.clone();
        shuffled.factors.reverse();
        shuffled.factors.swap(0, 3);
        assert_eq!(expand(&spec, 5), expand(&shuffled, 5));
    }

    #[test]
    fn p_one_specialization() {
        let spec = conj1_spec(1, 2);
        let flat = expand_full(&spec).at_p_one();
        // direct: substitute p = 1 into every factor
        let mut direct = LaurentPoly::one();
        for f in &spec.factors {
            direct = direct.mul(&LaurentPoly::one_minus_monomial(&[(Var::Q, f.q_exp)]));
        }
        assert_eq!(flat, direct);
    }
}
