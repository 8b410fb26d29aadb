//! Residue-class dissection and the sign-pattern predicates of the three
//! conjectures, plus the N_{m,k} threshold search that reproduces Table 1
//! and the two published counterexamples.

use crate::poly::{LaurentPoly, Var};
use crate::qseries::{conj1_spec, conj3_spec, expand, PGradedSeries, QSeriesError};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeSet;

/// Residue-class split of a Laurent polynomial in q modulo M:
/// `f(q) = Σ_r q^r · D_r(q^M)`, residues of negative exponents taken as the
/// non-negative remainder mod M.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dissection {
    pub modulus: u32,
    pub components: Vec<LaurentPoly>,
}

/// Split `f` (a Laurent polynomial in q) by exponent residue mod `modulus`.
pub fn dissect(f: &LaurentPoly, modulus: u32) -> Dissection {
    assert!(modulus >= 1);
    let m = modulus as i64;
    let mut buckets: Vec<Vec<(crate::poly::Exponents, BigInt)>> = vec![Vec::new(); modulus as usize];
    // all variables other than q ride along unchanged
    let mut vars = f.vars().to_vec();
    if !vars.contains(&Var::Q) {
        vars.push(Var::Q);
        vars.sort();
    }
    let qi = vars.iter().position(|&v| v == Var::Q).unwrap();
    let had_q = f.vars().contains(&Var::Q);
    for (key, c) in f.iter_terms() {
        let mut nk = crate::poly::Exponents::new();
        let mut src = key.iter();
        for (i, _) in vars.iter().enumerate() {
            if i == qi && !had_q {
                nk.push(0);
            } else {
                nk.push(*src.next().unwrap());
            }
        }
        let e = nk[qi];
        let r = e.rem_euclid(m);
        nk[qi] = (e - r) / m;
        buckets[r as usize].push((nk, c.clone()));
    }
    let components = buckets
        .into_iter()
        .map(|terms| LaurentPoly::from_terms(vars.clone(), terms))
        .collect();
    Dissection { modulus, components }
}

impl Dissection {
    /// Reassemble `Σ_r q^r · D_r(q^M)`; equals the dissected source exactly.
    pub fn recombine(&self) -> LaurentPoly {
        let m = self.modulus as i64;
        let mut acc = LaurentPoly::zero();
        for (r, comp) in self.components.iter().enumerate() {
            let stretched = comp.substitute_power(Var::Q, m).expect("modulus >= 1");
            acc = acc.add(&LaurentPoly::monomial(1, &[(Var::Q, r as i64)]).mul(&stretched));
        }
        acc
    }
}

/// The Borwein split `f = A(q^3) - q B(q^3) - q^2 C(q^3)`.
pub fn tridissect_borwein(f: &LaurentPoly) -> (LaurentPoly, LaurentPoly, LaurentPoly) {
    let d = dissect(f, 3);
    let [a, b, c]: [LaurentPoly; 3] = d.components.try_into().expect("three components");
    (a, b.neg(), c.neg())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExpectedSign {
    Nonneg,
    Nonpos,
}

/// A coefficient that strictly breaks its predicted sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// p-exponent of the slice the coefficient came from (0 when the check
    /// ran on a bare polynomial).
    pub k: usize,
    /// q-exponent of the offending coefficient.
    pub m_exp: i64,
    pub coeff: BigInt,
    pub expected: ExpectedSign,
}

impl Violation {
    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k,
            "M": self.m_exp,
            "coeff": self.coeff.to_string(),
            "expected": match self.expected { ExpectedSign::Nonneg => "nonneg", ExpectedSign::Nonpos => "nonpos" },
        })
    }
}

/// Sign prediction by residue class mod 2K+1: non-negative on
/// `{0, ±1, ..., ±l}` with `l = ⌊(2K+1)/4⌋`, non-positive elsewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignPattern {
    pub modulus: i64,
    pub plus_residues: BTreeSet<i64>,
}

impl SignPattern {
    pub fn for_big_k(big_k: u32) -> Self {
        assert!(big_k >= 1);
        let modulus = 2 * big_k as i64 + 1;
        let l = modulus / 4;
        let mut plus = BTreeSet::new();
        plus.insert(0);
        for i in 1..=l {
            plus.insert(i.rem_euclid(modulus));
            plus.insert((-i).rem_euclid(modulus));
        }
        debug_assert_eq!(plus.len() as i64, 2 * l + 1);
        SignPattern { modulus, plus_residues: plus }
    }

    pub fn expected(&self, q_exp: i64) -> ExpectedSign {
        if self.plus_residues.contains(&q_exp.rem_euclid(self.modulus)) {
            ExpectedSign::Nonneg
        } else {
            ExpectedSign::Nonpos
        }
    }
}

fn collect_violations(f: &LaurentPoly, k: usize, expected: impl Fn(i64) -> ExpectedSign) -> Vec<Violation> {
    let qi = f.vars().iter().position(|&v| v == Var::Q);
    let mut out: Vec<Violation> = f
        .iter_terms()
        .filter_map(|(key, c)| {
            let e = qi.map(|i| key[i]).unwrap_or(0);
            let exp = expected(e);
            let bad = match exp {
                ExpectedSign::Nonneg => c.is_negative(),
                ExpectedSign::Nonpos => c.is_positive(),
            };
            bad.then(|| Violation { k, m_exp: e, coeff: c.clone(), expected: exp })
        })
        .collect();
    out.sort_by_key(|v| (v.k, v.m_exp));
    out
}

/// Violations of the Borwein +−− condition: writing
/// `f = A(q^3) - qB(q^3) - q^2C(q^3)`, all of A, B, C must be non-negative.
pub fn check_borwein(f: &LaurentPoly) -> Vec<Violation> {
    check_borwein_slice(f, 0)
}

pub fn check_borwein_slice(f: &LaurentPoly, k: usize) -> Vec<Violation> {
    let pattern = SignPattern::for_big_k(1);
    collect_violations(f, k, |e| pattern.expected(e))
}

/// Violations of the Conjecture 3 sign pattern mod 2K+1.
pub fn check_pattern(f: &LaurentPoly, big_k: u32) -> Vec<Violation> {
    check_pattern_slice(f, big_k, 0)
}

pub fn check_pattern_slice(f: &LaurentPoly, big_k: u32, k: usize) -> Vec<Violation> {
    let pattern = SignPattern::for_big_k(big_k);
    collect_violations(f, k, |e| pattern.expected(e))
}

/// Residue classes `±aj mod K` of the Ismail–Kim–Stanton prediction for
/// odd K: non-negative for even j, non-positive for odd j (0 ≤ j < K/2).
pub fn iks_odd_plus_residues(a: u32, big_k: u32) -> Result<BTreeSet<i64>, QSeriesError> {
    if big_k % 2 == 0 || (a as u64).gcd(&(big_k as u64)) != 1 || 2 * a >= big_k || a == 0 {
        return Err(QSeriesError::BadParameters(format!(
            "need odd K, gcd(a,K)=1, 0 < a < K/2; got a={a}, K={big_k}"
        )));
    }
    let (a, k) = (a as i64, big_k as i64);
    let mut plus = BTreeSet::new();
    let mut j = 0;
    while 2 * j < k {
        if j % 2 == 0 {
            plus.insert((a * j).rem_euclid(k));
            plus.insert((-a * j).rem_euclid(k));
        }
        j += 1;
    }
    Ok(plus)
}

pub fn check_iks_odd(f: &LaurentPoly, a: u32, big_k: u32) -> Result<Vec<Violation>, QSeriesError> {
    let plus = iks_odd_plus_residues(a, big_k)?;
    let k = big_k as i64;
    Ok(collect_violations(f, 0, |e| {
        if plus.contains(&e.rem_euclid(k)) {
            ExpectedSign::Nonneg
        } else {
            ExpectedSign::Nonpos
        }
    }))
}

/// The even-K parity fact `(-1)^m a_m >= 0`; a theorem, so any violation on
/// a valid IKS product is an implementation bug.
pub fn check_iks_even(f: &LaurentPoly) -> Vec<Violation> {
    collect_violations(f, 0, |e| {
        if e.rem_euclid(2) == 0 {
            ExpectedSign::Nonneg
        } else {
            ExpectedSign::Nonpos
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThresholdProduct {
    Conj1,
    /// Conjecture 3 on the diagonal m1 = m2 = m, n1 = n2 = n3 = n.
    Conj3Diagonal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdResult {
    pub m: u32,
    pub k: usize,
    pub n_scan_max: u32,
    /// Least n0 with the sign condition holding on all of [n0, n_scan_max];
    /// None if even n_scan_max fails.
    pub n_threshold: Option<u32>,
}

/// Whether the p^k slice at size n counts as satisfying the pattern in the
/// threshold scan. n = 0 holds trivially (the product is 1); for n >= 1 a
/// slice that is identically zero does not yet count — the scan looks for
/// the onset of the nontrivial pattern, which is how Table 1 is tabulated
/// (its m = 1 row equals ceil(k/4), the first n with a nonzero slice).
fn slice_passes(slice: &LaurentPoly, n: u32, big_k: u32) -> bool {
    if n == 0 {
        return true;
    }
    !slice.is_zero() && check_pattern(slice, big_k).is_empty()
}

fn threshold_from_passes(passes: &[bool]) -> Option<u32> {
    match passes.iter().rposition(|&p| !p) {
        None => Some(0),
        Some(last_fail) if last_fail == passes.len() - 1 => None,
        Some(last_fail) => Some(last_fail as u32 + 1),
    }
}

/// Scan n = 0..=n_scan_max and find the least n0 from which the p^k slice
/// satisfies the sign pattern through the whole remaining range.
pub fn find_threshold(
    m: u32,
    k: usize,
    n_scan_max: u32,
    big_k: u32,
    product: ThresholdProduct,
) -> ThresholdResult {
    let passes: Vec<bool> = (0..=n_scan_max)
        .into_par_iter()
        .map(|n| {
            let spec = match product {
                ThresholdProduct::Conj1 => conj1_spec(m, n),
                ThresholdProduct::Conj3Diagonal => conj3_spec(m, m, n, n, n, big_k),
            };
            slice_passes(expand(&spec, k).slice(k), n, big_k)
        })
        .collect();
    ThresholdResult { m, k, n_scan_max, n_threshold: threshold_from_passes(&passes) }
}

/// One Table 1 row: thresholds for every k in 0..=k_max, sharing one
/// expansion per n. Scans parallelize over n; assembly is deterministic.
pub fn threshold_row(
    m: u32,
    k_max: usize,
    n_scan_max: u32,
    big_k: u32,
    product: ThresholdProduct,
) -> Vec<ThresholdResult> {
    let pass_by_n: Vec<Vec<bool>> = (0..=n_scan_max)
        .into_par_iter()
        .map(|n| {
            let spec = match product {
                ThresholdProduct::Conj1 => conj1_spec(m, n),
                ThresholdProduct::Conj3Diagonal => conj3_spec(m, m, n, n, n, big_k),
            };
            let series = expand(&spec, k_max);
            (0..=k_max).map(|k| slice_passes(series.slice(k), n, big_k)).collect()
        })
        .collect();
    (0..=k_max)
        .map(|k| {
            let passes: Vec<bool> = pass_by_n.iter().map(|row| row[k]).collect();
            ThresholdResult { m, k, n_scan_max, n_threshold: threshold_from_passes(&passes) }
        })
        .collect()
}

/// Outcome of reproducing the two failures reported alongside the
/// conjectures: Yee's counterexample to Andrews' refinement, and the
/// IKS-pattern exception at m1=4, m2=0, K=3.
#[derive(Clone, Debug)]
pub struct CounterexampleReport {
    /// Borwein-condition violations in the p^40 slice of
    /// (q,q^2;q^3)_1 (pq,pq^2;q^3)_40.
    pub yee_violations: Vec<Violation>,
    /// Scanned values of n1 = n2 and the coefficient of p^18 q^26.
    pub iks_scan: Vec<(u32, BigInt)>,
    /// The stabilized coefficient, if three consecutive n agreed.
    pub iks_stable_coeff: Option<BigInt>,
}

impl CounterexampleReport {
    /// Both published violations reproduced: Yee's slice fails the Borwein
    /// condition, and the p^18 q^26 coefficient stabilizes at +1 where the
    /// K=3 pattern predicts a non-positive value.
    pub fn reproduced(&self) -> bool {
        !self.yee_violations.is_empty() && self.iks_stable_coeff == Some(BigInt::from(1))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "yee": {
                "product": "(q,q^2;q^3)_1 (pq,pq^2;q^3)_40",
                "k": 40,
                "violations": self.yee_violations.iter().map(Violation::to_json).collect::<Vec<_>>(),
            },
            "iks_pattern": {
                "m1": 4, "m2": 0, "K": 3, "k": 18, "q_exp": 26,
                "scan": self.iks_scan.iter().map(|(n, c)| json!([n, c.to_string()])).collect::<Vec<_>>(),
                "stable_coeff": self.iks_stable_coeff.as_ref().map(|c| c.to_string()),
                "predicted": "nonpos",
            },
            "reproduced": self.reproduced(),
        })
    }
}

pub fn reproduce_counterexamples() -> CounterexampleReport {
    // (i) Andrews' refinement fails at n1=1, n2=40, k=40.
    let spec = conj3_spec(1, 0, 1, 40, 0, 1);
    let series = expand(&spec, 40);
    let yee_violations = check_borwein_slice(series.slice(40), 40);

    // (ii) m1=4, m2=0, K=3: coefficient of p^18 q^26, scanned upward in
    // n1 = n2 until unchanged for three consecutive n.
    let mut iks_scan = Vec::new();
    let mut iks_stable_coeff = None;
    for n in 10u32..=40 {
        let spec = conj3_spec(4, 0, n, n, 0, 3);
        let series = expand(&spec, 18);
        let c = series.slice(18).coeff(&[(Var::Q, 26)]);
        iks_scan.push((n, c.clone()));
        let len = iks_scan.len();
        if len >= 3 && iks_scan[len - 2].1 == c && iks_scan[len - 3].1 == c {
            iks_stable_coeff = Some(c);
            break;
        }
    }
    CounterexampleReport { yee_violations, iks_scan, iks_stable_coeff }
}

/// Slice-by-slice pattern check of an expanded product; violations sorted
/// by (k, M).
pub fn check_series(series: &PGradedSeries, big_k: u32, k_ceiling: Option<usize>) -> Vec<Violation> {
    let top = k_ceiling.unwrap_or(series.kmax()).min(series.kmax());
    let mut out = Vec::new();
    for k in 0..=top {
        out.extend(check_pattern_slice(series.slice(k), big_k, k));
    }
    out
}
