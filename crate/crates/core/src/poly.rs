//! Sparse Laurent polynomials over arbitrary-precision integers.
//!
//! Every polynomial object in the crate — products, residue-class
//! components, multisum values — lives in `Z[p^±1, q^±1, z^±1, t^±1]`.
//! Coefficients are exact `BigInt`s; there is no floating point anywhere.
//!
//! The canonical form keeps no zero coefficients and no unused variables,
//! so structural equality is semantic equality.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use smallvec::SmallVec;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// The four variables of the problem domain, in monomial order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    P,
    Q,
    Z,
    T,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::P => "p",
            Var::Q => "q",
            Var::Z => "z",
            Var::T => "t",
        }
    }

    pub fn parse(s: &str) -> Option<Var> {
        match s {
            "p" => Some(Var::P),
            "q" => Some(Var::Q),
            "z" => Some(Var::Z),
            "t" => Some(Var::T),
            _ => None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exponent vector; one signed entry per variable of the owning polynomial.
pub type Exponents = SmallVec<[i64; 4]>;

/// Min/max exponent of one variable across all terms of a polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExponentRange {
    pub var: Var,
    pub min: i64,
    pub max: i64,
}

#[derive(Debug, Error)]
pub enum PolyError {
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("not divisible: remainder leading term {coeff} * {monomial}")]
    NotDivisible { monomial: String, coeff: BigInt },
    #[error("variable {0} evaluates to 0 mod prime; Laurent exponents need an invertible point")]
    NonInvertiblePoint(Var),
    #[error("substitute_power with d = 0 is not invertible")]
    ZeroPowerSubstitution,
    #[error("malformed polynomial JSON: {0}")]
    BadJson(String),
}

/// Sparse multivariate Laurent polynomial with exact integer coefficients.
///
/// Invariants: `vars` is strictly increasing in monomial order; every stored
/// coefficient is nonzero; every variable occurs with a nonzero exponent in
/// at least one term. Term keys are ordered lexicographically, so the last
/// map entry is the leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    vars: Vec<Var>,
    terms: BTreeMap<Exponents, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { vars: Vec::new(), terms: BTreeMap::new() }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        let c: BigInt = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Exponents::new(), c);
        }
        LaurentPoly { vars: Vec::new(), terms }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    /// Single term `c * prod v^e`. Repeated variables accumulate exponents.
    pub fn monomial(c: impl Into<BigInt>, exps: &[(Var, i64)]) -> Self {
        let c: BigInt = c.into();
        if c.is_zero() {
            return Self::zero();
        }
        let mut acc: BTreeMap<Var, i64> = BTreeMap::new();
        for &(v, e) in exps {
            *acc.entry(v).or_insert(0) += e;
        }
        acc.retain(|_, e| *e != 0);
        let vars: Vec<Var> = acc.keys().copied().collect();
        let key: Exponents = acc.values().copied().collect();
        let mut terms = BTreeMap::new();
        terms.insert(key, c);
        LaurentPoly { vars, terms }
    }

    /// `1 - c * prod v^e`, the binomial building block of all products here.
    pub fn one_minus_monomial(exps: &[(Var, i64)]) -> Self {
        Self::one().sub(&Self::monomial(1, exps))
    }

    /// Build from parts; drops zero coefficients and unused variables.
    pub fn from_terms(vars: Vec<Var>, terms: impl IntoIterator<Item = (Exponents, BigInt)>) -> Self {
        let mut map: BTreeMap<Exponents, BigInt> = BTreeMap::new();
        for (k, c) in terms {
            assert_eq!(k.len(), vars.len(), "exponent vector length mismatch");
            let entry = map.entry(k).or_insert_with(BigInt::zero);
            *entry += c;
        }
        let mut p = LaurentPoly { vars, terms: map };
        p.normalize();
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn iter_terms(&self) -> impl Iterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter()
    }

    /// Coefficient of the monomial given by `exps` (unlisted vars exponent 0).
    pub fn coeff(&self, exps: &[(Var, i64)]) -> BigInt {
        let mut key: Exponents = SmallVec::from_elem(0, self.vars.len());
        for &(v, e) in exps {
            match self.vars.iter().position(|&w| w == v) {
                Some(i) => key[i] = e,
                None => {
                    if e != 0 {
                        return BigInt::zero();
                    }
                }
            }
        }
        self.terms.get(&key).cloned().unwrap_or_else(BigInt::zero)
    }

    fn normalize(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
        // Drop variables that no term uses.
        let n = self.vars.len();
        let mut used = vec![false; n];
        for key in self.terms.keys() {
            for (i, &e) in key.iter().enumerate() {
                if e != 0 {
                    used[i] = true;
                }
            }
        }
        if used.iter().all(|&u| u) {
            return;
        }
        let keep: Vec<usize> = (0..n).filter(|&i| used[i]).collect();
        self.vars = keep.iter().map(|&i| self.vars[i]).collect();
        let old = std::mem::take(&mut self.terms);
        for (key, c) in old {
            let nk: Exponents = keep.iter().map(|&i| key[i]).collect();
            self.terms.insert(nk, c);
        }
    }

    /// Re-express over a superset of the current variables.
    fn extend_vars(&self, vars: &[Var]) -> BTreeMap<Exponents, BigInt> {
        debug_assert!(vars.windows(2).all(|w| w[0] < w[1]));
        let idx: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).expect("vars not a superset"))
            .collect();
        let mut out = BTreeMap::new();
        for (key, c) in &self.terms {
            let mut nk: Exponents = SmallVec::from_elem(0, vars.len());
            for (i, &e) in key.iter().enumerate() {
                nk[idx[i]] = e;
            }
            out.insert(nk, c.clone());
        }
        out
    }

    fn union_vars(a: &[Var], b: &[Var]) -> Vec<Var> {
        let mut vars: Vec<Var> = a.iter().chain(b.iter()).copied().collect();
        vars.sort();
        vars.dedup();
        vars
    }

    pub fn add(&self, other: &Self) -> Self {
        let vars = Self::union_vars(&self.vars, &other.vars);
        let mut terms = self.extend_vars(&vars);
        for (key, c) in other.extend_vars(&vars) {
            let e = terms.entry(key).or_insert_with(BigInt::zero);
            *e += c;
        }
        let mut p = LaurentPoly { vars, terms };
        p.normalize();
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.mul_impl(other, None)
    }

    /// Product with all terms of `var`-degree above `max_deg` dropped.
    pub fn mul_truncated(&self, other: &Self, var: Var, max_deg: i64) -> Self {
        self.mul_impl(other, Some((var, max_deg)))
    }

    fn mul_impl(&self, other: &Self, trunc: Option<(Var, i64)>) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let vars = Self::union_vars(&self.vars, &other.vars);
        let a = self.extend_vars(&vars);
        let b = other.extend_vars(&vars);
        let trunc_idx = trunc.map(|(v, d)| (vars.iter().position(|&w| w == v), d));
        let mut terms: BTreeMap<Exponents, BigInt> = BTreeMap::new();
        for (ka, ca) in &a {
            for (kb, cb) in &b {
                let mut k: Exponents = ka.clone();
                for (i, e) in k.iter_mut().enumerate() {
                    *e += kb[i];
                }
                if let Some((Some(i), d)) = trunc_idx {
                    if k[i] > d {
                        continue;
                    }
                }
                let e = terms.entry(k).or_insert_with(BigInt::zero);
                *e += ca * cb;
            }
        }
        let mut p = LaurentPoly { vars, terms };
        p.normalize();
        p
    }

    /// Drop all terms whose `var`-exponent exceeds `max_deg`.
    pub fn truncate(&self, var: Var, max_deg: i64) -> Self {
        let Some(i) = self.vars.iter().position(|&w| w == var) else {
            return if max_deg >= 0 { self.clone() } else { Self::zero() };
        };
        let mut p = LaurentPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k[i] <= max_deg)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        };
        p.normalize();
        p
    }

    /// Map `var ↦ var^d`. `d` may be negative (reversal); `d = 0` is an error.
    pub fn substitute_power(&self, var: Var, d: i64) -> Result<Self, PolyError> {
        if d == 0 {
            return Err(PolyError::ZeroPowerSubstitution);
        }
        let Some(i) = self.vars.iter().position(|&w| w == var) else {
            return Ok(self.clone());
        };
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| {
                let mut nk = k.clone();
                nk[i] *= d;
                (nk, c.clone())
            })
            .collect();
        Ok(LaurentPoly { vars: self.vars.clone(), terms })
    }

    pub fn exponent_range(&self, var: Var) -> Option<ExponentRange> {
        if self.is_zero() {
            return None;
        }
        match self.vars.iter().position(|&w| w == var) {
            None => Some(ExponentRange { var, min: 0, max: 0 }),
            Some(i) => {
                let mut min = i64::MAX;
                let mut max = i64::MIN;
                for k in self.terms.keys() {
                    min = min.min(k[i]);
                    max = max.max(k[i]);
                }
                Some(ExponentRange { var, min, max })
            }
        }
    }

    /// Exact quotient `self / den`; errors with the offending remainder
    /// leading term if no exact quotient exists.
    ///
    /// Laurent inputs are reduced to ordinary polynomials by clearing the
    /// per-variable minimum exponents of both operands, then divided by
    /// iterated leading-term elimination in lexicographic order.
    pub fn exact_div(&self, den: &Self) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let vars = Self::union_vars(&self.vars, &den.vars);
        let nv = vars.len();
        let num_terms = self.extend_vars(&vars);
        let den_terms = den.extend_vars(&vars);

        let bounds = |m: &BTreeMap<Exponents, BigInt>| -> (Exponents, Exponents) {
            let mut lo: Exponents = SmallVec::from_elem(i64::MAX, nv);
            let mut hi: Exponents = SmallVec::from_elem(i64::MIN, nv);
            for k in m.keys() {
                for i in 0..nv {
                    lo[i] = lo[i].min(k[i]);
                    hi[i] = hi[i].max(k[i]);
                }
            }
            (lo, hi)
        };
        let (nlo, nhi) = bounds(&num_terms);
        let (dlo, dhi) = bounds(&den_terms);

        // Shift both operands to non-negative exponents; undo on the quotient.
        let shift = |m: &BTreeMap<Exponents, BigInt>, lo: &Exponents| -> BTreeMap<Exponents, BigInt> {
            m.iter()
                .map(|(k, c)| {
                    let nk: Exponents = k.iter().zip(lo.iter()).map(|(e, s)| e - s).collect();
                    (nk, c.clone())
                })
                .collect()
        };
        let mut rem = shift(&num_terms, &nlo);
        let den_sh = shift(&den_terms, &dlo);
        let (dslo, dshi) = bounds(&den_sh);
        debug_assert!(dslo.iter().all(|&e| e == 0));

        // Any genuine quotient monomial lies in this box; leaving it proves
        // non-divisibility and guarantees termination.
        let qlo: Exponents = (0..nv).map(|i| nlo[i] - nhi[i].max(dhi[i])).collect();
        let qhi: Exponents = (0..nv).map(|i| nhi[i] - nlo[i].min(dlo[i])).collect();

        let (den_lead_k, den_lead_c) = den_sh.iter().next_back().map(|(k, c)| (k.clone(), c.clone())).unwrap();
        let _ = dshi;
        let mut quot: BTreeMap<Exponents, BigInt> = BTreeMap::new();
        while let Some((rk, rc)) = rem.iter().next_back().map(|(k, c)| (k.clone(), c.clone())) {
            // Quotient term exponent in original (unshifted) coordinates.
            let t_exp: Exponents = (0..nv).map(|i| rk[i] - den_lead_k[i] + nlo[i] - dlo[i]).collect();
            let not_div = || PolyError::NotDivisible {
                monomial: monomial_string(&vars, &rk, &nlo),
                coeff: rc.clone(),
            };
            if (0..nv).any(|i| t_exp[i] < qlo[i] || t_exp[i] > qhi[i]) {
                return Err(not_div());
            }
            let (tq, tr) = num_integer::Integer::div_rem(&rc, &den_lead_c);
            if !tr.is_zero() {
                return Err(not_div());
            }
            // rem -= t * den_sh, with t placed at rk - den_lead_k.
            for (dk, dc) in &den_sh {
                let key: Exponents = (0..nv).map(|i| rk[i] - den_lead_k[i] + dk[i]).collect();
                let e = rem.entry(key.clone()).or_insert_with(BigInt::zero);
                *e -= &tq * dc;
                if e.is_zero() {
                    rem.remove(&key);
                }
            }
            let e = quot.entry(t_exp).or_insert_with(BigInt::zero);
            *e += tq;
        }
        let mut p = LaurentPoly { vars, terms: quot };
        p.normalize();
        Ok(p)
    }

    /// Canonical JSON form: `{"vars": [...], "terms": [[[e...], "coeff"], ...]}`
    /// with terms in ascending lexicographic monomial order and coefficients
    /// as decimal strings.
    pub fn to_json(&self) -> Value {
        let vars: Vec<Value> = self.vars.iter().map(|v| json!(v.name())).collect();
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(k, c)| json!([k.iter().collect::<Vec<_>>(), c.to_string()]))
            .collect();
        json!({ "vars": vars, "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<Self, PolyError> {
        let bad = |m: &str| PolyError::BadJson(m.to_string());
        let obj = v.as_object().ok_or_else(|| bad("expected object"))?;
        let vars_json = obj.get("vars").and_then(Value::as_array).ok_or_else(|| bad("missing vars"))?;
        let mut vars = Vec::new();
        for vj in vars_json {
            let name = vj.as_str().ok_or_else(|| bad("variable name must be a string"))?;
            vars.push(Var::parse(name).ok_or_else(|| bad("unknown variable"))?);
        }
        if vars.windows(2).any(|w| w[0] >= w[1]) {
            return Err(bad("vars must be strictly increasing in p,q,z,t order"));
        }
        let terms_json = obj.get("terms").and_then(Value::as_array).ok_or_else(|| bad("missing terms"))?;
        let mut terms = Vec::new();
        for tj in terms_json {
            let pair = tj.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad("term must be [exps, coeff]"))?;
            let exps_json = pair[0].as_array().ok_or_else(|| bad("exponents must be an array"))?;
            if exps_json.len() != vars.len() {
                return Err(bad("exponent vector length mismatch"));
            }
            let mut key = Exponents::new();
            for ej in exps_json {
                key.push(ej.as_i64().ok_or_else(|| bad("exponent must be an integer"))?);
            }
            let cs = pair[1].as_str().ok_or_else(|| bad("coefficient must be a decimal string"))?;
            let c: BigInt = cs.parse().map_err(|_| bad("bad coefficient"))?;
            terms.push((key, c));
        }
        Ok(Self::from_terms(vars, terms))
    }
}

fn monomial_string(vars: &[Var], key: &Exponents, shift_back: &Exponents) -> String {
    let mut parts = Vec::new();
    for (i, v) in vars.iter().enumerate() {
        let e = key[i] + shift_back[i];
        match e {
            0 => {}
            1 => parts.push(v.name().to_string()),
            _ => parts.push(format!("{}^{}", v.name(), e)),
        }
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let zero_shift: Exponents = SmallVec::from_elem(0, self.vars.len());
        let mut first = true;
        for (k, c) in &self.terms {
            let mono = monomial_string(&self.vars, k, &zero_shift);
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
                first = false;
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if mono == "1" {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(e: i64) -> LaurentPoly {
        LaurentPoly::monomial(1, &[(Var::Q, e)])
    }

    #[test]
    fn add_cancellation() {
        let f = LaurentPoly::one().sub(&q(1)); // 1 - q
        assert_eq!(f.add(&q(1)), LaurentPoly::one());
    }

    #[test]
    fn add_identity_and_like_terms() {
        let f = LaurentPoly::one().sub(&q(2));
        assert_eq!(LaurentPoly::zero().add(&f), f);
        let qi = q(-1);
        assert_eq!(qi.add(&qi), qi.scale(&BigInt::from(2)));
    }

    #[test]
    fn mul_basic() {
        let a = LaurentPoly::one().sub(&q(1));
        let b = LaurentPoly::one().add(&q(1));
        let expect = LaurentPoly::one().sub(&q(2));
        assert_eq!(a.mul(&b), expect);

        // (1-q)(1-q^2) = 1 - q - q^2 + q^3
        let c = LaurentPoly::one().sub(&q(2));
        let prod = a.mul(&c);
        let expect = LaurentPoly::one().sub(&q(1)).sub(&q(2)).add(&q(3));
        assert_eq!(prod, expect);

        // Laurent inverse exponents collapse to a constant.
        assert_eq!(q(-2).mul(&q(2)), LaurentPoly::one());
    }

    #[test]
    fn mul_truncated_examples() {
        let f = LaurentPoly::one().add(&LaurentPoly::monomial(1, &[(Var::P, 1)]));
        let t = f.mul_truncated(&f, Var::P, 1);
        let expect = LaurentPoly::one().add(&LaurentPoly::monomial(2, &[(Var::P, 1)]));
        assert_eq!(t, expect);
        // no-op when the bound exceeds the degree
        assert_eq!(f.mul_truncated(&f, Var::P, 5), f.mul(&f));
    }

    #[test]
    fn exact_div_examples() {
        let one = LaurentPoly::one();
        let num = one.sub(&q(2));
        let den = one.sub(&q(1));
        assert_eq!(num.exact_div(&den).unwrap(), one.add(&q(1)));

        let t3 = LaurentPoly::one().sub(&LaurentPoly::monomial(1, &[(Var::T, 3)]));
        let t1 = LaurentPoly::one().sub(&LaurentPoly::monomial(1, &[(Var::T, 1)]));
        let quot = t3.exact_div(&t1).unwrap();
        let expect = LaurentPoly::one()
            .add(&LaurentPoly::monomial(1, &[(Var::T, 1)]))
            .add(&LaurentPoly::monomial(1, &[(Var::T, 2)]));
        assert_eq!(quot, expect);
    }

    #[test]
    fn exact_div_qbinomial_4_2() {
        // (q;q)_4 / ((q;q)_2 (q;q)_2) = 1 + q + 2q^2 + q^3 + q^4
        let poch = |n: i64| {
            let mut f = LaurentPoly::one();
            for j in 1..=n {
                f = f.mul(&LaurentPoly::one().sub(&q(j)));
            }
            f
        };
        let num = poch(4);
        let den = poch(2).mul(&poch(2));
        let quot = num.exact_div(&den).unwrap();
        let expect = LaurentPoly::one()
            .add(&q(1))
            .add(&q(2).scale(&BigInt::from(2)))
            .add(&q(3))
            .add(&q(4));
        assert_eq!(quot, expect);
    }

    #[test]
    fn exact_div_laurent_quotient() {
        // (1 - q^2) / (q - q^3) = q^{-1}
        let num = LaurentPoly::one().sub(&q(2));
        let den = q(1).sub(&q(3));
        assert_eq!(num.exact_div(&den).unwrap(), q(-1));
    }

    #[test]
    fn exact_div_rejects_non_divisible() {
        let num = LaurentPoly::one().add(&q(1));
        let den = LaurentPoly::one().sub(&q(1));
        assert!(matches!(num.exact_div(&den), Err(PolyError::NotDivisible { .. })));
        assert!(matches!(num.exact_div(&LaurentPoly::zero()), Err(PolyError::DivisionByZero)));
        // 1 / (1 - q) must terminate with an error, not loop.
        assert!(LaurentPoly::one().exact_div(&den).is_err());
    }

    #[test]
    fn substitute_power_examples() {
        let f = LaurentPoly::one().add(&q(1));
        assert_eq!(f.substitute_power(Var::Q, 3).unwrap(), LaurentPoly::one().add(&q(3)));
        assert_eq!(f.substitute_power(Var::Q, -1).unwrap(), LaurentPoly::one().add(&q(-1)));
        assert!(f.substitute_power(Var::Q, 0).is_err());
    }

    #[test]
    fn exponent_range_and_zero() {
        assert!(LaurentPoly::zero().exponent_range(Var::Q).is_none());
        let f = q(-2).add(&q(5));
        let r = f.exponent_range(Var::Q).unwrap();
        assert_eq!((r.min, r.max), (-2, 5));
        // constant has an empty (0,0) range in any variable
        let c = LaurentPoly::constant(7);
        let r = c.exponent_range(Var::P).unwrap();
        assert_eq!((r.min, r.max), (0, 0));
    }

    #[test]
    fn json_round_trip() {
        let f = LaurentPoly::monomial(3, &[(Var::P, 2), (Var::Q, -1)])
            .add(&LaurentPoly::one())
            .sub(&q(5));
        let j = f.to_json();
        assert_eq!(LaurentPoly::from_json(&j).unwrap(), f);
    }

    #[test]
    fn normalization_drops_unused_vars() {
        let f = LaurentPoly::monomial(1, &[(Var::P, 1), (Var::Q, 1)]);
        let g = LaurentPoly::monomial(1, &[(Var::Q, 1)]);
        // p*q - p*q + q == q, and the result must not carry p anymore
        let h = f.sub(&f).add(&g);
        assert_eq!(h, g);
        assert_eq!(h.vars(), &[Var::Q]);
    }
}
