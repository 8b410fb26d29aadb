//! Exact summation of rational terms of the shape
//! `± X^x Y^y · ∏ (1 - X^a Y^b)^ν` with signed multiplicities ν.
//!
//! Strategy: pull out the factored common denominator D(f) = max_t(0, -ν_t(f))
//! and common positive part C(f) = max_t(0, min_t ν_t(f)), expand each term's
//! cofactor ∏ f^{ν_t + D - C} in a dense bivariate workspace, accumulate, then
//! divide the accumulated numerator by each denominator factor with an
//! in-place ascending pass. Divisions are verified exact; a nonzero top band
//! means the sum is not a Laurent polynomial and is reported as such.

use std::collections::{BTreeMap, HashMap};

use crate::dense::{Coef, Overflow};
use crate::poly::{Exponents, LaurentPoly, Var};

use super::MultisumError;

/// One summand in factored form over two formal variables X and Y.
/// Factor keys (a, b) stand for (1 - X^a Y^b) with a, b >= 0, (a, b) != (0, 0);
/// the mapped value is the signed multiplicity (negative = denominator).
#[derive(Clone, Debug)]
pub(crate) struct FactoredTerm {
    pub sign: i8,
    pub x_exp: i64,
    pub y_exp: i64,
    pub factors: HashMap<(i64, i64), i64>,
}

impl FactoredTerm {
    pub fn new(sign: i8, x_exp: i64, y_exp: i64) -> Self {
        debug_assert!(sign == 1 || sign == -1);
        FactoredTerm { sign, x_exp, y_exp, factors: HashMap::new() }
    }

    /// Multiply by (1 - X^a Y^b)^mult, cancelling against existing factors.
    pub fn push_factor(&mut self, a: i64, b: i64, mult: i64) {
        assert!(a >= 0 && b >= 0 && (a, b) != (0, 0));
        if mult == 0 {
            return;
        }
        let e = self.factors.entry((a, b)).or_insert(0);
        *e += mult;
        if *e == 0 {
            self.factors.remove(&(a, b));
        }
    }

    /// Multiply by the rising product ∏_{s=lo..=hi} (1 - X^a Y^{b0 + s*step}).
    pub fn push_pochhammer(&mut self, a: i64, b0: i64, step: i64, lo: i64, hi: i64, mult: i64) {
        for s in lo..=hi {
            self.push_factor(a, b0 + s * step, mult);
        }
    }
}

/// Exact value of `Σ_t term_t` as a Laurent polynomial in (xvar, yvar).
pub(crate) fn sum_factored_terms(
    terms: &[FactoredTerm],
    xvar: Var,
    yvar: Var,
) -> Result<LaurentPoly, MultisumError> {
    match sum_generic::<i128>(terms, xvar, yvar) {
        Ok(r) => r,
        Err(Overflow) => sum_generic::<num_bigint::BigInt>(terms, xvar, yvar)
            .unwrap_or_else(|_| unreachable!("BigInt arithmetic does not overflow")),
    }
}

enum DivFail {
    Overflow,
    Remainder,
}

struct Grid<C> {
    xs: usize,
    ys: usize,
    data: Vec<C>,
}

impl<C: Coef> Grid<C> {
    fn new(xs: usize, ys: usize) -> Self {
        Grid { xs, ys, data: vec![C::zero(); xs * ys] }
    }

    /// In-place multiply by (1 - X^a Y^b) on the region [0, cx) x [0, cy),
    /// whose product occupies [0, cx + a) x [0, cy + b). Returns the new
    /// region, clamped to the grid; false on coefficient overflow.
    fn mul_binomial(&mut self, a: usize, b: usize, cx: &mut usize, cy: &mut usize) -> bool {
        let nx = (*cx + a).min(self.xs);
        let ny = (*cy + b).min(self.ys);
        debug_assert!(*cx + a <= self.xs && *cy + b <= self.ys, "grid too small");
        let off = a * self.ys + b;
        for x in (a..nx).rev() {
            let row = x * self.ys;
            for y in (b..ny).rev() {
                let idx = row + y;
                let v = self.data[idx - off].clone();
                if !self.data[idx].sub_assign_checked(&v) {
                    return false;
                }
            }
        }
        *cx = nx;
        *cy = ny;
        true
    }

    /// In-place exact division by (1 - X^a Y^b) over the whole grid.
    fn div_binomial(&mut self, a: usize, b: usize) -> Result<(), DivFail> {
        let off = a * self.ys + b;
        for x in a..self.xs {
            let row = x * self.ys;
            for y in b..self.ys {
                let idx = row + y;
                let v = self.data[idx - off].clone();
                if !self.data[idx].add_assign_checked(&v) {
                    return Err(DivFail::Overflow);
                }
            }
        }
        // exactness: a nonzero cell within a of the X edge or b of the Y edge
        // would propagate to infinitely many power-series coefficients
        for x in 0..self.xs {
            for y in 0..self.ys {
                if (x + a >= self.xs || y + b >= self.ys) && !self.data[x * self.ys + y].is_zero() {
                    return Err(DivFail::Remainder);
                }
            }
        }
        Ok(())
    }
}

fn sum_generic<C: Coef>(
    terms: &[FactoredTerm],
    xvar: Var,
    yvar: Var,
) -> Result<Result<LaurentPoly, MultisumError>, Overflow> {
    if terms.is_empty() {
        return Ok(Ok(LaurentPoly::zero()));
    }

    // signed multiplicity minima across all terms (absent factor counts as 0)
    let mut seen: BTreeMap<(i64, i64), (i64, usize)> = BTreeMap::new();
    for t in terms {
        for (&k, &v) in &t.factors {
            let e = seen.entry(k).or_insert((i64::MAX, 0));
            e.0 = e.0.min(v);
            e.1 += 1;
        }
    }
    let min_mult: BTreeMap<(i64, i64), i64> = seen
        .into_iter()
        .map(|(k, (mn, cnt))| (k, if cnt == terms.len() { mn } else { mn.min(0) }))
        .collect();
    let common_den: Vec<((i64, i64), i64)> = min_mult
        .iter()
        .filter(|&(_, &v)| v < 0)
        .map(|(&k, &v)| (k, -v))
        .collect();
    let common_num: Vec<((i64, i64), i64)> = min_mult
        .iter()
        .filter(|&(_, &v)| v > 0)
        .map(|(&k, &v)| (k, v))
        .collect();

    // cofactor exponents and per-term numerator degrees
    let mut cof: Vec<Vec<((usize, usize), i64)>> = Vec::with_capacity(terms.len());
    let mut gxlo = i64::MAX;
    let mut gylo = i64::MAX;
    let mut gxhi = i64::MIN;
    let mut gyhi = i64::MIN;
    for t in terms {
        let mut fs: Vec<((usize, usize), i64)> = Vec::new();
        let mut dx = 0i64;
        let mut dy = 0i64;
        // factors the term lacks but whose D(f) > 0 still multiply in
        for (&k, &base) in &min_mult {
            // cofactor exponent ν + D(f) - C(f) = ν - min_mult(f)
            let e = t.factors.get(&k).copied().unwrap_or(0) - base;
            debug_assert!(e >= 0);
            if e > 0 {
                fs.push(((k.0 as usize, k.1 as usize), e));
                dx += k.0 * e;
                dy += k.1 * e;
            }
        }
        // cheapest growth first keeps the live region small
        fs.sort_by_key(|&((a, b), _)| (a + b, a, b));
        gxlo = gxlo.min(t.x_exp);
        gylo = gylo.min(t.y_exp);
        gxhi = gxhi.max(t.x_exp + dx);
        gyhi = gyhi.max(t.y_exp + dy);
        cof.push(fs);
    }

    // headroom for multiplying the common numerator part back in at the end
    let extra_x: i64 = common_num.iter().map(|&((a, _), e)| a * e).sum();
    let extra_y: i64 = common_num.iter().map(|&((_, b), e)| b * e).sum();
    let xs = (gxhi - gxlo + 1 + extra_x) as usize;
    let ys = (gyhi - gylo + 1 + extra_y) as usize;

    let mut acc: Grid<C> = Grid::new(xs, ys);
    let mut work: Grid<C> = Grid::new(xs, ys);
    for (t, fs) in terms.iter().zip(&cof) {
        let mut cx = 1usize;
        let mut cy = 1usize;
        work.data[0] = C::one();
        for &((a, b), e) in fs {
            for _ in 0..e {
                if !work.mul_binomial(a, b, &mut cx, &mut cy) {
                    return Err(Overflow);
                }
            }
        }
        let ox = (t.x_exp - gxlo) as usize;
        let oy = (t.y_exp - gylo) as usize;
        for x in 0..cx {
            let src = x * ys;
            let dst = (x + ox) * ys + oy;
            for y in 0..cy {
                let v = &work.data[src + y];
                if v.is_zero() {
                    continue;
                }
                let ok = if t.sign > 0 {
                    acc.data[dst + y].add_assign_checked(v)
                } else {
                    acc.data[dst + y].sub_assign_checked(v)
                };
                if !ok {
                    return Err(Overflow);
                }
            }
        }
        // clear only the touched region for the next term
        for x in 0..cx {
            let row = x * ys;
            for y in 0..cy {
                work.data[row + y] = C::zero();
            }
        }
    }
    drop(work);

    // restore the common numerator part first: only the full numerator is
    // guaranteed divisible by the common denominator
    let (mut cx, mut cy) = (xs - extra_x as usize, ys - extra_y as usize);
    for &((a, b), e) in &common_num {
        for _ in 0..e {
            if !acc.mul_binomial(a as usize, b as usize, &mut cx, &mut cy) {
                return Err(Overflow);
            }
        }
    }

    for &((a, b), e) in &common_den {
        for _ in 0..e {
            match acc.div_binomial(a as usize, b as usize) {
                Ok(()) => {}
                Err(DivFail::Overflow) => return Err(Overflow),
                Err(DivFail::Remainder) => {
                    return Ok(Err(MultisumError::NotPolynomial {
                        x_exp: a,
                        y_exp: b,
                        xvar,
                        yvar,
                    }))
                }
            }
        }
    }

    // emit exponent keys in sorted variable order
    let swap = xvar > yvar;
    let vars = if swap { vec![yvar, xvar] } else { vec![xvar, yvar] };
    let mut out: Vec<(Exponents, num_bigint::BigInt)> = Vec::new();
    for x in 0..xs {
        for y in 0..ys {
            let v = std::mem::replace(&mut acc.data[x * ys + y], C::zero());
            if !v.is_zero() {
                let (ex, ey) = (gxlo + x as i64, gylo + y as i64);
                let mut key = Exponents::new();
                if swap {
                    key.push(ey);
                    key.push(ex);
                } else {
                    key.push(ex);
                    key.push(ey);
                }
                out.push((key, v.into_bigint()));
            }
        }
    }
    Ok(Ok(LaurentPoly::from_terms(vars, out)))
}

/// Expand one factored term as an explicit numerator/denominator pair of
/// Laurent polynomials (sign and monomial folded into the numerator).
pub(crate) fn term_to_rational(t: &FactoredTerm, xvar: Var, yvar: Var) -> (LaurentPoly, LaurentPoly) {
    let mut num = LaurentPoly::monomial(
        num_bigint::BigInt::from(t.sign as i64),
        &[(xvar, t.x_exp), (yvar, t.y_exp)],
    );
    let mut den = LaurentPoly::one();
    let mut keys: Vec<_> = t.factors.iter().map(|(&k, &v)| (k, v)).collect();
    keys.sort();
    for ((a, b), v) in keys {
        let f = LaurentPoly::one_minus_monomial(&[(xvar, a), (yvar, b)]);
        for _ in 0..v.abs() {
            if v > 0 {
                num = num.mul(&f);
            } else {
                den = den.mul(&f);
            }
        }
    }
    (num, den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn geom_pair() -> Vec<FactoredTerm> {
        // 1/(1-q) - q^3/(1-q) = 1 + q + q^2
        let mut a = FactoredTerm::new(1, 0, 0);
        a.push_factor(0, 1, -1);
        let mut b = FactoredTerm::new(-1, 0, 3);
        b.push_factor(0, 1, -1);
        vec![a, b]
    }

    #[test]
    fn telescoping_geometric() {
        let s = sum_factored_terms(&geom_pair(), Var::P, Var::Q).unwrap();
        let expect = LaurentPoly::from_json(
            &serde_json::json!({"vars": ["q"], "terms": [[[0], "1"], [[1], "1"], [[2], "1"]]}),
        )
        .unwrap();
        assert_eq!(s, expect);
    }

    #[test]
    fn non_polynomial_sum_is_reported() {
        // 1/(1-q) + q/(1-q) has no polynomial value
        let mut a = FactoredTerm::new(1, 0, 0);
        a.push_factor(0, 1, -1);
        let mut b = FactoredTerm::new(1, 0, 1);
        b.push_factor(0, 1, -1);
        let err = sum_factored_terms(&[a, b], Var::P, Var::Q).unwrap_err();
        assert!(matches!(err, MultisumError::NotPolynomial { .. }));
    }

    #[test]
    fn bivariate_cancellation() {
        // (1-p^2q^2)/(1-pq) - pq = 1
        let mut a = FactoredTerm::new(1, 0, 0);
        a.push_factor(2, 2, 1);
        a.push_factor(1, 1, -1);
        let b = FactoredTerm::new(-1, 1, 1);
        let s = sum_factored_terms(&[a, b], Var::P, Var::Q).unwrap();
        assert_eq!(s, LaurentPoly::one());
    }

    #[test]
    fn common_positive_part_restored() {
        // both terms share a net positive factor (1-q): [(1-q)] + [q(1-q)] = 1 - q^2
        let a = {
            let mut t = FactoredTerm::new(1, 0, 0);
            t.push_factor(0, 1, 1);
            t
        };
        let b = {
            let mut t = FactoredTerm::new(1, 0, 1);
            t.push_factor(0, 1, 1);
            t
        };
        let s = sum_factored_terms(&[a, b], Var::P, Var::Q).unwrap();
        let expect = LaurentPoly::one().sub(&LaurentPoly::monomial(BigInt::from(1), &[(Var::Q, 2)]));
        assert_eq!(s, expect);
    }

    #[test]
    fn negative_monomial_offsets() {
        // q^{-2}(1-q) + q^{-1} = q^{-2}
        let a = {
            let mut t = FactoredTerm::new(1, 0, -2);
            t.push_factor(0, 1, 1);
            t
        };
        let b = FactoredTerm::new(1, 0, -1);
        let s = sum_factored_terms(&[a, b], Var::P, Var::Q).unwrap();
        assert_eq!(s, LaurentPoly::monomial(BigInt::from(1), &[(Var::Q, -2)]));
    }

    #[test]
    fn rational_form_matches_engine() {
        for t in geom_pair() {
            let (num, den) = term_to_rational(&t, Var::P, Var::Q);
            // num/den times (1-q) reconstruction: den is (1-q) here
            assert_eq!(den, LaurentPoly::one_minus_monomial(&[(Var::Q, 1)]));
            assert!(!num.is_zero());
        }
    }
}
