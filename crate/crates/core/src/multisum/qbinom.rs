//! Gaussian binomial coefficients and the closed-form single sums for the
//! three components of the m = 0 product.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::poly::{Exponents, LaurentPoly, Var};

fn qkey(e: i64) -> Exponents {
    let mut k = Exponents::new();
    k.push(e);
    k
}

/// Coefficient vector of the Gaussian binomial [m, j]_q (degree j(m-j)),
/// built by the Pascal recurrence [m,j] = [m-1,j] + q^{m-j} [m-1,j-1].
/// No division is ever performed.
fn qbinom_coeffs(m: usize, j: usize) -> Vec<BigInt> {
    if j > m {
        return vec![BigInt::zero()];
    }
    // row[k] holds the coefficient vector of [r, k]_q for the current r
    let mut row: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for r in 1..=m {
        let mut next: Vec<Vec<BigInt>> = Vec::with_capacity(r + 1);
        for k in 0..=r {
            if k == 0 || k == r {
                next.push(vec![BigInt::one()]);
                continue;
            }
            let mut c = vec![BigInt::zero(); k * (r - k) + 1];
            for (e, v) in row[k].iter().enumerate() {
                c[e] += v;
            }
            let shift = r - k;
            for (e, v) in row[k - 1].iter().enumerate() {
                c[e + shift] += v;
            }
            next.push(c);
        }
        row = next;
    }
    row.swap_remove(j)
}

/// Gaussian binomial [m, j]_q as a polynomial in q. Zero when j > m.
pub fn q_binomial(m: usize, j: usize) -> LaurentPoly {
    coeffs_to_poly(qbinom_coeffs(m, j))
}

fn coeffs_to_poly(c: Vec<BigInt>) -> LaurentPoly {
    LaurentPoly::from_terms(
        vec![Var::Q],
        c.into_iter().enumerate().map(|(e, v)| (qkey(e as i64), v)),
    )
}

/// The single-sum forms of the three components of the m = 0 truncated
/// product: for each of (A, B, C) a sum over λ of
/// (-1)^λ q^{λ(9λ+e)/2} [2n, n+3λ+d] with (e, d) = (1, 0), (-5, -1), (7, 1).
pub fn andrews_abc(n: usize) -> (LaurentPoly, LaurentPoly, LaurentPoly) {
    // one Pascal triangle pass shared by all three sums
    let mut row: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for r in 1..=2 * n {
        let mut next: Vec<Vec<BigInt>> = Vec::with_capacity(r + 1);
        for k in 0..=r {
            if k == 0 || k == r {
                next.push(vec![BigInt::one()]);
                continue;
            }
            let mut c = vec![BigInt::zero(); k * (r - k) + 1];
            for (e, v) in row[k].iter().enumerate() {
                c[e] += v;
            }
            let shift = r - k;
            for (e, v) in row[k - 1].iter().enumerate() {
                c[e + shift] += v;
            }
            next.push(c);
        }
        row = next;
    }

    let n_i = n as i64;
    let single_sum = |e9: i64, d: i64| -> LaurentPoly {
        let mut acc: Vec<BigInt> = Vec::new();
        let mut lam = -(n_i);
        while lam <= n_i {
            let j = n_i + 3 * lam + d;
            if (0..=2 * n_i).contains(&j) {
                let qexp = lam * (9 * lam + e9) / 2;
                debug_assert!(lam * (9 * lam + e9) % 2 == 0);
                debug_assert!(qexp >= 0);
                let sign = if lam.rem_euclid(2) == 0 { 1 } else { -1 };
                let binom = &row[j as usize];
                let need = qexp as usize + binom.len();
                if acc.len() < need {
                    acc.resize(need, BigInt::zero());
                }
                for (e, v) in binom.iter().enumerate() {
                    if sign > 0 {
                        acc[qexp as usize + e] += v;
                    } else {
                        acc[qexp as usize + e] -= v;
                    }
                }
            }
            lam += 1;
        }
        coeffs_to_poly(acc)
    };

    let a = single_sum(1, 0);
    let b = single_sum(-5, -1);
    let c = single_sum(7, 1);
    (a, b, c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qpoly(coeffs: &[i64]) -> LaurentPoly {
        LaurentPoly::from_terms(
            vec![Var::Q],
            coeffs
                .iter()
                .enumerate()
                .map(|(e, &c)| (qkey(e as i64), BigInt::from(c))),
        )
    }

    #[test]
    fn small_binomials() {
        assert_eq!(q_binomial(0, 0), LaurentPoly::one());
        assert_eq!(q_binomial(2, 1), qpoly(&[1, 1]));
        assert_eq!(q_binomial(4, 2), qpoly(&[1, 1, 2, 1, 1]));
        assert_eq!(q_binomial(1, 2), LaurentPoly::zero());
    }

    #[test]
    fn binomial_symmetry_and_value_at_one() {
        for m in 0..=8usize {
            for j in 0..=m {
                let b = q_binomial(m, j);
                assert_eq!(b, q_binomial(m, m - j));
                // evaluation at q = 1 is the ordinary binomial coefficient
                let at_one: BigInt = b.iter_terms().map(|(_, c)| c.clone()).sum();
                let mut expect = BigInt::one();
                for i in 0..j {
                    expect = expect * BigInt::from(m - i) / BigInt::from(i + 1);
                }
                assert_eq!(at_one, expect);
            }
        }
    }

    #[test]
    fn abc_at_n1() {
        let (a, b, c) = andrews_abc(1);
        assert_eq!(a, qpoly(&[1, 1]));
        assert_eq!(b, LaurentPoly::one());
        assert_eq!(c, LaurentPoly::one());
    }

    #[test]
    fn abc_are_polynomials_in_q() {
        let (a, b, c) = andrews_abc(3);
        for f in [&a, &b, &c] {
            let r = f.exponent_range(Var::Q).unwrap();
            assert!(r.min >= 0);
        }
    }
}
