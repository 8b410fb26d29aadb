//! Arithmetic in Z/pZ for a 62-bit prime, and modular evaluation of
//! Laurent polynomials. Used for probabilistic identity testing at sizes
//! where exact reduction is slow.

use crate::poly::{LaurentPoly, PolyError, Var};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use std::collections::BTreeMap;

/// Default modulus: a fixed 62-bit prime, chosen ≡ 1 (mod 3) so that cube
/// roots of unity exist (the tridissection of a point value needs them).
pub const DEFAULT_PRIME: u64 = 2_305_843_009_213_694_017;

/// Modulus override from the environment, when the CLI flag is absent.
pub const PRIME_ENV_VAR: &str = "BORWEIN_LAB_PRIME";

pub fn default_prime() -> u64 {
    match std::env::var(PRIME_ENV_VAR) {
        Ok(s) => s.parse().unwrap_or(DEFAULT_PRIME),
        Err(_) => DEFAULT_PRIME,
    }
}

/// The field Z/pZ. All element values are reduced representatives in [0, p).
#[derive(Clone, Copy, Debug)]
pub struct Fp {
    pub prime: u64,
}

impl Fp {
    pub fn new(prime: u64) -> Self {
        assert!(prime > 2, "modulus must be an odd prime");
        Fp { prime }
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a as u128 + b as u128;
        (s % self.prime as u128) as u64
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.prime - b % self.prime)
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.prime as u128) as u64
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.prime;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Inverse by Fermat; panics on zero.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(a % self.prime != 0, "inverse of zero");
        self.pow(a, self.prime - 2)
    }

    /// `base^e` for signed `e`, via inverse for negative exponents.
    pub fn pow_signed(&self, base: u64, e: i64) -> u64 {
        if e >= 0 {
            self.pow(base, e as u64)
        } else {
            self.pow(self.inv(base), e.unsigned_abs())
        }
    }

    pub fn reduce_bigint(&self, c: &BigInt) -> u64 {
        let p = BigInt::from(self.prime);
        let mut r = c.mod_floor(&p);
        if r.is_negative() {
            r += &p;
        }
        r.to_u64().expect("reduced residue fits u64")
    }

    /// A primitive cube root of unity; requires prime ≡ 1 (mod 3).
    pub fn cube_root_of_unity(&self) -> Option<u64> {
        if (self.prime - 1) % 3 != 0 {
            return None;
        }
        let e = (self.prime - 1) / 3;
        for g in 2..1000u64 {
            let w = self.pow(g, e);
            if w != 1 {
                return Some(w);
            }
        }
        None
    }
}

/// Value of `f` at `point` in Z/pZ. Errors if any variable of `f` maps to
/// zero (negative Laurent exponents need invertible coordinates).
pub fn eval_mod(f: &LaurentPoly, point: &BTreeMap<Var, u64>, prime: u64) -> Result<u64, PolyError> {
    let fp = Fp::new(prime);
    let vals: Vec<u64> = f
        .vars()
        .iter()
        .map(|v| {
            let x = point.get(v).copied().unwrap_or(0) % prime;
            if x == 0 {
                Err(PolyError::NonInvertiblePoint(*v))
            } else {
                Ok(x)
            }
        })
        .collect::<Result<_, _>>()?;
    let mut acc = 0u64;
    for (key, c) in f.iter_terms() {
        let mut m = fp.reduce_bigint(c);
        for (i, &e) in key.iter().enumerate() {
            m = fp.mul(m, fp.pow_signed(vals[i], e));
        }
        acc = fp.add(acc, m);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::LaurentPoly;

    fn q(e: i64) -> LaurentPoly {
        LaurentPoly::monomial(1, &[(Var::Q, e)])
    }

    fn pt(x: u64) -> BTreeMap<Var, u64> {
        let mut m = BTreeMap::new();
        m.insert(Var::Q, x);
        m
    }

    #[test]
    fn default_prime_is_prime_and_1_mod_3() {
        // Deterministic Miller-Rabin over the standard witness set for u64.
        let n = DEFAULT_PRIME;
        assert_eq!(n % 3, 1);
        let fp = Fp::new(n);
        let d = (n - 1) >> (n - 1).trailing_zeros();
        for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
            let mut x = fp.pow(a, d);
            if x == 1 || x == n - 1 {
                continue;
            }
            let mut witness = true;
            let mut e = d;
            while e != n - 1 {
                x = fp.mul(x, x);
                e <<= 1;
                if x == n - 1 {
                    witness = false;
                    break;
                }
            }
            assert!(!witness, "DEFAULT_PRIME is composite (witness {a})");
        }
        assert!(Fp::new(n).cube_root_of_unity().is_some());
    }

    #[test]
    fn eval_examples() {
        let f = LaurentPoly::one().sub(&q(1));
        assert_eq!(eval_mod(&f, &pt(2), 101).unwrap(), 100);
        // q^{-1} at q=2 mod 5 is 3
        assert_eq!(eval_mod(&q(-1), &pt(2), 5).unwrap(), 3);
        assert!(matches!(
            eval_mod(&q(-1), &pt(0), 5),
            Err(PolyError::NonInvertiblePoint(Var::Q))
        ));
    }

    #[test]
    fn cube_root_of_unity_has_order_three() {
        let fp = Fp::new(DEFAULT_PRIME);
        let w = fp.cube_root_of_unity().unwrap();
        assert_ne!(w, 1);
        assert_eq!(fp.mul(fp.mul(w, w), w), 1);
    }
}
