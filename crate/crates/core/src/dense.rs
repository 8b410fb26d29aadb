//! Shared coefficient abstraction for dense expansion workspaces: i128 fast
//! path with overflow detection, BigInt fallback.

use num_bigint::BigInt;
use num_traits::Zero;

pub(crate) trait Coef: Clone + Sized + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    /// `self += other`; returns false on overflow.
    fn add_assign_checked(&mut self, other: &Self) -> bool;
    /// `self -= other`; returns false on overflow.
    fn sub_assign_checked(&mut self, other: &Self) -> bool;
    fn into_bigint(self) -> BigInt;
}

impl Coef for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add_assign_checked(&mut self, other: &Self) -> bool {
        match self.checked_add(*other) {
            Some(v) => {
                *self = v;
                true
            }
            None => false,
        }
    }
    fn sub_assign_checked(&mut self, other: &Self) -> bool {
        match self.checked_sub(*other) {
            Some(v) => {
                *self = v;
                true
            }
            None => false,
        }
    }
    fn into_bigint(self) -> BigInt {
        BigInt::from(self)
    }
}

impl Coef for BigInt {
    fn zero() -> Self {
        <BigInt as Zero>::zero()
    }
    fn one() -> Self {
        BigInt::from(1)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_assign_checked(&mut self, other: &Self) -> bool {
        *self += other;
        true
    }
    fn sub_assign_checked(&mut self, other: &Self) -> bool {
        *self -= other;
        true
    }
    fn into_bigint(self) -> BigInt {
        self
    }
}

/// Marker for an i128 overflow; callers rerun the computation over BigInt.
pub(crate) struct Overflow;
