//! Scalar types the simplex can run over.
//!
//! [`Q128`] is a fraction of two `i128` with checked arithmetic; every
//! operation reports overflow so the solver can restart over [`Rational`].

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overflow;

pub type FResult<T> = Result<T, Overflow>;

pub trait Field: Clone + fmt::Debug + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(q: &Rational) -> FResult<Self>;
    fn to_rational(&self) -> Rational;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn is_positive(&self) -> bool;
    fn add(&self, other: &Self) -> FResult<Self>;
    fn sub(&self, other: &Self) -> FResult<Self>;
    fn mul(&self, other: &Self) -> FResult<Self>;
    fn div(&self, other: &Self) -> FResult<Self>;
    fn neg(&self) -> FResult<Self>;
    fn try_cmp(&self, other: &Self) -> FResult<Ordering>;
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_rational(q: &Rational) -> FResult<Self> {
        Ok(q.clone())
    }
    fn to_rational(&self) -> Rational {
        self.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn add(&self, other: &Self) -> FResult<Self> {
        Ok(self + other)
    }
    fn sub(&self, other: &Self) -> FResult<Self> {
        Ok(self - other)
    }
    fn mul(&self, other: &Self) -> FResult<Self> {
        Ok(self * other)
    }
    fn div(&self, other: &Self) -> FResult<Self> {
        Ok(self / other)
    }
    fn neg(&self) -> FResult<Self> {
        Ok(-self)
    }
    fn try_cmp(&self, other: &Self) -> FResult<Ordering> {
        Ok(self.cmp(other))
    }
}

/// Reduced fraction `num / den` with `den > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Q128 {
    num: i128,
    den: i128,
}

impl Q128 {
    pub fn new(num: i128, den: i128) -> FResult<Self> {
        if den == 0 {
            return Err(Overflow);
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            n = n.checked_neg().ok_or(Overflow)?;
            d = d.checked_neg().ok_or(Overflow)?;
        }
        Ok(Q128 { num: n, den: d })
    }

    pub fn integer(n: i128) -> Self {
        Q128 { num: n, den: 1 }
    }
}

impl Field for Q128 {
    fn zero() -> Self {
        Q128::integer(0)
    }
    fn one() -> Self {
        Q128::integer(1)
    }
    fn from_rational(q: &Rational) -> FResult<Self> {
        let n = q.numer().to_i128().ok_or(Overflow)?;
        let d = q.denom().to_i128().ok_or(Overflow)?;
        Ok(Q128 { num: n, den: d })
    }
    fn to_rational(&self) -> Rational {
        Rational::new(BigInt::from(self.num), BigInt::from(self.den))
    }
    fn is_zero(&self) -> bool {
        self.num == 0
    }
    fn is_negative(&self) -> bool {
        self.num < 0
    }
    fn is_positive(&self) -> bool {
        self.num > 0
    }
    fn add(&self, o: &Self) -> FResult<Self> {
        if self.den == o.den {
            let n = self.num.checked_add(o.num).ok_or(Overflow)?;
            return Q128::new(n, self.den);
        }
        let g = self.den.gcd(&o.den);
        let a = self.num.checked_mul(o.den / g).ok_or(Overflow)?;
        let b = o.num.checked_mul(self.den / g).ok_or(Overflow)?;
        let n = a.checked_add(b).ok_or(Overflow)?;
        let d = (self.den / g).checked_mul(o.den).ok_or(Overflow)?;
        Q128::new(n, d)
    }
    fn sub(&self, o: &Self) -> FResult<Self> {
        self.add(&o.neg()?)
    }
    fn mul(&self, o: &Self) -> FResult<Self> {
        if self.num == 0 || o.num == 0 {
            return Ok(Q128::zero());
        }
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let n = (self.num / g1).checked_mul(o.num / g2).ok_or(Overflow)?;
        let d = (self.den / g2).checked_mul(o.den / g1).ok_or(Overflow)?;
        Ok(Q128 { num: n, den: d })
    }
    fn div(&self, o: &Self) -> FResult<Self> {
        if o.num == 0 {
            return Err(Overflow);
        }
        let inv = if o.num < 0 {
            Q128 {
                num: o.den.checked_neg().ok_or(Overflow)?,
                den: o.num.checked_neg().ok_or(Overflow)?,
            }
        } else {
            Q128 { num: o.den, den: o.num }
        };
        self.mul(&inv)
    }
    fn neg(&self) -> FResult<Self> {
        Ok(Q128 {
            num: self.num.checked_neg().ok_or(Overflow)?,
            den: self.den,
        })
    }
    fn try_cmp(&self, o: &Self) -> FResult<Ordering> {
        if self.den == o.den {
            return Ok(self.num.cmp(&o.num));
        }
        let a = self.num.checked_mul(o.den).ok_or(Overflow)?;
        let b = o.num.checked_mul(self.den).ok_or(Overflow)?;
        Ok(a.cmp(&b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn q128_matches_big_rationals() {
        let vals = [frac(1, 2), frac(-3, 4), frac(7, 3), frac(0, 1), frac(5, 1)];
        for a in &vals {
            for b in &vals {
                let qa = Q128::from_rational(a).unwrap();
                let qb = Q128::from_rational(b).unwrap();
                assert_eq!(qa.add(&qb).unwrap().to_rational(), a + b);
                assert_eq!(qa.sub(&qb).unwrap().to_rational(), a - b);
                assert_eq!(qa.mul(&qb).unwrap().to_rational(), a * b);
                if !Zero::is_zero(b) {
                    assert_eq!(qa.div(&qb).unwrap().to_rational(), a / b);
                }
                assert_eq!(qa.try_cmp(&qb).unwrap(), a.cmp(b));
            }
        }
    }

    #[test]
    fn q128_reports_overflow() {
        let big = Q128::integer(i128::MAX);
        assert_eq!(big.add(&Q128::one()), Err(Overflow));
        assert_eq!(big.mul(&Q128::integer(2)), Err(Overflow));
        assert_eq!(Q128::one().div(&Q128::zero()), Err(Overflow));
    }
}
