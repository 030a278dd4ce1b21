//! Interval (enclosure) arithmetic with exact rational endpoints.
//!
//! Rational endpoint arithmetic is exact, so +, -, * introduce no rounding;
//! only sqrt and pi are approximated, and those return enclosures of a
//! requested dyadic width. Endpoints are periodically rounded outward to a
//! dyadic grid to keep numerator/denominator sizes bounded in refinement
//! loops.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::rat::{dyadic_ceil, dyadic_floor, pow2_inv, to_f64};

#[derive(Debug, Clone, PartialEq)]
pub struct RatInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RatInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        RatInterval { lo, hi }
    }

    pub fn point(q: BigRational) -> Self {
        RatInterval { lo: q.clone(), hi: q }
    }

    pub fn from_int(n: i64) -> Self {
        Self::point(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))
    }

    pub fn mid_f64(&self) -> f64 {
        to_f64(&self.midpoint())
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Definite sign of every point in the interval, if one exists.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(&self.lo - &other.hi, &self.hi - &other.lo)
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.hi.clone(), -self.lo.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let cands = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = cands.iter().min().unwrap().clone();
        let hi = cands.iter().max().unwrap().clone();
        Self::new(lo, hi)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_negative() {
            Self::new(&self.hi * q, &self.lo * q)
        } else {
            Self::new(&self.lo * q, &self.hi * q)
        }
    }

    pub fn add_rat(&self, q: &BigRational) -> Self {
        Self::new(&self.lo + q, &self.hi + q)
    }

    pub fn square(&self) -> Self {
        if !self.lo.is_negative() {
            Self::new(&self.lo * &self.lo, &self.hi * &self.hi)
        } else if !self.hi.is_positive() {
            Self::new(&self.hi * &self.hi, &self.lo * &self.lo)
        } else {
            let a = &self.lo * &self.lo;
            let b = &self.hi * &self.hi;
            Self::new(BigRational::zero(), a.max(b))
        }
    }

    /// Reciprocal; the interval must not contain zero.
    pub fn recip(&self) -> Self {
        assert!(!self.contains_zero(), "reciprocal of interval containing 0");
        Self::new(self.hi.recip(), self.lo.recip())
    }

    /// |x| over the interval.
    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            let hi = self.hi.clone().max(-self.lo.clone());
            Self::new(BigRational::zero(), hi)
        }
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        if lo <= hi {
            Some(Self::new(lo, hi))
        } else {
            None
        }
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Round endpoints outward to the dyadic grid 2^-bits.
    pub fn round_out(&self, bits: u32) -> Self {
        Self::new(dyadic_floor(&self.lo, bits), dyadic_ceil(&self.hi, bits))
    }
}

/// Enclosure of sqrt(q) for q >= 0, of width at most 2^-bits.
pub fn sqrt_enclosure(q: &BigRational, bits: u32) -> RatInterval {
    assert!(!q.is_negative(), "sqrt of negative rational");
    if q.is_zero() {
        return RatInterval::point(BigRational::zero());
    }
    // floor(sqrt(q * 4^k)) / 2^k brackets sqrt(q) to within 2^-k.
    let k = bits + 1;
    let scale_num = q.numer() * (BigInt::one() << (2 * k));
    // sqrt(a/b) = sqrt(a*b)/b
    let prod = &scale_num * q.denom();
    let s = prod.sqrt();
    let den = q.denom() * (BigInt::one() << k);
    let lo = BigRational::new(s.clone(), den.clone());
    let hi = BigRational::new(s + BigInt::one(), den);
    RatInterval::new(lo, hi)
}

/// Enclosure of pi of width at most 2^-bits, by Machin's formula with
/// alternating-series bracketing.
pub fn pi_enclosure(bits: u32) -> RatInterval {
    // pi = 16 atan(1/5) - 4 atan(1/239)
    let a = atan_inv_enclosure(5, bits + 6);
    let b = atan_inv_enclosure(239, bits + 6);
    let sixteen = BigRational::from_integer(BigInt::from(16));
    let four = BigRational::from_integer(BigInt::from(4));
    a.scale(&sixteen).sub(&b.scale(&four)).round_out(bits + 1)
}

/// Enclosure of atan(1/m) via the alternating Taylor series; consecutive
/// partial sums bracket the limit.
fn atan_inv_enclosure(m: i64, bits: u32) -> RatInterval {
    let x = BigRational::new(BigInt::one(), BigInt::from(m));
    let x2 = &x * &x;
    let tol = pow2_inv(bits);
    let mut term_pow = x.clone();
    let mut sum = BigRational::zero();
    let mut k: i64 = 0;
    loop {
        let term = &term_pow / BigRational::from_integer(BigInt::from(2 * k + 1));
        let prev = sum.clone();
        if k % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        if term < tol {
            // Consecutive partial sums bracket the limit.
            return RatInterval::new(prev.clone().min(sum.clone()), prev.max(sum));
        }
        term_pow *= &x2;
        k += 1;
    }
}

/// Axis-aligned rectangle enclosure of a complex value.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexRect {
    pub re: RatInterval,
    pub im: RatInterval,
}

impl ComplexRect {
    pub fn new(re: RatInterval, im: RatInterval) -> Self {
        ComplexRect { re, im }
    }

    pub fn point(re: BigRational, im: BigRational) -> Self {
        ComplexRect {
            re: RatInterval::point(re),
            im: RatInterval::point(im),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.re.add(&other.re), self.im.add(&other.im))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(self.re.sub(&other.re), self.im.sub(&other.im))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let re = self.re.mul(&other.re).sub(&self.im.mul(&other.im));
        let im = self.re.mul(&other.im).add(&self.im.mul(&other.re));
        Self::new(re, im)
    }

    /// |z|^2 enclosure.
    pub fn norm_sq(&self) -> RatInterval {
        self.re.square().add(&self.im.square())
    }

    /// Division; the divisor rectangle must exclude zero.
    pub fn div(&self, other: &Self) -> Option<Self> {
        let n = other.norm_sq();
        if n.contains_zero() {
            return None;
        }
        let conj = ComplexRect::new(other.re.clone(), other.im.neg());
        let prod = self.mul(&conj);
        let inv_n = n.recip();
        Some(ComplexRect::new(prod.re.mul(&inv_n), prod.im.mul(&inv_n)))
    }

    pub fn midpoint(&self) -> (BigRational, BigRational) {
        (self.re.midpoint(), self.im.midpoint())
    }

    pub fn max_width(&self) -> BigRational {
        self.re.width().max(self.im.width())
    }

    pub fn contained_in(&self, other: &Self) -> bool {
        other.re.lo <= self.re.lo
            && self.re.hi <= other.re.hi
            && other.im.lo <= self.im.lo
            && self.im.hi <= other.im.hi
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        Some(ComplexRect::new(
            self.re.intersect(&other.re)?,
            self.im.intersect(&other.im)?,
        ))
    }

    pub fn round_out(&self, bits: u32) -> Self {
        Self::new(self.re.round_out(bits), self.im.round_out(bits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn sqrt_brackets_value() {
        let e = sqrt_enclosure(&rat(2, 1), 100);
        assert!(e.width() <= pow2_inv(100));
        let sq = e.square();
        assert!(sq.contains(&rat(2, 1)));
    }

    #[test]
    fn pi_matches_f64() {
        let p = pi_enclosure(80);
        assert!(p.width() <= pow2_inv(80));
        assert!(p.contains(&BigRational::from_float(std::f64::consts::PI).unwrap().clone()) ||
            // f64 pi is not exact; the enclosure must at least be within 1e-15 of it
            (p.mid_f64() - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn interval_multiplication_signs() {
        let a = RatInterval::new(rat(-2, 1), rat(3, 1));
        let b = RatInterval::new(rat(-1, 1), rat(4, 1));
        let p = a.mul(&b);
        assert_eq!(p.lo, rat(-8, 1));
        assert_eq!(p.hi, rat(12, 1));
        assert_eq!(a.square().lo, rat(0, 1));
        assert_eq!(a.square().hi, rat(9, 1));
    }

    #[test]
    fn complex_division_roundtrip() {
        let z = ComplexRect::point(rat(3, 1), rat(4, 1));
        let w = ComplexRect::point(rat(1, 1), rat(-2, 1));
        let q = z.div(&w).unwrap();
        let back = q.mul(&w);
        assert!(back.re.contains(&rat(3, 1)));
        assert!(back.im.contains(&rat(4, 1)));
    }
}
