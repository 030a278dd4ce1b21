//! Dense univariate polynomials over the rationals: arithmetic, evaluation
//! over intervals, Sturm sequences, resultants and small-degree
//! irreducibility tests.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::interval::{ComplexRect, RatInterval};
use crate::matrix::det_rational;

/// Coefficients stored low to high; the zero polynomial is an empty vector.
#[derive(Debug, Clone, PartialEq)]
pub struct QPoly(pub Vec<BigRational>);

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly(coeffs)
    }

    pub fn zero() -> Self {
        QPoly(vec![])
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn x() -> Self {
        QPoly(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports -1.
    pub fn degree(&self) -> i64 {
        self.0.len() as i64 - 1
    }

    pub fn leading(&self) -> BigRational {
        self.0.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.0.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.0.last().map_or(false, |c| c.is_one())
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_interval(&self, x: &RatInterval) -> RatInterval {
        let mut acc = RatInterval::point(BigRational::zero());
        for c in self.0.iter().rev() {
            acc = acc.mul(x).add_rat(c);
        }
        acc
    }

    pub fn eval_complex(&self, z: &ComplexRect) -> ComplexRect {
        let mut acc = ComplexRect::point(BigRational::zero(), BigRational::zero());
        for c in self.0.iter().rev() {
            acc = acc.mul(z);
            acc.re = acc.re.add_rat(c);
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.0.iter().rev() {
            acc = acc * x + crate::rat::to_f64(c);
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + other.coeff(k));
        }
        Self::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) - other.coeff(k));
        }
        Self::new(out)
    }

    pub fn neg(&self) -> Self {
        QPoly(self.0.iter().map(|c| -c.clone()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Self::new(self.0.iter().map(|c| c * q).collect())
    }

    pub fn derivative(&self) -> Self {
        if self.0.len() <= 1 {
            return Self::zero();
        }
        Self::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    /// Euclidean division; divisor must be nonzero.
    pub fn divrem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let dlead = divisor.leading();
        let dd = divisor.degree();
        let mut rem = self.0.clone();
        let mut quot = vec![BigRational::zero(); (self.degree() - dd + 1).max(0) as usize];
        while rem.len() as i64 - 1 >= dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd as usize;
            let factor = rem.last().unwrap() / &dlead;
            if !factor.is_zero() {
                quot[k] = factor.clone();
                for (j, c) in divisor.0.iter().enumerate() {
                    rem[k + j] -= &factor * c;
                }
            }
            rem.pop();
            while rem.last().map_or(false, |c| c.is_zero()) {
                rem.pop();
            }
            if (rem.len() as i64 - 1) < dd {
                break;
            }
        }
        (Self::new(quot), Self::new(rem))
    }

    /// Monic gcd via the Euclidean algorithm.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            let lead = a.leading();
            a.scale(&lead.recip())
        }
    }

    /// True if `divisor` divides self exactly.
    pub fn divisible_by(&self, divisor: &Self) -> bool {
        self.divrem(divisor).1.is_zero()
    }

    /// Sturm chain of self (assumed squarefree is not required).
    pub fn sturm_chain(&self) -> Vec<QPoly> {
        let mut chain = vec![self.clone(), self.derivative()];
        while !chain.last().unwrap().is_zero() {
            let n = chain.len();
            let (_, r) = chain[n - 2].divrem(&chain[n - 1]);
            chain.push(r.neg());
        }
        chain.pop();
        chain
    }

    /// Number of distinct real roots in (a, b] by Sturm's theorem.
    pub fn count_real_roots_between(chain: &[QPoly], a: &BigRational, b: &BigRational) -> i64 {
        sign_changes(chain, a) - sign_changes(chain, b)
    }

    /// Cauchy-style bound: all complex roots have |z| < 1 + max|c_k|/|lead|.
    pub fn root_bound(&self) -> BigRational {
        let lead = self.leading().abs();
        let mut m = BigRational::zero();
        for c in &self.0[..self.0.len().saturating_sub(1)] {
            let a = c.abs() / &lead;
            if a > m {
                m = a;
            }
        }
        m + BigRational::one()
    }

    /// Resultant Res(self, other) via the Sylvester matrix determinant.
    pub fn resultant(&self, other: &Self) -> BigRational {
        let m = self.degree();
        let n = other.degree();
        if m < 0 || n < 0 {
            return BigRational::zero();
        }
        if m == 0 {
            return self.coeff(0).pow(n as i32);
        }
        if n == 0 {
            return other.coeff(0).pow(m as i32);
        }
        let size = (m + n) as usize;
        let mut mat = vec![vec![BigRational::zero(); size]; size];
        // n rows of coefficients of self (high to low), shifted.
        for row in 0..n as usize {
            for (k, idx) in (0..=m as usize).rev().enumerate() {
                mat[row][row + k] = self.coeff(idx);
            }
        }
        // m rows of coefficients of other.
        for row in 0..m as usize {
            for (k, idx) in (0..=n as usize).rev().enumerate() {
                mat[n as usize + row][row + k] = other.coeff(idx);
            }
        }
        det_rational(&mat)
    }

    /// Irreducibility over Q for monic integer polynomials of degree <= 4.
    /// Returns Ok(true) if certified irreducible, Ok(false) past degree 4
    /// (caller decides how to flag), Err if certified reducible.
    pub fn check_irreducible_small(&self) -> Result<bool> {
        assert!(self.is_monic() && self.has_integer_coeffs());
        let deg = self.degree();
        if deg <= 1 {
            return Ok(true);
        }
        if deg > 4 {
            return Ok(false);
        }
        // Integer roots divide the constant term.
        let c0 = self.coeff(0).to_integer();
        if c0.is_zero() {
            return Err(Error::ReduciblePolynomial("x divides the polynomial".into()));
        }
        for d in divisors(&c0) {
            for sign in [1i64, -1] {
                let cand = BigRational::from_integer(&d * BigInt::from(sign));
                if self.eval(&cand).is_zero() {
                    return Err(Error::ReduciblePolynomial(format!(
                        "rational root {}",
                        &d * BigInt::from(sign)
                    )));
                }
            }
        }
        if deg <= 3 {
            return Ok(true);
        }
        // Degree 4: search for a monic integer quadratic factorization
        // (x^2+bx+c)(x^2+dx+e) with c*e = a0, b+d = a3, bd+c+e = a2, be+cd = a1.
        let a3 = self.coeff(3).to_integer();
        let a2 = self.coeff(2).to_integer();
        let a1 = self.coeff(1).to_integer();
        let a0 = c0;
        for c in signed_divisors(&a0) {
            let e = &a0 / &c;
            if &c * &e != a0 {
                continue;
            }
            if c == e {
                // b+d = a3, bd = a2-2c, c(b+d) = a1 requires c*a3 = a1.
                if &c * &a3 != a1 {
                    continue;
                }
                let s = a3.clone();
                let p = &a2 - BigInt::from(2) * &c;
                // b,d are integer roots of z^2 - s z + p.
                let disc = &s * &s - BigInt::from(4) * &p;
                if disc.sign() != num_bigint::Sign::Minus {
                    let r = disc.sqrt();
                    if &r * &r == disc && ((&s + &r) % BigInt::from(2)).is_zero() {
                        return Err(Error::ReduciblePolynomial(
                            "product of two quadratics".into(),
                        ));
                    }
                }
            } else {
                // b(e - c) = a1 - c*a3.
                let denom = &e - &c;
                let num = &a1 - &c * &a3;
                if (&num % &denom).is_zero() {
                    let b = &num / &denom;
                    let d = &a3 - &b;
                    if &b * &d + &c + &e == a2 && &b * &e + &c * &d == a1 {
                        return Err(Error::ReduciblePolynomial(
                            "product of two quadratics".into(),
                        ));
                    }
                }
            }
        }
        Ok(true)
    }
}

fn sign_changes(chain: &[QPoly], x: &BigRational) -> i64 {
    let mut count = 0;
    let mut last = 0i32;
    for p in chain {
        let v = p.eval(x);
        let s = if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = vec![];
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            out.push(&n / &d);
        }
        d += BigInt::one();
    }
    out
}

fn signed_divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = vec![];
    for d in divisors(n) {
        out.push(d.clone());
        out.push(-d);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    #[test]
    fn divrem_reconstructs() {
        let p = QPoly::from_ints(&[2, 0, -3, 1]); // x^3 - 3x^2 + 2
        let d = QPoly::from_ints(&[-1, 1]); // x - 1
        let (q, r) = p.divrem(&d);
        assert_eq!(d.mul(&q).add(&r), p);
        assert_eq!(r, QPoly::zero()); // x = 1 is a root
    }

    #[test]
    fn sturm_counts_roots() {
        // (x^2 - 2)(x^2 - 3) has 4 real roots.
        let p = QPoly::from_ints(&[6, 0, -5, 0, 1]);
        let chain = p.sturm_chain();
        let b = p.root_bound();
        let count = QPoly::count_real_roots_between(&chain, &(-b.clone()), &b);
        assert_eq!(count, 4);
        // x^2 + 1 has none.
        let p = QPoly::from_ints(&[1, 0, 1]);
        let chain = p.sturm_chain();
        let b = p.root_bound();
        assert_eq!(QPoly::count_real_roots_between(&chain, &(-b.clone()), &b), 0);
    }

    #[test]
    fn resultant_known_values() {
        // Res(x^2+1, x-1) = 1^2+1 = 2 evaluated: product of (root - ...) sign conventions:
        // Res(f,g) with f = x^2+1, g = 1+x: product over roots z of f of g(z) = (1+i)(1-i) = 2.
        let f = QPoly::from_ints(&[1, 0, 1]);
        let g = QPoly::from_ints(&[1, 1]);
        assert_eq!(f.resultant(&g), rat_int(2));
        // Res(x^2-2, x) = product of roots of x^2-2 evaluated in g(x)=x: -2... product is -2.
        let f = QPoly::from_ints(&[-2, 0, 1]);
        let g = QPoly::x();
        assert_eq!(f.resultant(&g), rat_int(-2));
    }

    #[test]
    fn irreducibility_small_degrees() {
        assert!(QPoly::from_ints(&[1, 0, 1]).check_irreducible_small().unwrap());
        assert!(QPoly::from_ints(&[-2, 0, 1]).check_irreducible_small().unwrap());
        assert!(QPoly::from_ints(&[-2, 0, 0, 1]).check_irreducible_small().unwrap());
        assert!(QPoly::from_ints(&[1, 1, 1, 1, 1]).check_irreducible_small().unwrap()); // cyclotomic
        assert!(QPoly::from_ints(&[-4, 0, 1]).check_irreducible_small().is_err()); // (x-2)(x+2)
        assert!(QPoly::from_ints(&[4, 0, 4, 0, 1]).check_irreducible_small().is_err()); // (x^2+2)^2
        assert!(QPoly::from_ints(&[1, 0, 3, 0, 1]).check_irreducible_small().unwrap());
        // x^4 + 4 = (x^2-2x+2)(x^2+2x+2)
        assert!(QPoly::from_ints(&[4, 0, 0, 0, 1]).check_irreducible_small().is_err());
    }

    #[test]
    fn interval_eval_contains_exact() {
        let p = QPoly::from_ints(&[-2, 0, 1]);
        let x = RatInterval::new(rat(707, 500), rat(708, 500));
        let img = p.eval_interval(&x);
        let exact = p.eval(&rat(1414, 1000));
        assert!(img.contains(&exact));
    }
}
