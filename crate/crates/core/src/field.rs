//! Number fields with exact element arithmetic and certified archimedean
//! embeddings.
//!
//! A field is presented by a monic integer polynomial p and an integral
//! basis given over the power basis of a root theta. Elements carry exact
//! rational coordinates over the integral basis; all arithmetic is exact.
//! Archimedean data (signature, embeddings) comes from certified root
//! enclosures refined on demand.

use std::cmp::Ordering;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::interval::{ComplexRect, RatInterval};
use crate::matrix::{det_rational, inverse_rational, row_times_matrix};
use crate::poly::QPoly;
use crate::rat::rat_int;
use crate::roots::{
    isolate_all_roots, refine_complex_root, refine_real_root, RootEnclosure,
    DEFAULT_PRECISION_CAP_BITS,
};

/// An archimedean place: real embedding or conjugate pair of complex ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaceKind {
    Real,
    Complex,
}

#[derive(Debug, Clone, Copy)]
pub struct Place {
    pub kind: PlaceKind,
}

impl Place {
    /// Local degree exponent: 1 at real places, 2 at complex places.
    pub fn fv(&self) -> u32 {
        match self.kind {
            PlaceKind::Real => 1,
            PlaceKind::Complex => 2,
        }
    }
}

/// Element of a number field: exact rational coordinates over the integral
/// basis. Equality, ordering and hashing are coordinate-wise.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement {
    pub coords: Vec<BigRational>,
}

impl FieldElement {
    pub fn new(coords: Vec<BigRational>) -> Self {
        FieldElement { coords }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

/// Value of one archimedean embedding as an enclosure.
#[derive(Debug, Clone)]
pub enum EmbeddingValue {
    Real(RatInterval),
    Complex(ComplexRect),
}

impl EmbeddingValue {
    /// Enclosure of |value|^2.
    pub fn abs_sq(&self) -> RatInterval {
        match self {
            EmbeddingValue::Real(iv) => iv.square(),
            EmbeddingValue::Complex(z) => z.norm_sq(),
        }
    }

    pub fn max_width(&self) -> BigRational {
        match self {
            EmbeddingValue::Real(iv) => iv.width(),
            EmbeddingValue::Complex(z) => z.max_width(),
        }
    }
}

/// Construction input: monic integer polynomial (coefficients low to high)
/// and an optional explicit integral basis over the power basis.
#[derive(Debug, Clone)]
pub struct FieldSpec {
    pub poly: Vec<BigInt>,
    pub basis: Option<Vec<Vec<BigRational>>>,
}

impl FieldSpec {
    pub fn from_int_poly(coeffs: &[i64]) -> Self {
        FieldSpec {
            poly: coeffs.iter().map(|&c| BigInt::from(c)).collect(),
            basis: None,
        }
    }
}

struct RootCache {
    bits: u32,
    roots: Vec<RootEnclosure>,
}

/// A number field of degree n with signature (r, s), r + 2s = n.
pub struct NumberField {
    poly: QPoly,
    degree: usize,
    signature: (usize, usize),
    /// Rows: integral basis elements written over the power basis.
    basis: Vec<Vec<BigRational>>,
    basis_inv: Vec<Vec<BigRational>>,
    disc: BigInt,
    power_traces: Vec<BigRational>,
    places: Vec<Place>,
    irreducibility_certified: bool,
    roots: RwLock<RootCache>,
}

impl std::fmt::Debug for NumberField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NumberField")
            .field("degree", &self.degree)
            .field("signature", &self.signature)
            .field("disc", &self.disc)
            .finish()
    }
}

const INITIAL_ROOT_BITS: u32 = 96;

impl NumberField {
    pub fn make(spec: FieldSpec) -> Result<Self> {
        let coeffs: Vec<BigRational> = spec
            .poly
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let poly = QPoly::new(coeffs);
        let n = poly.degree();
        if n < 1 || !poly.is_monic() || !poly.has_integer_coeffs() {
            return Err(Error::NonMonicPolynomial);
        }
        let n = n as usize;
        let irreducibility_certified = poly.check_irreducible_small()?;

        let enclosures = isolate_all_roots(&poly, INITIAL_ROOT_BITS)?;
        let mut places = vec![];
        let mut r = 0usize;
        let mut s = 0usize;
        for e in &enclosures {
            match e {
                RootEnclosure::Real(_) => {
                    r += 1;
                    places.push(Place { kind: PlaceKind::Real });
                }
                RootEnclosure::Complex(_) => {
                    s += 1;
                    places.push(Place { kind: PlaceKind::Complex });
                }
            }
        }
        debug_assert_eq!(r + 2 * s, n);

        let basis = match spec.basis {
            Some(b) => {
                if b.len() != n || b.iter().any(|row| row.len() != n) {
                    return Err(Error::SingularBasis);
                }
                b
            }
            None => crate::matrix::identity_rational(n),
        };
        let basis_inv = inverse_rational(&basis).ok_or(Error::SingularBasis)?;

        let power_traces = power_sums(&poly, 2 * n - 1);

        let mut field = NumberField {
            poly,
            degree: n,
            signature: (r, s),
            basis,
            basis_inv,
            disc: BigInt::zero(),
            power_traces,
            places,
            irreducibility_certified,
            roots: RwLock::new(RootCache {
                bits: INITIAL_ROOT_BITS,
                roots: enclosures,
            }),
        };

        // Closure checks when an explicit basis was supplied.
        if !is_identity(&field.basis) {
            let one = field.from_power(&QPoly::constant(BigRational::one()));
            if !one.coords.iter().all(|c| c.is_integer()) {
                return Err(Error::BasisMissingOne);
            }
            for i in 0..n {
                for j in i..n {
                    let bi = field.basis_element(i);
                    let bj = field.basis_element(j);
                    let prod = field.mul(&bi, &bj);
                    if !prod.coords.iter().all(|c| c.is_integer()) {
                        return Err(Error::BasisNotClosed);
                    }
                }
            }
        }

        // Discriminant: determinant of the trace form on the integral basis.
        let mut trace_form = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            for j in i..n {
                let prod = field.mul(&field.basis_element(i), &field.basis_element(j));
                let t = field.trace(&prod);
                trace_form[i][j] = t.clone();
                trace_form[j][i] = t;
            }
        }
        let disc = det_rational(&trace_form);
        if !disc.is_integer() || disc.is_zero() {
            return Err(Error::BasisNotClosed);
        }
        let expected_negative = s % 2 == 1;
        if disc.is_negative() != expected_negative {
            return Err(Error::RootIsolation);
        }
        field.disc = disc.to_integer();
        Ok(field)
    }

    /// The rational field, presented by the polynomial x.
    pub fn rationals() -> Self {
        Self::make(FieldSpec::from_int_poly(&[0, 1])).expect("Q always constructs")
    }

    /// The Gaussian field Q(i).
    pub fn gaussian() -> Self {
        Self::make(FieldSpec::from_int_poly(&[1, 0, 1])).expect("Q(i) always constructs")
    }

    /// Quadratic field Q(sqrt d) for squarefree d != 0, 1, with the maximal
    /// order basis {1, theta} or {1, (1+theta)/2} when d = 1 mod 4.
    pub fn quadratic(d: i64) -> Result<Self> {
        if d == 0 || d == 1 {
            return Err(Error::Parse("quadratic preset requires d != 0, 1".into()));
        }
        if !is_squarefree(d) {
            return Err(Error::Parse(format!("{d} is not squarefree")));
        }
        let basis = if d.rem_euclid(4) == 1 {
            Some(vec![
                vec![BigRational::one(), BigRational::zero()],
                vec![
                    BigRational::new(BigInt::one(), BigInt::from(2)),
                    BigRational::new(BigInt::one(), BigInt::from(2)),
                ],
            ])
        } else {
            None
        };
        Self::make(FieldSpec {
            poly: vec![BigInt::from(-d), BigInt::zero(), BigInt::one()],
            basis,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.disc
    }

    pub fn defining_poly(&self) -> &QPoly {
        &self.poly
    }

    pub fn places(&self) -> &[Place] {
        &self.places
    }

    pub fn num_places(&self) -> usize {
        self.places.len()
    }

    /// False when the degree exceeded the certified irreducibility range and
    /// the polynomial was accepted on trust.
    pub fn irreducibility_certified(&self) -> bool {
        self.irreducibility_certified
    }

    /// True when the integral basis is the power basis of theta.
    pub fn is_monogenic_presentation(&self) -> bool {
        is_identity(&self.basis)
    }

    pub fn integral_basis(&self) -> &[Vec<BigRational>] {
        &self.basis
    }

    // ----- element constructors -------------------------------------------

    pub fn zero(&self) -> FieldElement {
        FieldElement::new(vec![BigRational::zero(); self.degree])
    }

    pub fn one(&self) -> FieldElement {
        self.from_rational(BigRational::one())
    }

    pub fn from_rational(&self, q: BigRational) -> FieldElement {
        self.from_power(&QPoly::constant(q))
    }

    /// The root theta of the defining polynomial, in integral-basis coords.
    pub fn theta(&self) -> FieldElement {
        self.from_power(&QPoly::x())
    }

    pub fn element(&self, coords: Vec<BigRational>) -> Result<FieldElement> {
        if coords.len() != self.degree {
            return Err(Error::Parse(format!(
                "element needs {} coordinates, got {}",
                self.degree,
                coords.len()
            )));
        }
        Ok(FieldElement::new(coords))
    }

    // ----- coordinate conversions -----------------------------------------

    /// Write an element as a polynomial in theta of degree < n.
    pub fn to_power(&self, a: &FieldElement) -> QPoly {
        QPoly::new(row_times_matrix(&a.coords, &self.basis))
    }

    /// Inverse of `to_power`; the polynomial is reduced mod the defining
    /// polynomial first.
    pub fn from_power(&self, p: &QPoly) -> FieldElement {
        let reduced = if p.degree() >= self.degree as i64 {
            p.divrem(&self.poly).1
        } else {
            p.clone()
        };
        let mut vec = vec![BigRational::zero(); self.degree];
        for (k, c) in reduced.0.iter().enumerate() {
            vec[k] = c.clone();
        }
        FieldElement::new(row_times_matrix(&vec, &self.basis_inv))
    }

    pub fn basis_element(&self, i: usize) -> FieldElement {
        let mut coords = vec![BigRational::zero(); self.degree];
        coords[i] = BigRational::one();
        FieldElement::new(coords)
    }

    /// The exact rational value when the element lies in Q.
    pub fn as_rational(&self, a: &FieldElement) -> Option<BigRational> {
        let p = self.to_power(a);
        if p.degree() <= 0 {
            Some(p.coeff(0))
        } else {
            None
        }
    }

    // ----- arithmetic -------------------------------------------------------

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement::new(
            a.coords
                .iter()
                .zip(&b.coords)
                .map(|(x, y)| x + y)
                .collect(),
        )
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement::new(
            a.coords
                .iter()
                .zip(&b.coords)
                .map(|(x, y)| x - y)
                .collect(),
        )
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        FieldElement::new(a.coords.iter().map(|x| -x.clone()).collect())
    }

    pub fn scale(&self, a: &FieldElement, q: &BigRational) -> FieldElement {
        FieldElement::new(a.coords.iter().map(|x| x * q).collect())
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let pa = self.to_power(a);
        let pb = self.to_power(b);
        self.from_power(&pa.mul(&pb))
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in Q[x].
    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::ZeroInversion);
        }
        let pa = self.to_power(a);
        // Bezout: u*pa + v*poly = gcd = constant (poly irreducible).
        let (g, u, _) = extended_gcd(&pa, &self.poly);
        debug_assert_eq!(g.degree(), 0);
        let c = g.coeff(0);
        Ok(self.from_power(&u.scale(&c.recip())))
    }

    /// Field norm N(a) as an exact rational, via the resultant with the
    /// defining polynomial.
    pub fn norm(&self, a: &FieldElement) -> BigRational {
        let pa = self.to_power(a);
        if pa.is_zero() {
            return BigRational::zero();
        }
        self.poly.resultant(&pa)
    }

    /// Field trace Tr(a) as an exact rational, from precomputed power sums.
    pub fn trace(&self, a: &FieldElement) -> BigRational {
        let pa = self.to_power(a);
        let mut t = BigRational::zero();
        for (k, c) in pa.0.iter().enumerate() {
            t += c * &self.power_traces[k];
        }
        t
    }

    // ----- archimedean embeddings -------------------------------------------

    fn roots_at(&self, bits: u32) -> Result<Vec<RootEnclosure>> {
        {
            let cache = self.roots.read().unwrap();
            if cache.bits >= bits {
                return Ok(cache.roots.clone());
            }
        }
        let mut cache = self.roots.write().unwrap();
        if cache.bits < bits {
            let refined: Vec<RootEnclosure> = cache
                .roots
                .iter()
                .map(|e| match e {
                    RootEnclosure::Real(iv) => {
                        refine_real_root(&self.poly, iv, bits, DEFAULT_PRECISION_CAP_BITS)
                            .map(RootEnclosure::Real)
                    }
                    RootEnclosure::Complex(z) => {
                        refine_complex_root(&self.poly, z, bits, DEFAULT_PRECISION_CAP_BITS)
                            .map(RootEnclosure::Complex)
                    }
                })
                .collect::<Result<_>>()?;
            cache.roots = refined;
            cache.bits = bits;
        }
        Ok(cache.roots.clone())
    }

    /// Embedding of `a` at one place, as an enclosure of width at most
    /// 2^-precision_bits.
    pub fn embed_at(
        &self,
        a: &FieldElement,
        place_index: usize,
        precision_bits: u32,
    ) -> Result<EmbeddingValue> {
        let pa = self.to_power(a);
        let mut bits = precision_bits.saturating_add(8);
        loop {
            let roots = self.roots_at(bits)?;
            let value = match &roots[place_index] {
                RootEnclosure::Real(iv) => EmbeddingValue::Real(pa.eval_interval(iv)),
                RootEnclosure::Complex(z) => EmbeddingValue::Complex(pa.eval_complex(z)),
            };
            if value.max_width() <= crate::rat::pow2_inv(precision_bits) {
                return Ok(value);
            }
            if bits >= DEFAULT_PRECISION_CAP_BITS {
                return Err(Error::PrecisionExceeded {
                    cap_bits: DEFAULT_PRECISION_CAP_BITS,
                });
            }
            bits = (bits * 2).min(DEFAULT_PRECISION_CAP_BITS);
        }
    }

    /// All archimedean embeddings of `a` at the requested precision.
    ///
    /// Precision below 16 bits is rejected; complex places report the root
    /// with positive imaginary part.
    pub fn embed(&self, a: &FieldElement, precision_bits: u32) -> Result<Vec<EmbeddingValue>> {
        if precision_bits < 16 {
            return Err(Error::Parse("embedding precision must be >= 16 bits".into()));
        }
        (0..self.places.len())
            .map(|v| self.embed_at(a, v, precision_bits))
            .collect()
    }

    /// Exact sign of the real embedding of a nonzero element; `Equal` only
    /// for the zero element (embeddings are injective).
    pub fn sign_at_real_place(&self, a: &FieldElement, place_index: usize) -> Result<Ordering> {
        assert!(matches!(self.places[place_index].kind, PlaceKind::Real));
        if a.is_zero() {
            return Ok(Ordering::Equal);
        }
        // Quadratic fields: decide sign(A + B sqrt(D)) by rational arithmetic.
        if self.degree == 2 && self.signature == (2, 0) {
            let pa = self.to_power(a);
            let b1 = self.poly.coeff(1);
            let disc = &b1 * &b1 - rat_int(4) * self.poly.coeff(0);
            let a0 = pa.coeff(0) - pa.coeff(1) * &b1 / rat_int(2);
            let b0 = pa.coeff(1) / rat_int(2);
            // Roots ascend: place 0 gets -sqrt(disc), place 1 gets +sqrt(disc).
            let b0 = if place_index == 0 { -b0 } else { b0 };
            return Ok(sign_a_plus_b_sqrt(&a0, &b0, &disc));
        }
        let mut bits = 32u32;
        loop {
            match self.embed_at(a, place_index, bits)? {
                EmbeddingValue::Real(iv) => {
                    if let Some(sign) = iv.sign() {
                        return Ok(sign);
                    }
                }
                EmbeddingValue::Complex(_) => unreachable!(),
            }
            if bits >= DEFAULT_PRECISION_CAP_BITS {
                return Err(Error::PrecisionExceeded {
                    cap_bits: DEFAULT_PRECISION_CAP_BITS,
                });
            }
            bits = (bits * 2).min(DEFAULT_PRECISION_CAP_BITS);
        }
    }

    // ----- the different ----------------------------------------------------

    /// Generator p'(theta) of the different ideal for power-basis
    /// presentations.
    pub fn different_generator(&self) -> Result<FieldElement> {
        if !self.is_monogenic_presentation() {
            return Err(Error::NonMonogenic);
        }
        Ok(self.from_power(&self.poly.derivative()))
    }
}

fn is_identity(m: &[Vec<BigRational>]) -> bool {
    m.iter().enumerate().all(|(i, row)| {
        row.iter()
            .enumerate()
            .all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
    })
}

fn is_squarefree(d: i64) -> bool {
    let mut m = d.unsigned_abs();
    let mut p = 2u64;
    while p * p <= m {
        if m % (p * p) == 0 {
            return false;
        }
        while m % p == 0 {
            m /= p;
        }
        p += 1;
    }
    true
}

/// Power sums s_k = sum of k-th powers of the roots, k = 0..=max_k, by
/// Newton's identities.
fn power_sums(poly: &QPoly, max_k: usize) -> Vec<BigRational> {
    let n = poly.degree() as usize;
    // c[i] = coefficient of x^i, monic: c[n] = 1.
    let c = |i: usize| poly.coeff(i);
    let mut s = vec![BigRational::zero(); max_k + 1];
    s[0] = rat_int(n as i64);
    for k in 1..=max_k {
        let mut acc = BigRational::zero();
        if k <= n {
            acc -= rat_int(k as i64) * c(n - k);
            for i in 1..k {
                let term = c(n - i) * &s[k - i];
                acc -= term;
            }
        } else {
            for i in 1..=n {
                let term = c(n - i) * &s[k - i];
                acc -= term;
            }
        }
        s[k] = acc;
    }
    s
}

/// Extended Euclid over Q[x]: returns (g, u, v) with u*a + v*b = g.
fn extended_gcd(a: &QPoly, b: &QPoly) -> (QPoly, QPoly, QPoly) {
    let mut r0 = a.clone();
    let mut r1 = b.clone();
    let mut u0 = QPoly::constant(BigRational::one());
    let mut u1 = QPoly::zero();
    let mut v0 = QPoly::zero();
    let mut v1 = QPoly::constant(BigRational::one());
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1);
        let nu = u0.sub(&q.mul(&u1));
        let nv = v0.sub(&q.mul(&v1));
        r0 = r1;
        r1 = r;
        u0 = u1;
        u1 = nu;
        v0 = v1;
        v1 = nv;
    }
    (r0, u0, v0)
}

/// Exact sign of A + B*sqrt(D) for rational A, B and positive nonsquare D.
fn sign_a_plus_b_sqrt(a: &BigRational, b: &BigRational, d: &BigRational) -> Ordering {
    debug_assert!(d.is_positive());
    if b.is_zero() {
        return a.cmp(&BigRational::zero());
    }
    if a.is_zero() {
        return b.cmp(&BigRational::zero());
    }
    match (a.is_positive(), b.is_positive()) {
        (true, true) => Ordering::Greater,
        (false, false) => Ordering::Less,
        (true, false) => {
            // A > 0 > B sqrt(D): sign of A^2 - B^2 D.
            (a * a).cmp(&(b * b * d))
        }
        (false, true) => (b * b * d).cmp(&(a * a)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn rational_field_invariants() {
        let q = NumberField::rationals();
        assert_eq!(q.degree(), 1);
        assert_eq!(q.signature(), (1, 0));
        assert_eq!(q.discriminant(), &BigInt::one());
    }

    #[test]
    fn gaussian_field_invariants() {
        let f = NumberField::gaussian();
        assert_eq!(f.degree(), 2);
        assert_eq!(f.signature(), (0, 1));
        assert_eq!(f.discriminant(), &BigInt::from(-4));
        assert_eq!(f.places()[0].fv(), 2);
    }

    #[test]
    fn quadratic_presets_discriminants() {
        // Trace-form oracle: disc of Q(sqrt 2) with power basis is 8.
        let f = NumberField::quadratic(2).unwrap();
        assert_eq!(f.signature(), (2, 0));
        assert_eq!(f.discriminant(), &BigInt::from(8));
        // d = 5 = 1 mod 4 selects the half-integer basis: disc 5.
        let f = NumberField::quadratic(5).unwrap();
        assert_eq!(f.discriminant(), &BigInt::from(5));
        // d = -1 gives Q(i).
        let f = NumberField::quadratic(-1).unwrap();
        assert_eq!(f.discriminant(), &BigInt::from(-4));
        assert!(NumberField::quadratic(12).is_err()); // not squarefree
    }

    #[test]
    fn explicit_basis_closure_is_checked() {
        // {1, theta/2} is not closed under multiplication for x^2 - 2.
        let bad = FieldSpec {
            poly: vec![BigInt::from(-2), BigInt::zero(), BigInt::one()],
            basis: Some(vec![
                vec![BigRational::one(), BigRational::zero()],
                vec![BigRational::zero(), rat(1, 2)],
            ]),
        };
        assert!(matches!(
            NumberField::make(bad),
            Err(Error::BasisNotClosed)
        ));
    }

    #[test]
    fn arithmetic_in_gaussian_field() {
        let f = NumberField::gaussian();
        let one = f.one();
        let theta = f.theta();
        // (1 + i)(1 - i) = 2
        let a = f.add(&one, &theta);
        let b = f.sub(&one, &theta);
        let prod = f.mul(&a, &b);
        assert_eq!(f.as_rational(&prod).unwrap(), rat_int(2));
        assert_eq!(f.norm(&a), rat_int(2));
        // i^-1 = -i
        let inv = f.inv(&theta).unwrap();
        assert_eq!(inv, f.neg(&theta));
        assert!(f.inv(&f.zero()).is_err());
    }

    #[test]
    fn inverse_in_real_quadratic() {
        let f = NumberField::quadratic(2).unwrap();
        let theta = f.theta();
        let inv = f.inv(&theta).unwrap();
        // 1/sqrt(2) = sqrt(2)/2
        assert_eq!(inv, f.scale(&theta, &rat(1, 2)));
        let prod = f.mul(&theta, &inv);
        assert_eq!(prod, f.one());
    }

    #[test]
    fn norm_is_multiplicative() {
        let f = NumberField::quadratic(5).unwrap();
        let a = f.element(vec![rat_int(3), rat_int(2)]).unwrap();
        let b = f.element(vec![rat(1, 2), rat_int(-1)]).unwrap();
        let lhs = f.norm(&f.mul(&a, &b));
        let rhs = f.norm(&a) * f.norm(&b);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn embeddings_match_known_values() {
        let f = NumberField::quadratic(2).unwrap();
        let theta = f.theta();
        let em = f.embed(&theta, 40).unwrap();
        match (&em[0], &em[1]) {
            (EmbeddingValue::Real(a), EmbeddingValue::Real(b)) => {
                assert!((a.mid_f64() + std::f64::consts::SQRT_2).abs() < 1e-9);
                assert!((b.mid_f64() - std::f64::consts::SQRT_2).abs() < 1e-9);
            }
            _ => panic!("expected real places"),
        }
        let f = NumberField::gaussian();
        let em = f.embed(&f.theta(), 40).unwrap();
        match &em[0] {
            EmbeddingValue::Complex(z) => {
                assert!(z.re.contains(&BigRational::zero()));
                assert!(z.im.contains(&BigRational::one()));
            }
            _ => panic!("expected complex place"),
        }
        // 1 embeds as 1 everywhere.
        let em = f.embed(&f.one(), 40).unwrap();
        match &em[0] {
            EmbeddingValue::Complex(z) => {
                assert!(z.re.contains(&BigRational::one()));
                assert!(z.im.contains(&BigRational::zero()));
            }
            _ => panic!(),
        }
    }

    #[test]
    fn product_of_embedding_moduli_matches_norm() {
        let f = NumberField::make(FieldSpec::from_int_poly(&[-2, 0, 0, 1])).unwrap(); // x^3-2
        let a = f.element(vec![rat_int(1), rat_int(1), rat_int(-1)]).unwrap();
        let em = f.embed(&a, 80).unwrap();
        let mut prod = RatInterval::from_int(1);
        for (v, e) in em.iter().enumerate() {
            let sq = e.abs_sq();
            prod = prod.mul(&match f.places()[v].kind {
                PlaceKind::Real => sq,
                PlaceKind::Complex => sq.clone(),
            });
        }
        // prod encloses |N(a)|^2 (real places contribute |.|^2, complex |.|^2
        // per conjugate pair twice via norm_sq of one representative...).
        // For signature (1,1): |N| = |sigma_r| * |sigma_c|^2, so
        // prod = |sigma_r|^2 * |sigma_c|^4 / |sigma_c|^2 -- assemble directly:
        let norm = f.norm(&a).abs();
        let mut target = RatInterval::point(norm.clone());
        target = target.square();
        // |sigma_r(a)|^2 * (|sigma_c(a)|^2)^2 = N^2
        let mut lhs = RatInterval::from_int(1);
        for (v, e) in em.iter().enumerate() {
            let sq = e.abs_sq();
            match f.places()[v].kind {
                PlaceKind::Real => lhs = lhs.mul(&sq),
                PlaceKind::Complex => lhs = lhs.mul(&sq.square()),
            }
        }
        assert!(lhs.overlaps(&target), "lhs {:?} target {:?}", lhs, target);
        let _ = prod;
    }

    #[test]
    fn sign_at_real_place_quadratic_shortcut() {
        let f = NumberField::quadratic(2).unwrap();
        let theta = f.theta();
        assert_eq!(f.sign_at_real_place(&theta, 0).unwrap(), Ordering::Less);
        assert_eq!(f.sign_at_real_place(&theta, 1).unwrap(), Ordering::Greater);
        // 3 - 2 sqrt2 > 0 at the positive branch (3 > 2.828), negative-branch
        // value 3 + 2 sqrt 2 > 0.
        let a = f.element(vec![rat_int(3), rat_int(-2)]).unwrap();
        assert_eq!(f.sign_at_real_place(&a, 1).unwrap(), Ordering::Greater);
        assert_eq!(f.sign_at_real_place(&a, 0).unwrap(), Ordering::Greater);
        // 1 - sqrt2 < 0 at the positive branch.
        let b = f.element(vec![rat_int(1), rat_int(-1)]).unwrap();
        assert_eq!(f.sign_at_real_place(&b, 1).unwrap(), Ordering::Less);
        assert_eq!(f.sign_at_real_place(&f.zero(), 0).unwrap(), Ordering::Equal);
    }

    #[test]
    fn different_generator_and_norm() {
        let f = NumberField::gaussian();
        let d = f.different_generator().unwrap();
        // f'(theta) = 2 theta, norm 4 = |disc|.
        assert_eq!(f.norm(&d).abs(), rat_int(4));
        let f = NumberField::quadratic(2).unwrap();
        let d = f.different_generator().unwrap();
        assert_eq!(f.norm(&d).abs(), rat_int(8));
        // Non-monogenic presentation errors.
        let f = NumberField::quadratic(5).unwrap();
        assert!(matches!(f.different_generator(), Err(Error::NonMonogenic)));
    }

    #[test]
    fn trace_and_power_sums() {
        let f = NumberField::quadratic(5).unwrap();
        // Basis {1, (1+theta)/2}: traces 2 and 1.
        assert_eq!(f.trace(&f.basis_element(0)), rat_int(2));
        assert_eq!(f.trace(&f.basis_element(1)), rat_int(1));
    }
}
