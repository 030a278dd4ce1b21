//! Fractional ideals in canonical Hermite Normal Form, replete ideals, and
//! idele presentations.
//!
//! A fractional ideal is stored as an integer HNF basis over the integral
//! basis together with a minimal positive denominator, so equality of ideals
//! is equality of representations. Replete ideals attach a positive
//! archimedean component per place; components produced by scaling with a
//! field element gamma are kept exact as (rational) * |sigma_v(gamma)|, with
//! gamma stored as the "twist", so norms and membership stay exactly
//! decidable.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{FieldElement, NumberField};
use crate::matrix::hnf;
use crate::rat::rat_int;

/// A fractional ideal: rows of `num` are a Z-basis (in integral-basis
/// coordinates) of `den` times the ideal, in canonical HNF.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FracIdeal {
    num: Vec<Vec<BigInt>>,
    den: BigInt,
}

impl FracIdeal {
    /// The ring of integers itself.
    pub fn unit_ideal(field: &NumberField) -> Self {
        let n = field.degree();
        let num = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        FracIdeal {
            num,
            den: BigInt::one(),
        }
    }

    /// O_K-module generated by the given elements.
    pub fn from_generators(field: &NumberField, gens: &[FieldElement]) -> Result<Self> {
        let nonzero: Vec<&FieldElement> = gens.iter().filter(|g| !g.is_zero()).collect();
        if nonzero.is_empty() {
            return Err(Error::AllGeneratorsZero);
        }
        let n = field.degree();
        let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(nonzero.len() * n);
        for g in nonzero {
            for i in 0..n {
                let prod = field.mul(g, &field.basis_element(i));
                rows.push(prod.coords);
            }
        }
        Self::from_rational_rows(field, rows)
    }

    /// Principal ideal (g).
    pub fn principal(field: &NumberField, g: &FieldElement) -> Result<Self> {
        Self::from_generators(field, std::slice::from_ref(g))
    }

    /// Canonicalize a rational row-spanned lattice that is already an
    /// O_K-module.
    fn from_rational_rows(field: &NumberField, rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let n = field.degree();
        // Common denominator.
        let mut den = BigInt::one();
        for row in &rows {
            for x in row {
                den = den.lcm(x.denom());
            }
        }
        let int_rows: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| (x * BigRational::from_integer(den.clone())).to_integer())
                    .collect()
            })
            .collect();
        let h = hnf(&int_rows);
        if h.len() != n {
            return Err(Error::AllGeneratorsZero);
        }
        Ok(Self::reduce(h, den))
    }

    /// Divide out the gcd of the matrix content and the denominator so the
    /// denominator is minimal, then keep HNF shape (scalar division preserves
    /// it).
    fn reduce(num: Vec<Vec<BigInt>>, den: BigInt) -> Self {
        let mut g = den.clone();
        for row in &num {
            for x in row {
                g = g.gcd(x);
                if g.is_one() {
                    return FracIdeal { num, den };
                }
            }
        }
        let num = num
            .into_iter()
            .map(|row| row.into_iter().map(|x| x / &g).collect())
            .collect();
        FracIdeal { num, den: den / g }
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn numerator_rows(&self) -> &[Vec<BigInt>] {
        &self.num
    }

    /// Z-basis of the ideal as field elements (rows divided by the
    /// denominator).
    pub fn basis_elements(&self) -> Vec<FieldElement> {
        let den = BigRational::from_integer(self.den.clone());
        self.num
            .iter()
            .map(|row| {
                FieldElement::new(
                    row.iter()
                        .map(|x| BigRational::from_integer(x.clone()) / &den)
                        .collect(),
                )
            })
            .collect()
    }

    /// Absolute norm: |det(num)| / den^n, exact.
    pub fn norm(&self, field: &NumberField) -> BigRational {
        let n = field.degree();
        let mut det = BigInt::one();
        for (i, row) in self.num.iter().enumerate() {
            det *= &row[i];
        }
        BigRational::new(det.abs(), self.den.pow(n as u32))
    }

    pub fn mul(&self, field: &NumberField, other: &Self) -> Self {
        let a = self.basis_elements();
        let b = other.basis_elements();
        let mut rows = Vec::with_capacity(a.len() * b.len());
        for x in &a {
            for y in &b {
                rows.push(field.mul(x, y).coords);
            }
        }
        Self::from_rational_rows(field, rows).expect("product of nonzero ideals is nonzero")
    }

    /// Multiply by the principal ideal (g).
    pub fn mul_element(&self, field: &NumberField, g: &FieldElement) -> Result<Self> {
        if g.is_zero() {
            return Err(Error::ZeroInversion);
        }
        let rows = self
            .basis_elements()
            .iter()
            .map(|x| field.mul(x, g).coords)
            .collect();
        Self::from_rational_rows(field, rows)
    }

    /// Ideal inverse (O_K : a) = { x : x a is integral }, computed through
    /// dual lattices: the dual of an intersection is the sum of the duals.
    pub fn inv(&self, field: &NumberField) -> Self {
        let n = field.degree();
        // For each basis element g of the ideal, x*g integral means
        // coords(x) * R_g is integral, where R_g is the regular
        // representation matrix (row k: coords of basis_k * g).
        // That lattice is Z^n * R_g^{-1}, whose dual has basis rows R_g^T.
        let mut dual_rows: Vec<Vec<BigRational>> = vec![];
        for g in self.basis_elements() {
            let mut rep: Vec<Vec<BigRational>> = Vec::with_capacity(n);
            for k in 0..n {
                rep.push(field.mul(&field.basis_element(k), &g).coords);
            }
            let rep_t = crate::matrix::transpose_rational(&rep);
            dual_rows.extend(rep_t);
        }
        // HNF of the dual sum, then dualize back: basis (H^{-1})^T.
        let dual = Self::from_rational_rows(field, dual_rows)
            .expect("dual lattice of a nonzero ideal is nonzero");
        let dual_basis: Vec<Vec<BigRational>> = dual
            .basis_elements()
            .into_iter()
            .map(|e| e.coords)
            .collect();
        let inv = crate::matrix::inverse_rational(&dual_basis).expect("full-rank lattice");
        let rows = crate::matrix::transpose_rational(&inv);
        Self::from_rational_rows(field, rows).expect("inverse ideal is nonzero")
    }

    /// Integer power; negative exponents go through the inverse.
    pub fn pow(&self, field: &NumberField, e: i64) -> Self {
        if e == 0 {
            return Self::unit_ideal(field);
        }
        let base = if e < 0 { self.inv(field) } else { self.clone() };
        let mut acc = Self::unit_ideal(field);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(field, &base);
        }
        acc
    }

    /// Exact membership of a field element in the lattice.
    pub fn contains(&self, field: &NumberField, a: &FieldElement) -> bool {
        let n = field.degree();
        // Solve c * num = a.coords * den by back substitution (num is upper
        // triangular with positive diagonal); membership needs integer c.
        let target: Vec<BigRational> = a
            .coords
            .iter()
            .map(|x| x * BigRational::from_integer(self.den.clone()))
            .collect();
        let mut c = vec![BigRational::zero(); n];
        for j in 0..n {
            let mut acc = target[j].clone();
            for i in 0..j {
                acc -= &c[i] * BigRational::from_integer(self.num[i][j].clone());
            }
            let diag = BigRational::from_integer(self.num[j][j].clone());
            let q = acc / diag;
            if !q.is_integer() {
                return false;
            }
            c[j] = q;
        }
        true
    }
}

/// A replete ideal: finite part plus one positive archimedean component per
/// place. Component v equals `arch[v] * |sigma_v(twist)|`; the twist is 1
/// unless the ideal was scaled by a principal element, keeping such scalings
/// exact.
#[derive(Debug, Clone)]
pub struct RepleteIdeal {
    pub finite: FracIdeal,
    arch: Vec<BigRational>,
    twist: FieldElement,
}

impl RepleteIdeal {
    pub fn new(field: &NumberField, finite: FracIdeal, arch: Vec<BigRational>) -> Result<Self> {
        if arch.len() != field.num_places() {
            return Err(Error::PlaceCountMismatch {
                got: arch.len(),
                expected: field.num_places(),
            });
        }
        if arch.iter().any(|q| !q.is_positive()) {
            return Err(Error::NonPositiveBound);
        }
        Ok(RepleteIdeal {
            finite,
            arch,
            twist: field.one(),
        })
    }

    pub fn arch_rational_parts(&self) -> &[BigRational] {
        &self.arch
    }

    pub fn twist(&self) -> &FieldElement {
        &self.twist
    }

    pub fn has_trivial_twist(&self, field: &NumberField) -> bool {
        self.twist == field.one()
    }

    /// Replete norm N(a_fin) * prod_v n_v^{f_v}, exact: the twist contributes
    /// |N(twist)| since prod_v |sigma_v(g)|^{f_v} = |N(g)|.
    pub fn norm(&self, field: &NumberField) -> BigRational {
        let mut out = self.finite.norm(field);
        for (v, q) in self.arch.iter().enumerate() {
            out *= q.pow(field.places()[v].fv() as i32);
        }
        out * field.norm(&self.twist).abs()
    }

    /// Inverse: finite part inverted, each archimedean component
    /// reciprocated.
    pub fn inv(&self, field: &NumberField) -> Result<Self> {
        Ok(RepleteIdeal {
            finite: self.finite.inv(field),
            arch: self.arch.iter().map(|q| q.recip()).collect(),
            twist: field.inv(&self.twist)?,
        })
    }

    /// Multiply every archimedean component by t > 0, leaving the finite part
    /// untouched (the idele t with trivial finite components).
    pub fn scale_arch(&self, t: &BigRational) -> Result<Self> {
        if !t.is_positive() {
            return Err(Error::NonPositiveBound);
        }
        Ok(RepleteIdeal {
            finite: self.finite.clone(),
            arch: self.arch.iter().map(|q| q * t).collect(),
            twist: self.twist.clone(),
        })
    }

    /// Replace the finite part by its e-th power, keeping the archimedean
    /// data (finite-part schedule steps in scan families).
    pub fn pow_finite(&self, field: &NumberField, e: i64) -> Self {
        RepleteIdeal {
            finite: self.finite.pow(field, e),
            arch: self.arch.clone(),
            twist: self.twist.clone(),
        }
    }

    /// Multiply by the principal replete ideal of gamma: finite part times
    /// (gamma), archimedean components times |sigma_v(gamma)|.
    pub fn mul_principal(&self, field: &NumberField, gamma: &FieldElement) -> Result<Self> {
        if gamma.is_zero() {
            return Err(Error::ZeroInversion);
        }
        Ok(RepleteIdeal {
            finite: self.finite.mul_element(field, gamma)?,
            arch: self.arch.clone(),
            twist: field.mul(&self.twist, gamma),
        })
    }
}

/// An idele given as a finite edit list against the everywhere-trivial
/// idele: finitely many (ideal, valuation) pairs plus archimedean absolute
/// values |x_v| = arch[v] * |sigma_v(arch_twist)|.
#[derive(Debug, Clone)]
pub struct IdelePresentation {
    pub finite: Vec<(FracIdeal, i64)>,
    arch: Vec<BigRational>,
    arch_twist: FieldElement,
}

impl IdelePresentation {
    pub fn new(
        field: &NumberField,
        finite: Vec<(FracIdeal, i64)>,
        arch: Vec<BigRational>,
    ) -> Result<Self> {
        if arch.len() != field.num_places() {
            return Err(Error::PlaceCountMismatch {
                got: arch.len(),
                expected: field.num_places(),
            });
        }
        if arch.iter().any(|q| !q.is_positive()) {
            return Err(Error::NonPositiveBound);
        }
        Ok(IdelePresentation {
            finite,
            arch,
            arch_twist: field.one(),
        })
    }

    /// The trivial idele.
    pub fn trivial(field: &NumberField) -> Self {
        IdelePresentation {
            finite: vec![],
            arch: vec![BigRational::one(); field.num_places()],
            arch_twist: field.one(),
        }
    }

    pub fn arch_rational_parts(&self) -> &[BigRational] {
        &self.arch
    }

    pub fn arch_twist(&self) -> &FieldElement {
        &self.arch_twist
    }

    /// Idele norm ||x||: finite places contribute N(I)^{-e} per edit, the
    /// archimedean places |x_v|^{f_v}.
    pub fn norm(&self, field: &NumberField) -> BigRational {
        let mut out = BigRational::one();
        for (ideal, e) in &self.finite {
            out *= ideal.norm(field).pow(-(*e as i32));
        }
        for (v, q) in self.arch.iter().enumerate() {
            out *= q.pow(field.places()[v].fv() as i32);
        }
        out * field.norm(&self.arch_twist).abs()
    }

    /// The replete ideal of the idele: finite part prod I^{-e}, archimedean
    /// part (|x_v|); its replete norm equals the idele norm exactly.
    pub fn to_replete(&self, field: &NumberField) -> RepleteIdeal {
        let mut finite = FracIdeal::unit_ideal(field);
        for (ideal, e) in &self.finite {
            finite = finite.mul(field, &ideal.pow(field, -*e));
        }
        RepleteIdeal {
            finite,
            arch: self.arch.clone(),
            twist: self.arch_twist.clone(),
        }
    }

    /// A presentation mapping back to the given replete ideal; the round
    /// trip through `to_replete` is the identity on representations.
    pub fn from_replete(a: &RepleteIdeal) -> Self {
        IdelePresentation {
            finite: vec![(a.finite.clone(), -1)],
            arch: a.arch.clone(),
            arch_twist: a.twist.clone(),
        }
    }

    /// Multiply the idele by the principal idele of gamma: one finite edit
    /// with valuation +1 at (gamma), and |gamma|_v at each archimedean place.
    pub fn mul_principal(&self, field: &NumberField, gamma: &FieldElement) -> Result<Self> {
        if gamma.is_zero() {
            return Err(Error::ZeroInversion);
        }
        let mut finite = self.finite.clone();
        finite.push((FracIdeal::principal(field, gamma)?, 1));
        Ok(IdelePresentation {
            finite,
            arch: self.arch.clone(),
            arch_twist: field.mul(&self.arch_twist, gamma),
        })
    }
}

/// The different ideal (p'(theta)) of a power-basis presentation; its norm
/// equals |disc| for maximal monogenic orders.
pub fn different_ideal(field: &NumberField) -> Result<FracIdeal> {
    FracIdeal::principal(field, &field.different_generator()?)
}

/// Replete ideal over Q from plain integers, for tests and examples.
pub fn integer_replete(field: &NumberField, k: i64) -> Result<RepleteIdeal> {
    RepleteIdeal::new(
        field,
        FracIdeal::unit_ideal(field),
        vec![rat_int(k); field.num_places()],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn gauss() -> NumberField {
        NumberField::gaussian()
    }

    fn elem(f: &NumberField, coords: &[i64]) -> FieldElement {
        FieldElement::new(coords.iter().map(|&c| rat_int(c)).collect())
    }

    #[test]
    fn hnf_of_principal_gaussian_ideal() {
        let f = gauss();
        // (1+i): HNF rows {(1,1),(0,2)}.
        let a = FracIdeal::principal(&f, &elem(&f, &[1, 1])).unwrap();
        assert_eq!(a.denominator(), &BigInt::one());
        assert_eq!(
            a.numerator_rows(),
            &[
                vec![BigInt::from(1), BigInt::from(1)],
                vec![BigInt::from(0), BigInt::from(2)]
            ]
        );
        assert_eq!(a.norm(&f), rat_int(2));
        // (2): scalar ideal.
        let two = FracIdeal::principal(&f, &elem(&f, &[2, 0])).unwrap();
        assert_eq!(
            two.numerator_rows(),
            &[
                vec![BigInt::from(2), BigInt::from(0)],
                vec![BigInt::from(0), BigInt::from(2)]
            ]
        );
    }

    #[test]
    fn fractional_ideal_over_q() {
        let f = NumberField::rationals();
        let half = FracIdeal::principal(&f, &FieldElement::new(vec![rat(1, 2)])).unwrap();
        assert_eq!(half.denominator(), &BigInt::from(2));
        assert_eq!(half.numerator_rows(), &[vec![BigInt::one()]]);
        assert_eq!(half.norm(&f), rat(1, 2));
    }

    #[test]
    fn product_and_inverse() {
        let f = gauss();
        let a = FracIdeal::principal(&f, &elem(&f, &[1, 1])).unwrap();
        let b = FracIdeal::principal(&f, &elem(&f, &[1, -1])).unwrap();
        let two = FracIdeal::principal(&f, &elem(&f, &[2, 0])).unwrap();
        assert_eq!(a.mul(&f, &b), two);
        let inv = a.inv(&f);
        assert_eq!(a.mul(&f, &inv), FracIdeal::unit_ideal(&f));
        assert_eq!(inv.norm(&f), rat(1, 2));
    }

    #[test]
    fn norm_multiplicativity() {
        let f = NumberField::quadratic(2).unwrap();
        let a = FracIdeal::principal(&f, &elem(&f, &[3, 1])).unwrap();
        let b = FracIdeal::from_generators(&f, &[elem(&f, &[2, 0]), elem(&f, &[0, 1])]).unwrap();
        assert_eq!(a.mul(&f, &b).norm(&f), a.norm(&f) * b.norm(&f));
    }

    #[test]
    fn containment() {
        let f = gauss();
        let a = FracIdeal::principal(&f, &elem(&f, &[1, 1])).unwrap();
        assert!(a.contains(&f, &elem(&f, &[2, 0])));
        assert!(a.contains(&f, &elem(&f, &[1, 1])));
        assert!(!a.contains(&f, &elem(&f, &[1, 0])));
        assert!(a.contains(&f, &f.zero()));
    }

    #[test]
    fn replete_norms() {
        let f = gauss();
        // O x (2): f_v = 2 at the complex place, norm 4.
        let a = RepleteIdeal::new(&f, FracIdeal::unit_ideal(&f), vec![rat_int(2)]).unwrap();
        assert_eq!(a.norm(&f), rat_int(4));
        // (1+i)^{-1} x (5): finite norm 1/2, times 25.
        let fin = FracIdeal::principal(&f, &elem(&f, &[1, 1])).unwrap().inv(&f);
        let b = RepleteIdeal::new(&f, fin, vec![rat_int(5)]).unwrap();
        assert_eq!(b.norm(&f), rat(25, 2));
        // Q: Z x (3) has norm 3, inverse norm 1/3.
        let q = NumberField::rationals();
        let c = integer_replete(&q, 3).unwrap();
        assert_eq!(c.norm(&q), rat_int(3));
        assert_eq!(c.inv(&q).unwrap().norm(&q), rat(1, 3));
    }

    #[test]
    fn replete_scale_and_principal() {
        let f = gauss();
        let a = RepleteIdeal::new(&f, FracIdeal::unit_ideal(&f), vec![rat_int(3)]).unwrap();
        let scaled = a.scale_arch(&rat_int(2)).unwrap();
        assert_eq!(scaled.norm(&f), rat_int(36));
        // Multiplying O x (1) by (1+i): norm = N(1+i) * |1+i|^2 = 2 * 2 = 4.
        let unit = RepleteIdeal::new(&f, FracIdeal::unit_ideal(&f), vec![rat_int(1)]).unwrap();
        let m = unit.mul_principal(&f, &elem(&f, &[1, 1])).unwrap();
        assert_eq!(m.norm(&f), rat_int(4));
        // Inverse of a twisted ideal inverts the norm exactly.
        assert_eq!(m.inv(&f).unwrap().norm(&f), rat(1, 4));
    }

    #[test]
    fn idele_to_replete_norm_identity() {
        let q = NumberField::rationals();
        // v_2(x) = 2, x_inf = 3: replete ideal (1/4)Z x (3), norm 3/4.
        let two = FracIdeal::principal(&q, &FieldElement::new(vec![rat_int(2)])).unwrap();
        let x = IdelePresentation::new(&q, vec![(two, 2)], vec![rat_int(3)]).unwrap();
        assert_eq!(x.norm(&q), rat(3, 4));
        let a = x.to_replete(&q);
        assert_eq!(a.norm(&q), rat(3, 4));
        assert_eq!(a.finite.denominator(), &BigInt::from(4));

        // Trivial idele.
        let f = gauss();
        let t = IdelePresentation::trivial(&f);
        assert_eq!(t.norm(&f), rat_int(1));
        assert_eq!(t.to_replete(&f).norm(&f), rat_int(1));
    }

    #[test]
    fn replete_idele_roundtrip() {
        let f = gauss();
        let fin = FracIdeal::principal(&f, &elem(&f, &[2, 1])).unwrap();
        let a = RepleteIdeal::new(&f, fin, vec![rat(7, 3)]).unwrap();
        let x = IdelePresentation::from_replete(&a);
        let back = x.to_replete(&f);
        assert_eq!(back.finite, a.finite);
        assert_eq!(back.arch_rational_parts(), a.arch_rational_parts());
        assert_eq!(back.twist(), a.twist());
        assert_eq!(x.norm(&f), a.norm(&f));
    }
}
