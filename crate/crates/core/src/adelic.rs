//! Self-dual volume identities, Gaussian-ideal test functions, theta sums
//! with rigorous truncation tails, the Poisson summation (Tate) check, and
//! Minkowski growth / surface area estimation for archimedean regions.
//!
//! Conventions. Real places pair through exp(2 pi i x y) with Lebesgue
//! measure; complex places pair through exp(2 pi i Tr(z w)) = exp(4 pi i
//! Re(z w)) with twice the Lebesgue measure. Under these choices
//! exp(-pi x^2) and exp(-2 pi |z|^2) are self-dual, the finite part of a
//! fractional ideal b has volume N(b)^{-1} |disc|^{-1/2}, and the indicator
//! of b transforms to that volume times the indicator of b^{-1} d^{-1}
//! (d the different). The closed-form tables are validated against direct
//! numerical quadrature before use.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{NumberField, PlaceKind};
use crate::ideal::{FracIdeal, IdelePresentation};
use crate::interval::{pi_enclosure, sqrt_enclosure, RatInterval};
use crate::poly::QPoly;
use crate::rat::to_f64;

// ---------------------------------------------------------------------------
// Volume identities
// ---------------------------------------------------------------------------

/// vol(B) = 2^r (2 pi)^s / sqrt|disc| as an enclosure.
pub fn vol_b(field: &NumberField, bits: u32) -> RatInterval {
    let (r, s) = field.signature();
    let pi = pi_enclosure(bits + 16);
    let mut value = RatInterval::point(BigRational::from_integer(BigInt::one() << (r + s)));
    for _ in 0..s {
        value = value.mul(&pi);
    }
    let disc_abs = BigRational::from_integer(field.discriminant().abs());
    value.mul(&sqrt_enclosure(&disc_abs, bits + 16).recip())
}

pub fn vol_b_f64(field: &NumberField) -> f64 {
    vol_b(field, 96).mid_f64()
}

/// Volume of the closure of a fractional ideal across the finite places
/// under the self-dual measure: N(b)^{-1} |disc|^{-1/2}.
pub fn self_dual_volume(field: &NumberField, ideal: &FracIdeal, bits: u32) -> RatInterval {
    let disc_abs = BigRational::from_integer(field.discriminant().abs());
    sqrt_enclosure(&disc_abs, bits + 8)
        .recip()
        .scale(&ideal.norm(field).recip())
}

// ---------------------------------------------------------------------------
// Character convention and Fourier tables
// ---------------------------------------------------------------------------

/// Closed-form Fourier data for the Gaussian families at each place type,
/// validated against quadrature at construction.
#[derive(Debug, Clone, Copy)]
pub struct CharacterConvention {
    _validated: (),
}

const TABLE_VALIDATION_TOL: f64 = 1e-8;

impl CharacterConvention {
    /// Real place: exp(-pi lambda x^2) transforms to
    /// scale * exp(-pi rate y^2) with (scale, rate) = (lambda^{-1/2}, 1/lambda).
    pub fn real_dual(lambda: f64) -> (f64, f64) {
        (lambda.powf(-0.5), 1.0 / lambda)
    }

    /// Complex place (doubled Lebesgue measure, trace-form pairing):
    /// exp(-2 pi lambda |z|^2) transforms to scale * exp(-2 pi rate |w|^2)
    /// with (scale, rate) = (1/lambda, 1/lambda).
    pub fn complex_dual(lambda: f64) -> (f64, f64) {
        (1.0 / lambda, 1.0 / lambda)
    }

    /// Validate the closed forms against direct numerical quadrature at a
    /// real and a complex place, five sample points each.
    pub fn validated() -> Result<Self> {
        for &lambda in &[1.0f64, 4.0] {
            let (scale, rate) = Self::real_dual(lambda);
            for &y in &[0.0f64, 0.5, 1.0, 1.5, 2.0] {
                let closed = scale * (-std::f64::consts::PI * rate * y * y).exp();
                let quad = real_gaussian_transform_quadrature(lambda, y);
                if (closed - quad).abs() > TABLE_VALIDATION_TOL {
                    return Err(Error::ConventionValidation(format!(
                        "real place lambda={lambda} y={y}: closed {closed} vs quadrature {quad}"
                    )));
                }
            }
        }
        for &lambda in &[1.0f64, 2.0] {
            let (scale, rate) = Self::complex_dual(lambda);
            for &(u, v) in &[(0.0f64, 0.0f64), (0.5, 0.0), (0.0, 0.5), (0.5, 0.5), (1.0, 0.25)] {
                let wsq = u * u + v * v;
                let closed = scale * (-2.0 * std::f64::consts::PI * rate * wsq).exp();
                let quad = complex_gaussian_transform_quadrature(lambda, u, v);
                if (closed - quad).abs() > TABLE_VALIDATION_TOL {
                    return Err(Error::ConventionValidation(format!(
                        "complex place lambda={lambda} w=({u},{v}): closed {closed} vs quadrature {quad}"
                    )));
                }
            }
        }
        Ok(CharacterConvention { _validated: () })
    }
}

/// Direct quadrature of the real-place transform of exp(-pi lambda x^2)
/// against the kernel exp(2 pi i x y); imaginary part vanishes by symmetry.
fn real_gaussian_transform_quadrature(lambda: f64, y: f64) -> f64 {
    let t = 8.0 / lambda.sqrt() + y.abs();
    adaptive_simpson(
        &|x: f64| (-std::f64::consts::PI * lambda * x * x).exp()
            * (2.0 * std::f64::consts::PI * x * y).cos(),
        -t,
        t,
        1e-12,
    )
}

/// Direct quadrature of the complex-place transform of
/// exp(-2 pi lambda |z|^2) against exp(2 pi i Tr(z w)) with measure twice
/// Lebesgue, evaluated by Fubini over the two real coordinates.
fn complex_gaussian_transform_quadrature(lambda: f64, u: f64, v: f64) -> f64 {
    let pi = std::f64::consts::PI;
    let t = 8.0 / lambda.sqrt() + u.abs() + v.abs();
    // cos(4 pi (xu - yv)) splits into products of one-dimensional factors.
    let cos_x = adaptive_simpson(
        &|x: f64| (-2.0 * pi * lambda * x * x).exp() * (4.0 * pi * x * u).cos(),
        -t,
        t,
        1e-12,
    );
    let cos_y = adaptive_simpson(
        &|y: f64| (-2.0 * pi * lambda * y * y).exp() * (4.0 * pi * y * v).cos(),
        -t,
        t,
        1e-12,
    );
    let sin_x = adaptive_simpson(
        &|x: f64| (-2.0 * pi * lambda * x * x).exp() * (4.0 * pi * x * u).sin(),
        -t,
        t,
        1e-12,
    );
    let sin_y = adaptive_simpson(
        &|y: f64| (-2.0 * pi * lambda * y * y).exp() * (4.0 * pi * y * v).sin(),
        -t,
        t,
        1e-12,
    );
    2.0 * (cos_x * cos_y + sin_x * sin_y)
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, eps: f64) -> f64 {
    fn simpson(_f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64, fm: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        fm: f64,
        whole: f64,
        eps: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(f, a, fa, m, fm, flm);
        let right = simpson(f, m, fm, b, fb, frm);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * eps {
            left + right + (left + right - whole) / 15.0
        } else {
            recurse(f, a, fa, m, fm, flm, left, eps / 2.0, depth - 1)
                + recurse(f, m, fm, b, fb, frm, right, eps / 2.0, depth - 1)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(f, a, fa, b, fb, fm);
    recurse(f, a, fa, b, fb, fm, whole, eps, 40)
}

// ---------------------------------------------------------------------------
// Schwartz test functions and theta sums
// ---------------------------------------------------------------------------

/// Adelic test function: indicator of a fractional ideal across the finite
/// places times per-place Gaussians exp(-pi lambda_v x^2) (real) and
/// exp(-2 pi lambda_v |z|^2) (complex).
#[derive(Debug, Clone)]
pub struct SchwartzTestFunction {
    pub finite: FracIdeal,
    pub rates: Vec<BigRational>,
}

impl SchwartzTestFunction {
    pub fn new(field: &NumberField, finite: FracIdeal, rates: Vec<BigRational>) -> Result<Self> {
        if rates.len() != field.num_places() {
            return Err(Error::PlaceCountMismatch {
                got: rates.len(),
                expected: field.num_places(),
            });
        }
        if rates.iter().any(|l| !l.is_positive()) {
            return Err(Error::NonPositiveBound);
        }
        Ok(SchwartzTestFunction { finite, rates })
    }

    /// Self-dual Gaussians (lambda = 1) over the unit ideal.
    pub fn standard(field: &NumberField) -> Self {
        SchwartzTestFunction {
            finite: FracIdeal::unit_ideal(field),
            rates: vec![BigRational::one(); field.num_places()],
        }
    }
}

/// A truncated lattice Gaussian sum with a rigorous bound on the dropped
/// tail.
#[derive(Debug, Clone, Copy)]
pub struct ThetaSum {
    pub value: f64,
    pub tail_bound: f64,
    pub terms: u64,
}

/// Per-place absolute values |y_v| of an idele as f64.
fn idele_arch_f64(field: &NumberField, y: &IdelePresentation) -> Result<Vec<f64>> {
    let twist_trivial = y.arch_twist() == &field.one();
    let mut out = Vec::with_capacity(field.num_places());
    for (v, q) in y.arch_rational_parts().iter().enumerate() {
        let mut val = to_f64(q);
        if !twist_trivial {
            let m = field.embed_at(y.arch_twist(), v, 64)?.abs_sq();
            val *= m.mid_f64().max(0.0).sqrt();
        }
        out.push(val);
    }
    Ok(out)
}

/// Weighted lattice Gaussian sum: sum over alpha in `lattice` of
/// exp(-pi E(alpha)) with E(alpha) = sum_v w_v^2 ||sigma_v(alpha)||^2,
/// truncated at E <= radius^2, plus a tail bound via a packing estimate.
fn lattice_gaussian_sum(
    field: &NumberField,
    lattice: &FracIdeal,
    place_weights: &[f64],
    trunc_radius: f64,
) -> Result<ThetaSum> {
    let n = field.degree();
    let mink = crate::lattice::minkowski_basis(field, lattice, 64)?;
    // Column scaling by place weight.
    let mut rows = vec![vec![0.0f64; n]; n];
    let mut at = 0usize;
    let mut col_place = vec![0usize; n];
    for (v, place) in field.places().iter().enumerate() {
        let w = match place.kind {
            PlaceKind::Real => 1,
            PlaceKind::Complex => 2,
        };
        for t in 0..w {
            col_place[at + t] = v;
        }
        at += w;
    }
    for (i, row) in mink.rows.iter().enumerate() {
        for j in 0..n {
            rows[i][j] = row[j].mid_f64() * place_weights[col_place[j]];
        }
    }

    let radius_sq = trunc_radius * trunc_radius;
    let mut value = 0.0f64;
    let mut terms = 0u64;
    let mut min_nonzero = f64::INFINITY;
    crate::lattice::enumerate_scaled_vectors(&rows, radius_sq, 200_000_000, &mut |c, norm_sq| {
        let _ = c;
        value += (-std::f64::consts::PI * norm_sq).exp();
        terms += 1;
        if norm_sq > 1e-12 && norm_sq < min_nonzero {
            min_nonzero = norm_sq;
        }
        Ok(())
    })?;

    // Tail: every dropped point has E > R^2. Points with E <= T number at
    // most ((sqrt T + h)/h)^n with h half the shortest vector length, by
    // disjointness of packing balls. Compare shells [R^2+k, R^2+k+1] with
    // the geometric decay of exp(-pi E).
    let mu_sq = if min_nonzero.is_finite() {
        min_nonzero
    } else {
        radius_sq.max(1e-6)
    };
    let h = mu_sq.sqrt() / 2.0;
    let mut tail = 0.0f64;
    let mut k = 0u64;
    loop {
        let t_hi = radius_sq + (k + 1) as f64;
        let count_bound = ((t_hi.sqrt() + h) / h).powi(n as i32);
        let term = (-std::f64::consts::PI * (radius_sq + k as f64)).exp() * count_bound;
        tail += term;
        if term < 1e-300 || k > 20_000 {
            // Remaining terms decay at least geometrically with ratio
            // exp(-pi) * (growth of the count bound) < 0.1.
            tail += term * 0.12;
            break;
        }
        k += 1;
    }
    Ok(ThetaSum {
        value,
        tail_bound: tail,
        terms,
    })
}

/// Left side of the Poisson summation identity: sum over alpha in K of
/// f(alpha y), truncated with a rigorous tail bound.
pub fn theta_lhs(
    field: &NumberField,
    f: &SchwartzTestFunction,
    y: &IdelePresentation,
    trunc_radius: f64,
) -> Result<ThetaSum> {
    if trunc_radius <= 0.0 {
        return Err(Error::Parse("truncation radius must be positive".into()));
    }
    // Finite condition: f_fin(alpha y) = 1 iff alpha lies in b * prod p^{-v(y)},
    // which is the finite part of the replete ideal of y times b.
    let y_fin = y.to_replete(field).finite;
    let lattice = f.finite.mul(field, &y_fin);
    let y_abs = idele_arch_f64(field, y)?;
    let weights: Vec<f64> = field
        .places()
        .iter()
        .enumerate()
        .map(|(v, place)| {
            let lambda = to_f64(&f.rates[v]);
            let kappa = match place.kind {
                PlaceKind::Real => 1.0,
                PlaceKind::Complex => 2.0,
            };
            (kappa * lambda).sqrt() * y_abs[v]
        })
        .collect();
    lattice_gaussian_sum(field, &lattice, &weights, trunc_radius)
}

/// Right side: ||y||^{-1} sum over alpha of fhat(alpha / y), computed from
/// the closed-form transform (dual ideal b^{-1} d^{-1}, dual Gaussian rates
/// 1/lambda, volume prefactor), with its own truncation tail.
pub fn theta_rhs(
    field: &NumberField,
    f: &SchwartzTestFunction,
    y: &IdelePresentation,
    trunc_radius: f64,
) -> Result<ThetaSum> {
    if trunc_radius <= 0.0 {
        return Err(Error::Parse("truncation radius must be positive".into()));
    }
    let different = crate::ideal::different_ideal(field)?;
    let dual_finite = f.finite.inv(field).mul(field, &different.inv(field));
    // fhat(alpha/y) is supported on alpha in dual * prod p^{+v(y)}.
    let y_fin_inv = y.to_replete(field).finite.inv(field);
    let lattice = dual_finite.mul(field, &y_fin_inv);

    let y_abs = idele_arch_f64(field, y)?;
    let mut prefactor = self_dual_volume(field, &f.finite, 64).mid_f64();
    let mut weights = Vec::with_capacity(field.num_places());
    for (v, place) in field.places().iter().enumerate() {
        let lambda = to_f64(&f.rates[v]);
        match place.kind {
            PlaceKind::Real => {
                let (scale, rate) = CharacterConvention::real_dual(lambda);
                prefactor *= scale;
                weights.push(rate.sqrt() / y_abs[v]);
            }
            PlaceKind::Complex => {
                let (scale, rate) = CharacterConvention::complex_dual(lambda);
                prefactor *= scale;
                weights.push((2.0 * rate).sqrt() / y_abs[v]);
            }
        }
    }
    let norm_y = to_f64(&y.norm(field));
    prefactor /= norm_y;

    let raw = lattice_gaussian_sum(field, &lattice, &weights, trunc_radius)?;
    Ok(ThetaSum {
        value: prefactor * raw.value,
        tail_bound: prefactor.abs() * raw.tail_bound,
        terms: raw.terms,
    })
}

/// Result of one Poisson-summation identity check.
#[derive(Debug, Clone, Copy)]
pub struct TateReport {
    pub lhs: f64,
    pub rhs: f64,
    pub diff: f64,
    pub tail_bound: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Verify sum f(alpha y) = ||y||^{-1} sum fhat(alpha/y) to the requested
/// tolerance; errors out if the truncation tails already exceed it.
pub fn tate_check(
    field: &NumberField,
    f: &SchwartzTestFunction,
    y: &IdelePresentation,
    trunc_radius: f64,
    tol: f64,
) -> Result<TateReport> {
    let lhs = theta_lhs(field, f, y, trunc_radius)?;
    let rhs = theta_rhs(field, f, y, trunc_radius)?;
    let tail = lhs.tail_bound + rhs.tail_bound;
    if tail >= tol {
        return Err(Error::TailBound { tail, tol });
    }
    let diff = (lhs.value - rhs.value).abs();
    Ok(TateReport {
        lhs: lhs.value,
        rhs: rhs.value,
        diff,
        tail_bound: tail,
        tol,
        pass: diff <= tol,
    })
}

// ---------------------------------------------------------------------------
// Archimedean regions, Minkowski growth, surface area
// ---------------------------------------------------------------------------

/// One archimedean factor of a region: an interval at a real place, a disc
/// (centered at 0) or an axis-aligned rectangle at a complex place.
#[derive(Debug, Clone)]
pub enum PlaceShape {
    Interval { lo: BigRational, hi: BigRational },
    Disc { radius: BigRational },
    Rect { x_lo: BigRational, x_hi: BigRational, y_lo: BigRational, y_hi: BigRational },
}

impl PlaceShape {
    fn dim(&self) -> usize {
        match self {
            PlaceShape::Interval { .. } => 1,
            _ => 2,
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match self {
            PlaceShape::Interval { lo, hi } => lo < hi,
            PlaceShape::Disc { radius } => radius.is_positive(),
            PlaceShape::Rect { x_lo, x_hi, y_lo, y_hi } => x_lo < x_hi && y_lo < y_hi,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::NonPositiveBound)
        }
    }

    /// The symmetric difference body S - S, scaled by t.
    fn symmetric_difference_scaled(&self, t: &BigRational) -> PlaceShape {
        match self {
            PlaceShape::Interval { lo, hi } => {
                let w = (hi - lo) * t;
                PlaceShape::Interval { lo: -w.clone(), hi: w }
            }
            PlaceShape::Disc { radius } => PlaceShape::Disc {
                radius: radius * t * BigRational::from_integer(BigInt::from(2)),
            },
            PlaceShape::Rect { x_lo, x_hi, y_lo, y_hi } => {
                let wx = (x_hi - x_lo) * t;
                let wy = (y_hi - y_lo) * t;
                PlaceShape::Rect {
                    x_lo: -wx.clone(),
                    x_hi: wx,
                    y_lo: -wy.clone(),
                    y_hi: wy,
                }
            }
        }
    }
}

/// Product of per-place shapes.
#[derive(Debug, Clone)]
pub struct ArchRegion {
    pub shapes: Vec<PlaceShape>,
}

impl ArchRegion {
    pub fn new(shapes: Vec<PlaceShape>) -> Result<Self> {
        for s in &shapes {
            s.validate()?;
        }
        if shapes.is_empty() {
            return Err(Error::NonPositiveBound);
        }
        Ok(ArchRegion { shapes })
    }

    fn all_real(&self) -> bool {
        self.shapes.iter().all(|s| s.dim() == 1)
    }
}

/// Per-place factor of a Minkowski sum E_v + S_v with S_v symmetric.
#[derive(Debug, Clone)]
enum SumShape {
    Interval { lo: BigRational, hi: BigRational },
    Disc { radius: BigRational },
    Rect { x_lo: BigRational, x_hi: BigRational, y_lo: BigRational, y_hi: BigRational },
    /// Rectangle core with quarter-disc corners: rect + disc(radius).
    RoundedRect {
        x_lo: BigRational,
        x_hi: BigRational,
        y_lo: BigRational,
        y_hi: BigRational,
        radius: BigRational,
    },
}

impl SumShape {
    /// Area (2-D) or length (1-D) as (a, b) meaning a + b pi, exact.
    fn volume_pi_poly(&self) -> (BigRational, BigRational) {
        match self {
            SumShape::Interval { lo, hi } => (hi - lo, BigRational::zero()),
            SumShape::Disc { radius } => (BigRational::zero(), radius * radius),
            SumShape::Rect { x_lo, x_hi, y_lo, y_hi } => {
                ((x_hi - x_lo) * (y_hi - y_lo), BigRational::zero())
            }
            SumShape::RoundedRect { x_lo, x_hi, y_lo, y_hi, radius } => {
                let w = x_hi - x_lo;
                let h = y_hi - y_lo;
                let two = BigRational::from_integer(BigInt::from(2));
                (&w * &h + two * radius * (w + h), radius * radius)
            }
        }
    }

    /// Axis-aligned bounding box, per coordinate.
    fn bounding_box(&self) -> Vec<(f64, f64)> {
        match self {
            SumShape::Interval { lo, hi } => vec![(to_f64(lo), to_f64(hi))],
            SumShape::Disc { radius } => {
                let r = to_f64(radius);
                vec![(-r, r), (-r, r)]
            }
            SumShape::Rect { x_lo, x_hi, y_lo, y_hi } => {
                vec![(to_f64(x_lo), to_f64(x_hi)), (to_f64(y_lo), to_f64(y_hi))]
            }
            SumShape::RoundedRect { x_lo, x_hi, y_lo, y_hi, radius } => {
                let r = to_f64(radius);
                vec![
                    (to_f64(x_lo) - r, to_f64(x_hi) + r),
                    (to_f64(y_lo) - r, to_f64(y_hi) + r),
                ]
            }
        }
    }

    fn contains(&self, point: &[f64]) -> bool {
        match self {
            SumShape::Interval { lo, hi } => to_f64(lo) <= point[0] && point[0] <= to_f64(hi),
            SumShape::Disc { radius } => {
                let r = to_f64(radius);
                point[0] * point[0] + point[1] * point[1] <= r * r
            }
            SumShape::Rect { x_lo, x_hi, y_lo, y_hi } => {
                to_f64(x_lo) <= point[0]
                    && point[0] <= to_f64(x_hi)
                    && to_f64(y_lo) <= point[1]
                    && point[1] <= to_f64(y_hi)
            }
            SumShape::RoundedRect { x_lo, x_hi, y_lo, y_hi, radius } => {
                let dx = (to_f64(x_lo) - point[0]).max(point[0] - to_f64(x_hi)).max(0.0);
                let dy = (to_f64(y_lo) - point[1]).max(point[1] - to_f64(y_hi)).max(0.0);
                let r = to_f64(radius);
                dx * dx + dy * dy <= r * r
            }
        }
    }
}

fn place_sum(e: &PlaceShape, s: &PlaceShape) -> Result<SumShape> {
    Ok(match (e, s) {
        (PlaceShape::Interval { lo, hi }, PlaceShape::Interval { lo: slo, hi: shi }) => {
            SumShape::Interval { lo: lo + slo, hi: hi + shi }
        }
        (PlaceShape::Disc { radius }, PlaceShape::Disc { radius: sr }) => {
            SumShape::Disc { radius: radius + sr }
        }
        (PlaceShape::Disc { radius }, PlaceShape::Rect { x_lo, x_hi, y_lo, y_hi }) => {
            SumShape::RoundedRect {
                x_lo: x_lo.clone(),
                x_hi: x_hi.clone(),
                y_lo: y_lo.clone(),
                y_hi: y_hi.clone(),
                radius: radius.clone(),
            }
        }
        (PlaceShape::Rect { x_lo, x_hi, y_lo, y_hi }, PlaceShape::Disc { radius }) => {
            SumShape::RoundedRect {
                x_lo: x_lo.clone(),
                x_hi: x_hi.clone(),
                y_lo: y_lo.clone(),
                y_hi: y_hi.clone(),
                radius: radius.clone(),
            }
        }
        (
            PlaceShape::Rect { x_lo, x_hi, y_lo, y_hi },
            PlaceShape::Rect { x_lo: a, x_hi: b, y_lo: c, y_hi: d },
        ) => SumShape::Rect {
            x_lo: x_lo + a,
            x_hi: x_hi + b,
            y_lo: y_lo + c,
            y_hi: y_hi + d,
        },
        _ => return Err(Error::ShapeMismatch { index: 0 }),
    })
}

fn e_as_sum_shape(e: &PlaceShape) -> SumShape {
    match e {
        PlaceShape::Interval { lo, hi } => SumShape::Interval { lo: lo.clone(), hi: hi.clone() },
        PlaceShape::Disc { radius } => SumShape::Disc { radius: radius.clone() },
        PlaceShape::Rect { x_lo, x_hi, y_lo, y_hi } => SumShape::Rect {
            x_lo: x_lo.clone(),
            x_hi: x_hi.clone(),
            y_lo: y_lo.clone(),
            y_hi: y_hi.clone(),
        },
    }
}

/// Product volume of a list of per-place shapes, as an enclosure (the pi
/// powers are evaluated with a pi enclosure).
fn product_volume(shapes: &[SumShape], bits: u32) -> RatInterval {
    // Polynomial in pi with rational coefficients.
    let mut poly = QPoly::constant(BigRational::one());
    for s in shapes {
        let (a, b) = s.volume_pi_poly();
        poly = poly.mul(&QPoly::new(vec![a, b]));
    }
    let pi = pi_enclosure(bits);
    let mut acc = RatInterval::point(BigRational::zero());
    let mut pw = RatInterval::from_int(1);
    for c in poly.0.iter() {
        acc = acc.add(&pw.scale(c));
        pw = pw.mul(&pi);
    }
    acc
}

#[derive(Debug, Clone, Copy)]
pub struct GrowthConfig {
    pub samples: u64,
    pub seed: u64,
    /// Reject Monte Carlo results whose 99% CI half-width exceeds this.
    pub max_ci: Option<f64>,
}

impl Default for GrowthConfig {
    fn default() -> Self {
        GrowthConfig {
            samples: 1_000_000,
            seed: 0,
            max_ci: None,
        }
    }
}

/// How a growth value was obtained.
#[derive(Debug, Clone)]
pub enum GrowthMethod {
    Exact,
    MonteCarlo { seed: u64, samples: u64 },
}

/// vol(E + t(D - D)) - vol(E).
#[derive(Debug, Clone)]
pub struct Growth {
    pub value: f64,
    /// 99% confidence half-width; zero for exact values.
    pub ci99: f64,
    pub exact: Option<BigRational>,
    pub method: GrowthMethod,
}

/// Volume growth of E under Minkowski dilation by t(D - D). Exact when all
/// places are real (interval products); Monte Carlo with a seeded generator
/// otherwise.
pub fn minkowski_growth(
    e: &ArchRegion,
    d: &ArchRegion,
    t: &BigRational,
    cfg: &GrowthConfig,
) -> Result<Growth> {
    if !t.is_positive() || t > &BigRational::one() {
        return Err(Error::Parse("dilation factor must lie in (0, 1]".into()));
    }
    if e.shapes.len() != d.shapes.len() {
        return Err(Error::PlaceCountMismatch {
            got: d.shapes.len(),
            expected: e.shapes.len(),
        });
    }
    for (i, (ev, dv)) in e.shapes.iter().zip(&d.shapes).enumerate() {
        if ev.dim() != dv.dim() {
            return Err(Error::ShapeMismatch { index: i });
        }
    }
    let sums: Vec<SumShape> = e
        .shapes
        .iter()
        .zip(&d.shapes)
        .map(|(ev, dv)| place_sum(ev, &dv.symmetric_difference_scaled(t)))
        .collect::<Result<_>>()?;

    if e.all_real() {
        // Exact rational: products of interval lengths.
        let mut vol_sum = BigRational::one();
        for s in &sums {
            let (a, _) = s.volume_pi_poly();
            vol_sum *= a;
        }
        let mut vol_e = BigRational::one();
        for s in &e.shapes {
            if let PlaceShape::Interval { lo, hi } = s {
                vol_e *= hi - lo;
            }
        }
        let growth = vol_sum - vol_e;
        return Ok(Growth {
            value: to_f64(&growth),
            ci99: 0.0,
            exact: Some(growth),
            method: GrowthMethod::Exact,
        });
    }

    // Monte Carlo on the difference region (E + tS) \ E: lower variance than
    // sampling the two volumes separately.
    let e_shapes: Vec<SumShape> = e.shapes.iter().map(e_as_sum_shape).collect();
    let boxes: Vec<(f64, f64)> = sums.iter().flat_map(|s| s.bounding_box()).collect();
    let mut box_vol = 1.0f64;
    for (lo, hi) in &boxes {
        box_vol *= hi - lo;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut hits = 0u64;
    let mut point = vec![0.0f64; boxes.len()];
    for _ in 0..cfg.samples {
        for (k, (lo, hi)) in boxes.iter().enumerate() {
            point[k] = rng.gen_range(*lo..*hi);
        }
        let mut at = 0usize;
        let mut in_sum = true;
        let mut in_e = true;
        for (s, es) in sums.iter().zip(&e_shapes) {
            let w = s.bounding_box().len();
            let coords = &point[at..at + w];
            if !s.contains(coords) {
                in_sum = false;
                break;
            }
            if in_e && !es.contains(coords) {
                in_e = false;
            }
            at += w;
        }
        if in_sum && !in_e {
            hits += 1;
        }
    }
    let p = hits as f64 / cfg.samples as f64;
    let value = p * box_vol;
    let ci99 = 2.576 * (p * (1.0 - p) / cfg.samples as f64).sqrt() * box_vol;
    if let Some(max_ci) = cfg.max_ci {
        if ci99 > max_ci {
            return Err(Error::CiTooWide { ci: ci99, tol: max_ci });
        }
    }
    Ok(Growth {
        value,
        ci99,
        exact: None,
        method: GrowthMethod::MonteCarlo {
            seed: cfg.seed,
            samples: cfg.samples,
        },
    })
}

/// Closed-form growth enclosure for the supported product shapes
/// (cross-check for the Monte Carlo path).
pub fn closed_form_growth(
    e: &ArchRegion,
    d: &ArchRegion,
    t: &BigRational,
    bits: u32,
) -> Result<RatInterval> {
    let sums: Vec<SumShape> = e
        .shapes
        .iter()
        .zip(&d.shapes)
        .map(|(ev, dv)| place_sum(ev, &dv.symmetric_difference_scaled(t)))
        .collect::<Result<_>>()?;
    let e_shapes: Vec<SumShape> = e.shapes.iter().map(e_as_sum_shape).collect();
    Ok(product_volume(&sums, bits).sub(&product_volume(&e_shapes, bits)))
}

#[derive(Debug, Clone)]
pub struct QuotientRow {
    pub t: BigRational,
    pub growth: f64,
    pub quotient: f64,
    pub ci99: f64,
}

/// Surface-area estimate: growth quotients along a decreasing schedule of
/// dilation factors, extrapolated linearly to t = 0.
#[derive(Debug, Clone)]
pub struct SurfaceReport {
    pub rows: Vec<QuotientRow>,
    pub slope: f64,
    pub slope_ci99: f64,
    /// Exact slope when every growth on the schedule was exact.
    pub slope_exact: Option<BigRational>,
}

/// Estimate the surface area of E with respect to D: the limit of
/// (vol(E + tD - tD) - vol E)/t as t drops to 0. The quotient sequence must
/// be nonincreasing along the schedule (convex E) up to Monte Carlo noise.
pub fn surface_area(
    e: &ArchRegion,
    d: &ArchRegion,
    schedule: &[BigRational],
    cfg: &GrowthConfig,
) -> Result<SurfaceReport> {
    if schedule.len() < 2 {
        return Err(Error::TooFewRows {
            need: 2,
            got: schedule.len(),
        });
    }
    for w in schedule.windows(2) {
        if w[1] >= w[0] {
            return Err(Error::Parse("schedule must be strictly decreasing".into()));
        }
    }
    let mut rows = Vec::with_capacity(schedule.len());
    let mut exacts: Vec<Option<BigRational>> = vec![];
    for (k, t) in schedule.iter().enumerate() {
        let sub_cfg = GrowthConfig {
            seed: cfg.seed.wrapping_add(k as u64),
            ..*cfg
        };
        let g = minkowski_growth(e, d, t, &sub_cfg)?;
        let tf = to_f64(t);
        rows.push(QuotientRow {
            t: t.clone(),
            growth: g.value,
            quotient: g.value / tf,
            ci99: g.ci99 / tf,
        });
        exacts.push(g.exact.map(|x| x / t));
    }
    // Monotone (nonincreasing) check within combined noise.
    for k in 1..rows.len() {
        let allowance = rows[k - 1].ci99 + rows[k].ci99 + 1e-12;
        if rows[k].quotient > rows[k - 1].quotient + allowance {
            return Err(Error::NonMonotoneQuotient { index: k });
        }
    }
    // Linear extrapolation from the two smallest t.
    let last = &rows[rows.len() - 1];
    let prev = &rows[rows.len() - 2];
    let t_last = to_f64(&last.t);
    let t_prev = to_f64(&prev.t);
    let slope = last.quotient - t_last * (prev.quotient - last.quotient) / (t_prev - t_last);
    let w_last = 1.0 + t_last / (t_prev - t_last);
    let w_prev = t_last / (t_prev - t_last);
    let slope_ci99 = ((w_last * last.ci99).powi(2) + (w_prev * prev.ci99).powi(2)).sqrt();
    let slope_exact = match (
        exacts[exacts.len() - 1].as_ref(),
        exacts[exacts.len() - 2].as_ref(),
    ) {
        (Some(ql), Some(qp)) => {
            let tl = &rows[rows.len() - 1].t;
            let tp = &rows[rows.len() - 2].t;
            Some(ql - tl * (qp - ql) / (tp - tl))
        }
        _ => None,
    };
    Ok(SurfaceReport {
        rows,
        slope,
        slope_ci99,
        slope_exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    #[test]
    fn vol_b_closed_forms() {
        // Q: 2 / sqrt 1 = 2.
        let q = NumberField::rationals();
        assert!((vol_b_f64(&q) - 2.0).abs() < 1e-12);
        // Q(i): 2 pi / sqrt 4 = pi.
        let f = NumberField::gaussian();
        assert!((vol_b_f64(&f) - std::f64::consts::PI).abs() < 1e-12);
        // Q(sqrt2): 4 / sqrt 8 = sqrt 2.
        let f = NumberField::quadratic(2).unwrap();
        assert!((vol_b_f64(&f) - std::f64::consts::SQRT_2).abs() < 1e-12);
        // Identity vol(B) sqrt|disc| = 2^r (2 pi)^s as enclosures.
        let lhs = vol_b(&f, 80).mul(&sqrt_enclosure(&rat_int(8), 80));
        assert!(lhs.contains(&rat_int(4)) || (lhs.mid_f64() - 4.0).abs() < 1e-18);
    }

    #[test]
    fn self_dual_volumes() {
        let q = NumberField::rationals();
        let v = self_dual_volume(&q, &FracIdeal::unit_ideal(&q), 64);
        assert!((v.mid_f64() - 1.0).abs() < 1e-15);
        let f = NumberField::gaussian();
        let v = self_dual_volume(&f, &FracIdeal::unit_ideal(&f), 64);
        assert!((v.mid_f64() - 0.5).abs() < 1e-15);
        // Index-2 sublattice (1+i) scales by 1/2 again.
        let a = FracIdeal::principal(&f, &f.element(vec![rat_int(1), rat_int(1)]).unwrap()).unwrap();
        let v = self_dual_volume(&f, &a, 64);
        assert!((v.mid_f64() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn fourier_tables_validate() {
        assert!(CharacterConvention::validated().is_ok());
        // Known values: lambda = 4 real gives scale 1/2, dual rate 1/4.
        let (scale, rate) = CharacterConvention::real_dual(4.0);
        assert!((scale - 0.5).abs() < 1e-15);
        assert!((rate - 0.25).abs() < 1e-15);
        let (scale, rate) = CharacterConvention::complex_dual(1.0);
        assert!((scale - 1.0).abs() < 1e-15);
        assert!((rate - 1.0).abs() < 1e-15);
    }

    #[test]
    fn theta_series_over_q() {
        let q = NumberField::rationals();
        let f = SchwartzTestFunction::standard(&q);
        let y1 = IdelePresentation::trivial(&q);
        let s = theta_lhs(&q, &f, &y1, 10.0).unwrap();
        // Direct series sum_{|n| <= 10} exp(-pi n^2).
        let direct: f64 = (-10i64..=10)
            .map(|n| (-std::f64::consts::PI * (n * n) as f64).exp())
            .sum();
        assert!((s.value - direct).abs() < 1e-14);
        assert!((s.value - 1.0864348).abs() < 1e-6);
        assert!(s.tail_bound < 1e-100);

        let y2 = IdelePresentation::new(&q, vec![], vec![rat_int(2)]).unwrap();
        let s2 = theta_lhs(&q, &f, &y2, 10.0).unwrap();
        assert!((s2.value - 1.0000070).abs() < 1e-6);
        // Self-dual at y = 1: rhs equals lhs.
        let r = theta_rhs(&q, &f, &y1, 10.0).unwrap();
        assert!((r.value - s.value).abs() < 1e-12);
        // y = 2: rhs = (1/2) sum exp(-pi n^2 / 4).
        let r2 = theta_rhs(&q, &f, &y2, 10.0).unwrap();
        let direct: f64 = (-20i64..=20)
            .map(|n| 0.5 * (-std::f64::consts::PI * (n as f64 / 2.0).powi(2)).exp())
            .sum();
        assert!((r2.value - direct).abs() < 1e-13);
        assert!((s2.value - r2.value).abs() < 1e-9);
    }

    #[test]
    fn theta_gaussian_field_product_structure() {
        // Over Q(i) with the unit ideal and lambda = 1, the lattice sum is
        // (sum over Z of exp(-2 pi a^2))^2.
        let f = NumberField::gaussian();
        let tf = SchwartzTestFunction::standard(&f);
        let y = IdelePresentation::trivial(&f);
        let s = theta_lhs(&f, &tf, &y, 10.0).unwrap();
        let one_dim: f64 = (-8i64..=8)
            .map(|a| (-2.0 * std::f64::consts::PI * (a * a) as f64).exp())
            .sum();
        assert!((s.value - one_dim * one_dim).abs() < 1e-12);
    }

    #[test]
    fn tate_checks_pass() {
        let q = NumberField::rationals();
        let f = SchwartzTestFunction::standard(&q);
        for y_val in [rat(1, 2), rat_int(1), rat_int(2), rat_int(5)] {
            let y = IdelePresentation::new(&q, vec![], vec![y_val]).unwrap();
            let rep = tate_check(&q, &f, &y, 10.0, 1e-9).unwrap();
            assert!(rep.pass, "{rep:?}");
        }
        // Q(i), with ideal (1+i).
        let g = NumberField::gaussian();
        let b = FracIdeal::principal(&g, &g.element(vec![rat_int(1), rat_int(1)]).unwrap()).unwrap();
        let tf = SchwartzTestFunction::new(&g, b, vec![rat_int(1)]).unwrap();
        let y = IdelePresentation::trivial(&g);
        let rep = tate_check(&g, &tf, &y, 10.0, 1e-8).unwrap();
        assert!(rep.pass, "{rep:?}");
        // Q(sqrt2), norm-1 archimedean idele (2, 1/2).
        let f2 = NumberField::quadratic(2).unwrap();
        let tf = SchwartzTestFunction::standard(&f2);
        let y = IdelePresentation::new(&f2, vec![], vec![rat_int(2), rat(1, 2)]).unwrap();
        let rep = tate_check(&f2, &tf, &y, 10.0, 1e-8).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn tail_bound_gates_tolerance() {
        let q = NumberField::rationals();
        let f = SchwartzTestFunction::standard(&q);
        let y = IdelePresentation::trivial(&q);
        // Truncation at 1 leaves a visible tail; 1e-12 is unreachable.
        assert!(matches!(
            tate_check(&q, &f, &y, 1.0, 1e-12),
            Err(Error::TailBound { .. })
        ));
    }

    #[test]
    fn growth_exact_intervals() {
        // E = [-1,1], D = [0,1]: growth 2t exactly.
        let e = ArchRegion::new(vec![PlaceShape::Interval { lo: rat_int(-1), hi: rat_int(1) }])
            .unwrap();
        let d = ArchRegion::new(vec![PlaceShape::Interval { lo: rat_int(0), hi: rat_int(1) }])
            .unwrap();
        let g = minkowski_growth(&e, &d, &rat(1, 2), &GrowthConfig::default()).unwrap();
        assert_eq!(g.exact.unwrap(), rat_int(1));
        // Two real places: E = [-1,1]^2, D = [0,1]^2: growth 8t + 4t^2.
        let e2 = ArchRegion::new(vec![
            PlaceShape::Interval { lo: rat_int(-1), hi: rat_int(1) },
            PlaceShape::Interval { lo: rat_int(-1), hi: rat_int(1) },
        ])
        .unwrap();
        let d2 = ArchRegion::new(vec![
            PlaceShape::Interval { lo: rat_int(0), hi: rat_int(1) },
            PlaceShape::Interval { lo: rat_int(0), hi: rat_int(1) },
        ])
        .unwrap();
        let g = minkowski_growth(&e2, &d2, &rat(1, 2), &GrowthConfig::default()).unwrap();
        // 8 * 1/2 + 4 * 1/4 = 5.
        assert_eq!(g.exact.unwrap(), rat_int(5));
    }

    #[test]
    fn growth_disc_square_closed_form_and_mc() {
        // E = unit disc, D = [0,1]^2: growth = 8t + 4t^2.
        let e = ArchRegion::new(vec![PlaceShape::Disc { radius: rat_int(1) }]).unwrap();
        let d = ArchRegion::new(vec![PlaceShape::Rect {
            x_lo: rat_int(0),
            x_hi: rat_int(1),
            y_lo: rat_int(0),
            y_hi: rat_int(1),
        }])
        .unwrap();
        let t = rat(1, 2);
        let cf = closed_form_growth(&e, &d, &t, 64).unwrap();
        assert!((cf.mid_f64() - 5.0).abs() < 1e-12);
        let g = minkowski_growth(&e, &d, &t, &GrowthConfig::default()).unwrap();
        assert!(g.ci99 > 0.0);
        assert!((g.value - 5.0).abs() <= g.ci99, "{} vs {}", g.value, g.ci99);
    }

    #[test]
    fn surface_area_exact_and_mc() {
        // Q configuration: slope exactly 2.
        let e = ArchRegion::new(vec![PlaceShape::Interval { lo: rat_int(-1), hi: rat_int(1) }])
            .unwrap();
        let d = ArchRegion::new(vec![PlaceShape::Interval { lo: rat_int(0), hi: rat_int(1) }])
            .unwrap();
        let schedule = vec![rat(1, 2), rat(1, 4), rat(1, 8), rat(1, 16)];
        let rep = surface_area(&e, &d, &schedule, &GrowthConfig::default()).unwrap();
        assert_eq!(rep.slope_exact.unwrap(), rat_int(2));

        // Disc/square: slope 8 within CI.
        let e = ArchRegion::new(vec![PlaceShape::Disc { radius: rat_int(1) }]).unwrap();
        let d = ArchRegion::new(vec![PlaceShape::Rect {
            x_lo: rat_int(0),
            x_hi: rat_int(1),
            y_lo: rat_int(0),
            y_hi: rat_int(1),
        }])
        .unwrap();
        let rep = surface_area(&e, &d, &schedule, &GrowthConfig::default()).unwrap();
        assert!((rep.slope - 8.0).abs() <= rep.slope_ci99.max(0.05), "{rep:?}");
        // Quotients decrease along the schedule.
        for w in rep.rows.windows(2) {
            assert!(w[1].quotient <= w[0].quotient + w[0].ci99 + w[1].ci99);
        }
    }
}
