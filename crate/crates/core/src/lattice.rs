//! Minkowski embeddings of ideal lattices and exact counting of the sets
//! H0: elements of the finite part whose archimedean absolute values stay
//! below per-place bounds.
//!
//! Counting works in two layers. A floating-point layer (LLL reduction plus
//! Fincke-Pohst depth-first enumeration over an enclosing ellipsoid) produces
//! candidate lattice vectors quickly; its numerics only affect speed. An
//! exact layer then decides |alpha|_v <= b_v at every place: real places by
//! exact sign computation, complex places by rational shortcuts where
//! available and otherwise by interval refinement backed by an algebraic
//! certificate (the pair-product polynomial of the squared modulus), so
//! boundary ties are decided exactly and inclusively.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{EmbeddingValue, FieldElement, NumberField, PlaceKind};
use crate::ideal::{FracIdeal, RepleteIdeal};
use crate::interval::{sqrt_enclosure, RatInterval};
use crate::poly::QPoly;
use crate::rat::to_f64;
use crate::roots::DEFAULT_PRECISION_CAP_BITS;

/// Default depth-first enumeration node budget.
pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;

#[derive(Debug, Clone, Copy)]
pub struct EnumerationConfig {
    /// Precision of the embedding enclosures backing the floating layer.
    pub precision_bits: u32,
    pub node_budget: u64,
}

impl Default for EnumerationConfig {
    fn default() -> Self {
        EnumerationConfig {
            precision_bits: 64,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

/// Archimedean box: |alpha|_v <= bounds[v], tested on alpha * twist. The
/// twist carries exact scalings by field elements (see `RepleteIdeal`).
#[derive(Debug, Clone)]
pub struct H0Region {
    pub bounds: Vec<BigRational>,
    pub twist: FieldElement,
}

impl H0Region {
    pub fn new(field: &NumberField, bounds: Vec<BigRational>) -> Result<Self> {
        if bounds.len() != field.num_places() {
            return Err(Error::PlaceCountMismatch {
                got: bounds.len(),
                expected: field.num_places(),
            });
        }
        if bounds.iter().any(|b| !b.is_positive()) {
            return Err(Error::NonPositiveBound);
        }
        Ok(H0Region {
            bounds,
            twist: field.one(),
        })
    }

    /// The region of H0(a): |alpha|_v <= n_v^{-1}.
    pub fn of_replete(_field: &NumberField, a: &RepleteIdeal) -> Self {
        H0Region {
            bounds: a.arch_rational_parts().iter().map(|q| q.recip()).collect(),
            twist: a.twist().clone(),
        }
    }
}

// ---------------------------------------------------------------------------
// Exact membership
// ---------------------------------------------------------------------------

/// Decide |alpha|_v <= b_v at every archimedean place, exactly; boundary
/// equality counts as membership.
pub fn exact_membership(
    field: &NumberField,
    alpha: &FieldElement,
    region: &H0Region,
) -> Result<bool> {
    let beta = if region.twist == field.one() {
        alpha.clone()
    } else {
        field.mul(alpha, &region.twist)
    };
    if beta.is_zero() {
        return Ok(true);
    }
    for (v, place) in field.places().iter().enumerate() {
        let b = &region.bounds[v];
        let ok = match place.kind {
            PlaceKind::Real => real_abs_le(field, &beta, v, b)?,
            PlaceKind::Complex => complex_abs_le(field, &beta, v, b)?,
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// |sigma_v(beta)| <= b at a real place: the sign of sigma_v(beta^2 - b^2)
/// is exactly computable (embeddings are injective, so the value is zero
/// only for the zero element).
fn real_abs_le(
    field: &NumberField,
    beta: &FieldElement,
    v: usize,
    b: &BigRational,
) -> Result<bool> {
    let b2 = field.from_rational(b * b);
    let delta = field.sub(&field.mul(beta, beta), &b2);
    Ok(field.sign_at_real_place(&delta, v)? != std::cmp::Ordering::Greater)
}

/// |sigma_v(beta)|^2 <= b^2 at a complex place.
fn complex_abs_le(
    field: &NumberField,
    beta: &FieldElement,
    v: usize,
    b: &BigRational,
) -> Result<bool> {
    let c = b * b;
    // Rational shortcuts first.
    if let Some(q) = field.as_rational(beta) {
        return Ok(&q * &q <= c);
    }
    if field.degree() == 2 {
        // Imaginary quadratic: |sigma(beta)|^2 = N(beta), a positive rational.
        return Ok(field.norm(beta) <= c);
    }
    // Interval refinement; after a few rounds of persistent straddle, build
    // the pair-product certificate that decides exact boundary ties.
    let mut bits = 48u32;
    let mut certificate: Option<TieCertificate> = None;
    loop {
        let m = field.embed_at(beta, v, bits)?.abs_sq();
        if m.hi < c {
            return Ok(true);
        }
        if m.lo > c {
            return Ok(false);
        }
        if bits >= 192 {
            let cert = certificate.get_or_insert_with(|| TieCertificate::build(field, beta, &c));
            if cert.tie_multiplicity > 0 {
                let s_val = cert.cofactor.eval_interval(&m);
                if !s_val.contains_zero() {
                    // T(m) = 0 and S(m) != 0 force (m - c)^k = 0: exact tie.
                    return Ok(true);
                }
            }
            // Otherwise b^2 is not this pair product and refinement resolves.
        }
        if bits >= DEFAULT_PRECISION_CAP_BITS {
            return Err(Error::PrecisionExceeded {
                cap_bits: DEFAULT_PRECISION_CAP_BITS,
            });
        }
        bits = (bits * 2).min(DEFAULT_PRECISION_CAP_BITS);
    }
}

/// Certificate data for deciding |sigma_v(beta)|^2 = c exactly: the squared
/// modulus is a root of T(y) = prod_{i,j} (y - a(z_i) a(z_j)) over all
/// ordered pairs of roots of the defining polynomial. Writing
/// T = (y - c)^k S with S(c) != 0, the value equals c iff S does not vanish
/// on a small enclosure of it.
struct TieCertificate {
    tie_multiplicity: usize,
    cofactor: QPoly,
}

impl TieCertificate {
    fn build(field: &NumberField, beta: &FieldElement, c: &BigRational) -> Self {
        let t = pair_product_poly(field, beta);
        let mut k = 0usize;
        let mut s = t;
        let linear = QPoly::new(vec![-c.clone(), BigRational::one()]);
        loop {
            let (q, r) = s.divrem(&linear);
            if r.is_zero() && !q.is_zero() {
                s = q;
                k += 1;
            } else {
                break;
            }
        }
        TieCertificate {
            tie_multiplicity: k,
            cofactor: s,
        }
    }
}

/// T(y) = prod over all ordered root pairs (z_i, z_j) of the defining
/// polynomial of (y - a(z_i) a(z_j)), where a is the power-basis polynomial
/// of beta. Rational coefficients; computed by resultant interpolation.
fn pair_product_poly(field: &NumberField, beta: &FieldElement) -> QPoly {
    let p = field.defining_poly();
    let a = field.to_power(beta);
    let n = p.degree() as usize;
    let d = a.degree().max(0) as usize;

    // For fixed rational y0: R_{y0}(x) = Res_w(p(w), y0 - a(x) a(w)) is a
    // polynomial in x of degree <= d*n; T(y0) = Res_x(p(x), R_{y0}(x)).
    let eval_t = |y0: &BigRational| -> BigRational {
        let deg_r = d * n;
        let xs: Vec<BigRational> = sample_points(deg_r + 1);
        let vals: Vec<BigRational> = xs
            .iter()
            .map(|x0| {
                let ax0 = a.eval(x0);
                // y0 - a(x0) * a(w) as a polynomial in w.
                let inner = QPoly::new(
                    std::iter::once(y0 - &ax0 * a.coeff(0))
                        .chain((1..=d).map(|k| -(&ax0 * a.coeff(k))))
                        .collect(),
                );
                p.resultant(&inner)
            })
            .collect();
        let r_poly = lagrange_interpolate(&xs, &vals);
        p.resultant(&r_poly)
    };

    let deg_t = n * n;
    let ys: Vec<BigRational> = sample_points(deg_t + 1);
    let tvals: Vec<BigRational> = ys.iter().map(eval_t).collect();
    lagrange_interpolate(&ys, &tvals)
}

fn sample_points(count: usize) -> Vec<BigRational> {
    (0..count)
        .map(|k| {
            let v = if k % 2 == 0 {
                (k / 2) as i64
            } else {
                -(((k + 1) / 2) as i64)
            };
            BigRational::from_integer(BigInt::from(v))
        })
        .collect()
}

fn lagrange_interpolate(xs: &[BigRational], ys: &[BigRational]) -> QPoly {
    let mut acc = QPoly::zero();
    for (i, yi) in ys.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut num = QPoly::constant(BigRational::one());
        let mut den = BigRational::one();
        for (j, xj) in xs.iter().enumerate() {
            if i == j {
                continue;
            }
            num = num.mul(&QPoly::new(vec![-xj.clone(), BigRational::one()]));
            den *= &xs[i] - xj;
        }
        acc = acc.add(&num.scale(&(yi / den)));
    }
    acc
}

// ---------------------------------------------------------------------------
// Minkowski embedding
// ---------------------------------------------------------------------------

/// Embedded Z-basis of an ideal lattice: one row per basis element, with a
/// real coordinate per real place and an (re, im) pair per complex place.
#[derive(Debug, Clone)]
pub struct MinkowskiLattice {
    pub rows: Vec<Vec<RatInterval>>,
    pub elements: Vec<FieldElement>,
    /// Exact covolume is `covol_factor * sqrt|disc|` with
    /// covol_factor = 2^{-s} N(ideal).
    pub covol_factor: BigRational,
}

impl MinkowskiLattice {
    pub fn covolume_enclosure(&self, field: &NumberField, bits: u32) -> RatInterval {
        let disc_abs = BigRational::from_integer(field.discriminant().abs());
        sqrt_enclosure(&disc_abs, bits).scale(&self.covol_factor)
    }
}

/// Embed the ideal lattice at the requested precision.
pub fn minkowski_basis(
    field: &NumberField,
    ideal: &FracIdeal,
    precision_bits: u32,
) -> Result<MinkowskiLattice> {
    let elements = ideal.basis_elements();
    let mut rows = Vec::with_capacity(elements.len());
    for e in &elements {
        rows.push(embedding_row(field, e, precision_bits)?);
    }
    let (_, s) = field.signature();
    let two_pow_s = BigRational::new(BigInt::one(), BigInt::one() << s);
    Ok(MinkowskiLattice {
        rows,
        elements,
        covol_factor: two_pow_s * ideal.norm(field),
    })
}

fn embedding_row(field: &NumberField, e: &FieldElement, bits: u32) -> Result<Vec<RatInterval>> {
    let values = field.embed(e, bits.max(16))?;
    let mut row = Vec::with_capacity(field.degree());
    for value in values {
        match value {
            EmbeddingValue::Real(iv) => row.push(iv),
            EmbeddingValue::Complex(z) => {
                row.push(z.re);
                row.push(z.im);
            }
        }
    }
    Ok(row)
}

/// Column span (start, width) of each place in an embedding row.
fn place_columns(field: &NumberField) -> Vec<(usize, usize)> {
    let mut cols = Vec::with_capacity(field.num_places());
    let mut at = 0usize;
    for place in field.places() {
        let w = match place.kind {
            PlaceKind::Real => 1,
            PlaceKind::Complex => 2,
        };
        cols.push((at, w));
        at += w;
    }
    cols
}

/// Upper bounds (as f64) of the effective per-place radii
/// b_v / |sigma_v(twist)|.
fn effective_bounds_hi(field: &NumberField, region: &H0Region) -> Result<Vec<f64>> {
    let twist_trivial = region.twist == field.one();
    let mut out = Vec::with_capacity(region.bounds.len());
    for (v, b) in region.bounds.iter().enumerate() {
        let eff = if twist_trivial {
            to_f64(b) * (1.0 + 1e-12)
        } else {
            let t = field.embed_at(&region.twist, v, 64)?.abs_sq();
            // b / sqrt(|t|): use the lower bound of |t| for an upper bound.
            let lo = to_f64(&t.lo).max(0.0);
            if lo <= 0.0 {
                return Err(Error::ZeroInversion);
            }
            to_f64(b) / lo.sqrt() * (1.0 + 1e-9)
        };
        out.push(eff);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Floating LLL and Fincke-Pohst enumeration
// ---------------------------------------------------------------------------

/// Textbook floating-point LLL (delta = 0.99) on row vectors, tracking the
/// unimodular transform so candidate coordinates map exactly back to the
/// original basis. Numerical quality affects enumeration speed only.
fn lll_reduce(basis: &mut [Vec<f64>], transform: &mut [Vec<i64>]) {
    let n = basis.len();
    if n <= 1 {
        return;
    }
    let delta = 0.99f64;
    let m = basis[0].len();
    let mut mu = vec![vec![0.0f64; n]; n];
    let mut bstar_sq = vec![0.0f64; n];

    let recompute = |basis: &[Vec<f64>], mu: &mut Vec<Vec<f64>>, bstar_sq: &mut Vec<f64>| {
        let mut bstar = vec![vec![0.0f64; m]; n];
        for i in 0..n {
            bstar[i].copy_from_slice(&basis[i]);
            for j in 0..i {
                let dot: f64 = basis[i].iter().zip(&bstar[j]).map(|(a, b)| a * b).sum();
                mu[i][j] = if bstar_sq[j] > 0.0 { dot / bstar_sq[j] } else { 0.0 };
                for t in 0..m {
                    bstar[i][t] -= mu[i][j] * bstar[j][t];
                }
            }
            bstar_sq[i] = bstar[i].iter().map(|x| x * x).sum();
        }
    };

    recompute(basis, &mut mu, &mut bstar_sq);
    let mut k = 1usize;
    let mut iterations = 0usize;
    let max_iterations = 10_000 + 100 * n * n;
    while k < n && iterations < max_iterations {
        iterations += 1;
        for j in (0..k).rev() {
            let q = mu[k][j].round();
            if q != 0.0 {
                let qi = q as i64;
                for t in 0..m {
                    basis[k][t] -= q * basis[j][t];
                }
                for t in 0..n {
                    transform[k][t] -= qi * transform[j][t];
                }
                recompute(basis, &mut mu, &mut bstar_sq);
            }
        }
        if bstar_sq[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * bstar_sq[k - 1] {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            transform.swap(k, k - 1);
            recompute(basis, &mut mu, &mut bstar_sq);
            k = k.max(2) - 1;
        }
    }
}

struct DfsCtx<'a> {
    mu: Vec<Vec<f64>>,
    bstar_sq: Vec<f64>,
    coords: Vec<i64>,
    radius_sq: f64,
    nodes: u64,
    node_budget: u64,
    visit: &'a mut dyn FnMut(&[i64], f64) -> Result<()>,
}

/// Depth-first enumeration of all integer coordinate vectors c with
/// ||sum c_i row_i||^2 <= radius_sq, reported with that squared norm.
/// Visits the zero vector too.
fn fincke_pohst(
    rows: &[Vec<f64>],
    radius_sq: f64,
    node_budget: u64,
    visit: &mut dyn FnMut(&[i64], f64) -> Result<()>,
) -> Result<u64> {
    let n = rows.len();
    let m = rows[0].len();
    let mut mu = vec![vec![0.0f64; n]; n];
    let mut bstar = vec![vec![0.0f64; m]; n];
    let mut bstar_sq = vec![0.0f64; n];
    for i in 0..n {
        bstar[i].copy_from_slice(&rows[i]);
        for j in 0..i {
            let dot: f64 = rows[i].iter().zip(&bstar[j]).map(|(a, b)| a * b).sum();
            mu[i][j] = if bstar_sq[j] > 0.0 { dot / bstar_sq[j] } else { 0.0 };
            for t in 0..m {
                bstar[i][t] -= mu[i][j] * bstar[j][t];
            }
        }
        bstar_sq[i] = bstar[i].iter().map(|x| x * x).sum();
        if bstar_sq[i] <= 0.0 {
            return Err(Error::RootIsolation);
        }
    }
    let mut ctx = DfsCtx {
        mu,
        bstar_sq,
        coords: vec![0i64; n],
        radius_sq,
        nodes: 0,
        node_budget,
        visit,
    };
    descend(&mut ctx, n as isize - 1, radius_sq)?;
    Ok(ctx.nodes)
}

fn descend(ctx: &mut DfsCtx, level: isize, rem: f64) -> Result<()> {
    if level < 0 {
        let coords = ctx.coords.clone();
        let norm_sq = ctx.radius_sq - rem;
        return (ctx.visit)(&coords, norm_sq);
    }
    let i = level as usize;
    let shift: f64 = (i + 1..ctx.coords.len())
        .map(|j| ctx.mu[j][i] * ctx.coords[j] as f64)
        .sum();
    let half_width = (rem / ctx.bstar_sq[i]).max(0.0).sqrt();
    let lo = (-shift - half_width).ceil() as i64;
    let hi = (-shift + half_width).floor() as i64;
    for c in lo..=hi {
        ctx.nodes += 1;
        if ctx.nodes > ctx.node_budget {
            return Err(Error::NodeBudgetExceeded {
                budget: ctx.node_budget,
            });
        }
        ctx.coords[i] = c;
        let offset = c as f64 + shift;
        let used = offset * offset * ctx.bstar_sq[i];
        if used <= rem {
            descend(ctx, level - 1, rem - used)?;
        }
    }
    ctx.coords[i] = 0;
    Ok(())
}

/// LLL-reduce the rows, enumerate every integer combination with squared
/// norm at most `radius_sq`, and report each with coordinates in the
/// ORIGINAL row basis plus its (floating) squared norm.
pub fn enumerate_scaled_vectors(
    rows: &[Vec<f64>],
    radius_sq: f64,
    node_budget: u64,
    visit: &mut dyn FnMut(&[i64], f64) -> Result<()>,
) -> Result<u64> {
    let n = rows.len();
    let mut reduced: Vec<Vec<f64>> = rows.to_vec();
    let mut transform: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    lll_reduce(&mut reduced, &mut transform);
    fincke_pohst(&reduced, radius_sq, node_budget, &mut |c, norm_sq| {
        let mut orig = vec![0i64; n];
        for (i, &ci) in c.iter().enumerate() {
            if ci == 0 {
                continue;
            }
            for (j, o) in orig.iter_mut().enumerate() {
                *o += ci * transform[i][j];
            }
        }
        visit(&orig, norm_sq)
    })
}

// ---------------------------------------------------------------------------
// H0 counting and enumeration
// ---------------------------------------------------------------------------

fn enumerate_region_members(
    field: &NumberField,
    ideal: &FracIdeal,
    region: &H0Region,
    cfg: &EnumerationConfig,
    on_member: &mut dyn FnMut(FieldElement) -> Result<()>,
) -> Result<()> {
    let n = field.degree();
    let eff = effective_bounds_hi(field, region)?;
    let cols = place_columns(field);
    let lattice = minkowski_basis(field, ideal, cfg.precision_bits)?;

    // Scale columns so the search region becomes the unit product region,
    // contained in the ball of squared radius r + s.
    let mut rows_f64 = vec![vec![0.0f64; n]; n];
    for (i, row) in lattice.rows.iter().enumerate() {
        for (v, &(at, w)) in cols.iter().enumerate() {
            for t in 0..w {
                rows_f64[i][at + t] = row[at + t].mid_f64() / eff[v];
            }
        }
    }
    let radius_sq = (field.num_places() as f64) * (1.0 + 1e-6) + 1e-9;

    // Integer numerators of the ideal basis for fast exact reconstruction.
    let num_rows = ideal.numerator_rows();
    let den = BigRational::from_integer(ideal.denominator().clone());

    enumerate_scaled_vectors(&rows_f64, radius_sq, cfg.node_budget, &mut |m, _| {
        let mut coords = vec![BigInt::zero(); n];
        for (j, &mj) in m.iter().enumerate() {
            if mj == 0 {
                continue;
            }
            let mj = BigInt::from(mj);
            for (t, coord) in coords.iter_mut().enumerate() {
                *coord += &mj * &num_rows[j][t];
            }
        }
        let alpha = FieldElement::new(
            coords
                .into_iter()
                .map(|x| BigRational::from_integer(x) / &den)
                .collect(),
        );
        if exact_membership(field, &alpha, region)? {
            on_member(alpha)?;
        }
        Ok(())
    })?;
    Ok(())
}

/// |H0(a)|: the exact number of elements of the finite part whose
/// archimedean absolute values are at most n_v^{-1} at every place.
pub fn count_h0(field: &NumberField, a: &RepleteIdeal, cfg: &EnumerationConfig) -> Result<u64> {
    let region = H0Region::of_replete(field, a);
    count_in_region(field, &a.finite, &region, cfg)
}

/// Count lattice points of an ideal inside an explicit archimedean region.
pub fn count_in_region(
    field: &NumberField,
    ideal: &FracIdeal,
    region: &H0Region,
    cfg: &EnumerationConfig,
) -> Result<u64> {
    let mut count = 0u64;
    enumerate_region_members(field, ideal, region, cfg, &mut |_| {
        count += 1;
        Ok(())
    })?;
    Ok(count)
}

/// Materialize H0(a) in canonical order (lexicographic on exact
/// coordinates), failing if more than `cap` members appear.
pub fn enumerate_h0(
    field: &NumberField,
    a: &RepleteIdeal,
    cfg: &EnumerationConfig,
    cap: usize,
) -> Result<Vec<FieldElement>> {
    let region = H0Region::of_replete(field, a);
    let mut out: Vec<FieldElement> = vec![];
    enumerate_region_members(field, &a.finite, &region, cfg, &mut |alpha| {
        if out.len() >= cap {
            return Err(Error::ResultCapExceeded { cap });
        }
        out.push(alpha);
        Ok(())
    })?;
    out.sort();
    Ok(out)
}

// ---------------------------------------------------------------------------
// Independent brute-force oracle
// ---------------------------------------------------------------------------

/// Reference counter used for verification: scans a coefficient box derived
/// from the inverse embedding matrix with plain nested loops and the same
/// exact membership test; shares no code with the LLL/Fincke-Pohst path.
pub mod oracle {
    use super::*;

    /// Brute-force |H0(a)| over the coefficient box of the ideal basis.
    pub fn brute_force_count(field: &NumberField, a: &RepleteIdeal, box_budget: u64) -> Result<u64> {
        let region = H0Region::of_replete(field, a);
        brute_force_count_region(field, &a.finite, &region, box_budget)
    }

    pub fn brute_force_count_region(
        field: &NumberField,
        ideal: &FracIdeal,
        region: &H0Region,
        box_budget: u64,
    ) -> Result<u64> {
        let n = field.degree();
        let eff = effective_bounds_hi(field, region)?;
        let cols = place_columns(field);
        let lattice = minkowski_basis(field, ideal, 64)?;
        // Embedding matrix (rows = basis vectors) and its inverse.
        let mut m = vec![vec![0.0f64; n]; n];
        for (i, row) in lattice.rows.iter().enumerate() {
            for j in 0..n {
                m[i][j] = row[j].mid_f64();
            }
        }
        let minv = invert_f64(&m).ok_or(Error::RootIsolation)?;
        // Coefficient bound: coordinates = embedded point times M^{-1}, so
        // |c_i| <= sum over columns of |minv[col][i]| * column bound.
        let mut radii = vec![0i64; n];
        for (i, radius) in radii.iter_mut().enumerate() {
            let mut r = 0.0f64;
            for (v, &(at, w)) in cols.iter().enumerate() {
                for t in 0..w {
                    r += minv[at + t][i].abs() * eff[v];
                }
            }
            *radius = (r * (1.0 + 1e-9)).floor() as i64 + 1;
        }
        let mut total: u64 = 1;
        for &r in &radii {
            total = total.saturating_mul((2 * r + 1) as u64);
        }
        if total > box_budget {
            return Err(Error::NodeBudgetExceeded { budget: box_budget });
        }

        let num_rows = ideal.numerator_rows();
        let den = BigRational::from_integer(ideal.denominator().clone());
        let mut count = 0u64;
        let mut c: Vec<i64> = radii.iter().map(|&r| -r).collect();
        loop {
            let mut coords = vec![BigInt::zero(); n];
            for (j, &cj) in c.iter().enumerate() {
                if cj == 0 {
                    continue;
                }
                let cj = BigInt::from(cj);
                for (t, coord) in coords.iter_mut().enumerate() {
                    *coord += &cj * &num_rows[j][t];
                }
            }
            let alpha = FieldElement::new(
                coords
                    .into_iter()
                    .map(|x| BigRational::from_integer(x) / &den)
                    .collect(),
            );
            if exact_membership(field, &alpha, region)? {
                count += 1;
            }
            // Odometer step.
            let mut k = 0;
            loop {
                if k == n {
                    return Ok(count);
                }
                c[k] += 1;
                if c[k] <= radii[k] {
                    break;
                }
                c[k] = -radii[k];
                k += 1;
            }
        }
    }

    fn invert_f64(m: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
        let n = m.len();
        let mut a: Vec<Vec<f64>> = m.to_vec();
        let mut inv: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { 1.0 } else { 0.0 })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let (pivot, pv) = (col..n)
                .map(|r| (r, a[r][col].abs()))
                .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())?;
            if pv < 1e-300 {
                return None;
            }
            a.swap(pivot, col);
            inv.swap(pivot, col);
            let d = a[col][col];
            for t in 0..n {
                a[col][t] /= d;
                inv[col][t] /= d;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[r][col];
                if f == 0.0 {
                    continue;
                }
                for t in 0..n {
                    a[r][t] -= f * a[col][t];
                    inv[r][t] -= f * inv[col][t];
                }
            }
        }
        Some(inv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::integer_replete;
    use crate::rat::{rat, rat_int};
    use num_traits::ToPrimitive;

    fn cfg() -> EnumerationConfig {
        EnumerationConfig::default()
    }

    fn replete_unit_scaled(field: &NumberField, n_v: BigRational) -> RepleteIdeal {
        RepleteIdeal::new(
            field,
            FracIdeal::unit_ideal(field),
            vec![n_v; field.num_places()],
        )
        .unwrap()
    }

    #[test]
    fn counts_integers_in_interval() {
        let q = NumberField::rationals();
        // Z x (1/10): bound 10, count 21.
        let a = replete_unit_scaled(&q, rat(1, 10));
        assert_eq!(count_h0(&q, &a, &cfg()).unwrap(), 21);
        // Inverse of Z x (10) gives the same region.
        let b = integer_replete(&q, 10).unwrap().inv(&q).unwrap();
        assert_eq!(count_h0(&q, &b, &cfg()).unwrap(), 21);
    }

    #[test]
    fn counts_gauss_circle() {
        let f = NumberField::gaussian();
        let a = replete_unit_scaled(&f, rat(1, 10));
        assert_eq!(count_h0(&f, &a, &cfg()).unwrap(), 317);
    }

    #[test]
    fn counts_real_quadratic_box() {
        let f = NumberField::quadratic(2).unwrap();
        let a = replete_unit_scaled(&f, rat(1, 3));
        assert_eq!(count_h0(&f, &a, &cfg()).unwrap(), 15);
    }

    #[test]
    fn enumerates_in_canonical_order() {
        let q = NumberField::rationals();
        let a = replete_unit_scaled(&q, rat(1, 2));
        let members = enumerate_h0(&q, &a, &cfg(), 100).unwrap();
        let got: Vec<i64> = members
            .iter()
            .map(|e| e.coords[0].to_integer().to_i64().unwrap())
            .collect();
        assert_eq!(got, vec![-2, -1, 0, 1, 2]);

        let f = NumberField::gaussian();
        let a = replete_unit_scaled(&f, rat_int(1));
        let members = enumerate_h0(&f, &a, &cfg(), 100).unwrap();
        assert_eq!(members.len(), 5); // 0, +-1, +-i
        for m in &members {
            let neg = f.neg(m);
            assert!(members.contains(&neg));
        }
        assert!(matches!(
            enumerate_h0(&f, &a, &cfg(), 3),
            Err(Error::ResultCapExceeded { .. })
        ));
    }

    #[test]
    fn boundary_ties_are_inclusive() {
        let f = NumberField::gaussian();
        let region = H0Region::new(&f, vec![rat_int(1)]).unwrap();
        let one = f.one();
        assert!(exact_membership(&f, &one, &region).unwrap());
        // |1+i|^2 = 2 <= (3/2)^2 exactly.
        let a = f.element(vec![rat_int(1), rat_int(1)]).unwrap();
        let region = H0Region::new(&f, vec![rat(3, 2)]).unwrap();
        assert!(exact_membership(&f, &a, &region).unwrap());
        // sqrt2 <= 3/2 at both real places of Q(sqrt2).
        let f = NumberField::quadratic(2).unwrap();
        let theta = f.theta();
        let region = H0Region::new(&f, vec![rat(3, 2), rat(3, 2)]).unwrap();
        assert!(exact_membership(&f, &theta, &region).unwrap());
        // 141/100 < sqrt2: excluded exactly.
        let region = H0Region::new(&f, vec![rat(141, 100), rat(141, 100)]).unwrap();
        assert!(!exact_membership(&f, &theta, &region).unwrap());
    }

    #[test]
    fn tie_certificate_on_cyclotomic_units() {
        // x^4 + 1: all 8th roots of unity have |sigma(zeta)| = 1 at both
        // complex places; ties must be decided inclusively via the
        // pair-product certificate (degree 4, no rational shortcut).
        let f =
            NumberField::make(crate::field::FieldSpec::from_int_poly(&[1, 0, 0, 0, 1])).unwrap();
        let a = replete_unit_scaled(&f, rat_int(1));
        // 0, +-1, +-zeta, +-zeta^2, +-zeta^3.
        assert_eq!(count_h0(&f, &a, &cfg()).unwrap(), 9);
    }

    #[test]
    fn oracle_agrees_on_small_cases() {
        let q = NumberField::rationals();
        let a = replete_unit_scaled(&q, rat(1, 7));
        assert_eq!(
            oracle::brute_force_count(&q, &a, 1_000_000).unwrap(),
            count_h0(&q, &a, &cfg()).unwrap()
        );
        let f = NumberField::gaussian();
        let a = replete_unit_scaled(&f, rat(1, 5));
        assert_eq!(
            oracle::brute_force_count(&f, &a, 1_000_000).unwrap(),
            count_h0(&f, &a, &cfg()).unwrap()
        );
        let f = NumberField::quadratic(3).unwrap();
        let a = replete_unit_scaled(&f, rat(2, 7));
        assert_eq!(
            oracle::brute_force_count(&f, &a, 1_000_000).unwrap(),
            count_h0(&f, &a, &cfg()).unwrap()
        );
    }

    #[test]
    fn count_invariant_under_principal_idele_scaling() {
        // |H0| depends only on the class of the idele modulo the field:
        // multiplying the idele by gamma maps members bijectively.
        let f = NumberField::gaussian();
        let a = replete_unit_scaled(&f, rat(1, 10));
        let base = count_h0(&f, &a, &cfg()).unwrap();
        assert_eq!(base, 317);
        for gamma in [
            f.theta(),
            f.element(vec![rat_int(1), rat_int(1)]).unwrap(),
            f.element(vec![rat_int(2), rat_int(-1)]).unwrap(),
        ] {
            let scaled = crate::ideal::IdelePresentation::from_replete(&a)
                .mul_principal(&f, &gamma)
                .unwrap()
                .to_replete(&f);
            assert_eq!(count_h0(&f, &scaled, &cfg()).unwrap(), base);
        }
    }

    #[test]
    fn minkowski_covolume_identity() {
        // |det| = 2^{-s} sqrt|disc| N(a).
        let f = NumberField::gaussian();
        let ideal =
            FracIdeal::principal(&f, &f.element(vec![rat_int(1), rat_int(1)]).unwrap()).unwrap();
        let lat = minkowski_basis(&f, &ideal, 80).unwrap();
        let det = crate::matrix::det_interval(&lat.rows).unwrap().abs();
        let expected = lat.covolume_enclosure(&f, 80);
        assert!(det.overlaps(&expected), "{det:?} vs {expected:?}");
        // Q(sqrt2): unit ideal, |det| = sqrt 8.
        let f = NumberField::quadratic(2).unwrap();
        let lat = minkowski_basis(&f, &FracIdeal::unit_ideal(&f), 80).unwrap();
        let det = crate::matrix::det_interval(&lat.rows).unwrap().abs();
        assert!((det.mid_f64() - 8f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn node_budget_is_enforced() {
        let f = NumberField::gaussian();
        let a = replete_unit_scaled(&f, rat(1, 100));
        let tight = EnumerationConfig {
            precision_bits: 64,
            node_budget: 50,
        };
        assert!(matches!(
            count_h0(&f, &a, &tight),
            Err(Error::NodeBudgetExceeded { .. })
        ));
    }
}
