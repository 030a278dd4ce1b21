//! Certified enclosures of the roots of a squarefree rational polynomial.
//!
//! Real roots are isolated with Sturm's theorem and refined by exact
//! bisection. Complex roots start from a floating Durand-Kerner pass and are
//! certified with an interval Newton operator over rational rectangles:
//! N(Z) = mid(Z) - p(mid)/p'(Z) mapping Z into itself proves existence and
//! uniqueness in Z. Degrees one and two take exact shortcuts.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::interval::{sqrt_enclosure, ComplexRect, RatInterval};
use crate::poly::QPoly;
use crate::rat::{dyadic_ceil, dyadic_floor, pow2_inv, rat};

/// Enclosure of one archimedean root: a real interval, or the rectangle of
/// the root with positive imaginary part for a conjugate pair.
#[derive(Debug, Clone)]
pub enum RootEnclosure {
    Real(RatInterval),
    Complex(ComplexRect),
}

pub const DEFAULT_PRECISION_CAP_BITS: u32 = 4096;

/// Isolate all real roots of `p` as disjoint sign-change intervals.
pub fn isolate_real_roots(p: &QPoly) -> Vec<RatInterval> {
    let n = p.degree();
    if n <= 0 {
        return vec![];
    }
    let chain = p.sturm_chain();
    let bound = p.root_bound();
    let lo = -bound.clone() - BigRational::one();
    let hi = bound + BigRational::one();
    let total = QPoly::count_real_roots_between(&chain, &lo, &hi);
    let mut out = vec![];
    if total > 0 {
        split_interval(p, &chain, lo, hi, total, &mut out);
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    out
}

fn split_interval(
    p: &QPoly,
    chain: &[QPoly],
    lo: BigRational,
    hi: BigRational,
    count: i64,
    out: &mut Vec<RatInterval>,
) {
    if count == 0 {
        return;
    }
    if count == 1 {
        // Shrink until the endpoints have nonzero values of opposite sign so
        // bisection refinement applies afterwards.
        let mut lo = lo;
        let mut hi = hi;
        loop {
            let flo = p.eval(&lo);
            let fhi = p.eval(&hi);
            if flo.is_zero() {
                // Rational root exactly at the endpoint.
                out.push(RatInterval::point(lo));
                return;
            }
            if fhi.is_zero() {
                out.push(RatInterval::point(hi));
                return;
            }
            if flo.is_positive() != fhi.is_positive() {
                out.push(RatInterval::new(lo, hi));
                return;
            }
            // Same sign at both ends: the root is interior to a subinterval.
            let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
            if QPoly::count_real_roots_between(chain, &lo, &mid) == 1 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }
    let mut mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
    // Nudge the midpoint off a root if needed.
    while p.eval(&mid).is_zero() {
        mid = (&lo + &mid) / BigRational::from_integer(BigInt::from(2));
    }
    let left = QPoly::count_real_roots_between(chain, &lo, &mid);
    split_interval(p, chain, lo, mid.clone(), left, out);
    split_interval(p, chain, mid, hi, count - left, out);
}

/// Refine an isolating sign-change interval (or exact point) until its width
/// is at most 2^-bits.
pub fn refine_real_root(p: &QPoly, iv: &RatInterval, bits: u32, cap_bits: u32) -> Result<RatInterval> {
    let tol = pow2_inv(bits);
    if iv.width() <= tol {
        return Ok(iv.clone());
    }
    let mut lo = iv.lo.clone();
    let mut hi = iv.hi.clone();
    let mut f_lo_positive = p.eval(&lo).is_positive();
    let floor_tol = pow2_inv(cap_bits);
    while &hi - &lo > tol {
        if &hi - &lo <= floor_tol {
            return Err(Error::PrecisionExceeded { cap_bits });
        }
        let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
        let fm = p.eval(&mid);
        if fm.is_zero() {
            return Ok(RatInterval::point(mid));
        }
        if fm.is_positive() == f_lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
        f_lo_positive = p.eval(&lo).is_positive();
    }
    Ok(RatInterval::new(lo, hi))
}

/// Refine a certified complex rectangle with the interval Newton operator
/// until max side width is at most 2^-bits.
pub fn refine_complex_root(
    p: &QPoly,
    rect: &ComplexRect,
    bits: u32,
    cap_bits: u32,
) -> Result<ComplexRect> {
    let dp = p.derivative();
    let tol = pow2_inv(bits);
    let mut z = rect.clone();
    let mut stale = 0u32;
    while z.max_width() > tol {
        let (mre, mim) = z.midpoint();
        let mid = ComplexRect::point(mre, mim);
        let num = p.eval_complex(&mid);
        let den = dp.eval_complex(&z);
        let Some(step) = num.div(&den) else {
            return Err(Error::PrecisionExceeded { cap_bits });
        };
        let next = mid.sub(&step);
        let Some(next) = next.intersect(&z) else {
            return Err(Error::PrecisionExceeded { cap_bits });
        };
        let shrunk = next.max_width() < z.max_width();
        // Keep endpoint sizes bounded; round a little past the target.
        z = next.round_out(bits + 8);
        if !shrunk {
            stale += 1;
            if stale > 64 {
                return Err(Error::PrecisionExceeded { cap_bits });
            }
        } else {
            stale = 0;
        }
    }
    Ok(z)
}

/// Isolate every archimedean root of a monic irreducible polynomial:
/// all real roots in ascending order, then one representative per complex
/// conjugate pair (positive imaginary part) ordered by (re, im).
pub fn isolate_all_roots(p: &QPoly, bits: u32) -> Result<Vec<RootEnclosure>> {
    let n = p.degree();
    if n <= 0 {
        return Err(Error::RootIsolation);
    }
    if n == 1 {
        let root = -p.coeff(0) / p.coeff(1);
        return Ok(vec![RootEnclosure::Real(RatInterval::point(root))]);
    }
    if n == 2 {
        return quadratic_roots(p, bits);
    }

    let real = isolate_real_roots(p);
    let r = real.len();
    let s2 = n as usize - r;
    if s2 % 2 != 0 {
        return Err(Error::RootIsolation);
    }
    let s = s2 / 2;
    let mut out: Vec<RootEnclosure> = real
        .iter()
        .map(|iv| refine_real_root(p, iv, bits, DEFAULT_PRECISION_CAP_BITS).map(RootEnclosure::Real))
        .collect::<Result<_>>()?;
    if s == 0 {
        return Ok(out);
    }

    // Floating approximations, then certified rectangles via interval Newton.
    let approx = durand_kerner(p);
    let mut upper: Vec<(f64, f64)> = approx
        .into_iter()
        .filter(|&(_, im)| im > 1e-9)
        .collect();
    if upper.len() != s {
        return Err(Error::RootIsolation);
    }
    upper.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut rects = vec![];
    for (re, im) in upper {
        rects.push(certify_rectangle(p, re, im, bits)?);
    }
    // Certified rectangles plus their conjugates and the real intervals must
    // be pairwise disjoint, which interval Newton's uniqueness already gives
    // per rectangle; validate disjointness across pairs for safety.
    for i in 0..rects.len() {
        for j in i + 1..rects.len() {
            if rects[i].intersect(&rects[j]).is_some() {
                return Err(Error::RootIsolation);
            }
        }
    }
    out.extend(rects.into_iter().map(RootEnclosure::Complex));
    Ok(out)
}

fn quadratic_roots(p: &QPoly, bits: u32) -> Result<Vec<RootEnclosure>> {
    // Roots of a x^2 + b x + c.
    let a = p.coeff(2);
    let b = p.coeff(1);
    let c = p.coeff(0);
    let two_a = &a * BigRational::from_integer(BigInt::from(2));
    let disc = &b * &b - BigRational::from_integer(BigInt::from(4)) * &a * &c;
    let center = -&b / &two_a;
    if disc.is_negative() {
        let s = sqrt_enclosure(&(-&disc), bits + 4);
        let im = s.scale(&two_a.recip().abs());
        Ok(vec![RootEnclosure::Complex(ComplexRect::new(
            RatInterval::point(center),
            im,
        ))])
    } else if disc.is_zero() {
        Ok(vec![RootEnclosure::Real(RatInterval::point(center))])
    } else {
        let s = sqrt_enclosure(&disc, bits + 4);
        let off = s.scale(&two_a.recip().abs());
        let r1 = RatInterval::new(&center - &off.hi, &center - &off.lo);
        let r2 = RatInterval::new(&center + &off.lo, &center + &off.hi);
        Ok(vec![RootEnclosure::Real(r1), RootEnclosure::Real(r2)])
    }
}

/// Grow a rectangle around a floating approximation until interval Newton
/// certifies a unique root inside, then refine to the requested width.
fn certify_rectangle(p: &QPoly, re: f64, im: f64, bits: u32) -> Result<ComplexRect> {
    let dp = p.derivative();
    let scale = re.abs().max(im.abs()).max(1.0);
    let mut radius = scale * 1e-7;
    for _ in 0..60 {
        let rect = rect_around(re, im, radius);
        let (mre, mim) = rect.midpoint();
        let mid = ComplexRect::point(mre, mim);
        let num = p.eval_complex(&mid);
        let den = dp.eval_complex(&rect);
        if let Some(step) = num.div(&den) {
            let next = mid.sub(&step);
            if next.contained_in(&rect) {
                return refine_complex_root(p, &next, bits, DEFAULT_PRECISION_CAP_BITS);
            }
        }
        radius *= 2.0;
    }
    Err(Error::RootIsolation)
}

fn rect_around(re: f64, im: f64, radius: f64) -> ComplexRect {
    let r = BigRational::from_float(radius).unwrap_or_else(|| rat(1, 1_000_000));
    let re_q = BigRational::from_float(re).unwrap_or_else(BigRational::zero);
    let im_q = BigRational::from_float(im).unwrap_or_else(BigRational::zero);
    // Round outward on a coarse grid to keep denominators small.
    let lo_re = dyadic_floor(&(&re_q - &r), 64);
    let hi_re = dyadic_ceil(&(&re_q + &r), 64);
    let lo_im = dyadic_floor(&(&im_q - &r), 64);
    let hi_im = dyadic_ceil(&(&im_q + &r), 64);
    ComplexRect::new(RatInterval::new(lo_re, hi_re), RatInterval::new(lo_im, hi_im))
}

/// Durand-Kerner simultaneous iteration in f64 complex arithmetic.
fn durand_kerner(p: &QPoly) -> Vec<(f64, f64)> {
    let n = p.degree() as usize;
    let coeffs: Vec<f64> = p.0.iter().map(crate::rat::to_f64).collect();
    let lead = coeffs[n];
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    let eval = |z: (f64, f64)| -> (f64, f64) {
        let mut acc = (0.0f64, 0.0f64);
        for k in (0..=n).rev() {
            acc = (
                acc.0 * z.0 - acc.1 * z.1 + monic[k],
                acc.0 * z.1 + acc.1 * z.0,
            );
        }
        acc
    };
    // Start on a slightly irrational spiral to break symmetry.
    let mut roots: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64) + 0.4;
            let r = 1.0 + 0.3 * (k as f64) / (n as f64);
            (r * ang.cos(), r * ang.sin())
        })
        .collect();
    for _ in 0..200 {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let zi = roots[i];
            let mut denom = (1.0f64, 0.0f64);
            for (j, &zj) in roots.iter().enumerate() {
                if j == i {
                    continue;
                }
                let d = (zi.0 - zj.0, zi.1 - zj.1);
                denom = (denom.0 * d.0 - denom.1 * d.1, denom.0 * d.1 + denom.1 * d.0);
            }
            let val = eval(zi);
            let dn = denom.0 * denom.0 + denom.1 * denom.1;
            if dn == 0.0 {
                continue;
            }
            let step = (
                (val.0 * denom.0 + val.1 * denom.1) / dn,
                (val.1 * denom.0 - val.0 * denom.1) / dn,
            );
            roots[i] = (zi.0 - step.0, zi.1 - step.1);
            max_step = max_step.max(step.0.hypot(step.1));
        }
        if max_step < 1e-14 {
            break;
        }
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_int;

    #[test]
    fn isolates_quadratic_surds() {
        let p = QPoly::from_ints(&[-2, 0, 1]);
        let roots = isolate_all_roots(&p, 80).unwrap();
        assert_eq!(roots.len(), 2);
        match (&roots[0], &roots[1]) {
            (RootEnclosure::Real(a), RootEnclosure::Real(b)) => {
                assert!(a.hi < b.lo);
                assert!(a.contains(&BigRational::from_float(-std::f64::consts::SQRT_2).unwrap())
                    || a.width() < pow2_inv(70));
                assert!((b.mid_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
            }
            _ => panic!("expected two real roots"),
        }
    }

    #[test]
    fn isolates_gaussian_pair() {
        let p = QPoly::from_ints(&[1, 0, 1]);
        let roots = isolate_all_roots(&p, 80).unwrap();
        assert_eq!(roots.len(), 1);
        match &roots[0] {
            RootEnclosure::Complex(z) => {
                assert!(z.re.contains(&BigRational::zero()));
                assert!(z.im.contains(&rat_int(1)));
            }
            _ => panic!("expected a complex pair"),
        }
    }

    #[test]
    fn isolates_cubic_mixed_signature() {
        // x^3 - 2: one real root (cbrt 2), one conjugate pair.
        let p = QPoly::from_ints(&[-2, 0, 0, 1]);
        let roots = isolate_all_roots(&p, 100).unwrap();
        assert_eq!(roots.len(), 2);
        let cbrt2 = 2f64.powf(1.0 / 3.0);
        match &roots[0] {
            RootEnclosure::Real(iv) => assert!((iv.mid_f64() - cbrt2).abs() < 1e-12),
            _ => panic!("first root should be real"),
        }
        match &roots[1] {
            RootEnclosure::Complex(z) => {
                assert!((z.re.mid_f64() + cbrt2 / 2.0).abs() < 1e-12);
                assert!((z.im.mid_f64() - cbrt2 * 3f64.sqrt() / 2.0).abs() < 1e-12);
                assert!(z.max_width() <= pow2_inv(100));
            }
            _ => panic!("second root should be complex"),
        }
    }

    #[test]
    fn isolates_totally_real_quartic() {
        // x^4 - 5x^2 + 6 wait that's reducible; use x^4 - 4x^2 + 1 (roots +-sqrt(2+-sqrt3)).
        let p = QPoly::from_ints(&[1, 0, -4, 0, 1]);
        let roots = isolate_all_roots(&p, 80).unwrap();
        assert_eq!(roots.len(), 4);
        for r in &roots {
            assert!(matches!(r, RootEnclosure::Real(_)));
        }
    }

    #[test]
    fn quartic_with_two_pairs() {
        // x^4 + 1: two conjugate pairs.
        let p = QPoly::from_ints(&[1, 0, 0, 0, 1]);
        let roots = isolate_all_roots(&p, 80).unwrap();
        assert_eq!(roots.len(), 2);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match &roots[0] {
            RootEnclosure::Complex(z) => {
                assert!((z.re.mid_f64() + h).abs() < 1e-12);
                assert!((z.im.mid_f64() - h).abs() < 1e-12);
            }
            _ => panic!(),
        }
    }
}
