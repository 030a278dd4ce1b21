//! Small exact matrices: rational determinants and inverses, integer
//! Hermite Normal Form, and interval determinants for covolume checks.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::interval::RatInterval;

/// Determinant by fraction-preserving Gaussian elimination.
pub fn det_rational(mat: &[Vec<BigRational>]) -> BigRational {
    let n = mat.len();
    if n == 0 {
        return BigRational::one();
    }
    let mut m: Vec<Vec<BigRational>> = mat.to_vec();
    let mut det = BigRational::one();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero());
        let Some(p) = pivot else {
            return BigRational::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pv = m[col][col].clone();
        det *= &pv;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &pv;
            for c in col..n {
                let sub = &f * &m[col][c];
                m[r][c] -= sub;
            }
        }
    }
    det
}

/// Inverse by Gauss-Jordan elimination; None if singular.
pub fn inverse_rational(mat: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = mat.len();
    let mut a: Vec<Vec<BigRational>> = mat.to_vec();
    let mut inv = identity_rational(n);
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(pivot, col);
        inv.swap(pivot, col);
        let pv = a[col][col].clone();
        for c in 0..n {
            a[col][c] /= &pv;
            inv[col][c] /= &pv;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in 0..n {
                let s1 = &f * &a[col][c];
                a[r][c] -= s1;
                let s2 = &f * &inv[col][c];
                inv[r][c] -= s2;
            }
        }
    }
    Some(inv)
}

pub fn identity_rational(n: usize) -> Vec<Vec<BigRational>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// Row vector times matrix.
pub fn row_times_matrix(row: &[BigRational], mat: &[Vec<BigRational>]) -> Vec<BigRational> {
    let n = mat[0].len();
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in row.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for j in 0..n {
            out[j] += x * &mat[i][j];
        }
    }
    out
}

pub fn transpose_rational(mat: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let rows = mat.len();
    let cols = mat[0].len();
    (0..cols)
        .map(|j| (0..rows).map(|i| mat[i][j].clone()).collect())
        .collect()
}

/// Canonical row-style Hermite Normal Form of the lattice spanned by the
/// given integer rows: upper triangular, positive diagonal, entries above
/// each diagonal reduced into [0, diag). Returns one row per lattice rank.
pub fn hnf(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    if rows.is_empty() {
        return vec![];
    }
    let ncols = rows[0].len();
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let mut rank = 0usize;
    for col in 0..ncols {
        // Euclidean reduction of column `col` among rows rank..
        loop {
            let mut best: Option<usize> = None;
            for r in rank..m.len() {
                if m[r][col].is_zero() {
                    continue;
                }
                match best {
                    None => best = Some(r),
                    Some(b) => {
                        if m[r][col].abs() < m[b][col].abs() {
                            best = Some(r);
                        }
                    }
                }
            }
            let Some(b) = best else { break };
            m.swap(rank, b);
            let mut done = true;
            let pivot = m[rank][col].clone();
            for r in rank + 1..m.len() {
                if m[r][col].is_zero() {
                    continue;
                }
                let q = div_round(&m[r][col], &pivot);
                for c in 0..ncols {
                    let s = &q * &m[rank][c];
                    m[r][c] -= s;
                }
                if !m[r][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if rank < m.len() && !m[rank][col].is_zero() {
            if m[rank][col].is_negative() {
                for c in 0..ncols {
                    m[rank][c] = -m[rank][c].clone();
                }
            }
            // Reduce the entries above the new pivot into [0, pivot).
            let pivot = m[rank][col].clone();
            for r in 0..rank {
                let q = m[r][col].div_floor(&pivot);
                if q.is_zero() {
                    continue;
                }
                for c in 0..ncols {
                    let s = &q * &m[rank][c];
                    m[r][c] -= s;
                }
            }
            rank += 1;
        }
    }
    m.truncate(rank);
    m
}

/// Nearest-integer quotient (any consistent tie rule works for the
/// reduction loop).
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let q = a.div_floor(b);
    let r = a - &q * b;
    if BigInt::from(2) * r.abs() >= b.abs() {
        q + BigInt::one()
    } else {
        q
    }
}

/// Interval determinant via Gaussian elimination; None when a pivot
/// straddles zero (caller should refine inputs).
pub fn det_interval(mat: &[Vec<RatInterval>]) -> Option<RatInterval> {
    let n = mat.len();
    let mut m: Vec<Vec<RatInterval>> = mat.to_vec();
    let mut det = RatInterval::from_int(1);
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].contains_zero())?;
        if pivot != col {
            m.swap(pivot, col);
            det = det.neg();
        }
        let pv = m[col][col].clone();
        det = det.mul(&pv);
        let inv = pv.recip();
        for r in col + 1..n {
            if m[r][col].contains_zero() && m[r][col].width().is_zero() {
                continue;
            }
            let f = m[r][col].mul(&inv);
            for c in col..n {
                let s = f.mul(&m[col][c]);
                m[r][c] = m[r][c].sub(&s);
            }
        }
    }
    Some(det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn zrow(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn determinant_and_inverse() {
        let m = vec![
            vec![rat_int(2), rat_int(1)],
            vec![rat_int(1), rat_int(3)],
        ];
        assert_eq!(det_rational(&m), rat_int(5));
        let inv = inverse_rational(&m).unwrap();
        assert_eq!(inv[0][0], rat(3, 5));
        assert_eq!(inv[0][1], rat(-1, 5));
        let singular = vec![
            vec![rat_int(1), rat_int(2)],
            vec![rat_int(2), rat_int(4)],
        ];
        assert!(inverse_rational(&singular).is_none());
        assert_eq!(det_rational(&singular), rat_int(0));
    }

    #[test]
    fn hnf_canonical_examples() {
        // Lattice generated by (1,1) and (0,2) over Z^2 (the ideal (1+i) in Z[i]).
        let h = hnf(&[zrow(&[1, 1]), zrow(&[-1, 1])]);
        assert_eq!(h, vec![zrow(&[1, 1]), zrow(&[0, 2])]);
        // Permuted and negated generators give the identical canonical form.
        let h2 = hnf(&[zrow(&[-1, -1]), zrow(&[1, -1]), zrow(&[0, 2])]);
        assert_eq!(h, h2);
        // Scalar lattice 2Z^2.
        let h = hnf(&[zrow(&[2, 0]), zrow(&[0, 2])]);
        assert_eq!(h, vec![zrow(&[2, 0]), zrow(&[0, 2])]);
        // Rank-deficient input keeps only independent rows.
        let h = hnf(&[zrow(&[1, 2]), zrow(&[2, 4])]);
        assert_eq!(h, vec![zrow(&[1, 2])]);
    }

    #[test]
    fn hnf_reduces_above_diagonal() {
        let h = hnf(&[zrow(&[1, 7]), zrow(&[0, 3])]);
        assert_eq!(h, vec![zrow(&[1, 1]), zrow(&[0, 3])]);
    }

    #[test]
    fn interval_det_brackets_exact() {
        let eps = rat(1, 1000);
        let iv = |c: i64| RatInterval::new(rat_int(c) - eps.clone(), rat_int(c) + eps.clone());
        let m = vec![vec![iv(2), iv(1)], vec![iv(1), iv(3)]];
        let d = det_interval(&m).unwrap();
        assert!(d.contains(&rat_int(5)));
    }
}
