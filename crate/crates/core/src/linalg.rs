//! Dense exact linear algebra over the rationals.
//!
//! Matrices are plain row-major `Vec<Vec<BigRational>>`; sizes in this crate
//! never exceed a few dozen rows, so Gaussian elimination with exact
//! arithmetic is enough.

use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Matrix = Vec<Vec<BigRational>>;

/// Reduced row echelon form. Returns the reduced matrix and pivot columns.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    let t = &a[r][j] * &f;
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(m: &Matrix) -> usize {
    rref(m).1.len()
}

pub fn determinant(m: &Matrix) -> BigRational {
    let n = m.len();
    let mut a = m.clone();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        let inv = a[c][c].recip();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..n {
                let t = &a[c][j] * &f;
                a[i][j] -= t;
            }
        }
    }
    det
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            r
        })
        .collect();
    let (red, piv) = rref(&aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(red.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Basis of the right kernel `{v : m v = 0}`; `cols` is needed when `m` has no rows.
pub fn nullspace(m: &Matrix, cols: usize) -> Vec<Vec<BigRational>> {
    if m.is_empty() {
        return (0..cols)
            .map(|i| {
                (0..cols)
                    .map(|j| {
                        if i == j {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
    }
    let (red, piv) = rref(m);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (r, &p) in piv.iter().enumerate() {
                v[p] = -red[r][f].clone();
            }
            v
        })
        .collect()
}

/// Solve `m x = rhs`. Returns `None` when inconsistent, otherwise one
/// particular solution (free variables set to zero) and a kernel basis.
pub fn solve_affine(
    m: &Matrix,
    rhs: &[BigRational],
    cols: usize,
) -> Option<(Vec<BigRational>, Vec<Vec<BigRational>>)> {
    let aug: Matrix = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let (red, piv) = rref(&aug);
    if piv.contains(&cols) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (r, &p) in piv.iter().enumerate() {
        x[p] = red[r][cols].clone();
    }
    Some((x, nullspace(m, cols)))
}

pub fn mat_vec(m: &Matrix, v: &[BigRational]) -> Vec<BigRational> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    fn mat(rows: &[&[i64]]) -> Matrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| q(x)).collect())
            .collect()
    }

    #[test]
    fn det_and_inverse() {
        let m = mat(&[&[2, 1], &[7, 4]]);
        assert_eq!(determinant(&m), q(1));
        let inv = inverse(&m).unwrap();
        assert_eq!(inv, mat(&[&[4, -1], &[-7, 2]]));
        assert!(inverse(&mat(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn kernel_of_rank_one() {
        let m = mat(&[&[1, 2, 3]]);
        let k = nullspace(&m, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mat_vec(&m, v).iter().all(Zero::is_zero));
        }
        assert_eq!(rank(&m), 1);
    }

    #[test]
    fn inconsistent_system() {
        let m = mat(&[&[2, 0], &[0, 3], &[1, 2]]);
        let half = BigRational::new(1.into(), 2.into());
        assert!(solve_affine(&m, &[q(1), q(1), q(1)], 2).is_none());
        let (x, k) = solve_affine(&m[..2].to_vec(), &[q(1), q(1)], 2).unwrap();
        assert_eq!(x[0], half);
        assert!(k.is_empty());
    }
}
