//! Symmetric tridiagonal eigensolver: implicit-shift QL with Wilkinson-type
//! shifts, accumulating Givens rotations into the eigenvector matrix.
//!
//! Deterministic by construction: the rotation sequence depends only on the
//! input entries, and the output is sorted and sign-normalized.

use crate::error::{QrmaError, Result};
use crate::model::TridiagonalBlock;

/// Iteration cap per eigenvalue.
const MAX_ITER: usize = 200;

/// Energies closer than this are treated as degenerate when ordering.
pub(crate) const DEGENERACY_TOL: f64 = 1e-12;

/// Full eigen-decomposition of a symmetric tridiagonal matrix.
#[derive(Debug, Clone)]
pub struct TridiagonalEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// `vectors[i]` belongs to `values[i]`; empty when vectors were not requested.
    pub vectors: Vec<Vec<f64>>,
}

fn pythag(a: f64, b: f64) -> f64 {
    a.hypot(b)
}

/// Index of the first component that is nonzero relative to the vector's
/// largest entry (roundoff-level entries are skipped).
pub(crate) fn leading_index(v: &[f64]) -> usize {
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let cut = scale * 1e-10;
    v.iter().position(|x| x.abs() > cut).unwrap_or(0)
}

/// Flip `v` so its first significant component is positive.
pub(crate) fn normalize_sign(v: &mut [f64]) {
    let i = leading_index(v);
    if v.get(i).is_some_and(|&x| x < 0.0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Eigenvalues (and optionally eigenvectors) of `block`.
pub fn tridiagonal_eigen(block: &TridiagonalBlock, want_vectors: bool) -> Result<TridiagonalEigen> {
    let n = block.len();
    let mut d = block.diag.clone();
    let mut e = block.offdiag.clone();
    e.push(0.0);

    // z[i] is the i-th column of the accumulated rotation matrix
    let mut z: Vec<Vec<f64>> = if want_vectors {
        (0..n)
            .map(|i| {
                let mut c = vec![0.0; n];
                c[i] = 1.0;
                c
            })
            .collect()
    } else {
        Vec::new()
    };

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_ITER {
                return Err(QrmaError::NoConvergence {
                    index: l,
                    iterations: MAX_ITER,
                });
            }

            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = pythag(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;

            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = pythag(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;

                if want_vectors {
                    let (left, right) = z.split_at_mut(i + 1);
                    let zi = &mut left[i];
                    let zj = &mut right[0];
                    for (a, b) in zi.iter_mut().zip(zj.iter_mut()) {
                        let t = *b;
                        *b = s * *a + c * t;
                        *a = c * *a - s * t;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    if d.iter().any(|x| !x.is_finite()) {
        return Err(QrmaError::NoConvergence {
            index: d.iter().position(|x| !x.is_finite()).unwrap_or(0),
            iterations: MAX_ITER,
        });
    }

    if want_vectors {
        for v in z.iter_mut() {
            normalize_sign(v);
        }
        let mut order: Vec<usize> = (0..n).collect();
        let leads: Vec<usize> = z.iter().map(|v| leading_index(v)).collect();
        order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
        // Runs of neighbours closer than the tolerance count as one
        // degenerate level and are reordered by leading index.
        let mut start = 0;
        while start < n {
            let mut end = start + 1;
            while end < n && d[order[end]] - d[order[end - 1]] < DEGENERACY_TOL {
                end += 1;
            }
            order[start..end].sort_by(|&a, &b| leads[a].cmp(&leads[b]).then(d[a].total_cmp(&d[b])));
            start = end;
        }
        let values = order.iter().map(|&i| d[i]).collect();
        let mut slots: Vec<Option<Vec<f64>>> = z.into_iter().map(Some).collect();
        let vectors = order
            .iter()
            .map(|&i| slots[i].take().unwrap_or_default())
            .collect();
        Ok(TridiagonalEigen { values, vectors })
    } else {
        d.sort_by(|a, b| a.total_cmp(b));
        Ok(TridiagonalEigen {
            values: d,
            vectors: Vec::new(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn block(diag: &[f64], off: &[f64]) -> TridiagonalBlock {
        TridiagonalBlock::new(diag.to_vec(), off.to_vec()).unwrap()
    }

    fn residual(b: &TridiagonalBlock, lambda: f64, v: &[f64]) -> f64 {
        let n = b.len();
        (0..n)
            .map(|i| {
                let mut y = b.diag[i] * v[i] - lambda * v[i];
                if i > 0 {
                    y += b.offdiag[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    y += b.offdiag[i] * v[i + 1];
                }
                y.abs()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn one_by_one() {
        let r = tridiagonal_eigen(&block(&[3.5], &[]), true).unwrap();
        assert_eq!(r.values, vec![3.5]);
        assert_eq!(r.vectors, vec![vec![1.0]]);
    }

    #[test]
    fn diagonal_input_sorted_with_unit_vectors() {
        let r = tridiagonal_eigen(&block(&[2.0, -1.0, 0.5, 0.5], &[0.0, 0.0, 0.0]), true).unwrap();
        assert_eq!(r.values, vec![-1.0, 0.5, 0.5, 2.0]);
        assert_eq!(r.vectors[0], vec![0.0, 1.0, 0.0, 0.0]);
        // degenerate pair ordered by leading index
        assert_eq!(r.vectors[1], vec![0.0, 0.0, 1.0, 0.0]);
        assert_eq!(r.vectors[2], vec![0.0, 0.0, 0.0, 1.0]);
        assert_eq!(r.vectors[3], vec![1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn two_by_two_closed_form() {
        let (omega, ft) = (1.3, 0.45);
        let r = tridiagonal_eigen(&block(&[0.0, omega], &[-ft]), true).unwrap();
        let c = omega / 2.0;
        let rad = (omega * omega / 4.0 + ft * ft).sqrt();
        assert_abs_diff_eq!(r.values[0], c - rad, epsilon = 1e-14);
        assert_abs_diff_eq!(r.values[1], c + rad, epsilon = 1e-14);
        for v in &r.vectors {
            assert!(v[0] > 0.0);
        }
    }

    #[test]
    fn uniform_chain_matches_analytic_spectrum() {
        // tridiag(0, 1) of size n has eigenvalues 2 cos(kπ/(n+1))
        let n = 50;
        let r = tridiagonal_eigen(&block(&vec![0.0; n], &vec![1.0; n - 1]), true).unwrap();
        let mut exact: Vec<f64> = (1..=n)
            .map(|k| 2.0 * (k as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos())
            .collect();
        exact.sort_by(|a, b| a.total_cmp(b));
        for (a, b) in r.values.iter().zip(&exact) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn eigenpairs_are_orthonormal_and_satisfy_the_equation() {
        let n = 60;
        let diag: Vec<f64> = (0..n).map(|i| i as f64 + 0.5 * (-1f64).powi(i)).collect();
        let off: Vec<f64> = (0..n - 1).map(|i| -0.8 * ((i + 1) as f64).sqrt()).collect();
        let b = block(&diag, &off);
        let r = tridiagonal_eigen(&b, true).unwrap();
        for w in r.values.windows(2) {
            assert!(w[0] <= w[1]);
        }
        for (i, vi) in r.vectors.iter().enumerate() {
            assert!(residual(&b, r.values[i], vi) < 1e-10);
            assert!(vi[leading_index(vi)] > 0.0);
            for (j, vj) in r.vectors.iter().enumerate() {
                let dot: f64 = vi.iter().zip(vj).map(|(a, b)| a * b).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(dot, expect, epsilon = 1e-10);
            }
        }
        let values_only = tridiagonal_eigen(&b, false).unwrap();
        for (a, b) in values_only.values.iter().zip(&r.values) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-11);
        }
    }

    #[test]
    fn repeat_calls_are_bit_identical() {
        let diag: Vec<f64> = (0..30).map(|i| (i as f64).sin()).collect();
        let off: Vec<f64> = (0..29).map(|i| (i as f64 * 0.7).cos()).collect();
        let b = block(&diag, &off);
        let r1 = tridiagonal_eigen(&b, true).unwrap();
        let r2 = tridiagonal_eigen(&b, true).unwrap();
        assert_eq!(r1.values, r2.values);
        assert_eq!(r1.vectors, r2.vectors);
    }
}
