//! Singular values and log-determinants via one-sided Jacobi, which keeps
//! small singular values accurate without forming AᵀA.

use crate::numerics::matrix::{dot, DenseMatrix};
use crate::numerics::NumericsError;
use crate::scalar::Real;

/// Thin SVD `A = U diag(σ) Vᵀ`, singular values descending.
#[derive(Clone, Debug)]
pub struct Svd<R> {
    pub u: DenseMatrix<R>,
    pub singular_values: Vec<R>,
    pub v: DenseMatrix<R>,
}

/// One-sided Jacobi SVD. Orthogonalizes the columns of `A` by plane
/// rotations; column norms converge to the singular values.
pub fn svd<R: Real>(a: &DenseMatrix<R>) -> Result<Svd<R>, NumericsError> {
    if !a.all_finite() {
        return Err(NumericsError::NonFinite);
    }
    let transposed = a.rows() < a.cols();
    let work = if transposed { a.transpose() } else { a.clone() };
    let (m, n) = (work.rows(), work.cols());

    let mut u = work;
    let mut v = DenseMatrix::<R>::identity(n);
    let eps = R::epsilon() * R::of(8.0);
    let max_sweeps = 60usize;
    let mut converged = false;
    for _ in 0..max_sweeps {
        let mut off = R::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                let (cp, cq) = (u.column(p), u.column(q));
                let alpha = dot(&cp, &cp);
                let beta = dot(&cq, &cq);
                let gamma = dot(&cp, &cq);
                if gamma == R::zero() {
                    continue;
                }
                let denom = (alpha * beta).sqrt();
                if denom > R::zero() {
                    off = off.max(gamma.abs() / denom);
                }
                if gamma.abs() <= eps * denom {
                    continue;
                }
                // Rotation zeroing the (p,q) inner product.
                let zeta = (beta - alpha) / (R::of(2.0) * gamma);
                let t = {
                    let s = if zeta >= R::zero() { R::one() } else { -R::one() };
                    s / (zeta.abs() + (R::one() + zeta * zeta).sqrt())
                };
                let c = R::one() / (R::one() + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let (up, uq) = (u[(i, p)], u[(i, q)]);
                    u[(i, p)] = c * up - s * uq;
                    u[(i, q)] = s * up + c * uq;
                }
                for i in 0..n {
                    let (vp, vq) = (v[(i, p)], v[(i, q)]);
                    v[(i, p)] = c * vp - s * vq;
                    v[(i, q)] = s * vp + c * vq;
                }
            }
        }
        if off <= eps {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(NumericsError::NoConvergence {
            iterations: max_sweeps,
        });
    }

    // Extract singular values / normalize U columns.
    let mut sv: Vec<(R, usize)> = (0..n)
        .map(|j| {
            let col = u.column(j);
            (dot(&col, &col).sqrt(), j)
        })
        .collect();
    sv.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let order: Vec<usize> = sv.iter().map(|&(_, j)| j).collect();
    let singular_values: Vec<R> = sv.iter().map(|&(s, _)| s).collect();
    let mut u_sorted = u.select_columns(&order);
    let v_sorted = v.select_columns(&order);
    for (j, &s) in singular_values.iter().enumerate() {
        if s > R::zero() {
            let inv = R::one() / s;
            for i in 0..m {
                u_sorted[(i, j)] = u_sorted[(i, j)] * inv;
            }
        }
    }

    if transposed {
        Ok(Svd {
            u: v_sorted,
            singular_values,
            v: u_sorted,
        })
    } else {
        Ok(Svd {
            u: u_sorted,
            singular_values,
            v: v_sorted,
        })
    }
}

/// Singular values only, descending.
pub fn singular_values<R: Real>(a: &DenseMatrix<R>) -> Result<Vec<R>, NumericsError> {
    Ok(svd(a)?.singular_values)
}

/// `log |det A|` for square nonsingular `A` (smallest singular value must
/// exceed `1e-12` of the largest).
pub fn log_abs_det<R: Real>(a: &DenseMatrix<R>) -> Result<R, NumericsError> {
    if !a.is_square() {
        return Err(NumericsError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if a.rows() == 0 {
        return Ok(R::zero());
    }
    let sv = singular_values(a)?;
    let smax = sv[0];
    let smin = sv[sv.len() - 1];
    if smax == R::zero() || smin <= R::of(1e-12) * smax {
        return Err(NumericsError::Singular);
    }
    Ok(sv.into_iter().map(|s| s.ln()).sum())
}

/// Sum of `log σ` over singular values above `rank_tol * σ_max`, together
/// with the numerical rank. The zero matrix (zero map) reports `(0, 0)`.
pub fn log_pseudo_det<R: Real>(
    a: &DenseMatrix<R>,
    rank_tol: R,
) -> Result<(R, usize), NumericsError> {
    if a.rows() == 0 || a.cols() == 0 {
        return Ok((R::zero(), 0));
    }
    let sv = singular_values(a)?;
    let smax = sv[0];
    if smax == R::zero() {
        return Ok((R::zero(), 0));
    }
    let cut = rank_tol * smax;
    let kept: Vec<R> = sv.into_iter().filter(|&s| s > cut).collect();
    let rank = kept.len();
    Ok((kept.into_iter().map(|s| s.ln()).sum(), rank))
}

/// Default relative rank tolerance for combinatorial maps (entries O(1),
/// well-separated singular values).
pub fn default_rank_tol<R: Real>() -> R {
    R::of(1e-10)
}

/// Least-squares solve via the pseudo-inverse, `x = V Σ⁺ Uᵀ b`.
pub fn pinv_solve<R: Real>(
    svd: &Svd<R>,
    b: &[R],
    rank_tol: R,
) -> Vec<R> {
    let smax = svd.singular_values.first().copied().unwrap_or(R::zero());
    let cut = rank_tol * smax;
    let utb = svd.u.transpose().matvec(b);
    let mut y = vec![R::zero(); svd.v.cols()];
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s > cut {
            y[k] = utb[k] / s;
        }
    }
    svd.v.matvec(&y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_logdet_zero() {
        for n in [1usize, 4, 9] {
            let a = DenseMatrix::<f64>::identity(n);
            assert!(log_abs_det(&a).unwrap().abs() < 1e-14);
        }
    }

    #[test]
    fn reciprocal_pair() {
        let a = DenseMatrix::diagonal(&[2.0, 0.5]);
        assert!(log_abs_det(&a).unwrap().abs() < 1e-14);
    }

    #[test]
    fn matches_singular_value_product() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let n = 10;
        let a = DenseMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0f64));
        // Independent oracle: LU with partial pivoting.
        let mut lu = a.clone();
        let mut log_det = 0.0f64;
        for k in 0..n {
            let mut piv = k;
            for i in (k + 1)..n {
                if lu[(i, k)].abs() > lu[(piv, k)].abs() {
                    piv = i;
                }
            }
            if piv != k {
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(piv, j)];
                    lu[(piv, j)] = t;
                }
            }
            log_det += lu[(k, k)].abs().ln();
            for i in (k + 1)..n {
                let f = lu[(i, k)] / lu[(k, k)];
                for j in k..n {
                    let delta = f * lu[(k, j)];
                    lu[(i, j)] -= delta;
                }
            }
        }
        let got = log_abs_det(&a).unwrap();
        assert!((got - log_det).abs() < 1e-9, "{got} vs {log_det}");
    }

    #[test]
    fn zero_matrix_pseudo_det_convention() {
        let a = DenseMatrix::<f64>::zeros(3, 4);
        assert_eq!(log_pseudo_det(&a, 1e-10).unwrap(), (0.0, 0));
    }

    #[test]
    fn diag_3_0() {
        let a = DenseMatrix::diagonal(&[3.0, 0.0]);
        let (ld, rank) = log_pseudo_det(&a, 1e-10).unwrap();
        assert_eq!(rank, 1);
        assert!((ld - 3.0f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn rank_two_4x4() {
        // Rank-2 built from two outer products with known singular values.
        let u1 = [0.5, 0.5, 0.5, 0.5];
        let u2 = [0.5, -0.5, 0.5, -0.5];
        let mut a = DenseMatrix::<f64>::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                a[(i, j)] = 3.0 * u1[i] * u1[j] + 0.25 * u2[i] * u2[j];
            }
        }
        let (ld, rank) = log_pseudo_det(&a, 1e-10).unwrap();
        assert_eq!(rank, 2);
        assert!((ld - (3.0f64.ln() + 0.25f64.ln())).abs() < 1e-10);
    }

    #[test]
    fn svd_reconstructs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let a = DenseMatrix::from_fn(6, 4, |_, _| rng.gen_range(-1.0..1.0f64));
        let dec = svd(&a).unwrap();
        let sigma = DenseMatrix::diagonal(&dec.singular_values);
        let rec = dec.u.matmul(&sigma).matmul(&dec.v.transpose());
        assert!(rec.sub(&a).max_abs() < 1e-12);
    }
}
