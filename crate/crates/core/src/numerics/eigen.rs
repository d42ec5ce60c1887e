//! Symmetric eigensolver: Householder reduction to tridiagonal form followed
//! by the implicit-shift QL iteration, with a cyclic Jacobi fallback if QL
//! stalls. Follows the classic Handbook/EISPACK route (tred2/tql2).

use crate::numerics::matrix::DenseMatrix;
use crate::numerics::NumericsError;
use crate::scalar::Real;

/// Result of a symmetric eigendecomposition: `A = V diag(λ) Vᵀ` with the
/// eigenvalues ascending and `V` orthogonal (eigenvectors in columns).
#[derive(Clone, Debug)]
pub struct SpectralDecomposition<R> {
    pub eigenvalues: Vec<R>,
    pub eigenvectors: DenseMatrix<R>,
}

/// Symmetric tridiagonal matrix given by its diagonal and subdiagonal.
#[derive(Clone, Debug)]
pub struct SymTridiagonal<R> {
    pub diag: Vec<R>,
    pub off: Vec<R>,
}

impl<R: Real> SymTridiagonal<R> {
    pub fn new(diag: Vec<R>, off: Vec<R>) -> Self {
        assert!(off.len() + 1 == diag.len() || diag.is_empty() && off.is_empty());
        Self { diag, off }
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    /// Eigenvalues only (no vector accumulation), ascending.
    pub fn eigenvalues(&self) -> Result<Vec<R>, NumericsError> {
        let mut d = self.diag.clone();
        let mut e = self.off.clone();
        e.push(R::zero());
        ql_implicit(&mut d, &mut e, None)?;
        d.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(d)
    }

    /// Full eigensystem of the tridiagonal matrix.
    pub fn eigen_system(&self) -> Result<SpectralDecomposition<R>, NumericsError> {
        let n = self.n();
        let mut d = self.diag.clone();
        let mut e = self.off.clone();
        e.push(R::zero());
        let mut z = DenseMatrix::identity(n);
        ql_implicit(&mut d, &mut e, Some(&mut z))?;
        Ok(sort_system(d, z))
    }
}

/// Eigendecomposition of a dense symmetric matrix.
///
/// The input must be symmetric to `1e-12` relative (measured against the
/// largest entry); anything else is rejected rather than silently symmetrized.
pub fn eig_sym<R: Real>(a: &DenseMatrix<R>) -> Result<SpectralDecomposition<R>, NumericsError> {
    if !a.is_square() {
        return Err(NumericsError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if !a.all_finite() {
        return Err(NumericsError::NonFinite);
    }
    let sym_tol = R::of(1e-12).max(R::epsilon() * R::of(64.0));
    if !a.is_symmetric(sym_tol) {
        return Err(NumericsError::NotSymmetric);
    }
    let n = a.rows();
    if n == 0 {
        return Ok(SpectralDecomposition {
            eigenvalues: vec![],
            eigenvectors: DenseMatrix::zeros(0, 0),
        });
    }
    let (mut d, mut e, mut z) = tridiagonalize(a);
    match ql_implicit(&mut d, &mut e, Some(&mut z)) {
        Ok(()) => Ok(sort_system(d, z)),
        // QL very rarely stalls; cyclic Jacobi is slow but unconditionally
        // convergent, so use it as the fallback.
        Err(NumericsError::NoConvergence { .. }) => jacobi_eig(a),
        Err(e) => Err(e),
    }
}

/// Householder reduction `A = Q T Qᵀ`; returns `(diag, offdiag, Q)`.
/// Offdiag is stored in `e[1..]` with `e[0] = 0` (tred2 layout).
fn tridiagonalize<R: Real>(a: &DenseMatrix<R>) -> (Vec<R>, Vec<R>, DenseMatrix<R>) {
    let n = a.rows();
    let mut v = a.clone();
    let mut d = vec![R::zero(); n];
    let mut e = vec![R::zero(); n];

    for i in (1..n).rev() {
        let l = i;
        let mut h = R::zero();
        let mut scale = R::zero();
        if l > 1 {
            for k in 0..l {
                scale += v[(i, k)].abs();
            }
            if scale == R::zero() {
                e[i] = v[(i, l - 1)];
            } else {
                for k in 0..l {
                    let t = v[(i, k)] / scale;
                    v[(i, k)] = t;
                    h += t * t;
                }
                let mut f = v[(i, l - 1)];
                let mut g = if f >= R::zero() { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h = h - f * g;
                v[(i, l - 1)] = f - g;
                f = R::zero();
                for j in 0..l {
                    v[(j, i)] = v[(i, j)] / h;
                    g = R::zero();
                    for k in 0..=j {
                        g += v[(j, k)] * v[(i, k)];
                    }
                    for k in (j + 1)..l {
                        g += v[(k, j)] * v[(i, k)];
                    }
                    e[j] = g / h;
                    f += e[j] * v[(i, j)];
                }
                let hh = f / (h + h);
                for j in 0..l {
                    let fj = v[(i, j)];
                    let gj = e[j] - hh * fj;
                    e[j] = gj;
                    for k in 0..=j {
                        let delta = fj * e[k] + gj * v[(i, k)];
                        v[(j, k)] = v[(j, k)] - delta;
                    }
                }
            }
        } else {
            e[i] = v[(i, l - 1)];
        }
        d[i] = h;
    }
    d[0] = R::zero();
    e[0] = R::zero();
    // Accumulate the transformations.
    for i in 0..n {
        let l = i;
        if d[i] != R::zero() {
            for j in 0..l {
                let mut g = R::zero();
                for k in 0..l {
                    g += v[(i, k)] * v[(k, j)];
                }
                for k in 0..l {
                    let delta = g * v[(k, i)];
                    v[(k, j)] = v[(k, j)] - delta;
                }
            }
        }
        d[i] = v[(i, i)];
        v[(i, i)] = R::one();
        for j in 0..l {
            v[(j, i)] = R::zero();
            v[(i, j)] = R::zero();
        }
    }
    (d, e, v)
}

/// Implicit-shift QL on a tridiagonal `(d, e)` with `e[0]` unused; rotations
/// are accumulated into `z` when present. `d` ends up holding eigenvalues
/// (unsorted).
fn ql_implicit<R: Real>(
    d: &mut [R],
    e: &mut [R],
    mut z: Option<&mut DenseMatrix<R>>,
) -> Result<(), NumericsError> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = R::zero();
    let max_iter = 50usize;

    for l in 0..n {
        let mut iter = 0usize;
        loop {
            // Split point: negligible subdiagonal entry.
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= R::epsilon() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > max_iter {
                return Err(NumericsError::NoConvergence { iterations: iter });
            }
            // Wilkinson-style shift.
            let two = R::of(2.0);
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(R::one());
            let sign_r = if g >= R::zero() { r.abs() } else { -r.abs() };
            g = d[m] - d[l] + e[l] / (g + sign_r);
            let mut s = R::one();
            let mut c = R::one();
            let mut p = R::zero();
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == R::zero() {
                    d[i + 1] = d[i + 1] - p;
                    e[m] = R::zero();
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(zm) = z.as_deref_mut() {
                    for k in 0..n {
                        f = zm[(k, i + 1)];
                        zm[(k, i + 1)] = s * zm[(k, i)] + c * f;
                        zm[(k, i)] = c * zm[(k, i)] - s * f;
                    }
                }
            }
            if r == R::zero() && m > l + 1 {
                continue;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = R::zero();
        }
    }
    Ok(())
}

fn sort_system<R: Real>(d: Vec<R>, z: DenseMatrix<R>) -> SpectralDecomposition<R> {
    let mut idx: Vec<usize> = (0..d.len()).collect();
    idx.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap());
    let eigenvalues: Vec<R> = idx.iter().map(|&i| d[i]).collect();
    let eigenvectors = z.select_columns(&idx);
    SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

/// Cyclic Jacobi eigensolver; unconditionally convergent fallback.
fn jacobi_eig<R: Real>(a: &DenseMatrix<R>) -> Result<SpectralDecomposition<R>, NumericsError> {
    let n = a.rows();
    let mut m = a.clone();
    let mut v = DenseMatrix::identity(n);
    let max_sweeps = 100usize;
    for sweep in 0..=max_sweeps {
        let mut off = R::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                off += m[(i, j)] * m[(i, j)];
            }
        }
        if off.sqrt() <= R::epsilon() * m.frobenius_norm().max(R::one()) {
            let d: Vec<R> = (0..n).map(|i| m[(i, i)]).collect();
            return Ok(sort_system(d, v));
        }
        if sweep == max_sweeps {
            return Err(NumericsError::NoConvergence {
                iterations: max_sweeps,
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq == R::zero() {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (R::of(2.0) * apq);
                let t = {
                    let s = if theta >= R::zero() { R::one() } else { -R::one() };
                    s / (theta.abs() + (theta * theta + R::one()).sqrt())
                };
                let c = R::one() / (t * t + R::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[(k, p)], m[(k, q)]);
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[(p, k)], m[(q, k)]);
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::matrix::dot;

    fn residual_check(a: &DenseMatrix<f64>, dec: &SpectralDecomposition<f64>) {
        let n = a.rows();
        let scale = a.max_abs().max(1.0);
        for i in 0..n {
            let v = dec.eigenvectors.column(i);
            let av = a.matvec(&v);
            let lam = dec.eigenvalues[i];
            let mut worst = 0.0f64;
            for k in 0..n {
                worst = worst.max((av[k] - lam * v[k]).abs());
            }
            assert!(worst <= 1e-9 * scale, "residual {worst} too large");
        }
        // Vᵀ V = I
        for i in 0..n {
            for j in 0..n {
                let d = dot(&dec.eigenvectors.column(i), &dec.eigenvectors.column(j));
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((d - target).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn diagonal_2x2() {
        let a = DenseMatrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 3.0]]);
        let dec = eig_sym(&a).unwrap();
        assert!((dec.eigenvalues[0] - 2.0).abs() < 1e-14);
        assert!((dec.eigenvalues[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn swap_2x2() {
        let a = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let dec = eig_sym(&a).unwrap();
        assert!((dec.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((dec.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn random_50x50_residual() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let n = 50;
        let mut a = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let x: f64 = rng.gen_range(-1.0..1.0);
                a[(i, j)] = x;
                a[(j, i)] = x;
            }
        }
        let dec = eig_sym(&a).unwrap();
        residual_check(&a, &dec);
        // Eigenvalue sum equals trace.
        let sum: f64 = dec.eigenvalues.iter().sum();
        assert!((sum - a.trace()).abs() <= 1e-9 * a.trace().abs().max(1.0));
    }

    #[test]
    fn rejects_non_symmetric() {
        let a = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]);
        assert!(matches!(eig_sym(&a), Err(NumericsError::NotSymmetric)));
    }

    #[test]
    fn tridiagonal_free_laplacian() {
        // -d²/dx² on [0,1] with Dirichlet ends, h = 1/(n+1).
        let n = 200;
        let h = 1.0 / (n as f64 + 1.0);
        let tri = SymTridiagonal::new(vec![2.0 / (h * h); n], vec![-1.0 / (h * h); n - 1]);
        let evs = tri.eigenvalues().unwrap();
        for k in 1..=3usize {
            let exact = (std::f64::consts::PI * k as f64).powi(2);
            assert!((evs[k - 1] - exact).abs() / exact < 1e-3);
        }
        let sys = tri.eigen_system().unwrap();
        assert!((sys.eigenvalues[0] - evs[0]).abs() < 1e-10);
    }

    #[test]
    fn generic_f32_smoke() {
        let a: DenseMatrix<f32> =
            DenseMatrix::from_rows(&[vec![2.0f32, 1.0], vec![1.0, 2.0]]);
        let dec = eig_sym(&a).unwrap();
        assert!((dec.eigenvalues[0] - 1.0).abs() < 1e-5);
        assert!((dec.eigenvalues[1] - 3.0).abs() < 1e-5);
    }
}
