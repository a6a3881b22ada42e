//! Cyclic complex Jacobi eigensolver for Hermitian matrices and the spectral
//! helpers built on it (PSD test, square root, pseudo-inverse).

use crate::error::{Error, Result};
use crate::linalg::matrix::ComplexMatrix;
use crate::scalar::{cr, cz, Real, C};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues ascending; `vectors` holds the matching orthonormal columns.
#[derive(Clone, Debug)]
pub struct HermitianEigenSystem<T: Real> {
    pub values: Vec<T>,
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> HermitianEigenSystem<T> {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, i: usize) -> Vec<C<T>> {
        self.vectors.column(i)
    }

    pub fn min(&self) -> T {
        self.values.first().copied().unwrap_or_else(T::zero)
    }

    pub fn max(&self) -> T {
        self.values.last().copied().unwrap_or_else(T::zero)
    }

    /// Spectral norm.
    pub fn norm(&self) -> T {
        self.min().abs().max(self.max().abs())
    }

    /// `V f(Λ) V^*`.
    pub fn apply(&self, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
        let n = self.dim();
        let fv: Vec<T> = self.values.iter().map(|&x| f(x)).collect();
        let v = &self.vectors;
        ComplexMatrix::from_fn(n, n, |i, j| (0..n).fold(cz(), |acc, l| acc + v[(i, l)] * v[(j, l)].conj() * fv[l]))
    }
}

/// One Jacobi rotation `J` restricted to the `(p, q)` plane: `J = [[c, s], [-s w, c w]]`.
#[derive(Clone, Copy)]
pub(crate) struct Rotation<T: Real> {
    c: T,
    s: T,
    w: C<T>,
}

impl<T: Real> Rotation<T> {
    /// Rotation that diagonalizes the Hermitian block `[[app, g], [conj(g), aqq]]`.
    pub(crate) fn annihilating(app: T, aqq: T, g: C<T>) -> Self {
        let abs_g = g.norm();
        let w = g.conj() / abs_g;
        let tau = (aqq - app) / (abs_g + abs_g);
        let t = if tau >= T::zero() {
            T::one() / (tau + (T::one() + tau * tau).sqrt())
        } else {
            -T::one() / (-tau + (T::one() + tau * tau).sqrt())
        };
        let c = T::one() / (T::one() + t * t).sqrt();
        Self { c, s: t * c, w }
    }

    /// `M <- M J` on columns `p`, `q`.
    pub(crate) fn apply_right(&self, m: &mut ComplexMatrix<T>, p: usize, q: usize) {
        let (c, s, w) = (self.c, self.s, self.w);
        for r in 0..m.rows() {
            let x = m[(r, p)];
            let y = m[(r, q)];
            m[(r, p)] = x * c - y * w * s;
            m[(r, q)] = x * s + y * w * c;
        }
    }

    /// `M <- J^* M` on rows `p`, `q`.
    fn apply_left_adjoint(&self, m: &mut ComplexMatrix<T>, p: usize, q: usize) {
        let (c, s, wc) = (self.c, self.s, self.w.conj());
        for r in 0..m.cols() {
            let x = m[(p, r)];
            let y = m[(q, r)];
            m[(p, r)] = x * c - y * wc * s;
            m[(q, r)] = x * s + y * wc * c;
        }
    }
}

/// Full eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues come back ascending. Each eigenvector is phase-normalized so
/// that its first significant component is real and positive, which makes the
/// output a deterministic function of the input.
pub fn hermitian_eig<T: Real>(m: &ComplexMatrix<T>, tol: T) -> Result<HermitianEigenSystem<T>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if !m.is_hermitian(tol) {
        return Err(Error::NotHermitian { asymmetry: m.hermitian_defect().as_f64() });
    }
    Ok(jacobi(m.hermitian_part()))
}

fn jacobi<T: Real>(mut a: ComplexMatrix<T>) -> HermitianEigenSystem<T> {
    let n = a.rows();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();
    let target = T::epsilon() * scale;

    for _ in 0..MAX_SWEEPS {
        let mut off = T::zero();
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= target || scale == T::zero() {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let g = a[(p, q)];
                if g.norm() <= T::min_positive_value() {
                    continue;
                }
                let rot = Rotation::annihilating(a[(p, p)].re, a[(q, q)].re, g);
                rot.apply_right(&mut a, p, q);
                rot.apply_left_adjoint(&mut a, p, q);
                a[(p, q)] = cz();
                a[(q, p)] = cz();
                a[(p, p)] = cr(a[(p, p)].re);
                a[(q, q)] = cr(a[(q, q)].re);
                rot.apply_right(&mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let cols: Vec<Vec<C<T>>> = order.iter().map(|&i| normalize_phase(v.column(i))).collect();
    HermitianEigenSystem { values, vectors: ComplexMatrix::from_columns(&cols) }
}

/// Rotates the phase so the first significant component is real positive.
pub fn normalize_phase<T: Real>(mut v: Vec<C<T>>) -> Vec<C<T>> {
    let big = v.iter().fold(T::zero(), |acc, z| acc.max(z.norm()));
    if big == T::zero() {
        return v;
    }
    let cutoff = big * T::epsilon().sqrt();
    if let Some(lead) = v.iter().find(|z| z.norm() > cutoff).copied() {
        let phase = lead.conj() / lead.norm();
        for z in v.iter_mut() {
            *z *= phase;
        }
    }
    v
}

/// Hermitian within `tol` and `λ_min ≥ -tol·max(1, ‖M‖)`.
pub fn is_psd<T: Real>(m: &ComplexMatrix<T>, tol: T) -> bool {
    match hermitian_eig(m, tol) {
        Ok(es) => psd_from_spectrum(&es, tol),
        Err(_) => false,
    }
}

pub(crate) fn psd_from_spectrum<T: Real>(es: &HermitianEigenSystem<T>, tol: T) -> bool {
    es.min() >= -tol * T::one().max(es.norm())
}

pub fn min_eigenvalue<T: Real>(m: &ComplexMatrix<T>, tol: T) -> Result<T> {
    Ok(hermitian_eig(m, tol)?.min())
}

/// Principal square root of a PSD matrix (negative eigenvalues clamped to zero).
pub fn psd_sqrt<T: Real>(m: &ComplexMatrix<T>, tol: T) -> Result<ComplexMatrix<T>> {
    Ok(hermitian_eig(m, tol)?.apply(|x| x.max(T::zero()).sqrt()))
}

/// Moore–Penrose pseudo-inverse of a Hermitian matrix; eigenvalues with
/// `|λ| ≤ cutoff·‖M‖` are treated as zero.
pub fn hermitian_pinv<T: Real>(m: &ComplexMatrix<T>, tol: T, cutoff: T) -> Result<ComplexMatrix<T>> {
    let es = hermitian_eig(m, tol)?;
    let floor = cutoff * es.norm();
    Ok(es.apply(|x| if x.abs() <= floor { T::zero() } else { T::one() / x }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ci;

    type M = ComplexMatrix<f64>;

    fn reconstruct(es: &HermitianEigenSystem<f64>) -> M {
        es.apply(|x| x)
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let es = hermitian_eig(&M::identity(2), 1e-12).unwrap();
        assert_eq!(es.values, vec![1.0, 1.0]);
    }

    #[test]
    fn pauli_y_eigensystem() {
        let y = M::from_vec(2, 2, vec![cz(), ci(-1.0), ci(1.0), cz()]);
        let es = hermitian_eig(&y, 1e-12).unwrap();
        assert!((es.values[0] + 1.0).abs() < 1e-14);
        assert!((es.values[1] - 1.0).abs() < 1e-14);
        assert!(reconstruct(&es).distance(&y) < 1e-14);
        // phase convention: leading component real positive
        for i in 0..2 {
            let v = es.vector(i);
            assert!(v[0].im.abs() < 1e-15 && v[0].re > 0.0);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = M::from_real_rows(&[&[1.0, 2.0], &[0.0, 1.0]]);
        assert!(matches!(hermitian_eig(&m, 1e-9), Err(Error::NotHermitian { .. })));
        assert!(!is_psd(&m, 1e-9));
    }

    #[test]
    fn psd_boundary() {
        let m = M::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]);
        assert!(is_psd(&m, 1e-12));
        let m = M::from_real_rows(&[&[1.0, 1.1], &[1.1, 1.0]]);
        assert!(!is_psd(&m, 1e-12));
    }

    #[test]
    fn sqrt_and_pinv() {
        let m = M::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let r = psd_sqrt(&m, 1e-12).unwrap();
        assert!((&r * &r).distance(&m) < 1e-14);
        let p = M::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]);
        let pi = hermitian_pinv(&p, 1e-12, 1e-12).unwrap();
        assert!((&(&p * &pi) * &p).distance(&p) < 1e-14);
    }
}
