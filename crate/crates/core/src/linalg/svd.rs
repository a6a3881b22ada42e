//! One-sided (Hestenes) Jacobi singular value decomposition.

use crate::linalg::eig::Rotation;
use crate::linalg::matrix::{vdot, ComplexMatrix};
use crate::scalar::{cz, Real, C};

const MAX_SWEEPS: usize = 100;

/// `M = U diag(s) V^*` with `s` descending. `u` is `rows × r`, `v` is `cols × r`
/// for `r = min(rows, cols)`. Columns of `u` belonging to zero singular values
/// are zero.
#[derive(Clone, Debug)]
pub struct Svd<T: Real> {
    pub u: ComplexMatrix<T>,
    pub s: Vec<T>,
    pub v: ComplexMatrix<T>,
}

impl<T: Real> Svd<T> {
    /// Number of singular values above `rel_tol · σ_max`.
    pub fn rank(&self, rel_tol: T) -> usize {
        let top = self.s.first().copied().unwrap_or_else(T::zero);
        if top == T::zero() {
            return 0;
        }
        self.s.iter().filter(|&&x| x > rel_tol * top).count()
    }
}

pub fn svd<T: Real>(m: &ComplexMatrix<T>) -> Svd<T> {
    if m.rows() < m.cols() {
        let t = svd_tall(m.adjoint());
        return Svd { u: t.v, s: t.s, v: t.u };
    }
    svd_tall(m.clone())
}

fn svd_tall<T: Real>(mut g: ComplexMatrix<T>) -> Svd<T> {
    let n = g.cols();
    let mut v = ComplexMatrix::identity(n);
    let eps = T::epsilon();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let gp = g.column(p);
                let gq = g.column(q);
                let alpha: T = gp.iter().map(|z| z.norm_sqr()).sum();
                let beta: T = gq.iter().map(|z| z.norm_sqr()).sum();
                let gamma = vdot(&gp, &gq);
                if gamma.norm() <= eps * (alpha * beta).sqrt() || gamma.norm() <= T::min_positive_value() {
                    continue;
                }
                rotated = true;
                let rot = Rotation::annihilating(alpha, beta, gamma);
                rot.apply_right(&mut g, p, q);
                rot.apply_right(&mut v, p, q);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<T> = (0..n).map(|j| g.column(j).iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| norms[b].partial_cmp(&norms[a]).unwrap_or(std::cmp::Ordering::Equal));

    let s: Vec<T> = order.iter().map(|&j| norms[j]).collect();
    let ucols: Vec<Vec<C<T>>> = order
        .iter()
        .map(|&j| {
            let col = g.column(j);
            if norms[j] > T::zero() {
                col.into_iter().map(|z| z / norms[j]).collect()
            } else {
                vec![cz(); col.len()]
            }
        })
        .collect();
    let vcols: Vec<Vec<C<T>>> = order.iter().map(|&j| v.column(j)).collect();
    Svd { u: ComplexMatrix::from_columns(&ucols), s, v: ComplexMatrix::from_columns(&vcols) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cr;

    type M = ComplexMatrix<f64>;

    fn rebuild(d: &Svd<f64>) -> M {
        let sig = M::from_fn(d.s.len(), d.s.len(), |i, j| if i == j { cr(d.s[i]) } else { cz() });
        &(&d.u * &sig) * &d.v.adjoint()
    }

    #[test]
    fn rank_one_outer_product() {
        let a = vec![cr(1.0), C::new(0.0, 2.0), cr(-1.0)];
        let b = vec![cr(3.0), cr(1.0)];
        let m = M::outer(&a, &b);
        let d = svd(&m);
        assert_eq!(d.rank(1e-8), 1);
        assert!((d.s[0] - 6f64.sqrt() * 10f64.sqrt()).abs() < 1e-12);
        assert!(rebuild(&d).distance(&m) < 1e-12);
    }

    #[test]
    fn wide_matrix_goes_through_adjoint() {
        let m = M::from_fn(2, 5, |i, j| C::new((i + 2 * j) as f64, (i as f64) - (j as f64)));
        let d = svd(&m);
        assert_eq!(d.s.len(), 2);
        assert!(rebuild(&d).distance(&m) < 1e-12);
    }
}
