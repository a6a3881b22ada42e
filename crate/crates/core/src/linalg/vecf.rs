//! The vectorization `F: M_k -> C^k ⊗ C^k`, `F(a b^t) = a ⊗ b`.
//!
//! Entry `(i, j)` lands at composite index `i·k + j`, which is the row-major
//! flattening of the matrix.

use crate::linalg::matrix::ComplexMatrix;
use crate::scalar::{Real, C};

pub fn vec_f<T: Real>(m: &ComplexMatrix<T>) -> Vec<C<T>> {
    assert!(m.is_square(), "F is defined on square matrices");
    m.as_slice().to_vec()
}

/// Inverse of [`vec_f`]; panics unless `v.len()` is a perfect square.
pub fn unvec_f<T: Real>(v: &[C<T>]) -> ComplexMatrix<T> {
    let k = isqrt(v.len());
    assert_eq!(k * k, v.len(), "vector length {} is not a square", v.len());
    ComplexMatrix::from_vec(k, k, v.to_vec())
}

/// `v` is Hermitian when `F^{-1}(v)` is.
pub fn is_hermitian_vector<T: Real>(v: &[C<T>], tol: T) -> bool {
    unvec_f(v).is_hermitian(tol)
}

pub(crate) fn isqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::kron_vec;
    use crate::scalar::{cr, cz};

    type M = ComplexMatrix<f64>;

    #[test]
    fn matrix_unit_maps_to_product_vector() {
        let mut m = M::zeros(2, 2);
        m[(0, 1)] = cr(1.0);
        let e1 = [cr(1.0), cz()];
        let e2 = [cz(), cr(1.0)];
        assert_eq!(vec_f(&m), kron_vec(&e1, &e2));
    }

    #[test]
    fn identity_maps_to_u() {
        let u = vec_f(&M::identity(2));
        assert_eq!(u, vec![cr(1.0), cz(), cz(), cr(1.0)]);
        assert_eq!(unvec_f(&u), M::identity(2));
    }
}
