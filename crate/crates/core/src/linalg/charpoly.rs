//! Characteristic polynomials by the Faddeev–LeVerrier recursion.
//!
//! Integer matrices go through big-integer arithmetic, so the result is exact
//! regardless of coefficient growth. Every division in the recursion is exact
//! over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::matrix::ComplexMatrix;
use crate::scalar::{cr, cz, Real, C};

/// Square integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "integer matrix must be square");
        Self { n, data: rows.iter().flatten().map(|&x| BigInt::from(x)).collect() }
    }

    /// Accepts a complex matrix whose entries are all exact integers.
    pub fn from_complex<T: Real>(m: &ComplexMatrix<T>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch("characteristic polynomial needs a square matrix".into()));
        }
        let mut data = Vec::with_capacity(m.rows() * m.cols());
        for z in m.as_slice() {
            if z.im != T::zero() || z.re.fract() != T::zero() || !z.re.is_finite() {
                return Err(Error::NotInteger);
            }
            let x = z.re.as_f64();
            if x.abs() >= 9.0e15 {
                return Err(Error::NotInteger);
            }
            data.push(BigInt::from(x as i64));
        }
        Ok(Self { n: m.rows(), data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.n + j]
    }

    fn mul(&self, other: &IntMatrix) -> IntMatrix {
        let n = self.n;
        let mut data = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for l in 0..n {
                let a = self.at(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * other.at(l, j);
                }
            }
        }
        IntMatrix { n, data }
    }

    fn trace(&self) -> BigInt {
        (0..self.n).map(|i| self.at(i, i).clone()).sum()
    }
}

/// Characteristic polynomial with integer coefficients, degree descending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPoly {
    /// Coefficients of `det(xI - M)`; leading coefficient `1`.
    pub monic: Vec<BigInt>,
}

impl CharPoly {
    pub fn degree(&self) -> usize {
        self.monic.len() - 1
    }

    /// Coefficients of `det(M - xI) = (-1)^n det(xI - M)`.
    pub fn signed(&self) -> Vec<BigInt> {
        if self.degree().is_multiple_of(2) {
            self.monic.clone()
        } else {
            self.monic.iter().map(|c| -c).collect()
        }
    }

    /// Coefficient of `x^power` in the monic normalization.
    pub fn coefficient(&self, power: usize) -> &BigInt {
        &self.monic[self.degree() - power]
    }

    pub fn signed_i128(&self) -> Option<Vec<i128>> {
        self.signed().iter().map(|c| c.to_i128()).collect()
    }

    /// Horner evaluation of the monic polynomial at an integer point.
    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.monic.iter().fold(BigInt::zero(), |acc, c| acc * x + c)
    }
}

/// Exact characteristic polynomial of an integer matrix.
pub fn char_poly_exact(a: &IntMatrix) -> CharPoly {
    let n = a.dim();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[0] = BigInt::from(1);
    // m_k = A m_{k-1} + c_{k-1} I, with m_0 = 0
    let mut m = IntMatrix { n, data: vec![BigInt::zero(); n * n] };
    for k in 1..=n {
        let mut next = a.mul(&m);
        for i in 0..n {
            next.data[i * n + i] += &coeffs[k - 1];
        }
        let t = a.mul(&next).trace();
        let (q, r) = (-t).div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero(), "Faddeev–LeVerrier division must be exact");
        coeffs[k] = q;
        m = next;
    }
    CharPoly { monic: coeffs }
}

/// Floating-point coefficients of `det(xI - M)`, degree descending.
pub fn char_poly_float<T: Real>(a: &ComplexMatrix<T>) -> Vec<C<T>> {
    assert!(a.is_square());
    let n = a.rows();
    let mut coeffs = vec![cz(); n + 1];
    coeffs[0] = cr(T::one());
    let mut m = ComplexMatrix::zeros(n, n);
    for k in 1..=n {
        let mut next = a * &m;
        for i in 0..n {
            next[(i, i)] += coeffs[k - 1];
        }
        coeffs[k] = -(a * &next).trace() / T::lit(k as f64);
        m = next;
    }
    coeffs
}

/// Characteristic polynomial, exact when every entry is an integer.
#[derive(Clone, Debug)]
pub enum CharPolynomial<T: Real> {
    Exact(CharPoly),
    Approximate(Vec<C<T>>),
}

pub fn char_poly<T: Real>(a: &ComplexMatrix<T>) -> CharPolynomial<T> {
    match IntMatrix::from_complex(a) {
        Ok(im) => CharPolynomial::Exact(char_poly_exact(&im)),
        Err(_) => CharPolynomial::Approximate(char_poly_float(a)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_two() {
        let p = char_poly_exact(&IntMatrix::from_rows(&[vec![1, 0], vec![0, 1]]));
        assert_eq!(p.monic, vec![BigInt::from(1), BigInt::from(-2), BigInt::from(1)]);
        assert_eq!(p.signed(), p.monic);
    }

    #[test]
    fn odd_degree_sign_flip() {
        let p = char_poly_exact(&IntMatrix::from_rows(&[vec![2, 0, 0], vec![0, 3, 0], vec![0, 0, 5]]));
        // (x-2)(x-3)(x-5) = x^3 - 10x^2 + 31x - 30
        assert_eq!(p.signed_i128().unwrap(), vec![-1, 10, -31, 30]);
        assert_eq!(p.eval(&BigInt::from(3)), BigInt::zero());
    }

    #[test]
    fn float_route_agrees_on_integer_input() {
        let m = ComplexMatrix::<f64>::from_real_rows(&[&[0.0, 1.0, 1.0], &[-1.0, 0.0, 1.0], &[-1.0, -1.0, 0.0]]);
        let exact = match char_poly(&m) {
            CharPolynomial::Exact(p) => p,
            CharPolynomial::Approximate(_) => panic!("integer input must take the exact route"),
        };
        let approx = char_poly_float(&m);
        for (e, a) in exact.monic.iter().zip(&approx) {
            assert!((e.to_f64().unwrap() - a.re).abs() < 1e-12 && a.im.abs() < 1e-12);
        }
    }
}
