//! Structure maps on `M_k ⊗ M_m`: partial transposes, the flip, realignment,
//! tensor rank and Hermitian Schmidt decompositions.
//!
//! Composite indices are row-major Kronecker: the pair `(i, p)` with
//! `i < k`, `p < m` is stored at `i·m + p`.

use crate::error::{Error, Result};
use crate::linalg::eig::{hermitian_eig, HermitianEigenSystem};
use crate::linalg::matrix::{vdot, vnorm, ComplexMatrix};
use crate::linalg::svd::svd;
use crate::linalg::vecf::{unvec_f, vec_f};
use crate::scalar::{ci, cr, cz, Real, C};

/// Relative singular-value cutoff used for tensor ranks.
pub const RANK_TOL: f64 = 1e-8;

/// A `km × km` matrix viewed as an element of `M_k ⊗ M_m`.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteOperator<T: Real> {
    k: usize,
    m: usize,
    mat: ComplexMatrix<T>,
}

impl<T: Real> BipartiteOperator<T> {
    pub fn new(k: usize, m: usize, mat: ComplexMatrix<T>) -> Result<Self> {
        if k == 0 || m == 0 || mat.rows() != k * m || mat.cols() != k * m {
            return Err(Error::DimensionMismatch(format!(
                "a {}x{} matrix cannot live in M_{} ⊗ M_{}",
                mat.rows(),
                mat.cols(),
                k,
                m
            )));
        }
        Ok(Self { k, m, mat })
    }

    /// `a ⊗ b`.
    pub fn product(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Self {
        assert!(a.is_square() && b.is_square());
        Self { k: a.rows(), m: b.rows(), mat: a.kron(b) }
    }

    pub fn identity(k: usize, m: usize) -> Self {
        Self { k, m, mat: ComplexMatrix::identity(k * m) }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.k * self.m
    }

    pub fn is_square_split(&self) -> bool {
        self.k == self.m
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.mat
    }

    /// Entry `A[(i,p),(j,q)]`.
    #[inline]
    pub fn at(&self, i: usize, p: usize, j: usize, q: usize) -> C<T> {
        self.mat[(i * self.m + p, j * self.m + q)]
    }

    fn with_matrix(&self, mat: ComplexMatrix<T>) -> Self {
        Self { k: self.k, m: self.m, mat }
    }

    fn shuffle(&self, f: impl Fn(usize, usize, usize, usize) -> C<T>) -> Self {
        let (k, m) = (self.k, self.m);
        let mat = ComplexMatrix::from_fn(k * m, k * m, |r, c| f(r / m, r % m, c / m, c % m));
        self.with_matrix(mat)
    }

    /// `A^{t2}[(i,p),(j,q)] = A[(i,q),(j,p)]`.
    pub fn partial_transpose_right(&self) -> Self {
        self.shuffle(|i, p, j, q| self.at(i, q, j, p))
    }

    /// `A^{t1}[(i,p),(j,q)] = A[(j,p),(i,q)]`.
    pub fn partial_transpose_left(&self) -> Self {
        self.shuffle(|i, p, j, q| self.at(j, p, i, q))
    }

    /// Realignment `R[(i,j),(p,q)] = A[(i,p),(j,q)]`, a `k² × m²` matrix.
    ///
    /// Sends `X ⊗ Y` to `F(X) F(Y)^t`. For `k = m` this is the involution `S`.
    pub fn realign_rect(&self) -> ComplexMatrix<T> {
        let (k, m) = (self.k, self.m);
        ComplexMatrix::from_fn(k * k, m * m, |r, c| self.at(r / k, c / m, r % k, c % m))
    }

    /// The realignment map `S`; only defined for `k = m`.
    pub fn realign(&self) -> Result<ComplexMatrix<T>> {
        if self.k != self.m {
            return Err(Error::DimensionMismatch(format!(
                "realignment S needs k = m, got k = {}, m = {}",
                self.k, self.m
            )));
        }
        Ok(self.realign_rect())
    }

    pub fn tensor_rank(&self, rel_tol: T) -> usize {
        svd(&self.realign_rect()).rank(rel_tol)
    }

    /// Singular values of the realigned matrix (operator Schmidt coefficients).
    pub fn schmidt_coefficients(&self) -> Vec<T> {
        svd(&self.realign_rect()).s
    }

    /// `(L ⊗ Id) A (L^* ⊗ Id)`.
    pub fn conjugate_left(&self, l: &ComplexMatrix<T>) -> Self {
        let big = l.kron(&ComplexMatrix::identity(self.m));
        self.with_matrix(&(&big * &self.mat) * &big.adjoint())
    }

    /// `X ↦ Tr₂(A (Id ⊗ Y))`, a `k × k` matrix.
    pub fn contract_right(&self, y: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        let m = self.m;
        ComplexMatrix::from_fn(self.k, self.k, |i, j| {
            let mut acc = cz();
            for p in 0..m {
                for q in 0..m {
                    acc += self.at(i, p, j, q) * y[(q, p)];
                }
            }
            acc
        })
    }

    /// `Tr₁(A (X ⊗ Id))`, an `m × m` matrix.
    pub fn contract_left(&self, x: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        let k = self.k;
        ComplexMatrix::from_fn(self.m, self.m, |p, q| {
            let mut acc = cz();
            for i in 0..k {
                for j in 0..k {
                    acc += self.at(i, p, j, q) * x[(j, i)];
                }
            }
            acc
        })
    }

    pub fn scale(&self, s: T) -> Self {
        self.with_matrix(self.mat.scale(s))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.k, self.m), (other.k, other.m));
        self.with_matrix(&self.mat + &other.mat)
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.k, self.m), (other.k, other.m));
        self.with_matrix(&self.mat - &other.mat)
    }

    pub fn cast<U: Real>(&self) -> BipartiteOperator<U> {
        BipartiteOperator { k: self.k, m: self.m, mat: self.mat.cast() }
    }
}

/// The flip `T(a ⊗ b) = b ⊗ a` on `C^k ⊗ C^k`.
pub fn flip<T: Real>(k: usize) -> BipartiteOperator<T> {
    assert!(k >= 1);
    let mat = ComplexMatrix::from_fn(k * k, k * k, |r, c| {
        let (i, p, j, q) = (r / k, r % k, c / k, c % k);
        if i == q && p == j {
            cr(T::one())
        } else {
            cz()
        }
    });
    BipartiteOperator { k, m: k, mat }
}

/// `u = Σ e_l ⊗ e_l = F(Id)`.
pub fn max_entangled_vector<T: Real>(k: usize) -> Vec<C<T>> {
    vec_f(&ComplexMatrix::identity(k))
}

/// Orthonormal Hermitian basis of `M_k` made of normalized matrix units:
/// `E_ii`, then `(E_ij + E_ji)/√2` for `i < j`, then `i(E_ij − E_ji)/√2` for `i < j`.
pub fn hermitian_basis<T: Real>(k: usize) -> Vec<ComplexMatrix<T>> {
    let h = T::FRAC_1_SQRT_2();
    let mut out = Vec::with_capacity(k * k);
    for i in 0..k {
        let mut e = ComplexMatrix::zeros(k, k);
        e[(i, i)] = cr(T::one());
        out.push(e);
    }
    for i in 0..k {
        for j in i + 1..k {
            let mut e = ComplexMatrix::zeros(k, k);
            e[(i, j)] = cr(h);
            e[(j, i)] = cr(h);
            out.push(e);
        }
    }
    for i in 0..k {
        for j in i + 1..k {
            let mut e = ComplexMatrix::zeros(k, k);
            e[(i, j)] = ci(h);
            e[(j, i)] = ci(-h);
            out.push(e);
        }
    }
    out
}

/// Columns are `F(G_a)` for the Hermitian basis `G_a`; unitary.
fn hermitian_frame<T: Real>(k: usize) -> ComplexMatrix<T> {
    let cols: Vec<Vec<C<T>>> = hermitian_basis::<T>(k).iter().map(vec_f).collect();
    ComplexMatrix::from_columns(&cols)
}

/// Real coefficients `c_ab` with `A = Σ c_ab G_a ⊗ H_b` in the Hermitian bases.
pub fn hermitian_coefficients<T: Real>(a: &BipartiteOperator<T>) -> ComplexMatrix<T> {
    let phi_k = hermitian_frame::<T>(a.k);
    let phi_m = hermitian_frame::<T>(a.m);
    let c = &(&phi_k.adjoint() * &a.realign_rect()) * &phi_m.conj();
    c.map(|z| cr(z.re))
}

#[derive(Clone, Debug)]
pub struct SchmidtTerm<T: Real> {
    pub coeff: T,
    pub left: ComplexMatrix<T>,
    pub right: ComplexMatrix<T>,
}

/// `A = Σ λ_i γ_i ⊗ δ_i` with `λ_i > 0` descending and both factor families
/// Hermitian and orthonormal under `tr(XY^*)`.
#[derive(Clone, Debug)]
pub struct SchmidtDecomposition<T: Real> {
    pub k: usize,
    pub m: usize,
    pub terms: Vec<SchmidtTerm<T>>,
}

impl<T: Real> SchmidtDecomposition<T> {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficients(&self) -> Vec<T> {
        self.terms.iter().map(|t| t.coeff).collect()
    }

    pub fn reconstruct(&self) -> BipartiteOperator<T> {
        let mut acc = ComplexMatrix::zeros(self.k * self.m, self.k * self.m);
        for t in &self.terms {
            acc = &acc + &t.left.kron(&t.right).scale(t.coeff);
        }
        BipartiteOperator { k: self.k, m: self.m, mat: acc }
    }

    /// Every `δ_i = +γ_i` within `tol` (Frobenius).
    pub fn is_symmetric_positive(&self, tol: T) -> bool {
        self.k == self.m && self.terms.iter().all(|t| t.left.distance(&t.right) <= tol)
    }
}

/// Hermitian Schmidt decomposition of a Hermitian operator.
///
/// The operator is expanded in the Hermitian product basis, whose coefficient
/// matrix is real. For `k = m` and a symmetric coefficient matrix the terms come
/// from its eigendecomposition, with negative eigenvalues absorbed as
/// `δ_i = −γ_i`; otherwise from its singular value decomposition.
pub fn hermitian_schmidt<T: Real>(a: &BipartiteOperator<T>, tol: T) -> Result<SchmidtDecomposition<T>> {
    if !a.mat.is_hermitian(tol) {
        return Err(Error::NotHermitian { asymmetry: a.mat.hermitian_defect().as_f64() });
    }
    let c = hermitian_coefficients(a);
    let gk = hermitian_basis::<T>(a.k);
    let gm = hermitian_basis::<T>(a.m);
    let combine = |basis: &[ComplexMatrix<T>], coords: &[T]| {
        let n = basis[0].rows();
        basis.iter().zip(coords).fold(ComplexMatrix::zeros(n, n), |acc, (g, &x)| &acc + &g.scale(x))
    };

    // (coeff, left coords, right coords)
    let mut raw: Vec<(T, Vec<T>, Vec<T>)> = Vec::new();
    let symmetric = a.k == a.m && c.distance(&c.transpose()) <= tol * T::one().max(c.frobenius_norm());
    if symmetric {
        let es = hermitian_eig(&c.hermitian_part(), tol)?;
        for (idx, &mu) in es.values.iter().enumerate() {
            let x: Vec<T> = es.vector(idx).iter().map(|z| z.re).collect();
            let sign = if mu < T::zero() { -T::one() } else { T::one() };
            let y: Vec<T> = x.iter().map(|&v| v * sign).collect();
            raw.push((mu.abs(), x, y));
        }
    } else {
        let d = svd(&c);
        for (idx, &s) in d.s.iter().enumerate() {
            let x: Vec<T> = d.u.column(idx).iter().map(|z| z.re).collect();
            let y: Vec<T> = d.v.column(idx).iter().map(|z| z.re).collect();
            raw.push((s, x, y));
        }
    }
    raw.sort_by(|p, q| q.0.partial_cmp(&p.0).unwrap_or(std::cmp::Ordering::Equal));
    let top = raw.first().map_or(T::zero(), |r| r.0);
    let cutoff = T::lit(RANK_TOL) * top;

    let terms = raw
        .into_iter()
        .filter(|(s, _, _)| *s > cutoff && *s > T::zero())
        .map(|(s, mut x, mut y)| {
            // sign convention: largest left coordinate positive
            let lead = x.iter().copied().fold(T::zero(), |acc, v| if v.abs() > acc.abs() { v } else { acc });
            if lead < T::zero() {
                x.iter_mut().for_each(|v| *v = -*v);
                y.iter_mut().for_each(|v| *v = -*v);
            }
            SchmidtTerm { coeff: s, left: combine(&gk, &x), right: combine(&gm, &y) }
        })
        .collect();
    Ok(SchmidtDecomposition { k: a.k, m: a.m, terms })
}

/// `F(F^{-1}(v)^*)`, the involution whose fixed points are the Hermitian vectors.
fn hermitian_conjugate_vec<T: Real>(v: &[C<T>]) -> Vec<C<T>> {
    vec_f(&unvec_f(v).adjoint())
}

/// Largest Hermitian-vector defect of `M` on the Hermitian basis, relative to `‖M‖_F`.
pub fn hermitian_preservation_defect<T: Real>(mat: &ComplexMatrix<T>) -> T {
    let k = crate::linalg::vecf::isqrt(mat.rows());
    let scale = T::one().max(mat.frobenius_norm());
    hermitian_basis::<T>(k)
        .iter()
        .map(|g| {
            let image = mat.matvec(&vec_f(g));
            let h = hermitian_conjugate_vec(&image);
            image.iter().zip(&h).map(|(a, b)| (*a - *b).norm_sqr()).sum::<T>().sqrt() / scale
        })
        .fold(T::zero(), T::max)
}

/// Orthonormal eigenbasis of Hermitian vectors `v_j` with eigenvalues `α_j`.
#[derive(Clone, Debug)]
pub struct HermitianVectorBasis<T: Real> {
    pub vectors: Vec<(T, Vec<C<T>>)>,
}

impl<T: Real> HermitianVectorBasis<T> {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        self.vectors.iter().map(|(a, _)| *a).collect()
    }

    pub fn gram(&self) -> ComplexMatrix<T> {
        let n = self.len();
        ComplexMatrix::from_fn(n, n, |i, j| vdot(&self.vectors[i].1, &self.vectors[j].1))
    }

    /// `Σ α_j v_j conj(v_j)^t`.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let n = self.vectors.first().map_or(0, |v| v.1.len());
        self.vectors
            .iter()
            .fold(ComplexMatrix::zeros(n, n), |acc, (a, v)| &acc + &ComplexMatrix::projector(v).scale(*a))
    }
}

/// Eigenbasis of `M` on `C^k ⊗ C^k` made of Hermitian vectors.
///
/// Each eigenvector `w` is split as `w₁ + i w₂` with `w₁, w₂` Hermitian; both
/// halves are eigenvectors for the same eigenvalue. The halves collected over
/// an eigenspace are then orthonormalized with respect to the real inner
/// product, which keeps them Hermitian.
pub fn hermitian_eigenbasis<T: Real>(mat: &ComplexMatrix<T>, tol: T) -> Result<HermitianVectorBasis<T>> {
    let es = hermitian_eig(mat, tol)?;
    let k = crate::linalg::vecf::isqrt(mat.rows());
    if k * k != mat.rows() {
        return Err(Error::DimensionMismatch(format!("{} is not a square dimension", mat.rows())));
    }
    let defect = hermitian_preservation_defect(mat);
    if defect > tol {
        return Err(Error::NotHermitianPreserving { defect: defect.as_f64() });
    }
    Ok(hermitian_basis_from_spectrum(mat, &es, tol))
}

pub(crate) fn hermitian_basis_from_spectrum<T: Real>(
    mat: &ComplexMatrix<T>,
    es: &HermitianEigenSystem<T>,
    tol: T,
) -> HermitianVectorBasis<T> {
    let n = es.dim();
    let gap = tol.max(T::epsilon().sqrt()) * T::one().max(es.norm());
    let half = T::lit(0.5);
    let mut vectors = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && es.values[end] - es.values[end - 1] <= gap {
            end += 1;
        }
        let mut candidates: Vec<Vec<C<T>>> = Vec::with_capacity(2 * (end - start));
        for idx in start..end {
            let w = es.vector(idx);
            let wh = hermitian_conjugate_vec(&w);
            let re: Vec<C<T>> = w.iter().zip(&wh).map(|(a, b)| (*a + *b) * half).collect();
            let im: Vec<C<T>> = w.iter().zip(&wh).map(|(a, b)| (*a - *b) * ci(-half)).collect();
            candidates.push(re);
            candidates.push(im);
        }
        for v in pivoted_real_orthonormalize(candidates, end - start) {
            let mv = mat.matvec(&v);
            let alpha = vdot(&v, &mv).re;
            vectors.push((alpha, v));
        }
        start = end;
    }
    HermitianVectorBasis { vectors }
}

/// Greedy Gram–Schmidt picking the largest residual each round.
fn pivoted_real_orthonormalize<T: Real>(mut cands: Vec<Vec<C<T>>>, want: usize) -> Vec<Vec<C<T>>> {
    let mut out: Vec<Vec<C<T>>> = Vec::with_capacity(want);
    for _ in 0..want {
        let (best, norm) = cands
            .iter()
            .enumerate()
            .map(|(i, c)| (i, vnorm(c)))
            .fold((usize::MAX, T::zero()), |acc, (i, nv)| if nv > acc.1 { (i, nv) } else { acc });
        if best == usize::MAX || norm <= T::epsilon() {
            break;
        }
        let v: Vec<C<T>> = cands.swap_remove(best).into_iter().map(|z| z / norm).collect();
        for c in cands.iter_mut() {
            // real inner product keeps Hermitian combinations Hermitian
            let proj = vdot(&v, c).re;
            for (x, y) in c.iter_mut().zip(&v) {
                *x -= *y * proj;
            }
        }
        out.push(v);
    }
    out
}
