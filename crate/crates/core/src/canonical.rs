//! Constructive algorithms for low-dimensional bipartite operators:
//! the canonical form `λ·Id⊗Id + D⊗D + γ⊗γ + δ⊗δ` of a rank-4 SPC matrix in
//! `M₂ ⊗ M₂`, and the reduction of a rank-3 PSD matrix in `M₂ ⊗ M_m` to a
//! matrix invariant under left partial transposition.

use crate::bipartite::{hermitian_eigenbasis, hermitian_schmidt, BipartiteOperator, RANK_TOL};
use crate::classify::is_spc;
use crate::error::{Error, Result};
use crate::linalg::eig::{hermitian_eig, hermitian_pinv, psd_from_spectrum};
use crate::linalg::matrix::{vdot, vnorm, ComplexMatrix};
use crate::linalg::vecf::{is_hermitian_vector, unvec_f, vec_f};
use crate::scalar::{cr, cz, Real, C};

const POWER_TOL: f64 = 1e-12;
const POWER_MAX_ITER: usize = 10_000;

// ---------------------------------------------------------------------------
// leading Schmidt pair

/// Top operator-Schmidt term `λ₁·γ₁⊗δ₁` of a PSD operator, with unit-norm PSD
/// factors.
#[derive(Clone, Debug)]
pub struct LeadingPair<T: Real> {
    pub lambda: T,
    pub gamma: ComplexMatrix<T>,
    pub delta: ComplexMatrix<T>,
    /// Alternating iterations used; zero when the SVD fallback produced the pair.
    pub iterations: usize,
}

fn unit<T: Real>(m: &ComplexMatrix<T>) -> (ComplexMatrix<T>, T) {
    let h = m.hermitian_part();
    let n = h.frobenius_norm();
    (h.scale(T::one() / n), n)
}

fn require_psd<T: Real>(a: &BipartiteOperator<T>, tol: T) -> Result<()> {
    let es = hermitian_eig(a.matrix(), tol)?;
    if !psd_from_spectrum(&es, tol) {
        return Err(Error::NotAState { min_eig: es.min().as_f64() });
    }
    Ok(())
}

fn power_pair<T: Real>(a: &BipartiteOperator<T>) -> Option<LeadingPair<T>> {
    let (mut y, _) = unit(&ComplexMatrix::identity(a.m()));
    let (mut x, _) = unit(&ComplexMatrix::identity(a.k()));
    let stop = T::lit(POWER_TOL);
    for it in 1..=POWER_MAX_ITER {
        let (nx, nxn) = unit(&a.contract_right(&y));
        let (ny, lambda) = unit(&a.contract_left(&nx));
        if nxn == T::zero() || lambda == T::zero() || !lambda.is_finite() {
            return None;
        }
        let change = nx.distance(&x) + ny.distance(&y);
        x = nx;
        y = ny;
        if change <= stop {
            return Some(LeadingPair { lambda, gamma: x, delta: y, iterations: it });
        }
    }
    None
}

fn svd_pair<T: Real>(a: &BipartiteOperator<T>, tol: T) -> Result<LeadingPair<T>> {
    let dec = hermitian_schmidt(a, tol)?;
    let top = dec.terms.first().ok_or_else(|| Error::ConvergenceFailure("operator is zero".into()))?;
    let (mut g, mut d) = (top.left.clone(), top.right.clone());
    // the factors are fixed up to a common sign; pick the PSD representative
    if g.trace().re < T::zero() {
        g = g.scale(-T::one());
        d = d.scale(-T::one());
    }
    Ok(LeadingPair { lambda: top.coeff, gamma: g, delta: d, iterations: 0 })
}

fn pair_is_psd<T: Real>(p: &LeadingPair<T>, tol: T) -> bool {
    let ok = |m: &ComplexMatrix<T>| hermitian_eig(m, tol).map(|es| psd_from_spectrum(&es, tol)).unwrap_or(false);
    ok(&p.gamma) && ok(&p.delta)
}

fn leading_pair_once<T: Real>(a: &BipartiteOperator<T>, tol: T) -> Result<LeadingPair<T>> {
    if let Some(p) = power_pair(a) {
        if pair_is_psd(&p, tol) {
            return Ok(p);
        }
    }
    let p = svd_pair(a, tol)?;
    // a near-degenerate top singular value can rotate the SVD pair out of the cone
    let coeffs = a.schmidt_coefficients();
    let degenerate = coeffs.len() > 1 && (coeffs[0] - coeffs[1]).abs() <= T::lit(POWER_TOL) * coeffs[0];
    if degenerate || !pair_is_psd(&p, tol) {
        return Err(Error::ConvergenceFailure("top Schmidt value is degenerate".into()));
    }
    Ok(p)
}

/// Leading operator-Schmidt term of a nonzero PSD operator.
///
/// Alternates `X ← Tr₂(A(Id⊗Y))`, `Y ← Tr₁(A(X⊗Id))` (both normalized) from
/// the identity. Both maps send PSD matrices to PSD matrices, so the factors
/// stay in the PSD cone. Falls back to the SVD of the realigned matrix, and
/// retries once after a `1e-12·Id⊗Id` perturbation.
pub fn leading_schmidt_pair<T: Real>(a: &BipartiteOperator<T>, tol: T) -> Result<LeadingPair<T>> {
    require_psd(a, tol)?;
    if a.matrix().max_abs() == T::zero() {
        return Err(Error::ConvergenceFailure("operator is zero".into()));
    }
    match leading_pair_once(a, tol) {
        Err(Error::ConvergenceFailure(_)) => {
            let shift = T::lit(1e-12) * a.matrix().frobenius_norm();
            let bumped = a.add(&BipartiteOperator::identity(a.k(), a.m()).scale(shift));
            leading_pair_once(&bumped, tol)
        }
        other => other,
    }
}

// ---------------------------------------------------------------------------
// rank-3 reduction

/// Every intermediate of the reduction of a rank-3 PSD matrix in `M₂ ⊗ M_m`.
#[derive(Clone, Debug)]
pub struct ReductionChain<T: Real> {
    pub epsilon: T,
    /// Left factors `A₁, A₂, A₃` with `A = Σ A_i ⊗ B_i`; `A₁` is PSD.
    pub left: [ComplexMatrix<T>; 3],
    /// Right factors `B₁, B₂, B₃`; `B₁` is PSD.
    pub right: [ComplexMatrix<T>; 3],
    /// Hermitian square root of `A₁ + ε·Id`.
    pub r: ComplexMatrix<T>,
    /// Unitary diagonalizing `R⁻¹A₂R⁻¹ = U·diag(d)·U^*`.
    pub u: ComplexMatrix<T>,
    pub d: [T; 2],
    /// Diagonal of `U^*R⁻¹A₃R⁻¹U` equals `a·Id + c·diag(d)`.
    pub a: T,
    pub c: T,
    /// Lower off-diagonal entry of `U^*R⁻¹A₃R⁻¹U`.
    pub b: C<T>,
    /// `diag(1, conj(b))`.
    pub v: ComplexMatrix<T>,
    /// `V·U^*·R⁻¹`.
    pub l: ComplexMatrix<T>,
    /// `A(ε) = A + ε·Id⊗B₁`.
    pub a_eps: BipartiteOperator<T>,
    /// `(L⊗Id)·A(ε)·(L^*⊗Id)`.
    pub f_out: BipartiteOperator<T>,
}

impl<T: Real> ReductionChain<T> {
    /// `‖F^{t1} − F‖ / ‖F‖`.
    pub fn left_pt_residual(&self) -> T {
        let f = self.f_out.matrix();
        self.f_out.partial_transpose_left().matrix().distance(f) / f.frobenius_norm()
    }

    /// `‖A − Σ A_i⊗B_i‖ / ‖A‖`, with `A = A(ε) − ε·Id⊗B₁`.
    pub fn decomposition_residual(&self) -> T {
        let k = self.left[0].rows();
        let shift = ComplexMatrix::identity(k).kron(&self.right[0]).scale(self.epsilon);
        let a = self.a_eps.matrix() - &shift;
        let sum =
            (0..3).fold(ComplexMatrix::zeros(a.rows(), a.cols()), |acc, i| &acc + &self.left[i].kron(&self.right[i]));
        a.distance(&sum) / a.frobenius_norm()
    }

    /// `F` is PSD within `tol`.
    pub fn f_is_psd(&self, tol: T) -> bool {
        hermitian_eig(self.f_out.matrix(), tol).map(|es| psd_from_spectrum(&es, tol)).unwrap_or(false)
    }

    /// Left factors of `F`: `L·A₁'·L^*`, `L·A₂·L^*`, `L·A₃·L^*` with `A₁' = A₁ + ε·Id`.
    pub fn transformed_left(&self) -> [ComplexMatrix<T>; 3] {
        let k = self.left[0].rows();
        let a1 = &self.left[0] + &ComplexMatrix::identity(k).scale(self.epsilon);
        let conj = |x: &ComplexMatrix<T>| &(&self.l * x) * &self.l.adjoint();
        [conj(&a1), conj(&self.left[1]), conj(&self.left[2])]
    }
}

type Triple<T> = [ComplexMatrix<T>; 3];

/// Splits a rank-3 operator as `A₁⊗B₁ + A₂⊗B₂ + A₃⊗B₃` with `A₁, B₁` PSD.
///
/// The left factors form a Hermitian orthonormal basis of the left Schmidt
/// space, with `A₁` the leading PSD factor projected into that space; each
/// `B_i = Tr₁(A(A_i⊗Id))`. The split is then exact up to rounding.
fn rank3_split<T: Real>(a: &BipartiteOperator<T>, tol: T) -> Result<(Triple<T>, Triple<T>)> {
    let lead = leading_schmidt_pair(a, tol)?;
    let dec = hermitian_schmidt(a, tol)?;
    if dec.len() != 3 {
        return Err(Error::WrongRank { expected: 3, found: dec.len() });
    }
    let span: Vec<&ComplexMatrix<T>> = dec.terms.iter().map(|t| &t.left).collect();
    let project = |x: &ComplexMatrix<T>, basis: &[ComplexMatrix<T>]| {
        basis.iter().fold(x.clone(), |acc, g| &acc - &g.scale(acc.inner(g).re))
    };

    let zero = ComplexMatrix::zeros(2, 2);
    let in_span = span.iter().fold(zero, |acc, g| &acc + &g.scale(lead.gamma.inner(g).re));
    let (a1, _) = unit(&in_span);
    let mut basis = vec![a1];
    for g in &span {
        let rest = project(g, &basis);
        if basis.len() < 3 && rest.frobenius_norm() > T::lit(1e-6) {
            basis.push(unit(&rest).0);
        }
    }
    if basis.len() != 3 {
        return Err(Error::NumericalBreakdown("left Schmidt space completion failed".into()));
    }
    let right: Vec<ComplexMatrix<T>> = basis.iter().map(|x| a.contract_left(x).hermitian_part()).collect();
    let left: [ComplexMatrix<T>; 3] = [basis[0].clone(), basis[1].clone(), basis[2].clone()];
    Ok((left, [right[0].clone(), right[1].clone(), right[2].clone()]))
}

/// Reduces a rank-3 PSD matrix in `M₂ ⊗ M_m` to a PSD matrix `F` invariant
/// under left partial transposition.
///
/// With `A = A₁⊗B₁ + A₂⊗B₂ + A₃⊗B₃` and `A₁, B₁` PSD, set `A(ε) = A + ε·Id⊗B₁`
/// and `R = (A₁ + ε·Id)^{1/2}`. Conjugating by `R⁻¹` turns the first left
/// factor into `Id`; the unitary `U` diagonalizes the second; the diagonal of
/// the third is then a combination of `Id` and `D`, and `V = diag(1, conj b)`
/// makes its off-diagonal part real. All left factors of
/// `F = (L⊗Id)·A(ε)·(L^*⊗Id)`, `L = V·U^*·R⁻¹`, end up real symmetric.
pub fn rank3_reduce<T: Real>(a: &BipartiteOperator<T>, epsilon: T, tol: T) -> Result<ReductionChain<T>> {
    if a.k() != 2 {
        return Err(Error::DimensionMismatch(format!("reduction needs k = 2, got k = {}", a.k())));
    }
    if epsilon <= T::zero() {
        return Err(Error::DimensionMismatch("epsilon must be positive".into()));
    }
    require_psd(a, tol)?;
    let rank = a.tensor_rank(T::lit(RANK_TOL));
    if rank != 3 {
        return Err(Error::WrongRank { expected: 3, found: rank });
    }
    let (left, right) = rank3_split(a, tol)?;

    let id2 = ComplexMatrix::<T>::identity(2);
    let a1_eps = &left[0] + &id2.scale(epsilon);
    let es1 = hermitian_eig(&a1_eps, tol)?;
    let r = es1.apply(|x| x.max(T::zero()).sqrt());
    let r_inv = es1.apply(|x| T::one() / x.sqrt());

    let a2p = (&(&r_inv * &left[1]) * &r_inv).hermitian_part();
    let es2 = hermitian_eig(&a2p, tol)?;
    let u = es2.vectors.clone();
    let d = [es2.values[0], es2.values[1]];
    let d_scale = T::one().max(d[0].abs()).max(d[1].abs());
    if (d[0] - d[1]).abs() <= tol * d_scale {
        return Err(Error::DegenerateD);
    }

    let a3pp = (&(&u.adjoint() * &(&(&r_inv * &left[2]) * &r_inv)) * &u).hermitian_part();
    let c = (a3pp[(0, 0)].re - a3pp[(1, 1)].re) / (d[0] - d[1]);
    let a_coef = a3pp[(0, 0)].re - c * d[0];
    let b = a3pp[(1, 0)];
    if b.norm() <= tol * T::one().max(a3pp.max_abs()) {
        return Err(Error::ZeroOffDiagonal);
    }

    let mut v = ComplexMatrix::identity(2);
    v[(1, 1)] = b.conj();
    let l = &(&v * &u.adjoint()) * &r_inv;

    let a_eps = a.add(&BipartiteOperator::product(&id2, &right[0]).scale(epsilon));
    let f = a_eps.conjugate_left(&l);
    let f_out = BipartiteOperator::new(a.k(), a.m(), f.matrix().hermitian_part())?;

    Ok(ReductionChain { epsilon, left, right, r, u, d, a: a_coef, c, b, v, l, a_eps, f_out })
}

/// Runs the reduction for a decreasing sequence of `ε`, as used to certify
/// the `ε → 0` limit.
pub fn rank3_reduce_sequence<T: Real>(
    a: &BipartiteOperator<T>,
    epsilons: &[T],
    tol: T,
) -> Result<Vec<ReductionChain<T>>> {
    epsilons.iter().map(|&e| rank3_reduce(a, e, tol)).collect()
}

// ---------------------------------------------------------------------------
// canonical form in M₂ ⊗ M₂

/// Intermediate quantities of the canonical-form construction.
#[derive(Clone, Debug)]
pub struct CanonicalTrace<T: Real> {
    /// `F(Id)`.
    pub u: Vec<C<T>>,
    /// Hermitian kernel vector of `B = S(A^{t2}) − λ·uu^t`.
    pub n: Vec<C<T>>,
    /// Real unit vector in `span{e₁⊗e₁, e₂⊗e₂}` orthogonal to `n`.
    pub d: Vec<C<T>>,
    pub mu: T,
    /// Hermitian eigenvectors of `B − μ·dd^t` for its two positive eigenvalues.
    pub r: Vec<C<T>>,
    pub s: Vec<C<T>>,
    pub a: T,
    pub b: T,
}

/// `A = λ·Id⊗Id + D⊗D + γ⊗γ + δ⊗δ` with `λ > 0`, `D` real diagonal and
/// `γ, δ` Hermitian.
#[derive(Clone, Debug)]
pub struct CanonicalFormSPC2<T: Real> {
    pub lambda: T,
    pub d: ComplexMatrix<T>,
    pub gamma: ComplexMatrix<T>,
    pub delta: ComplexMatrix<T>,
    pub trace: CanonicalTrace<T>,
}

impl<T: Real> CanonicalFormSPC2<T> {
    pub fn reconstruct(&self) -> BipartiteOperator<T> {
        let id = ComplexMatrix::identity(4).scale(self.lambda);
        let sum = &(&(&id + &self.d.kron(&self.d)) + &self.gamma.kron(&self.gamma)) + &self.delta.kron(&self.delta);
        BipartiteOperator::new(2, 2, sum).expect("4x4")
    }

    /// `‖A − reconstruction‖ / ‖A‖`.
    pub fn residual(&self, a: &BipartiteOperator<T>) -> T {
        a.matrix().distance(self.reconstruct().matrix()) / a.matrix().frobenius_norm()
    }

    /// `{√λ·Id, D, γ, δ}`, the Hermitian factors of the symmetric decomposition.
    pub fn terms(&self) -> [ComplexMatrix<T>; 4] {
        [ComplexMatrix::identity(2).scale(self.lambda.sqrt()), self.d.clone(), self.gamma.clone(), self.delta.clone()]
    }
}

/// Canonical form of a rank-4 SPC matrix in `M₂ ⊗ M₂`.
///
/// `M = S(A^{t2})` is positive definite. `λ = 1/(u^*M⁻¹u)` is the largest
/// multiple of `uu^t` that keeps `B = M − λuu^t` PSD; its kernel is spanned by
/// the Hermitian vector `n = M⁻¹u`. A real `d ∈ span{e₁⊗e₁, e₂⊗e₂}` orthogonal
/// to `n` lies in the range of `B`, and `μ = 1/(d^*B⁺d)` drops the rank once
/// more. The rank-2 remainder has Hermitian eigenvectors `r, s`.
pub fn spc_canonical_2x2<T: Real>(a: &BipartiteOperator<T>, tol: T) -> Result<CanonicalFormSPC2<T>> {
    if a.k() != 2 || a.m() != 2 {
        return Err(Error::DimensionMismatch(format!("canonical form needs 2x2, got {}x{}", a.k(), a.m())));
    }
    if !is_spc(a, tol)? {
        return Err(Error::NotSpc);
    }
    let rank = a.tensor_rank(T::lit(RANK_TOL));
    if rank != 4 {
        return Err(Error::RankNot4(rank));
    }

    let m = a.partial_transpose_right().realign()?.hermitian_part();
    let es = hermitian_eig(&m, tol)?;
    if es.min() <= T::lit(RANK_TOL) * es.max() {
        return Err(Error::RankNot4(es.values.iter().filter(|&&x| x > T::lit(RANK_TOL) * es.max()).count()));
    }
    let m_inv = es.apply(|x| T::one() / x);

    let u = vec_f(&ComplexMatrix::<T>::identity(2));
    let n = m_inv.matvec(&u);
    let lambda = T::one() / vdot(&u, &n).re;
    let b_mat = (&m - &ComplexMatrix::outer(&u, &u).scale(lambda)).hermitian_part();

    let b_norm = b_mat.frobenius_norm();
    let kernel_defect = vnorm(&b_mat.matvec(&n)) / (b_norm * vnorm(&n));
    let kernel_tol = tol.sqrt().max(T::lit(1e-6));
    if kernel_defect > kernel_tol || !is_hermitian_vector(&n, kernel_tol) {
        return Err(Error::NumericalBreakdown(format!(
            "kernel vector of the rank-one downdate is not Hermitian (defect {:.3e})",
            kernel_defect.as_f64()
        )));
    }

    // d₁ n₁₁ + d₂ n₂₂ = 0 with n₁₁, n₂₂ real
    let (n11, n22) = (n[0].re, n[3].re);
    let norm = (n11 * n11 + n22 * n22).sqrt();
    let (d1, d2) = if norm <= T::epsilon() * vnorm(&n) { (T::one(), T::zero()) } else { (n22 / norm, -n11 / norm) };
    let d_vec = vec![cr(d1), cz(), cz(), cr(d2)];

    let b_pinv = hermitian_pinv(&b_mat, tol, T::lit(RANK_TOL))?;
    let mu = T::one() / vdot(&d_vec, &b_pinv.matvec(&d_vec)).re;
    if !mu.is_finite() || mu <= T::zero() {
        return Err(Error::NumericalBreakdown(format!(
            "second downdate coefficient {:.3e} is not positive",
            mu.as_f64()
        )));
    }
    let rest = (&b_mat - &ComplexMatrix::outer(&d_vec, &d_vec).scale(mu)).hermitian_part();
    let basis = hermitian_eigenbasis(&rest, kernel_tol)?;
    let mut pairs = basis.vectors;
    pairs.sort_by(|p, q| q.0.partial_cmp(&p.0).unwrap_or(std::cmp::Ordering::Equal));
    let (ea, r) = pairs[0].clone();
    let (eb, s) = pairs[1].clone();
    let floor = T::lit(RANK_TOL) * b_norm;
    let leftover = pairs[2..].iter().map(|p| p.0.abs()).fold(T::zero(), T::max);
    if !(ea > floor && eb > floor) || leftover > kernel_tol * b_norm {
        return Err(Error::NumericalBreakdown(format!(
            "remainder is not PSD of rank 2 (eigenvalues {:.3e}, {:.3e}, leftover {:.3e})",
            ea.as_f64(),
            eb.as_f64(),
            leftover.as_f64()
        )));
    }

    let sm = mu.sqrt();
    let d = ComplexMatrix::diag_real(&[sm * d1, sm * d2]);
    let gamma = unvec_f(&r).scale(ea.sqrt()).hermitian_part();
    let delta = unvec_f(&s).scale(eb.sqrt()).hermitian_part();
    Ok(CanonicalFormSPC2 { lambda, d, gamma, delta, trace: CanonicalTrace { u, n, d: d_vec, mu, r, s, a: ea, b: eb } })
}

/// Smallest eigenvalue of `S(A^{t2}) − (λ + bump)·uu^t`; negative when `λ` is
/// the largest admissible coefficient.
pub fn lambda_maximality_margin<T: Real>(a: &BipartiteOperator<T>, lambda: T, bump: T, tol: T) -> Result<T> {
    let m = a.partial_transpose_right().realign()?.hermitian_part();
    let u = vec_f(&ComplexMatrix::<T>::identity(a.k()));
    let shifted = &m - &ComplexMatrix::outer(&u, &u).scale(lambda + bump);
    Ok(hermitian_eig(&shifted, tol)?.min())
}
