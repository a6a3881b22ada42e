//! Explicit matrices and families: the 3×3 SPC-but-not-PPT counterexample,
//! Sym/ASym bases of `M_{2^n}`, the flip family `α·Id⊗Id + ½(T − uu^t)`,
//! antisymmetric families, and seeded random generators.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::bipartite::{flip, max_entangled_vector, BipartiteOperator, RANK_TOL};
use crate::classify::{classify, is_ppt, is_spc, ClassificationReport};
use crate::error::{Error, Result};
use crate::linalg::charpoly::{char_poly_exact, CharPoly, IntMatrix};
use crate::linalg::eig::hermitian_eig;
use crate::linalg::matrix::{vdot, vnorm, ComplexMatrix};
use crate::scalar::{ci, cr, Real, C};

/// Coefficients of `det(M − xI)` for `M = D⊗D + A⊗A`, as printed for the
/// counterexample (degree 9 down to the constant).
pub const EXPECTED_P: [i64; 10] =
    [-1, 36, 5420, 104400, -427924, -14134608, 11251344, 415328832, -1106058240, 671846400];

/// Same for `D⊗D − A⊗A`; differs from [`EXPECTED_P`] only in the `x³` term.
pub const EXPECTED_Q: [i64; 10] =
    [-1, 36, 5420, 104400, -427924, -14134608, 10924160, 415328832, -1106058240, 671846400];

/// The seeded generator used by every sampler in this module.
pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------
// counterexample

#[derive(Clone, Debug)]
pub struct Counterexample3x3<T: Real> {
    /// `diag(1, 3, −10)`.
    pub d: ComplexMatrix<T>,
    /// Real antisymmetric with upper triangle `(1, 1, 1)`.
    pub a: ComplexMatrix<T>,
    /// Characteristic polynomial of `D⊗D + A⊗A`.
    pub p: CharPoly,
    /// Characteristic polynomial of `D⊗D − A⊗A`.
    pub q: CharPoly,
    /// Smallest eigenvalue of `D⊗D + A⊗A`.
    pub m_p: T,
    /// Smallest eigenvalue of `D⊗D − A⊗A`.
    pub m_q: T,
    /// `|m_q|·Id⊗Id + D⊗D + (iA)⊗(iA)`.
    pub c: BipartiteOperator<T>,
}

impl<T: Real> Counterexample3x3<T> {
    /// `p − q` as a polynomial, degree descending (monic normalization).
    pub fn p_minus_q(&self) -> Vec<BigInt> {
        self.p.monic.iter().zip(&self.q.monic).map(|(a, b)| a - b).collect()
    }

    pub fn p_matches_expected(&self) -> bool {
        self.p.signed() == EXPECTED_P.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>()
    }

    pub fn q_matches_expected(&self) -> bool {
        self.q.signed() == EXPECTED_Q.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>()
    }

    /// Coefficient `c` with `p − q = c·x³` in the `det(M − xI)` normalization,
    /// or `None` when the difference has any other term.
    pub fn cubic_gap(&self) -> Option<BigInt> {
        let diff: Vec<BigInt> = self.p.signed().iter().zip(self.q.signed()).map(|(a, b)| a - b).collect();
        let cubic = diff.len().checked_sub(4)?;
        diff.iter().enumerate().all(|(i, c)| i == cubic || c.is_zero()).then(|| diff[cubic].clone())
    }

    /// `p − q = c·x³` with `c > 0` and `p(0), q(0) ≠ 0`. A common root `r`
    /// would satisfy `c·r³ = 0`, so these facts rule one out.
    pub fn roots_are_disjoint(&self) -> bool {
        let zero = BigInt::zero();
        self.cubic_gap().is_some_and(|c| c > zero) && self.p.eval(&zero) != zero && self.q.eval(&zero) != zero
    }

    /// The `(iA)`-factor used in the SPC decomposition of `C`.
    pub fn ia(&self) -> ComplexMatrix<T> {
        self.a.scale_c(ci(T::one()))
    }
}

pub fn counterexample_d<T: Real>() -> ComplexMatrix<T> {
    ComplexMatrix::diag_real(&[T::one(), T::lit(3.0), T::lit(-10.0)])
}

pub fn counterexample_a<T: Real>() -> ComplexMatrix<T> {
    ComplexMatrix::from_real_rows(&[&[0.0, 1.0, 1.0], &[-1.0, 0.0, 1.0], &[-1.0, -1.0, 0.0]])
}

pub fn build_counterexample<T: Real>() -> Counterexample3x3<T> {
    let d = counterexample_d::<T>();
    let a = counterexample_a::<T>();
    let dd = d.kron(&d);
    let aa = a.kron(&a);
    let plus = &dd + &aa;
    let minus = &dd - &aa;

    let p = char_poly_exact(&IntMatrix::from_complex(&plus).expect("integer entries"));
    let q = char_poly_exact(&IntMatrix::from_complex(&minus).expect("integer entries"));
    let tol = T::lit(crate::DEFAULT_TOL);
    let m_p = hermitian_eig(&plus, tol).expect("real symmetric").min();
    let m_q = hermitian_eig(&minus, tol).expect("real symmetric").min();

    // (iA)⊗(iA) = −A⊗A
    let c = &(&ComplexMatrix::identity(9).scale(m_q.abs()) + &dd) - &aa;
    Counterexample3x3 { d, a, p, q, m_p, m_q, c: BipartiteOperator::new(3, 3, c).expect("9x9") }
}

// ---------------------------------------------------------------------------
// Sym / ASym bases

/// Orthonormal real bases of `Sym(2^n)` and `ASym(2^n)` whose elements all have
/// eigenvalues of modulus `2^{-n/2}`.
#[derive(Clone, Debug)]
pub struct SymAsymBases<T: Real> {
    pub n: usize,
    pub sym: Vec<ComplexMatrix<T>>,
    pub asym: Vec<ComplexMatrix<T>>,
}

impl<T: Real> SymAsymBases<T> {
    pub fn dim(&self) -> usize {
        1 << self.n
    }
}

fn seed_bases<T: Real>() -> (Vec<ComplexMatrix<T>>, ComplexMatrix<T>) {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let s1 = ComplexMatrix::from_real_rows(&[&[h, 0.0], &[0.0, h]]);
    let s2 = ComplexMatrix::from_real_rows(&[&[h, 0.0], &[0.0, -h]]);
    let s3 = ComplexMatrix::from_real_rows(&[&[0.0, h], &[h, 0.0]]);
    let a = ComplexMatrix::from_real_rows(&[&[0.0, h], &[-h, 0.0]]);
    (vec![s1, s2, s3], a)
}

pub fn sym_asym_bases<T: Real>(n: usize) -> Result<SymAsymBases<T>> {
    if !(1..=4).contains(&n) {
        return Err(Error::DepthOutOfRange(n));
    }
    let (s_seed, a_seed) = seed_bases::<T>();
    let mut sym = s_seed.clone();
    let mut asym = vec![a_seed.clone()];
    for _ in 1..n {
        let mut next_sym = Vec::with_capacity(3 * sym.len() + asym.len());
        let mut next_asym = Vec::with_capacity(3 * asym.len() + sym.len());
        for s in &s_seed {
            for sj in &sym {
                next_sym.push(s.kron(sj));
            }
        }
        for a in &asym {
            next_sym.push(a_seed.kron(a));
        }
        for s in &s_seed {
            for a in &asym {
                next_asym.push(s.kron(a));
            }
        }
        for sj in &sym {
            next_asym.push(a_seed.kron(sj));
        }
        sym = next_sym;
        asym = next_asym;
    }
    Ok(SymAsymBases { n, sym, asym })
}

/// Largest deviation of the Gram matrix `tr(X_i X_j^t)` from the identity.
pub fn gram_defect<T: Real>(family: &[ComplexMatrix<T>]) -> T {
    let mut worst = T::zero();
    for (i, x) in family.iter().enumerate() {
        for (j, y) in family.iter().enumerate() {
            let target = if i == j { T::one() } else { T::zero() };
            worst = worst.max((x.inner(y) - cr(target)).norm());
        }
    }
    worst
}

/// Largest `|tr(X Y^t)|` across the two families.
pub fn cross_gram_defect<T: Real>(a: &[ComplexMatrix<T>], b: &[ComplexMatrix<T>]) -> T {
    a.iter().flat_map(|x| b.iter().map(move |y| x.inner(y).norm())).fold(T::zero(), T::max)
}

/// Largest deviation of an eigenvalue modulus from `target`. Antisymmetric
/// real matrices are handled through the Hermitian matrix `iX`.
pub fn eigen_modulus_defect<T: Real>(family: &[ComplexMatrix<T>], target: T) -> T {
    let tol = T::lit(crate::DEFAULT_TOL);
    family
        .iter()
        .map(|x| {
            let h = if x.is_hermitian(tol) { x.clone() } else { x.scale_c(ci(T::one())) };
            let es = hermitian_eig(&h, tol).expect("real symmetric or antisymmetric input");
            es.values.iter().map(|v| (v.abs() - target).abs()).fold(T::zero(), T::max)
        })
        .fold(T::zero(), T::max)
}

// ---------------------------------------------------------------------------
// flip family

#[derive(Clone, Debug)]
pub struct FlipFamilyInstance<T: Real> {
    pub n: usize,
    pub k: usize,
    pub alpha: T,
    pub u: Vec<C<T>>,
    pub t: BipartiteOperator<T>,
    /// `α·Id⊗Id + ½(T − uu^t)`.
    pub c: BipartiteOperator<T>,
    pub bases: SymAsymBases<T>,
    /// `‖uu^t − (ΣS⊗S + ΣA⊗A)‖_F`.
    pub uut_identity_residual: T,
    /// `max(‖T − (ΣS⊗S − ΣA⊗A)‖_F, ‖T − (uu^t)^{t2}‖_F)`.
    pub flip_identity_residual: T,
    /// `‖C − (α·Id⊗Id + Σ(iA)⊗(iA))‖_F`.
    pub antisym_form_residual: T,
}

impl<T: Real> FlipFamilyInstance<T> {
    /// `(k − 1)/2`, the smallest `α` for which `C` is PSD.
    pub fn threshold(&self) -> T {
        T::lit((self.k as f64 - 1.0) / 2.0)
    }

    /// Spectrum of `½(T − uu^t)`.
    pub fn half_spectrum(&self) -> Vec<T> {
        let tol = T::lit(crate::DEFAULT_TOL);
        let base = &self.c.matrix().clone() - &ComplexMatrix::identity(self.k * self.k).scale(self.alpha);
        hermitian_eig(&base, tol).expect("real symmetric").values
    }

    /// Largest distance from an eigenvalue of `½(T − uu^t)` to `{−(k−1)/2, ½, −½}`.
    pub fn half_spectrum_defect(&self) -> T {
        let allowed = [-self.threshold(), T::lit(0.5), T::lit(-0.5)];
        self.half_spectrum()
            .iter()
            .map(|&v| allowed.iter().map(|&a| (v - a).abs()).fold(T::infinity(), T::min))
            .fold(T::zero(), T::max)
    }

    /// For each antisymmetric basis element, `(1/k)·Id⊗Id + (iA_j)⊗(iA_j)`.
    pub fn brackets(&self) -> Vec<BipartiteOperator<T>> {
        let kk = self.k * self.k;
        let inv_k = T::one() / T::lit(self.k as f64);
        self.bases
            .asym
            .iter()
            .map(|a| {
                let ia = a.scale_c(ci(T::one()));
                let mat = &ComplexMatrix::identity(kk).scale(inv_k) + &ia.kron(&ia);
                BipartiteOperator::new(self.k, self.k, mat).expect("k²×k²")
            })
            .collect()
    }
}

pub fn build_flip_family<T: Real>(n: usize, alpha: T) -> Result<FlipFamilyInstance<T>> {
    let bases = sym_asym_bases::<T>(n)?;
    let k = bases.dim();
    let kk = k * k;
    let u = max_entangled_vector::<T>(k);
    let t = flip::<T>(k);
    let uut = ComplexMatrix::outer(&u, &u);

    let mut sum_s = ComplexMatrix::zeros(kk, kk);
    for s in &bases.sym {
        sum_s = &sum_s + &s.kron(s);
    }
    let mut sum_a = ComplexMatrix::zeros(kk, kk);
    for a in &bases.asym {
        sum_a = &sum_a + &a.kron(a);
    }
    let uut_identity_residual = uut.distance(&(&sum_s + &sum_a));
    let uut_op = BipartiteOperator::new(k, k, uut.clone())?;
    let flip_identity_residual =
        t.matrix().distance(&(&sum_s - &sum_a)).max(t.matrix().distance(uut_op.partial_transpose_right().matrix()));

    let c = &ComplexMatrix::identity(kk).scale(alpha) + &(t.matrix() - &uut).scale(T::lit(0.5));
    let mut antisym_form = ComplexMatrix::identity(kk).scale(alpha);
    for a in &bases.asym {
        let ia = a.scale_c(ci(T::one()));
        antisym_form = &antisym_form + &ia.kron(&ia);
    }
    let antisym_form_residual = c.distance(&antisym_form);

    Ok(FlipFamilyInstance {
        n,
        k,
        alpha,
        u,
        t,
        c: BipartiteOperator::new(k, k, c)?,
        bases,
        uut_identity_residual,
        flip_identity_residual,
        antisym_form_residual,
    })
}

// ---------------------------------------------------------------------------
// antisymmetric families

#[derive(Clone, Debug)]
pub struct AntisymFamily<T: Real> {
    pub b_list: Vec<ComplexMatrix<T>>,
    pub alpha: T,
    /// `Σ (iB_j) ⊗ (iB_j)`.
    pub a_sum: BipartiteOperator<T>,
    pub lambda_min: T,
    pub lambda_max: T,
}

impl<T: Real> AntisymFamily<T> {
    /// `λ_min < 0` and `|μ| ≤ |λ_min| + slack` for every eigenvalue `μ`.
    pub fn spectral_bound_holds(&self, slack: T) -> bool {
        self.lambda_min < T::zero() && self.lambda_max.abs() <= self.lambda_min.abs() + slack
    }

    pub fn c(&self) -> BipartiteOperator<T> {
        let kk = self.a_sum.dim();
        let mat = &ComplexMatrix::identity(kk).scale(self.alpha) + self.a_sum.matrix();
        BipartiteOperator::new(self.a_sum.k(), self.a_sum.k(), mat).expect("square split")
    }
}

/// Result of classifying `C = α·Id⊗Id + Σ(iB_j)⊗(iB_j)`.
#[derive(Clone, Debug)]
pub struct AntisymOutcome<T: Real> {
    pub family: AntisymFamily<T>,
    pub report: ClassificationReport<T>,
    /// `α ≥ |λ_min|` up to tolerance.
    pub above_threshold: bool,
    /// PSD, SPC, PPT and `α ≥ |λ_min|` all agree.
    pub equivalence_holds: bool,
}

pub fn antisym_family<T: Real>(b_list: &[ComplexMatrix<T>], alpha: T, tol: T) -> Result<AntisymFamily<T>> {
    let first = b_list.first().ok_or_else(|| Error::DimensionMismatch("empty family".into()))?;
    let k = first.rows();
    for (index, b) in b_list.iter().enumerate() {
        let scale = T::one().max(b.max_abs());
        let antisym = b.is_square()
            && b.rows() == k
            && b.as_slice().iter().all(|z| z.im.abs() <= tol * scale)
            && (b + &b.transpose()).max_abs() <= tol * scale;
        if !antisym {
            return Err(Error::NotAntisymmetric { index });
        }
    }
    let mut sum = ComplexMatrix::zeros(k * k, k * k);
    for b in b_list {
        let ib = b.map(|z| cr(z.re)).scale_c(ci(T::one()));
        sum = &sum + &ib.kron(&ib);
    }
    let es = hermitian_eig(&sum, tol)?;
    Ok(AntisymFamily {
        b_list: b_list.to_vec(),
        alpha,
        a_sum: BipartiteOperator::new(k, k, sum)?,
        lambda_min: es.min(),
        lambda_max: es.max(),
    })
}

pub fn antisym_family_classify<T: Real>(b_list: &[ComplexMatrix<T>], alpha: T, tol: T) -> Result<AntisymOutcome<T>> {
    let family = antisym_family(b_list, alpha, tol)?;
    let c = family.c();
    let report = classify(&c, tol);
    let scale = T::one().max(family.lambda_min.abs());
    let above_threshold = alpha >= family.lambda_min.abs() - tol * scale;
    let spc = report.spc.unwrap_or(false);
    let equivalence_holds = report.psd == spc && spc == report.ppt && report.ppt == above_threshold;
    Ok(AntisymOutcome { family, report, above_threshold, equivalence_holds })
}

// ---------------------------------------------------------------------------
// random generators

fn normal<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    T::lit(rng.sample::<f64, _>(StandardNormal))
}

fn uniform<T: Real, R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> T {
    T::lit(rng.random_range(lo..hi))
}

/// Complex Gaussian matrix with i.i.d. standard normal real and imaginary parts.
pub fn random_complex_gaussian<T: Real, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix<T> {
    let mut data = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        let re = normal(rng);
        let im = normal(rng);
        data.push(C::new(re, im));
    }
    ComplexMatrix::from_vec(rows, cols, data)
}

/// `(G + G^*)/2` for a complex Gaussian `G`.
pub fn random_hermitian<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix<T> {
    random_complex_gaussian::<T, R>(n, n, rng).hermitian_part()
}

pub fn random_real_antisymmetric<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix<T> {
    let mut b = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let x: T = normal(rng);
            b[(i, j)] = cr(x);
            b[(j, i)] = cr(-x);
        }
    }
    b
}

fn gram_schmidt<T: Real>(cols: Vec<Vec<C<T>>>) -> Vec<Vec<C<T>>> {
    let mut out: Vec<Vec<C<T>>> = Vec::with_capacity(cols.len());
    for mut c in cols {
        for q in &out {
            let proj = vdot(q, &c);
            for (x, y) in c.iter_mut().zip(q) {
                *x -= *y * proj;
            }
        }
        let nrm = vnorm(&c);
        out.push(c.into_iter().map(|z| z / nrm).collect());
    }
    out
}

/// Haar-distributed unitary (Gram–Schmidt of a complex Gaussian).
pub fn random_unitary<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix<T> {
    let g = random_complex_gaussian::<T, R>(n, n, rng);
    ComplexMatrix::from_columns(&gram_schmidt((0..n).map(|j| g.column(j)).collect()))
}

/// Haar-distributed real orthogonal matrix.
pub fn random_orthogonal<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix<T> {
    let cols: Vec<Vec<C<T>>> = (0..n).map(|_| (0..n).map(|_| cr(normal(rng))).collect()).collect();
    ComplexMatrix::from_columns(&gram_schmidt(cols))
}

/// SPC matrix `c·Id⊗Id + Σ α_i H_i⊗H_i` with Gaussian Hermitian `H_i`,
/// `α_i ~ U(0.1, 1)` and `c = max(0, −λ_min) + U(0, 1)`.
pub fn random_spc<T: Real>(k: usize, terms: usize, seed: u64) -> BipartiteOperator<T> {
    assert!(k >= 2 && terms >= 1);
    let mut rng = rng_from_seed(seed);
    let kk = k * k;
    let mut a = ComplexMatrix::zeros(kk, kk);
    for _ in 0..terms {
        let h = random_hermitian::<T, _>(k, &mut rng);
        let alpha: T = uniform(&mut rng, 0.1, 1.0);
        a = &a + &h.kron(&h).scale(alpha);
    }
    let tol = T::lit(crate::DEFAULT_TOL);
    let lmin = hermitian_eig(&a, tol).expect("Hermitian by construction").min();
    let shift = T::zero().max(-lmin) + uniform::<T, _>(&mut rng, 0.0, 1.0);
    let a = &a + &ComplexMatrix::identity(kk).scale(shift);
    BipartiteOperator::new(k, k, a).expect("k²×k²")
}

/// Trace-one state supported on the symmetric subspace: `PGG^*P / tr` with
/// `P = (Id + T)/2`.
pub fn random_symmetric_state<T: Real>(k: usize, seed: u64) -> BipartiteOperator<T> {
    assert!(k >= 2);
    let mut rng = rng_from_seed(seed);
    let kk = k * k;
    let g = random_complex_gaussian::<T, _>(kk, kk, &mut rng);
    let m = &g * &g.adjoint();
    let p = (&ComplexMatrix::identity(kk) + flip::<T>(k).matrix()).scale(T::lit(0.5));
    let rho = (&(&p * &m) * &p).hermitian_part();
    let tr = rho.trace().re;
    BipartiteOperator::new(k, k, rho.scale(T::one() / tr)).expect("k²×k²")
}

/// PSD matrix in `M_2 ⊗ M_m` with tensor rank exactly 3:
/// `c·Id⊗Id + γ₂⊗δ₂ + γ₃⊗δ₃` with traceless Hermitian `γ_i`.
pub fn random_rank3_psd_2xm<T: Real>(m: usize, seed: u64) -> BipartiteOperator<T> {
    assert!(m >= 2);
    let mut rng = rng_from_seed(seed);
    let tol = T::lit(crate::DEFAULT_TOL);
    loop {
        let mut rest = ComplexMatrix::zeros(2 * m, 2 * m);
        for _ in 0..2 {
            let g = random_hermitian::<T, _>(2, &mut rng);
            let half_tr = g.trace().re * T::lit(0.5);
            let g = &g - &ComplexMatrix::identity(2).scale(half_tr);
            let d = random_hermitian::<T, _>(m, &mut rng);
            rest = &rest + &g.kron(&d);
        }
        let lmin = hermitian_eig(&rest, tol).expect("Hermitian by construction").min();
        let c = lmin.abs() + uniform::<T, _>(&mut rng, 0.0, 1.0);
        let a = &rest + &ComplexMatrix::identity(2 * m).scale(c);
        let op = BipartiteOperator::new(2, m, a).expect("2m×2m");
        if op.tensor_rank(T::lit(RANK_TOL)) == 3 {
            return op;
        }
    }
}

/// `count` real antisymmetric `k × k` Gaussian matrices.
pub fn random_antisym_list<T: Real>(k: usize, count: usize, seed: u64) -> Vec<ComplexMatrix<T>> {
    let mut rng = rng_from_seed(seed);
    (0..count).map(|_| random_real_antisymmetric::<T, _>(k, &mut rng)).collect()
}

/// Convenience wrapper used by tests and sweeps.
pub fn spc_and_ppt<T: Real>(a: &BipartiteOperator<T>, tol: T) -> Result<(bool, bool)> {
    Ok((is_spc(a, tol)?, is_ppt(a, tol)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{is_symmetric_state, Certificate, Verdict};

    #[test]
    fn counterexample_polynomials_match_printed_values() {
        let ce = build_counterexample::<f64>();
        assert!(ce.p_matches_expected(), "p = {:?}", ce.p.signed());
        assert!(ce.q_matches_expected(), "q = {:?}", ce.q.signed());
        assert_eq!(ce.p.signed()[2], BigInt::from(5420));
        assert_eq!(ce.p.signed()[9], BigInt::from(671846400));
    }

    #[test]
    fn p_minus_q_is_a_positive_cube() {
        let ce = build_counterexample::<f64>();
        let diff = ce.p_minus_q();
        // det(M − xI) normalization: p − q = c x³; in the monic normalization
        // the sign flips with the odd degree
        let signed: Vec<BigInt> = diff.iter().map(|c| -c).collect();
        for (i, c) in signed.iter().enumerate() {
            if i == 6 {
                assert_eq!(*c, BigInt::from(11251344 - 10924160));
            } else {
                assert_eq!(*c, BigInt::from(0));
            }
        }
    }

    #[test]
    fn counterexample_roots_are_disjoint() {
        let ce = build_counterexample::<f64>();
        assert_eq!(ce.cubic_gap(), Some(BigInt::from(327184)));
        assert!(ce.roots_are_disjoint());
    }

    #[test]
    fn counterexample_spectral_facts() {
        let ce = build_counterexample::<f64>();
        assert!(ce.m_p < ce.m_q && ce.m_q < 0.0);
        assert!(ce.m_q.abs() + ce.m_p < -1e-6);
        let r = classify(&ce.c, 1e-9);
        assert!(r.psd);
        assert_eq!(r.spc, Some(true));
        assert!(!r.ppt);
        assert_eq!(r.tensor_rank, 3);
        assert_eq!(r.symmetric_state, Some(false));
        assert_eq!(r.separability.verdict, Verdict::Entangled);
        assert!(!is_symmetric_state(&ce.c, 1e-9));
        // min eigenvalue of the partial transpose is |m_q| + m_p
        assert!((r.min_eig_pt.unwrap() - (ce.m_q.abs() + ce.m_p)).abs() < 1e-9);
    }

    #[test]
    fn seed_bases_match_printed_matrices() {
        let b = sym_asym_bases::<f64>(1).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(b.sym[0], ComplexMatrix::from_real_rows(&[&[h, 0.0], &[0.0, h]]));
        assert_eq!(b.sym[1], ComplexMatrix::from_real_rows(&[&[h, 0.0], &[0.0, -h]]));
        assert_eq!(b.sym[2], ComplexMatrix::from_real_rows(&[&[0.0, h], &[h, 0.0]]));
        assert_eq!(b.asym[0], ComplexMatrix::from_real_rows(&[&[0.0, h], &[-h, 0.0]]));
    }

    #[test]
    fn depth_two_bases() {
        let b = sym_asym_bases::<f64>(2).unwrap();
        assert_eq!(b.sym.len(), 10);
        assert_eq!(b.asym.len(), 6);
        assert!(gram_defect(&b.sym) < 1e-12);
        assert!(gram_defect(&b.asym) < 1e-12);
        assert!(cross_gram_defect(&b.sym, &b.asym) < 1e-12);
        assert!(eigen_modulus_defect(&b.sym, 0.5) < 1e-12);
        assert!(eigen_modulus_defect(&b.asym, 0.5) < 1e-12);
    }

    #[test]
    fn depth_out_of_range() {
        assert!(matches!(sym_asym_bases::<f64>(0), Err(Error::DepthOutOfRange(0))));
        assert!(matches!(sym_asym_bases::<f64>(5), Err(Error::DepthOutOfRange(5))));
        assert!(build_flip_family::<f64>(5, 1.0).is_err());
    }

    #[test]
    fn flip_family_thresholds() {
        let f = build_flip_family::<f64>(1, 0.5).unwrap();
        let r = classify(&f.c, 1e-9);
        assert!(r.psd && r.ppt && r.spc == Some(true));
        assert!(r.min_eig.unwrap().abs() < 1e-12);
        assert!(!classify(&build_flip_family::<f64>(1, 0.49).unwrap().c, 1e-9).psd);

        let f = build_flip_family::<f64>(2, 1.5).unwrap();
        let r = classify(&f.c, 1e-9);
        assert!(r.psd && r.ppt && r.spc == Some(true));
        assert!(r.separability.has(Certificate::ExplicitDecomposition));
        assert!(f.uut_identity_residual < 1e-10 && f.flip_identity_residual < 1e-10);
        assert!(f.antisym_form_residual < 1e-10);
        assert!(f.half_spectrum_defect() < 1e-12);
    }

    #[test]
    fn flip_family_brackets_have_two_point_spectrum() {
        let f = build_flip_family::<f64>(2, 1.5).unwrap();
        let k = f.k as f64;
        for b in f.brackets() {
            let es = hermitian_eig(b.matrix(), 1e-9).unwrap();
            for v in es.values {
                assert!(v.abs() < 1e-10 || (v - 2.0 / k).abs() < 1e-10, "eigenvalue {v}");
            }
        }
    }

    #[test]
    fn antisym_family_of_counterexample_a() {
        let a = counterexample_a::<f64>();
        let fam = antisym_family(std::slice::from_ref(&a), 0.0, 1e-9).unwrap();
        assert!(fam.spectral_bound_holds(1e-10));
        let at = antisym_family_classify(std::slice::from_ref(&a), fam.lambda_min.abs(), 1e-9).unwrap();
        assert!(at.report.ppt && at.report.spc == Some(true) && at.equivalence_holds);
        let below = antisym_family_classify(&[a], fam.lambda_min.abs() - 0.1, 1e-9).unwrap();
        assert!(!below.report.psd && !below.report.ppt && below.report.spc == Some(false));
        assert!(below.equivalence_holds);
    }

    #[test]
    fn antisym_family_flip_seed() {
        let b = sym_asym_bases::<f64>(1).unwrap();
        let out = antisym_family_classify(&b.asym, 0.5, 1e-9).unwrap();
        let flip_c = build_flip_family::<f64>(1, 0.5).unwrap().c;
        assert!(out.family.c().matrix().distance(flip_c.matrix()) < 1e-12);
        assert!(out.report.ppt && out.report.spc == Some(true));
    }

    #[test]
    fn antisym_rejects_symmetric_input() {
        let s = ComplexMatrix::<f64>::identity(3);
        assert!(matches!(antisym_family(&[s], 1.0, 1e-9), Err(Error::NotAntisymmetric { index: 0 })));
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(random_spc::<f64>(2, 3, 11), random_spc::<f64>(2, 3, 11));
        assert_ne!(random_spc::<f64>(2, 3, 11), random_spc::<f64>(2, 3, 12));
        assert_eq!(random_symmetric_state::<f64>(3, 5), random_symmetric_state::<f64>(3, 5));
        assert_eq!(random_rank3_psd_2xm::<f64>(3, 9), random_rank3_psd_2xm::<f64>(3, 9));
    }

    #[test]
    fn generator_postconditions() {
        for seed in 0..20 {
            let a = random_spc::<f64>(2, 3, seed);
            assert!(is_spc(&a, 1e-9).unwrap());
            assert!(is_ppt(&a, 1e-9).unwrap());
            assert!(a.tensor_rank(1e-8) <= 4);

            let rho = random_symmetric_state::<f64>(2 + (seed as usize % 3), seed);
            assert!(is_symmetric_state(&rho, 1e-12));
            assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);

            let b = random_rank3_psd_2xm::<f64>(3, seed);
            assert_eq!(b.tensor_rank(1e-8), 3);
            assert!(is_ppt(&b, 1e-9).unwrap());
        }
    }

    #[test]
    fn rank3_two_by_two_certificates_agree() {
        for seed in 0..10 {
            let b = random_rank3_psd_2xm::<f64>(2, seed);
            let r = classify(&b, 1e-9);
            assert_eq!(r.separability.verdict, Verdict::Separable);
            assert!(r.separability.has(Certificate::Ppt2x2));
            assert!(r.separability.has(Certificate::RankAtMost3In2xM));
        }
    }
}
