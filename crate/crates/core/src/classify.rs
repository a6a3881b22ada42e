//! PPT / SPC / symmetric-state predicates, the Schur-product witness and the
//! separability verdict.

use std::fmt;

use crate::bipartite::{flip, hermitian_schmidt, max_entangled_vector, BipartiteOperator, RANK_TOL};
use crate::error::{Error, Result};
use crate::linalg::eig::{hermitian_eig, psd_from_spectrum};
use crate::linalg::matrix::ComplexMatrix;
use crate::scalar::Real;

/// Evidence attached to a separability verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Certificate {
    /// PPT in `M_2 ⊗ M_2`, where PPT is equivalent to separability.
    Ppt2x2,
    /// PPT in `M_2 ⊗ M_3` (or `M_3 ⊗ M_2`).
    Ppt2x3,
    /// PSD with tensor rank at most 2.
    RankAtMost2,
    /// PSD with tensor rank at most 3 and one factor of dimension 2.
    RankAtMost3In2xM,
    /// Recognized as `α·Id⊗Id + ½(T − uu^t)` on `C^{2^n} ⊗ C^{2^n}` above the
    /// positivity threshold, which has an explicit separable decomposition.
    ExplicitDecomposition,
    /// Not PPT (this includes matrices that are not PSD at all).
    NotPpt,
}

impl Certificate {
    pub fn tag(self) -> &'static str {
        match self {
            Certificate::Ppt2x2 => "PPT-2x2",
            Certificate::Ppt2x3 => "PPT-2x3",
            Certificate::RankAtMost2 => "RANK≤2",
            Certificate::RankAtMost3In2xM => "RANK≤3-IN-2xM",
            Certificate::ExplicitDecomposition => "EXPLICIT-DECOMPOSITION",
            Certificate::NotPpt => "NOT-PPT",
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Separable,
    Entangled,
    Undecided,
}

impl Verdict {
    pub fn tag(self) -> &'static str {
        match self {
            Verdict::Separable => "SEPARABLE",
            Verdict::Entangled => "ENTANGLED",
            Verdict::Undecided => "UNDECIDED",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A verdict together with every certificate that applies, strongest first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separability {
    pub verdict: Verdict,
    pub certificates: Vec<Certificate>,
}

impl Separability {
    pub fn primary(&self) -> Option<Certificate> {
        self.certificates.first().copied()
    }

    pub fn has(&self, c: Certificate) -> bool {
        self.certificates.contains(&c)
    }
}

#[derive(Clone, Debug)]
pub struct ClassificationReport<T: Real> {
    pub k: usize,
    pub m: usize,
    pub hermitian: bool,
    pub psd: bool,
    pub ppt: bool,
    /// `None` when `k ≠ m`.
    pub spc: Option<bool>,
    /// `None` when `k ≠ m`.
    pub symmetric_state: Option<bool>,
    pub tensor_rank: usize,
    /// `None` for non-Hermitian input.
    pub min_eig: Option<T>,
    pub min_eig_pt: Option<T>,
    pub separability: Separability,
}

fn require_state<T: Real>(a: &BipartiteOperator<T>, tol: T) -> Result<()> {
    let es = hermitian_eig(a.matrix(), tol).map_err(|_| Error::NotAState { min_eig: f64::NAN })?;
    if !psd_from_spectrum(&es, tol) {
        return Err(Error::NotAState { min_eig: es.min().as_f64() });
    }
    Ok(())
}

/// `A^{t2}` is PSD; `A` itself must be PSD.
pub fn is_ppt<T: Real>(a: &BipartiteOperator<T>, tol: T) -> Result<bool> {
    require_state(a, tol)?;
    Ok(crate::linalg::is_psd(a.partial_transpose_right().matrix(), tol))
}

/// `S(A^{t2})` is Hermitian and PSD, which holds exactly when `A` admits a
/// Hermitian decomposition `Σ α_i A_i ⊗ A_i` with every `α_i > 0`.
pub fn is_spc<T: Real>(a: &BipartiteOperator<T>, tol: T) -> Result<bool> {
    if !a.is_square_split() {
        return Err(Error::DimensionMismatch(format!("SPC needs k = m, got {}x{}", a.k(), a.m())));
    }
    require_state(a, tol)?;
    Ok(spc_realignment_test(a, tol))
}

fn spc_realignment_test<T: Real>(a: &BipartiteOperator<T>, tol: T) -> bool {
    match a.partial_transpose_right().realign() {
        Ok(s) => crate::linalg::is_psd(&s, tol),
        Err(_) => false,
    }
}

/// Independent SPC route: the Hermitian Schmidt decomposition has `δ_i = +γ_i`
/// for every term. Factors are compared within `√tol`.
pub fn is_spc_by_schmidt<T: Real>(a: &BipartiteOperator<T>, tol: T) -> Result<bool> {
    if !a.is_square_split() {
        return Err(Error::DimensionMismatch(format!("SPC needs k = m, got {}x{}", a.k(), a.m())));
    }
    require_state(a, tol)?;
    Ok(hermitian_schmidt(a, tol)?.is_symmetric_positive(tol.sqrt()))
}

/// `AT = TA = A` up to `tol·‖A‖`; false for `k ≠ m`.
pub fn is_symmetric_state<T: Real>(a: &BipartiteOperator<T>, tol: T) -> bool {
    if !a.is_square_split() {
        return false;
    }
    let t = flip::<T>(a.k());
    let am = a.matrix();
    let bound = tol * am.frobenius_norm();
    (am * t.matrix()).distance(am) <= bound && (t.matrix() * am).distance(am) <= bound
}

/// `W = Σ A_i ∘ A_i^t` and whether it is PSD.
pub fn schur_witness<T: Real>(terms: &[ComplexMatrix<T>], tol: T) -> Result<(ComplexMatrix<T>, bool)> {
    let first = terms.first().ok_or_else(|| Error::DimensionMismatch("empty term list".into()))?;
    let n = first.rows();
    let mut w = ComplexMatrix::zeros(n, n);
    for t in terms {
        if t.rows() != n || t.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "witness terms must all be {n}x{n}, got {}x{}",
                t.rows(),
                t.cols()
            )));
        }
        if !t.is_hermitian(tol) {
            return Err(Error::NotHermitian { asymmetry: t.hermitian_defect().as_f64() });
        }
        w = &w + &t.schur(&t.transpose());
    }
    let psd = crate::linalg::is_psd(&w, tol);
    Ok((w, psd))
}

/// Principal submatrix of an operator on `C^k ⊗ C^k` on the indices `(i, i)`.
pub fn doubled_index_submatrix<T: Real>(a: &BipartiteOperator<T>) -> ComplexMatrix<T> {
    let k = a.k();
    let idx: Vec<usize> = (0..k).map(|i| i * k + i).collect();
    a.matrix().principal_submatrix(&idx)
}

/// `½(T − uu^t)` on `C^k ⊗ C^k`.
pub fn half_flip_minus_uut<T: Real>(k: usize) -> ComplexMatrix<T> {
    let u = max_entangled_vector::<T>(k);
    (flip::<T>(k).matrix() - &ComplexMatrix::outer(&u, &u)).scale(T::lit(0.5))
}

/// If `A = α·Id⊗Id + ½(T − uu^t)` with `k` a power of two, returns `α`.
pub fn flip_family_alpha<T: Real>(a: &BipartiteOperator<T>, tol: T) -> Option<T> {
    let k = a.k();
    if !a.is_square_split() || k < 2 || !k.is_power_of_two() {
        return None;
    }
    let rest = a.matrix() - &half_flip_minus_uut::<T>(k);
    let alpha = rest.trace().re / T::lit((k * k) as f64);
    let fit = (&rest - &ComplexMatrix::identity(k * k).scale(alpha)).frobenius_norm();
    (fit <= tol * T::one().max(a.matrix().frobenius_norm())).then_some(alpha)
}

pub fn classify<T: Real>(a: &BipartiteOperator<T>, tol: T) -> ClassificationReport<T> {
    let (k, m) = (a.k(), a.m());
    let tensor_rank = a.tensor_rank(T::lit(RANK_TOL));
    let hermitian = a.matrix().is_hermitian(tol);
    let symmetric_state = a.is_square_split().then(|| is_symmetric_state(a, tol));

    let mut report = ClassificationReport {
        k,
        m,
        hermitian,
        psd: false,
        ppt: false,
        spc: a.is_square_split().then_some(false),
        symmetric_state,
        tensor_rank,
        min_eig: None,
        min_eig_pt: None,
        separability: Separability { verdict: Verdict::Entangled, certificates: vec![Certificate::NotPpt] },
    };
    if !hermitian {
        return report;
    }

    // both spectra exist for Hermitian input
    let es = hermitian_eig(a.matrix(), tol).expect("Hermitian checked above");
    let es_pt = hermitian_eig(a.partial_transpose_right().matrix(), tol).expect("partial transpose keeps Hermiticity");
    report.min_eig = Some(es.min());
    report.min_eig_pt = Some(es_pt.min());
    report.psd = psd_from_spectrum(&es, tol);
    report.ppt = report.psd && psd_from_spectrum(&es_pt, tol);
    if a.is_square_split() {
        report.spc = Some(report.psd && spc_realignment_test(a, tol));
    }

    if !report.ppt {
        return report;
    }
    let mut certs = Vec::new();
    if tensor_rank <= 2 {
        certs.push(Certificate::RankAtMost2);
    }
    if k.min(m) == 2 && tensor_rank <= 3 {
        certs.push(Certificate::RankAtMost3In2xM);
    }
    match (k.min(m), k.max(m)) {
        (2, 2) => certs.push(Certificate::Ppt2x2),
        (2, 3) => certs.push(Certificate::Ppt2x3),
        _ => {}
    }
    if let Some(alpha) = flip_family_alpha(a, tol) {
        let threshold = T::lit((k as f64 - 1.0) / 2.0);
        if alpha >= threshold - tol * T::one().max(threshold) {
            certs.push(Certificate::ExplicitDecomposition);
        }
    }
    let verdict = if certs.is_empty() { Verdict::Undecided } else { Verdict::Separable };
    report.separability = Separability { verdict, certificates: certs };
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipartite::max_entangled_vector;

    type Op = BipartiteOperator<f64>;
    type M = ComplexMatrix<f64>;

    fn max_entangled_state(k: usize) -> Op {
        let u = max_entangled_vector::<f64>(k);
        Op::new(k, k, M::outer(&u, &u).scale(1.0 / k as f64)).unwrap()
    }

    #[test]
    fn identity_is_ppt_and_spc() {
        let id = Op::identity(2, 2);
        assert!(is_ppt(&id, 1e-9).unwrap());
        assert!(is_spc(&id, 1e-9).unwrap());
        assert!(is_spc_by_schmidt(&id, 1e-9).unwrap());
    }

    #[test]
    fn maximally_entangled_state_is_not_ppt() {
        for k in 2..=3 {
            let rho = max_entangled_state(k);
            assert!(!is_ppt(&rho, 1e-9).unwrap());
            assert!(is_symmetric_state(&rho, 1e-12));
            let r = classify(&rho, 1e-9);
            assert_eq!(r.separability.verdict, Verdict::Entangled);
            assert_eq!(r.separability.primary(), Some(Certificate::NotPpt));
        }
    }

    #[test]
    fn not_a_state_errors() {
        let t = flip::<f64>(2);
        assert!(matches!(is_ppt(&t, 1e-9), Err(Error::NotAState { .. })));
        assert!(matches!(is_spc(&t, 1e-9), Err(Error::NotAState { .. })));
    }

    #[test]
    fn spc_needs_square_split() {
        assert!(matches!(is_spc(&Op::identity(2, 3), 1e-9), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn symmetric_projector_is_symmetric_state() {
        let p = (&M::identity(9) + flip::<f64>(3).matrix()).scale(0.5 / 6.0);
        assert!(is_symmetric_state(&Op::new(3, 3, p).unwrap(), 1e-12));
        assert!(!is_symmetric_state(&Op::identity(3, 3), 1e-12));
    }

    #[test]
    fn schur_witness_identity() {
        let (w, psd) = schur_witness(&[M::identity(2)], 1e-9).unwrap();
        assert_eq!(w, M::identity(2));
        assert!(psd);
    }

    #[test]
    fn schur_witness_rejects_mixed_sizes() {
        let res = schur_witness(&[M::identity(2), M::identity(3)], 1e-9);
        assert!(matches!(res, Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn identity_report() {
        let r = classify(&Op::identity(2, 2), 1e-9);
        assert!(r.psd && r.ppt);
        assert_eq!(r.spc, Some(true));
        assert_eq!(r.symmetric_state, Some(false));
        assert_eq!(r.tensor_rank, 1);
        assert_eq!(r.separability.verdict, Verdict::Separable);
        assert_eq!(r.separability.primary(), Some(Certificate::RankAtMost2));
        assert!(r.separability.has(Certificate::Ppt2x2));
    }

    #[test]
    fn undecided_for_large_full_rank_ppt() {
        // Id + 0.1 T: PPT since its partial transpose is Id + 0.1 uu^t
        let a = &M::identity(9) + &flip::<f64>(3).matrix().scale(0.1);
        let r = classify(&Op::new(3, 3, a).unwrap(), 1e-9);
        assert!(r.ppt);
        assert_eq!(r.tensor_rank, 9);
        assert_eq!(r.separability.verdict, Verdict::Undecided);
        assert!(r.separability.certificates.is_empty());
    }

    #[test]
    fn non_hermitian_report() {
        let mut a = M::identity(4);
        a[(0, 1)] = crate::scalar::cr(1.0);
        let r = classify(&Op::new(2, 2, a).unwrap(), 1e-9);
        assert!(!r.hermitian && !r.psd && !r.ppt);
        assert!(r.min_eig.is_none());
        assert_eq!(r.separability.verdict, Verdict::Entangled);
    }

    #[test]
    fn flip_family_is_recognized() {
        let k = 4;
        let a = &M::identity(16).scale(1.5) + &half_flip_minus_uut::<f64>(k);
        let op = Op::new(k, k, a).unwrap();
        assert!((flip_family_alpha(&op, 1e-9).unwrap() - 1.5).abs() < 1e-12);
        let r = classify(&op, 1e-9);
        assert_eq!(r.separability.verdict, Verdict::Separable);
        assert!(r.separability.has(Certificate::ExplicitDecomposition));
    }
}
