//! Seeded property sweeps over random samples.
//!
//! Sample `i` of a sweep with base seed `s` is drawn with seed `s + i`, and the
//! per-sample results are returned in index order whatever order the worker
//! threads finish in.

use rayon::prelude::*;

use crate::bipartite::{hermitian_schmidt, BipartiteOperator, RANK_TOL};
use crate::canonical::{rank3_reduce, spc_canonical_2x2};
use crate::classify::{is_ppt, is_spc, schur_witness};
use crate::constructions::{
    antisym_family_classify, random_antisym_list, random_complex_gaussian, random_orthogonal, random_rank3_psd_2xm,
    random_spc, random_symmetric_state, rng_from_seed,
};
use crate::linalg::eig::hermitian_eig;
use crate::linalg::matrix::ComplexMatrix;
use crate::scalar::cr;

/// Outcome of one sample.
#[derive(Clone, Debug, PartialEq)]
pub enum SampleOutcome {
    Pass,
    /// A claimed property did not hold.
    Violation(String),
    /// The algorithm could not run on the sample.
    Error(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleResult {
    pub index: usize,
    pub seed: u64,
    pub outcome: SampleOutcome,
    /// Worst value of the sweep's tracked quantity on this sample.
    pub metric: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSummary {
    pub name: &'static str,
    pub base_seed: u64,
    pub results: Vec<SampleResult>,
    /// What `metric` measures, e.g. "min eigenvalue of A^t2 / ‖A‖".
    pub metric_label: &'static str,
    /// True when larger metric values are worse.
    pub metric_higher_is_worse: bool,
}

impl SweepSummary {
    pub fn samples(&self) -> usize {
        self.results.len()
    }

    pub fn passed(&self) -> usize {
        self.results.iter().filter(|r| r.outcome == SampleOutcome::Pass).count()
    }

    pub fn violations(&self) -> Vec<&SampleResult> {
        self.results.iter().filter(|r| matches!(r.outcome, SampleOutcome::Violation(_))).collect()
    }

    pub fn errors(&self) -> Vec<&SampleResult> {
        self.results.iter().filter(|r| matches!(r.outcome, SampleOutcome::Error(_))).collect()
    }

    pub fn all_passed(&self) -> bool {
        self.passed() == self.samples()
    }

    pub fn worst_metric(&self) -> f64 {
        let it = self.results.iter().map(|r| r.metric).filter(|x| x.is_finite());
        if self.metric_higher_is_worse {
            it.fold(f64::NEG_INFINITY, f64::max)
        } else {
            it.fold(f64::INFINITY, f64::min)
        }
    }
}

fn run<F>(samples: usize, base_seed: u64, f: F) -> Vec<SampleResult>
where
    F: Fn(usize, u64) -> (SampleOutcome, f64) + Sync,
{
    (0..samples)
        .into_par_iter()
        .map(|index| {
            let seed = base_seed.wrapping_add(index as u64);
            let (outcome, metric) = f(index, seed);
            SampleResult { index, seed, outcome, metric }
        })
        .collect()
}

fn spectral_norm(m: &ComplexMatrix<f64>) -> f64 {
    hermitian_eig(m, 1e-12).map(|es| es.norm()).unwrap_or(f64::NAN)
}

/// `random_spc(k, terms)` samples; each must be PPT with
/// `λ_min(A^{t2}) ≥ −tol·‖A‖`. Metric: `λ_min(A^{t2}) / ‖A‖`.
pub fn spc_ppt_sweep(k: usize, terms: usize, samples: usize, base_seed: u64, tol: f64) -> SweepSummary {
    let results = run(samples, base_seed, |_, seed| {
        let a = random_spc::<f64>(k, terms, seed);
        let norm = spectral_norm(a.matrix());
        let lmin = match hermitian_eig(a.partial_transpose_right().matrix(), tol) {
            Ok(es) => es.min(),
            Err(e) => return (SampleOutcome::Error(e.to_string()), f64::NAN),
        };
        let ratio = lmin / norm;
        let ppt = is_ppt(&a, tol).unwrap_or(false);
        if ppt && lmin >= -tol * norm {
            (SampleOutcome::Pass, ratio)
        } else {
            (SampleOutcome::Violation(format!("min eigenvalue of A^t2 is {lmin:.6e}")), ratio)
        }
    });
    SweepSummary {
        name: "spc-ppt",
        base_seed,
        results,
        metric_label: "min eigenvalue of A^t2 relative to the spectral norm of A",
        metric_higher_is_worse: false,
    }
}

/// Symmetric states for `k` cycling through `ks`; SPC and PPT must agree.
/// Metric: `λ_min(A^{t2}) / ‖A‖`.
pub fn symmetric_state_sweep(ks: &[usize], samples: usize, base_seed: u64, tol: f64) -> SweepSummary {
    let results = run(samples, base_seed, |index, seed| {
        let k = ks[index % ks.len()];
        let rho = random_symmetric_state::<f64>(k, seed);
        let norm = spectral_norm(rho.matrix());
        let lmin = hermitian_eig(rho.partial_transpose_right().matrix(), tol).map(|es| es.min()).unwrap_or(f64::NAN);
        match (is_spc(&rho, tol), is_ppt(&rho, tol)) {
            (Ok(s), Ok(p)) if s == p => (SampleOutcome::Pass, lmin / norm),
            (Ok(s), Ok(p)) => (SampleOutcome::Violation(format!("k={k}: spc={s}, ppt={p}")), lmin / norm),
            (Err(e), _) | (_, Err(e)) => (SampleOutcome::Error(e.to_string()), f64::NAN),
        }
    });
    SweepSummary {
        name: "symmetric-state",
        base_seed,
        results,
        metric_label: "min eigenvalue of A^t2 relative to the spectral norm of A",
        metric_higher_is_worse: false,
    }
}

/// Rank-3 PSD samples in `M₂ ⊗ M_m`, reduced for every `ε` in `epsilons`.
/// `F` must be PSD with `‖F^{t1} − F‖ ≤ bound·‖F‖`, and for `m ≤ 3` the input
/// must be PPT. Metric: worst left-PT residual.
pub fn rank3_sweep(m: usize, epsilons: &[f64], samples: usize, base_seed: u64, tol: f64, bound: f64) -> SweepSummary {
    let results = run(samples, base_seed, |_, seed| {
        let a = random_rank3_psd_2xm::<f64>(m, seed);
        let mut worst = 0.0f64;
        for &eps in epsilons {
            let chain = match rank3_reduce(&a, eps, tol) {
                Ok(c) => c,
                Err(e) => return (SampleOutcome::Error(format!("epsilon {eps:e}: {e}")), f64::NAN),
            };
            let res = chain.left_pt_residual();
            worst = worst.max(res);
            if res > bound {
                return (SampleOutcome::Violation(format!("epsilon {eps:e}: left-PT residual {res:.3e}")), worst);
            }
            if !chain.f_is_psd(tol) {
                return (SampleOutcome::Violation(format!("epsilon {eps:e}: F is not PSD")), worst);
            }
        }
        if m <= 3 && !is_ppt(&a, tol).unwrap_or(false) {
            return (SampleOutcome::Violation("input is not PPT".into()), worst);
        }
        (SampleOutcome::Pass, worst)
    });
    SweepSummary {
        name: "rank3",
        base_seed,
        results,
        metric_label: "left partial transpose residual of F relative to its norm",
        metric_higher_is_worse: true,
    }
}

/// Rank-4 SPC samples in `M₂ ⊗ M₂`; the canonical form must reconstruct the
/// input within `bound`, with `λ > 0` and `D` real diagonal.
/// Metric: relative reconstruction residual.
pub fn canonical_sweep(samples: usize, base_seed: u64, tol: f64, bound: f64) -> SweepSummary {
    let results = run(samples, base_seed, |_, seed| {
        let a = random_spc::<f64>(2, 4, seed);
        let cf = match spc_canonical_2x2(&a, tol) {
            Ok(c) => c,
            Err(e) => return (SampleOutcome::Error(e.to_string()), f64::NAN),
        };
        let res = cf.residual(&a);
        let d_real = cf.d.as_slice().iter().all(|z| z.im == 0.0) && cf.d[(0, 1)] == cr(0.0) && cf.d[(1, 0)] == cr(0.0);
        if res > bound {
            (SampleOutcome::Violation(format!("reconstruction residual {res:.3e}")), res)
        } else if !cf.lambda.is_finite() || cf.lambda <= 0.0 {
            (SampleOutcome::Violation(format!("lambda = {:.3e}", cf.lambda)), res)
        } else if !d_real {
            (SampleOutcome::Violation("D is not real diagonal".into()), res)
        } else {
            (SampleOutcome::Pass, res)
        }
    });
    SweepSummary {
        name: "canonical",
        base_seed,
        results,
        metric_label: "reconstruction residual relative to the input norm",
        metric_higher_is_worse: true,
    }
}

/// 2×2 SPC samples. The Hermitian Schmidt factors `A_i = √λ_i·γ_i` and
/// `remixes` orthogonal recombinations of them must each give a PSD
/// `Σ A_i ∘ A_i^t`. Metric: worst `λ_min(W) / max(1, ‖W‖)`.
pub fn schur_witness_sweep(samples: usize, remixes: usize, base_seed: u64, tol: f64) -> SweepSummary {
    let results = run(samples, base_seed, |_, seed| {
        let a = random_spc::<f64>(2, 4, seed);
        let dec = match hermitian_schmidt(&a, tol) {
            Ok(d) => d,
            Err(e) => return (SampleOutcome::Error(e.to_string()), f64::NAN),
        };
        let base: Vec<ComplexMatrix<f64>> = dec.terms.iter().map(|t| t.left.scale(t.coeff.sqrt())).collect();
        let mut rng = rng_from_seed(seed ^ 0x5eed_f5c4u64);
        let mut worst = f64::INFINITY;
        for r in 0..=remixes {
            let terms = if r == 0 {
                base.clone()
            } else {
                let o = random_orthogonal::<f64, _>(base.len(), &mut rng);
                (0..base.len())
                    .map(|i| {
                        base.iter()
                            .enumerate()
                            .fold(ComplexMatrix::zeros(2, 2), |acc, (j, g)| &acc + &g.scale(o[(i, j)].re))
                    })
                    .collect()
            };
            let (w, psd) = match schur_witness(&terms, tol) {
                Ok(x) => x,
                Err(e) => return (SampleOutcome::Error(e.to_string()), f64::NAN),
            };
            let es = hermitian_eig(&w, tol).expect("Hermitian witness");
            worst = worst.min(es.min() / es.norm().max(1.0));
            if !psd {
                return (SampleOutcome::Violation(format!("remix {r}: min eigenvalue {:.3e}", es.min())), worst);
            }
        }
        (SampleOutcome::Pass, worst)
    });
    SweepSummary {
        name: "schur-witness",
        base_seed,
        results,
        metric_label: "min eigenvalue of the Schur witness relative to max(1, its norm)",
        metric_higher_is_worse: false,
    }
}

/// Relative residuals of `S² = Id`, `A^{t2} = S(AT)T` and `S(A^{t2}) = S(A)T`
/// on a complex Gaussian `A` in `M_k ⊗ M_k`.
pub fn structural_residuals(k: usize, seed: u64) -> [f64; 3] {
    let mut rng = rng_from_seed(seed);
    let g = random_complex_gaussian::<f64, _>(k * k, k * k, &mut rng);
    let a = BipartiteOperator::new(k, k, g).expect("k²×k²");
    let t = crate::bipartite::flip::<f64>(k);
    let norm = a.matrix().frobenius_norm();
    let s = a.realign().expect("square split");
    let ss = BipartiteOperator::new(k, k, s.clone()).expect("k²×k²").realign().expect("square split");
    let at = BipartiteOperator::new(k, k, a.matrix() * t.matrix()).expect("k²×k²");
    let pt = a.partial_transpose_right();
    let r1 = ss.distance(a.matrix()) / norm;
    let r2 = pt.matrix().distance(&(&at.realign().expect("square split") * t.matrix())) / norm;
    let r3 = pt.realign().expect("square split").distance(&(&s * t.matrix())) / norm;
    [r1, r2, r3]
}

/// Structural identities on `samples` random operators for `k` cycling
/// through `ks`. Metric: worst relative residual.
pub fn structural_sweep(ks: &[usize], samples: usize, base_seed: u64, bound: f64) -> SweepSummary {
    let results = run(samples, base_seed, |index, seed| {
        let k = ks[index % ks.len()];
        let r = structural_residuals(k, seed);
        let worst = r.iter().copied().fold(0.0, f64::max);
        if worst <= bound {
            (SampleOutcome::Pass, worst)
        } else {
            (SampleOutcome::Violation(format!("k={k}: residuals {:.2e} {:.2e} {:.2e}", r[0], r[1], r[2])), worst)
        }
    });
    SweepSummary {
        name: "structural",
        base_seed,
        results,
        metric_label: "largest relative residual of the realignment identities",
        metric_higher_is_worse: true,
    }
}

/// Random antisymmetric families with `k` cycling through `ks` and
/// `1..=max_generators` generators. Checks the spectral bound, SPC and PPT at
/// `α = |λ_min|`, and loss of positivity at `α = |λ_min| − below`.
/// Metric: `max|μ| − |λ_min|`.
pub fn antisym_sweep(
    ks: &[usize],
    max_generators: usize,
    samples: usize,
    base_seed: u64,
    tol: f64,
    below: f64,
) -> SweepSummary {
    let results = run(samples, base_seed, |index, seed| {
        let k = ks[index % ks.len()];
        let count = 1 + (index / ks.len()) % max_generators;
        let b_list = random_antisym_list::<f64>(k, count, seed);
        let at = match antisym_family_classify(&b_list, 0.0, tol) {
            Ok(o) => o,
            Err(e) => return (SampleOutcome::Error(e.to_string()), f64::NAN),
        };
        let fam = &at.family;
        let excess = fam.lambda_max.abs() - fam.lambda_min.abs();
        if !fam.spectral_bound_holds(1e-10) {
            return (SampleOutcome::Violation(format!("spectral bound fails by {excess:.3e}")), excess);
        }
        let threshold = fam.lambda_min.abs();
        let on = match antisym_family_classify(&b_list, threshold, tol) {
            Ok(o) => o,
            Err(e) => return (SampleOutcome::Error(e.to_string()), excess),
        };
        if !(on.report.ppt && on.report.spc == Some(true)) {
            return (SampleOutcome::Violation("C at the threshold is not SPC and PPT".into()), excess);
        }
        let off = match antisym_family_classify(&b_list, threshold - below, tol) {
            Ok(o) => o,
            Err(e) => return (SampleOutcome::Error(e.to_string()), excess),
        };
        if off.report.psd {
            return (SampleOutcome::Violation("C below the threshold is PSD".into()), excess);
        }
        if !(on.equivalence_holds && off.equivalence_holds) {
            return (SampleOutcome::Violation("PSD, SPC, PPT and the threshold disagree".into()), excess);
        }
        (SampleOutcome::Pass, excess)
    });
    SweepSummary {
        name: "antisym-family",
        base_seed,
        results,
        metric_label: "largest |eigenvalue| minus |lambda_min|",
        metric_higher_is_worse: true,
    }
}

/// Tensor rank of a sample from `random_spc`; exposed for the CLI summary.
pub fn spc_sample_rank(k: usize, terms: usize, seed: u64) -> usize {
    random_spc::<f64>(k, terms, seed).tensor_rank(RANK_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn results_are_ordered_and_seeded() {
        let s = spc_ppt_sweep(2, 4, 16, 100, 1e-9);
        assert_eq!(s.samples(), 16);
        for (i, r) in s.results.iter().enumerate() {
            assert_eq!(r.index, i);
            assert_eq!(r.seed, 100 + i as u64);
        }
        assert_eq!(s, spc_ppt_sweep(2, 4, 16, 100, 1e-9));
        assert!(s.all_passed());
    }

    #[test]
    fn small_sweeps_pass() {
        assert!(symmetric_state_sweep(&[2, 3], 10, 0, 1e-9).all_passed());
        assert!(rank3_sweep(3, &[1e-2, 1e-4], 10, 0, 1e-9, 1e-8).all_passed());
        assert!(canonical_sweep(10, 0, 1e-9, 1e-8).all_passed());
        assert!(schur_witness_sweep(10, 3, 0, 1e-9).all_passed());
        assert!(structural_sweep(&[2, 3], 10, 0, 1e-12).all_passed());
        assert!(antisym_sweep(&[3, 4], 4, 10, 0, 1e-9, 0.1).all_passed());
    }
}
