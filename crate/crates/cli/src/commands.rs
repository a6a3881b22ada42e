//! The subcommands. Each returns a report document and its exit code, or a
//! [`CliError`] carrying the exit code for parse and precondition errors.

use std::path::Path;

use serde_json::{json, Map, Value};
use spcsep::bipartite::{hermitian_schmidt, BipartiteOperator};
use spcsep::canonical::{lambda_maximality_margin, rank3_reduce, spc_canonical_2x2, ReductionChain};
use spcsep::classify::{classify, is_ppt, is_spc, schur_witness, Certificate};
use spcsep::constructions::{
    build_counterexample, build_flip_family, cross_gram_defect, eigen_modulus_defect, gram_defect,
    random_rank3_psd_2xm, random_spc, random_symmetric_state, sym_asym_bases,
};
use spcsep::linalg::{hermitian_eig, vdot};
use spcsep::sweeps;
use spcsep::Error;

use crate::matrix_file::MatrixFile;
use crate::report::{self, num, nums, Check};

pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_ALGORITHM: i32 = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn parse(message: impl Into<String>) -> Self {
        Self { code: EXIT_PARSE, message: message.into() }
    }

    pub fn precondition(message: impl Into<String>) -> Self {
        Self { code: EXIT_PRECONDITION, message: message.into() }
    }
}

/// Input-shape and state errors are preconditions; the rest are specific to
/// the algorithm that raised them.
impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotHermitian { .. }
            | Error::NotAState { .. }
            | Error::DimensionMismatch(_)
            | Error::DepthOutOfRange(_) => EXIT_PRECONDITION,
            _ => EXIT_ALGORITHM,
        };
        Self { code, message: e.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub document: Value,
    pub exit_code: i32,
}

fn finish(mut body: Map<String, Value>, checks: Vec<Check>) -> Report {
    let exit_code = report::exit_code(&checks);
    body.insert("checks".into(), Value::Array(checks.iter().map(Check::to_json).collect()));
    body.insert("status".into(), json!(if exit_code == 0 { "PASS" } else { "FAIL" }));
    Report { document: Value::Object(body), exit_code }
}

/// Reads and parses a matrix file; I/O and format errors map to exit code 2.
pub fn load(path: &Path) -> Result<(MatrixFile, String), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
    let file = MatrixFile::parse(&text).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
    let digest = report::digest(text.as_bytes());
    Ok((file, digest))
}

fn input(digest: &str, file: &MatrixFile) -> Value {
    json!({ "digest": digest, "k": file.k, "m": file.m })
}

// ---------------------------------------------------------------------------
// analyze

pub fn analyze(path: &Path, tol: f64, with_schmidt: bool) -> Result<Report, CliError> {
    let (file, digest) = load(path)?;
    let a = file.to_operator();
    let r = classify(&a, tol);
    let mut body = Map::new();
    body.insert("command".into(), json!("analyze"));
    body.insert("input".into(), input(&digest, &file));
    body.insert("tolerance".into(), num(tol));
    body.insert("classification".into(), report::classification(&r));
    body.insert("schmidt_coefficients".into(), nums(&a.schmidt_coefficients()));
    if with_schmidt && r.hermitian {
        body.insert("schmidt_terms".into(), report::schmidt(&hermitian_schmidt(&a, tol)?));
    }
    Ok(finish(body, Vec::new()))
}

// ---------------------------------------------------------------------------
// canonical

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CanonicalMode {
    /// Canonical form of a rank-4 SPC matrix in M₂⊗M₂.
    Canonical,
    /// Rank-3 reduction in M₂⊗M_m.
    Reduce,
}

const ROUND_TRIP_BOUND: f64 = 1e-8;

fn chain_json(ch: &ReductionChain<f64>, tol: f64) -> Value {
    json!({
        "epsilon": num(ch.epsilon),
        "left_factors": ch.left.iter().map(report::matrix).collect::<Vec<_>>(),
        "right_factors": ch.right.iter().map(report::matrix).collect::<Vec<_>>(),
        "R": report::matrix(&ch.r),
        "U": report::matrix(&ch.u),
        "D": nums(&ch.d),
        "a": num(ch.a),
        "c": num(ch.c),
        "b": { "re": num(ch.b.re), "im": num(ch.b.im) },
        "V": report::matrix(&ch.v),
        "L": report::matrix(&ch.l),
        "F_out": report::matrix(ch.f_out.matrix()),
        "left_pt_residual": num(ch.left_pt_residual()),
        "decomposition_residual": num(ch.decomposition_residual()),
        "f_psd": ch.f_is_psd(tol),
    })
}

pub fn canonical(path: &Path, mode: CanonicalMode, epsilons: &[f64], tol: f64) -> Result<Report, CliError> {
    let (file, digest) = load(path)?;
    let a = file.to_operator();
    if !a.matrix().is_hermitian(tol) {
        return Err(Error::NotHermitian { asymmetry: a.matrix().hermitian_defect() }.into());
    }
    let mut body = Map::new();
    body.insert("command".into(), json!("canonical"));
    body.insert("input".into(), input(&digest, &file));
    body.insert("tolerance".into(), num(tol));
    let mut checks = Vec::new();
    match mode {
        CanonicalMode::Canonical => {
            body.insert("mode".into(), json!("canonical"));
            let cf = spc_canonical_2x2(&a, tol)?;
            let res = cf.residual(&a);
            let margin = lambda_maximality_margin(&a, cf.lambda, 1e-6, tol)?;
            let (_, witness_psd) = schur_witness(&cf.terms(), tol)?;
            checks.push(Check::new(
                "round-trip",
                "λ·Id⊗Id + D⊗D + γ⊗γ + δ⊗δ reconstructs the input",
                res <= ROUND_TRIP_BOUND,
                format!("relative residual {res:.3e}"),
            ));
            checks.push(Check::new("lambda-positive", "λ > 0", cf.lambda > 0.0, format!("λ = {:.6e}", cf.lambda)));
            checks.push(Check::new(
                "lambda-maximal",
                "S(A^t2) − (λ + 1e-6)·uu^t has a negative eigenvalue",
                margin < 0.0,
                format!("min eigenvalue {margin:.3e}"),
            ));
            checks.push(Check::new("schur-witness", "λ·Id∘Id + D∘D + γ∘γ^t + δ∘δ^t is PSD", witness_psd, ""));
            let t = &cf.trace;
            body.insert(
                "canonical_form".into(),
                json!({
                    "lambda": num(cf.lambda),
                    "D": report::matrix(&cf.d),
                    "gamma": report::matrix(&cf.gamma),
                    "delta": report::matrix(&cf.delta),
                    "residual": num(res),
                    "trace": {
                        "mu": num(t.mu),
                        "a": num(t.a),
                        "b": num(t.b),
                        "d": nums(&t.d.iter().map(|z| z.re).collect::<Vec<_>>()),
                        "n_dot_u": num(vdot(&t.n, &t.u).re),
                    },
                }),
            );
        }
        CanonicalMode::Reduce => {
            body.insert("mode".into(), json!("reduce"));
            let mut chains = Vec::new();
            for &eps in epsilons {
                let ch = rank3_reduce(&a, eps, tol)?;
                let res = ch.left_pt_residual();
                checks.push(Check::new(
                    &format!("left-pt-invariant@{eps:e}"),
                    "F = (L⊗Id)·A(ε)·(L^*⊗Id) is invariant under left partial transposition",
                    res <= ROUND_TRIP_BOUND,
                    format!("relative residual {res:.3e}"),
                ));
                checks.push(Check::new(&format!("f-psd@{eps:e}"), "F is PSD", ch.f_is_psd(tol), ""));
                chains.push(chain_json(&ch, tol));
            }
            if a.m() <= 3 {
                let ppt = is_ppt(&a, tol)?;
                checks.push(Check::new(
                    "ppt",
                    "a rank-3 PSD matrix in M2⊗M2 or M2⊗M3 is separable, hence PPT",
                    ppt,
                    "",
                ));
            }
            body.insert("reduction".into(), Value::Array(chains));
        }
    }
    Ok(finish(body, checks))
}

// ---------------------------------------------------------------------------
// reproduce

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Counterexample,
    FlipFamily,
    Bases,
    TgSweep,
    SpcPptSweep,
    Rank3Sweep,
    CanonicalSweep,
    WitnessSweep,
    Structural,
    AntisymSweep,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::Counterexample => "counterexample",
            Target::FlipFamily => "flip-family",
            Target::Bases => "bases",
            Target::TgSweep => "tg-sweep",
            Target::SpcPptSweep => "spc-ppt-sweep",
            Target::Rank3Sweep => "rank3-sweep",
            Target::CanonicalSweep => "canonical-sweep",
            Target::WitnessSweep => "witness-sweep",
            Target::Structural => "structural",
            Target::AntisymSweep => "antisym-sweep",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReproduceParams {
    pub tol: f64,
    pub seed: u64,
    pub samples: Option<usize>,
    pub n: Option<usize>,
    pub alpha: Option<f64>,
    pub k: Vec<usize>,
    pub m: Vec<usize>,
    pub terms: Option<usize>,
    pub epsilon: Vec<f64>,
}

impl Default for ReproduceParams {
    fn default() -> Self {
        Self {
            tol: spcsep::DEFAULT_TOL,
            seed: 0,
            samples: None,
            n: None,
            alpha: None,
            k: Vec::new(),
            m: Vec::new(),
            terms: None,
            epsilon: Vec::new(),
        }
    }
}

fn or_default<T: Clone>(v: &[T], default: &[T]) -> Vec<T> {
    if v.is_empty() {
        default.to_vec()
    } else {
        v.to_vec()
    }
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::parse(msg)
}

pub fn reproduce(target: Target, p: &ReproduceParams) -> Result<Report, CliError> {
    let mut body = Map::new();
    let mut params = Map::new();
    params.insert("tolerance".into(), num(p.tol));
    let mut checks = Vec::new();
    let tol = p.tol;

    match target {
        Target::Counterexample => counterexample(tol, &mut checks, &mut body),
        Target::FlipFamily => {
            let n = p.n.unwrap_or(1);
            let k = 1usize.checked_shl(n as u32).unwrap_or(0);
            let thr = (k as f64 - 1.0) / 2.0;
            let alpha = p.alpha.unwrap_or(thr);
            params.insert("n".into(), json!(n));
            params.insert("alpha".into(), num(alpha));
            flip_family(n, alpha, tol, &mut checks, &mut body)?;
        }
        Target::Bases => {
            let ns: Vec<usize> = match p.n {
                Some(n) => vec![n],
                None => vec![1, 2, 3],
            };
            params.insert("n".into(), json!(ns));
            let mut out = Map::new();
            for n in ns {
                out.insert(format!("n={n}"), bases(n, &mut checks)?);
            }
            body.insert("bases".into(), Value::Object(out));
        }
        Target::TgSweep => {
            let ks = or_default(&p.k, &[2, 3, 4]);
            if ks.iter().any(|&k| k < 2) {
                return Err(bad("--k must be at least 2"));
            }
            let samples = p.samples.unwrap_or(1000);
            params.insert("k".into(), json!(ks));
            params.insert("samples".into(), json!(samples));
            params.insert("seed".into(), json!(p.seed));
            let s = sweeps::symmetric_state_sweep(&ks, samples, p.seed, tol);
            push_sweep(&s, "a symmetric state is SPC if and only if it is PPT", true, &mut checks, &mut body);
        }
        Target::SpcPptSweep => {
            let ks = or_default(&p.k, &[2]);
            let terms = p.terms.unwrap_or(4);
            if ks.iter().any(|&k| k < 2) || terms == 0 {
                return Err(bad("--k must be at least 2 and --terms at least 1"));
            }
            let samples = p.samples.unwrap_or(10_000);
            params.insert("k".into(), json!(ks));
            params.insert("terms".into(), json!(terms));
            params.insert("samples".into(), json!(samples));
            params.insert("seed".into(), json!(p.seed));
            let mut out = Map::new();
            for k in ks {
                let s = sweeps::spc_ppt_sweep(k, terms, samples, p.seed, tol);
                // the implication is only claimed for 2x2; larger k is exploratory
                let (c, metrics) = report::sweep(&s, "every SPC matrix in M2⊗M2 is PPT", k == 2);
                checks.extend(c.into_iter().map(|mut c| {
                    c.name = format!("{}@k={k}", c.name);
                    c
                }));
                out.insert(format!("k={k}"), metrics);
            }
            body.insert("sweeps".into(), Value::Object(out));
        }
        Target::Rank3Sweep => {
            let ms = or_default(&p.m, &[2, 3, 4]);
            let eps = or_default(&p.epsilon, &[1e-2, 1e-4]);
            if ms.iter().any(|&m| m < 2) || eps.iter().any(|&e| e.is_nan() || e <= 0.0) {
                return Err(bad("--m must be at least 2 and --epsilon positive"));
            }
            let samples = p.samples.unwrap_or(1000);
            params.insert("m".into(), json!(ms));
            params.insert("epsilon".into(), nums(&eps));
            params.insert("samples".into(), json!(samples));
            params.insert("seed".into(), json!(p.seed));
            let mut out = Map::new();
            for m in ms {
                let s = sweeps::rank3_sweep(m, &eps, samples, p.seed, tol, ROUND_TRIP_BOUND);
                let claim = if m <= 3 {
                    "rank-3 PSD matrices in M2⊗Mm reduce to left-PT-invariant form, and are PPT for m ≤ 3"
                } else {
                    "rank-3 PSD matrices in M2⊗Mm reduce to left-PT-invariant form"
                };
                let (c, metrics) = report::sweep(&s, claim, true);
                checks.extend(c.into_iter().map(|mut c| {
                    c.name = format!("{}@m={m}", c.name);
                    c
                }));
                out.insert(format!("m={m}"), metrics);
            }
            body.insert("sweeps".into(), Value::Object(out));
        }
        Target::CanonicalSweep => {
            let samples = p.samples.unwrap_or(1000);
            params.insert("samples".into(), json!(samples));
            params.insert("seed".into(), json!(p.seed));
            let s = sweeps::canonical_sweep(samples, p.seed, tol, ROUND_TRIP_BOUND);
            let claim = "rank-4 SPC matrices in M2⊗M2 equal λ·Id⊗Id + D⊗D + γ⊗γ + δ⊗δ with λ > 0 and D real diagonal";
            push_sweep(&s, claim, true, &mut checks, &mut body);
        }
        Target::WitnessSweep => {
            let samples = p.samples.unwrap_or(1000);
            params.insert("samples".into(), json!(samples));
            params.insert("remixes".into(), json!(10));
            params.insert("seed".into(), json!(p.seed));
            let s = sweeps::schur_witness_sweep(samples, 10, p.seed, tol);
            let claim = "Σ A_i∘A_i^t is PSD whenever Σ A_i⊗A_i is a 2x2 SPC decomposition";
            push_sweep(&s, claim, true, &mut checks, &mut body);
        }
        Target::Structural => {
            let ks = or_default(&p.k, &[2, 3]);
            if ks.iter().any(|&k| k < 1) {
                return Err(bad("--k must be positive"));
            }
            let samples = p.samples.unwrap_or(100);
            params.insert("k".into(), json!(ks));
            params.insert("samples".into(), json!(samples));
            params.insert("seed".into(), json!(p.seed));
            let s = sweeps::structural_sweep(&ks, samples, p.seed, 1e-12);
            push_sweep(&s, "S² = Id, A^t2 = S(AT)T and S(A^t2) = S(A)T", true, &mut checks, &mut body);
        }
        Target::AntisymSweep => {
            let ks = or_default(&p.k, &[3, 4, 5]);
            if ks.iter().any(|&k| k < 2) {
                return Err(bad("--k must be at least 2"));
            }
            let samples = p.samples.unwrap_or(100);
            params.insert("k".into(), json!(ks));
            params.insert("samples".into(), json!(samples));
            params.insert("seed".into(), json!(p.seed));
            let s = sweeps::antisym_sweep(&ks, 4, samples, p.seed, tol, 0.1);
            let claim = "for Σ(iB_j)⊗(iB_j) with real antisymmetric B_j, |μ| ≤ |λ_min|, and \
                         α·Id⊗Id + Σ(iB_j)⊗(iB_j) is PSD, SPC and PPT exactly when α ≥ |λ_min|";
            push_sweep(&s, claim, true, &mut checks, &mut body);
        }
    }

    body.insert("command".into(), json!("reproduce"));
    body.insert("target".into(), json!(target.name()));
    let digest = report::digest(report::to_json_string(&Value::Object(params.clone())).as_bytes());
    body.insert("input".into(), json!({ "digest": digest }));
    body.insert("params".into(), Value::Object(params));
    Ok(finish(body, checks))
}

fn push_sweep(
    s: &sweeps::SweepSummary,
    claim: &str,
    claimed: bool,
    checks: &mut Vec<Check>,
    body: &mut Map<String, Value>,
) {
    let (c, metrics) = report::sweep(s, claim, claimed);
    checks.extend(c);
    body.insert("sweep".into(), metrics);
}

fn counterexample(tol: f64, checks: &mut Vec<Check>, body: &mut Map<String, Value>) {
    let ce = build_counterexample::<f64>();
    let c = &ce.c;
    let es = hermitian_eig(c.matrix(), tol).expect("real symmetric");
    let psd = es.min() >= -tol * es.norm();
    let spc = is_spc(c, tol).unwrap_or(false);
    let ppt = is_ppt(c, tol).unwrap_or(true);
    let rank = c.tensor_rank(spcsep::bipartite::RANK_TOL);
    let min_pt = hermitian_eig(c.partial_transpose_right().matrix(), tol).expect("real symmetric").min();
    let gap = ce.m_q.abs() + ce.m_p;

    checks.push(Check::new(
        "p-coefficients",
        "det(D⊗D + A⊗A − xI) = −x⁹ + 36x⁸ + 5420x⁷ + … + 671846400",
        ce.p_matches_expected(),
        "exact integer arithmetic",
    ));
    checks.push(Check::new(
        "q-coefficients",
        "det(D⊗D − A⊗A − xI) differs from p only in the x³ coefficient, 10924160",
        ce.q_matches_expected(),
        "exact integer arithmetic",
    ));
    checks.push(Check::new(
        "disjoint-roots",
        "p − q = c·x³ with c > 0 and p(0), q(0) ≠ 0, so p and q share no root",
        ce.roots_are_disjoint(),
        format!("c = {}", ce.cubic_gap().map_or("none".into(), |c| c.to_string())),
    ));
    checks.push(Check::new(
        "root-order",
        "m_p < m_q < 0",
        ce.m_p < ce.m_q && ce.m_q < 0.0,
        format!("m_p = {:.12}, m_q = {:.12}", ce.m_p, ce.m_q),
    ));
    checks.push(Check::new("gap", "|m_q| + m_p < 0", gap < -1e-6, format!("{gap:.6e}")));
    checks.push(Check::new(
        "psd",
        "C = |m_q|·Id⊗Id + D⊗D + (iA)⊗(iA) is PSD",
        psd,
        format!("min eigenvalue {:.6e}", es.min()),
    ));
    checks.push(Check::new("spc", "C is SPC", spc, ""));
    checks.push(Check::new("tensor-rank", "C has tensor rank 3", rank == 3, format!("rank {rank}")));
    checks.push(Check::new(
        "not-ppt",
        "C is not PPT; |m_q| + m_p is an eigenvalue of C^t2",
        !ppt && (min_pt - gap).abs() <= 1e-9 * es.norm(),
        format!("min eigenvalue of C^t2 {min_pt:.6e}"),
    ));
    body.insert(
        "counterexample".into(),
        json!({
            "p": ints(&ce.p.signed()),
            "q": ints(&ce.q.signed()),
            "m_p": num(ce.m_p),
            "m_q": num(ce.m_q),
            "min_eig_C": num(es.min()),
            "min_eig_C_t2": num(min_pt),
            "tensor_rank": rank,
        }),
    );
}

/// Integers of any size as exact JSON integer literals.
fn ints<D: std::fmt::Display>(v: &[D]) -> Value {
    Value::Array(
        v.iter().map(|x| Value::Number(serde_json::from_str(&x.to_string()).expect("integer literal"))).collect(),
    )
}

fn flip_family(
    n: usize,
    alpha: f64,
    tol: f64,
    checks: &mut Vec<Check>,
    body: &mut Map<String, Value>,
) -> Result<(), CliError> {
    let f = build_flip_family::<f64>(n, alpha)?;
    let k = f.k;
    let thr = f.threshold();
    let r = classify(&f.c, tol);
    let brackets_ok = f.brackets().iter().all(|b| {
        hermitian_eig(b.matrix(), tol)
            .map(|es| es.values.iter().all(|&v| v.abs() <= 1e-10 || (v - 2.0 / k as f64).abs() <= 1e-10))
            .unwrap_or(false)
    });
    let at_thr = build_flip_family::<f64>(n, thr)?;
    let below = build_flip_family::<f64>(n, thr - 0.01)?;
    let thr_min = hermitian_eig(at_thr.c.matrix(), tol).expect("real symmetric").min();
    let below_min = hermitian_eig(below.c.matrix(), tol).expect("real symmetric").min();

    checks.push(Check::new(
        "identities",
        "uu^t = ΣS⊗S + ΣA⊗A and T = (uu^t)^t2 = ΣS⊗S − ΣA⊗A",
        f.uut_identity_residual <= 1e-10 && f.flip_identity_residual <= 1e-10,
        format!("residuals {:.2e}, {:.2e}", f.uut_identity_residual, f.flip_identity_residual),
    ));
    checks.push(Check::new(
        "antisymmetric-form",
        "C = α·Id⊗Id + Σ(iA_j)⊗(iA_j)",
        f.antisym_form_residual <= 1e-10,
        format!("residual {:.2e}", f.antisym_form_residual),
    ));
    checks.push(Check::new(
        "half-spectrum",
        "spectrum of ½(T − uu^t) lies in {−(k−1)/2, ½, −½}",
        f.half_spectrum_defect() <= 1e-12,
        format!("defect {:.2e}", f.half_spectrum_defect()),
    ));
    checks.push(Check::new(
        "brackets",
        "each (1/k)·Id⊗Id + (iA_j)⊗(iA_j) has eigenvalues in {0, 2/k}",
        brackets_ok,
        "",
    ));
    checks.push(Check::new(
        "threshold",
        "C is PSD at α = (k−1)/2 and not PSD at α = (k−1)/2 − 0.01",
        thr_min >= -tol * k as f64 && below_min < 0.0,
        format!("min eigenvalues {thr_min:.3e} and {below_min:.3e}"),
    ));
    if alpha >= thr - tol {
        checks.push(Check::new(
            "spc-ppt",
            "C is PSD, SPC, PPT and separable for α ≥ (k−1)/2",
            r.psd && r.spc == Some(true) && r.ppt && r.separability.has(Certificate::ExplicitDecomposition),
            format!("verdict {}", r.separability.verdict.tag()),
        ));
    } else {
        checks.push(Check::new("not-psd", "C is not PSD for α < (k−1)/2", !r.psd, ""));
    }
    body.insert(
        "flip_family".into(),
        json!({
            "k": k,
            "threshold": num(thr),
            "classification": report::classification(&r),
            "half_spectrum": nums(&dedup(f.half_spectrum())),
        }),
    );
    Ok(())
}

fn dedup(mut xs: Vec<f64>) -> Vec<f64> {
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|a, b| (*a - *b).abs() <= 1e-9);
    xs.iter().map(|x| (x * 1e9).round() / 1e9).collect()
}

fn bases(n: usize, checks: &mut Vec<Check>) -> Result<Value, CliError> {
    let b = sym_asym_bases::<f64>(n)?;
    let k = b.dim();
    let target = 1.0 / (k as f64).sqrt();
    let gram = gram_defect(&b.sym).max(gram_defect(&b.asym));
    let cross = cross_gram_defect(&b.sym, &b.asym);
    let modulus = eigen_modulus_defect(&b.sym, target).max(eigen_modulus_defect(&b.asym, target));
    checks.push(Check::new(
        &format!("sizes@n={n}"),
        "Sym(2^n) has 2^(n−1)(2^n+1) elements and ASym(2^n) has 2^(n−1)(2^n−1)",
        b.sym.len() == k * (k + 1) / 2 && b.asym.len() == k * (k - 1) / 2,
        format!("{} and {}", b.sym.len(), b.asym.len()),
    ));
    checks.push(Check::new(
        &format!("orthonormal@n={n}"),
        "both families are orthonormal under tr(XY^t) and mutually orthogonal",
        gram <= 1e-12 && cross <= 1e-12,
        format!("defects {gram:.2e}, {cross:.2e}"),
    ));
    checks.push(Check::new(
        &format!("eigenvalues@n={n}"),
        "every eigenvalue has modulus 1/√(2^n)",
        modulus <= 1e-12,
        format!("defect {modulus:.2e}"),
    ));
    Ok(json!({
        "k": k,
        "sym": b.sym.len(),
        "asym": b.asym.len(),
        "gram_defect": num(gram),
        "cross_gram_defect": num(cross),
        "eigen_modulus_defect": num(modulus),
    }))
}

// ---------------------------------------------------------------------------
// generate

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    Counterexample,
    FlipFamily,
    RandomSpc,
    SymmetricState,
    Rank3,
    Identity,
}

/// Matrix file for a built-in construction or a seeded random sample.
pub fn generate(g: Generator, p: &ReproduceParams) -> Result<MatrixFile, CliError> {
    let k = p.k.first().copied().unwrap_or(2);
    let m = p.m.first().copied().unwrap_or(k);
    let op: BipartiteOperator<f64> = match g {
        Generator::Counterexample => build_counterexample::<f64>().c,
        Generator::FlipFamily => {
            let n = p.n.unwrap_or(1);
            let thr = ((1usize << n.min(4)) as f64 - 1.0) / 2.0;
            build_flip_family::<f64>(n, p.alpha.unwrap_or(thr))?.c
        }
        Generator::RandomSpc => {
            let terms = p.terms.unwrap_or(k * k);
            if k < 2 || terms == 0 {
                return Err(bad("--k must be at least 2 and --terms at least 1"));
            }
            random_spc::<f64>(k, terms, p.seed)
        }
        Generator::SymmetricState => {
            if k < 2 {
                return Err(bad("--k must be at least 2"));
            }
            random_symmetric_state::<f64>(k, p.seed)
        }
        Generator::Rank3 => {
            if m < 2 {
                return Err(bad("--m must be at least 2"));
            }
            random_rank3_psd_2xm::<f64>(m, p.seed)
        }
        Generator::Identity => {
            if k == 0 || m == 0 {
                return Err(bad("--k and --m must be positive"));
            }
            BipartiteOperator::identity(k, m)
        }
    };
    Ok(MatrixFile::from_operator(&op))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counterexample_passes() {
        let r = reproduce(Target::Counterexample, &ReproduceParams::default()).unwrap();
        assert_eq!(r.exit_code, 0, "{}", report::to_text(&r.document));
        assert_eq!(r.document["counterexample"]["p"][2].to_string(), "5420");
    }

    #[test]
    fn flip_family_below_threshold_is_consistent() {
        let p = ReproduceParams { n: Some(2), alpha: Some(1.2), ..Default::default() };
        let r = reproduce(Target::FlipFamily, &p).unwrap();
        assert_eq!(r.exit_code, 0, "{}", report::to_text(&r.document));
        assert!(!r.document["flip_family"]["classification"]["psd"].as_bool().unwrap());
    }

    #[test]
    fn bad_depth_is_a_precondition_error() {
        let p = ReproduceParams { n: Some(7), ..Default::default() };
        assert_eq!(reproduce(Target::Bases, &p).unwrap_err().code, EXIT_PRECONDITION);
    }
}
