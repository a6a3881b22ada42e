//! Acceptance suite: nine criteria, one PASS/FAIL line each. Exits non-zero if
//! any criterion fails.

use std::time::{Duration, Instant};

use spcsep::bipartite::RANK_TOL;
use spcsep::classify::{is_ppt, is_spc};
use spcsep::constructions::{
    build_counterexample, build_flip_family, cross_gram_defect, eigen_modulus_defect, gram_defect,
};
use spcsep::linalg::hermitian_eig;
use spcsep::sweeps::{
    antisym_sweep, canonical_sweep, rank3_sweep, schur_witness_sweep, spc_ppt_sweep, structural_sweep,
    symmetric_state_sweep, SweepSummary,
};

const TOL: f64 = 1e-9;

struct Line {
    ok: bool,
    detail: String,
}

fn sweep_detail(s: &SweepSummary) -> String {
    let mut out = format!("{}/{} passed; worst {} = {:.3e}", s.passed(), s.samples(), s.metric_label, s.worst_metric());
    for r in s.violations().iter().chain(s.errors().iter()).take(3) {
        out.push_str(&format!("; seed {}: {:?}", r.seed, r.outcome));
    }
    out
}

fn counterexample() -> Line {
    let ce = build_counterexample::<f64>();
    let c = &ce.c;
    let es = hermitian_eig(c.matrix(), TOL).unwrap();
    let psd = es.min() >= -TOL * es.norm();
    let spc = is_spc(c, TOL).unwrap();
    let ppt = is_ppt(c, TOL).unwrap();
    let rank = c.tensor_rank(RANK_TOL);
    let ok = ce.p_matches_expected()
        && ce.q_matches_expected()
        && ce.m_p < ce.m_q
        && ce.m_q < 0.0
        && ce.m_q.abs() + ce.m_p < -1e-6
        && psd
        && spc
        && rank == 3
        && !ppt;
    Line {
        ok,
        detail: format!(
            "p exact={} q exact={} m_p={:.9} m_q={:.9} |m_q|+m_p={:.3e} psd={psd} spc={spc} rank={rank} ppt={ppt}",
            ce.p_matches_expected(),
            ce.q_matches_expected(),
            ce.m_p,
            ce.m_q,
            ce.m_q.abs() + ce.m_p
        ),
    }
}

fn sweep_line(s: SweepSummary) -> Line {
    Line { ok: s.all_passed(), detail: sweep_detail(&s) }
}

fn rank3() -> Line {
    let mut ok = true;
    let mut parts = Vec::new();
    for m in [2, 3, 4] {
        let s = rank3_sweep(m, &[1e-2, 1e-4], 1000, 3000 * m as u64, TOL, 1e-8);
        ok &= s.all_passed();
        parts.push(format!("m={m}: {}", sweep_detail(&s)));
    }
    Line { ok, detail: parts.join(" | ") }
}

fn flip_family() -> Line {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in 1..=3usize {
        let k = 1usize << n;
        let thr = (k as f64 - 1.0) / 2.0;
        let at = build_flip_family::<f64>(n, thr).unwrap();
        let b = &at.bases;
        let target = 1.0 / (k as f64).sqrt();
        let basis = gram_defect(&b.sym)
            .max(gram_defect(&b.asym))
            .max(cross_gram_defect(&b.sym, &b.asym))
            .max(eigen_modulus_defect(&b.sym, target))
            .max(eigen_modulus_defect(&b.asym, target));
        let spectrum = at.half_spectrum_defect();
        let identities = at.uut_identity_residual.max(at.flip_identity_residual);
        let es = hermitian_eig(at.c.matrix(), TOL).unwrap();
        let psd = es.min() >= -TOL * es.norm();
        let spc = is_spc(&at.c, TOL).unwrap();
        let ppt = is_ppt(&at.c, TOL).unwrap();
        let below = build_flip_family::<f64>(n, thr - 0.01).unwrap();
        let below_min = hermitian_eig(below.c.matrix(), TOL).unwrap().min();
        let sizes = b.sym.len() == k * (k + 1) / 2 && b.asym.len() == k * (k - 1) / 2;
        let this =
            sizes && basis <= 1e-12 && spectrum <= 1e-12 && identities <= 1e-10 && psd && spc && ppt && below_min < 0.0;
        ok &= this;
        parts.push(format!(
            "n={n}: basis {basis:.1e} spectrum {spectrum:.1e} identities {identities:.1e} psd={psd} spc={spc} ppt={ppt} below-min {below_min:.3e}"
        ));
    }
    Line { ok, detail: parts.join(" | ") }
}

fn main() {
    type Criterion = (&'static str, Option<Duration>, Box<dyn Fn() -> Line>);
    let criteria: Vec<Criterion> = vec![
        ("1 counterexample in M3⊗M3", Some(Duration::from_secs(5)), Box::new(counterexample)),
        (
            "2 SPC implies PPT in M2⊗M2 (10^4 samples)",
            Some(Duration::from_secs(60)),
            Box::new(|| sweep_line(spc_ppt_sweep(2, 4, 10_000, 0, TOL))),
        ),
        ("3 rank-3 reduction in M2⊗Mm (10^3 per m)", Some(Duration::from_secs(120)), Box::new(rank3)),
        (
            "4 symmetric states: SPC iff PPT (10^3 samples)",
            Some(Duration::from_secs(120)),
            Box::new(|| sweep_line(symmetric_state_sweep(&[2, 3, 4], 1000, 0, TOL))),
        ),
        ("5 flip family and Sym/ASym bases", None, Box::new(flip_family)),
        (
            "6 canonical form round trip (10^3 samples)",
            None,
            Box::new(|| sweep_line(canonical_sweep(1000, 0, TOL, 1e-8))),
        ),
        (
            "7 Schur witness with 10 orthogonal remixes (10^3 samples)",
            None,
            Box::new(|| sweep_line(schur_witness_sweep(1000, 10, 0, TOL))),
        ),
        (
            "8 realignment identities (100 samples)",
            None,
            Box::new(|| sweep_line(structural_sweep(&[2, 3], 100, 0, 1e-12))),
        ),
        (
            "9 antisymmetric families (100 samples)",
            None,
            Box::new(|| sweep_line(antisym_sweep(&[3, 4, 5], 4, 100, 0, TOL, 0.1))),
        ),
    ];

    let mut failed = 0;
    for (name, budget, run) in &criteria {
        let start = Instant::now();
        let line = run();
        let elapsed = start.elapsed();
        let ok = line.ok && budget.is_none_or(|b| elapsed <= b);
        if !ok {
            failed += 1;
        }
        let budget = budget.map_or("no budget".to_string(), |b| format!("budget {}s", b.as_secs()));
        println!(
            "[{}] {name} ({:.2}s, {budget}): {}",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            line.detail
        );
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
