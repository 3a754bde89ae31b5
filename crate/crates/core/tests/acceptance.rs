//! Acceptance suite. One PASS/FAIL line per criterion; exits non-zero if
//! any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;
use vnball::block::{random_block_tuple, ConstraintSet};
use vnball::bounds::search::{UPPER_CLOSED_FORM, UPPER_CONSISTENCY_TOL};
use vnball::bounds::{
    example1_tuple, lemma_fnd_supremum, lower_search_with, optimize_alpha, upper_bound_main2,
    verify_example1, MapClass, SearchConfig,
};
use vnball::calculus::{
    apply_fd_direct, apply_fnd_direct, apply_spectral, block_eval_fnd, block_eval_mobius_fnd, fnd_matrix,
    mobius_matrix,
};
use vnball::funclass::{eval_fd, eval_fnd, Point, ScalarMap, Stage};
use vnball::matrix::{ComplexMatrix, C64};
use vnball::rng::{ball_point, seeded, sphere_point, unit_phase, SpectrumSampling};
use vnball::tuple::random_spectral_tuple;

struct Outcome {
    pass: bool,
    detail: String,
}

fn rel(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).operator_norm() / b.operator_norm().max(1.0)
}

fn criterion1() -> Outcome {
    let r = verify_example1();
    Outcome {
        pass: r.passed,
        detail: format!(
            "norm {:.6} (target {} +- {}, {}); commutator {:.2e} ({}); row defect {:.5} (<= 1.01, {}); \
             column defect {:.5}; adjoint norm {:.6}; best alpha {:.4} -> {:.6}",
            r.norm,
            r.target,
            r.norm_tol,
            ok(r.norm_pass),
            r.commutator_defect,
            ok(r.commute_pass),
            r.row_contraction_defect,
            ok(r.row_contraction_pass),
            r.column_contraction_defect,
            r.adjoint_norm,
            r.optimized.alpha,
            r.optimized.value
        ),
    }
}

fn criterion2() -> Outcome {
    let s = lemma_fnd_supremum();
    let target = 2.0 / 3f64.sqrt();
    Outcome {
        pass: (s.value - 1.1547005).abs() <= 1e-6
            && (s.value - target).abs() <= 1e-6
            && (s.argmax_alpha - 0.70711).abs() <= 1e-3,
        detail: format!("value {:.9} (2/sqrt3 = {target:.9}), argmax alpha {:.7}", s.value, s.argmax_alpha),
    }
}

fn criterion3() -> Outcome {
    let u = upper_bound_main2(ConstraintSet::PaperPrinted, 100).expect("grid 100 is valid");
    let analytic = 2f64.sqrt() + 3f64.sqrt();
    Outcome {
        pass: (u.value - 3.14626).abs() <= 5e-4 && (u.value - analytic).abs() <= 1e-4,
        detail: format!(
            "value {:.7} vs sqrt2+sqrt3 {analytic:.7}; alpha {:.2e}, N {:.6}, theta {:.6}",
            u.value, u.alpha, u.n_max, u.theta
        ),
    }
}

fn criterion4() -> Outcome {
    let mut rng = seeded(4004);
    let mut max_nd: f64 = 0.0;
    let mut max_d: f64 = 0.0;
    let mut poles = 0u64;
    let mut attain_err: f64 = 0.0;
    let boundary: Vec<Point> = (0..10_000).map(|_| sphere_point(&mut rng)).collect();
    for _ in 0..1000 {
        let alpha = rng.random::<f64>();
        for z in &boundary {
            max_nd = max_nd.max(eval_fnd(alpha, z).expect("in closed ball").norm());
        }
        let peak = [C64::new(alpha, 0.0), C64::new((1.0 - alpha * alpha).sqrt(), 0.0)];
        attain_err = attain_err.max((eval_fnd(alpha, &peak).unwrap().norm() - 1.0).abs());

        let tau = unit_phase(&mut rng);
        let omega = unit_phase(&mut rng) * rng.random::<f64>().sqrt();
        for z in &boundary {
            match eval_fd(tau, omega, z) {
                Ok(v) => max_d = max_d.max(v.norm()),
                Err(_) => poles += 1,
            }
        }
    }
    Outcome {
        pass: max_nd <= 1.0 + 1e-9 && max_d <= 1.0 + 1e-9 && attain_err <= 1e-12,
        detail: format!(
            "max |F_ND| {max_nd:.12}, max |F_D| {max_d:.12}, boundary maximizer error {attain_err:.1e}, \
             pole points skipped {poles}"
        ),
    }
}

fn criterion5() -> Outcome {
    let mut rng = seeded(5005);
    let mut worst_spec: f64 = 0.0;
    for _ in 0..1000 {
        let t = random_spectral_tuple(&mut rng, 2, 3, 1e3, SpectrumSampling::Uniform).expect("draw");
        let alpha = rng.random::<f64>();
        let s = apply_spectral(&ScalarMap::fnd(alpha).unwrap(), &t).unwrap().value;
        let d = apply_fnd_direct(alpha, &t).unwrap().value;
        worst_spec = worst_spec.max(rel(&s, &d));
        let tau = unit_phase(&mut rng);
        let omega = unit_phase(&mut rng) * rng.random::<f64>().sqrt();
        let s = apply_spectral(&ScalarMap::fd(tau, omega).unwrap(), &t).unwrap().value;
        let d = apply_fd_direct(tau, omega, &t).unwrap().value;
        worst_spec = worst_spec.max(rel(&s, &d));
    }
    let mut worst_block: f64 = 0.0;
    let mut blocks = 0;
    while blocks < 10_000 {
        let Ok(b) = random_block_tuple(&mut rng) else { continue };
        blocks += 1;
        let t = b.to_tuple();
        let alpha = rng.random::<f64>();
        let direct = fnd_matrix(alpha, t.matrix(0), t.matrix(1));
        worst_block = worst_block.max((block_eval_fnd(&b, alpha) - direct).operator_norm());
        let shift = unit_phase(&mut rng) * rng.random::<f64>() * 0.9;
        if let Ok(m) = mobius_matrix(shift, 0.0, &direct) {
            let blockwise = block_eval_mobius_fnd(&b, alpha, shift).expect("same denominator");
            worst_block = worst_block.max((blockwise - m).operator_norm());
        }
    }
    Outcome {
        pass: worst_spec <= 1e-8 && worst_block <= 1e-10,
        detail: format!("spectral vs direct {worst_spec:.2e} (1e3 tuples), block vs direct {worst_block:.2e} (1e4 blocks)"),
    }
}

fn random_unitary(rng: &mut impl Rng) -> ComplexMatrix {
    let [p, q] = sphere_point(rng);
    let phase = unit_phase(rng);
    ComplexMatrix::from_rows(&[[p, q], [-q.conj() * phase, p.conj() * phase]]).unwrap()
}

fn random_chain(rng: &mut impl Rng) -> ScalarMap {
    let core = if rng.random::<bool>() {
        Stage::Fnd { alpha: rng.random::<f64>() }
    } else {
        Stage::Fd { tau: unit_phase(rng), omega: unit_phase(rng) * rng.random::<f64>().sqrt() }
    };
    let a = ball_point(rng, 2, SpectrumSampling::Uniform);
    ScalarMap::new(vec![
        Stage::DiscAuto { t: unit_phase(rng) * rng.random::<f64>() * 0.9, theta: rng.random::<f64>() * 6.0 },
        core,
        Stage::BallAuto { a: [a[0] * 0.9, a[1] * 0.9] },
        Stage::Unitary { u: random_unitary(rng) },
    ])
    .expect("well-formed chain")
}

fn criterion6() -> Outcome {
    let mut rng = seeded(6006);
    let mut worst: f64 = 0.0;
    let mut skipped = 0;
    for _ in 0..10_000 {
        let t = random_spectral_tuple(&mut rng, 2, 2, 1e3, SpectrumSampling::Uniform).expect("draw");
        let m = random_chain(&mut rng);
        match apply_spectral(&m, &t) {
            Ok(r) => worst = worst.max(r.value.operator_norm()),
            Err(_) => skipped += 1,
        }
    }
    Outcome {
        pass: worst <= 1.0 + 1e-6,
        detail: format!("max ||m(T)|| {worst:.9} over 1e4 pairs ({skipped} near-pole skips)"),
    }
}

fn criterion7() -> Outcome {
    let mut rng = seeded(7007);
    let bound = 2.0 / 3f64.sqrt();
    let mut worst: f64 = 0.0;
    let mut blocks = 0;
    while blocks < 10_000 {
        let Ok(b) = random_block_tuple(&mut rng) else { continue };
        blocks += 1;
        worst = worst.max(optimize_alpha(&b.to_tuple(), 200).unwrap().value);
    }
    Outcome { pass: worst <= bound + 1e-8, detail: format!("max over alpha {worst:.9} vs 2/sqrt3 {bound:.9}") }
}

fn criterion8() -> Outcome {
    let cfg = SearchConfig {
        samples: 100_000,
        seed: 8008,
        workers: 1,
        classes: vec![MapClass::Fnd, MapClass::Fd],
        flush_every: 10_000,
        ..Default::default()
    };
    let corpus = [example1_tuple()];
    let start = Instant::now();
    let single = lower_search_with(&cfg, &corpus, None).expect("search");
    let single_time = start.elapsed();
    let multi = lower_search_with(&SearchConfig { workers: 4, ..cfg.clone() }, &corpus, None).expect("search");
    let best = single.best.as_ref().expect("records");
    let pass = single_time < Duration::from_secs(60)
        && single.best == multi.best
        && single == multi
        && single.consistency_violations == 0
        && best.value <= UPPER_CLOSED_FORM + UPPER_CONSISTENCY_TOL
        && best.value >= 1.117 - 5e-3;
    Outcome {
        pass,
        detail: format!(
            "single worker {:.1} s; best {:.6} ({:?} #{}, {}); identical across 1/4 workers: {}; \
             records {}, skipped {:?}, above bound {}; random samples above 1.1: {} (best random {:.6}); \
             by class {:?}",
            single_time.as_secs_f64(),
            best.value,
            best.origin,
            best.sample_index,
            best.class.name(),
            single == multi,
            single.records,
            single.skipped,
            single.consistency_violations,
            single.notable_random,
            single.best_random.unwrap_or(f64::NAN),
            single.best_by_class
        ),
    }
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAILED"
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, f64, fn() -> Outcome); 8] = [
        ("example tuple reproduction", 0.1, criterion1),
        ("polynomial-family supremum 2/sqrt3", 1.0, criterion2),
        ("upper bound sqrt2+sqrt3", 30.0, criterion3),
        ("class membership on the sphere", f64::INFINITY, criterion4),
        ("calculus cross-validation", f64::INFINITY, criterion5),
        ("2x2 von Neumann property", f64::INFINITY, criterion6),
        ("normalized-block bound", f64::INFINITY, criterion7),
        ("search determinism and consistency", f64::INFINITY, criterion8),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let secs = start.elapsed().as_secs_f64();
        let in_time = secs < *budget;
        let pass = out.pass && in_time;
        if !pass {
            failed += 1;
        }
        let budget_note = if budget.is_finite() { format!(" (budget {budget} s)") } else { String::new() };
        println!(
            "{} criterion {}: {name} [{secs:.3} s{budget_note}] {}",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            out.detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
