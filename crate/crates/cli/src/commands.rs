use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use vnball::block::ConstraintSet;
use vnball::bounds::{
    example1_tuple, lemma_fnd_supremum, lower_search, upper_bound_main2, verify_example1, MapClass,
    SearchConfig,
};
use vnball::funclass::Stage;
use vnball::wire::{read_tuple, write_tuple};

use crate::manifest::RunRecord;
use crate::Failure;

/// What a command produced: text and JSON renderings, its exit code, and
/// the data a manifest needs to reproduce it.
pub struct Report {
    pub text: String,
    pub json: Value,
    pub code: u8,
    pub run: Option<RunRecord>,
}

fn to_value(v: &impl Serialize) -> Value {
    serde_json::to_value(v).expect("plain data serializes")
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAILED"
    }
}

fn code(ok: bool) -> u8 {
    if ok {
        0
    } else {
        1
    }
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct Example1Args {
    /// Also write the tuple (with its spectral data) to this file.
    #[arg(long, value_name = "PATH")]
    pub emit_tuple: Option<PathBuf>,
    /// Write the adjoint tuple, a row contraction, to this file.
    #[arg(long, value_name = "PATH")]
    pub emit_adjoint: Option<PathBuf>,
}

pub fn example1(args: &Example1Args) -> Result<Report, Failure> {
    let r = verify_example1();
    if let Some(path) = &args.emit_tuple {
        write_tuple(path, &example1_tuple())?;
    }
    if let Some(path) = &args.emit_adjoint {
        write_tuple(path, &example1_tuple().adjoint())?;
    }
    let mut text = String::new();
    let _ = writeln!(text, "norm at alpha {}: {:.6} (target {} +- {}) {}", r.alpha, r.norm, r.target, r.norm_tol, mark(r.norm_pass));
    let _ = writeln!(text, "commutator defect: {:.3e} {}", r.commutator_defect, mark(r.commute_pass));
    let _ = writeln!(
        text,
        "row-contraction defect: {:.6} (limit 1.01) {}",
        r.row_contraction_defect,
        mark(r.row_contraction_pass)
    );
    let _ = writeln!(
        text,
        "column-contraction defect: {:.6} (adjoint tuple, same norm {:.6})",
        r.column_contraction_defect, r.adjoint_norm
    );
    let _ = writeln!(text, "cond(P): {:.4}", r.cond_p);
    let _ = writeln!(text, "optimized alpha: {:.6} -> {:.6}", r.optimized.alpha, r.optimized.value);
    let _ = writeln!(text, "{}", if r.passed { "PASS" } else { "FAIL" });
    let summary = to_value(&r);
    Ok(Report {
        text,
        json: summary.clone(),
        code: code(r.passed),
        run: Some(RunRecord::new("example1", args, None, summary)),
    })
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct CheckArgs {
    /// Tuple JSON file.
    pub path: PathBuf,
    /// Tolerance for the commutator, row-contraction excess and spectral checks.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Serialize)]
struct CheckSummary {
    d: usize,
    n: usize,
    tol: f64,
    commutator_defect: f64,
    row_contraction_defect: f64,
    spectral_consistency: Option<f64>,
    commute_pass: bool,
    row_contraction_pass: bool,
    spectral_pass: Option<bool>,
    passed: bool,
}

pub fn check(args: &CheckArgs) -> Result<Report, Failure> {
    if !(args.tol >= 0.0) {
        return Err(Failure::input(format!("tolerance {} must be nonnegative", args.tol)));
    }
    let t = read_tuple(&args.path).map_err(|e| Failure::input(format!("{}: {e}", args.path.display())))?;
    let commutator_defect = t.commutator_defect();
    let row = t.row_contraction_defect();
    let spectral = t.spectral_consistency().transpose()?;
    let s = CheckSummary {
        d: t.d(),
        n: t.n(),
        tol: args.tol,
        commutator_defect,
        row_contraction_defect: row,
        spectral_consistency: spectral,
        commute_pass: commutator_defect <= args.tol,
        row_contraction_pass: row <= 1.0 + args.tol,
        spectral_pass: spectral.map(|c| c <= args.tol),
        passed: false,
    };
    let passed = s.commute_pass && s.row_contraction_pass && s.spectral_pass != Some(false);
    let s = CheckSummary { passed, ..s };

    let mut text = String::new();
    let _ = writeln!(text, "tuple: d = {}, n = {}", s.d, s.n);
    let _ = writeln!(text, "commutator defect: {:.3e} {}", s.commutator_defect, mark(s.commute_pass));
    let _ = writeln!(text, "row-contraction defect: {:.9} {}", s.row_contraction_defect, mark(s.row_contraction_pass));
    match s.spectral_consistency {
        Some(c) => {
            let _ = writeln!(text, "spectral consistency: {c:.3e} {}", mark(c <= args.tol));
        }
        None => {
            let _ = writeln!(text, "spectral consistency: no spectral data");
        }
    }
    let _ = writeln!(text, "{}", if passed { "PASS" } else { "FAIL" });
    let summary = to_value(&s);
    Ok(Report { text, json: summary.clone(), code: code(passed), run: Some(RunRecord::new("check", args, None, summary)) })
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintChoice {
    Paper,
    Full,
    Both,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct UpperArgs {
    #[arg(long, value_enum, default_value_t = ConstraintChoice::Paper)]
    pub constraints: ConstraintChoice,
    /// Grid points for alpha before refinement (at least 50).
    #[arg(long, default_value_t = 100)]
    pub grid: usize,
}

pub fn upper(args: &UpperArgs) -> Result<Report, Failure> {
    let sets: &[ConstraintSet] = match args.constraints {
        ConstraintChoice::Paper => &[ConstraintSet::PaperPrinted],
        ConstraintChoice::Full => &[ConstraintSet::FullRowContraction],
        ConstraintChoice::Both => &[ConstraintSet::PaperPrinted, ConstraintSet::FullRowContraction],
    };
    let mut results = Vec::new();
    let mut text = String::new();
    for &set in sets {
        let u = upper_bound_main2(set, args.grid)?;
        let _ = writeln!(
            text,
            "{}: {:.7} (alpha {:.6}, N {:.6}, theta {:.6})",
            set.name(),
            u.value,
            u.alpha,
            u.n_max,
            u.theta
        );
        let e = u.entries;
        let _ = writeln!(
            text,
            "  maximizing moduli: a1 {:.4} b1 {:.4} c1 {:.4} e1 {:.4} c2 {:.4} e2 {:.4}",
            e.a1.re, e.b1.re, e.c1.re, e.e1.re, e.c2.re, e.e2.re
        );
        results.push(u);
    }
    let _ = writeln!(text, "closed form sqrt2 + sqrt3 = {:.7}", 2f64.sqrt() + 3f64.sqrt());
    let summary = json!({ "bounds": results });
    Ok(Report { text, json: summary.clone(), code: 0, run: Some(RunRecord::new("upper", args, None, summary)) })
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct Lemma41Args {}

pub fn lemma41(args: &Lemma41Args) -> Result<Report, Failure> {
    let s = lemma_fnd_supremum();
    let target = 2.0 / 3f64.sqrt();
    let passed = (s.value - target).abs() <= 1e-6 && (s.argmax_alpha - 0.5f64.sqrt()).abs() <= 1e-4;
    let text = format!(
        "supremum {:.9} (2/sqrt3 = {target:.9})\nargmax alpha {:.7} (1/sqrt2 = {:.7})\n{}\n",
        s.value,
        s.argmax_alpha,
        0.5f64.sqrt(),
        if passed { "PASS" } else { "FAIL" }
    );
    let summary = json!({ "value": s.value, "argmax_alpha": s.argmax_alpha, "target": target, "passed": passed });
    Ok(Report { text, json: summary.clone(), code: code(passed), run: Some(RunRecord::new("lemma41", args, None, summary)) })
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassChoice {
    Fnd,
    Fd,
    Both,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 1000)]
    pub samples: u64,
    #[arg(long, env = "VNBALL_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, value_enum, default_value_t = ClassChoice::Both)]
    pub class: ClassChoice,
    /// JSON-lines file for all records.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Tuples (one object or an array) evaluated before random samples.
    #[arg(long, value_name = "PATH")]
    pub corpus: Option<PathBuf>,
    #[arg(long, default_value_t = 200)]
    pub alpha_grid: usize,
    /// Total phase grid points for (tau, omega).
    #[arg(long, default_value_t = 64)]
    pub fd_grid: usize,
    /// Search omega over the closed disc instead of the circle.
    #[arg(long)]
    pub full_disc: bool,
    #[arg(long, default_value_t = 1e3)]
    pub cond_max: f64,
    /// Push sampled spectra toward the sphere.
    #[arg(long)]
    pub bias_boundary: bool,
    /// Fraction of samples drawn as normalized block tuples.
    #[arg(long, default_value_t = 0.1)]
    pub block_fraction: f64,
    /// Samples between flushes of the output file.
    #[arg(long, default_value_t = 1000)]
    pub flush_every: usize,
}

impl SearchArgs {
    pub fn config(&self) -> SearchConfig {
        SearchConfig {
            samples: self.samples,
            seed: self.seed,
            workers: self.workers,
            classes: match self.class {
                ClassChoice::Fnd => vec![MapClass::Fnd],
                ClassChoice::Fd => vec![MapClass::Fd],
                ClassChoice::Both => vec![MapClass::Fnd, MapClass::Fd],
            },
            alpha_grid: self.alpha_grid,
            fd_grid: self.fd_grid,
            fd_full_disc: self.full_disc,
            cond_max: self.cond_max,
            corpus: self.corpus.clone(),
            spectrum_bias: self.bias_boundary,
            block_fraction: self.block_fraction,
            flush_every: self.flush_every,
        }
    }
}

fn describe_map(chain: &[Stage]) -> String {
    chain
        .iter()
        .map(|s| match s {
            Stage::Fnd { alpha } => format!("F_ND(alpha = {alpha:.6})"),
            Stage::Fd { tau, omega } => format!(
                "F_D(tau = {:.6}+{:.6}i, omega = {:.6}+{:.6}i)",
                tau.re, tau.im, omega.re, omega.im
            ),
            other => format!("{other:?}"),
        })
        .collect::<Vec<_>>()
        .join(" o ")
}

pub fn search(args: &SearchArgs) -> Result<Report, Failure> {
    let cfg = args.config();
    cfg.validate()?;
    let summary = match &args.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            let s = lower_search(&cfg, Some(&mut w as &mut dyn Write))?;
            w.flush().map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            s
        }
        None => lower_search(&cfg, None)?,
    };

    let mut text = String::new();
    let _ = writeln!(
        text,
        "samples {} (+{} corpus), records {}, seed {}, workers {}",
        summary.samples, summary.corpus_size, summary.records, cfg.seed, cfg.workers
    );
    match &summary.best {
        Some(b) => {
            let _ = writeln!(
                text,
                "best {:.9}: {} via {}, {:?} #{}, row defect {:.6}, cond {:.3}",
                b.value,
                b.class.name(),
                describe_map(b.map.chain()),
                b.origin,
                b.sample_index,
                b.row_defect,
                b.condition_used
            );
        }
        None => {
            let _ = writeln!(text, "no records");
        }
    }
    for (class, v) in &summary.best_by_class {
        let _ = writeln!(text, "  best {}: {v:.9}", class.name());
    }
    if let Some(v) = summary.best_random {
        let _ = writeln!(text, "best random sample {v:.9}; random records above 1.1: {}", summary.notable_random);
    }
    if let Some(v) = summary.max_block_value {
        let _ = writeln!(text, "max on normalized blocks {v:.9}");
    }
    if !summary.skipped.is_empty() {
        let _ = writeln!(text, "skipped: {:?}", summary.skipped);
    }
    let _ = writeln!(text, "records above the upper bound: {}", summary.consistency_violations);

    let ok = summary.consistency_violations == 0;
    let value = to_value(&summary);
    Ok(Report {
        text,
        json: json!({ "config": cfg, "summary": value }),
        code: code(ok),
        run: Some(RunRecord::new("search", args, Some(cfg.seed), value)),
    })
}
