//! Monte Carlo lower-bound search over random commuting row contractions.
//!
//! Sample `i` draws its tuple from the stream `derived(seed, i)`, so every
//! record depends only on `(seed, i)` and the configuration, never on how
//! indices are split across workers. Records are merged and written in index
//! order; the best record is the first one (corpus before random samples,
//! then by index, then by class) attaining the maximal value.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::block::{random_block_tuple, BlockForm};
use crate::bounds::params::{optimize_alpha, optimize_fd_params};
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::funclass::ScalarMap;
use crate::rng::{derived, SpectrumSampling};
use crate::tuple::{random_spectral_tuple, MatrixTuple, SpectralData};
use crate::wire::read_corpus;

/// `sqrt(2) + sqrt(3)`, the closed form of the printed-constraint upper bound.
pub const UPPER_CLOSED_FORM: f64 = 3.146_264_369_941_972;
pub const UPPER_CONSISTENCY_TOL: f64 = 1e-6;
/// Fresh random values above this are counted in the summary.
pub const NOTABLE_VALUE: f64 = 1.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapClass {
    Fnd,
    Fd,
}

impl MapClass {
    pub fn name(self) -> &'static str {
        match self {
            MapClass::Fnd => "fnd",
            MapClass::Fd => "fd",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchConfig {
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
    pub classes: Vec<MapClass>,
    pub alpha_grid: usize,
    /// Total `(tau, omega)` phase grid points.
    pub fd_grid: usize,
    /// Search `omega` over the closed disc instead of the circle.
    pub fd_full_disc: bool,
    pub cond_max: f64,
    pub corpus: Option<PathBuf>,
    pub spectrum_bias: bool,
    /// Probability that a sample is a normalized block tuple.
    pub block_fraction: f64,
    /// Samples per merge-and-flush round.
    pub flush_every: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            samples: 1000,
            seed: 0,
            workers: 1,
            classes: vec![MapClass::Fnd, MapClass::Fd],
            alpha_grid: 200,
            fd_grid: 64,
            fd_full_disc: false,
            cond_max: 1e3,
            corpus: None,
            spectrum_bias: false,
            block_fraction: 0.1,
            flush_every: 1000,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::ParamOutOfRange(m));
        if self.workers == 0 {
            return bad("workers must be at least 1".into());
        }
        if self.classes.is_empty() {
            return bad("no map class selected".into());
        }
        if self.alpha_grid < 2 {
            return bad(format!("alpha grid {} < 2", self.alpha_grid));
        }
        if self.fd_grid < 4 {
            return bad(format!("fd grid {} < 4", self.fd_grid));
        }
        if !(self.cond_max >= 1.0) {
            return bad(format!("cond_max {} < 1", self.cond_max));
        }
        if !(0.0..=1.0).contains(&self.block_fraction) {
            return bad(format!("block fraction {} not in [0, 1]", self.block_fraction));
        }
        if self.flush_every == 0 {
            return bad("flush interval must be positive".into());
        }
        Ok(())
    }

    fn classes(&self) -> Vec<MapClass> {
        let mut c = self.classes.clone();
        c.sort();
        c.dedup();
        c
    }

    fn sampling(&self) -> SpectrumSampling {
        if self.spectrum_bias {
            SpectrumSampling::BoundaryBiased
        } else {
            SpectrumSampling::Uniform
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
pub enum TupleSource {
    Spectral(SpectralData),
    Block(BlockForm),
    Matrices(MatrixTuple),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    Corpus,
    Random,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundRecord {
    /// `||m(T)||` for the maximizing map.
    pub value: f64,
    pub class: MapClass,
    pub map: ScalarMap,
    pub tuple_source: TupleSource,
    pub origin: Origin,
    pub seed: u64,
    /// Corpus position or random sample index, depending on `origin`.
    pub sample_index: u64,
    /// `cond(P)` for diagonalized tuples, `1` otherwise.
    pub condition_used: f64,
    pub row_defect: f64,
}

impl BoundRecord {
    pub fn tuple(&self) -> Result<MatrixTuple> {
        match &self.tuple_source {
            TupleSource::Spectral(s) => MatrixTuple::from_spectral(s.clone(), f64::INFINITY),
            TupleSource::Block(b) => Ok(b.to_tuple()),
            TupleSource::Matrices(t) => Ok(t.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Record(Box<BoundRecord>),
    Skipped(&'static str),
}

pub fn skip_reason(e: &Error) -> &'static str {
    match e {
        Error::RejectionExhausted { .. } => "rejection_exhausted",
        Error::NearPole { .. } | Error::NearPoleMatrix { .. } => "near_pole",
        Error::CommutationUnsatisfiable { .. } => "commutation",
        Error::ZeroTuple => "zero_tuple",
        Error::Dimension(_) => "dimension",
        Error::Singular { .. } | Error::ConditionExceeded { .. } => "ill_conditioned",
        _ => "other",
    }
}

struct Drawn {
    tuple: MatrixTuple,
    source: TupleSource,
    condition: f64,
}

fn condition_of(t: &MatrixTuple) -> f64 {
    t.spectral().and_then(|s| s.p().condition_estimate().ok()).unwrap_or(1.0)
}

fn draw(cfg: &SearchConfig, index: u64) -> Result<Drawn> {
    let mut rng = derived(cfg.seed, index);
    if rng.random::<f64>() < cfg.block_fraction {
        let b = random_block_tuple(&mut rng)?;
        Ok(Drawn { tuple: b.to_tuple(), source: TupleSource::Block(b), condition: 1.0 })
    } else {
        let t = random_spectral_tuple(&mut rng, 2, 3, cfg.cond_max, cfg.sampling())?;
        let s = t.spectral().expect("drawn in diagonal form").clone();
        Ok(Drawn { condition: condition_of(&t), tuple: t, source: TupleSource::Spectral(s) })
    }
}

fn evaluate(cfg: &SearchConfig, d: &Drawn, origin: Origin, index: u64) -> Vec<Outcome> {
    let row_defect = d.tuple.row_contraction_defect();
    cfg.classes()
        .into_iter()
        .map(|class| {
            let found = match class {
                MapClass::Fnd => optimize_alpha(&d.tuple, cfg.alpha_grid)
                    .and_then(|o| Ok((o.value, ScalarMap::fnd(o.alpha)?))),
                MapClass::Fd => optimize_fd_params(&d.tuple, cfg.fd_grid, cfg.fd_full_disc)
                    .and_then(|o| Ok((o.value, ScalarMap::fd(o.tau, o.omega)?))),
            };
            match found {
                Ok((value, map)) => Outcome::Record(Box::new(BoundRecord {
                    value,
                    class,
                    map,
                    tuple_source: d.source.clone(),
                    origin,
                    seed: cfg.seed,
                    sample_index: index,
                    condition_used: d.condition,
                    row_defect,
                })),
                Err(e) => Outcome::Skipped(skip_reason(&e)),
            }
        })
        .collect()
}

/// Outcomes for random sample `index`, one per configured class.
pub fn replay_sample(cfg: &SearchConfig, index: u64) -> Vec<Outcome> {
    match draw(cfg, index) {
        Ok(d) => evaluate(cfg, &d, Origin::Random, index),
        Err(e) => vec![Outcome::Skipped(skip_reason(&e)); cfg.classes().len()],
    }
}

fn corpus_outcomes(cfg: &SearchConfig, index: usize, t: &MatrixTuple) -> Vec<Outcome> {
    let source = match t.spectral() {
        Some(s) => TupleSource::Spectral(s.clone()),
        None => TupleSource::Matrices(t.clone()),
    };
    let d = Drawn { tuple: t.clone(), source, condition: condition_of(t) };
    evaluate(cfg, &d, Origin::Corpus, index as u64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub origin: Origin,
    pub sample_index: u64,
    pub class: MapClass,
    pub value: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub best: Option<BoundRecord>,
    pub corpus_size: usize,
    pub samples: u64,
    pub records: u64,
    pub skipped: BTreeMap<String, u64>,
    pub best_by_class: BTreeMap<MapClass, f64>,
    /// Every strict improvement of the running best, in merge order.
    pub trajectory: Vec<TrajectoryPoint>,
    /// Records above the upper bound plus tolerance; must stay zero.
    pub consistency_violations: u64,
    /// Random-sample records above [`NOTABLE_VALUE`].
    pub notable_random: u64,
    /// Largest value among random samples.
    pub best_random: Option<f64>,
    /// Largest value on normalized block tuples.
    pub max_block_value: Option<f64>,
}

impl SearchSummary {
    fn push(&mut self, o: Outcome, sink: &mut Option<&mut dyn Write>) -> Result<()> {
        let r = match o {
            Outcome::Skipped(reason) => {
                *self.skipped.entry(reason.to_string()).or_default() += 1;
                return Ok(());
            }
            Outcome::Record(r) => r,
        };
        if let Some(w) = sink.as_mut() {
            serde_json::to_writer(&mut **w, &r)?;
            w.write_all(b"\n")?;
        }
        self.records += 1;
        if r.value > UPPER_CLOSED_FORM + UPPER_CONSISTENCY_TOL {
            self.consistency_violations += 1;
        }
        if r.origin == Origin::Random {
            if r.value > NOTABLE_VALUE {
                self.notable_random += 1;
            }
            self.best_random = Some(self.best_random.map_or(r.value, |m| m.max(r.value)));
        }
        if matches!(r.tuple_source, TupleSource::Block(_)) {
            self.max_block_value = Some(self.max_block_value.map_or(r.value, |m| m.max(r.value)));
        }
        let class_best = self.best_by_class.entry(r.class).or_insert(r.value);
        *class_best = class_best.max(r.value);
        if self.best.as_ref().is_none_or(|b| r.value > b.value) {
            self.trajectory.push(TrajectoryPoint {
                origin: r.origin,
                sample_index: r.sample_index,
                class: r.class,
                value: r.value,
            });
            self.best = Some(*r);
        }
        Ok(())
    }
}

/// Runs the search, loading the corpus from `cfg.corpus` if set. Records
/// are written to `sink` as JSON lines.
pub fn lower_search(cfg: &SearchConfig, sink: Option<&mut dyn Write>) -> Result<SearchSummary> {
    let corpus = match &cfg.corpus {
        Some(path) => read_corpus(path)?,
        None => Vec::new(),
    };
    lower_search_with(cfg, &corpus, sink)
}

/// [`lower_search`] with an in-memory corpus (`cfg.corpus` is ignored).
pub fn lower_search_with(
    cfg: &SearchConfig,
    corpus: &[MatrixTuple],
    mut sink: Option<&mut dyn Write>,
) -> Result<SearchSummary> {
    cfg.validate()?;
    let exec = Executor::new(cfg.workers);
    let mut summary = SearchSummary { corpus_size: corpus.len(), samples: cfg.samples, ..Default::default() };

    let corpus_out = exec.map(0..corpus.len(), |i| corpus_outcomes(cfg, i, &corpus[i]));
    for o in corpus_out.into_iter().flatten() {
        summary.push(o, &mut sink)?;
    }

    let total = usize::try_from(cfg.samples)
        .map_err(|_| Error::ParamOutOfRange(format!("{} samples", cfg.samples)))?;
    let mut start = 0;
    while start < total {
        let end = total.min(start + cfg.flush_every);
        let chunk = exec.map(start..end, |i| replay_sample(cfg, i as u64));
        for o in chunk.into_iter().flatten() {
            summary.push(o, &mut sink)?;
        }
        if let Some(w) = sink.as_mut() {
            w.flush()?;
        }
        start = end;
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::example::example1_tuple;

    fn small(samples: u64, workers: usize) -> SearchConfig {
        SearchConfig { samples, workers, seed: 99, flush_every: 37, ..Default::default() }
    }

    #[test]
    fn corpus_only_finds_example() {
        let cfg = SearchConfig { samples: 0, classes: vec![MapClass::Fnd], ..Default::default() };
        let s = lower_search_with(&cfg, &[example1_tuple()], None).unwrap();
        let best = s.best.unwrap();
        assert_eq!(best.origin, Origin::Corpus);
        assert!((best.value - 1.123_696).abs() < 1e-5, "{}", best.value);
    }

    #[test]
    fn workers_do_not_change_output() {
        let mut a = Vec::new();
        let mut b = Vec::new();
        let sa = lower_search_with(&small(300, 1), &[], Some(&mut a)).unwrap();
        let sb = lower_search_with(&small(300, 4), &[], Some(&mut b)).unwrap();
        assert_eq!(sa, sb);
        assert_eq!(a, b);
        assert!(sa.records > 0);
    }

    #[test]
    fn trajectory_is_monotone_and_ends_at_best() {
        let s = lower_search_with(&small(200, 2), &[], None).unwrap();
        assert!(s.trajectory.windows(2).all(|w| w[0].value < w[1].value));
        assert_eq!(s.trajectory.last().unwrap().value, s.best.as_ref().unwrap().value);
        assert_eq!(s.consistency_violations, 0);
    }

    #[test]
    fn records_replay_from_seed_and_index() {
        let cfg = small(50, 1);
        let mut out = Vec::new();
        lower_search_with(&cfg, &[], Some(&mut out)).unwrap();
        for line in String::from_utf8(out).unwrap().lines() {
            let r: BoundRecord = serde_json::from_str(line).unwrap();
            let again = replay_sample(&cfg, r.sample_index);
            assert!(again.contains(&Outcome::Record(Box::new(r))));
        }
    }

    #[test]
    fn invalid_config() {
        for cfg in [
            SearchConfig { workers: 0, ..Default::default() },
            SearchConfig { classes: vec![], ..Default::default() },
            SearchConfig { block_fraction: 1.5, ..Default::default() },
            SearchConfig { cond_max: f64::NAN, ..Default::default() },
        ] {
            assert!(lower_search_with(&cfg, &[], None).is_err());
        }
    }

    #[test]
    fn config_json_round_trip() {
        let cfg = SearchConfig { corpus: Some("x.json".into()), ..small(5, 3) };
        let back: SearchConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
    }
}
