//! Quantitative bounds: the supremum for the polynomial family on normalized
//! blocks, the upper-bound optimizer, per-tuple parameter optimizers, the
//! printed counterexample, and the Monte Carlo lower-bound search.

pub mod example;
pub mod lemma;
pub mod params;
pub mod search;
pub mod upper;

pub use example::{example1_tuple, verify_example1, Example1Report};
pub use lemma::{lemma_fnd_supremum, lemma_inner, LemmaSupremum};
pub use params::{optimize_alpha, optimize_fd_params, AlphaOptimum, FdOptimum};
pub use search::{
    lower_search, lower_search_with, replay_sample, BoundRecord, MapClass, Origin, Outcome,
    SearchConfig, SearchSummary, TupleSource,
};
pub use upper::{upper_bound_main2, UpperBound};
