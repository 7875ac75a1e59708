//! Error-tolerant recognition with finite-state machines.
//!
//! Given a recognizer for a language and a query string, the [`search`]
//! engines enumerate every language string within a chosen edit distance of
//! the query. The walk is an ordinary depth-first traversal of the machine;
//! an incremental distance matrix ([`distance::EditMatrix`]) rides along and
//! cuts off every subtree that can no longer lead to a close-enough string.
//!
//! On top of that sit a [`speller`] that escalates the threshold until
//! something matches, morphological analysis through transducers
//! ([`transducer`]), and a [`bench`] harness that measures how little of a
//! big machine the search actually touches.

pub mod automaton;
pub mod bench;
pub mod distance;
pub mod error;
pub mod search;
pub mod speller;
pub mod transducer;

pub use automaton::{parse_word_list, Fsa, FsaStats, StateId};
pub use bench::{
    oracle_candidates, perturb, run_benchmark, run_mixed_benchmark, synthesize_mixed_queries,
    BenchReport, MixedBenchReport,
};
pub use distance::{edit_distance, BandMode, EditMatrix};
pub use error::{Error, Result};
pub use search::{analyze_within, find_all_within, find_first_within, Candidate, SearchStats};
pub use speller::{analyze, check, check_fst, correct, CorrectionResult};
pub use transducer::{Fst, FstArc};
