//! Spelling check and correction by threshold escalation.
//!
//! Correction tries t = 0, 1, ... up to a cap and stops at the first
//! threshold that yields candidates, so the reported threshold is the true
//! distance from the query to the language. Each threshold is a fresh
//! search: low thresholds are so much cheaper than high ones that probing
//! them first costs almost nothing and keeps the common case fast.

use crate::automaton::Fsa;
use crate::search::{analyze_within, find_all_within, Candidate, SearchStats};
use crate::transducer::Fst;

/// One searched threshold and what it cost.
#[derive(Debug, Clone)]
pub struct Attempt {
    pub threshold: usize,
    pub stats: SearchStats,
}

/// Outcome of [`correct`] or [`analyze`].
#[derive(Debug, Clone)]
pub struct CorrectionResult {
    pub query: String,
    /// Smallest attempted threshold with a non-empty candidate set; `None`
    /// when even the cap produced nothing.
    pub used_threshold: Option<usize>,
    /// Candidates at `used_threshold`, ordered by (distance, text, gloss);
    /// empty iff `used_threshold` is `None`.
    pub candidates: Vec<Candidate>,
    /// Every threshold searched, in order, with its stats.
    pub attempts: Vec<Attempt>,
}

impl CorrectionResult {
    /// Arcs followed across all attempted thresholds.
    pub fn arcs_traversed_forward(&self) -> u64 {
        self.attempts
            .iter()
            .map(|a| a.stats.arcs_traversed_forward)
            .sum()
    }

    /// Total search time across all attempted thresholds.
    pub fn total_time(&self) -> std::time::Duration {
        self.attempts.iter().map(|a| a.stats.time_to_all).sum()
    }

    /// Time until the first candidate anywhere in the escalation: the full
    /// cost of the failed thresholds plus the time to first solution within
    /// the successful one. Equals `total_time` when nothing was found.
    pub fn time_to_first(&self) -> std::time::Duration {
        let mut total = std::time::Duration::ZERO;
        for attempt in &self.attempts {
            if attempt.stats.candidate_count > 0 {
                total += attempt
                    .stats
                    .time_to_first
                    .unwrap_or(attempt.stats.time_to_all);
                return total;
            }
            total += attempt.stats.time_to_all;
        }
        total
    }
}

/// Is `x` spelled exactly right? Plain traversal, no distance machinery.
pub fn check(fsa: &Fsa, x: &str) -> bool {
    fsa.accepts(x)
}

/// Surface-side [`check`] for transducers.
pub fn check_fst(fst: &Fst, x: &str) -> bool {
    fst.accepts_surface(x)
}

/// Correct `x` against a recognizer, escalating t from 0 to `max_threshold`
/// inclusive and stopping at the first threshold with candidates.
pub fn correct(fsa: &Fsa, x: &str, max_threshold: usize) -> CorrectionResult {
    escalate(x, max_threshold, |t| find_all_within(fsa, x, t))
}

/// [`correct`] over a transducer: candidates carry glosses.
pub fn analyze(fst: &Fst, x: &str, max_threshold: usize) -> CorrectionResult {
    escalate(x, max_threshold, |t| analyze_within(fst, x, t))
}

fn escalate(
    x: &str,
    max_threshold: usize,
    mut search: impl FnMut(usize) -> (Vec<Candidate>, SearchStats),
) -> CorrectionResult {
    let mut attempts = Vec::new();
    for t in 0..=max_threshold {
        let (candidates, stats) = search(t);
        attempts.push(Attempt {
            threshold: t,
            stats,
        });
        if !candidates.is_empty() {
            return CorrectionResult {
                query: x.to_string(),
                used_threshold: Some(t),
                candidates,
                attempts,
            };
        }
    }
    CorrectionResult {
        query: x.to_string(),
        used_threshold: None,
        candidates: Vec::new(),
        attempts,
    }
}
