//! Error-tolerant search: depth-first walks over a machine that enumerate
//! every language string within a given edit distance of the query.
//!
//! The walk pairs an explicit DFS stack with an [`EditMatrix`]: following an
//! arc pushes the arc's character as one matrix column, backtracking pops
//! it, so the matrix depth always equals the candidate length. A subtree is
//! abandoned as soon as the cut-off distance of its candidate prefix passes
//! the threshold; reaching a final state emits the candidate only after
//! re-checking the true distance, because the cut-off measures prefixes of
//! the query and final states can be reached with unrelated remainders.
//!
//! Transducer analysis walks lexical:surface arcs the same way. Arcs with a
//! null surface side consume no input and push no column; they only extend
//! the gloss, and backtracking shortens candidate and gloss in tandem.

use std::collections::BTreeSet;
use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use crate::automaton::{Fsa, StateId};
use crate::distance::EditMatrix;
use crate::transducer::Fst;

/// One search result: a language string within the threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub text: String,
    pub distance: usize,
    /// Lexical token sequence, present only for transducer analyses.
    pub gloss: Option<Vec<String>>,
}

impl Candidate {
    /// Gloss tokens joined into one string, e.g. `["ab", "+N"]` as "ab+N".
    pub fn gloss_string(&self) -> Option<String> {
        self.gloss.as_ref().map(|tokens| tokens.concat())
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    /// Result order: distance, then text, then gloss.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.distance, &self.text, &self.gloss).cmp(&(other.distance, &other.text, &other.gloss))
    }
}

/// Per-query effort and timing counters.
#[derive(Debug, Clone)]
pub struct SearchStats {
    /// Arcs followed forward, counting repeat visits at different depths.
    pub arcs_traversed_forward: u64,
    /// Arc count of the machine searched.
    pub total_arcs: u64,
    /// Elapsed time when the first candidate was emitted.
    pub time_to_first: Option<Duration>,
    /// Elapsed time for the whole search.
    pub time_to_all: Duration,
    /// Deduplicated result count.
    pub candidate_count: usize,
}

impl SearchStats {
    /// Share of the machine's arcs the walk followed; may exceed 1 on
    /// cyclic machines where one arc is followed at several depths.
    pub fn fraction_searched(&self) -> f64 {
        if self.total_arcs == 0 {
            0.0
        } else {
            self.arcs_traversed_forward as f64 / self.total_arcs as f64
        }
    }
}

/// All language strings within distance `t` of `x`, ordered by
/// (distance, text), deduplicated.
pub fn find_all_within(fsa: &Fsa, x: &str, t: usize) -> (Vec<Candidate>, SearchStats) {
    let mut found: BTreeSet<(usize, String)> = BTreeSet::new();
    let stats = if t == 0 {
        walk_exact(fsa, x, &mut |text, d| {
            found.insert((d, text.to_string()));
            ControlFlow::Continue(())
        })
    } else {
        walk_fsa(fsa, x, t, &mut |text, d| {
            found.insert((d, text.to_string()));
            ControlFlow::Continue(())
        })
    };
    finish(found, stats, |(distance, text)| Candidate {
        text,
        distance,
        gloss: None,
    })
}

/// The first candidate the walk reaches, or `None`. Always a member of the
/// [`find_all_within`] result set; which member depends only on arc order.
pub fn find_first_within(fsa: &Fsa, x: &str, t: usize) -> (Option<Candidate>, SearchStats) {
    let mut first: Option<Candidate> = None;
    let mut stats = if t == 0 {
        walk_exact(fsa, x, &mut |text, d| {
            first = Some(Candidate {
                text: text.to_string(),
                distance: d,
                gloss: None,
            });
            ControlFlow::Break(())
        })
    } else {
        walk_fsa(fsa, x, t, &mut |text, d| {
            first = Some(Candidate {
                text: text.to_string(),
                distance: d,
                gloss: None,
            });
            ControlFlow::Break(())
        })
    };
    stats.candidate_count = usize::from(first.is_some());
    (first, stats)
}

/// All (surface string, gloss) pairs of the transducer whose surface side is
/// within distance `t` of `x`, ordered by (distance, text, gloss).
pub fn analyze_within(fst: &Fst, x: &str, t: usize) -> (Vec<Candidate>, SearchStats) {
    let mut found: BTreeSet<(usize, String, Vec<String>)> = BTreeSet::new();
    let stats = walk_fst(fst, x, t, &mut |text, d, gloss| {
        found.insert((d, text.to_string(), gloss.to_vec()));
        ControlFlow::Continue(())
    });
    finish(found, stats, |(distance, text, gloss)| Candidate {
        text,
        distance,
        gloss: Some(gloss),
    })
}

fn finish<K: Ord>(
    found: BTreeSet<K>,
    mut stats: SearchStats,
    mut mk: impl FnMut(K) -> Candidate,
) -> (Vec<Candidate>, SearchStats) {
    stats.candidate_count = found.len();
    (found.into_iter().map(&mut mk).collect(), stats)
}

/// Raw counters shared by the walkers; candidate_count is filled in by the
/// wrappers after deduplication.
fn fresh_stats(total_arcs: usize) -> (Instant, SearchStats) {
    (
        Instant::now(),
        SearchStats {
            arcs_traversed_forward: 0,
            total_arcs: total_arcs as u64,
            time_to_first: None,
            time_to_all: Duration::ZERO,
            candidate_count: 0,
        },
    )
}

/// Threshold-zero path: follow only arcs that spell `x`, no matrix at all.
/// Nondeterministic machines are handled by keeping a state set.
fn walk_exact(
    fsa: &Fsa,
    x: &str,
    emit: &mut dyn FnMut(&str, usize) -> ControlFlow<()>,
) -> SearchStats {
    let (started, mut stats) = fresh_stats(fsa.arc_count());
    let mut current: Vec<StateId> = vec![fsa.start()];
    let mut alive = true;
    for c in x.chars() {
        let mut next: Vec<StateId> = Vec::new();
        for &state in &current {
            for &(symbol, target) in fsa.arcs_from(state) {
                if symbol == c {
                    stats.arcs_traversed_forward += 1;
                    if !next.contains(&target) {
                        next.push(target);
                    }
                }
            }
        }
        if next.is_empty() {
            alive = false;
            break;
        }
        current = next;
    }
    if alive && current.iter().any(|&s| fsa.is_final(s)) {
        stats.time_to_first = Some(started.elapsed());
        let _ = emit(x, 0);
    }
    stats.time_to_all = started.elapsed();
    stats
}

/// General recognizer walk. `emit` returning `Break` stops the search, which
/// is how first-solution queries bail out early.
fn walk_fsa(
    fsa: &Fsa,
    x: &str,
    t: usize,
    emit: &mut dyn FnMut(&str, usize) -> ControlFlow<()>,
) -> SearchStats {
    let (started, mut stats) = fresh_stats(fsa.arc_count());
    let mut matrix = EditMatrix::new(x, t);
    let mut emit_timed = |text: &str, d: usize, stats: &mut SearchStats| {
        if stats.time_to_first.is_none() {
            stats.time_to_first = Some(started.elapsed());
        }
        emit(text, d)
    };

    // The empty candidate is a language string too.
    if fsa.is_final(fsa.start())
        && matrix.distance() <= t
        && emit_timed("", matrix.distance(), &mut stats).is_break()
    {
        stats.time_to_all = started.elapsed();
        return stats;
    }

    // One frame per candidate character plus the root: frame i+1 was entered
    // by pushing column i+1, so stack depth stays matrix depth + 1.
    let mut stack: Vec<(StateId, usize)> = vec![(fsa.start(), 0)];
    'dfs: while let Some(top) = stack.len().checked_sub(1) {
        let (state, cursor) = stack[top];
        let arcs = fsa.arcs_from(state);
        if cursor >= arcs.len() {
            stack.pop();
            if !stack.is_empty() {
                matrix.pop();
            }
            continue;
        }
        stack[top].1 += 1;
        let (symbol, target) = arcs[cursor];
        stats.arcs_traversed_forward += 1;
        if matrix.push(symbol) > t {
            matrix.pop();
            continue;
        }
        if fsa.is_final(target) && matrix.distance() <= t {
            let text = matrix.candidate();
            if emit_timed(&text, matrix.distance(), &mut stats).is_break() {
                break 'dfs;
            }
        }
        stack.push((target, 0));
    }
    stats.time_to_all = started.elapsed();
    stats
}

/// Sink for transducer hits: candidate text, distance, gloss tokens.
type FstEmit<'a> = dyn FnMut(&str, usize, &[String]) -> ControlFlow<()> + 'a;

/// Transducer walk. Null-surface arcs push no column and skip the cut-off
/// test; they cannot loop (rejected at load), and every other cycle grows
/// the candidate until the cut-off kills it, so the walk terminates.
fn walk_fst(fst: &Fst, x: &str, t: usize, emit: &mut FstEmit) -> SearchStats {
    let (started, mut stats) = fresh_stats(fst.arc_count());
    let mut matrix = EditMatrix::new(x, t);
    let mut gloss: Vec<String> = Vec::new();
    let mut emit_timed = |text: &str, d: usize, gloss: &[String], stats: &mut SearchStats| {
        if stats.time_to_first.is_none() {
            stats.time_to_first = Some(started.elapsed());
        }
        emit(text, d, gloss)
    };

    if fst.is_final(fst.start())
        && matrix.distance() <= t
        && emit_timed("", matrix.distance(), &gloss, &mut stats).is_break()
    {
        stats.time_to_all = started.elapsed();
        return stats;
    }

    struct Frame {
        state: StateId,
        cursor: usize,
        /// Whether entering this frame pushed a matrix column / gloss token,
        /// i.e. what leaving it must undo.
        pushed_column: bool,
        pushed_gloss: bool,
    }
    let mut stack = vec![Frame {
        state: fst.start(),
        cursor: 0,
        pushed_column: false,
        pushed_gloss: false,
    }];
    'dfs: while let Some(top) = stack.len().checked_sub(1) {
        let state = stack[top].state;
        let cursor = stack[top].cursor;
        let arcs = fst.arcs_from(state);
        if cursor >= arcs.len() {
            let frame = stack.pop().expect("nonempty stack");
            if frame.pushed_column {
                matrix.pop();
            }
            if frame.pushed_gloss {
                gloss.pop();
            }
            continue;
        }
        stack[top].cursor += 1;
        let arc = &arcs[cursor];
        stats.arcs_traversed_forward += 1;
        if let Some(symbol) = arc.surface {
            if matrix.push(symbol) > t {
                matrix.pop();
                continue;
            }
        }
        if let Some(token) = &arc.lexical {
            gloss.push(token.clone());
        }
        if fst.is_final(arc.target) && matrix.distance() <= t {
            let text = matrix.candidate();
            if emit_timed(&text, matrix.distance(), &gloss, &mut stats).is_break() {
                break 'dfs;
            }
        }
        stack.push(Frame {
            state: arc.target,
            cursor: 0,
            pushed_column: arc.surface.is_some(),
            pushed_gloss: arc.lexical.is_some(),
        });
    }
    stats.time_to_all = started.elapsed();
    stats
}
