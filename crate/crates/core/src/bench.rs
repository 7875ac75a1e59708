//! Benchmark harness: query perturbation, a linear-scan oracle, and
//! aggregate measurements of search effort over big machines.
//!
//! The methodology: sample words from a list, damage each one by a known
//! number of random edits, run the error-tolerant search over the machine
//! built from the list, and average five per-query figures: query length,
//! time to all solutions, time to the first solution, solution count, and
//! the percentage of the machine's arcs the walk followed. Audit mode
//! re-derives every candidate set by brute force over the word list and
//! fails the run on any disagreement.
//!
//! All randomness flows from one explicitly seeded generator, so a seeded
//! run is reproducible down to the byte everywhere except timing fields.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::automaton::{Fsa, FsaStats};
use crate::distance::edit_distance;
use crate::error::{Error, Result};
use crate::search::find_all_within;
use crate::speller::correct;

/// Sorted deduplicated characters of the word list; insertions and
/// replacements draw from this set so damaged words stay in-alphabet.
pub fn alphabet_of<S: AsRef<str>>(words: &[S]) -> Vec<char> {
    let mut alphabet: Vec<char> = words.iter().flat_map(|w| w.as_ref().chars()).collect();
    alphabet.sort_unstable();
    alphabet.dedup();
    alphabet
}

/// Damage `word` to exact edit distance `k` by applying `k` random unit
/// edits and retrying whenever edits cancel (delete after insert, swap of
/// equal characters, and so on). Deterministic for a given generator state.
///
/// Fails only on degenerate inputs (for example an empty alphabet) where no
/// string at distance `k` is reachable by `k` edits.
pub fn perturb(word: &str, k: usize, alphabet: &[char], rng: &mut impl Rng) -> Result<String> {
    const ATTEMPTS: usize = 200;
    let fail = || Error::Unperturbable {
        word: word.to_string(),
        distance: k,
    };
    if k == 0 {
        return Ok(word.to_string());
    }
    for _ in 0..ATTEMPTS {
        let mut chars: Vec<char> = word.chars().collect();
        for _ in 0..k {
            // 0 insert, 1 delete, 2 replace, 3 swap adjacent.
            let mut ops: Vec<u8> = Vec::with_capacity(4);
            if !alphabet.is_empty() {
                ops.push(0);
            }
            if !chars.is_empty() {
                ops.push(1);
                if !alphabet.is_empty() {
                    ops.push(2);
                }
            }
            if chars.len() >= 2 {
                ops.push(3);
            }
            if ops.is_empty() {
                return Err(fail());
            }
            match ops[rng.random_range(0..ops.len())] {
                0 => {
                    let pos = rng.random_range(0..=chars.len());
                    chars.insert(pos, alphabet[rng.random_range(0..alphabet.len())]);
                }
                1 => {
                    chars.remove(rng.random_range(0..chars.len()));
                }
                2 => {
                    let pos = rng.random_range(0..chars.len());
                    chars[pos] = alphabet[rng.random_range(0..alphabet.len())];
                }
                _ => {
                    let pos = rng.random_range(0..chars.len() - 1);
                    chars.swap(pos, pos + 1);
                }
            }
        }
        let damaged: String = chars.into_iter().collect();
        if edit_distance(word, &damaged) == k {
            return Ok(damaged);
        }
    }
    Err(fail())
}

/// Brute-force candidate set: scan the whole list and keep every word
/// within `t` of `x`, ordered by (distance, word).
pub fn oracle_candidates(words: &[String], x: &str, t: usize) -> Vec<(String, usize)> {
    let mut hits: Vec<(usize, &String)> = words
        .iter()
        .filter_map(|w| {
            let d = edit_distance(x, w);
            (d <= t).then_some((d, w))
        })
        .collect();
    hits.sort();
    hits.dedup();
    hits.into_iter().map(|(d, w)| (w.clone(), d)).collect()
}

/// Fixed parameters of a benchmark run.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub threshold: usize,
    pub samples: usize,
    pub seed: u64,
    pub list_id: String,
    pub audited: bool,
}

/// The five per-query averages.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub avg_query_len: f64,
    pub avg_time_all_ms: f64,
    pub avg_time_first_ms: f64,
    pub avg_solutions: f64,
    /// Mean fraction of arcs followed, as a percentage. Under threshold
    /// escalation one query may follow more arcs than the machine has, so
    /// this can exceed 100.
    pub avg_space_pct: f64,
}

/// Single-threshold run over a machine and its word list.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub config: BenchConfig,
    pub machine: FsaStats,
    pub row: BenchRow,
}

/// Escalating-threshold run over a prepared query list.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedBenchReport {
    pub max_threshold: usize,
    pub queries: usize,
    pub row: BenchRow,
    /// (threshold, query count) for every threshold that resolved queries.
    pub resolved: Vec<(usize, usize)>,
    /// Queries that found nothing at any threshold up to the cap.
    pub unresolved: usize,
}

struct RowAccumulator {
    n: usize,
    query_len: f64,
    time_all_ms: f64,
    time_first_ms: f64,
    solutions: f64,
    space_pct: f64,
}

impl RowAccumulator {
    fn new() -> Self {
        RowAccumulator {
            n: 0,
            query_len: 0.0,
            time_all_ms: 0.0,
            time_first_ms: 0.0,
            solutions: 0.0,
            space_pct: 0.0,
        }
    }

    fn add(&mut self, query: &str, all_ms: f64, first_ms: f64, solutions: usize, fraction: f64) {
        self.n += 1;
        self.query_len += query.chars().count() as f64;
        self.time_all_ms += all_ms;
        self.time_first_ms += first_ms;
        self.solutions += solutions as f64;
        self.space_pct += fraction * 100.0;
    }

    fn finish(self) -> BenchRow {
        let div = if self.n == 0 { 1.0 } else { self.n as f64 };
        BenchRow {
            avg_query_len: self.query_len / div,
            avg_time_all_ms: self.time_all_ms / div,
            avg_time_first_ms: self.time_first_ms / div,
            avg_solutions: self.solutions / div,
            avg_space_pct: self.space_pct / div,
        }
    }
}

struct AuditLog {
    mismatches: usize,
    first: Option<String>,
}

impl AuditLog {
    fn new() -> Self {
        AuditLog {
            mismatches: 0,
            first: None,
        }
    }

    fn record(&mut self, query: &str, ok: bool) {
        if !ok {
            self.mismatches += 1;
            self.first.get_or_insert_with(|| query.to_string());
        }
    }

    fn finish(self, total: usize) -> Result<()> {
        if self.mismatches > 0 {
            return Err(Error::AuditMismatch {
                mismatches: self.mismatches,
                total,
                first: self.first.unwrap_or_default(),
            });
        }
        Ok(())
    }
}

/// Sample `samples` words without replacement, damage each to exact
/// distance `threshold`, search, and average. With `audit` every candidate
/// set is checked against [`oracle_candidates`] over `words`, which assumes
/// the machine's language is exactly the word list.
pub fn run_benchmark(
    fsa: &Fsa,
    words: &[String],
    list_id: &str,
    threshold: usize,
    samples: usize,
    seed: u64,
    audit: bool,
) -> Result<BenchReport> {
    if samples > words.len() {
        return Err(Error::NotEnoughWords {
            requested: samples,
            available: words.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphabet = alphabet_of(words);
    let picks = rand::seq::index::sample(&mut rng, words.len(), samples);

    let mut acc = RowAccumulator::new();
    let mut audit_log = AuditLog::new();
    for word_idx in picks {
        let query = perturb(&words[word_idx], threshold, &alphabet, &mut rng)?;
        let (candidates, stats) = find_all_within(fsa, &query, threshold);
        let all_ms = stats.time_to_all.as_secs_f64() * 1e3;
        let first_ms = stats
            .time_to_first
            .unwrap_or(stats.time_to_all)
            .as_secs_f64()
            * 1e3;
        acc.add(
            &query,
            all_ms,
            first_ms,
            candidates.len(),
            stats.fraction_searched(),
        );
        if audit {
            let got: Vec<(String, usize)> = candidates
                .iter()
                .map(|c| (c.text.clone(), c.distance))
                .collect();
            audit_log.record(&query, got == oracle_candidates(words, &query, threshold));
        }
    }
    audit_log.finish(samples)?;

    Ok(BenchReport {
        config: BenchConfig {
            threshold,
            samples,
            seed,
            list_id: list_id.to_string(),
            audited: audit,
        },
        machine: fsa.stats(Some(words)),
        row: acc.finish(),
    })
}

/// Run the escalating corrector over every query and report the realized
/// distance distribution alongside the usual averages. Per-query time and
/// arc figures sum over all attempted thresholds. When `audit_words` is
/// given, each query's resolved threshold and candidate set are checked
/// against the oracle's minimum distance over that list.
pub fn run_mixed_benchmark(
    fsa: &Fsa,
    queries: &[String],
    max_threshold: usize,
    audit_words: Option<&[String]>,
) -> Result<MixedBenchReport> {
    let total_arcs = fsa.arc_count() as f64;
    let mut acc = RowAccumulator::new();
    let mut audit_log = AuditLog::new();
    let mut resolved: BTreeMap<usize, usize> = BTreeMap::new();
    let mut unresolved = 0usize;

    for query in queries {
        let outcome = correct(fsa, query, max_threshold);
        match outcome.used_threshold {
            Some(t) => *resolved.entry(t).or_insert(0) += 1,
            None => unresolved += 1,
        }
        let fraction = if total_arcs == 0.0 {
            0.0
        } else {
            outcome.arcs_traversed_forward() as f64 / total_arcs
        };
        acc.add(
            query,
            outcome.total_time().as_secs_f64() * 1e3,
            outcome.time_to_first().as_secs_f64() * 1e3,
            outcome.candidates.len(),
            fraction,
        );
        if let Some(words) = audit_words {
            let best = words.iter().map(|w| edit_distance(query, w)).min();
            let expected = best.filter(|&d| d <= max_threshold);
            let ok = match (expected, outcome.used_threshold) {
                (Some(d), Some(t)) if d == t => {
                    let got: Vec<(String, usize)> = outcome
                        .candidates
                        .iter()
                        .map(|c| (c.text.clone(), c.distance))
                        .collect();
                    got == oracle_candidates(words, query, d)
                }
                (None, None) => true,
                _ => false,
            };
            audit_log.record(query, ok);
        }
    }
    audit_log.finish(queries.len())?;

    Ok(MixedBenchReport {
        max_threshold,
        queries: queries.len(),
        row: acc.finish(),
        resolved: resolved.into_iter().collect(),
        unresolved,
    })
}

/// Sample distinct words and damage them in the mixed-severity shape of a
/// real error stream: 80% at distance 1, 15% at distance 2, the rest at
/// distance 3. Deterministic for a given seed.
pub fn synthesize_mixed_queries(
    words: &[String],
    samples: usize,
    seed: u64,
) -> Result<Vec<String>> {
    if samples > words.len() {
        return Err(Error::NotEnoughWords {
            requested: samples,
            available: words.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphabet = alphabet_of(words);
    let picks = rand::seq::index::sample(&mut rng, words.len(), samples);

    let ones = samples * 80 / 100;
    let twos = samples * 15 / 100;
    let mut queries = Vec::with_capacity(samples);
    for (i, word_idx) in picks.into_iter().enumerate() {
        let k = if i < ones {
            1
        } else if i < ones + twos {
            2
        } else {
            3
        };
        queries.push(perturb(&words[word_idx], k, &alphabet, &mut rng)?);
    }
    Ok(queries)
}

/// Aligned human-readable report.
pub fn render_report_text(report: &BenchReport) -> String {
    let mut out = String::new();
    let m = &report.machine;
    let c = &report.config;
    writeln!(
        out,
        "machine  {} states, {} arcs, fan-out {:.3}",
        m.state_count, m.arc_count, m.fan_out
    )
    .unwrap();
    if let (Some(count), Some(avg), Some(max)) = (m.word_count, m.avg_word_len, m.max_word_len) {
        writeln!(
            out,
            "list     {} ({} words, avg len {:.2}, max len {})",
            c.list_id, count, avg, max
        )
        .unwrap();
    }
    writeln!(
        out,
        "run      t={} samples={} seed={} audit={}",
        c.threshold,
        c.samples,
        c.seed,
        if c.audited { "on" } else { "off" }
    )
    .unwrap();
    out.push_str(&render_columns(&report.row));
    out
}

fn render_columns(row: &BenchRow) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:>13} {:>15} {:>17} {:>13} {:>12}",
        "avg qry len", "avg all (ms)", "avg first (ms)", "avg solutions", "space (%)"
    )
    .unwrap();
    writeln!(
        out,
        "{:>13.2} {:>15.3} {:>17.3} {:>13.2} {:>12.4}",
        row.avg_query_len,
        row.avg_time_all_ms,
        row.avg_time_first_ms,
        row.avg_solutions,
        row.avg_space_pct
    )
    .unwrap();
    out
}

/// Machine-readable report: a `machine` line and a `row` line. The two
/// timing columns are the only fields that vary between identical runs.
pub fn render_report_tsv(report: &BenchReport) -> String {
    let m = &report.machine;
    let c = &report.config;
    let mut out = String::new();
    writeln!(
        out,
        "machine\t{}\t{}\t{}\t{:.3}\t{}\t{}\t{}",
        c.list_id,
        m.state_count,
        m.arc_count,
        m.fan_out,
        m.word_count.map_or(String::new(), |v| v.to_string()),
        m.avg_word_len.map_or(String::new(), |v| format!("{v:.2}")),
        m.max_word_len.map_or(String::new(), |v| v.to_string()),
    )
    .unwrap();
    writeln!(
        out,
        "row\t{}\t{}\t{}\t{:.2}\t{:.3}\t{:.3}\t{:.2}\t{:.4}",
        c.threshold,
        c.samples,
        c.seed,
        report.row.avg_query_len,
        report.row.avg_time_all_ms,
        report.row.avg_time_first_ms,
        report.row.avg_solutions,
        report.row.avg_space_pct,
    )
    .unwrap();
    out
}

/// Aligned human-readable mixed-run report.
pub fn render_mixed_text(report: &MixedBenchReport) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "mixed run  max_t={} queries={}",
        report.max_threshold, report.queries
    )
    .unwrap();
    out.push_str(&render_columns(&report.row));
    for &(threshold, count) in &report.resolved {
        writeln!(
            out,
            "resolved at t={threshold}  {count} ({:.1}%)",
            count as f64 * 100.0 / report.queries.max(1) as f64
        )
        .unwrap();
    }
    if report.unresolved > 0 {
        writeln!(
            out,
            "unresolved     {} ({:.1}%)",
            report.unresolved,
            report.unresolved as f64 * 100.0 / report.queries.max(1) as f64
        )
        .unwrap();
    }
    out
}

/// Machine-readable mixed-run report: a `mixed` row plus `dist` rows.
pub fn render_mixed_tsv(report: &MixedBenchReport) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "mixed\t{}\t{}\t{:.2}\t{:.3}\t{:.3}\t{:.2}\t{:.4}",
        report.max_threshold,
        report.queries,
        report.row.avg_query_len,
        report.row.avg_time_all_ms,
        report.row.avg_time_first_ms,
        report.row.avg_solutions,
        report.row.avg_space_pct,
    )
    .unwrap();
    for &(threshold, count) in &report.resolved {
        writeln!(out, "dist\t{threshold}\t{count}").unwrap();
    }
    if report.unresolved > 0 {
        writeln!(out, "dist\tmiss\t{}", report.unresolved).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wl(words: &[&str]) -> Vec<String> {
        words.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn perturbed_word_lands_at_exact_distance() {
        let alphabet: Vec<char> = ('a'..='z').collect();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in 1..=3 {
            for word in ["hello", "benchmark", "ab"] {
                let damaged = perturb(word, k, &alphabet, &mut rng).unwrap();
                assert_eq!(edit_distance(word, &damaged), k, "{word} at k={k}");
            }
        }
    }

    #[test]
    fn perturbation_is_seed_deterministic() {
        let alphabet: Vec<char> = ('a'..='z').collect();
        let one = perturb("hello", 2, &alphabet, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let two = perturb("hello", 2, &alphabet, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(one, two);
    }

    #[test]
    fn degenerate_alphabet_is_unperturbable() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let err = perturb("a", 2, &[], &mut rng).unwrap_err();
        assert!(matches!(err, Error::Unperturbable { distance: 2, .. }));
    }

    #[test]
    fn oracle_scans_the_whole_list() {
        let words = wl(&[
            "abacus",
            "abacuses",
            "abalone",
            "abandone",
            "abandoned",
            "abandoning",
            "access",
        ]);
        let hits = oracle_candidates(&words, "abacuss", 1);
        assert_eq!(
            hits,
            [("abacus".to_string(), 1), ("abacuses".to_string(), 1)]
        );
        assert!(oracle_candidates(&words, "zzzz", 2).is_empty());
        // A huge threshold keeps everything.
        assert_eq!(oracle_candidates(&words, "abacus", 64).len(), words.len());
        assert!(oracle_candidates(&[], "abacus", 3).is_empty());
    }

    #[test]
    fn benchmark_is_audited_and_seed_stable() {
        let words = wl(&[
            "cat", "car", "cart", "dog", "dot", "door", "cold", "colt", "bolt", "bold",
        ]);
        let trie = Fsa::from_words(&words);
        let a = run_benchmark(&trie, &words, "toy", 1, 6, 42, true).unwrap();
        let b = run_benchmark(&trie, &words, "toy", 1, 6, 42, true).unwrap();
        assert_eq!(a.config, b.config);
        assert_eq!(a.machine, b.machine);
        assert_eq!(a.row.avg_query_len, b.row.avg_query_len);
        assert_eq!(a.row.avg_solutions, b.row.avg_solutions);
        assert_eq!(a.row.avg_space_pct, b.row.avg_space_pct);
        // Every damaged query keeps its source within reach, so at least
        // one solution per query.
        assert!(a.row.avg_solutions >= 1.0);
    }

    #[test]
    fn zero_samples_is_an_empty_report() {
        let words = wl(&["cat", "dog"]);
        let trie = Fsa::from_words(&words);
        let report = run_benchmark(&trie, &words, "toy", 1, 0, 1, true).unwrap();
        assert_eq!(report.row.avg_solutions, 0.0);
        assert_eq!(report.row.avg_query_len, 0.0);
    }

    #[test]
    fn oversampling_is_rejected() {
        let words = wl(&["cat"]);
        let trie = Fsa::from_words(&words);
        let err = run_benchmark(&trie, &words, "toy", 1, 2, 1, false).unwrap_err();
        assert!(matches!(
            err,
            Error::NotEnoughWords {
                requested: 2,
                available: 1
            }
        ));
    }

    #[test]
    fn mixed_queries_follow_the_severity_shape() {
        let words: Vec<String> = (0..40)
            .map(|i| format!("word{:02}xyz{}", i, "q".repeat(i % 4 + 1)))
            .collect();
        let queries = synthesize_mixed_queries(&words, 20, 5).unwrap();
        assert_eq!(queries.len(), 20);
        let queries_again = synthesize_mixed_queries(&words, 20, 5).unwrap();
        assert_eq!(queries, queries_again);
    }

    #[test]
    fn mixed_benchmark_reports_the_distance_distribution() {
        let words = wl(&[
            "window", "winter", "wonder", "wander", "winner", "dinner", "banner", "mirror",
            "barrel", "carrot",
        ]);
        let trie = Fsa::from_words(&words);
        let queries = synthesize_mixed_queries(&words, 10, 3).unwrap();
        let report = run_mixed_benchmark(&trie, &queries, 3, Some(&words)).unwrap();
        assert_eq!(report.queries, 10);
        let resolved: usize = report.resolved.iter().map(|&(_, n)| n).sum();
        assert_eq!(resolved + report.unresolved, 10);
        // The spread of damage was 8/1/1, but a damaged word may land
        // closer to some other word, so only the total is exact.
        assert!(report.resolved.iter().all(|&(t, _)| t <= 3));
    }

    #[test]
    fn all_correct_input_resolves_at_zero() {
        let words = wl(&["alpha", "beta", "gamma"]);
        let trie = Fsa::from_words(&words);
        let report = run_mixed_benchmark(&trie, &words, 2, Some(&words)).unwrap();
        assert_eq!(report.resolved, [(0, 3)]);
        assert_eq!(report.unresolved, 0);
    }

    #[test]
    fn renderings_are_stable_apart_from_timing() {
        let words = wl(&["stone", "store", "stole", "shore", "score", "snore"]);
        let trie = Fsa::from_words(&words);
        let mask = |tsv: &str| -> String {
            tsv.lines()
                .map(|line| {
                    let mut fields: Vec<&str> = line.split('\t').collect();
                    if fields[0] == "row" {
                        fields[5] = "-";
                        fields[6] = "-";
                    }
                    if fields[0] == "mixed" {
                        fields[4] = "-";
                        fields[5] = "-";
                    }
                    fields.join("\t")
                })
                .collect::<Vec<_>>()
                .join("\n")
        };
        let a = run_benchmark(&trie, &words, "toy", 2, 4, 11, true).unwrap();
        let b = run_benchmark(&trie, &words, "toy", 2, 4, 11, true).unwrap();
        assert_eq!(mask(&render_report_tsv(&a)), mask(&render_report_tsv(&b)));

        let queries = synthesize_mixed_queries(&words, 5, 11).unwrap();
        let m1 = run_mixed_benchmark(&trie, &queries, 3, None).unwrap();
        let m2 = run_mixed_benchmark(&trie, &queries, 3, None).unwrap();
        assert_eq!(mask(&render_mixed_tsv(&m1)), mask(&render_mixed_tsv(&m2)));
    }
}
