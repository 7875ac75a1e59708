//! Shared oracles and fixtures for the integration suites.
//!
//! The distance oracle here is deliberately a different algorithm from the
//! library's: it searches over edit scripts defined directly on string
//! suffixes, rather than filling a dynamic-programming matrix, so the two
//! can only agree if both are right.

#![allow(dead_code)]

use std::collections::BTreeSet;

use etrec::{Fsa, Fst};

/// Minimum number of unit edits (insert, delete, replace, swap-adjacent)
/// turning `x` into `y`, found by searching the space of edit scripts with
/// memoization on suffix pairs. A swap consumes the pair from both strings,
/// so nothing can be edited between swapped characters.
pub fn script_distance(x: &str, y: &str) -> usize {
    let x: Vec<char> = x.chars().collect();
    let y: Vec<char> = y.chars().collect();
    let width = y.len() + 1;
    let mut memo = vec![usize::MAX; (x.len() + 1) * width];

    fn search(x: &[char], y: &[char], i: usize, j: usize, memo: &mut [usize], w: usize) -> usize {
        if i == x.len() {
            return y.len() - j;
        }
        if j == y.len() {
            return x.len() - i;
        }
        if memo[i * w + j] != usize::MAX {
            return memo[i * w + j];
        }
        let mut best = 1 + search(x, y, i + 1, j + 1, memo, w); // replace
        if x[i] == y[j] {
            best = best.min(search(x, y, i + 1, j + 1, memo, w)); // match
        }
        best = best.min(1 + search(x, y, i + 1, j, memo, w)); // delete x[i]
        best = best.min(1 + search(x, y, i, j + 1, memo, w)); // insert y[j]
        if i + 1 < x.len() && j + 1 < y.len() && x[i] == y[j + 1] && x[i + 1] == y[j] {
            best = best.min(1 + search(x, y, i + 2, j + 2, memo, w)); // swap pair
        }
        memo[i * w + j] = best;
        best
    }
    search(&x, &y, 0, 0, &mut memo, width)
}

/// The same search with no memo. Exponential; only for cross-checking the
/// memoized version on tiny inputs.
pub fn script_distance_exhaustive(x: &str, y: &str) -> usize {
    fn search(x: &[char], y: &[char]) -> usize {
        if x.is_empty() {
            return y.len();
        }
        if y.is_empty() {
            return x.len();
        }
        let mut best = 1 + search(&x[1..], &y[1..]); // replace
        if x[0] == y[0] {
            best = best.min(search(&x[1..], &y[1..])); // match
        }
        best = best.min(1 + search(&x[1..], y)); // delete
        best = best.min(1 + search(x, &y[1..])); // insert
        if x.len() >= 2 && y.len() >= 2 && x[0] == y[1] && x[1] == y[0] {
            best = best.min(1 + search(&x[2..], &y[2..])); // swap pair
        }
        best
    }
    let x: Vec<char> = x.chars().collect();
    let y: Vec<char> = y.chars().collect();
    search(&x, &y)
}

/// Every string of length at most `max_len` the machine accepts, found by
/// walking all paths. Only for toy machines.
pub fn language_up_to(fsa: &Fsa, max_len: usize) -> BTreeSet<String> {
    fn rec(fsa: &Fsa, state: u32, buf: &mut String, left: usize, out: &mut BTreeSet<String>) {
        if fsa.is_final(state) {
            out.insert(buf.clone());
        }
        if left == 0 {
            return;
        }
        for &(symbol, target) in fsa.arcs_from(state) {
            buf.push(symbol);
            rec(fsa, target, buf, left - 1, out);
            buf.pop();
        }
    }
    let mut out = BTreeSet::new();
    rec(fsa, fsa.start(), &mut String::new(), max_len, &mut out);
    out
}

/// Every (surface, joined gloss) pair with surface length at most `max_len`,
/// by walking all paths. Null-surface arcs cannot cycle, so this terminates.
pub fn transductions_up_to(fst: &Fst, max_len: usize) -> BTreeSet<(String, String)> {
    fn rec(
        fst: &Fst,
        state: u32,
        surface: &mut String,
        surface_left: usize,
        gloss: &mut String,
        out: &mut BTreeSet<(String, String)>,
    ) {
        if fst.is_final(state) {
            out.insert((surface.clone(), gloss.clone()));
        }
        for arc in fst.arcs_from(state) {
            if arc.surface.is_some() && surface_left == 0 {
                continue;
            }
            let surface_len = surface.len();
            let gloss_len = gloss.len();
            if let Some(c) = arc.surface {
                surface.push(c);
            }
            if let Some(token) = &arc.lexical {
                gloss.push_str(token);
            }
            let left = surface_left - usize::from(arc.surface.is_some());
            rec(fst, arc.target, surface, left, gloss, out);
            surface.truncate(surface_len);
            gloss.truncate(gloss_len);
        }
    }
    let mut out = BTreeSet::new();
    rec(
        fst,
        fst.start(),
        &mut String::new(),
        max_len,
        &mut String::new(),
        &mut out,
    );
    out
}

/// Wrap a recognizer as the identity transducer: every arc maps its symbol
/// to itself. Symbols must be representable in the pair format.
pub fn embed_identity(fsa: &Fsa) -> Fst {
    let mut text = format!("fst {} {}\n", fsa.state_count(), fsa.start());
    for state in 0..fsa.state_count() as u32 {
        if fsa.is_final(state) {
            text.push_str(&format!("final {state}\n"));
        }
        for &(symbol, target) in fsa.arcs_from(state) {
            text.push_str(&format!("arc {state} {target} {symbol}:{symbol}\n"));
        }
    }
    Fst::parse(&text).expect("identity embedding is well formed")
}

/// Cyclic five-state machine for (aba|bab)*; start and sole final state 0.
pub const ABA_BAB_STAR: &str = "fsa 5 0\n\
                                final 0\n\
                                arc 0 1 a\n\
                                arc 0 3 b\n\
                                arc 1 2 b\n\
                                arc 2 0 a\n\
                                arc 3 4 a\n\
                                arc 4 0 b\n";

pub fn aba_bab_star() -> Fsa {
    Fsa::parse(ABA_BAB_STAR).expect("fixture parses")
}

/// Small dictionary exercising shared prefixes and a near-miss
/// ("abandone" but not "abandon").
pub const DICTIONARY: [&str; 7] = [
    "abacus",
    "abacuses",
    "abalone",
    "abandone",
    "abandoned",
    "abandoning",
    "access",
];

pub fn dictionary_words() -> Vec<String> {
    DICTIONARY.iter().map(|w| w.to_string()).collect()
}

pub fn dictionary_trie() -> Fsa {
    Fsa::from_words(&DICTIONARY)
}

/// Transducer mapping ab -> ab+N and abs -> ab+N+PL.
pub const NOUN_FST: &str = "fst 5 0\n\
                            final 3\n\
                            final 4\n\
                            arc 0 1 a:a\n\
                            arc 1 2 b:b\n\
                            arc 2 3 \"+N\":0\n\
                            arc 3 4 \"+PL\":s\n";

pub fn noun_fst() -> Fst {
    Fst::parse(NOUN_FST).expect("fixture parses")
}

/// All strings over `alphabet` of length at most `max_len`, shortest first,
/// lexicographic within a length.
pub fn all_strings(alphabet: &[char], max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut last_round: Vec<String> = vec![String::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(last_round.len() * alphabet.len());
        for s in &last_round {
            for &c in alphabet {
                let mut t = s.clone();
                t.push(c);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        last_round = next;
    }
    out
}
