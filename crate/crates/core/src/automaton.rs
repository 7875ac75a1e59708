//! Finite-state recognizers: letter-tree construction from word lists and a
//! line-oriented text format for hand-written machines.
//!
//! A recognizer is a 5-tuple (states, alphabet, transitions, start, finals).
//! States are dense integer ids. Arcs are stored in one flat array with a
//! per-state offset table, sorted by symbol within each state, which fixes
//! the sibling visit order of every search. Machines may be cyclic, and
//! machines loaded from text may be nondeterministic; letter trees built by
//! [`Fsa::from_words`] are always deterministic and acyclic.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};

pub type StateId = u32;

/// Immutable finite-state recognizer.
#[derive(Debug, Clone)]
pub struct Fsa {
    start: StateId,
    finals: Vec<bool>,
    /// Arc range of state `s` is `arcs[offsets[s] .. offsets[s + 1]]`.
    offsets: Vec<u32>,
    /// Sorted by (symbol, target) within each state's range.
    arcs: Vec<(char, StateId)>,
}

/// Counting summary of a machine, plus word-list figures when the list the
/// machine was built from is supplied.
#[derive(Debug, Clone, PartialEq)]
pub struct FsaStats {
    pub state_count: usize,
    pub arc_count: usize,
    /// Arcs per state.
    pub fan_out: f64,
    pub word_count: Option<usize>,
    pub avg_word_len: Option<f64>,
    pub max_word_len: Option<usize>,
}

impl Fsa {
    /// Assemble a machine from per-state arc lists. Arcs are sorted by
    /// (symbol, target) and exact duplicates dropped; duplicates change no
    /// language and arise naturally from surface projection.
    pub(crate) fn from_parts(
        start: StateId,
        finals: Vec<bool>,
        mut per_state: Vec<Vec<(char, StateId)>>,
    ) -> Fsa {
        assert_eq!(finals.len(), per_state.len());
        assert!((start as usize) < per_state.len());
        let mut offsets = Vec::with_capacity(per_state.len() + 1);
        let mut arcs = Vec::new();
        offsets.push(0);
        for state_arcs in &mut per_state {
            state_arcs.sort_unstable();
            state_arcs.dedup();
            arcs.extend_from_slice(state_arcs);
            offsets.push(arcs.len() as u32);
        }
        Fsa {
            start,
            finals,
            offsets,
            arcs,
        }
    }

    /// Letter tree of the unique words in `words`: one path per word, shared
    /// prefixes shared, a final flag at each word's last state.
    ///
    /// States are numbered breadth-first from the root, so equal word lists
    /// always produce identical machines.
    pub fn from_words<S: AsRef<str>>(words: &[S]) -> Fsa {
        let mut sorted: Vec<&str> = words.iter().map(|w| w.as_ref()).collect();
        sorted.sort_unstable();
        sorted.dedup();

        struct Node {
            children: Vec<(char, usize)>,
            is_final: bool,
        }
        let mut nodes = vec![Node {
            children: Vec::new(),
            is_final: false,
        }];
        for word in sorted {
            let mut cur = 0usize;
            for c in word.chars() {
                let found = nodes[cur]
                    .children
                    .iter()
                    .find(|&&(sym, _)| sym == c)
                    .map(|&(_, child)| child);
                cur = match found {
                    Some(child) => child,
                    None => {
                        let child = nodes.len();
                        // The word list is sorted, so new symbols arrive in
                        // ascending order and children stay sorted.
                        nodes[cur].children.push((c, child));
                        nodes.push(Node {
                            children: Vec::new(),
                            is_final: false,
                        });
                        child
                    }
                };
            }
            nodes[cur].is_final = true;
        }

        // Renumber breadth-first: tries are traversed shallow-first by every
        // search, so neighbors in id space end up neighbors in memory.
        let mut order = Vec::with_capacity(nodes.len());
        let mut new_id = vec![u32::MAX; nodes.len()];
        let mut queue = VecDeque::new();
        new_id[0] = 0;
        order.push(0usize);
        queue.push_back(0usize);
        while let Some(old) = queue.pop_front() {
            for &(_, child) in &nodes[old].children {
                if new_id[child] == u32::MAX {
                    new_id[child] = order.len() as u32;
                    order.push(child);
                    queue.push_back(child);
                }
            }
        }

        let finals = order.iter().map(|&old| nodes[old].is_final).collect();
        let per_state = order
            .iter()
            .map(|&old| {
                nodes[old]
                    .children
                    .iter()
                    .map(|&(sym, child)| (sym, new_id[child]))
                    .collect()
            })
            .collect();
        let fsa = Fsa::from_parts(0, finals, per_state);
        debug_assert_eq!(fsa.state_count(), fsa.arc_count() + 1, "letter tree");
        fsa
    }

    /// Parse the FSA text format. See [`Fsa::to_text`] for the shape; `#`
    /// starts a comment line and blank lines are ignored. Errors carry the
    /// 1-based line number.
    pub fn parse(text: &str) -> Result<Fsa> {
        let mut header: Option<(usize, StateId)> = None;
        let mut finals: Vec<bool> = Vec::new();
        let mut per_state: Vec<Vec<(char, StateId)>> = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.trim();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            match fields[0] {
                "fsa" => {
                    if header.is_some() {
                        return Err(Error::parse(line, "duplicate header"));
                    }
                    if fields.len() != 3 {
                        return Err(Error::parse(line, "expected `fsa <state_count> <start>`"));
                    }
                    let count = parse_count(fields[1], line)?;
                    let start = parse_state(fields[2], count, line)?;
                    finals = vec![false; count];
                    per_state = vec![Vec::new(); count];
                    header = Some((count, start));
                }
                "final" => {
                    let (count, _) = require_header(&header, line)?;
                    if fields.len() != 2 {
                        return Err(Error::parse(line, "expected `final <state>`"));
                    }
                    let id = parse_state(fields[1], count, line)?;
                    finals[id as usize] = true;
                }
                "arc" => {
                    let (count, _) = require_header(&header, line)?;
                    if fields.len() != 4 {
                        return Err(Error::parse(line, "expected `arc <src> <dst> <symbol>`"));
                    }
                    let src = parse_state(fields[1], count, line)?;
                    let dst = parse_state(fields[2], count, line)?;
                    let symbol = parse_symbol(fields[3], line)?;
                    per_state[src as usize].push((symbol, dst));
                }
                other => {
                    return Err(Error::parse(line, format!("unknown directive {other:?}")));
                }
            }
        }

        let (_, start) = require_header(&header, text.lines().count() + 1)?;
        Ok(Fsa::from_parts(start, finals, per_state))
    }

    /// Serialize to the text format, deterministically:
    ///
    /// ```text
    /// fsa <state_count> <start>
    /// final <state>              # ascending
    /// arc <src> <dst> <symbol>   # by (src, symbol, target)
    /// ```
    ///
    /// Panics on whitespace symbols, which the format cannot represent.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "fsa {} {}", self.state_count(), self.start).unwrap();
        for (id, _) in self.finals.iter().enumerate().filter(|(_, &f)| f) {
            writeln!(out, "final {id}").unwrap();
        }
        for src in 0..self.state_count() as StateId {
            for &(symbol, dst) in self.arcs_from(src) {
                assert!(
                    !symbol.is_whitespace(),
                    "text format cannot represent whitespace symbols"
                );
                writeln!(out, "arc {src} {dst} {symbol}").unwrap();
            }
        }
        out
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn state_count(&self) -> usize {
        self.finals.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_final(&self, state: StateId) -> bool {
        self.finals[state as usize]
    }

    /// Outgoing arcs of `state`, sorted by (symbol, target).
    pub fn arcs_from(&self, state: StateId) -> &[(char, StateId)] {
        let s = state as usize;
        &self.arcs[self.offsets[s] as usize..self.offsets[s + 1] as usize]
    }

    /// Exact membership. Runs the machine as an NFA (loaded machines may
    /// have several arcs per symbol) without any distance bookkeeping.
    pub fn accepts(&self, input: &str) -> bool {
        let mut current: Vec<StateId> = vec![self.start];
        for c in input.chars() {
            let mut next: Vec<StateId> = Vec::new();
            for &state in &current {
                for &(symbol, target) in self.arcs_from(state) {
                    if symbol == c && !next.contains(&target) {
                        next.push(target);
                    }
                }
            }
            if next.is_empty() {
                return false;
            }
            current = next;
        }
        current.iter().any(|&state| self.is_final(state))
    }

    /// Counting summary; pass the source word list to include its figures.
    pub fn stats(&self, words: Option<&[String]>) -> FsaStats {
        let lens: Option<Vec<usize>> =
            words.map(|ws| ws.iter().map(|w| w.chars().count()).collect());
        FsaStats {
            state_count: self.state_count(),
            arc_count: self.arc_count(),
            fan_out: self.arc_count() as f64 / self.state_count() as f64,
            word_count: lens.as_ref().map(Vec::len),
            avg_word_len: lens.as_ref().map(|ls| {
                if ls.is_empty() {
                    0.0
                } else {
                    ls.iter().sum::<usize>() as f64 / ls.len() as f64
                }
            }),
            max_word_len: lens
                .as_ref()
                .map(|ls| ls.iter().copied().max().unwrap_or(0)),
        }
    }
}

fn require_header<T: Copy>(header: &Option<T>, line: usize) -> Result<T> {
    header
        .as_ref()
        .copied()
        .ok_or_else(|| Error::parse(line, "missing `fsa` header"))
}

pub(crate) fn parse_count(token: &str, line: usize) -> Result<usize> {
    let count: usize = token
        .parse()
        .map_err(|_| Error::parse(line, format!("bad state count {token:?}")))?;
    if count == 0 {
        return Err(Error::parse(line, "state count must be positive"));
    }
    Ok(count)
}

pub(crate) fn parse_state(token: &str, state_count: usize, line: usize) -> Result<StateId> {
    let id: u32 = token
        .parse()
        .map_err(|_| Error::parse(line, format!("bad state id {token:?}")))?;
    if id as usize >= state_count {
        return Err(Error::parse(
            line,
            format!("state {id} out of range (machine has {state_count} states)"),
        ));
    }
    Ok(id)
}

pub(crate) fn parse_symbol(token: &str, line: usize) -> Result<char> {
    let mut chars = token.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(Error::parse(
            line,
            format!("symbol must be a single character, got {token:?}"),
        )),
    }
}

/// Parse a word list: UTF-8, one word per line, surrounding whitespace
/// trimmed, blank lines ignored. Interior whitespace and invalid UTF-8 are
/// reported with their line number. Input is bytes so that encoding errors
/// can name the line.
pub fn parse_word_list(bytes: &[u8]) -> Result<Vec<String>> {
    let mut words = Vec::new();
    for (idx, raw) in bytes.split(|&b| b == b'\n').enumerate() {
        let line = idx + 1;
        let raw = raw.strip_suffix(b"\r").unwrap_or(raw);
        let text = std::str::from_utf8(raw).map_err(|_| Error::parse(line, "invalid UTF-8"))?;
        let word = text.trim();
        if word.is_empty() {
            continue;
        }
        if word.chars().any(char::is_whitespace) {
            return Err(Error::parse(
                line,
                format!("word {word:?} contains whitespace"),
            ));
        }
        words.push(word.to_string());
    }
    Ok(words)
}
