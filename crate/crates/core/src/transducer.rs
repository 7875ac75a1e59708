//! Finite-state transducers over lexical:surface symbol pairs.
//!
//! Each arc carries a lexical side and a surface side; either may be the
//! null symbol, written `0` in the text format, but never both. Surface
//! sides are single characters (they spell the strings being recognized);
//! lexical sides may be multi-character tokens such as `+N`, because glosses
//! are feature sequences rather than spellings.
//!
//! A cycle consisting entirely of null-surface arcs would assign infinitely
//! many glosses to one surface string, so such machines are rejected when
//! loaded.

use std::fmt::Write as _;

use crate::automaton::{parse_count, parse_state, Fsa, StateId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct FstArc {
    /// Gloss token emitted when the arc is taken; `None` is the null symbol.
    pub lexical: Option<String>,
    /// Input character consumed; `None` consumes nothing.
    pub surface: Option<char>,
    pub target: StateId,
}

/// Immutable finite-state transducer.
#[derive(Debug, Clone)]
pub struct Fst {
    start: StateId,
    finals: Vec<bool>,
    /// Arc range of state `s` is `arcs[offsets[s] .. offsets[s + 1]]`.
    offsets: Vec<u32>,
    /// Sorted by (surface, lexical, target) within each state, null surface
    /// first; this fixes the sibling visit order of analyses.
    arcs: Vec<FstArc>,
}

impl Fst {
    fn from_parts(
        start: StateId,
        finals: Vec<bool>,
        mut per_state: Vec<Vec<FstArc>>,
    ) -> Result<Fst> {
        assert_eq!(finals.len(), per_state.len());
        assert!((start as usize) < per_state.len());
        let mut offsets = Vec::with_capacity(per_state.len() + 1);
        let mut arcs = Vec::new();
        offsets.push(0);
        for state_arcs in &mut per_state {
            state_arcs.sort_by(|a, b| {
                (a.surface, &a.lexical, a.target).cmp(&(b.surface, &b.lexical, b.target))
            });
            state_arcs.dedup();
            arcs.append(state_arcs);
            offsets.push(arcs.len() as u32);
        }
        let fst = Fst {
            start,
            finals,
            offsets,
            arcs,
        };
        fst.reject_null_surface_cycles()?;
        Ok(fst)
    }

    /// Parse the FST text format:
    ///
    /// ```text
    /// fst <state_count> <start>
    /// final <state>
    /// arc <src> <dst> <lexical>:<surface>
    /// ```
    ///
    /// Each pair side is one character or `0` for null; the lexical side may
    /// also be a quoted token like `"+N"` (quoted tokens may contain spaces
    /// and `:`). `#` starts a comment line. Errors carry line numbers.
    pub fn parse(text: &str) -> Result<Fst> {
        let mut header: Option<usize> = None;
        let mut start: StateId = 0;
        let mut finals: Vec<bool> = Vec::new();
        let mut per_state: Vec<Vec<FstArc>> = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.trim();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            match fields[0] {
                "fst" => {
                    if header.is_some() {
                        return Err(Error::parse(line, "duplicate header"));
                    }
                    if fields.len() != 3 {
                        return Err(Error::parse(line, "expected `fst <state_count> <start>`"));
                    }
                    let count = parse_count(fields[1], line)?;
                    start = parse_state(fields[2], count, line)?;
                    finals = vec![false; count];
                    per_state = vec![Vec::new(); count];
                    header = Some(count);
                }
                "final" => {
                    let count = header.ok_or_else(|| Error::parse(line, "missing `fst` header"))?;
                    if fields.len() != 2 {
                        return Err(Error::parse(line, "expected `final <state>`"));
                    }
                    let id = parse_state(fields[1], count, line)?;
                    finals[id as usize] = true;
                }
                "arc" => {
                    let count = header.ok_or_else(|| Error::parse(line, "missing `fst` header"))?;
                    // Split positionally: the pair is everything after the
                    // destination, because quoted lexical tokens may contain
                    // spaces.
                    let rest = content["arc".len()..].trim_start();
                    let (src_tok, rest) = split_field(rest);
                    let (dst_tok, pair) = split_field(rest);
                    let pair = pair.trim_end();
                    if src_tok.is_empty() || dst_tok.is_empty() || pair.is_empty() {
                        return Err(Error::parse(
                            line,
                            "expected `arc <src> <dst> <lexical>:<surface>`",
                        ));
                    }
                    let src = parse_state(src_tok, count, line)?;
                    let dst = parse_state(dst_tok, count, line)?;
                    let (lexical, surface) = parse_pair(pair, line)?;
                    if lexical.is_none() && surface.is_none() {
                        return Err(Error::parse(line, "null:null arc"));
                    }
                    per_state[src as usize].push(FstArc {
                        lexical,
                        surface,
                        target: dst,
                    });
                }
                other => {
                    return Err(Error::parse(line, format!("unknown directive {other:?}")));
                }
            }
        }

        if header.is_none() {
            return Err(Error::parse(
                text.lines().count() + 1,
                "missing `fst` header",
            ));
        }
        Fst::from_parts(start, finals, per_state)
    }

    /// Serialize to the text format, deterministically. Inverse of
    /// [`Fst::parse`] up to arc order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "fst {} {}", self.state_count(), self.start).unwrap();
        for (id, _) in self.finals.iter().enumerate().filter(|(_, &f)| f) {
            writeln!(out, "final {id}").unwrap();
        }
        for src in 0..self.state_count() as StateId {
            for arc in self.arcs_from(src) {
                let lexical = match &arc.lexical {
                    None => "0".to_string(),
                    Some(tok) => {
                        let mut cs = tok.chars();
                        let bare = match (cs.next(), cs.next()) {
                            (Some(c), None) => c != '0' && c != '"' && !c.is_whitespace(),
                            _ => false,
                        };
                        if bare {
                            tok.clone()
                        } else {
                            format!("\"{tok}\"")
                        }
                    }
                };
                let surface = match arc.surface {
                    None => '0',
                    Some(c) => {
                        assert!(
                            c != '0' && !c.is_whitespace(),
                            "text format cannot represent this surface symbol"
                        );
                        c
                    }
                };
                writeln!(out, "arc {src} {} {lexical}:{surface}", arc.target).unwrap();
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

    /// Outgoing arcs of `state`, null-surface arcs first, then by surface
    /// character.
    pub fn arcs_from(&self, state: StateId) -> &[FstArc] {
        let s = state as usize;
        &self.arcs[self.offsets[s] as usize..self.offsets[s + 1] as usize]
    }

    /// States reachable from `seeds` through null-surface arcs alone,
    /// including the seeds. Sorted.
    fn null_closure(&self, seeds: &[StateId]) -> Vec<StateId> {
        let mut seen = vec![false; self.state_count()];
        let mut work: Vec<StateId> = Vec::new();
        for &s in seeds {
            if !seen[s as usize] {
                seen[s as usize] = true;
                work.push(s);
            }
        }
        let mut i = 0;
        while i < work.len() {
            let state = work[i];
            i += 1;
            for arc in self.arcs_from(state) {
                if arc.surface.is_none() && !seen[arc.target as usize] {
                    seen[arc.target as usize] = true;
                    work.push(arc.target);
                }
            }
        }
        work.sort_unstable();
        work
    }

    /// Exact surface acceptance: does any path from start to a final state
    /// spell `input`? No distance bookkeeping; null-surface arcs consume
    /// nothing.
    pub fn accepts_surface(&self, input: &str) -> bool {
        let mut current = self.null_closure(&[self.start]);
        for c in input.chars() {
            let mut next: Vec<StateId> = Vec::new();
            for &state in &current {
                for arc in self.arcs_from(state) {
                    if arc.surface == Some(c) && !next.contains(&arc.target) {
                        next.push(arc.target);
                    }
                }
            }
            if next.is_empty() {
                return false;
            }
            current = self.null_closure(&next);
        }
        current.iter().any(|&state| self.is_final(state))
    }

    /// The recognizer of this machine's surface language: null-surface arcs
    /// are treated as epsilon and eliminated by closure-then-copy, lexical
    /// sides are dropped. The result keeps this machine's state ids, may be
    /// nondeterministic, and is not minimized.
    pub fn project_surface(&self) -> Fsa {
        let mut finals = vec![false; self.state_count()];
        let mut per_state: Vec<Vec<(char, StateId)>> = vec![Vec::new(); self.state_count()];
        for state in 0..self.state_count() as StateId {
            for reach in self.null_closure(&[state]) {
                if self.is_final(reach) {
                    finals[state as usize] = true;
                }
                for arc in self.arcs_from(reach) {
                    if let Some(c) = arc.surface {
                        per_state[state as usize].push((c, arc.target));
                    }
                }
            }
        }
        Fsa::from_parts(self.start, finals, per_state)
    }

    /// Fails with the offending cycle if null-surface arcs alone can loop.
    fn reject_null_surface_cycles(&self) -> Result<()> {
        // Iterative coloring DFS on the null-surface subgraph; a back edge
        // into the active path is a cycle, and the path tail names it.
        const WHITE: u8 = 0;
        const GRAY: u8 = 1;
        const BLACK: u8 = 2;
        let mut color = vec![WHITE; self.state_count()];
        let mut path: Vec<StateId> = Vec::new();

        for root in 0..self.state_count() as StateId {
            if color[root as usize] != WHITE {
                continue;
            }
            // Stack of (state, next arc index to try).
            let mut stack: Vec<(StateId, usize)> = vec![(root, 0)];
            color[root as usize] = GRAY;
            path.push(root);
            while let Some(top) = stack.len().checked_sub(1) {
                let (state, mut cursor) = stack[top];
                let arcs = self.arcs_from(state);
                let mut descend: Option<StateId> = None;
                while cursor < arcs.len() {
                    let arc = &arcs[cursor];
                    cursor += 1;
                    if arc.surface.is_some() {
                        continue;
                    }
                    match color[arc.target as usize] {
                        GRAY => {
                            let from = path
                                .iter()
                                .position(|&s| s == arc.target)
                                .expect("gray state is on the path");
                            return Err(Error::NullSurfaceCycle {
                                states: path[from..].to_vec(),
                            });
                        }
                        WHITE => {
                            descend = Some(arc.target);
                            break;
                        }
                        _ => {}
                    }
                }
                stack[top].1 = cursor;
                match descend {
                    Some(child) => {
                        color[child as usize] = GRAY;
                        path.push(child);
                        stack.push((child, 0));
                    }
                    None => {
                        color[state as usize] = BLACK;
                        path.pop();
                        stack.pop();
                    }
                }
            }
        }
        Ok(())
    }
}

/// Next whitespace-separated field and the rest with leading space removed.
fn split_field(s: &str) -> (&str, &str) {
    match s.find(char::is_whitespace) {
        Some(i) => (&s[..i], s[i..].trim_start()),
        None => (s, ""),
    }
}

/// Parse `<lexical>:<surface>`. Unquoted sides are single characters with
/// `0` meaning null, so a literal `0` lexical token must be quoted.
fn parse_pair(pair: &str, line: usize) -> Result<(Option<String>, Option<char>)> {
    let bad = |msg: &str| Error::parse(line, format!("{msg} in pair {pair:?}"));

    let rest;
    let lexical = if let Some(quoted) = pair.strip_prefix('"') {
        let end = quoted.find('"').ok_or_else(|| bad("unterminated quote"))?;
        rest = &quoted[end + 1..];
        let token = &quoted[..end];
        if token.is_empty() {
            return Err(bad("empty lexical token"));
        }
        Some(token.to_string())
    } else {
        let c = pair
            .chars()
            .next()
            .ok_or_else(|| bad("missing lexical side"))?;
        if c.is_whitespace() {
            return Err(bad("whitespace lexical symbol"));
        }
        rest = &pair[c.len_utf8()..];
        if c == '0' {
            None
        } else {
            Some(c.to_string())
        }
    };

    let rest = rest
        .strip_prefix(':')
        .ok_or_else(|| bad("expected `:` between sides"))?;
    let mut chars = rest.chars();
    let surface = match (chars.next(), chars.next()) {
        (Some(c), None) if !c.is_whitespace() => c,
        _ => return Err(bad("surface side must be a single character")),
    };
    Ok((lexical, (surface != '0').then_some(surface)))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// ab -> ab+N, abs -> ab+N+PL.
    fn noun_fst() -> Fst {
        Fst::parse(
            "fst 5 0\n\
             final 3\n\
             final 4\n\
             arc 0 1 a:a\n\
             arc 1 2 b:b\n\
             arc 2 3 \"+N\":0\n\
             arc 3 4 \"+PL\":s\n",
        )
        .unwrap()
    }

    #[test]
    fn parses_and_prints_pairs() {
        let fst = noun_fst();
        assert_eq!(fst.state_count(), 5);
        assert_eq!(fst.arc_count(), 4);
        let text = fst.to_text();
        assert!(text.contains("arc 2 3 \"+N\":0"));
        assert_eq!(Fst::parse(&text).unwrap().to_text(), text);
    }

    #[test]
    fn surface_acceptance_skips_null_arcs() {
        let fst = noun_fst();
        assert!(fst.accepts_surface("ab"));
        assert!(fst.accepts_surface("abs"));
        assert!(!fst.accepts_surface("a"));
        assert!(!fst.accepts_surface("absz"));
    }

    #[test]
    fn both_null_pair_is_rejected() {
        let err = Fst::parse("fst 2 0\narc 0 1 0:0\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("null:null"), "{err}");
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn null_surface_cycle_is_rejected() {
        let err = Fst::parse("fst 2 0\nfinal 1\narc 0 1 x:0\narc 1 0 y:0\n").unwrap_err();
        match err {
            Error::NullSurfaceCycle { states } => {
                assert_eq!(states.len(), 2);
                assert!(states.contains(&0) && states.contains(&1));
            }
            other => panic!("wrong error: {other}"),
        }
        // A self loop is the smallest cycle.
        assert!(matches!(
            Fst::parse("fst 1 0\narc 0 0 x:0\n").unwrap_err(),
            Error::NullSurfaceCycle { .. }
        ));
    }

    #[test]
    fn cycles_through_real_surface_arcs_are_fine() {
        let fst = Fst::parse("fst 2 0\nfinal 0\narc 0 1 x:0\narc 1 0 y:a\n").unwrap();
        assert!(fst.accepts_surface(""));
        assert!(fst.accepts_surface("aa"));
        assert!(!fst.accepts_surface("ab"));
    }

    #[test]
    fn quoted_tokens_may_contain_spaces_and_colons() {
        let fst = Fst::parse("fst 2 0\nfinal 1\narc 0 1 \"(CAT N:OUN)\":x\n").unwrap();
        let arc = &fst.arcs_from(0)[0];
        assert_eq!(arc.lexical.as_deref(), Some("(CAT N:OUN)"));
        assert_eq!(arc.surface, Some('x'));
        let text = fst.to_text();
        assert_eq!(Fst::parse(&text).unwrap().to_text(), text);
    }

    #[test]
    fn pair_parse_errors_name_the_line() {
        let err = |text: &str| Fst::parse(text).unwrap_err().to_string();
        assert!(err("fst 2 0\narc 0 1 a:bc").contains("line 2"));
        assert!(err("fst 2 0\narc 0 1 \"+N\"x").contains("expected `:`"));
        assert!(err("fst 2 0\narc 0 1 \"+N").contains("unterminated"));
        assert!(err("fst 2 0\narc 0 1 \"\":x").contains("empty lexical"));
        assert!(err("fst 2 0\narc 0 1 a").contains("pair"));
    }

    #[test]
    fn projection_of_noun_fst() {
        let fsa = noun_fst().project_surface();
        assert!(fsa.accepts("ab"));
        assert!(fsa.accepts("abs"));
        assert!(!fsa.accepts("abss"));
        assert!(!fsa.accepts(""));
    }

    #[test]
    fn projection_without_nulls_is_label_dropping() {
        let fst = Fst::parse("fst 3 0\nfinal 2\narc 0 1 x:a\narc 1 2 y:b\n").unwrap();
        let fsa = fst.project_surface();
        assert_eq!(fsa.arc_count(), 2);
        assert!(fsa.accepts("ab"));
        assert!(!fsa.accepts("a"));
    }
}
