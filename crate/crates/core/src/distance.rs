//! Edit distance with adjacent transposition, computed column by column.
//!
//! The distance between `x` and `y` is the minimum number of single-character
//! insertions, deletions, substitutions, and swaps of adjacent characters
//! needed to turn `x` into `y`, where each character takes part in at most
//! one swap.
//!
//! [`EditMatrix`] maintains the dynamic-programming matrix for a fixed query
//! against a candidate string that grows and shrinks at its right end. That
//! is exactly the access pattern of a depth-first walk over a recognizer:
//! following an arc pushes one column, backtracking pops it. After each push
//! the matrix reports the cut-off distance, a lower bound on the distance
//! from the query to every string the current candidate can grow into; once
//! it exceeds the threshold the whole subtree is dead.

use std::cmp::min;

/// Distance between two strings, full matrix, no threshold.
///
/// Cell (i, j) holds the distance between the first `i` characters of `x`
/// and the first `j` characters of `y`:
///
/// - boundaries: `H(i, 0) = i`, `H(0, j) = j`
/// - match (`x[i] == y[j]`): `H(i-1, j-1)`
/// - swapped pair (`x[i-1..=i]` equals `y[j-1..=j]` reversed): one plus the
///   least of `H(i-2, j-2)`, `H(i, j-1)`, `H(i-1, j)`
/// - otherwise: one plus the least of `H(i-1, j-1)`, `H(i, j-1)`, `H(i-1, j)`
///
/// Only three columns are live at a time, so the matrix is rolled.
pub fn edit_distance(x: &str, y: &str) -> usize {
    let x: Vec<char> = x.chars().collect();
    let y: Vec<char> = y.chars().collect();
    let m = x.len();
    if y.is_empty() {
        return m;
    }

    // prev2 is read only when j >= 2, by then it holds column j-2.
    let mut prev2: Vec<usize> = vec![0; m + 1];
    let mut prev: Vec<usize> = (0..=m).collect();
    let mut cur: Vec<usize> = vec![0; m + 1];

    for j in 1..=y.len() {
        cur[0] = j;
        for i in 1..=m {
            cur[i] = if x[i - 1] == y[j - 1] {
                prev[i - 1]
            } else if i >= 2 && j >= 2 && x[i - 2] == y[j - 1] && x[i - 1] == y[j - 2] {
                1 + prev2[i - 2].min(prev[i]).min(cur[i - 1])
            } else {
                1 + prev[i - 1].min(prev[i]).min(cur[i - 1])
            };
        }
        std::mem::swap(&mut prev2, &mut prev);
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[m]
}

/// Storage policy for [`EditMatrix`] columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BandMode {
    /// Store only rows within `threshold + 1` of the diagonal. Cells whose
    /// true value could matter (those at most `threshold`) always fall
    /// inside the band, so cut-off and final distances at most `threshold`
    /// are exact and larger reads saturate to `threshold + 1`.
    Banded,
    /// Store every row of every column. All reads are exact.
    Full,
}

/// One stored column of the matrix: rows `lo ..` in order. Reads below `lo`
/// or past the end answer with the caller's sentinel.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Column {
    lo: usize,
    vals: Vec<usize>,
}

fn col_read(col: &Column, i: usize, sentinel: usize) -> usize {
    if i < col.lo {
        return sentinel;
    }
    match col.vals.get(i - col.lo) {
        Some(&v) => v,
        None => sentinel,
    }
}

/// Incremental edit-distance matrix between a fixed query and a growing
/// candidate string.
///
/// Invariant: there is always one column per candidate character plus the
/// boundary column, so `depth()` equals the candidate length. Popped columns
/// are recycled through a pool; equality compares logical state only.
#[derive(Debug)]
pub struct EditMatrix {
    query: Vec<char>,
    threshold: usize,
    mode: BandMode,
    /// Candidate characters, one per pushed column.
    symbols: Vec<char>,
    /// `cols[0]` is the boundary column `H(i, 0) = i`; `cols[j]` the column
    /// for `symbols[j - 1]`.
    cols: Vec<Column>,
    pool: Vec<Column>,
}

impl EditMatrix {
    /// Banded matrix for `query` at `threshold`. The band is what makes the
    /// search cost independent of the query length per column; use
    /// [`BandMode::Full`] only when exact distances above the threshold are
    /// needed.
    pub fn new(query: &str, threshold: usize) -> Self {
        Self::with_mode(query, threshold, BandMode::Banded)
    }

    pub fn with_mode(query: &str, threshold: usize, mode: BandMode) -> Self {
        let query: Vec<char> = query.chars().collect();
        let hi = match mode {
            BandMode::Banded => min(query.len(), threshold + 1),
            BandMode::Full => query.len(),
        };
        let boundary = Column {
            lo: 0,
            vals: (0..=hi).collect(),
        };
        EditMatrix {
            query,
            threshold,
            mode,
            symbols: Vec::new(),
            cols: vec![boundary],
            pool: Vec::new(),
        }
    }

    pub fn query(&self) -> String {
        self.query.iter().collect()
    }

    pub fn query_len(&self) -> usize {
        self.query.len()
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    /// Number of candidate characters currently pushed.
    pub fn depth(&self) -> usize {
        self.symbols.len()
    }

    /// The current candidate string.
    pub fn candidate(&self) -> String {
        self.symbols.iter().collect()
    }

    /// Row range stored for column `n`.
    fn band(&self, n: usize) -> (usize, usize) {
        match self.mode {
            BandMode::Full => (0, self.query.len()),
            BandMode::Banded => (
                n.saturating_sub(self.threshold + 1),
                min(self.query.len(), n + self.threshold + 1),
            ),
        }
    }

    /// Append `symbol` to the candidate, compute its column, and return the
    /// new cut-off distance. A return value above `threshold()` means no
    /// extension of the candidate can match the query; callers should pop.
    pub fn push(&mut self, symbol: char) -> usize {
        self.symbols.push(symbol);
        let n = self.symbols.len();
        let sent = self.threshold + 1;
        let (lo, hi) = self.band(n);

        let mut col = self.pool.pop().unwrap_or_default();
        col.lo = lo;
        col.vals.clear();

        // lo > hi happens only past every useful depth; the empty column
        // makes every read a sentinel and cuted() prunes immediately.
        for i in lo..=hi {
            let v = if i == 0 {
                n
            } else if self.query[i - 1] == self.symbols[n - 1] {
                col_read(&self.cols[n - 1], i - 1, sent)
            } else {
                let up = if i > col.lo {
                    col.vals[i - 1 - col.lo]
                } else {
                    sent
                };
                let diag = if i >= 2
                    && n >= 2
                    && self.query[i - 2] == self.symbols[n - 1]
                    && self.query[i - 1] == self.symbols[n - 2]
                {
                    col_read(&self.cols[n - 2], i - 2, sent)
                } else {
                    col_read(&self.cols[n - 1], i - 1, sent)
                };
                1 + diag.min(col_read(&self.cols[n - 1], i, sent)).min(up)
            };
            col.vals.push(v);
        }
        self.cols.push(col);
        self.cuted()
    }

    /// Drop the last candidate character and its column.
    ///
    /// Panics if the candidate is empty.
    pub fn pop(&mut self) {
        assert!(!self.symbols.is_empty(), "pop on empty candidate");
        self.symbols.pop();
        let col = self.cols.pop().expect("column per symbol");
        self.pool.push(col);
    }

    /// Cut-off distance for the current candidate: the least matrix entry
    /// over rows `max(1, n - t) ..= min(m, n + t)` of the last column.
    /// Entries outside that range are provably above the threshold, except
    /// row 0 for an empty query, which is the only row there is.
    ///
    /// An empty range (candidate more than `m + t` long) or an all-sentinel
    /// band reads as `threshold + 1`.
    pub fn cuted(&self) -> usize {
        let n = self.depth();
        let m = self.query.len();
        let t = self.threshold;
        let lower = if m == 0 {
            0
        } else {
            std::cmp::max(1, n.saturating_sub(t))
        };
        let upper = min(m, n + t);
        if lower > upper {
            return t + 1;
        }
        let col = &self.cols[n];
        (lower..=upper)
            .map(|i| col_read(col, i, t + 1))
            .min()
            .expect("nonempty range")
    }

    /// Distance between the query and the full current candidate. In banded
    /// mode values above the threshold saturate to `threshold + 1`.
    pub fn distance(&self) -> usize {
        let col = &self.cols[self.depth()];
        col_read(col, self.query.len(), self.threshold + 1)
    }
}

impl PartialEq for EditMatrix {
    /// Logical state only; the recycling pool is invisible.
    fn eq(&self, other: &Self) -> bool {
        self.query == other.query
            && self.threshold == other.threshold
            && self.mode == other.mode
            && self.symbols == other.symbols
            && self.cols == other.cols
    }
}
