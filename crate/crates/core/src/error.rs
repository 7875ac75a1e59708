use crate::automaton::StateId;

/// Errors produced by loaders, the perturbation generator, and the
/// benchmark runner.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A malformed line in a machine file or word list.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A transducer whose null-surface arcs form a cycle; such a machine
    /// would assign infinitely many glosses to a single surface string.
    #[error("null-surface cycle through states {states:?}")]
    NullSurfaceCycle { states: Vec<StateId> },

    /// The perturbation generator exhausted its retry budget without
    /// producing a string at the requested exact distance.
    #[error("could not perturb {word:?} to exact distance {distance}")]
    Unperturbable { word: String, distance: usize },

    /// A benchmark requested more sample words than the list provides.
    #[error("sample count {requested} exceeds word list size {available}")]
    NotEnoughWords { requested: usize, available: usize },

    /// Audit mode found searches that disagree with the linear-scan oracle.
    #[error("audit: {mismatches} of {total} queries disagree with the oracle (first: {first:?})")]
    AuditMismatch {
        mismatches: usize,
        total: usize,
        first: String,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
