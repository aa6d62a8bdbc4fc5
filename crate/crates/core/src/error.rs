use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("usage: {0}")]
    Usage(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("{0}")]
    Semantic(String),

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("not loop-type: generator {generator} has {ends} incident arrow ends")]
    NotLoopType { generator: String, ends: usize },

    #[error("unmatched curve segment: {0}")]
    UnmatchedSegment(String),

    #[error("grading mismatch: {0}")]
    GradingMismatch(String),

    #[error("structure theorem violated: {0}")]
    Structure(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("inconsistent input gradings: {0}")]
    PropagationConflict(String),

    #[error("disconnected seed: generator {0} is not reached by grading propagation")]
    DisconnectedSeed(String),

    #[error("unrecognized component: {0}")]
    Unrecognized(String),

    #[error("unsupported pairing: {0}")]
    UnsupportedPairing(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("unknown builtin knot {0:?} (expected unknot, trefoil, figure8 or torus_3_4)")]
    UnknownKnot(String),

    #[error("undefined grading: {0}")]
    UndefinedGrading(String),

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn at_stage(self, stage: &'static str) -> Error {
        Error::Stage { stage, source: Box::new(self) }
    }

    /// The innermost error, skipping stage tags.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            e => e,
        }
    }

    pub fn is_usage(&self) -> bool {
        matches!(self.root(), Error::Usage(_))
    }
}

pub(crate) trait StageExt<T> {
    fn stage(self, stage: &'static str) -> Result<T>;
}

impl<T> StageExt<T> for Result<T> {
    fn stage(self, stage: &'static str) -> Result<T> {
        self.map_err(|e| e.at_stage(stage))
    }
}
