use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("morphism syntax error on rule {rule}: {message}")]
    Syntax { rule: usize, message: String },

    #[error("duplicate rule for letter '{0}'")]
    DuplicateRule(char),

    #[error("rule for '{rule}' uses undeclared letter '{letter}'")]
    UndeclaredLetter { rule: char, letter: char },

    #[error("image of letter '{0}' is empty")]
    EmptyImage(char),

    #[error("alphabet has {0} letters; at most 255 are supported")]
    AlphabetTooLarge(usize),

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("letter id {letter} is outside an alphabet of size {size}")]
    LetterOutOfRange { letter: u8, size: usize },

    #[error("unknown letter '{0}'")]
    UnknownLetter(char),

    #[error("morphism is not uniform")]
    NotUniform,

    #[error("uniform radius {0} is too small; r >= 2 is required")]
    RadiusTooSmall(usize),

    #[error("morphism is not prolongable on '{0}'")]
    NotProlongable(char),

    #[error("fixed point at '{0}' is finite (image of the seed is the seed itself)")]
    NotGrowing(char),

    #[error("requested length {requested} exceeds the cap of {cap} letters")]
    CapExceeded { requested: u64, cap: u64 },

    #[error("word length {len} is not divisible by k = {k}")]
    NotDivisible { len: usize, k: usize },

    #[error("factor length {n} exceeds word length {len}")]
    FactorTooLong { n: usize, len: usize },

    #[error("word is empty")]
    EmptyWord,

    #[error("pattern does not occur in the examined prefix")]
    NoOccurrence,

    #[error("value did not stabilize before reaching the cap of {cap} letters")]
    NotStabilized { cap: u64 },

    #[error("classification does not meet the hypotheses: {0}")]
    HypothesisFailed(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("prefix cache: {0}")]
    Cache(String),

    #[error("unsupported prefix cache version {0}")]
    UnsupportedVersion(u8),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for errors caused by a resource cap rather than bad input.
    pub fn is_resource_cap(&self) -> bool {
        matches!(
            self,
            Error::CapExceeded { .. } | Error::NotStabilized { .. }
        )
    }
}
