use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("word lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("length {0} is outside the supported range 1..=16")]
    LengthOutOfRange(usize),

    #[error("value {bits:#x} does not fit in {len} bits")]
    WordOverflow { bits: u32, len: usize },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("duplicate codeword {0}")]
    DuplicateWord(String),

    #[error("minimum distance is undefined for a code with fewer than two words")]
    SingletonCode,

    #[error("shortening left no codewords")]
    DegenerateShortening,

    #[error("no best-distance entry for n={n}, k={k}")]
    MissingTableEntry { n: usize, k: usize },

    #[error("level {level} splits into {count} cosets, which is not a power of two")]
    NonPowerOfTwo { level: usize, count: usize },

    #[error("level {level} declares d={declared} but its code has minimum distance {actual}")]
    DistanceMismatch {
        level: usize,
        declared: u32,
        actual: u32,
    },

    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("coset group for inputs {inputs:?} has {got} vectors, expected {expected}")]
    GroupSize {
        inputs: Vec<usize>,
        got: usize,
        expected: usize,
    },

    #[error("map is not a bijection: {0}")]
    NotBijective(String),

    #[error("input has {got} bits, expected {expected}")]
    InputLength { got: usize, expected: usize },

    #[error("kernel dimension {got} exceeds the exact-mode limit of {max}")]
    ExactTooLarge { got: usize, max: usize },

    #[error("synthesized output alphabet reached {size} symbols (cap {cap})")]
    AlphabetExplosion { size: usize, cap: usize },

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
