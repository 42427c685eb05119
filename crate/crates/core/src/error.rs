use thiserror::Error;

/// Errors raised by the dictionary and its building blocks.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("character {value} is outside the alphabet of size {sigma}")]
    InvalidCharacter { value: u32, sigma: u32 },

    #[error("character index {index} out of range for extent of length {len}")]
    IndexError { index: usize, len: usize },

    #[error("invalid interval [{l}..{r}]")]
    InvalidInterval { l: u64, r: u64 },

    #[error("invalid alphabet size {0}")]
    InvalidAlphabet(u32),

    #[error("node arena is full")]
    ArenaFull,

    #[error("node id {0} is not live")]
    UseAfterFree(u32),

    #[error("node id is the NONE sentinel")]
    NoneId,

    #[error("an entry with the same key is already stored")]
    DuplicateKey,

    #[error("cuckoo table could not place entries after {0} consecutive resizes")]
    SeedFailure(u32),

    #[error("keyword is already present")]
    DuplicateKeyword,

    #[error("node does not carry a keyword")]
    NotAKeyword,

    #[error("keyword not found")]
    NotFound,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
