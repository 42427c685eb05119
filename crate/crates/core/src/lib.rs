//! A dynamic keyword dictionary that combines a packed compact trie with a
//! z-fast trie style fat binary search.
//!
//! Keywords are stored once, word-packed, in a [`packed::PackedText`]. The
//! trie is cut into micro tries of `alpha` character depths (`alpha` is the
//! number of characters per 64-bit word). Queries descend between micro
//! tries one word at a time through a hash table, then locate their exit
//! inside the last micro trie with a logarithmic number of hash probes.
//!
//! ```
//! use ctrie::KeywordDictionary;
//!
//! let mut d = KeywordDictionary::new();
//! let id = d.insert(b"brauen").unwrap();
//! assert_eq!(d.locate(b"brauen"), Some(id));
//! assert_eq!(d.locate_prefix(b"bra").count(), 1);
//! ```

pub mod adaptive;
pub mod arena;
pub mod dictionary;
pub mod error;
pub mod micro_trie;
pub mod oracle;
pub mod packed;

pub use adaptive::DictConfig;
pub use dictionary::{
    Config, DictSizes, ExitView, KeywordDictionary, KeywordId, NodeView, OrderMode, PrefixIter,
    SpaceReport,
};
pub use error::{Error, Result};
pub use micro_trie::SearchTrace;
pub use oracle::{oracle_compact_trie_nodes, OracleDict};
pub use packed::{lcp, two_fattest, PackConfig, PackedQuery};
