//! A string dictionary built on a radix trie whose edge labels are shared.
//!
//! Instead of storing the characters of an edge label directly, [`Trie`]
//! looks up (or creates) a path from the root that spells the same string and
//! stores a reference to that path's last node. Applied recursively, almost
//! every node ends up holding a reference and no characters at all; only
//! children of the root keep real character cells.
//!
//! ```
//! use affix_trie::Trie;
//!
//! let mut trie = Trie::new();
//! let h = trie.insert("abandon").unwrap();
//! trie.insert("ability").unwrap();
//! trie.insert("abandonility").unwrap();
//!
//! assert!(trie.contains("ability").found);
//! assert!(!trie.contains("abandoni").found);
//! assert_eq!(trie.materialize(h).unwrap(), "abandon");
//! assert!(trie.check_invariants().is_ok());
//! ```
//!
//! Besides the trie itself the crate carries the comparison structures
//! ([`baselines`]), a byte-accounting memory model ([`metrics`]), word-list
//! loading ([`corpus`]) and a handle-based interning facade ([`tank`]).

pub mod baselines;
pub mod corpus;
pub mod metrics;
pub mod tank;
pub mod trie;

pub use baselines::{BaselineError, BaselineStats, Structure, StructureKind};
pub use corpus::{CorpusError, WordList};
pub use metrics::{ComparisonRow, MemoryModel, ReportFormat};
pub use tank::{Tank, TankHandle};
pub use trie::{
    InvariantReport, Label, Lookup, NodeHandle, NodeId, OpCount, Trie, TrieError, TrieStats,
};
