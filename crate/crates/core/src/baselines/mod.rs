//! Structures the affix-sharing trie is measured against, plus a common
//! [`Structure`] wrapper so the CLI and benchmarks can treat all four alike.

mod avl;
mod native;
mod radix;

use std::fmt;
use std::str::FromStr;

pub use avl::AvlSet;
pub use native::{NativeTrie, DEFAULT_ALPHABET};
pub use radix::RadixTrie;

use crate::trie::{OpCount, Trie, TrieError, TrieStats};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StructureKind {
    Improved,
    Radix,
    Native,
    Bst,
}

impl StructureKind {
    pub const ALL: [StructureKind; 4] = [
        StructureKind::Improved,
        StructureKind::Radix,
        StructureKind::Native,
        StructureKind::Bst,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StructureKind::Improved => "improved",
            StructureKind::Radix => "radix",
            StructureKind::Native => "native",
            StructureKind::Bst => "bst",
        }
    }
}

impl fmt::Display for StructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StructureKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StructureKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                format!("unknown structure `{s}` (expected improved, radix, native or bst)")
            })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BaselineError {
    #[error("character {ch:?} (U+{:04X}) is outside the alphabet of {alphabet}", *ch as u32)]
    AlphabetOverflow { ch: char, alphabet: usize },
    #[error("empty words cannot be inserted")]
    EmptyWord,
    #[error(transparent)]
    Trie(#[from] TrieError),
}

/// Structural counts of a baseline.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BaselineStats {
    pub kind: StructureKind,
    pub total_nodes: usize,
    /// Characters stored in labels or keys.
    pub label_cells: usize,
    /// Allocated child capacity for the native trie; child links otherwise.
    pub child_slots: usize,
    pub word_count: usize,
}

/// Per-word insertion work over a whole build.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BuildReport {
    pub total: OpCount,
    pub min: u64,
    pub max: u64,
    pub words: usize,
}

impl BuildReport {
    fn record(&mut self, ops: OpCount) {
        let t = ops.total();
        if self.words == 0 {
            self.min = t;
            self.max = t;
        } else {
            self.min = self.min.min(t);
            self.max = self.max.max(t);
        }
        self.total += ops;
        self.words += 1;
    }

    pub fn average(&self) -> f64 {
        if self.words == 0 {
            0.0
        } else {
            self.total.total() as f64 / self.words as f64
        }
    }
}

/// Any of the four compared structures.
#[derive(Clone, Debug)]
pub enum Structure {
    Improved(Trie),
    Radix(RadixTrie),
    Native(NativeTrie),
    Bst(AvlSet),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructureStats {
    Improved(TrieStats),
    Baseline(BaselineStats),
}

impl StructureStats {
    pub fn word_count(&self) -> usize {
        match self {
            StructureStats::Improved(s) => s.word_count,
            StructureStats::Baseline(s) => s.word_count,
        }
    }

    pub fn total_nodes(&self) -> usize {
        match self {
            StructureStats::Improved(s) => s.total_nodes,
            StructureStats::Baseline(s) => s.total_nodes,
        }
    }

    /// Directly stored characters.
    pub fn cells(&self) -> usize {
        match self {
            StructureStats::Improved(s) => s.direct_cells,
            StructureStats::Baseline(s) => s.label_cells,
        }
    }
}

impl Structure {
    pub fn new(kind: StructureKind, alphabet_size: usize) -> Self {
        match kind {
            StructureKind::Improved => Structure::Improved(Trie::new()),
            StructureKind::Radix => Structure::Radix(RadixTrie::new()),
            StructureKind::Native => Structure::Native(NativeTrie::new(alphabet_size)),
            StructureKind::Bst => Structure::Bst(AvlSet::new()),
        }
    }

    /// Builds `kind` over `words`, recording the work of each insertion.
    pub fn build<S: AsRef<str>>(
        kind: StructureKind,
        words: &[S],
        alphabet_size: usize,
    ) -> Result<(Structure, BuildReport), BaselineError> {
        let mut structure = Structure::new(kind, alphabet_size);
        let mut report = BuildReport::default();
        for w in words {
            report.record(structure.insert(w.as_ref())?);
        }
        Ok((structure, report))
    }

    pub fn kind(&self) -> StructureKind {
        match self {
            Structure::Improved(_) => StructureKind::Improved,
            Structure::Radix(_) => StructureKind::Radix,
            Structure::Native(_) => StructureKind::Native,
            Structure::Bst(_) => StructureKind::Bst,
        }
    }

    pub fn insert(&mut self, word: &str) -> Result<OpCount, BaselineError> {
        match self {
            Structure::Improved(t) => Ok(t.insert_counted(word)?.1),
            Structure::Radix(t) => t.insert(word),
            Structure::Native(t) => t.insert(word),
            Structure::Bst(t) => t.insert(word),
        }
    }

    pub fn contains(&self, word: &str) -> (bool, OpCount) {
        match self {
            Structure::Improved(t) => {
                let l = t.contains(word);
                (l.found, l.ops)
            }
            Structure::Radix(t) => t.contains(word),
            Structure::Native(t) => t.contains(word),
            Structure::Bst(t) => t.contains(word),
        }
    }

    pub fn stats(&self) -> StructureStats {
        match self {
            Structure::Improved(t) => StructureStats::Improved(t.stats()),
            Structure::Radix(t) => StructureStats::Baseline(t.stats()),
            Structure::Native(t) => StructureStats::Baseline(t.stats()),
            Structure::Bst(t) => StructureStats::Baseline(t.stats()),
        }
    }
}

/// Character-wise comparison that counts one loop step per compared pair.
pub(crate) fn counted_eq(label: &[char], word: &[char], ops: &mut OpCount) -> usize {
    let mut m = 0;
    for (a, b) in label.iter().zip(word) {
        ops.step();
        if a != b {
            break;
        }
        m += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_names_round_trip() {
        for k in StructureKind::ALL {
            assert_eq!(k.name().parse::<StructureKind>().unwrap(), k);
        }
        assert!("avl".parse::<StructureKind>().is_err());
    }

    #[test]
    fn every_kind_agrees_on_membership() {
        let words = ["abandon", "ability", "abandonility", "ab", "road", "abroad"];
        for kind in StructureKind::ALL {
            let (s, report) = Structure::build(kind, &words, DEFAULT_ALPHABET).unwrap();
            assert_eq!(report.words, words.len());
            assert!(report.min >= 1 && report.min <= report.max);
            for w in words {
                assert!(s.contains(w).0, "{kind} lost {w}");
            }
            for w in ["", "a", "abandoned", "roa", "x"] {
                assert!(!s.contains(w).0, "{kind} invented {w}");
            }
            assert_eq!(s.stats().word_count(), words.len());
        }
    }

    #[test]
    fn empty_words_rejected_everywhere() {
        for kind in StructureKind::ALL {
            let err = Structure::build(kind, &[""], DEFAULT_ALPHABET).unwrap_err();
            assert!(matches!(
                err,
                BaselineError::EmptyWord | BaselineError::Trie(TrieError::EmptyWord)
            ));
        }
    }
}
