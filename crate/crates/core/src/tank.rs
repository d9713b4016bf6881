//! Handle-based string interning on top of [`Trie`].
//!
//! Client structures keep a [`TankHandle`] (a node id) instead of the
//! characters. Handles are never invalidated: the trie has no deletion and a
//! node's root path never changes.

use crate::trie::{NodeId, Trie, TrieError, TrieStats};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TankHandle(NodeId);

impl TankHandle {
    pub fn node(self) -> NodeId {
        self.0
    }
}

#[derive(Clone, Debug, Default)]
pub struct Tank {
    trie: Trie,
}

impl Tank {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, word: &str) -> Result<TankHandle, TrieError> {
        self.trie.insert(word).map(TankHandle)
    }

    pub fn resolve(&self, handle: TankHandle) -> Result<String, TrieError> {
        match self.trie.node(handle.0) {
            Some(n) if n.is_word_end() => self.trie.materialize(handle.0),
            _ => Err(TrieError::UnknownHandle(handle.0)),
        }
    }

    /// Handle of an already interned word.
    pub fn lookup(&self, word: &str) -> Option<TankHandle> {
        self.trie.find(word).map(TankHandle)
    }

    pub fn len(&self) -> usize {
        self.trie.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trie.is_empty()
    }

    pub fn stats(&self) -> TrieStats {
        self.trie.stats()
    }

    pub fn trie(&self) -> &Trie {
        &self.trie
    }
}
