use super::{BaselineError, BaselineStats, StructureKind};
use crate::trie::OpCount;

pub const DEFAULT_ALPHABET: usize = 128;

const NONE: u32 = 0;

/// One node per character, each with a full child array over the alphabet.
#[derive(Clone, Debug)]
pub struct NativeTrie {
    alphabet: usize,
    /// Row `n` holds the children of node `n`; `0` marks an empty slot since
    /// the root is never a child.
    slots: Vec<u32>,
    word_end: Vec<bool>,
    words: usize,
}

impl NativeTrie {
    pub fn new(alphabet: usize) -> Self {
        assert!(alphabet > 0, "alphabet must not be empty");
        NativeTrie {
            alphabet,
            slots: vec![NONE; alphabet],
            word_end: vec![false],
            words: 0,
        }
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    fn slot(&self, node: usize, c: char) -> Option<usize> {
        let c = c as usize;
        (c < self.alphabet).then(|| node * self.alphabet + c)
    }

    pub fn insert(&mut self, word: &str) -> Result<OpCount, BaselineError> {
        if word.is_empty() {
            return Err(BaselineError::EmptyWord);
        }
        if let Some(ch) = word.chars().find(|&c| c as usize >= self.alphabet) {
            return Err(BaselineError::AlphabetOverflow {
                ch,
                alphabet: self.alphabet,
            });
        }
        let mut ops = OpCount::default();
        let mut cur = 0usize;
        ops.visit();
        for c in word.chars() {
            ops.step();
            let slot = self.slot(cur, c).expect("checked above");
            cur = match self.slots[slot] {
                NONE => {
                    let id = self.word_end.len();
                    self.word_end.push(false);
                    self.slots.resize(self.slots.len() + self.alphabet, NONE);
                    self.slots[slot] = id as u32;
                    id
                }
                next => next as usize,
            };
            ops.visit();
        }
        if !self.word_end[cur] {
            self.word_end[cur] = true;
            self.words += 1;
        }
        Ok(ops)
    }

    pub fn contains(&self, word: &str) -> (bool, OpCount) {
        let mut ops = OpCount::default();
        let mut cur = 0usize;
        ops.visit();
        for c in word.chars() {
            ops.step();
            match self.slot(cur, c).map(|s| self.slots[s]) {
                Some(NONE) | None => return (false, ops),
                Some(next) => cur = next as usize,
            }
            ops.visit();
        }
        (cur != 0 && self.word_end[cur], ops)
    }

    pub fn stats(&self) -> BaselineStats {
        let nodes = self.word_end.len();
        BaselineStats {
            kind: StructureKind::Native,
            total_nodes: nodes,
            label_cells: 0,
            child_slots: nodes * self.alphabet,
            word_count: self.words,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_letter_word_allocates_three_rows() {
        let mut t = NativeTrie::new(128);
        t.insert("ab").unwrap();
        let s = t.stats();
        assert_eq!(s.total_nodes, 3);
        assert_eq!(s.child_slots, 384);
        assert_eq!(s.label_cells, 0);
    }

    #[test]
    fn empty_native_finds_nothing() {
        let t = NativeTrie::new(DEFAULT_ALPHABET);
        assert!(!t.contains("x").0);
        assert!(!t.contains("").0);
    }

    #[test]
    fn alphabet_overflow() {
        let mut t = NativeTrie::new(128);
        assert!(matches!(
            t.insert("naïve"),
            Err(BaselineError::AlphabetOverflow {
                ch: 'ï',
                alphabet: 128
            })
        ));
        assert_eq!(t.stats().total_nodes, 1);
        assert!(!t.contains("naïve").0);
        let mut wide = NativeTrie::new(256);
        wide.insert("naïve").unwrap();
        assert!(wide.contains("naïve").0);
    }
}
