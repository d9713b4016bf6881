use std::collections::BTreeMap;

use super::{counted_eq, BaselineError, BaselineStats, StructureKind};
use crate::trie::OpCount;

#[derive(Clone, Debug)]
struct RadixNode {
    label: Box<[char]>,
    children: BTreeMap<char, u32>,
    word_end: bool,
}

/// PATRICIA-style radix trie: every edge label is stored in full.
#[derive(Clone, Debug)]
pub struct RadixTrie {
    nodes: Vec<RadixNode>,
    words: usize,
}

impl Default for RadixTrie {
    fn default() -> Self {
        Self::new()
    }
}

impl RadixTrie {
    pub fn new() -> Self {
        RadixTrie {
            nodes: vec![RadixNode {
                label: Box::default(),
                children: BTreeMap::new(),
                word_end: false,
            }],
            words: 0,
        }
    }

    pub fn insert(&mut self, word: &str) -> Result<OpCount, BaselineError> {
        let s: Vec<char> = word.chars().collect();
        if s.is_empty() {
            return Err(BaselineError::EmptyWord);
        }
        let mut ops = OpCount::default();
        let mut cur = 0usize;
        let mut i = 0;
        ops.visit();
        while i < s.len() {
            ops.step();
            let Some(&child) = self.nodes[cur].children.get(&s[i]) else {
                let id = self.push(s[i..].into(), BTreeMap::new(), true);
                self.nodes[cur].children.insert(s[i], id);
                self.words += 1;
                return Ok(ops);
            };
            ops.visit();
            let child = child as usize;
            let m = counted_eq(&self.nodes[child].label, &s[i..], &mut ops);
            if m < self.nodes[child].label.len() {
                // Split at the longest common prefix.
                let label = std::mem::take(&mut self.nodes[child].label);
                self.nodes[child].label = label[m..].into();
                let mid = self.push(
                    label[..m].into(),
                    BTreeMap::from([(label[m], child as u32)]),
                    false,
                );
                self.nodes[cur].children.insert(s[i], mid);
                cur = mid as usize;
            } else {
                cur = child;
            }
            i += m;
        }
        if !self.nodes[cur].word_end {
            self.nodes[cur].word_end = true;
            self.words += 1;
        }
        Ok(ops)
    }

    fn push(&mut self, label: Box<[char]>, children: BTreeMap<char, u32>, word_end: bool) -> u32 {
        self.nodes.push(RadixNode {
            label,
            children,
            word_end,
        });
        (self.nodes.len() - 1) as u32
    }

    pub fn contains(&self, word: &str) -> (bool, OpCount) {
        let s: Vec<char> = word.chars().collect();
        let mut ops = OpCount::default();
        let mut cur = 0usize;
        let mut i = 0;
        ops.visit();
        while i < s.len() {
            ops.step();
            let Some(&child) = self.nodes[cur].children.get(&s[i]) else {
                return (false, ops);
            };
            ops.visit();
            let label = &self.nodes[child as usize].label;
            if label.len() > s.len() - i || counted_eq(label, &s[i..], &mut ops) < label.len() {
                return (false, ops);
            }
            cur = child as usize;
            i += label.len();
        }
        (cur != 0 && self.nodes[cur].word_end, ops)
    }

    pub fn stats(&self) -> BaselineStats {
        BaselineStats {
            kind: StructureKind::Radix,
            total_nodes: self.nodes.len(),
            label_cells: self.nodes.iter().map(|n| n.label.len()).sum(),
            child_slots: self.nodes.iter().map(|n| n.children.len()).sum(),
            word_count: self.words,
        }
    }

    /// Labels of the root's children and their subtrees, depth first, as
    /// `(depth, label, word_end)`. Mostly useful in tests.
    pub fn edges(&self) -> Vec<(usize, String, bool)> {
        let mut out = Vec::new();
        let mut stack: Vec<(usize, usize)> = self.nodes[0]
            .children
            .values()
            .rev()
            .map(|&c| (1, c as usize))
            .collect();
        while let Some((depth, id)) = stack.pop() {
            let n = &self.nodes[id];
            out.push((depth, n.label.iter().collect(), n.word_end));
            stack.extend(n.children.values().rev().map(|&c| (depth + 1, c as usize)));
        }
        out
    }

    /// Every non-root node either ends a word or branches.
    pub fn is_compressed(&self) -> bool {
        self.nodes
            .iter()
            .skip(1)
            .all(|n| n.word_end || n.children.len() != 1)
            && self.nodes.iter().skip(1).all(|n| !n.label.is_empty())
    }
}
