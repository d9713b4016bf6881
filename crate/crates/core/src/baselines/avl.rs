use std::cmp::Ordering;

use super::{BaselineError, BaselineStats, StructureKind};
use crate::trie::OpCount;

#[derive(Clone, Debug)]
struct AvlNode {
    key: Box<str>,
    left: Option<u32>,
    right: Option<u32>,
    height: u8,
}

/// AVL tree of whole strings; one node per word.
#[derive(Clone, Debug, Default)]
pub struct AvlSet {
    nodes: Vec<AvlNode>,
    root: Option<u32>,
}

fn compare(a: &str, b: &str, ops: &mut OpCount) -> Ordering {
    let mut ai = a.chars();
    let mut bi = b.chars();
    loop {
        ops.step();
        match (ai.next(), bi.next()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) if x != y => return x.cmp(&y),
            _ => {}
        }
    }
}

impl AvlSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn height(&self) -> u8 {
        self.h(self.root)
    }

    fn h(&self, n: Option<u32>) -> u8 {
        n.map_or(0, |i| self.nodes[i as usize].height)
    }

    fn fix(&mut self, n: u32) {
        let (l, r) = (self.nodes[n as usize].left, self.nodes[n as usize].right);
        self.nodes[n as usize].height = 1 + self.h(l).max(self.h(r));
    }

    fn balance(&self, n: u32) -> i16 {
        let node = &self.nodes[n as usize];
        self.h(node.left) as i16 - self.h(node.right) as i16
    }

    fn rotate_right(&mut self, n: u32) -> u32 {
        let l = self.nodes[n as usize].left.expect("left child");
        self.nodes[n as usize].left = self.nodes[l as usize].right;
        self.nodes[l as usize].right = Some(n);
        self.fix(n);
        self.fix(l);
        l
    }

    fn rotate_left(&mut self, n: u32) -> u32 {
        let r = self.nodes[n as usize].right.expect("right child");
        self.nodes[n as usize].right = self.nodes[r as usize].left;
        self.nodes[r as usize].left = Some(n);
        self.fix(n);
        self.fix(r);
        r
    }

    fn rebalance(&mut self, n: u32) -> u32 {
        self.fix(n);
        let b = self.balance(n);
        if b > 1 {
            let l = self.nodes[n as usize].left.expect("left-heavy");
            if self.balance(l) < 0 {
                let nl = self.rotate_left(l);
                self.nodes[n as usize].left = Some(nl);
            }
            return self.rotate_right(n);
        }
        if b < -1 {
            let r = self.nodes[n as usize].right.expect("right-heavy");
            if self.balance(r) > 0 {
                let nr = self.rotate_right(r);
                self.nodes[n as usize].right = Some(nr);
            }
            return self.rotate_left(n);
        }
        n
    }

    pub fn insert(&mut self, word: &str) -> Result<OpCount, BaselineError> {
        if word.is_empty() {
            return Err(BaselineError::EmptyWord);
        }
        let mut ops = OpCount::default();
        let root = self.insert_at(self.root, word, &mut ops);
        self.root = Some(root);
        Ok(ops)
    }

    fn insert_at(&mut self, at: Option<u32>, word: &str, ops: &mut OpCount) -> u32 {
        let Some(n) = at else {
            ops.visit();
            self.nodes.push(AvlNode {
                key: word.into(),
                left: None,
                right: None,
                height: 1,
            });
            return (self.nodes.len() - 1) as u32;
        };
        ops.visit();
        match compare(word, &self.nodes[n as usize].key, ops) {
            Ordering::Equal => return n,
            Ordering::Less => {
                let l = self.insert_at(self.nodes[n as usize].left, word, ops);
                self.nodes[n as usize].left = Some(l);
            }
            Ordering::Greater => {
                let r = self.insert_at(self.nodes[n as usize].right, word, ops);
                self.nodes[n as usize].right = Some(r);
            }
        }
        self.rebalance(n)
    }

    pub fn contains(&self, word: &str) -> (bool, OpCount) {
        let mut ops = OpCount::default();
        let mut cur = self.root;
        while let Some(n) = cur {
            ops.visit();
            let node = &self.nodes[n as usize];
            cur = match compare(word, &node.key, &mut ops) {
                Ordering::Equal => return (true, ops),
                Ordering::Less => node.left,
                Ordering::Greater => node.right,
            };
        }
        (false, ops)
    }

    pub fn stats(&self) -> BaselineStats {
        BaselineStats {
            kind: StructureKind::Bst,
            total_nodes: self.nodes.len(),
            label_cells: self.nodes.iter().map(|n| n.key.chars().count()).sum(),
            child_slots: self.nodes.len().saturating_sub(1),
            word_count: self.nodes.len(),
        }
    }

    /// Keys in order; checks the search-tree order and AVL balance on the way.
    pub fn check(&self) -> Result<Vec<String>, String> {
        fn walk(set: &AvlSet, n: Option<u32>, out: &mut Vec<String>) -> Result<u8, String> {
            let Some(i) = n else { return Ok(0) };
            let node = &set.nodes[i as usize];
            let lh = walk(set, node.left, out)?;
            out.push(node.key.to_string());
            let rh = walk(set, node.right, out)?;
            if lh.abs_diff(rh) > 1 || node.height != 1 + lh.max(rh) {
                return Err(format!("unbalanced at {:?}", node.key));
            }
            Ok(node.height)
        }
        let mut out = Vec::new();
        walk(self, self.root, &mut out)?;
        if out.windows(2).any(|w| w[0] >= w[1]) {
            return Err("keys out of order".into());
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_words() {
        let mut t = AvlSet::new();
        t.insert("a").unwrap();
        t.insert("b").unwrap();
        let s = t.stats();
        assert_eq!((s.total_nodes, s.label_cells), (2, 2));
    }

    #[test]
    fn membership_and_balance() {
        let mut t = AvlSet::new();
        t.insert("abandon").unwrap();
        assert!(t.contains("abandon").0);
        assert!(!t.contains("abandoned").0);
        for i in 0..1000 {
            t.insert(&format!("w{i:04}")).unwrap();
        }
        t.insert("abandon").unwrap();
        assert_eq!(t.len(), 1001);
        assert!(t.height() <= 15);
        assert_eq!(t.check().unwrap().len(), 1001);
    }
}
