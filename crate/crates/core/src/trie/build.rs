//! Insertion, edge splitting and label deduplication.
//!
//! New and split nodes first receive a provisional `Direct` label and are
//! queued. Draining the queue replaces each provisional label by the first
//! option that works:
//!
//! 1. a one-character label on a root child becomes an `Atom`;
//! 2. otherwise the label string is inserted as a root path and, if that path
//!    ends somewhere other than the node itself without creating a dependency
//!    cycle, the node gets a `Ref` to it (one-character labels land on the
//!    root atom for that character);
//! 3. failing that, the longest proper prefix that already exists as a root
//!    path yields a `RefSuffix`;
//! 4. the provisional `Direct` label stays.
//!
//! Step 2 fails only for children of the root, whose root path *is* their
//! label. Every other node ends up empty.

use super::{Label, Node, NodeId, OpCount, Trie, TrieError};
use std::collections::BTreeMap;

impl Trie {
    /// Inserts `word` and returns its handle. Inserting a word twice returns
    /// the same handle and leaves the trie unchanged.
    pub fn insert(&mut self, word: &str) -> Result<NodeId, TrieError> {
        self.insert_counted(word).map(|(h, _)| h)
    }

    /// Like [`Trie::insert`], also reporting the work spent, including the
    /// deduplication of every label created or split on the way.
    pub fn insert_counted(&mut self, word: &str) -> Result<(NodeId, OpCount), TrieError> {
        let chars = self.checked_chars(word)?;
        let mut ops = OpCount::default();
        let id = self.descend_or_create(&chars, &mut ops);
        self.drain(&mut ops);
        let node = self.n_mut(id);
        if !node.word_end {
            node.word_end = true;
            self.words += 1;
        }
        Ok((id, ops))
    }

    /// Finds or creates the node whose root path spells `s`. Does not mark a
    /// word.
    pub fn insert_path(&mut self, s: &str) -> Result<NodeId, TrieError> {
        let chars = self.checked_chars(s)?;
        let mut ops = OpCount::default();
        let id = self.descend_or_create(&chars, &mut ops);
        self.drain(&mut ops);
        Ok(id)
    }

    /// Re-derives the label of `node`, whose current label must spell
    /// `pending`, and returns the label it ends up with.
    pub fn dedup_label(&mut self, node: NodeId, pending: &str) -> Result<Label, TrieError> {
        let current = self.label_of(node)?;
        if !current.iter().copied().eq(pending.chars()) {
            return Err(TrieError::PendingMismatch(node));
        }
        let n = self.n_mut(node);
        n.label = Some(Label::Direct(current.into()));
        n.pending = true;
        self.queue.push(node);
        self.drain(&mut OpCount::default());
        Ok(self
            .n(node)
            .label
            .clone()
            .expect("non-root node has a label"))
    }

    /// Splits the edge into `node` after `k` characters of its label and
    /// returns the new node that now ends at the split point. `node` keeps
    /// its id, its root path and its children; only its label shrinks.
    pub fn split_node(&mut self, node: NodeId, k: usize) -> Result<NodeId, TrieError> {
        let label = self.label_of(node)?;
        if k == 0 || k >= label.len() {
            return Err(TrieError::BadSplitOffset {
                offset: k,
                len: label.len(),
            });
        }
        let upper = self.split_at(node, k, &label);
        self.drain(&mut OpCount::default());
        Ok(upper)
    }

    fn label_of(&self, node: NodeId) -> Result<Vec<char>, TrieError> {
        let n = self
            .nodes
            .get(node.index())
            .ok_or(TrieError::UnknownHandle(node))?;
        if n.label.is_none() {
            return Err(TrieError::RootHasNoLabel);
        }
        self.label_chars(node)
    }

    fn checked_chars(&self, word: &str) -> Result<Vec<char>, TrieError> {
        let chars: Vec<char> = word.chars().collect();
        if chars.is_empty() {
            return Err(TrieError::EmptyWord);
        }
        if chars.len() > self.max_word_len() {
            return Err(TrieError::WordTooLong {
                len: chars.len(),
                max: self.max_word_len(),
            });
        }
        Ok(chars)
    }

    /// Radix descent along `s`, splitting edges on partial matches and
    /// attaching a new node for any unmatched remainder. New labels are only
    /// queued here, never deduplicated, so this never recurses.
    fn descend_or_create(&mut self, s: &[char], ops: &mut OpCount) -> NodeId {
        let mut cur = NodeId::ROOT;
        ops.visit();
        let mut i = 0;
        let mut buf = Vec::new();
        while i < s.len() {
            ops.step();
            let Some(&child) = self.n(cur).children.get(&s[i]) else {
                return self.attach(cur, &s[i..]);
            };
            buf.clear();
            self.append_label(child, &mut buf, ops)
                .expect("labels resolve while the invariants hold");
            let mut m = 0;
            for (a, b) in buf.iter().zip(&s[i..]) {
                ops.step();
                if a != b {
                    break;
                }
                m += 1;
            }
            cur = if m < buf.len() {
                self.split_at(child, m, &buf)
            } else {
                child
            };
            i += m;
        }
        cur
    }

    fn attach(&mut self, parent: NodeId, rest: &[char]) -> NodeId {
        let id = self.next_id();
        let path_len = self.n(parent).path_len + rest.len() as u32;
        self.nodes.push(Node {
            parent: Some(parent),
            key: Some(rest[0]),
            label: Some(Label::Direct(rest.into())),
            children: BTreeMap::new(),
            word_end: false,
            pending: true,
            label_len: rest.len() as u32,
            path_len,
        });
        self.n_mut(parent).children.insert(rest[0], id);
        self.queue.push(id);
        id
    }

    /// `label` is the resolved label of `node`; `0 < k < label.len()`.
    fn split_at(&mut self, node: NodeId, k: usize, label: &[char]) -> NodeId {
        let upper = self.next_id();
        let (parent, key, path_len) = {
            let n = self.n(node);
            (
                n.parent.expect("the root is never split"),
                n.key.expect("non-root node has a key"),
                n.path_len,
            )
        };
        let rest = (label.len() - k) as u32;
        self.nodes.push(Node {
            parent: Some(parent),
            key: Some(key),
            label: Some(Label::Direct(label[..k].into())),
            children: BTreeMap::from([(label[k], node)]),
            word_end: false,
            pending: true,
            label_len: k as u32,
            path_len: path_len - rest,
        });
        self.n_mut(parent).children.insert(key, upper);
        let n = self.n_mut(node);
        n.parent = Some(upper);
        n.key = Some(label[k]);
        n.label = Some(Label::Direct(label[k..].into()));
        n.label_len = rest;
        n.pending = true;
        self.queue.push(upper);
        self.queue.push(node);
        upper
    }

    fn next_id(&self) -> NodeId {
        let id = u32::try_from(self.nodes.len()).expect("node ids fit in u32");
        NodeId::new(id)
    }

    pub(crate) fn drain(&mut self, ops: &mut OpCount) {
        while let Some(id) = self.queue.pop() {
            if self.n(id).pending {
                self.assign_label(id, ops);
            }
        }
    }

    fn assign_label(&mut self, id: NodeId, ops: &mut OpCount) {
        let pending: Box<[char]> = match &self.n(id).label {
            Some(Label::Direct(cs)) => cs.clone(),
            _ => unreachable!("pending nodes carry a provisional direct label"),
        };
        let root_child = self.n(id).parent == Some(NodeId::ROOT);
        if pending.len() == 1 && root_child {
            let n = self.n_mut(id);
            n.label = Some(Label::Atom(pending[0]));
            n.pending = false;
            return;
        }

        let before = self.n(id).label_len;
        let target = self.descend_or_create(&pending, ops);
        if self.n(id).label_len != before {
            // The descent split this very node; it is queued again with the
            // shorter label.
            return;
        }

        let label = if target != id && !self.depends_on(target, id) {
            Some(Label::Ref(target))
        } else {
            self.longest_prefix_node(&pending, id, ops)
                .map(|(t, p)| Label::RefSuffix(t, pending[p..].into()))
        };
        let n = self.n_mut(id);
        if let Some(label) = label {
            n.label = Some(label);
        }
        n.pending = false;
    }

    /// Deepest existing node whose root path is a proper prefix of `s`, that
    /// `exclude`'s label may reference without forming a cycle.
    fn longest_prefix_node(
        &self,
        s: &[char],
        exclude: NodeId,
        ops: &mut OpCount,
    ) -> Option<(NodeId, usize)> {
        let mut best = None;
        let mut cur = NodeId::ROOT;
        let mut i = 0;
        let mut buf = Vec::new();
        while i < s.len() {
            ops.step();
            let Some(&child) = self.n(cur).children.get(&s[i]) else {
                break;
            };
            let len = self.n(child).label_len as usize;
            if i + len >= s.len() {
                break;
            }
            buf.clear();
            if self.append_label(child, &mut buf, ops).is_err() || buf[..] != s[i..i + len] {
                break;
            }
            cur = child;
            i += len;
            if cur != exclude && !self.depends_on(cur, exclude) {
                best = Some((cur, i));
            }
        }
        best
    }

    /// Whether resolving the root path of `target` needs the label of `node`.
    ///
    /// A reference label is exactly as long as the path it points at, so every
    /// node reachable through dependencies from `u` has a label no longer
    /// than `u`'s. Nodes with labels shorter than `node`'s are pruned.
    pub(crate) fn depends_on(&self, target: NodeId, node: NodeId) -> bool {
        let bound = self.n(node).label_len;
        let mut stack = Vec::new();
        self.push_root_path(target, &mut stack);
        let mut seen = Vec::new();
        while let Some(u) = stack.pop() {
            if u == node {
                return true;
            }
            if self.n(u).label_len < bound || seen.contains(&u) {
                continue;
            }
            seen.push(u);
            if let Some(t) = self.n(u).label.as_ref().and_then(Label::target) {
                self.push_root_path(t, &mut stack);
            }
        }
        false
    }

    fn push_root_path(&self, mut id: NodeId, out: &mut Vec<NodeId>) {
        while let Some(p) = self.n(id).parent {
            out.push(id);
            id = p;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_nodes(trie: &Trie, s: &str) -> Vec<NodeId> {
        trie.nodes()
            .filter(|n| n.id() != NodeId::ROOT && trie.materialize(n.id()).unwrap() == s)
            .map(|n| n.id())
            .collect()
    }

    #[test]
    fn first_insert_stays_direct() {
        let mut trie = Trie::new();
        let h = trie.insert("abandon").unwrap();
        assert_eq!(trie.materialize(h).unwrap(), "abandon");
        assert_eq!(
            trie.node(h).unwrap().label(),
            Some(&Label::Direct("abandon".chars().collect()))
        );
        let stats = trie.stats();
        assert!(stats.direct_cells <= 7);
        assert_eq!(stats.word_count, 1);
    }

    #[test]
    fn ability_references_a_root_path_for_ility() {
        let mut trie = Trie::new();
        trie.insert("abandon").unwrap();
        let h = trie.insert("ability").unwrap();
        let ility = path_nodes(&trie, "ility");
        assert_eq!(ility.len(), 1);
        let label = trie.node(h).unwrap().label().unwrap();
        assert_eq!(label.direct_cells(), 0);
        assert!(label.target().is_some());
        assert_eq!(trie.resolve_label(h).unwrap(), "ility");
        assert!(trie.check_invariants().is_ok());
    }

    #[test]
    fn ility_is_shared_by_two_referrers() {
        let mut trie = Trie::new();
        for w in ["abandon", "ability", "abandonility"] {
            trie.insert(w).unwrap();
        }
        let ility = path_nodes(&trie, "ility");
        assert_eq!(ility.len(), 1);
        let canonical = ility[0];
        let referrers = trie
            .nodes()
            .filter(|n| n.label().and_then(Label::target) == Some(canonical))
            .count();
        assert!(referrers >= 2, "only {referrers} referrers");
        for w in ["abandon", "ability", "abandonility"] {
            assert!(trie.contains(w).found);
        }
        assert!(!trie.contains("abandoni").found);
    }

    #[test]
    fn insert_path_is_find_or_create() {
        let mut trie = Trie::new();
        let a = trie.insert_path("ility").unwrap();
        assert_eq!(trie.materialize(a).unwrap(), "ility");
        let stats = trie.stats();
        let b = trie.insert_path("ility").unwrap();
        assert_eq!(a, b);
        assert_eq!(stats, trie.stats());
        assert_eq!(trie.stats().word_count, 0);
    }

    #[test]
    fn insert_path_splits_existing_edge() {
        let mut trie = Trie::new();
        trie.insert("abandon").unwrap();
        let ab = trie.insert_path("ab").unwrap();
        assert_eq!(trie.materialize(ab).unwrap(), "ab");
        let root = trie.node(NodeId::ROOT).unwrap();
        let a_children: Vec<_> = root.children().filter(|&(c, _)| c == 'a').collect();
        assert_eq!(a_children.len(), 1);
        assert!(trie.contains("abandon").found);
        assert!(trie.check_invariants().is_ok());
    }

    #[test]
    fn single_character_label_refs_root_atom() {
        let mut trie = Trie::new();
        trie.insert("ab").unwrap();
        trie.insert("ac").unwrap();
        // "a" -> {"b", "c"}: both one-character labels below a root child.
        let b = trie.find("ab").unwrap();
        let label = trie.node(b).unwrap().label().unwrap().clone();
        let Label::Ref(t) = label else {
            panic!("expected a ref, got {label:?}")
        };
        assert_eq!(trie.node(t).unwrap().parent(), Some(NodeId::ROOT));
        assert_eq!(trie.node(t).unwrap().label(), Some(&Label::Atom('b')));
    }

    #[test]
    fn split_keeps_paths_and_moves_prefix_up() {
        let mut trie = Trie::new();
        let ab = trie.insert("ab").unwrap();
        assert_eq!(trie.resolve_label(ab).unwrap(), "ab");
        let upper = trie.split_node(ab, 1).unwrap();
        assert_eq!(trie.resolve_label(upper).unwrap(), "a");
        assert_eq!(trie.resolve_label(ab).unwrap(), "b");
        assert_eq!(trie.materialize(ab).unwrap(), "ab");
        assert_eq!(trie.node(ab).unwrap().parent(), Some(upper));
        assert!(trie.node(ab).unwrap().is_word_end());
        assert!(!trie.node(upper).unwrap().is_word_end());
        assert!(trie.check_invariants().is_ok());
    }

    #[test]
    fn split_rejects_bad_offsets() {
        let mut trie = Trie::new();
        let ab = trie.insert("ab").unwrap();
        assert!(matches!(
            trie.split_node(ab, 0),
            Err(TrieError::BadSplitOffset { .. })
        ));
        assert!(matches!(
            trie.split_node(ab, 2),
            Err(TrieError::BadSplitOffset { .. })
        ));
        assert!(matches!(
            trie.split_node(NodeId::ROOT, 1),
            Err(TrieError::RootHasNoLabel)
        ));
    }

    #[test]
    fn refs_survive_split_of_their_target() {
        let mut trie = Trie::new();
        trie.insert("abandon").unwrap();
        trie.insert("ability").unwrap();
        let ability = trie.find("ability").unwrap();
        let ility_label = trie.resolve_label(ability).unwrap();
        let before: Vec<(NodeId, String)> = trie
            .nodes()
            .skip(1)
            .map(|n| (n.id(), trie.materialize(n.id()).unwrap()))
            .collect();
        let referenced: Vec<NodeId> = trie
            .nodes()
            .filter_map(|n| n.label().and_then(Label::target))
            .collect();
        assert!(!referenced.is_empty());
        // Force splits along the referenced path.
        trie.insert("il").unwrap();
        trie.insert("i").unwrap();
        for (id, s) in before {
            assert_eq!(trie.materialize(id).unwrap(), s);
        }
        assert!(trie.contains("ability").found);
        assert_eq!(trie.resolve_label(ability).unwrap(), ility_label);
        assert!(trie.check_invariants().is_ok());
    }

    #[test]
    fn dedup_of_single_char_below_root_child() {
        let mut trie = Trie::new();
        let ab = trie.insert("ab").unwrap();
        let upper = trie.split_node(ab, 1).unwrap();
        assert_eq!(trie.node(upper).unwrap().label(), Some(&Label::Atom('a')));
        let label = trie.dedup_label(ab, "b").unwrap();
        let Label::Ref(t) = label else {
            panic!("expected ref")
        };
        assert_eq!(trie.node(t).unwrap().label(), Some(&Label::Atom('b')));
        assert!(matches!(
            trie.dedup_label(ab, "c"),
            Err(TrieError::PendingMismatch(_))
        ));
    }

    #[test]
    fn reinsert_is_idempotent() {
        let mut trie = Trie::new();
        let a = trie.insert("mother").unwrap();
        trie.insert("moth").unwrap();
        let stats = trie.stats();
        let b = trie.insert("mother").unwrap();
        assert_eq!(a, b);
        assert_eq!(stats, trie.stats());
    }

    #[test]
    fn rejects_empty_and_long_words() {
        let mut trie = Trie::with_max_word_len(4);
        assert!(matches!(trie.insert(""), Err(TrieError::EmptyWord)));
        assert!(matches!(
            trie.insert("abcde"),
            Err(TrieError::WordTooLong { len: 5, max: 4 })
        ));
        assert!(trie.insert("abcd").is_ok());
    }

    #[test]
    fn unicode_words() {
        let mut trie = Trie::new();
        for w in [
            "naïve",
            "naïveté",
            "été",
            "über",
            "überall",
            "日本語",
            "日本",
        ] {
            trie.insert(w).unwrap();
        }
        for w in [
            "naïve",
            "naïveté",
            "été",
            "über",
            "überall",
            "日本語",
            "日本",
        ] {
            assert!(trie.contains(w).found, "{w}");
        }
        assert!(!trie.contains("日").found);
        assert!(trie.check_invariants().is_ok());
    }
}
