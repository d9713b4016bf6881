//! The affix-sharing radix trie.
//!
//! Every non-root node carries a [`Label`]. A label either stores characters
//! itself ([`Label::Atom`], [`Label::Direct`]) or points at another node whose
//! root path spells the label ([`Label::Ref`], [`Label::RefSuffix`]). Labels
//! are assigned by re-inserting the label string as a root-anchored path and
//! referencing its last node, so a string such as `ility` is spelled out once
//! and shared by every edge that needs it.
//!
//! The string spelled by a node's root path never changes once the node
//! exists. Splitting an edge inserts a fresh node *above* the split point, so
//! node ids double as stable handles and references never need repointing.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign};

mod build;
mod check;
mod snapshot;

pub use check::{InvariantCheck, InvariantReport};
pub use snapshot::SNAPSHOT_HEADER;

/// Longest word accepted by [`Trie::insert`] unless configured otherwise.
pub const DEFAULT_MAX_WORD_LEN: usize = 4096;

/// Dense identifier of a node. Ids are never reused; `0` is the root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(u32);

/// Handle returned for an inserted word. It stays valid for the life of the
/// trie and always materializes to the same word.
pub type NodeHandle = NodeId;

impl NodeId {
    pub const ROOT: NodeId = NodeId(0);

    pub fn new(index: u32) -> Self {
        NodeId(index)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// How a node's edge label is represented.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Label {
    /// One stored character. Only found on children of the root.
    Atom(char),
    /// The label is the root path of the target.
    Ref(NodeId),
    /// The root path of the target followed by stored characters.
    RefSuffix(NodeId, Box<[char]>),
    /// Stored characters.
    Direct(Box<[char]>),
}

impl Label {
    /// Number of characters the label stores itself.
    pub fn direct_cells(&self) -> usize {
        match self {
            Label::Atom(_) => 1,
            Label::Ref(_) => 0,
            Label::RefSuffix(_, s) | Label::Direct(s) => s.len(),
        }
    }

    pub fn target(&self) -> Option<NodeId> {
        match self {
            Label::Ref(t) | Label::RefSuffix(t, _) => Some(*t),
            Label::Atom(_) | Label::Direct(_) => None,
        }
    }

    /// A label is empty when it stores no characters of its own.
    pub fn is_empty(&self) -> bool {
        self.direct_cells() == 0
    }
}

/// Work done by a trie operation: nodes entered plus per-character loop steps.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCount {
    pub traversals: u64,
    pub loop_iterations: u64,
}

impl OpCount {
    pub fn total(&self) -> u64 {
        self.traversals + self.loop_iterations
    }

    #[inline]
    pub(crate) fn visit(&mut self) {
        self.traversals += 1;
    }

    #[inline]
    pub(crate) fn step(&mut self) {
        self.loop_iterations += 1;
    }

    #[inline]
    pub(crate) fn steps(&mut self, n: usize) {
        self.loop_iterations += n as u64;
    }
}

impl AddAssign for OpCount {
    fn add_assign(&mut self, rhs: OpCount) {
        self.traversals += rhs.traversals;
        self.loop_iterations += rhs.loop_iterations;
    }
}

impl Add for OpCount {
    type Output = OpCount;

    fn add(mut self, rhs: OpCount) -> OpCount {
        self += rhs;
        self
    }
}

/// Result of a membership query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lookup {
    pub found: bool,
    pub ops: OpCount,
}

/// Structural counts of a trie.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TrieStats {
    pub total_nodes: usize,
    /// Nodes storing no characters, the root included.
    pub empty_nodes: usize,
    pub nonempty_nodes: usize,
    /// Characters stored directly in labels.
    pub direct_cells: usize,
    /// Entries across all child maps.
    pub child_entries: usize,
    /// Labels holding a reference.
    pub ref_count: usize,
    pub word_count: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum TrieError {
    #[error("empty words cannot be inserted")]
    EmptyWord,
    #[error("word of {len} characters exceeds the limit of {max}")]
    WordTooLong { len: usize, max: usize },
    #[error("no node with id {0}")]
    UnknownHandle(NodeId),
    #[error("the root node has no label")]
    RootHasNoLabel,
    #[error("cannot split a label of {len} characters at offset {offset}")]
    BadSplitOffset { offset: usize, len: usize },
    #[error("pending string does not match the current label of node {0}")]
    PendingMismatch(NodeId),
    #[error("label of node {0} cannot be resolved")]
    UnresolvableLabel(NodeId),
    #[error("failed to write snapshot: {0}")]
    SinkWriteFailure(#[source] std::io::Error),
    #[error("malformed snapshot at line {line}: {reason}")]
    MalformedSnapshot { line: usize, reason: String },
    #[error("unsupported snapshot version `{0}`")]
    UnsupportedVersion(String),
}

#[derive(Clone, Debug)]
pub(crate) struct Node {
    pub(crate) parent: Option<NodeId>,
    /// Key under the parent's child map; first character of the label.
    pub(crate) key: Option<char>,
    pub(crate) label: Option<Label>,
    pub(crate) children: BTreeMap<char, NodeId>,
    pub(crate) word_end: bool,
    /// Set while the label is a provisional `Direct` awaiting deduplication.
    pub(crate) pending: bool,
    pub(crate) label_len: u32,
    pub(crate) path_len: u32,
}

impl Node {
    fn root() -> Self {
        Node {
            parent: None,
            key: None,
            label: None,
            children: BTreeMap::new(),
            word_end: false,
            pending: false,
            label_len: 0,
            path_len: 0,
        }
    }
}

/// Read-only view of one node.
#[derive(Clone, Copy)]
pub struct NodeRef<'a> {
    id: NodeId,
    node: &'a Node,
}

impl<'a> NodeRef<'a> {
    pub fn id(&self) -> NodeId {
        self.id
    }

    pub fn parent(&self) -> Option<NodeId> {
        self.node.parent
    }

    pub fn label(&self) -> Option<&'a Label> {
        self.node.label.as_ref()
    }

    pub fn is_word_end(&self) -> bool {
        self.node.word_end
    }

    pub fn children(&self) -> impl Iterator<Item = (char, NodeId)> + 'a {
        self.node.children.iter().map(|(&c, &id)| (c, id))
    }

    pub fn child(&self, key: char) -> Option<NodeId> {
        self.node.children.get(&key).copied()
    }

    /// Length in characters of the resolved label.
    pub fn label_len(&self) -> usize {
        self.node.label_len as usize
    }
}

impl fmt::Debug for NodeRef<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NodeRef")
            .field("id", &self.id)
            .field("parent", &self.node.parent)
            .field("label", &self.node.label)
            .field("word_end", &self.node.word_end)
            .finish()
    }
}

/// The affix-sharing trie. See the module docs for the representation.
#[derive(Clone, Debug)]
pub struct Trie {
    pub(crate) nodes: Vec<Node>,
    pub(crate) words: usize,
    max_word_len: usize,
    /// Nodes whose provisional label still has to be deduplicated.
    pub(crate) queue: Vec<NodeId>,
}

impl Default for Trie {
    fn default() -> Self {
        Self::new()
    }
}

enum Step {
    Label(NodeId),
    Path(NodeId),
    Suffix(NodeId),
    Close,
}

impl Trie {
    pub fn new() -> Self {
        Self::with_max_word_len(DEFAULT_MAX_WORD_LEN)
    }

    pub fn with_max_word_len(max_word_len: usize) -> Self {
        Trie {
            nodes: vec![Node::root()],
            words: 0,
            max_word_len,
            queue: Vec::new(),
        }
    }

    pub fn max_word_len(&self) -> usize {
        self.max_word_len
    }

    /// Number of distinct words inserted.
    pub fn len(&self) -> usize {
        self.words
    }

    pub fn is_empty(&self) -> bool {
        self.words == 0
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node(&self, id: NodeId) -> Option<NodeRef<'_>> {
        self.nodes.get(id.index()).map(|node| NodeRef { id, node })
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeRef<'_>> {
        self.nodes.iter().enumerate().map(|(i, node)| NodeRef {
            id: NodeId(i as u32),
            node,
        })
    }

    /// Handles of all word-end nodes, in id order.
    pub fn word_handles(&self) -> impl Iterator<Item = NodeHandle> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.word_end)
            .map(|(i, _)| NodeId(i as u32))
    }

    pub(crate) fn n(&self, id: NodeId) -> &Node {
        &self.nodes[id.index()]
    }

    pub(crate) fn n_mut(&mut self, id: NodeId) -> &mut Node {
        &mut self.nodes[id.index()]
    }

    /// Membership test with operation counts.
    pub fn contains(&self, word: &str) -> Lookup {
        let chars: Vec<char> = word.chars().collect();
        let mut ops = OpCount::default();
        let found = match self.find_exact(&chars, &mut ops) {
            Some(id) => id != NodeId::ROOT && self.n(id).word_end,
            None => false,
        };
        Lookup { found, ops }
    }

    /// Handle of `word` if it is a member.
    pub fn find(&self, word: &str) -> Option<NodeHandle> {
        let chars: Vec<char> = word.chars().collect();
        let mut ops = OpCount::default();
        self.find_exact(&chars, &mut ops)
            .filter(|&id| id != NodeId::ROOT && self.n(id).word_end)
    }

    /// Node whose root path is exactly `s`, without modifying anything.
    pub(crate) fn find_exact(&self, s: &[char], ops: &mut OpCount) -> Option<NodeId> {
        let mut cur = NodeId::ROOT;
        ops.visit();
        let mut i = 0;
        let mut buf = Vec::new();
        while i < s.len() {
            ops.step();
            let child = *self.n(cur).children.get(&s[i])?;
            let len = self.n(child).label_len as usize;
            if len > s.len() - i {
                return None;
            }
            buf.clear();
            self.append_label(child, &mut buf, ops).ok()?;
            for (a, b) in buf.iter().zip(&s[i..]) {
                ops.step();
                if a != b {
                    return None;
                }
            }
            cur = child;
            i += len;
        }
        Some(cur)
    }

    /// The string a node's label stands for.
    pub fn resolve_label(&self, id: NodeId) -> Result<String, TrieError> {
        let node = self
            .nodes
            .get(id.index())
            .ok_or(TrieError::UnknownHandle(id))?;
        if node.label.is_none() {
            return Err(TrieError::RootHasNoLabel);
        }
        let mut out = Vec::new();
        self.append_label(id, &mut out, &mut OpCount::default())?;
        Ok(out.into_iter().collect())
    }

    /// The string spelled from the root down to `handle`.
    pub fn materialize(&self, handle: NodeHandle) -> Result<String, TrieError> {
        self.materialize_counted(handle).map(|(s, _)| s)
    }

    pub fn materialize_counted(&self, handle: NodeHandle) -> Result<(String, OpCount), TrieError> {
        if handle.index() >= self.nodes.len() {
            return Err(TrieError::UnknownHandle(handle));
        }
        let mut out = Vec::new();
        let mut ops = OpCount::default();
        self.append_path(handle, &mut out, &mut ops)?;
        Ok((out.into_iter().collect(), ops))
    }

    pub(crate) fn label_chars(&self, id: NodeId) -> Result<Vec<char>, TrieError> {
        let mut out = Vec::with_capacity(self.n(id).label_len as usize);
        self.append_label(id, &mut out, &mut OpCount::default())?;
        Ok(out)
    }

    pub(crate) fn append_label(
        &self,
        id: NodeId,
        out: &mut Vec<char>,
        ops: &mut OpCount,
    ) -> Result<(), TrieError> {
        match self.nodes.get(id.index()).and_then(|n| n.label.as_ref()) {
            Some(Label::Atom(c)) => {
                ops.visit();
                ops.step();
                out.push(*c);
                Ok(())
            }
            Some(Label::Direct(cs)) => {
                ops.visit();
                ops.steps(cs.len());
                out.extend_from_slice(cs);
                Ok(())
            }
            _ => self.expand(Step::Label(id), out, ops),
        }
    }

    pub(crate) fn append_path(
        &self,
        id: NodeId,
        out: &mut Vec<char>,
        ops: &mut OpCount,
    ) -> Result<(), TrieError> {
        self.expand(Step::Path(id), out, ops)
    }

    /// Expands labels with an explicit stack. `active` holds the nodes whose
    /// references are currently being expanded; meeting one of them again
    /// means the labels form a cycle.
    fn expand(&self, first: Step, out: &mut Vec<char>, ops: &mut OpCount) -> Result<(), TrieError> {
        let mut stack = vec![first];
        let mut active: Vec<NodeId> = Vec::new();
        while let Some(step) = stack.pop() {
            match step {
                Step::Close => {
                    active.pop();
                }
                Step::Label(id) => {
                    ops.visit();
                    if active.contains(&id) {
                        return Err(TrieError::UnresolvableLabel(id));
                    }
                    let label = self
                        .nodes
                        .get(id.index())
                        .and_then(|n| n.label.as_ref())
                        .ok_or(TrieError::UnresolvableLabel(id))?;
                    match label {
                        Label::Atom(c) => {
                            ops.step();
                            out.push(*c);
                        }
                        Label::Direct(cs) => {
                            ops.steps(cs.len());
                            out.extend_from_slice(cs);
                        }
                        Label::Ref(t) => {
                            active.push(id);
                            stack.push(Step::Close);
                            stack.push(Step::Path(*t));
                        }
                        Label::RefSuffix(t, _) => {
                            active.push(id);
                            stack.push(Step::Close);
                            stack.push(Step::Suffix(id));
                            stack.push(Step::Path(*t));
                        }
                    }
                }
                Step::Suffix(id) => {
                    if let Some(Label::RefSuffix(_, s)) = &self.n(id).label {
                        ops.steps(s.len());
                        out.extend_from_slice(s);
                    }
                }
                Step::Path(target) => {
                    // Push deepest first so the shallowest label pops first.
                    let mut cur = target;
                    let mut hops = 0;
                    loop {
                        let node = self
                            .nodes
                            .get(cur.index())
                            .ok_or(TrieError::UnresolvableLabel(target))?;
                        match node.parent {
                            Some(p) => {
                                stack.push(Step::Label(cur));
                                cur = p;
                            }
                            None if cur == NodeId::ROOT => break,
                            None => return Err(TrieError::UnresolvableLabel(cur)),
                        }
                        hops += 1;
                        if hops > self.nodes.len() {
                            return Err(TrieError::UnresolvableLabel(target));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn stats(&self) -> TrieStats {
        let mut stats = TrieStats {
            total_nodes: self.nodes.len(),
            word_count: self.words,
            ..TrieStats::default()
        };
        for node in &self.nodes {
            let cells = node.label.as_ref().map_or(0, Label::direct_cells);
            if cells == 0 {
                stats.empty_nodes += 1;
            } else {
                stats.nonempty_nodes += 1;
            }
            stats.direct_cells += cells;
            stats.child_entries += node.children.len();
            if node.label.as_ref().and_then(Label::target).is_some() {
                stats.ref_count += 1;
            }
        }
        stats
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn new_trie_has_only_root() {
        let trie = Trie::new();
        let stats = trie.stats();
        assert_eq!(stats.total_nodes, 1);
        assert_eq!(stats.empty_nodes, 1);
        assert_eq!(stats.direct_cells, 0);
        assert_eq!(stats.word_count, 0);
        assert!(!trie.contains("a").found);
        assert!(trie.check_invariants().is_ok());
    }

    #[test]
    fn empty_word_is_never_found() {
        let mut trie = Trie::new();
        trie.insert("ab").unwrap();
        assert!(!trie.contains("").found);
        assert!(!trie.contains("a").found);
    }

    #[test]
    fn root_materializes_to_empty() {
        let trie = Trie::new();
        assert_eq!(trie.materialize(NodeId::ROOT).unwrap(), "");
        assert!(matches!(
            trie.resolve_label(NodeId::ROOT),
            Err(TrieError::RootHasNoLabel)
        ));
        assert!(matches!(
            trie.materialize(NodeId::new(7)),
            Err(TrieError::UnknownHandle(_))
        ));
    }

    #[test]
    fn label_cells() {
        assert_eq!(Label::Atom('a').direct_cells(), 1);
        assert_eq!(Label::Ref(NodeId::new(3)).direct_cells(), 0);
        assert_eq!(
            Label::RefSuffix(NodeId::new(3), vec!['o', 'n'].into()).direct_cells(),
            2
        );
        assert_eq!(Label::Direct(vec!['a', 'b', 'c'].into()).direct_cells(), 3);
    }

    #[test]
    fn ref_suffix_resolves_to_concatenation() {
        // root -> 1 "aband" ; root -> 2 "x" ; 2 -> 3 RefSuffix(1, "on")
        let mut trie = Trie::new();
        let aband = trie.insert_path("aband").unwrap();
        let x = trie.insert_path("x").unwrap();
        let id = NodeId::new(trie.nodes.len() as u32);
        trie.nodes.push(Node {
            parent: Some(x),
            key: Some('a'),
            label: Some(Label::RefSuffix(aband, vec!['o', 'n'].into())),
            children: BTreeMap::new(),
            word_end: true,
            pending: false,
            label_len: 7,
            path_len: 8,
        });
        trie.n_mut(x).children.insert('a', id);
        trie.words += 1;
        assert_eq!(trie.resolve_label(id).unwrap(), "abandon");
        assert_eq!(trie.materialize(id).unwrap(), "xabandon");
        assert!(trie.contains("xabandon").found);
        assert!(
            trie.check_invariants().is_ok(),
            "{}",
            trie.check_invariants()
        );
    }
}
