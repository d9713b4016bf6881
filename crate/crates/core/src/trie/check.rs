use std::collections::BTreeSet;
use std::fmt;

use super::{Label, NodeId, Trie};

/// Outcome of one structural invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantCheck {
    pub name: &'static str,
    pub passed: bool,
    pub offender: Option<NodeId>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InvariantReport {
    pub checks: Vec<InvariantCheck>,
}

impl InvariantReport {
    pub fn is_ok(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&InvariantCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &InvariantCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn record(&mut self, name: &'static str, failure: Option<(NodeId, String)>) {
        let (passed, offender, detail) = match failure {
            None => (true, None, String::new()),
            Some((id, detail)) => (false, Some(id), detail),
        };
        self.checks.push(InvariantCheck {
            name,
            passed,
            offender,
            detail,
        });
    }
}

impl fmt::Display for InvariantReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed { "ok" } else { "FAIL" };
            write!(f, "{status:>4} {}", c.name)?;
            if let Some(id) = c.offender {
                write!(f, " (node {id}: {})", c.detail)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub const ROOT_SHAPE: &str = "root_shape";
pub const TREE_LINKS: &str = "tree_links";
pub const NO_SELF_REFERENCE: &str = "no_self_reference";
pub const DEPENDENCY_ACYCLICITY: &str = "dependency_acyclicity";
pub const LABEL_RESOLUTION: &str = "label_resolution";
pub const RADIX_PROPERTY: &str = "radix_property";
pub const CACHED_LENGTHS: &str = "cached_lengths";
pub const ATOM_GROUNDING: &str = "atom_grounding";
pub const WORD_COUNT: &str = "word_count";
pub const NO_PENDING_LABELS: &str = "no_pending_labels";

impl Trie {
    /// Evaluates every structural invariant. Later checks that need a sound
    /// tree or acyclic labels are reported as failed when an earlier one
    /// already broke.
    pub fn check_invariants(&self) -> InvariantReport {
        let mut report = InvariantReport::default();

        let root = &self.nodes[0];
        let root_fail =
            (root.parent.is_some() || root.label.is_some() || root.word_end).then(|| {
                (
                    NodeId::ROOT,
                    "root has a parent, label or word end".to_string(),
                )
            });
        report.record(ROOT_SHAPE, root_fail);

        let links = self.check_links();
        let links_ok = links.is_none();
        report.record(TREE_LINKS, links);

        let self_ref = self.nodes().find_map(|n| {
            (n.label().and_then(Label::target) == Some(n.id()))
                .then(|| (n.id(), "label references its own node".to_string()))
        });
        report.record(NO_SELF_REFERENCE, self_ref);

        let cycle = if links_ok {
            self.find_dependency_cycle()
                .map(|id| (id, "label dependencies form a cycle".to_string()))
        } else {
            Some((NodeId::ROOT, "tree links broken".to_string()))
        };
        let acyclic = cycle.is_none();
        report.record(DEPENDENCY_ACYCLICITY, cycle);

        let mut labels: Vec<Vec<char>> = vec![Vec::new(); self.nodes.len()];
        let mut resolution = None;
        if acyclic {
            for (i, node) in self.nodes.iter().enumerate().skip(1) {
                let id = NodeId::new(i as u32);
                let empty_owned = match &node.label {
                    Some(Label::Direct(s)) | Some(Label::RefSuffix(_, s)) => s.is_empty(),
                    Some(_) => false,
                    None => true,
                };
                if empty_owned {
                    resolution = Some((id, "missing label or empty stored sequence".into()));
                    break;
                }
                match self.label_chars(id) {
                    Ok(chars) if chars.is_empty() => {
                        resolution = Some((id, "label resolves to the empty string".into()));
                        break;
                    }
                    Ok(chars) => labels[i] = chars,
                    Err(e) => {
                        resolution = Some((id, e.to_string()));
                        break;
                    }
                }
            }
        } else {
            resolution = Some((NodeId::ROOT, "dependencies are cyclic".into()));
        }
        let resolved = resolution.is_none();
        report.record(LABEL_RESOLUTION, resolution);

        let radix = if resolved && links_ok {
            self.nodes.iter().enumerate().skip(1).find_map(|(i, node)| {
                let first = labels[i][0];
                (node.key != Some(first)).then(|| {
                    (
                        NodeId::new(i as u32),
                        format!("key {:?} but label starts with {first:?}", node.key),
                    )
                })
            })
        } else {
            Some((NodeId::ROOT, "labels unavailable".into()))
        };
        report.record(RADIX_PROPERTY, radix);

        let lengths = if resolved && links_ok {
            self.nodes.iter().enumerate().skip(1).find_map(|(i, node)| {
                let parent_len = node.parent.map_or(0, |p| self.n(p).path_len);
                let ok = node.label_len as usize == labels[i].len()
                    && node.path_len == parent_len + node.label_len;
                (!ok).then(|| {
                    (
                        NodeId::new(i as u32),
                        "cached label or path length is stale".into(),
                    )
                })
            })
        } else {
            Some((NodeId::ROOT, "labels unavailable".into()))
        };
        report.record(CACHED_LENGTHS, lengths);

        let mut atoms = 0;
        let mut atom_fail = None;
        for n in self.nodes() {
            if let Some(Label::Atom(_)) = n.label() {
                atoms += 1;
                if n.parent() != Some(NodeId::ROOT) && atom_fail.is_none() {
                    atom_fail = Some((n.id(), "atom below a non-root parent".to_string()));
                }
            }
        }
        if atom_fail.is_none() && resolved {
            let distinct: BTreeSet<char> = labels.iter().flatten().copied().collect();
            if atoms > distinct.len() {
                atom_fail = Some((
                    NodeId::ROOT,
                    format!("{atoms} atoms for {} characters", distinct.len()),
                ));
            }
        }
        report.record(ATOM_GROUNDING, atom_fail);

        let ends = self.nodes.iter().filter(|n| n.word_end).count();
        let words = (ends != self.words).then(|| {
            (
                NodeId::ROOT,
                format!("{ends} word ends but word count {}", self.words),
            )
        });
        report.record(WORD_COUNT, words);

        let pending = self
            .nodes()
            .find(|n| n.node.pending)
            .map(|n| (n.id(), "provisional label left behind".to_string()));
        let pending = pending.or_else(|| {
            (!self.queue.is_empty())
                .then(|| (NodeId::ROOT, "deduplication queue not drained".into()))
        });
        report.record(NO_PENDING_LABELS, pending);

        report
    }

    /// Parent and child-map entries agree, and every node reaches the root.
    fn check_links(&self) -> Option<(NodeId, String)> {
        let count = self.nodes.len();
        for (i, node) in self.nodes.iter().enumerate() {
            let id = NodeId::new(i as u32);
            for (&key, &child) in &node.children {
                let Some(c) = self.nodes.get(child.index()) else {
                    return Some((id, format!("child {child} does not exist")));
                };
                if c.parent != Some(id) || c.key != Some(key) {
                    return Some((
                        child,
                        format!("not linked back to parent {id} under {key:?}"),
                    ));
                }
            }
            if i == 0 {
                continue;
            }
            let Some(parent) = node.parent else {
                return Some((id, "non-root node without parent".into()));
            };
            let listed = self
                .nodes
                .get(parent.index())
                .and_then(|p| node.key.and_then(|k| p.children.get(&k)))
                == Some(&id);
            if !listed {
                return Some((id, format!("missing from the child map of {parent}")));
            }
            let mut cur = parent;
            let mut hops = 0;
            while let Some(p) = self.n(cur).parent {
                cur = p;
                hops += 1;
                if hops > count {
                    return Some((id, "parent chain does not reach the root".into()));
                }
            }
            if cur != NodeId::ROOT {
                return Some((id, "parent chain does not reach the root".into()));
            }
        }
        None
    }

    /// Depth-first search over "label of v needs label of u" for every u on
    /// the root path of v's reference target. Returns a node on a cycle.
    fn find_dependency_cycle(&self) -> Option<NodeId> {
        const WHITE: u8 = 0;
        const GREY: u8 = 1;
        const BLACK: u8 = 2;
        let mut color = vec![WHITE; self.nodes.len()];
        let deps = |v: NodeId| -> Vec<NodeId> {
            let mut out = Vec::new();
            if let Some(t) = self.n(v).label.as_ref().and_then(Label::target) {
                if t.index() >= self.nodes.len() {
                    return out;
                }
                let mut cur = t;
                while let Some(p) = self.n(cur).parent {
                    out.push(cur);
                    cur = p;
                }
            }
            out
        };
        for start in 1..self.nodes.len() {
            if color[start] != WHITE {
                continue;
            }
            let start = NodeId::new(start as u32);
            color[start.index()] = GREY;
            let mut stack = vec![(start, deps(start), 0usize)];
            while let Some((v, edges, next)) = stack.last_mut() {
                if *next == edges.len() {
                    color[v.index()] = BLACK;
                    stack.pop();
                    continue;
                }
                let u = edges[*next];
                *next += 1;
                match color[u.index()] {
                    WHITE => {
                        color[u.index()] = GREY;
                        let e = deps(u);
                        stack.push((u, e, 0));
                    }
                    GREY => return Some(u),
                    _ => {}
                }
            }
        }
        None
    }
}
