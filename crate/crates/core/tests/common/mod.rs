#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use affix_trie::{NodeId, Trie};
use rand::Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn common_20k() -> PathBuf {
    fixture("common-20k.txt")
}

/// Random word over the first `alphabet` letters of `abcdefgh...`.
pub fn random_word<R: Rng>(rng: &mut R, alphabet: u8, max_len: usize) -> String {
    let len = rng.gen_range(1..=max_len);
    (0..len)
        .map(|_| (b'a' + rng.gen_range(0..alphabet)) as char)
        .collect()
}

/// Root path and parent of every node, keyed by id.
pub type Shadow = BTreeMap<NodeId, (String, Option<NodeId>, String)>;

pub fn shadow(trie: &Trie) -> Shadow {
    trie.nodes()
        .skip(1)
        .map(|n| {
            let id = n.id();
            let path = trie.materialize(id).unwrap();
            let label = trie.resolve_label(id).unwrap();
            (id, (path, n.parent(), label))
        })
        .collect()
}

/// Every node recorded in `before` still spells the same root path, and keeps
/// its resolved label unless it was split (its parent changed).
pub fn stable_since(before: &Shadow, trie: &Trie) -> Result<(), String> {
    for (&id, (path, parent, label)) in before {
        let now = trie
            .materialize(id)
            .map_err(|e| format!("node {id}: {e}"))?;
        if &now != path {
            return Err(format!("node {id}: path {path:?} became {now:?}"));
        }
        let node = trie.node(id).ok_or(format!("node {id} vanished"))?;
        if node.parent() == *parent {
            let now = trie
                .resolve_label(id)
                .map_err(|e| format!("node {id}: {e}"))?;
            if &now != label {
                return Err(format!("node {id}: label {label:?} became {now:?}"));
            }
        } else if !label.ends_with(&trie.resolve_label(id).unwrap()) {
            return Err(format!(
                "node {id}: split label is not a suffix of {label:?}"
            ));
        }
    }
    Ok(())
}
