//! Line-based text snapshot of a [`Trie`].
//!
//! ```text
//! affix-trie-snapshot v1
//! words 2
//! node 0 parent=- key=- label=- end=0
//! node 1 parent=0 key=61 label=direct:61-62 end=1
//! ```
//!
//! Keys and characters are lowercase hex code points. Labels are
//! `atom:<cp>`, `ref:<id>`, `refsfx:<id>:<cps>` or `direct:<cps>`, where
//! `<cps>` is a dash-separated code point list.

use std::collections::BTreeMap;
use std::io::{self, BufRead, Write};

use super::{Label, Node, NodeId, Trie, TrieError};

pub const SNAPSHOT_HEADER: &str = "affix-trie-snapshot";
const VERSION: &str = "v1";

struct CountingWriter<W> {
    inner: W,
    written: usize,
}

impl<W: Write> Write for CountingWriter<W> {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        let n = self.inner.write(buf)?;
        self.written += n;
        Ok(n)
    }

    fn flush(&mut self) -> io::Result<()> {
        self.inner.flush()
    }
}

fn hex_list(chars: &[char]) -> String {
    let parts: Vec<String> = chars.iter().map(|&c| format!("{:x}", c as u32)).collect();
    parts.join("-")
}

impl Trie {
    /// Writes the snapshot and returns the number of bytes written.
    pub fn export_snapshot<W: Write>(&self, sink: W) -> Result<usize, TrieError> {
        let mut w = CountingWriter {
            inner: sink,
            written: 0,
        };
        self.write_snapshot(&mut w)
            .map_err(TrieError::SinkWriteFailure)?;
        Ok(w.written)
    }

    fn write_snapshot<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "{SNAPSHOT_HEADER} {VERSION}")?;
        writeln!(w, "words {}", self.words)?;
        for (i, node) in self.nodes.iter().enumerate() {
            write!(w, "node {i} parent=")?;
            match node.parent {
                Some(p) => write!(w, "{p}")?,
                None => write!(w, "-")?,
            }
            match node.key {
                Some(k) => write!(w, " key={:x}", k as u32)?,
                None => write!(w, " key=-")?,
            }
            match &node.label {
                None => write!(w, " label=-")?,
                Some(Label::Atom(c)) => write!(w, " label=atom:{:x}", *c as u32)?,
                Some(Label::Ref(t)) => write!(w, " label=ref:{t}")?,
                Some(Label::RefSuffix(t, s)) => write!(w, " label=refsfx:{t}:{}", hex_list(s))?,
                Some(Label::Direct(s)) => write!(w, " label=direct:{}", hex_list(s))?,
            }
            writeln!(w, " end={}", u8::from(node.word_end))?;
        }
        w.flush()
    }

    /// Rebuilds a trie from a snapshot, rejecting anything that does not
    /// describe a trie passing [`Trie::check_invariants`].
    pub fn import_snapshot<R: BufRead>(source: R) -> Result<Trie, TrieError> {
        let mut lines = source.lines().enumerate().map(|(i, l)| (i + 1, l));
        let mut next_line = |what: &str| -> Result<(usize, String), TrieError> {
            match lines.next() {
                Some((n, Ok(text))) => Ok((n, text)),
                Some((n, Err(e))) => Err(malformed(n, format!("unreadable line: {e}"))),
                None => Err(malformed(
                    0,
                    format!("unexpected end of input, expected {what}"),
                )),
            }
        };

        let (_, header) = next_line("header")?;
        match header.split_once(' ') {
            Some((SNAPSHOT_HEADER, VERSION)) => {}
            Some((SNAPSHOT_HEADER, other)) => {
                return Err(TrieError::UnsupportedVersion(other.into()))
            }
            _ => return Err(malformed(1, "missing snapshot header".into())),
        }
        let (_, words_line) = next_line("word count")?;
        let words: usize = words_line
            .strip_prefix("words ")
            .and_then(|n| n.parse().ok())
            .ok_or_else(|| malformed(2, "expected `words <count>`".into()))?;

        let mut nodes: Vec<Node> = Vec::new();
        let mut line_of = Vec::new();
        for (n, text) in std::iter::from_fn(|| lines.next()) {
            let text = text.map_err(|e| malformed(n, format!("unreadable line: {e}")))?;
            if text.is_empty() {
                return Err(malformed(n, "blank line".into()));
            }
            let node = parse_node(&text, nodes.len()).map_err(|reason| malformed(n, reason))?;
            nodes.push(node);
            line_of.push(n);
        }
        if nodes.is_empty() {
            return Err(malformed(3, "missing root record".into()));
        }
        let line_for = |id: NodeId| line_of.get(id.index()).copied().unwrap_or(0);

        let count = nodes.len();
        for (i, node) in nodes.iter().enumerate() {
            let is_root = i == 0;
            if is_root != node.parent.is_none() || is_root != node.label.is_none() {
                return Err(malformed(
                    line_of[i],
                    "only the root may lack a parent or label".into(),
                ));
            }
            let out_of_range = node
                .parent
                .into_iter()
                .chain(node.label.as_ref().and_then(Label::target));
            for id in out_of_range {
                if id.index() >= count {
                    return Err(malformed(
                        line_of[i],
                        format!("reference to missing node {id}"),
                    ));
                }
            }
        }
        for i in 1..count {
            let parent = nodes[i].parent.expect("checked above");
            let key = nodes[i]
                .key
                .ok_or_else(|| malformed(line_of[i], "missing key".into()))?;
            if nodes[parent.index()]
                .children
                .insert(key, NodeId::new(i as u32))
                .is_some()
            {
                return Err(malformed(
                    line_of[i],
                    format!("duplicate key {:x} under {parent}", key as u32),
                ));
            }
        }
        let ends = nodes.iter().filter(|n| n.word_end).count();
        if ends != words {
            return Err(malformed(
                2,
                format!("declared {words} words but {ends} word ends"),
            ));
        }

        let mut trie = Trie::new();
        trie.nodes = nodes;
        trie.words = words;
        trie.recompute_lengths()
            .map_err(|id| malformed(line_for(id), "label cannot be resolved".into()))?;
        let report = trie.check_invariants();
        if let Some(fail) = report.failures().next() {
            let line = fail.offender.map_or(0, line_for);
            return Err(malformed(
                line,
                format!("{} violated: {}", fail.name, fail.detail),
            ));
        }
        Ok(trie)
    }

    /// Fills the cached label and path lengths from the labels themselves.
    fn recompute_lengths(&mut self) -> Result<(), NodeId> {
        for i in 1..self.nodes.len() {
            let id = NodeId::new(i as u32);
            let len = self.label_chars(id).map_err(|_| id)?.len();
            self.nodes[i].label_len = len as u32;
        }
        let count = self.nodes.len();
        let mut done = vec![false; count];
        done[0] = true;
        for i in 1..count {
            let mut chain = Vec::new();
            let mut cur = i;
            while !done[cur] {
                chain.push(cur);
                if chain.len() > count {
                    return Err(NodeId::new(i as u32));
                }
                cur = self.nodes[cur]
                    .parent
                    .ok_or(NodeId::new(cur as u32))?
                    .index();
            }
            for &c in chain.iter().rev() {
                let parent = self.nodes[c].parent.expect("non-root").index();
                self.nodes[c].path_len = self.nodes[parent].path_len + self.nodes[c].label_len;
                done[c] = true;
            }
        }
        Ok(())
    }
}

fn malformed(line: usize, reason: String) -> TrieError {
    TrieError::MalformedSnapshot { line, reason }
}

fn parse_node(text: &str, expected_id: usize) -> Result<Node, String> {
    let mut fields = text.split(' ');
    if fields.next() != Some("node") {
        return Err("expected a node record".into());
    }
    let id: usize = fields
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or("bad node id")?;
    if id != expected_id {
        return Err(format!("expected node {expected_id}, found {id}"));
    }
    let mut field = |name: &str| -> Result<&str, String> {
        fields
            .next()
            .and_then(|f| f.strip_prefix(name))
            .and_then(|f| f.strip_prefix('='))
            .ok_or_else(|| format!("missing `{name}=` field"))
    };
    let parent = match field("parent")? {
        "-" => None,
        p => Some(NodeId::new(
            p.parse().map_err(|_| format!("bad parent `{p}`"))?,
        )),
    };
    let key = match field("key")? {
        "-" => None,
        k => Some(parse_char(k)?),
    };
    let label = match field("label")? {
        "-" => None,
        l => Some(parse_label(l)?),
    };
    let word_end = match field("end")? {
        "0" => false,
        "1" => true,
        e => return Err(format!("bad end flag `{e}`")),
    };
    if fields.next().is_some() {
        return Err("trailing fields".into());
    }
    Ok(Node {
        parent,
        key,
        label,
        children: BTreeMap::new(),
        word_end,
        pending: false,
        label_len: 0,
        path_len: 0,
    })
}

fn parse_char(hex: &str) -> Result<char, String> {
    if hex.is_empty() || hex.len() > 6 || hex.bytes().any(|b| b.is_ascii_uppercase()) {
        return Err(format!("bad code point `{hex}`"));
    }
    u32::from_str_radix(hex, 16)
        .ok()
        .and_then(char::from_u32)
        .ok_or_else(|| format!("bad code point `{hex}`"))
}

fn parse_chars(list: &str) -> Result<Box<[char]>, String> {
    let chars = list
        .split('-')
        .map(parse_char)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(chars.into())
}

fn parse_id(s: &str) -> Result<NodeId, String> {
    s.parse()
        .map(NodeId::new)
        .map_err(|_| format!("bad node id `{s}`"))
}

fn parse_label(desc: &str) -> Result<Label, String> {
    let (kind, rest) = desc
        .split_once(':')
        .ok_or_else(|| format!("bad label `{desc}`"))?;
    match kind {
        "atom" => Ok(Label::Atom(parse_char(rest)?)),
        "ref" => Ok(Label::Ref(parse_id(rest)?)),
        "refsfx" => {
            let (t, s) = rest
                .split_once(':')
                .ok_or_else(|| format!("bad label `{desc}`"))?;
            Ok(Label::RefSuffix(parse_id(t)?, parse_chars(s)?))
        }
        "direct" => Ok(Label::Direct(parse_chars(rest)?)),
        _ => Err(format!("unknown label kind `{kind}`")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn round_trip(trie: &Trie) -> Trie {
        let mut buf = Vec::new();
        let n = trie.export_snapshot(&mut buf).unwrap();
        assert_eq!(n, buf.len());
        Trie::import_snapshot(&buf[..]).unwrap()
    }

    #[test]
    fn empty_trie_snapshot() {
        let mut buf = Vec::new();
        Trie::new().export_snapshot(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "affix-trie-snapshot v1\nwords 0\nnode 0 parent=- key=- label=- end=0\n"
        );
        assert_eq!(round_trip(&Trie::new()).stats(), Trie::new().stats());
    }

    #[test]
    fn round_trip_preserves_stats_and_membership() {
        let mut trie = Trie::new();
        for w in ["abandon", "ability", "abandonility"] {
            trie.insert(w).unwrap();
        }
        let back = round_trip(&trie);
        assert_eq!(back.stats(), trie.stats());
        for w in ["abandon", "ability", "abandonility"] {
            assert!(back.contains(w).found);
        }
        assert!(!back.contains("abandoni").found);
        assert!(back.check_invariants().is_ok());
    }

    #[test]
    fn single_word_format() {
        let mut trie = Trie::new();
        trie.insert("ab").unwrap();
        let mut buf = Vec::new();
        trie.export_snapshot(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "affix-trie-snapshot v1\nwords 1\n\
             node 0 parent=- key=- label=- end=0\n\
             node 1 parent=0 key=61 label=direct:61-62 end=1\n"
        );
    }

    #[test]
    fn rejects_truncated_input() {
        let mut trie = Trie::new();
        for w in ["abandon", "ability", "abandonility"] {
            trie.insert(w).unwrap();
        }
        let mut buf = Vec::new();
        trie.export_snapshot(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let cut = &text[..text.len() - 9];
        assert!(matches!(
            Trie::import_snapshot(cut.as_bytes()),
            Err(TrieError::MalformedSnapshot { .. })
        ));
        let header_only = "affix-trie-snapshot v1\n";
        assert!(matches!(
            Trie::import_snapshot(header_only.as_bytes()),
            Err(TrieError::MalformedSnapshot { .. })
        ));
    }

    #[test]
    fn rejects_unknown_version() {
        let text = "affix-trie-snapshot v2\nwords 0\nnode 0 parent=- key=- label=- end=0\n";
        assert!(matches!(
            Trie::import_snapshot(text.as_bytes()),
            Err(TrieError::UnsupportedVersion(v)) if v == "v2"
        ));
    }

    #[test]
    fn malformed_lines_report_line_numbers() {
        let text = "affix-trie-snapshot v1\nwords 1\nnode 0 parent=- key=- label=- end=0\n\
                    node 1 parent=0 key=61 label=direkt:61 end=1\n";
        match Trie::import_snapshot(text.as_bytes()) {
            Err(TrieError::MalformedSnapshot { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_cyclic_labels() {
        // 1 "a" -> 2 "b"; node 2 refers to itself through its own path.
        let text = "affix-trie-snapshot v1\nwords 1\nnode 0 parent=- key=- label=- end=0\n\
                    node 1 parent=0 key=61 label=atom:61 end=0\n\
                    node 2 parent=1 key=62 label=ref:2 end=1\n";
        assert!(matches!(
            Trie::import_snapshot(text.as_bytes()),
            Err(TrieError::MalformedSnapshot { line: 5, .. })
        ));
    }

    #[test]
    fn rejects_key_mismatch() {
        let text = "affix-trie-snapshot v1\nwords 1\nnode 0 parent=- key=- label=- end=0\n\
                    node 1 parent=0 key=62 label=direct:61-62 end=1\n";
        assert!(matches!(
            Trie::import_snapshot(text.as_bytes()),
            Err(TrieError::MalformedSnapshot { line: 4, .. })
        ));
    }

    #[test]
    fn sink_failure_is_reported() {
        struct Broken;
        impl Write for Broken {
            fn write(&mut self, _: &[u8]) -> io::Result<usize> {
                Err(io::Error::other("disk full"))
            }
            fn flush(&mut self) -> io::Result<()> {
                Ok(())
            }
        }
        assert!(matches!(
            Trie::new().export_snapshot(Broken),
            Err(TrieError::SinkWriteFailure(_))
        ));
    }
}
