//! Word-list loading and suffix expansion.

use std::collections::HashSet;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("word list not found: {}", .0.display())]
    FileNotFound(PathBuf),
    #[error("{} is not valid UTF-8 (byte offset {offset})", path.display())]
    NotUtf8 { path: PathBuf, offset: usize },
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

/// Distinct non-empty words in first-occurrence order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WordList {
    words: Vec<String>,
    source: String,
}

impl WordList {
    /// Builds a list from arbitrary strings, dropping empties and repeats.
    pub fn from_words<I, S>(words: I, source: impl Into<String>) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for w in words {
            let w = w.into();
            if !w.is_empty() && seen.insert(w.clone()) {
                out.push(w);
            }
        }
        WordList {
            words: out,
            source: source.into(),
        }
    }

    /// One word per line; trailing whitespace (including `\r`) is trimmed and
    /// blank lines are skipped.
    pub fn parse(text: &str, source: impl Into<String>) -> Self {
        Self::from_words(text.lines().map(str::trim_end), source)
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Total characters over all words (line breaks excluded).
    pub fn total_chars(&self) -> usize {
        self.words.iter().map(|w| w.chars().count()).sum()
    }

    pub fn distinct_chars(&self) -> usize {
        self.words
            .iter()
            .flat_map(|w| w.chars())
            .collect::<HashSet<_>>()
            .len()
    }

    /// The list as file contents, one word per line.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.total_chars() + self.words.len());
        for w in &self.words {
            s.push_str(w);
            s.push('\n');
        }
        s
    }
}

pub fn load_words(path: impl AsRef<Path>) -> Result<WordList, CorpusError> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => CorpusError::FileNotFound(path.to_path_buf()),
        _ => CorpusError::Io {
            path: path.to_path_buf(),
            source: e,
        },
    })?;
    let text = String::from_utf8(bytes).map_err(|e| CorpusError::NotUtf8 {
        path: path.to_path_buf(),
        offset: e.utf8_error().valid_up_to(),
    })?;
    Ok(WordList::parse(&text, path.display().to_string()))
}

/// The original words followed, per suffix, by every word with that suffix
/// appended. Results colliding with earlier entries are dropped.
pub fn expand_corpus<S: AsRef<str>>(words: &WordList, suffixes: &[S]) -> WordList {
    let mut all: Vec<String> = words.words.clone();
    for suffix in suffixes {
        let suffix = suffix.as_ref();
        all.extend(words.words.iter().map(|w| format!("{w}{suffix}")));
    }
    let names: Vec<&str> = suffixes.iter().map(AsRef::as_ref).collect();
    WordList::from_words(all, format!("{}+[{}]", words.source, names.join(",")))
}
