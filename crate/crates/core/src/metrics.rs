//! Byte-accounting memory model and comparison reports.
//!
//! Real allocator footprints depend on the platform, so structures are
//! compared through an explicit cost model instead: a fixed price per node,
//! per child-map entry, per stored character, per reference and per
//! preallocated child slot.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::baselines::{BaselineStats, BuildReport, StructureKind, StructureStats};
use crate::trie::TrieStats;

/// Byte costs used by [`memory_estimate`]. Defaults approximate a 64-bit
/// implementation with one-byte characters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MemoryModel {
    pub node_bytes: u64,
    pub child_entry_bytes: u64,
    pub cell_bytes: u64,
    pub ref_bytes: u64,
    /// Per allocated slot of a native trie's child array.
    pub child_slot_bytes: u64,
}

impl Default for MemoryModel {
    fn default() -> Self {
        MemoryModel {
            node_bytes: 48,
            child_entry_bytes: 24,
            cell_bytes: 1,
            ref_bytes: 8,
            child_slot_bytes: 8,
        }
    }
}

/// The quantities the memory model charges for.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Footprint {
    pub nodes: u64,
    pub empty_nodes: u64,
    pub cells: u64,
    pub child_entries: u64,
    pub refs: u64,
    pub child_slots: u64,
}

impl From<&TrieStats> for Footprint {
    fn from(s: &TrieStats) -> Self {
        Footprint {
            nodes: s.total_nodes as u64,
            empty_nodes: s.empty_nodes as u64,
            cells: s.direct_cells as u64,
            child_entries: s.child_entries as u64,
            refs: s.ref_count as u64,
            child_slots: 0,
        }
    }
}

impl From<&BaselineStats> for Footprint {
    fn from(s: &BaselineStats) -> Self {
        let native = s.kind == StructureKind::Native;
        Footprint {
            nodes: s.total_nodes as u64,
            empty_nodes: 0,
            cells: s.label_cells as u64,
            child_entries: if native { 0 } else { s.child_slots as u64 },
            refs: 0,
            child_slots: if native { s.child_slots as u64 } else { 0 },
        }
    }
}

impl From<&StructureStats> for Footprint {
    fn from(s: &StructureStats) -> Self {
        match s {
            StructureStats::Improved(t) => t.into(),
            StructureStats::Baseline(b) => b.into(),
        }
    }
}

pub fn memory_estimate(footprint: impl Into<Footprint>, model: &MemoryModel) -> u64 {
    let f = footprint.into();
    f.nodes * model.node_bytes
        + f.child_entries * model.child_entry_bytes
        + f.cells * model.cell_bytes
        + f.refs * model.ref_bytes
        + f.child_slots * model.child_slot_bytes
}

/// One line of a comparison report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonRow {
    pub structure: String,
    pub words: u64,
    pub nodes: u64,
    pub empty_nodes: u64,
    pub cells: u64,
    pub child_entries: u64,
    pub refs: u64,
    pub est_bytes: u64,
    pub build_ops: u64,
}

impl ComparisonRow {
    pub fn new(
        kind: StructureKind,
        stats: &StructureStats,
        build: &BuildReport,
        model: &MemoryModel,
    ) -> Self {
        let f = Footprint::from(stats);
        ComparisonRow {
            structure: kind.name().to_string(),
            words: stats.word_count() as u64,
            nodes: f.nodes,
            empty_nodes: f.empty_nodes,
            cells: f.cells,
            child_entries: f.child_entries + f.child_slots,
            refs: f.refs,
            est_bytes: memory_estimate(f, model),
            build_ops: build.total.total(),
        }
    }

    fn fields(&self) -> [String; 9] {
        [
            self.structure.clone(),
            self.words.to_string(),
            self.nodes.to_string(),
            self.empty_nodes.to_string(),
            self.cells.to_string(),
            self.child_entries.to_string(),
            self.refs.to_string(),
            self.est_bytes.to_string(),
            self.build_ops.to_string(),
        ]
    }
}

pub const CSV_COLUMNS: [&str; 9] = [
    "structure",
    "words",
    "nodes",
    "empty_nodes",
    "cells",
    "child_entries",
    "refs",
    "est_bytes",
    "build_ops",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Table,
    Csv,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(ReportFormat::Table),
            "csv" => Ok(ReportFormat::Csv),
            _ => Err(format!("unknown format `{s}` (expected table or csv)")),
        }
    }
}

pub fn compare_report(rows: &[ComparisonRow], format: ReportFormat) -> String {
    let header: Vec<String> = CSV_COLUMNS.iter().map(|s| s.to_string()).collect();
    let body: Vec<[String; 9]> = rows.iter().map(ComparisonRow::fields).collect();
    match format {
        ReportFormat::Csv => {
            let mut out = header.join(",");
            out.push('\n');
            for r in &body {
                out.push_str(&r.join(","));
                out.push('\n');
            }
            out
        }
        ReportFormat::Table => {
            let mut widths: Vec<usize> = header.iter().map(String::len).collect();
            for r in &body {
                for (w, f) in widths.iter_mut().zip(r) {
                    *w = (*w).max(f.len());
                }
            }
            let mut out = String::new();
            let mut line = |cells: &[String]| {
                let mut parts = Vec::with_capacity(cells.len());
                for (i, (c, w)) in cells.iter().zip(&widths).enumerate() {
                    // Name column left-aligned, numbers right-aligned.
                    parts.push(if i == 0 {
                        format!("{c:<w$}")
                    } else {
                        format!("{c:>w$}")
                    });
                }
                let _ = writeln!(out, "{}", parts.join("  ").trim_end());
            };
            line(&header);
            for r in &body {
                line(r);
            }
            out
        }
    }
}

#[derive(Debug, thiserror::Error)]
#[error("bad report line {line}: {reason}")]
pub struct ReportParseError {
    pub line: usize,
    pub reason: String,
}

/// Parses the CSV produced by [`compare_report`].
pub fn parse_csv_report(text: &str) -> Result<Vec<ComparisonRow>, ReportParseError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == CSV_COLUMNS.join(",") => {}
        _ => {
            return Err(ReportParseError {
                line: 1,
                reason: "unexpected header".into(),
            })
        }
    }
    let mut rows = Vec::new();
    for (i, l) in lines {
        let err = |reason: String| ReportParseError {
            line: i + 1,
            reason,
        };
        let f: Vec<&str> = l.split(',').collect();
        if f.len() != CSV_COLUMNS.len() {
            return Err(err(format!(
                "expected {} fields, got {}",
                CSV_COLUMNS.len(),
                f.len()
            )));
        }
        let num = |k: usize| {
            f[k].parse::<u64>()
                .map_err(|e| err(format!("{}: {e}", CSV_COLUMNS[k])))
        };
        rows.push(ComparisonRow {
            structure: f[0].to_string(),
            words: num(1)?,
            nodes: num(2)?,
            empty_nodes: num(3)?,
            cells: num(4)?,
            child_entries: num(5)?,
            refs: num(6)?,
            est_bytes: num(7)?,
            build_ops: num(8)?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trie::Trie;

    #[test]
    fn empty_trie_costs_one_node() {
        let stats = Trie::new().stats();
        assert_eq!(memory_estimate(&stats, &MemoryModel::default()), 48);
    }

    #[test]
    fn formula_by_hand() {
        let f = Footprint {
            nodes: 2,
            child_entries: 1,
            cells: 1,
            ..Default::default()
        };
        assert_eq!(memory_estimate(f, &MemoryModel::default()), 2 * 48 + 24 + 1);
        let native = Footprint {
            nodes: 3,
            child_slots: 384,
            ..Default::default()
        };
        assert_eq!(
            memory_estimate(native, &MemoryModel::default()),
            3 * 48 + 384 * 8
        );
    }

    #[test]
    fn model_overrides_from_json() {
        let m: MemoryModel = serde_json::from_str(r#"{"cell_bytes": 4}"#).unwrap();
        assert_eq!(
            m,
            MemoryModel {
                cell_bytes: 4,
                ..MemoryModel::default()
            }
        );
        assert!(serde_json::from_str::<MemoryModel>(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn single_row_report() {
        let stats = StructureStats::Improved(Trie::new().stats());
        let row = ComparisonRow::new(
            StructureKind::Improved,
            &stats,
            &BuildReport::default(),
            &MemoryModel::default(),
        );
        let csv = compare_report(std::slice::from_ref(&row), ReportFormat::Csv);
        assert_eq!(
            csv,
            "structure,words,nodes,empty_nodes,cells,child_entries,refs,est_bytes,build_ops\n\
             improved,0,1,1,0,0,0,48,0\n"
        );
        assert_eq!(parse_csv_report(&csv).unwrap(), vec![row.clone()]);
        let table = compare_report(&[row], ReportFormat::Table);
        assert_eq!(table.lines().count(), 2);
        assert!(table.starts_with("structure"));
    }

    #[test]
    fn rejects_bad_csv() {
        assert!(parse_csv_report("nope\n").is_err());
        let bad = format!("{}\nimproved,1,2\n", CSV_COLUMNS.join(","));
        assert_eq!(parse_csv_report(&bad).unwrap_err().line, 2);
    }
}
