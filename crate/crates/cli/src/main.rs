use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use affix_trie::baselines::{BuildReport, Structure, DEFAULT_ALPHABET};
use affix_trie::corpus::{expand_corpus, load_words};
use affix_trie::metrics::compare_report;
use affix_trie::{ComparisonRow, MemoryModel, ReportFormat, StructureKind, Trie, WordList};
use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

/// Build, query and compare affix-sharing tries.
#[derive(Parser)]
#[command(name = "affix-trie", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a trie from a word list and write a snapshot.
    Build {
        #[arg(long)]
        input: PathBuf,
        /// Only `improved` can be snapshotted.
        #[arg(long, default_value = "improved")]
        structure: StructureKind,
        #[arg(long)]
        snapshot: PathBuf,
    },
    /// Look a word up in a snapshot. Exits 0 when found, 2 when not.
    Query {
        #[arg(long)]
        snapshot: PathBuf,
        /// Print operation counts.
        #[arg(long)]
        ops: bool,
        word: String,
    },
    /// Print one comparison row for a structure.
    Stats {
        #[arg(long, default_value = "improved")]
        structure: StructureKind,
        /// Append-suffix expansion of the corpus: `none`, `1` or `1,2`.
        #[arg(long, default_value = "none")]
        expand: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Build several structures on one corpus and compare them.
    Bench {
        /// Comma-separated list of at least two structures.
        #[arg(long, value_delimiter = ',', required = true)]
        structures: Vec<StructureKind>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args)]
struct CommonArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "table")]
    format: ReportFormat,
    /// Child-array width of the native trie.
    #[arg(long, default_value_t = DEFAULT_ALPHABET)]
    alphabet: usize,
    /// JSON file overriding memory-model byte costs.
    #[arg(long)]
    memory_model: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Build {
            input,
            structure,
            snapshot,
        } => build(&input, structure, &snapshot),
        Command::Query {
            snapshot,
            ops,
            word,
        } => query(&snapshot, ops, &word),
        Command::Stats {
            structure,
            expand,
            common,
        } => stats(structure, &expand, &common),
        Command::Bench { structures, common } => bench(&structures, &common),
    }
}

fn build(input: &Path, structure: StructureKind, snapshot: &Path) -> Result<ExitCode> {
    if structure != StructureKind::Improved {
        bail!("only the improved trie can be written to a snapshot, not `{structure}`");
    }
    let words = load_words(input)?;
    let mut trie = Trie::new();
    let mut report = BuildReport::default();
    for w in words.words() {
        let (_, ops) = trie
            .insert_counted(w)
            .with_context(|| format!("inserting {w:?}"))?;
        report.total += ops;
    }
    let file =
        File::create(snapshot).with_context(|| format!("creating {}", snapshot.display()))?;
    let mut sink = BufWriter::new(file);
    trie.export_snapshot(&mut sink)?;
    sink.flush()
        .with_context(|| format!("writing {}", snapshot.display()))?;
    println!("words={} build_ops={}", trie.len(), report.total.total());
    Ok(ExitCode::SUCCESS)
}

fn query(snapshot: &Path, ops: bool, word: &str) -> Result<ExitCode> {
    let file = File::open(snapshot).with_context(|| format!("opening {}", snapshot.display()))?;
    let trie = Trie::import_snapshot(BufReader::new(file))
        .with_context(|| format!("reading {}", snapshot.display()))?;
    let lookup = trie.contains(word);
    println!("{}", if lookup.found { "found" } else { "not-found" });
    if ops {
        println!(
            "traversals={} loop_iterations={} total={}",
            lookup.ops.traversals,
            lookup.ops.loop_iterations,
            lookup.ops.total()
        );
    }
    Ok(if lookup.found {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn suffixes(expand: &str) -> Result<Vec<&str>> {
    match expand {
        "none" => Ok(Vec::new()),
        "1" => Ok(vec!["1"]),
        "1,2" => Ok(vec!["1", "2"]),
        other => bail!("unknown expansion `{other}` (expected none, 1 or 1,2)"),
    }
}

fn memory_model(path: Option<&Path>) -> Result<MemoryModel> {
    let Some(path) = path else {
        return Ok(MemoryModel::default());
    };
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing memory model {}", path.display()))
}

fn build_row(
    kind: StructureKind,
    words: &WordList,
    alphabet: usize,
    model: &MemoryModel,
) -> Result<(ComparisonRow, BuildReport)> {
    let (s, report) = Structure::build(kind, words.words(), alphabet)
        .with_context(|| format!("building {kind} from {}", words.source()))?;
    Ok((ComparisonRow::new(kind, &s.stats(), &report, model), report))
}

fn stats(structure: StructureKind, expand: &str, common: &CommonArgs) -> Result<ExitCode> {
    let suffixes = suffixes(expand)?;
    let model = memory_model(common.memory_model.as_deref())?;
    let mut words = load_words(&common.input)?;
    if !suffixes.is_empty() {
        words = expand_corpus(&words, &suffixes);
    }
    let (row, _) = build_row(structure, &words, common.alphabet, &model)?;
    print!("{}", compare_report(&[row], common.format));
    Ok(ExitCode::SUCCESS)
}

fn bench(structures: &[StructureKind], common: &CommonArgs) -> Result<ExitCode> {
    if structures.len() < 2 {
        bail!(
            "bench needs at least two structures, got {}",
            structures.len()
        );
    }
    let model = memory_model(common.memory_model.as_deref())?;
    let words = load_words(&common.input)?;
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    for &kind in structures {
        let (row, report) = build_row(kind, &words, common.alphabet, &model)?;
        rows.push(row);
        reports.push((kind, report));
    }
    print!("{}", compare_report(&rows, common.format));
    println!();
    let lines: Vec<[String; 4]> = reports
        .iter()
        .map(|(kind, r)| {
            [
                kind.name().to_string(),
                r.min.to_string(),
                r.max.to_string(),
                format!("{:.2}", r.average()),
            ]
        })
        .collect();
    let header = ["structure", "insert_min", "insert_max", "insert_avg"].map(String::from);
    match common.format {
        ReportFormat::Csv => {
            for l in std::iter::once(&header).chain(&lines) {
                println!("{}", l.join(","));
            }
        }
        ReportFormat::Table => {
            let mut widths = header.clone().map(|h| h.len());
            for l in &lines {
                for (w, f) in widths.iter_mut().zip(l) {
                    *w = (*w).max(f.len());
                }
            }
            for l in std::iter::once(&header).chain(&lines) {
                let cells: Vec<String> = l
                    .iter()
                    .zip(&widths)
                    .enumerate()
                    .map(|(i, (c, &w))| {
                        if i == 0 {
                            format!("{c:<w$}")
                        } else {
                            format!("{c:>w$}")
                        }
                    })
                    .collect();
                println!("{}", cells.join("  "));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
