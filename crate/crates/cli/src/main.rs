//! `cdawg`: build and query a CDAWG self-index from the command line.
//!
//! Exit codes: 0 success, 1 pattern absent (with `--require-match`),
//! 2 usage error, 3 I/O or index-format error.

use std::ffi::OsString;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cdawg::io::{read_index, write_index, FormatError};
use cdawg::query::{Index, Order};
use cdawg::{Pattern, Text};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "cdawg", version, about = "Repetition-aware self-index over the CDAWG")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PatternArgs {
    /// Pattern bytes (hex digits with --hex).
    #[arg(short = 'p', long, allow_hyphen_values = true)]
    pattern: OsString,
    #[arg(long)]
    hex: bool,
    /// Exit with code 1 when the pattern does not occur.
    #[arg(long)]
    require_match: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Lex,
    Freq,
}

#[derive(Subcommand)]
enum Command {
    /// Index a file.
    Build {
        #[arg(short = 'i', long)]
        input: PathBuf,
        #[arg(short = 'o', long)]
        output: PathBuf,
    },
    /// Number of occurrences.
    Count {
        #[arg(short = 'x', long)]
        index: PathBuf,
        #[command(flatten)]
        pattern: PatternArgs,
    },
    /// Occurrence positions (1-based), ascending.
    Locate {
        #[arg(short = 'x', long)]
        index: PathBuf,
        #[command(flatten)]
        pattern: PatternArgs,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Matching statistics of a query file against the text.
    Ms {
        #[arg(short = 'x', long)]
        index: PathBuf,
        /// One trailing newline is ignored.
        #[arg(short = 'q', long)]
        query: PathBuf,
    },
    /// Minimal absent words, one per line.
    Maws {
        #[arg(short = 'x', long)]
        index: PathBuf,
        #[arg(long)]
        include_sentinel: bool,
        #[arg(long)]
        hex: bool,
    },
    /// First k occurrences by suffix order or by subtree frequency.
    Topk {
        #[arg(short = 'x', long)]
        index: PathBuf,
        #[command(flatten)]
        pattern: PatternArgs,
        #[arg(short = 'k')]
        k: usize,
        #[arg(long, value_enum, default_value = "lex")]
        order: OrderArg,
    },
    /// Label of one CDAWG arc.
    ExtractArc {
        #[arg(short = 'x', long)]
        index: PathBuf,
        #[arg(long)]
        arc: u32,
        /// Right to left.
        #[arg(long)]
        rtl: bool,
        #[arg(long)]
        hex: bool,
    },
    /// The original file.
    Decompress {
        #[arg(short = 'x', long)]
        index: PathBuf,
    },
    /// Structural statistics as `key value` lines.
    Stats {
        #[arg(short = 'x', long)]
        index: PathBuf,
    },
}

enum Failure {
    Usage(String),
    Data(String),
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::Data(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

fn load(path: &Path) -> Result<Index, Failure> {
    read_index(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn pattern_bytes(args: &PatternArgs) -> Result<Vec<u8>, Failure> {
    let raw = os_bytes(&args.pattern);
    let bytes = if args.hex {
        hex::decode(&raw).map_err(|e| Failure::Usage(format!("bad hex pattern: {e}")))?
    } else {
        raw
    };
    Pattern::new(&bytes).map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(bytes)
}

#[cfg(unix)]
fn os_bytes(s: &OsString) -> Vec<u8> {
    use std::os::unix::ffi::OsStrExt;
    s.as_bytes().to_vec()
}

#[cfg(not(unix))]
fn os_bytes(s: &OsString) -> Vec<u8> {
    s.to_string_lossy().into_owned().into_bytes()
}

/// Sentinel shown as `#` unless hex output is asked for.
fn render(word: &[u8], hex_out: bool) -> Vec<u8> {
    if hex_out {
        hex::encode(word).into_bytes()
    } else {
        word.iter().map(|&c| if c == 0 { b'#' } else { c }).collect()
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let mut absent = false;
    match cli.command {
        Command::Build { input, output } => {
            let data = std::fs::read(&input).map_err(|e| Failure::Data(format!("{}: {e}", input.display())))?;
            let text = Text::new(&data).map_err(|e| Failure::Data(format!("{}: {e}", input.display())))?;
            write_index(&output, &Index::build(&text))?;
        }
        Command::Count { index, pattern } => {
            let p = pattern_bytes(&pattern)?;
            let idx = load(&index)?;
            let n = idx.count(&p);
            absent = pattern.require_match && n == 0;
            writeln!(out, "{n}")?;
        }
        Command::Locate { index, pattern, limit } => {
            let p = pattern_bytes(&pattern)?;
            let idx = load(&index)?;
            let pos = idx.locate(&p);
            absent = pattern.require_match && pos.is_empty();
            for x in pos.iter().take(limit.unwrap_or(usize::MAX)) {
                writeln!(out, "{x}")?;
            }
        }
        Command::Ms { index, query } => {
            let mut q = std::fs::read(&query).map_err(|e| Failure::Data(format!("{}: {e}", query.display())))?;
            if q.last() == Some(&b'\n') {
                q.pop();
                if q.last() == Some(&b'\r') {
                    q.pop();
                }
            }
            Pattern::new(&q).map_err(|e| Failure::Usage(e.to_string()))?;
            let idx = load(&index)?;
            let ms: Vec<String> = idx.matching_statistics(&q).iter().map(|x| x.to_string()).collect();
            writeln!(out, "{}", ms.join(" "))?;
        }
        Command::Maws {
            index,
            include_sentinel,
            hex,
        } => {
            let idx = load(&index)?;
            for w in idx.minimal_absent_words(include_sentinel) {
                out.write_all(&render(&w, hex))?;
                out.write_all(b"\n")?;
            }
        }
        Command::Topk {
            index,
            pattern,
            k,
            order,
        } => {
            let p = pattern_bytes(&pattern)?;
            if k == 0 {
                return Err(Failure::Usage("-k must be at least 1".into()));
            }
            let idx = load(&index)?;
            let order = match order {
                OrderArg::Lex => Order::Lex,
                OrderArg::Freq => Order::Freq,
            };
            let pos = idx.top_k(&p, k, order);
            absent = pattern.require_match && pos.is_empty();
            for x in pos {
                writeln!(out, "{x}")?;
            }
        }
        Command::ExtractArc { index, arc, rtl, hex } => {
            let idx = load(&index)?;
            if arc as usize >= idx.cdawg().arcs.len() {
                return Err(Failure::Usage(format!(
                    "arc {arc} out of range (index has {} arcs)",
                    idx.cdawg().arcs.len()
                )));
            }
            let label: Vec<u8> = if rtl {
                idx.extract_arc_label_rtl(arc).collect()
            } else {
                idx.arc_label(arc)
            };
            out.write_all(&render(&label, hex))?;
            out.write_all(b"\n")?;
        }
        Command::Decompress { index } => {
            let idx = load(&index)?;
            let mut text = idx.text();
            text.pop();
            out.write_all(&text)?;
        }
        Command::Stats { index } => {
            let idx = load(&index)?;
            let s = idx.cdawg().stats();
            writeln!(out, "n {}", s.n)?;
            writeln!(out, "sigma {}", s.sigma)?;
            writeln!(out, "node_count {}", s.node_count)?;
            writeln!(out, "e {}", s.e)?;
            writeln!(out, "h {}", s.h)?;
            writeln!(out, "maximal_repeat_count {}", s.maximal_repeat_count)?;
            writeln!(out, "sink_in_degree {}", s.sink_in_degree)?;
            writeln!(out, "grammar_rules {}", idx.slp().rule_count())?;
        }
    }
    out.flush()?;
    Ok(if absent { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("cdawg: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("cdawg: {msg}");
            ExitCode::from(3)
        }
    }
}
