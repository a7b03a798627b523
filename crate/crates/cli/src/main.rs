//! `sst`: learn associations into a graph directory and tell stories from it.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use sst_core::ingest::{self, Action, DEFAULT_LDD_CONTEXT};
use sst_core::render::{header, TreeRenderer};
use sst_core::story::{Direction, LoopMode, SearchOptions, StoryWalker};
use sst_core::{store, AliasRegistry, ContextSet, Graph};

#[derive(Parser, Debug)]
#[command(name = "sst", version, about = "Semantic spacetime knowledge graph tool")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tell stories starting from a concept
    Stories(StoriesArgs),
    /// Learn from DSL, tuple-line or ldd files
    Ingest(IngestArgs),
    /// Remove weak, stale associations
    Gc(GcArgs),
    /// Print every association as a tuple line
    Dump(GraphArg),
}

#[derive(Parser, Debug)]
struct GraphArg {
    /// Graph directory
    #[arg(short = 'g', long = "graph", default_value = "./km")]
    graph: PathBuf,
}

#[derive(Parser, Debug)]
struct StoriesArgs {
    /// Story subject (exact name or unique prefix)
    #[arg(short = 's', long = "subject")]
    subject: String,
    /// Current context phrase; may be repeated
    #[arg(short = 'c', long = "context")]
    context: Vec<String>,
    /// Only follow associations of this type magnitude (1-4)
    #[arg(short = 't', long = "type", value_parser = clap::value_parser!(u8).range(1..=4))]
    stype: Option<u8>,
    /// Only report paths that end at this concept
    #[arg(short = 'e', long = "end")]
    end: Option<String>,
    /// Maximum path length
    #[arg(short = 'd', long = "depth", default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    depth: u64,
    #[command(flatten)]
    graph: GraphArg,
    /// Show relevance scores against the -c context
    #[arg(short = 'r', long = "relevance")]
    relevance: bool,
    /// Minimum relevance (0-100) for an association to be followed
    #[arg(long = "threshold", default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=100))]
    threshold: u8,
    /// With -t, drop the attribute notes attached to other types
    #[arg(long = "strict-types")]
    strict_types: bool,
    /// Visit each concept at most once per search instead of once per path
    #[arg(long = "global-loops")]
    global_loops: bool,
    /// Follow associations backwards into the subject
    #[arg(long = "inverse")]
    inverse: bool,
    /// Also walk concept/context-hub links
    #[arg(long = "context-links")]
    context_links: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Dsl,
    Tuples,
    Ldd,
}

#[derive(Parser, Debug)]
struct IngestArgs {
    #[arg(long = "format", value_enum, default_value_t = Format::Dsl)]
    format: Format,
    /// Binary name for ldd input (default: file name without ".ldd")
    #[arg(long = "binary")]
    binary: Option<String>,
    /// Context phrase for ldd input
    #[arg(long = "context", default_value = DEFAULT_LDD_CONTEXT)]
    context: String,
    #[command(flatten)]
    graph: GraphArg,
    /// Timestamp to learn at, in seconds since the epoch
    #[arg(long = "now", hide = true)]
    now: Option<i64>,
    #[arg(required = true)]
    files: Vec<PathBuf>,
}

#[derive(Parser, Debug)]
struct GcArgs {
    /// Associations lighter than this are candidates for removal
    #[arg(long = "min-weight", default_value_t = 2.0)]
    min_weight: f64,
    /// Associations untouched for longer than this many seconds are candidates
    #[arg(long = "max-age", default_value_t = 30 * 24 * 3600)]
    max_age: i64,
    #[command(flatten)]
    graph: GraphArg,
    #[arg(long = "now", hide = true)]
    now: Option<i64>,
}

/// The graph directory named with -g does not exist (exit status 2).
#[derive(Debug)]
struct MissingGraph(PathBuf);

impl std::fmt::Display for MissingGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "graph directory {} does not exist", self.0.display())
    }
}

impl std::error::Error for MissingGraph {}

fn now_or(flag: Option<i64>) -> i64 {
    flag.unwrap_or_else(|| {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs() as i64)
            .unwrap_or(0)
    })
}

fn open_graph(dir: &Path) -> Result<Graph> {
    if !dir.is_dir() {
        return Err(MissingGraph(dir.to_path_buf()).into());
    }
    store::load(dir).with_context(|| format!("loading {}", dir.display()))
}

fn run_stories(args: StoriesArgs) -> Result<()> {
    let g = open_graph(&args.graph.graph)?;
    let query = ContextSet::new(&args.context).context("bad -c context")?;
    let scored = args.relevance && !query.is_empty();
    let mut opts = SearchOptions::new(args.subject.as_str());
    opts.end = args.end;
    opts.type_filter = args.stype;
    opts.query_context = query;
    opts.max_depth = args.depth as usize;
    opts.relevance_threshold = args.threshold;
    opts.strict_types = args.strict_types;
    opts.include_context_links = args.context_links;
    opts.loop_mode = if args.global_loops {
        LoopMode::Global
    } else {
        LoopMode::PerPath
    };
    let direction = if args.inverse {
        Direction::Inverse
    } else {
        Direction::Forward
    };
    let walker = StoryWalker::new(&g, &opts, direction)?;

    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    out.write_all(header(walker.subject().as_str(), args.stype).as_bytes())?;
    let mut tree = TreeRenderer::new(scored);
    for path in walker {
        out.write_all(tree.push(path).as_bytes())?;
    }
    out.write_all(tree.footer().as_bytes())?;
    out.flush()?;
    Ok(())
}

fn ldd_binary_name(file: &Path, flag: Option<&str>) -> Result<String> {
    if let Some(b) = flag {
        return Ok(b.to_string());
    }
    let name = file
        .file_name()
        .and_then(|n| n.to_str())
        .with_context(|| format!("cannot derive a binary name from {}", file.display()))?;
    Ok(name.strip_suffix(".ldd").unwrap_or(name).to_string())
}

fn run_ingest(args: IngestArgs) -> Result<()> {
    let dir = &args.graph.graph;
    let mut g = if dir.is_dir() {
        store::load(dir).with_context(|| format!("loading {}", dir.display()))?
    } else {
        Graph::new()
    };
    let now = now_or(args.now);
    let mut registry = AliasRegistry::builtin();
    let mut statements = 0;
    let mut actions: Vec<Action> = Vec::new();
    let mut warnings: Vec<String> = Vec::new();

    for file in &args.files {
        let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
        let label = file.display().to_string();
        match args.format {
            Format::Dsl => {
                let stmts = ingest::parse_dsl(&text, &label)?;
                statements += stmts.len();
                let lowered = ingest::dsl_to_actions(&stmts, &mut registry)?;
                actions.extend(lowered.actions);
                warnings.extend(lowered.warnings);
            }
            Format::Tuples => {
                let tuples = ingest::parse_tuples(&text, &label)?;
                statements += tuples.len();
                actions.extend(tuples.into_iter().map(Action::Learn));
            }
            Format::Ldd => {
                let binary = ldd_binary_name(file, args.binary.as_deref())?;
                let parsed = ingest::parse_ldd(&binary, &text, &args.context)
                    .with_context(|| format!("{label}: bad binary name or context"))?;
                statements += parsed.lines.len();
                if parsed.skipped > 0 {
                    warnings.push(format!(
                        "{label}: skipped {} non-dependency line(s)",
                        parsed.skipped
                    ));
                }
                actions.extend(parsed.tuples.into_iter().map(Action::Learn));
            }
        }
    }

    let before = g.edge_count();
    let tuples = ingest::apply(&mut g, &actions, now).context("applying statements")?;
    store::save(&g, dir).with_context(|| format!("saving {}", dir.display()))?;
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    println!(
        "statements {statements}, tuples {tuples}, new edges {}, total edges {}, warnings {}",
        g.edge_count() - before,
        g.edge_count(),
        warnings.len()
    );
    Ok(())
}

fn run_gc(args: GcArgs) -> Result<()> {
    if args.max_age < 0 {
        bail!("--max-age must not be negative");
    }
    if !args.min_weight.is_finite() {
        bail!("--min-weight must be finite");
    }
    let dir = &args.graph.graph;
    let mut g = open_graph(dir)?;
    let removed = g.gc(args.min_weight, args.max_age, now_or(args.now));
    store::save(&g, dir).with_context(|| format!("saving {}", dir.display()))?;
    println!("removed {removed} edges");
    Ok(())
}

fn run_dump(args: GraphArg) -> Result<()> {
    let g = open_graph(&args.graph)?;
    let mut out = BufWriter::new(io::stdout().lock());
    out.write_all(ingest::dump(&g).as_bytes())
        .and_then(|_| out.flush())
        .context("writing output")?;
    Ok(())
}

/// Output piped into `head` and the like is not an error.
fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain()
        .filter_map(|c| c.downcast_ref::<io::Error>())
        .any(|io| io.kind() == io::ErrorKind::BrokenPipe)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Stories(a) => run_stories(a),
        Command::Ingest(a) => run_ingest(a),
        Command::Gc(a) => run_gc(a),
        Command::Dump(a) => run_dump(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sst: {e:#}");
            if e.downcast_ref::<MissingGraph>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
