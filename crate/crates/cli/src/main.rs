use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use afsub::bounds::{
    dary_two_sided, find_anagram_pigeonhole, find_anagram_undercoloured_tree, kn_lower_bound, random_coloured_subdivision,
    tree_lower_bound,
};
use afsub::graph_constructions::{colour_14, colour_8, colour_merged};
use afsub::graph_model::{complete_dary_tree, random_binary_tree, BaseGraph, Colour, ColouredSubdivision, VertexId};
use afsub::io::{from_json, to_dot, to_json};
use afsub::tree_constructions::{build_binary_tree_8, build_dary_banded, build_dary_tree_10};
use afsub::verifier::{
    check_restriction, find_anagram, find_anagram_sampled, validate_counterexample, ExhaustiveOptions, Mode,
    SampleOptions, VerificationReport, VerifyError, DEFAULT_MAX_WINDOWS,
};
use afsub::words::{find_abelian_square, find_square, keranen_word, thue_word};
use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

const EXIT_FAILURE: u8 = 1;
const EXIT_COUNTEREXAMPLE: u8 = 2;
const EXIT_CEILING: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_DATAERR: u8 = 65;
const EXIT_NOINPUT: u8 = 66;

/// Anagram-free colourings of graph subdivisions.
#[derive(Parser)]
#[command(name = "afsub", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a prefix of the square-free (3 symbols) or anagram-free (4 symbols) word.
    Word {
        #[arg(long, value_parser = clap::value_parser!(u32).range(3..=4))]
        alphabet: u32,
        #[arg(long)]
        length: usize,
        /// Skip the repetition check on the generated prefix.
        #[arg(long)]
        no_check: bool,
    },
    /// Build a coloured subdivision and write it as JSON.
    Construct {
        #[command(subcommand)]
        which: Construction,
        #[command(flatten)]
        output: Output,
    },
    /// Search a coloured subdivision for an anagram.
    Verify(VerifyArgs),
    /// Evaluate a bound.
    Bound {
        #[command(subcommand)]
        which: BoundKind,
    },
    /// Find an anagram that a lower bound guarantees in a random colouring.
    Witness {
        #[command(subcommand)]
        which: WitnessKind,
    },
    /// Convert a JSON subdivision to graphviz DOT.
    Export {
        #[arg(long = "dot", value_name = "FILE")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Output {
    /// Write JSON here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also write a DOT rendering.
    #[arg(long, global = true)]
    dot: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Construction {
    /// Complete (or seeded random) binary tree, 8 colours.
    BinaryTree {
        #[arg(long)]
        height: usize,
        /// Use a random binary tree of height at most HEIGHT.
        #[arg(long, value_name = "SEED")]
        random: Option<u64>,
    },
    /// Complete d-ary tree, 10 colours.
    Dary {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        height: usize,
    },
    /// Complete d-ary tree with at most K division vertices per edge.
    DaryBanded {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        height: usize,
        #[arg(long)]
        k: usize,
    },
    /// Any graph, 14 colours.
    Graph14 {
        #[arg(long)]
        edges: PathBuf,
    },
    /// Any graph, 8 colours.
    Graph8 {
        #[arg(long)]
        edges: PathBuf,
    },
    /// Any graph with edges split into K groups, 2 + 12K colours.
    GraphMerged {
        #[arg(long)]
        edges: PathBuf,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Args)]
struct VerifyArgs {
    file: PathBuf,
    /// Sample this many random paths instead of searching exhaustively.
    #[arg(long, requires = "seed", value_name = "N")]
    sample: Option<u64>,
    #[arg(long, requires = "sample")]
    seed: Option<u64>,
    /// Ceiling on directed path windows for exhaustive search.
    #[arg(long, env = "AFSUB_MAX_WINDOWS", value_name = "M")]
    max_windows: Option<u64>,
    /// Check the restriction to these colours instead (comma-separated).
    #[arg(long, value_delimiter = ',', conflicts_with = "sample")]
    restrict: Option<Vec<Colour>>,
    /// Ignore the ceiling.
    #[arg(long)]
    force: bool,
}

#[derive(Subcommand)]
enum BoundKind {
    /// Least division count for an anagram-free c-colouring of a subdivided K_n.
    Kn {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        c: u64,
    },
    /// Colours needed by a d-branch tree of effective height HEFF and height at most H.
    Tree {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        heff: u64,
        #[arg(long)]
        h: u64,
    },
    /// Both sides of the bound for the k-subdivided complete d-ary tree.
    Dary {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        h: u64,
        #[arg(long)]
        k: u64,
    },
}

#[derive(Subcommand)]
enum WitnessKind {
    /// Random (<=K)-subdivision of K_n, randomly c-coloured.
    Kn {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        c: Colour,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Complete d-ary tree of height H, randomly coloured with X colours.
    Tree {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        h: usize,
        #[arg(long)]
        x: usize,
        #[arg(long)]
        seed: u64,
        /// Height bound used by the lower bound; defaults to max(H, 2, ceil(sqrt(d))).
        #[arg(long)]
        height_bound: Option<usize>,
    },
}

/// A failed command: exit status plus message for stderr.
struct Failure(u8, String);

impl Failure {
    fn data(msg: impl ToString) -> Self {
        Self(EXIT_DATAERR, msg.to_string())
    }

    fn usage(msg: impl ToString) -> Self {
        Self(EXIT_USAGE, msg.to_string())
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("afsub: {msg}");
            ExitCode::from(code)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Word { alphabet, length, no_check } => word(alphabet, length, no_check),
        Command::Construct { which, output } => construct(which, &output),
        Command::Verify(args) => verify(&args),
        Command::Bound { which } => bound(which),
        Command::Witness { which } => witness(which),
        Command::Export { input, out } => {
            let c = read_subdivision(&input)?;
            emit(out.as_deref(), &to_dot(&c))?;
            Ok(0)
        }
    }
}

fn word(alphabet: u32, length: usize, no_check: bool) -> Outcome {
    let (w, repeat) = if alphabet == 3 {
        let w = thue_word(length);
        let repeat = if no_check { None } else { find_square(&w) };
        (w, repeat)
    } else {
        let w = keranen_word(length);
        let repeat = if no_check { None } else { find_abelian_square(&w) };
        (w, repeat)
    };
    write_stdout(&(w.to_letters() + "\n"));
    match repeat {
        Some((start, half)) => Err(Failure(EXIT_FAILURE, format!("self-check failed: repetition at {start} with half length {half}"))),
        None => Ok(0),
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(EXIT_NOINPUT, format!("{}: {e}", path.display())))
}

fn read_subdivision(path: &Path) -> Result<ColouredSubdivision, Failure> {
    from_json(&read_text(path)?).map_err(|e| Failure::data(format!("{}: {e}", path.display())))
}

/// Whitespace-separated `u v` pairs; the vertex count is one more than the
/// largest id.
fn read_edges(path: &Path) -> Result<BaseGraph, Failure> {
    let text = read_text(path)?;
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens.len() % 2 != 0 {
        return Err(Failure::data(format!("{}: odd number of vertex ids", path.display())));
    }
    let ids = tokens
        .iter()
        .map(|t| t.parse::<VertexId>().map_err(|_| Failure::data(format!("{}: bad vertex id {t:?}", path.display()))))
        .collect::<Result<Vec<_>, _>>()?;
    let edges = ids.chunks(2).map(|p| (p[0], p[1])).collect();
    BaseGraph::from_edges(edges).map_err(|e| Failure::data(format!("{}: {e}", path.display())))
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure(EXIT_FAILURE, format!("{}: {e}", p.display()))),
        None => {
            write_stdout(text);
            Ok(())
        }
    }
}

fn construct(which: Construction, output: &Output) -> Outcome {
    let coloured = match which {
        Construction::BinaryTree { height, random } => {
            let tree = match random {
                Some(seed) => random_binary_tree(height, &mut ChaCha8Rng::seed_from_u64(seed)),
                None => complete_dary_tree(2, height),
            };
            let mut c = build_binary_tree_8(&tree).map_err(Failure::usage)?.coloured;
            if let Some(seed) = random {
                let provenance = c.provenance().clone().with("seed", seed);
                c.set_provenance(provenance);
            }
            c
        }
        Construction::Dary { d, height } => build_dary_tree_10(d, height).map_err(Failure::usage)?.coloured,
        Construction::DaryBanded { d, height, k } => build_dary_banded(d, height, k).map_err(Failure::usage)?,
        Construction::Graph14 { edges } => colour_14(&read_edges(&edges)?).map_err(Failure::data)?.coloured,
        Construction::Graph8 { edges } => colour_8(&read_edges(&edges)?).map_err(Failure::data)?.coloured,
        Construction::GraphMerged { edges, k } => colour_merged(&read_edges(&edges)?, k).map_err(Failure::usage)?,
    };
    emit(output.out.as_deref(), &to_json(&coloured))?;
    if let Some(dot) = &output.dot {
        emit(Some(dot), &to_dot(&coloured))?;
    }
    eprintln!(
        "{}: {} vertices, palette {}, max division count {}",
        coloured.provenance().construction,
        coloured.graph().vertex_count(),
        coloured.palette().len(),
        coloured.graph().max_division_count()
    );
    Ok(0)
}

fn mode_json(mode: Mode) -> Value {
    match mode {
        Mode::Exhaustive => json!("exhaustive"),
        Mode::Sampled { budget, seed } => json!({ "sampled": { "budget": budget, "seed": seed } }),
    }
}

fn report_json(report: &VerificationReport) -> Value {
    let mut out = json!({
        "outcome": if report.is_anagram_free() { "anagram_free" } else { "counterexample" },
        "paths_checked": report.paths_checked,
        "mode": mode_json(report.mode),
    });
    if let Some(cx) = &report.counterexample {
        let multiset: serde_json::Map<String, Value> =
            cx.half_multiset.counts().iter().map(|(c, n)| (c.to_string(), json!(n))).collect();
        out["counterexample"] = json!({ "path": cx.path, "split": cx.split, "half_multiset": multiset });
    }
    out
}

/// Writes to stdout; a reader that went away (broken pipe) is not an error.
fn write_stdout(text: &str) {
    let mut out = io::stdout().lock();
    if let Err(e) = out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        if e.kind() != io::ErrorKind::BrokenPipe {
            eprintln!("afsub: writing output: {e}");
        }
    }
}

fn print_json(value: &Value) {
    write_stdout(&(serde_json::to_string_pretty(value).expect("json value serializes") + "\n"));
}

fn verify(args: &VerifyArgs) -> Outcome {
    let c = read_subdivision(&args.file)?;
    let options = ExhaustiveOptions { max_windows: args.max_windows.unwrap_or(DEFAULT_MAX_WINDOWS), force: args.force };
    let ceiling = |e: VerifyError| match e {
        VerifyError::ResourceCeiling { .. } => Failure(EXIT_CEILING, e.to_string()),
        VerifyError::ZeroBudget => Failure::usage(e),
    };
    if let Some(keep) = &args.restrict {
        let keep: BTreeSet<Colour> = keep.iter().copied().collect();
        let report = check_restriction(&c, &keep, &options).map_err(ceiling)?;
        print_json(&json!({
            "keep": report.keep,
            "paths_checked": report.paths_checked,
            "refuted": report.refuted,
            "empty": report.empty,
            "restricted_anagram": report.restricted_anagram,
            "certifies_all": report.certifies_all(),
        }));
        return Ok(0);
    }
    let report = match (args.sample, args.seed) {
        (Some(budget), Some(seed)) => find_anagram_sampled(&c, &SampleOptions::new(budget, seed)),
        _ => find_anagram(&c, &options),
    }
    .map_err(ceiling)?;
    print_json(&report_json(&report));
    eprintln!(
        "palette {}, max division count {}, {}",
        c.palette().len(),
        c.graph().max_division_count(),
        if report.is_anagram_free() { "no anagram found" } else { "anagram found" }
    );
    Ok(if report.is_anagram_free() { 0 } else { EXIT_COUNTEREXAMPLE })
}

fn bound(which: BoundKind) -> Outcome {
    let value = match which {
        BoundKind::Kn { n, c } => {
            if n == 0 || c == 0 {
                return Err(Failure::usage("n and c must be positive"));
            }
            json!({ "n": n, "c": c, "lower_bound": kn_lower_bound(n, c) })
        }
        BoundKind::Tree { d, heff, h } => {
            let c = tree_lower_bound(d, heff, h).map_err(Failure::usage)?;
            json!({ "d": d, "heff": heff, "h": h, "lower_bound": c })
        }
        BoundKind::Dary { d, h, k } => {
            let (lower, upper) = dary_two_sided(d, h, k).map_err(Failure::usage)?;
            json!({ "d": d, "h": h, "k": k, "lower": lower, "upper": upper })
        }
    };
    print_json(&value);
    Ok(0)
}

fn witness(which: WitnessKind) -> Outcome {
    let not_found = |e: afsub::bounds::BoundsError| Failure(EXIT_FAILURE, e.to_string());
    let (path, colours, valid) = match which {
        WitnessKind::Kn { n, c, k, seed } => {
            if c == 0 {
                return Err(Failure::usage("c must be positive"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = random_coloured_subdivision(&BaseGraph::complete(n), k, c, &mut rng).map_err(Failure::usage)?;
            let path = find_anagram_pigeonhole(&s).map_err(not_found)?;
            let valid = validate_counterexample(&s, &path);
            (path.clone(), s.path_colours(&path), valid)
        }
        WitnessKind::Tree { d, h, x, seed, height_bound } => {
            if x == 0 {
                return Err(Failure::usage("x must be positive"));
            }
            let t = complete_dary_tree(d, h);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let colours: Vec<Colour> = (0..t.len()).map(|_| rng.gen_range(1..=x as Colour)).collect();
            let min_bound = (1..).find(|b: &usize| b * b >= d).expect("some square exceeds d");
            let bound = height_bound.unwrap_or(h.max(2).max(min_bound));
            let path = find_anagram_undercoloured_tree(&t, &colours, x, d, bound).map_err(|e| match e {
                afsub::bounds::BoundsError::Precondition(_) => Failure::usage(e),
                _ => not_found(e),
            })?;
            let c = ColouredSubdivision::from_base(&t.to_base_graph(), colours).map_err(Failure::data)?;
            let valid = validate_counterexample(&c, &path);
            (path.clone(), c.path_colours(&path), valid)
        }
    };
    print_json(&json!({ "path": path, "colours": colours, "valid": valid }));
    Ok(if valid { 0 } else { EXIT_FAILURE })
}
