//! The `census` command line: argument parsing, `--config` files and table
//! emission.
//!
//! Output is CSV by default and JSON with `--json`. Both start with the tool
//! version, the full resolved flag set and the seed. Exit codes: 0 success,
//! 1 a failed `verify`, 2 bad flags or input, 3 a budget refusal.

use std::ffi::OsString;
use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::complexity;
use crate::error::Error;
use crate::genericity::{self, DensitySeries, Lambda, Predicate};
use crate::presentations::{self, CandidatePool, ClassParams, Presentation, SearchBudget};
use crate::symmetry::{self, OrbitMethod, Relabeling};
use crate::verify;
use crate::words::{self, Word, WordSet, DEFAULT_ENUMERATION_CAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

fn display<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Parser, Debug, Serialize)]
#[command(
    name = "census",
    version,
    about = "Counting, symmetry, genericity and presentation tools for one-relator groups"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Serialize)]
pub struct GlobalArgs {
    /// Emit JSON instead of CSV.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// key=value file of default flags; command-line flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Print words in the `x1 X2` form.
    #[arg(long, global = true)]
    pub numeric: bool,
    /// Freely reduce input words instead of rejecting them.
    #[arg(long, global = true)]
    pub reduce: bool,
    /// Refuse enumerations larger than this.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUMERATION_CAP)]
    pub cap: u64,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Closed-form word counts, optionally checked by enumeration.
    Count(CountArgs),
    /// Cyclically reduced counts: formula against brute force.
    Rivin(RivinArgs),
    /// Orbit census under relabeling, rotation and inversion.
    Orbits(OrbitsArgs),
    /// Density of a genericity predicate among cyclically reduced words.
    GenericFraction(FractionArgs),
    /// Small cancellation test for one word.
    Cprime(CPrimeArgs),
    /// Six-letter and binary encoding of a presentation file.
    Encode(FileArgs),
    /// Remove relators of length at most two.
    Tietze(TietzeArgs),
    /// Dehn's algorithm for a single relator.
    Dehn(DehnArgs),
    /// Bounded search for an isomorphic generic one-relator presentation.
    Search(SearchArgs),
    /// Recover a relator from a presentation and a prefix.
    Recover(RecoverArgs),
    /// Compression estimates and the incompressibility experiment.
    Kolmogorov(KolmogorovArgs),
    /// Run the acceptance suite.
    Verify(VerifyArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Count(_) => "count",
            Command::Rivin(_) => "rivin",
            Command::Orbits(_) => "orbits",
            Command::GenericFraction(_) => "generic-fraction",
            Command::Cprime(_) => "cprime",
            Command::Encode(_) => "encode",
            Command::Tietze(_) => "tietze",
            Command::Dehn(_) => "dehn",
            Command::Search(_) => "search",
            Command::Recover(_) => "recover",
            Command::Kolmogorov(_) => "kolmogorov",
            Command::Verify(_) => "verify",
        }
    }

    fn seed(&self) -> Option<u64> {
        match self {
            Command::GenericFraction(a) => Some(a.seed),
            Command::Kolmogorov(a) => a.seed,
            Command::Verify(a) => Some(a.seed),
            _ => None,
        }
    }
}

fn rank_parser() -> clap::builder::RangedI64ValueParser<u32> {
    clap::value_parser!(u32).range(2..)
}

#[derive(Args, Debug, Serialize)]
pub struct CountArgs {
    #[arg(long, default_value_t = 2, value_parser = rank_parser())]
    pub k: u32,
    #[arg(long)]
    pub n_max: usize,
    /// Also count by enumeration.
    #[arg(long)]
    pub enumerate: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct RivinArgs {
    #[arg(long, default_value_t = 2, value_parser = rank_parser())]
    pub k: u32,
    #[arg(long)]
    pub n_max: usize,
}

#[derive(Copy, Clone, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Canonicalize,
    Burnside,
}

#[derive(Args, Debug, Serialize)]
pub struct OrbitsArgs {
    #[arg(long, default_value_t = 2, value_parser = rank_parser())]
    pub k: u32,
    /// A single length.
    #[arg(long, required_unless_present = "n_max", conflicts_with = "n_max")]
    pub n: Option<usize>,
    /// Every length from 1 to this.
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long, value_enum, default_value_t = MethodArg::Burnside)]
    pub method: MethodArg,
}

#[derive(Copy, Clone, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PredicateArg {
    ESet,
    SSet,
    SPrime,
    Cprime,
}

#[derive(Args, Debug, Serialize)]
pub struct FractionArgs {
    #[arg(long, default_value_t = 2, value_parser = rank_parser())]
    pub k: u32,
    /// Comma-separated lengths.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, value_enum)]
    pub predicate: PredicateArg,
    #[arg(long, default_value = "1/6")]
    #[serde(serialize_with = "display")]
    pub lambda: Lambda,
    /// Relabeling for s-set and s-prime, e.g. `1:2+,2:1-`.
    #[arg(long)]
    pub tau: Option<String>,
    /// Report the density of the complement.
    #[arg(long)]
    pub complement: bool,
    /// Enumerate exactly when the support has at most this many words.
    #[arg(long, default_value_t = 100_000)]
    pub exact_cap: u64,
    /// Append the log-density slope over the lengths.
    #[arg(long)]
    pub fit: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct CPrimeArgs {
    #[arg(long)]
    pub word: String,
    #[arg(long, default_value = "1/6")]
    #[serde(serialize_with = "display")]
    pub lambda: Lambda,
}

#[derive(Args, Debug, Serialize)]
pub struct FileArgs {
    /// Presentation file (`gens:` and `rel:` lines).
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Args, Debug, Serialize)]
pub struct TietzeArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Assert the group has no elements of order two.
    #[arg(long)]
    pub no_two_torsion: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct DehnArgs {
    #[arg(long)]
    pub relator: String,
    #[arg(long)]
    pub word: String,
}

#[derive(Copy, Clone, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PoolArg {
    Images,
    Exhaustive,
}

#[derive(Args, Debug, Serialize)]
pub struct SearchOpts {
    /// Generators of the target class.
    #[arg(long, default_value_t = 2, value_parser = rank_parser())]
    pub k: u32,
    #[arg(long, default_value = "1/6")]
    #[serde(serialize_with = "display")]
    pub class_lambda: Lambda,
    #[arg(long, default_value_t = 60)]
    pub max_len: usize,
    /// Relator applications allowed when checking the input side.
    #[arg(long, default_value_t = 2)]
    pub depth: usize,
    #[arg(long, default_value_t = 1)]
    pub map_len: usize,
    #[arg(long, value_enum, default_value_t = PoolArg::Images)]
    pub pool: PoolArg,
    #[arg(long, default_value_t = 20_000)]
    pub state_cap: usize,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_map_pairs: u64,
}

impl SearchOpts {
    fn class(&self) -> ClassParams {
        ClassParams {
            k: self.k,
            lambda: self.class_lambda,
            max_len: self.max_len,
            pool: match self.pool {
                PoolArg::Images => CandidatePool::Images,
                PoolArg::Exhaustive => CandidatePool::Exhaustive,
            },
        }
    }

    fn budget(&self) -> SearchBudget {
        SearchBudget {
            map_len: self.map_len,
            depth: self.depth,
            state_cap: self.state_cap,
            max_map_pairs: self.max_map_pairs,
        }
    }
}

#[derive(Args, Debug, Serialize)]
pub struct SearchArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    pub opts: SearchOpts,
}

#[derive(Args, Debug, Serialize)]
pub struct RecoverArgs {
    /// Presentation to search from; not needed with `--candidate`.
    #[arg(long, required_unless_present = "candidate")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub prefix: String,
    /// Skip the search and recover from this orbit-mate.
    #[arg(long)]
    pub candidate: Option<String>,
    #[command(flatten)]
    #[serde(flatten)]
    pub opts: SearchOpts,
}

#[derive(Args, Debug, Serialize)]
pub struct KolmogorovArgs {
    #[arg(long, default_value_t = 2, value_parser = rank_parser())]
    pub k: u32,
    #[arg(long, default_value_t = 400)]
    pub n: usize,
    #[arg(long, default_value_t = 4)]
    pub c: u32,
    #[arg(long, default_value_t = 2000)]
    pub samples: u64,
    #[arg(long, required_unless_present = "word")]
    pub seed: Option<u64>,
    /// Estimate one word instead of running the experiment.
    #[arg(long)]
    pub word: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = verify::DEFAULT_SEED)]
    pub seed: u64,
    /// Run a single criterion.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=12))]
    pub criterion: Option<u8>,
}

/// What a subcommand produced: a CSV table, its JSON mirror and the exit
/// status.
struct Outcome {
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
    json: Value,
    exit: i32,
}

impl Outcome {
    fn table(columns: &[&str], rows: Vec<Vec<String>>, json: Value) -> Outcome {
        Outcome {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows,
            json,
            exit: EXIT_OK,
        }
    }

    /// A `field,value` table whose JSON mirror is an object.
    fn record(fields: Vec<(&str, String)>, json: Value) -> Outcome {
        Outcome::table(
            &["field", "value"],
            fields
                .into_iter()
                .map(|(k, v)| vec![k.to_string(), v])
                .collect(),
            json,
        )
    }
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit(&self) -> i32 {
        match self {
            Failure::Lib(Error::BudgetExceeded { .. }) => EXIT_BUDGET,
            _ => EXIT_USAGE,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Lib(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "{e}"),
        }
    }
}

type Run<T> = std::result::Result<T, Failure>;

/// Reads `key=value` lines (blank lines and `#` comments ignored) into
/// `--key value` arguments. `true` becomes a bare flag and `false` drops it.
pub fn config_args(text: &str) -> std::result::Result<Vec<OsString>, String> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key=value", i + 1))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim().trim_matches('"');
        if key == "config" {
            return Err("config files cannot nest".into());
        }
        match value {
            "true" => out.push(format!("--{key}").into()),
            "false" => {}
            v => {
                out.push(format!("--{key}").into());
                out.push(v.into());
            }
        }
    }
    Ok(out)
}

const SUBCOMMANDS: [&str; 12] = [
    "count",
    "rivin",
    "orbits",
    "generic-fraction",
    "cprime",
    "encode",
    "tietze",
    "dehn",
    "search",
    "recover",
    "kolmogorov",
    "verify",
];

/// Splices config-file flags in right after the subcommand name, so that
/// later command-line occurrences override them.
fn expand_config(args: Vec<OsString>) -> std::result::Result<Vec<OsString>, String> {
    let mut path = None;
    for (i, a) in args.iter().enumerate() {
        let s = a.to_string_lossy();
        if s == "--config" {
            path = args.get(i + 1).map(PathBuf::from);
        } else if let Some(p) = s.strip_prefix("--config=") {
            path = Some(PathBuf::from(p));
        }
    }
    let Some(path) = path else { return Ok(args) };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let extra = config_args(&text)?;
    let Some(at) = args
        .iter()
        .position(|a| SUBCOMMANDS.contains(&a.to_string_lossy().as_ref()))
    else {
        return Ok(args);
    };
    let mut out = args[..=at].to_vec();
    out.extend(extra);
    out.extend_from_slice(&args[at + 1..]);
    Ok(out)
}

fn parse_cli(args: Vec<OsString>) -> std::result::Result<Cli, clap::Error> {
    let cmd = Cli::command()
        .args_override_self(true)
        .mut_subcommands(|s| s.args_override_self(true));
    let matches = cmd.try_get_matches_from(args)?;
    Cli::from_arg_matches(&matches)
}

/// Runs the tool on `args` (program name first), writing the artifact to
/// `stdout` unless `--output` is set. Returns the exit status.
pub fn run<W: Write, E: Write>(args: Vec<OsString>, stdout: &mut W, stderr: &mut E) -> i32 {
    let args = match expand_config(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let cli = match parse_cli(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    return EXIT_OK;
                }
                _ => EXIT_USAGE,
            };
            let _ = write!(stderr, "{e}");
            return code;
        }
    };
    let outcome = match dispatch(&cli) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return e.exit();
        }
    };
    let text = match render(&cli, &outcome) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let written = match &cli.global.output {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
        None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_USAGE;
    }
    outcome.exit
}

fn metadata(cli: &Cli) -> Value {
    json!({
        "tool": "census",
        "version": env!("CARGO_PKG_VERSION"),
        "command": cli.command.name(),
        "flags": serde_json::to_value(cli).expect("flags serialize"),
        "seed": cli.command.seed(),
    })
}

fn render(cli: &Cli, outcome: &Outcome) -> std::result::Result<String, String> {
    let meta = metadata(cli);
    if cli.global.json {
        let doc = json!({ "meta": meta, "result": outcome.json });
        return Ok(serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())? + "\n");
    }
    let mut text = format!(
        "# census {}\n# command: {}\n# flags: {}\n# seed: {}\n",
        env!("CARGO_PKG_VERSION"),
        cli.command.name(),
        meta["flags"],
        cli.command
            .seed()
            .map_or("none".to_string(), |s| s.to_string()),
    );
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&outcome.columns)
        .map_err(|e| e.to_string())?;
    for row in &outcome.rows {
        w.write_record(row).map_err(|e| e.to_string())?;
    }
    let body = w.into_inner().map_err(|e| e.to_string())?;
    text.push_str(&String::from_utf8(body).map_err(|e| e.to_string())?);
    Ok(text)
}

fn read_presentation(path: &Path, reduce: bool) -> Run<Presentation> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Ok(Presentation::parse(&text, reduce)?)
}

fn dispatch(cli: &Cli) -> Run<Outcome> {
    let g = &cli.global;
    let word = |s: &str| Word::parse(s, g.reduce);
    let show = |w: &Word| w.to_text(g.numeric);
    match &cli.command {
        Command::Count(a) => {
            let mut columns = vec!["n", "gamma_free", "gamma_cr", "rho_free", "rho_cr"];
            if a.enumerate {
                columns.extend(["enumerated_free", "enumerated_cr"]);
            }
            let mut rows = Vec::new();
            for n in 1..=a.n_max {
                let mut row = vec![
                    n.to_string(),
                    words::gamma(a.k, n, WordSet::Free).to_string(),
                    words::gamma(a.k, n, WordSet::CyclicallyReduced).to_string(),
                    words::rho(a.k, n, WordSet::Free).to_string(),
                    words::rho(a.k, n, WordSet::CyclicallyReduced).to_string(),
                ];
                if a.enumerate {
                    for set in [WordSet::Free, WordSet::CyclicallyReduced] {
                        row.push(words::par_count(a.k, n, set, g.cap, |_| 1)?.to_string());
                    }
                }
                rows.push(row);
            }
            let json = table_json(&columns, &rows);
            Ok(Outcome::table(&columns, rows, json))
        }
        Command::Rivin(a) => {
            let columns = ["n", "formula", "brute_force", "equal"];
            let mut rows = Vec::new();
            for n in 1..=a.n_max {
                let formula = words::rivin_formula(a.k, n);
                let brute = words::par_count(a.k, n, WordSet::CyclicallyReduced, g.cap, |_| 1)?;
                rows.push(vec![
                    n.to_string(),
                    formula.to_string(),
                    brute.to_string(),
                    (formula == brute.into()).to_string(),
                ]);
            }
            let json = table_json(&columns, &rows);
            Ok(Outcome::table(&columns, rows, json))
        }
        Command::Orbits(a) => {
            let method = match a.method {
                MethodArg::Canonicalize => OrbitMethod::Canonicalize,
                MethodArg::Burnside => OrbitMethod::Burnside,
            };
            let lengths: Vec<usize> = match (a.n, a.n_max) {
                (Some(n), _) => vec![n],
                (None, Some(m)) => (1..=m).collect(),
                (None, None) => unreachable!("clap requires one"),
            };
            let columns = [
                "n",
                "gamma_cr",
                "orbit_count",
                "ratio_numerator",
                "ratio_denominator",
            ];
            let mut rows = Vec::new();
            for n in lengths {
                let r = symmetry::census_row(a.k, n, method, g.cap)?;
                rows.push(vec![
                    r.n.to_string(),
                    r.gamma_cr,
                    r.orbit_count,
                    r.ratio_numerator,
                    r.ratio_denominator,
                ]);
            }
            let json = table_json(&columns, &rows);
            Ok(Outcome::table(&columns, rows, json))
        }
        Command::GenericFraction(a) => generic_fraction(a),
        Command::Cprime(a) => {
            let x = word(&a.word)?;
            let r = genericity::satisfies_c_prime(&x, a.lambda)?;
            Ok(Outcome::record(
                vec![
                    ("word", show(&x)),
                    ("lambda", a.lambda.to_string()),
                    ("satisfied", r.satisfied.to_string()),
                    ("max_piece", r.max_piece.to_string()),
                    ("threshold", r.threshold.to_string()),
                ],
                json!({"word": show(&x), "lambda": a.lambda.to_string(), "report": r}),
            ))
        }
        Command::Encode(a) => {
            let p = read_presentation(&a.input, g.reduce)?;
            let e = presentations::encode(&p)?;
            let bound = presentations::encoding_length_bound(&p);
            Ok(Outcome::record(
                vec![
                    ("six_letter", e.six_letter.clone()),
                    ("binary", e.binary.clone()),
                    ("length", e.six_letter.len().to_string()),
                    ("bits", e.binary.len().to_string()),
                    ("length_bound", bound.to_string()),
                    ("ell", p.ell().to_string()),
                    ("ell_1", p.ell_1().to_string()),
                ],
                json!({
                    "six_letter": e.six_letter,
                    "binary": e.binary,
                    "length": e.six_letter.len(),
                    "length_bound": bound,
                    "ell": p.ell(),
                    "ell_1": p.ell_1(),
                }),
            ))
        }
        Command::Tietze(a) => {
            let p = read_presentation(&a.input, g.reduce)?;
            let out = presentations::tietze_cleanup(&p, a.no_two_torsion)?;
            let q = &out.presentation;
            let rels: Vec<String> = q.relators().iter().map(show).collect();
            let mut fields = vec![("gens", q.generators().to_string())];
            fields.extend(rels.iter().map(|r| ("rel", r.clone())));
            fields.push(("ell_before", p.ell().to_string()));
            fields.push(("ell_after", q.ell().to_string()));
            for s in &out.steps {
                fields.push((
                    "step",
                    format!(
                        "{}: generator {} -> {}",
                        s.relator, s.eliminated_generator, s.replacement
                    ),
                ));
            }
            Ok(Outcome::record(
                fields,
                json!({
                    "gens": q.generators(),
                    "relators": rels,
                    "ell_before": p.ell(),
                    "ell_after": q.ell(),
                    "steps": out.steps,
                    "presentation": q.to_file_string(g.numeric),
                }),
            ))
        }
        Command::Dehn(a) => {
            let r = word(&a.relator)?;
            let w = word(&a.word)?;
            let (reduced, trace) = presentations::dehn_reduce(&r, &w)?;
            let mut fields = vec![
                ("relator", show(&r)),
                ("word", show(&w)),
                ("reduced", show(&reduced)),
                ("member", reduced.is_empty().to_string()),
                ("steps", trace.steps.len().to_string()),
            ];
            for s in &trace.steps {
                fields.push((
                    "step",
                    format!(
                        "at {}: {} -> {} ({} -> {})",
                        s.position, s.replaced, s.replacement, s.length_before, s.length_after
                    ),
                ));
            }
            Ok(Outcome::record(
                fields,
                json!({
                    "relator": show(&r),
                    "word": show(&w),
                    "reduced": show(&reduced),
                    "member": reduced.is_empty(),
                    "trace": trace,
                }),
            ))
        }
        Command::Search(a) => {
            let p = read_presentation(&a.input, g.reduce)?;
            match presentations::search_isomorphic(&p, &a.opts.class(), &a.opts.budget()) {
                Ok(found) => {
                    let maps = |imgs: &[Word]| {
                        imgs.iter()
                            .enumerate()
                            .map(|(i, w)| format!("{}->{}", i + 1, show(w)))
                            .collect::<Vec<_>>()
                            .join(" ")
                    };
                    let canon = symmetry::canonical_form(&found.relator, a.opts.k)?;
                    Ok(Outcome::record(
                        vec![
                            ("found", "true".into()),
                            ("relator", show(&found.relator)),
                            ("canonical_form", show(&canon)),
                            ("h", maps(&found.h)),
                            ("h_prime", maps(&found.h_prime)),
                            ("depth", found.depth.to_string()),
                            ("size", found.size.to_string()),
                            ("tuples_checked", found.tuples_checked.to_string()),
                        ],
                        json!({
                            "found": true,
                            "relator": show(&found.relator),
                            "canonical_form": show(&canon),
                            "h": found.h.iter().map(show).collect::<Vec<_>>(),
                            "h_prime": found.h_prime.iter().map(show).collect::<Vec<_>>(),
                            "depth": found.depth,
                            "size": found.size,
                            "tuples_checked": found.tuples_checked,
                        }),
                    ))
                }
                Err(Error::NotFound) => Ok(Outcome::record(
                    vec![("found", "false".into())],
                    json!({"found": false}),
                )),
                Err(e) => Err(e.into()),
            }
        }
        Command::Recover(a) => {
            let prefix = word(&a.prefix)?;
            let got = match &a.candidate {
                Some(v) => presentations::recover_from_candidate(&word(v)?, &prefix, a.opts.k),
                None => {
                    let path = a.input.as_ref().expect("clap requires input or candidate");
                    let p = read_presentation(path, g.reduce)?;
                    presentations::recover_relator(&p, &prefix, &a.opts.class(), &a.opts.budget())
                }
            };
            let (status, relator) = match got {
                Ok(r) => ("recovered".to_string(), Some(show(&r))),
                Err(Error::NotFound) => ("not-found".to_string(), None),
                Err(Error::Ambiguous(n)) => (format!("ambiguous ({n} matches)"), None),
                Err(e) => return Err(e.into()),
            };
            let mut fields = vec![("status", status.clone())];
            if let Some(r) = &relator {
                fields.push(("relator", r.clone()));
            }
            Ok(Outcome::record(
                fields,
                json!({"status": status, "relator": relator}),
            ))
        }
        Command::Kolmogorov(a) => kolmogorov(a, g),
        Command::Verify(a) => {
            let results = match a.criterion {
                Some(id) => vec![verify::run_one(id, a.seed).expect("range checked by clap")],
                None => verify::run_all(a.seed),
            };
            let columns = ["id", "name", "passed", "detail"];
            let rows: Vec<Vec<String>> = results
                .iter()
                .map(|r| {
                    vec![
                        r.id.to_string(),
                        r.name.to_string(),
                        r.passed.to_string(),
                        r.detail.clone(),
                    ]
                })
                .collect();
            let mut out = Outcome::table(&columns, rows, json!(results));
            if results.iter().any(|r| !r.passed) {
                out.exit = EXIT_CHECK_FAILED;
            }
            Ok(out)
        }
    }
}

fn table_json(columns: &[&str], rows: &[Vec<String>]) -> Value {
    Value::Array(
        rows.iter()
            .map(|row| {
                Value::Object(
                    columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| (c.to_string(), Value::String(v.clone())))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn generic_fraction(a: &FractionArgs) -> Run<Outcome> {
    let tau = || -> Run<Relabeling> {
        let spec = a
            .tau
            .as_deref()
            .ok_or_else(|| Error::InvalidArgument("--tau is required for this predicate".into()))?;
        Ok(Relabeling::parse(a.k, spec)?)
    };
    let predicate = match a.predicate {
        PredicateArg::ESet => Predicate::ESet,
        PredicateArg::SSet => Predicate::SSet(tau()?),
        PredicateArg::SPrime => Predicate::SPrime(tau()?),
        PredicateArg::Cprime => Predicate::CPrime,
    };
    let eval = predicate.evaluator(a.k, a.lambda)?;
    let complement = a.complement;
    let pred = move |x: &Word| eval(x) != complement;
    let mut estimates = Vec::new();
    for &n in &a.n {
        if n == 0 {
            return Err(Error::InvalidArgument("lengths must be positive".into()).into());
        }
        estimates.push(genericity::density_estimate(
            a.k,
            n,
            a.samples,
            a.seed,
            a.exact_cap,
            &pred,
        )?);
    }
    let columns = ["n", "samples", "hits", "density", "ci_halfwidth", "exact"];
    let mut rows: Vec<Vec<String>> = estimates
        .iter()
        .map(|e| {
            vec![
                e.n.to_string(),
                e.samples.to_string(),
                e.hits.to_string(),
                format!("{:.6}", e.density),
                format!("{:.6}", e.ci_halfwidth),
                e.exact.to_string(),
            ]
        })
        .collect();
    let series = DensitySeries::from_estimates(&estimates, a.seed);
    let slope = if a.fit {
        Some(genericity::decay_fit(&series).map_err(Failure::from)?)
    } else {
        None
    };
    let mut json = json!({
        "predicate": predicate.name(),
        "complement": complement,
        "series": series,
        "estimates": estimates,
    });
    if let Some(s) = slope {
        json["decay_slope"] = json!(s);
        rows.push(vec![
            "decay_slope".into(),
            String::new(),
            String::new(),
            format!("{s:.6}"),
            String::new(),
            String::new(),
        ]);
    }
    Ok(Outcome::table(&columns, rows, json))
}

fn kolmogorov(a: &KolmogorovArgs, g: &GlobalArgs) -> Run<Outcome> {
    if let Some(text) = &a.word {
        let x = Word::parse(text, g.reduce)?;
        let e = complexity::c_est(&x, a.k)?;
        return Ok(Outcome::record(
            vec![
                ("word", x.to_text(g.numeric)),
                ("bits", e.bits.to_string()),
                ("scheme", e.scheme.name().into()),
                (
                    "direct_bound",
                    complexity::direct_bound(a.k, x.len()).to_string(),
                ),
            ],
            json!(e),
        ));
    }
    let seed = a.seed.expect("clap requires a seed without --word");
    let r = complexity::incompressibility_experiment(a.k, a.n, a.c, a.samples, seed)?;
    let histogram: Vec<String> = r
        .scheme_histogram
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect();
    Ok(Outcome::record(
        vec![
            ("k", r.k.to_string()),
            ("n", r.n.to_string()),
            ("c", r.c.to_string()),
            ("samples", r.samples.to_string()),
            ("threshold_bits", r.threshold_bits.to_string()),
            ("incompressible", r.incompressible.to_string()),
            ("fraction", format!("{:.6}", r.fraction)),
            ("paper_bound", format!("{:.6}", r.paper_bound)),
            ("minus_log2_mu", format!("{:.6}", r.minus_log2_mu)),
            ("delta", format!("{}", r.delta)),
            ("median_bits", r.median_bits.to_string()),
            ("scheme_histogram", histogram.join(" ")),
        ],
        json!(r),
    ))
}
