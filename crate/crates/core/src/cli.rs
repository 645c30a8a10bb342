//! Command-line front end. [`run`] is the whole program minus process
//! setup, so it can be driven from tests.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bordism::{ProfileCache, SwProfile};
use crate::manifolds::ManifoldExpr;
use crate::theorems::{self, FamilyReport, FamilyTag, PredicateReport, Prop5Report, ScanReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "bordism",
    version,
    about = "Stiefel-Whitney numbers and unoriented bordism of Dold and Milnor manifolds"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write the report to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Worker threads (default: one per core).
    #[arg(long, global = true, value_name = "N", value_parser = clap::value_parser!(u32).range(1..))]
    jobs: Option<u32>,

    /// Profile cache file: entries are loaded before and appended after the run.
    #[arg(long, global = true, value_name = "PATH", env = "BORDISM_CACHE")]
    cache: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the total Stiefel-Whitney class.
    SwClass { manifold: String },
    /// Print every Stiefel-Whitney number.
    SwNumbers { manifold: String },
    /// Decide whether two manifolds are bordant.
    Bordant { left: String, right: String },
    /// Decide whether a manifold bounds.
    Bounds { manifold: String },
    /// Euler characteristic mod 2, by formula and by the top Stiefel-Whitney number.
    Euler { manifold: String },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 16)]
        max_dim: u32,
    },
    /// Classify every Milnor manifold up to a dimension and search for bordant Dold manifolds.
    Scan {
        #[arg(long, default_value_t = 16)]
        max_dim: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Remark1,
    Prop1,
    Prop2,
    Prop3,
    Prop4,
    Prop5,
    Result2,
    Result3,
}

/// A rendered report plus the exit status it implies.
struct Outcome {
    text: String,
    json: serde_json::Value,
    status: i32,
}

/// Parse `args` (including the program name), execute, and write the report
/// to `stdout` or the `--out` file. Diagnostics go to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return status;
        }
    };

    let cache = ProfileCache::new();
    if let Some(path) = &cli.cache {
        load_cache(path, &cache, stderr);
    }

    let outcome = match cli.jobs {
        Some(jobs) => match rayon::ThreadPoolBuilder::new()
            .num_threads(jobs as usize)
            .build()
        {
            Ok(pool) => pool.install(|| execute(&cli.command, &cache)),
            Err(e) => Err(format!("cannot start worker pool: {e}")),
        },
        None => execute(&cli.command, &cache),
    };
    let outcome = match outcome {
        Ok(o) => o,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_USAGE;
        }
    };

    let mut rendered = match cli.format {
        Format::Text => outcome.text,
        Format::Json => serde_json::to_string_pretty(&outcome.json).expect("report serializes"),
    };
    if !rendered.ends_with('\n') {
        rendered.push('\n');
    }

    let written = match &cli.out {
        Some(path) => std::fs::write(path, rendered.as_bytes())
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => stdout
            .write_all(rendered.as_bytes())
            .map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        let _ = writeln!(stderr, "error: {msg}");
        return EXIT_USAGE;
    }

    if let Some(path) = &cli.cache {
        if let Err(e) = append_cache(path, &cache) {
            let _ = writeln!(
                stderr,
                "warning: cannot update cache {}: {e}",
                path.display()
            );
        }
    }
    outcome.status
}

fn parse(descriptor: &str) -> Result<ManifoldExpr, String> {
    descriptor
        .parse()
        .map_err(|e| format!("`{descriptor}`: {e}"))
}

fn execute(command: &Command, cache: &ProfileCache) -> Result<Outcome, String> {
    match command {
        Command::SwClass { manifold } => Ok(sw_class(&parse(manifold)?)),
        Command::SwNumbers { manifold } => {
            let m = parse(manifold)?;
            Ok(profile_outcome(&m, &cache.profile(&m)))
        }
        Command::Bordant { left, right } => {
            Ok(bordant_outcome(&parse(left)?, &parse(right)?, cache))
        }
        Command::Bounds { manifold } => {
            let m = parse(manifold)?;
            let bounds = cache.bounds(&m);
            Ok(Outcome {
                text: format!("{m} (dim {}) bounds: {bounds}", m.dimension()),
                json: json!({ "manifold": m, "dim": m.dimension(), "bounds": bounds }),
                status: EXIT_OK,
            })
        }
        Command::Euler { manifold } => Ok(euler_outcome(&parse(manifold)?, cache)),
        Command::Verify { suite, max_dim } => Ok(verify(*suite, *max_dim, cache)),
        Command::Scan { max_dim } => Ok(scan_outcome(&theorems::conjecture_scan(*max_dim, cache))),
    }
}

fn bit(b: bool) -> u8 {
    u8::from(b)
}

fn sw_class(m: &ManifoldExpr) -> Outcome {
    let class = m.total_sw_class();
    let ring = class.ring().clone();
    let monomials: Vec<String> = class
        .terms()
        .iter()
        .map(|t| ring.format_monomial(t))
        .collect();
    let mut text = format!("manifold: {m}\nring: {ring}\n");
    if m.is_milnor() {
        text.push_str("note: Milnor classes are given in the ambient ring of the product of projective spaces\n");
    }
    let _ = writeln!(text, "W = {class}");
    Outcome {
        text,
        json: json!({ "manifold": m, "ring": ring.to_string(), "monomials": monomials }),
        status: EXIT_OK,
    }
}

fn profile_outcome(m: &ManifoldExpr, profile: &SwProfile) -> Outcome {
    let partitions = profile.partitions();
    let width = partitions
        .iter()
        .map(|p| p.to_string().len())
        .max()
        .unwrap_or(0)
        .max(9);
    let mut text = format!(
        "manifold: {m}\ndim: {}\n{:<width$}  bit\n",
        profile.dim(),
        "partition"
    );
    for (p, &b) in partitions.iter().zip(profile.bits()) {
        let _ = writeln!(text, "{:<width$}  {}", p.to_string(), bit(b));
    }
    let _ = write!(text, "bits: {}", profile.bit_string());
    Outcome {
        text,
        json: serde_json::to_value(profile.report(m)).expect("profile serializes"),
        status: EXIT_OK,
    }
}

fn bordant_outcome(m: &ManifoldExpr, n: &ManifoldExpr, cache: &ProfileCache) -> Outcome {
    let cmp = cache.compare(m, n);
    let mut text = format!("{m} ~ {n}: {}", cmp.bordant);
    let note = (cmp.left_dim != cmp.right_dim)
        .then(|| format!("dimensions differ ({} vs {})", cmp.left_dim, cmp.right_dim));
    if let Some(note) = &note {
        let _ = write!(text, "\nnote: {note}");
    }
    if !cmp.mismatches.is_empty() {
        let parts: Vec<String> = cmp.mismatches.iter().map(ToString::to_string).collect();
        let _ = write!(text, "\nmismatched partitions: {}", parts.join(" "));
    }
    Outcome {
        text,
        json: json!({
            "left": m,
            "right": n,
            "left_dim": cmp.left_dim,
            "right_dim": cmp.right_dim,
            "bordant": cmp.bordant,
            "mismatches": cmp.mismatches,
            "note": note,
        }),
        status: EXIT_OK,
    }
}

fn euler_outcome(m: &ManifoldExpr, cache: &ProfileCache) -> Outcome {
    let formula = m.euler_mod2();
    let profile = cache.profile(m);
    // [dim] is the first partition in canonical order
    let top = profile.bits()[0];
    let agree = formula == top;
    Outcome {
        text: format!(
            "{m}: euler mod 2 by formula = {}, by top Stiefel-Whitney number = {}{}",
            bit(formula),
            bit(top),
            if agree { "" } else { " (DISAGREE)" }
        ),
        json: json!({
            "manifold": m,
            "dim": m.dimension(),
            "euler_mod2_formula": bit(formula),
            "euler_mod2_top_sw": bit(top),
            "agree": agree,
        }),
        status: if agree { EXIT_OK } else { EXIT_FAILED },
    }
}

fn status_of(passed: bool) -> i32 {
    if passed {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

fn verify(suite: Suite, max_dim: u32, cache: &ProfileCache) -> Outcome {
    let family = |tag| family_outcome(&theorems::verify_family(tag, max_dim, cache));
    match suite {
        Suite::Remark1 => family(FamilyTag::Remark1),
        Suite::Prop1 => family(FamilyTag::Prop1),
        Suite::Prop2 => family(FamilyTag::Prop2),
        Suite::Prop3 => family(FamilyTag::Prop3),
        Suite::Prop4 => family(FamilyTag::Prop4),
        Suite::Prop5 => prop5_outcome(&theorems::prop5_check(max_dim, cache)),
        Suite::Result2 => {
            predicate_outcome("result2", &theorems::check_milnor_predicate(max_dim, cache))
        }
        Suite::Result3 => {
            predicate_outcome("result3", &theorems::check_dold_predicate(max_dim, cache))
        }
    }
}

fn pass_fail(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn family_outcome(report: &FamilyReport) -> Outcome {
    let mut text = String::new();
    for v in &report.pairs {
        let _ = write!(
            text,
            "{} dim {:>2}  {} ~ {}  [{}]",
            pass_fail(v.bordant),
            v.dim,
            v.pair.milnor,
            v.pair.partner,
            v.pair.parameters
        );
        if !v.mismatches.is_empty() {
            let parts: Vec<String> = v.mismatches.iter().map(ToString::to_string).collect();
            let _ = write!(text, "  mismatches: {}", parts.join(" "));
        }
        text.push('\n');
    }
    let _ = write!(
        text,
        "{} (max dim {}): {} passed, {} failed",
        report.family, report.dim_cap, report.passed, report.failed
    );
    Outcome {
        text,
        json: serde_json::to_value(report).expect("report serializes"),
        status: status_of(report.all_passed()),
    }
}

fn prop5_outcome(report: &Prop5Report) -> Outcome {
    let mut text = String::new();
    for c in &report.cases {
        if c.bounds {
            let _ = writeln!(text, "SKIP dim {:>2}  {} bounds", c.dim, c.manifold);
            continue;
        }
        let dolds: Vec<String> = c
            .nonbounding_dolds
            .iter()
            .map(ToString::to_string)
            .collect();
        let _ = writeln!(
            text,
            "CHECK dim {:>2}  {}  euler {}  non-bounding Dolds: {}",
            c.dim,
            c.manifold,
            bit(c.euler_mod2),
            if dolds.is_empty() {
                "none".to_string()
            } else {
                dolds.join(" ")
            }
        );
    }
    for v in &report.violations {
        let _ = writeln!(text, "VIOLATION {v}");
    }
    let _ = write!(
        text,
        "prop5 (max dim {}): {} checked, {} skipped (bounding), {} violations",
        report.dim_cap,
        report.checked,
        report.skipped_bounding,
        report.violations.len()
    );
    Outcome {
        text,
        json: serde_json::to_value(report).expect("report serializes"),
        status: status_of(report.all_passed()),
    }
}

fn predicate_outcome(name: &str, report: &PredicateReport) -> Outcome {
    let mut text = String::new();
    for d in &report.disagreements {
        let _ = writeln!(
            text,
            "FAIL {}: predicate says {}, exact computation says {}",
            d.manifold, d.predicate, d.exact
        );
    }
    let _ = write!(
        text,
        "{name} (max dim {}): {} manifolds checked, {} bound, {} disagreements",
        report.dim_cap,
        report.checked,
        report.bounding,
        report.disagreements.len()
    );
    let mut json = serde_json::to_value(report).expect("report serializes");
    json["suite"] = json!(name);
    Outcome {
        text,
        json,
        status: status_of(report.all_passed()),
    }
}

fn scan_outcome(report: &ScanReport) -> Outcome {
    let mut text = format!(
        "{:>3}  {:<10} {:<7} {:<8} {:<18} dold_matches\n",
        "dim", "manifold", "bounds", "covered", "parameters"
    );
    for c in &report.candidates {
        let covered = c
            .covered_by
            .map(|t| format!("{t:?}"))
            .unwrap_or_else(|| "-".into());
        let params = c
            .parameters
            .map(|p| p.to_string())
            .unwrap_or_else(|| "-".into());
        let matches: Vec<String> = c.dold_matches.iter().map(ToString::to_string).collect();
        let _ = writeln!(
            text,
            "{:>3}  {:<10} {:<7} {:<8} {:<18} {}",
            c.dim,
            c.manifold.to_string(),
            c.bounds,
            covered,
            params,
            if matches.is_empty() {
                "-".to_string()
            } else {
                matches.join(" ")
            }
        );
    }
    let residual = report.residual().count();
    let counterexamples = report.counterexamples();
    let _ = write!(
        text,
        "{} candidates, {} residual non-bounding, {} residual with a bordant Dold manifold",
        report.candidates.len(),
        residual,
        counterexamples.len()
    );
    Outcome {
        text,
        json: serde_json::to_value(report).expect("report serializes"),
        status: status_of(counterexamples.is_empty()),
    }
}

/// Cache lines are `<descriptor>\t<bits>`. Malformed lines are skipped with
/// a warning.
fn load_cache(path: &Path, cache: &ProfileCache, stderr: &mut dyn Write) {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return,
        Err(e) => {
            let _ = writeln!(stderr, "warning: cannot read cache {}: {e}", path.display());
            return;
        }
    };
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let entry = line
            .map_err(|e| e.to_string())
            .and_then(|line| parse_cache_line(&line));
        match entry {
            Ok(Some((m, profile))) => {
                cache.insert(&m, profile);
            }
            Ok(None) => {}
            Err(msg) => {
                let _ = writeln!(
                    stderr,
                    "warning: ignoring cache entry {}:{}: {msg}",
                    path.display(),
                    lineno + 1
                );
            }
        }
    }
}

fn parse_cache_line(line: &str) -> Result<Option<(ManifoldExpr, SwProfile)>, String> {
    if line.trim().is_empty() {
        return Ok(None);
    }
    let (descriptor, bits) = line.split_once('\t').ok_or("missing tab separator")?;
    let m: ManifoldExpr = descriptor.parse().map_err(|e| format!("{e}"))?;
    if m.to_string() != descriptor {
        return Err(format!("`{descriptor}` is not in normal form"));
    }
    let profile =
        SwProfile::from_bit_string(m.dimension(), bits.trim_end()).map_err(|e| e.to_string())?;
    Ok(Some((m, profile)))
}

fn append_cache(path: &Path, cache: &ProfileCache) -> std::io::Result<()> {
    let fresh = cache.take_fresh();
    if fresh.is_empty() {
        return Ok(());
    }
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    let mut buf = String::new();
    for (key, profile) in fresh {
        let _ = writeln!(buf, "{key}\t{}", profile.bit_string());
    }
    file.write_all(buf.as_bytes())
}
