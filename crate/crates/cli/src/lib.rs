//! Command-line front end for `latinca`.
//!
//! Every command builds a serializable report; [`run`] renders it as JSON or
//! text and maps the outcome to an exit code:
//! `0` success, `1` property violated, `2` usage or parse error,
//! `3` budget exceeded.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use latinca::debruijn::{nth_walk, GraphExport};
use latinca::hypercube::Violation;
use latinca::rule::{restriction_is_permutation, FreeBlock, RuleRepr};
use latinca::toeplitz::{count_nonsingular_toeplitz, det_of_window};
use latinca::{
    build_graph, enumerate_paths, latin_hypercube_count, windows, Budget, CellVector, DetGraph,
    Error, FieldSpec, Hypercube, HypercubeDump, LatinCount, LinearRule, LocalRule, Rule, Symbol,
    ToeplitzCount, ToeplitzWindow,
};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

/// Rule spaces up to this size are verified exhaustively unless told otherwise.
pub const DEFAULT_VERIFY_LIMIT: u128 = 1 << 16;

/// Automatic verification also stays under this many entry evaluations.
pub const DEFAULT_VERIFY_WORK: u128 = 1 << 28;

const RESTRICTION_SAMPLES: usize = 16;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    /// Two independent verdicts differ. Always fatal.
    #[error("verdicts disagree: {0}")]
    Disagreement(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::BudgetExceeded { .. }) => EXIT_BUDGET,
            CliError::Disagreement(_) => EXIT_VIOLATED,
            _ => EXIT_USAGE,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "latinca",
    version,
    about = "Latin hypercubes from linear bipermutive CA"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Output format; `dot` applies to `graph` only.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for exhaustive checks (default: all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Cap on enumerated objects and materialized entries, e.g. `16777216` or `2^24`.
    #[arg(long, global = true, env = "LATINCA_BUDGET", value_parser = parse_size)]
    pub budget: Option<u64>,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check whether a rule generates a Latin hypercube.
    Check {
        #[command(flatten)]
        rule: RuleArgs,
        #[command(flatten)]
        verify: VerifyArgs,
    },
    /// Count Latin-hypercube-generating rules for (q, b, k).
    Count {
        #[command(flatten)]
        params: Params,
        /// Dimension.
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        verify: VerifyArgs,
    },
    /// Count nonsingular b x b Toeplitz matrices over F_q.
    Toeplitz {
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        verify: VerifyArgs,
    },
    /// Export the determinant graph.
    Graph {
        #[command(flatten)]
        params: Params,
    },
    /// Build Latin-generating rules from walks on the determinant graph.
    Synth {
        #[command(flatten)]
        params: Params,
        /// Dimension (implied by --path).
        #[arg(long)]
        k: Option<usize>,
        /// 0-based position of the walk in lexicographic order.
        #[arg(long, conflicts_with_all = ["all", "path"])]
        index: Option<u128>,
        /// Every walk.
        #[arg(long, conflicts_with = "path")]
        all: bool,
        /// Explicit walk: windows separated by `;`, coefficients by `,`
        /// (e.g. `0,1,0;0,1,1`), or digit strings when q <= 10 (`010;011`).
        #[arg(long)]
        path: Option<String>,
    },
    /// Print every entry of a rule's hypercube.
    Dump {
        #[command(flatten)]
        rule: RuleArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Params {
    /// Field order, a prime power.
    #[arg(long, default_value_t = 2)]
    pub q: u32,
    /// Block size.
    #[arg(long, default_value_t = 1)]
    pub b: usize,
}

#[derive(Debug, Clone, Args)]
pub struct RuleArgs {
    #[arg(long, default_value_t = 2)]
    pub q: u32,
    /// Block size (defaults: 1 for inline coefficients, d - 1 for general rules).
    #[arg(long)]
    pub b: Option<usize>,
    /// Dimension (inferred from the coefficient count when omitted).
    #[arg(long)]
    pub k: Option<usize>,
    /// Interior coefficients a_2..a_{d-1}, comma separated.
    #[arg(
        long,
        conflicts_with = "rule_file",
        required_unless_present = "rule_file"
    )]
    pub coeffs: Option<String>,
    /// JSON rule file: `{q, b, k, coeffs}` or `{q, d, g_table}`.
    #[arg(long)]
    pub rule_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Default, Args)]
pub struct VerifyArgs {
    /// Force the exhaustive cross-check.
    #[arg(long, overrides_with = "no_verify")]
    pub verify: bool,
    /// Skip the exhaustive cross-check.
    #[arg(long)]
    pub no_verify: bool,
}

impl VerifyArgs {
    fn resolve(self, space: u128) -> bool {
        if self.verify {
            true
        } else if self.no_verify {
            false
        } else {
            space <= DEFAULT_VERIFY_LIMIT
        }
    }

    fn forced(self) -> Option<bool> {
        if self.verify {
            Some(true)
        } else if self.no_verify {
            Some(false)
        } else {
            None
        }
    }
}

pub fn parse_size(s: &str) -> std::result::Result<u64, String> {
    let s = s.trim();
    let value = match s.split_once('^') {
        Some((base, exp)) => {
            let base: u64 = base.trim().parse().map_err(|e| format!("{s}: {e}"))?;
            let exp: u32 = exp.trim().parse().map_err(|e| format!("{s}: {e}"))?;
            base.checked_pow(exp).ok_or(format!("{s} overflows u64"))?
        }
        None => s.parse().map_err(|e| format!("{s}: {e}"))?,
    };
    if value == 0 {
        return Err("budget must be positive".into());
    }
    Ok(value)
}

pub fn budget_from(global: &GlobalArgs) -> Budget {
    let mut budget = Budget::default();
    if let Some(cap) = global.budget {
        budget.max_enumeration = cap;
        budget.max_entries = cap;
    }
    budget
}

fn parse_symbols(s: &str) -> CliResult<Vec<Symbol>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| CliError::Usage(format!("not a field symbol: {t:?}")))
        })
        .collect()
}

/// Reads a rule from inline coefficients or a rule file, returning it with its
/// block size.
pub fn load_rule(args: &RuleArgs) -> CliResult<(Rule, usize)> {
    if let Some(path) = &args.rule_file {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        let repr: RuleRepr = serde_json::from_str(&text).map_err(|source| CliError::Json {
            path: path.clone(),
            source,
        })?;
        let rule = Rule::try_from(repr)?;
        let b = match &rule {
            Rule::Linear(r) => {
                if args.b.is_some_and(|b| b != r.b()) {
                    return Err(CliError::Usage("--b differs from the rule file".into()));
                }
                r.b()
            }
            Rule::General(r) => args.b.unwrap_or(r.diameter() - 1),
        };
        return Ok((rule, b));
    }
    let coeffs = parse_symbols(args.coeffs.as_deref().unwrap_or_default())?;
    let field = FieldSpec::new(args.q)?;
    let b = args.b.unwrap_or(1);
    // |coeffs| = b(k-1) - 1.
    let k = match args.k {
        Some(k) => k,
        None => {
            if (coeffs.len() + 1) % b != 0 {
                return Err(CliError::Usage(format!(
                    "{} coefficients do not fit any k at b = {b}",
                    coeffs.len()
                )));
            }
            (coeffs.len() + 1) / b + 1
        }
    };
    Ok((Rule::Linear(LinearRule::new(&field, b, k, coeffs)?), b))
}

#[derive(Debug, Clone, Serialize)]
pub struct WindowReport {
    pub index: usize,
    pub label: String,
    #[serde(flatten)]
    pub window: ToeplitzWindow,
    pub det: Symbol,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub latin: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<Violation>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RestrictionReport {
    pub seed: u64,
    pub samples: usize,
    pub permutations: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub q: u32,
    pub b: usize,
    pub k: usize,
    pub rule: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<Symbol>>,
    pub windows: Vec<WindowReport>,
    /// All Toeplitz windows nonsingular (linear rules only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub toeplitz_latin: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_window: Option<usize>,
    /// Brute-force verdict over every line of the hypercube.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agree: Option<bool>,
    pub restrictions: RestrictionReport,
    pub latin: bool,
}

/// Toeplitz verdict, brute-force verdict when the hypercube fits the entry
/// budget (or when forced), and sampled border-block restriction checks.
pub fn cmd_check(
    rule: &Rule,
    b: usize,
    verify: VerifyArgs,
    seed: u64,
    budget: &Budget,
) -> CliResult<CheckReport> {
    let cube = Hypercube::new(rule, b)?;
    let (field, k) = (rule.field(), cube.k());
    let mut report = CheckReport {
        q: field.q(),
        b,
        k,
        rule: match rule {
            Rule::Linear(r) => r.formula(),
            Rule::General(r) => format!("general bipermutive, g = {:?}", r.g_table()),
        },
        coeffs: None,
        windows: Vec::new(),
        toeplitz_latin: None,
        failing_window: None,
        oracle: None,
        agree: None,
        restrictions: sample_restrictions(rule, b, seed)?,
        latin: false,
    };
    if let Rule::Linear(lin) = rule {
        report.coeffs = Some(lin.coeffs().to_vec());
        if k >= 3 {
            report.windows = windows(lin)?
                .into_iter()
                .enumerate()
                .map(|(i, w)| WindowReport {
                    index: i + 1,
                    label: w.label(),
                    det: det_of_window(&w).value(),
                    window: w,
                })
                .collect();
            report.failing_window = report.windows.iter().find(|w| w.det == 0).map(|w| w.index);
            report.toeplitz_latin = Some(report.failing_window.is_none());
        } else {
            // Squares from bipermutive rules are always Latin.
            report.toeplitz_latin = Some(true);
        }
    }
    let run_oracle = match verify.forced() {
        Some(forced) => forced,
        None => cube.entry_count() <= u128::from(budget.max_entries),
    };
    if run_oracle {
        let verdict = cube.is_latin(budget)?;
        report.oracle = Some(OracleReport {
            latin: verdict.is_latin(),
            violation: verdict.violation().cloned(),
        });
    }
    let oracle = report.oracle.as_ref().map(|o| o.latin);
    if let (Some(t), Some(o)) = (report.toeplitz_latin, oracle) {
        report.agree = Some(t == o);
        if t != o {
            return Err(CliError::Disagreement(format!(
                "{}: Toeplitz says {t}, brute force says {o}",
                report.rule
            )));
        }
    }
    let all_permutations = report.restrictions.permutations == report.restrictions.samples;
    report.latin = report.toeplitz_latin.or(oracle).unwrap_or(all_permutations);
    if !all_permutations && report.latin {
        return Err(CliError::Disagreement(format!(
            "{}: Latin but a border restriction is not a permutation",
            report.rule
        )));
    }
    Ok(report)
}

fn sample_restrictions(rule: &Rule, b: usize, seed: u64) -> CliResult<RestrictionReport> {
    let field = rule.field();
    let q = field.q();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut permutations = 0;
    for i in 0..RESTRICTION_SAMPLES {
        let fixed: Vec<Symbol> = (0..rule.diameter() - 1)
            .map(|_| rng.gen_range(0..q))
            .collect();
        let side = if i % 2 == 0 {
            FreeBlock::Left
        } else {
            FreeBlock::Right
        };
        let fixed = CellVector::new(field, fixed)?;
        if restriction_is_permutation(rule, b, side, &fixed)? {
            permutations += 1;
        }
    }
    Ok(RestrictionReport {
        seed,
        samples: RESTRICTION_SAMPLES,
        permutations,
    })
}

/// Size of the space an exhaustive Latin count walks over.
pub fn rule_space(q: u32, b: usize, k: usize) -> u128 {
    let q = u128::from(q);
    let exp = if k == 2 {
        q.checked_pow(b as u32 - 1).unwrap_or(u128::MAX)
    } else {
        (b * (k - 1) - 1) as u128
    };
    u32::try_from(exp)
        .ok()
        .and_then(|e| q.checked_pow(e))
        .unwrap_or(u128::MAX)
}

/// Whether `count` verifies by default: the rule space is at most
/// [`DEFAULT_VERIFY_LIMIT`], each hypercube fits the entry budget, and the
/// whole sweep stays under [`DEFAULT_VERIFY_WORK`] entry evaluations.
pub fn auto_verify(q: u32, b: usize, k: usize, budget: &Budget) -> bool {
    let space = rule_space(q, b, k);
    let entries = u32::try_from(b * k)
        .ok()
        .and_then(|e| u128::from(q).checked_pow(e))
        .unwrap_or(u128::MAX);
    let work = space.saturating_mul(entries).saturating_mul(k as u128);
    space <= DEFAULT_VERIFY_LIMIT
        && space <= u128::from(budget.max_enumeration)
        && entries <= u128::from(budget.max_entries)
        && work <= DEFAULT_VERIFY_WORK
}

pub fn cmd_count(
    q: u32,
    b: usize,
    k: usize,
    verify: VerifyArgs,
    budget: &Budget,
) -> CliResult<LatinCount> {
    let field = FieldSpec::new(q)?;
    if b == 0 {
        return Err(CliError::Usage("b must be at least 1".into()));
    }
    let verify = verify
        .forced()
        .unwrap_or_else(|| auto_verify(q, b, k, budget));
    Ok(latin_hypercube_count(&field, b, k, verify, budget)?)
}

pub fn cmd_toeplitz(
    q: u32,
    b: usize,
    verify: VerifyArgs,
    budget: &Budget,
) -> CliResult<ToeplitzCount> {
    let field = FieldSpec::new(q)?;
    let space = u32::try_from(2 * b - 1)
        .ok()
        .and_then(|e| u128::from(q).checked_pow(e))
        .unwrap_or(u128::MAX);
    Ok(count_nonsingular_toeplitz(
        &field,
        b,
        verify.resolve(space),
        budget,
    )?)
}

pub fn cmd_graph(q: u32, b: usize, budget: &Budget) -> CliResult<DetGraph> {
    if b == 0 {
        return Err(CliError::Usage("b must be at least 1".into()));
    }
    Ok(build_graph(&FieldSpec::new(q)?, b, budget)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct SynthRule {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<u128>,
    pub walk: Vec<String>,
    pub coeffs: Vec<Symbol>,
    pub rule: String,
    pub latin: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SynthReport {
    pub q: u32,
    pub b: usize,
    pub k: usize,
    pub rules: Vec<SynthRule>,
}

#[derive(Debug, Clone)]
pub enum SynthTarget {
    Index(u128),
    All,
    Path(String),
}

fn parse_path(q: u32, text: &str) -> CliResult<Vec<Vec<Symbol>>> {
    let windows: Vec<&str> = text
        .split(|c: char| c == ';' || c.is_whitespace() || c == '>')
        .map(|w| w.trim_matches(|c: char| c == '-' || c == '(' || c == ')' || c.is_whitespace()))
        .filter(|w| !w.is_empty())
        .collect();
    windows
        .iter()
        .map(|w| {
            if w.contains(',') {
                parse_symbols(w)
            } else if q <= 10 {
                w.chars()
                    .map(|c| {
                        c.to_digit(10)
                            .ok_or_else(|| CliError::Usage(format!("bad window {w:?}")))
                    })
                    .collect()
            } else {
                Err(CliError::Usage(format!(
                    "window {w:?} needs comma-separated coefficients when q > 10"
                )))
            }
        })
        .collect()
}

/// Rules fused from walks, each re-checked as in [`cmd_check`].
pub fn cmd_synth(
    q: u32,
    b: usize,
    k: Option<usize>,
    target: &SynthTarget,
    seed: u64,
    budget: &Budget,
) -> CliResult<SynthReport> {
    let g = cmd_graph(q, b, budget)?;
    let mut walks: Vec<(Option<u128>, Vec<usize>)> = Vec::new();
    let k = match target {
        SynthTarget::Path(text) => {
            let mut walk = Vec::new();
            for coeffs in parse_path(q, text)? {
                if coeffs.len() != 2 * b - 1 {
                    return Err(CliError::Usage(format!(
                        "window {coeffs:?} needs {} coefficients",
                        2 * b - 1
                    )));
                }
                let v = g.index_of(&coeffs).ok_or_else(|| {
                    CliError::Usage(format!("window {coeffs:?} has zero determinant"))
                })?;
                walk.push(v);
            }
            if walk.is_empty() {
                return Err(CliError::Usage("empty path".into()));
            }
            let implied = walk.len() + 2;
            if k.is_some_and(|k| k != implied) {
                return Err(CliError::Usage(format!(
                    "a path of {} windows means k = {implied}",
                    walk.len()
                )));
            }
            walks.push((None, walk));
            implied
        }
        SynthTarget::Index(n) => {
            let k = synth_k(k)?;
            walks.push((Some(*n), nth_walk(&g, k - 3, &BigUint::from(*n), budget)?));
            k
        }
        SynthTarget::All => {
            let k = synth_k(k)?;
            walks.extend(
                enumerate_paths(&g, k - 3, budget)?
                    .enumerate()
                    .map(|(i, w)| (Some(i as u128), w)),
            );
            k
        }
    };
    let mut rules = Vec::with_capacity(walks.len());
    for (index, walk) in walks {
        let rule = g.rule_from_walk(&walk)?;
        let check = cmd_check(
            &Rule::Linear(rule.clone()),
            b,
            VerifyArgs::default(),
            seed,
            budget,
        )?;
        if !check.latin {
            return Err(CliError::Disagreement(format!(
                "walk {walk:?} fused to a non-Latin rule {}",
                rule.formula()
            )));
        }
        rules.push(SynthRule {
            index,
            walk: walk.iter().map(|&v| g.vertex(v).label()).collect(),
            coeffs: rule.coeffs().to_vec(),
            rule: rule.formula(),
            latin: check.latin,
        });
    }
    Ok(SynthReport { q, b, k, rules })
}

fn synth_k(k: Option<usize>) -> CliResult<usize> {
    match k {
        Some(k) if k >= 3 => Ok(k),
        Some(k) => Err(CliError::Usage(format!("synthesis needs k >= 3, got {k}"))),
        None => Err(CliError::Usage("--k is required without --path".into())),
    }
}

pub fn cmd_dump(rule: &Rule, b: usize, budget: &Budget) -> CliResult<HypercubeDump> {
    Ok(HypercubeDump::new(rule, b, budget)?)
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn opt(v: &Option<BigUint>) -> String {
    v.as_ref().map_or("-".into(), ToString::to_string)
}

fn check_text(r: &CheckReport) -> String {
    let mut s = format!("rule  {}  (q={}, b={}, k={})\n", r.rule, r.q, r.b, r.k);
    for w in &r.windows {
        let _ = writeln!(s, "window {}  {}  det={}", w.index, w.label, w.det);
    }
    if let Some(i) = r.failing_window {
        let _ = writeln!(s, "failing window: {i}");
    }
    if let Some(o) = &r.oracle {
        let _ = writeln!(
            s,
            "brute force: {}",
            if o.latin { "latin" } else { "not latin" }
        );
        if let Some(v) = &o.violation {
            let _ = writeln!(
                s,
                "  value {} repeats along axis {} at {:?} (first at {})",
                v.value, v.axis, v.coords, v.first_at
            );
        }
    }
    let _ = writeln!(
        s,
        "restrictions: {}/{} permutations (seed {})",
        r.restrictions.permutations, r.restrictions.samples, r.restrictions.seed
    );
    let _ = writeln!(s, "latin: {}", r.latin);
    s
}

fn graph_text(g: &DetGraph) -> String {
    let mut s = format!(
        "q={} b={} vertices={} edges={} degree={}\n",
        g.field().q(),
        g.b(),
        g.vertex_count(),
        g.edge_count(),
        g.regular_degree()
            .map_or("irregular".into(), |d| d.to_string())
    );
    for (u, v) in g.edges() {
        let _ = writeln!(s, "{} -> {}", g.vertex(u).label(), g.vertex(v).label());
    }
    s
}

fn synth_text(r: &SynthReport) -> String {
    let mut s = String::new();
    for rule in &r.rules {
        if let Some(i) = rule.index {
            let _ = write!(s, "#{i}  ");
        }
        let _ = writeln!(s, "{}  =>  {}", rule.walk.join(" -> "), rule.rule);
    }
    s
}

fn wrong_format(cmd: &str, format: Format) -> CliError {
    CliError::Usage(format!("{cmd} has no {format:?} output"))
}

/// Runs one command, returning the rendered report and whether the property
/// under test held.
pub fn execute(cli: &Cli) -> CliResult<(String, bool)> {
    let g = &cli.global;
    let budget = budget_from(g);
    let format = g.format;
    match &cli.command {
        Command::Check { rule, verify } => {
            let (rule, b) = load_rule(rule)?;
            let r = cmd_check(&rule, b, *verify, g.seed, &budget)?;
            let body = match format {
                Format::Json => json(&r),
                Format::Text => check_text(&r),
                Format::Dot => return Err(wrong_format("check", format)),
            };
            Ok((body, r.latin))
        }
        Command::Count { params, k, verify } => {
            let r = cmd_count(params.q, params.b, *k, *verify, &budget)?;
            let body = match format {
                Format::Json => json(&r),
                Format::Text => format!(
                    "L(q={}, b={}, k={}) = {}\nwalks: {}\nexhaustive: {}\nmatch: {}\n",
                    r.q,
                    r.b,
                    r.k,
                    r.formula,
                    opt(&r.paths),
                    opt(&r.exhaustive),
                    r.agree
                ),
                Format::Dot => return Err(wrong_format("count", format)),
            };
            Ok((body, r.agree))
        }
        Command::Toeplitz { params, verify } => {
            let r = cmd_toeplitz(params.q, params.b, *verify, &budget)?;
            let body = match format {
                Format::Json => json(&r),
                Format::Text => format!(
                    "nonsingular {}x{} Toeplitz over F_{}: {}\nexhaustive: {}\nmatch: {}\n",
                    r.b,
                    r.b,
                    r.q,
                    r.formula,
                    opt(&r.exhaustive),
                    r.matches.map_or("-".into(), |m| m.to_string())
                ),
                Format::Dot => return Err(wrong_format("toeplitz", format)),
            };
            Ok((body, r.matches != Some(false)))
        }
        Command::Graph { params } => {
            let graph = cmd_graph(params.q, params.b, &budget)?;
            let body = match format {
                Format::Json => json::<GraphExport>(&graph.to_export()),
                Format::Text => graph_text(&graph),
                Format::Dot => graph.to_dot(),
            };
            Ok((body, true))
        }
        Command::Synth {
            params,
            k,
            index,
            all,
            path,
        } => {
            let target = match (index, all, path) {
                (Some(n), _, _) => SynthTarget::Index(*n),
                (_, true, _) => SynthTarget::All,
                (_, _, Some(p)) => SynthTarget::Path(p.clone()),
                _ => {
                    return Err(CliError::Usage(
                        "give one of --index, --all or --path".into(),
                    ))
                }
            };
            let r = cmd_synth(params.q, params.b, *k, &target, g.seed, &budget)?;
            let body = match format {
                Format::Json => json(&r),
                Format::Text => synth_text(&r),
                Format::Dot => return Err(wrong_format("synth", format)),
            };
            Ok((body, true))
        }
        Command::Dump { rule } => {
            let (rule, b) = load_rule(rule)?;
            let r = cmd_dump(&rule, b, &budget)?;
            let body = match format {
                Format::Json => json(&r),
                Format::Text => r.to_text(),
                Format::Dot => return Err(wrong_format("dump", format)),
            };
            Ok((body, true))
        }
    }
}

fn write_output(out: Option<&Path>, body: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, body).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    if let Some(n) = cli.global.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("latinca: cannot start {n} workers: {e}");
            return EXIT_USAGE;
        }
    }
    let outcome = execute(&cli).and_then(|(body, held)| {
        write_output(cli.global.out.as_deref(), &body)?;
        Ok(held)
    });
    match outcome {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_VIOLATED,
        Err(e) => {
            eprintln!("latinca: {e}");
            e.exit_code()
        }
    }
}
