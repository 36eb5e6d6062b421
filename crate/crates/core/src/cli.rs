//! Command-line front end: argument parsing, caps resolution, the verify
//! orchestrator and output rendering.
//!
//! Exit codes: 0 no violations, 1 a check was violated, 2 bad input,
//! 3 a cap was hit.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::catalog::{builtin_catalog_specs, builtin_module_specs};
use crate::dsl::{parse_catalog, parse_group_spec, GroupSpec};
use crate::error::{Error, Result};
use crate::group::{Caps, GroupTable};
use crate::theorems::{
    analysis_json, baer_reports, check_oracle_equivalence, check_schur_wiegold, check_theorem_b,
    hekster_sweep, kaloujnine_reports, lemma3_reports, CheckReport, Verdict,
};
use crate::zg_module::{
    build_module, check_lemma2, search_decomposition_failure, FiniteModule, SearchCaps,
};

pub const SCHEMA_VERSION: &str = "1";
pub const CAPS_ENV: &str = "HYPLAB_CAPS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "hyplab",
    version,
    about = "Central series, hypercenters and nilpotent residuals of finite groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Largest group order to construct.
    #[arg(long, global = true)]
    pub cap_order: Option<usize>,
    /// Largest group order whose subgroup lattice is enumerated.
    #[arg(long, global = true)]
    pub cap_subgroups: Option<usize>,
    /// Worker threads across catalog entries (0: one per core).
    #[arg(long, default_value_t = 0, global = true)]
    pub jobs: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Series, hypercenter and residual of one group.
    Analyze {
        /// Group spec, e.g. "C(2) x S(3)" or "perm(3; (1 2), (1 2 3))".
        spec: String,
    },
    /// Run checks across a group catalog.
    Verify {
        /// "builtin" or a file with one group spec per line.
        #[arg(long, default_value = "builtin")]
        catalog: String,
        /// Comma-separated; all checks when omitted.
        #[arg(long, value_enum, value_delimiter = ',')]
        checks: Vec<CheckKind>,
    },
    /// Series and Z-decomposition of finite modules.
    ModuleCheck {
        /// "builtin" or a JSON file.
        #[arg(default_value = "builtin")]
        source: String,
    },
    /// Sweep small modules for a missing Z-decomposition.
    Search {
        #[arg(long, value_enum, default_value_t = SearchKind::DecompositionFailure)]
        kind: SearchKind,
        /// Largest module order swept.
        #[arg(long, default_value_t = SearchCaps::default().max_module_order)]
        max_module_order: usize,
        /// Largest acting group built.
        #[arg(long, default_value_t = SearchCaps::default().max_acting_order)]
        max_acting_order: usize,
        /// Try generator pairs only when |Aut(A)| is at most this.
        #[arg(long, default_value_t = SearchCaps::default().pair_limit)]
        pair_limit: usize,
        /// Also sweep nilpotent acting groups.
        #[arg(long)]
        include_nilpotent: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SearchKind {
    DecompositionFailure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    SchurWiegold,
    TheoremB,
    BaerDuality,
    Hekster,
    Kaloujnine,
    Lemma3,
    Lemma2,
    OracleEquivalence,
}

impl CheckKind {
    pub const ALL: [CheckKind; 8] = [
        CheckKind::SchurWiegold,
        CheckKind::TheoremB,
        CheckKind::BaerDuality,
        CheckKind::Hekster,
        CheckKind::Kaloujnine,
        CheckKind::Lemma3,
        CheckKind::Lemma2,
        CheckKind::OracleEquivalence,
    ];
}

/// Applies `HYPLAB_CAPS` (`key=value` pairs, comma separated) to `base`.
pub fn caps_from_env(base: Caps, text: &str) -> Result<Caps> {
    let mut caps = base;
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| Error::input(format!("{CAPS_ENV}: expected key=value, got {item:?}")))?;
        let value: usize = value
            .trim()
            .parse()
            .map_err(|_| Error::input(format!("{CAPS_ENV}: {key} needs a number")))?;
        let slot = match key.trim() {
            "order" | "max_order" => &mut caps.max_order,
            "subgroups" | "max_subgroup_order" => &mut caps.max_subgroup_order,
            "subgroup_count" | "max_subgroup_count" => &mut caps.max_subgroup_count,
            "module_order" | "max_module_order" => &mut caps.max_module_order,
            "oracle_module_order" => &mut caps.oracle_module_order,
            other => return Err(Error::input(format!("{CAPS_ENV}: unknown cap {other:?}"))),
        };
        *slot = value;
    }
    Ok(caps)
}

/// Defaults, then the environment, then flags.
pub fn resolve_caps(cli: &Cli, env: Option<&str>) -> Result<Caps> {
    let mut caps = match env {
        Some(text) => caps_from_env(Caps::default(), text)?,
        None => Caps::default(),
    };
    if let Some(n) = cli.cap_order {
        caps.max_order = n;
    }
    if let Some(n) = cli.cap_subgroups {
        caps.max_subgroup_order = n;
    }
    Ok(caps)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub holds: usize,
    pub marginal: usize,
    pub violated: usize,
    pub skipped: usize,
}

impl Summary {
    pub fn of(reports: &[CheckReport]) -> Self {
        let mut s = Summary {
            total: reports.len(),
            ..Summary::default()
        };
        for r in reports {
            match r.verdict {
                Verdict::Holds => s.holds += 1,
                Verdict::Marginal => s.marginal += 1,
                Verdict::Violated => s.violated += 1,
                Verdict::Skipped => s.skipped += 1,
            }
        }
        s
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    pub reports: Vec<CheckReport>,
    pub summary: Summary,
}

impl VerifyOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.summary.violated > 0 {
            EXIT_VIOLATION
        } else {
            EXIT_OK
        }
    }
}

fn group_reports(group: &GroupTable, checks: &[CheckKind], caps: &Caps) -> Vec<CheckReport> {
    let mut out = Vec::new();
    for check in checks {
        match check {
            CheckKind::SchurWiegold => out.push(check_schur_wiegold(group)),
            CheckKind::TheoremB => out.push(check_theorem_b(group)),
            CheckKind::BaerDuality => out.extend(baer_reports(group)),
            CheckKind::Hekster => out.push(hekster_sweep(group, caps)),
            CheckKind::Kaloujnine => out.extend(kaloujnine_reports(group)),
            CheckKind::Lemma3 => out.extend(lemma3_reports(group)),
            CheckKind::OracleEquivalence => out.push(check_oracle_equivalence(group, caps)),
            CheckKind::Lemma2 => {}
        }
    }
    out
}

/// Runs `checks` over every group (catalog order preserved), then `lemma2`
/// over every module. An empty check list means all checks.
pub fn run_verify(
    groups: &[GroupTable],
    modules: &[FiniteModule],
    checks: &[CheckKind],
    caps: &Caps,
    jobs: usize,
) -> Result<VerifyOutcome> {
    let mut checks = if checks.is_empty() {
        CheckKind::ALL.to_vec()
    } else {
        checks.to_vec()
    };
    checks.sort();
    checks.dedup();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::input(format!("thread pool: {e}")))?;
    let mut reports: Vec<CheckReport> = pool.install(|| {
        groups
            .par_iter()
            .map(|g| group_reports(g, &checks, caps))
            .collect::<Vec<_>>()
            .concat()
    });
    if checks.contains(&CheckKind::Lemma2) {
        reports.extend(pool.install(|| {
            modules
                .par_iter()
                .map(|m| check_lemma2(m, caps))
                .collect::<Vec<_>>()
        }));
    }
    let summary = Summary::of(&reports);
    Ok(VerifyOutcome { reports, summary })
}

/// `"builtin"` or a catalog file.
pub fn load_catalog(source: &str, caps: &Caps) -> Result<Vec<GroupTable>> {
    let specs = if source == "builtin" {
        builtin_catalog_specs()
    } else {
        let text = std::fs::read_to_string(source)
            .map_err(|e| Error::input(format!("cannot read catalog {source}: {e}")))?;
        parse_catalog(&text)?
    };
    specs
        .iter()
        .map(|s: &GroupSpec| s.build(caps.max_order))
        .collect()
}

/// One module in a module file.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleInput {
    #[serde(default)]
    pub name: Option<String>,
    pub invariants: Vec<u64>,
    #[serde(default)]
    pub action: Vec<Vec<Vec<i64>>>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum ModuleFile {
    One(ModuleInput),
    Many(Vec<ModuleInput>),
    Wrapped { modules: Vec<ModuleInput> },
}

/// A module JSON document: one module object, an array of them, or
/// `{"modules": [...]}`.
pub fn parse_module_json(text: &str, caps: &Caps) -> Result<Vec<FiniteModule>> {
    let file: ModuleFile =
        serde_json::from_str(text).map_err(|e| Error::input(format!("module JSON: {e}")))?;
    let inputs = match file {
        ModuleFile::One(m) => vec![m],
        ModuleFile::Many(ms) | ModuleFile::Wrapped { modules: ms } => ms,
    };
    inputs
        .into_iter()
        .enumerate()
        .map(|(i, m)| {
            let module = build_module(&m.invariants, &m.action, caps)
                .map_err(|e| prefix_error(e, &format!("module {i}")))?;
            Ok(match m.name {
                Some(name) => module.with_label(name),
                None => module,
            })
        })
        .collect()
}

fn prefix_error(e: Error, prefix: &str) -> Error {
    match e {
        Error::Input(msg) => Error::Input(format!("{prefix}: {msg}")),
        other => other,
    }
}

pub fn load_modules(source: &str, caps: &Caps) -> Result<Vec<FiniteModule>> {
    if source == "builtin" {
        builtin_module_specs()
            .iter()
            .map(|s| s.build(caps))
            .collect()
    } else {
        let text = std::fs::read_to_string(source)
            .map_err(|e| Error::input(format!("cannot read module file {source}: {e}")))?;
        parse_module_json(&text, caps)
    }
}

/// Rendered output plus exit code.
#[derive(Debug, Clone)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

fn envelope(command: &str, results: Value, summary: Value) -> Value {
    json!({
        "version": SCHEMA_VERSION,
        "command": command,
        "results": results,
        "summary": summary,
    })
}

fn to_json_text(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("values serialize");
    text.push('\n');
    text
}

fn compact(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn report_table(reports: &[CheckReport], summary: &Summary) -> String {
    let mut out = String::new();
    for r in reports {
        let measured: Vec<String> = r
            .measured
            .iter()
            .map(|(k, v)| format!("{k}={}", compact(v)))
            .collect();
        let verdict = serde_json::to_value(r.verdict).expect("verdicts serialize");
        let _ = writeln!(
            out,
            "{:<18} {:<28} {:<9} {}",
            r.check,
            r.group,
            compact(&verdict),
            measured.join(" ")
        );
        for w in &r.witnesses {
            let _ = writeln!(out, "    witness: {w}");
        }
    }
    let _ = writeln!(
        out,
        "total {}  holds {}  marginal {}  violated {}  skipped {}",
        summary.total, summary.holds, summary.marginal, summary.violated, summary.skipped
    );
    out
}

fn analyze(spec: &str, caps: &Caps, format: Format) -> Result<Output> {
    let group = parse_group_spec(spec, caps.max_order)?;
    let a = analysis_json(&group);
    let text = match format {
        Format::Json => to_json_text(&envelope("analyze", json!([a]), json!({"total": 1}))),
        Format::Table => {
            let mut out = String::new();
            for key in [
                "group",
                "order",
                "center_order",
                "upper_orders",
                "lower_orders",
                "zl",
                "hypercenter_order",
                "residual_order",
                "nilpotent",
                "class",
            ] {
                let _ = writeln!(out, "{key:<18} {}", compact(&a[key]));
            }
            out
        }
    };
    Ok(Output {
        text,
        code: EXIT_OK,
    })
}

fn render_reports(command: &str, outcome: &VerifyOutcome, format: Format) -> String {
    match format {
        Format::Json => to_json_text(&envelope(
            command,
            serde_json::to_value(&outcome.reports).expect("reports serialize"),
            serde_json::to_value(&outcome.summary).expect("summary serializes"),
        )),
        Format::Table => report_table(&outcome.reports, &outcome.summary),
    }
}

fn module_check(source: &str, caps: &Caps, format: Format) -> Result<Output> {
    let modules = load_modules(source, caps)?;
    let reports: Vec<CheckReport> = modules.iter().map(|m| check_lemma2(m, caps)).collect();
    let outcome = VerifyOutcome {
        summary: Summary::of(&reports),
        reports,
    };
    Ok(Output {
        text: render_reports("module-check", &outcome, format),
        code: outcome.exit_code(),
    })
}

fn search(search: &SearchCaps, caps: &Caps, format: Format) -> Output {
    let outcome = search_decomposition_failure(search, caps);
    let summary = json!({
        "search": search,
        "invariant_vectors": outcome.invariant_vectors,
        "acting_groups": outcome.acting_groups,
        "nilpotent": outcome.nilpotent,
        "decomposed": outcome.decomposed,
        "findings": outcome.findings.len(),
        "violations": outcome.violations.len(),
        "pairs_skipped": outcome.pairs_skipped,
    });
    let finding = |m: &FiniteModule, nilpotent: bool| {
        let mut v = m.to_json();
        v["acting_nilpotent"] = nilpotent.into();
        v
    };
    let results: Vec<Value> = outcome
        .findings
        .iter()
        .map(|m| finding(m, false))
        .chain(outcome.violations.iter().map(|m| finding(m, true)))
        .collect();
    let text = match format {
        Format::Json => to_json_text(&envelope("search", Value::Array(results), summary)),
        Format::Table => {
            let mut out = String::new();
            for r in &results {
                let _ = writeln!(
                    out,
                    "invariants {} action {} acting order {} nilpotent {}",
                    r["invariants"], r["action"], r["acting_order"], r["acting_nilpotent"]
                );
            }
            let _ = writeln!(
                out,
                "swept {} abelian groups, {} acting groups ({} nilpotent, {} decomposed); {} findings, {} violations",
                outcome.invariant_vectors,
                outcome.acting_groups,
                outcome.nilpotent,
                outcome.decomposed,
                outcome.findings.len(),
                outcome.violations.len()
            );
            out
        }
    };
    let code = if outcome.violations.is_empty() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    };
    Output { text, code }
}

/// Runs a parsed command line. `env_caps` is the value of `HYPLAB_CAPS`.
pub fn execute(cli: &Cli, env_caps: Option<&str>) -> Result<Output> {
    let caps = resolve_caps(cli, env_caps)?;
    match &cli.command {
        Command::Analyze { spec } => analyze(spec, &caps, cli.format),
        Command::Verify { catalog, checks } => {
            let groups = load_catalog(catalog, &caps)?;
            let wants_modules = checks.is_empty() || checks.contains(&CheckKind::Lemma2);
            let modules = if wants_modules {
                load_modules("builtin", &caps)?
            } else {
                Vec::new()
            };
            let outcome = run_verify(&groups, &modules, checks, &caps, cli.jobs)?;
            Ok(Output {
                text: render_reports("verify", &outcome, cli.format),
                code: outcome.exit_code(),
            })
        }
        Command::ModuleCheck { source } => module_check(source, &caps, cli.format),
        Command::Search {
            kind: SearchKind::DecompositionFailure,
            max_module_order,
            max_acting_order,
            pair_limit,
            include_nilpotent,
        } => {
            let search_caps = SearchCaps {
                max_module_order: *max_module_order,
                max_acting_order: *max_acting_order,
                pair_limit: *pair_limit,
                include_nilpotent: *include_nilpotent,
            };
            Ok(search(&search_caps, &caps, cli.format))
        }
    }
}

pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Input(_) => EXIT_INPUT,
        Error::Resource { .. } => EXIT_CAP,
    }
}

/// Entry point used by the binary. Returns the process exit code.
pub fn main_with(args: impl IntoIterator<Item = std::ffi::OsString>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let env_caps = std::env::var(CAPS_ENV).ok();
    let output = match execute(&cli, env_caps.as_deref()) {
        Ok(output) => output,
        Err(e) => {
            eprintln!("hyplab: {e}");
            return exit_code_for(&e);
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &output.text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(output.text.as_bytes())
                .map_err(|e| e.to_string())
        }
    };
    match written {
        Ok(()) => output.code,
        Err(e) => {
            eprintln!("hyplab: {e}");
            EXIT_INPUT
        }
    }
}
