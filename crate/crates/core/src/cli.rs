//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a mathematical finding, 2 bad input,
//! 3 a resource cap was hit.

use std::cell::RefCell;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::Value;

use crate::binfinity::{check_realization_independence, BInfElement, BInfError, IotaSequence, Realization, RuleFault};
use crate::cartan::{CartanDatum, Quiver, QuiverSpec};
use crate::crystal::{check_real_strings, check_strict_morphism, export_graph, verify_axioms, Crystal, CrystalError, GraphFormat};
use crate::elementary::ElementaryElement;
use crate::geometry::{self, GeometryError, QuiverRep};
use crate::oracle::{graded_dim, weights_up_to_height, DEFAULT_HEIGHT_BOUND};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FINDING: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAP: i32 = 3;

/// Findings printed per failed check before the rest are summarized.
const SHOWN_FINDINGS: usize = 5;

#[derive(Parser, Debug)]
#[command(name = "gkm-crystal", version, about = "Crystal bases B(infinity) for quantum generalized Kac-Moody algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Export the crystal graph of B(infinity) down to a given depth.
    Graph {
        #[command(flatten)]
        input: CrystalInput,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        depth: u32,
        #[arg(long, value_enum, default_value_t = FormatArg::Dot)]
        format: FormatArg,
    },
    /// Compare weight multiplicities of the crystal with graded dimensions of U_q^-.
    Dims {
        #[command(flatten)]
        input: CrystalInput,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
        height: u32,
    },
    /// Run the characterization checks on the realized crystal.
    Verify {
        #[command(flatten)]
        input: CrystalInput,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        depth: u32,
    },
    /// Evaluate pointwise invariants of a quiver representation.
    Geom {
        #[arg(long)]
        rep: PathBuf,
        /// Largest total dimension for the flag search.
        #[arg(long, default_value_t = geometry::DEFAULT_FLAG_BOUND)]
        flag_bound: usize,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false, id = "source")]
pub struct Source {
    /// JSON file {"matrix": [[...]], "iota": ...}
    #[arg(long)]
    pub cartan: Option<PathBuf>,
    /// JSON file {"vertices": n, "omega_arrows": [[s, t], ...]}
    #[arg(long)]
    pub quiver: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CrystalInput {
    #[command(flatten)]
    pub source: Source,
    /// "cyclic" or a comma-separated period of 1-based indices.
    #[arg(long)]
    pub iota: Option<String>,
    /// Maximum number of nodes explored.
    #[arg(long, default_value_t = 200_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub cap: u64,
    #[arg(long, value_enum, hide = true)]
    pub fault: Option<FaultArg>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum FormatArg {
    Dot,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum FaultArg {
    GapFlip,
    FTieLeft,
}

/// Failure modes mapped onto exit codes.
enum Failure {
    Input(String),
    Cap(String),
}

impl From<CrystalError> for Failure {
    fn from(e: CrystalError) -> Self {
        match e {
            CrystalError::DepthExceeded { .. } => Failure::Cap(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<BInfError> for Failure {
    fn from(e: BInfError) -> Self {
        match e {
            BInfError::Crystal(c) => c.into(),
            other => Failure::Input(other.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CartanFile {
    matrix: Vec<Vec<i64>>,
    #[serde(default)]
    iota: Option<Value>,
}

fn load_realization(input: &CrystalInput) -> Result<Realization, Failure> {
    let bad = |path: &Path, e: &dyn std::fmt::Display| Failure::Input(format!("{}: {e}", path.display()));
    let (datum, file_iota) = match (&input.source.cartan, &input.source.quiver) {
        (Some(path), None) => {
            let file: CartanFile = serde_json::from_str(&read(path)?).map_err(|e| bad(path, &e))?;
            (CartanDatum::new(file.matrix).map_err(|e| bad(path, &e))?, file.iota)
        }
        (None, Some(path)) => {
            let mut value: Value = serde_json::from_str(&read(path)?).map_err(|e| bad(path, &e))?;
            let iota = value.as_object_mut().and_then(|o| o.remove("iota"));
            let spec: QuiverSpec = serde_json::from_value(value).map_err(|e| bad(path, &e))?;
            (Quiver::from_spec(&spec).map_err(|e| bad(path, &e))?.to_cartan(), iota)
        }
        _ => return Err(Failure::Input("exactly one of --cartan and --quiver is required".into())),
    };
    let rank = datum.rank();
    let iota = match (&input.iota, file_iota) {
        (Some(spec), _) => IotaSequence::parse(spec, rank)?,
        (None, Some(v)) => IotaSequence::from_json(&v, rank)?,
        (None, None) => IotaSequence::cyclic(rank),
    };
    let fault = input.fault.map(|f| match f {
        FaultArg::GapFlip => RuleFault::GapFlip,
        FaultArg::FTieLeft => RuleFault::FTieLeft,
    });
    Ok(Realization::new(datum, iota)?.with_fault(fault))
}

fn cap(input: &CrystalInput) -> usize {
    usize::try_from(input.cap).unwrap_or(usize::MAX)
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut report = String::new();
    let result = match &cli.command {
        Command::Graph { input, depth, format } => cmd_graph(input, *depth as usize, *format, &mut report),
        Command::Dims { input, height } => cmd_dims(input, *height as u64, &mut report),
        Command::Verify { input, depth } => cmd_verify(input, *depth as usize, &mut report),
        Command::Geom { rep, flag_bound } => cmd_geom(rep, *flag_bound, &mut report, err),
    };
    let _ = out.write_all(report.as_bytes());
    match result {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
        Err(Failure::Cap(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_CAP
        }
    }
}

fn cmd_graph(input: &CrystalInput, depth: usize, format: FormatArg, out: &mut String) -> Result<i32, Failure> {
    let r = load_realization(input)?;
    let g = r.enumerate_to_depth(depth, cap(input))?;
    let format = match format {
        FormatArg::Dot => GraphFormat::Dot,
        FormatArg::Json => GraphFormat::Json,
    };
    out.push_str(&export_graph(&g, format));
    Ok(EXIT_OK)
}

fn cmd_dims(input: &CrystalInput, height: u64, out: &mut String) -> Result<i32, Failure> {
    if height > DEFAULT_HEIGHT_BOUND {
        return Err(Failure::Input(format!("--height {height} exceeds the oracle bound {DEFAULT_HEIGHT_BOUND}")));
    }
    let r = load_realization(input)?;
    let d = r.datum().clone();
    // every f_i lowers the height by one, so depth = height reaches all weights
    let counts = r.enumerate_to_depth(height as usize, cap(input))?.weight_counts();
    let rows: Vec<_> = weights_up_to_height(d.rank(), height)
        .into_iter()
        .map(|alpha| {
            let found = counts.get(&-&alpha).copied().unwrap_or(0) as u64;
            let expected = graded_dim(&d, &alpha, DEFAULT_HEIGHT_BOUND).map_err(|e| Failure::Input(e.to_string()))?;
            Ok((alpha, found, expected))
        })
        .collect::<Result<_, Failure>>()?;
    let width = rows.iter().map(|(a, _, _)| a.to_string().len()).max().unwrap_or(0).max("alpha".len());
    let _ = writeln!(out, "datum {d}  iota {}", r.iota());
    let _ = writeln!(out, "{:<width$}  {:>7}  {:>6}  status", "alpha", "crystal", "oracle");
    let mut mismatches = 0;
    for (alpha, found, expected) in &rows {
        let status = if found == expected { "ok" } else { "MISMATCH" };
        mismatches += usize::from(found != expected);
        let _ = writeln!(out, "{:<width$}  {found:>7}  {expected:>6}  {status}", alpha.to_string());
    }
    if mismatches == 0 {
        let _ = writeln!(out, "all {} weights match", rows.len());
        Ok(EXIT_OK)
    } else {
        let _ = writeln!(out, "{mismatches} of {} weights MISMATCH", rows.len());
        Ok(EXIT_FINDING)
    }
}

struct CheckReport<'a> {
    out: &'a mut String,
    failed: usize,
}

impl CheckReport<'_> {
    fn record(&mut self, name: &str, findings: Vec<String>) {
        if findings.is_empty() {
            let _ = writeln!(self.out, "PASS {name}");
            return;
        }
        self.failed += 1;
        let _ = writeln!(self.out, "FAIL {name}: {} finding(s)", findings.len());
        for f in findings.iter().take(SHOWN_FINDINGS) {
            let _ = writeln!(self.out, "  {f}");
        }
        if findings.len() > SHOWN_FINDINGS {
            let _ = writeln!(self.out, "  ... {} more", findings.len() - SHOWN_FINDINGS);
        }
    }
}

fn strings<T: ToString>(items: impl IntoIterator<Item = T>) -> Vec<String> {
    items.into_iter().map(|x| x.to_string()).collect()
}

fn cmd_verify(input: &CrystalInput, depth: usize, out: &mut String) -> Result<i32, Failure> {
    let r = load_realization(input)?;
    let d = r.datum().clone();
    let cap = cap(input);
    let ex = r.explore(depth, cap)?;
    let nodes = &ex.elements;
    let _ = writeln!(out, "datum {d}  iota {}  depth {depth}  nodes {}", r.iota(), nodes.len());
    let mut report = CheckReport { out, failed: 0 };

    let axioms = match verify_axioms(&r, nodes) {
        Ok(v) => strings(v.into_iter().chain(check_real_strings(&r, nodes, depth + 1))),
        Err(e) => vec![e.to_string()],
    };
    report.record("crystal axioms", axioms);

    let target = r.psi_target();
    for i in d.indices() {
        let failures = RefCell::new(Vec::new());
        let psi = |b: &BInfElement| {
            r.psi_embed(b, i).unwrap_or_else(|e| {
                failures.borrow_mut().push(e.to_string());
                (b.clone(), ElementaryElement::new(i, 0))
            })
        };
        let checked = check_strict_morphism(&r, &target, psi, nodes);
        // embedding failures first; the checker saw a placeholder for them
        let mut findings = failures.into_inner();
        match checked {
            Ok(v) => findings.extend(strings(v)),
            Err(e) => findings.push(e.to_string()),
        }
        report.record(&format!("strictness of Psi_{}", i + 1), findings);
    }

    let weights: Vec<_> = nodes.iter().map(|b| (b, r.weight(b))).collect();
    report.record(
        "weights lie in -Q+",
        weights.iter().filter(|(_, w)| !w.is_nonpositive()).map(|(b, w)| format!("{b} has weight {w}")).collect(),
    );
    let zero: Vec<_> = weights.iter().filter(|(_, w)| w.is_zero()).map(|(b, _)| b.to_string()).collect();
    report.record(
        "unique element of weight 0",
        if zero.len() == 1 { Vec::new() } else { vec![format!("weight-0 elements: [{}]", zero.join(", "))] },
    );
    report.record(
        "every other element has a nonzero e_i",
        nodes
            .iter()
            .filter(|b| !b.is_highest_weight() && d.indices().all(|i| r.e_op(b, i).is_none()))
            .map(|b| format!("{b} is killed by every e_i"))
            .collect(),
    );
    for i in d.indices() {
        let first = r.i_first(i);
        let findings = match check_realization_independence(&r, &first, depth, cap) {
            Ok(v) => v,
            Err(BInfError::Crystal(e)) => return Err(e.into()),
            Err(e) => vec![e.to_string()],
        };
        report.record(&format!("iota-independence ({} vs {})", r.iota(), first.iota()), findings);
    }

    let failed = report.failed;
    if failed == 0 {
        let _ = writeln!(out, "all checks passed");
        Ok(EXIT_OK)
    } else {
        let _ = writeln!(out, "{failed} check(s) failed");
        Ok(EXIT_FINDING)
    }
}

fn cmd_geom(path: &Path, flag_bound: usize, out: &mut String, err: &mut dyn Write) -> Result<i32, Failure> {
    let rep = QuiverRep::from_json(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let names = rep.vertex_names();
    let n = rep.quiver().vertex_count();
    let mut code = EXIT_OK;

    let _ = writeln!(out, "dims {}", names.iter().zip(rep.dims()).map(|(v, d)| format!("{v}:{d}")).collect::<Vec<_>>().join(" "));
    for i in 0..n {
        let mu = geometry::moment_map(&rep, i);
        let shown = if mu.is_zero() { "0".to_string() } else { mu.to_string() };
        let _ = writeln!(out, "moment map at {}: {shown}", names[i]);
    }
    let _ = writeln!(out, "moment map vanishes: {}", geometry::moment_map_check(&rep));

    match geometry::flag_exists(&rep, flag_bound) {
        Ok(Some(w)) => {
            let steps: Vec<String> = w
                .steps
                .iter()
                .map(|(i, v)| format!("{}:({})", names[*i], v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
                .collect();
            let _ = writeln!(out, "flag: {}", if steps.is_empty() { "(empty)".to_string() } else { steps.join(" < ") });
        }
        Ok(None) => {
            let _ = writeln!(out, "flag: NotFound");
        }
        Err(e @ GeometryError::DimensionExceeded { .. }) => {
            let _ = writeln!(out, "flag: skipped");
            let _ = writeln!(err, "warning: {e}");
            code = EXIT_CAP;
        }
        Err(e) => {
            let _ = writeln!(out, "flag: undecided");
            let _ = writeln!(err, "warning: {e}");
        }
    }

    let verdicts = geometry::regular_semisimple_verdicts(&rep);
    if verdicts.is_empty() {
        let _ = writeln!(out, "regular semisimple: no Omega-bar loops");
    }
    for (h, ok) in verdicts {
        let at = &names[rep.quiver().arrow(h).source];
        let _ = writeln!(out, "regular semisimple h{} at {at}: {ok}", h + 1);
    }

    let mut pairs = Vec::with_capacity(n);
    for i in 0..n {
        let eps = geometry::eps_point(&rep, i);
        match geometry::eps_star_point(&rep, i) {
            Ok(star) => pairs.push(format!("{}:({eps},{star})", names[i])),
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                pairs.push(format!("{}:({eps},?)", names[i]));
                code = EXIT_FINDING;
            }
        }
    }
    let _ = writeln!(out, "(eps, eps*) = {}", pairs.join(" "));
    Ok(code)
}
