//! Command-line front end. Exit codes: 0 success, 1 computation error,
//! 2 usage error.

use std::collections::HashSet;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use crate::aut_group::{
    aut_report, exact_sequence_report, noncommuting_report, noncommuting_witness, order_report,
    snt_cokernel_witness, unit_alphas, AutReport, ExactSequenceReport, GradedMorphism, NoncommutingReport,
    OrderReport, SntReport,
};
use crate::error::{Error, Result};
use crate::expr_io::json::SuspendedTermJson;
use crate::expr_io::{
    document_to_json, format_lie, format_rational, format_suspended, format_tensor, parse_expr, to_json,
    Document, Notation,
};
use crate::graded_lie::{lyndon_basis, reduce};
use crate::homotopy_model::{render_rank_table, truncated_algebra, whitehead_rank_table, RankTable, RingMode};
use crate::linalg::Rational;
use crate::schedule::{GeneratorSchedule, DEFAULT_DEGREE_CAP};
use crate::tensor_hopf::{evaluate_tensor, hurewicz};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Space {
    Hp,
    Cp,
    Rp,
    /// Whitehead dimensions of the wedge summands.
    Custom(Vec<u32>),
}

fn parse_space(s: &str) -> std::result::Result<Space, String> {
    match s.to_ascii_lowercase().as_str() {
        "hp" => Ok(Space::Hp),
        "cp" => Ok(Space::Cp),
        "rp" => Ok(Space::Rp),
        other => {
            let Some(list) = other.strip_prefix("custom:") else {
                return Err(format!("unknown space `{s}` (expected hp, cp, rp or custom:<dims>)"));
            };
            list.split(',')
                .map(|d| d.trim().parse::<u32>().map_err(|_| format!("bad dimension `{d}`")))
                .collect::<std::result::Result<Vec<_>, _>>()
                .map(Space::Custom)
        }
    }
}

/// `(n,expr)=k`, resolved against the schedule later.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaArg {
    pub layer: usize,
    pub expr: String,
    pub value: i64,
}

fn parse_alpha(s: &str) -> std::result::Result<AlphaArg, String> {
    let bad = || format!("expected (n,expr)=k, got `{s}`");
    let (lhs, value) = s.rsplit_once('=').ok_or_else(bad)?;
    let inner = lhs
        .trim()
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(bad)?;
    let (layer, expr) = inner.split_once(',').ok_or_else(bad)?;
    Ok(AlphaArg {
        layer: layer.trim().parse().map_err(|_| bad())?,
        expr: expr.trim().to_string(),
        value: value.trim().parse().map_err(|_| bad())?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "whitealg", version, about = "Whitehead algebras of suspended projective spaces")]
pub struct Cli {
    /// hp, cp, rp, or custom:<comma-separated Whitehead dimensions>
    #[arg(long, global = true, default_value = "hp", value_parser = parse_space)]
    pub space: Space,
    /// Coefficient ring for automorphism computations: z or q
    #[arg(long, global = true, default_value = "z")]
    pub ring: RingMode,
    #[arg(long, global = true, value_enum, default_value = "table")]
    pub output: OutputFormat,
    /// Largest Samelson degree computed
    #[arg(long, global = true)]
    pub degree_cap: Option<u32>,
    /// File of `key = value` lines supplying flags not given on the command line
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Basis of the rational homotopy in one Whitehead dimension
    Basis {
        #[arg(long)]
        dim: u32,
    },
    /// Ranks and bases up to a Whitehead dimension
    RankTable {
        #[arg(long)]
        max_dim: u32,
    },
    /// Normal form of a bracket expression
    Reduce {
        #[arg(long)]
        expr: String,
        /// Print Samelson brackets <a,b>
        #[arg(long)]
        samelson: bool,
    },
    /// Primitivity and decomposability in the loop homology
    PrimitiveCheck {
        #[arg(long)]
        expr: String,
        /// Read generators as their Hurewicz images
        #[arg(long)]
        via_hurewicz: bool,
    },
    /// The Hurewicz image of the n-th generator
    Hurewicz {
        #[arg(long)]
        index: usize,
    },
    /// Homology suspension of a loop-homology element
    Suspension {
        #[arg(long)]
        expr: String,
        #[arg(long)]
        via_hurewicz: bool,
    },
    /// Structure of the automorphism group of a truncation
    AutReport {
        #[arg(long)]
        truncate: usize,
    },
    /// Order of an automorphism given as "xk -> expr; ..."
    Order {
        #[arg(long)]
        morphism: String,
        #[arg(long)]
        truncate: usize,
    },
    /// Two unipotent automorphisms that do not commute
    NoncommuteWitness {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        truncate: Option<usize>,
        #[arg(long, default_value = "1")]
        alpha1: Rational,
        #[arg(long, default_value = "1")]
        alpha2: Rational,
    },
    /// Checks of the layer exact sequence at one index
    ExactSeq {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        truncate: Option<usize>,
    },
    /// Finite-cokernel witness for the realized automorphisms
    SntWitness {
        #[arg(long)]
        truncate: usize,
        /// Multiplier for one layer and basis element, e.g. "(3,[x1,x2])=2"
        #[arg(long, value_parser = parse_alpha)]
        alpha: Vec<AlphaArg>,
    },
}

/// Reads `key = value` lines and appends `--key value` for every key not
/// already present in `args`.
fn apply_config(args: Vec<OsString>) -> std::result::Result<Vec<OsString>, String> {
    let strs: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let mut path = None;
    for (i, a) in strs.iter().enumerate() {
        if a == "--config" {
            path = strs.get(i + 1).cloned();
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        }
    }
    let Some(path) = path else { return Ok(args) };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("cannot read config `{path}`: {e}"))?;
    let given: HashSet<String> = strs
        .iter()
        .filter_map(|a| a.strip_prefix("--"))
        .map(|a| a.split('=').next().unwrap_or(a).to_string())
        .collect();
    let mut out = args;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("{path}:{}: expected key = value", lineno + 1))?;
        let key = key.trim().replace('_', "-");
        if key == "config" || given.contains(&key) {
            continue;
        }
        let value = value.trim();
        match value {
            "true" => out.push(format!("--{key}").into()),
            "false" => {}
            _ => {
                out.push(format!("--{key}").into());
                out.push(value.into());
            }
        }
    }
    Ok(out)
}

fn build_schedule(cli: &Cli) -> Result<Arc<GeneratorSchedule>> {
    let cap = cli.degree_cap.unwrap_or(DEFAULT_DEGREE_CAP);
    let s = match &cli.space {
        Space::Hp => GeneratorSchedule::hp((cap / 4) as usize),
        Space::Cp => GeneratorSchedule::cp((cap / 2) as usize),
        Space::Rp => GeneratorSchedule::rp(),
        Space::Custom(dims) => {
            let samelson = dims
                .iter()
                .map(|&d| {
                    d.checked_sub(1)
                        .filter(|&s| s > 0)
                        .ok_or_else(|| Error::InvalidSchedule(format!("dimension {d} is too small")))
                })
                .collect::<Result<Vec<_>>>()?;
            GeneratorSchedule::custom(&samelson)?
        }
    };
    Ok(Arc::new(s.with_degree_cap(cap)))
}

fn check_dim(schedule: &GeneratorSchedule, whitehead_dim: u32) -> Result<()> {
    let cap = schedule.degree_cap();
    if whitehead_dim > cap + 1 {
        return Err(Error::DegreeCapExceeded {
            degree: whitehead_dim - 1,
            cap,
        });
    }
    Ok(())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

fn render_aut(r: &AutReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "space: {}  ring: {}  truncate: {}", r.family, r.ring, r.top_index);
    let _ = writeln!(out, "finite: {}", yes_no(r.is_finite));
    match r.order {
        Some(k) => {
            let _ = writeln!(out, "order: {k}");
        }
        None => out.push_str("order: infinite\n"),
    }
    let _ = writeln!(out, "abelian: {}", yes_no(r.is_abelian));
    let _ = writeln!(out, "structure: {}", r.structure);
    let ranks: Vec<String> = r.decomposable_ranks.iter().map(|k| k.to_string()).collect();
    let _ = writeln!(out, "decomposable ranks: {}", ranks.join(" "));
    let _ = writeln!(out, "unipotent rank: {}", r.unipotent_rank);
    if let Some(w) = &r.infinite_order_witness {
        let _ = writeln!(out, "infinite-order witness: {}", w.morphism);
        render_order_witness(&mut out, w);
    }
    if let Some(w) = &r.noncommuting_witness {
        render_noncommuting(&mut out, w);
    }
    out
}

fn render_order_witness(out: &mut String, w: &crate::aut_group::OrderWitnessReport) {
    if let (Some(p), Some(d)) = (w.period, &w.displacement) {
        let power = if p == 1 { "k".to_string() } else { format!("{p}k") };
        let _ = writeln!(out, "  f^{power}({0}) = {0} + k*({d})", w.generator);
    }
    if let Some(c) = &w.scalar {
        let _ = writeln!(out, "  f^k({0}) = ({c})^k*{0}", w.generator);
    }
}

fn render_noncommuting(out: &mut String, w: &NoncommutingReport) {
    let _ = writeln!(out, "noncommuting pair:");
    let _ = writeln!(out, "  f: {}", w.f);
    let _ = writeln!(out, "  g: {}", w.g);
    let _ = writeln!(out, "  f.g({}) = {}", w.generator, w.fg_image);
    let _ = writeln!(out, "  g.f({}) = {}", w.generator, w.gf_image);
    let _ = writeln!(out, "  difference: {}", w.discrepancy);
}

fn render_order(r: &OrderReport) -> String {
    let mut out = format!("morphism: {}\n", r.morphism);
    match (r.order, &r.witness) {
        (Some(k), _) => {
            let _ = writeln!(out, "order: {k}");
        }
        (None, Some(w)) => {
            out.push_str("order: infinite\n");
            render_order_witness(&mut out, w);
        }
        (None, None) => out.push_str("order: infinite\n"),
    }
    out
}

fn render_exact(r: &ExactSequenceReport) -> String {
    let mut out = format!("n: {}\nkernel rank: {}\n", r.n, r.kernel_rank);
    let _ = writeln!(out, "kernel basis: {}", r.kernel_basis.join(", "));
    for c in &r.checks {
        let _ = writeln!(out, "{}: {} ({})", c.name, if c.passed { "pass" } else { "FAIL" }, c.detail);
    }
    let _ = writeln!(out, "exact: {}", yes_no(r.exact));
    out
}

fn render_snt(r: &SntReport) -> String {
    let mut out = String::from("layer  dim  rank  index  covered\n");
    for l in &r.layers {
        let _ = writeln!(
            out,
            "{:<6} {:<4} {:<5} {:<6} {}",
            l.layer,
            l.whitehead_dim,
            l.decomposable_rank,
            l.index,
            yes_no(l.fully_covered)
        );
    }
    let _ = writeln!(out, "sign factors: {}", r.sign_factors);
    let _ = writeln!(out, "total index: {}", r.total_index);
    let _ = writeln!(out, "verdict: {}", r.verdict);
    out
}

fn execute(cli: &Cli) -> Result<String> {
    let schedule = build_schedule(cli)?;
    let json = cli.output == OutputFormat::Json;
    let algebra = |n: usize| truncated_algebra(&schedule, n, cli.ring).map(Arc::new);
    let emit = |doc: Document, table: String| if json { document_to_json(&doc) + "\n" } else { table };

    Ok(match &cli.command {
        Command::Basis { dim } => {
            check_dim(&schedule, *dim)?;
            let basis = if *dim >= 2 { lyndon_basis(&schedule, dim - 1)? } else { Vec::new() };
            let exprs: Vec<String> = basis
                .iter()
                .map(|b| crate::expr_io::format_basis(&schedule, &b.word, Notation::Whitehead))
                .collect();
            let table = exprs.iter().map(|e| format!("{e}\n")).collect();
            emit(
                Document::Basis {
                    family: schedule.family(),
                    whitehead_dim: *dim,
                    rank: exprs.len(),
                    basis: exprs,
                },
                table,
            )
        }
        Command::RankTable { max_dim } => {
            let rows = whitehead_rank_table(&schedule, *max_dim)?;
            let table = render_rank_table(&rows);
            let t = RankTable {
                family: schedule.family(),
                max_whitehead_dim: *max_dim,
                rows,
            };
            emit(Document::RankTable(t), table)
        }
        Command::Reduce { expr, samelson } => {
            let e = reduce(&parse_expr(expr)?, &schedule)?;
            let notation = if *samelson { Notation::Samelson } else { Notation::Whitehead };
            if json {
                to_json(&e) + "\n"
            } else {
                format_lie(&e, notation) + "\n"
            }
        }
        Command::PrimitiveCheck { expr, via_hurewicz } => {
            let t = evaluate_tensor(&parse_expr(expr)?, &schedule, *via_hurewicz)?;
            let primitive = t.is_primitive()?;
            let decomposable = t.is_decomposable()?;
            emit(
                Document::PrimitiveCheck {
                    expression: expr.clone(),
                    method: if *via_hurewicz { "hurewicz" } else { "tensor" }.into(),
                    primitive,
                    decomposable,
                },
                format!("primitive: {}\ndecomposable: {}\n", yes_no(primitive), yes_no(decomposable)),
            )
        }
        Command::Hurewicz { index } => {
            let t = hurewicz(&schedule, *index)?;
            if json {
                to_json(&t) + "\n"
            } else {
                format_tensor(&t) + "\n"
            }
        }
        Command::Suspension { expr, via_hurewicz } => {
            let t = evaluate_tensor(&parse_expr(expr)?, &schedule, *via_hurewicz)?;
            let s = t.homology_suspension()?;
            let value = format_suspended(&s);
            emit(
                Document::Suspension {
                    expression: expr.clone(),
                    value: value.clone(),
                    terms: s
                        .terms()
                        .iter()
                        .map(|(i, c)| SuspendedTermJson {
                            index: *i,
                            coefficient: format_rational(c),
                        })
                        .collect(),
                },
                value + "\n",
            )
        }
        Command::AutReport { truncate } => {
            let r = aut_report(&algebra(*truncate)?)?;
            emit(Document::AutReport(r.clone()), render_aut(&r))
        }
        Command::Order { morphism, truncate } => {
            let f = GradedMorphism::parse_spec(&algebra(*truncate)?, morphism)?;
            let r = order_report(&f)?;
            emit(Document::OrderReport(r.clone()), render_order(&r))
        }
        Command::NoncommuteWitness {
            m,
            truncate,
            alpha1,
            alpha2,
        } => {
            let l = algebra(truncate.unwrap_or(m + 1))?;
            let r = noncommuting_report(&noncommuting_witness(&l, *m, alpha1, alpha2)?);
            let mut table = String::new();
            render_noncommuting(&mut table, &r);
            emit(Document::NoncommutingReport(r), table)
        }
        Command::ExactSeq { n, truncate } => {
            let r = exact_sequence_report(&algebra(truncate.unwrap_or(*n))?, *n)?;
            emit(Document::ExactSequenceReport(r.clone()), render_exact(&r))
        }
        Command::SntWitness { truncate, alpha } => {
            let l = algebra(*truncate)?;
            let mut alphas = unit_alphas(&l);
            for a in alpha {
                let w = reduce(&parse_expr(&a.expr)?, l.schedule())?;
                let terms = w.terms();
                let [(b, c)] = terms.as_slice() else {
                    return Err(Error::NotDecomposable(a.expr.clone()));
                };
                let key = (a.layer, b.word.clone());
                if !alphas.contains_key(&key) || !num_traits::One::is_one(*c) {
                    return Err(Error::NotDecomposable(a.expr.clone()));
                }
                alphas.insert(key, a.value);
            }
            let r = snt_cokernel_witness(&l, &alphas)?;
            emit(Document::SntReport(r.clone()), render_snt(&r))
        }
    })
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match apply_config(args) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(out) => {
            print!("{out}");
            0
        }
        Err(e) => {
            match &e {
                Error::Parse(p) => eprintln!("error: {} at position {}", p.kind, p.position),
                _ => eprintln!("error: {e}"),
            }
            1
        }
    }
}
