//! Command dispatch for the `semistar` binary. All algebra lives in the
//! core crate; this is flag handling, parsing, and rendering.

pub mod opts;
pub mod parse;
pub mod render;

use std::time::Instant;

use clap::Parser;
use serde::Serialize;

use semistar_core::model::{ModelSpec, Subset};
use semistar_core::semistar::op::{
    enumerate_support_maps, named_ops, op_label, SemistarOp, MAX_ENUM_ARITY,
};
use semistar_core::semistar::support::SupportMap;
use semistar_core::spaces::{local_space, over_space, spec_space, sstar_space};
use semistar_core::topology::{FinSpace, MAX_POINTS};
use semistar_core::verify::{run_suite, Status, VerdictReport};

use opts::{Cli, Command, Format, OpFamily, OpsCmd, SpaceCmd};
use render::{
    space_dot, space_report, space_text, to_json_string, verdict_json, verdicts_text,
};

pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliError::Failed(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

enum CliError {
    /// Bad flags or malformed input: exit 2.
    Usage(String),
    /// The command was well-formed but could not finish: exit 1.
    Failed(String),
}

fn usage(msg: impl ToString) -> CliError {
    CliError::Usage(msg.to_string())
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    if cli.depth < 1 {
        return Err(usage("--depth must be at least 1"));
    }
    let primes = cli
        .primes
        .as_deref()
        .ok_or_else(|| usage("--primes is required (e.g. --primes 2,3)"))?;
    let primes = parse::parse_primes(primes).map_err(|e| usage(format!("--primes: {e}")))?;
    let model = ModelSpec::new(primes).map_err(|e| usage(format!("--primes: {e}")))?;

    let (body, code) = match &cli.command {
        Command::Ops { cmd } => (run_ops(cli, &model, cmd)?, 0),
        Command::Space { cmd } => (run_space(cli, &model, cmd)?, 0),
        Command::Enumerate => (run_enumerate(cli, &model)?, 0),
        Command::Verify { checks } => run_verify(cli, &model, checks.as_deref())?,
    };

    match &cli.out {
        None => print!("{body}"),
        Some(path) => std::fs::write(path, &body)
            .map_err(|e| CliError::Failed(format!("writing {}: {e}", path.display())))?,
    }
    Ok(code)
}

/// The requested format, or the command's natural default; DOT only makes
/// sense for space reports.
fn format_for(cli: &Cli, default: Format, dot_ok: bool) -> Result<Format, CliError> {
    let f = cli.format.unwrap_or(default);
    if f == Format::Dot && !dot_ok {
        return Err(usage("--format dot applies to space reports only"));
    }
    Ok(f)
}

fn build_op(model: &ModelSpec, src: &str, depth: i64) -> Result<SemistarOp, CliError> {
    let expr = parse::parse_expr(src, model.k()).map_err(|e| usage(format!("in '{src}': {e}")))?;
    SemistarOp::new(model.k(), expr, depth).map_err(|e| usage(format!("in '{src}': {e}")))
}

#[derive(Serialize)]
struct OpInfo {
    name: String,
    expr: String,
    table: String,
    kernel: String,
    finite_type: bool,
    stable: bool,
    spectral: bool,
    semifinite: bool,
}

#[derive(Serialize)]
struct EvalReport {
    expr: String,
    module: String,
    value: String,
}

#[derive(Serialize)]
struct OrderReport {
    left: String,
    right: String,
    relation: String,
}

#[derive(Serialize)]
struct ClassifyReport {
    expr: String,
    table: String,
    kernel: String,
    finite_type: bool,
    stable: bool,
    spectral: bool,
    semifinite: bool,
    stable_closure_fixpoint: bool,
    quasi_spectrum: String,
    quasi_maximals: String,
}

fn run_ops(cli: &Cli, model: &ModelSpec, cmd: &OpsCmd) -> Result<String, CliError> {
    let fmt = format_for(cli, Format::Text, false)?;
    match cmd {
        OpsCmd::List => {
            let mut infos = Vec::new();
            for (name, op) in named_ops(model.k(), cli.depth) {
                let c = op
                    .classify()
                    .map_err(|e| CliError::Failed(format!("classifying {name}: {e}")))?;
                infos.push(OpInfo {
                    name,
                    expr: op.expr().to_string(),
                    table: op.table().describe(),
                    kernel: op.kernel().to_string(),
                    finite_type: c.finite_type,
                    stable: c.stable,
                    spectral: c.spectral,
                    semifinite: c.semifinite,
                });
            }
            Ok(match fmt {
                Format::Json => to_json_string(&infos),
                _ => {
                    let mut out = String::new();
                    for i in &infos {
                        out.push_str(&format!("{}: {}\n", i.name, i.table));
                        out.push_str(&format!("   {}\n", flags_line(i)));
                    }
                    out
                }
            })
        }
        OpsCmd::Eval { expr, module } => {
            let op = build_op(model, expr, cli.depth)?;
            let f = parse::parse_module(module, model.k())
                .map_err(|e| usage(format!("in '{module}': {e}")))?;
            let value = op
                .evaluate(&f)
                .map_err(|e| CliError::Failed(format!("evaluating: {e}")))?;
            let report = EvalReport {
                expr: op.expr().to_string(),
                module: f.to_string(),
                value: value.to_string(),
            };
            Ok(match fmt {
                Format::Json => to_json_string(&report),
                _ => format!("{}\n", report.value),
            })
        }
        OpsCmd::Order { left, right } => {
            let l = build_op(model, left, cli.depth)?;
            let r = build_op(model, right, cli.depth)?;
            let below = l.leq(&r);
            let above = r.leq(&l);
            let relation = match (below, above) {
                (true, true) => "equal",
                (true, false) => "below",
                (false, true) => "above",
                (false, false) => "incomparable",
            };
            let report = OrderReport {
                left: l.expr().to_string(),
                right: r.expr().to_string(),
                relation: relation.to_string(),
            };
            Ok(match fmt {
                Format::Json => to_json_string(&report),
                _ => {
                    let sym = match relation {
                        "equal" => "=",
                        "below" => "<",
                        "above" => ">",
                        _ => "<>",
                    };
                    format!("{} {sym} {}\n", report.left, report.right)
                }
            })
        }
        OpsCmd::Classify { expr } => {
            let op = build_op(model, expr, cli.depth)?;
            let c = op
                .classify()
                .map_err(|e| CliError::Failed(format!("classifying: {e}")))?;
            let report = ClassifyReport {
                expr: op.expr().to_string(),
                table: op.table().describe(),
                kernel: op.kernel().to_string(),
                finite_type: c.finite_type,
                stable: c.stable,
                spectral: c.spectral,
                semifinite: c.semifinite,
                stable_closure_fixpoint: c.stable_closure_fixpoint,
                quasi_spectrum: op.quasi_spectrum().to_string(),
                quasi_maximals: op.quasi_maximals().to_string(),
            };
            Ok(match fmt {
                Format::Json => to_json_string(&report),
                _ => format!(
                    "expr: {}\ntable: {}\nkernel: {}\nfinite-type: {}\nstable: {}\nspectral: {}\nsemifinite: {}\nstable-closure-fixpoint: {}\nquasi-spectrum: {}\nquasi-maximals: {}\n",
                    report.expr,
                    report.table,
                    report.kernel,
                    report.finite_type,
                    report.stable,
                    report.spectral,
                    report.semifinite,
                    report.stable_closure_fixpoint,
                    report.quasi_spectrum,
                    report.quasi_maximals,
                ),
            })
        }
    }
}

fn flags_line(i: &OpInfo) -> String {
    let mut flags = Vec::new();
    if i.finite_type {
        flags.push("finite type");
    }
    if i.stable {
        flags.push("stable");
    }
    if i.spectral {
        flags.push("spectral");
    }
    if i.semifinite {
        flags.push("semifinite");
    }
    if flags.is_empty() {
        flags.push("no flags");
    }
    flags.join(", ")
}

fn enumeration(model: &ModelSpec) -> Result<Vec<SupportMap>, CliError> {
    if model.k() > MAX_ENUM_ARITY {
        return Err(usage(format!(
            "enumeration supports at most {MAX_ENUM_ARITY} primes, the model has {}",
            model.k()
        )));
    }
    Ok(enumerate_support_maps(model.k()))
}

fn run_space(cli: &Cli, model: &ModelSpec, cmd: &SpaceCmd) -> Result<String, CliError> {
    let fmt = format_for(cli, Format::Json, true)?;
    let k = model.k();
    let (kind, inverse, space) = match cmd {
        SpaceCmd::Spec(args) => ("spec", args.inverse, spec_space(k)),
        SpaceCmd::Over(args) => {
            if (1usize << k) > MAX_POINTS {
                return Err(usage(format!(
                    "the overring space has 2^{k} points, over the {MAX_POINTS}-point limit"
                )));
            }
            ("over", args.inverse, over_space(k))
        }
        SpaceCmd::Local(args) => ("local", args.inverse, local_space(k)),
        SpaceCmd::Sstar(args) => {
            let maps = enumeration(model)?;
            let family: Vec<SupportMap> = match args.family {
                OpFamily::All => maps.clone(),
                OpFamily::FiniteType => {
                    maps.iter().filter(|sm| sm.is_finite_type()).cloned().collect()
                }
                OpFamily::Star => maps
                    .iter()
                    .filter(|sm| sm.apply_set(Subset::EMPTY).is_empty())
                    .cloned()
                    .collect(),
            };
            if family.len() > MAX_POINTS {
                return Err(usage(format!(
                    "{} operations exceed the {MAX_POINTS}-point space limit; try --family finite-type or --family star",
                    family.len()
                )));
            }
            ("sstar", args.inverse, sstar_space(&family))
        }
    };
    let space: FinSpace = if inverse { space.inverse() } else { space };
    let report = space_report(kind, &model.label(), &space, inverse);
    Ok(match fmt {
        Format::Json => to_json_string(&report),
        Format::Dot => space_dot(&report, &space),
        Format::Text => space_text(&report, &space),
    })
}

#[derive(Serialize)]
struct EnumeratedOp {
    label: String,
    table: String,
    finite_type: bool,
    ring_fixing: bool,
}

#[derive(Serialize)]
struct EnumerateReport {
    model: String,
    total: usize,
    finite_type: usize,
    ring_fixing: usize,
    operations: Vec<EnumeratedOp>,
}

fn run_enumerate(cli: &Cli, model: &ModelSpec) -> Result<String, CliError> {
    let fmt = format_for(cli, Format::Text, false)?;
    let maps = enumeration(model)?;
    let operations: Vec<EnumeratedOp> = maps
        .iter()
        .map(|sm| EnumeratedOp {
            label: op_label(sm, &maps),
            table: sm.describe(),
            finite_type: sm.is_finite_type(),
            ring_fixing: sm.apply_set(Subset::EMPTY).is_empty(),
        })
        .collect();
    let report = EnumerateReport {
        model: model.label(),
        total: operations.len(),
        finite_type: operations.iter().filter(|o| o.finite_type).count(),
        ring_fixing: operations.iter().filter(|o| o.ring_fixing).count(),
        operations,
    };
    Ok(match fmt {
        Format::Json => to_json_string(&report),
        _ => {
            let mut out = format!(
                "{} operations, {} finite-type, {} fixing the ring\n",
                report.total, report.finite_type, report.ring_fixing
            );
            for o in &report.operations {
                let mut flags = Vec::new();
                if o.finite_type {
                    flags.push("finite type");
                }
                if o.ring_fixing {
                    flags.push("fixes the ring");
                }
                let tail = if flags.is_empty() {
                    String::new()
                } else {
                    format!("  [{}]", flags.join(", "))
                };
                out.push_str(&format!("{}: {}{tail}\n", o.label, o.table));
            }
            out
        }
    })
}

fn run_verify(
    cli: &Cli,
    model: &ModelSpec,
    checks: Option<&str>,
) -> Result<(String, i32), CliError> {
    let fmt = format_for(cli, Format::Json, false)?;
    let wanted = checks.map(parse::parse_checks);
    let wanted_refs: Option<Vec<&str>> =
        wanted.as_ref().map(|v| v.iter().map(String::as_str).collect());

    let reports: Vec<VerdictReport> = run_suite(model, wanted_refs.as_deref(), cli.depth)
        .map_err(|e| usage(e.to_string()))?;

    // Timings are measured by re-running each check alone; they are for
    // humans, and asking for them gives up byte-stable output.
    let timings: Vec<Option<u64>> = if cli.timings {
        reports
            .iter()
            .map(|r| {
                let start = Instant::now();
                let _ = run_suite(model, Some(&[r.check_id]), cli.depth);
                Some(start.elapsed().as_millis() as u64)
            })
            .collect()
    } else {
        vec![None; reports.len()]
    };

    let any_fail = reports.iter().any(|r| r.status == Status::Fail);
    let body = match fmt {
        Format::Json => {
            let rows: Vec<_> = reports
                .iter()
                .zip(&timings)
                .map(|(r, ms)| verdict_json(r, *ms))
                .collect();
            to_json_string(&rows)
        }
        _ => verdicts_text(&reports, &timings),
    };
    Ok((body, if any_fail { 1 } else { 0 }))
}
