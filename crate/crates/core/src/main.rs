use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use quadfloor::floor::{
    enumerate_diagrams, enumerate_merged_diagrams, floor_count, kontsevich_nd, MergeConfiguration,
};
use quadfloor::gw::{specialize_field, Assignment, FieldModel};
use quadfloor::springer::{form_report, pfister_concrete};
use quadfloor::suite::{run_suite, SuiteOptions, SuiteResult};
use quadfloor::wallcross::{
    pfister_element, residual_report, sweep_unit_shifts, wallcross_report, FieldSweep,
    WallCrossReport, SCHEMA_VERSION,
};
use quadfloor::Error;

/// Grothendieck-Witt valued floor-diagram counts and wall-crossing checks.
#[derive(Parser)]
#[command(name = "quadfloor", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Write the JSON report to FILE instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Print a human-readable table instead of JSON.
    #[arg(long, global = true)]
    table: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Refuse to enumerate more than N marked diagrams.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    budget: usize,
}

#[derive(Subcommand)]
enum Command {
    /// List the marked floor diagrams of degree d, optionally merged.
    Enumerate {
        #[arg(long)]
        degree: u32,
        /// Merged positions `p1,p2,...` (default: none).
        #[arg(long, default_value = "")]
        merge: String,
        /// JSON output (the default; kept for scripts that pass it).
        #[arg(long)]
        json: bool,
    },
    /// Enriched count for one merge configuration.
    Count {
        #[arg(long)]
        degree: u32,
        /// Number of merged pairs; must match --merge.
        #[arg(long)]
        pairs: usize,
        #[arg(long, default_value = "")]
        merge: String,
        /// symbolic | real | closed | fq:Q
        #[arg(long, default_value = "symbolic")]
        field: String,
        /// Real sign pattern such as `+-`; default: every pattern.
        #[arg(long, allow_hyphen_values = true)]
        signs: Option<String>,
        /// Finite-field classes such as `sq,ns`; default: every assignment.
        #[arg(long)]
        assign: Option<String>,
    },
    /// Difference of counts between two configurations, or a full unit-shift sweep.
    Wallcross {
        #[arg(long)]
        degree: u32,
        #[arg(long, requires = "merge_to")]
        merge_from: Option<String>,
        #[arg(long, requires = "merge_from")]
        merge_to: Option<String>,
        /// Sweep every unit shift at every number of pairs.
        #[arg(long, value_name = "NAME", conflicts_with = "merge_from")]
        sweep: Option<String>,
    },
    /// The concrete Pfister form and its anisotropy verdict.
    Pfister {
        #[arg(long)]
        vars: usize,
    },
    /// Run a verification suite.
    Verify {
        /// identities | laws | counts | anchors | dissolution | wallcross | residual | springer | graph | all
        #[arg(long)]
        suite: String,
        /// Highest degree covered by the wall-crossing suite.
        #[arg(long, default_value_t = 3)]
        max_degree: u32,
        /// Include elapsed times (makes the output non-reproducible).
        #[arg(long)]
        timings: bool,
    },
}

struct Output {
    json: Value,
    table: String,
    pass: bool,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidConfig(msg.into())
}

fn marks(d: u32) -> usize {
    3 * d as usize - 1
}

fn config(d: u32, text: &str) -> quadfloor::Result<MergeConfiguration> {
    quadfloor::floor::diagram::check_degree(d)?;
    MergeConfiguration::parse(marks(d), text)
}

fn parse_signs(text: &str, s: usize) -> quadfloor::Result<Assignment> {
    let a = text
        .chars()
        .map(|c| match c {
            '+' => Ok(false),
            '-' => Ok(true),
            _ => Err(usage(format!("bad sign `{c}`"))),
        })
        .collect::<quadfloor::Result<Assignment>>()?;
    check_len(a, s)
}

fn parse_assign(text: &str, s: usize) -> quadfloor::Result<Assignment> {
    let a = text
        .split([',', '/'])
        .filter(|t| !t.is_empty())
        .map(|t| match t.trim() {
            "sq" => Ok(false),
            "ns" => Ok(true),
            other => Err(usage(format!("bad class `{other}`, expected sq or ns"))),
        })
        .collect::<quadfloor::Result<Assignment>>()?;
    check_len(a, s)
}

fn check_len(a: Assignment, s: usize) -> quadfloor::Result<Assignment> {
    if a.len() != s {
        return Err(Error::AssignmentLength {
            expected: s,
            got: a.len(),
        });
    }
    Ok(a)
}

fn enumerate(d: u32, merge: &str, budget: usize) -> quadfloor::Result<Output> {
    let cfg = config(d, merge)?;
    enumerate_diagrams(d, budget)?;
    let merged = enumerate_merged_diagrams(d, &cfg)?;
    let mut rows = Vec::new();
    let mut table = format!("degree {d}, merge {cfg}: {} diagrams\n", merged.len());
    for m in &merged {
        let mult = m.multiplicity()?;
        table.push_str(&format!("{}    {}\n", m.representative, mult));
        rows.push(json!({
            "diagram": m,
            "tokens": m.representative.to_string(),
            "complex_weight": m.complex_weight(),
            "multiplicity": mult,
        }));
    }
    Ok(Output {
        json: json!({
            "schema_version": SCHEMA_VERSION,
            "d": d,
            "merge": cfg.positions,
            "kontsevich": kontsevich_nd(d).to_string(),
            "count": merged.len(),
            "diagrams": rows,
        }),
        table,
        pass: true,
    })
}

fn count(
    d: u32,
    pairs: usize,
    merge: &str,
    field: &str,
    signs: Option<&str>,
    assign: Option<&str>,
    budget: usize,
) -> quadfloor::Result<Output> {
    let cfg = config(d, merge)?;
    if cfg.s() != pairs {
        return Err(usage(format!(
            "--pairs {pairs} but --merge lists {} positions",
            cfg.s()
        )));
    }
    enumerate_diagrams(d, budget)?;
    let value = floor_count(d, &cfg)?;
    let s = cfg.s();
    let mut doc = json!({
        "schema_version": SCHEMA_VERSION,
        "d": d,
        "merge": cfg.positions,
        "field": field,
        "rank": value.rank(),
    });
    if field == "symbolic" {
        doc["count"] = serde_json::to_value(&value).expect("serialisable");
        return Ok(Output {
            table: format!("N_{d}{cfg} = {value}\n"),
            json: doc,
            pass: true,
        });
    }
    let model = FieldModel::parse(field)?;
    let assignments = match (model, signs, assign) {
        (FieldModel::Real, Some(t), None) => vec![parse_signs(t, s)?],
        (FieldModel::Finite(_), None, Some(t)) => vec![parse_assign(t, s)?],
        (_, None, None) => model.all_assignments(s),
        _ => {
            return Err(usage(
                "--signs needs --field real and --assign needs --field fq:Q",
            ))
        }
    };
    let mut table = String::new();
    let mut values = Vec::new();
    for a in &assignments {
        let v = specialize_field(&value, model, a)?;
        let label = quadfloor::wallcross::assignment_label(model, a);
        table.push_str(&format!("{label:>8}  {v}\n"));
        values.push(json!({ "assignment": label, "value": v }));
    }
    doc["values"] = Value::Array(values);
    Ok(Output {
        json: doc,
        table,
        pass: true,
    })
}

fn report_row(r: &WallCrossReport) -> String {
    let from = MergeConfiguration {
        n: 0,
        positions: r.from.clone(),
    };
    let to = MergeConfiguration {
        n: 0,
        positions: r.to.clone(),
    };
    format!(
        "s={} {from:>12} -> {to:<12} n1={:>4} n2={:>4} m={:>4} {}\n",
        r.s,
        r.n1,
        r.n2,
        r.m,
        if r.pass { "ok" } else { "FAIL" }
    )
}

fn wallcross(
    d: u32,
    from: Option<&str>,
    to: Option<&str>,
    sweep: Option<&str>,
    budget: usize,
) -> quadfloor::Result<Output> {
    enumerate_diagrams(d, budget)?;
    let fields = FieldSweep::default();
    match (from, to, sweep) {
        (Some(f), Some(t), None) => {
            let (from, to) = (config(d, f)?, config(d, t)?);
            let report = wallcross_report(d, &from, &to, &fields)?;
            let residual = (from.s() > 0)
                .then(|| residual_report(d, &from, &to))
                .transpose()?;
            let pass = report.pass && residual.as_ref().is_none_or(|r| r.pass);
            Ok(Output {
                table: report_row(&report),
                json: json!({
                    "schema_version": SCHEMA_VERSION,
                    "pass": pass,
                    "report": report,
                    "residual": residual,
                }),
                pass,
            })
        }
        (None, None, Some("default")) => {
            quadfloor::floor::diagram::check_degree(d)?;
            let mut reports = Vec::new();
            for s in 0..=marks(d) / 2 {
                reports.extend(sweep_unit_shifts(d, s, &fields)?);
            }
            let pass = reports.iter().all(|r| r.pass);
            Ok(Output {
                table: reports.iter().map(report_row).collect(),
                json: json!({
                    "schema_version": SCHEMA_VERSION,
                    "d": d,
                    "pass": pass,
                    "shifts": reports.len(),
                    "reports": reports,
                }),
                pass,
            })
        }
        (None, None, Some(other)) => {
            Err(usage(format!("unknown sweep `{other}`, expected default")))
        }
        _ => Err(usage(
            "give --merge-from and --merge-to, or --sweep default",
        )),
    }
}

fn pfister(s: usize) -> quadfloor::Result<Output> {
    if s > 20 {
        return Err(usage("--vars is limited to 20"));
    }
    let form = pfister_concrete(s);
    let report = form_report(&form);
    let mut doc = serde_json::to_value(&report).expect("serialisable");
    doc["virtual"] = serde_json::to_value(pfister_element(s)).expect("serialisable");
    Ok(Output {
        table: format!(
            "{form}\nverdict: {}\n",
            serde_json::to_string(&report.verdict).expect("str")
        ),
        json: doc,
        pass: true,
    })
}

fn suite_table(r: &SuiteResult) -> String {
    let mut t = String::new();
    for b in &r.blocks {
        let failed = b.checks.iter().filter(|c| !c.pass).count();
        t.push_str(&format!(
            "{:<12} {:>5} checks  {:>4} failed  {}\n",
            b.name,
            b.checks.len(),
            failed,
            if b.pass { "PASS" } else { "FAIL" }
        ));
        for c in b.checks.iter().filter(|c| !c.pass) {
            t.push_str(&format!("    {} {}\n", c.id, c.detail));
        }
    }
    t.push_str(&format!(
        "{}: {}\n",
        r.suite,
        if r.pass { "PASS" } else { "FAIL" }
    ));
    t
}

fn verify(name: &str, max_degree: u32, timings: bool) -> quadfloor::Result<Output> {
    quadfloor::floor::diagram::check_degree(max_degree)?;
    let options = SuiteOptions {
        wallcross_max_degree: max_degree,
        timings,
        ..SuiteOptions::default()
    };
    let r = run_suite(name, &options)?;
    Ok(Output {
        table: suite_table(&r),
        json: serde_json::to_value(&r).expect("serialisable"),
        pass: r.pass,
    })
}

fn emit(out: &Output, common: &Common) -> std::io::Result<()> {
    let text = if common.table {
        out.table.clone()
    } else {
        let mut s = serde_json::to_string_pretty(&out.json).expect("serialisable");
        s.push('\n');
        s
    };
    match &common.out {
        Some(path) => fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> quadfloor::Result<Output> {
    let budget = cli.common.budget;
    match &cli.command {
        Command::Enumerate { degree, merge, .. } => enumerate(*degree, merge, budget),
        Command::Count {
            degree,
            pairs,
            merge,
            field,
            signs,
            assign,
        } => count(
            *degree,
            *pairs,
            merge,
            field,
            signs.as_deref(),
            assign.as_deref(),
            budget,
        ),
        Command::Wallcross {
            degree,
            merge_from,
            merge_to,
            sweep,
        } => wallcross(
            *degree,
            merge_from.as_deref(),
            merge_to.as_deref(),
            sweep.as_deref(),
            budget,
        ),
        Command::Pfister { vars } => pfister(*vars),
        Command::Verify {
            suite,
            max_degree,
            timings,
        } => verify(suite, *max_degree, *timings),
    }
}

#[derive(Serialize)]
struct ErrorDoc {
    schema_version: u32,
    error: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.common.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(out) => {
            if let Err(e) = emit(&out, &cli.common) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let doc = ErrorDoc {
                schema_version: SCHEMA_VERSION,
                error: e.to_string(),
            };
            eprintln!("{}", serde_json::to_string(&doc).expect("serialisable"));
            ExitCode::from(2)
        }
    }
}
