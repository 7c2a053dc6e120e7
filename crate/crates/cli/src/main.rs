//! Command-line front end: ingest curve/field records, run the descent
//! analysis, print local norm data and catalog tables.
//!
//! Exit codes: 0 on a definite result, 2 when the requested analysis ends
//! with an indeterminate-only answer, 1 on errors.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use mwgm_core::descent::{self, LValue, Verdict};
use mwgm_core::ingest::{self, CurveRecord, FieldRecord};
use mwgm_core::local_norm::{local_module_class, DGroup};
use mwgm_core::report::{self, ReportFormat, ReportMeta};
use mwgm_core::zpg_catalog::{
    invariant_profile, realize_one, regulator_valuation, saturation_index, GroupSpec,
    Indecomposable,
};

const DEFAULT_PRECISION: u32 = 20;

#[derive(Parser)]
#[command(name = "mwgm", about = "Galois module structure of Mordell-Weil groups", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GroupKind {
    Cyclic,
    Dihedral,
}

#[derive(Args)]
struct OutputArgs {
    /// structured, schema-stable output
    #[arg(long, conflicts_with = "text")]
    json: bool,
    /// human-readable output (default)
    #[arg(long)]
    text: bool,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// curve record (*.curve.json)
    #[arg(long)]
    curve: PathBuf,
    /// field record (*.field.json)
    #[arg(long)]
    field: PathBuf,
    /// quadratic twist record, required for dihedral fields
    #[arg(long)]
    twist: Option<PathBuf>,
    /// override the prime of the field record (must agree when both given)
    #[arg(long)]
    p: Option<u64>,
    /// working p-adic precision (or env MWGM_PRECISION)
    #[arg(long)]
    precision: Option<u32>,
    /// declared analytic inputs, e.g. lvalue=nonzero or rank_ext=2
    #[arg(long = "assume", value_name = "FLAG=VALUE")]
    assume: Vec<String>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Subcommand)]
enum Command {
    /// run the full descent analysis and print the report
    Analyze(AnalyzeArgs),
    /// print the table of local contributions D_v
    Dv(AnalyzeArgs),
    /// classify E(K_w) ⊗ Z_p over the unramified degree-p extension of Q_p
    LocalClass {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// print the invariant table of the indecomposable lattices
    Catalog {
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value = "cyclic")]
        group: GroupKind,
        #[arg(long)]
        precision: Option<u32>,
    },
    /// re-run the recorded verdicts over the fixture set
    Selftest {
        /// directory holding *.curve.json / *.field.json fixtures
        #[arg(long, default_value = "fixtures")]
        fixtures: PathBuf,
    },
}

fn precision_of(flag: Option<u32>) -> u32 {
    flag.or_else(|| std::env::var("MWGM_PRECISION").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(DEFAULT_PRECISION)
}

fn load_curve(path: &Path) -> Result<CurveRecord> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    ingest::parse_curve_record(&text).with_context(|| format!("loading {}", path.display()))
}

fn load_field(path: &Path) -> Result<FieldRecord> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    ingest::parse_field_record(&text).with_context(|| format!("loading {}", path.display()))
}

struct Assumptions {
    lvalue: Option<LValue>,
    rank_ext: Option<usize>,
}

fn parse_assumptions(items: &[String]) -> Result<Assumptions> {
    let mut out = Assumptions { lvalue: None, rank_ext: None };
    for item in items {
        let Some((key, value)) = item.split_once('=') else {
            bail!("--assume needs FLAG=VALUE, got {item:?}");
        };
        match key {
            "lvalue" => {
                out.lvalue = Some(match value {
                    "zero" => LValue::Zero,
                    "nonzero" => LValue::NonZero,
                    _ => bail!("lvalue must be zero or nonzero, got {value:?}"),
                })
            }
            "rank_ext" => {
                out.rank_ext =
                    Some(value.parse().with_context(|| format!("rank_ext={value:?}"))?)
            }
            _ => bail!("unknown assumption flag {key:?} (expected lvalue or rank_ext)"),
        }
    }
    Ok(out)
}

fn build_input(args: &AnalyzeArgs) -> Result<(descent::GlobalInput, ReportMeta)> {
    let curve = load_curve(&args.curve)?;
    let field = load_field(&args.field)?;
    if let Some(p) = args.p {
        if p != field.p() {
            bail!("--p {} disagrees with the field record (p = {})", p, field.p());
        }
    }
    let twist = args.twist.as_deref().map(load_curve).transpose()?;
    let assume = parse_assumptions(&args.assume)?;
    let mut input = ingest::global_input(&curve, twist.as_ref(), &field, assume.rank_ext)?;
    if let Some(lv) = assume.lvalue {
        input.lvalue = lv;
    }
    let meta = ReportMeta {
        curve_label: curve.label.clone(),
        field_label: args
            .field
            .file_stem()
            .unwrap_or_default()
            .to_string_lossy()
            .trim_end_matches(".field")
            .to_owned(),
        precision: precision_of(args.precision),
        seeds: BTreeMap::new(),
    };
    Ok((input, meta))
}

fn run_analyze(args: &AnalyzeArgs) -> Result<u8> {
    let (input, meta) = build_input(args)?;
    let rep = descent::decide(&input)?;
    let format = if args.output.json { ReportFormat::Json } else { ReportFormat::Text };
    print!("{}", report::render_report(&rep, &meta, format));
    Ok(match rep.verdict {
        Verdict::Exact(_) => 0,
        Verdict::Candidates { .. } => 2,
    })
}

fn run_dv(args: &AnalyzeArgs) -> Result<u8> {
    let (input, _meta) = build_input(args)?;
    let asm = descent::assemble_d_groups(&input)?;
    if args.output.json {
        println!("{}", serde_json::to_string_pretty(&asm)?);
    } else {
        for e in &asm.entries {
            let desc = match &e.group {
                DGroup::Known(v) if v.is_empty() => "trivial".to_string(),
                DGroup::Known(v) => v
                    .iter()
                    .map(|k| format!("Z/p^{k}"))
                    .collect::<Vec<_>>()
                    .join(" x "),
                DGroup::NonTrivialAtLeast(k) => format!("nontrivial, order >= p^{k}"),
                DGroup::Indeterminate(why) => format!("indeterminate ({why})"),
            };
            println!("ell = {:>6}: {desc} -- {}", e.ell, e.provenance);
        }
    }
    let all_indeterminate = !asm.entries.is_empty()
        && asm.entries.iter().all(|e| matches!(e.group, DGroup::Indeterminate(_)));
    Ok(if all_indeterminate { 2 } else { 0 })
}

fn run_local_class(curve: &Path, p: u64, output: &OutputArgs) -> Result<u8> {
    let rec = load_curve(curve)?;
    let class = local_module_class(&rec.curve()?, p)?;
    let g = GroupSpec::Cyclic { p };
    if output.json {
        println!("{}", serde_json::to_string_pretty(&class)?);
    } else {
        let names: Vec<String> = class.iter().map(|c| c.display_name(&g)).collect();
        println!("E(K_w) (x) Z_p = {}", names.join(" + "));
    }
    Ok(0)
}

fn run_catalog(p: u64, kind: GroupKind, precision: Option<u32>) -> Result<u8> {
    let prec = precision_of(precision);
    let (g, items): (GroupSpec, Vec<Indecomposable>) = match kind {
        GroupKind::Cyclic => (
            GroupSpec::Cyclic { p },
            vec![Indecomposable::Zp, Indecomposable::CycloA, Indecomposable::Regular],
        ),
        GroupKind::Dihedral => (
            GroupSpec::dihedral(p),
            vec![
                Indecomposable::Chi { j: 0 },
                Indecomposable::Chi { j: 1 },
                Indecomposable::AChi { j: 0 },
                Indecomposable::AChi { j: 1 },
                Indecomposable::BChi { j: 0 },
                Indecomposable::BChi { j: 1 },
            ],
        ),
    };
    let dihedral = kind == GroupKind::Dihedral;
    if dihedral {
        println!(
            "{:8} {:>4} {:>6} {:>6} {:>8} {:>8} {:>5} {:>5}",
            "lattice", "rank", "rank_N", "rank_G", "H^0(N)", "H^1(N)", "s", "iota"
        );
    } else {
        println!("{:8} {:>4} {:>6} {:>8} {:>8}", "lattice", "rank", "rank_G", "H^0", "H^1");
    }
    for item in items {
        let re = realize_one(&g, &item, prec)?;
        let prof = invariant_profile(&re)?;
        let fmt = |v: &[usize]| {
            v.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
        };
        if dihedral {
            let s = regulator_valuation(&re, 2, 1)?;
            let iota = saturation_index(&re)?;
            let iota_dim: usize = iota.graded_fp_dims.iter().sum();
            println!(
                "{:8} {:>4} {:>6} {:>6} {:>8} {:>8} {:>5} {:>5}",
                item.display_name(&g),
                prof.rank,
                prof.rank_n,
                prof.rank_g,
                fmt(&prof.h0),
                fmt(&prof.h1),
                s,
                iota_dim,
            );
        } else {
            println!(
                "{:8} {:>4} {:>6} {:>8} {:>8}",
                item.display_name(&g),
                prof.rank,
                prof.rank_g,
                fmt(&prof.h0),
                fmt(&prof.h1),
            );
        }
    }
    Ok(0)
}

/// (curve, twist, field, assumptions, expected decomposition display)
const SELFTEST_CASES: &[(&str, Option<&str>, &str, &[&str], &str)] = &[
    ("67a1", None, "m29p7", &[], "0"),
    ("37a1", None, "m211p5", &[], "Zp"),
    ("21a1", None, "m41p5", &[], "A"),
    ("89a1", None, "m23p11", &[], "Zp[G]"),
    ("82a1", Some("82a1-m35"), "dihedral35", &[], "Zp"),
    ("14a3", Some("14a3-m35"), "dihedral35", &["lvalue=nonzero"], "Zp~"),
    ("322b1", Some("322b1-m35"), "dihedral35", &[], "A~"),
    ("158e1", Some("158e1-m35"), "dihedral35", &[], "A"),
    ("37a1", Some("37a1-m35"), "dihedral35", &["rank_ext=1"], "Zp + Zp~"),
    ("57a1", Some("57a1-m35"), "dihedral35", &["rank_ext=3"], "B + B~"),
];

fn run_selftest(dir: &Path) -> Result<u8> {
    let mut failures = 0;
    for (curve, twist, field, assume, expected) in SELFTEST_CASES {
        let args = AnalyzeArgs {
            curve: dir.join(format!("{curve}.curve.json")),
            field: dir.join(format!("{field}.field.json")),
            twist: twist.map(|t| dir.join(format!("{t}.curve.json"))),
            p: None,
            precision: None,
            assume: assume.iter().map(|s| s.to_string()).collect(),
            output: OutputArgs { json: false, text: true },
        };
        let (input, _meta) = build_input(&args)?;
        let rep = descent::decide(&input)?;
        let got = match &rep.verdict {
            Verdict::Exact(ms) => report::multiset_symbol(&rep.group, ms),
            Verdict::Candidates { list, .. } => format!("{} candidates", list.len()),
        };
        let ok = got == *expected;
        if !ok {
            failures += 1;
        }
        println!(
            "{} {curve} / {field}: M = {got} (expected {expected})",
            if ok { "ok  " } else { "FAIL" }
        );
    }
    if failures > 0 {
        bail!("{failures} selftest case(s) drifted from the recorded verdicts");
    }
    println!("all {} cases match", SELFTEST_CASES.len());
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Analyze(args) => run_analyze(args),
        Command::Dv(args) => run_dv(args),
        Command::LocalClass { curve, p, output } => run_local_class(curve, *p, output),
        Command::Catalog { p, group, precision } => run_catalog(*p, *group, *precision),
        Command::Selftest { fixtures } => run_selftest(fixtures),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
