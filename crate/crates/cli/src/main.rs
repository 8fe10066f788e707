//! Batch front end: construct and verify the exact Frobenius data for a
//! supported Coxeter group, with table or JSON output. Exit status is 0
//! only when every requested exact check passes; usage errors (including
//! unsupported groups) exit 2; check failures exit 1.

use clap::{Args, Parser, Subcommand};
use refrob_core::goodbasis::GoodBasisExport;
use refrob_core::groups::{catalog, Family, GroupSpec};
use refrob_core::pipeline::{CheckKind, Pipeline};
use refrob_core::report::VerifySummary;
use serde::Serialize;
use std::io::Write;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "refrob", version, about = "Exact good basic invariants and Frobenius structures for finite Coxeter groups", max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Args, Clone)]
struct GroupArgs {
    /// Group family or name: A, B, D, I2, H3, F4 (fused names like A3 work too)
    #[arg(long)]
    group: String,
    /// Rank, for the A, B, D families
    #[arg(long)]
    rank: Option<usize>,
    /// Edge label m, for I2(m)
    #[arg(long)]
    m: Option<u32>,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Write output to a file instead of stdout
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    /// Conductor guard (default 120; REFROB_CONDUCTOR_CAP overrides)
    #[arg(long)]
    conductor_cap: Option<u32>,
    /// Cap on materialized group elements
    #[arg(long, default_value_t = 4000)]
    element_cap: usize,
    /// Seed for the randomized property sweeps
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// List the supported group catalog
    ListGroups {
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print the invariant degrees of a group
    Degrees {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Construct the standard admissible triplet
    Triplet {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compute the good basic invariants
    GoodInvariants {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compute the Frobenius structure (metric, multiplication, potential)
    Frobenius {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run exact verification checks
    Verify {
        #[command(flatten)]
        group: GroupArgs,
        /// Comma-separated: admissible, good, expansion, frobenius, equivalence, all
        #[arg(long, default_value = "all")]
        checks: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Export the full construction as JSON
    Export {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn parse_group(args: &GroupArgs) -> Result<GroupSpec, String> {
    let raw = args.group.trim();
    // Accept fused names like A3, B6, I2(7), H3, F4.
    let (family_str, fused_rank, fused_m) = split_group_name(raw);
    let rank = args.rank.or(fused_rank);
    let m = args.m.or(fused_m);
    let spec = match family_str.to_ascii_uppercase().as_str() {
        "A" => GroupSpec::new(Family::A, rank.ok_or("family A needs --rank")?, None),
        "B" | "C" => GroupSpec::new(Family::B, rank.ok_or("family B needs --rank")?, None),
        "D" => GroupSpec::new(Family::D, rank.ok_or("family D needs --rank")?, None),
        "I2" | "I" => GroupSpec::new(Family::I2, 2, Some(m.ok_or("I2 needs --m")?)),
        "H3" => Ok(GroupSpec::h3()),
        "H" => match rank {
            Some(3) => Ok(GroupSpec::h3()),
            r => GroupSpec::new(Family::H3, r.unwrap_or(4), None),
        },
        "F4" => Ok(GroupSpec::f4()),
        "F" => match rank {
            Some(4) | None => Ok(GroupSpec::f4()),
            Some(r) => GroupSpec::new(Family::F4, r, None),
        },
        "E" | "E6" | "E7" | "E8" => {
            return Err("the E family (E6, E7, E8) is outside the supported catalog".into())
        }
        other => return Err(format!("unknown group family {other:?}")),
    };
    spec.map_err(|e| e.to_string())
}

fn split_group_name(raw: &str) -> (String, Option<usize>, Option<u32>) {
    if let Some(rest) = raw.strip_prefix("I2(").and_then(|r| r.strip_suffix(')')) {
        return ("I2".into(), None, rest.parse().ok());
    }
    if raw.eq_ignore_ascii_case("H3") || raw.eq_ignore_ascii_case("F4") {
        return (raw.to_ascii_uppercase(), None, None);
    }
    if raw.eq_ignore_ascii_case("I2") {
        return ("I2".into(), None, None);
    }
    let split = raw.find(|c: char| c.is_ascii_digit());
    match split {
        Some(pos) => {
            let (fam, digits) = raw.split_at(pos);
            (fam.to_string(), digits.parse().ok(), None)
        }
        None => (raw.to_string(), None, None),
    }
}

fn emit(output: &OutputArgs, text: String) -> Result<(), String> {
    match &output.out {
        None => {
            println!("{text}");
            Ok(())
        }
        Some(path) => {
            let mut f = std::fs::File::create(path).map_err(|e| e.to_string())?;
            writeln!(f, "{text}").map_err(|e| e.to_string())
        }
    }
}

fn apply_caps(output: &OutputArgs) {
    if let Some(cap) = output.conductor_cap {
        refrob_core::scalar::set_conductor_cap(cap);
    } else if let Ok(v) = std::env::var("REFROB_CONDUCTOR_CAP") {
        if let Ok(cap) = v.parse::<u32>() {
            refrob_core::scalar::set_conductor_cap(cap);
        }
    }
}

#[derive(Serialize)]
struct GroupDescriptor {
    family: String,
    rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<u32>,
    degrees: Vec<u32>,
    order: u64,
    conductor: u32,
}

impl GroupDescriptor {
    fn new(spec: &GroupSpec) -> Self {
        GroupDescriptor {
            family: spec.family.to_string(),
            rank: spec.rank,
            m: spec.m,
            degrees: spec.degrees(),
            order: spec.order(),
            conductor: spec.conductor(),
        }
    }
}

#[derive(Serialize)]
struct FailureRecord {
    group: String,
    failed_checks: Vec<FailedCheck>,
}

#[derive(Serialize)]
struct FailedCheck {
    name: String,
    failures: Vec<String>,
}

fn run() -> Result<ExitCode, String> {
    let cli = Cli::parse();
    match cli.command {
        Command::ListGroups { output } => {
            apply_caps(&output);
            let specs = catalog();
            match output.format {
                Format::Json => {
                    let rows: Vec<GroupDescriptor> = specs.iter().map(GroupDescriptor::new).collect();
                    emit(&output, serde_json::to_string_pretty(&rows).unwrap())?;
                }
                Format::Table => {
                    let mut lines =
                        vec![format!("{:<8} {:<16} {:>8} {:>10}", "group", "degrees", "order", "conductor")];
                    for s in &specs {
                        let ds: Vec<String> = s.degrees().iter().map(u32::to_string).collect();
                        lines.push(format!(
                            "{:<8} {:<16} {:>8} {:>10}",
                            s.name(),
                            ds.join(" "),
                            s.order(),
                            s.conductor()
                        ));
                    }
                    emit(&output, lines.join("\n"))?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Degrees { group, output } => {
            apply_caps(&output);
            let spec = parse_group(&group)?;
            match output.format {
                Format::Json => {
                    emit(&output, serde_json::to_string(&spec.degrees()).unwrap())?;
                }
                Format::Table => {
                    let ds: Vec<String> = spec.degrees().iter().map(u32::to_string).collect();
                    emit(&output, ds.join(" "))?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Triplet { group, output } => {
            apply_caps(&output);
            let spec = parse_group(&group)?;
            let p = Pipeline::build(spec).map_err(|e| e.to_string())?;
            let export = p.basis.export();
            match output.format {
                Format::Json => {
                    emit(&output, serde_json::to_string_pretty(&export.triplet).unwrap())?;
                }
                Format::Table => {
                    let mut lines = Vec::new();
                    lines.push(format!("group      {}", p.group.spec.name()));
                    lines.push(format!("conductor  {}", p.group.conductor));
                    lines.push(format!("zeta       {}", p.triplet.zeta));
                    let q: Vec<String> = p.triplet.q_y.iter().map(|c| c.to_string()).collect();
                    lines.push(format!("q (roots)  [{}]", q.join(", ")));
                    let qz: Vec<String> = p.triplet.frame.q_z.iter().map(|c| c.to_string()).collect();
                    lines.push(format!("q (eigen)  [{}]", qz.join(", ")));
                    lines.push("dual Gram  antidiagonal unit".into());
                    emit(&output, lines.join("\n"))?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::GoodInvariants { group, output } => {
            apply_caps(&output);
            let spec = parse_group(&group)?;
            let p = Pipeline::build(spec).map_err(|e| e.to_string())?;
            let export: GoodBasisExport = p.basis.export();
            match output.format {
                Format::Json => {
                    emit(&output, serde_json::to_string_pretty(&export).unwrap())?;
                }
                Format::Table => {
                    let n = p.group.rank();
                    let names: Vec<String> = (1..=n).map(|i| format!("z{i}")).collect();
                    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
                    let mut lines = Vec::new();
                    for (i, poly) in export.invariants.iter().enumerate() {
                        lines.push(format!(
                            "x^{} (degree {:>2}) = {}",
                            i + 1,
                            p.group.degrees.0[i],
                            poly.format_with(&refs)
                        ));
                    }
                    let vals: Vec<String> =
                        export.values_at_q.iter().map(|c| c.to_string()).collect();
                    lines.push(format!("values at q: [{}]", vals.join(", ")));
                    emit(&output, lines.join("\n"))?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Frobenius { group, output } => {
            apply_caps(&output);
            let spec = parse_group(&group)?;
            let p = Pipeline::build(spec).map_err(|e| e.to_string())?;
            let checks = p.verify(&CheckKind::all()).map_err(|e| e.to_string())?;
            let export = p.frobenius.export(p.group.spec.name(), &checks.checks);
            match output.format {
                Format::Json => {
                    emit(&output, serde_json::to_string_pretty(&export).unwrap())?;
                }
                Format::Table => {
                    let n = p.group.rank();
                    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
                    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
                    let mut lines = Vec::new();
                    lines.push(format!("c = x^n(q) = {}", p.frobenius.c));
                    lines.push("intersection form I*(dx^a, dx^b):".into());
                    for a in 0..n {
                        for b in a..n {
                            lines.push(format!(
                                "  ({},{}) {}",
                                a + 1,
                                b + 1,
                                p.frobenius.intersection[a][b].format_with(&refs)
                            ));
                        }
                    }
                    lines.push("nonzero structure constants C_(a,b)^g:".into());
                    for a in 0..n {
                        for b in 0..n {
                            for g in 0..n {
                                let cpoly = &p.frobenius.structure[a][b][g];
                                if !cpoly.is_zero() {
                                    lines.push(format!(
                                        "  C_({},{})^{} = {}",
                                        a + 1,
                                        b + 1,
                                        g + 1,
                                        cpoly.format_with(&refs)
                                    ));
                                }
                            }
                        }
                    }
                    lines.push(format!("potential F = {}", p.frobenius.potential.format_with(&refs)));
                    let ew: Vec<String> =
                        p.frobenius.euler_weights.iter().map(|w| w.to_string()).collect();
                    lines.push(format!("Euler weights: [{}]", ew.join(", ")));
                    emit(&output, lines.join("\n"))?;
                }
            }
            if checks.passed() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
        Command::Verify { group, checks, output } => {
            apply_caps(&output);
            let spec = parse_group(&group)?;
            let mut kinds = Vec::new();
            for part in checks.split(',') {
                let part = part.trim();
                let parsed = CheckKind::parse(part)
                    .ok_or_else(|| format!("unknown check selector {part:?}"))?;
                for k in parsed {
                    if !kinds.contains(&k) {
                        kinds.push(k);
                    }
                }
            }
            let p = Pipeline::build(spec).map_err(|e| e.to_string())?;
            let summary: VerifySummary =
                p.verify_with(&kinds, output.seed).map_err(|e| e.to_string())?;
            match output.format {
                Format::Json => {
                    emit(&output, serde_json::to_string_pretty(&summary).unwrap())?;
                }
                Format::Table => {
                    let mut lines = Vec::new();
                    for c in &summary.checks {
                        if c.passed {
                            lines.push(format!("PASS  {}", c.name));
                        } else {
                            lines.push(format!("FAIL  {}", c.name));
                            for f in &c.failures {
                                lines.push(format!("      {f}"));
                            }
                        }
                    }
                    lines.push(format!(
                        "{}: {}",
                        p.group.spec.name(),
                        if summary.passed() { "all checks passed" } else { "CHECKS FAILED" }
                    ));
                    emit(&output, lines.join("\n"))?;
                }
            }
            if summary.passed() {
                Ok(ExitCode::SUCCESS)
            } else {
                if output.format == Format::Table {
                    // machine-readable failure record alongside the table
                    let record = FailureRecord {
                        group: p.group.spec.name(),
                        failed_checks: summary
                            .checks
                            .iter()
                            .filter(|c| !c.passed)
                            .map(|c| FailedCheck { name: c.name.clone(), failures: c.failures.clone() })
                            .collect(),
                    };
                    eprintln!("{}", serde_json::to_string(&record).unwrap());
                }
                Ok(ExitCode::from(1))
            }
        }
        Command::Export { group, output } => {
            apply_caps(&output);
            let spec = parse_group(&group)?;
            let p = Pipeline::build(spec).map_err(|e| e.to_string())?;
            let checks = p.verify(&CheckKind::all()).map_err(|e| e.to_string())?;
            #[derive(Serialize)]
            struct FullExport {
                group: GroupDescriptor,
                good_basis: GoodBasisExport,
                frobenius: refrob_core::frobenius::FrobeniusExport,
                all_checks_passed: bool,
            }
            let full = FullExport {
                group: GroupDescriptor::new(&p.group.spec),
                good_basis: p.basis.export(),
                frobenius: p.frobenius.export(p.group.spec.name(), &checks.checks),
                all_checks_passed: checks.passed(),
            };
            emit(&output, serde_json::to_string_pretty(&full).unwrap())?;
            if checks.passed() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
