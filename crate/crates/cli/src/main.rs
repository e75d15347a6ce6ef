//! `khxd`: almost-extreme Khovanov homology of adequate link diagrams, by a
//! closed formula, by the cellular homology of `X_D`, and directly.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use khxd_core::analysis::{analyze, full_table, AnalysisError};
use khxd_core::diagram::{Diagram, DiagramError};
use khxd_core::khovanov::{render_grid, DEFAULT_MAX_C};
use khxd_core::presimplicial::{PartialPresimplicialSet, PpsError};
use khxd_core::state_graph::all_a_graph;
use serde_json::json;

#[derive(Parser)]
#[command(name = "khxd", version, about = "Almost-extreme Khovanov homology of A-adequate link diagrams")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Cross-check H_{*, j_max - 4} by all three routes.
    Analyze {
        /// PD code, diagram JSON, or a file holding either ("-" reads stdin).
        input: String,
        /// Analyze the mirror of a diagram that is only B-adequate.
        #[arg(long)]
        auto_mirror: bool,
        /// Write X_D as JSON to this file.
        #[arg(long, value_name = "FILE")]
        dump_pps: Option<PathBuf>,
        /// Refuse diagrams with more crossings.
        #[arg(long, env = "KHXD_MAX_C")]
        max_c: Option<usize>,
    },
    /// Full framed Khovanov table, checked against the Kauffman bracket.
    Table {
        input: String,
        #[arg(long, env = "KHXD_MAX_C", default_value_t = DEFAULT_MAX_C)]
        max_c: usize,
        /// Also print oriented gradings for this writhe.
        #[arg(long, allow_hyphen_values = true)]
        writhe: Option<i64>,
    },
    /// All-A state graph as JSON.
    Graph { input: String },
    /// Tools for partial presimplicial sets stored as JSON.
    Pps {
        #[command(subcommand)]
        action: PpsAction,
    },
}

#[derive(Subcommand)]
enum PpsAction {
    /// Check the face-map axiom.
    Validate { file: PathBuf },
    /// Homology of the realization, reduced unless --unreduced is given.
    Homology {
        file: PathBuf,
        #[arg(long)]
        unreduced: bool,
    },
}

/// A failure together with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl fmt::Display) -> Self {
        Failure { code: 1, message: message.to_string() }
    }

    fn input(message: impl fmt::Display) -> Self {
        Failure { code: 2, message: message.to_string() }
    }
}

impl From<DiagramError> for Failure {
    fn from(e: DiagramError) -> Self {
        Failure::input(e)
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        Failure::input(e)
    }
}

impl From<PpsError> for Failure {
    fn from(e: PpsError) -> Self {
        Failure::input(e)
    }
}

fn read_text(input: &str) -> Result<String, Failure> {
    if input == "-" {
        return std::io::read_to_string(std::io::stdin()).map_err(Failure::usage);
    }
    let path = Path::new(input);
    if path.is_file() {
        fs::read_to_string(path).map_err(|e| Failure::usage(format!("{input}: {e}")))
    } else {
        Ok(input.to_string())
    }
}

fn read_diagram(input: &str) -> Result<Diagram, Failure> {
    Ok(Diagram::parse_any(read_text(input)?.trim())?)
}

fn read_pps(file: &Path) -> Result<PartialPresimplicialSet, Failure> {
    let text = fs::read_to_string(file).map_err(|e| Failure::usage(format!("{}: {e}", file.display())))?;
    Ok(PartialPresimplicialSet::from_json(&text)?)
}

fn check_size(d: &Diagram, max_c: Option<usize>) -> Result<(), Failure> {
    match max_c {
        Some(max) if d.crossing_count() > max => {
            Err(Failure::input(format!("diagram has {} crossings, more than the bound {max}", d.crossing_count())))
        }
        _ => Ok(()),
    }
}

fn print_json(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Analyze { input, auto_mirror, dump_pps, max_c } => {
            let d = read_diagram(&input)?;
            check_size(&d, max_c)?;
            let analysis = analyze(&d, auto_mirror)?;
            if let Some(path) = dump_pps {
                fs::write(&path, analysis.xd.to_json() + "\n")
                    .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            }
            let report = analysis.report;
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize")),
                Format::Text => print!("{}", report.render_text()),
            }
            if !report.agreement {
                eprintln!("error: the three computations disagree");
                return Ok(3);
            }
            Ok(0)
        }
        Command::Table { input, max_c, writhe } => {
            let d = read_diagram(&input)?;
            let report = full_table(&d, max_c)?;
            let oriented = writhe.map(|w| report.table.oriented(w)).transpose().map_err(Failure::input)?;
            match cli.format {
                Format::Json => {
                    let mut value = json!({
                        "pd": d.to_pd_string(),
                        "crossings": d.crossing_count(),
                        "groups": report.groups(),
                        "bracket": report.bracket,
                        "euler_ok": report.euler_ok,
                    });
                    if let (Some(w), Some(o)) = (writhe, &oriented) {
                        let entries: Vec<_> = o.iter().map(|((i, j), g)| json!({"i": i, "j": j, "group": g})).collect();
                        value["writhe"] = json!(w);
                        value["oriented"] = json!(entries);
                    }
                    print_json(&value);
                }
                Format::Text => {
                    println!("framed Khovanov homology of {}", d.to_pd_string());
                    print!("{}", report.table.render());
                    if let Some(o) = &oriented {
                        println!("oriented gradings (writhe {})", writhe.unwrap_or_default());
                        print!("{}", render_grid(o, "J\\I"));
                    }
                    println!("bracket      {}", report.bracket);
                    println!("euler check  {}", if report.euler_ok { "ok" } else { "FAILED" });
                }
            }
            if !report.euler_ok {
                eprintln!("error: graded Euler characteristic differs from the Kauffman bracket");
                return Ok(3);
            }
            Ok(0)
        }
        Command::Graph { input } => {
            let d = read_diagram(&input)?;
            let g = all_a_graph(&d);
            match cli.format {
                Format::Json => println!("{}", g.to_json()),
                Format::Text => {
                    println!("vertices {}", g.vertices().join(" "));
                    for e in g.edges() {
                        println!("edge {}: {} - {}", e.crossing, g.vertices()[e.ends.0], g.vertices()[e.ends.1]);
                    }
                }
            }
            Ok(0)
        }
        Command::Pps { action: PpsAction::Validate { file } } => {
            let x = read_pps(&file)?;
            let result = x.validate();
            match (cli.format, &result) {
                (Format::Json, Ok(())) => print_json(&json!({"valid": true})),
                (Format::Json, Err(v)) => print_json(&json!({
                    "valid": false,
                    "violation": {"dim": v.dim, "cell": v.cell, "i": v.i, "j": v.j},
                })),
                (Format::Text, Ok(())) => println!("valid"),
                (Format::Text, Err(v)) => println!("invalid: {v}"),
            }
            Ok(if result.is_ok() { 0 } else { 2 })
        }
        Command::Pps { action: PpsAction::Homology { file, unreduced } } => {
            let x = read_pps(&file)?;
            let h = if unreduced { x.homology()? } else { x.reduced_homology()? };
            match cli.format {
                Format::Json => {
                    let degrees: Vec<_> = h.iter().map(|(k, g)| json!({"degree": k, "group": g})).collect();
                    print_json(&json!({"reduced": !unreduced, "homology": degrees}));
                }
                Format::Text => {
                    for (k, g) in &h {
                        println!("H{} {g}", if unreduced { format!("_{k}") } else { format!("~_{k}") });
                    }
                }
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
