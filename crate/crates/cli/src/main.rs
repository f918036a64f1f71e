//! `chiralext`: build and check chiral extensions from the command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chiral_core::toroidal::toroidal_extension;
use chiral_core::verify::{ConditionResult, Witness};
use chiral_core::{
    analyze, extend, verify_extension, ExtendedGpr, ExtensionError, GprGraph, ToroidalError,
    ToroidalParams, VerificationReport,
};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Parser, Debug)]
#[command(
    name = "chiralext",
    version,
    about = "Chiral polytope extensions via GPR graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build, verify and analyze the extension of the toroidal map {4,4}_(b,c).
    Analyze {
        #[arg(long)]
        b: u64,
        #[arg(long)]
        c: u64,
        /// Print the JSON report instead of the summary.
        #[arg(long)]
        json: bool,
        /// Also write the Cayley GPR graph of the map here.
        #[arg(long, value_name = "PATH")]
        emit_cayley: Option<PathBuf>,
        /// Also write the extended graph (explicit matching) here.
        #[arg(long, value_name = "PATH")]
        emit_extension: Option<PathBuf>,
    },
    /// Extend a Cayley GPR graph (JSON) and write the extended graph.
    Extend {
        input: PathBuf,
        output: PathBuf,
        /// Re-derive this many partners along random walks.
        #[arg(long, default_value_t = 0)]
        audit: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print the JSON verification report instead of the summary.
        #[arg(long)]
        json: bool,
    },
    /// Run the verification battery on an extension against its facet graph.
    Verify {
        extension: PathBuf,
        facet: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Render a graph file as Graphviz DOT (to stdout without OUTPUT).
    ExportDot {
        input: PathBuf,
        output: Option<PathBuf>,
    },
}

/// A failed command with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn verification(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<GprGraph, Failure> {
    GprGraph::from_json(&read(path)?)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// SHA-256 over the construction log and the matching, so a report pins
/// down the exact extension it describes.
fn construction_digest(ext: &ExtendedGpr) -> String {
    let payload = json!({
        "log": ext.construction_log(),
        "matching": ext.tau().images(),
    });
    hex::encode(Sha256::digest(payload.to_string().as_bytes()))
}

/// Wraps a report with the tool version and construction digest. Keys come
/// out sorted, so equal inputs give byte-identical output.
fn envelope(report: Value, ext: &ExtendedGpr) -> String {
    let v = json!({
        "tool": "chiralext",
        "version": env!("CARGO_PKG_VERSION"),
        "construction_digest": construction_digest(ext),
        "report": report,
    });
    serde_json::to_string_pretty(&v).expect("report serializes") + "\n"
}

fn describe_witness(w: &Witness) -> String {
    match w {
        Witness::Vertex { vertex } => format!("vertex {vertex}"),
        Witness::Relation { k, vertex } => format!("k = {k} moves vertex {vertex}"),
        Witness::Power { m } => format!("power {m} of the top generator lies in the facet group"),
        Witness::Component {
            component,
            least_vertex,
        } => format!("component {component} (least vertex {least_vertex})"),
        Witness::Level { k } => format!("no good intersection for k = {k}"),
        Witness::Message { text } => text.clone(),
    }
}

fn condition_line(name: &str, c: &ConditionResult) -> String {
    let mut s = format!(
        "condition ({name}): {}",
        if c.passed { "pass" } else { "FAIL" }
    );
    if !c.passed {
        let ws: Vec<String> = c.witnesses.iter().take(3).map(describe_witness).collect();
        s.push_str(&format!(" [{}]", ws.join("; ")));
    }
    s
}

fn verification_summary(rep: &VerificationReport) -> String {
    let held = rep.relation_checks.iter().filter(|c| c.holds).count();
    let schlafli: Vec<String> = rep.schlafli.iter().map(u64::to_string).collect();
    let mut lines = vec![
        format!("relations: {held}/{} hold", rep.relation_checks.len()),
        format!(
            "half-turn family agrees with direct relations: {}",
            rep.half_turn_agreement
        ),
        condition_line("a", &rep.conditions.a),
        condition_line("b", &rep.conditions.b),
        condition_line("c", &rep.conditions.c),
        condition_line("d", &rep.conditions.d),
        format!("schlafli: [{}]", schlafli.join(",")),
        format!("facet chirality: {:?}", rep.facet_chirality),
        format!(
            "chirality: {}",
            rep.chirality
                .map(|c| format!("{c:?}"))
                .unwrap_or_else(|| "undecided".into())
        ),
    ];
    for c in rep.relation_checks.iter().filter(|c| !c.holds).take(5) {
        lines.push(format!(
            "  relation {} fails at vertex {}",
            c.id,
            c.witness.unwrap_or(0)
        ));
    }
    lines.push(format!(
        "overall: {}",
        if rep.overall { "pass" } else { "FAIL" }
    ));
    lines.join("\n") + "\n"
}

fn verdict(rep: &VerificationReport) -> Outcome {
    if rep.overall {
        Ok(())
    } else {
        Err(Failure::verification(format!(
            "verification failed: {}",
            rep.failures().join(", ")
        )))
    }
}

fn cmd_analyze(
    b: u64,
    c: u64,
    as_json: bool,
    emit_cayley: Option<&Path>,
    emit_extension: Option<&Path>,
) -> Outcome {
    let rep = analyze(b, c).map_err(|e| match e {
        ToroidalError::Battery(_) => Failure::verification(e.to_string()),
        ToroidalError::NotChiral { .. }
        | ToroidalError::TUndefined { .. }
        | ToroidalError::TooLarge { .. } => Failure::input(e.to_string()),
        other => Failure::verification(other.to_string()),
    })?;
    let params = ToroidalParams::new(b, c).map_err(|e| Failure::input(e.to_string()))?;
    let ext = toroidal_extension(&params).map_err(|e| Failure::verification(e.to_string()))?;
    if let Some(path) = emit_cayley {
        write(path, &(ext.facet().to_json() + "\n"))?;
    }
    if let Some(path) = emit_extension {
        write(path, &(ext.to_json() + "\n"))?;
    }
    if as_json {
        let v = serde_json::to_value(&rep).expect("report serializes");
        print!("{}", envelope(v, &ext));
    } else {
        print!("{}", rep.summary());
        println!("construction digest: {}", construction_digest(&ext));
    }
    Ok(())
}

fn cmd_extend(input: &Path, output: &Path, audit: usize, seed: u64, as_json: bool) -> Outcome {
    let cay = read_graph(input)?;
    let ext = extend(&cay).map_err(|e| match e {
        ExtensionError::Internal(_) => Failure::verification(e.to_string()),
        _ => Failure::input(format!("{}: {e}", input.display())),
    })?;
    write(output, &(ext.to_json() + "\n"))?;
    let rep = verify_extension(&ext, &cay).map_err(|e| Failure::verification(e.to_string()))?;
    if as_json {
        let v = serde_json::to_value(&rep).expect("report serializes");
        print!("{}", envelope(v, &ext));
    } else {
        println!(
            "wrote {} ({} vertices)",
            output.display(),
            ext.graph().vertex_count()
        );
        print!("{}", verification_summary(&rep));
        println!("construction digest: {}", construction_digest(&ext));
    }
    if audit > 0 {
        let bad = ext.audit_propagation(audit, seed);
        if !bad.is_empty() {
            return Err(Failure::verification(format!(
                "propagation audit disagrees at vertices {bad:?}"
            )));
        }
        if !as_json {
            println!("propagation audit: {audit} walks agree");
        }
    }
    verdict(&rep)
}

fn cmd_verify(ext_path: &Path, facet_path: &Path, as_json: bool) -> Outcome {
    let facet = read_graph(facet_path)?;
    let ext = ExtendedGpr::from_json(&read(ext_path)?, facet.clone())
        .map_err(|e| Failure::input(format!("{}: {e}", ext_path.display())))?;
    let rep = verify_extension(&ext, &facet).map_err(|e| Failure::verification(e.to_string()))?;
    if as_json {
        let v = serde_json::to_value(&rep).expect("report serializes");
        print!("{}", envelope(v, &ext));
    } else {
        print!("{}", verification_summary(&rep));
    }
    verdict(&rep)
}

fn cmd_export_dot(input: &Path, output: Option<&Path>) -> Outcome {
    let text = read(input)?;
    // Extension files carry sigma_d, which the plain graph reader accepts.
    let g = GprGraph::from_json(&text)
        .map_err(|e| Failure::input(format!("{}: {e}", input.display())))?;
    let dot = g.export_dot();
    match output {
        Some(path) => write(path, &dot),
        None => {
            print!("{dot}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze {
            b,
            c,
            json,
            emit_cayley,
            emit_extension,
        } => cmd_analyze(
            *b,
            *c,
            *json,
            emit_cayley.as_deref(),
            emit_extension.as_deref(),
        ),
        Command::Extend {
            input,
            output,
            audit,
            seed,
            json,
        } => cmd_extend(input, output, *audit, *seed, *json),
        Command::Verify {
            extension,
            facet,
            json,
        } => cmd_verify(extension, facet, *json),
        Command::ExportDot { input, output } => cmd_export_dot(input, output.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
