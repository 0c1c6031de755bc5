use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dprolong::arith::rational::format_rational;
use dprolong::base_field::{BaseElem, DerivationVector};
use dprolong::checks::{self, CheckReport};
use dprolong::delta::DeltaPoly;
use dprolong::frontend::{emit_axiom_instance, parse_base_elem, parse_matrix, System, SystemDocument};
use dprolong::geometry::{prolongation_fiber, prolongation_system, tangent_system, VarietySystem};
use dprolong::prolong::{extend_derivation, tau};
use dprolong::transform::{make_transformed, transformed_ring};

#[derive(Parser)]
#[command(name = "dprolong", version, about = "Prolongations of systems of differential polynomials")]
struct Cli {
    /// JSON system document. Read from standard input when omitted.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
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
    /// Print τ of each polynomial.
    Tau,
    /// Print the pairs (f, τf) cutting out the prolongation.
    Prolong,
    /// Print the pairs (f, df·ȳ) cutting out the tangent bundle.
    Tangent,
    /// Print the linear equations of the prolongation fiber over a point.
    Fiber {
        /// Comma-separated coordinates; defaults to the document's point.
        #[arg(long)]
        point: Option<String>,
    },
    /// Print τ under the derivations given by the rows of a matrix.
    Transform {
        /// Rows separated by ';', entries by ','; defaults to the document's matrix.
        #[arg(long)]
        matrix: Option<String>,
    },
    /// Extend D to the point with D′ā = b̄ and print its values.
    Extend {
        #[arg(long)]
        point: Option<String>,
        #[arg(long)]
        companion: Option<String>,
    },
    /// Run a randomized property check. No input document is read.
    Check {
        #[arg(value_enum)]
        name: CheckName,
        /// Restrict nabla and cofactor to a single power.
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
    /// Emit the first-order instance for a change of derivations.
    AxiomInstance {
        #[arg(long)]
        matrix: Option<String>,
        /// W-generators separated by ';'; defaults to the document's w.
        #[arg(long)]
        w: Option<String>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckName {
    Identities,
    Nabla,
    Cofactor,
    Torsor,
    Commute,
}

enum Failure {
    Input(String),
    Check(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

struct Output {
    text: String,
    json: Value,
}

fn read_system(path: &Option<PathBuf>) -> Result<System, Failure> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?,
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    Ok(SystemDocument::from_json(&text)?.resolve()?)
}

fn elements(sys: &System, flag: &Option<String>, fallback: &Option<Vec<BaseElem>>, what: &str) -> Result<Vec<BaseElem>, Failure> {
    let values = match flag {
        Some(text) => text
            .split(',')
            .map(|s| parse_base_elem(s.trim(), sys.generators()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| Failure::Input(format!("--{what}: {e}")))?,
        None => fallback.clone().ok_or_else(|| Failure::Input(format!("no {what} given")))?,
    };
    if values.len() != sys.ring.n() {
        return Err(Failure::Input(format!("{what} has {} coordinates, expected {}", values.len(), sys.ring.n())));
    }
    Ok(values)
}

fn variety(sys: &System) -> Result<VarietySystem, Failure> {
    Ok(VarietySystem::new(sys.polys.clone())?)
}

fn vector(v: &DerivationVector) -> Vec<String> {
    v.0.iter().map(format_rational).collect()
}

fn pairs_output(sys: &System, pairs: &[(DeltaPoly, DeltaPoly)]) -> Output {
    let printed: Vec<[String; 2]> = pairs.iter().map(|(f, g)| [sys.print(f), sys.print(g)]).collect();
    let text = printed.iter().map(|[f, g]| format!("{f} -> {g}\n")).collect();
    Output { text, json: json!({ "pairs": printed }) }
}

fn run_check(name: CheckName, k: Option<u32>, seed: u64, cases: usize) -> Result<CheckReport, Failure> {
    let ks: Vec<u32> = match k {
        None => vec![1, 2, 3],
        Some(k) if !(1..=3).contains(&k) => return Err(Failure::Input(format!("--k {k} is outside 1..=3"))),
        Some(k) if matches!(name, CheckName::Nabla | CheckName::Cofactor) => vec![k],
        Some(_) => return Err(Failure::Input("--k applies to nabla and cofactor only".into())),
    };
    Ok(match name {
        CheckName::Identities => checks::identities(seed, cases),
        CheckName::Nabla => checks::nabla_identity(seed, cases, &ks),
        CheckName::Cofactor => checks::power_cofactor(seed, cases, &ks),
        CheckName::Torsor => checks::torsor(seed, cases),
        CheckName::Commute => checks::commute(seed, cases),
    })
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    if let Command::Check { name, k, seed, cases } = &cli.command {
        let report = run_check(*name, *k, *seed, *cases)?;
        let text = format!("{report}\n");
        if !report.passed() {
            return Err(Failure::Check(text));
        }
        return Ok(Output { text, json: serde_json::to_value(&report)? });
    }
    let mut sys = read_system(&cli.input)?;
    match &cli.command {
        Command::Tau => {
            let taus: Vec<String> = sys.polys.iter().map(|f| sys.print(&tau(&sys.ring, f))).collect();
            Ok(Output { text: taus.iter().map(|t| format!("{t}\n")).collect(), json: json!({ "tau": taus }) })
        }
        Command::Prolong => {
            let p = prolongation_system(&sys.ring, &variety(&sys)?);
            let mut out = pairs_output(&sys, &p.pairs);
            out.text.push_str(&format!("note: {}\n", p.caveat));
            out.json["caveat"] = json!(p.caveat);
            Ok(out)
        }
        Command::Tangent => Ok(pairs_output(&sys, &tangent_system(&variety(&sys)?).pairs)),
        Command::Fiber { point } => {
            let a = elements(&sys, point, &sys.point, "point")?;
            let equations: Vec<String> =
                prolongation_fiber(&sys.ring, &variety(&sys)?, &a)?.iter().map(|f| sys.print(f)).collect();
            Ok(Output {
                text: equations.iter().map(|e| format!("{e} = 0\n")).collect(),
                json: json!({ "point": a.iter().map(|e| sys.print_elem(e)).collect::<Vec<_>>(), "equations": equations }),
            })
        }
        Command::Transform { matrix } => {
            if let Some(text) = matrix {
                sys.matrix = Some(parse_matrix(text)?);
            }
            let m = sys.matrix.as_ref().ok_or_else(|| Failure::Input("no matrix given".into()))?;
            let (deltas, d) = make_transformed(m, &sys.field)?;
            let ring = transformed_ring(m, sys.field.clone(), sys.ring.n())?;
            let taus: Vec<[String; 2]> = sys.polys.iter().map(|f| [sys.print(f), sys.print(&tau(&ring, f))]).collect();
            let mut text = String::new();
            for (i, v) in deltas.iter().enumerate() {
                text.push_str(&format!("d{}' = ({})\n", i + 1, vector(v).join(", ")));
            }
            text.push_str(&format!("D' = ({})\n", vector(&d).join(", ")));
            for [f, t] in &taus {
                text.push_str(&format!("{f} -> {t}\n"));
            }
            let json = json!({
                "deltas": deltas.iter().map(vector).collect::<Vec<_>>(),
                "d": vector(&d),
                "pairs": taus,
            });
            Ok(Output { text, json })
        }
        Command::Extend { point, companion } => {
            let a = elements(&sys, point, &sys.point, "point")?;
            let b = elements(&sys, companion, &sys.companion, "companion")?;
            let ext = extend_derivation(&sys.ring, &sys.polys, &a, &b)?;
            let mut rows: Vec<[String; 2]> = Vec::new();
            for j in 0..sys.ring.n() {
                rows.push([sys.print(&sys.ring.x(j)), sys.print_elem(&ext.apply(&sys.ring.x(j))?)]);
            }
            for w in &sys.w {
                rows.push([sys.print(w), sys.print_elem(&ext.apply(w)?)]);
            }
            Ok(Output {
                text: rows.iter().map(|[f, v]| format!("D'({f}) = {v}\n")).collect(),
                json: json!({ "values": rows }),
            })
        }
        Command::AxiomInstance { matrix, w } => {
            if let Some(text) = matrix {
                sys.matrix = Some(parse_matrix(text)?);
            }
            if let Some(text) = w {
                sys.w = text.split(';').map(|p| sys.parse_poly(p.trim())).collect::<Result<_, _>>()?;
            }
            let doc = emit_axiom_instance(&sys)?;
            let mut text = String::new();
            for (i, v) in doc.deltas.iter().enumerate() {
                text.push_str(&format!("d{}' = ({})\n", i + 1, v.join(", ")));
            }
            text.push_str(&format!("D' = ({})\n", doc.d.join(", ")));
            for [f, t] in &doc.pairs {
                text.push_str(&format!("pair: {f} -> {t}\n"));
            }
            for g in &doc.w {
                text.push_str(&format!("w: {g}\n"));
            }
            text.push_str(&format!("sentence: {}\nnote: {}\n", doc.sentence, doc.caveat));
            Ok(Output { text, json: serde_json::to_value(&doc)? })
        }
        Command::Check { .. } => unreachable!("handled above"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Text => print!("{}", out.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable")),
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Check(witness)) => {
            print!("{witness}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
