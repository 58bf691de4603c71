//! Command-line interface for exact computations with divisorial valuations
//! at infinity: valuation values, normal forms, intersection matrices,
//! existence/skewness tests, curvette elements, and dual resolution graphs.
//!
//! Exit codes: 0 success, 2 parse error, 3 precondition error, 4 internal
//! consistency failure (the independent computation routes disagreed; always
//! a bug).

use std::path::PathBuf;
use std::process;

use clap::{Parser, Subcommand};

use curvette_core::emit::{emit_dot, graph_to_json, matrix_from_json, matrix_to_json, JsonReport};
use curvette_core::error::{Error, Result};
use curvette_core::parse::{parse_poly, parse_series};
use curvette_core::{intersection, normalize, resolution, valuation, Semidegree};

#[derive(Parser)]
#[command(name = "curvette", version, about = "Exact valuations at infinity on the plane")]
struct Cli {
    /// Emit results as JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate v(f) for the valuation of SERIES on the polynomial F.
    Valuate {
        #[arg(long)]
        series: String,
        #[arg(long)]
        poly: String,
    },
    /// Put SERIES into normal form, printing the automorphism word.
    Normalize {
        #[arg(long)]
        series: String,
        /// Print one line per elementary step.
        #[arg(long)]
        trace: bool,
    },
    /// Mutual-valuation matrix M and intersection matrix I = M^-1.
    Matrix {
        #[arg(long = "series", required = true)]
        series: Vec<String>,
    },
    /// Does a compactification with exactly these curves at infinity exist?
    Exists {
        #[arg(long = "series", required = true)]
        series: Vec<String>,
    },
    /// Skewness alpha = alpha*/p^2 and the determination test.
    Skewness {
        #[arg(long)]
        series: String,
    },
    /// The generic curvette element, the product over all conjugates.
    Curvette {
        #[arg(long)]
        series: String,
    },
    /// Dual graph of the resolution of singularities (augmented by default).
    DualGraph {
        #[arg(long)]
        series: String,
        /// Blow the graph down to the minimal resolution first.
        #[arg(long)]
        minimal: bool,
        /// Output format: dot or json.
        #[arg(long, default_value = "dot")]
        format: String,
    },
    /// Factor the polynomial automorphism (P, Q) into elementary factors.
    FactorAuto {
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
    },
    /// Contract the curve INDEX in an intersection matrix read from FILE.
    Contract {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        index: usize,
    },
}

fn parse_series_list(texts: &[String]) -> Result<Vec<Semidegree>> {
    texts.iter().map(|t| parse_series(t)).collect()
}

fn series_report(psi: &Semidegree) -> JsonReport {
    JsonReport {
        series: Some(psi.to_string()),
        formal_pairs: Some(
            psi.formal_pairs()
                .iter()
                .map(|(q, p)| [q.to_string(), p.to_string()])
                .collect(),
        ),
        polydromy: Some(psi.polydromy()),
        ..Default::default()
    }
}

fn print_json(report: &JsonReport) {
    println!("{}", serde_json::to_string_pretty(report).unwrap());
}

fn print_matrix(name: &str, m: &curvette_core::QMatrix) {
    println!("{} =", name);
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| m[(i, j)].to_string()).collect();
        println!("  [{}]", row.join(", "));
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Valuate { series, poly } => {
            let psi = parse_series(&series)?;
            let f = parse_poly(&poly)?;
            let value = valuation::evaluate(&psi, &f)?;
            if cli.json {
                let mut r = series_report(&psi);
                r.poly = Some(f.to_string());
                r.value = Some(value.to_string());
                print_json(&r);
            } else {
                println!("v(f) = {}", value);
            }
        }
        Command::Normalize { series, trace } => {
            let psi = parse_series(&series)?;
            let (normal, word) = normalize::normalize_series(&psi)?;
            if cli.json {
                let mut r = series_report(&psi);
                r.normal_form = Some(normal.to_string());
                r.word = Some(word.0.iter().map(|s| s.to_string()).collect());
                print_json(&r);
            } else {
                if trace {
                    for (i, step) in word.0.iter().enumerate() {
                        println!("step {}: {}", i + 1, step);
                    }
                }
                println!("normal form: {}", normal);
                println!("word: {}", word);
            }
        }
        Command::Matrix { series } => {
            let vals = parse_series_list(&series)?;
            let data = intersection::intersection_matrix(&vals)?;
            if cli.json {
                let r = JsonReport {
                    matrix_m: Some(matrix_to_json(&data.m)),
                    matrix_i: Some(matrix_to_json(&data.i)),
                    ..Default::default()
                };
                print_json(&r);
            } else {
                print_matrix("M", &data.m);
                print_matrix("I", &data.i);
            }
        }
        Command::Exists { series } => {
            let vals = parse_series_list(&series)?;
            let (exists, det) = intersection::exists_compactification(&vals)?;
            if cli.json {
                let r = JsonReport {
                    exists: Some(exists),
                    determinant: Some(det.to_string()),
                    ..Default::default()
                };
                print_json(&r);
            } else {
                println!("exists = {} (det M~ = {})", exists, det);
            }
        }
        Command::Skewness { series } => {
            let psi = parse_series(&series)?;
            let alpha_star = valuation::alpha_star(&psi);
            let skew = valuation::skewness(&psi)?;
            let determines = valuation::determines_compactification(&psi)?;
            if cli.json {
                let mut r = series_report(&psi);
                r.alpha_star = Some(alpha_star.to_string());
                r.skewness = Some(skew.to_string());
                r.determines_compactification = Some(determines);
                print_json(&r);
            } else {
                println!("alpha* = {}", alpha_star);
                println!("skewness = {}", skew);
                println!("determines compactification: {}", determines);
            }
        }
        Command::Curvette { series } => {
            let psi = parse_series(&series)?;
            let c = valuation::generic_curvette_element(&psi)?;
            if cli.json {
                let mut r = series_report(&psi);
                r.curvette = Some(c.to_string());
                print_json(&r);
            } else {
                println!("{}", c);
            }
        }
        Command::DualGraph { series, minimal, format } => {
            let psi = parse_series(&series)?;
            let template = resolution::build_augmented_graph(&psi)?;
            // Cross-check against the independent blow-up simulation; a
            // mismatch is always a bug and exits with code 4.
            let simulated = resolution::simulate_resolution(&psi)?;
            if !template.isomorphic(&simulated) {
                return Err(Error::inconsistency(
                    "continued-fraction template and blow-up simulation disagree".to_string(),
                ));
            }
            let graph = if minimal {
                template.blow_down_cascade()
            } else {
                template
            };
            match format.as_str() {
                "dot" if !cli.json => print!("{}", emit_dot(&graph)),
                "json" | "dot" => {
                    let mut r = series_report(&psi);
                    r.graph = Some(graph_to_json(&graph));
                    if minimal {
                        r.singular_points = Some(resolution::singularity_report(&psi)?.0);
                    }
                    print_json(&r);
                }
                other => {
                    return Err(Error::precondition(format!(
                        "unknown format '{}' (expected dot or json)",
                        other
                    )));
                }
            }
        }
        Command::FactorAuto { p, q } => {
            let p = parse_poly(&p)?;
            let q = parse_poly(&q)?;
            let word = normalize::factor_automorphism(&p, &q)?;
            if cli.json {
                let r = JsonReport {
                    word: Some(word.0.iter().map(|s| s.to_string()).collect()),
                    ..Default::default()
                };
                print_json(&r);
            } else {
                println!("{}", word);
            }
        }
        Command::Contract { matrix, index } => {
            let text = std::fs::read_to_string(&matrix).map_err(|e| {
                Error::precondition(format!("cannot read {}: {}", matrix.display(), e))
            })?;
            let m = matrix_from_json(&text)?;
            let out = intersection::contract_curve(&m, index)?;
            if cli.json {
                let r = JsonReport {
                    matrix: Some(matrix_to_json(&out)),
                    ..Default::default()
                };
                print_json(&r);
            } else {
                print_matrix("contracted", &out);
            }
        }
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {}", e);
        process::exit(e.exit_code());
    }
}
