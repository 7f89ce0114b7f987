use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ricci_cli::{run_edge, run_generate, run_product_check, run_sample, run_scan, run_verify};

/// Exact Ollivier-Ricci idleness functions on finite graphs.
///
/// Graphs are given either as a generator spec (`cycle:5`, `path:4`,
/// `complete:5`, `star:3`, `hypercube:3`, `petersen`, `dodecahedral`,
/// `product:cycle:3,cycle:4`) or as a path to an edge-list file
/// (`u v` pairs, `#` comments, optional `vertices N` first line).
#[derive(Parser)]
#[command(name = "ricci", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full report for a single edge, as JSON with exact rationals.
    Edge {
        /// Generator spec or edge-list file.
        graph: String,
        #[arg(short, long)]
        u: usize,
        #[arg(short, long)]
        v: usize,
        /// Write to a file instead of stdout.
        #[arg(short, long)]
        out: Option<String>,
    },
    /// Reports for every edge plus a graph summary, as JSON.
    Scan {
        graph: String,
        #[arg(short, long)]
        out: Option<String>,
    },
    /// Compare the product formula against direct computation on the
    /// Cartesian product of two regular graphs.
    ProductCheck { graph_g: String, graph_h: String },
    /// Cross-check the envelope against the transport LP and run the
    /// optimal-pair lemma suite on an idleness grid.
    Verify {
        graph: String,
        /// Grid density: idleness values k/GRID plus all breakpoints
        /// and their 1/1000 neighbourhoods.
        #[arg(long, default_value_t = 24)]
        grid: usize,
    },
    /// CSV of (idleness, curvature) samples for one edge, for plotting.
    Sample {
        graph: String,
        #[arg(short, long)]
        u: usize,
        #[arg(short, long)]
        v: usize,
        /// Sample at idleness values k/NUM (breakpoints are always added).
        #[arg(short, long, default_value_t = 24)]
        num: usize,
        #[arg(short, long)]
        out: Option<String>,
    },
    /// Write a generator-family graph as an edge-list file.
    Generate {
        spec: String,
        #[arg(short, long)]
        out: Option<String>,
    },
}

fn emit(text: &str, out: Option<&str>) -> Result<(), ricci_cli::CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| ricci_cli::CliError::Io(format!("cannot write '{path}': {e}"))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| {
                    if text.ends_with('\n') {
                        Ok(())
                    } else {
                        stdout.write_all(b"\n")
                    }
                })
                .map_err(|e| ricci_cli::CliError::Io(e.to_string()))
        }
    }
}

fn run(cli: Cli) -> Result<(), ricci_cli::CliError> {
    match cli.command {
        Command::Edge { graph, u, v, out } => {
            let text = run_edge(&graph, u, v)?;
            emit(&text, out.as_deref())
        }
        Command::Scan { graph, out } => {
            let (text, warnings) = run_scan(&graph)?;
            for w in warnings {
                eprintln!("warning: {w}");
            }
            emit(&text, out.as_deref())
        }
        Command::ProductCheck { graph_g, graph_h } => {
            let text = run_product_check(&graph_g, &graph_h)?;
            emit(&text, None)
        }
        Command::Verify { graph, grid } => {
            let text = run_verify(&graph, grid)?;
            emit(&text, None)
        }
        Command::Sample {
            graph,
            u,
            v,
            num,
            out,
        } => {
            let text = run_sample(&graph, u, v, num)?;
            emit(&text, out.as_deref())
        }
        Command::Generate { spec, out } => {
            let text = run_generate(&spec)?;
            emit(&text, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
