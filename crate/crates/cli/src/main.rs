//! `tgql`: validate graphs, run and transpile TEG-QL, generate workloads,
//! serve the HTTP API.
//!
//! Exit codes: 0 ok, 1 constraint violations, 2 parse or load error,
//! 3 semantic error, 4 unsupported translation.

mod render;

use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use tgraph_core::cypher::{transpile, TranspileError};
use tgraph_core::engine::{evaluate, Catalog};
use tgraph_core::io::{generate_workload, load_file, save, LoadError, LoadOptions, WorkloadConfig};
use tgraph_core::model::{coalesce_values, validate, TemporalGraph};
use tgraph_core::query::parse;
use tgraph_core::temporal::{Instant, Interval};

#[derive(Parser)]
#[command(name = "tgql", version, about = "Temporal graph database toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Check a graph document against the integrity constraints.
    Validate { file: PathBuf },
    /// Evaluate a query over a graph document.
    Query {
        file: PathBuf,
        #[arg(short, long)]
        query: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Instant that `Now` resolves to; defaults to one past the largest
        /// fixed instant in the graph.
        #[arg(long, allow_negative_numbers = true)]
        now: Option<Instant>,
        /// Merge duplicate value nodes before validating.
        #[arg(long)]
        coalesce: bool,
    },
    /// Print the Cypher translation of a query.
    Transpile {
        #[arg(short, long)]
        query: String,
        /// Graph whose attribute names expand `Label(*)` projections.
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// Write a synthetic persons/buildings workload.
    Generate {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        persons: usize,
        #[arg(long, default_value_t = 100)]
        buildings: usize,
        #[arg(long, default_value_t = 2500)]
        friendships: usize,
        #[arg(long, default_value_t = 500)]
        lived_in: usize,
        /// Time span, e.g. `[1980-Now]` or `[1980-2016]`.
        #[arg(long, default_value = "[1980-Now]")]
        horizon: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the HTTP service, optionally preloading a graph as id 1.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

fn load_error(path: &Path, e: LoadError) -> Failure {
    match e {
        LoadError::ValidationFailed(vs) => {
            let mut msg = format!("{}: {} constraint violation(s)", path.display(), vs.len());
            for v in vs {
                msg.push_str(&format!("\n{v}"));
            }
            Failure::new(1, msg)
        }
        other => Failure::new(2, format!("{}: {other}", path.display())),
    }
}

fn read_graph(path: &Path, coalesce: bool) -> Result<TemporalGraph, Failure> {
    if !coalesce {
        return load_file(path, LoadOptions::default())
            .map(|l| l.graph)
            .map_err(|e| load_error(path, e));
    }
    let loaded = load_file(path, LoadOptions { permissive: true }).map_err(|e| load_error(path, e))?;
    let g = coalesce_values(&loaded.graph);
    let vs = validate(&g);
    if vs.is_empty() {
        Ok(g)
    } else {
        Err(load_error(path, LoadError::ValidationFailed(vs)))
    }
}

fn write_out(path: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| Failure::new(2, format!("{}: {e}", p.display()))),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(bytes)
                .map_err(|e| Failure::new(2, e.to_string()))
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Validate { file } => {
            let loaded = load_file(&file, LoadOptions { permissive: true }).map_err(|e| load_error(&file, e))?;
            for v in &loaded.warnings {
                println!("{v}");
            }
            if loaded.warnings.is_empty() {
                Ok(())
            } else {
                Err(Failure::new(1, format!("{} constraint violation(s)", loaded.warnings.len())))
            }
        }
        Command::Query {
            file,
            query,
            format,
            now,
            coalesce,
        } => {
            let g = read_graph(&file, coalesce)?;
            let q = parse(&query).map_err(|e| Failure::new(2, e.to_string()))?;
            let out = evaluate(&g, &q, now.unwrap_or_else(|| g.default_now()))
                .map_err(|e| Failure::new(3, format!("semantic error: {e}")))?;
            let bytes = match format {
                Format::Json => save(&out.graph),
                Format::Dot => render::dot(&out.graph).into_bytes(),
                Format::Table => render::table(&out).into_bytes(),
            };
            write_out(None, &bytes)
        }
        Command::Transpile { query, catalog } => {
            let q = parse(&query).map_err(|e| Failure::new(2, e.to_string()))?;
            let catalog = match catalog {
                Some(path) => Some(Catalog::from_graph(&read_graph(&path, false)?)),
                None => None,
            };
            let out = transpile(&q, catalog.as_ref()).map_err(|e| match e {
                TranspileError::Unsupported => Failure::new(4, e.to_string()),
                TranspileError::Semantic(_) => Failure::new(3, format!("semantic error: {e}")),
            })?;
            print!("{}", out.cypher);
            if let Some(r) = out.residual {
                println!("{}", r.to_json());
            }
            Ok(())
        }
        Command::Generate {
            seed,
            persons,
            buildings,
            friendships,
            lived_in,
            horizon,
            output,
        } => {
            let horizon: Interval = horizon
                .parse()
                .map_err(|e| Failure::new(2, format!("--horizon: {e}")))?;
            let cfg = WorkloadConfig {
                seed,
                persons,
                buildings,
                friendships,
                lived_in,
                horizon,
            };
            let g = generate_workload(&cfg).map_err(|e| Failure::new(2, e.to_string()))?;
            write_out(output.as_deref(), &save(&g))
        }
        Command::Serve { port, host, file } => {
            let addr: SocketAddr = format!("{host}:{port}")
                .parse()
                .map_err(|e| Failure::new(2, format!("bad address {host}:{port}: {e}")))?;
            let state = tgraph_service::AppState::new();
            if let Some(path) = file {
                state.insert(read_graph(&path, false)?);
            }
            let rt = tokio::runtime::Runtime::new().map_err(|e| Failure::new(2, e.to_string()))?;
            eprintln!("listening on http://{addr}");
            rt.block_on(tgraph_service::serve(addr, state))
                .map_err(|e| Failure::new(2, format!("cannot serve on {addr}: {e}")))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("tgql: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
