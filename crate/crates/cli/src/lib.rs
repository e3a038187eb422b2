//! Command implementations for the `s2g` binary. Each command writes its
//! result to `out`, diagnostics to `err`, and returns the process exit code.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use s2g_core::emit::{emit_bytecode, emit_groovy};
use s2g_core::engine::{execute_with, ExecOptions};
use s2g_core::model::{load_ntriples, load_pg, rdf_to_pg, PrefixRegistry, RdfGraph};
use s2g_core::refeval::ref_evaluate;
use s2g_core::sparql::{parse_with_prefixes, SparqlAst};
use s2g_core::translate::translate;
use s2g_core::verify::{id_sort_key, parse_manifest, verify_corpus, GraphPair, Report};

pub const PREFIX_CONFIG_ENV: &str = "S2G_PREFIX_CONFIG";

pub mod exit {
    pub const OK: u8 = 0;
    pub const IO: u8 = 1;
    pub const UNSUPPORTED: u8 = 2;
    pub const RUNTIME: u8 = 3;
    pub const NOT_EQUIVALENT: u8 = 4;
}

#[derive(Debug, Parser)]
#[command(name = "s2g", version, about = "Compile SPARQL SELECT queries to Gremlin match traversals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the traversal a query compiles to.
    Translate {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Groovy)]
        format: Format,
    },
    /// Run a query on an N-Triples graph (reference evaluator) or a `.pgl`
    /// property graph (translated traversal) and print TSV results.
    Exec { query: PathBuf, graph: PathBuf },
    /// Run every `.rq` file of a corpus on both sides and compare.
    Verify {
        corpus: PathBuf,
        rdf: PathBuf,
        #[arg(long, value_enum, default_value_t = ReportFormat::Tsv)]
        report: ReportFormat,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Groovy,
    Bytecode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Tsv,
    Pretty,
}

/// A failure carrying the exit code it maps to.
#[derive(Debug, Error)]
#[error("{message}")]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn io(message: impl Into<String>) -> Self {
        Self {
            code: exit::IO,
            message: message.into(),
        }
    }

    fn unsupported(message: impl Into<String>) -> Self {
        Self {
            code: exit::UNSUPPORTED,
            message: message.into(),
        }
    }

    fn runtime(message: impl Into<String>) -> Self {
        Self {
            code: exit::RUNTIME,
            message: message.into(),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

/// The registry named by `S2G_PREFIX_CONFIG`, or the default one.
pub fn registry_from_env() -> Result<PrefixRegistry, Failure> {
    match std::env::var_os(PREFIX_CONFIG_ENV) {
        None => Ok(PrefixRegistry::default()),
        Some(path) => {
            let path = PathBuf::from(path);
            PrefixRegistry::from_config(&read(&path)?)
                .map_err(|e| Failure::io(format!("{}: {e}", path.display())))
        }
    }
}

fn parse_query(path: &Path, reg: &PrefixRegistry) -> Result<SparqlAst, Failure> {
    let text = read(path)?;
    parse_with_prefixes(&text, &reg.implicit_prefixes())
        .map_err(|e| Failure::unsupported(format!("{}: {e}", path.display())))
}

fn load_rdf(path: &Path) -> Result<RdfGraph, Failure> {
    load_ntriples(&read(path)?).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

pub fn cmd_translate(file: &Path, format: Format, reg: &PrefixRegistry, out: &mut dyn Write) -> Result<(), Failure> {
    let ast = parse_query(file, reg)?;
    let ir = translate(&ast, reg).map_err(|e| Failure::unsupported(format!("{}: {e}", file.display())))?;
    let text = match format {
        Format::Groovy => emit_groovy(&ir),
        Format::Bytecode => emit_bytecode(&ir),
    };
    writeln!(out, "{text}").map_err(|e| Failure::io(e.to_string()))
}

pub fn cmd_exec(query: &Path, graph: &Path, reg: &PrefixRegistry, out: &mut dyn Write) -> Result<(), Failure> {
    let ast = parse_query(query, reg)?;
    let results = match graph.extension().and_then(|e| e.to_str()) {
        Some("nt") => {
            let g = load_rdf(graph)?;
            ref_evaluate(&ast, &g).map_err(|e| Failure::runtime(e.to_string()))?
        }
        Some("pgl") => {
            let ir = translate(&ast, reg).map_err(|e| Failure::unsupported(format!("{}: {e}", query.display())))?;
            let g = load_pg(&read(graph)?).map_err(|e| Failure::io(format!("{}: {e}", graph.display())))?;
            let opts = ExecOptions {
                id_property: reg.id_property().to_string(),
                bulking: true,
            };
            execute_with(&ir, &g, &opts).map_err(|e| Failure::runtime(e.to_string()))?
        }
        _ => {
            return Err(Failure::io(format!(
                "{}: graph files must end in .nt or .pgl",
                graph.display()
            )))
        }
    };
    out.write_all(results.to_tsv().as_bytes())
        .map_err(|e| Failure::io(e.to_string()))
}

/// Queries of a corpus directory as (id, text), sorted by id.
pub fn load_corpus(dir: &Path) -> Result<Vec<(String, String)>, Failure> {
    let entries = std::fs::read_dir(dir).map_err(|e| Failure::io(format!("{}: {e}", dir.display())))?;
    let mut queries = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Failure::io(e.to_string()))?.path();
        if path.extension().is_some_and(|x| x == "rq") {
            let id = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            queries.push((id, read(&path)?));
        }
    }
    queries.sort_by_key(|(id, _)| id_sort_key(id));
    Ok(queries)
}

pub fn cmd_verify(
    corpus: &Path,
    rdf: &Path,
    report: ReportFormat,
    reg: &PrefixRegistry,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Failure> {
    let queries = load_corpus(corpus)?;
    let manifest_path = corpus.join("manifest.tsv");
    let manifest = if manifest_path.exists() {
        parse_manifest(&read(&manifest_path)?).map_err(|e| Failure::io(format!("{}: {e}", manifest_path.display())))?
    } else {
        Default::default()
    };
    let g = load_rdf(rdf)?;
    let pg = rdf_to_pg(&g, reg).map_err(|e| Failure::io(format!("{}: {e}", rdf.display())))?;
    if queries.is_empty() {
        let _ = writeln!(err, "warning: no .rq files in {}", corpus.display());
    }
    let started = Instant::now();
    let runs = verify_corpus(&queries, &GraphPair { rdf: &g, pg: &pg }, reg, &manifest)
        .map_err(|e| Failure::unsupported(e.to_string()))?;
    let elapsed = started.elapsed();
    write!(
        out,
        "{}",
        Report {
            runs: &runs,
            pretty: report == ReportFormat::Pretty,
        }
    )
    .map_err(|e| Failure::io(e.to_string()))?;
    if !runs.is_empty() {
        let mean = runs.iter().map(|r| r.translate_micros).sum::<u128>() as f64 / runs.len() as f64 / 1000.0;
        let _ = writeln!(
            err,
            "mean translate time {mean:.3} ms over {} queries; total {:.2} s",
            runs.len(),
            elapsed.as_secs_f64()
        );
    }
    let failed: Vec<&str> = runs.iter().filter(|r| !r.equivalent).map(|r| r.id.as_str()).collect();
    if failed.is_empty() {
        return Ok(());
    }
    for r in runs.iter().filter(|r| !r.equivalent) {
        let _ = writeln!(err, "{}: {}", r.id, r.detail.as_deref().unwrap_or("not equivalent"));
    }
    Err(Failure {
        code: exit::NOT_EQUIVALENT,
        message: format!("not equivalent: {}", failed.join(", ")),
    })
}

/// Runs a parsed command line.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let result = registry_from_env().and_then(|reg| match &cli.command {
        Command::Translate { file, format } => cmd_translate(file, *format, &reg, out),
        Command::Exec { query, graph } => cmd_exec(query, graph, &reg, out),
        Command::Verify { corpus, rdf, report } => cmd_verify(corpus, rdf, *report, &reg, out, err),
    });
    match result {
        Ok(()) => exit::OK,
        Err(f) => {
            let _ = writeln!(err, "error: {f}");
            f.code
        }
    }
}
