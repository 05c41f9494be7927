//! `ck`: process videos into bundles, serve them, and print reports.
//!
//! Exit codes: 0 success, 1 usage, 2 data error, 3 backend error.

use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ck_core::analysis::{coverage_study, StudyFile};
use ck_core::bundle::{load_bundle, save_bundle, to_canonical_json};
use ck_core::classify::metrics::distribution_report;
use ck_core::config::{ConfigError, PipelineConfig};
use ck_core::ingest::load_corpus;
use ck_core::pipeline::run_pipeline;
use ck_core::presentation::render_svg;
use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "ck", version, about = "Time-synced comment knowledge pipeline")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the pipeline on one video and write its bundle.
    Process {
        /// Pipeline configuration (TOML); defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        danmaku: PathBuf,
        /// Transcript as `.srt` or JSON lines (`.json`, `.jsonl`).
        #[arg(long)]
        transcript: PathBuf,
        #[arg(long)]
        meta: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Serve every bundle in a directory over HTTP.
    Serve {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: SocketAddr,
        /// Directory of static viewer assets.
        #[arg(long = "static")]
        static_dir: Option<PathBuf>,
    },
    /// Print a report.
    Report {
        #[command(subcommand)]
        report: Report,
    },
    /// Render a static visualization.
    Render {
        #[command(subcommand)]
        render: Render,
    },
}

#[derive(Debug, Subcommand)]
enum Report {
    /// Category distribution of a bundle's comments.
    Distribution {
        bundle: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Entity coverage of danmaku vs. comments with a signed-rank test.
    Coverage {
        #[arg(long)]
        study: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Subcommand)]
enum Render {
    /// The wordstream of a bundle as SVG.
    Wordstream {
        bundle: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Render the short strip shown during playback.
        #[arg(long)]
        simplified: bool,
    },
}

#[derive(Debug)]
enum Failure {
    Data(String),
    Backend(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Data(_) => 2,
            Failure::Backend(_) => 3,
        }
    }
}

fn data(e: impl std::fmt::Display) -> Failure {
    Failure::Data(e.to_string())
}

fn load_config(path: Option<&Path>) -> Result<PipelineConfig, Failure> {
    match path {
        None => Ok(PipelineConfig::default()),
        Some(p) => PipelineConfig::load(p).map_err(|e| match e {
            ConfigError::Backend(_) => Failure::Data(format!("{}: {e}", p.display())),
            e => data(e),
        }),
    }
}

fn write(path: &Path, body: &str) -> Result<(), Failure> {
    std::fs::write(path, body).map_err(|e| data(format!("{}: {e}", path.display())))
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Process { config, danmaku, transcript, meta, out } => {
            let config = load_config(config.as_deref())?;
            let corpus = load_corpus(&danmaku, &transcript, &meta).map_err(data)?;
            let bundle = run_pipeline(&corpus, &config).map_err(|e| if e.is_backend() { Failure::Backend(e.to_string()) } else { data(e) })?;
            for w in &bundle.provenance.warnings {
                tracing::warn!("{w}");
            }
            save_bundle(&bundle, &out).map_err(data)?;
            eprintln!(
                "{}: {} comments, {} clusters, {} sections -> {}",
                bundle.meta.video_id,
                bundle.comments.len(),
                bundle.clusters.len(),
                bundle.sections.len(),
                out.display()
            );
            Ok(())
        }
        Command::Serve { dir, addr, static_dir } => {
            let rt = tokio::runtime::Runtime::new().map_err(data)?;
            rt.block_on(ck_server::serve(&dir, addr, static_dir.as_deref())).map_err(data)
        }
        Command::Report { report: Report::Distribution { bundle, json } } => {
            let bundle = load_bundle(&bundle).map_err(data)?;
            let labels: Vec<_> = bundle.comments.iter().map(|c| c.label).collect();
            let report = distribution_report(&labels);
            if json {
                println!("{}", to_canonical_json(&report).map_err(data)?);
            } else {
                print!("{}", report.render_table());
            }
            Ok(())
        }
        Command::Report { report: Report::Coverage { study, json } } => {
            let raw = std::fs::read(&study).map_err(|e| data(format!("{}: {e}", study.display())))?;
            let file: StudyFile = serde_json::from_slice(&raw).map_err(|e| data(format!("{}: {e}", study.display())))?;
            let result = coverage_study(&file.corpora).map_err(data)?;
            if json {
                println!("{}", to_canonical_json(&result).map_err(data)?);
            } else {
                print!("{}", result.render_table());
            }
            Ok(())
        }
        Command::Render { render: Render::Wordstream { bundle, out, simplified } } => {
            let bundle = load_bundle(&bundle).map_err(data)?;
            let layout = if simplified { &bundle.wordstream.simplified } else { &bundle.wordstream.layout };
            write(&out, &render_svg(layout))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let default_level = if matches!(cli.command, Command::Serve { .. }) { "info" } else { "warn" };
    tracing_subscriber::fmt()
        .with_writer(std::io::stderr)
        .with_env_filter(tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| default_level.into()))
        .init();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Data(m) | Failure::Backend(m)) = &f;
            eprintln!("error: {m}");
            ExitCode::from(f.code())
        }
    }
}
