use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use rlens_core::api::{canonical_json, parse_filter, serve, ApiError, Engine, ErrorCode};
use rlens_core::config::Config;
use rlens_core::store::{parse_session, read_session_dir, SessionFile, SessionStore, StoreError};

const OK: u8 = 0;
const INVALID: u8 = 1;
const USAGE: u8 = 2;

/// Learning-progress analytics over tutoring session transcripts.
#[derive(Parser)]
#[command(name = "rlens", version)]
struct Cli {
    /// TOML config file (keys under oracles, caf, uptake, server).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate and store every session document in a directory (and its subdirectories).
    Ingest {
        dir: PathBuf,
        /// Store directory [default: server.data_dir]
        #[arg(long)]
        data: Option<PathBuf>,
    },
    /// Write a learner's report document as canonical JSON.
    Report {
        learner_id: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        data: Option<PathBuf>,
        #[command(flatten)]
        filter: FilterArgs,
    },
    /// Run the HTTP API.
    Serve {
        #[arg(long)]
        port: Option<u16>,
        #[arg(long)]
        data: Option<PathBuf>,
    },
    /// Check one session document without storing it.
    Validate { file: PathBuf },
}

#[derive(Args)]
struct FilterArgs {
    /// Comma-separated tutor ids.
    #[arg(long)]
    tutors: Option<String>,
    /// Comma-separated topics.
    #[arg(long)]
    topics: Option<String>,
    /// First date, YYYY-MM-DD.
    #[arg(long)]
    from: Option<String>,
    /// Last date, YYYY-MM-DD.
    #[arg(long)]
    to: Option<String>,
    /// Session index range, e.g. 3-7.
    #[arg(long)]
    sessions: Option<String>,
}

impl FilterArgs {
    fn params(&self) -> BTreeMap<String, String> {
        [
            ("tutors", &self.tutors),
            ("topics", &self.topics),
            ("from", &self.from),
            ("to", &self.to),
            ("sessions", &self.sessions),
        ]
        .into_iter()
        .filter_map(|(k, v)| Some((k.to_string(), v.clone()?)))
        .collect()
    }
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("rlens: {msg}");
    ExitCode::from(code)
}

fn open_engine(cfg: &Config, data: Option<PathBuf>) -> Result<Engine, ExitCode> {
    let root = data.unwrap_or_else(|| cfg.server.data_dir.clone());
    let store = SessionStore::open(&root).map_err(|e| fail(USAGE, e))?;
    Engine::new(store, cfg.clone()).map_err(|e| fail(USAGE, e))
}

fn session_files(dir: &Path) -> Result<Vec<SessionFile>, StoreError> {
    let mut out = read_session_dir(dir)?;
    let mut subdirs: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|source| StoreError::Io { path: dir.to_path_buf(), source })?
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.is_dir())
        .collect();
    subdirs.sort();
    for d in subdirs {
        out.extend(read_session_dir(&d)?);
    }
    Ok(out)
}

fn ingest(cfg: &Config, dir: &Path, data: Option<PathBuf>) -> ExitCode {
    if !dir.is_dir() {
        return fail(USAGE, format!("{} is not a directory", dir.display()));
    }
    let files = match session_files(dir) {
        Ok(f) => f,
        Err(e) => return fail(USAGE, e),
    };
    let (good, bad): (Vec<_>, Vec<_>) = files.into_iter().partition(|(_, r)| r.is_ok());
    if !bad.is_empty() {
        let n = bad.len();
        for (path, r) in bad {
            if let Err(e) = r {
                eprintln!("{}: {}", path.display(), ApiError::from(e));
            }
        }
        return fail(INVALID, format!("{n} invalid session document(s); nothing ingested"));
    }
    let engine = match open_engine(cfg, data) {
        Ok(e) => e,
        Err(code) => return code,
    };
    let (mut stored, mut skipped) = (0, 0);
    for (path, session) in good {
        match engine.store().ingest(session.expect("partitioned")) {
            Ok(_) => stored += 1,
            Err(StoreError::Duplicate { learner_id, session_id }) => {
                skipped += 1;
                eprintln!("{}: already stored as {learner_id}/{session_id}, skipped", path.display());
            }
            Err(e) => return fail(INVALID, format!("{}: {}", path.display(), ApiError::from(e))),
        }
    }
    println!("ingested {stored} sessions ({skipped} duplicates skipped)");
    ExitCode::from(OK)
}

fn report(cfg: &Config, learner_id: &str, out: &Path, data: Option<PathBuf>, filter: &FilterArgs) -> ExitCode {
    let filter = match parse_filter(&filter.params()) {
        Ok(f) => f,
        Err(e) => return fail(USAGE, e),
    };
    let engine = match open_engine(cfg, data) {
        Ok(e) => e,
        Err(code) => return code,
    };
    let doc = match engine.report(learner_id, &filter, chrono::Utc::now()) {
        Ok(d) => d,
        Err(e) if e.code == ErrorCode::Internal => return fail(USAGE, e),
        Err(e) => return fail(INVALID, e),
    };
    if let Err(e) = std::fs::write(out, canonical_json(&doc)) {
        return fail(USAGE, format!("cannot write {}: {e}", out.display()));
    }
    println!("wrote {}", out.display());
    ExitCode::from(OK)
}

fn run_server(cfg: &Config, port: Option<u16>, data: Option<PathBuf>) -> ExitCode {
    let engine = match open_engine(cfg, data) {
        Ok(e) => Arc::new(e),
        Err(code) => return code,
    };
    let port = port.unwrap_or(cfg.server.port);
    let rt = match tokio::runtime::Runtime::new() {
        Ok(rt) => rt,
        Err(e) => return fail(USAGE, e),
    };
    match rt.block_on(serve(engine, &cfg.server.host, port)) {
        Ok(()) => ExitCode::from(OK),
        Err(e) => fail(USAGE, e),
    }
}

fn validate(file: &Path) -> ExitCode {
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => return fail(USAGE, format!("cannot read {}: {e}", file.display())),
    };
    match parse_session(&text) {
        Ok(s) => {
            println!("ok: {}/{}", s.learner_id, s.session_id);
            ExitCode::from(OK)
        }
        Err(e) => fail(INVALID, ApiError::from(e)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cfg = match Config::load(cli.config.as_deref()) {
        Ok(c) => c,
        Err(e) => return fail(USAGE, e),
    };
    match cli.command {
        Command::Ingest { dir, data } => ingest(&cfg, &dir, data),
        Command::Report { learner_id, out, data, filter } => report(&cfg, &learner_id, &out, data, &filter),
        Command::Serve { port, data } => run_server(&cfg, port, data),
        Command::Validate { file } => validate(&file),
    }
}
