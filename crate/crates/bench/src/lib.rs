//! Command-line front end for `wiretap-core`.
//!
//! Every subcommand renders one table as CSV (12 significant digits) or JSON.
//! JSON output embeds the run manifest; with `--out FILE` the manifest is
//! also written to `FILE.manifest.toml`, which replays the run when passed
//! back as `--config`.

// `!(x > 0.0)` deliberately rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::ffi::OsString;
use std::path::PathBuf;

use clap::Parser;
use serde::Serialize;

pub mod args;
pub mod commands;
pub mod config;
pub mod output;

use args::{Cli, Command, Common};
use output::{u64_to_toml, RunManifest, Table};

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "WIRETAP_BENCH_THREADS";

#[derive(Debug)]
pub enum AppError {
    /// Bad flags or values; carries the message (or clap's rendered help).
    Usage(String),
    Core(wiretap_core::Error),
    Io(std::io::Error),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        use wiretap_core::Error as E;
        match self {
            AppError::Usage(_) => 2,
            AppError::Io(_) => 1,
            AppError::Core(E::Domain { .. } | E::Config(_)) => 2,
            AppError::Core(E::Infeasible(_)) => 3,
            AppError::Core(_) => 4,
        }
    }
}

impl std::fmt::Display for AppError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AppError::Usage(m) => f.write_str(m.trim_end()),
            AppError::Core(e) => write!(f, "error: {e}"),
            AppError::Io(e) => write!(f, "error: {e}"),
        }
    }
}

impl From<wiretap_core::Error> for AppError {
    fn from(e: wiretap_core::Error) -> Self {
        AppError::Core(e)
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Io(e)
    }
}

/// What a successful run produced.
#[derive(Debug)]
pub enum Outcome {
    /// Help or version text requested by the user.
    Info(String),
    /// Rendered table for stdout.
    Stdout(String),
    /// Files written.
    Written { table: PathBuf, manifest: PathBuf },
}

/// Runs the tool on a full argument list (program name first).
pub fn run<I, T>(argv: I) -> Result<Outcome, AppError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let argv = config::merge_config(argv.into_iter().map(Into::into).collect())?;
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => return Ok(Outcome::Info(e.render().to_string())),
        Err(e) => return Err(AppError::Usage(e.render().to_string())),
    };
    let pool = thread_pool()?;
    pool.install(|| execute(&cli.command))
}

fn thread_pool() -> Result<rayon::ThreadPool, AppError> {
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => n,
            _ => {
                return Err(AppError::Usage(format!(
                    "{THREADS_ENV} must be a positive integer, got `{v}`"
                )))
            }
        },
        Err(_) => available,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| AppError::Usage(format!("cannot start {threads} worker threads: {e}")))
}

fn execute(command: &Command) -> Result<Outcome, AppError> {
    let (table, common, params, seed) = match command {
        Command::Capacity(a) => (commands::capacity(a)?, &a.common, parameters(a)?, None),
        Command::Regime(a) => (commands::regime(a)?, &a.common, parameters(a)?, None),
        Command::Fig2(a) => (commands::fig2(a)?, &a.common, parameters(a)?, None),
        Command::Blocklength(a) => (commands::blocklength(a)?, &a.common, parameters(a)?, None),
        Command::Equivocation(a) => (commands::equivocation(a)?, &a.common, parameters(a)?, None),
        Command::Simulate(a) => (
            commands::simulate(a)?,
            &a.common,
            parameters(a)?,
            Some(a.seed),
        ),
        Command::Fading(a) => (
            commands::fading(a)?,
            &a.common,
            parameters(a)?,
            Some(a.seed),
        ),
    };
    let manifest = RunManifest {
        command: command.name().to_owned(),
        version: env!("CARGO_PKG_VERSION").to_owned(),
        format: common.format,
        seed,
        parameters: params,
    };
    emit(&table, &manifest, common)
}

fn emit(table: &Table, manifest: &RunManifest, common: &Common) -> Result<Outcome, AppError> {
    let body = match common.format {
        output::Format::Csv => table.to_csv(),
        output::Format::Json => table.to_json(manifest),
    };
    let Some(path) = &common.out else {
        return Ok(Outcome::Stdout(body));
    };
    let mut manifest_path = path.clone().into_os_string();
    manifest_path.push(".manifest.toml");
    let manifest_path = PathBuf::from(manifest_path);
    std::fs::write(path, body)?;
    std::fs::write(&manifest_path, manifest.to_toml())?;
    Ok(Outcome::Written {
        table: path.clone(),
        manifest: manifest_path,
    })
}

/// The resolved flag values of a subcommand, keyed by flag name.
fn parameters<T: Serialize>(args: &T) -> Result<toml::Table, AppError> {
    let value = serde_json::to_value(args)
        .map_err(|e| AppError::Usage(format!("cannot record parameters: {e}")))?;
    match json_to_toml(value) {
        Some(toml::Value::Table(t)) => Ok(t),
        _ => Ok(toml::Table::new()),
    }
}

fn json_to_toml(v: serde_json::Value) -> Option<toml::Value> {
    use serde_json::Value as J;
    Some(match v {
        J::Null => return None,
        J::Bool(b) => toml::Value::Boolean(b),
        J::Number(n) => match (n.as_i64(), n.as_u64(), n.as_f64()) {
            (Some(i), _, _) => toml::Value::Integer(i),
            (None, Some(u), _) => u64_to_toml(u),
            (_, _, Some(f)) => toml::Value::Float(f),
            _ => return None,
        },
        J::String(s) => toml::Value::String(s),
        J::Array(a) => toml::Value::Array(a.into_iter().filter_map(json_to_toml).collect()),
        J::Object(o) => toml::Value::Table(
            o.into_iter()
                .filter_map(|(k, v)| json_to_toml(v).map(|v| (k, v)))
                .collect(),
        ),
    })
}
