//! Run configuration, provenance headers and output sinks.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use serde::Serialize;
use serde_json::{json, Value};

use crate::{Cli, CliResult, Format};

/// Everything that determines the output of a run.  It is serialized into
/// the provenance header of every output.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub tool: &'static str,
    pub version: &'static str,
    /// Subcommand name and its parameters.
    pub command: Value,
    pub jobs: usize,
    pub cache: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Self {
        RunConfig {
            tool: "qknot",
            version: env!("CARGO_PKG_VERSION"),
            command: serde_json::to_value(&cli.command).expect("serializable arguments"),
            jobs: cli.global.jobs.max(1),
            cache: cli.global.cache.clone(),
            format: cli.global.format,
            seed: cli.global.seed,
        }
    }

    /// One-line provenance header (a comment line in text and CSV outputs).
    pub fn header_line(&self) -> String {
        format!(
            "# provenance {}",
            serde_json::to_string(self).expect("serializable run configuration")
        )
    }

    /// Thread pool of the task queue.
    pub fn pool(&self) -> CliResult<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs)
            .build()
            .map_err(|e| crate::CliError::Usage(format!("cannot start {} workers: {e}", self.jobs)))
    }
}

/// A command's result: a text rendering, a structured document, and
/// optionally CSV rows.
pub struct Report {
    pub text: String,
    pub data: Value,
    /// `(header, rows)`
    pub csv: Option<(String, Vec<String>)>,
}

impl Report {
    pub fn new(text: impl Into<String>, data: Value) -> Self {
        Report {
            text: text.into(),
            data,
            csv: None,
        }
    }

    /// Renders the report in the configured format with its provenance.
    pub fn render(&self, cfg: &RunConfig) -> String {
        match cfg.format {
            Format::Json => {
                let doc = json!({ "provenance": cfg, "result": self.data });
                serde_json::to_string_pretty(&doc).expect("serializable report") + "\n"
            }
            Format::Csv => match &self.csv {
                Some((header, rows)) => csv_document(cfg, header, rows),
                None => format!("{}\n{}\n", cfg.header_line(), self.text.trim_end()),
            },
            Format::Text => format!("{}\n{}\n", cfg.header_line(), self.text.trim_end()),
        }
    }
}

/// CSV text with the provenance header as a leading comment line.
pub fn csv_document(cfg: &RunConfig, header: &str, rows: &[String]) -> String {
    let mut out = format!("{}\n{header}\n", cfg.header_line());
    for r in rows {
        out.push_str(r);
        out.push('\n');
    }
    out
}

/// Writes `text` to the file, or to standard output when no file is given.
pub fn emit(path: Option<&PathBuf>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            fs::write(p, text)?;
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
        }
    }
    Ok(())
}
