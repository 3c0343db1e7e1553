//! Document format and command surface for `bicatfib`.

pub mod commands;
pub mod document;

use std::path::PathBuf;

use clap::Parser;

pub use commands::{Cli, Outcome};
pub use document::{parse_document, parse_workspace, to_json, DocError, Document, Emitter, Workspace};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Doc(#[from] DocError),
    #[error("{0}")]
    Lib(#[from] bicatfib::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use bicatfib::Error as E;
        match self {
            CliError::Lib(E::SizeLimit { .. }) => 3,
            CliError::Lib(E::Inconsistency(_) | E::Hypothesis(_)) => 1,
            _ => 2,
        }
    }

    fn report(&self) -> serde_json::Value {
        let mut v = serde_json::json!({ "error": self.to_string(), "exit": self.exit_code() });
        match self {
            CliError::Doc(d) => {
                v["line"] = d.line.into();
                v["column"] = d.column.into();
                if let Some(k) = &d.key {
                    v["key"] = k.clone().into();
                }
            }
            CliError::Lib(bicatfib::Error::Hypothesis(h)) => {
                v["holds"] = false.into();
                v["counterexample"] = h.to_string().into();
            }
            _ => {}
        }
        v
    }
}

fn write(path: &PathBuf, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io { path: path.clone(), source: e })
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// Runs the command line and returns the exit code: 0 when the property
/// holds, 1 when it fails, 2 on invalid input, 3 on a size guardrail.
///
/// A produced document goes to `--emit`, or to standard output with the
/// summary on standard error. Without a document the summary goes to
/// standard output and to `--emit`.
pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let emit = cli.opts.emit.clone();
    let result = commands::run(cli).and_then(|out| {
        let summary = pretty(&out.summary);
        match (&out.document, &emit) {
            (Some(doc), Some(path)) => {
                write(path, doc)?;
                print!("{summary}");
            }
            (Some(doc), None) => {
                print!("{doc}");
                eprint!("{summary}");
            }
            (None, Some(path)) => {
                write(path, &summary)?;
                print!("{summary}");
            }
            (None, None) => print!("{summary}"),
        }
        Ok(if out.holds { 0 } else { 1 })
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let report = pretty(&e.report());
            if let (1, Some(path)) = (e.exit_code(), &emit) {
                let _ = write(path, &report);
            }
            eprint!("{report}");
            e.exit_code()
        }
    }
}
