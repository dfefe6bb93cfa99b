//! Command-line front end: flag and config-file handling, the analysis
//! pipeline, and report rendering.

pub mod commands;
pub mod config;
pub mod report;

pub use config::{Cli, Command, Format, Settings};
pub use report::{Report, Status};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
}

/// Rendered output and process exit code.
pub struct Output {
    pub text: String,
    pub code: i32,
    pub report: Report,
}

/// Resolves settings, runs the command, renders the report.  Exit code is 0
/// iff the report carries no failure verdict and no error.
pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let settings = Settings::resolve(cli)?;
    if let Some(t) = settings.threads {
        // a pool may already exist when called repeatedly in one process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let report = commands::execute(&cli.command, &settings);
    let text = match settings.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    let code = if report.pass { 0 } else { 1 };
    Ok(Output { text, code, report })
}
