//! Error classification, exit codes, and deterministic CSV/JSON emission.

use std::fs;
use std::io::Write;
use std::path::Path;

use ied::IedError;

/// Everything a subcommand can fail with, partitioned for exit codes:
/// validation problems (bad request) exit 2, data-dependent and I/O
/// failures exit 3.
#[derive(Debug)]
pub enum CliError {
    Ied(IedError),
    Io(std::io::Error),
    Config(String),
}

pub type CliResult<T> = Result<T, CliError>;

impl From<IedError> for CliError {
    fn from(e: IedError) -> Self {
        CliError::Ied(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Ied(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
            CliError::Config(m) => write!(f, "invalid argument: {m}"),
        }
    }
}

impl CliError {
    pub fn classify(&self) -> (&'static str, i32) {
        match self {
            CliError::Ied(e) => {
                let kind = match e {
                    IedError::Argument(_) => "argument",
                    IedError::Domain(_) => "domain",
                    IedError::Incompatible(_) => "incompatible",
                    IedError::Unsupported(_) => "unsupported",
                    IedError::Divergence(_) => "divergence",
                    IedError::Estimation(_) => "estimation",
                    IedError::Expansion(_) => "expansion",
                    IedError::Indeterminate(_) => "indeterminate",
                    IedError::Sampler(_) => "sampler",
                    IedError::Experiment(_) => "experiment",
                };
                (kind, if e.is_validation() { 2 } else { 3 })
            }
            CliError::Io(_) => ("io", 3),
            CliError::Config(_) => ("argument", 2),
        }
    }
}

/// Single-line JSON error on standard error.
pub fn print_error(kind: &str, message: &str) {
    eprintln!(
        "{}",
        serde_json::json!({ "error": kind, "message": message })
    );
}

/// Locale-independent decimal formatting with 17 significant digits.
pub fn fmt_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// Write to a file (creating parent directories) or to stdout.
pub fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => {
            if let Some(dir) = path.parent() {
                if !dir.as_os_str().is_empty() {
                    fs::create_dir_all(dir)?;
                }
            }
            fs::write(path, text)?;
        }
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

pub fn csv(header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut s = String::with_capacity(1024);
    s.push_str(header);
    s.push('\n');
    for row in rows {
        s.push_str(&row);
        s.push('\n');
    }
    s
}

pub fn json_pretty<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report is serializable");
    s.push('\n');
    s
}

/// Read samples back from a CSV produced by `sample` (or any file whose last
/// column is the value); a non-numeric first line is treated as a header.
pub fn read_samples(path: &Path) -> CliResult<Vec<f64>> {
    let text = fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let field = line.rsplit(',').next().unwrap().trim();
        match field.parse::<f64>() {
            Ok(v) => out.push(v),
            Err(_) if lineno == 0 => {} // header
            Err(_) => {
                return Err(CliError::Config(format!(
                    "{}:{}: cannot parse '{field}' as a number",
                    path.display(),
                    lineno + 1
                )))
            }
        }
    }
    if out.is_empty() {
        return Err(CliError::Config(format!(
            "{}: no numeric rows",
            path.display()
        )));
    }
    Ok(out)
}
