use std::io::{self, Write};

use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{Number, Value};
use spkl_core::{Error, IntPolynomial};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_MISMATCH: u8 = 3;
pub const EXIT_RESOURCE: u8 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug)]
pub enum Failure {
    Core(Error),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    pub fn kind(&self) -> &'static str {
        match self {
            Failure::Input(_) => "input",
            Failure::Core(e) => match e {
                Error::Domain(_) => "domain",
                Error::Invalid(_) => "invalid",
                Error::SymmetricDifference { .. } => "symmetric-difference",
                Error::BoundExceeded { .. } => "bound-exceeded",
                Error::TooLarge(_) => "too-large",
                Error::SearchExhausted { .. } => "search-exhausted",
                Error::Invariant(_) => "invariant",
            },
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => EXIT_VALIDATION,
            Failure::Core(e) => match e {
                Error::TooLarge(_) | Error::SearchExhausted { .. } => EXIT_RESOURCE,
                Error::Invariant(_) => EXIT_MISMATCH,
                _ => EXIT_VALIDATION,
            },
        }
    }

    pub fn message(&self) -> String {
        match self {
            Failure::Input(m) => m.clone(),
            Failure::Core(e) => e.to_string(),
        }
    }
}

/// Rows for `--format csv`.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push<I: IntoIterator<Item = S>, S: ToString>(&mut self, row: I) {
        self.rows.push(row.into_iter().map(|s| s.to_string()).collect());
    }
}

/// What a command produced, before formatting.
pub struct Outcome {
    pub inputs: Value,
    pub results: Value,
    pub table: Table,
    pub text: String,
    /// Set when an internal cross-check disagreed.
    pub mismatch: Option<String>,
}

#[derive(Serialize)]
struct ErrorReport {
    kind: String,
    message: String,
}

#[derive(Serialize)]
pub struct RunReport {
    command: String,
    argv: Vec<String>,
    inputs: Value,
    results: Value,
    elapsed_ms: u64,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<ErrorReport>,
}

pub fn emit(
    format: Format,
    command: &str,
    argv: Vec<String>,
    elapsed_ms: u64,
    result: Result<Outcome, Failure>,
) -> io::Result<u8> {
    let mut out = io::stdout().lock();
    match result {
        Ok(outcome) => {
            let code = if outcome.mismatch.is_some() { EXIT_MISMATCH } else { EXIT_OK };
            match format {
                Format::Json => {
                    let report = RunReport {
                        command: command.to_string(),
                        argv,
                        inputs: outcome.inputs,
                        results: outcome.results,
                        elapsed_ms,
                        status: if code == EXIT_OK { "ok" } else { "mismatch" },
                        error: outcome
                            .mismatch
                            .as_ref()
                            .map(|m| ErrorReport { kind: "mismatch".into(), message: m.clone() }),
                    };
                    serde_json::to_writer_pretty(&mut out, &report)?;
                    writeln!(out)?;
                }
                Format::Csv => {
                    let mut writer = csv::Writer::from_writer(&mut out);
                    writer.write_record(&outcome.table.header)?;
                    for row in &outcome.table.rows {
                        writer.write_record(row)?;
                    }
                    writer.flush()?;
                }
                Format::Text => {
                    write!(out, "{}", outcome.text)?;
                    if !outcome.text.ends_with('\n') {
                        writeln!(out)?;
                    }
                }
            }
            if let Some(m) = &outcome.mismatch {
                eprintln!("mismatch: {m}");
            }
            Ok(code)
        }
        Err(failure) => {
            if format == Format::Json {
                let report = RunReport {
                    command: command.to_string(),
                    argv,
                    inputs: Value::Null,
                    results: Value::Null,
                    elapsed_ms,
                    status: "error",
                    error: Some(ErrorReport { kind: failure.kind().into(), message: failure.message() }),
                };
                serde_json::to_writer_pretty(&mut out, &report)?;
                writeln!(out)?;
            }
            eprintln!("error ({}): {}", failure.kind(), failure.message());
            Ok(failure.exit_code())
        }
    }
}

/// A big integer as an exact JSON number.
pub fn num(x: &BigInt) -> Value {
    Value::Number(x.to_string().parse::<Number>().expect("integers are valid JSON numbers"))
}

/// Low-to-high coefficient list.
pub fn poly(p: &IntPolynomial) -> Value {
    Value::Array(p.coeffs().iter().map(num).collect())
}

pub fn poly_text(p: &IntPolynomial) -> String {
    let coeffs: Vec<String> = p.coeffs().iter().map(|c| c.to_string()).collect();
    format!("{p}  [{}]", coeffs.join(", "))
}
