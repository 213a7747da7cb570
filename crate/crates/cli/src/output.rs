//! Versioned JSON and CSV records.

use serde::Serialize;
use serde_json::Value;

use crate::args::{Format, Params};
use crate::error::CliResult;

/// Bumped whenever a field or CSV column changes meaning.
pub const SCHEMA_VERSION: u32 = 1;

/// Leading columns of every CSV file.
pub const CSV_PREFIX: [&str; 4] = ["version", "schema", "seed", "config"];

/// Resolved run settings. `threads` and `out` are left out of the echo so
/// output does not depend on where or how widely it was computed.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub seed: u64,
    pub format: Format,
    #[serde(flatten)]
    pub params: Params,
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<I: IntoIterator<Item = S>, S: Into<String>>(headers: I) -> Self {
        Table { headers: headers.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }
}

/// What a command produces: a JSON result and its CSV rows.
#[derive(Debug, Clone)]
pub struct Output {
    pub result: Value,
    pub table: Table,
}

pub fn num(x: f64) -> String {
    format!("{x}")
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn opt_bool(x: Option<bool>) -> String {
    x.map(|b| b.to_string()).unwrap_or_default()
}

pub fn joined(xs: &[f64]) -> String {
    xs.iter().map(|x| num(*x)).collect::<Vec<_>>().join(";")
}

/// The provenance tag of an estimate, as in the JSON records.
pub fn method_tag(m: &rectdisc_core::Method) -> String {
    use rectdisc_core::Method;
    match m {
        Method::Exact => "exact".into(),
        Method::ClosedForm => "closed-form".into(),
        Method::Quadrature => "quadrature".into(),
        Method::MonteCarlo { samples, seed } => format!("monte-carlo({samples};{seed})"),
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    artifact: &'static str,
    version: &'static str,
    schema: u32,
    command: &'static str,
    seed: u64,
    config: &'a Value,
    result: &'a Value,
}

/// The config echo without unset keys.
fn echo(config: &RunConfig) -> CliResult<Value> {
    let mut v = serde_json::to_value(config)?;
    if let Value::Object(map) = &mut v {
        map.retain(|_, x| !x.is_null());
    }
    Ok(v)
}

pub fn render(config: &RunConfig, out: &Output) -> CliResult<String> {
    let config_echo = echo(config)?;
    match config.format {
        Format::Json => {
            let env = Envelope {
                artifact: "rectdisc",
                version: rectdisc_core::VERSION,
                schema: SCHEMA_VERSION,
                command: config.command,
                seed: config.seed,
                config: &config_echo,
                result: &out.result,
            };
            let mut s = serde_json::to_string_pretty(&env)?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let echo = config_echo.to_string();
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(CSV_PREFIX.iter().map(|s| s.to_string()).chain(out.table.headers.iter().cloned()))?;
            let prefix = [rectdisc_core::VERSION.to_string(), SCHEMA_VERSION.to_string(), config.seed.to_string(), echo];
            for row in &out.table.rows {
                w.write_record(prefix.iter().chain(row))?;
            }
            let bytes = w.into_inner().map_err(|e| crate::error::CliError::Runtime(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
    }
}
