//! Machine-readable output records.
//!
//! Every command emits one or more flat records. The default sink is JSON
//! lines on standard output; `--format csv` switches to the per-command
//! CSV shape. Both sinks print floating-point values through the same
//! formatter (13 significant digits, scientific notation), so the two
//! formats always carry identical numbers and repeated runs are
//! byte-identical.

use std::io::Write;

use serde_json::{Map, Value};

pub const FORMAT_VERSION: &str = "altchoice.v1";

/// Floating-point values as printed everywhere: 13 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.12e}")
}

fn float_value(x: f64) -> Value {
    Value::Number(
        fmt_float(x)
            .parse()
            .expect("formatted float is a JSON number"),
    )
}

/// One flat output record: command name, echoed parameters, and named
/// results. Keys serialize in sorted order.
pub struct Record {
    command: &'static str,
    parameters: Map<String, Value>,
    results: Map<String, Value>,
}

impl Record {
    pub fn new(command: &'static str) -> Self {
        Self {
            command,
            parameters: Map::new(),
            results: Map::new(),
        }
    }

    pub fn param_int(mut self, key: &str, value: u64) -> Self {
        self.parameters.insert(key.to_string(), Value::from(value));
        self
    }

    pub fn param_float(mut self, key: &str, value: f64) -> Self {
        self.parameters.insert(key.to_string(), float_value(value));
        self
    }

    pub fn param_str(mut self, key: &str, value: &str) -> Self {
        self.parameters.insert(key.to_string(), Value::from(value));
        self
    }

    pub fn result_int(mut self, key: &str, value: u64) -> Self {
        self.results.insert(key.to_string(), Value::from(value));
        self
    }

    pub fn result_float(mut self, key: &str, value: f64) -> Self {
        self.results.insert(key.to_string(), float_value(value));
        self
    }

    pub fn result_str(mut self, key: &str, value: &str) -> Self {
        self.results.insert(key.to_string(), Value::from(value));
        self
    }

    pub fn result_bool(mut self, key: &str, value: bool) -> Self {
        self.results.insert(key.to_string(), Value::from(value));
        self
    }

    /// Single JSON line.
    pub fn to_json(&self) -> String {
        let mut record = Map::new();
        record.insert("format_version".to_string(), Value::from(FORMAT_VERSION));
        record.insert("command".to_string(), Value::from(self.command));
        record.insert(
            "parameters".to_string(),
            Value::Object(self.parameters.clone()),
        );
        record.insert("results".to_string(), Value::Object(self.results.clone()));
        Value::Object(record).to_string()
    }

    /// CSV row in the given column order, with values rendered exactly as
    /// in the JSON output.
    pub fn csv_row(&self, columns: &[&str]) -> String {
        columns
            .iter()
            .map(|&key| {
                let value = self
                    .results
                    .get(key)
                    .unwrap_or_else(|| panic!("record lacks result column `{key}`"));
                scalar_to_string(value)
            })
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn scalar_to_string(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Write a batch of records that share one CSV shape. In JSON mode each
/// record becomes one line; in CSV mode the fixed header is written once
/// followed by one row per record.
pub fn write_records(
    sink: &mut dyn Write,
    format: Format,
    columns: &[&str],
    records: &[Record],
) -> std::io::Result<()> {
    match format {
        Format::Json => {
            for r in records {
                writeln!(sink, "{}", r.to_json())?;
            }
        }
        Format::Csv => {
            writeln!(sink, "{}", columns.join(","))?;
            for r in records {
                writeln!(sink, "{}", r.csv_row(columns))?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_carry_thirteen_significant_digits() {
        assert_eq!(fmt_float(0.5), "5.000000000000e-1");
        assert_eq!(fmt_float(1.0), "1.000000000000e0");
        assert_eq!(fmt_float(0.367_879_441_171_442_33), "3.678794411714e-1");
    }

    #[test]
    fn json_and_csv_share_number_strings() {
        let r = Record::new("demo")
            .param_int("k", 2)
            .result_float("t", 0.5)
            .result_int("n", 7);
        let json = r.to_json();
        assert!(json.starts_with("{\"command\":\"demo\""));
        assert!(json.contains("\"format_version\":\"altchoice.v1\""));
        assert!(json.contains("\"t\":5.000000000000e-1"));
        assert_eq!(r.csv_row(&["t", "n"]), "5.000000000000e-1,7");
    }
}
