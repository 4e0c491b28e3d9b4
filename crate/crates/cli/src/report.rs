//! Reports: what was run, what came out, and where the inputs came from.

use std::collections::BTreeMap;
use std::io::Write;

use epsilon_stability::bounds::EpsilonBound;
use serde::Serialize;

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    /// Aligned `key = value` lines.
    Table,
    Csv,
    /// The full report as TOML, including the SI echo of the scenario.
    Structured,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// SHA-256 of every file read, by name.
    pub inputs: BTreeMap<String, String>,
}

impl Provenance {
    pub fn new(seed: Option<u64>) -> Self {
        let mut inputs = BTreeMap::new();
        inputs.insert(
            "constants".to_string(),
            crate::scenario::sha256_hex(crate::datasets::CONSTANTS.as_bytes()),
        );
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            inputs,
        }
    }
}

/// A bound with everything needed to recompute it.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct BoundEntry {
    pub kind: String,
    /// Absent when the series diverges.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    pub diverged: bool,
    pub intermediates: BTreeMap<String, f64>,
}

impl From<&EpsilonBound<f64>> for BoundEntry {
    fn from(b: &EpsilonBound<f64>) -> Self {
        Self {
            kind: b.kind.name().to_string(),
            epsilon: b.finite(),
            diverged: b.is_diverged(),
            intermediates: b.intermediates.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }
}

/// Rows of a sweep or of any other table-shaped result.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    /// The scenario in SI units; loading it again reproduces the results.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<toml::Table>,
    pub settings: toml::Table,
    pub results: toml::Table,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub provenance: Provenance,
    #[serde(skip)]
    pub table: Option<Table>,
    /// Why the run should exit with the flagged code, if it should.
    #[serde(skip)]
    pub flagged: Option<String>,
}

impl Report {
    pub fn new(command: &str, provenance: Provenance) -> Self {
        Self {
            command: command.to_string(),
            input: None,
            settings: toml::Table::new(),
            results: toml::Table::new(),
            notes: Vec::new(),
            provenance,
            table: None,
            flagged: None,
        }
    }

    pub fn set<T: Serialize>(&mut self, key: &str, value: &T) {
        let v = toml::Value::try_from(value).expect("report values serialise");
        self.results.insert(key.to_string(), v);
    }

    pub fn setting<T: Serialize>(&mut self, key: &str, value: T) {
        let v = toml::Value::try_from(value).expect("settings serialise");
        self.settings.insert(key.to_string(), v);
    }

    pub fn flag(&mut self, why: impl Into<String>) {
        let why = why.into();
        log::warn!("{why}");
        if self.flagged.is_none() {
            self.flagged = Some(why);
        }
    }

    pub fn structured(&self) -> String {
        toml::to_string(self).expect("reports serialise")
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> CliResult<()> {
        let io = |source| CliError::Io {
            context: "writing the report".into(),
            source,
        };
        match format {
            Format::Structured => out.write_all(self.structured().as_bytes()).map_err(io),
            Format::Csv => self.write_csv(out),
            Format::Table => {
                let mut lines = Vec::new();
                flatten("", &toml::Value::Table(self.settings.clone()), &mut lines);
                flatten("", &toml::Value::Table(self.results.clone()), &mut lines);
                let width = lines.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (k, v) in &lines {
                    writeln!(out, "{k:width$}  {v}").map_err(io)?;
                }
                if let Some(t) = &self.table {
                    writeln!(out).map_err(io)?;
                    write_aligned(t, out).map_err(io)?;
                }
                for n in &self.notes {
                    writeln!(out, "note: {n}").map_err(io)?;
                }
                writeln!(
                    out,
                    "{} {}{}",
                    self.provenance.tool,
                    self.provenance.version,
                    self.provenance.seed.map(|s| format!(", seed {s}")).unwrap_or_default()
                )
                .map_err(io)
            }
        }
    }

    fn write_csv(&self, out: &mut dyn Write) -> CliResult<()> {
        let err = |e: csv::Error| CliError::Io {
            context: "writing CSV".into(),
            source: e.into(),
        };
        let mut w = csv::Writer::from_writer(out);
        match &self.table {
            Some(t) => {
                w.write_record(&t.header).map_err(err)?;
                for r in &t.rows {
                    w.write_record(r).map_err(err)?;
                }
            }
            None => {
                let mut lines = Vec::new();
                flatten("", &toml::Value::Table(self.results.clone()), &mut lines);
                w.write_record(["key", "value"]).map_err(err)?;
                for (k, v) in lines {
                    w.write_record([k, v]).map_err(err)?;
                }
            }
        }
        w.flush().map_err(|source| CliError::Io {
            context: "writing CSV".into(),
            source,
        })
    }
}

fn flatten(prefix: &str, v: &toml::Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        toml::Value::Table(t) => {
            for (k, v) in t {
                flatten(&join(k), v, out);
            }
        }
        toml::Value::Array(a) if a.iter().any(|x| x.is_table()) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        toml::Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn write_aligned(t: &Table, out: &mut dyn Write) -> std::io::Result<()> {
    let mut widths: Vec<usize> = t.header.iter().map(String::len).collect();
    for r in &t.rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let line = |cells: &[String], out: &mut dyn Write| -> std::io::Result<()> {
        let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
        writeln!(out, "{}", parts.join("  "))
    };
    line(&t.header, out)?;
    for r in &t.rows {
        line(r, out)?;
    }
    Ok(())
}
