//! Run configuration and report rendering (JSON, CSV, Markdown).

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::momentum::Momentum;
use crate::tolerance::Tolerances;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Markdown,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            o => Err(Error::Parse(format!("unknown output format '{o}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    pub tolerances: Tolerances,
    /// Spatial momentum; the energy is fixed by the mass shell.
    pub momentum: [f64; 3],
    pub mass: f64,
    pub trials: usize,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { seed: 42, tolerances: Tolerances::default(), momentum: [0.0; 3], mass: 1.0, trials: 1000, format: OutputFormat::Json }
    }
}

/// Values that may come from a config file or from flags; `None` leaves the
/// lower-precedence value in place.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigOverrides {
    pub seed: Option<u64>,
    pub tau_zero: Option<f64>,
    pub tau_fpk: Option<f64>,
    pub tau_class: Option<f64>,
    pub tau_fit: Option<f64>,
    pub momentum: Option<Vec<f64>>,
    pub mass: Option<f64>,
    pub trials: Option<usize>,
    pub format: Option<OutputFormat>,
}

fn parse_value<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim().parse::<T>().map_err(|_| Error::Parse(format!("bad value for '{key}': '{v}'")))
}

/// Comma-separated reals.
pub fn parse_reals(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| Error::Parse(format!("'{x}' is not a number"))))
        .collect()
}

impl ConfigOverrides {
    /// Flat `key = value` text; `#` starts a comment.
    pub fn parse_file_text(text: &str) -> Result<Self> {
        let mut o = ConfigOverrides::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse(format!("line {}: expected key = value", n + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            match k {
                "seed" => o.seed = Some(parse_value(k, v)?),
                "tau_zero" => o.tau_zero = Some(parse_value(k, v)?),
                "tau_fpk" => o.tau_fpk = Some(parse_value(k, v)?),
                "tau_class" => o.tau_class = Some(parse_value(k, v)?),
                "tau_fit" => o.tau_fit = Some(parse_value(k, v)?),
                "momentum" => o.momentum = Some(parse_reals(v)?),
                "mass" => o.mass = Some(parse_value(k, v)?),
                "trials" => o.trials = Some(parse_value(k, v)?),
                "format" => o.format = Some(v.parse()?),
                other => return Err(Error::Parse(format!("line {}: unknown key '{other}'", n + 1))),
            }
        }
        Ok(o)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
        Self::parse_file_text(&text)
    }

    fn apply(&self, c: &mut RunConfig) -> Result<()> {
        if let Some(v) = self.seed {
            c.seed = v;
        }
        if let Some(v) = self.tau_zero {
            c.tolerances.zero = v;
        }
        if let Some(v) = self.tau_fpk {
            c.tolerances.fpk = v;
        }
        if let Some(v) = self.tau_class {
            c.tolerances.class = v;
        }
        if let Some(v) = self.tau_fit {
            c.tolerances.fit = v;
        }
        if let Some(v) = self.mass {
            c.mass = v;
        }
        if let Some(v) = &self.momentum {
            c.momentum = match v.as_slice() {
                [x, y, z] => [*x, *y, *z],
                [e, x, y, z] => {
                    Momentum::from_four(c.mass, [*e, *x, *y, *z])?;
                    [*x, *y, *z]
                }
                _ => return Err(Error::InvalidArgument(format!("momentum needs 3 or 4 components, got {}", v.len()))),
            };
        }
        if let Some(v) = self.trials {
            c.trials = v;
        }
        if let Some(v) = self.format {
            c.format = v;
        }
        Ok(())
    }
}

impl RunConfig {
    /// Defaults, then the file, then the flags.
    pub fn resolve(file: Option<&ConfigOverrides>, flags: &ConfigOverrides) -> Result<Self> {
        let mut c = RunConfig::default();
        if let Some(f) = file {
            // a 4-momentum is checked against the final mass below
            let mut f = f.clone();
            if flags.mass.is_some() {
                f.mass = flags.mass;
            }
            f.apply(&mut c)?;
        }
        flags.apply(&mut c)?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        self.tolerances.validate()?;
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return Err(Error::InvalidArgument(format!("mass must be positive, got {}", self.mass)));
        }
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        self.momentum_value().map(|_| ())
    }

    pub fn momentum_value(&self) -> Result<Momentum> {
        Momentum::on_shell(self.mass, self.momentum)
    }
}

/// Rows for CSV and Markdown output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table { headers: headers.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// Everything one subcommand emits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: RunConfig,
    /// `Some(false)` when a `--verify` comparison found a mismatch.
    pub verified: Option<bool>,
    pub result: serde_json::Value,
    #[serde(skip)]
    pub tables: Vec<(String, Table)>,
}

impl Report {
    pub fn new(command: &str, config: &RunConfig, result: serde_json::Value) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config: config.clone(),
            verified: None,
            result,
            tables: Vec::new(),
        }
    }

    pub fn with_table(mut self, title: &str, t: Table) -> Self {
        self.tables.push((title.into(), t));
        self
    }

    pub fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Json => serde_json::to_string_pretty(self).map(|s| s + "\n").map_err(|e| Error::InvalidArgument(e.to_string())),
            OutputFormat::Csv => self.render_csv(),
            OutputFormat::Markdown => Ok(self.render_markdown()),
        }
    }

    fn header_line(&self) -> String {
        let t = &self.config.tolerances;
        format!(
            "{} {} {} seed={} mass={} momentum={:?} trials={} tau_zero={:e} tau_fpk={:e} tau_class={:e} tau_fit={:e}",
            self.tool, self.version, self.command, self.config.seed, self.config.mass, self.config.momentum, self.config.trials, t.zero, t.fpk, t.class, t.fit
        )
    }

    fn render_csv(&self) -> Result<String> {
        let mut out = format!("# {}\n", self.header_line());
        for (title, t) in &self.tables {
            out.push_str(&format!("# {title}\n"));
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&t.headers).map_err(|e| Error::InvalidArgument(e.to_string()))?;
            for r in &t.rows {
                w.write_record(r).map_err(|e| Error::InvalidArgument(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?;
            out.push_str(&String::from_utf8(bytes).expect("csv output is utf-8"));
        }
        if let Some(v) = self.verified {
            out.push_str(&format!("# verified: {v}\n"));
        }
        Ok(out)
    }

    fn render_markdown(&self) -> String {
        let mut out = format!("<!-- {} -->\n", self.header_line());
        for (title, t) in &self.tables {
            let _ = writeln!(out, "\n### {title}\n");
            let _ = writeln!(out, "| {} |", t.headers.join(" | "));
            let _ = writeln!(out, "|{}", "---|".repeat(t.headers.len()));
            for r in &t.rows {
                let cells: Vec<String> = r.iter().map(|c| c.replace('|', "\\|")).collect();
                let _ = writeln!(out, "| {} |", cells.join(" | "));
            }
        }
        if let Some(v) = self.verified {
            let _ = writeln!(out, "\nverified: {v}");
        }
        out
    }
}
