//! CSV tables with a `#` metadata block, and JSON summaries.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use log::debug;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Slack allowed on a probability before it counts as a real violation.
pub const PROBABILITY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub metadata: Vec<(String, String)>,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(experiment: &str, header: Vec<&'static str>) -> Self {
        Self {
            metadata: vec![("experiment".into(), experiment.into()), ("version".into(), VERSION.into())],
            header,
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.metadata.push((key.into(), value.to_string()));
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k}: {v}");
        }
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// Column by header name, parsed back as floats.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| *h == name)?;
        self.rows.iter().map(|r| r[i].parse().ok()).collect()
    }
}

/// Shortest decimal that round-trips.
pub fn num(x: f64) -> String {
    format!("{x}")
}

/// Counts probabilities pulled back into `[0, 1]`.
#[derive(Debug, Default)]
pub struct Clamp {
    pub count: usize,
    pub worst: f64,
}

impl Clamp {
    pub fn apply(&mut self, p: f64) -> anyhow::Result<f64> {
        if !(-PROBABILITY_SLACK..=1.0 + PROBABILITY_SLACK).contains(&p) || p.is_nan() {
            bail!("probability {p} is outside [0, 1] beyond rounding");
        }
        let clamped = p.clamp(0.0, 1.0);
        if clamped != p {
            self.count += 1;
            self.worst = self.worst.max((clamped - p).abs());
        }
        Ok(clamped)
    }

    pub fn report(&self, what: &str) {
        if self.count > 0 {
            log::info!("{what}: clamped {} probabilities into [0, 1] (largest shift {:e})", self.count, self.worst);
        } else {
            debug!("{what}: no probability needed clamping");
        }
    }
}

pub fn summary_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".summary.json");
    PathBuf::from(s)
}

pub fn write_file(path: &Path, contents: &str) -> anyhow::Result<()> {
    let mut f = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    f.write_all(contents.as_bytes()).with_context(|| format!("writing {}", path.display()))
}

pub fn json_string(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = Table::new("demo", vec!["a", "b"]);
        t.meta("theta", num(0.1));
        t.push(vec![num(1.0), num(0.30000000000000004)]);
        assert_eq!(t.to_csv(), format!("# experiment: demo\n# version: {VERSION}\n# theta: 0.1\na,b\n1,0.30000000000000004\n"));
        assert_eq!(t.column("b").unwrap(), vec![0.30000000000000004]);
    }

    #[test]
    fn clamping() {
        let mut c = Clamp::default();
        assert_eq!(c.apply(-1e-15).unwrap(), 0.0);
        assert_eq!(c.apply(0.5).unwrap(), 0.5);
        assert_eq!(c.apply(1.0 + 1e-14).unwrap(), 1.0);
        assert_eq!(c.count, 2);
        assert!(c.apply(1.1).is_err());
    }

    #[test]
    fn summary_sits_next_to_output() {
        assert_eq!(summary_path(Path::new("runs/packet.csv")), PathBuf::from("runs/packet.csv.summary.json"));
    }
}
