//! Files written by the commands: CSV tables, SVG plots and the run manifest.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{Map, Value};

/// Write `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// A CSV table held in memory until written.
pub struct Table {
    w: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Result<Self> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(header)?;
        Ok(Table { w })
    }

    pub fn row<I, T>(&mut self, fields: I) -> Result<()>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[u8]>,
    {
        self.w.write_record(fields)?;
        Ok(())
    }

    pub fn serialize(&mut self, row: impl Serialize) -> Result<()> {
        self.w.serialize(row)?;
        Ok(())
    }

    pub fn write(self, path: &Path) -> Result<()> {
        let bytes = self.w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?;
        write_atomic(path, &bytes)
    }
}

/// CSV with a header taken from the field names of `T`.
pub fn write_rows<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?;
    write_atomic(path, &bytes)
}

/// Optional numbers are written as empty fields.
pub fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub struct Series<'a> {
    pub label: &'a str,
    pub colour: &'a str,
    pub points: Vec<(f64, f64)>,
}

/// A self-contained line plot.
pub fn line_plot(title: &str, series: &[Series<'_>]) -> String {
    let (w, h, m) = (800.0, 480.0, 50.0);
    let all = series.iter().flat_map(|s| s.points.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !(x1 > x0) {
        x1 = x0 + 1.0;
    }
    if !(y1 > y0) {
        y0 -= 1.0;
        y1 += 1.0;
    }
    let sx = |x: f64| m + (x - x0) / (x1 - x0) * (w - 2.0 * m);
    let sy = |y: f64| h - m - (y - y0) / (y1 - y0) * (h - 2.0 * m);
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{m}" y="30" font-family="sans-serif" font-size="16">{title}</text>"#);
    if y0 < 0.0 && y1 > 0.0 {
        let z = sy(0.0);
        let _ = writeln!(s, r##"<line x1="{m}" y1="{z:.2}" x2="{:.2}" y2="{z:.2}" stroke="#bbb"/>"##, w - m);
    }
    let _ = writeln!(
        s,
        r#"<text x="{m}" y="{:.2}" font-family="sans-serif" font-size="11">[{x0:.3}, {x1:.3}] x [{y0:.3}, {y1:.3}]</text>"#,
        h - 15.0
    );
    for (i, se) in series.iter().enumerate() {
        let mut pts = String::new();
        for &(x, y) in &se.points {
            let _ = write!(pts, "{:.2},{:.2} ", sx(x), sy(y));
        }
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{}" stroke-width="1" points="{}"/>"#,
            se.colour,
            pts.trim_end()
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" fill="{}">{}</text>"#,
            w - m - 150.0,
            30.0 + 16.0 * i as f64,
            se.colour,
            se.label
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Keep at most `max` evenly spaced points, always including the last.
pub fn thin<T: Copy>(xs: &[T], max: usize) -> Vec<T> {
    if xs.len() <= max {
        return xs.to_vec();
    }
    let step = xs.len().div_ceil(max);
    let mut out: Vec<T> = xs.iter().step_by(step).copied().collect();
    if (xs.len() - 1) % step != 0 {
        out.push(*xs.last().unwrap());
    }
    out
}

/// What a command produced, before the manifest is added.
#[derive(Debug, Default)]
pub struct Outcome {
    pub outputs: Vec<PathBuf>,
    pub summary: Map<String, Value>,
}

impl Outcome {
    pub fn put(&mut self, key: &str, v: impl Into<Value>) {
        self.summary.insert(key.to_string(), v.into());
    }
}

/// How the replica streams were derived.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SeedScheme {
    pub seed: u64,
    /// Stream `replica·8 + lane` of a ChaCha8 generator keyed by `seed`.
    pub derivation: String,
    pub replicas: u64,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub config: BTreeMap<String, String>,
    pub seeds: SeedScheme,
    pub wall_clock_secs: f64,
    pub outputs: Vec<String>,
    pub summary: Map<String, Value>,
}

impl RunManifest {
    pub fn write(&self, path: &Path) -> Result<()> {
        let mut bytes = serde_json::to_vec_pretty(self)?;
        bytes.push(b'\n');
        write_atomic(path, &bytes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thin_keeps_ends() {
        let xs: Vec<u32> = (0..10).collect();
        assert_eq!(thin(&xs, 4), vec![0, 3, 6, 9]);
        assert_eq!(thin(&xs, 20), xs);
        let t = thin(&xs, 3);
        assert_eq!((t[0], *t.last().unwrap()), (0, 9));
    }

    #[test]
    fn table_uses_newlines() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.csv");
        let mut t = Table::new(&["a", "b"]).unwrap();
        t.row(["1", "0.5"]).unwrap();
        t.write(&p).unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "a,b\n1,0.5\n");
    }
}
