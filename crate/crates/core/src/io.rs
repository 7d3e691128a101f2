//! Deterministic CSV output.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

/// Formats a float with 17 significant digits in scientific notation.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub struct CsvWriter {
    out: BufWriter<File>,
}

impl CsvWriter {
    pub fn create(path: &Path, header: &[&str]) -> std::io::Result<Self> {
        let mut out = BufWriter::new(File::create(path)?);
        writeln!(out, "{}", header.join(","))?;
        Ok(Self { out })
    }

    pub fn row(&mut self, values: &[f64]) -> std::io::Result<()> {
        let line: Vec<String> = values.iter().map(|v| fmt_f64(*v)).collect();
        writeln!(self.out, "{}", line.join(","))
    }

    /// Row whose leading columns are integers.
    pub fn row_mixed(&mut self, ints: &[i64], values: &[f64]) -> std::io::Result<()> {
        let mut line: Vec<String> = ints.iter().map(|v| v.to_string()).collect();
        line.extend(values.iter().map(|v| fmt_f64(*v)));
        writeln!(self.out, "{}", line.join(","))
    }

    /// Row `t,index,values...`.
    pub fn row_mixed_at(&mut self, t: f64, index: i64, values: &[f64]) -> std::io::Result<()> {
        let mut line = vec![fmt_f64(t), index.to_string()];
        line.extend(values.iter().map(|v| fmt_f64(*v)));
        writeln!(self.out, "{}", line.join(","))
    }

    pub fn raw(&mut self) -> &mut BufWriter<File> {
        &mut self.out
    }

    pub fn finish(mut self) -> std::io::Result<()> {
        self.out.flush()
    }
}
