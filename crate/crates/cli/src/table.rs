//! CSV emission: one `#` metadata block, a header row, then data rows.
//!
//! Floats are printed with 17 significant digits (`{:.16e}`) so tables
//! round-trip exactly; no timestamps or environment state appear anywhere,
//! which keeps reruns byte-identical.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

pub fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct Table {
    meta: Vec<(String, String)>,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(command: &str, header: Vec<&'static str>) -> Self {
        let mut meta = vec![
            ("tool".into(), format!("su11 {}", env!("CARGO_PKG_VERSION"))),
            ("command".into(), command.into()),
            (
                "convention".into(),
                "x=(a+a\u{2020})/\u{221a}2; vacuum covariance I/2; pump acts as e^{i\u{3b8}_p}tanh(g) two-mode squeezer".into(),
            ),
            (
                "convention".into(),
                "N_Tot = mean_a + mean_b after the pump; SQL = 1/\u{221a}N_Tot; HL = 1/N_Tot".into(),
            ),
        ];
        meta.reserve(16);
        Self { meta, header, rows: Vec::new() }
    }

    pub fn param(&mut self, key: &str, value: f64) -> &mut Self {
        self.meta.push((key.into(), sci(value)));
        self
    }

    pub fn param_str(&mut self, key: &str, value: &str) -> &mut Self {
        self.meta.push((key.into(), value.into()));
        self
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    pub fn write_to(&self, w: &mut dyn Write) -> io::Result<()> {
        for (k, v) in &self.meta {
            writeln!(w, "# {k}: {v}")?;
        }
        writeln!(w, "{}", self.header.join(","))?;
        for row in &self.rows {
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }

    pub fn emit(&self, out: Option<&Path>) -> io::Result<()> {
        match out {
            Some(path) => {
                let mut w = BufWriter::new(File::create(path)?);
                self.write_to(&mut w)?;
                w.flush()
            }
            None => {
                let stdout = io::stdout();
                let mut w = stdout.lock();
                self.write_to(&mut w)?;
                w.flush()
            }
        }
    }
}
