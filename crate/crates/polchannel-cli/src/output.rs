//! Table assembly and the two writers. CSV uses a `.` decimal separator and
//! 17 significant digits so doubles round-trip losslessly; JSON mirrors the
//! same metadata, columns, and rows. Output bytes depend only on the config
//! and seed.

use std::io::Write;

/// A numeric result table plus free-form metadata.
pub struct Table {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            meta: Vec::new(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl std::fmt::Display) {
        self.meta.push((key.to_string(), value.to_string()));
    }

    pub fn meta_float(&mut self, key: &str, value: f64) {
        self.meta.push((key.to_string(), format!("{value:.16e}")));
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv(&self, out: &mut dyn Write) -> std::io::Result<()> {
        for (k, v) in &self.meta {
            writeln!(out, "# {k} = {v}")?;
        }
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }

    pub fn write_json(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let meta: serde_json::Map<String, serde_json::Value> = self
            .meta
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
            .collect();
        let value = serde_json::json!({
            "meta": meta,
            "columns": self.columns,
            "rows": self.rows,
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&value)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("format must be `json` or `csv`, got `{other}`")),
        }
    }
}

/// Write a table (or an arbitrary JSON value, which ignores the CSV choice)
/// to the path or stdout.
pub fn emit(table: &Table, format: Format, out: Option<&str>) -> std::io::Result<()> {
    let mut buffer: Vec<u8> = Vec::new();
    match format {
        Format::Csv => table.write_csv(&mut buffer)?,
        Format::Json => table.write_json(&mut buffer)?,
    }
    write_bytes(&buffer, out)
}

pub fn emit_json(value: &serde_json::Value, out: Option<&str>) -> std::io::Result<()> {
    let mut buffer = serde_json::to_string_pretty(value)?.into_bytes();
    buffer.push(b'\n');
    write_bytes(&buffer, out)
}

fn write_bytes(bytes: &[u8], out: Option<&str>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, bytes),
        None => std::io::stdout().write_all(bytes),
    }
}
