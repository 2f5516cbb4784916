use std::fs::File;
use std::io::{self, BufWriter, Write};

use serde_json::{json, Map, Value};

use crate::config::{Format, RunConfig};
use crate::CliError;

/// A table cell; floats are rendered with 17 significant digits in CSV.
#[derive(Debug, Clone)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => sig17(*v),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) => json!(v),
            Cell::Text(s) => json!(s),
            Cell::Empty => Value::Null,
        }
    }
}

/// Decimal with 17 significant digits.
pub fn sig17(v: f64) -> String {
    if v == 0.0 {
        return "0.0000000000000000".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{v:.16e}");
    let exp: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    let decimals = (16 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write(&self, config: &RunConfig) -> Result<(), CliError> {
        let sink: Box<dyn Write> = match &config.output {
            Some(path) => Box::new(File::create(path).map_err(|e| {
                CliError::Io(format!("--out {}: {e}", path.display()))
            })?),
            None => Box::new(io::stdout().lock()),
        };
        let mut sink = BufWriter::new(sink);
        match config.format {
            Format::Csv => self.write_csv(&mut sink)?,
            Format::Json => self.write_json(&mut sink, config)?,
        }
        sink.flush().map_err(|e| CliError::Io(e.to_string()))
    }

    fn write_csv(&self, sink: &mut impl Write) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(sink);
        let io_err = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(&self.header).map_err(io_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv)).map_err(io_err)?;
        }
        w.flush().map_err(|e| CliError::Io(e.to_string()))
    }

    fn write_json(&self, sink: &mut impl Write, config: &RunConfig) -> Result<(), CliError> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .header
                    .iter()
                    .zip(row)
                    .map(|(h, c)| (h.to_string(), c.json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let doc = json!({ "config": config, "rows": rows });
        serde_json::to_writer_pretty(&mut *sink, &doc).map_err(|e| CliError::Io(e.to_string()))?;
        writeln!(sink).map_err(|e| CliError::Io(e.to_string()))
    }
}
