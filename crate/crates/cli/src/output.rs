//! CSV and JSON-lines table writers. Floats use 17 significant digits so
//! that every value round-trips.

use std::io::{self, Write};

use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}
impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}
impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}
impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}
impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn csv_io(e: csv::Error) -> io::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => e,
        other => io::Error::other(format!("{other:?}")),
    }
}

enum Sink<W: Write> {
    Csv(Box<csv::Writer<W>>),
    Jsonl(W),
}

pub struct Table<W: Write> {
    sink: Sink<W>,
    columns: Vec<&'static str>,
}

impl<W: Write> Table<W> {
    pub fn new(out: W, format: Format, columns: Vec<&'static str>) -> io::Result<Self> {
        let sink = match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&columns).map_err(csv_io)?;
                Sink::Csv(Box::new(w))
            }
            Format::Jsonl => Sink::Jsonl(out),
        };
        Ok(Self { sink, columns })
    }

    pub fn row(&mut self, cells: Vec<Cell>) -> io::Result<()> {
        assert_eq!(cells.len(), self.columns.len(), "row width");
        match &mut self.sink {
            Sink::Csv(w) => {
                let fields: Vec<String> = cells
                    .iter()
                    .map(|c| match c {
                        Cell::Num(v) => num(*v),
                        Cell::Int(v) => v.to_string(),
                        Cell::Text(s) => s.clone(),
                        Cell::Bool(b) => b.to_string(),
                    })
                    .collect();
                w.write_record(&fields).map_err(csv_io)
            }
            Sink::Jsonl(w) => {
                let fields: Vec<String> = self
                    .columns
                    .iter()
                    .zip(&cells)
                    .map(|(k, c)| {
                        let v = match c {
                            // JSON has no NaN or infinity.
                            Cell::Num(v) if !v.is_finite() => "null".to_string(),
                            Cell::Num(v) => num(*v),
                            Cell::Int(v) => v.to_string(),
                            Cell::Text(s) => serde_json::Value::from(s.as_str()).to_string(),
                            Cell::Bool(b) => b.to_string(),
                        };
                        format!("{}:{v}", serde_json::Value::from(*k))
                    })
                    .collect();
                writeln!(w, "{{{}}}", fields.join(","))
            }
        }
    }

    pub fn finish(self) -> io::Result<()> {
        match self.sink {
            Sink::Csv(mut w) => w.flush(),
            Sink::Jsonl(mut w) => w.flush(),
        }
    }
}
