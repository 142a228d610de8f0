use std::fmt::Display;
use std::io::Write;

use clap::ValueEnum;
use serde_json::{Map, Value};

use crate::record::{ResultLog, ResultRecord};
use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
    Jsonl,
}

/// Routes results to stdout in the chosen format and to the log.
///
/// Text and JSONL stream; JSON buffers rows into one document printed by
/// `finish`. CSV streams with a header taken from the first row.
pub struct Printer<'a> {
    format: Format,
    out: &'a mut (dyn Write + Send),
    log: Option<ResultLog>,
    rows: Vec<Value>,
    extra: Map<String, Value>,
    header: Option<Vec<String>>,
}

impl<'a> Printer<'a> {
    pub fn new(format: Format, out: &'a mut (dyn Write + Send), log: Option<ResultLog>) -> Self {
        Printer {
            format,
            out,
            log,
            rows: Vec::new(),
            extra: Map::new(),
            header: None,
        }
    }

    pub fn format(&self) -> Format {
        self.format
    }

    /// A line shown only in text output.
    pub fn text(&mut self, line: impl Display) -> Result<(), Failure> {
        if self.format == Format::Text {
            writeln!(self.out, "{line}")?;
        }
        Ok(())
    }

    /// A top-level field of the JSON document.
    pub fn extra(&mut self, key: &str, value: Value) {
        self.extra.insert(key.to_string(), value);
    }

    pub fn row(&mut self, text: impl Display, row: Value) -> Result<(), Failure> {
        match self.format {
            Format::Text => writeln!(self.out, "{text}")?,
            Format::Jsonl => writeln!(self.out, "{}", serde_json::to_string(&row)?)?,
            Format::Json => self.rows.push(row),
            Format::Csv => self.csv_row(&row)?,
        }
        Ok(())
    }

    pub fn record(&mut self, record: ResultRecord) -> Result<(), Failure> {
        if let Some(log) = &mut self.log {
            log.append(&record)?;
        }
        Ok(())
    }

    fn csv_row(&mut self, row: &Value) -> Result<(), Failure> {
        let Value::Object(map) = row else {
            return Err(Failure::Invariant("CSV rows must be objects".into()));
        };
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(&mut *self.out);
        if self.header.is_none() {
            let header: Vec<String> = map.keys().cloned().collect();
            w.write_record(&header)?;
            self.header = Some(header);
        }
        let header = self.header.as_ref().unwrap();
        w.write_record(header.iter().map(|k| cell(map.get(k).unwrap_or(&Value::Null))))?;
        w.flush()?;
        Ok(())
    }

    pub fn finish(self) -> Result<(), Failure> {
        if self.format == Format::Json {
            let mut doc = self.extra;
            doc.insert("results".into(), Value::Array(self.rows));
            serde_json::to_writer_pretty(&mut *self.out, &Value::Object(doc))?;
            writeln!(self.out)?;
        }
        self.out.flush()?;
        Ok(())
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        _ => v.to_string(),
    }
}
