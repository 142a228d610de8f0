//! Append-only JSONL result log.

use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use num_bigint::BigUint;
use primerel::PrimalityStatus;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::Failure;

pub const TOOL_VERSION: &str = concat!("primerel ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub timestamp: String,
    pub construction: String,
    pub params: Value,
    pub value: String,
    pub digits: usize,
    pub verdict: PrimalityStatus,
    pub tool_version: String,
}

impl ResultRecord {
    pub fn new(construction: &str, params: Value, value: &BigUint, verdict: PrimalityStatus) -> Self {
        let value = value.to_string();
        ResultRecord {
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true),
            construction: construction.to_string(),
            params,
            digits: value.len(),
            value,
            verdict,
            tool_version: TOOL_VERSION.to_string(),
        }
    }
}

/// Single writer; every record is flushed as soon as it is written.
pub struct ResultLog {
    file: File,
}

impl ResultLog {
    pub fn open(path: &Path) -> io::Result<Self> {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(ResultLog { file })
    }

    pub fn append(&mut self, record: &ResultRecord) -> io::Result<()> {
        let mut line = serde_json::to_vec(record)?;
        line.push(b'\n');
        self.file.write_all(&line)?;
        self.file.flush()
    }
}

/// Parses every non-blank line. Errors name the 1-based line.
pub fn read_log(path: &Path) -> Result<Vec<ResultRecord>, Failure> {
    let file = File::open(path)
        .map_err(|e| Failure::Validation(format!("cannot open {}: {e}", path.display())))?;
    let mut records = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Failure::Validation(format!("line {}: {e}", i + 1)))?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line)
            .map_err(|e| Failure::Validation(format!("line {}: {e}", i + 1)))?;
        records.push(record);
    }
    Ok(records)
}
