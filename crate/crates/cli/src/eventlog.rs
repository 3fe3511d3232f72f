//! Append-only JSON-lines log of CLI interactions.
//!
//! Each line is `{"seq":N,"input":"...","outputs":["...",...]}` with `seq`
//! counting up from 0. No wall-clock data is recorded.

use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventLogRecord {
    pub seq: u64,
    pub input: String,
    pub outputs: Vec<String>,
}

#[derive(Debug, Error)]
pub enum LogError {
    #[error("log line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Parses and validates a whole log. Blank lines are not allowed.
pub fn parse_log(reader: impl BufRead) -> Result<Vec<EventLogRecord>, LogError> {
    let mut records = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let number = i + 1;
        let record: EventLogRecord = serde_json::from_str(&line).map_err(|e| LogError::Malformed {
            line: number,
            reason: e.to_string(),
        })?;
        let expected = records.len() as u64;
        if record.seq != expected {
            return Err(LogError::Malformed {
                line: number,
                reason: format!("expected seq {expected}, found {}", record.seq),
            });
        }
        records.push(record);
    }
    Ok(records)
}

/// Reads a log file; a missing file is an empty log.
pub fn read_log(path: &Path) -> Result<Vec<EventLogRecord>, LogError> {
    match File::open(path) {
        Ok(file) => parse_log(BufReader::new(file)),
        Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(Vec::new()),
        Err(e) => Err(e.into()),
    }
}

/// Appends records to a log file, one flushed line each.
pub struct EventLogWriter {
    file: File,
    next_seq: u64,
}

impl EventLogWriter {
    /// Opens `path` for appending. `next_seq` must equal the number of records
    /// already in the file.
    pub fn open(path: &Path, next_seq: u64) -> io::Result<Self> {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(EventLogWriter { file, next_seq })
    }

    pub fn append(&mut self, input: &str, outputs: &[String]) -> io::Result<EventLogRecord> {
        let record = EventLogRecord {
            seq: self.next_seq,
            input: input.to_owned(),
            outputs: outputs.to_vec(),
        };
        let mut line = serde_json::to_string(&record).map_err(io::Error::other)?;
        line.push('\n');
        self.file.write_all(line.as_bytes())?;
        self.file.flush()?;
        self.next_seq += 1;
        Ok(record)
    }
}
