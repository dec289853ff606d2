//! Record envelopes, writers and the matching schema parsers.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufRead, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::failure::Failure;

pub const VERSION: &str = env!("THOMA_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// One JSON-lines object.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Envelope {
    pub cmd: String,
    pub version: String,
    pub params: Map<String, Value>,
    pub seed: Option<u64>,
    pub record: Value,
}

/// Where a command writes: an explicit path, `<dir>/<cmd>.<ext>`, or stdout.
pub fn destination(out: Option<&Path>, out_dir: Option<&Path>, cmd: &str, format: Format) -> Option<PathBuf> {
    if let Some(p) = out {
        return Some(p.to_path_buf());
    }
    let ext = match format {
        Format::Json => "jsonl",
        Format::Csv => "csv",
    };
    out_dir.map(|d| d.join(format!("{cmd}.{ext}")))
}

enum Backend {
    Json(Box<dyn Write>),
    Csv { writer: Box<csv::Writer<Box<dyn Write>>>, header: Option<Vec<String>> },
}

pub struct Sink {
    cmd: String,
    params: Map<String, Value>,
    seed: Option<u64>,
    backend: Backend,
}

impl Sink {
    pub fn open(
        cmd: &str,
        params: Map<String, Value>,
        seed: Option<u64>,
        format: Format,
        path: Option<PathBuf>,
    ) -> Result<Self, Failure> {
        let out: Box<dyn Write> = match path {
            Some(p) => {
                if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                    std::fs::create_dir_all(parent)
                        .map_err(|e| Failure::config(format!("{}: {e}", parent.display())))?;
                }
                let f = File::create(&p).map_err(|e| Failure::config(format!("{}: {e}", p.display())))?;
                Box::new(BufWriter::new(f))
            }
            None => Box::new(BufWriter::new(io::stdout())),
        };
        let backend = match format {
            Format::Json => Backend::Json(out),
            Format::Csv => Backend::Csv { writer: Box::new(csv::WriterBuilder::new().from_writer(out)), header: None },
        };
        Ok(Sink { cmd: cmd.to_string(), params, seed, backend })
    }

    /// Writes one record. CSV rows carry the envelope fields and parameters
    /// as leading columns; the record itself must be a flat object.
    pub fn write(&mut self, record: Value) -> Result<(), Failure> {
        let io_err = |e: &dyn std::fmt::Display| Failure::config(format!("writing output: {e}"));
        match &mut self.backend {
            Backend::Json(out) => {
                let env = Envelope {
                    cmd: self.cmd.clone(),
                    version: VERSION.to_string(),
                    params: self.params.clone(),
                    seed: self.seed,
                    record,
                };
                serde_json::to_writer(&mut *out, &env).map_err(|e| io_err(&e))?;
                out.write_all(b"\n").map_err(|e| io_err(&e))?;
            }
            Backend::Csv { writer, header } => {
                let Value::Object(fields) = record else {
                    return Err(Failure::config("CSV output needs flat records".into()));
                };
                let mut row: Vec<(String, String)> = vec![
                    ("cmd".into(), self.cmd.clone()),
                    ("version".into(), VERSION.to_string()),
                    ("seed".into(), self.seed.map(|s| s.to_string()).unwrap_or_default()),
                ];
                for (k, v) in &self.params {
                    row.push((format!("param_{k}"), scalar(v)?));
                }
                for (k, v) in &fields {
                    row.push((k.clone(), scalar(v)?));
                }
                let names: Vec<String> = row.iter().map(|(k, _)| k.clone()).collect();
                match header {
                    None => {
                        writer.write_record(&names).map_err(|e| io_err(&e))?;
                        *header = Some(names);
                    }
                    Some(h) if *h != names => {
                        return Err(Failure::config("CSV records must share one set of columns".into()));
                    }
                    Some(_) => {}
                }
                writer.write_record(row.iter().map(|(_, v)| v)).map_err(|e| io_err(&e))?;
            }
        }
        Ok(())
    }

    pub fn finish(self) -> Result<(), Failure> {
        let res = match self.backend {
            Backend::Json(mut out) => out.flush(),
            Backend::Csv { mut writer, .. } => writer.flush(),
        };
        res.map_err(|e| Failure::config(format!("writing output: {e}")))
    }
}

fn scalar(v: &Value) -> Result<String, Failure> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        Value::Bool(b) => Ok(b.to_string()),
        Value::Null => Ok(String::new()),
        _ => Err(Failure::config("CSV output needs flat records".into())),
    }
}

/// Parses a JSON-lines file written by `Sink`.
pub fn parse_jsonl(reader: impl BufRead) -> Result<Vec<Envelope>, String> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| e.to_string())?;
        let env: Envelope = serde_json::from_str(&line).map_err(|e| format!("line {}: {e}", i + 1))?;
        if !env.record.is_object() {
            return Err(format!("line {}: record must be an object", i + 1));
        }
        out.push(env);
    }
    Ok(out)
}

/// Parses a CSV file written by `Sink` into rows keyed by column name.
pub fn parse_csv(reader: impl io::Read) -> Result<Vec<BTreeMap<String, String>>, String> {
    let mut rdr = csv::Reader::from_reader(reader);
    let header: Vec<String> = rdr.headers().map_err(|e| e.to_string())?.iter().map(String::from).collect();
    if header.len() < 3 || header[..3] != ["cmd", "version", "seed"] {
        return Err("header must start with cmd,version,seed".into());
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| format!("row {}: {e}", i + 1))?;
        if !rec.get(2).unwrap_or("").is_empty() {
            rec[2].parse::<u64>().map_err(|e| format!("row {}: seed: {e}", i + 1))?;
        }
        rows.push(header.iter().cloned().zip(rec.iter().map(String::from)).collect());
    }
    Ok(rows)
}
