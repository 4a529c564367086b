//! Report rows and their renderings. json-lines is canonical; csv and the
//! table carry the same columns.

use std::io::Write;

use clap::ValueEnum;
use serde::Serialize;
use wlsi_core::{CheckRecord, Status};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Format {
    Table,
    JsonLines,
    Csv,
}

/// One report record. Field order is the serialised key order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub check_id: String,
    pub n: usize,
    pub beta: f64,
    pub sigma: f64,
    pub weight: String,
    pub value: f64,
    pub bound: f64,
    pub slack: f64,
    /// `None` for skipped checks.
    pub pass: Option<bool>,
    pub seed: u64,
    #[serde(skip)]
    pub note: String,
}

impl Row {
    pub fn from_record(r: &CheckRecord, seed: u64) -> Self {
        Self {
            check_id: r.check_id.clone(),
            n: r.n,
            beta: r.beta,
            sigma: r.sigma,
            weight: r.weight.clone(),
            value: r.value,
            bound: r.bound,
            slack: r.slack,
            pass: match r.status {
                Status::Pass => Some(true),
                Status::Fail => Some(false),
                Status::Skip => None,
            },
            seed,
            note: r.note.clone(),
        }
    }

    pub fn failed(&self) -> bool {
        self.pass == Some(false)
    }
}

fn num(v: f64) -> String {
    if v.is_nan() {
        "-".into()
    } else {
        format!("{v:.6e}")
    }
}

pub fn write_rows(rows: &[Row], format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    match format {
        Format::JsonLines => {
            for r in rows {
                serde_json::to_writer(&mut *out, r)?;
                writeln!(out)?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        Format::Table => {
            let id_w = rows.iter().map(|r| r.check_id.len()).max().unwrap_or(8).max(8);
            writeln!(
                out,
                "{:<id_w$}  {:>2}  {:>10}  {:>10}  {:>13}  {:>13}  {:>10}  {:<4}  note",
                "check_id", "n", "beta", "sigma", "value", "bound", "slack", "pass"
            )?;
            for r in rows {
                let status = match r.pass {
                    Some(true) => "ok",
                    Some(false) => "FAIL",
                    None => "skip",
                };
                writeln!(
                    out,
                    "{:<id_w$}  {:>2}  {:>10.6}  {:>10.6}  {:>13}  {:>13}  {:>10}  {:<4}  {}",
                    r.check_id,
                    r.n,
                    r.beta,
                    r.sigma,
                    num(r.value),
                    num(r.bound),
                    num(r.slack),
                    status,
                    r.note
                )?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row() -> Row {
        Row::from_record(&CheckRecord::new("a,b", 1, 1.0, 2.0).weight("w(k=1,s=1)").upper(1.0, 2.0, 0.0), 9)
    }

    #[test]
    fn json_key_order() {
        let mut buf = Vec::new();
        write_rows(&[row()], Format::JsonLines, &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let keys = ["check_id", "n", "beta", "sigma", "weight", "value", "bound", "slack", "pass", "seed"];
        let pos: Vec<usize> = keys.iter().map(|k| s.find(&format!("\"{k}\"")).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]), "{s}");
        assert!(!s.contains("note"));
    }

    #[test]
    fn csv_quotes_commas() {
        let mut buf = Vec::new();
        write_rows(&[row()], Format::Csv, &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("check_id,n,beta,sigma,weight,value,bound,slack,pass,seed\n"));
        assert!(s.contains("\"a,b\""));
    }

    #[test]
    fn skipped_rows_have_null_pass() {
        let r = Row::from_record(&CheckRecord::new("s", 1, 1.0, 1.0).skip("x"), 0);
        assert_eq!(r.pass, None);
        assert!(!r.failed());
        assert!(serde_json::to_string(&r).unwrap().contains("\"pass\":null"));
    }
}
