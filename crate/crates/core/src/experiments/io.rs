//! CSV and JSON forms of outage curves.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{Abscissa, ExperimentError, Method, OutageCurve};
use crate::model::{linear_to_db, Scheme};

pub const CSV_HEADER: [&str; 12] = [
    "scheme",
    "method",
    "n",
    "m",
    "rho1_db",
    "rho2_db",
    "rho_i_db",
    "gamma_th_db",
    "value",
    "std_err",
    "trials",
    "seed",
];

/// dB value rounded to 1e−9 dB so conversions back from linear print cleanly.
pub fn format_db(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    let r = (v * 1e9).round() / 1e9;
    format!("{}", if r == 0.0 { 0.0 } else { r })
}

/// Shortest round-trip form; exponent notation outside [1e−4, 1e15).
pub fn format_value(v: f64) -> String {
    if v == 0.0 || (v.abs() >= 1e-4 && v.abs() < 1e15) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// One parsed CSV line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub scheme: Scheme,
    pub method: Method,
    pub n: usize,
    pub m: usize,
    pub rho1_db: f64,
    pub rho2_db: f64,
    pub rho_i_db: Vec<f64>,
    pub gamma_th_db: f64,
    /// `None` for a gap.
    pub value: Option<f64>,
    pub std_err: Option<f64>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
}

fn io_err(e: impl std::fmt::Display) -> ExperimentError {
    ExperimentError::Io(e.to_string())
}

pub fn write_csv<W: Write>(curves: &[OutageCurve], w: W) -> Result<(), ExperimentError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_HEADER).map_err(io_err)?;
    let opt = |v: Option<String>| v.unwrap_or_default();
    for c in curves {
        for p in &c.points {
            let q = &p.params;
            let rho1_db =
                if c.abscissa == Abscissa::Rho1Db { format_db(p.x) } else { format_db(linear_to_db(q.rho1())) };
            let rho_i: Vec<String> = q.rho_i().iter().map(|&r| format_db(linear_to_db(r))).collect();
            out.write_record([
                c.scheme.as_str().to_string(),
                c.method.as_str().to_string(),
                q.n().to_string(),
                q.m().to_string(),
                rho1_db,
                format_db(linear_to_db(q.rho2())),
                rho_i.join(";"),
                format_db(linear_to_db(q.gamma_th())),
                opt(p.probability.map(format_value)),
                opt(p.std_error.map(format_value)),
                opt(c.trials.map(|t| t.to_string())),
                opt(c.seed.map(|s| s.to_string())),
            ])
            .map_err(io_err)?;
        }
    }
    out.flush().map_err(io_err)
}

pub fn to_csv_string(curves: &[OutageCurve]) -> String {
    let mut buf = Vec::new();
    write_csv(curves, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("CSV output is UTF-8")
}

pub fn read_csv_rows<R: Read>(r: R) -> Result<Vec<CsvRow>, ExperimentError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
    let header = rdr.headers().map_err(io_err)?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(ExperimentError::Format(format!(
            "unexpected CSV header: {}",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let bad = |what: &str, v: &str| ExperimentError::Format(format!("bad {what} '{v}'"));
    let num = |what: &str, v: &str| v.parse::<f64>().map_err(|_| bad(what, v));
    let opt_num = |what: &str, v: &str| if v.is_empty() { Ok(None) } else { num(what, v).map(Some) };
    let opt_int = |what: &str, v: &str| {
        if v.is_empty() {
            Ok(None)
        } else {
            v.parse::<u64>().map(Some).map_err(|_| bad(what, v))
        }
    };
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(io_err)?;
        let f = |i: usize| rec.get(i).unwrap_or("");
        let rho_i_db = if f(6).is_empty() {
            Vec::new()
        } else {
            f(6).split(';').map(|v| num("rho_i_db", v)).collect::<Result<_, _>>()?
        };
        rows.push(CsvRow {
            scheme: f(0).parse().map_err(|_| bad("scheme", f(0)))?,
            method: f(1).parse()?,
            n: f(2).parse().map_err(|_| bad("n", f(2)))?,
            m: f(3).parse().map_err(|_| bad("m", f(3)))?,
            rho1_db: num("rho1_db", f(4))?,
            rho2_db: num("rho2_db", f(5))?,
            rho_i_db,
            gamma_th_db: num("gamma_th_db", f(7))?,
            value: opt_num("value", f(8))?,
            std_err: opt_num("std_err", f(9))?,
            trials: opt_int("trials", f(10))?,
            seed: opt_int("seed", f(11))?,
        });
    }
    Ok(rows)
}

pub fn write_json<W: Write>(curves: &[OutageCurve], w: W) -> Result<(), ExperimentError> {
    let mut w = w;
    serde_json::to_writer_pretty(&mut w, curves).map_err(io_err)?;
    w.write_all(b"\n").map_err(io_err)
}

pub fn read_json<R: Read>(r: R) -> Result<Vec<OutageCurve>, ExperimentError> {
    serde_json::from_reader(r).map_err(|e| ExperimentError::Format(e.to_string()))
}
