//! Report records and their text, JSON and CSV renderings.

use std::fmt::Write as _;

use curve_atlas::catalog::{PointRecord, CSV_HEADER};
use curve_atlas::modular::FixedReal;
use serde_json::{json, Map, Value};

pub const SCHEMA_ID: &str = "curve-atlas-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        }
    }

    pub fn from_ok(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// A fixed-point value as decimal digits plus an explicit error radius.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Approx {
    pub value: String,
    pub radius: String,
    /// Upper bound on the absolute value.
    pub bound: String,
}

impl Approx {
    pub fn of(x: &FixedReal) -> Approx {
        // enough places to show every stored bit
        let digits = (x.prec() as f64 * std::f64::consts::LOG10_2).ceil() as u32;
        Approx { value: x.to_decimal(digits), radius: x.radius_string(), bound: x.abs_upper_string() }
    }

    fn json(&self) -> Value {
        json!({ "value": self.value, "radius": self.radius, "bound": self.bound })
    }
}

#[derive(Debug, Clone)]
pub struct Record {
    pub id: String,
    pub status: Status,
    pub details: String,
    pub values: Vec<(String, String)>,
    pub approx: Vec<(String, Approx)>,
}

impl Record {
    pub fn new(id: impl Into<String>, status: Status, details: impl Into<String>) -> Record {
        Record { id: id.into(), status, details: details.into(), values: Vec::new(), approx: Vec::new() }
    }

    pub fn value(mut self, key: &str, v: impl ToString) -> Record {
        self.values.push((key.to_string(), v.to_string()));
        self
    }

    pub fn approx(mut self, key: &str, x: &FixedReal) -> Record {
        self.approx.push((key.to_string(), Approx::of(x)));
        self
    }
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub command: String,
    pub records: Vec<Record>,
    /// Point tables carried for CSV export.
    pub points: Vec<PointRecord>,
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report { command: command.to_string(), ..Report::default() }
    }

    pub fn extend(&mut self, other: Report) {
        self.records.extend(other.records);
        self.points.extend(other.points);
    }

    pub fn count(&self, s: Status) -> usize {
        self.records.iter().filter(|r| r.status == s).count()
    }

    pub fn failed(&self) -> bool {
        self.count(Status::Fail) > 0
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "curve-atlas {}  {}", env!("CARGO_PKG_VERSION"), self.command).unwrap();
        for r in &self.records {
            let tag = r.status.as_str().to_uppercase();
            writeln!(out, "{tag:<4}  {}  {}", r.id, r.details).unwrap();
            for (k, v) in &r.values {
                writeln!(out, "        {k} = {v}").unwrap();
            }
            for (k, a) in &r.approx {
                writeln!(out, "        {k} = {} ± {}", a.value, a.radius).unwrap();
            }
        }
        writeln!(
            out,
            "{} pass, {} fail, {} skip",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skip)
        )
        .unwrap();
        out
    }

    pub fn to_json(&self, timestamp: &str) -> Value {
        let records: Vec<Value> = self
            .records
            .iter()
            .map(|r| {
                let values: Map<String, Value> =
                    r.values.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
                let approx: Map<String, Value> = r.approx.iter().map(|(k, a)| (k.clone(), a.json())).collect();
                json!({
                    "id": r.id,
                    "status": r.status.as_str(),
                    "details": r.details,
                    "values": values,
                    "approx": approx,
                })
            })
            .collect();
        let points: Vec<Value> = self
            .points
            .iter()
            .map(|p| {
                let f = p.csv_fields();
                let obj: Map<String, Value> =
                    CSV_HEADER.iter().zip(f).map(|(k, v)| (k.to_string(), Value::String(v))).collect();
                Value::Object(obj)
            })
            .collect();
        json!({
            "schema": SCHEMA_ID,
            "tool": { "name": "curve-atlas", "version": env!("CARGO_PKG_VERSION") },
            "timestamp": timestamp,
            "command": self.command,
            "summary": {
                "pass": self.count(Status::Pass).to_string(),
                "fail": self.count(Status::Fail).to_string(),
                "skip": self.count(Status::Skip).to_string(),
            },
            "records": records,
            "points": points,
        })
    }

    /// The point table when there is one, otherwise `id, status, details`.
    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        if self.points.is_empty() {
            w.write_record(["id", "status", "details"])?;
            for r in &self.records {
                w.write_record([r.id.as_str(), r.status.as_str(), r.details.as_str()])?;
            }
        } else {
            w.write_record(CSV_HEADER)?;
            for p in &self.points {
                w.write_record(p.csv_fields())?;
            }
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("demo");
        r.records.push(Record::new("a", Status::Pass, "fine").value("n", 3));
        r.records.push(Record::new("b", Status::Fail, "broken, badly"));
        r
    }

    #[test]
    fn counts_and_exit_status() {
        let r = sample();
        assert_eq!((r.count(Status::Pass), r.count(Status::Fail)), (1, 1));
        assert!(r.failed());
    }

    #[test]
    fn json_numbers_are_strings() {
        let v = sample().to_json("t");
        assert_eq!(v["summary"]["pass"], "1");
        assert_eq!(v["records"][0]["values"]["n"], "3");
        assert_eq!(v["schema"], SCHEMA_ID);
    }

    #[test]
    fn csv_quotes_commas() {
        let csv = sample().to_csv().unwrap();
        assert_eq!(csv, "id,status,details\na,pass,fine\nb,fail,\"broken, badly\"\n");
    }

    #[test]
    fn approx_strings() {
        let x = FixedReal::from_int(2, 16);
        let a = Approx::of(&x);
        assert_eq!((a.value.as_str(), a.radius.as_str(), a.bound.as_str()), ("2.00000", "0", "2.0e0"));
    }
}
