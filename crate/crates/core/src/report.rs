//! Output records and their table, JSON-lines and CSV renderings.

use std::fmt::Display;
use std::io::{self, Write};
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use std::collections::BTreeMap;

use crate::classify::{Classification, GaloisClass};
use crate::galois_verify::{OrderSpectrum, SampleReport, Verdict};
use crate::error::{Error, Result};

/// Serializes any `Display` value as a JSON string.
pub fn serialize_display<T: Display, S: Serializer>(value: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(value)
}

/// Serializes `Some(v)` through `Display` and `None` as null.
pub fn serialize_option_display<T: Display, S: Serializer>(
    value: &Option<T>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match value {
        Some(v) => s.collect_str(v),
        None => s.serialize_none(),
    }
}

/// Writes an integer of any size as a bare JSON number.
pub fn serialize_number<S: Serializer>(value: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    RawValue::from_string(value.to_string())
        .map_err(serde::ser::Error::custom)?
        .serialize(s)
}

pub fn serialize_option_number<S: Serializer>(
    value: &Option<BigInt>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match value {
        Some(v) => serialize_number(v, s),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Table,
    Jsonl,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(Format::Table),
            "jsonl" => Ok(Format::Jsonl),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Config(format!(
                "unknown format {s:?} (expected table, jsonl or csv)"
            ))),
        }
    }
}

/// A flat output row.
pub trait Record: Serialize {
    fn headers() -> &'static [&'static str];
    /// One cell per header; empty for absent values.
    fn cells(&self) -> Vec<String>;
}

fn opt<T: Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

pub const CLASSIFICATION_FIELDS: [&str; 12] = [
    "p",
    "a",
    "b",
    "delta",
    "disc_f",
    "irreducible",
    "case",
    "galois",
    "galois_order",
    "monogenic",
    "field_discriminant",
    "reason",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationRecord {
    pub p: u64,
    #[serde(serialize_with = "serialize_number")]
    pub a: BigInt,
    #[serde(serialize_with = "serialize_number")]
    pub b: BigInt,
    #[serde(serialize_with = "serialize_number")]
    pub delta: BigInt,
    #[serde(serialize_with = "serialize_number")]
    pub disc_f: BigInt,
    pub irreducible: bool,
    pub case: Option<String>,
    pub galois: Option<String>,
    pub galois_order: Option<u128>,
    pub monogenic: Option<bool>,
    #[serde(serialize_with = "serialize_option_number")]
    pub field_discriminant: Option<BigInt>,
    pub reason: Vec<String>,
}

impl From<&Classification> for ClassificationRecord {
    fn from(c: &Classification) -> Self {
        ClassificationRecord {
            p: c.family.p(),
            a: c.family.a().clone(),
            b: c.family.b().clone(),
            delta: c.delta.clone(),
            disc_f: c.disc_f.clone(),
            irreducible: c.irreducible,
            case: c.case.as_ref().map(|l| l.kind.identifier().to_string()),
            galois: c.galois.map(|g| g.to_string()),
            galois_order: c.galois.map(|g| g.order()),
            monogenic: c.monogenic,
            field_discriminant: c.field_discriminant.clone(),
            reason: c.reason.iter().map(|r| r.to_string()).collect(),
        }
    }
}

impl Record for ClassificationRecord {
    fn headers() -> &'static [&'static str] {
        &CLASSIFICATION_FIELDS
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.p.to_string(),
            self.a.to_string(),
            self.b.to_string(),
            self.delta.to_string(),
            self.disc_f.to_string(),
            self.irreducible.to_string(),
            opt(&self.case),
            opt(&self.galois),
            opt(&self.galois_order),
            opt(&self.monogenic),
            opt(&self.field_discriminant),
            self.reason.join("; "),
        ]
    }
}

pub const SAMPLE_FIELDS: [&str; 13] = [
    "p",
    "a",
    "b",
    "claim",
    "claim_order",
    "primes_used",
    "largest_prime",
    "split_count",
    "split_fraction",
    "expected_split_fraction",
    "observed_orders",
    "claim_orders",
    "verdict",
];

/// A Frobenius sample judged against one claimed Galois class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleRecord {
    pub p: u64,
    #[serde(serialize_with = "serialize_number")]
    pub a: BigInt,
    #[serde(serialize_with = "serialize_number")]
    pub b: BigInt,
    #[serde(serialize_with = "serialize_display")]
    pub claim: GaloisClass,
    pub claim_order: u128,
    pub primes_used: usize,
    pub largest_prime: u64,
    pub split_count: usize,
    pub split_fraction: f64,
    pub expected_split_fraction: f64,
    /// Frobenius order -> number of primes.
    pub observed_orders: BTreeMap<u64, usize>,
    /// Element orders of the claimed group.
    pub claim_orders: Vec<u64>,
    pub verdict: Verdict,
}

impl SampleRecord {
    pub fn new(report: &SampleReport, claim: GaloisClass, spectrum: &OrderSpectrum, verdict: Verdict) -> Self {
        SampleRecord {
            p: report.family.p(),
            a: report.family.a().clone(),
            b: report.family.b().clone(),
            claim,
            claim_order: claim.order(),
            primes_used: report.primes_used,
            largest_prime: report.largest_prime,
            split_count: report.split_count,
            split_fraction: report.split_fraction,
            expected_split_fraction: 1.0 / claim.order() as f64,
            observed_orders: report.observed_orders.clone(),
            claim_orders: spectrum.orders.iter().copied().collect(),
            verdict,
        }
    }
}

fn join<T: Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

impl Record for SampleRecord {
    fn headers() -> &'static [&'static str] {
        &SAMPLE_FIELDS
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.p.to_string(),
            self.a.to_string(),
            self.b.to_string(),
            self.claim.to_string(),
            self.claim_order.to_string(),
            self.primes_used.to_string(),
            self.largest_prime.to_string(),
            self.split_count.to_string(),
            format!("{:.6}", self.split_fraction),
            format!("{:.6}", self.expected_split_fraction),
            join(self.observed_orders.iter().map(|(o, n)| format!("{o}:{n}"))),
            join(&self.claim_orders),
            self.verdict.to_string(),
        ]
    }
}

/// Streams records in one of the output formats. Table output is buffered so
/// that columns can be aligned; the other formats are written row by row.
pub struct Emitter<W: Write> {
    headers: &'static [&'static str],
    sink: Sink<W>,
}

enum Sink<W: Write> {
    Jsonl(W),
    Csv(csv::Writer<W>, bool),
    Table(W, Vec<Vec<String>>),
}

impl<W: Write> Emitter<W> {
    pub fn new<R: Record>(format: Format, out: W) -> Emitter<W> {
        let sink = match format {
            Format::Jsonl => Sink::Jsonl(out),
            Format::Csv => Sink::Csv(csv::Writer::from_writer(out), false),
            Format::Table => Sink::Table(out, Vec::new()),
        };
        Emitter {
            headers: R::headers(),
            sink,
        }
    }

    pub fn push<R: Record>(&mut self, record: &R) -> io::Result<()> {
        match &mut self.sink {
            Sink::Jsonl(out) => {
                serde_json::to_writer(&mut *out, record)?;
                out.write_all(b"\n")
            }
            Sink::Csv(w, started) => {
                if !*started {
                    w.write_record(self.headers)?;
                    *started = true;
                }
                w.write_record(record.cells())?;
                Ok(())
            }
            Sink::Table(_, rows) => {
                rows.push(record.cells());
                Ok(())
            }
        }
    }

    pub fn finish(self) -> io::Result<()> {
        match self.sink {
            Sink::Jsonl(mut out) => out.flush(),
            Sink::Csv(mut w, started) => {
                if !started {
                    w.write_record(self.headers)?;
                }
                w.flush()
            }
            Sink::Table(mut out, rows) => write_table(&mut out, self.headers, &rows),
        }
    }
}

fn write_table<W: Write>(out: &mut W, headers: &[&str], rows: &[Vec<String>]) -> io::Result<()> {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    let shown: Vec<Vec<String>> = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|c| if c.is_empty() { "-".to_string() } else { c.clone() })
                .collect()
        })
        .collect();
    for row in &shown {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let last = cells.len() - 1;
        cells
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if i == last {
                    c.to_string()
                } else {
                    let pad = widths[i] - c.chars().count();
                    format!("{c}{}", " ".repeat(pad))
                }
            })
            .collect::<Vec<_>>()
            .join("  ")
    };
    writeln!(out, "{}", line(headers.to_vec()))?;
    for row in &shown {
        writeln!(out, "{}", line(row.iter().map(String::as_str).collect()))?;
    }
    out.flush()
}

/// Renders records into a string; convenient for tests and the FFI layer.
pub fn render<R: Record>(records: &[R], format: Format) -> String {
    let buf = SharedBuffer::default();
    let mut emitter = Emitter::new::<R>(format, buf.clone());
    for r in records {
        emitter.push(r).expect("in-memory write");
    }
    emitter.finish().expect("in-memory write");
    buf.into_string()
}

/// A cloneable in-memory writer.
#[derive(Debug, Clone, Default)]
pub struct SharedBuffer(std::rc::Rc<std::cell::RefCell<Vec<u8>>>);

impl SharedBuffer {
    pub fn into_string(self) -> String {
        String::from_utf8(self.0.borrow().clone()).expect("utf-8 output")
    }
}

impl Write for SharedBuffer {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        self.0.borrow_mut().extend_from_slice(buf);
        Ok(buf.len())
    }

    fn flush(&mut self) -> io::Result<()> {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{classify, TrinomialFamily};
    use crate::config::Config;

    fn record(p: u64, a: i64, b: i64) -> ClassificationRecord {
        let fam = TrinomialFamily::from_i64(p, a, b).unwrap();
        ClassificationRecord::from(&classify(&fam, &Config::default()).unwrap())
    }

    #[test]
    fn jsonl_has_exact_field_order_and_bare_numbers() {
        let out = render(&[record(5, 3, 1)], Format::Jsonl);
        let line = out.lines().next().unwrap();
        let value: serde_json::Map<String, serde_json::Value> = serde_json::from_str(line).unwrap();
        assert_eq!(value.len(), CLASSIFICATION_FIELDS.len());
        let mut last = 0;
        for field in CLASSIFICATION_FIELDS {
            let pos = line.find(&format!("\"{field}\":")).unwrap();
            assert!(pos >= last, "{field} out of order");
            last = pos;
        }
        assert!(line.contains("\"disc_f\":30517578125,"));
        assert!(line.contains("\"galois\":\"C5⋊C4\""));
        assert!(line.contains("\"monogenic\":true"));
    }

    #[test]
    fn large_integers_round_trip() {
        #[derive(serde::Deserialize)]
        struct Back<'a> {
            #[serde(borrow)]
            disc_f: &'a RawValue,
        }
        let rec = record(13, 3, -1);
        let out = render(&[rec.clone()], Format::Jsonl);
        let back: Back = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(back.disc_f.get().parse::<BigInt>().unwrap(), rec.disc_f);
        assert!(rec.disc_f.to_string().len() > 40);
    }

    #[test]
    fn csv_header_and_null_cells() {
        let out = render(&[record(3, 2, 1)], Format::Csv);
        let mut lines = out.lines();
        assert_eq!(lines.next().unwrap(), CLASSIFICATION_FIELDS.join(","));
        let row = lines.next().unwrap();
        assert!(row.starts_with("3,2,1,0,0,false,"));
        assert_eq!(render::<ClassificationRecord>(&[], Format::Csv).trim(), CLASSIFICATION_FIELDS.join(","));
    }

    #[test]
    fn table_is_aligned() {
        let out = render(&[record(5, 3, 1), record(3, 7, 1)], Format::Table);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 3);
        let col = lines[0].find("b ").unwrap();
        assert_eq!(&lines[1][col..col + 1], "1");
        assert!(out.contains("a+2 = 9 not squarefree"));
    }

    #[test]
    fn format_parsing() {
        assert_eq!("csv".parse::<Format>().unwrap(), Format::Csv);
        assert!("xml".parse::<Format>().is_err());
    }
}
