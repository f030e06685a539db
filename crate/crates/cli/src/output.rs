//! Tables of exact values rendered as CSV or JSON records.

use std::io::Write;

use anyhow::Result;
use fkradial::Rational;
use num_bigint::{BigInt, Sign};
use num_traits::{Pow, Signed, Zero};
use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(BigInt),
    Rat(Rational),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Rat(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(v) => v.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Bool(v) => Value::Bool(*v),
            other => Value::String(other.render()),
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(BigInt::from(v))
    }
}

impl From<BigInt> for Cell {
    fn from(v: BigInt) -> Self {
        Cell::Int(v)
    }
}

impl From<&BigInt> for Cell {
    fn from(v: &BigInt) -> Self {
        Cell::Int(v.clone())
    }
}

impl From<Rational> for Cell {
    fn from(v: Rational) -> Self {
        Cell::Rat(v)
    }
}

impl From<&Rational> for Cell {
    fn from(v: &Rational) -> Self {
        Cell::Rat(v.clone())
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl OutputTable {
    pub fn new<I, S>(columns: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        OutputTable {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn write<W: Write>(&self, out: W, format: Format) -> Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }

    fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.flush()?;
        Ok(())
    }

    fn write_json<W: Write>(&self, mut out: W) -> Result<()> {
        let records: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut m = Map::new();
                for (c, v) in self.columns.iter().zip(row) {
                    m.insert(c.clone(), v.json());
                }
                Value::Object(m)
            })
            .collect();
        serde_json::to_writer_pretty(&mut out, &Value::Array(records))?;
        writeln!(out)?;
        Ok(())
    }
}

fn place(digits: BigInt, negative: bool, places: usize) -> String {
    let s = digits.to_string();
    let body = if places == 0 {
        s
    } else {
        let padded = format!("{s:0>width$}", width = places + 1);
        let (int, frac) = padded.split_at(padded.len() - places);
        format!("{int}.{frac}")
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// `r` to `places` decimals, rounding half away from zero.
pub fn decimal(r: &Rational, places: usize) -> String {
    let scale = Pow::pow(BigInt::from(10), places as u32);
    let scaled = r.abs() * Rational::from_integer(scale);
    let rounded = (scaled + Rational::new(BigInt::from(1), BigInt::from(2)))
        .floor()
        .to_integer();
    let negative = r.is_negative() && !rounded.is_zero();
    place(rounded, negative, places)
}

/// `sqrt(r)` for `r >= 0`, truncated to `places` decimals.
pub fn sqrt_decimal(r: &Rational, places: usize) -> String {
    debug_assert!(r.numer().sign() != Sign::Minus);
    let scale = Pow::pow(BigInt::from(10), 2 * places as u32);
    let radicand = (r.numer() * scale) / r.denom();
    place(radicand.sqrt(), false, places)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn decimals() {
        assert_eq!(decimal(&q(1, 3), 4), "0.3333");
        assert_eq!(decimal(&q(2, 3), 4), "0.6667");
        assert_eq!(decimal(&q(-1, 8), 2), "-0.13");
        assert_eq!(decimal(&q(-1, 1000), 2), "0.00");
        assert_eq!(decimal(&q(7, 2), 0), "4");
        assert_eq!(decimal(&q(1234, 1), 1), "1234.0");
    }

    #[test]
    fn square_roots() {
        assert_eq!(sqrt_decimal(&q(2, 1), 5), "1.41421");
        assert_eq!(sqrt_decimal(&q(1, 4), 2), "0.50");
        assert_eq!(sqrt_decimal(&q(0, 1), 3), "0.000");
    }

    #[test]
    fn csv_and_json() {
        let mut t = OutputTable::new(["n", "v", "ok"]);
        t.push(vec![2usize.into(), q(-1, 4).into(), true.into()]);
        let mut buf = Vec::new();
        t.write(&mut buf, Format::Csv).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "n,v,ok\n2,-1/4,true\n");
        let mut buf = Vec::new();
        t.write(&mut buf, Format::Json).unwrap();
        let v: Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v[0]["v"], "-1/4");
        assert_eq!(v[0]["ok"], true);
        let keys: Vec<_> = v[0].as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, ["n", "v", "ok"]);
    }
}
