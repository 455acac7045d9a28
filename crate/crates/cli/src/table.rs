//! Tabular output model shared by all commands, with CSV and JSON writers.

use std::io::{self, Write};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::{Map, Number, Value};

/// Significant digits for decimal output.
pub const SIG_DIGITS: usize = 15;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(BigInt),
    Float(f64),
    /// Exact fraction in lowest terms, `den > 0`.
    Rational { num: BigInt, den: BigInt },
    Text(String),
    Missing,
}

impl Cell {
    pub fn int(v: impl Into<BigInt>) -> Self {
        Cell::Int(v.into())
    }

    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Float(v) => Some(*v),
            Cell::Int(v) => v.to_string().parse().ok(),
            Cell::Rational { num, den } => Some(rational_to_f64(num, den)),
            _ => None,
        }
    }

    fn csv_field(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_sig(*v, SIG_DIGITS),
            Cell::Rational { num, den } => rational_decimal(num, den, SIG_DIGITS),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::Number(Number::from_str(&v.to_string()).expect("integer literal")),
            Cell::Float(v) => Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Rational { num, den } => {
                let mut m = Map::new();
                m.insert("num".into(), Value::String(num.to_string()));
                m.insert("den".into(), Value::String(den.to_string()));
                m.insert("decimal".into(), Value::String(rational_decimal(num, den, SIG_DIGITS)));
                Value::Object(m)
            }
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Missing => Value::Null,
        }
    }

    pub fn from_json(v: &Value) -> Result<Self, String> {
        match v {
            Value::Null => Ok(Cell::Missing),
            Value::String(s) => Ok(Cell::Text(s.clone())),
            Value::Number(n) => {
                let lit = n.to_string();
                if lit.contains(['.', 'e', 'E']) {
                    lit.parse().map(Cell::Float).map_err(|e| e.to_string())
                } else {
                    BigInt::from_str(&lit).map(Cell::Int).map_err(|e| e.to_string())
                }
            }
            Value::Object(m) => {
                let field = |k: &str| {
                    m.get(k)
                        .and_then(Value::as_str)
                        .ok_or_else(|| format!("rational cell lacks '{k}'"))
                };
                let num = BigInt::from_str(field("num")?).map_err(|e| e.to_string())?;
                let den = BigInt::from_str(field("den")?).map_err(|e| e.to_string())?;
                Ok(Cell::Rational { num, den })
            }
            other => Err(format!("unexpected cell {other}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Values of a numeric column as `f64`; non-numeric cells become NaN.
    pub fn column_f64(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i].as_f64().unwrap_or(f64::NAN)).collect())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> io::Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv_field))?;
        }
        w.flush()
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert(
            "columns".into(),
            Value::Array(self.columns.iter().cloned().map(Value::String).collect()),
        );
        m.insert(
            "rows".into(),
            Value::Array(
                self.rows
                    .iter()
                    .map(|r| Value::Array(r.iter().map(Cell::to_json).collect()))
                    .collect(),
            ),
        );
        Value::Object(m)
    }

    pub fn from_json(v: &Value) -> Result<Self, String> {
        let columns = v
            .get("columns")
            .and_then(Value::as_array)
            .ok_or("missing 'columns'")?
            .iter()
            .map(|c| c.as_str().map(String::from).ok_or("column names must be strings"))
            .collect::<Result<Vec<_>, _>>()?;
        let rows = v
            .get("rows")
            .and_then(Value::as_array)
            .ok_or("missing 'rows'")?
            .iter()
            .map(|r| {
                let cells = r.as_array().ok_or("rows must be arrays")?;
                if cells.len() != columns.len() {
                    return Err("row width does not match columns".to_string());
                }
                cells.iter().map(Cell::from_json).collect()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Table { columns, rows })
    }
}

/// `%.{digits}g`-style formatting: plain notation for moderate exponents,
/// scientific otherwise, trailing zeros removed.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if exp < -5 || exp >= digits as i32 {
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `num / den` to `digits` significant digits, computed exactly.
pub fn rational_decimal(num: &BigInt, den: &BigInt, digits: usize) -> String {
    if num.is_zero() {
        return "0".into();
    }
    let neg = num.is_negative() != den.is_negative();
    let (n, d) = (num.abs(), den.abs());
    // scale so the integer quotient has exactly `digits` digits
    let ten = BigInt::from(10);
    let mut shift: i64 = digits as i64 - (n.to_string().len() as i64 - d.to_string().len() as i64);
    let quotient = |s: i64| {
        if s >= 0 {
            (&n * ten.pow(s as u32)) / &d
        } else {
            &n / (&d * ten.pow((-s) as u32))
        }
    };
    let mut q = quotient(shift);
    while q.to_string().len() > digits {
        shift -= 1;
        q = quotient(shift);
    }
    while q.to_string().len() < digits {
        shift += 1;
        q = quotient(shift);
    }
    // round half up on the next digit
    let next = quotient(shift + 1) - &q * &ten;
    if next >= BigInt::from(5) {
        q += 1;
        if q.to_string().len() > digits {
            q /= &ten;
            shift -= 1;
        }
    }
    let digits_str = q.to_string();
    let exp = digits as i64 - 1 - shift;
    let body = if exp < -5 || exp >= digits as i64 {
        let mantissa = format!("{}.{}", &digits_str[..1], &digits_str[1..]);
        format!("{}e{exp}", trim_zeros(&mantissa))
    } else if exp >= 0 {
        let int_len = exp as usize + 1;
        let raw = format!("{}.{}", &digits_str[..int_len], &digits_str[int_len..]);
        trim_zeros(&raw).to_string()
    } else {
        let raw = format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits_str);
        trim_zeros(&raw).to_string()
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Nearest `f64` to `num / den`, safe for operands beyond the `f64` range.
pub fn rational_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    rational_decimal(num, den, 20).parse().unwrap_or(f64::NAN)
}
