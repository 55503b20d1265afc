//! Readers for the toolkit's plain-text input formats.
//!
//! | file          | header                       |
//! |---------------|------------------------------|
//! | life table    | `age,qx`                     |
//! | cash flows    | `period,amount`              |
//! | schedule      | `period,premium,benefit`     |
//! | samples       | none, one number per line    |
//!
//! Every error names the line of the first violation.

use std::io::{BufRead, BufReader, Read};

use crate::error::{data, Error, Result};
use crate::life_table::LifeTable;
use crate::settlement::{CashflowSeries, PolicySchedule};

fn records<R: Read>(reader: R, expected: &[&str]) -> Result<Vec<(u64, Vec<String>)>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| data(format!("line 1: {e}")))?
        .clone();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(data("empty file: expected a header line"));
    }
    let found: Vec<&str> = headers.iter().collect();
    if found != expected {
        return Err(data(format!(
            "line 1: expected header `{}`, found `{}`",
            expected.join(","),
            found.join(",")
        )));
    }
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| match e.position() {
            Some(p) => data(format!("line {}: {e}", p.line())),
            None => data(e.to_string()),
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        out.push((line, rec.iter().map(str::to_owned).collect()));
    }
    if out.is_empty() {
        return Err(data("no data rows after header"));
    }
    Ok(out)
}

fn parse_f64(line: u64, column: &str, s: &str) -> Result<f64> {
    let v: f64 = s.parse().map_err(|_| {
        data(format!(
            "line {line}, column `{column}`: `{s}` is not a number"
        ))
    })?;
    if !v.is_finite() {
        return Err(data(format!(
            "line {line}, column `{column}`: value must be finite"
        )));
    }
    Ok(v)
}

fn parse_u32(line: u64, column: &str, s: &str) -> Result<u32> {
    s.parse().map_err(|_| {
        data(format!(
            "line {line}, column `{column}`: `{s}` is not a non-negative integer"
        ))
    })
}

fn at_line(line: u64, e: Error) -> Error {
    match e {
        Error::Data(msg) => data(format!("line {line}: {msg}")),
        other => other,
    }
}

/// Reads and validates a life table.
pub fn read_life_table<R: Read>(reader: R) -> Result<LifeTable> {
    let rows = records(reader, &["age", "qx"])?;
    let mut entries = Vec::with_capacity(rows.len());
    for (line, fields) in &rows {
        let age = parse_u32(*line, "age", &fields[0])?;
        let q = parse_f64(*line, "qx", &fields[1])?;
        if let Some(&(prev, _)) = entries.last() {
            if age != prev + 1 {
                return Err(data(format!(
                    "line {line}: ages must be consecutive ascending integers (after {prev} found {age})"
                )));
            }
        }
        if !(0.0..=1.0).contains(&q) {
            return Err(data(format!("line {line}: qx={q} outside [0, 1]")));
        }
        entries.push((age, q));
    }
    let last_line = rows.last().map_or(0, |r| r.0);
    LifeTable::new(&entries).map_err(|e| at_line(last_line, e))
}

/// Reads a cash-flow series; periods must run 0, 1, 2, ...
pub fn read_cashflows<R: Read>(reader: R) -> Result<CashflowSeries> {
    let rows = records(reader, &["period", "amount"])?;
    let mut flows = Vec::with_capacity(rows.len());
    for (k, (line, fields)) in rows.iter().enumerate() {
        let period = parse_u32(*line, "period", &fields[0])?;
        if period as usize != k {
            return Err(data(format!(
                "line {line}: periods must start at 0 and be consecutive (expected {k}, found {period})"
            )));
        }
        flows.push(parse_f64(*line, "amount", &fields[1])?);
    }
    Ok(CashflowSeries::new(flows))
}

/// Reads a premium/benefit schedule; periods must run 1, 2, 3, ...
pub fn read_schedule<R: Read>(reader: R, rate: f64) -> Result<PolicySchedule> {
    let rows = records(reader, &["period", "premium", "benefit"])?;
    let mut premiums = Vec::with_capacity(rows.len());
    let mut benefits = Vec::with_capacity(rows.len());
    for (k, (line, fields)) in rows.iter().enumerate() {
        let period = parse_u32(*line, "period", &fields[0])?;
        if period as usize != k + 1 {
            return Err(data(format!(
                "line {line}: periods must start at 1 and be consecutive (expected {}, found {period})",
                k + 1
            )));
        }
        premiums.push(parse_f64(*line, "premium", &fields[1])?);
        benefits.push(parse_f64(*line, "benefit", &fields[2])?);
    }
    PolicySchedule::new(premiums, benefits, rate)
}

/// Reads one real number per line; blank lines are skipped.
pub fn read_samples<R: Read>(reader: R) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (k, line) in BufReader::new(reader).lines().enumerate() {
        let line = line.map_err(|e| data(format!("line {}: {e}", k + 1)))?;
        let s = line.trim();
        if s.is_empty() {
            continue;
        }
        out.push(parse_f64(k as u64 + 1, "sample", s)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_round_trip_and_errors() {
        let t = read_life_table("age,qx\n60,0.5\n61,1\n".as_bytes()).unwrap();
        assert_eq!(t.omega(), 61);

        let err = read_life_table("age,qx\n60,0.5\n61,0.9\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("terminal qx"), "{err}");
        assert!(err.to_string().contains("line 3"), "{err}");

        let err = read_life_table("age,qx\n60,0.5\n62,1\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");

        let err = read_life_table("age,qx\n60,1.5\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");

        assert!(read_life_table("".as_bytes()).is_err());
        assert!(read_life_table("age,qx\n".as_bytes()).is_err());
        assert!(read_life_table("x,qx\n60,1\n".as_bytes()).is_err());
        assert!(read_life_table("age,qx\n60,abc\n".as_bytes()).is_err());
    }

    #[test]
    fn cashflows_and_schedule() {
        let cf = read_cashflows("period,amount\n0,-100\n1,110\n".as_bytes()).unwrap();
        assert_eq!(cf.flows(), &[-100.0, 110.0]);
        assert!(read_cashflows("period,amount\n1,-100\n".as_bytes()).is_err());

        let s = read_schedule(
            "period,premium,benefit\n1,10,100\n2,10,100\n".as_bytes(),
            0.05,
        )
        .unwrap();
        assert_eq!(s.len(), 2);
        assert!(read_schedule("period,premium,benefit\n0,10,100\n".as_bytes(), 0.05).is_err());
    }

    #[test]
    fn samples_skip_blank_lines() {
        let v = read_samples("1.5\n\n  -2\n".as_bytes()).unwrap();
        assert_eq!(v, vec![1.5, -2.0]);
        assert!(read_samples("1\nfoo\n".as_bytes()).is_err());
    }
}
