//! CSV input and output.
//!
//! Dialect: comma separated, `.` decimal point, UTF-8, LF line endings.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::stats::GroupedValues;
use crate::error::{Error, Result};
use crate::estimators::ExtremeEstimates;
use crate::linalg::{Matrix, ObservationMatrix};

/// Coverage matrix with one row per sample.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageTable {
    pub sample_ids: Vec<String>,
    pub position_labels: Vec<String>,
    pub values: ObservationMatrix,
}

fn parse_number(text: &str, row: usize, col: usize) -> Result<f64> {
    let t = text.trim();
    match t.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(_) => Err(Error::Parse {
            row,
            col,
            reason: format!("non-finite value {t:?}"),
        }),
        Err(_) => Err(Error::Parse {
            row,
            col,
            reason: format!("cannot parse {t:?} as a number"),
        }),
    }
}

fn csv_reader<R: Read>(reader: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader)
}

/// Reads a coverage table: header row, then `sampleId,value,value,…` rows.
///
/// Rows and columns in errors are 1-based file coordinates (the header is row 1).
pub fn read_coverage<R: Read>(reader: R) -> Result<CoverageTable> {
    let mut rdr = csv_reader(reader);
    let header = rdr.headers()?.clone();
    if header.len() < 2 {
        return Err(Error::DimensionMismatch(
            "header needs a sample id column and at least one position".into(),
        ));
    }
    let p = header.len() - 1;
    let position_labels = header.iter().skip(1).map(str::to_owned).collect();

    let mut sample_ids = Vec::new();
    let mut seen = HashSet::new();
    let mut data = Vec::new();
    for (k, record) in rdr.records().enumerate() {
        let record = record?;
        let row = k + 2;
        if record.len() != header.len() {
            return Err(Error::DimensionMismatch(format!(
                "row {row} has {} fields, header has {}",
                record.len(),
                header.len()
            )));
        }
        let id = record[0].trim().to_owned();
        if !seen.insert(id.clone()) {
            return Err(Error::DuplicateSampleId(id));
        }
        for (j, field) in record.iter().enumerate().skip(1) {
            data.push(parse_number(field, row, j + 1)?);
        }
        sample_ids.push(id);
    }
    let values = ObservationMatrix::new(Matrix::new(sample_ids.len(), p, data)?)?;
    Ok(CoverageTable {
        sample_ids,
        position_labels,
        values,
    })
}

pub fn load_coverage_csv(path: impl AsRef<Path>) -> Result<CoverageTable> {
    read_coverage(BufReader::new(File::open(path)?))
}

/// Formats with `digits` significant digits, `%g` style.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let m = trim_zeros(mantissa);
        return format!("{m}e{exp}");
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_owned()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Writes `sampleId,thetaR,thetaL,range,method` rows with 12 significant
/// digits. With `include_ptr`, a trailing `ptr = exp(range)` column is added.
pub fn write_estimates<W: Write>(
    mut out: W,
    estimates: &ExtremeEstimates,
    sample_ids: &[String],
    include_ptr: bool,
) -> Result<()> {
    if sample_ids.len() != estimates.n() {
        return Err(Error::LengthMismatch {
            left: sample_ids.len(),
            right: estimates.n(),
        });
    }
    write!(out, "sampleId,thetaR,thetaL,range,method")?;
    if include_ptr {
        write!(out, ",ptr")?;
    }
    writeln!(out)?;
    for (i, id) in sample_ids.iter().enumerate() {
        write!(
            out,
            "{},{},{},{},{}",
            id,
            format_significant(estimates.theta_r[i], 12),
            format_significant(estimates.theta_l[i], 12),
            format_significant(estimates.range[i], 12),
            estimates.method
        )?;
        if include_ptr {
            write!(out, ",{}", format_significant(estimates.range[i].exp(), 12))?;
        }
        writeln!(out)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_estimates_csv(
    path: impl AsRef<Path>,
    estimates: &ExtremeEstimates,
    sample_ids: &[String],
    include_ptr: bool,
) -> Result<()> {
    write_estimates(
        BufWriter::new(File::create(path)?),
        estimates,
        sample_ids,
        include_ptr,
    )
}

/// One row of an estimates file.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateRow {
    pub sample_id: String,
    pub theta_r: f64,
    pub theta_l: f64,
    pub range: f64,
    pub method: String,
}

pub fn read_estimates<R: Read>(reader: R) -> Result<Vec<EstimateRow>> {
    let mut rdr = csv_reader(reader);
    let header = rdr.headers()?.clone();
    let expected = ["sampleId", "thetaR", "thetaL", "range", "method"];
    if header.len() < expected.len() || header.iter().zip(expected).any(|(h, e)| h != e) {
        return Err(Error::Parse {
            row: 1,
            col: 1,
            reason: format!("unexpected header {:?}", header.iter().collect::<Vec<_>>()),
        });
    }
    rdr.records()
        .enumerate()
        .map(|(k, rec)| {
            let rec = rec?;
            let row = k + 2;
            if rec.len() != header.len() {
                return Err(Error::DimensionMismatch(format!("row {row} has {} fields", rec.len())));
            }
            Ok(EstimateRow {
                sample_id: rec[0].to_owned(),
                theta_r: parse_number(&rec[1], row, 2)?,
                theta_l: parse_number(&rec[2], row, 3)?,
                range: parse_number(&rec[3], row, 4)?,
                method: rec[4].to_owned(),
            })
        })
        .collect()
}

pub fn read_estimates_csv(path: impl AsRef<Path>) -> Result<Vec<EstimateRow>> {
    read_estimates(BufReader::new(File::open(path)?))
}

/// Reads `sampleId,group,value` rows into groups ordered by first appearance.
pub fn read_grouped<R: Read>(reader: R) -> Result<GroupedValues> {
    let mut rdr = csv_reader(reader);
    let header = rdr.headers()?.clone();
    let col = |name: &str| {
        header.iter().position(|h| h == name).ok_or_else(|| Error::Parse {
            row: 1,
            col: 1,
            reason: format!("missing column {name:?}"),
        })
    };
    let (gi, vi) = (col("group")?, col("value")?);
    col("sampleId")?;
    let mut groups: Vec<(String, Vec<f64>)> = Vec::new();
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row = k + 2;
        if rec.len() != header.len() {
            return Err(Error::DimensionMismatch(format!("row {row} has {} fields", rec.len())));
        }
        let label = rec[gi].trim();
        let value = parse_number(&rec[vi], row, vi + 1)?;
        match groups.iter_mut().find(|(l, _)| l == label) {
            Some((_, v)) => v.push(value),
            None => groups.push((label.to_owned(), vec![value])),
        }
    }
    Ok(GroupedValues::new(groups))
}

pub fn load_grouped_csv(path: impl AsRef<Path>) -> Result<GroupedValues> {
    read_grouped(BufReader::new(File::open(path)?))
}
