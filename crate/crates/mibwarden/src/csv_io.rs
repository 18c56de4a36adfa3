//! Dataset CSV files.
//!
//! A header row names the attributes; a final column named `class` marks a
//! labeled file. Every data row carries one value per attribute (plus a
//! label when labeled). Empty cells are rejected rather than imputed.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use mibwarden_core::{CoreError, Dataset, MibRecord, TrafficClass};

use crate::error::{Error, Result};

pub const CLASS_COLUMN: &str = "class";

/// Reads a dataset. `origin` names the source in error messages and
/// becomes the dataset's provenance.
pub fn load_csv<R: Read>(source: R, origin: &str) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(source);
    let mut rows = reader.records();
    let header = match rows.next() {
        None => return Err(Error::format(origin, 1, "empty file")),
        Some(row) => row.map_err(|e| csv_error(origin, e))?,
    };
    let mut names: Vec<String> = header.iter().map(|s| s.trim().to_string()).collect();
    let labeled = names.last().is_some_and(|n| n == CLASS_COLUMN);
    if labeled {
        names.pop();
    }
    if names.iter().any(String::is_empty) {
        return Err(Error::format(origin, 1, "empty attribute name in header"));
    }
    if let Some(dup) = names.iter().enumerate().find(|(i, n)| names[..*i].contains(n)) {
        return Err(Error::format(origin, 1, format!("duplicate attribute `{}`", dup.1)));
    }
    let width = header.len();

    let mut records = Vec::new();
    for row in rows {
        let row = row.map_err(|e| csv_error(origin, e))?;
        let line = row.position().map_or(records.len() + 2, |p| p.line() as usize);
        if row.len() == 1 && row[0].trim().is_empty() {
            continue;
        }
        if row.len() != width {
            return Err(Error::format(origin, line, format!("expected {width} fields, found {}", row.len())));
        }
        let mut values = Vec::with_capacity(names.len());
        for (cell, name) in row.iter().zip(&names) {
            let cell = cell.trim();
            if cell.is_empty() {
                return Err(Error::format(origin, line, format!("missing value in column {name}")));
            }
            let v: f64 = cell
                .parse()
                .map_err(|_| Error::format(origin, line, format!("unparseable numeric `{cell}` in column {name}")))?;
            if !v.is_finite() || v < 0.0 {
                return Err(Error::format(
                    origin,
                    line,
                    format!("value `{cell}` in column {name} must be finite and >= 0"),
                ));
            }
            values.push(v);
        }
        let label = if labeled {
            let raw = row[width - 1].trim();
            let class = TrafficClass::parse_loose(raw)
                .ok_or_else(|| Error::format(origin, line, format!("unknown class label `{raw}`")))?;
            Some(class)
        } else {
            None
        };
        records.push(MibRecord::new(values, label));
    }
    Dataset::new(names, records, origin).map_err(|e| match e {
        CoreError::DuplicateAttribute { .. } | CoreError::ArityMismatch { .. } | CoreError::InvalidValue { .. } => {
            Error::format(origin, 1, e.to_string())
        }
        other => other.into(),
    })
}

pub fn load_csv_path(path: &Path) -> Result<Dataset> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    load_csv(std::io::BufReader::new(file), &path.display().to_string())
}

fn csv_error(origin: &str, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    Error::format(origin, line, e.to_string())
}

/// Writes `ds` in the format [`load_csv`] reads. The class column is
/// written when every record is labeled.
pub fn write_csv<W: Write>(ds: &Dataset, sink: W) -> Result<()> {
    let labeled = !ds.is_empty() && ds.records().iter().all(|r| r.label.is_some());
    let mut w = csv::Writer::from_writer(sink);
    let mut header = ds.attribute_names();
    if labeled {
        header.push(CLASS_COLUMN.to_string());
    }
    w.write_record(&header).map_err(write_error)?;
    for r in ds.records() {
        let mut row: Vec<String> = r.values.iter().map(|v| v.to_string()).collect();
        if labeled {
            row.push(r.label.expect("checked above").name().to_string());
        }
        w.write_record(&row).map_err(write_error)?;
    }
    w.flush().map_err(|e| Error::Internal(e.to_string()))
}

pub fn write_csv_path(ds: &Dataset, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv(ds, std::io::BufWriter::new(file))
}

fn write_error(e: csv::Error) -> Error {
    Error::Internal(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str) -> Result<Dataset> {
        load_csv(text.as_bytes(), "mem")
    }

    #[test]
    fn minimal_labeled_file() {
        let ds = load("a,b,class\n1.0,2.0,Normal\n").unwrap();
        assert_eq!(ds.len(), 1);
        assert_eq!(ds.records()[0].label, Some(TrafficClass::Normal));
        assert_eq!(ds.attribute_names(), ["a", "b"]);
    }

    #[test]
    fn unlabeled_file_and_aliases() {
        let ds = load("a,b\n1,2\n3,4\n").unwrap();
        assert!(ds.records().iter().all(|r| r.label.is_none()));
        let ds = load("a,class\n1,TCP-SYN\n2,udp_flood\n").unwrap();
        assert_eq!(ds.labels().unwrap(), [TrafficClass::TcpSyn, TrafficClass::UdpFlood]);
    }

    #[test]
    fn errors_name_line_and_column() {
        let e = load("a,b,class\n1.0,x,Normal\n").unwrap_err().to_string();
        assert!(e.contains(":2:") && e.contains("column b"), "{e}");
        let e = load("a,b,class\n1,2,Normal\n1,2\n").unwrap_err().to_string();
        assert!(e.contains(":3:") && e.contains("expected 3 fields"), "{e}");
        let e = load("a,class\n1,Teardrop\n").unwrap_err().to_string();
        assert!(e.contains("unknown class label"), "{e}");
        let e = load("a,b,class\n1,,Normal\n").unwrap_err().to_string();
        assert!(e.contains("missing value in column b"), "{e}");
        assert!(load("").unwrap_err().to_string().contains("empty file"));
        assert!(load("a,b\n-1,2\n").is_err());
        assert!(load("a,a\n1,2\n").is_err());
    }

    #[test]
    fn error_codes_are_data_format() {
        assert_eq!(load("a,b,class\n1.0,x,Normal\n").unwrap_err().exit_code(), 3);
    }

    #[test]
    fn round_trip() {
        let ds = load("x,y,class\n0.1,1e-7,Normal\n12345.678,0,BruteForce\n").unwrap();
        let mut buf = Vec::new();
        write_csv(&ds, &mut buf).unwrap();
        assert_eq!(load_csv(buf.as_slice(), "mem").unwrap(), ds);
    }
}
