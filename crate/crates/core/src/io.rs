//! Matrix file formats.
//!
//! * CSV: `n` lines of `n` comma-separated decimal literals, no header.
//! * JSON: `{"n": <int>, "rows": [[...], ...]}`.
//!
//! Negative or non-finite entries are rejected at load time.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::NonnegMatrix;

pub fn parse_csv(text: &str) -> Result<NonnegMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        let row = record
            .iter()
            .enumerate()
            .map(|(c, field)| {
                field.parse::<f64>().map_err(|_| {
                    Error::Parse(format!("row {}, column {}: {field:?}", r + 1, c + 1))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    NonnegMatrix::from_rows(&rows)
}

pub fn parse_json(text: &str) -> Result<NonnegMatrix> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// Loads a matrix, choosing the format from the extension (`.json`) or,
/// failing that, from the first non-blank character.
pub fn load_matrix(path: impl AsRef<Path>) -> Result<NonnegMatrix> {
    let path = path.as_ref();
    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let is_json = match path.extension().and_then(|e| e.to_str()) {
        Some(ext) => ext.eq_ignore_ascii_case("json"),
        None => text.trim_start().starts_with('{'),
    };
    if is_json {
        parse_json(&text)
    } else {
        parse_csv(&text)
    }
}

pub fn to_csv(m: &NonnegMatrix) -> String {
    let mut out = String::new();
    for row in m.rows() {
        let line: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn to_json(m: &NonnegMatrix) -> String {
    serde_json::to_string(m).expect("matrix serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let m = NonnegMatrix::from_rows(&[[1.0, 0.25, 0.0], [3.5, 0.0, 1e-3], [0.0, 2.0, 7.0]])
            .unwrap();
        assert_eq!(parse_csv(&to_csv(&m)).unwrap(), m);
    }

    #[test]
    fn csv_tolerates_spaces_and_comments() {
        let m = parse_csv("# example\n1, 0\n 0.5 ,2\n").unwrap();
        assert_eq!(
            m,
            NonnegMatrix::from_rows(&[[1.0, 0.0], [0.5, 2.0]]).unwrap()
        );
    }

    #[test]
    fn csv_errors() {
        assert!(matches!(
            parse_csv("1,-2\n0,1\n"),
            Err(Error::InvalidEntry { .. })
        ));
        assert!(matches!(parse_csv("1,x\n0,1\n"), Err(Error::Parse(_))));
        assert!(parse_csv("1,2,3\n0,1,2\n").is_err());
        assert!(parse_csv("1,inf\n0,1\n").is_err());
        assert!(parse_csv("").is_err());
    }

    #[test]
    fn json_round_trip() {
        let m = NonnegMatrix::from_rows(&[[0.0, 1.0 / 3.0], [1.0 / 3.0, 0.0]]).unwrap();
        assert_eq!(parse_json(&to_json(&m)).unwrap(), m);
    }

    #[test]
    fn load_by_extension() {
        let dir = tempfile::tempdir().unwrap();
        let m = NonnegMatrix::from_rows(&[[1.0, 0.0], [0.5, 2.0]]).unwrap();
        let j = dir.path().join("a.json");
        let c = dir.path().join("a.csv");
        fs::write(&j, to_json(&m)).unwrap();
        fs::write(&c, to_csv(&m)).unwrap();
        assert_eq!(load_matrix(&j).unwrap(), m);
        assert_eq!(load_matrix(&c).unwrap(), m);
        assert!(matches!(
            load_matrix(dir.path().join("missing.csv")),
            Err(Error::Io(_))
        ));
    }
}
