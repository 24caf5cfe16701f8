use std::path::Path;

use crate::error::{Error, Result};
use crate::svm::TrainingSet;

/// Reads a headerless CSV whose last column is the label.
pub fn ingest_csv(path: &Path) -> Result<TrainingSet> {
    parse_csv(&std::fs::read_to_string(path)?)
}

pub fn parse_csv(text: &str) -> Result<TrainingSet> {
    // Typographic minus signs are common in hand-written data.
    let text = text.replace('\u{2212}', "-");
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut points = Vec::new();
    let mut labels = Vec::new();
    let mut width = None;
    for record in reader.records() {
        let record = record.map_err(|e| Error::SchemaError(e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let expected = *width.get_or_insert(record.len());
        if expected < 2 {
            return Err(Error::SchemaError(format!(
                "line {line}: need at least one coordinate and a label"
            )));
        }
        if record.len() != expected {
            return Err(Error::RaggedRows {
                line,
                expected,
                found: record.len(),
            });
        }
        let coords = record
            .iter()
            .take(expected - 1)
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| Error::SchemaError(format!("line {line}: {f:?} is not a number")))
            })
            .collect::<Result<Vec<_>>>()?;
        let raw = &record[expected - 1];
        let label = match raw.parse::<f64>() {
            Ok(v) if v == 1.0 || v == -1.0 => v,
            _ => {
                return Err(Error::BadLabels {
                    line,
                    label: raw.to_string(),
                })
            }
        };
        points.push(coords);
        labels.push(label);
    }
    TrainingSet::new(points, labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_points() {
        let t = parse_csv("1,1\n\u{2212}1,\u{2212}1\n").unwrap();
        assert_eq!(t.dim(), 1);
        assert_eq!(t.points(), &[vec![1.0], vec![-1.0]]);
        assert_eq!(t.labels(), &[1.0, -1.0]);
    }

    #[test]
    fn three_columns() {
        let t = parse_csv("1, 2, 1\n-1, 0.5, -1").unwrap();
        assert_eq!(t.dim(), 2);
    }

    #[test]
    fn bad_label() {
        let err = parse_csv("1,1\n1,0\n").unwrap_err();
        assert!(matches!(err, Error::BadLabels { line: 2, ref label } if label == "0"));
    }

    #[test]
    fn ragged() {
        let err = parse_csv("1,1\n1,2,-1\n").unwrap_err();
        assert!(matches!(
            err,
            Error::RaggedRows {
                line: 2,
                expected: 2,
                found: 3
            }
        ));
    }

    #[test]
    fn reads_from_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.csv");
        std::fs::write(&path, "0.5,1\n-0.5,-1\n").unwrap();
        assert_eq!(ingest_csv(&path).unwrap().len(), 2);
        assert!(matches!(
            ingest_csv(&dir.path().join("missing.csv")),
            Err(Error::Io(_))
        ));
    }
}
