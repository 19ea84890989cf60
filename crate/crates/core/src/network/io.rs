use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use super::Network;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetworkFormat {
    Json,
    Csv,
}

impl NetworkFormat {
    /// Picks the format from a file extension (`.json` or `.csv`).
    pub fn from_path(path: &Path) -> Result<Self> {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Ok(NetworkFormat::Json),
            Some(e) if e.eq_ignore_ascii_case("csv") => Ok(NetworkFormat::Csv),
            _ => Err(Error::parse(
                path.display().to_string(),
                "cannot infer network format from extension (expected .json or .csv)",
            )),
        }
    }
}

#[derive(Serialize)]
struct NetworkJson<'a> {
    labels: &'a [String],
    weights: Vec<Vec<f64>>,
}

fn cell_value(source: &str, row: usize, col: usize, v: &Value) -> Result<f64> {
    let w = match v {
        Value::Number(num) => num.as_f64(),
        Value::String(s) => s.trim().parse::<f64>().ok(),
        _ => None,
    };
    match w {
        Some(w) if w.is_finite() => Ok(w),
        Some(_) => Err(Error::NonFiniteWeight { row, col }),
        None => Err(Error::parse(
            source,
            format!("weight at row {row}, column {col} is not a number: {v}"),
        )),
    }
}

fn parse_cell(source: &str, row: usize, col: usize, s: &str) -> Result<f64> {
    match s.trim().parse::<f64>() {
        Ok(w) if w.is_finite() => Ok(w),
        Ok(_) => Err(Error::NonFiniteWeight { row, col }),
        Err(_) => Err(Error::parse(
            source,
            format!("weight at row {row}, column {col} is not a number: `{s}`"),
        )),
    }
}

impl Network {
    pub fn from_json_str(text: &str) -> Result<Self> {
        Self::parse_json(text, "<json>")
    }

    fn parse_json(text: &str, source: &str) -> Result<Self> {
        let doc: Value =
            serde_json::from_str(text).map_err(|e| Error::parse(source, e.to_string()))?;
        let labels = doc
            .get("labels")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::parse(source, "missing `labels` array"))?
            .iter()
            .map(|l| match l {
                Value::String(s) => Ok(s.clone()),
                other => Ok(other.to_string()),
            })
            .collect::<Result<Vec<String>>>()?;
        let rows = doc
            .get("weights")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::parse(source, "missing `weights` array"))?;
        let mut matrix = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            let row = row
                .as_array()
                .ok_or_else(|| Error::parse(source, format!("weights row {i} is not an array")))?;
            matrix.push(
                row.iter()
                    .enumerate()
                    .map(|(j, v)| cell_value(source, i, j, v))
                    .collect::<Result<Vec<f64>>>()?,
            );
        }
        Network::new(labels, matrix)
    }

    pub fn to_json_string(&self) -> String {
        let doc = NetworkJson {
            labels: &self.labels,
            weights: self.rows(),
        };
        serde_json::to_string_pretty(&doc).expect("network serializes")
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        Self::parse_csv(text, "<csv>")
    }

    fn parse_csv(text: &str, source: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut records = reader.records();
        let labels: Vec<String> = match records.next() {
            Some(r) => r?.iter().map(str::to_string).collect(),
            None => return Err(Error::parse(source, "empty file")),
        };
        let mut matrix = Vec::new();
        for (i, rec) in records.enumerate() {
            let rec = rec?;
            if rec.iter().all(str::is_empty) {
                continue;
            }
            matrix.push(
                rec.iter()
                    .enumerate()
                    .map(|(j, s)| parse_cell(source, i, j, s))
                    .collect::<Result<Vec<f64>>>()?,
            );
        }
        Network::new(labels, matrix)
    }

    /// Labels on the first line, then one matrix row per line. Weights use
    /// the shortest decimal form that reads back to the same double.
    pub fn to_csv_string(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(&self.labels).expect("in-memory write");
        for i in 0..self.size() {
            writer
                .write_record(self.row(i).iter().map(|w| format!("{w}")))
                .expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("flush")).expect("utf8")
    }

    pub fn load(path: &Path, format: Option<NetworkFormat>) -> Result<Self> {
        let format = match format {
            Some(f) => f,
            None => NetworkFormat::from_path(path)?,
        };
        let text = fs::read_to_string(path).map_err(|source| Error::File {
            path: path.to_path_buf(),
            source,
        })?;
        let name = path.display().to_string();
        match format {
            NetworkFormat::Json => Self::parse_json(&text, &name),
            NetworkFormat::Csv => Self::parse_csv(&text, &name),
        }
    }

    pub fn to_string_as(&self, format: NetworkFormat) -> String {
        match format {
            NetworkFormat::Json => self.to_json_string(),
            NetworkFormat::Csv => self.to_csv_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const FIG2: &str = r#"{"labels": ["a", "b", "c"],
        "weights": [[-1, 1, 2], [1, 0, 2], [1, 2, 0]]}"#;

    #[test]
    fn fig2_json() {
        let x = Network::from_json_str(FIG2).unwrap();
        assert_eq!(x.size(), 3);
        assert_eq!(x.weight(0, 0), -1.0);
        assert_eq!(x.weight(2, 1), 2.0);
    }

    #[test]
    fn single_node() {
        let x = Network::from_json_str(r#"{"labels":["only"],"weights":[[0]]}"#).unwrap();
        assert_eq!(x.size(), 1);
        let y = Network::from_csv_str("only\n0\n").unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn infinite_entries_rejected() {
        let e = Network::from_json_str(r#"{"labels":["a","b"],"weights":[[0,"inf"],[1,0]]}"#)
            .unwrap_err();
        assert!(matches!(e, Error::NonFiniteWeight { row: 0, col: 1 }), "{e}");
        let e = Network::from_csv_str("a,b\n0,1\ninf,0\n").unwrap_err();
        assert!(matches!(e, Error::NonFiniteWeight { row: 1, col: 0 }), "{e}");
        let e = Network::from_csv_str("a,b\n0,1\nfoo,0\n").unwrap_err();
        assert!(e.to_string().contains("row 1, column 0"), "{e}");
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(
            Network::from_csv_str("a,b\n0,1\n"),
            Err(Error::NotSquare(_))
        ));
        assert!(matches!(
            Network::from_csv_str("a,a\n0,1\n1,0\n"),
            Err(Error::DuplicateLabel(_))
        ));
    }

    proptest! {
        #[test]
        fn text_formats_round_trip_bit_exact(
            w in proptest::collection::vec(proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO, 9)
        ) {
            let x = Network::from_flat(crate::network::default_labels(3), w).unwrap();
            let j = Network::from_json_str(&x.to_json_string()).unwrap();
            let c = Network::from_csv_str(&x.to_csv_string()).unwrap();
            for i in 0..3 {
                for k in 0..3 {
                    prop_assert_eq!(j.weight(i, k).to_bits(), x.weight(i, k).to_bits());
                    prop_assert_eq!(c.weight(i, k).to_bits(), x.weight(i, k).to_bits());
                }
            }
        }
    }
}
