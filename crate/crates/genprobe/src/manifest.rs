//! Per-image ground-truth records binding rendered files to feature vectors
//! and seeds. Stored as JSON Lines so paper-scale datasets stream.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::space::{FeatureValue, FeatureVector};

/// One image's ground truth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestRecord {
    pub file: String,
    pub features: FeatureVector,
    pub seed: u64,
}

/// Ordered records for one dataset or sample directory.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DatasetManifest {
    pub records: Vec<ManifestRecord>,
}

impl DatasetManifest {
    pub fn new(records: Vec<ManifestRecord>) -> Self {
        Self { records }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// A feature column as f64 values, skipping nulls.
    pub fn feature_f64s(&self, name: &str) -> Vec<f64> {
        self.records
            .iter()
            .filter_map(|r| r.features.get(name).and_then(FeatureValue::as_f64))
            .collect()
    }

    pub fn feature_values(&self, name: &str) -> Vec<FeatureValue> {
        self.records
            .iter()
            .filter_map(|r| r.features.get(name).cloned())
            .collect()
    }

    pub fn write_jsonl<W: Write>(&self, mut w: W) -> io::Result<()> {
        for rec in &self.records {
            serde_json::to_writer(&mut w, rec)?;
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> io::Result<()> {
        let f = BufWriter::new(File::create(path)?);
        self.write_jsonl(f)
    }

    pub fn read_jsonl<R: BufRead>(r: R) -> io::Result<Self> {
        let mut records = Vec::new();
        for line in r.lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: ManifestRecord = serde_json::from_str(&line)
                .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
            records.push(rec);
        }
        Ok(Self { records })
    }

    pub fn load(path: &Path) -> io::Result<Self> {
        let f = BufReader::new(File::open(path)?);
        Self::read_jsonl(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::FeatureValue;

    #[test]
    fn jsonl_round_trip() {
        let m = DatasetManifest::new(vec![
            ManifestRecord {
                file: "images/img_000000.png".into(),
                features: FeatureVector::new()
                    .with("red_proportion", FeatureValue::Float(0.3))
                    .with("size", FeatureValue::Float(0.55)),
                seed: 7,
            },
            ManifestRecord {
                file: "images/img_000001.png".into(),
                features: FeatureVector::new().with("count", FeatureValue::Int(6)),
                seed: 8,
            },
        ]);
        let mut buf = Vec::new();
        m.write_jsonl(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(text.lines().next().unwrap().contains("\"file\""));
        let back = DatasetManifest::read_jsonl(std::io::Cursor::new(buf)).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn null_feature_values_survive() {
        let m = DatasetManifest::new(vec![ManifestRecord {
            file: "a.png".into(),
            features: FeatureVector::new().with("size", FeatureValue::Null),
            seed: 0,
        }]);
        let mut buf = Vec::new();
        m.write_jsonl(&mut buf).unwrap();
        assert!(String::from_utf8_lossy(&buf).contains("\"size\":null"));
        let back = DatasetManifest::read_jsonl(std::io::Cursor::new(buf)).unwrap();
        assert!(back.records[0].features.get("size").unwrap().is_null());
    }
}
