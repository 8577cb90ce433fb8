//! Labeled bioassay data: CSV ingestion, canonicalization, and duplicate
//! resolution (majority label, ties count as active).

use chem::{parse_smiles, write_smiles, Molecule};
use std::collections::HashMap;
use std::io::Read;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum DatasetError {
    #[error("dataset is empty after parsing and deduplication")]
    Empty,
    #[error("dataset contains a single class only")]
    SingleClass,
    #[error("csv error: {0}")]
    Csv(String),
    #[error("line {line}: {message}")]
    BadRow { line: usize, message: String },
    #[error("io error: {0}")]
    Io(String),
}

#[derive(Debug, Clone)]
pub struct BioassayRecord {
    pub molecule: Molecule,
    pub canonical_smiles: String,
    pub active: bool,
}

#[derive(Debug, Clone)]
pub struct BioassayDataset {
    pub records: Vec<BioassayRecord>,
    pub provenance: String,
}

/// A raw row that failed to parse, kept for reporting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RejectedRow {
    pub line: usize,
    pub smiles: String,
    pub reason: String,
}

impl BioassayDataset {
    /// Build from (smiles, label) pairs: unparseable entries are dropped and
    /// reported; duplicates by canonical SMILES are merged with a majority
    /// label, ties resolved toward active.
    pub fn from_pairs<I>(pairs: I, provenance: &str) -> Result<(BioassayDataset, Vec<RejectedRow>), DatasetError>
    where
        I: IntoIterator<Item = (String, bool)>,
    {
        let mut rejected = Vec::new();
        let mut order: Vec<String> = Vec::new();
        let mut groups: HashMap<String, (Molecule, u32, u32)> = HashMap::new();
        for (line, (smiles, active)) in pairs.into_iter().enumerate() {
            match parse_smiles(&smiles) {
                Ok(mol) => {
                    let canonical = write_smiles(&mol);
                    let entry = groups.entry(canonical.clone()).or_insert_with(|| {
                        order.push(canonical);
                        (mol, 0, 0)
                    });
                    if active {
                        entry.1 += 1;
                    } else {
                        entry.2 += 1;
                    }
                }
                Err(e) => rejected.push(RejectedRow {
                    line: line + 1,
                    smiles,
                    reason: e.to_string(),
                }),
            }
        }
        let records: Vec<BioassayRecord> = order
            .into_iter()
            .map(|canonical| {
                let (mol, pos, neg) = groups.remove(&canonical).expect("grouped");
                BioassayRecord {
                    molecule: mol,
                    canonical_smiles: canonical,
                    active: pos >= neg,
                }
            })
            .collect();
        if records.is_empty() {
            return Err(DatasetError::Empty);
        }
        Ok((
            BioassayDataset {
                records,
                provenance: provenance.to_string(),
            },
            rejected,
        ))
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn labels(&self) -> Vec<bool> {
        self.records.iter().map(|r| r.active).collect()
    }

    pub fn has_both_classes(&self) -> bool {
        let mut saw = [false, false];
        for r in &self.records {
            saw[r.active as usize] = true;
        }
        saw[0] && saw[1]
    }
}

/// Read `smiles,activity` CSV (header required, activity in {0,1}).
pub fn read_bioassay_csv<R: Read>(reader: R, provenance: &str) -> Result<(BioassayDataset, Vec<RejectedRow>), DatasetError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| DatasetError::Csv(e.to_string()))?.clone();
    let smiles_col = headers
        .iter()
        .position(|h| h.eq_ignore_ascii_case("smiles"))
        .ok_or_else(|| DatasetError::Csv("missing 'smiles' column".into()))?;
    let label_col = headers
        .iter()
        .position(|h| h.eq_ignore_ascii_case("activity"))
        .ok_or_else(|| DatasetError::Csv("missing 'activity' column".into()))?;

    let mut pairs = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let line = i + 2; // header is line 1
        let row = row.map_err(|e| DatasetError::Csv(e.to_string()))?;
        let smiles = row
            .get(smiles_col)
            .ok_or(DatasetError::BadRow {
                line,
                message: "missing smiles field".into(),
            })?
            .to_string();
        let label = match row.get(label_col) {
            Some("0") => false,
            Some("1") => true,
            other => {
                return Err(DatasetError::BadRow {
                    line,
                    message: format!("activity must be 0 or 1, got {:?}", other.unwrap_or("")),
                })
            }
        };
        pairs.push((smiles, label));
    }
    BioassayDataset::from_pairs(pairs, provenance)
}

pub fn load_bioassay_csv(path: &Path) -> Result<(BioassayDataset, Vec<RejectedRow>), DatasetError> {
    let file = std::fs::File::open(path).map_err(|e| DatasetError::Io(format!("{}: {e}", path.display())))?;
    read_bioassay_csv(std::io::BufReader::new(file), &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_resolve_by_majority_ties_active() {
        let pairs = vec![
            ("CCO".to_string(), true),
            ("OCC".to_string(), false), // same molecule as CCO
            ("C".to_string(), false),
            ("C".to_string(), true), // tie -> active
            ("CCN".to_string(), false),
            ("CCN".to_string(), false),
            ("NCC".to_string(), true), // 2 inactive vs 1 active -> inactive
        ];
        let (ds, rejected) = BioassayDataset::from_pairs(pairs, "test").unwrap();
        assert!(rejected.is_empty());
        assert_eq!(ds.len(), 3);
        let by_smiles: HashMap<&str, bool> = ds.records.iter().map(|r| (r.canonical_smiles.as_str(), r.active)).collect();
        assert_eq!(by_smiles["C"], true);
        let ccn = chem::write_smiles(&chem::parse_smiles("CCN").unwrap());
        assert_eq!(by_smiles[ccn.as_str()], false);
    }

    #[test]
    fn unparseable_rows_reported() {
        let pairs = vec![("C(".to_string(), true), ("CC".to_string(), false)];
        let (ds, rejected) = BioassayDataset::from_pairs(pairs, "test").unwrap();
        assert_eq!(ds.len(), 1);
        assert_eq!(rejected.len(), 1);
        assert_eq!(rejected[0].line, 1);
    }

    #[test]
    fn csv_round_trip() {
        let csv = "smiles,activity\nCCO,1\nCC,0\n";
        let (ds, _) = read_bioassay_csv(csv.as_bytes(), "inline").unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds.labels(), vec![true, false]);
    }

    #[test]
    fn csv_bad_label_is_an_error() {
        let csv = "smiles,activity\nCCO,yes\n";
        let err = read_bioassay_csv(csv.as_bytes(), "inline").unwrap_err();
        assert!(matches!(err, DatasetError::BadRow { line: 2, .. }));
    }

    #[test]
    fn empty_dataset_rejected() {
        let err = BioassayDataset::from_pairs(Vec::<(String, bool)>::new(), "x").unwrap_err();
        assert!(matches!(err, DatasetError::Empty));
    }
}
