//! SMILES text files: UTF-8, one record per line `<smiles>[TAB<id>]`,
//! `#`-prefixed lines are comments.

use std::io::{BufRead, Write};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmilesRecord {
    pub smiles: String,
    pub id: Option<String>,
}

pub fn read_smiles_records<R: BufRead>(reader: R) -> std::io::Result<Vec<SmilesRecord>> {
    let mut records = Vec::new();
    for line in reader.lines() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (smiles, id) = match trimmed.split_once('\t') {
            Some((s, i)) => (s.trim(), Some(i.trim().to_string()).filter(|i| !i.is_empty())),
            None => (trimmed, None),
        };
        records.push(SmilesRecord {
            smiles: smiles.to_string(),
            id,
        });
    }
    Ok(records)
}

pub fn read_smiles_file(path: &std::path::Path) -> std::io::Result<Vec<SmilesRecord>> {
    let file = std::fs::File::open(path)?;
    read_smiles_records(std::io::BufReader::new(file))
}

pub fn write_smiles_records<W: Write>(mut writer: W, records: &[SmilesRecord]) -> std::io::Result<()> {
    for r in records {
        match &r.id {
            Some(id) => writeln!(writer, "{}\t{}", r.smiles, id)?,
            None => writeln!(writer, "{}", r.smiles)?,
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_ids() {
        let text = "# header\nCCO\tethanol\nC\n\n# tail\nCCN\t\n";
        let records = read_smiles_records(text.as_bytes()).unwrap();
        assert_eq!(records.len(), 3);
        assert_eq!(records[0].id.as_deref(), Some("ethanol"));
        assert_eq!(records[1].id, None);
        assert_eq!(records[2].id, None);
    }

    #[test]
    fn write_read_round_trip() {
        let records = vec![
            SmilesRecord {
                smiles: "CCO".into(),
                id: Some("a".into()),
            },
            SmilesRecord {
                smiles: "C".into(),
                id: None,
            },
        ];
        let mut buf = Vec::new();
        write_smiles_records(&mut buf, &records).unwrap();
        assert_eq!(read_smiles_records(buf.as_slice()).unwrap(), records);
    }
}
