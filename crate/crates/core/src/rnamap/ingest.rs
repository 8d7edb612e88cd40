//! Dataset files: `sequence,structure,shape`, one header line.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

use super::shape::{abstract_shape, parse_dotbracket, AbstractShape, DotBracketStructure};
use super::NucleotideSequence;

pub const DATASET_HEADER: [&str; 3] = ["sequence", "structure", "shape"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetRecord {
    pub sequence: NucleotideSequence,
    pub structure: Option<DotBracketStructure>,
    pub shape: AbstractShape,
}

pub fn write_dataset<W: Write>(records: &[DatasetRecord], out: W) -> std::result::Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(DATASET_HEADER)?;
    for r in records {
        let structure = r.structure.as_ref().map(|s| s.to_string()).unwrap_or_default();
        w.write_record([r.sequence.to_string(), structure, r.shape.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Parses and validates dataset records from any reader; `path` is used
/// for error messages only.
pub fn read_dataset<R: Read>(input: R, path: &Path) -> Result<Vec<DatasetRecord>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header = reader.headers().map_err(|e| Error::csv(path, e))?.clone();
    if header.iter().collect::<Vec<_>>() != DATASET_HEADER {
        return Err(Error::MalformedRow {
            path: path.to_path_buf(),
            line: 1,
            message: format!("expected header {:?}, found {:?}", DATASET_HEADER.join(","), header.iter().collect::<Vec<_>>().join(",")),
        });
    }
    let mut records = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| Error::csv(path, e))?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let bad = |message: String| Error::MalformedRow {
            path: path.to_path_buf(),
            line,
            message,
        };
        if row.len() != 3 {
            return Err(bad(format!("expected 3 fields, found {}", row.len())));
        }
        let sequence: NucleotideSequence = row[0].trim().parse().map_err(|e: Error| bad(e.to_string()))?;
        let shape: AbstractShape = row[2].trim().parse().map_err(|e: Error| bad(e.to_string()))?;
        let structure_text = row[1].trim();
        let structure = if structure_text.is_empty() {
            None
        } else {
            let forest = parse_dotbracket(structure_text).map_err(|e| bad(e.to_string()))?;
            if structure_text.len() != sequence.len() {
                return Err(bad(format!(
                    "structure length {} differs from sequence length {}",
                    structure_text.len(),
                    sequence.len()
                )));
            }
            let derived = abstract_shape(&forest);
            if derived != shape {
                return Err(Error::IngestInconsistent {
                    path: path.to_path_buf(),
                    line,
                    given: shape.to_string(),
                    derived: derived.to_string(),
                });
            }
            Some(structure_text.parse()?)
        };
        records.push(DatasetRecord {
            sequence,
            structure,
            shape,
        });
    }
    Ok(records)
}

/// Reads a dataset file into `(sequence, shape)` pairs.
pub fn ingest_dataset(path: &Path) -> Result<Vec<(NucleotideSequence, AbstractShape)>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(read_dataset(file, path)?
        .into_iter()
        .map(|r| (r.sequence, r.shape))
        .collect())
}
