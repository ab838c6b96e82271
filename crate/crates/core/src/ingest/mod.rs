//! Loading delimited categorical files into a column-oriented, integer-encoded
//! dataset.
//!
//! Every raw missing token is folded into the single reserved category `"?"`,
//! which then behaves like any other category downstream. Categories are
//! numbered in order of first appearance in the file.

mod dataset;
pub mod manifest;
pub mod synth;

use std::collections::HashMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use dataset::{AttributeColumn, CategoricalDataset, ClassLabels};
pub use manifest::{dataset_manifest_check, file_sha256, CheckReport, Manifest, ManifestEntry, Mismatch};
pub use synth::{synth_missingness, MissingnessRule, PlantedMissingnessSpec, SynthAttribute};

use crate::error::{Error, Result};

/// The reserved category that absorbs every missing cell.
pub const MISSING: &str = "?";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IngestOptions {
    pub delimiter: char,
    pub has_header: bool,
    /// Zero-based column holding the class label, excluded from the attributes.
    pub class_column: Option<usize>,
    /// Zero-based columns dropped entirely (row identifiers and the like).
    pub ignore_columns: Vec<usize>,
    /// Raw tokens that mean "missing". Matched after trimming when `trim` is set.
    pub missing_tokens: Vec<String>,
    pub trim: bool,
    /// Attribute names to use when the file has no header. Must match the
    /// number of attribute columns when given.
    pub attribute_names: Option<Vec<String>>,
}

impl Default for IngestOptions {
    fn default() -> Self {
        IngestOptions {
            delimiter: ',',
            has_header: false,
            class_column: None,
            ignore_columns: Vec::new(),
            missing_tokens: vec![MISSING.to_string(), String::new()],
            trim: false,
            attribute_names: None,
        }
    }
}

impl IngestOptions {
    fn delimiter_byte(&self) -> Result<u8> {
        if self.delimiter.is_ascii() {
            Ok(self.delimiter as u8)
        } else {
            Err(Error::InvalidConfig(format!(
                "delimiter {:?} must be a single ASCII character",
                self.delimiter
            )))
        }
    }

    fn is_missing(&self, token: &str) -> bool {
        token == MISSING || self.missing_tokens.iter().any(|m| m == token)
    }
}

/// Load a delimited file from disk.
pub fn load_delimited(path: impl AsRef<Path>, options: &IngestOptions) -> Result<CategoricalDataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".to_string());
    read_delimited(file, &name, path, options)
}

/// Load delimited text from any reader. `source` is only used in error messages.
pub fn read_delimited<R: Read>(
    reader: R,
    name: &str,
    source: &Path,
    options: &IngestOptions,
) -> Result<CategoricalDataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(options.delimiter_byte()?)
        .has_headers(false)
        .flexible(true)
        .trim(if options.trim { csv::Trim::All } else { csv::Trim::None })
        .from_reader(reader);

    let mut header: Option<Vec<String>> = None;
    let mut records: Vec<csv::StringRecord> = Vec::new();
    let mut width: Option<usize> = None;

    for rec in rdr.records() {
        let rec = rec?;
        // Blank lines come through as a single empty field.
        if rec.len() == 1 && rec.get(0).is_some_and(str::is_empty) {
            continue;
        }
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        match width {
            None => width = Some(rec.len()),
            Some(w) if w != rec.len() => {
                return Err(Error::RaggedRow {
                    path: source.to_path_buf(),
                    line,
                    expected: w,
                    found: rec.len(),
                })
            }
            Some(_) => {}
        }
        if options.has_header && header.is_none() {
            header = Some(rec.iter().map(str::to_string).collect());
        } else {
            records.push(rec);
        }
    }

    let width = width.ok_or_else(|| Error::EmptyInput(source.to_path_buf()))?;
    if records.is_empty() {
        return Err(Error::EmptyInput(source.to_path_buf()));
    }
    if let Some(c) = options.class_column {
        if c >= width {
            return Err(Error::ColumnOutOfRange { index: c, width });
        }
    }
    if let Some(&c) = options.ignore_columns.iter().find(|&&c| c >= width) {
        return Err(Error::ColumnOutOfRange { index: c, width });
    }

    let attr_cols: Vec<usize> = (0..width)
        .filter(|c| Some(*c) != options.class_column && !options.ignore_columns.contains(c))
        .collect();

    let names: Vec<String> = match (&options.attribute_names, &header) {
        (Some(names), _) => {
            if names.len() != attr_cols.len() {
                return Err(Error::InvalidConfig(format!(
                    "{} attribute names given for {} attribute columns",
                    names.len(),
                    attr_cols.len()
                )));
            }
            names.clone()
        }
        (None, Some(h)) => attr_cols.iter().map(|&c| h[c].clone()).collect(),
        (None, None) => attr_cols.iter().map(|c| format!("a{c}")).collect(),
    };

    let attributes = attr_cols
        .iter()
        .zip(names)
        .map(|(&col, name)| {
            let mut enc = Encoder::default();
            let values = records
                .iter()
                .map(|r| {
                    let tok = &r[col];
                    if options.is_missing(tok) {
                        enc.encode(MISSING)
                    } else {
                        enc.encode(tok)
                    }
                })
                .collect();
            AttributeColumn::new(name, enc.categories, values)
        })
        .collect::<Result<Vec<_>>>()?;

    let labels = options
        .class_column
        .map(|c| {
            let mut enc = Encoder::default();
            let ids = records.iter().map(|r| enc.encode(&r[c])).collect();
            ClassLabels::new(enc.categories, ids)
        })
        .transpose()?;

    CategoricalDataset::new(name, attributes, labels)
}

/// Write a dataset as delimited text. With `options.class_column` set and
/// labels present, the label is written at that position; ignored columns are
/// not reproduced. Reading the output back with the same options (minus
/// `ignore_columns`) yields an identical dataset.
pub fn write_delimited<W: Write>(
    dataset: &CategoricalDataset,
    writer: W,
    options: &IngestOptions,
) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new()
        .delimiter(options.delimiter_byte()?)
        .from_writer(writer);
    let labels = dataset.labels();
    let class_at = match (labels, options.class_column) {
        (Some(_), Some(c)) if c <= dataset.n_attributes() => Some(c),
        (Some(_), Some(c)) => {
            return Err(Error::ColumnOutOfRange {
                index: c,
                width: dataset.n_attributes() + 1,
            })
        }
        _ => None,
    };

    if options.has_header {
        let mut fields: Vec<&str> = dataset.attributes().iter().map(|a| a.name()).collect();
        if let Some(c) = class_at {
            fields.insert(c, "class");
        }
        wtr.write_record(&fields)?;
    }
    for row in 0..dataset.n_rows() {
        let mut fields: Vec<&str> = dataset
            .attributes()
            .iter()
            .map(|a| a.category_name(a.values()[row]))
            .collect();
        if let (Some(c), Some(l)) = (class_at, labels) {
            fields.insert(c, l.class_name(l.ids()[row]));
        }
        wtr.write_record(&fields)?;
    }
    wtr.flush()
        .map_err(|e| Error::io("<writer>", e))?;
    Ok(())
}

/// First-appearance dictionary encoder.
#[derive(Default)]
struct Encoder {
    index: HashMap<String, u32>,
    categories: Vec<String>,
}

impl Encoder {
    fn encode(&mut self, token: &str) -> u32 {
        if let Some(&i) = self.index.get(token) {
            return i;
        }
        let i = self.categories.len() as u32;
        self.categories.push(token.to_string());
        self.index.insert(token.to_string(), i);
        i
    }
}
