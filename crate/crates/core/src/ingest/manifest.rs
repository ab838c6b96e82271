//! The benchmark manifest: a TOML file describing where each dataset lives,
//! how to parse it, and what shape it must have.
//!
//! ```toml
//! [[dataset]]
//! name = "zoo"
//! file = "zoo.data"
//! class_column = 17
//! ignore_columns = [0]
//! expected_rows = 101
//! expected_attributes = 16
//! expected_classes = 7
//! url = "https://archive.ics.uci.edu/dataset/111/zoo"
//! ```

use std::fmt;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{CategoricalDataset, IngestOptions};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    pub name: String,
    pub file: PathBuf,
    #[serde(default = "default_delimiter")]
    pub delimiter: char,
    #[serde(default)]
    pub header: bool,
    pub class_column: Option<usize>,
    #[serde(default)]
    pub ignore_columns: Vec<usize>,
    pub missing_tokens: Option<Vec<String>>,
    pub attribute_names: Option<Vec<String>>,
    pub expected_rows: Option<usize>,
    pub expected_attributes: Option<usize>,
    pub expected_classes: Option<usize>,
    pub sha256: Option<String>,
    pub url: Option<String>,
    /// Optional entries whose file is absent are skipped instead of reported.
    #[serde(default)]
    pub optional: bool,
    pub note: Option<String>,
}

fn default_delimiter() -> char {
    ','
}

impl ManifestEntry {
    /// A bare entry declaring only the expected counts; handy for ad-hoc checks.
    pub fn expecting(name: &str, rows: Option<usize>, attributes: Option<usize>, classes: Option<usize>) -> Self {
        ManifestEntry {
            name: name.to_string(),
            file: PathBuf::from(format!("{name}.data")),
            delimiter: ',',
            header: false,
            class_column: None,
            ignore_columns: Vec::new(),
            missing_tokens: None,
            attribute_names: None,
            expected_rows: rows,
            expected_attributes: attributes,
            expected_classes: classes,
            sha256: None,
            url: None,
            optional: false,
            note: None,
        }
    }

    pub fn ingest_options(&self) -> IngestOptions {
        let defaults = IngestOptions::default();
        IngestOptions {
            delimiter: self.delimiter,
            has_header: self.header,
            class_column: self.class_column,
            ignore_columns: self.ignore_columns.clone(),
            missing_tokens: self.missing_tokens.clone().unwrap_or(defaults.missing_tokens),
            trim: false,
            attribute_names: self.attribute_names.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(rename = "dataset", default)]
    pub datasets: Vec<ManifestEntry>,
    /// Directory that relative `file` paths resolve against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl Manifest {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut manifest = Manifest::parse(&text)?;
        manifest.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(manifest)
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse {
            what: "manifest".into(),
            message: e.to_string(),
        })
    }

    pub fn entry(&self, name: &str) -> Option<&ManifestEntry> {
        self.datasets.iter().find(|d| d.name == name)
    }

    pub fn path_of(&self, entry: &ManifestEntry) -> PathBuf {
        if entry.file.is_absolute() {
            entry.file.clone()
        } else {
            self.base_dir.join(&entry.file)
        }
    }

    /// Load the named dataset with the parsing options its entry declares.
    pub fn load_dataset(&self, entry: &ManifestEntry) -> Result<CategoricalDataset> {
        let ds = super::load_delimited(self.path_of(entry), &entry.ingest_options())?;
        // Keep the manifest's name rather than the file stem.
        let (attributes, labels) = (ds.attributes().to_vec(), ds.labels().cloned());
        CategoricalDataset::new(entry.name.clone(), attributes, labels)
    }
}

/// Hex-encoded SHA-256 of a file's bytes.
pub fn file_sha256(path: impl AsRef<Path>) -> Result<String> {
    let path = path.as_ref();
    let mut file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut hasher = Sha256::new();
    let mut buf = [0u8; 1 << 16];
    loop {
        let n = file.read(&mut buf).map_err(|e| Error::io(path, e))?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub field: &'static str,
    pub expected: String,
    pub actual: String,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: expected {}, found {}", self.field, self.expected, self.actual)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub dataset: String,
    pub mismatches: Vec<Mismatch>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "{}: ok", self.dataset);
        }
        write!(f, "{}: ", self.dataset)?;
        for (i, m) in self.mismatches.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// Compare a loaded dataset against the counts its manifest entry declares.
/// Undeclared counts are not checked.
pub fn dataset_manifest_check(dataset: &CategoricalDataset, entry: &ManifestEntry) -> CheckReport {
    let mut mismatches = Vec::new();
    let mut compare = |field: &'static str, expected: Option<usize>, actual: Option<usize>| {
        if let Some(e) = expected {
            if actual != Some(e) {
                mismatches.push(Mismatch {
                    field,
                    expected: e.to_string(),
                    actual: actual.map_or_else(|| "none".to_string(), |a| a.to_string()),
                });
            }
        }
    };
    compare("rows", entry.expected_rows, Some(dataset.n_rows()));
    compare("attributes", entry.expected_attributes, Some(dataset.n_attributes()));
    compare(
        "classes",
        entry.expected_classes,
        dataset.labels().map(|l| l.n_classes()),
    );
    CheckReport {
        dataset: entry.name.clone(),
        mismatches,
    }
}
