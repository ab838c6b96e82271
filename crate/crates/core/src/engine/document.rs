//! JSON result document: config echo, per-step split records with names and
//! scores (rounded to 9 decimals), and the rows of every cluster.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize, Serializer};

use super::{Algorithm, ClusterMode, ClusteringResult, EngineConfig, EngineWarning, SplitRecord};
use crate::error::{Error, Result};
use crate::ingest::{CategoricalDataset, IngestOptions};

pub const RESULT_FORMAT: &str = "miscluster-result/1";

fn round9<S: Serializer>(value: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    let rounded: f64 = format!("{value:.9}").parse().unwrap_or(*value);
    s.serialize_f64(rounded)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmDoc {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n_init: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cost: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeScore {
    pub attribute: String,
    #[serde(serialize_with = "round9")]
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryEntropy {
    pub category: String,
    #[serde(serialize_with = "round9")]
    pub entropy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitDoc {
    pub step: usize,
    pub attribute: String,
    pub attribute_index: usize,
    pub category: String,
    pub category_index: u32,
    pub working_size: usize,
    pub cluster_size: usize,
    #[serde(serialize_with = "round9")]
    pub working_entropy: f64,
    pub partition_entropies: Vec<CategoryEntropy>,
    pub mis_scores: Vec<AttributeScore>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterDoc {
    pub index: usize,
    pub size: usize,
    pub rows: Vec<usize>,
}

/// Serializable form of a [`ClusteringResult`], self-describing enough to be
/// read back against the same dataset by a later command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub format: String,
    pub dataset: String,
    pub n_rows: usize,
    pub algorithm: AlgorithmDoc,
    pub config: EngineConfig,
    /// How the input was parsed, so downstream commands can reload it the same way.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ingest: Option<IngestOptions>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub warning: Option<String>,
    pub splits: Vec<SplitDoc>,
    pub clusters: Vec<ClusterDoc>,
}

impl ResultDocument {
    pub fn from_result(
        dataset: &CategoricalDataset,
        result: &ClusteringResult,
        ingest: Option<&IngestOptions>,
    ) -> Self {
        let attrs = dataset.attributes();
        let algorithm = match &result.algorithm {
            Algorithm::Mis => AlgorithmDoc {
                name: "mis".into(),
                seed: None,
                n_init: None,
                cost: None,
            },
            Algorithm::KModes { seed, n_init, cost } => AlgorithmDoc {
                name: "kmodes".into(),
                seed: Some(*seed),
                n_init: Some(*n_init),
                cost: Some(*cost),
            },
        };
        let splits = result
            .splits
            .iter()
            .enumerate()
            .map(|(step, s)| {
                let a = &attrs[s.significant_attribute];
                SplitDoc {
                    step,
                    attribute: a.name().to_string(),
                    attribute_index: s.significant_attribute,
                    category: a.category_name(s.chosen_category).to_string(),
                    category_index: s.chosen_category,
                    working_size: s.working_size,
                    cluster_size: s.cluster_size,
                    working_entropy: s.working_entropy,
                    partition_entropies: s
                        .partition_entropies
                        .iter()
                        .map(|&(c, h)| CategoryEntropy {
                            category: a.category_name(c).to_string(),
                            entropy: h,
                        })
                        .collect(),
                    mis_scores: s
                        .mis_scores
                        .iter()
                        .map(|&(j, score)| AttributeScore {
                            attribute: attrs[j].name().to_string(),
                            score,
                        })
                        .collect(),
                }
            })
            .collect();
        ResultDocument {
            format: RESULT_FORMAT.to_string(),
            dataset: dataset.name().to_string(),
            n_rows: result.n_rows,
            algorithm,
            config: result.config,
            ingest: ingest.cloned(),
            warning: result.warning.map(|w| w.to_string()),
            splits,
            clusters: result
                .clusters
                .iter()
                .enumerate()
                .map(|(index, rows)| ClusterDoc {
                    index,
                    size: rows.len(),
                    rows: rows.clone(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("result document serializes");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let doc: ResultDocument = serde_json::from_str(text).map_err(|e| Error::Parse {
            what: "result document".into(),
            message: e.to_string(),
        })?;
        if doc.format != RESULT_FORMAT {
            return Err(Error::Parse {
                what: "result document".into(),
                message: format!("unsupported format {:?}", doc.format),
            });
        }
        Ok(doc)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        ResultDocument::parse(&text)
    }

    /// Rebuild the in-memory result against its dataset. Indices are checked
    /// against the recorded names; scores come back at their rounded precision.
    pub fn to_result(&self, dataset: &CategoricalDataset) -> Result<ClusteringResult> {
        if self.n_rows != dataset.n_rows() {
            return Err(Error::InvalidDataset(format!(
                "result covers {} rows but dataset has {}",
                self.n_rows,
                dataset.n_rows()
            )));
        }
        let attr_index = |name: &str| {
            dataset
                .attribute_index(name)
                .ok_or_else(|| Error::InvalidDataset(format!("dataset has no attribute {name:?}")))
        };
        let mut splits = Vec::with_capacity(self.splits.len());
        for s in &self.splits {
            let a = attr_index(&s.attribute)?;
            let col = &dataset.attributes()[a];
            let cat = |name: &str| {
                col.category_index(name).ok_or_else(|| {
                    Error::InvalidDataset(format!("attribute {:?} has no category {name:?}", col.name()))
                })
            };
            let partition_entropies = s
                .partition_entropies
                .iter()
                .map(|p| Ok((cat(&p.category)?, p.entropy)))
                .collect::<Result<Vec<_>>>()?;
            let mis_scores = s
                .mis_scores
                .iter()
                .map(|m| Ok((attr_index(&m.attribute)?, m.score)))
                .collect::<Result<Vec<_>>>()?;
            splits.push(SplitRecord {
                significant_attribute: a,
                chosen_category: cat(&s.category)?,
                partition_entropies,
                mis_scores,
                working_entropy: s.working_entropy,
                working_size: s.working_size,
                cluster_size: s.cluster_size,
            });
        }
        let algorithm = match self.algorithm.name.as_str() {
            "mis" => Algorithm::Mis,
            "kmodes" => Algorithm::KModes {
                seed: self.algorithm.seed.unwrap_or(0),
                n_init: self.algorithm.n_init.unwrap_or(1),
                cost: self.algorithm.cost.unwrap_or(0),
            },
            other => {
                return Err(Error::Parse {
                    what: "result document".into(),
                    message: format!("unknown algorithm {other:?}"),
                })
            }
        };
        let warning = match (self.warning.as_ref(), self.config.mode) {
            (Some(_), ClusterMode::FixedK(k)) => Some(EngineWarning::Shortfall {
                requested: k,
                produced: self.clusters.len(),
            }),
            _ => None,
        };
        let result = ClusteringResult {
            algorithm,
            config: self.config,
            n_rows: self.n_rows,
            clusters: self.clusters.iter().map(|c| c.rows.clone()).collect(),
            splits,
            warning,
        };
        result.validate_cover()?;
        Ok(result)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::cluster;

    fn fixture() -> CategoricalDataset {
        let rows: Vec<Vec<&str>> = vec![
            vec!["x", "p", "m"],
            vec!["x", "p", "m"],
            vec!["y", "q", "n"],
            vec!["y", "r", "n"],
            vec!["z", "r", "o"],
        ];
        CategoricalDataset::from_rows("fx", &["a", "b", "c"], &rows).unwrap()
    }

    #[test]
    fn document_round_trip_preserves_structure() {
        let d = fixture();
        let res = cluster(&d, &EngineConfig::fixed_k(3)).unwrap();
        let doc = ResultDocument::from_result(&d, &res, Some(&IngestOptions::default()));
        let text = doc.to_json();
        let back = ResultDocument::parse(&text).unwrap();
        assert_eq!(back.ingest, Some(IngestOptions::default()));
        let rebuilt = back.to_result(&d).unwrap();
        assert_eq!(rebuilt.clusters, res.clusters);
        assert_eq!(rebuilt.config, res.config);
        for (a, b) in rebuilt.splits.iter().zip(&res.splits) {
            assert_eq!(a.significant_attribute, b.significant_attribute);
            assert_eq!(a.chosen_category, b.chosen_category);
            for (x, y) in a.mis_scores.iter().zip(&b.mis_scores) {
                assert!((x.1 - y.1).abs() <= 5e-10);
            }
        }
    }

    #[test]
    fn scores_are_written_with_at_most_nine_decimals() {
        let d = fixture();
        let res = cluster(&d, &EngineConfig::fixed_k(2)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&ResultDocument::from_result(&d, &res, None).to_json()).unwrap();
        for s in v["splits"][0]["mis_scores"].as_array().unwrap() {
            let text = s["score"].to_string();
            let decimals = text.split('.').nth(1).map_or(0, str::len);
            assert!(decimals <= 9, "{text}");
        }
        assert_eq!(v["config"]["mode"], "fixed-k");
        assert_eq!(v["config"]["k"], 2);
    }

    #[test]
    fn mismatched_dataset_is_rejected() {
        let d = fixture();
        let res = cluster(&d, &EngineConfig::fixed_k(2)).unwrap();
        let doc = ResultDocument::from_result(&d, &res, None);
        let other = CategoricalDataset::from_rows("o", &["a", "b"], &[vec!["x", "y"]]).unwrap();
        assert!(doc.to_result(&other).is_err());
        assert!(ResultDocument::parse("{\"format\":\"other\"}").is_err());
    }
}
