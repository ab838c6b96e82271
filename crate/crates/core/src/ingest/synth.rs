//! Synthetic categorical data with planted, non-random missingness.
//!
//! Attributes are drawn independently from their base distributions. Each rule
//! then blanks its target attributes (jointly, in the same rows) with a rate
//! that depends on the base category of a conditioning attribute. Within every
//! conditioning stratum exactly `round(rate * stratum_size)` rows are blanked,
//! chosen uniformly at random, so realized rates match the plant up to rounding.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{CategoricalDataset, MISSING};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthAttribute {
    pub name: String,
    pub categories: Vec<String>,
    /// Base probabilities, one per category, summing to 1.
    pub weights: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MissingnessRule {
    /// Attributes blanked together.
    pub targets: Vec<String>,
    /// Attribute whose base category sets the missingness rate.
    pub given: String,
    /// Missingness rate per category of `given`; unlisted categories get 0.
    pub missing_rate: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlantedMissingnessSpec {
    #[serde(default = "default_name")]
    pub name: String,
    pub n_rows: usize,
    #[serde(rename = "attribute")]
    pub attributes: Vec<SynthAttribute>,
    #[serde(rename = "rule", default)]
    pub rules: Vec<MissingnessRule>,
}

fn default_name() -> String {
    "synthetic".to_string()
}

impl PlantedMissingnessSpec {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::Parse {
            what: format!("synthetic spec {}", path.display()),
            message: e.to_string(),
        })
    }

    fn attribute_position(&self, name: &str) -> Result<usize> {
        self.attributes
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| Error::InvalidConfig(format!("rule refers to unknown attribute {name:?}")))
    }

    /// Missing rate for each category of the rule's conditioning attribute.
    fn rates_for(&self, rule: &MissingnessRule) -> Result<Vec<f64>> {
        let given = &self.attributes[self.attribute_position(&rule.given)?];
        for (cat, &p) in &rule.missing_rate {
            if !given.categories.contains(cat) {
                return Err(Error::InvalidConfig(format!(
                    "attribute {:?} has no category {cat:?}",
                    given.name
                )));
            }
            check_probability(p, || format!("missing rate of {:?} given {}={cat}", rule.targets, given.name))?;
        }
        Ok(given
            .categories
            .iter()
            .map(|c| rule.missing_rate.get(c).copied().unwrap_or(0.0))
            .collect())
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_rows == 0 {
            return Err(Error::InvalidConfig("n_rows must be positive".into()));
        }
        if self.attributes.is_empty() {
            return Err(Error::InvalidConfig("at least one attribute is required".into()));
        }
        for a in &self.attributes {
            if a.categories.is_empty() || a.categories.len() != a.weights.len() {
                return Err(Error::InvalidConfig(format!(
                    "attribute {:?} needs one weight per category",
                    a.name
                )));
            }
            if a.categories.iter().any(|c| c == MISSING) {
                return Err(Error::InvalidConfig(format!(
                    "attribute {:?} uses the reserved category {MISSING:?}",
                    a.name
                )));
            }
            for (c, &w) in a.categories.iter().zip(&a.weights) {
                check_probability(w, || format!("weight of {}={c}", a.name))?;
            }
            let total: f64 = a.weights.iter().sum();
            if (total - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidConfig(format!(
                    "weights of {:?} sum to {total}, not 1",
                    a.name
                )));
            }
        }
        for rule in &self.rules {
            self.rates_for(rule)?;
            for t in &rule.targets {
                self.attribute_position(t)?;
                if *t == rule.given {
                    return Err(Error::InvalidConfig(format!(
                        "attribute {t:?} cannot condition its own missingness"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn check_probability(value: f64, context: impl FnOnce() -> String) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::ProbabilityOutOfRange {
            context: context(),
            value,
        })
    }
}

/// Generate a dataset from a planted-missingness spec. Deterministic for a
/// fixed seed.
pub fn synth_missingness(spec: &PlantedMissingnessSpec, seed: u64) -> Result<CategoricalDataset> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = spec.n_rows;

    // Base draws, stored as category positions within each SynthAttribute.
    let base: Vec<Vec<usize>> = spec
        .attributes
        .iter()
        .map(|a| {
            let cumulative: Vec<f64> = a
                .weights
                .iter()
                .scan(0.0, |acc, w| {
                    *acc += w;
                    Some(*acc)
                })
                .collect();
            (0..n)
                .map(|_| {
                    let u: f64 = rng.random();
                    cumulative
                        .iter()
                        .position(|&c| u < c)
                        .unwrap_or(cumulative.len() - 1)
                })
                .collect()
        })
        .collect();

    let mut missing = vec![vec![false; n]; spec.attributes.len()];
    for rule in &spec.rules {
        let given = spec.attribute_position(&rule.given)?;
        let targets = rule
            .targets
            .iter()
            .map(|t| spec.attribute_position(t))
            .collect::<Result<Vec<_>>>()?;
        for (cat, rate) in spec.rates_for(rule)?.into_iter().enumerate() {
            let stratum: Vec<usize> = (0..n).filter(|&r| base[given][r] == cat).collect();
            let count = (rate * stratum.len() as f64).round() as usize;
            for pick in index::sample(&mut rng, stratum.len(), count) {
                for &t in &targets {
                    missing[t][stratum[pick]] = true;
                }
            }
        }
    }

    let names: Vec<&str> = spec.attributes.iter().map(|a| a.name.as_str()).collect();
    let rows: Vec<Vec<&str>> = (0..n)
        .map(|r| {
            spec.attributes
                .iter()
                .enumerate()
                .map(|(j, a)| {
                    if missing[j][r] {
                        MISSING
                    } else {
                        a.categories[base[j][r]].as_str()
                    }
                })
                .collect()
        })
        .collect();
    CategoricalDataset::from_rows(spec.name.clone(), &names, &rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_attr_spec(rate_y1: f64, rate_y2: f64) -> PlantedMissingnessSpec {
        PlantedMissingnessSpec {
            name: "planted".into(),
            n_rows: 10_000,
            attributes: vec![
                SynthAttribute {
                    name: "y".into(),
                    categories: vec!["y1".into(), "y2".into()],
                    weights: vec![0.5, 0.5],
                },
                SynthAttribute {
                    name: "x".into(),
                    categories: vec!["a".into(), "b".into(), "c".into()],
                    weights: vec![0.5, 0.3, 0.2],
                },
            ],
            rules: vec![MissingnessRule {
                targets: vec!["x".into()],
                given: "y".into(),
                missing_rate: BTreeMap::from([("y1".into(), rate_y1), ("y2".into(), rate_y2)]),
            }],
        }
    }

    /// Count missing `x` cells per `y` stratum directly from the generated table.
    fn realized_rate(ds: &CategoricalDataset, y_category: &str) -> f64 {
        let y = &ds.attributes()[0];
        let x = &ds.attributes()[1];
        let yc = y.category_index(y_category).unwrap();
        let (mut total, mut miss) = (0usize, 0usize);
        for r in 0..ds.n_rows() {
            if y.values()[r] == yc {
                total += 1;
                if Some(x.values()[r]) == x.missing_index() {
                    miss += 1;
                }
            }
        }
        miss as f64 / total as f64
    }

    #[test]
    fn conditional_rates_match_the_plant() {
        let ds = synth_missingness(&two_attr_spec(0.0, 0.5), 7).unwrap();
        assert_eq!(ds.n_rows(), 10_000);
        assert!((realized_rate(&ds, "y1") - 0.0).abs() <= 0.02);
        assert!((realized_rate(&ds, "y2") - 0.5).abs() <= 0.02);
    }

    #[test]
    fn zero_rates_plant_nothing() {
        let ds = synth_missingness(&two_attr_spec(0.0, 0.0), 3).unwrap();
        assert!(ds.attributes().iter().all(|a| a.missing_index().is_none()));
    }

    #[test]
    fn same_seed_same_data() {
        let spec = two_attr_spec(0.1, 0.6);
        assert_eq!(synth_missingness(&spec, 11).unwrap(), synth_missingness(&spec, 11).unwrap());
        assert_ne!(synth_missingness(&spec, 11).unwrap(), synth_missingness(&spec, 12).unwrap());
    }

    #[test]
    fn out_of_range_probabilities_are_rejected() {
        assert!(matches!(
            synth_missingness(&two_attr_spec(1.5, 0.0), 1),
            Err(Error::ProbabilityOutOfRange { .. })
        ));
        let mut spec = two_attr_spec(0.0, 0.0);
        spec.attributes[1].weights = vec![1.2, -0.1, -0.1];
        assert!(matches!(
            synth_missingness(&spec, 1),
            Err(Error::ProbabilityOutOfRange { .. })
        ));
    }

    #[test]
    fn parses_toml_spec() {
        let text = r#"
name = "p"
n_rows = 50
[[attribute]]
name = "y"
categories = ["u", "v"]
weights = [0.5, 0.5]
[[attribute]]
name = "x"
categories = ["a"]
weights = [1.0]
[[rule]]
targets = ["x"]
given = "y"
missing_rate = { v = 1.0 }
"#;
        let spec: PlantedMissingnessSpec = toml::from_str(text).unwrap();
        let ds = synth_missingness(&spec, 0).unwrap();
        let x = &ds.attributes()[1];
        let y = &ds.attributes()[0];
        let v = y.category_index("v").unwrap();
        for r in 0..ds.n_rows() {
            assert_eq!(Some(x.values()[r]) == x.missing_index(), y.values()[r] == v);
        }
    }
}
