//! Top-down clustering by mutual information scoring.
//!
//! Each step scores every active attribute on the current working set, splits
//! the working set by the categories of the best-scoring attribute, and peels
//! off the partition with the lowest partition entropy as a new cluster. The
//! rest stays merged and becomes the next working set. Whatever remains at the
//! end is the final cluster.
//!
//! Ties are broken toward the lowest attribute index and the lowest category
//! index, so runs are fully deterministic.

mod document;

use std::fmt;

use log::{debug, info, warn};
use serde::{Deserialize, Serialize};

pub use document::{ResultDocument, RESULT_FORMAT};

use crate::error::{Error, Result};
use crate::info::{partition_entropy, MutualInformationMatrix, SampleSet};
use crate::ingest::CategoricalDataset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode", content = "k")]
pub enum ClusterMode {
    /// Stop after exactly `k` clusters (the final residual counts as one).
    FixedK(usize),
    /// Let the stopping rule decide.
    Auto,
}

impl fmt::Display for ClusterMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClusterMode::FixedK(k) => write!(f, "fixed-k({k})"),
            ClusterMode::Auto => f.write_str("auto"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    #[serde(flatten)]
    pub mode: ClusterMode,
    /// Auto mode stops once the working set is smaller than this fraction of
    /// all rows. 0 disables the check.
    pub min_cluster_fraction: f64,
    /// Auto mode stops when the best partition's entropy exceeds this fraction
    /// of the working set's own partition entropy.
    pub auto_stop_ratio: f64,
    /// Worker threads for the per-step MI matrix. `None` uses the global rayon
    /// pool; `Some(1)` runs sequentially. Results do not depend on this.
    #[serde(skip)]
    pub parallelism: Option<usize>,
}

pub const DEFAULT_AUTO_STOP_RATIO: f64 = 0.9;

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            mode: ClusterMode::Auto,
            min_cluster_fraction: 0.0,
            auto_stop_ratio: DEFAULT_AUTO_STOP_RATIO,
            parallelism: None,
        }
    }
}

impl EngineConfig {
    pub fn fixed_k(k: usize) -> Self {
        EngineConfig {
            mode: ClusterMode::FixedK(k),
            ..EngineConfig::default()
        }
    }

    pub fn auto() -> Self {
        EngineConfig::default()
    }

    pub fn with_auto_stop_ratio(mut self, theta: f64) -> Self {
        self.auto_stop_ratio = theta;
        self
    }

    pub fn with_parallelism(mut self, threads: Option<usize>) -> Self {
        self.parallelism = threads;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if let ClusterMode::FixedK(k) = self.mode {
            if k < 2 {
                return Err(Error::InvalidConfig(format!("k must be at least 2, got {k}")));
            }
        }
        if !(self.auto_stop_ratio > 0.0 && self.auto_stop_ratio.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "auto stop ratio must be positive, got {}",
                self.auto_stop_ratio
            )));
        }
        if !(0.0..1.0).contains(&self.min_cluster_fraction) {
            return Err(Error::InvalidConfig(format!(
                "min cluster fraction must be in [0, 1), got {}",
                self.min_cluster_fraction
            )));
        }
        if self.parallelism == Some(0) {
            return Err(Error::InvalidConfig("parallelism must be at least 1".into()));
        }
        Ok(())
    }
}

/// What happened at one extraction step.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitRecord {
    pub significant_attribute: usize,
    pub chosen_category: u32,
    /// Partition entropy of each category the significant attribute realizes
    /// on the working set, in dictionary order.
    pub partition_entropies: Vec<(u32, f64)>,
    /// MIS of every active attribute on the working set, in attribute order.
    /// Constant attributes are listed with their (zero) score.
    pub mis_scores: Vec<(usize, f64)>,
    /// Partition entropy of the whole working set before the split.
    pub working_entropy: f64,
    pub working_size: usize,
    pub cluster_size: usize,
}

impl SplitRecord {
    pub fn min_partition_entropy(&self) -> f64 {
        self.partition_entropies
            .iter()
            .map(|&(_, h)| h)
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Algorithm {
    Mis,
    /// Baseline k-modes; `cost` is the total Hamming distance to the modes.
    KModes { seed: u64, n_init: usize, cost: u64 },
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Mis => "mis",
            Algorithm::KModes { .. } => "kmodes",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineWarning {
    /// Fixed-k run ran out of splittable data before reaching `requested`.
    Shortfall { requested: usize, produced: usize },
}

impl fmt::Display for EngineWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineWarning::Shortfall { requested, produced } => write!(
                f,
                "requested {requested} clusters but the working set became unsplittable after {produced}"
            ),
        }
    }
}

/// Clusters in extraction order, with the final residual last.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringResult {
    pub algorithm: Algorithm,
    pub config: EngineConfig,
    pub n_rows: usize,
    /// Row indices of each cluster, ascending.
    pub clusters: Vec<Vec<usize>>,
    pub splits: Vec<SplitRecord>,
    pub warning: Option<EngineWarning>,
}

impl ClusteringResult {
    pub fn n_clusters(&self) -> usize {
        self.clusters.len()
    }

    /// Cluster index of every row.
    pub fn assignments(&self) -> Vec<usize> {
        let mut out = vec![usize::MAX; self.n_rows];
        for (c, rows) in self.clusters.iter().enumerate() {
            for &r in rows {
                out[r] = c;
            }
        }
        out
    }

    pub fn cluster_samples<'a>(&self, dataset: &'a CategoricalDataset, index: usize) -> Result<SampleSet<'a>> {
        SampleSet::new(dataset, self.clusters[index].clone())
    }

    /// Check that clusters are non-empty and partition `0..n_rows`.
    pub fn validate_cover(&self) -> Result<()> {
        let mut seen = vec![false; self.n_rows];
        for (c, rows) in self.clusters.iter().enumerate() {
            if rows.is_empty() {
                return Err(Error::InvalidDataset(format!("cluster {c} is empty")));
            }
            for &r in rows {
                if r >= self.n_rows {
                    return Err(Error::RowOutOfRange { row: r, n_rows: self.n_rows });
                }
                if std::mem::replace(&mut seen[r], true) {
                    return Err(Error::DuplicateRow(r));
                }
            }
        }
        if let Some(r) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidDataset(format!("row {r} is in no cluster")));
        }
        Ok(())
    }
}

/// Per-attribute MIS on `working`, plus the winning attribute.
fn score_attributes(working: &SampleSet<'_>, active: &[usize], parallel: bool) -> Result<(Vec<(usize, f64)>, usize)> {
    if active.len() < 2 {
        return Err(Error::TooFewActiveAttributes(active.len()));
    }
    let matrix = MutualInformationMatrix::compute(working, active, parallel)?;
    let mut scores = Vec::with_capacity(active.len());
    let mut best: Option<(usize, f64)> = None;
    for (i, &a) in active.iter().enumerate() {
        let l = working.realized_categories(a)?;
        let score = matrix.row_sum(i) / l as f64;
        scores.push((a, score));
        if l < 2 {
            continue;
        }
        let better = match best {
            None => true,
            Some((b, s)) => score > s || (score == s && a < b),
        };
        if better {
            best = Some((a, score));
        }
    }
    let (winner, _) = best.ok_or(Error::Unsplittable)?;
    Ok((scores, winner))
}

/// The active attribute with the highest MIS on `working`, skipping attributes
/// that are constant there.
pub fn select_significant_attribute(working: &SampleSet<'_>, active: &[usize]) -> Result<usize> {
    if working.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    score_attributes(working, active, false).map(|(_, a)| a)
}

/// Split `working` by the categories of `attribute` and return the partition
/// with the least partition entropy, the union of the rest, and a record of
/// the step. The record's `mis_scores` is left empty; [`cluster`] fills it.
pub fn extract_min_entropy_partition<'a>(
    working: &SampleSet<'a>,
    attribute: usize,
    active: &[usize],
) -> Result<(SampleSet<'a>, SampleSet<'a>, SplitRecord)> {
    if working.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    let dataset = working.dataset();
    let values = dataset.attribute(attribute)?.values();
    let counts = working.category_counts(attribute)?;
    if counts.iter().filter(|&&c| c > 0).count() < 2 {
        return Err(Error::ConstantAttribute(attribute));
    }

    let mut parts: Vec<Vec<usize>> = counts.iter().map(|&c| Vec::with_capacity(c as usize)).collect();
    for &r in working.rows() {
        parts[values[r] as usize].push(r);
    }

    let mut partition_entropies = Vec::new();
    let mut chosen: Option<(u32, f64)> = None;
    for (cat, rows) in parts.iter().enumerate() {
        if rows.is_empty() {
            continue;
        }
        let h = partition_entropy(&SampleSet::from_trusted(dataset, rows.clone()), active)?;
        partition_entropies.push((cat as u32, h));
        if chosen.is_none_or(|(_, best)| h < best) {
            chosen = Some((cat as u32, h));
        }
    }
    let (chosen_category, _) = chosen.expect("at least two non-empty partitions");

    let cluster_rows = std::mem::take(&mut parts[chosen_category as usize]);
    let residual_rows: Vec<usize> = working
        .rows()
        .iter()
        .copied()
        .filter(|&r| values[r] != chosen_category)
        .collect();

    let record = SplitRecord {
        significant_attribute: attribute,
        chosen_category,
        partition_entropies,
        mis_scores: Vec::new(),
        working_entropy: partition_entropy(working, active)?,
        working_size: working.len(),
        cluster_size: cluster_rows.len(),
    };
    Ok((
        SampleSet::from_trusted(dataset, cluster_rows),
        SampleSet::from_trusted(dataset, residual_rows),
        record,
    ))
}

/// Run the clustering procedure over every attribute of `dataset`.
pub fn cluster(dataset: &CategoricalDataset, config: &EngineConfig) -> Result<ClusteringResult> {
    config.validate()?;
    if dataset.n_rows() < 2 {
        return Err(Error::DatasetTooSmall {
            what: "rows",
            needed: 2,
            found: dataset.n_rows(),
        });
    }
    if dataset.n_attributes() < 2 {
        return Err(Error::DatasetTooSmall {
            what: "attributes",
            needed: 2,
            found: dataset.n_attributes(),
        });
    }

    match config.parallelism {
        Some(1) => run(dataset, config, false),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("cannot start {n} worker threads: {e}")))?
            .install(|| run(dataset, config, true)),
        None => run(dataset, config, true),
    }
}

fn run(dataset: &CategoricalDataset, config: &EngineConfig, parallel: bool) -> Result<ClusteringResult> {
    let n = dataset.n_rows();
    let active: Vec<usize> = (0..dataset.n_attributes()).collect();
    let mut working = SampleSet::full(dataset);
    let mut clusters = Vec::new();
    let mut splits = Vec::new();
    let mut warning = None;

    loop {
        match config.mode {
            ClusterMode::FixedK(k) if clusters.len() + 1 == k => break,
            ClusterMode::Auto
                if config.min_cluster_fraction > 0.0
                    && (working.len() as f64) < config.min_cluster_fraction * n as f64 =>
            {
                debug!("event=stop reason=min_cluster_fraction working={}", working.len());
                break;
            }
            _ => {}
        }

        let (scores, attribute) = match score_attributes(&working, &active, parallel) {
            Ok(found) => found,
            Err(Error::Unsplittable) => {
                if let ClusterMode::FixedK(k) = config.mode {
                    let w = EngineWarning::Shortfall {
                        requested: k,
                        produced: clusters.len() + 1,
                    };
                    warn!("event=shortfall dataset={} detail=\"{w}\"", dataset.name());
                    warning = Some(w);
                } else {
                    debug!("event=stop reason=unsplittable working={}", working.len());
                }
                break;
            }
            Err(e) => return Err(e),
        };

        let (cluster, residual, mut record) = extract_min_entropy_partition(&working, attribute, &active)?;
        if config.mode == ClusterMode::Auto {
            let ratio = record.min_partition_entropy() / record.working_entropy;
            if ratio > config.auto_stop_ratio {
                debug!(
                    "event=stop reason=entropy_ratio ratio={ratio:.6} theta={}",
                    config.auto_stop_ratio
                );
                break;
            }
        }
        record.mis_scores = scores;
        debug!(
            "event=split step={} attribute={} category={} cluster_size={} residual={}",
            splits.len(),
            dataset.attributes()[attribute].name(),
            dataset.attributes()[attribute].category_name(record.chosen_category),
            cluster.len(),
            residual.len()
        );
        splits.push(record);
        clusters.push(cluster.into_rows());
        working = residual;
    }
    clusters.push(working.into_rows());

    info!(
        "event=cluster_done dataset={} mode={} clusters={}",
        dataset.name(),
        config.mode,
        clusters.len()
    );
    Ok(ClusteringResult {
        algorithm: Algorithm::Mis,
        config: *config,
        n_rows: n,
        clusters,
        splits,
        warning,
    })
}

/// Route an encoded row down the recorded splits. `None` marks a category the
/// dataset's dictionary does not know; it never matches a split.
pub fn assign_encoded(result: &ClusteringResult, row: &[Option<u32>]) -> Result<usize> {
    if result.splits.is_empty() && result.n_clusters() > 1 {
        return Err(Error::NotRoutable);
    }
    for (i, split) in result.splits.iter().enumerate() {
        let value = *row.get(split.significant_attribute).ok_or(Error::ArityMismatch {
            expected: split.significant_attribute + 1,
            found: row.len(),
        })?;
        if value == Some(split.chosen_category) {
            return Ok(i);
        }
    }
    Ok(result.splits.len())
}

/// Route a row of raw category strings (one per attribute) to a cluster index.
pub fn assign<S: AsRef<str>>(dataset: &CategoricalDataset, result: &ClusteringResult, row: &[S]) -> Result<usize> {
    if row.len() != dataset.n_attributes() {
        return Err(Error::ArityMismatch {
            expected: dataset.n_attributes(),
            found: row.len(),
        });
    }
    let encoded: Vec<Option<u32>> = dataset
        .attributes()
        .iter()
        .zip(row)
        .map(|(a, v)| a.category_index(v.as_ref()))
        .collect();
    assign_encoded(result, &encoded)
}
