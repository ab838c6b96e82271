//! Cluster profiles: how each attribute's category distribution inside a
//! cluster departs from its distribution over the whole dataset.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::ClusteringResult;
use crate::error::{Error, Result};
use crate::info::{kl_divergence, CategoryDistribution, SampleSet};
use crate::ingest::CategoricalDataset;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CategoryDelta {
    pub category: u32,
    pub name: String,
    /// Share of the cluster in this category.
    pub cluster_share: f64,
    /// Share of the whole dataset in this category.
    pub base_share: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttributeDivergence {
    pub attribute: usize,
    pub name: String,
    /// D(cluster || global) in bits.
    pub divergence: f64,
    /// One entry per dictionary category, in dictionary order.
    pub categories: Vec<CategoryDelta>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterSummary {
    pub cluster_index: usize,
    pub size: usize,
    pub size_fraction: f64,
    /// Sorted by descending divergence, ties by attribute name.
    pub attribute_divergences: Vec<AttributeDivergence>,
}

impl ClusterSummary {
    pub fn top_attribute(&self) -> Option<&AttributeDivergence> {
        self.attribute_divergences.first()
    }

    pub fn attribute(&self, name: &str) -> Option<&AttributeDivergence> {
        self.attribute_divergences.iter().find(|a| a.name == name)
    }
}

fn global_distributions(dataset: &CategoricalDataset) -> Result<Vec<CategoryDistribution>> {
    let all = SampleSet::full(dataset);
    (0..dataset.n_attributes())
        .map(|a| CategoryDistribution::from_samples(&all, a))
        .collect()
}

fn summarize_with(
    dataset: &CategoricalDataset,
    globals: &[CategoryDistribution],
    cluster_index: usize,
    cluster: &SampleSet<'_>,
) -> Result<ClusterSummary> {
    let mut attribute_divergences = Vec::with_capacity(dataset.n_attributes());
    for (a, (col, p)) in dataset.attributes().iter().zip(globals).enumerate() {
        let q = CategoryDistribution::from_samples(cluster, a)?;
        let divergence = kl_divergence(&q, p)?;
        let categories = q
            .probabilities()
            .iter()
            .zip(p.probabilities())
            .enumerate()
            .map(|(c, (&qc, &pc))| CategoryDelta {
                category: c as u32,
                name: col.category_name(c as u32).to_string(),
                cluster_share: qc,
                base_share: pc,
                delta: qc - pc,
            })
            .collect();
        attribute_divergences.push(AttributeDivergence {
            attribute: a,
            name: col.name().to_string(),
            divergence,
            categories,
        });
    }
    attribute_divergences.sort_by(|x, y| {
        y.divergence
            .total_cmp(&x.divergence)
            .then_with(|| x.name.cmp(&y.name))
    });
    Ok(ClusterSummary {
        cluster_index,
        size: cluster.len(),
        size_fraction: cluster.len() as f64 / dataset.n_rows() as f64,
        attribute_divergences,
    })
}

/// Profile one cluster against the whole dataset.
pub fn summarize_cluster(dataset: &CategoricalDataset, cluster_index: usize, rows: &[usize]) -> Result<ClusterSummary> {
    let cluster = SampleSet::new(dataset, rows.to_vec())?;
    if cluster.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    summarize_with(dataset, &global_distributions(dataset)?, cluster_index, &cluster)
}

/// Profile every cluster of a result. Clusters are processed in parallel;
/// the output keeps cluster order.
pub fn summarize_result(dataset: &CategoricalDataset, result: &ClusteringResult) -> Result<Vec<ClusterSummary>> {
    if result.n_rows != dataset.n_rows() {
        return Err(Error::InvalidDataset(format!(
            "result covers {} rows but dataset has {}",
            result.n_rows,
            dataset.n_rows()
        )));
    }
    let globals = global_distributions(dataset)?;
    result
        .clusters
        .par_iter()
        .enumerate()
        .map(|(i, rows)| {
            let cluster = SampleSet::new(dataset, rows.clone())?;
            summarize_with(dataset, &globals, i, &cluster)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportOptions {
    /// Attributes shown per cluster in the text report.
    pub top_attributes: usize,
    /// Categories shown per attribute, largest |delta| first. `None` shows all.
    pub top_categories: Option<usize>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            top_attributes: 5,
            top_categories: None,
        }
    }
}

/// The two renderings of a set of summaries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    /// Human-readable profile, top attributes only.
    pub text: String,
    /// CSV with one record per (cluster, attribute, category).
    pub records: String,
}

/// `"69.0% (base 12.0%)"`.
pub fn format_share(cluster_share: f64, base_share: f64) -> String {
    format!("{:.1}% (base {:.1}%)", cluster_share * 100.0, base_share * 100.0)
}

pub fn render_report(summaries: &[ClusterSummary], options: &ReportOptions) -> Report {
    Report {
        text: render_text(summaries, options),
        records: render_records(summaries),
    }
}

fn render_text(summaries: &[ClusterSummary], options: &ReportOptions) -> String {
    let mut out = String::new();
    for (i, s) in summaries.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "cluster {}: {} rows ({:.1}% of all rows)",
            s.cluster_index,
            s.size,
            s.size_fraction * 100.0
        );
        for (rank, a) in s.attribute_divergences.iter().take(options.top_attributes).enumerate() {
            let _ = writeln!(out, "  {}. {}  KL={:.6} bits", rank + 1, a.name, a.divergence);
            let mut cats: Vec<&CategoryDelta> = a
                .categories
                .iter()
                .filter(|c| c.cluster_share > 0.0 || c.base_share > 0.0)
                .collect();
            cats.sort_by(|x, y| {
                y.delta
                    .abs()
                    .total_cmp(&x.delta.abs())
                    .then(x.category.cmp(&y.category))
            });
            let width = cats.iter().map(|c| c.name.len()).max().unwrap_or(0);
            for c in cats.into_iter().take(options.top_categories.unwrap_or(usize::MAX)) {
                let share = format_share(c.cluster_share, c.base_share);
                let _ = writeln!(out, "       {:<width$}  {share:>19}  {:+6.1} pts", c.name, c.delta * 100.0);
            }
        }
    }
    out
}

fn render_records(summaries: &[ClusterSummary]) -> String {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["cluster", "attribute", "category", "q", "p", "delta", "divergence"])
        .expect("in-memory write");
    for s in summaries {
        for a in &s.attribute_divergences {
            for c in &a.categories {
                wtr.write_record([
                    s.cluster_index.to_string(),
                    a.name.clone(),
                    c.name.clone(),
                    format!("{:.6}", c.cluster_share),
                    format!("{:.6}", c.base_share),
                    format!("{:.6}", c.delta),
                    format!("{:.6}", a.divergence),
                ])
                .expect("in-memory write");
            }
        }
    }
    String::from_utf8(wtr.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}
