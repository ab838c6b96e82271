//! External evaluation: purity, the k-modes baseline, and the benchmark harness.

mod bench;
mod kmodes;
pub mod published;

pub use bench::{run_benchmark, BenchAlgorithm, BenchmarkOptions, BenchmarkReport, BenchmarkRow, ManifestHash};
pub use kmodes::{hamming, kmodes_cluster, DEFAULT_N_INIT};

use crate::engine::ClusteringResult;
use crate::error::{Error, Result};
use crate::ingest::ClassLabels;

/// Fraction of rows that belong to the majority class of their cluster.
pub fn purity(result: &ClusteringResult, labels: &ClassLabels) -> Result<f64> {
    purity_of_clusters(&result.clusters, labels.ids(), labels.n_classes())
}

/// Purity of an explicit list of clusters over per-row class ids.
pub fn purity_of_clusters(clusters: &[Vec<usize>], class_ids: &[u32], n_classes: usize) -> Result<f64> {
    let n: usize = clusters.iter().map(Vec::len).sum();
    if n != class_ids.len() {
        return Err(Error::ArityMismatch {
            expected: n,
            found: class_ids.len(),
        });
    }
    if n == 0 {
        return Err(Error::EmptySampleSet);
    }
    let mut counts = vec![0usize; n_classes];
    let mut majority_total = 0usize;
    for rows in clusters {
        counts.iter_mut().for_each(|c| *c = 0);
        for &r in rows {
            let id = *class_ids.get(r).ok_or(Error::RowOutOfRange {
                row: r,
                n_rows: class_ids.len(),
            })? as usize;
            if id >= n_classes {
                return Err(Error::InvalidDataset(format!("class id {id} out of range")));
            }
            counts[id] += 1;
        }
        majority_total += counts.iter().copied().max().unwrap_or(0);
    }
    Ok(majority_total as f64 / n as f64)
}
