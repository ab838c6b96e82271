//! k-modes: Hamming dissimilarity, per-cluster modes, random restarts.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::engine::{Algorithm, ClusteringResult, EngineConfig};
use crate::error::{Error, Result};
use crate::ingest::CategoricalDataset;

pub const DEFAULT_N_INIT: usize = 16;
const MAX_ITER: usize = 100;

pub fn hamming(a: &[u32], b: &[u32]) -> u64 {
    a.iter().zip(b).filter(|(x, y)| x != y).count() as u64
}

struct Run {
    cost: u64,
    assignment: Vec<usize>,
}

fn nearest(row: &[u32], modes: &[Vec<u32>]) -> (usize, u64) {
    let mut best = (0, u64::MAX);
    for (c, m) in modes.iter().enumerate() {
        let d = hamming(row, m);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

/// Most frequent category per attribute among `members`, lowest index on ties.
fn update_modes(dataset: &CategoricalDataset, rows: &[Vec<u32>], assignment: &[usize], modes: &mut [Vec<u32>]) {
    for (a, col) in dataset.attributes().iter().enumerate() {
        let mut counts = vec![vec![0usize; col.n_categories()]; modes.len()];
        for (r, &c) in assignment.iter().enumerate() {
            counts[c][rows[r][a] as usize] += 1;
        }
        for (c, cnt) in counts.iter().enumerate() {
            let mut best = (0usize, 0usize);
            for (cat, &n) in cnt.iter().enumerate() {
                if n > best.1 {
                    best = (cat, n);
                }
            }
            // Empty clusters keep their previous mode.
            if best.1 > 0 {
                modes[c][a] = best.0 as u32;
            }
        }
    }
}

fn single_run(dataset: &CategoricalDataset, rows: &[Vec<u32>], k: usize, rng: &mut ChaCha8Rng) -> Run {
    let n = rows.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut seeds: Vec<usize> = Vec::with_capacity(k);
    for &r in &order {
        if seeds.len() == k {
            break;
        }
        if seeds.iter().all(|&s| rows[s] != rows[r]) {
            seeds.push(r);
        }
    }
    for &r in &order {
        if seeds.len() == k {
            break;
        }
        if !seeds.contains(&r) {
            seeds.push(r);
        }
    }
    let mut modes: Vec<Vec<u32>> = seeds.iter().map(|&s| rows[s].clone()).collect();
    let mut assignment: Vec<usize> = rows.iter().map(|r| nearest(r, &modes).0).collect();
    for _ in 0..MAX_ITER {
        update_modes(dataset, rows, &assignment, &mut modes);
        let next: Vec<usize> = rows.iter().map(|r| nearest(r, &modes).0).collect();
        if next == assignment {
            break;
        }
        assignment = next;
    }
    let cost = rows
        .iter()
        .zip(&assignment)
        .map(|(r, &c)| hamming(r, &modes[c]))
        .sum();
    Run { cost, assignment }
}

/// Cluster `dataset` into at most `k` groups with k-modes, keeping the
/// lowest-cost of `n_init` restarts. Each restart draws from its own stream
/// of a generator seeded by `seed`, so results do not depend on thread count.
/// Clusters that end up empty are dropped; the rest are ordered by first row.
pub fn kmodes_cluster(dataset: &CategoricalDataset, k: usize, seed: u64, n_init: usize) -> Result<ClusteringResult> {
    if k == 0 {
        return Err(Error::InvalidConfig("k must be at least 1".into()));
    }
    if n_init == 0 {
        return Err(Error::InvalidConfig("n_init must be at least 1".into()));
    }
    let n = dataset.n_rows();
    if k > n {
        return Err(Error::TooManyClusters { k, n_rows: n });
    }
    let rows: Vec<Vec<u32>> = (0..n).map(|r| dataset.row(r)).collect();

    let runs: Vec<Run> = (0..n_init)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            single_run(dataset, &rows, k, &mut rng)
        })
        .collect();
    let best = runs
        .into_iter()
        .reduce(|best, run| if run.cost < best.cost { run } else { best })
        .expect("n_init >= 1");

    let mut clusters = vec![Vec::new(); k];
    for (r, &c) in best.assignment.iter().enumerate() {
        clusters[c].push(r);
    }
    clusters.retain(|c| !c.is_empty());
    clusters.sort_by_key(|c| c[0]);
    log::info!(
        "event=kmodes_done dataset={} k={k} clusters={} cost={}",
        dataset.name(),
        clusters.len(),
        best.cost
    );
    Ok(ClusteringResult {
        algorithm: Algorithm::KModes {
            seed,
            n_init,
            cost: best.cost,
        },
        config: EngineConfig::fixed_k(k),
        n_rows: n,
        clusters,
        splits: Vec::new(),
        warning: None,
    })
}
