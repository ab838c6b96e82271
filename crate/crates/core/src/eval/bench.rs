//! Benchmark harness: every selected algorithm on every manifest dataset,
//! with purity next to the published reference values.

use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kmodes::{kmodes_cluster, DEFAULT_N_INIT};
use super::published::{published_purity, DATASETS, PUBLISHED_PURITY};
use super::purity;
use crate::engine::{cluster, EngineConfig, DEFAULT_AUTO_STOP_RATIO};
use crate::error::{Error, Result};
use crate::ingest::{dataset_manifest_check, file_sha256, CategoricalDataset, Manifest, ManifestEntry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchAlgorithm {
    /// Fixed k equal to the dataset's class count.
    Mis,
    MisAuto,
    /// k-modes with k equal to the class count.
    Kmodes,
}

impl BenchAlgorithm {
    pub const ALL: [BenchAlgorithm; 3] = [BenchAlgorithm::Mis, BenchAlgorithm::MisAuto, BenchAlgorithm::Kmodes];

    pub fn name(self) -> &'static str {
        match self {
            BenchAlgorithm::Mis => "mis",
            BenchAlgorithm::MisAuto => "mis-auto",
            BenchAlgorithm::Kmodes => "kmodes",
        }
    }

    fn published_name(self) -> &'static str {
        match self {
            BenchAlgorithm::Mis => "MIS",
            BenchAlgorithm::MisAuto => "MIS-auto",
            BenchAlgorithm::Kmodes => "K-MODES",
        }
    }

    fn mode(self) -> &'static str {
        match self {
            BenchAlgorithm::MisAuto => "auto",
            _ => "fixed-k",
        }
    }
}

impl fmt::Display for BenchAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BenchAlgorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BenchAlgorithm::ALL
            .into_iter()
            .find(|a| a.name() == s.trim())
            .ok_or_else(|| {
                Error::InvalidConfig(format!("unknown algorithm {s:?}; expected one of mis, mis-auto, kmodes"))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchmarkOptions {
    pub algorithms: Vec<BenchAlgorithm>,
    pub seed: u64,
    pub n_init: usize,
    pub auto_stop_ratio: f64,
    pub min_cluster_fraction: f64,
    /// Worker threads for the whole run. `None` uses the global pool.
    #[serde(skip)]
    pub parallelism: Option<usize>,
}

impl Default for BenchmarkOptions {
    fn default() -> Self {
        BenchmarkOptions {
            algorithms: BenchAlgorithm::ALL.to_vec(),
            seed: 0,
            n_init: DEFAULT_N_INIT,
            auto_stop_ratio: DEFAULT_AUTO_STOP_RATIO,
            min_cluster_fraction: 0.0,
            parallelism: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRow {
    pub dataset: String,
    pub algorithm: BenchAlgorithm,
    pub mode: String,
    /// Requested cluster count, for fixed-k algorithms.
    pub k: Option<usize>,
    pub purity: Option<f64>,
    pub clusters: Option<usize>,
    pub wall_time_ms: f64,
    pub published: Option<f64>,
    pub warning: Option<String>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestHash {
    pub dataset: String,
    pub file: String,
    /// `None` when the file could not be read.
    pub sha256: Option<String>,
    pub expected: Option<String>,
}

impl ManifestHash {
    pub fn matches(&self) -> bool {
        match (&self.sha256, &self.expected) {
            (Some(a), Some(e)) => a.eq_ignore_ascii_case(e),
            (Some(_), None) => true,
            (None, _) => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub options: BenchmarkOptions,
    pub rows: Vec<BenchmarkRow>,
    pub manifest_hashes: Vec<ManifestHash>,
}

impl BenchmarkReport {
    pub fn row(&self, dataset: &str, algorithm: BenchAlgorithm) -> Option<&BenchmarkRow> {
        self.rows.iter().find(|r| r.dataset == dataset && r.algorithm == algorithm)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Plain-text tables: measured rows, then the full reference table.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<10} {:<9} {:>3} {:>8} {:>7} {:>9} {:>7} {:>10}",
            "dataset", "algorithm", "k", "clusters", "purity", "published", "diff", "time_ms"
        );
        for r in &self.rows {
            let opt = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.3}"));
            let diff = match (r.purity, r.published) {
                (Some(a), Some(b)) => format!("{:+.3}", a - b),
                _ => "-".into(),
            };
            let _ = write!(
                out,
                "{:<10} {:<9} {:>3} {:>8} {:>7} {:>9} {:>7} {:>10.1}",
                r.dataset,
                r.algorithm.name(),
                r.k.map_or("-".to_string(), |k| k.to_string()),
                r.clusters.map_or("-".to_string(), |c| c.to_string()),
                opt(r.purity),
                opt(r.published),
                diff,
                r.wall_time_ms
            );
            if let Some(e) = &r.error {
                let _ = write!(out, "  error: {e}");
            } else if let Some(w) = &r.warning {
                let _ = write!(out, "  warning: {w}");
            }
            out.push('\n');
        }
        out.push_str("\nreference purity\n");
        let _ = write!(out, "{:<10}", "algorithm");
        for d in DATASETS {
            let _ = write!(out, " {d:>8}");
        }
        let _ = writeln!(out, " {:>8}", "average");
        for row in &PUBLISHED_PURITY {
            let _ = write!(out, "{:<10}", row.algorithm);
            for p in row.purity {
                let _ = write!(out, " {p:>8.3}");
            }
            let _ = writeln!(out, " {:>8.3}", row.average);
        }
        out.push_str("\ninputs\n");
        for h in &self.manifest_hashes {
            let _ = writeln!(
                out,
                "{:<10} {} {}{}",
                h.dataset,
                h.sha256.as_deref().unwrap_or("unreadable"),
                h.file,
                if h.matches() { "" } else { "  (checksum mismatch)" }
            );
        }
        out
    }
}

fn prepare(manifest: &Manifest, entry: &ManifestEntry) -> (ManifestHash, Result<CategoricalDataset>) {
    let path = manifest.path_of(entry);
    let sha256 = file_sha256(&path).ok();
    let hash = ManifestHash {
        dataset: entry.name.clone(),
        file: path.display().to_string(),
        sha256,
        expected: entry.sha256.clone(),
    };
    if !hash.matches() && hash.sha256.is_some() {
        let err = Error::InvalidDataset(format!(
            "{}: sha256 {} does not match manifest {}",
            entry.name,
            hash.sha256.as_deref().unwrap_or(""),
            entry.sha256.as_deref().unwrap_or("")
        ));
        return (hash, Err(err));
    }
    let dataset = manifest.load_dataset(entry).and_then(|d| {
        let check = dataset_manifest_check(&d, entry);
        if check.passed() {
            Ok(d)
        } else {
            Err(Error::InvalidDataset(check.to_string()))
        }
    });
    (hash, dataset)
}

fn run_row(dataset: &CategoricalDataset, algorithm: BenchAlgorithm, options: &BenchmarkOptions) -> BenchmarkRow {
    let start = Instant::now();
    let labels = dataset.labels();
    let k = labels.map(|l| l.n_classes());
    let outcome = (|| {
        let labels = labels.ok_or(Error::MissingLabels)?;
        let k = labels.n_classes();
        let result = match algorithm {
            BenchAlgorithm::Mis => cluster(
                dataset,
                &EngineConfig::fixed_k(k).with_auto_stop_ratio(options.auto_stop_ratio),
            )?,
            BenchAlgorithm::MisAuto => {
                let mut config = EngineConfig::auto().with_auto_stop_ratio(options.auto_stop_ratio);
                config.min_cluster_fraction = options.min_cluster_fraction;
                cluster(dataset, &config)?
            }
            BenchAlgorithm::Kmodes => kmodes_cluster(dataset, k, options.seed, options.n_init)?,
        };
        Ok::<_, Error>((purity(&result, labels)?, result.n_clusters(), result.warning))
    })();
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    let mut row = BenchmarkRow {
        dataset: dataset.name().to_string(),
        algorithm,
        mode: algorithm.mode().to_string(),
        k: if algorithm == BenchAlgorithm::MisAuto { None } else { k },
        purity: None,
        clusters: None,
        wall_time_ms,
        published: published_purity(algorithm.published_name(), dataset.name()),
        warning: None,
        error: None,
    };
    match outcome {
        Ok((p, c, w)) => {
            row.purity = Some(p);
            row.clusters = Some(c);
            row.warning = w.map(|w| w.to_string());
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    log::info!(
        "event=bench_row dataset={} algorithm={} purity={} ms={:.1}",
        row.dataset,
        algorithm,
        row.purity.map_or("-".to_string(), |p| format!("{p:.4}")),
        wall_time_ms
    );
    row
}

fn error_row(entry: &ManifestEntry, algorithm: BenchAlgorithm, err: &Error) -> BenchmarkRow {
    BenchmarkRow {
        dataset: entry.name.clone(),
        algorithm,
        mode: algorithm.mode().to_string(),
        k: entry.expected_classes.filter(|_| algorithm != BenchAlgorithm::MisAuto),
        purity: None,
        clusters: None,
        wall_time_ms: 0.0,
        published: published_purity(algorithm.published_name(), &entry.name),
        warning: None,
        error: Some(err.to_string()),
    }
}

/// Run every selected algorithm on every non-optional manifest dataset (and
/// optional ones whose file exists). Failures are recorded per row; the run
/// continues. Rows come back in manifest order, then algorithm order.
pub fn run_benchmark(manifest: &Manifest, options: &BenchmarkOptions) -> Result<BenchmarkReport> {
    if options.n_init == 0 {
        return Err(Error::InvalidConfig("n_init must be at least 1".into()));
    }
    if options.parallelism == Some(0) {
        return Err(Error::InvalidConfig("parallelism must be at least 1".into()));
    }
    let go = || {
        let entries: Vec<&ManifestEntry> = manifest
            .datasets
            .iter()
            .filter(|e| !e.optional || manifest.path_of(e).exists())
            .collect();
        let prepared: Vec<(ManifestHash, Result<CategoricalDataset>)> =
            entries.par_iter().map(|e| prepare(manifest, e)).collect();
        let jobs: Vec<(usize, BenchAlgorithm)> = (0..entries.len())
            .flat_map(|i| options.algorithms.iter().map(move |&a| (i, a)))
            .collect();
        let rows: Vec<BenchmarkRow> = jobs
            .par_iter()
            .map(|&(i, a)| match &prepared[i].1 {
                Ok(d) => run_row(d, a, options),
                Err(e) => error_row(entries[i], a, e),
            })
            .collect();
        BenchmarkReport {
            options: options.clone(),
            rows,
            manifest_hashes: prepared.into_iter().map(|(h, _)| h).collect(),
        }
    };
    match options.parallelism {
        Some(n) => Ok(rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("cannot start {n} worker threads: {e}")))?
            .install(go)),
        None => Ok(go()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    fn write_fixture(dir: &std::path::Path) -> Manifest {
        let data = "a,x,p\na,x,p\na,y,p\nb,y,q\nb,y,q\nb,x,q\n";
        fs::write(dir.join("toy.data"), data).unwrap();
        let text = r#"
[[dataset]]
name = "toy"
file = "toy.data"
class_column = 2
expected_rows = 6
expected_classes = 2

[[dataset]]
name = "gone"
file = "gone.data"
class_column = 0

[[dataset]]
name = "extra"
file = "extra.data"
optional = true
"#;
        fs::write(dir.join("m.toml"), text).unwrap();
        Manifest::load(dir.join("m.toml")).unwrap()
    }

    #[test]
    fn runs_rows_and_records_missing_files() {
        let dir = tempfile::tempdir().unwrap();
        let m = write_fixture(dir.path());
        let report = run_benchmark(&m, &BenchmarkOptions::default()).unwrap();
        assert_eq!(report.rows.len(), 6);
        assert_eq!(report.manifest_hashes.len(), 2);
        let mis = report.row("toy", BenchAlgorithm::Mis).unwrap();
        assert_eq!(mis.k, Some(2));
        assert!(mis.purity.unwrap() >= 0.5);
        assert!(report.rows.iter().filter(|r| r.dataset == "gone").all(|r| r.error.is_some()));
        assert!(report.rows.iter().filter(|r| r.dataset == "toy").all(|r| r.error.is_none()));
        assert!(report.to_text().contains("reference purity"));
    }

    #[test]
    fn empty_algorithm_set_gives_an_empty_report() {
        let dir = tempfile::tempdir().unwrap();
        let m = write_fixture(dir.path());
        let options = BenchmarkOptions {
            algorithms: vec![],
            ..BenchmarkOptions::default()
        };
        let report = run_benchmark(&m, &options).unwrap();
        assert!(report.rows.is_empty());
        let back: BenchmarkReport = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(back.rows, report.rows);
    }

    #[test]
    fn reruns_give_identical_purities() {
        let dir = tempfile::tempdir().unwrap();
        let m = write_fixture(dir.path());
        let a = run_benchmark(&m, &BenchmarkOptions::default()).unwrap();
        let b = run_benchmark(&m, &BenchmarkOptions::default()).unwrap();
        let col = |r: &BenchmarkReport| r.rows.iter().map(|x| x.purity).collect::<Vec<_>>();
        assert_eq!(col(&a), col(&b));
    }

    #[test]
    fn algorithm_names_parse() {
        assert_eq!("mis-auto".parse::<BenchAlgorithm>().unwrap(), BenchAlgorithm::MisAuto);
        assert!("coolcat".parse::<BenchAlgorithm>().is_err());
    }
}
