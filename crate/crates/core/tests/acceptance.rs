//! Acceptance gate. Prints one line per criterion. Any hard failure exits
//! non-zero. Missed firm targets print FAIL and are listed at the end; they
//! become fatal with `MISCLUSTER_ACCEPTANCE_STRICT` set. Soft targets are
//! reported only.

use std::collections::HashMap;
use std::path::PathBuf;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use miscluster::engine::{
    assign_encoded, cluster, select_significant_attribute, Algorithm, ClusteringResult, EngineConfig,
};
use miscluster::eval::{kmodes_cluster, purity};
use miscluster::info::{
    entropy, kl_divergence, mutual_information, summed_mutual_information, CategoryDistribution, SampleSet,
};
use miscluster::ingest::{synth_missingness, AttributeColumn, CategoricalDataset, Manifest, PlantedMissingnessSpec};
use miscluster::summarize::{summarize_cluster, summarize_result};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Level {
    Hard,
    Firm,
    Soft,
}

impl Level {
    fn tag(self) -> &'static str {
        match self {
            Level::Hard => "hard",
            Level::Firm => "firm",
            Level::Soft => "soft",
        }
    }
}

struct Check {
    level: Level,
    ok: bool,
    detail: String,
}

impl Check {
    fn new(level: Level, ok: bool, detail: impl Into<String>) -> Self {
        Check {
            level,
            ok,
            detail: detail.into(),
        }
    }
}

struct Gate {
    fatal_hard: usize,
    missed_firm: Vec<usize>,
}

impl Gate {
    fn report(&mut self, id: usize, title: &str, checks: Vec<Check>, elapsed: f64) {
        let fatal = checks.iter().any(|c| !c.ok && c.level != Level::Soft);
        let soft_miss = checks.iter().any(|c| !c.ok && c.level == Level::Soft);
        let status = if fatal {
            "FAIL"
        } else if soft_miss {
            "PASS (soft target missed)"
        } else {
            "PASS"
        };
        let parts: Vec<String> = checks
            .iter()
            .map(|c| format!("[{}{}] {}", c.level.tag(), if c.ok { "" } else { " MISS" }, c.detail))
            .collect();
        println!("criterion {id} {title}: {status} ({elapsed:.1}s) {}", parts.join("; "));
        if checks.iter().any(|c| !c.ok && c.level == Level::Hard) {
            self.fatal_hard += 1;
        } else if fatal {
            self.missed_firm.push(id);
        }
    }
}

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn benchmark_datasets() -> Vec<CategoricalDataset> {
    let manifest = Manifest::load(data_dir().join("manifest.toml")).expect("manifest");
    ["zoo", "vote", "cancer", "mushroom", "balance", "chess"]
        .iter()
        .map(|name| {
            let entry = manifest.entry(name).expect("manifest entry");
            manifest.load_dataset(entry).expect("dataset loads")
        })
        .collect()
}

fn dataset_from_codes(rows: &[Vec<u32>], n_attrs: usize, n_cats: u32) -> CategoricalDataset {
    let attrs = (0..n_attrs)
        .map(|a| {
            AttributeColumn::new(
                format!("a{a}"),
                (0..n_cats).map(|c| format!("c{c}")).collect(),
                rows.iter().map(|r| r[a]).collect(),
            )
            .unwrap()
        })
        .collect();
    CategoricalDataset::new("fixture", attrs, None).unwrap()
}

// Independent reference: hashed joint counts, natural logs, converted at the end.
fn oracle_entropy(rows: &[Vec<u32>], a: usize) -> f64 {
    let mut counts: HashMap<u32, usize> = HashMap::new();
    for r in rows {
        *counts.entry(r[a]).or_default() += 1;
    }
    let n = rows.len() as f64;
    -counts.values().map(|&c| (c as f64 / n) * (c as f64 / n).ln()).sum::<f64>() / std::f64::consts::LN_2
}

fn oracle_mi(rows: &[Vec<u32>], a: usize, b: usize) -> f64 {
    let mut joint: HashMap<(u32, u32), usize> = HashMap::new();
    let mut ma: HashMap<u32, usize> = HashMap::new();
    let mut mb: HashMap<u32, usize> = HashMap::new();
    for r in rows {
        *joint.entry((r[a], r[b])).or_default() += 1;
        *ma.entry(r[a]).or_default() += 1;
        *mb.entry(r[b]).or_default() += 1;
    }
    let n = rows.len() as f64;
    joint
        .iter()
        .map(|(&(x, y), &c)| {
            let pxy = c as f64 / n;
            let px = ma[&x] as f64 / n;
            let py = mb[&y] as f64 / n;
            pxy * (pxy / (px * py)).ln()
        })
        .sum::<f64>()
        / std::f64::consts::LN_2
}

/// Every multiset of `n` rows drawn from `n_attrs` attributes with 3 categories.
fn row_multisets(n_attrs: usize, n: usize) -> Vec<Vec<Vec<u32>>> {
    let distinct: Vec<Vec<u32>> = (0..3u32.pow(n_attrs as u32))
        .map(|mut code| {
            (0..n_attrs)
                .map(|_| {
                    let v = code % 3;
                    code /= 3;
                    v
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        out.push(idx.iter().map(|&i| distinct[i].clone()).collect());
        // Next non-decreasing index tuple.
        let mut pos = n;
        while pos > 0 && idx[pos - 1] == distinct.len() - 1 {
            pos -= 1;
        }
        if pos == 0 {
            break;
        }
        idx[pos - 1] += 1;
        let v = idx[pos - 1];
        for slot in idx.iter_mut().skip(pos) {
            *slot = v;
        }
    }
    out
}

fn criterion_1() -> Vec<Check> {
    let mut count = 0usize;
    let mut worst = 0.0f64;
    for n_attrs in 2..=3 {
        for n in 1..=5 {
            for rows in row_multisets(n_attrs, n) {
                let d = dataset_from_codes(&rows, n_attrs, 3);
                let s = SampleSet::full(&d);
                for a in 0..n_attrs {
                    worst = worst.max((entropy(&s, a).unwrap() - oracle_entropy(&rows, a)).abs());
                    for b in 0..n_attrs {
                        worst = worst.max((mutual_information(&s, a, b).unwrap() - oracle_mi(&rows, a, b)).abs());
                    }
                }
                count += 1;
            }
        }
    }
    vec![Check::new(
        Level::Hard,
        worst <= 1e-12,
        format!("{count} datasets up to row order, max abs error {worst:.2e} (tol 1e-12)"),
    )]
}

fn random_codes(rng: &mut ChaCha8Rng, n: usize, n_attrs: usize, n_cats: u32) -> Vec<Vec<u32>> {
    (0..n)
        .map(|_| (0..n_attrs).map(|_| rng.random_range(0..n_cats)).collect())
        .collect()
}

fn random_distribution(rng: &mut ChaCha8Rng, len: usize, allow_zero: bool) -> Vec<f64> {
    let raw: Vec<f64> = (0..len)
        .map(|_| {
            if allow_zero && rng.random_bool(0.3) {
                0.0
            } else {
                rng.random_range(0.01..1.0)
            }
        })
        .collect();
    let total: f64 = raw.iter().sum();
    if total == 0.0 {
        let mut v = vec![0.0; len];
        v[0] = 1.0;
        return v;
    }
    raw.iter().map(|x| x / total).collect()
}

fn criterion_2() -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let fixtures = 1500;
    let mut failures: Vec<String> = Vec::new();
    for i in 0..fixtures {
        let n = rng.random_range(1..80);
        let n_attrs = rng.random_range(2..6);
        let n_cats = rng.random_range(1..7);
        let rows = random_codes(&mut rng, n, n_attrs, n_cats);
        let d = dataset_from_codes(&rows, n_attrs, n_cats);
        let s = SampleSet::full(&d);
        let h: Vec<f64> = (0..n_attrs).map(|a| entropy(&s, a).unwrap()).collect();
        for a in 0..n_attrs {
            let self_mi = mutual_information(&s, a, a).unwrap();
            if (self_mi - h[a]).abs() > 1e-9 {
                failures.push(format!("fixture {i}: MI(a,a)={self_mi} H={}", h[a]));
            }
            for b in 0..n_attrs {
                let ab = mutual_information(&s, a, b).unwrap();
                let ba = mutual_information(&s, b, a).unwrap();
                if ab.to_bits() != ba.to_bits() {
                    failures.push(format!("fixture {i}: asymmetric MI {ab} vs {ba}"));
                }
                if !(ab >= 0.0 && ab <= h[a].min(h[b]) + 1e-9) {
                    failures.push(format!("fixture {i}: MI {ab} outside [0, {}]", h[a].min(h[b])));
                }
            }
        }
        let len = rng.random_range(1..8);
        let p = CategoryDistribution::new(random_distribution(&mut rng, len, false)).unwrap();
        let q_raw: Vec<f64> = random_distribution(&mut rng, len, true);
        let q = CategoryDistribution::new(q_raw).unwrap();
        let kl = kl_divergence(&q, &p).unwrap();
        if kl < 0.0 {
            failures.push(format!("fixture {i}: KL {kl} < 0"));
        }
        if kl_divergence(&q, &q).unwrap() != 0.0 || kl_divergence(&p, &p).unwrap() != 0.0 {
            failures.push(format!("fixture {i}: KL(q,q) not exactly 0"));
        }
    }
    vec![Check::new(
        Level::Hard,
        failures.is_empty(),
        if failures.is_empty() {
            format!("{fixtures} fixtures: symmetry, bounds, self-information, KL sign and identity")
        } else {
            format!("{} violations, first: {}", failures.len(), failures[0])
        },
    )]
}

/// Structural invariants of one run on one dataset. Returns problems found.
fn structural_problems(d: &CategoricalDataset, config: EngineConfig) -> Vec<String> {
    let mut problems = Vec::new();
    let max_threads = std::thread::available_parallelism().map_or(4, |n| n.get()).max(2);
    let seq = match cluster(d, &config.with_parallelism(Some(1))) {
        Ok(r) => r,
        Err(e) => {
            return vec![format!("{}: {e}", d.name())];
        }
    };
    let par = cluster(d, &config.with_parallelism(Some(max_threads))).unwrap();
    let again = cluster(d, &config.with_parallelism(Some(max_threads))).unwrap();
    let strip = |mut r: ClusteringResult| {
        r.config.parallelism = None;
        r
    };
    let (seq, par, again) = (strip(seq), strip(par), strip(again));
    if seq != par || par != again {
        problems.push(format!("{}: results differ across runs or thread counts", d.name()));
    }
    if let Err(e) = seq.validate_cover() {
        problems.push(format!("{}: cover: {e}", d.name()));
    }
    let mut expected_working = d.n_rows();
    for (i, s) in seq.splits.iter().enumerate() {
        if s.working_size != expected_working || s.cluster_size == 0 || s.cluster_size >= s.working_size {
            problems.push(format!("{}: residual not shrinking at step {i}", d.name()));
        }
        expected_working -= s.cluster_size;
    }
    if seq.clusters.last().map(Vec::len) != Some(expected_working) {
        problems.push(format!("{}: final residual size mismatch", d.name()));
    }
    let assignments = seq.assignments();
    for r in 0..d.n_rows() {
        let encoded: Vec<Option<u32>> = d.row(r).into_iter().map(Some).collect();
        if assign_encoded(&seq, &encoded).ok() != Some(assignments[r]) {
            problems.push(format!("{}: row {r} routes away from its training cluster", d.name()));
            break;
        }
    }
    let doubled = d.repeated(2);
    let dup = strip(cluster(&doubled, &config.with_parallelism(Some(max_threads))).unwrap());
    let n = d.n_rows();
    let mapped: Vec<Vec<usize>> = seq
        .clusters
        .iter()
        .map(|c| {
            let mut v: Vec<usize> = c.iter().copied().chain(c.iter().map(|r| r + n)).collect();
            v.sort_unstable();
            v
        })
        .collect();
    let same_steps = dup.splits.len() == seq.splits.len()
        && dup.splits.iter().zip(&seq.splits).all(|(a, b)| {
            a.significant_attribute == b.significant_attribute && a.chosen_category == b.chosen_category
        });
    if dup.clusters != mapped || !same_steps {
        problems.push(format!("{}: duplicating every row changes the clustering", d.name()));
    }
    problems
}

fn random_structured(rng: &mut ChaCha8Rng, i: usize) -> CategoricalDataset {
    let n = rng.random_range(8..120);
    let n_attrs = rng.random_range(2..7);
    let n_cats = rng.random_range(2..5);
    // Half the fixtures get a hidden group that drives some attributes.
    let groups = if i % 2 == 0 { rng.random_range(2..4) } else { 1 };
    let rows: Vec<Vec<u32>> = (0..n)
        .map(|_| {
            let g = rng.random_range(0..groups) as u32;
            (0..n_attrs)
                .map(|a| {
                    if a % 2 == 0 && rng.random_bool(0.8) {
                        g % n_cats
                    } else {
                        rng.random_range(0..n_cats)
                    }
                })
                .collect()
        })
        .collect();
    dataset_from_codes(&rows, n_attrs, n_cats)
}

fn criterion_3(uci: &[CategoricalDataset]) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut problems = Vec::new();
    let n_random = 60;
    for i in 0..n_random {
        let d = random_structured(&mut rng, i);
        let k = rng.random_range(2..5);
        problems.extend(structural_problems(&d, EngineConfig::fixed_k(k)));
        problems.extend(structural_problems(&d, EngineConfig::auto()));
    }
    for d in uci {
        let k = d.labels().unwrap().n_classes();
        problems.extend(structural_problems(d, EngineConfig::fixed_k(k)));
        problems.extend(structural_problems(d, EngineConfig::auto()));
    }
    vec![Check::new(
        Level::Hard,
        problems.is_empty(),
        if problems.is_empty() {
            format!(
                "{n_random} random + {} benchmark datasets, fixed-k and auto: cover, determinism (1 vs max threads), shrinking residual, assign, duplication",
                uci.len()
            )
        } else {
            format!("{} problems, first: {}", problems.len(), problems[0])
        },
    )]
}

const FIXED_K: [(&str, f64); 6] = [
    ("zoo", 0.891),
    ("vote", 0.828),
    ("cancer", 0.882),
    ("mushroom", 0.743),
    ("balance", 0.635),
    ("chess", 0.533),
];

const AUTO: [(&str, f64); 6] = [
    ("zoo", 0.891),
    ("vote", 0.949),
    ("cancer", 0.927),
    ("mushroom", 0.828),
    ("balance", 0.635),
    ("chess", 0.558),
];

fn split_trace(d: &CategoricalDataset, r: &ClusteringResult) -> String {
    r.splits
        .iter()
        .map(|s| {
            let a = &d.attributes()[s.significant_attribute];
            format!(
                "{}={} ({} of {}, H={:.4}/{:.4})",
                a.name(),
                a.category_name(s.chosen_category),
                s.cluster_size,
                s.working_size,
                s.min_partition_entropy(),
                s.working_entropy
            )
        })
        .collect::<Vec<_>>()
        .join(" | ")
}

fn criterion_4(uci: &[CategoricalDataset], fixed: &mut Vec<f64>) -> Vec<Check> {
    let mut checks = Vec::new();
    for (d, &(name, target)) in uci.iter().zip(&FIXED_K) {
        let labels = d.labels().unwrap();
        let r = cluster(d, &EngineConfig::fixed_k(labels.n_classes())).unwrap();
        let p = purity(&r, labels).unwrap();
        fixed.push(p);
        let ok = (p - target).abs() <= 0.03;
        let mut detail = format!("{name} {p:.3} vs {target:.3}");
        if !ok {
            detail.push_str(&format!(" trace: {}", split_trace(d, &r)));
        }
        checks.push(Check::new(Level::Firm, ok, detail));
        if name == "balance" {
            let mut counts = vec![0usize; labels.n_classes()];
            for &id in labels.ids() {
                counts[id as usize] += 1;
            }
            let floor = *counts.iter().max().unwrap() as f64 / d.n_rows() as f64;
            checks.push(Check::new(
                Level::Firm,
                p >= floor - 1e-12,
                format!("balance floor {p:.3} >= majority {floor:.3}"),
            ));
        }
    }
    checks
}

fn criterion_5(uci: &[CategoricalDataset], fixed: &[f64]) -> Vec<Check> {
    let mut checks = Vec::new();
    let mut at_least = 0;
    let mut summary = Vec::new();
    for ((d, &(name, target)), &fixed_p) in uci.iter().zip(&AUTO).zip(fixed) {
        let r = cluster(d, &EngineConfig::auto()).unwrap();
        let p = purity(&r, d.labels().unwrap()).unwrap();
        checks.push(Check::new(
            Level::Soft,
            (p - target).abs() <= 0.07,
            format!("{name} {p:.3} vs {target:.3} ({} clusters)", r.n_clusters()),
        ));
        if p >= fixed_p - 0.02 {
            at_least += 1;
        }
        summary.push(format!("{name} {p:.3}/{fixed_p:.3}"));
    }
    checks.push(Check::new(
        Level::Firm,
        at_least >= 4,
        format!("auto >= fixed-k - 0.02 on {at_least}/6 ({})", summary.join(", ")),
    ));
    checks
}

/// Summed MI where each pair only counts rows with neither value missing.
fn pairwise_complete_argmax(d: &CategoricalDataset) -> String {
    let rows: Vec<Vec<u32>> = (0..d.n_rows()).map(|r| d.row(r)).collect();
    let missing: Vec<Option<u32>> = d.attributes().iter().map(|a| a.missing_index()).collect();
    let m = d.n_attributes();
    let mut totals = vec![0.0; m];
    for a in 0..m {
        for b in (a + 1)..m {
            let kept: Vec<Vec<u32>> = rows
                .iter()
                .filter(|r| Some(r[a]) != missing[a] && Some(r[b]) != missing[b])
                .cloned()
                .collect();
            let mi = oracle_mi(&kept, a, b);
            totals[a] += mi;
            totals[b] += mi;
        }
    }
    let best = (0..m).max_by(|&x, &y| totals[x].total_cmp(&totals[y])).unwrap();
    format!("{} ({:.4} bits)", d.attributes()[best].name(), totals[best])
}

fn criterion_6(uci: &[CategoricalDataset]) -> Vec<Check> {
    let d = uci.iter().find(|d| d.name() == "mushroom").unwrap();
    let s = SampleSet::full(d);
    let active: Vec<usize> = (0..d.n_attributes()).collect();
    let mut summed: Vec<(usize, f64)> = active
        .iter()
        .map(|&a| (a, summed_mutual_information(&s, a, &active).unwrap()))
        .collect();
    summed.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.cmp(&y.0)));
    let mis = select_significant_attribute(&s, &active).unwrap();
    let by_mi = d.attributes()[summed[0].0].name();
    let runner_up = d.attributes()[summed[1].0].name();
    let by_mis = d.attributes()[mis].name();
    let mut mi_detail = format!(
        "argmax summed MI = {by_mi} ({:.4} bits), next {runner_up} ({:.4})",
        summed[0].1, summed[1].1
    );
    if by_mi != "odor" {
        mi_detail.push_str(&format!(
            "; with missing cells dropped pairwise instead of kept as a category: {}",
            pairwise_complete_argmax(d)
        ));
    }
    vec![
        Check::new(Level::Firm, by_mi == "odor", mi_detail),
        Check::new(Level::Firm, by_mis == "bruises", format!("argmax MIS = {by_mis}")),
    ]
}

fn criterion_7(uci: &[CategoricalDataset]) -> Vec<Check> {
    let mut checks = Vec::new();
    let mut max_div = 0.0f64;
    for d in uci {
        let all: Vec<usize> = (0..d.n_rows()).collect();
        let s = summarize_cluster(d, 0, &all).unwrap();
        for a in &s.attribute_divergences {
            max_div = max_div.max(a.divergence.abs());
            for c in &a.categories {
                max_div = max_div.max(c.delta.abs());
            }
        }
    }
    checks.push(Check::new(
        Level::Hard,
        max_div == 0.0,
        format!("whole-dataset cluster: max |divergence|, |delta| = {max_div}"),
    ));

    let spec = PlantedMissingnessSpec::load(data_dir().join("synth/planted.toml")).unwrap();
    let d = synth_missingness(&spec, 7).unwrap();
    let rule = &spec.rules[0];
    let given = d.attribute_index(&rule.given).unwrap();
    let given_col = &d.attributes()[given];
    let rate_of = |row: usize| {
        rule.missing_rate
            .get(given_col.category_name(given_col.values()[row]))
            .copied()
            .unwrap_or(0.0)
    };
    let global_rate = (0..d.n_rows()).map(rate_of).sum::<f64>() / d.n_rows() as f64;
    let result = cluster(&d, &EngineConfig::auto()).unwrap();
    let summaries = summarize_result(&d, &result).unwrap();
    let mut found = Vec::new();
    let mut others = Vec::new();
    for (s, rows) in summaries.iter().zip(&result.clusters) {
        let top = s.top_attribute().unwrap();
        if !rule.targets.contains(&top.name) {
            continue;
        }
        // Expected missingness of this cluster's placement mix, relative to all rows.
        let expected = rows.iter().map(|&r| rate_of(r)).sum::<f64>() / rows.len() as f64 - global_rate;
        let delta = top.categories.iter().find(|c| c.name == "?").map_or(0.0, |c| c.delta);
        let line = format!("cluster {} top={} ?-delta {delta:+.3} plant {expected:+.3}", s.cluster_index, top.name);
        if expected != 0.0 && delta != 0.0 && expected.signum() == delta.signum() {
            found.push(line);
        } else {
            others.push(line);
        }
    }
    checks.push(Check::new(
        Level::Hard,
        !found.is_empty(),
        format!(
            "planted {} rows, {} clusters; matching: {}; other planted-top clusters (carved from an already missing-free residual): {}",
            d.n_rows(),
            result.n_clusters(),
            if found.is_empty() { "none".to_string() } else { found.join(", ") },
            others.len()
        ),
    ));
    checks
}

fn kmodes_cost(r: &ClusteringResult) -> u64 {
    match r.algorithm {
        Algorithm::KModes { cost, .. } => cost,
        Algorithm::Mis => unreachable!(),
    }
}

fn criterion_8(uci: &[CategoricalDataset]) -> Vec<Check> {
    let zoo = uci.iter().find(|d| d.name() == "zoo").unwrap();
    let r = kmodes_cluster(zoo, 7, 0, 16).unwrap();
    let p = purity(&r, zoo.labels().unwrap()).unwrap();
    let mut checks = vec![Check::new(
        Level::Soft,
        (p - 0.860).abs() <= 0.08,
        format!("zoo k=7 n_init=16 purity {p:.3} vs 0.860"),
    )];

    // Global column modes by direct counting.
    let one = kmodes_cluster(zoo, 1, 0, 4).unwrap();
    let mut expected = 0u64;
    for col in zoo.attributes() {
        let mut counts = vec![0u64; col.n_categories()];
        for &v in col.values() {
            counts[v as usize] += 1;
        }
        expected += zoo.n_rows() as u64 - counts.iter().max().unwrap();
    }
    checks.push(Check::new(
        Level::Firm,
        one.n_clusters() == 1 && kmodes_cost(&one) == expected,
        format!("k=1 cost {} vs {expected}", kmodes_cost(&one)),
    ));

    let mut rows: Vec<Vec<u32>> = vec![vec![0, 0, 0, 0]; 30];
    rows.extend(vec![vec![1, 2, 1, 2]; 20]);
    let blobs = dataset_from_codes(&rows, 4, 3);
    let two = kmodes_cluster(&blobs, 2, 5, 16).unwrap();
    let ok = two.clusters == vec![(0..30).collect::<Vec<_>>(), (30..50).collect()] && kmodes_cost(&two) == 0;
    checks.push(Check::new(Level::Firm, ok, format!("two blobs k=2 recovered, cost {}", kmodes_cost(&two))));
    checks
}

fn main() {
    // `cargo test` passes harness flags; listing-only runs have nothing to list.
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let mut gate = Gate {
        fatal_hard: 0,
        missed_firm: Vec::new(),
    };
    let uci = benchmark_datasets();

    let t = Instant::now();
    gate.report(1, "oracle equivalence", criterion_1(), t.elapsed().as_secs_f64());
    let t = Instant::now();
    gate.report(2, "information-theory properties", criterion_2(), t.elapsed().as_secs_f64());
    let t = Instant::now();
    gate.report(3, "clustering structure", criterion_3(&uci), t.elapsed().as_secs_f64());
    let t = Instant::now();
    let mut fixed = Vec::new();
    gate.report(4, "fixed-k purity", criterion_4(&uci, &mut fixed), t.elapsed().as_secs_f64());
    let t = Instant::now();
    gate.report(5, "auto purity", criterion_5(&uci, &fixed), t.elapsed().as_secs_f64());
    let t = Instant::now();
    gate.report(6, "mushroom significant attribute", criterion_6(&uci), t.elapsed().as_secs_f64());
    let t = Instant::now();
    gate.report(7, "summarizer", criterion_7(&uci), t.elapsed().as_secs_f64());
    let t = Instant::now();
    gate.report(8, "k-modes baseline", criterion_8(&uci), t.elapsed().as_secs_f64());

    let strict = std::env::var_os("MISCLUSTER_ACCEPTANCE_STRICT").is_some();
    if !gate.missed_firm.is_empty() {
        println!(
            "acceptance: firm reproduction target(s) missed in criterion {}; documented as known deviations",
            gate.missed_firm.iter().map(usize::to_string).collect::<Vec<_>>().join(", ")
        );
    }
    if gate.fatal_hard > 0 || (strict && !gate.missed_firm.is_empty()) {
        println!("acceptance: FAILED");
        std::process::exit(1);
    }
    println!("acceptance: all hard checks passed");
}
