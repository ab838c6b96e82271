//! Information-theoretic kernels over subsets of a dataset's rows.
//!
//! Everything here is in bits and uses plug-in (maximum-likelihood)
//! probabilities. Counts are accumulated as integers and only divided at the
//! end. Zero-count cells contribute nothing.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ingest::CategoricalDataset;

/// A subset of a dataset's rows.
#[derive(Debug, Clone)]
pub struct SampleSet<'a> {
    dataset: &'a CategoricalDataset,
    rows: Vec<usize>,
}

impl<'a> SampleSet<'a> {
    /// Every row of the dataset.
    pub fn full(dataset: &'a CategoricalDataset) -> Self {
        SampleSet {
            dataset,
            rows: (0..dataset.n_rows()).collect(),
        }
    }

    /// A subset given by row indices. Indices must be unique and in range;
    /// they are kept in the given order.
    pub fn new(dataset: &'a CategoricalDataset, rows: Vec<usize>) -> Result<Self> {
        let n = dataset.n_rows();
        let mut seen = vec![false; n];
        for &r in &rows {
            if r >= n {
                return Err(Error::RowOutOfRange { row: r, n_rows: n });
            }
            if std::mem::replace(&mut seen[r], true) {
                return Err(Error::DuplicateRow(r));
            }
        }
        Ok(SampleSet { dataset, rows })
    }

    pub(crate) fn from_trusted(dataset: &'a CategoricalDataset, rows: Vec<usize>) -> Self {
        SampleSet { dataset, rows }
    }

    pub fn dataset(&self) -> &'a CategoricalDataset {
        self.dataset
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<usize> {
        self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    fn require_non_empty(&self) -> Result<()> {
        if self.rows.is_empty() {
            Err(Error::EmptySampleSet)
        } else {
            Ok(())
        }
    }

    /// Per-category counts of an attribute over these rows, indexed by the
    /// attribute's global dictionary.
    pub fn category_counts(&self, attribute: usize) -> Result<Vec<u64>> {
        let col = self.dataset.attribute(attribute)?;
        let values = col.values();
        let mut counts = vec![0u64; col.n_categories()];
        for &r in &self.rows {
            counts[values[r] as usize] += 1;
        }
        Ok(counts)
    }

    /// Number of distinct categories the attribute takes on these rows.
    pub fn realized_categories(&self, attribute: usize) -> Result<usize> {
        Ok(self.category_counts(attribute)?.iter().filter(|&&c| c > 0).count())
    }

    pub fn is_constant(&self, attribute: usize) -> Result<bool> {
        Ok(self.realized_categories(attribute)? <= 1)
    }
}

fn entropy_of_counts(counts: &[u64], total: u64) -> f64 {
    let n = total as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum()
}

/// Shannon entropy (bits) of an attribute's empirical distribution on `samples`.
pub fn entropy(samples: &SampleSet<'_>, attribute: usize) -> Result<f64> {
    samples.require_non_empty()?;
    let counts = samples.category_counts(attribute)?;
    Ok(entropy_of_counts(&counts, samples.len() as u64))
}

/// Co-occurrence counts of an ordered attribute pair over a sample set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    n_row_categories: usize,
    n_col_categories: usize,
    counts: Vec<u64>,
    row_marginals: Vec<u64>,
    col_marginals: Vec<u64>,
    total: u64,
}

impl ContingencyTable {
    pub fn build(samples: &SampleSet<'_>, row_attribute: usize, col_attribute: usize) -> Result<Self> {
        samples.require_non_empty()?;
        let ds = samples.dataset();
        let a = ds.attribute(row_attribute)?;
        let b = ds.attribute(col_attribute)?;
        let (l, m) = (a.n_categories(), b.n_categories());
        let (av, bv) = (a.values(), b.values());
        let mut counts = vec![0u64; l * m];
        let mut row_marginals = vec![0u64; l];
        let mut col_marginals = vec![0u64; m];
        for &r in samples.rows() {
            let (x, y) = (av[r] as usize, bv[r] as usize);
            counts[x * m + y] += 1;
            row_marginals[x] += 1;
            col_marginals[y] += 1;
        }
        Ok(ContingencyTable {
            n_row_categories: l,
            n_col_categories: m,
            counts,
            row_marginals,
            col_marginals,
            total: samples.len() as u64,
        })
    }

    pub fn count(&self, row_category: usize, col_category: usize) -> u64 {
        self.counts[row_category * self.n_col_categories + col_category]
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n_row_categories, self.n_col_categories)
    }

    pub fn row_marginals(&self) -> &[u64] {
        &self.row_marginals
    }

    pub fn col_marginals(&self) -> &[u64] {
        &self.col_marginals
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Plug-in mutual information in bits.
    pub fn mutual_information(&self) -> f64 {
        let n = self.total as f64;
        let m = self.n_col_categories;
        let mut mi = 0.0;
        for (x, &rx) in self.row_marginals.iter().enumerate() {
            if rx == 0 {
                continue;
            }
            let row = &self.counts[x * m..(x + 1) * m];
            for (y, &c) in row.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let ratio = (c as f64 * n) / (rx as f64 * self.col_marginals[y] as f64);
                mi += (c as f64 / n) * ratio.log2();
            }
        }
        // Rounding can push an exactly-independent table a hair below zero.
        mi.max(0.0)
    }
}

/// Mutual information (bits) between two attributes on `samples`.
///
/// The pair is evaluated in canonical (lower index first) order, so the result
/// is bit-for-bit symmetric in its arguments.
pub fn mutual_information(samples: &SampleSet<'_>, a: usize, b: usize) -> Result<f64> {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    Ok(ContingencyTable::build(samples, lo, hi)?.mutual_information())
}

/// Pairwise mutual information among a set of attributes.
#[derive(Debug, Clone, PartialEq)]
pub struct MutualInformationMatrix {
    attributes: Vec<usize>,
    values: Vec<f64>,
}

impl MutualInformationMatrix {
    /// Compute every unordered pair of `active`. With `parallel` set, pairs are
    /// spread over the current rayon pool; results are gathered in canonical
    /// pair order, so the matrix is identical either way.
    pub fn compute(samples: &SampleSet<'_>, active: &[usize], parallel: bool) -> Result<Self> {
        samples.require_non_empty()?;
        for &a in active {
            samples.dataset().attribute(a)?;
        }
        let k = active.len();
        let pairs: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .collect();
        let eval = |&(i, j): &(usize, usize)| mutual_information(samples, active[i], active[j]);
        let mis: Vec<f64> = if parallel {
            pairs.par_iter().map(eval).collect::<Result<_>>()?
        } else {
            pairs.iter().map(eval).collect::<Result<_>>()?
        };
        let mut values = vec![0.0; k * k];
        for (&(i, j), mi) in pairs.iter().zip(mis) {
            values[i * k + j] = mi;
            values[j * k + i] = mi;
        }
        Ok(MutualInformationMatrix {
            attributes: active.to_vec(),
            values,
        })
    }

    pub fn attributes(&self) -> &[usize] {
        &self.attributes
    }

    /// MI between the attributes at positions `i` and `j` of [`Self::attributes`].
    /// The diagonal is left at zero.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.attributes.len() + j]
    }

    /// Sum of MI between the attribute at position `i` and every other one,
    /// accumulated in [`Self::attributes`] order.
    pub fn row_sum(&self, i: usize) -> f64 {
        let k = self.attributes.len();
        (0..k).filter(|&j| j != i).map(|j| self.get(i, j)).sum()
    }
}

fn check_active(samples: &SampleSet<'_>, attribute: usize, active: &[usize]) -> Result<()> {
    samples.require_non_empty()?;
    if active.len() < 2 {
        return Err(Error::TooFewActiveAttributes(active.len()));
    }
    if !active.contains(&attribute) {
        return Err(Error::InactiveAttribute(attribute));
    }
    Ok(())
}

/// Total mutual information between `attribute` and every other active
/// attribute, without the domain-size normalization.
pub fn summed_mutual_information(samples: &SampleSet<'_>, attribute: usize, active: &[usize]) -> Result<f64> {
    check_active(samples, attribute, active)?;
    active
        .iter()
        .filter(|&&j| j != attribute)
        .map(|&j| mutual_information(samples, j, attribute))
        .sum()
}

/// Mutual information score: total MI with the other active attributes,
/// divided by the number of categories the attribute realizes on `samples`.
pub fn mis_score(samples: &SampleSet<'_>, attribute: usize, active: &[usize]) -> Result<f64> {
    let total = summed_mutual_information(samples, attribute, active)?;
    let l = samples.realized_categories(attribute)?;
    Ok(total / l as f64)
}

/// Partition entropy: the sum of per-attribute marginal entropies over the
/// active attributes (the independence approximation of joint entropy).
pub fn partition_entropy(partition: &SampleSet<'_>, active: &[usize]) -> Result<f64> {
    partition.require_non_empty()?;
    active.iter().map(|&a| entropy(partition, a)).sum()
}

/// A probability vector over one attribute's category dictionary.
#[derive(Debug, Clone, PartialEq)]
pub struct CategoryDistribution {
    probabilities: Vec<f64>,
}

impl CategoryDistribution {
    pub fn new(probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(Error::InvalidDistribution("no categories".into()));
        }
        if let Some(p) = probabilities.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidDistribution(format!("entry {p} is not a probability")));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDistribution(format!("entries sum to {total}")));
        }
        Ok(CategoryDistribution { probabilities })
    }

    /// Empirical distribution of an attribute on a sample set.
    pub fn from_samples(samples: &SampleSet<'_>, attribute: usize) -> Result<Self> {
        samples.require_non_empty()?;
        let counts = samples.category_counts(attribute)?;
        let n = samples.len() as f64;
        Ok(CategoryDistribution {
            probabilities: counts.iter().map(|&c| c as f64 / n).collect(),
        })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }
}

/// KL divergence D(q || p) in bits. `p` must be positive wherever `q` is.
pub fn kl_divergence(q: &CategoryDistribution, p: &CategoryDistribution) -> Result<f64> {
    if q.len() != p.len() {
        return Err(Error::DistributionMismatch {
            left: q.len(),
            right: p.len(),
        });
    }
    let mut d = 0.0;
    for (x, (&qx, &px)) in q.probabilities.iter().zip(&p.probabilities).enumerate() {
        if qx == 0.0 {
            continue;
        }
        if px == 0.0 {
            return Err(Error::SupportViolation { category: x, mass: qx });
        }
        d += qx * (qx / px).log2();
    }
    Ok(d.max(0.0))
}
