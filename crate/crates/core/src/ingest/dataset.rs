use std::collections::HashSet;

use crate::error::{Error, Result};

use super::MISSING;

/// One categorical column: a category dictionary plus per-row indices into it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeColumn {
    name: String,
    categories: Vec<String>,
    values: Vec<u32>,
    missing_index: Option<u32>,
}

impl AttributeColumn {
    pub fn new(name: impl Into<String>, categories: Vec<String>, values: Vec<u32>) -> Result<Self> {
        let name = name.into();
        if categories.is_empty() {
            return Err(Error::InvalidDataset(format!(
                "attribute {name:?} has no categories"
            )));
        }
        let mut seen = HashSet::with_capacity(categories.len());
        for c in &categories {
            if !seen.insert(c.as_str()) {
                return Err(Error::InvalidDataset(format!(
                    "attribute {name:?} lists category {c:?} twice"
                )));
            }
        }
        let n = categories.len() as u32;
        if let Some(&bad) = values.iter().find(|&&v| v >= n) {
            return Err(Error::InvalidDataset(format!(
                "attribute {name:?} has value index {bad} but only {n} categories"
            )));
        }
        let missing_index = categories.iter().position(|c| c == MISSING).map(|i| i as u32);
        Ok(AttributeColumn {
            name,
            categories,
            values,
            missing_index,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn categories(&self) -> &[String] {
        &self.categories
    }

    pub fn n_categories(&self) -> usize {
        self.categories.len()
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn missing_index(&self) -> Option<u32> {
        self.missing_index
    }

    pub fn category_name(&self, index: u32) -> &str {
        &self.categories[index as usize]
    }

    pub fn category_index(&self, name: &str) -> Option<u32> {
        self.categories.iter().position(|c| c == name).map(|i| i as u32)
    }
}

/// Per-row class identifiers, kept apart from the attributes and only used
/// for external evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassLabels {
    classes: Vec<String>,
    ids: Vec<u32>,
}

impl ClassLabels {
    pub fn new(classes: Vec<String>, ids: Vec<u32>) -> Result<Self> {
        let n = classes.len() as u32;
        if let Some(&bad) = ids.iter().find(|&&v| v >= n) {
            return Err(Error::InvalidDataset(format!(
                "class id {bad} but only {n} classes"
            )));
        }
        Ok(ClassLabels { classes, ids })
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn ids(&self) -> &[u32] {
        &self.ids
    }

    pub fn class_name(&self, id: u32) -> &str {
        &self.classes[id as usize]
    }
}

/// A column-oriented table of integer-encoded categorical values.
///
/// Immutable after construction; all invariants are checked by [`CategoricalDataset::new`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoricalDataset {
    name: String,
    n_rows: usize,
    attributes: Vec<AttributeColumn>,
    labels: Option<ClassLabels>,
}

impl CategoricalDataset {
    pub fn new(
        name: impl Into<String>,
        attributes: Vec<AttributeColumn>,
        labels: Option<ClassLabels>,
    ) -> Result<Self> {
        let name = name.into();
        let n_rows = attributes
            .first()
            .map(|a| a.values.len())
            .or_else(|| labels.as_ref().map(|l| l.ids.len()))
            .unwrap_or(0);
        for a in &attributes {
            if a.values.len() != n_rows {
                return Err(Error::InvalidDataset(format!(
                    "attribute {:?} has {} values, expected {n_rows}",
                    a.name,
                    a.values.len()
                )));
            }
        }
        if let Some(l) = &labels {
            if l.ids.len() != n_rows {
                return Err(Error::InvalidDataset(format!(
                    "{} labels for {n_rows} rows",
                    l.ids.len()
                )));
            }
        }
        Ok(CategoricalDataset {
            name,
            n_rows,
            attributes,
            labels,
        })
    }

    /// Build a dataset from string rows, encoding categories in first-appearance
    /// order. `"?"` is the missing category. Mostly useful for fixtures.
    pub fn from_rows<S: AsRef<str>>(
        name: impl Into<String>,
        attribute_names: &[&str],
        rows: &[Vec<S>],
    ) -> Result<Self> {
        let width = attribute_names.len();
        let mut categories: Vec<Vec<String>> = vec![Vec::new(); width];
        let mut values: Vec<Vec<u32>> = vec![Vec::with_capacity(rows.len()); width];
        for (r, row) in rows.iter().enumerate() {
            if row.len() != width {
                return Err(Error::InvalidDataset(format!(
                    "row {r} has {} values, expected {width}",
                    row.len()
                )));
            }
            for (j, v) in row.iter().enumerate() {
                let v = v.as_ref();
                let idx = match categories[j].iter().position(|c| c == v) {
                    Some(i) => i,
                    None => {
                        categories[j].push(v.to_string());
                        categories[j].len() - 1
                    }
                };
                values[j].push(idx as u32);
            }
        }
        let attributes = attribute_names
            .iter()
            .zip(categories.into_iter().zip(values))
            .map(|(n, (c, v))| AttributeColumn::new(*n, c, v))
            .collect::<Result<Vec<_>>>()?;
        CategoricalDataset::new(name, attributes, None)
    }

    /// Attach (or replace) class labels given as strings, one per row.
    pub fn with_labels<S: AsRef<str>>(mut self, labels: &[S]) -> Result<Self> {
        if labels.len() != self.n_rows {
            return Err(Error::InvalidDataset(format!(
                "{} labels for {} rows",
                labels.len(),
                self.n_rows
            )));
        }
        let mut classes: Vec<String> = Vec::new();
        let ids = labels
            .iter()
            .map(|l| {
                let l = l.as_ref();
                match classes.iter().position(|c| c == l) {
                    Some(i) => i as u32,
                    None => {
                        classes.push(l.to_string());
                        (classes.len() - 1) as u32
                    }
                }
            })
            .collect();
        self.labels = Some(ClassLabels::new(classes, ids)?);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_attributes(&self) -> usize {
        self.attributes.len()
    }

    pub fn attributes(&self) -> &[AttributeColumn] {
        &self.attributes
    }

    pub fn attribute(&self, index: usize) -> Result<&AttributeColumn> {
        self.attributes.get(index).ok_or(Error::AttributeOutOfRange {
            index,
            count: self.attributes.len(),
        })
    }

    pub fn attribute_index(&self, name: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a.name == name)
    }

    pub fn labels(&self) -> Option<&ClassLabels> {
        self.labels.as_ref()
    }

    /// The encoded values of one row, attribute by attribute.
    pub fn row(&self, row: usize) -> Vec<u32> {
        self.attributes.iter().map(|a| a.values[row]).collect()
    }

    /// A copy of the dataset with every row repeated `times` times, the copies
    /// appended one after another. Category dictionaries are unchanged.
    pub fn repeated(&self, times: usize) -> CategoricalDataset {
        let attributes = self
            .attributes
            .iter()
            .map(|a| AttributeColumn {
                values: a.values.repeat(times),
                ..a.clone()
            })
            .collect();
        let labels = self.labels.as_ref().map(|l| ClassLabels {
            classes: l.classes.clone(),
            ids: l.ids.repeat(times),
        });
        CategoricalDataset {
            name: self.name.clone(),
            n_rows: self.n_rows * times,
            attributes,
            labels,
        }
    }
}
