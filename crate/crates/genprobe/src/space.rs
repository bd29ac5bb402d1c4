//! Feature specifications, feature vectors, and finite combination spaces.
//!
//! A probing feature projects an image to an interpretable value (count,
//! proportion, size, ...). The tuple of declared features spans the feature
//! space in which all distribution comparisons happen.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::CoreError;

/// Default bin width for fraction-valued continuous features.
pub const DEFAULT_FRACTION_BIN_WIDTH: f64 = 0.02;

/// The domain of one probing feature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureKind {
    /// Closed interval `[lo, hi]`, binned at `bin_width` for histograms.
    Continuous { lo: f64, hi: f64, bin_width: f64 },
    /// Finite, duplicate-free list of admissible integers.
    Integer { values: Vec<i64> },
    /// Finite, duplicate-free list of admissible labels.
    Categorical { values: Vec<String> },
}

/// A named probing feature together with its domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSpec {
    pub name: String,
    pub kind: FeatureKind,
}

impl FeatureSpec {
    pub fn continuous(name: &str, lo: f64, hi: f64, bin_width: f64) -> Result<Self, CoreError> {
        if !(lo < hi) {
            return Err(CoreError::InvalidSpec(format!(
                "continuous domain for `{name}` needs lo < hi, got [{lo}, {hi}]"
            )));
        }
        if !(bin_width > 0.0) || bin_width > hi - lo {
            return Err(CoreError::InvalidSpec(format!(
                "bin_width for `{name}` must be in (0, {}], got {bin_width}",
                hi - lo
            )));
        }
        Ok(Self {
            name: name.to_string(),
            kind: FeatureKind::Continuous { lo, hi, bin_width },
        })
    }

    pub fn integer(name: &str, values: Vec<i64>) -> Result<Self, CoreError> {
        if values.is_empty() {
            return Err(CoreError::InvalidSpec(format!(
                "integer domain for `{name}` is empty"
            )));
        }
        let mut sorted = values.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != values.len() {
            return Err(CoreError::InvalidSpec(format!(
                "integer domain for `{name}` has duplicates"
            )));
        }
        Ok(Self {
            name: name.to_string(),
            kind: FeatureKind::Integer { values: sorted },
        })
    }

    pub fn categorical(name: &str, values: Vec<String>) -> Result<Self, CoreError> {
        if values.is_empty() {
            return Err(CoreError::InvalidSpec(format!(
                "categorical domain for `{name}` is empty"
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        for v in &values {
            if !seen.insert(v.clone()) {
                return Err(CoreError::InvalidSpec(format!(
                    "categorical domain for `{name}` has duplicate `{v}`"
                )));
            }
        }
        Ok(Self {
            name: name.to_string(),
            kind: FeatureKind::Categorical { values },
        })
    }

    /// Number of distinct values for finite domains, `None` for continuous.
    pub fn domain_size(&self) -> Option<usize> {
        match &self.kind {
            FeatureKind::Continuous { .. } => None,
            FeatureKind::Integer { values } => Some(values.len()),
            FeatureKind::Categorical { values } => Some(values.len()),
        }
    }

    pub fn contains(&self, value: &FeatureValue) -> bool {
        match (&self.kind, value) {
            (FeatureKind::Continuous { lo, hi, .. }, FeatureValue::Float(x)) => {
                *x >= *lo && *x <= *hi
            }
            (FeatureKind::Integer { values }, FeatureValue::Int(i)) => values.contains(i),
            (FeatureKind::Categorical { values }, FeatureValue::Str(s)) => values.contains(s),
            _ => false,
        }
    }
}

/// One observed feature value. `Null` marks an image a feature evaluator
/// rejected (e.g. no foreground), which downstream code must distinguish
/// from a legitimate zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FeatureValue {
    Int(i64),
    Float(f64),
    Str(String),
    Null,
}

impl FeatureValue {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            FeatureValue::Float(x) => Some(*x),
            FeatureValue::Int(i) => Some(*i as f64),
            _ => None,
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        match self {
            FeatureValue::Int(i) => Some(*i),
            _ => None,
        }
    }

    pub fn is_null(&self) -> bool {
        matches!(self, FeatureValue::Null)
    }
}

impl fmt::Display for FeatureValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeatureValue::Float(x) => write!(f, "{x}"),
            FeatureValue::Int(i) => write!(f, "{i}"),
            FeatureValue::Str(s) => write!(f, "{s}"),
            FeatureValue::Null => write!(f, "null"),
        }
    }
}

/// A point z in feature space: named values for one image.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureVector {
    pub values: BTreeMap<String, FeatureValue>,
}

impl FeatureVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: FeatureValue) -> Self {
        self.values.insert(name.to_string(), value);
        self
    }

    pub fn get(&self, name: &str) -> Option<&FeatureValue> {
        self.values.get(name)
    }

    /// Checks that keys exactly match the declared specs and every value
    /// lies inside its domain.
    pub fn validate(&self, specs: &[FeatureSpec]) -> Result<(), CoreError> {
        if self.values.len() != specs.len() {
            return Err(CoreError::DomainMismatch {
                feature: "<keys>".into(),
                value: format!("expected {} features, got {}", specs.len(), self.values.len()),
            });
        }
        for spec in specs {
            let v = self.values.get(&spec.name).ok_or_else(|| CoreError::DomainMismatch {
                feature: spec.name.clone(),
                value: "<missing>".into(),
            })?;
            if !spec.contains(v) {
                return Err(CoreError::DomainMismatch {
                    feature: spec.name.clone(),
                    value: v.to_string(),
                });
            }
        }
        Ok(())
    }
}

/// Identifier of one combination: for each group, the index of the value in
/// that group's domain list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ComboId(pub Vec<u16>);

impl fmt::Display for ComboId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join("-"))
    }
}

/// Cartesian product of finite per-feature domains.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CombinationSpace {
    groups: Vec<FeatureSpec>,
}

impl CombinationSpace {
    pub fn new(groups: Vec<FeatureSpec>) -> Result<Self, CoreError> {
        if groups.is_empty() {
            return Err(CoreError::InvalidSpec("combination space needs at least one group".into()));
        }
        for g in &groups {
            if g.domain_size().is_none() {
                return Err(CoreError::InvalidSpec(format!(
                    "combination group `{}` must have a finite domain",
                    g.name
                )));
            }
        }
        Ok(Self { groups })
    }

    /// Space of N groups of digits 0..=9 each; combination ids read as
    /// positional digit strings.
    pub fn digits(n_groups: usize) -> Self {
        let groups = (0..n_groups)
            .map(|i| FeatureSpec::integer(&format!("digit_{i}"), (0..=9).collect()).unwrap())
            .collect();
        Self { groups }
    }

    pub fn groups(&self) -> &[FeatureSpec] {
        &self.groups
    }

    pub fn group_sizes(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.domain_size().unwrap()).collect()
    }

    pub fn size(&self) -> usize {
        self.group_sizes().iter().product()
    }

    pub fn contains(&self, id: &ComboId) -> bool {
        id.0.len() == self.groups.len()
            && id
                .0
                .iter()
                .zip(self.group_sizes())
                .all(|(&i, n)| (i as usize) < n)
    }

    /// Canonical (lexicographic) position of a combination id.
    pub fn flat_index(&self, id: &ComboId) -> Option<usize> {
        if !self.contains(id) {
            return None;
        }
        let mut idx = 0usize;
        for (&i, n) in id.0.iter().zip(self.group_sizes()) {
            idx = idx * n + i as usize;
        }
        Some(idx)
    }

    pub fn from_flat_index(&self, mut idx: usize) -> Option<ComboId> {
        if idx >= self.size() {
            return None;
        }
        let sizes = self.group_sizes();
        let mut rev = Vec::with_capacity(sizes.len());
        for &n in sizes.iter().rev() {
            rev.push((idx % n) as u16);
            idx /= n;
        }
        rev.reverse();
        Some(ComboId(rev))
    }

    /// All combination ids in canonical order.
    pub fn enumerate(&self) -> Vec<ComboId> {
        (0..self.size()).map(|i| self.from_flat_index(i).unwrap()).collect()
    }

    /// Renders a combination id with the underlying domain values, e.g.
    /// `7-1-7` for a three-digit space.
    pub fn label(&self, id: &ComboId) -> String {
        let parts: Vec<String> = id
            .0
            .iter()
            .zip(&self.groups)
            .map(|(&i, g)| match &g.kind {
                FeatureKind::Integer { values } => values[i as usize].to_string(),
                FeatureKind::Categorical { values } => values[i as usize].clone(),
                FeatureKind::Continuous { .. } => unreachable!("finite domains only"),
            })
            .collect();
        parts.join("-")
    }

    pub fn parse_label(&self, label: &str) -> Option<ComboId> {
        let parts: Vec<&str> = label.split('-').collect();
        if parts.len() != self.groups.len() {
            return None;
        }
        let mut id = Vec::with_capacity(parts.len());
        for (part, g) in parts.iter().zip(&self.groups) {
            let pos = match &g.kind {
                FeatureKind::Integer { values } => {
                    let v: i64 = part.parse().ok()?;
                    values.iter().position(|&x| x == v)?
                }
                FeatureKind::Categorical { values } => {
                    values.iter().position(|x| x == part)?
                }
                FeatureKind::Continuous { .. } => return None,
            };
            id.push(pos as u16);
        }
        Some(ComboId(id))
    }

    /// Combination id for a feature vector over exactly the group features.
    pub fn combo_of(&self, fv: &FeatureVector) -> Option<ComboId> {
        let mut id = Vec::with_capacity(self.groups.len());
        for g in &self.groups {
            let v = fv.get(&g.name)?;
            let pos = match (&g.kind, v) {
                (FeatureKind::Integer { values }, FeatureValue::Int(i)) => {
                    values.iter().position(|x| x == i)?
                }
                (FeatureKind::Categorical { values }, FeatureValue::Str(s)) => {
                    values.iter().position(|x| x == s)?
                }
                // Finite grids of floats are matched by nearest value within
                // a relative tolerance, so manifests round-trip.
                (FeatureKind::Integer { values }, FeatureValue::Float(x)) => {
                    values.iter().position(|&v| (v as f64 - x).abs() < 1e-9)?
                }
                _ => return None,
            };
            id.push(pos as u16);
        }
        Some(ComboId(id))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn continuous_spec_rejects_bad_bounds() {
        assert!(FeatureSpec::continuous("f", 1.0, 0.0, 0.1).is_err());
        assert!(FeatureSpec::continuous("f", 0.0, 1.0, 0.0).is_err());
        assert!(FeatureSpec::continuous("f", 0.0, 1.0, 1.5).is_err());
        assert!(FeatureSpec::continuous("f", 0.0, 1.0, 0.02).is_ok());
    }

    #[test]
    fn integer_spec_rejects_duplicates() {
        assert!(FeatureSpec::integer("k", vec![1, 2, 2]).is_err());
        assert!(FeatureSpec::integer("k", vec![]).is_err());
    }

    #[test]
    fn combo_flat_index_round_trips() {
        let space = CombinationSpace::digits(3);
        assert_eq!(space.size(), 1000);
        for idx in [0usize, 1, 999, 717, 913] {
            let id = space.from_flat_index(idx).unwrap();
            assert_eq!(space.flat_index(&id), Some(idx));
        }
        assert_eq!(space.label(&ComboId(vec![7, 1, 7])), "7-1-7");
        assert_eq!(space.parse_label("9-1-3"), Some(ComboId(vec![9, 1, 3])));
    }

    #[test]
    fn feature_vector_validation() {
        let specs = vec![
            FeatureSpec::continuous("red_proportion", 0.0, 1.0, 0.02).unwrap(),
            FeatureSpec::integer("count", (0..=10).collect()).unwrap(),
        ];
        let ok = FeatureVector::new()
            .with("red_proportion", FeatureValue::Float(0.3))
            .with("count", FeatureValue::Int(6));
        assert!(ok.validate(&specs).is_ok());

        let bad = FeatureVector::new()
            .with("red_proportion", FeatureValue::Float(1.5))
            .with("count", FeatureValue::Int(6));
        assert!(matches!(bad.validate(&specs), Err(CoreError::DomainMismatch { .. })));
    }
}
