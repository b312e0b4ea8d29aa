//! WMC risk categories, Shannon and Rényi entropy, and the degradation score.
//!
//! Classes are binned by WMC into the bands of a [`ThresholdTable`]; the
//! Shannon entropy `H = -Σ p_k log2 p_k` of the resulting category
//! distribution, multiplied by the class count `N`, is the system's
//! degradation score.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance for a probability vector to count as normalized.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EntropyError {
    #[error("`{item}` has value {value} below the lowest threshold {min}")]
    ValueBelowTable { item: String, value: f64, min: f64 },
    #[error("cannot score an empty system (N = 0)")]
    EmptySystem,
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid Rényi order {0}; must be positive and finite")]
    InvalidOrder(f64),
    #[error("invalid threshold table: {0}")]
    InvalidThresholds(String),
    #[error("cannot read threshold table {path}: {message}")]
    ThresholdFile { path: String, message: String },
}

/// One risk band. `max == None` means unbounded above.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Category {
    pub label: String,
    pub min: f64,
    pub max: Option<f64>,
    pub risk: String,
}

/// Ordered WMC bands partitioning `[min, ∞)`.
///
/// Consecutive bands share their boundary (`next.min == prev.max`); a value
/// equal to a shared boundary falls into the lower band.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdTable {
    categories: Vec<Category>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ThresholdFile {
    category: Vec<Category>,
}

impl ThresholdTable {
    pub fn new(categories: Vec<Category>) -> Result<Self, EntropyError> {
        let invalid = |m: String| Err(EntropyError::InvalidThresholds(m));
        if categories.len() < 2 {
            return invalid(format!(
                "need at least 2 categories, got {}",
                categories.len()
            ));
        }
        let last = categories.len() - 1;
        for (i, c) in categories.iter().enumerate() {
            if !c.min.is_finite() {
                return invalid(format!(
                    "category `{}` has a non-finite lower bound",
                    c.label
                ));
            }
            match (c.max, i == last) {
                (None, true) => {}
                (None, false) => {
                    return invalid(format!(
                        "only the last category may be unbounded (`{}`)",
                        c.label
                    ))
                }
                (Some(_), true) => return invalid("the last category must be unbounded".into()),
                (Some(max), false) => {
                    if max.is_nan() || max <= c.min {
                        return invalid(format!("category `{}` has max <= min", c.label));
                    }
                    let next = categories[i + 1].min;
                    if next != max {
                        let kind = if next > max { "gap" } else { "overlap" };
                        return invalid(format!(
                            "{kind} between `{}` (max {max}) and `{}` (min {next})",
                            c.label,
                            categories[i + 1].label
                        ));
                    }
                }
            }
        }
        Ok(Self { categories })
    }

    /// The NASA-SATC WMC bands: [1, 20], (20, 100], (100, ∞).
    pub fn nasa_satc() -> Self {
        let cat = |label: &str, min: f64, max: Option<f64>, risk: &str| Category {
            label: label.into(),
            min,
            max,
            risk: risk.into(),
        };
        Self::new(vec![
            cat("1", 1.0, Some(20.0), "Good values of class complexity"),
            cat("2", 20.0, Some(100.0), "Moderate high values of complexity"),
            cat(
                "3",
                100.0,
                None,
                "High class complexity, cause for investigation",
            ),
        ])
        .expect("built-in table is valid")
    }

    /// Reads a table from TOML (`[[category]]` entries) or, for `.json`
    /// paths, a JSON array of categories.
    pub fn load(path: &Path) -> Result<Self, EntropyError> {
        let file_err = |message: String| EntropyError::ThresholdFile {
            path: path.display().to_string(),
            message,
        };
        let text = std::fs::read_to_string(path).map_err(|e| file_err(e.to_string()))?;
        let categories = if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str::<Vec<Category>>(&text).map_err(|e| file_err(e.to_string()))?
        } else {
            toml::from_str::<ThresholdFile>(&text)
                .map_err(|e| file_err(e.to_string()))?
                .category
        };
        Self::new(categories)
    }

    pub fn categories(&self) -> &[Category] {
        &self.categories
    }

    pub fn len(&self) -> usize {
        self.categories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.categories.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.categories[0].min
    }

    /// Index of the band holding `value`, or `None` below the table.
    pub fn locate(&self, value: f64) -> Option<usize> {
        if value < self.min() {
            return None;
        }
        Some(
            self.categories
                .iter()
                .position(|c| c.max.is_none_or(|max| value <= max))
                .unwrap_or(self.categories.len() - 1),
        )
    }
}

impl Default for ThresholdTable {
    fn default() -> Self {
        Self::nasa_satc()
    }
}

/// Non-fatal findings raised while categorizing or validating counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Diagnostic {
    /// A value below the table was placed in the first band.
    BelowTable { item: String, value: f64, min: f64 },
    /// Σ F_k disagrees with a stated class total.
    CountSumMismatch { sum: u64, stated: u64 },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::BelowTable { item, value, min } => write!(
                f,
                "`{item}` has value {value} below the lowest threshold {min}; counted in the first category"
            ),
            Diagnostic::CountSumMismatch { sum, stated } => {
                write!(f, "counts sum {sum} ≠ N {stated}")
            }
        }
    }
}

/// Per-category class counts F_k.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryDistribution {
    pub counts: Vec<u64>,
}

impl CategoryDistribution {
    pub fn new(counts: Vec<u64>) -> Self {
        Self { counts }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// p_k = F_k / N.
    pub fn probabilities(&self) -> Result<Distribution, EntropyError> {
        let n = self.total();
        if n == 0 {
            return Err(EntropyError::EmptySystem);
        }
        Distribution::new(self.counts.iter().map(|&f| f as f64 / n as f64).collect())
    }

    /// Diagnostics for every stated total that differs from Σ F_k.
    pub fn check_totals(&self, stated: &[u64]) -> Vec<Diagnostic> {
        let sum = self.total();
        stated
            .iter()
            .filter(|&&s| s != sum)
            .map(|&s| Diagnostic::CountSumMismatch { sum, stated: s })
            .collect()
    }
}

/// Assigns each value to a band.
///
/// Values below the table raise [`EntropyError::ValueBelowTable`] in strict
/// mode; otherwise they go to the first band and a diagnostic is returned.
pub fn categorize<'a, I>(
    values: I,
    table: &ThresholdTable,
    strict: bool,
) -> Result<(CategoryDistribution, Vec<Diagnostic>), EntropyError>
where
    I: IntoIterator<Item = (&'a str, f64)>,
{
    let mut counts = vec![0u64; table.len()];
    let mut diagnostics = Vec::new();
    for (item, value) in values {
        let k = match table.locate(value) {
            Some(k) => k,
            None if strict => {
                return Err(EntropyError::ValueBelowTable {
                    item: item.to_string(),
                    value,
                    min: table.min(),
                })
            }
            None => {
                diagnostics.push(Diagnostic::BelowTable {
                    item: item.to_string(),
                    value,
                    min: table.min(),
                });
                0
            }
        };
        counts[k] += 1;
    }
    Ok((CategoryDistribution::new(counts), diagnostics))
}

/// A probability vector summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution(Vec<f64>);

impl Distribution {
    pub fn new(p: Vec<f64>) -> Result<Self, EntropyError> {
        if p.is_empty() {
            return Err(EntropyError::InvalidDistribution("no outcomes".into()));
        }
        if let Some(bad) = p.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(EntropyError::InvalidDistribution(format!(
                "probability {bad} out of range"
            )));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(EntropyError::InvalidDistribution(format!(
                "probabilities sum to {sum}"
            )));
        }
        Ok(Self(p))
    }

    /// Normalizes non-negative weights.
    pub fn from_weights(weights: &[f64]) -> Result<Self, EntropyError> {
        let sum: f64 = weights.iter().sum();
        if sum.is_nan() || sum <= 0.0 || !sum.is_finite() {
            return Err(EntropyError::InvalidDistribution(format!(
                "weights sum to {sum}"
            )));
        }
        Self::new(weights.iter().map(|w| w / sum).collect())
    }

    pub fn uniform(n: usize) -> Result<Self, EntropyError> {
        if n == 0 {
            return Err(EntropyError::InvalidDistribution("no outcomes".into()));
        }
        Self::new(vec![1.0 / n as f64; n])
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Order α of a Rényi entropy; α = 1 is the Shannon limit.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct RenyiOrder(f64);

impl RenyiOrder {
    pub const SHANNON: RenyiOrder = RenyiOrder(1.0);

    pub fn new(alpha: f64) -> Result<Self, EntropyError> {
        if alpha > 0.0 && alpha.is_finite() {
            Ok(Self(alpha))
        } else {
            Err(EntropyError::InvalidOrder(alpha))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Shannon entropy in bits; zero-probability outcomes contribute nothing.
pub fn shannon_entropy(d: &Distribution) -> f64 {
    let h: f64 = d
        .probabilities()
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum();
    // -0.0 and tiny negative rounding both read as 0.
    h.max(0.0)
}

/// Rényi entropy of order α in bits.
pub fn renyi_entropy(d: &Distribution, alpha: RenyiOrder) -> f64 {
    let a = alpha.value();
    if a == 1.0 {
        return shannon_entropy(d);
    }
    let s: f64 = d
        .probabilities()
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p.powf(a))
        .sum();
    (s.log2() / (1.0 - a)).max(0.0)
}

/// Entropy of a category distribution and the score N·H.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Degradation {
    pub classes: u64,
    pub entropy: f64,
    pub score: f64,
}

pub fn degradation_score(counts: &CategoryDistribution) -> Result<Degradation, EntropyError> {
    let n = counts.total();
    let entropy = shannon_entropy(&counts.probabilities()?);
    Ok(Degradation {
        classes: n,
        entropy,
        score: n as f64 * entropy,
    })
}

/// Joint distribution of two independent experiments, row-major.
pub fn product_distribution(a: &Distribution, b: &Distribution) -> Distribution {
    let p = a
        .probabilities()
        .iter()
        .flat_map(|&x| b.probabilities().iter().map(move |&y| x * y))
        .collect();
    // The product of two normalized vectors is normalized up to rounding.
    Distribution(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(p: &[f64]) -> Distribution {
        Distribution::new(p.to_vec()).unwrap()
    }

    #[test]
    fn default_table_bands() {
        let t = ThresholdTable::default();
        let values = [("a", 5.0), ("b", 25.0), ("c", 150.0)];
        let (d, diags) = categorize(values, &t, true).unwrap();
        assert_eq!(d.counts, [1, 1, 1]);
        assert!(diags.is_empty());
    }

    #[test]
    fn boundaries_go_to_lower_band() {
        let t = ThresholdTable::default();
        assert_eq!(t.locate(20.0), Some(0));
        assert_eq!(t.locate(20.5), Some(1));
        assert_eq!(t.locate(100.0), Some(1));
        assert_eq!(t.locate(101.0), Some(2));
        let (d, _) = categorize([("a", 20.0), ("b", 100.0)], &t, true).unwrap();
        assert_eq!(d.counts, [1, 1, 0]);
    }

    #[test]
    fn below_table_strict_and_lenient() {
        let t = ThresholdTable::default();
        let err = categorize([("Empty", 0.0)], &t, true).unwrap_err();
        assert_eq!(
            err,
            EntropyError::ValueBelowTable {
                item: "Empty".into(),
                value: 0.0,
                min: 1.0
            }
        );
        let (d, diags) = categorize([("Empty", 0.0)], &t, false).unwrap();
        assert_eq!(d.counts, [1, 0, 0]);
        assert_eq!(diags.len(), 1);
    }

    #[test]
    fn table_validation() {
        let cat = |min: f64, max: Option<f64>| Category {
            label: format!("{min}"),
            min,
            max,
            risk: String::new(),
        };
        assert!(ThresholdTable::new(vec![cat(0.0, None)]).is_err());
        assert!(ThresholdTable::new(vec![cat(0.0, Some(5.0)), cat(6.0, None)]).is_err());
        assert!(ThresholdTable::new(vec![cat(0.0, Some(5.0)), cat(4.0, None)]).is_err());
        assert!(ThresholdTable::new(vec![cat(0.0, Some(5.0)), cat(5.0, Some(9.0))]).is_err());
        assert!(ThresholdTable::new(vec![cat(0.0, None), cat(5.0, None)]).is_err());
        assert!(ThresholdTable::new(vec![cat(0.0, Some(5.0)), cat(5.0, None)]).is_ok());
    }

    #[test]
    fn shannon_reference_values() {
        assert_eq!(shannon_entropy(&dist(&[0.5, 0.5])), 1.0);
        assert_eq!(shannon_entropy(&dist(&[1.0, 0.0])), 0.0);
        assert!((shannon_entropy(&Distribution::uniform(8).unwrap()) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn renyi_cases() {
        let u4 = Distribution::uniform(4).unwrap();
        let two = RenyiOrder::new(2.0).unwrap();
        assert!((renyi_entropy(&u4, two) - 2.0).abs() < 1e-12);
        let d = dist(&[0.7, 0.3]);
        assert_eq!(renyi_entropy(&d, RenyiOrder::SHANNON), shannon_entropy(&d));
        let h2 = renyi_entropy(&d, two);
        let h1 = shannon_entropy(&d);
        let h05 = renyi_entropy(&d, RenyiOrder::new(0.5).unwrap());
        assert!(h2 < h1 && h1 < h05);
        assert!(RenyiOrder::new(0.0).is_err());
        assert!(RenyiOrder::new(f64::NAN).is_err());
    }

    #[test]
    fn degradation_edge_cases() {
        let d = degradation_score(&CategoryDistribution::new(vec![10, 0, 0])).unwrap();
        assert_eq!((d.entropy, d.score), (0.0, 0.0));
        assert_eq!(
            degradation_score(&CategoryDistribution::new(vec![0, 0, 0])),
            Err(EntropyError::EmptySystem)
        );
    }

    #[test]
    fn total_mismatch_diagnostics() {
        let d = CategoryDistribution::new(vec![132, 11, 4]);
        let diags = d.check_totals(&[148]);
        assert_eq!(
            diags,
            [Diagnostic::CountSumMismatch {
                sum: 147,
                stated: 148
            }]
        );
        assert_eq!(diags[0].to_string(), "counts sum 147 ≠ N 148");
        assert!(d.check_totals(&[147]).is_empty());
    }

    #[test]
    fn product_of_halves() {
        let h = dist(&[0.5, 0.5]);
        assert_eq!(product_distribution(&h, &h).probabilities(), [0.25; 4]);
        let d = dist(&[0.2, 0.8]);
        let p = product_distribution(&dist(&[1.0, 0.0]), &d);
        assert_eq!(p.probabilities(), [0.2, 0.8, 0.0, 0.0]);
    }

    #[test]
    fn distribution_validation() {
        assert!(Distribution::new(vec![]).is_err());
        assert!(Distribution::new(vec![0.5, 0.6]).is_err());
        assert!(Distribution::new(vec![-0.1, 1.1]).is_err());
        assert!(Distribution::from_weights(&[0.0, 0.0]).is_err());
        assert_eq!(
            Distribution::from_weights(&[1.0, 3.0])
                .unwrap()
                .probabilities(),
            [0.25, 0.75]
        );
    }
}
