//! Report assembly and rendering (text, CSV, JSON).
//!
//! TEXT and CSV print reals with six decimals; JSON keeps full precision so
//! every number parses back to the same `f64`.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::entropy::{
    categorize, degradation_score, CategoryDistribution, Diagnostic, EntropyError, ThresholdTable,
};
use crate::metrics::{model_metrics, MetricVector, WmcWeighting};
use crate::model::{ClassModel, SourceStats};
use crate::weyuker::PropertyVerdict;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "text" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}`")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Text => "text",
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// Anything that can be printed in the three output formats.
pub trait Render {
    fn render(&self, format: Format) -> String;
}

/// Project-level line and statement counts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectStats {
    pub classes: usize,
    pub files: usize,
    pub lines: usize,
    pub blank: usize,
    pub comment: usize,
    pub code: usize,
    /// Always 0: conditional-compilation regions do not exist in MiniOO.
    pub inactive: usize,
    pub executable: usize,
    pub declarative: usize,
    pub ratio_comment_code: f64,
}

impl ProjectStats {
    pub fn new(classes: usize, s: &SourceStats) -> Self {
        Self {
            classes,
            files: s.files,
            lines: s.lines,
            blank: s.blank,
            comment: s.comment,
            code: s.code,
            inactive: 0,
            executable: s.executable,
            declarative: s.declarative,
            ratio_comment_code: s.comment_code_ratio(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassRow {
    pub class: String,
    pub metrics: MetricVector,
    pub category: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryRow {
    pub label: String,
    pub min: f64,
    pub max: Option<f64>,
    pub risk: String,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegradationReport {
    pub project: String,
    pub weighting: WmcWeighting,
    pub stats: Option<ProjectStats>,
    pub classes: Vec<ClassRow>,
    pub categories: Vec<CategoryRow>,
    /// N, the number of classes.
    pub total: u64,
    /// Shannon entropy of the category distribution, in bits.
    pub entropy: f64,
    /// N·H.
    pub score: f64,
    pub warnings: Vec<Diagnostic>,
}

impl DegradationReport {
    pub fn distribution(&self) -> CategoryDistribution {
        CategoryDistribution::new(self.categories.iter().map(|c| c.count).collect())
    }
}

/// Categorizes the WMC of each class and assembles the report.
pub fn build_report(
    project: &str,
    model: &ClassModel,
    metrics: &[(String, MetricVector)],
    weighting: WmcWeighting,
    thresholds: &ThresholdTable,
    strict: bool,
) -> Result<DegradationReport, EntropyError> {
    if metrics.is_empty() {
        return Err(EntropyError::EmptySystem);
    }
    let values = metrics.iter().map(|(n, m)| (n.as_str(), m.wmc as f64));
    let (distribution, warnings) = categorize(values, thresholds, strict)?;
    let degradation = degradation_score(&distribution)?;
    let cats = thresholds.categories();
    let classes = metrics
        .iter()
        .map(|(name, m)| ClassRow {
            class: name.clone(),
            metrics: *m,
            category: cats[thresholds.locate(m.wmc as f64).unwrap_or(0)]
                .label
                .clone(),
        })
        .collect();
    let categories = cats
        .iter()
        .zip(&distribution.counts)
        .map(|(c, &count)| CategoryRow {
            label: c.label.clone(),
            min: c.min,
            max: c.max,
            risk: c.risk.clone(),
            count,
        })
        .collect();
    Ok(DegradationReport {
        project: project.to_string(),
        weighting,
        stats: model.stats().map(|s| ProjectStats::new(model.len(), s)),
        classes,
        categories,
        total: degradation.classes,
        entropy: degradation.entropy,
        score: degradation.score,
        warnings,
    })
}

/// Metrics, categorization and degradation for a whole model.
pub fn analyze_model(
    project: &str,
    model: &ClassModel,
    weighting: WmcWeighting,
    thresholds: &ThresholdTable,
    strict: bool,
) -> Result<DegradationReport, EntropyError> {
    let metrics = model_metrics(model, weighting);
    build_report(project, model, &metrics, weighting, thresholds, strict)
}

/// Fixed trailing rows in the per-class CSV.
pub const CSV_SUMMARY_ROWS: usize = 3;

pub const CSV_HEADER: [&str; 9] = [
    "class",
    "wmc",
    "dit",
    "noc",
    "cbo",
    "rfc",
    "lcom_components",
    "lcom_percent",
    "category",
];

fn csv_string(rows: Vec<Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new()
        .flexible(true)
        .from_writer(Vec::new());
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

fn json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn range_text(min: f64, max: Option<f64>, lower_open: bool) -> String {
    let lo = if lower_open { "<" } else { "<=" };
    match max {
        Some(max) => format!("{min} {lo} x <= {max}"),
        None => format!("x > {min}"),
    }
}

impl Render for DegradationReport {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => json_string(self),
            Format::Csv => {
                let mut rows = vec![CSV_HEADER.iter().map(|s| s.to_string()).collect()];
                for r in &self.classes {
                    let m = &r.metrics;
                    rows.push(vec![
                        r.class.clone(),
                        m.wmc.to_string(),
                        m.dit.to_string(),
                        m.noc.to_string(),
                        m.cbo.to_string(),
                        m.rfc.to_string(),
                        m.lcom_components.to_string(),
                        format!("{:.6}", m.lcom_percent),
                        r.category.clone(),
                    ]);
                }
                let pad = |key: &str, v: String| {
                    let mut row = vec![key.to_string(), v];
                    row.resize(CSV_HEADER.len(), String::new());
                    row
                };
                rows.push(pad("summary:classes", self.total.to_string()));
                rows.push(pad("summary:entropy", format!("{:.6}", self.entropy)));
                rows.push(pad("summary:score", format!("{:.6}", self.score)));
                csv_string(rows)
            }
            Format::Text => self.text(),
        }
    }
}

impl DegradationReport {
    fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "Project: {} (WMC weighting: {})",
            self.project, self.weighting
        );
        if let Some(s) = &self.stats {
            let _ = writeln!(out, "\nProject metrics");
            let rows: [(&str, String); 10] = [
                ("Classes", s.classes.to_string()),
                ("Files", s.files.to_string()),
                ("Lines", s.lines.to_string()),
                ("Lines Blank", s.blank.to_string()),
                ("Lines Code", s.code.to_string()),
                ("Lines Comment", s.comment.to_string()),
                ("Lines Inactive", s.inactive.to_string()),
                ("Executable Statements", s.executable.to_string()),
                ("Declarative Statements", s.declarative.to_string()),
                ("Ratio Comment/Code", format!("{:.6}", s.ratio_comment_code)),
            ];
            for (k, v) in rows {
                let _ = writeln!(out, "  {:<24}{v:>12}", format!("{k}:"));
            }
        }

        let width = self
            .classes
            .iter()
            .map(|r| r.class.len())
            .max()
            .unwrap_or(5)
            .max(5);
        let _ = writeln!(out, "\nClasses");
        let _ = writeln!(
            out,
            "  {:<width$} {:>6} {:>4} {:>4} {:>4} {:>5} {:>5} {:>11}  category",
            "class", "WMC", "DIT", "NOC", "CBO", "RFC", "LCOM", "LCOM%"
        );
        for r in &self.classes {
            let m = &r.metrics;
            let _ = writeln!(
                out,
                "  {:<width$} {:>6} {:>4} {:>4} {:>4} {:>5} {:>5} {:>11.6}  {}",
                r.class,
                m.wmc,
                m.dit,
                m.noc,
                m.cbo,
                m.rfc,
                m.lcom_components,
                m.lcom_percent,
                r.category
            );
        }

        let _ = writeln!(out, "\nWMC categories");
        for (i, c) in self.categories.iter().enumerate() {
            let _ = writeln!(
                out,
                "  S{} [{}] {:<20} {:>6}  {}",
                i + 1,
                c.label,
                range_text(c.min, c.max, i > 0),
                c.count,
                c.risk
            );
        }

        let _ = writeln!(out, "\nEntropy degradation");
        let heads: Vec<String> = (1..=self.categories.len())
            .map(|i| format!("S{i}"))
            .collect();
        let _ = writeln!(
            out,
            "  {:>13} {}  {:>14}  {:>16}",
            "Total Classes",
            heads
                .iter()
                .map(|h| format!("{h:>5}"))
                .collect::<Vec<_>>()
                .join(" "),
            "WMC Entropy",
            "N*(WMC Entropy)"
        );
        let counts: Vec<String> = self
            .categories
            .iter()
            .map(|c| format!("{:>5}", c.count))
            .collect();
        let _ = writeln!(
            out,
            "  {:>13} {}  {:>14.6}  {:>16.6}",
            self.total,
            counts.join(" "),
            self.entropy,
            self.score
        );
        write_warnings(&mut out, &self.warnings);
        out
    }
}

fn write_warnings(out: &mut String, warnings: &[Diagnostic]) {
    if warnings.is_empty() {
        return;
    }
    let _ = writeln!(out, "\nWarnings");
    for w in warnings {
        let _ = writeln!(out, "  {w}");
    }
}

/// Result of scoring category counts directly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountsReport {
    pub counts: Vec<u64>,
    pub total: u64,
    pub stated_totals: Vec<u64>,
    pub entropy: f64,
    pub score: f64,
    pub warnings: Vec<Diagnostic>,
}

/// Entropy and N·H from counts, with a diagnostic per disagreeing total.
/// Values always come from the counts as given.
pub fn counts_report(counts: &[u64], stated_totals: &[u64]) -> Result<CountsReport, EntropyError> {
    let d = CategoryDistribution::new(counts.to_vec());
    let warnings = d.check_totals(stated_totals);
    let deg = degradation_score(&d)?;
    Ok(CountsReport {
        counts: counts.to_vec(),
        total: deg.classes,
        stated_totals: stated_totals.to_vec(),
        entropy: deg.entropy,
        score: deg.score,
        warnings,
    })
}

impl Render for CountsReport {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => json_string(self),
            Format::Csv => {
                let mut header: Vec<String> = vec!["total".into()];
                header.extend((1..=self.counts.len()).map(|i| format!("s{i}")));
                header.extend(["entropy".into(), "score".into()]);
                let mut row = vec![self.total.to_string()];
                row.extend(self.counts.iter().map(u64::to_string));
                row.push(format!("{:.6}", self.entropy));
                row.push(format!("{:.6}", self.score));
                csv_string(vec![header, row])
            }
            Format::Text => {
                let mut out = String::new();
                let counts: Vec<String> = self.counts.iter().map(u64::to_string).collect();
                let _ = writeln!(out, "counts:          {}", counts.join(" "));
                let _ = writeln!(out, "N:               {}", self.total);
                let _ = writeln!(out, "WMC entropy:     {:.6}", self.entropy);
                let _ = writeln!(out, "N*(WMC entropy): {:.6}", self.score);
                write_warnings(&mut out, &self.warnings);
                out
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendPoint {
    pub label: String,
    pub classes: u64,
    pub entropy: f64,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendDelta {
    pub from: String,
    pub to: String,
    pub entropy: f64,
    pub score: f64,
    pub classes: i64,
    /// Entropy rose by more than the configured step.
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendReport {
    pub step: f64,
    pub versions: Vec<TrendPoint>,
    pub deltas: Vec<TrendDelta>,
}

impl TrendReport {
    pub fn flagged(&self) -> impl Iterator<Item = &TrendDelta> {
        self.deltas.iter().filter(|d| d.flagged)
    }
}

/// Entropy and score changes between consecutive versions.
pub fn trend(reports: &[DegradationReport], step: f64) -> TrendReport {
    let versions: Vec<TrendPoint> = reports
        .iter()
        .map(|r| TrendPoint {
            label: r.project.clone(),
            classes: r.total,
            entropy: r.entropy,
            score: r.score,
        })
        .collect();
    let deltas = versions
        .windows(2)
        .map(|w| {
            let d_entropy = w[1].entropy - w[0].entropy;
            TrendDelta {
                from: w[0].label.clone(),
                to: w[1].label.clone(),
                entropy: d_entropy,
                score: w[1].score - w[0].score,
                classes: w[1].classes as i64 - w[0].classes as i64,
                flagged: d_entropy > step,
            }
        })
        .collect();
    TrendReport {
        step,
        versions,
        deltas,
    }
}

impl Render for TrendReport {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => json_string(self),
            Format::Csv => {
                let mut rows = vec![vec![
                    "version".to_string(),
                    "classes".into(),
                    "entropy".into(),
                    "score".into(),
                    "d_entropy".into(),
                    "d_score".into(),
                    "flagged".into(),
                ]];
                for (i, v) in self.versions.iter().enumerate() {
                    let d = i.checked_sub(1).map(|j| &self.deltas[j]);
                    rows.push(vec![
                        v.label.clone(),
                        v.classes.to_string(),
                        format!("{:.6}", v.entropy),
                        format!("{:.6}", v.score),
                        d.map(|d| format!("{:.6}", d.entropy)).unwrap_or_default(),
                        d.map(|d| format!("{:.6}", d.score)).unwrap_or_default(),
                        d.map(|d| d.flagged.to_string()).unwrap_or_default(),
                    ]);
                }
                csv_string(rows)
            }
            Format::Text => {
                let mut out = String::new();
                let w = self
                    .versions
                    .iter()
                    .map(|v| v.label.len())
                    .max()
                    .unwrap_or(7)
                    .max(7);
                let _ = writeln!(
                    out,
                    "{:<w$} {:>8} {:>12} {:>14} {:>12} {:>14}",
                    "version", "classes", "entropy", "N*entropy", "d_entropy", "d_score"
                );
                for (i, v) in self.versions.iter().enumerate() {
                    let d = i.checked_sub(1).map(|j| &self.deltas[j]);
                    let (de, ds) = d
                        .map(|d| (format!("{:+.6}", d.entropy), format!("{:+.6}", d.score)))
                        .unwrap_or_default();
                    let flag = if d.is_some_and(|d| d.flagged) {
                        "  <- entropy rise"
                    } else {
                        ""
                    };
                    let _ = writeln!(
                        out,
                        "{:<w$} {:>8} {:>12.6} {:>14.6} {:>12} {:>14}{flag}",
                        v.label, v.classes, v.entropy, v.score, de, ds
                    );
                }
                out
            }
        }
    }
}

impl Render for [PropertyVerdict] {
    fn render(&self, format: Format) -> String {
        let witness_text = |v: &PropertyVerdict| {
            v.witness
                .as_ref()
                .map(|w| {
                    w.observations
                        .iter()
                        .map(|o| format!("{}={}", o.class, o.value))
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .unwrap_or_default()
        };
        match format {
            Format::Json => json_string(&self),
            Format::Csv => {
                let mut rows = vec![vec![
                    "property".to_string(),
                    "metric".into(),
                    "verdict".into(),
                    "witness".into(),
                    "trial".into(),
                    "budget_used".into(),
                ]];
                for v in self {
                    rows.push(vec![
                        v.property.to_string(),
                        v.metric.to_string(),
                        v.verdict.to_string(),
                        witness_text(v),
                        v.witness
                            .as_ref()
                            .and_then(|w| w.trial)
                            .map(|t| t.to_string())
                            .unwrap_or_default(),
                        v.budget_used.to_string(),
                    ]);
                }
                csv_string(rows)
            }
            Format::Text => {
                let mut out = String::new();
                let _ = writeln!(
                    out,
                    "{:<4} {:<15} {:<21} {:>8}  witness",
                    "prop", "metric", "verdict", "budget"
                );
                for v in self {
                    let trial = v
                        .witness
                        .as_ref()
                        .and_then(|w| w.trial)
                        .map(|t| format!("trial {t}: "))
                        .unwrap_or_default();
                    let _ = writeln!(
                        out,
                        "{:<4} {:<15} {:<21} {:>8}  {trial}{}",
                        v.property,
                        v.metric.to_string(),
                        v.verdict.to_string(),
                        v.budget_used,
                        witness_text(v)
                    );
                }
                out
            }
        }
    }
}
