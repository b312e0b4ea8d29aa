//! Chidamber-Kemerer metrics and an entropy-based design degradation score
//! for a small object-oriented language (MiniOO) or a JSON interchange model.
//!
//! Pipeline: [`ingest`] builds a [`ClassModel`], [`metrics`] computes the CK
//! vector per class, [`entropy`] buckets WMC into complexity categories and
//! scores the distribution, [`report`] renders text, CSV or JSON.
//! [`weyuker`] checks Weyuker's properties 1-6 for each metric.
//!
//! ```
//! use entropia::{analyze_model, parse_source, ThresholdTable, WmcWeighting};
//!
//! let model = parse_source(&[("a.moo", "class A { int x; void m() { x = 1; } }")])?;
//! let report = analyze_model("demo", &model, WmcWeighting::Unit, &ThresholdTable::default(), false)?;
//! assert_eq!(report.total, 1);
//! assert_eq!(report.score, 0.0);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```
//!
//! Runnable walkthroughs live in `examples/`:
//!
//! - `analyze_source`: parse MiniOO files and print a degradation report
//! - `table_entropy`: score category counts directly
//! - `weyuker_suite`: property verdicts for the CK suite
//! - `interchange_roundtrip`: dump and reload the JSON model
//! - `degradation_trend`: entropy across versions
//! - `renyi_spectrum`: Rényi entropy over a range of orders
//! - `custom_thresholds`: load a non-default category table

pub mod cli;
pub mod entropy;
pub mod ingest;
pub mod metrics;
pub mod model;
pub mod report;
pub mod weyuker;

pub use entropy::{
    categorize, degradation_score, renyi_entropy, shannon_entropy, CategoryDistribution,
    Degradation, Distribution, EntropyError, RenyiOrder, ThresholdTable,
};
pub use ingest::{dump_interchange, load_interchange, parse_source, IngestError, ParseError};
pub use metrics::{metric_vector, model_metrics, MetricVector, WmcWeighting};
pub use model::{build_model, combine, ClassDef, ClassModel, ModelError};
pub use report::{analyze_model, DegradationReport, Format, Render};
pub use weyuker::{run_weyuker_suite, Metric, PropertyVerdict, Verdict};
