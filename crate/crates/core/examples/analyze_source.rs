//! Parse MiniOO sources and print the degradation report.
//!
//! cargo run --example analyze_source [-- <paths>...]

use std::path::PathBuf;

use entropia::{analyze_model, ingest, Format, Render, ThresholdTable, WmcWeighting};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut paths: Vec<PathBuf> = std::env::args().skip(1).map(PathBuf::from).collect();
    if paths.is_empty() {
        paths.push(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/corpus"));
    }
    let model = ingest::parse_paths(&paths)?;
    let report = analyze_model(
        "corpus",
        &model,
        WmcWeighting::Cyclomatic,
        &ThresholdTable::default(),
        false,
    )?;
    print!("{}", report.render(Format::Text));
    Ok(())
}
