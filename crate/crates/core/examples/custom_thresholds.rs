//! Categorize the corpus with a four-band table read from TOML.

use std::path::PathBuf;

use entropia::{analyze_model, ingest, Format, Render, ThresholdTable, WmcWeighting};

const TABLE: &str = r#"
[[category]]
label = "tiny"
min = 1
max = 2
risk = "Trivial class"

[[category]]
label = "small"
min = 2
max = 4
risk = "Small class"

[[category]]
label = "medium"
min = 4
max = 10
risk = "Watch"

[[category]]
label = "large"
min = 10
risk = "Split candidate"
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("entropia-thresholds-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("bands.toml");
    std::fs::write(&path, TABLE)?;
    let table = ThresholdTable::load(&path)?;
    std::fs::remove_dir_all(&dir)?;

    let corpus = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/corpus");
    let model = ingest::parse_paths(&[corpus])?;
    // Marker has no methods: below the table, so it lands in the first band
    // with a warning. Pass strict = true to reject it instead.
    let report = analyze_model("corpus", &model, WmcWeighting::Cyclomatic, &table, false)?;
    print!("{}", report.render(Format::Csv));
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    Ok(())
}
