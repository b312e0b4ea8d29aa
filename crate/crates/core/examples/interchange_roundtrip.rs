//! Dump a parsed model to interchange JSON and load it back.

use std::path::PathBuf;

use entropia::ingest;
use entropia::metrics::model_metrics;
use entropia::WmcWeighting;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let corpus = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/corpus");
    let model = ingest::parse_paths(&[corpus])?;

    let dir = std::env::temp_dir().join(format!("entropia-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("corpus.json");
    ingest::dump_interchange(&model, &path)?;
    let back = ingest::load_interchange(&path)?;

    let same =
        model_metrics(&model, WmcWeighting::Unit) == model_metrics(&back, WmcWeighting::Unit);
    println!("{} classes written to {}", back.len(), path.display());
    println!("metrics identical after reload: {same}");

    let first = ingest::to_interchange_string(&back);
    println!(
        "\n{}",
        first.lines().take(24).collect::<Vec<_>>().join("\n")
    );
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
