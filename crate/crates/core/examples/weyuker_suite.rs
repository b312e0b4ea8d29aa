//! Weyuker properties 1-6 for the CK metrics over fixtures plus generated
//! classes.
//!
//! cargo run --release --example weyuker_suite [-- <seed>]

use std::path::PathBuf;

use entropia::weyuker::{run_weyuker_suite, Population, RandomClasses, SuiteConfig};
use entropia::{ingest, Format, Render};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(7);
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let fixtures = ingest::parse_paths(&[root.join("corpus"), root.join("twins")])?;
    let population =
        RandomClasses::new(seed).population(Population::with_interface_twins(fixtures), 40)?;
    println!(
        "{} classes, {} same-interface pairs, seed {seed}\n",
        population.model.len(),
        population.twins.len()
    );
    let verdicts = run_weyuker_suite(
        &population,
        SuiteConfig {
            seed,
            ..SuiteConfig::default()
        },
    );
    print!("{}", verdicts.render(Format::Text));
    Ok(())
}
