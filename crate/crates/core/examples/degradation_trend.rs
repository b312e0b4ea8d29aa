//! Entropy across three synthetic versions of a project that drifts toward
//! larger classes.

use entropia::model::{build_model, ClassDef, ClassModel, MethodDef};
use entropia::report::trend;
use entropia::{analyze_model, Format, Render, ThresholdTable, WmcWeighting};

fn version(sizes: &[usize]) -> ClassModel {
    let classes = sizes
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            (0..n).fold(ClassDef::new(format!("K{i}")), |c, k| {
                c.with_method(MethodDef::new(format!("m{k}"), 0))
            })
        })
        .collect();
    build_model(classes, Vec::<String>::new(), None).expect("valid model")
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let versions = [
        ("v1", vec![5, 8, 12, 3, 9, 15]),
        ("v2", vec![5, 8, 25, 3, 9, 15, 40]),
        ("v3", vec![5, 30, 25, 3, 120, 15, 40, 110]),
    ];
    let table = ThresholdTable::default();
    let reports = versions
        .iter()
        .map(|(label, sizes)| {
            analyze_model(label, &version(sizes), WmcWeighting::Unit, &table, false)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let t = trend(&reports, 0.25);
    print!("{}", t.render(Format::Text));
    for d in t.flagged() {
        println!(
            "redesign candidate: {} -> {} (entropy +{:.3})",
            d.from, d.to, d.entropy
        );
    }
    Ok(())
}
