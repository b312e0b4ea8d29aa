//! Score category counts directly, with the count-sum check.

use entropia::report::counts_report;
use entropia::{Format, Render};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rows: [(&str, &[u64], &[u64]); 5] = [
        ("P1", &[34, 3, 1], &[37, 38]),
        ("P2", &[38, 6, 2], &[46]),
        ("P3", &[105, 12, 3], &[120]),
        ("P4", &[126, 7, 6], &[139]),
        ("P5", &[132, 11, 4], &[148]),
    ];
    println!("{:<4} {:>12} {:>14}  warnings", "row", "H", "N*H");
    for (label, counts, totals) in rows {
        let r = counts_report(counts, totals)?;
        let warnings: Vec<String> = r.warnings.iter().map(ToString::to_string).collect();
        println!(
            "{label:<4} {:>12.6} {:>14.6}  {}",
            r.entropy,
            r.score,
            warnings.join("; ")
        );
    }
    println!();
    print!("{}", counts_report(&[38, 6, 2], &[])?.render(Format::Json));
    Ok(())
}
