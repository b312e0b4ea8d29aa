//! Rényi entropy of a category distribution over a range of orders.
//! The curve is non-increasing in alpha and meets Shannon at alpha = 1.

use entropia::entropy::{renyi_entropy, shannon_entropy, Distribution, RenyiOrder};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d = Distribution::from_weights(&[38.0, 6.0, 2.0])?;
    println!("Shannon: {:.6} bits", shannon_entropy(&d));
    println!("{:>6}  {:>10}", "alpha", "H_alpha");
    for alpha in [0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 4.0, 16.0, 64.0] {
        let h = renyi_entropy(&d, RenyiOrder::new(alpha)?);
        println!("{alpha:>6}  {h:>10.6}");
    }
    let max = renyi_entropy(&Distribution::uniform(3)?, RenyiOrder::new(2.0)?);
    println!("uniform over 3, any order: {max:.6} (log2 3)");
    Ok(())
}
