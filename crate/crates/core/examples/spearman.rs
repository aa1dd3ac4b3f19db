//! Spearman's rho with tied values, and its invariance under monotone
//! transforms.

use era::stats::{average_ranks, spearman_rho};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let x = [1.0, 2.0, 3.0, 4.0, 5.0];
    let y = [5.0, 6.0, 7.0, 8.0, 7.0];
    println!("ranks of x: {:?}", average_ranks(&x));
    println!("ranks of y: {:?}", average_ranks(&y));
    let r = spearman_rho(&x, &y)?;
    println!(
        "rho = {:.6} (8/sqrt(95) = {:.6})",
        r.rho,
        8.0 / 95f64.sqrt()
    );

    let cubed: Vec<f64> = x.iter().map(|v| v * v * v).collect();
    let exp: Vec<f64> = y.iter().map(|v| v.exp()).collect();
    println!(
        "rho after x^3 and exp(y) = {:.6}",
        spearman_rho(&cubed, &exp)?.rho
    );

    let flat = [7.0; 5];
    let d = spearman_rho(&x, &flat)?;
    println!(
        "against a constant column: rho = {}, degenerate = {}",
        d.rho, d.degenerate
    );
    Ok(())
}
