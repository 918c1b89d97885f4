//! Query time against input size. Generates JSON arrays of 10 to 100K
//! objects, runs a CONSTRUCT over each three times and fits a line through
//! the medians.
//!
//! Run with `--release` for realistic numbers; pass a smaller maximum size
//! as the first argument to keep it quick.

use sparql_anything::bench::{linear_fit, means, medians, scale_harness, ScaleConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let max: usize = match std::env::args().nth(1) {
        Some(s) => s.parse()?,
        None => 100_000,
    };
    let config = ScaleConfig {
        sizes: [10, 100, 1_000, 10_000, 100_000]
            .into_iter()
            .filter(|&n| n <= max)
            .collect(),
        runs: 3,
        ..Default::default()
    };
    let rows = scale_harness(&config)?;
    let med = medians(&rows);
    println!("{:>8} {:>12} {:>12}", "size", "median ms", "mean ms");
    for ((n, m), (_, avg)) in med.iter().zip(means(&rows)) {
        println!("{n:>8} {m:>12.2} {avg:>12.2}");
    }
    let points: Vec<(f64, f64)> = med.iter().map(|&(n, t)| (n as f64, t)).collect();
    if let Some(fit) = linear_fit(&points) {
        println!("{:.4} ms per object, R^2 = {:.4}", fit.slope, fit.r_squared);
    }
    Ok(())
}
