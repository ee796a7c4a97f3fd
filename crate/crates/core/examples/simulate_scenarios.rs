//! The four benchmark scenarios, low- and high-dimensional, and what the
//! generator reports about them.

use spc::simgen::{generate, ScenarioSpec};

fn main() -> spc::Result<()> {
    for high_dim in [false, true] {
        for scenario in 1..=4 {
            let spec = ScenarioSpec::preset(scenario, high_dim, 0)?;
            let g = generate(&spec)?;
            let mean_radius = g.radii.iter().sum::<f64>() / g.radii.len() as f64;
            println!(
                "scenario {scenario} {:<4} n = {:>3}, p = {:>3}, noise {:>3}, mean radius {mean_radius:.2}, overlap {:.3?}",
                if high_dim { "high" } else { "low" },
                g.data.n(),
                g.data.p(),
                g.truth.noise_count(),
                g.overlap_fractions
            );
        }
    }
    Ok(())
}
