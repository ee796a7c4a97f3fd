//! The full adaptive path on a small noisy data set.

use spc::simgen::{generate, ScenarioSpec};
use spc::{run_path, PathConfig};

fn main() -> spc::Result<()> {
    let mut spec = ScenarioSpec::preset(3, false, 1)?;
    spec.n_clustered = 200;
    spec.p = 5;
    spec.k = 5;
    spec.noise_count = 30;
    let data = generate(&spec)?.data.standardized();

    let path = run_path(&data, &PathConfig::new(0.5))?;
    println!("xi = {:.3e}, grid size {}", path.xi.xi, path.grid_size);
    println!("{:>8} {:>10} {:>8} {:>8} {:>5} {:>4}", "lambda", "delta", "k_total", "k_clust", "iter", "bvr");
    for s in &path.solutions {
        println!(
            "{:>8.4} {:>10.6} {:>8} {:>8} {:>5} {:>4}",
            s.params.lambda,
            s.params.delta,
            s.k_total,
            s.k_clust,
            s.report.iterations,
            if s.bvr_triggered { "yes" } else { "" }
        );
    }
    Ok(())
}
