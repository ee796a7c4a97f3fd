//! One fixed (λ, δ) fit by majorization–minimization from singletons.

use spc::data::merge_threshold;
use spc::simgen::{generate, ScenarioSpec};
use spc::{ari_c, label_noise, run_mm, ClusterState, PenaltyParams};

fn main() -> spc::Result<()> {
    let spec = ScenarioSpec {
        n_clustered: 120,
        p: 2,
        k: 4,
        noise_count: 0,
        overlap: false,
        correlated: false,
        cluster_sd: 0.5,
        seed: 3,
    };
    let generated = generate(&spec)?;
    let data = &generated.data;
    let xi = merge_threshold(data);
    for lambda in [0.05, 0.2, 0.5, 1.0] {
        let params = PenaltyParams::new(lambda, 5.0)?;
        let (state, report) = run_mm(ClusterState::singletons(data), data, &params, xi)?;
        let (labels, k_clust) = label_noise(&state, 3);
        println!(
            "lambda {lambda:<5} K = {:>3}, k_clust = {k_clust:>2}, iterations {:>2}, objective {:.2}, ARI_c {:?}",
            state.k(),
            report.iterations,
            report.final_objective,
            ari_c(&labels, &generated.truth)?
        );
    }
    Ok(())
}
