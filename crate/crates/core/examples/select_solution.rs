//! Picking one solution from a path with the likelihood difference ratios,
//! under both rules.

use spc::selection::select_with_rule;
use spc::simgen::{generate, ScenarioSpec};
use spc::{run_path, PathConfig, SelectionRule};

fn main() -> spc::Result<()> {
    let generated = generate(&ScenarioSpec::preset(1, false, 4)?)?;
    let data = generated.data.standardized();
    let path = run_path(&data, &PathConfig::new(0.5))?;

    let after = select_with_rule(&path, &data, 0.05, SelectionRule::AfterLastJump)?;
    println!("{:>8} {:>16}", "K", "log-likelihood");
    for c in &after.candidates {
        println!("{:>8} {:>16.2}", c.k_total, c.log_likelihood);
    }
    for r in &after.ratios {
        println!("ratio K {} -> {}: {:.4}", r.k_low, r.k_high, r.ratio);
    }
    let before = select_with_rule(&path, &data, 0.05, SelectionRule::BeforeLastJump)?;
    println!("after the last jump:  K = {}", after.k_star);
    println!("before the last jump: K = {}", before.k_star);
    Ok(())
}
