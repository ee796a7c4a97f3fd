//! Simulate, cluster, select and score in one go, writing the path document
//! and assignment the command line tool would produce.

use spc::csvio::write_assignment;
use spc::evaluation::label_noise_assignment;
use spc::simgen::{generate, ScenarioSpec};
use spc::{ari_c, ari_n, run_path, PathConfig, PathDocument, SelectionRule};

fn main() -> spc::Result<()> {
    let generated = generate(&ScenarioSpec::preset(3, false, 2)?)?;
    let fitted = generated.data.standardized();
    let config = PathConfig::new(0.5);
    let path = run_path(&fitted, &config)?;

    let doc = PathDocument::from_path(&path, &generated.data, &fitted, true);
    let choice = doc.select(0.05, SelectionRule::default())?;
    let chosen = &doc.solutions[choice.solution_index];
    let (labels, k_clust) = label_noise_assignment(&chosen.assignment, config.noise_cutoff);

    let dir = std::env::temp_dir().join("spc-full-pipeline");
    std::fs::create_dir_all(&dir)?;
    doc.write_file(&dir.join("path.json"))?;
    write_assignment(std::fs::File::create(dir.join("assignment.csv"))?, &chosen.assignment, &labels)?;

    println!("{} solutions, picked #{} with k_clust = {k_clust}", doc.solutions.len(), choice.solution_index);
    println!("ARI_c = {:?}", ari_c(&labels, &generated.truth)?);
    println!("ARI_n = {:.4}", ari_n(&labels, &generated.truth)?);
    println!("files in {}", dir.display());
    Ok(())
}
