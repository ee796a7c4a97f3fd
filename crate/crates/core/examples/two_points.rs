//! Two objects: how far one MM block update moves a center, and the
//! strength at which the pair fuses.

use spc::data::merge_threshold;
use spc::optimizer::{center_update, run_mm};
use spc::{ClusterState, DataMatrix, PenaltyParams};

fn main() -> spc::Result<()> {
    let data = DataMatrix::from_rows(&[vec![0.0, 0.0], vec![3.0, 4.0]])?;
    let d = 5.0;
    let singletons = ClusterState::singletons(&data);

    // λ chosen so that one update leaves a (1 − φ) share of the gap.
    let eta = 8.0;
    for phi in [0.1, 0.5, 0.9] {
        let lambda = 2.0 * phi * eta * d / ((1.0 - phi) * (eta - d));
        let params = PenaltyParams::new(lambda, eta / lambda)?;
        let theta = center_update(0, &singletons, &data, &params)?;
        let gap = ((theta[0] - 3.0).powi(2) + (theta[1] - 4.0).powi(2)).sqrt();
        println!("phi = {phi}: lambda = {lambda:.3}, remaining gap {gap:.4} (expected {:.4})", (1.0 - phi) * d);
    }

    let xi = merge_threshold(&data);
    for delta in [0.1, 1.0] {
        let params = PenaltyParams::new((1.0 + 1.0 / delta) * d, delta)?;
        let (fit, report) = run_mm(singletons.clone(), &data, &params, xi)?;
        println!(
            "delta = {delta}: K = {} after {} iterations, centers {:?}",
            fit.k(),
            report.iterations,
            fit.centers()
        );
    }
    Ok(())
}
