//! Letting objects leave a cluster they do not fit, one soft-threshold step
//! at a time.

use spc::splitting::{object_loss, split_geometry, split_pass, split_step};
use spc::{ClusterState, DataMatrix, PenaltyParams};

fn main() -> spc::Result<()> {
    // The third object sits far from the center it was fused into.
    let data = DataMatrix::from_rows(&[vec![0.0], vec![0.2], vec![3.0], vec![8.0], vec![8.25]])?;
    let state = ClusterState::from_assignment(&data, vec![0, 0, 0, 1, 1], Some(vec![vec![0.3], vec![8.1]]))?;
    let params = PenaltyParams::new(0.4, 10.0)?;

    for i in 0..data.n() {
        let geometry = split_geometry(i, &state, &data, &params)?;
        let out = split_step(i, &state, &data, &params)?;
        let k = state.assignment()[i];
        println!(
            "object {i}: theta~ {:>7.3}, gamma {:.3}, moved {:<5} loss {:.3} -> {:.3}",
            geometry.theta_tilde[0],
            geometry.gamma,
            out.moved,
            object_loss(i, state.center(k), &state, &data, &params)?,
            object_loss(i, &out.new_theta, &state, &data, &params)?
        );
    }

    let mut state = state;
    let moved = split_pass(&mut state, &data, &params)?;
    println!("{moved} object(s) split off; sizes now {:?}", state.sizes());
    Ok(())
}
