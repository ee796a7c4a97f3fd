//! Tabulates the minimax concave penalty, its slope and the MM weight for a
//! few concavity settings at a fixed strength.

use spc::penalty::{max_penalty, rho, rho_prime, PenaltyParams};

fn main() -> spc::Result<()> {
    let lambda = 1.0;
    for delta in [0.5, 1.0, 2.0] {
        let params = PenaltyParams::new(lambda, delta)?;
        println!("delta = {delta} (flat beyond t = {}, plateau {})", params.eta(), max_penalty(&params));
        println!("{:>6} {:>10} {:>10}", "t", "rho", "rho'");
        for i in 0..=6 {
            let t = 0.5 * i as f64;
            println!("{t:>6.2} {:>10.4} {:>10.4}", rho(t, &params)?, rho_prime(t, &params)?);
        }
        println!();
    }
    Ok(())
}
