//! Solve the two special pulse-front tilt angles for BBO pumped at
//! 405 nm and show how they reshape the effective group velocities.
//!
//! Run with: cargo run --example tilt_angles

use tiltspdc::biphoton::degenerate_type_ii_waves;
use tiltspdc::crystal::CrystalModel;
use tiltspdc::tilt::{effective_wave, solve_tilt_anticorrelation, solve_tilt_correlation};

fn main() -> tiltspdc::Result<()> {
    let crystal = CrystalModel::bbo();
    let waves = degenerate_type_ii_waves(&crystal, 0.405)?;
    println!("phase-matching angle: {:.4} deg", waves.theta_pm.to_degrees());
    println!(
        "inverse group velocities [fs/um]: N_p = {:.4}, N_s = {:.4}, N_i = {:.4}",
        waves.pump.n_group, waves.signal.n_group, waves.idler.n_group
    );

    let phi_anti = solve_tilt_anticorrelation(&waves.signal, &waves.idler)?;
    let phi_corr = solve_tilt_correlation(&waves.pump, &waves.signal, &waves.idler)?;
    println!();
    println!("anticorrelation tilt: phi = {:.3} deg", phi_anti.to_degrees());
    println!("correlation tilt:     phi = {:.3} deg", phi_corr.to_degrees());

    for (label, phi) in [("no tilt", 0.0), ("anticorrelation", phi_anti), ("correlation", phi_corr)]
    {
        let ep = effective_wave(waves.pump, phi);
        let es = effective_wave(waves.signal, phi);
        let ei = effective_wave(waves.idler, phi);
        println!();
        println!("{label} (phi = {:.2} deg):", phi.to_degrees());
        println!("  u_p = {:.4}, u_s = {:.4}, u_i = {:.4} fs/um", ep.u, es.u, ei.u);
        println!("  u_s - u_i       = {:+.3e} fs/um (zero at the anticorrelation tilt)", es.u - ei.u);
        println!("  u_p - (u_s+u_i)/2 = {:+.3e} fs/um (zero at the correlation tilt)", ep.u - 0.5 * (es.u + ei.u));
    }
    Ok(())
}
