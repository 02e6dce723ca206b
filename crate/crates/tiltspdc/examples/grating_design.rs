//! Design diffraction gratings that realize a requested pulse-front tilt,
//! and check them by evaluating the grating equation forward.
//!
//! Run with: cargo run --example grating_design

use tiltspdc::biphoton::degenerate_type_ii_waves;
use tiltspdc::crystal::CrystalModel;
use tiltspdc::tilt::{
    grating_for_tilt, littrow_incidence, solve_tilt_anticorrelation, tilt_from_grating,
    GratingSpec,
};

fn main() -> tiltspdc::Result<()> {
    let lambda_p = 0.405;
    let waves = degenerate_type_ii_waves(&CrystalModel::bbo(), lambda_p)?;
    let phi = solve_tilt_anticorrelation(&waves.signal, &waves.idler)?;
    println!("target tilt: phi = {:.3} deg at {} um", phi.to_degrees(), lambda_p);
    println!();

    println!("designs reaching |phi| (groove density, order -> incidence, magnification):");
    for density in [600.0, 1200.0, 2400.0] {
        for order in [1, -1] {
            match grating_for_tilt(density, order, lambda_p, phi) {
                Ok(g) => {
                    let (phi_back, alpha) = tilt_from_grating(&g, lambda_p)?;
                    println!(
                        "  {density:6.0} l/mm, m = {order:+} -> theta0 = {:+8.3} deg, alpha = {alpha:+.3}, phi check = {:+.3} deg",
                        g.theta0.to_degrees(),
                        phi_back.to_degrees()
                    );
                }
                Err(e) => println!("  {density:6.0} l/mm, m = {order:+} -> infeasible ({e})"),
            }
        }
    }

    println!();
    println!("Littrow reference (theta0 = beta0) and the tilt it produces:");
    for density in [600.0, 1200.0, 2400.0] {
        let theta0 = littrow_incidence(density, 1, lambda_p)?;
        let g = GratingSpec::new(density, 1, theta0);
        let (phi_littrow, alpha) = tilt_from_grating(&g, lambda_p)?;
        println!(
            "  {density:6.0} l/mm at Littrow {:+7.3} deg -> phi = {:+8.3} deg, alpha = {alpha:+.3}",
            theta0.to_degrees(),
            phi_littrow.to_degrees()
        );
    }
    Ok(())
}
