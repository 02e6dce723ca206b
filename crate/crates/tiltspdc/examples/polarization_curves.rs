//! Polarization-correlation curves at the correlation tilt: the mixing
//! weight comes from the joint spectrum, the coincidence rate from the
//! closed-form two-photon model.
//!
//! Run with: cargo run --example polarization_curves

use tiltspdc::biphoton::{build_jsa, degenerate_type_ii_waves, FilterSpec, ScenarioConfig};
use tiltspdc::crystal::CrystalModel;
use tiltspdc::polarization::{
    coincidence_vs_angles, curve_visibility, epsilon_from_jsa, purity, PolarizationMixModel,
};
use tiltspdc::tilt::{solve_tilt_correlation, TiltedPumpConfig};

fn main() -> tiltspdc::Result<()> {
    let waves = degenerate_type_ii_waves(&CrystalModel::bbo(), 0.405)?;
    let phi = solve_tilt_correlation(&waves.pump, &waves.signal, &waves.idler)?;
    let cfg = ScenarioConfig::degenerate(
        CrystalModel::bbo(),
        2000.0,
        TiltedPumpConfig {
            lambda_p: 0.405,
            bandwidth_fwhm: Some(0.0036),
            waist: None,
            phi,
            alpha: 1.0,
        },
        FilterSpec::gaussian(0.010, 0.810),
        FilterSpec::gaussian(0.010, 0.810),
        256,
        0.12,
    );
    let js = build_jsa(&cfg)?;
    let eps = epsilon_from_jsa(&js)?;
    let model = PolarizationMixModel::new(eps, 0.0);
    println!("correlation tilt phi = {:+.2} deg", phi.to_degrees());
    println!("mixing weight epsilon = {eps:.4}, purity P = {:.4}", purity(&model));
    println!();

    for ta_deg in [-45.0, -30.0] {
        let ta = f64::to_radians(ta_deg);
        println!(
            "theta_a = {ta_deg} deg: sweep visibility = {:.2}%",
            100.0 * curve_visibility(&model, ta)
        );
        println!("  theta_b [deg]   rate");
        let mut tb = 0.0;
        while tb <= 180.0 {
            let r = coincidence_vs_angles(&model, ta, f64::to_radians(tb));
            let bar = "*".repeat((r * 120.0).round() as usize);
            println!("  {tb:>7.1}   {r:.4} {bar}");
            tb += 15.0;
        }
        println!();
    }
    Ok(())
}
