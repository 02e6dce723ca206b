//! Broadening of the downconverted spectrum under a monochromatic pump:
//! the untilted sinc^2 branch versus the quadratic branch at the
//! anticorrelation tilt, numeric and analytic side by side.
//!
//! Run with: cargo run --release --example cw_bandwidth

use tiltspdc::biphoton::{
    build_jsa, curve_fwhm, cw_signal_spectrum_analytic, degenerate_type_ii_waves, marginal_signal,
    FilterSpec, ScenarioConfig,
};
use tiltspdc::crystal::CrystalModel;
use tiltspdc::tilt::{solve_tilt_anticorrelation, TiltedPumpConfig};

fn config(phi: f64) -> ScenarioConfig {
    ScenarioConfig::degenerate(
        CrystalModel::bbo(),
        2000.0,
        TiltedPumpConfig {
            lambda_p: 0.405,
            bandwidth_fwhm: None, // CW pump
            waist: None,
            phi,
            alpha: 1.0,
        },
        FilterSpec::none(),
        FilterSpec::none(),
        2048,
        0.3,
    )
}

fn main() -> tiltspdc::Result<()> {
    let waves = degenerate_type_ii_waves(&CrystalModel::bbo(), 0.405)?;
    let phi_anti = solve_tilt_anticorrelation(&waves.signal, &waves.idler)?;

    let mut widths = Vec::new();
    for (label, phi) in [("untilted", 0.0), ("anticorrelation tilt", phi_anti)] {
        let cfg = config(phi);
        let js = build_jsa(&cfg)?;
        let om = js.grid.detunings();
        let numeric = marginal_signal(&js);
        let analytic =
            cw_signal_spectrum_analytic(&waves.signal, &waves.idler, cfg.length, phi, &om)?;
        let wn = curve_fwhm(&om, &numeric).expect("numeric FWHM");
        let wa = curve_fwhm(&om, &analytic).expect("analytic FWHM");
        println!("{label} (phi = {:+.2} deg):", phi.to_degrees());
        println!("  numeric FWHM  = {wn:.5} rad/fs");
        println!("  analytic FWHM = {wa:.5} rad/fs ({:+.2}% apart)", 100.0 * (wn - wa) / wa);
        widths.push(wn);
        println!();
    }
    println!("tilted / untilted bandwidth ratio: {:.2}", widths[1] / widths[0]);
    Ok(())
}
