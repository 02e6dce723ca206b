//! Build the joint spectral intensity for the three tilt settings and
//! print the correlation diagnostics plus a coarse ASCII rendering of
//! each spectrum.
//!
//! Run with: cargo run --example joint_spectrum

use tiltspdc::biphoton::{
    build_jsa, diagonal_spectra, pearson_correlation, schmidt_number, FilterSpec, ScenarioConfig,
};
use tiltspdc::biphoton::{curve_fwhm, degenerate_type_ii_waves};
use tiltspdc::crystal::CrystalModel;
use tiltspdc::tilt::{solve_tilt_anticorrelation, solve_tilt_correlation, TiltedPumpConfig};

fn config(phi: f64) -> ScenarioConfig {
    ScenarioConfig::degenerate(
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
    )
}

fn ascii_render(intensity: &ndarray::Array2<f64>, rows: usize) {
    let n = intensity.nrows();
    let stride = n / rows;
    let peak = intensity.iter().cloned().fold(0.0f64, f64::max);
    let shades = [' ', '.', ':', '+', '#', '@'];
    // Omega_s increases upward, Omega_i to the right
    for r in (0..rows).rev() {
        let mut line = String::new();
        for c in 0..rows {
            let v = intensity[[r * stride, c * stride]] / peak;
            let idx = ((v * (shades.len() - 1) as f64).round() as usize).min(shades.len() - 1);
            line.push(shades[idx]);
            line.push(shades[idx]);
        }
        println!("  {line}");
    }
}

fn main() -> tiltspdc::Result<()> {
    let waves = degenerate_type_ii_waves(&CrystalModel::bbo(), 0.405)?;
    let phi_anti = solve_tilt_anticorrelation(&waves.signal, &waves.idler)?;
    let phi_corr = solve_tilt_correlation(&waves.pump, &waves.signal, &waves.idler)?;

    for (label, phi) in [
        ("no tilt", 0.0),
        ("anticorrelation tilt", phi_anti),
        ("correlation tilt", phi_corr),
    ] {
        let js = build_jsa(&config(phi))?;
        let r = pearson_correlation(&js)?;
        let k = schmidt_number(&js);
        let d = diagonal_spectra(&js);
        let w_plus = curve_fwhm(&d.omega_plus, &d.s_plus);
        let w_minus = curve_fwhm(&d.omega_minus, &d.s_minus);
        println!("{label} (phi = {:+.2} deg):", phi.to_degrees());
        println!("  pearson r = {r:+.4}, schmidt K = {k:.3}");
        if let (Some(wp), Some(wm)) = (w_plus, w_minus) {
            println!("  FWHM S+ = {wp:.4} rad/fs, S- = {wm:.4} rad/fs (ratio {:.2})", wm / wp);
        }
        ascii_render(&js.intensity(), 24);
        println!();
    }
    Ok(())
}
