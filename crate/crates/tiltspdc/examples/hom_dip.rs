//! Hong-Ou-Mandel dips for the three tilt settings: visibility, dip
//! center, triangularity, and a sparkline of each trace.
//!
//! Run with: cargo run --example hom_dip

use tiltspdc::biphoton::{build_jsa, degenerate_type_ii_waves, FilterSpec, ScenarioConfig};
use tiltspdc::crystal::CrystalModel;
use tiltspdc::hom::{coincidence_trace, triangular_fit};
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

fn sparkline(rate: &[f64], cols: usize) -> String {
    let glyphs = ['_', '.', '-', '~', '^'];
    let stride = rate.len() / cols;
    (0..cols)
        .map(|i| {
            let v = rate[i * stride] * 2.0; // R spans [0, 1/2]
            glyphs[((v * (glyphs.len() - 1) as f64).round() as usize).min(glyphs.len() - 1)]
        })
        .collect()
}

fn main() -> tiltspdc::Result<()> {
    let waves = degenerate_type_ii_waves(&CrystalModel::bbo(), 0.405)?;
    let phi_anti = solve_tilt_anticorrelation(&waves.signal, &waves.idler)?;
    let phi_corr = solve_tilt_correlation(&waves.pump, &waves.signal, &waves.idler)?;
    let tau0 = (waves.signal.n_group - waves.idler.n_group) * 2000.0 / 2.0;
    println!("group-delay offset (N_s - N_i) L/2 = {tau0:.1} fs");
    println!();

    for (label, phi) in [
        ("no tilt", 0.0),
        ("anticorrelation tilt", phi_anti),
        ("correlation tilt", phi_corr),
    ] {
        let js = build_jsa(&config(phi))?;
        let trace = coincidence_trace(&js, None, 1601)?;
        println!("{label} (phi = {:+.2} deg):", phi.to_degrees());
        println!(
            "  visibility = {:.1}%, dip center = {:+.1} fs",
            100.0 * trace.visibility,
            trace.dip_center
        );
        if let Some(fit) = triangular_fit(&trace) {
            println!(
                "  triangular: {} (RMS residual {:.2}% of depth)",
                fit.is_triangular,
                100.0 * fit.rms_residual
            );
        }
        println!("  R(tau): {}", sparkline(&trace.rate, 72));
        println!(
            "          tau from {:+.0} to {:+.0} fs",
            trace.delays[0],
            trace.delays[trace.delays.len() - 1]
        );
        println!();
    }
    Ok(())
}
