//! Scenario-driven commands behind the CLI verbs. Each command resolves a
//! parsed Scenario, runs the physics, writes plot-ready data files plus a
//! deterministic manifest into the output directory, and prints a one-line
//! summary per result to stdout.

use std::fs;
use std::path::{Path, PathBuf};

use log::info;

use crate::biphoton::{
    build_jsa, curve_fwhm, cw_signal_spectrum_analytic, diagonal_spectra, marginal_signal,
    pearson_correlation, schmidt_number, ScenarioWaves,
};
use crate::error::{Error, Result};
use crate::hom::{coincidence_trace, triangular_fit};
use crate::output::{
    scenario_hash, write_curve, write_grid, write_manifest, OutputFormat,
};
use crate::polarization::{
    coincidence_vs_angles, curve_visibility, epsilon_from_jsa, purity, PolarizationMixModel,
};
use crate::scenario::Scenario;
use crate::tilt::{effective_wave, grating_for_tilt};

fn ensure_out(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    Ok(())
}

fn base_entries(command: &str, scenario: &Scenario) -> Vec<(String, String)> {
    vec![
        ("command".into(), command.into()),
        ("scenario.sha256".into(), scenario_hash(&scenario.source_text)),
        ("crystal".into(), scenario.crystal.name.clone()),
        ("length".into(), format!("{} um", scenario.length)),
        ("pump.wavelength".into(), format!("{} um", scenario.lambda_p)),
        (
            "pump.fwhm".into(),
            match scenario.bandwidth_fwhm {
                Some(f) => format!("{f} um"),
                None => "cw".into(),
            },
        ),
        (
            "pump.waist".into(),
            match scenario.waist {
                Some(w) => format!("{w} um"),
                None => "off".into(),
            },
        ),
        ("grid.points".into(), scenario.grid_points.to_string()),
        ("grid.span".into(), format!("{} rad/fs", scenario.grid_span)),
    ]
}

fn tilt_entries(phi: f64, alpha: f64) -> Vec<(String, String)> {
    vec![
        ("tilt.phi".into(), format!("{} deg", phi.to_degrees())),
        ("tilt.alpha".into(), format!("{alpha}")),
    ]
}

/// Solve/report the tilt angle, suggest realizing gratings, and tabulate
/// effective wave parameters.
pub fn cmd_tilt_solve(scenario: &Scenario, out: &Path) -> Result<()> {
    ensure_out(out)?;
    let waves = scenario.waves()?;
    let (phi, alpha) = scenario.resolve_tilt(&waves)?;
    let (ep, es, ei) = (
        effective_wave(waves.pump, phi),
        effective_wave(waves.signal, phi),
        effective_wave(waves.idler, phi),
    );
    let res_anti = es.u - ei.u;
    let res_corr = ep.u - 0.5 * (es.u + ei.u);

    let mut report = String::new();
    use std::fmt::Write as _;
    writeln!(report, "# tilt-solve report").unwrap();
    writeln!(report, "# scenario.sha256 = {}", scenario_hash(&scenario.source_text)).unwrap();
    writeln!(report, "theta_pm = {} deg", waves.theta_pm.to_degrees()).unwrap();
    writeln!(report, "phi = {} deg", phi.to_degrees()).unwrap();
    writeln!(report, "alpha = {alpha}").unwrap();
    writeln!(report, "# wave   N[fs/um]   D[fs^2/um]   rho[deg]   u[fs/um]   g[fs^2/um]").unwrap();
    for (name, w, e) in
        [("pump", waves.pump, ep), ("signal", waves.signal, es), ("idler", waves.idler, ei)]
    {
        writeln!(
            report,
            "{name} {:.6} {:.6} {:.4} {:.6} {:.6}",
            w.n_group,
            w.gvd,
            w.rho.to_degrees(),
            e.u,
            e.g
        )
        .unwrap();
    }
    writeln!(report, "residual.anticorrelation = {res_anti:e} fs/um").unwrap();
    writeln!(report, "residual.correlation = {res_corr:e} fs/um").unwrap();
    writeln!(report, "# grating suggestions realizing |phi| (order, incidence)").unwrap();
    for density in [600.0, 1200.0, 2400.0] {
        for order in [1, -1] {
            if let Ok(g) = grating_for_tilt(density, order, scenario.lambda_p, phi) {
                writeln!(
                    report,
                    "grating = {density} lines/mm, m = {order}, theta0 = {:.4} deg",
                    g.theta0.to_degrees()
                )
                .unwrap();
            }
        }
    }
    fs::write(out.join("tilt_solve.txt"), &report)?;

    let mut entries = base_entries("tilt-solve", scenario);
    entries.extend(tilt_entries(phi, alpha));
    entries.push(("residual.anticorrelation".into(), format!("{res_anti:e} fs/um")));
    entries.push(("residual.correlation".into(), format!("{res_corr:e} fs/um")));
    write_manifest(&out.join("manifest.txt"), &entries, &scenario.source_text)?;
    println!("tilt-solve: phi = {:.4} deg (alpha = {alpha:.4})", phi.to_degrees());
    Ok(())
}

/// Joint spectral intensity grid plus diagonal spectra and scalar
/// diagnostics (Pearson r, Schmidt K).
pub fn cmd_jsi(scenario: &Scenario, out: &Path, format: OutputFormat) -> Result<()> {
    ensure_out(out)?;
    let config = scenario.to_config()?;
    let js = build_jsa(&config)?;
    let hash = scenario_hash(&scenario.source_text);
    let header = vec![
        ("scenario.sha256".to_string(), hash.clone()),
        ("grid.points".to_string(), scenario.grid_points.to_string()),
        ("grid.span".to_string(), format!("{} rad/fs", scenario.grid_span)),
        (
            "grid.centers".to_string(),
            format!("{} {} rad/fs", js.grid.centers.0, js.grid.centers.1),
        ),
    ];
    let axis = js.grid.detunings();
    let ext = if format == OutputFormat::Binary { "bin" } else { "dat" };
    write_grid(&out.join(format!("jsi.{ext}")), &header, &axis, &js.intensity(), format)?;

    let d = diagonal_spectra(&js);
    write_curve(
        &out.join("s_plus.dat"),
        &header,
        &[("omega_plus_rad_fs", &d.omega_plus), ("s_plus", &d.s_plus)],
    )?;
    write_curve(
        &out.join("s_minus.dat"),
        &header,
        &[("omega_minus_rad_fs", &d.omega_minus), ("s_minus", &d.s_minus)],
    )?;

    let r = pearson_correlation(&js)?;
    let k = schmidt_number(&js);
    let mut entries = base_entries("jsi", scenario);
    entries.extend(tilt_entries(config.pump.phi, config.pump.alpha));
    entries.push(("pearson_r".into(), format!("{r}")));
    entries.push(("schmidt_k".into(), format!("{k}")));
    if let Some(w) = curve_fwhm(&d.omega_plus, &d.s_plus) {
        entries.push(("fwhm.s_plus".into(), format!("{w} rad/fs")));
    }
    if let Some(w) = curve_fwhm(&d.omega_minus, &d.s_minus) {
        entries.push(("fwhm.s_minus".into(), format!("{w} rad/fs")));
    }
    write_manifest(&out.join("manifest.txt"), &entries, &scenario.source_text)?;
    println!("jsi: pearson r = {r:.4}, schmidt K = {k:.4}");
    Ok(())
}

/// Hong-Ou-Mandel trace with visibility, dip center, and the
/// triangular-shape diagnosis.
pub fn cmd_hom(scenario: &Scenario, out: &Path) -> Result<()> {
    ensure_out(out)?;
    let config = scenario.to_config()?;
    let js = build_jsa(&config)?;
    let trace = coincidence_trace(&js, None, 1601)?;
    let hash = scenario_hash(&scenario.source_text);
    write_curve(
        &out.join("hom.dat"),
        &[
            ("scenario.sha256".to_string(), hash),
            ("visibility".to_string(), format!("{}", trace.visibility)),
            ("dip_center".to_string(), format!("{} fs", trace.dip_center)),
        ],
        &[("tau_fs", &trace.delays), ("rate", &trace.rate)],
    )?;
    let mut entries = base_entries("hom", scenario);
    entries.extend(tilt_entries(config.pump.phi, config.pump.alpha));
    entries.push(("visibility".into(), format!("{}", trace.visibility)));
    entries.push(("dip_center".into(), format!("{} fs", trace.dip_center)));
    if let Some(fit) = triangular_fit(&trace) {
        entries.push(("dip.triangular".into(), format!("{}", fit.is_triangular)));
        entries.push(("dip.triangle_rms_residual".into(), format!("{}", fit.rms_residual)));
    }
    write_manifest(&out.join("manifest.txt"), &entries, &scenario.source_text)?;
    println!(
        "hom: visibility = {:.4}, dip center = {:.2} fs",
        trace.visibility, trace.dip_center
    );
    Ok(())
}

/// CW signal spectrum: numeric marginal next to the analytic branch (when
/// one exists for the scenario's tilt).
pub fn cmd_cw_spectrum(scenario: &Scenario, out: &Path) -> Result<()> {
    ensure_out(out)?;
    if scenario.bandwidth_fwhm.is_some() {
        return Err(Error::Scenario(
            "cw-spectrum needs a CW pump: set pump.cw = true and drop pump.fwhm".into(),
        ));
    }
    let config = scenario.to_config()?;
    let waves: ScenarioWaves = scenario.waves()?;
    let js = build_jsa(&config)?;
    let om = js.grid.detunings();
    let numeric = marginal_signal(&js);
    // peak-normalize the numeric column for side-by-side comparison
    let peak = numeric.iter().cloned().fold(0.0f64, f64::max);
    let numeric_norm: Vec<f64> = numeric.iter().map(|v| v / peak).collect();

    let analytic = cw_signal_spectrum_analytic(
        &waves.signal,
        &waves.idler,
        scenario.length,
        config.pump.phi,
        &om,
    );
    let hash = scenario_hash(&scenario.source_text);
    let header = vec![("scenario.sha256".to_string(), hash)];
    let mut entries = base_entries("cw-spectrum", scenario);
    entries.extend(tilt_entries(config.pump.phi, config.pump.alpha));
    if let Some(w) = curve_fwhm(&om, &numeric_norm) {
        entries.push(("fwhm.numeric".into(), format!("{w} rad/fs")));
    }
    match analytic {
        Ok(curve) => {
            write_curve(
                &out.join("cw_spectrum.dat"),
                &header,
                &[
                    ("omega_s_rad_fs", &om),
                    ("numeric", &numeric_norm),
                    ("analytic", &curve),
                ],
            )?;
            if let Some(w) = curve_fwhm(&om, &curve) {
                entries.push(("fwhm.analytic".into(), format!("{w} rad/fs")));
            }
        }
        Err(Error::UnsupportedAnalyticBranch { phi_rad }) => {
            info!("no analytic branch at phi = {phi_rad} rad; writing numeric column only");
            write_curve(
                &out.join("cw_spectrum.dat"),
                &header,
                &[("omega_s_rad_fs", &om), ("numeric", &numeric_norm)],
            )?;
            entries.push(("analytic_branch".into(), "unavailable".into()));
        }
        Err(e) => return Err(e),
    }
    write_manifest(&out.join("manifest.txt"), &entries, &scenario.source_text)?;
    println!("cw-spectrum: written to {}", out.join("cw_spectrum.dat").display());
    Ok(())
}

/// Polarization-correlation curves for a list of analyzer angles theta_a,
/// with the mixing weight taken from the scenario's joint spectrum.
pub fn cmd_polarization(
    scenario: &Scenario,
    out: &Path,
    theta_a_deg: &[f64],
    delta_rad: f64,
) -> Result<()> {
    ensure_out(out)?;
    let config = scenario.to_config()?;
    let js = build_jsa(&config)?;
    let eps = epsilon_from_jsa(&js)?;
    let model = PolarizationMixModel::new(eps, delta_rad);
    let p = purity(&model);
    let hash = scenario_hash(&scenario.source_text);

    let mut entries = base_entries("polarization", scenario);
    entries.extend(tilt_entries(config.pump.phi, config.pump.alpha));
    entries.push(("epsilon".into(), format!("{eps}")));
    entries.push(("delta".into(), format!("{delta_rad} rad")));
    entries.push(("purity".into(), format!("{p}")));

    let mut paths = Vec::new();
    for &ta_deg in theta_a_deg {
        let ta = ta_deg.to_radians();
        let theta_b: Vec<f64> = (0..=1440).map(|i| i as f64 * 0.25).collect();
        let rate: Vec<f64> = theta_b
            .iter()
            .map(|tb| coincidence_vs_angles(&model, ta, tb.to_radians()))
            .collect();
        let v = curve_visibility(&model, ta);
        let fname = format!("polarization_theta_a_{ta_deg:+.1}.dat");
        write_curve(
            &out.join(&fname),
            &[
                ("scenario.sha256".to_string(), hash.clone()),
                ("epsilon".to_string(), format!("{eps}")),
                ("delta".to_string(), format!("{delta_rad} rad")),
                ("theta_a".to_string(), format!("{ta_deg} deg")),
                ("visibility".to_string(), format!("{v}")),
            ],
            &[("theta_b_deg", &theta_b), ("rate", &rate)],
        )?;
        entries.push((format!("visibility.theta_a_{ta_deg:+.1}"), format!("{v}")));
        paths.push(fname);
    }
    write_manifest(&out.join("manifest.txt"), &entries, &scenario.source_text)?;
    println!("polarization: epsilon = {eps:.4}, purity = {p:.4}");
    Ok(())
}

/// Apply CLI-level overrides to a loaded scenario.
pub fn apply_overrides(scenario: &mut Scenario, grid_points: Option<usize>) -> Result<()> {
    if let Some(n) = grid_points {
        if n < 64 {
            return Err(Error::Scenario("grid points override must be at least 64".into()));
        }
        scenario.grid_points = n;
    }
    Ok(())
}

/// Convenience for tests and examples: out-dir path building.
pub fn default_out_dir(base: &Path, command: &str) -> PathBuf {
    base.join(command)
}

#[cfg(test)]
mod tests {
    use super::*;

    const ANTI: &str = "\
crystal = BBO
length = 2 mm
pump.wavelength = 405 nm
pump.fwhm = 3.6 nm
tilt.directive = anticorrelation
filter.signal.fwhm = 10 nm
filter.idler.fwhm = 10 nm
grid.points = 128
grid.span = 0.12 rad/fs
";

    fn scenario(text: &str) -> Scenario {
        Scenario::parse(text).unwrap()
    }

    #[test]
    fn tilt_solve_writes_report_and_manifest() {
        let dir = tempfile::tempdir().unwrap();
        cmd_tilt_solve(&scenario(ANTI), dir.path()).unwrap();
        let report = fs::read_to_string(dir.path().join("tilt_solve.txt")).unwrap();
        assert!(report.contains("phi = "));
        assert!(report.contains("residual.anticorrelation"));
        let manifest = fs::read_to_string(dir.path().join("manifest.txt")).unwrap();
        assert!(manifest.contains("tilt.phi"));
        assert!(manifest.contains(" deg"));
        assert!(manifest.contains(" um"));
    }

    #[test]
    fn jsi_writes_grid_curves_and_scalars() {
        let dir = tempfile::tempdir().unwrap();
        cmd_jsi(&scenario(ANTI), dir.path(), OutputFormat::Text).unwrap();
        for f in ["jsi.dat", "s_plus.dat", "s_minus.dat", "manifest.txt"] {
            assert!(dir.path().join(f).exists(), "{f} missing");
        }
        let manifest = fs::read_to_string(dir.path().join("manifest.txt")).unwrap();
        let r_line = manifest.lines().find(|l| l.starts_with("pearson_r")).unwrap();
        let r: f64 = r_line.split('=').nth(1).unwrap().trim().parse().unwrap();
        assert!(r < -0.8, "anticorrelation manifest r = {r}");
    }

    #[test]
    fn hom_manifest_carries_visibility_and_center() {
        let dir = tempfile::tempdir().unwrap();
        cmd_hom(&scenario(ANTI), dir.path()).unwrap();
        let manifest = fs::read_to_string(dir.path().join("manifest.txt")).unwrap();
        assert!(manifest.contains("visibility = "));
        assert!(manifest.contains("dip_center = "));
    }

    #[test]
    fn cw_spectrum_requires_cw_flag() {
        let dir = tempfile::tempdir().unwrap();
        let err = cmd_cw_spectrum(&scenario(ANTI), dir.path()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn polarization_curves_per_angle() {
        let dir = tempfile::tempdir().unwrap();
        cmd_polarization(&scenario(ANTI), dir.path(), &[-45.0, -30.0], 0.0).unwrap();
        assert!(dir.path().join("polarization_theta_a_-45.0.dat").exists());
        assert!(dir.path().join("polarization_theta_a_-30.0.dat").exists());
        let manifest = fs::read_to_string(dir.path().join("manifest.txt")).unwrap();
        assert!(manifest.contains("purity = "));
    }

    #[test]
    fn manifest_round_trip_reproduces_outputs() {
        let dir = tempfile::tempdir().unwrap();
        let run1 = dir.path().join("run1");
        cmd_jsi(&scenario(ANTI), &run1, OutputFormat::Text).unwrap();
        let manifest = fs::read_to_string(run1.join("manifest.txt")).unwrap();
        let recovered = crate::output::scenario_from_manifest(&manifest).unwrap();
        let run2 = dir.path().join("run2");
        cmd_jsi(&scenario(&recovered), &run2, OutputFormat::Text).unwrap();
        assert_eq!(
            fs::read(run1.join("s_minus.dat")).unwrap(),
            fs::read(run2.join("s_minus.dat")).unwrap()
        );
    }
}
