//! Hong-Ou-Mandel coincidence traces from a joint spectrum: the exchange
//! kernel S0, the delay-dependent rate R(tau), and dip diagnostics
//! (visibility, dip center, triangular-shape fit).
//!
//! Normalization: S0 is scaled so its integral over Omega_- equals the
//! exchange-overlap fraction in [0, 1] (1 for an exchange-symmetric
//! amplitude). The rate is then R(tau) = [1 - Re O(tau)]/2 with
//! O(tau) = integral of S0 exp(-i Omega_- tau), so perfect
//! indistinguishability gives R = 0 at the dip and R -> 1/2 far away.

use num_complex::Complex64;

use crate::biphoton::JointSpectrum;
use crate::error::{Error, Result};

/// Discrete second difference at the trace minimum above this fraction of
/// the dip depth flags a kink (triangular dip): smooth minima sampled at
/// the default density sit orders of magnitude below it.
pub const KINK_THRESHOLD: f64 = 1e-3;

/// Maximum deviation of the edge rates from 1/2 before the delay window
/// is declared too narrow.
pub const EDGE_TOLERANCE: f64 = 0.02;

/// The exchange kernel S0(Omega_-) on the diagonal lattice of the grid.
#[derive(Debug, Clone)]
pub struct ExchangeKernel {
    /// Omega_- samples, spacing equal to the grid step.
    pub omega_minus: Vec<f64>,
    pub values: Vec<Complex64>,
    /// Grid step, needed to weight the Fourier quadrature.
    pub step: f64,
}

impl ExchangeKernel {
    /// O(tau) = sum S0 exp(-i Omega_- tau) h — the exchange overlap at
    /// relative delay tau.
    pub fn overlap(&self, tau: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&o, &s) in self.omega_minus.iter().zip(self.values.iter()) {
            acc += s * Complex64::from_polar(1.0, -o * tau);
        }
        acc * self.step
    }
}

/// S0(Omega_-) = integral over Omega_+ of Psi(Omega_+, Omega_-)
/// Psi*(Omega_+, -Omega_-). The Omega_- sign flip exchanges the signal
/// and idler axes, so on the lattice this is a trace along each diagonal
/// against the transposed amplitude — exact on samples, no interpolation.
pub fn s_zero(js: &JointSpectrum) -> Result<ExchangeKernel> {
    js.grid.check_exchange_symmetric()?;
    let n = js.grid.n_points;
    let h = js.grid.step();
    let a = &js.amplitude;
    let mut omega_minus = Vec::with_capacity(2 * n - 1);
    let mut values = Vec::with_capacity(2 * n - 1);
    for offset in -(n as isize - 1)..=(n as isize - 1) {
        let mut acc = Complex64::new(0.0, 0.0);
        let lo = offset.max(0) as usize;
        let hi = (n as isize + offset.min(0)) as usize;
        for i in lo..hi {
            let j = (i as isize - offset) as usize;
            acc += a[[i, j]] * a[[j, i]].conj();
        }
        omega_minus.push(offset as f64 * h);
        values.push(acc * h);
    }
    Ok(ExchangeKernel { omega_minus, values, step: h })
}

/// Sampled coincidence trace with its extracted diagnostics.
#[derive(Debug, Clone)]
pub struct HomTrace {
    /// Relative delays, fs.
    pub delays: Vec<f64>,
    /// Normalized coincidence rate in [0, 1].
    pub rate: Vec<f64>,
    pub visibility: f64,
    /// Dip center tau0, fs.
    pub dip_center: f64,
}

/// Evaluate R(tau) over a delay window. `window = None` selects the
/// window automatically: a coarse scan over one Fourier period of the
/// lattice locates the overlap maximum tau0 and its half-width w, and the
/// trace spans tau0 +- 4w.
pub fn coincidence_trace(
    js: &JointSpectrum,
    window: Option<(f64, f64)>,
    n_tau: usize,
) -> Result<HomTrace> {
    assert!(n_tau >= 16, "trace needs at least 16 delay samples");
    let kernel = s_zero(js)?;
    let (lo, hi) = match window {
        Some(w) => w,
        None => auto_window(&kernel),
    };
    assert!(hi > lo, "empty delay window");

    let delays: Vec<f64> = (0..n_tau)
        .map(|i| lo + (hi - lo) * i as f64 / (n_tau - 1) as f64)
        .collect();
    let rate: Vec<f64> = delays
        .iter()
        .map(|&t| (0.5 * (1.0 - kernel.overlap(t).re)).clamp(0.0, 1.0))
        .collect();

    for &edge in [rate[0], rate[n_tau - 1]].iter() {
        if (edge - 0.5).abs() > EDGE_TOLERANCE {
            return Err(Error::DelayWindowTooNarrow { edge_rate: edge });
        }
    }

    let visibility = visibility_of(&rate);
    let dip_center = extract_dip_center(&delays, &rate);
    Ok(HomTrace { delays, rate, visibility, dip_center })
}

fn auto_window(kernel: &ExchangeKernel) -> (f64, f64) {
    // the overlap is periodic with period 2 pi / h on the sampled lattice;
    // scan one period at FFT-like resolution
    let h = kernel.step;
    let n_scan = 8 * kernel.omega_minus.len();
    let period = 2.0 * std::f64::consts::PI / h;
    let mut best = (f64::NEG_INFINITY, 0.0);
    let scan: Vec<(f64, f64)> = (0..n_scan)
        .map(|i| {
            let t = -0.5 * period + period * i as f64 / n_scan as f64;
            (t, kernel.overlap(t).re)
        })
        .collect();
    for &(t, v) in &scan {
        if v > best.0 {
            best = (v, t);
        }
    }
    let (peak, tau0) = best;
    // half-width of the overlap peak from the coarse scan
    let dt = period / n_scan as f64;
    let mut w = dt;
    for &(t, v) in &scan {
        if v >= peak / 2.0 {
            w = w.max((t - tau0).abs());
        }
    }
    (tau0 - 4.0 * w, tau0 + 4.0 * w)
}

/// V = (R_max - R_min)/(R_max + R_min) over the sampled rate.
pub fn visibility(trace: &HomTrace) -> f64 {
    visibility_of(&trace.rate)
}

fn visibility_of(rate: &[f64]) -> f64 {
    let max = rate.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = rate.iter().cloned().fold(f64::INFINITY, f64::min);
    (max - min) / (max + min)
}

/// Dip center: parabola through the five samples around the minimum, with
/// a kink-detection fallback — triangular dips have a discontinuous
/// derivative at the center, where a parabola fit is biased, so the
/// center is refined by intersecting line fits on either flank.
fn extract_dip_center(delays: &[f64], rate: &[f64]) -> f64 {
    let n = rate.len();
    let imin = rate
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap()
        .0;
    let edge = 0.5 * (rate[0] + rate[n - 1]);
    let depth = edge - rate[imin];
    if depth <= 0.0 || imin == 0 || imin == n - 1 {
        return delays[imin];
    }
    let second_diff = rate[imin - 1] - 2.0 * rate[imin] + rate[imin + 1];
    if second_diff > KINK_THRESHOLD * depth {
        if let Some(center) = kink_center(delays, rate, imin) {
            return center;
        }
        return delays[imin];
    }
    // parabola least squares through the 5 samples centered on the minimum
    let lo = imin.saturating_sub(2).min(n - 5);
    let pts: Vec<(f64, f64)> = (lo..lo + 5).map(|i| (delays[i], rate[i])).collect();
    parabola_vertex(&pts).unwrap_or(delays[imin])
}

/// Intersect line fits over the two flanks of the dip region (R < 0.45),
/// excluding the sample at the kink itself.
fn kink_center(delays: &[f64], rate: &[f64], imin: usize) -> Option<f64> {
    let region = dip_region(rate, imin);
    let left: Vec<(f64, f64)> =
        region.clone().filter(|&i| i < imin).map(|i| (delays[i], rate[i])).collect();
    let right: Vec<(f64, f64)> =
        region.filter(|&i| i > imin).map(|i| (delays[i], rate[i])).collect();
    let (al, bl) = line_fit(&left)?;
    let (ar, br) = line_fit(&right)?;
    if (bl - br).abs() < 1e-300 {
        return None;
    }
    Some((ar - al) / (bl - br))
}

/// Contiguous index range around the minimum where R < 0.45.
fn dip_region(rate: &[f64], imin: usize) -> std::ops::Range<usize> {
    let mut lo = imin;
    while lo > 0 && rate[lo - 1] < 0.45 {
        lo -= 1;
    }
    let mut hi = imin;
    while hi + 1 < rate.len() && rate[hi + 1] < 0.45 {
        hi += 1;
    }
    lo..hi + 1
}

fn line_fit(pts: &[(f64, f64)]) -> Option<(f64, f64)> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let b = sxy / sxx;
    Some((my - b * mx, b)) // (intercept, slope)
}

fn parabola_vertex(pts: &[(f64, f64)]) -> Option<f64> {
    // least squares y = c0 + c1 x + c2 x^2, centered for conditioning
    let x0 = pts[pts.len() / 2].0;
    let (mut s0, mut s1, mut s2, mut s3, mut s4) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let (mut t0, mut t1, mut t2) = (0.0, 0.0, 0.0);
    for &(x, y) in pts {
        let d = x - x0;
        let d2 = d * d;
        s0 += 1.0;
        s1 += d;
        s2 += d2;
        s3 += d2 * d;
        s4 += d2 * d2;
        t0 += y;
        t1 += y * d;
        t2 += y * d2;
    }
    // solve the 3x3 normal equations by Cramer's rule
    let det = s0 * (s2 * s4 - s3 * s3) - s1 * (s1 * s4 - s2 * s3) + s2 * (s1 * s3 - s2 * s2);
    if det.abs() < 1e-300 {
        return None;
    }
    let c1 = (s0 * (t1 * s4 - s3 * t2) - t0 * (s1 * s4 - s2 * s3) + s2 * (s1 * t2 - t1 * s2)) / det;
    let c2 = (s0 * (s2 * t2 - t1 * s3) - s1 * (s1 * t2 - t1 * s2) + t0 * (s1 * s3 - s2 * s2)) / det;
    if c2.abs() < 1e-300 {
        return None;
    }
    Some(x0 - c1 / (2.0 * c2))
}

/// Two-sided linear fit of the dip region (R < 0.45): residuals are
/// reported as fractions of the dip depth. A triangular dip fits with
/// small residuals; a Gaussian-like dip does not.
#[derive(Debug, Clone, Copy)]
pub struct TriangularFit {
    pub center: f64,
    pub rms_residual: f64,
    pub max_residual: f64,
    pub is_triangular: bool,
}

pub fn triangular_fit(trace: &HomTrace) -> Option<TriangularFit> {
    let rate = &trace.rate;
    let delays = &trace.delays;
    let imin = rate
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())?
        .0;
    let edge = 0.5 * (rate[0] + rate[rate.len() - 1]);
    let depth = edge - rate[imin];
    if depth <= 0.0 {
        return None;
    }
    let region = dip_region(rate, imin);
    let left: Vec<(f64, f64)> =
        region.clone().filter(|&i| i <= imin).map(|i| (delays[i], rate[i])).collect();
    let right: Vec<(f64, f64)> =
        region.clone().filter(|&i| i >= imin).map(|i| (delays[i], rate[i])).collect();
    let (al, bl) = line_fit(&left)?;
    let (ar, br) = line_fit(&right)?;
    let center = if (bl - br).abs() > 1e-300 { (ar - al) / (bl - br) } else { delays[imin] };

    let mut sum2 = 0.0;
    let mut max = 0.0f64;
    let mut count = 0usize;
    for i in region {
        let t = delays[i];
        let model = if t <= center { al + bl * t } else { ar + br * t };
        let r = (rate[i] - model).abs() / depth;
        sum2 += r * r;
        max = max.max(r);
        count += 1;
    }
    let rms = (sum2 / count as f64).sqrt();
    Some(TriangularFit { center, rms_residual: rms, max_residual: max, is_triangular: rms < 0.02 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biphoton::{
        build_jsa, degenerate_type_ii_waves, diagonal_spectra, FilterSpec, FrequencyGrid,
        JointSpectrum, ScenarioConfig,
    };
    use crate::crystal::CrystalModel;
    use crate::tilt::{effective_wave, solve_tilt_anticorrelation, solve_tilt_correlation, TiltedPumpConfig};
    use ndarray::Array2;
    use num_complex::Complex64;

    fn default_scenario(phi: f64) -> ScenarioConfig {
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

    fn tilts() -> (f64, f64) {
        let w = degenerate_type_ii_waves(&CrystalModel::bbo(), 0.405).unwrap();
        (
            solve_tilt_anticorrelation(&w.signal, &w.idler).unwrap(),
            solve_tilt_correlation(&w.pump, &w.signal, &w.idler).unwrap(),
        )
    }

    fn symmetric_gaussian_js() -> JointSpectrum {
        let grid = FrequencyGrid::new(128, 0.12, (2.0, 2.0));
        let om = grid.detunings();
        let amp = Array2::from_shape_fn((128, 128), |(i, j)| {
            let p = om[i] + om[j];
            let m = om[i] - om[j];
            Complex64::new((-p * p / 2e-4 - m * m / 8e-3).exp(), 0.0)
        });
        JointSpectrum::from_amplitude(grid, amp)
    }

    #[test]
    fn symmetric_real_amplitude_gives_unit_s0_integral() {
        let js = symmetric_gaussian_js();
        let k = s_zero(&js).unwrap();
        let total: Complex64 = k.values.iter().sum::<Complex64>() * k.step;
        assert!((total.re - 1.0).abs() < 1e-9 && total.im.abs() < 1e-12);
        for v in &k.values {
            assert!(v.im.abs() < 1e-12, "S0 must be real for a real even amplitude");
        }
    }

    #[test]
    fn exchange_symmetric_amplitude_dips_to_zero() {
        let js = symmetric_gaussian_js();
        let trace = coincidence_trace(&js, None, 801).unwrap();
        let min = trace.rate.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(min < 1e-6, "min R = {min}");
        assert!((trace.visibility - 1.0).abs() < 1e-5);
        assert!(trace.dip_center.abs() < 1e-6);
    }

    #[test]
    fn rates_stay_in_unit_interval_and_edges_near_half() {
        let (phi_anti, phi_corr) = tilts();
        for phi in [0.0, phi_anti, phi_corr] {
            let js = build_jsa(&default_scenario(phi)).unwrap();
            let trace = coincidence_trace(&js, None, 801).unwrap();
            assert!(trace.rate.iter().all(|&r| (0.0..=1.0).contains(&r)));
            assert!((trace.rate[0] - 0.5).abs() <= EDGE_TOLERANCE);
            assert!((trace.rate[800] - 0.5).abs() <= EDGE_TOLERANCE);
        }
    }

    #[test]
    fn no_tilt_dip_center_matches_group_delay() {
        let w = degenerate_type_ii_waves(&CrystalModel::bbo(), 0.405).unwrap();
        let tau0 = (w.signal.n_group - w.idler.n_group) * 2000.0 / 2.0;
        let js = build_jsa(&default_scenario(0.0)).unwrap();
        let trace = coincidence_trace(&js, None, 1601).unwrap();
        assert!(
            (trace.dip_center.abs() - tau0.abs()).abs() < 0.01 * tau0.abs(),
            "center {} vs tau0 {tau0}",
            trace.dip_center
        );
    }

    #[test]
    fn correlation_tilt_dip_center_and_s0_phase_slope() {
        let (_, phi_corr) = tilts();
        let w = degenerate_type_ii_waves(&CrystalModel::bbo(), 0.405).unwrap();
        let us = effective_wave(w.signal, phi_corr).u;
        let ui = effective_wave(w.idler, phi_corr).u;
        let tau0 = (us - ui) * 2000.0 / 2.0;

        let js = build_jsa(&default_scenario(phi_corr)).unwrap();
        let trace = coincidence_trace(&js, None, 1601).unwrap();
        assert!(
            (trace.dip_center.abs() - tau0.abs()).abs() < 5.0,
            "center {} vs tau0 {tau0}",
            trace.dip_center
        );

        // |S0| equals S- and its phase is linear with slope +-tau0
        let kernel = s_zero(&js).unwrap();
        let d = diagonal_spectra(&js);
        let norm_s0: f64 = kernel.values.iter().map(|v| v.norm()).sum::<f64>() * kernel.step;
        let peak = d.s_minus.iter().cloned().fold(0.0f64, f64::max);
        let mut pts = Vec::new();
        for (idx, v) in kernel.values.iter().enumerate() {
            let s0 = v.norm() / norm_s0;
            if s0 > 0.1 * peak || d.s_minus[idx] > 0.1 * peak {
                assert!(
                    (s0 - d.s_minus[idx]).abs() < 0.03 * peak,
                    "|S0| {s0} vs S- {} at index {idx}",
                    d.s_minus[idx]
                );
            }
            if s0 > 0.1 * peak {
                pts.push((kernel.omega_minus[idx], v.arg()));
            }
        }
        // unwrapped linear fit of the phase over the well-supported core
        let mut unwrapped = Vec::with_capacity(pts.len());
        let mut prev = pts[0].1;
        let mut offset = 0.0;
        for &(x, p) in &pts {
            let mut q = p + offset;
            while q - prev > std::f64::consts::PI {
                offset -= 2.0 * std::f64::consts::PI;
                q = p + offset;
            }
            while prev - q > std::f64::consts::PI {
                offset += 2.0 * std::f64::consts::PI;
                q = p + offset;
            }
            unwrapped.push((x, q));
            prev = q;
        }
        let (_, slope) = super::line_fit(&unwrapped).unwrap();
        assert!(
            (slope.abs() - tau0.abs()).abs() < 0.02 * tau0.abs(),
            "phase slope {slope} vs tau0 {tau0}"
        );
    }

    #[test]
    fn anticorrelation_s0_equals_s_minus() {
        let (phi_anti, _) = tilts();
        let js = build_jsa(&default_scenario(phi_anti)).unwrap();
        let kernel = s_zero(&js).unwrap();
        let d = diagonal_spectra(&js);
        let norm_s0: f64 = kernel.values.iter().map(|v| v.norm()).sum::<f64>() * kernel.step;
        let peak = d.s_minus.iter().cloned().fold(0.0f64, f64::max);
        for (idx, v) in kernel.values.iter().enumerate() {
            if d.s_minus[idx] > 0.05 * peak {
                assert!(
                    (v.norm() / norm_s0 - d.s_minus[idx]).abs() < 0.03 * peak,
                    "S0 and S- disagree at index {idx}"
                );
            }
        }
    }

    #[test]
    fn visibility_ordering_of_the_three_scenarios() {
        let (phi_anti, phi_corr) = tilts();
        let v: Vec<f64> = [0.0, phi_anti, phi_corr]
            .iter()
            .map(|&phi| {
                let js = build_jsa(&default_scenario(phi)).unwrap();
                coincidence_trace(&js, None, 801).unwrap().visibility
            })
            .collect();
        assert!(v[0] < 0.6, "no-tilt V = {}", v[0]);
        assert!(v[1] >= 0.83 && v[1] < 1.0, "anticorrelation V = {}", v[1]);
        assert!(v[2] >= 0.93 && v[2] <= 1.0, "correlation V = {}", v[2]);
        assert!(v[0] < v[1] && v[0] < v[2]);
        assert!(v[1] - v[0] >= 0.3, "tilt must recover at least 0.3 of visibility");
    }

    #[test]
    fn sinc_squared_kernel_gives_exact_triangle() {
        // S0 proportional to sinc^2(a Omega) transforms to an exact
        // triangle of half-width 2a; the 1/x^2 tails converge slowly, so
        // the quadrature window must be much wider than the main lobe
        let a = 250.0;
        let n = 64001;
        let span = 4.0;
        let h = 2.0 * span / (n - 1) as f64;
        let omega_minus: Vec<f64> = (0..n).map(|i| -span + i as f64 * h).collect();
        let raw: Vec<f64> = omega_minus.iter().map(|&o| crate::units::sinc(a * o).powi(2)).collect();
        let total: f64 = raw.iter().sum::<f64>() * h;
        let kernel = ExchangeKernel {
            omega_minus: omega_minus.clone(),
            values: raw.iter().map(|&v| Complex64::new(v / total, 0.0)).collect(),
            step: h,
        };
        for i in 0..=100 {
            let tau = -2.5 * a + 5.0 * a * i as f64 / 100.0;
            let r = 0.5 * (1.0 - kernel.overlap(tau).re);
            let triangle = (1.0 - tau.abs() / (2.0 * a)).max(0.0);
            let expected = 0.5 * (1.0 - triangle);
            assert!((r - expected).abs() < 1e-3, "tau {tau}: R {r} vs triangle {expected}");
        }
    }

    #[test]
    fn correlation_dip_is_triangular_but_no_tilt_is_not() {
        let (_, phi_corr) = tilts();
        let js = build_jsa(&default_scenario(phi_corr)).unwrap();
        let trace = coincidence_trace(&js, None, 1601).unwrap();
        let fit = triangular_fit(&trace).unwrap();
        assert!(fit.is_triangular, "rms residual = {}", fit.rms_residual);
        assert!(fit.rms_residual < 0.02);

        let js0 = build_jsa(&default_scenario(0.0)).unwrap();
        let trace0 = coincidence_trace(&js0, None, 1601).unwrap();
        let fit0 = triangular_fit(&trace0).unwrap();
        assert!(fit0.rms_residual > fit.rms_residual);
    }

    #[test]
    fn trace_symmetric_about_fitted_center() {
        let (_, phi_corr) = tilts();
        let js = build_jsa(&default_scenario(phi_corr)).unwrap();
        let trace = coincidence_trace(&js, None, 1601).unwrap();
        let c = trace.dip_center;
        // reflect the trace about the center; linear interpolation of the
        // mirrored sample
        let lo = trace.delays[0];
        let dt = trace.delays[1] - trace.delays[0];
        let mut max_dev = 0.0f64;
        for (i, &t) in trace.delays.iter().enumerate() {
            let tm = 2.0 * c - t;
            let x = (tm - lo) / dt;
            if x < 0.0 || x > (trace.delays.len() - 2) as f64 {
                continue;
            }
            let j = x.floor() as usize;
            let frac = x - j as f64;
            let mirrored = trace.rate[j] * (1.0 - frac) + trace.rate[j + 1] * frac;
            max_dev = max_dev.max((trace.rate[i] - mirrored).abs());
        }
        assert!(max_dev < 0.01, "asymmetry {max_dev}");
    }

    #[test]
    fn fourier_consistency_direct_vs_fft() {
        let (phi_anti, _) = tilts();
        let js = build_jsa(&default_scenario(phi_anti)).unwrap();
        let kernel = s_zero(&js).unwrap();
        let m = kernel.values.len();
        // FFT of the kernel gives the overlap on the natural delay grid
        // tau_k = 2 pi k / (m h)
        let mut buf: Vec<rustfft::num_complex::Complex<f64>> = kernel
            .values
            .iter()
            .map(|v| rustfft::num_complex::Complex::new(v.re, v.im))
            .collect();
        rustfft::FftPlanner::new().plan_fft_forward(m).process(&mut buf);
        let h = kernel.step;
        let mut rms = 0.0;
        for (k, b) in buf.iter().enumerate().take(64) {
            let tau = 2.0 * std::f64::consts::PI * k as f64 / (m as f64 * h);
            // the FFT sums exp(-2 pi i k idx / m) over idx; our kernel
            // index idx maps to Omega = (idx - (m-1)/2) h, so a linear
            // phase correction aligns the two conventions
            let phase = std::f64::consts::PI * (m - 1) as f64 * k as f64 / m as f64;
            let fft_val = Complex64::new(b.re, b.im) * Complex64::from_polar(h, phase);
            let direct = kernel.overlap(tau);
            rms += (fft_val - direct).norm_sqr();
        }
        rms = (rms / 64.0).sqrt();
        assert!(rms < 1e-8, "direct vs FFT rms = {rms}");
    }

    #[test]
    fn too_narrow_window_is_rejected() {
        let js = symmetric_gaussian_js();
        match coincidence_trace(&js, Some((-5.0, 5.0)), 101) {
            Err(Error::DelayWindowTooNarrow { edge_rate }) => {
                assert!((edge_rate - 0.5).abs() > EDGE_TOLERANCE);
            }
            other => panic!("expected window guard, got {other:?}"),
        }
    }

    #[test]
    fn visibility_recomputable_from_samples() {
        let trace = HomTrace {
            delays: vec![0.0, 1.0, 2.0],
            rate: vec![0.5, 0.0, 0.5],
            visibility: 1.0,
            dip_center: 1.0,
        };
        assert_eq!(visibility(&trace), 1.0);
        let flat = HomTrace {
            delays: vec![0.0, 1.0],
            rate: vec![0.5, 0.5],
            visibility: 0.0,
            dip_center: 0.0,
        };
        assert_eq!(visibility(&flat), 0.0);
    }
}
