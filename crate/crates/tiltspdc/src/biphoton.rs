//! Joint spectral amplitude of collinear degenerate type-II downconversion
//! with a pulse-front-tilted pump, sampled on a square frequency grid at
//! the p = q = 0 transverse projection, plus the spectral diagnostics
//! derived from it (marginals, diagonal spectra, Pearson correlation,
//! Schmidt number, analytic CW branches).
//!
//! Longitudinal wavenumber model:
//!   k_z(Omega, kappa) = k(omega0 + Omega) - tan(rho) kappa - kappa^2/(2 k0)
//! with kappa = Omega tan(phi)/c per wave. The linear and quadratic terms
//! reproduce the effective u_j and g_j exactly while k(omega0 + Omega)
//! keeps full Sellmeier dispersion beyond second order.

use ndarray::Array2;
use num_complex::Complex64;

use crate::crystal::CrystalModel;
use crate::dispersion::{
    phase_matching_angle, wave_parameters, wavenumber, PropagationGeometry, WaveParameters,
};
use crate::error::{Error, Result};
use crate::tilt::TiltedPumpConfig;
use crate::units::{sinc, wavelength_fwhm_to_omega_fwhm, wavelength_to_omega, C};

/// Minimum number of grid samples across the narrowest spectral feature
/// (pump envelope or sinc main lobe) before build_jsa refuses to run.
pub const MIN_SAMPLES_PER_FEATURE: f64 = 8.0;

/// A CW pump is represented by a Gaussian proxy of this many grid steps
/// FWHM: narrow enough to pin Omega_s + Omega_i = 0 at any span, wide
/// enough that the proxy itself stays resolved.
pub const CW_PROXY_STEPS: f64 = 8.0;

const LN2: f64 = std::f64::consts::LN_2;

/// Square sampling grid in detuning space, symmetric about zero on both
/// axes: Omega[i] = -span + i * 2 span/(n-1).
#[derive(Debug, Clone, Copy)]
pub struct FrequencyGrid {
    /// Samples per axis.
    pub n_points: usize,
    /// Half-width of the detuning window, rad/fs.
    pub span: f64,
    /// Central angular frequencies (omega_s0, omega_i0), rad/fs.
    pub centers: (f64, f64),
}

impl FrequencyGrid {
    pub fn new(n_points: usize, span: f64, centers: (f64, f64)) -> Self {
        assert!(n_points >= 64, "grid needs at least 64 points per axis");
        assert!(span > 0.0, "grid span must be positive");
        Self { n_points, span, centers }
    }

    /// Grid step, rad/fs.
    pub fn step(&self) -> f64 {
        2.0 * self.span / (self.n_points - 1) as f64
    }

    /// Detuning axis (shared by both axes).
    pub fn detunings(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.n_points).map(|i| -self.span + i as f64 * h).collect()
    }

    /// Exchange of the signal and idler axes is only meaningful when both
    /// axes share the same central frequency.
    pub fn check_exchange_symmetric(&self) -> Result<()> {
        if (self.centers.0 - self.centers.1).abs() > 1e-9 {
            return Err(Error::AsymmetricGrid);
        }
        Ok(())
    }
}

/// Spectral filter in one detector arm. The FWHM is the *intensity*
/// transmission width; amplitudes are filtered by its square root, so the
/// amplitude FWHM is sqrt(2) times wider for the Gaussian shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FilterShape {
    Gaussian,
    Rectangular,
    None,
}

#[derive(Debug, Clone, Copy)]
pub struct FilterSpec {
    pub shape: FilterShape,
    /// Intensity FWHM in wavelength, um.
    pub fwhm: f64,
    /// Center wavelength, um.
    pub center: f64,
}

impl FilterSpec {
    pub fn gaussian(fwhm_um: f64, center_um: f64) -> Self {
        assert!(fwhm_um > 0.0);
        Self { shape: FilterShape::Gaussian, fwhm: fwhm_um, center: center_um }
    }

    pub fn rectangular(fwhm_um: f64, center_um: f64) -> Self {
        assert!(fwhm_um > 0.0);
        Self { shape: FilterShape::Rectangular, fwhm: fwhm_um, center: center_um }
    }

    pub fn none() -> Self {
        Self { shape: FilterShape::None, fwhm: 1.0, center: 1.0 }
    }

    /// Intensity FWHM converted to rad/fs at the filter center.
    pub fn omega_fwhm(&self) -> f64 {
        wavelength_fwhm_to_omega_fwhm(self.fwhm, self.center)
    }

    /// Amplitude transmission at absolute angular frequency `omega`.
    pub fn amplitude(&self, omega: f64) -> f64 {
        match self.shape {
            FilterShape::None => 1.0,
            FilterShape::Gaussian => {
                let d = (omega - wavelength_to_omega(self.center)) / self.omega_fwhm();
                (-2.0 * LN2 * d * d).exp()
            }
            FilterShape::Rectangular => {
                let d = omega - wavelength_to_omega(self.center);
                if d.abs() <= 0.5 * self.omega_fwhm() {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

/// Dispersion bundles of the three interacting waves at the collinear
/// degenerate type-II phase-matching point: pump extraordinary at
/// lambda_p, signal ordinary and idler extraordinary at 2 lambda_p.
#[derive(Debug, Clone, Copy)]
pub struct ScenarioWaves {
    pub theta_pm: f64,
    pub pump: WaveParameters,
    pub signal: WaveParameters,
    pub idler: WaveParameters,
}

pub fn degenerate_type_ii_waves(crystal: &CrystalModel, lambda_p: f64) -> Result<ScenarioWaves> {
    let theta_pm = phase_matching_angle(crystal, lambda_p)?;
    let lambda_d = 2.0 * lambda_p;
    Ok(ScenarioWaves {
        theta_pm,
        pump: wave_parameters(crystal, PropagationGeometry::extraordinary(theta_pm), lambda_p)?,
        signal: wave_parameters(crystal, PropagationGeometry::ordinary(), lambda_d)?,
        idler: wave_parameters(crystal, PropagationGeometry::extraordinary(theta_pm), lambda_d)?,
    })
}

/// Everything build_jsa needs: crystal, length, tilted pump, per-arm
/// filters, and the sampling grid.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub crystal: CrystalModel,
    /// Crystal length, um.
    pub length: f64,
    pub pump: TiltedPumpConfig,
    pub filter_signal: FilterSpec,
    pub filter_idler: FilterSpec,
    pub grid: FrequencyGrid,
}

impl ScenarioConfig {
    /// Degenerate configuration: grid centers derived from the pump
    /// wavelength (both arms at 2 lambda_p).
    pub fn degenerate(
        crystal: CrystalModel,
        length: f64,
        pump: TiltedPumpConfig,
        filter_signal: FilterSpec,
        filter_idler: FilterSpec,
        n_points: usize,
        span: f64,
    ) -> Self {
        assert!(length > 0.0, "crystal length must be positive");
        let omega_d = wavelength_to_omega(2.0 * pump.lambda_p);
        Self {
            crystal,
            length,
            pump,
            filter_signal,
            filter_idler,
            grid: FrequencyGrid::new(n_points, span, (omega_d, omega_d)),
        }
    }
}

/// Complex joint spectral amplitude on a FrequencyGrid, indexed
/// [signal, idler] (Omega_s-major).
#[derive(Debug, Clone)]
pub struct JointSpectrum {
    pub grid: FrequencyGrid,
    pub amplitude: Array2<Complex64>,
    pub normalized: bool,
}

impl JointSpectrum {
    /// Wrap a raw amplitude array and L2-normalize it.
    pub fn from_amplitude(grid: FrequencyGrid, mut amplitude: Array2<Complex64>) -> Self {
        assert_eq!(amplitude.shape(), [grid.n_points, grid.n_points]);
        let h = grid.step();
        let norm = amplitude.iter().map(|z| z.norm_sqr()).sum::<f64>() * h * h;
        assert!(norm > 0.0 && norm.is_finite(), "amplitude must have finite nonzero norm");
        let scale = 1.0 / norm.sqrt();
        amplitude.mapv_inplace(|z| z * scale);
        Self { grid, amplitude, normalized: true }
    }

    /// Joint spectral intensity |Psi|^2.
    pub fn intensity(&self) -> Array2<f64> {
        self.amplitude.mapv(|z| z.norm_sqr())
    }
}

/// Sample Eq.-(1)-style joint amplitude at p = q = 0:
/// Psi = E_p(Omega_+) T(Omega_+) sinc(dk L/2) exp(i s_k L/2) F_s F_i,
/// then L2-normalize. T is the transverse pump envelope in
/// kappa_p = Omega_+ tan(phi)/c, disabled when no waist is set.
pub fn build_jsa(config: &ScenarioConfig) -> Result<JointSpectrum> {
    let crystal = &config.crystal;
    let grid = &config.grid;
    let n = grid.n_points;
    let h = grid.step();
    let (omega_s0, omega_i0) = grid.centers;
    let omega_p0 = omega_s0 + omega_i0;
    let waves = degenerate_type_ii_waves(crystal, config.pump.lambda_p)?;

    // validate the extreme wavelengths the grid will sample
    for omega in [omega_s0 - grid.span, omega_s0 + grid.span, omega_i0 - grid.span, omega_i0 + grid.span] {
        crystal.check_range(crate::units::omega_to_wavelength(omega))?;
    }
    for omega in [omega_p0 - 2.0 * grid.span, omega_p0 + 2.0 * grid.span] {
        crystal.check_range(crate::units::omega_to_wavelength(omega))?;
    }

    // resolution guard: the narrower of the pump envelope and the sinc
    // main lobes must carry at least MIN_SAMPLES_PER_FEATURE samples
    let phi = config.pump.phi;
    let tan_phi = phi.tan();
    let pump_fwhm = match config.pump.bandwidth_fwhm {
        Some(fwhm) => wavelength_fwhm_to_omega_fwhm(fwhm, config.pump.lambda_p),
        None => CW_PROXY_STEPS * h,
    };
    let eff = |w: WaveParameters| crate::tilt::effective_wave(w, phi);
    let (ep, es, ei) = (eff(waves.pump), eff(waves.signal), eff(waves.idler));
    let mut narrowest = pump_fwhm;
    for du in [ep.u - es.u, ep.u - ei.u] {
        if du.abs() > 1e-12 {
            narrowest = narrowest.min(4.0 * std::f64::consts::PI / (du.abs() * config.length));
        }
    }
    if narrowest / h + 1e-9 < MIN_SAMPLES_PER_FEATURE {
        return Err(Error::GridUnresolvable { step: h, narrowest });
    }

    let om = grid.detunings();
    let geom_s = PropagationGeometry::ordinary();
    let geom_e = PropagationGeometry::extraordinary(waves.theta_pm);

    // 1-D precomputation of the longitudinal wavenumbers
    let kz = |geom: PropagationGeometry, w: &WaveParameters, omega0: f64, omega_det: f64| {
        let kappa = omega_det * tan_phi / C;
        wavenumber(crystal, geom, omega0 + omega_det) - w.rho.tan() * kappa
            - kappa * kappa / (2.0 * w.k)
    };
    let ks: Vec<f64> = om.iter().map(|&o| kz(geom_s, &waves.signal, omega_s0, o)).collect();
    let ki: Vec<f64> = om.iter().map(|&o| kz(geom_e, &waves.idler, omega_i0, o)).collect();

    // pump quantities on the Omega_s + Omega_i sum lattice (2n - 1 values)
    let half_l = 0.5 * config.length;
    let mut kp = vec![0.0; 2 * n - 1];
    let mut pump_env = vec![0.0; 2 * n - 1];
    for (m, (kp_m, env_m)) in kp.iter_mut().zip(pump_env.iter_mut()).enumerate() {
        let op = -2.0 * grid.span + m as f64 * h;
        *kp_m = kz(geom_e, &waves.pump, omega_p0, op);
        let x = op / pump_fwhm;
        let mut env = (-2.0 * LN2 * x * x).exp();
        if let Some(waist) = config.pump.waist {
            let kappa_p = op * tan_phi / C;
            let t = kappa_p * waist / 2.0;
            env *= (-t * t).exp();
        }
        *env_m = env;
    }

    let fs: Vec<f64> = om.iter().map(|&o| config.filter_signal.amplitude(omega_s0 + o)).collect();
    let fi: Vec<f64> = om.iter().map(|&o| config.filter_idler.amplitude(omega_i0 + o)).collect();

    let amplitude = Array2::from_shape_fn((n, n), |(i, j)| {
        let m = i + j;
        let dk = kp[m] - ks[i] - ki[j];
        let sk = kp[m] + ks[i] + ki[j];
        let magnitude = pump_env[m] * sinc(dk * half_l) * fs[i] * fi[j];
        Complex64::from_polar(magnitude.abs(), sk * half_l + if magnitude < 0.0 { std::f64::consts::PI } else { 0.0 })
    });
    let js = JointSpectrum::from_amplitude(*grid, amplitude);
    debug_assert!(js.amplitude.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
    Ok(js)
}

/// Divide out the propagation phase exp(i s_k L/2), recomputed from the
/// same longitudinal-wavenumber model build_jsa used. The phase leaves
/// |Psi|^2 and everything derived from it untouched; it matters only to
/// the phase-sensitive exchange kernel S0.
pub fn strip_propagation_phase(
    js: &JointSpectrum,
    config: &ScenarioConfig,
) -> Result<JointSpectrum> {
    let grid = &js.grid;
    let n = grid.n_points;
    let h = grid.step();
    let (omega_s0, omega_i0) = grid.centers;
    let omega_p0 = omega_s0 + omega_i0;
    let waves = degenerate_type_ii_waves(&config.crystal, config.pump.lambda_p)?;
    let tan_phi = config.pump.phi.tan();
    let geom_s = PropagationGeometry::ordinary();
    let geom_e = PropagationGeometry::extraordinary(waves.theta_pm);
    let kz = |geom: PropagationGeometry, w: &WaveParameters, omega0: f64, omega_det: f64| {
        let kappa = omega_det * tan_phi / C;
        wavenumber(&config.crystal, geom, omega0 + omega_det) - w.rho.tan() * kappa
            - kappa * kappa / (2.0 * w.k)
    };
    let om = grid.detunings();
    let ks: Vec<f64> = om.iter().map(|&o| kz(geom_s, &waves.signal, omega_s0, o)).collect();
    let ki: Vec<f64> = om.iter().map(|&o| kz(geom_e, &waves.idler, omega_i0, o)).collect();
    let kp: Vec<f64> = (0..2 * n - 1)
        .map(|m| kz(geom_e, &waves.pump, omega_p0, -2.0 * grid.span + m as f64 * h))
        .collect();
    let half_l = 0.5 * config.length;
    let amplitude = Array2::from_shape_fn((n, n), |(i, j)| {
        let sk = kp[i + j] + ks[i] + ki[j];
        js.amplitude[[i, j]] * Complex64::from_polar(1.0, -sk * half_l)
    });
    Ok(JointSpectrum { grid: *grid, amplitude, normalized: js.normalized })
}

/// Marginal spectral intensity of the signal arm:
/// S(Omega_s) = sum_i |Psi|^2 h; nonnegative, unit integral.
pub fn marginal_signal(js: &JointSpectrum) -> Vec<f64> {
    let h = js.grid.step();
    js.amplitude
        .rows()
        .into_iter()
        .map(|row| row.iter().map(|z| z.norm_sqr()).sum::<f64>() * h)
        .collect()
}

/// Marginal spectral intensity of the idler arm.
pub fn marginal_idler(js: &JointSpectrum) -> Vec<f64> {
    let h = js.grid.step();
    js.amplitude
        .columns()
        .into_iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>() * h)
        .collect()
}

/// Spectral intensities along the rotated directions
/// Omega_+ = Omega_s + Omega_i and Omega_- = Omega_s - Omega_i,
/// each normalized to unit integral on its own axis.
#[derive(Debug, Clone)]
pub struct DiagonalSpectra {
    pub omega_plus: Vec<f64>,
    pub s_plus: Vec<f64>,
    pub omega_minus: Vec<f64>,
    pub s_minus: Vec<f64>,
}

pub fn diagonal_spectra(js: &JointSpectrum) -> DiagonalSpectra {
    let n = js.grid.n_points;
    let h = js.grid.step();
    // Omega_+ is constant on anti-diagonals i + j = m, Omega_- on
    // diagonals i - j = const; both lattices have spacing h.
    let mut s_plus = vec![0.0; 2 * n - 1];
    let mut s_minus = vec![0.0; 2 * n - 1];
    for ((i, j), z) in js.amplitude.indexed_iter() {
        let w = z.norm_sqr();
        s_plus[i + j] += w;
        s_minus[i + n - 1 - j] += w;
    }
    let normalize = |v: &mut Vec<f64>| {
        let total = v.iter().sum::<f64>() * h;
        if total > 0.0 {
            v.iter_mut().for_each(|x| *x /= total);
        }
    };
    normalize(&mut s_plus);
    normalize(&mut s_minus);
    let axis: Vec<f64> =
        (0..2 * n - 1).map(|m| -2.0 * js.grid.span + m as f64 * h).collect();
    DiagonalSpectra { omega_plus: axis.clone(), s_plus, omega_minus: axis, s_minus }
}

/// Pearson correlation coefficient of (Omega_s, Omega_i) under the joint
/// spectral intensity treated as a probability density.
pub fn pearson_correlation(js: &JointSpectrum) -> Result<f64> {
    let om = js.grid.detunings();
    let h = js.grid.step();
    let mut total = 0.0;
    let (mut ms, mut mi) = (0.0, 0.0);
    for ((i, j), z) in js.amplitude.indexed_iter() {
        let w = z.norm_sqr() * h * h;
        total += w;
        ms += w * om[i];
        mi += w * om[j];
    }
    ms /= total;
    mi /= total;
    let (mut vs, mut vi, mut cov) = (0.0, 0.0, 0.0);
    for ((i, j), z) in js.amplitude.indexed_iter() {
        let w = z.norm_sqr() * h * h / total;
        let (ds, di) = (om[i] - ms, om[j] - mi);
        vs += w * ds * ds;
        vi += w * di * di;
        cov += w * ds * di;
    }
    if vs <= 0.0 || vi <= 0.0 {
        return Err(Error::UndefinedCorrelation);
    }
    Ok(cov / (vs * vi).sqrt())
}

/// Closed-form CW signal spectrum, peak-normalized on the supplied axis.
///
/// Two analytic branches exist: phi = 0 gives
/// sinc^2[(N_s - N_i) Omega L/2]; at the anticorrelation tilt
/// (u_s = u_i) the linear term cancels and the quadratic one survives,
/// sinc^2[(g_s + g_i) Omega^2 L/4]. Any other tilt has no closed form and
/// must go through build_jsa.
pub fn cw_signal_spectrum_analytic(
    signal: &WaveParameters,
    idler: &WaveParameters,
    length: f64,
    phi: f64,
    omega: &[f64],
) -> Result<Vec<f64>> {
    if phi.abs() < 1e-12 {
        let a = (signal.n_group - idler.n_group) * length / 2.0;
        return Ok(omega.iter().map(|&o| sinc(a * o).powi(2)).collect());
    }
    let es = crate::tilt::effective_wave(*signal, phi);
    let ei = crate::tilt::effective_wave(*idler, phi);
    if (es.u - ei.u).abs() < 1e-9 {
        let a = (es.g + ei.g) * length / 4.0;
        return Ok(omega.iter().map(|&o| sinc(a * o * o).powi(2)).collect());
    }
    Err(Error::UnsupportedAnalyticBranch { phi_rad: phi })
}

/// Schmidt number K = 1/sum(lambda_j^2) of the normalized singular-value
/// spectrum, computed through the Gram matrix:
/// K = ||A||_F^4 / ||A^H A||_F^2, which needs no explicit SVD.
pub fn schmidt_number(js: &JointSpectrum) -> f64 {
    let a = &js.amplitude;
    let n = js.grid.n_points;
    let frob2: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    let mut gram2 = 0.0;
    for j in 0..n {
        let cj = a.column(j);
        for k in j..n {
            let g: Complex64 = cj.iter().zip(a.column(k).iter()).map(|(x, y)| x.conj() * y).sum();
            gram2 += if k == j { g.norm_sqr() } else { 2.0 * g.norm_sqr() };
        }
    }
    frob2 * frob2 / gram2
}

/// FWHM of a sampled curve by linear interpolation of the half-maximum
/// crossings nearest the peak. Returns None when the curve never falls
/// below half maximum on either side.
pub fn curve_fwhm(x: &[f64], y: &[f64]) -> Option<f64> {
    assert_eq!(x.len(), y.len());
    let (imax, &ymax) =
        y.iter().enumerate().max_by(|a, b| a.1.partial_cmp(b.1).unwrap())?;
    let half = ymax / 2.0;
    let mut left = None;
    for i in (1..=imax).rev() {
        if y[i - 1] <= half && y[i] > half {
            let t = (half - y[i - 1]) / (y[i] - y[i - 1]);
            left = Some(x[i - 1] + t * (x[i] - x[i - 1]));
            break;
        }
    }
    let mut right = None;
    for i in imax..x.len() - 1 {
        if y[i] > half && y[i + 1] <= half {
            let t = (y[i] - half) / (y[i] - y[i + 1]);
            right = Some(x[i] + t * (x[i + 1] - x[i]));
            break;
        }
    }
    Some(right? - left?)
}
