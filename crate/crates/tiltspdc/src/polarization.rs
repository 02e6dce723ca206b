//! Polarization-entanglement quality of the pair state behind a
//! beamsplitter at the dip delay, modeled as the partially mixed state
//!   rho = eps |psi><psi| + (1 - eps)/2 (|HV><HV| + |VH><VH|),
//!   |psi> = (|HV> + exp(i Delta) |VH>)/sqrt(2),
//! where the mixing weight eps is the exchange overlap of the joint
//! spectral amplitude (residual spectral distinguishability).

use log::warn;

use crate::biphoton::JointSpectrum;
use crate::error::Result;
use crate::hom::s_zero;

/// Mixing weight and relative phase of the two-photon polarization state.
#[derive(Debug, Clone, Copy)]
pub struct PolarizationMixModel {
    /// Mixing weight in [0, 1]; 1 is the pure Bell-like state.
    pub epsilon: f64,
    /// Relative phase Delta, radians.
    pub delta: f64,
}

impl PolarizationMixModel {
    pub fn new(epsilon: f64, delta: f64) -> Self {
        assert!((0.0..=1.0).contains(&epsilon), "epsilon must lie in [0, 1]");
        Self { epsilon, delta }
    }
}

/// Exchange overlap of signal and idler spectral roles,
/// eps = |integral Psi(Omega_s, Omega_i) Psi*(Omega_i, Omega_s)|,
/// evaluated at the compensating delay: the overlap integral is computed
/// as a function of relative delay tau and its maximum magnitude is
/// taken, since the experiment sits at the dip center where the linear
/// spectral phase of a tilted amplitude is compensated.
pub fn epsilon_from_jsa(js: &JointSpectrum) -> Result<f64> {
    let kernel = s_zero(js)?;
    // coarse scan over one Fourier period of the lattice
    let h = kernel.step;
    let period = 2.0 * std::f64::consts::PI / h;
    let n_scan = 8 * kernel.omega_minus.len();
    let dt = period / n_scan as f64;
    let mut best = (f64::NEG_INFINITY, 0.0);
    for i in 0..n_scan {
        let t = -0.5 * period + i as f64 * dt;
        let v = kernel.overlap(t).norm();
        if v > best.0 {
            best = (v, t);
        }
    }
    // parabolic refinement of the peak
    let (t0, f) = (best.1, |t: f64| kernel.overlap(t).norm());
    let (ym, y0, yp) = (f(t0 - dt), best.0, f(t0 + dt));
    let denom = ym - 2.0 * y0 + yp;
    let eps = if denom.abs() > 1e-300 {
        f(t0 + 0.5 * dt * (ym - yp) / denom)
    } else {
        y0
    };
    if eps > 1.0 {
        warn!("exchange overlap {eps} exceeds 1 by quadrature error; clamping");
    }
    Ok(eps.clamp(0.0, 1.0))
}

/// Purity P = (1 + eps^2)/2 of the mixed polarization state.
pub fn purity(model: &PolarizationMixModel) -> f64 {
    (1.0 + model.epsilon * model.epsilon) / 2.0
}

/// Coincidence rate behind linear polarizers at angles theta_a and
/// theta_b: rate = Tr[rho (P(theta_a) x P(theta_b))], closed form
///   [1 - cos(2 theta_a) cos(2 theta_b)
///      + eps cos(Delta) sin(2 theta_a) sin(2 theta_b)] / 4.
pub fn coincidence_vs_angles(model: &PolarizationMixModel, theta_a: f64, theta_b: f64) -> f64 {
    0.25 * (1.0 - (2.0 * theta_a).cos() * (2.0 * theta_b).cos()
        + model.epsilon * model.delta.cos() * (2.0 * theta_a).sin() * (2.0 * theta_b).sin())
}

/// Visibility (max - min)/(max + min) of the coincidence rate over a full
/// theta_b sweep at fixed theta_a. The rate is sinusoidal in 2 theta_b
/// with amplitude sqrt(A^2 + B^2), so the sweep extrema are
/// (1 +- sqrt(A^2 + B^2))/4 exactly:
///   V = sqrt(cos^2(2 theta_a) + eps^2 cos^2(Delta) sin^2(2 theta_a)).
pub fn curve_visibility(model: &PolarizationMixModel, theta_a: f64) -> f64 {
    let a = (2.0 * theta_a).cos();
    let b = model.epsilon * model.delta.cos() * (2.0 * theta_a).sin();
    (a * a + b * b).sqrt()
}
