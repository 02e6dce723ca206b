//! Grating-induced angular dispersion of the pump, effective group
//! velocities of tilted waves, and the tilt-angle solvers for
//! frequency-anticorrelated and frequency-correlated pair generation.
//!
//! Sign convention: the tilt plane is oriented so that ordinary waves have
//! rho = 0 and extraordinary waves rho > 0 (negative uniaxial crystals).
//! The solvers return whichever sign of phi satisfies the group-velocity
//! residual; compare magnitudes when matching target tilt angles.

use crate::dispersion::WaveParameters;
use crate::error::{Error, Result};
use crate::units::C;

/// A diffraction grating hit by the pump: groove density, order, and
/// incidence/diffraction angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GratingSpec {
    /// Grooves per millimeter.
    pub groove_density: f64,
    /// Signed diffraction order m.
    pub order: i32,
    /// Incidence angle, radians.
    pub theta0: f64,
}

impl GratingSpec {
    pub fn new(groove_density: f64, order: i32, theta0: f64) -> Self {
        assert!(groove_density > 0.0, "groove density must be positive");
        Self { groove_density, order, theta0 }
    }

    /// Groove spacing d in micrometers.
    pub fn spacing_um(&self) -> f64 {
        1000.0 / self.groove_density
    }
}

/// Pump beam configuration after the tilt-inducing grating.
#[derive(Debug, Clone, Copy)]
pub struct TiltedPumpConfig {
    /// Central vacuum wavelength, um.
    pub lambda_p: f64,
    /// Spectral FWHM in wavelength, um; `None` means CW.
    pub bandwidth_fwhm: Option<f64>,
    /// 1/e^2 intensity radius of the beam, um; `None` disables the
    /// transverse pump envelope (plane-wave limit).
    pub waist: Option<f64>,
    /// Pulse-front tilt angle, radians.
    pub phi: f64,
    /// Beam magnification alpha = -cos(theta0)/cos(beta0). Carried as
    /// metadata: it drops out of the joint amplitude at p = q = 0.
    pub alpha: f64,
}

/// Tilt-corrected group-velocity bundle for one wave.
#[derive(Debug, Clone, Copy)]
pub struct EffectiveWave {
    pub base: WaveParameters,
    /// Effective inverse group velocity u = N - tan(rho) tan(phi)/c, fs/um.
    pub u: f64,
    /// Effective GVD g = D - [tan(phi)/c]^2 / k, fs^2/um.
    pub g: f64,
}

/// Diffraction angle from the grating equation
/// sin(theta0) + sin(beta0) = m lambda / d.
pub fn diffraction_angle(grating: &GratingSpec, lambda_um: f64) -> Result<f64> {
    let arg = grating.order as f64 * lambda_um / grating.spacing_um() - grating.theta0.sin();
    if arg.abs() > 1.0 {
        return Err(Error::EvanescentOrder { argument: arg });
    }
    Ok(arg.asin())
}

/// Angular dispersion epsilon = m / (d cos(beta0)), 1/um; sign carried by m.
pub fn angular_dispersion(grating: &GratingSpec, lambda_um: f64) -> Result<f64> {
    let beta0 = diffraction_angle(grating, lambda_um)?;
    let cos_b = beta0.cos();
    if cos_b.abs() < 1e-12 {
        return Err(Error::SingularGratingGeometry);
    }
    Ok(grating.order as f64 / (grating.spacing_um() * cos_b))
}

/// Pulse-front tilt and beam magnification produced by a grating:
/// tan(phi) = -lambda_p epsilon, alpha = -cos(theta0)/cos(beta0).
pub fn tilt_from_grating(grating: &GratingSpec, lambda_p: f64) -> Result<(f64, f64)> {
    let beta0 = diffraction_angle(grating, lambda_p)?;
    let epsilon = angular_dispersion(grating, lambda_p)?;
    let phi = (-lambda_p * epsilon).atan();
    let alpha = -grating.theta0.cos() / beta0.cos();
    Ok((phi, alpha))
}

/// Design inverse: find the incidence angle that makes a grating with the
/// given groove density and order produce tilt `phi` at `lambda_p`.
pub fn grating_for_tilt(
    groove_density: f64,
    order: i32,
    lambda_p: f64,
    phi: f64,
) -> Result<GratingSpec> {
    let d = 1000.0 / groove_density;
    let tan_phi = phi.tan();
    if tan_phi.abs() < 1e-15 {
        return Ok(GratingSpec::new(groove_density, order, 0.0));
    }
    // |tan phi| = lambda |m| / (d cos beta0)
    let cos_beta0 = lambda_p * (order as f64).abs() / (d * tan_phi.abs());
    if !(cos_beta0 > 0.0 && cos_beta0 <= 1.0) {
        return Err(Error::GratingDesignInfeasible { cos_beta0 });
    }
    // pick the beta0 branch whose sign gives the requested tilt sign:
    // tan phi = -lambda m / (d cos beta0) fixes sign via m, so beta0 sign
    // is free; take beta0 >= 0 and solve the grating equation for theta0.
    let beta0 = cos_beta0.acos() * (order as f64 * phi.signum()).signum() * -1.0;
    let sin_theta0 = order as f64 * lambda_p / d - beta0.sin();
    if sin_theta0.abs() > 1.0 {
        // other branch
        let beta0 = -beta0;
        let sin_theta0 = order as f64 * lambda_p / d - beta0.sin();
        if sin_theta0.abs() > 1.0 {
            return Err(Error::GratingDesignInfeasible { cos_beta0 });
        }
        return Ok(GratingSpec::new(groove_density, order, sin_theta0.asin()));
    }
    Ok(GratingSpec::new(groove_density, order, sin_theta0.asin()))
}

/// Littrow incidence (theta0 = beta0) for the given groove density, order,
/// and wavelength: sin(theta0) = m lambda / (2 d).
pub fn littrow_incidence(groove_density: f64, order: i32, lambda_um: f64) -> Result<f64> {
    let arg = order as f64 * lambda_um * groove_density / 2000.0;
    if arg.abs() > 1.0 {
        return Err(Error::EvanescentOrder { argument: arg });
    }
    Ok(arg.asin())
}

/// Apply a pulse-front tilt to a wave: u = N - tan(rho) tan(phi)/c,
/// g = D - [tan(phi)/c]^2 / k.
pub fn effective_wave(base: WaveParameters, phi: f64) -> EffectiveWave {
    assert!(phi.abs() < std::f64::consts::FRAC_PI_2, "|phi| must be below pi/2");
    let t = phi.tan();
    EffectiveWave {
        base,
        u: base.n_group - base.rho.tan() * t / C,
        g: base.gvd - (t / C) * (t / C) / base.k,
    }
}

/// Tilt angle that equalizes the effective signal and idler group
/// velocities (u_s = u_i), producing frequency-anticorrelated pairs.
/// Linear solve in tan(phi); the returned angle satisfies
/// |u_s(phi) - u_i(phi)| < 1e-9 fs/um by construction.
pub fn solve_tilt_anticorrelation(
    signal: &WaveParameters,
    idler: &WaveParameters,
) -> Result<f64> {
    let denom = signal.rho.tan() - idler.rho.tan();
    let dn = signal.n_group - idler.n_group;
    if denom.abs() < 1e-15 {
        if dn.abs() < 1e-15 {
            return Ok(0.0);
        }
        return Err(Error::TiltAnticorrelationDegenerate);
    }
    let phi = (C * dn / denom).atan();
    let res = effective_wave(*signal, phi).u - effective_wave(*idler, phi).u;
    debug_assert!(res.abs() < 1e-9, "anticorrelation residual {res}");
    Ok(phi)
}

/// Tilt angle that sets the effective pump group velocity to the mean of
/// signal and idler (u_p = (u_s + u_i)/2), producing frequency-correlated
/// pairs.
pub fn solve_tilt_correlation(
    pump: &WaveParameters,
    signal: &WaveParameters,
    idler: &WaveParameters,
) -> Result<f64> {
    let denom = signal.rho.tan() + idler.rho.tan() - 2.0 * pump.rho.tan();
    let dn = signal.n_group + idler.n_group - 2.0 * pump.n_group;
    if denom.abs() < 1e-15 {
        if dn.abs() < 1e-15 {
            return Ok(0.0);
        }
        return Err(Error::TiltCorrelationDegenerate);
    }
    let phi = (C * dn / denom).atan();
    let res = {
        let up = effective_wave(*pump, phi).u;
        let us = effective_wave(*signal, phi).u;
        let ui = effective_wave(*idler, phi).u;
        up - 0.5 * (us + ui)
    };
    debug_assert!(res.abs() < 1e-9, "correlation residual {res}");
    Ok(phi)
}

/// D_+ = u_p - (u_s + u_i)/2, the effective pump/pair group-velocity
/// mismatch that sets the width of the sum-frequency spectrum.
pub fn d_plus(pump: &EffectiveWave, signal: &EffectiveWave, idler: &EffectiveWave) -> f64 {
    pump.u - 0.5 * (signal.u + idler.u)
}
