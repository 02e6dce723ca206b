//! Refractive indices, wavenumbers, group velocities, group velocity
//! dispersion, Poynting walk-off, and phase-matching angles for uniaxial
//! birefringent crystals.
//!
//! Frequency derivatives are carried analytically through the Sellmeier
//! chain: with n(lambda) and its wavelength derivatives in hand,
//!   N = dk/domega = (n - lambda n') / c
//!   D = d2k/domega2 = lambda^3 n'' / (2 pi c^2)
//! which keeps the tilt-angle solvers accurate at the 1e-4 fs/um level.

use crate::crystal::CrystalModel;
use crate::error::{Error, Result};
use crate::units::{wavelength_to_omega, C};

/// Wave polarization in the crystal frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarization {
    Ordinary,
    Extraordinary,
}

/// Propagation direction relative to the optic axis.
#[derive(Debug, Clone, Copy)]
pub struct PropagationGeometry {
    /// Angle between the propagation direction and the optic axis, radians.
    pub theta_pm: f64,
    pub polarization: Polarization,
}

impl PropagationGeometry {
    pub fn new(theta_pm: f64, polarization: Polarization) -> Self {
        assert!(
            (0.0..=std::f64::consts::FRAC_PI_2).contains(&theta_pm),
            "theta_pm must lie in [0, pi/2]"
        );
        Self { theta_pm, polarization }
    }

    pub fn ordinary() -> Self {
        Self::new(0.0, Polarization::Ordinary)
    }

    pub fn extraordinary(theta_pm: f64) -> Self {
        Self::new(theta_pm, Polarization::Extraordinary)
    }
}

/// Per-wave derived dispersion bundle at a reference wavelength.
#[derive(Debug, Clone, Copy)]
pub struct WaveParameters {
    /// Central vacuum wavelength, um.
    pub lambda0: f64,
    /// Central angular frequency, rad/fs.
    pub omega0: f64,
    /// Refractive index at (lambda0, theta).
    pub n: f64,
    /// Wavenumber magnitude, rad/um.
    pub k: f64,
    /// Inverse group velocity dk/domega, fs/um.
    pub n_group: f64,
    /// Group velocity dispersion d2k/domega2, fs^2/um.
    pub gvd: f64,
    /// Poynting walk-off angle, radians (0 for ordinary waves).
    pub rho: f64,
}

/// Which principal axis a raw Sellmeier evaluation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Ordinary,
    ExtraordinaryPrincipal,
}

/// n(lambda) for one principal axis, straight from the Sellmeier fit.
pub fn refractive_index(crystal: &CrystalModel, axis: Axis, lambda_um: f64) -> Result<f64> {
    crystal.check_range(lambda_um)?;
    let set = match axis {
        Axis::Ordinary => &crystal.sellmeier_o,
        Axis::ExtraordinaryPrincipal => &crystal.sellmeier_e,
    };
    Ok(set.n_squared(lambda_um).sqrt())
}

/// Angle-dependent index. Ordinary polarization is theta-independent;
/// extraordinary follows the index ellipse
/// 1/n^2(theta) = cos^2(theta)/n_o^2 + sin^2(theta)/n_e^2.
pub fn index_at_angle(
    crystal: &CrystalModel,
    geom: PropagationGeometry,
    lambda_um: f64,
) -> Result<f64> {
    crystal.check_range(lambda_um)?;
    Ok(index_at_angle_unchecked(crystal, geom, lambda_um))
}

fn index_at_angle_unchecked(crystal: &CrystalModel, geom: PropagationGeometry, lambda_um: f64) -> f64 {
    match geom.polarization {
        Polarization::Ordinary => crystal.sellmeier_o.n_squared(lambda_um).sqrt(),
        Polarization::Extraordinary => {
            let no2 = crystal.sellmeier_o.n_squared(lambda_um);
            let ne2 = crystal.sellmeier_e.n_squared(lambda_um);
            let (s, c) = geom.theta_pm.sin_cos();
            1.0 / (c * c / no2 + s * s / ne2).sqrt()
        }
    }
}

/// Index at angle together with its first two wavelength derivatives,
/// propagated analytically through the ellipse relation.
fn index_at_angle_with_derivatives(
    crystal: &CrystalModel,
    geom: PropagationGeometry,
    lambda_um: f64,
) -> (f64, f64, f64) {
    match geom.polarization {
        Polarization::Ordinary => crystal.sellmeier_o.index_with_derivatives(lambda_um),
        Polarization::Extraordinary => {
            let (s, c) = geom.theta_pm.sin_cos();
            let (c2, s2) = (c * c, s * s);
            // g(lambda) = 1/n^2(theta) in terms of the principal n^2 values
            let fo = crystal.sellmeier_o.n_squared(lambda_um);
            let fe = crystal.sellmeier_e.n_squared(lambda_um);
            let fo1 = crystal.sellmeier_o.n_squared_d1(lambda_um);
            let fe1 = crystal.sellmeier_e.n_squared_d1(lambda_um);
            let fo2 = crystal.sellmeier_o.n_squared_d2(lambda_um);
            let fe2 = crystal.sellmeier_e.n_squared_d2(lambda_um);
            let g = c2 / fo + s2 / fe;
            let g1 = -c2 * fo1 / (fo * fo) - s2 * fe1 / (fe * fe);
            let g2 = c2 * (2.0 * fo1 * fo1 / (fo * fo * fo) - fo2 / (fo * fo))
                + s2 * (2.0 * fe1 * fe1 / (fe * fe * fe) - fe2 / (fe * fe));
            // m = g^(-1/2)
            let m = g.powf(-0.5);
            let m1 = -0.5 * g.powf(-1.5) * g1;
            let m2 = 0.75 * g.powf(-2.5) * g1 * g1 - 0.5 * g.powf(-1.5) * g2;
            (m, m1, m2)
        }
    }
}

/// Wavenumber k(omega) = omega * n(omega, theta) / c, rad/um.
/// No range check; used on dense grids after the endpoints are validated.
pub fn wavenumber(crystal: &CrystalModel, geom: PropagationGeometry, omega: f64) -> f64 {
    let lambda = 2.0 * std::f64::consts::PI * C / omega;
    omega * index_at_angle_unchecked(crystal, geom, lambda) / C
}

/// Full dispersion bundle {n, k, N, D, rho} at lambda0.
pub fn wave_parameters(
    crystal: &CrystalModel,
    geom: PropagationGeometry,
    lambda0: f64,
) -> Result<WaveParameters> {
    crystal.check_range(lambda0)?;
    let omega0 = wavelength_to_omega(lambda0);
    let (n, n1, n2) = index_at_angle_with_derivatives(crystal, geom, lambda0);
    let k = omega0 * n / C;
    // dk/domega and d2k/domega2 through lambda(omega) = 2 pi c / omega
    let n_group = (n - lambda0 * n1) / C;
    let gvd = lambda0.powi(3) * n2 / (2.0 * std::f64::consts::PI * C * C);
    let rho = match geom.polarization {
        Polarization::Ordinary => 0.0,
        Polarization::Extraordinary => {
            let no2 = crystal.sellmeier_o.n_squared(lambda0);
            let ne2 = crystal.sellmeier_e.n_squared(lambda0);
            // tan(rho) = (n^2(theta)/2) (1/n_e^2 - 1/n_o^2) sin(2 theta);
            // positive for negative uniaxial crystals on (0, pi/2).
            (n * n / 2.0 * (1.0 / ne2 - 1.0 / no2) * (2.0 * geom.theta_pm).sin()).atan()
        }
    };
    Ok(WaveParameters { lambda0, omega0, n, k, n_group, gvd, rho })
}

/// Collinear degenerate type-II (oee) phase-matching angle for a pump at
/// `lambda_p`: pump extraordinary, signal ordinary, idler extraordinary,
/// signal/idler at 2 lambda_p. Bracketing scan over (0, pi/2) followed by
/// bisection on delta-k(theta).
pub fn phase_matching_angle(crystal: &CrystalModel, lambda_p: f64) -> Result<f64> {
    crystal.check_range(lambda_p)?;
    let lambda_d = 2.0 * lambda_p;
    crystal.check_range(lambda_d)?;

    let omega_p = wavelength_to_omega(lambda_p);
    let omega_d = wavelength_to_omega(lambda_d);
    let k_s = wavenumber(crystal, PropagationGeometry::ordinary(), omega_d);
    let delta_k = |theta: f64| {
        wavenumber(crystal, PropagationGeometry::extraordinary(theta), omega_p)
            - k_s
            - wavenumber(crystal, PropagationGeometry::extraordinary(theta), omega_d)
    };

    // coarse sign-change scan
    const SCAN: usize = 720;
    let hi = std::f64::consts::FRAC_PI_2;
    let mut bracket = None;
    let mut prev = (1e-6, delta_k(1e-6));
    for i in 1..=SCAN {
        let theta = 1e-6 + (hi - 2e-6) * i as f64 / SCAN as f64;
        let f = delta_k(theta);
        if prev.1.signum() != f.signum() {
            bracket = Some((prev.0, theta));
            break;
        }
        prev = (theta, f);
    }
    let (mut lo, mut hi) =
        bracket.ok_or(Error::PhaseMatchingUnattainable { lambda_p_um: lambda_p })?;

    let mut flo = delta_k(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = delta_k(mid);
        if fm.abs() < 1e-12 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    let theta = 0.5 * (lo + hi);
    if delta_k(theta).abs() < 1e-9 {
        Ok(theta)
    } else {
        Err(Error::PhaseMatchingUnattainable { lambda_p_um: lambda_p })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crystal::{CrystalModel, SellmeierSet};
    use approx::assert_relative_eq;

    fn bbo() -> CrystalModel {
        CrystalModel::bbo()
    }

    // Independent hand evaluation of the Eimerl fit at 0.810 um:
    // n_o^2 = 2.7405 + 0.0184/(0.810^2 - 0.0179) - 0.0155*0.810^2 = 2.7591615
    // n_o = 1.6610724
    #[test]
    fn bbo_ordinary_index_at_810nm() {
        let n = refractive_index(&bbo(), Axis::Ordinary, 0.810).unwrap();
        assert_relative_eq!(n, 1.6610724, epsilon = 1e-6);
    }

    #[test]
    fn ordinary_equals_extraordinary_on_axis() {
        let c = bbo();
        for l in [0.4, 0.6, 0.81] {
            let no = refractive_index(&c, Axis::Ordinary, l).unwrap();
            let ne0 = index_at_angle(&c, PropagationGeometry::extraordinary(0.0), l).unwrap();
            assert_relative_eq!(no, ne0, epsilon = 1e-14);
        }
    }

    #[test]
    fn extraordinary_at_right_angle_is_principal() {
        let c = bbo();
        let l = 0.81;
        let ne = refractive_index(&c, Axis::ExtraordinaryPrincipal, l).unwrap();
        let n90 =
            index_at_angle(&c, PropagationGeometry::extraordinary(std::f64::consts::FRAC_PI_2), l)
                .unwrap();
        assert_relative_eq!(ne, n90, epsilon = 1e-14);
    }

    #[test]
    fn index_ellipse_closed_form_matches_numeric_root() {
        // at theta = pi/4 the closed form must satisfy the ellipse relation;
        // solve 1/n^2 = cos^2/n_o^2 + sin^2/n_e^2 for n by bisection as an
        // independent route.
        let c = bbo();
        let l = 0.81;
        let geom = PropagationGeometry::extraordinary(std::f64::consts::FRAC_PI_4);
        let n_closed = index_at_angle(&c, geom, l).unwrap();

        let no2 = c.sellmeier_o.n_squared(l);
        let ne2 = c.sellmeier_e.n_squared(l);
        let f = |n: f64| 1.0 / (n * n) - (0.5 / no2 + 0.5 / ne2);
        let (mut lo, mut hi) = (1.0, 3.0);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert_relative_eq!(n_closed, 0.5 * (lo + hi), epsilon = 1e-10);
    }

    #[test]
    fn out_of_range_wavelength_errors() {
        assert!(refractive_index(&bbo(), Axis::Ordinary, 12.0).is_err());
        assert!(wave_parameters(&bbo(), PropagationGeometry::ordinary(), 0.1).is_err());
    }

    #[test]
    fn ordinary_walk_off_is_zero() {
        let w = wave_parameters(&bbo(), PropagationGeometry::ordinary(), 0.81).unwrap();
        assert_eq!(w.rho, 0.0);
        let w0 = wave_parameters(&bbo(), PropagationGeometry::extraordinary(0.0), 0.81).unwrap();
        assert_relative_eq!(w0.rho, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn walk_off_vanishes_at_axes_and_is_positive_between() {
        let c = bbo();
        let w90 = wave_parameters(
            &c,
            PropagationGeometry::extraordinary(std::f64::consts::FRAC_PI_2),
            0.81,
        )
        .unwrap();
        assert_relative_eq!(w90.rho, 0.0, epsilon = 1e-15);
        let w45 = wave_parameters(
            &c,
            PropagationGeometry::extraordinary(std::f64::consts::FRAC_PI_4),
            0.81,
        )
        .unwrap();
        assert!(w45.rho > 0.0);
    }

    #[test]
    fn extraordinary_index_monotone_between_principal_values() {
        let c = bbo();
        let l = 0.81;
        let mut prev = index_at_angle(&c, PropagationGeometry::extraordinary(0.0), l).unwrap();
        for i in 1..=90 {
            let theta = std::f64::consts::FRAC_PI_2 * i as f64 / 90.0;
            let n = index_at_angle(&c, PropagationGeometry::extraordinary(theta), l).unwrap();
            assert!(n < prev, "n(theta) must decrease for a negative uniaxial crystal");
            prev = n;
        }
    }

    #[test]
    fn unit_consistency_omega_lambda() {
        let w = wave_parameters(&bbo(), PropagationGeometry::ordinary(), 0.81).unwrap();
        assert_relative_eq!(
            w.omega0 * w.lambda0,
            2.0 * std::f64::consts::PI * crate::units::C,
            epsilon = 1e-12
        );
        assert!(w.n > 1.0 && w.n_group > 0.0);
    }

    #[test]
    fn bbo_type_ii_phase_matching_angle() {
        // Independent oracle: coarse scan of delta-k over 0..90 deg followed
        // by bisection, run in the prototype for this coefficient set, pins
        // theta_pm = 41.4211 deg.
        let theta = phase_matching_angle(&bbo(), 0.405).unwrap();
        assert_relative_eq!(theta.to_degrees(), 41.4211, epsilon = 1e-3);

        // residual self-consistency
        let omega_p = wavelength_to_omega(0.405);
        let omega_d = wavelength_to_omega(0.810);
        let c = bbo();
        let dk = wavenumber(&c, PropagationGeometry::extraordinary(theta), omega_p)
            - wavenumber(&c, PropagationGeometry::ordinary(), omega_d)
            - wavenumber(&c, PropagationGeometry::extraordinary(theta), omega_d);
        assert!(dk.abs() < 1e-9, "|delta k| = {dk}");
    }

    #[test]
    fn positive_uniaxial_crystal_has_no_type_ii_root() {
        // synthetic crystal with n_e > n_o everywhere: the oee balance can
        // never close, the scan finds no sign change.
        let c = CrystalModel {
            name: "synthetic-positive".into(),
            sellmeier_o: SellmeierSet::quadratic(2.2, 0.01, 0.01, 0.01),
            sellmeier_e: SellmeierSet::quadratic(2.6, 0.01, 0.01, 0.01),
            valid_range: (0.2, 1.2),
            note: String::new(),
        };
        assert!(matches!(
            phase_matching_angle(&c, 0.405),
            Err(Error::PhaseMatchingUnattainable { .. })
        ));
    }
}
