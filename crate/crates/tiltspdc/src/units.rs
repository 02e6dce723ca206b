//! Internal unit system: lengths in micrometers, time in femtoseconds,
//! angular frequency in rad/fs. All magnitudes stay near unity for the
//! 0.4-0.9 um regime this tool targets.

/// Speed of light in um/fs.
pub const C: f64 = 0.299792458;

/// Vacuum wavelength (um) to angular frequency (rad/fs).
pub fn wavelength_to_omega(lambda_um: f64) -> f64 {
    2.0 * std::f64::consts::PI * C / lambda_um
}

/// Angular frequency (rad/fs) to vacuum wavelength (um).
pub fn omega_to_wavelength(omega: f64) -> f64 {
    2.0 * std::f64::consts::PI * C / omega
}

/// Convert a spectral FWHM given in wavelength (um, centered at `lambda_um`)
/// to the corresponding FWHM in angular frequency (rad/fs).
pub fn wavelength_fwhm_to_omega_fwhm(fwhm_lambda_um: f64, lambda_um: f64) -> f64 {
    2.0 * std::f64::consts::PI * C * fwhm_lambda_um / (lambda_um * lambda_um)
}

/// sin(x)/x with the removable singularity at zero filled in.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}
