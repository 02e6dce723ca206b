//! Scenario files: flat, line-oriented `key = value` configuration with
//! explicit unit suffixes, chosen for diffability.
//!
//! ```text
//! # lines starting with '#' (or trailing '# ...') are comments
//! crystal = BBO
//! length = 2 mm
//! pump.wavelength = 405 nm
//! pump.fwhm = 3.6 nm            # or: pump.cw = true
//! pump.waist = off              # or a length, e.g. 1 mm
//! tilt.directive = anticorrelation   # anticorrelation | correlation | none
//! filter.signal.shape = gaussian     # gaussian | rectangular | none
//! filter.signal.fwhm = 10 nm
//! filter.signal.center = 810 nm
//! filter.idler.shape = gaussian
//! filter.idler.fwhm = 10 nm
//! filter.idler.center = 810 nm
//! grid.points = 512
//! grid.span = 0.12 rad/fs
//! ```
//!
//! Exactly one tilt source must be given: `tilt.directive` (which may be
//! `none` for an untilted pump), an explicit `tilt.angle`, or a grating
//! block `tilt.grating.lines_per_mm` / `tilt.grating.order` /
//! `tilt.grating.theta0` (a value in `deg`/`rad`, or `littrow`).
//!
//! Units: lengths accept `nm`, `um`, `mm`; angles `deg`, `rad`;
//! frequencies `rad/fs`. Counts and booleans are bare.

use std::collections::HashMap;

use crate::biphoton::{FilterShape, FilterSpec, ScenarioConfig, ScenarioWaves};
use crate::crystal::{self, CrystalModel};
use crate::error::{Error, Result};
use crate::tilt::{
    littrow_incidence, solve_tilt_anticorrelation, solve_tilt_correlation, tilt_from_grating,
    GratingSpec, TiltedPumpConfig,
};

/// How the scenario specifies the pulse-front tilt.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TiltSetting {
    /// Untilted pump (directive `none`).
    NoTilt,
    /// Explicit tilt angle, radians.
    Angle(f64),
    /// Tilt derived from a grating.
    Grating(GratingSpec),
    /// Solve the anticorrelation condition u_s = u_i.
    Anticorrelation,
    /// Solve the correlation condition u_p = (u_s + u_i)/2.
    Correlation,
}

/// Parsed, validated scenario. All quantities are in internal units
/// (um, fs, rad, rad/fs).
#[derive(Debug, Clone)]
pub struct Scenario {
    pub crystal: CrystalModel,
    /// Crystal length, um.
    pub length: f64,
    /// Pump central wavelength, um.
    pub lambda_p: f64,
    /// Pump spectral FWHM in wavelength, um; None = CW.
    pub bandwidth_fwhm: Option<f64>,
    /// Pump waist, um; None disables the transverse envelope.
    pub waist: Option<f64>,
    pub tilt: TiltSetting,
    pub filter_signal: FilterSpec,
    pub filter_idler: FilterSpec,
    pub grid_points: usize,
    /// Grid half-width, rad/fs.
    pub grid_span: f64,
    /// Verbatim file content, hashed into output headers.
    pub source_text: String,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self> {
        let mut map: HashMap<String, String> = HashMap::new();
        for (line_no, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::Scenario(format!("line {}: expected 'key = value'", line_no + 1))
            })?;
            let key = k.trim().to_string();
            if map.insert(key.clone(), v.trim().to_string()).is_some() {
                return Err(Error::Scenario(format!("duplicate key '{key}'")));
            }
        }
        Self::from_map(map, text.to_string())
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    fn from_map(mut map: HashMap<String, String>, source_text: String) -> Result<Self> {
        let mut take = |key: &str| map.remove(key);
        let crystal_name = take("crystal").unwrap_or_else(|| "BBO".to_string());
        let crystal = crystal::find(&crystal_name, None)?;

        let length = match take("length") {
            Some(v) => positive(length_um(&v)?, "length")?,
            None => 2000.0,
        };
        let lambda_p = match take("pump.wavelength") {
            Some(v) => positive(length_um(&v)?, "pump.wavelength")?,
            None => 0.405,
        };
        let cw = match take("pump.cw") {
            Some(v) => boolean(&v, "pump.cw")?,
            None => false,
        };
        let bandwidth_fwhm = match (cw, take("pump.fwhm")) {
            (true, Some(_)) => {
                return Err(Error::Scenario("pump.cw = true conflicts with pump.fwhm".into()));
            }
            (true, None) => None,
            (false, Some(v)) => Some(positive(length_um(&v)?, "pump.fwhm")?),
            (false, None) => Some(0.0036),
        };
        let waist = match take("pump.waist").as_deref() {
            None | Some("off") => None,
            Some(v) => Some(positive(length_um(v)?, "pump.waist")?),
        };

        let tilt = resolve_tilt_keys(&mut |k| take(k))?;

        let filter_signal = filter_from_keys(&mut |k| take(k), "filter.signal")?;
        let filter_idler = filter_from_keys(&mut |k| take(k), "filter.idler")?;

        let grid_points = match take("grid.points") {
            Some(v) => {
                let n: usize = v
                    .parse()
                    .map_err(|_| Error::Scenario(format!("grid.points: bad count '{v}'")))?;
                if n < 64 {
                    return Err(Error::Scenario("grid.points must be at least 64".into()));
                }
                n
            }
            None => 512,
        };
        let grid_span = match take("grid.span") {
            Some(v) => positive(omega_rad_fs(&v)?, "grid.span")?,
            None => 0.12,
        };

        if let Some(stray) = map.keys().next() {
            return Err(Error::Scenario(format!("unknown key '{stray}'")));
        }

        let mut scenario = Self {
            crystal,
            length,
            lambda_p,
            bandwidth_fwhm,
            waist,
            tilt,
            filter_signal,
            filter_idler,
            grid_points,
            grid_span,
            source_text,
        };
        resolve_littrow(&mut scenario)?;
        Ok(scenario)
    }

    /// Dispersion bundles at the scenario's phase-matching point.
    pub fn waves(&self) -> Result<ScenarioWaves> {
        crate::biphoton::degenerate_type_ii_waves(&self.crystal, self.lambda_p)
    }

    /// Resolve the tilt setting to a concrete (phi, alpha) pair.
    pub fn resolve_tilt(&self, waves: &ScenarioWaves) -> Result<(f64, f64)> {
        match self.tilt {
            TiltSetting::NoTilt => Ok((0.0, 1.0)),
            TiltSetting::Angle(phi) => Ok((phi, 1.0)),
            TiltSetting::Grating(g) => tilt_from_grating(&g, self.lambda_p),
            TiltSetting::Anticorrelation => {
                Ok((solve_tilt_anticorrelation(&waves.signal, &waves.idler)?, 1.0))
            }
            TiltSetting::Correlation => {
                Ok((solve_tilt_correlation(&waves.pump, &waves.signal, &waves.idler)?, 1.0))
            }
        }
    }

    /// Fully resolved configuration ready for build_jsa.
    pub fn to_config(&self) -> Result<ScenarioConfig> {
        let waves = self.waves()?;
        let (phi, alpha) = self.resolve_tilt(&waves)?;
        let pump = TiltedPumpConfig {
            lambda_p: self.lambda_p,
            bandwidth_fwhm: self.bandwidth_fwhm,
            waist: self.waist,
            phi,
            alpha,
        };
        Ok(ScenarioConfig::degenerate(
            self.crystal.clone(),
            self.length,
            pump,
            self.filter_signal,
            self.filter_idler,
            self.grid_points,
            self.grid_span,
        ))
    }
}

fn resolve_tilt_keys(take: &mut dyn FnMut(&str) -> Option<String>) -> Result<TiltSetting> {
    let directive = take("tilt.directive");
    let angle = take("tilt.angle");
    let lines = take("tilt.grating.lines_per_mm");
    let order = take("tilt.grating.order");
    let theta0 = take("tilt.grating.theta0");
    let has_grating = lines.is_some() || order.is_some() || theta0.is_some();
    let sources = directive.is_some() as u8 + angle.is_some() as u8 + has_grating as u8;
    if sources != 1 {
        return Err(Error::Scenario(
            "exactly one of tilt.directive, tilt.angle, or a tilt.grating block is required".into(),
        ));
    }
    if let Some(d) = directive {
        return match d.as_str() {
            "none" => Ok(TiltSetting::NoTilt),
            "anticorrelation" => Ok(TiltSetting::Anticorrelation),
            "correlation" => Ok(TiltSetting::Correlation),
            other => Err(Error::Scenario(format!("unknown tilt.directive '{other}'"))),
        };
    }
    if let Some(a) = angle {
        let phi = angle_rad(&a)?;
        if phi.abs() >= std::f64::consts::FRAC_PI_2 {
            return Err(Error::Scenario("tilt.angle must satisfy |phi| < 90 deg".into()));
        }
        return Ok(TiltSetting::Angle(phi));
    }
    let lines = lines
        .ok_or_else(|| Error::Scenario("grating block needs tilt.grating.lines_per_mm".into()))?;
    let density: f64 = lines
        .parse()
        .map_err(|_| Error::Scenario(format!("tilt.grating.lines_per_mm: bad number '{lines}'")))?;
    positive(density, "tilt.grating.lines_per_mm")?;
    let order = order.ok_or_else(|| Error::Scenario("grating block needs tilt.grating.order".into()))?;
    let m: i32 = order
        .parse()
        .map_err(|_| Error::Scenario(format!("tilt.grating.order: bad integer '{order}'")))?;
    // pump wavelength is not known yet; Littrow is resolved lazily by
    // storing a sentinel incidence that resolve_tilt replaces — instead,
    // keep it simple: Littrow needs the wavelength, so require it here.
    let theta0 =
        theta0.ok_or_else(|| Error::Scenario("grating block needs tilt.grating.theta0".into()))?;
    if theta0 == "littrow" {
        // Littrow incidence depends on the pump wavelength, which this
        // block does not see; leave a NaN sentinel for resolve_littrow,
        // which from_map runs before returning the scenario.
        return Ok(TiltSetting::Grating(GratingSpec::new(density, m, f64::NAN)));
    }
    Ok(TiltSetting::Grating(GratingSpec::new(density, m, angle_rad(&theta0)?)))
}

fn filter_from_keys(
    take: &mut dyn FnMut(&str) -> Option<String>,
    prefix: &str,
) -> Result<FilterSpec> {
    let shape = take(&format!("{prefix}.shape")).unwrap_or_else(|| "gaussian".to_string());
    let fwhm = take(&format!("{prefix}.fwhm"));
    let center = take(&format!("{prefix}.center"));
    let shape = match shape.as_str() {
        "gaussian" => FilterShape::Gaussian,
        "rectangular" => FilterShape::Rectangular,
        "none" => {
            if fwhm.is_some() || center.is_some() {
                return Err(Error::Scenario(format!(
                    "{prefix}.shape = none conflicts with fwhm/center"
                )));
            }
            return Ok(FilterSpec::none());
        }
        other => return Err(Error::Scenario(format!("unknown {prefix}.shape '{other}'"))),
    };
    let fwhm = match fwhm {
        Some(v) => positive(length_um(&v)?, &format!("{prefix}.fwhm"))?,
        None => 0.010,
    };
    let center = match center {
        Some(v) => positive(length_um(&v)?, &format!("{prefix}.center"))?,
        None => 0.810,
    };
    Ok(FilterSpec { shape, fwhm, center })
}

/// Replace the Littrow sentinel (theta0 = NaN) with the actual Littrow
/// incidence once the pump wavelength is known.
pub fn resolve_littrow(scenario: &mut Scenario) -> Result<()> {
    if let TiltSetting::Grating(g) = &mut scenario.tilt {
        if g.theta0.is_nan() {
            g.theta0 = littrow_incidence(g.groove_density, g.order, scenario.lambda_p)?;
        }
    }
    Ok(())
}

fn split_quantity(s: &str) -> Result<(f64, &str)> {
    let s = s.trim();
    let split = s
        .char_indices()
        .find(|(_, c)| !(c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E')))
        .map(|(i, _)| i)
        .unwrap_or(s.len());
    let (num, unit) = s.split_at(split);
    let value: f64 = num
        .trim()
        .parse()
        .map_err(|_| Error::Scenario(format!("bad quantity '{s}'")))?;
    Ok((value, unit.trim()))
}

/// Parse a length with unit suffix into micrometers.
pub fn length_um(s: &str) -> Result<f64> {
    let (v, unit) = split_quantity(s)?;
    match unit {
        "nm" => Ok(v / 1000.0),
        "um" => Ok(v),
        "mm" => Ok(v * 1000.0),
        "" => Err(Error::Scenario(format!("length '{s}' needs a unit (nm, um, mm)"))),
        other => Err(Error::Scenario(format!("unknown length unit '{other}' in '{s}'"))),
    }
}

/// Parse an angle with unit suffix into radians.
pub fn angle_rad(s: &str) -> Result<f64> {
    let (v, unit) = split_quantity(s)?;
    match unit {
        "deg" => Ok(v.to_radians()),
        "rad" => Ok(v),
        "" => Err(Error::Scenario(format!("angle '{s}' needs a unit (deg, rad)"))),
        other => Err(Error::Scenario(format!("unknown angle unit '{other}' in '{s}'"))),
    }
}

/// Parse an angular frequency into rad/fs.
pub fn omega_rad_fs(s: &str) -> Result<f64> {
    let (v, unit) = split_quantity(s)?;
    match unit {
        "rad/fs" => Ok(v),
        "" => Err(Error::Scenario(format!("frequency '{s}' needs a unit (rad/fs)"))),
        other => Err(Error::Scenario(format!("unknown frequency unit '{other}' in '{s}'"))),
    }
}

fn boolean(s: &str, key: &str) -> Result<bool> {
    match s {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(Error::Scenario(format!("{key}: expected true/false, got '{other}'"))),
    }
}

fn positive(v: f64, key: &str) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Scenario(format!("{key} must be positive, got {v}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = "\
crystal = BBO
length = 2 mm
pump.wavelength = 405 nm
pump.fwhm = 3.6 nm
tilt.directive = anticorrelation
filter.signal.fwhm = 10 nm
filter.idler.fwhm = 10 nm
grid.points = 256
grid.span = 0.12 rad/fs
";

    #[test]
    fn parses_the_default_scenario() {
        let s = Scenario::parse(BASE).unwrap();
        assert_eq!(s.length, 2000.0);
        assert_eq!(s.lambda_p, 0.405);
        assert_eq!(s.bandwidth_fwhm, Some(0.0036));
        assert_eq!(s.waist, None);
        assert_eq!(s.tilt, TiltSetting::Anticorrelation);
        assert_eq!(s.grid_points, 256);
        assert_eq!(s.filter_signal.fwhm, 0.010);
    }

    #[test]
    fn resolved_config_round_trips_units() {
        let s = Scenario::parse(BASE).unwrap();
        let cfg = s.to_config().unwrap();
        assert_eq!(cfg.length, 2000.0);
        assert!((cfg.pump.phi.abs().to_degrees() - 38.83).abs() < 0.5);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = format!("# header comment\n\n{BASE}\n# trailing");
        assert!(Scenario::parse(&text).is_ok());
    }

    #[test]
    fn missing_unit_is_rejected() {
        let text = BASE.replace("length = 2 mm", "length = 2");
        let err = Scenario::parse(&text).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("unit"));
    }

    #[test]
    fn duplicate_key_is_rejected() {
        let text = format!("{BASE}length = 3 mm\n");
        assert!(Scenario::parse(&text).is_err());
    }

    #[test]
    fn unknown_key_is_rejected() {
        let text = format!("{BASE}pump.chirp = 5 fs\n");
        let err = Scenario::parse(&text).unwrap_err();
        assert!(err.to_string().contains("pump.chirp"));
    }

    #[test]
    fn tilt_sources_are_mutually_exclusive() {
        let text = format!("{BASE}tilt.angle = 38.1 deg\n");
        assert!(Scenario::parse(&text).is_err());
        let text2 = BASE.replace("tilt.directive = anticorrelation", "");
        assert!(Scenario::parse(&text2).is_err());
    }

    #[test]
    fn grating_block_with_littrow() {
        let text = BASE.replace(
            "tilt.directive = anticorrelation",
            "tilt.grating.lines_per_mm = 1200\ntilt.grating.order = 1\ntilt.grating.theta0 = littrow",
        );
        let mut s = Scenario::parse(&text).unwrap();
        resolve_littrow(&mut s).unwrap();
        match s.tilt {
            TiltSetting::Grating(g) => {
                let expected = (1.0 * 0.405 * 1200.0 / 2000.0_f64).asin();
                assert!((g.theta0 - expected).abs() < 1e-12);
            }
            other => panic!("expected grating, got {other:?}"),
        }
        let waves = s.waves().unwrap();
        let (phi, alpha) = s.resolve_tilt(&waves).unwrap();
        assert!(phi.abs() > 0.1 && alpha.abs() > 0.0);
    }

    #[test]
    fn cw_flag_conflicts_with_fwhm() {
        let text = format!("{BASE}pump.cw = true\n");
        assert!(Scenario::parse(&text).is_err());
        let text2 = BASE.replace("pump.fwhm = 3.6 nm", "pump.cw = true");
        let s = Scenario::parse(&text2).unwrap();
        assert_eq!(s.bandwidth_fwhm, None);
    }

    #[test]
    fn filter_none_conflicts_with_width() {
        let text = format!("{BASE}filter.signal.shape = none\n");
        assert!(Scenario::parse(&text).is_err());
        let text2 = BASE
            .replace("filter.signal.fwhm = 10 nm", "filter.signal.shape = none");
        let s = Scenario::parse(&text2).unwrap();
        assert_eq!(s.filter_signal.shape, FilterShape::None);
    }

    #[test]
    fn waist_off_and_explicit() {
        let text = format!("{BASE}pump.waist = off\n");
        assert_eq!(Scenario::parse(&text).unwrap().waist, None);
        let text2 = format!("{BASE}pump.waist = 1 mm\n");
        assert_eq!(Scenario::parse(&text2).unwrap().waist, Some(1000.0));
    }

    #[test]
    fn unit_conversions() {
        assert_eq!(length_um("10 nm").unwrap(), 0.01);
        assert_eq!(length_um("2mm").unwrap(), 2000.0);
        assert!((angle_rad("90 deg").unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert_eq!(angle_rad("0.5 rad").unwrap(), 0.5);
        assert_eq!(omega_rad_fs("0.12 rad/fs").unwrap(), 0.12);
        assert!(length_um("10 kg").is_err());
    }

    #[test]
    fn negative_quantities_are_rejected() {
        let text = BASE.replace("length = 2 mm", "length = -2 mm");
        assert!(Scenario::parse(&text).is_err());
    }
}
