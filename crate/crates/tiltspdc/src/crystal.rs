//! Sellmeier dispersion data for uniaxial crystals.
//!
//! Coefficient sets are read from a plain-text data file (see
//! `data/crystals.txt` for the field-by-field format); BBO ships built in.
//! The dispersion engine itself is crystal-agnostic: anything expressible
//! in a supported Sellmeier formula works.

use crate::error::{Error, Result};

/// Dispersion formula identifier.
///
/// `SellmeierQuadratic` is n^2 = A + B/(lambda^2 - C) - D*lambda^2 with
/// lambda in micrometers, the form most published BBO fits use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SellmeierFormula {
    SellmeierQuadratic,
}

/// One axis worth of Sellmeier coefficients.
#[derive(Debug, Clone)]
pub struct SellmeierSet {
    pub formula: SellmeierFormula,
    pub coefficients: Vec<f64>,
}

impl SellmeierSet {
    pub fn quadratic(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self {
            formula: SellmeierFormula::SellmeierQuadratic,
            coefficients: vec![a, b, c, d],
        }
    }

    /// n^2(lambda).
    pub fn n_squared(&self, lambda_um: f64) -> f64 {
        let [a, b, c, d] = self.coeffs();
        a + b / (lambda_um * lambda_um - c) - d * lambda_um * lambda_um
    }

    /// d(n^2)/d(lambda).
    pub fn n_squared_d1(&self, lambda_um: f64) -> f64 {
        let [_, b, c, d] = self.coeffs();
        let l2 = lambda_um * lambda_um;
        -2.0 * b * lambda_um / ((l2 - c) * (l2 - c)) - 2.0 * d * lambda_um
    }

    /// d^2(n^2)/d(lambda)^2.
    pub fn n_squared_d2(&self, lambda_um: f64) -> f64 {
        let [_, b, c, d] = self.coeffs();
        let l2 = lambda_um * lambda_um;
        let den = l2 - c;
        -2.0 * b / (den * den) + 8.0 * b * l2 / (den * den * den) - 2.0 * d
    }

    /// n and its first two wavelength derivatives, via the chain rule on n^2.
    pub fn index_with_derivatives(&self, lambda_um: f64) -> (f64, f64, f64) {
        let f = self.n_squared(lambda_um);
        let f1 = self.n_squared_d1(lambda_um);
        let f2 = self.n_squared_d2(lambda_um);
        let n = f.sqrt();
        let n1 = f1 / (2.0 * n);
        let n2 = f2 / (2.0 * n) - f1 * f1 / (4.0 * n * n * n);
        (n, n1, n2)
    }

    fn coeffs(&self) -> [f64; 4] {
        [
            self.coefficients[0],
            self.coefficients[1],
            self.coefficients[2],
            self.coefficients[3],
        ]
    }
}

/// A named uniaxial crystal: ordinary and principal-extraordinary Sellmeier
/// sets plus their validity window. Source of every dispersion quantity in
/// the rest of the library.
#[derive(Debug, Clone)]
pub struct CrystalModel {
    pub name: String,
    pub sellmeier_o: SellmeierSet,
    pub sellmeier_e: SellmeierSet,
    /// Validity window [lambda_min, lambda_max], micrometers.
    pub valid_range: (f64, f64),
    pub note: String,
}

impl CrystalModel {
    /// Beta barium borate with the Eimerl 1987 coefficient set
    /// (the record shipped in `data/crystals.txt`).
    pub fn bbo() -> Self {
        builtin()
            .into_iter()
            .find(|c| c.name == "BBO")
            .expect("builtin crystal data contains BBO")
    }

    /// Reject wavelengths outside the documented validity window; the
    /// Sellmeier fit is never extrapolated silently.
    pub fn check_range(&self, lambda_um: f64) -> Result<()> {
        let (lo, hi) = self.valid_range;
        if !(lambda_um >= lo && lambda_um <= hi) {
            return Err(Error::WavelengthOutOfRange {
                crystal: self.name.clone(),
                lambda_um,
                min_um: lo,
                max_um: hi,
            });
        }
        Ok(())
    }
}

/// All crystals embedded at build time from `data/crystals.txt`.
pub fn builtin() -> Vec<CrystalModel> {
    parse_crystal_file(include_str!("../data/crystals.txt"))
        .expect("builtin crystal data parses")
}

/// Look up a crystal by name, searching `extra_file` first (if given),
/// then the builtin table.
pub fn find(name: &str, extra_file: Option<&str>) -> Result<CrystalModel> {
    if let Some(text) = extra_file {
        if let Some(c) = parse_crystal_file(text)?.into_iter().find(|c| c.name == name) {
            return Ok(c);
        }
    }
    builtin()
        .into_iter()
        .find(|c| c.name == name)
        .ok_or_else(|| Error::CrystalData(format!("unknown crystal '{name}'")))
}

/// Parse the documented crystal data format: key = value lines, '#'
/// comments, blank-line-separated records.
pub fn parse_crystal_file(text: &str) -> Result<Vec<CrystalModel>> {
    let mut out = Vec::new();
    let mut fields: Vec<(String, String)> = Vec::new();

    let mut flush = |fields: &mut Vec<(String, String)>| -> Result<()> {
        if fields.is_empty() {
            return Ok(());
        }
        out.push(record_from_fields(std::mem::take(fields))?);
        Ok(())
    };

    for raw in text.lines() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            flush(&mut fields)?;
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::CrystalData(format!("expected 'key = value', got '{line}'")))?;
        fields.push((k.trim().to_string(), v.trim().to_string()));
    }
    flush(&mut fields)?;
    Ok(out)
}

fn record_from_fields(fields: Vec<(String, String)>) -> Result<CrystalModel> {
    let get = |key: &str| -> Result<&str> {
        fields
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| Error::CrystalData(format!("missing field '{key}'")))
    };
    let numbers = |s: &str| -> Result<Vec<f64>> {
        s.split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| Error::CrystalData(format!("bad number '{t}'")))
            })
            .collect()
    };

    let formula = match get("formula")? {
        "sellmeier-quadratic" => SellmeierFormula::SellmeierQuadratic,
        other => {
            return Err(Error::CrystalData(format!("unknown formula id '{other}'")));
        }
    };
    let set = |key: &str| -> Result<SellmeierSet> {
        let c = numbers(get(key)?)?;
        if c.len() != 4 {
            return Err(Error::CrystalData(format!(
                "formula sellmeier-quadratic needs 4 coefficients on '{key}', got {}",
                c.len()
            )));
        }
        Ok(SellmeierSet { formula, coefficients: c })
    };
    let range = numbers(get("range")?)?;
    if range.len() != 2 || range[0] <= 0.0 || range[1] <= range[0] {
        return Err(Error::CrystalData("range needs LAMBDA_MIN < LAMBDA_MAX, both positive".into()));
    }

    Ok(CrystalModel {
        name: get("crystal")?.to_string(),
        sellmeier_o: set("o")?,
        sellmeier_e: set("e")?,
        valid_range: (range[0], range[1]),
        note: get("note").unwrap_or_default().to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn builtin_contains_bbo() {
        let bbo = CrystalModel::bbo();
        assert_eq!(bbo.name, "BBO");
        assert!(bbo.note.contains("Eimerl"));
    }

    #[test]
    fn index_above_one_across_validity_window() {
        let bbo = CrystalModel::bbo();
        let (lo, hi) = bbo.valid_range;
        for i in 0..=200 {
            let l = lo + (hi - lo) * i as f64 / 200.0;
            assert!(bbo.sellmeier_o.n_squared(l).sqrt() > 1.0, "n_o <= 1 at {l}");
            assert!(bbo.sellmeier_e.n_squared(l).sqrt() > 1.0, "n_e <= 1 at {l}");
        }
    }

    #[test]
    fn analytic_wavelength_derivatives_match_finite_differences() {
        let bbo = CrystalModel::bbo();
        let h = 1e-5;
        for l in [0.3, 0.405, 0.6, 0.81, 1.0] {
            for set in [&bbo.sellmeier_o, &bbo.sellmeier_e] {
                let (_, n1, n2) = set.index_with_derivatives(l);
                let np = set.n_squared(l + h).sqrt();
                let nm = set.n_squared(l - h).sqrt();
                let n0 = set.n_squared(l).sqrt();
                assert_relative_eq!(n1, (np - nm) / (2.0 * h), max_relative = 1e-7);
                assert_relative_eq!(n2, (np - 2.0 * n0 + nm) / (h * h), max_relative = 1e-4);
            }
        }
    }

    #[test]
    fn out_of_range_is_rejected() {
        let bbo = CrystalModel::bbo();
        let err = bbo.check_range(12.0).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("BBO") && msg.contains("12"));
    }

    #[test]
    fn parse_rejects_malformed_records() {
        assert!(parse_crystal_file("crystal = X\nformula = nope\n").is_err());
        assert!(parse_crystal_file("crystal = X\nformula = sellmeier-quadratic\no = 1 2\ne = 1 2 3 4\nrange = 0.2 1.0\n").is_err());
    }
}
