use thiserror::Error;

/// Unified error type for the library.
///
/// Variants are grouped so the CLI can map them onto its exit codes:
/// validation problems (bad input) exit 2, physics-domain failures
/// (no phase matching, degenerate solvers) exit 3, and numerical guard
/// trips (unresolvable grids, too-narrow windows) exit 4.
#[derive(Debug, Error)]
pub enum Error {
    #[error("wavelength {lambda_um} um outside validity range [{min_um}, {max_um}] um of crystal '{crystal}'")]
    WavelengthOutOfRange {
        crystal: String,
        lambda_um: f64,
        min_um: f64,
        max_um: f64,
    },

    #[error("phase matching unattainable: no sign change of delta-k(theta) in (0, pi/2) for pump {lambda_p_um} um")]
    PhaseMatchingUnattainable { lambda_p_um: f64 },

    #[error("evanescent diffraction order: m*lambda/d - sin(theta0) = {argument} outside [-1, 1]")]
    EvanescentOrder { argument: f64 },

    #[error("singular grating geometry: diffraction angle at +-pi/2")]
    SingularGratingGeometry,

    #[error("no grating solution: required cos(beta0) = {cos_beta0} outside (0, 1]")]
    GratingDesignInfeasible { cos_beta0: f64 },

    #[error("no tilt can equalize group velocities: walk-off slopes coincide but N_s != N_i")]
    TiltAnticorrelationDegenerate,

    #[error("no tilt can achieve correlation condition: tan(rho_s) + tan(rho_i) - 2 tan(rho_p) = 0 but 2 N_p != N_s + N_i")]
    TiltCorrelationDegenerate,

    #[error("grid cannot resolve the joint spectrum: step {step} rad/fs must cover the narrower feature ({narrowest} rad/fs) with at least 8 samples")]
    GridUnresolvable { step: f64, narrowest: f64 },

    #[error("delay window too narrow: edge rate {edge_rate} deviates from 1/2 by more than 0.02")]
    DelayWindowTooNarrow { edge_rate: f64 },

    #[error("grid not symmetric: omega-minus reflection is not exact on samples")]
    AsymmetricGrid,

    #[error("joint spectral intensity has zero variance; correlation undefined")]
    UndefinedCorrelation,

    #[error("no analytic CW branch for tilt {phi_rad} rad: supported branches are phi = 0 and the anticorrelation tilt (use build_jsa for other tilts)")]
    UnsupportedAnalyticBranch { phi_rad: f64 },

    #[error("scenario error: {0}")]
    Scenario(String),

    #[error("crystal data error: {0}")]
    CrystalData(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// CLI exit code for this error per the documented convention.
    pub fn exit_code(&self) -> i32 {
        use Error::*;
        match self {
            Scenario(_) | CrystalData(_) | WavelengthOutOfRange { .. } | Io(_) => 2,
            PhaseMatchingUnattainable { .. }
            | EvanescentOrder { .. }
            | SingularGratingGeometry
            | GratingDesignInfeasible { .. }
            | TiltAnticorrelationDegenerate
            | TiltCorrelationDegenerate => 3,
            GridUnresolvable { .. }
            | DelayWindowTooNarrow { .. }
            | AsymmetricGrid
            | UndefinedCorrelation
            | UnsupportedAnalyticBranch { .. } => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
