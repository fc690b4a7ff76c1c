use thiserror::Error;

/// Errors produced by the simulator and the analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("mode {0} is not part of the register")]
    UnknownMode(String),

    #[error("duplicate mode {0} in register")]
    DuplicateMode(String),

    #[error("transform is not unitary: max |U^dag U - I| = {deviation:.3e} exceeds {tolerance:.0e}")]
    NotUnitary { deviation: f64, tolerance: f64 },

    #[error("transform matrix is {rows}x{cols} but acts on {modes} modes")]
    TransformShape { rows: usize, cols: usize, modes: usize },

    #[error("register mismatch between operands")]
    RegisterMismatch,

    #[error("gamma = {gamma} lies outside [0, pi/4]")]
    GammaOutOfRange { gamma: f64 },

    #[error("{name} = {value} lies outside {range}")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("state is not normalized: squared norm = {norm}")]
    NotNormalized { norm: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("no gamma on the {branch} branch gives alpha = {alpha}")]
    NoSolution { alpha: f64, branch: &'static str },

    #[error("post-selection succeeded with probability zero")]
    ZeroProbability,

    #[error("correlation class {class} is inconsistent: |{a}| = {va}, |{b}| = {vb}")]
    ClassMismatch {
        class: &'static str,
        a: String,
        va: f64,
        b: String,
        vb: f64,
    },

    #[error("greedy cover needs {0} settings, more than 21")]
    CoverTooLarge(usize),

    #[error("measurement setting {0} is missing from the record set")]
    MissingSetting(String),

    #[error("measurement setting {0} has no counts")]
    EmptySetting(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
