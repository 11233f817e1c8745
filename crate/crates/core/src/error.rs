use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("earth radius must be positive and finite, got {0}")]
    InvalidEarthRadius(f64),

    #[error("altitude must be positive, got {0} km")]
    InvalidAltitude(f64),

    #[error("shell {index}: {count} satellites exceeds the per-shell limit of {limit}")]
    TooManySatellites { index: usize, count: u64, limit: u64 },

    #[error("constellation must contain at least one shell")]
    NoShells,

    #[error("distance must be finite and non-negative, got {0} km")]
    InvalidDistance(f64),

    #[error("distance {distance} km is below the cap onset {onset} km")]
    BelowOnset { distance: f64, onset: f64 },

    #[error("shell index out of range: {index} (constellation has {count} shells)")]
    ShellIndexOutOfRange { index: usize, count: usize },

    #[error("observer shell {0} has no satellites")]
    EmptyObserverShell(usize),

    #[error("the observer's own shell must hold at least one point (the observer)")]
    MissingObserverPoint,

    #[error("invalid observation point {0:?}, expected `earth` or `shell:I`")]
    InvalidObserver(String),

    #[error("probability must lie in [0, 1), got {0}")]
    InvalidProbability(f64),

    #[error("quantile {q} is beyond the visibility mass {visibility}")]
    BeyondVisibility { q: f64, visibility: f64 },

    #[error("no satellite is ever visible from this observer")]
    ZeroVisibility,

    #[error("trials must be at least 1")]
    NoTrials,

    #[error("empirical distribution is empty")]
    EmptyEmpirical,

    #[error("distance grid must be sorted ascending")]
    UnsortedGrid,

    #[error("unknown preset {name:?}; available presets: {available}")]
    UnknownPreset { name: String, available: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("internal consistency error: {0}")]
    Internal(String),
}
