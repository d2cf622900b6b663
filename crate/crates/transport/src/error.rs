use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransportError {
    #[error(transparent)]
    Core(#[from] bohmex::Error),
    #[error("invalid device configuration: {0}")]
    InvalidConfig(String),
    #[error("{n} electrons in flight at t = {time} fs exceeds the cap of {cap}")]
    PopulationOverflow { n: usize, cap: usize, time: f64 },
    #[error("record of {len} samples is too short for a maximum lag of {max_lag} samples (need {need})")]
    RecordTooShort { len: usize, max_lag: usize, need: usize },
    #[error("Fano factor undefined: mean current {mean:e} e/fs is below the noise floor {floor:e}")]
    UndefinedFano { mean: f64, floor: f64 },
}

pub type Result<T> = std::result::Result<T, TransportError>;
