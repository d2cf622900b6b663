use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("grid too narrow: packet at x0={x0} nm with sigma={sigma} nm needs [{need_lo}, {need_hi}] but grid covers [{x_min}, {x_max}]")]
    GridTooNarrow {
        x0: f64,
        sigma: f64,
        need_lo: f64,
        need_hi: f64,
        x_min: f64,
        x_max: f64,
    },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("degenerate state: symmetrized norm {norm:e} below threshold")]
    DegenerateState { norm: f64 },
    #[error("packets have different widths ({0} nm vs {1} nm); phase-space distance is undefined")]
    MixedWidths(f64, f64),
    #[error("{n} particles exceeds the supported maximum of {max}")]
    TooManyParticles { n: usize, max: usize },
    #[error("state is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },
    #[error("non-finite amplitude after step at t = {time} fs")]
    NonFiniteAmplitude { time: f64 },
    #[error("|psi| below node threshold at x = {x} nm")]
    NodeRegion { x: f64 },
    #[error("ensemble of {m} trajectories is too small (need at least {min})")]
    TooFewSamples { m: usize, min: usize },
    #[error("particle {particle} left the domain at x = {x} nm")]
    LeftDomain { particle: usize, x: f64 },
    #[error("assembled conditional wave function of particle {particle} vanished (norm {norm:e})")]
    NullAssembly { particle: usize, norm: f64 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
