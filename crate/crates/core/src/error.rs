use crate::constellation::Family;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("family parameter n must be at least {min}, got {n}")]
    SizeTooSmall { n: usize, min: usize },
    #[error("dvb_variant requires an even n (n/2 rings), got {0}")]
    OddSize(usize),
    #[error("power must be finite and > 0, got {0}")]
    InvalidPower(f64),
    #[error("snr must be finite and > 0, got {0}")]
    InvalidSnr(f64),
    #[error("noise variance must be finite and > 0, got {0}")]
    InvalidNoise(f64),
    #[error("quadrature order must be at least 2, got {0}")]
    InvalidOrder(usize),
    #[error("sample count must be at least 1")]
    NoSamples,
    #[error("{0} needs at least two points")]
    TooFewPoints(&'static str),
    #[error("papr is undefined for a constellation with zero average power")]
    ZeroPower,
    #[error("lemma index k must be at least 1")]
    LemmaIndex,
    #[error("mutual information {mi} exceeds capacity {capacity} beyond tolerance")]
    MiAboveCapacity { mi: f64, capacity: f64 },
    #[error("mutual information must be finite and >= 0, got {0}")]
    InvalidMi(f64),
    #[error("empty or unsorted size list")]
    BadSizeList,
    #[error("invalid {family} constellation: {reason}")]
    Invariant {
        family: Family,
        reason: alloc::string::String,
    },
}
