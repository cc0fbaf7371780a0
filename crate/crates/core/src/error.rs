use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("symbol {symbol} out of range for an alphabet of {alphabet}")]
    SymbolOutOfRange { symbol: u32, alphabet: usize },

    #[error("point {0} lies outside the seed set")]
    PointOutsideSeed(String),

    #[error("system is not uniformly contracting: sup |φ'| = {kappa_max} for map {map}")]
    NotContracting { map: usize, kappa_max: f64 },

    #[error("map {map} does not send the seed set into itself")]
    Containment { map: usize },

    #[error("map {map} is not injective on the seed set (derivative vanishes)")]
    NotInjective { map: usize },

    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("eigenvalue iteration did not converge after {iterations} iterations")]
    EigenNonConvergence { iterations: usize },

    #[error("enumeration of {requested} items exceeds the cap of {cap}")]
    CapExceeded { requested: u128, cap: u128 },

    #[error("inconsistent dimension inputs: entropy {h} is below log overlap number {log_o}")]
    InconsistentDimension { h: f64, log_o: f64 },

    #[error("degenerate radius ladder: {0}")]
    DegenerateLadder(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("system file: {0}")]
    SystemFile(String),
}

pub type Result<T> = std::result::Result<T, Error>;
