//! Dimension of self-conformal sets with overlaps, estimated from entropy,
//! Lyapunov exponent and the exponential growth rate of overlap counts.

pub mod dimension;
pub mod error;
pub mod ifs;
pub mod interval;
pub mod overlap;
pub mod rng;
pub mod sysfile;
pub mod systems;
pub mod thermo;

pub use dimension::{
    DimensionReport, DimensionSettings, DropVerdict, EmpiricalDimension, EmpiricalSettings, LyapunovEstimate,
    PartitionBound, PartitionScheme,
};
pub use error::{Error, Result};
pub use ifs::{
    contraction_bounds, ConformalMap, ContractionBounds, Enclosure, IfsSystem, InverseBranch, Point, Seed, Symbol,
    Word,
};
pub use interval::Interval;
pub use overlap::{CountBracket, MembershipTester, OverlapEstimate, OverlapSettings};
pub use sysfile::SystemFile;
pub use systems::{JuliaMap, JuliaSpec};
pub use thermo::{BernoulliWeights, GibbsMeasure, LocalPotential};
