//! Example families: affine Cantor-type systems, the cubic family
//! `λx + εx² + εx³ + λj` and inverse branches of polynomials near the unit
//! circle.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ifs::{ConformalMap, IfsSystem, InverseBranch, Seed};

/// Default seed annulus for Julia-type systems.
pub const DEFAULT_ANNULUS: (f64, f64) = (0.8, 1.25);
/// The annulus is shrunk towards the unit circle by these factors of its
/// original half-widths until the system validates.
const SHRINK_STEPS: [f64; 6] = [1.0, 0.75, 0.5, 0.35, 0.2, 0.1];

/// `x ↦ ratio_i·x + offset_i` on `[0, 1]`.
pub fn cantor_affine(ratios: &[f64], offsets: &[f64]) -> Result<IfsSystem> {
    if ratios.len() != offsets.len() {
        return Err(Error::InvalidSystem(format!(
            "{} ratios but {} offsets",
            ratios.len(),
            offsets.len()
        )));
    }
    let maps = ratios
        .iter()
        .zip(offsets)
        .map(|(&a, &b)| ConformalMap::affine(a, b))
        .collect();
    IfsSystem::new(maps, Seed::interval(0.0, 1.0))
}

/// Upper end of the seed interval of the cubic family.
pub fn cubic_seed_end(lambda: f64) -> f64 {
    3.0 * lambda / (1.0 - lambda) + 0.1
}

/// `F_j(x) = λx + εx² + εx³ + λj` for `j ∈ {0, 1, 3}` on
/// `[0, 3λ/(1-λ) + 0.1]`.
pub fn cubic_family(lambda: f64, epsilon: f64) -> Result<IfsSystem> {
    if !(0.0 < lambda && lambda < 1.0) || !(epsilon >= 0.0) {
        return Err(Error::InvalidSystem(format!(
            "cubic family needs 0 < λ < 1 and ε ≥ 0 (got {lambda}, {epsilon})"
        )));
    }
    let maps = [0.0, 1.0, 3.0]
        .iter()
        .map(|&j| ConformalMap::cubic(lambda, epsilon, lambda * j))
        .collect();
    IfsSystem::new(maps, Seed::interval(0.0, cubic_seed_end(lambda)))
}

/// One polynomial `γz^d + ε₁z^{d-1} + … + ε_{d-1}z + c`.
#[derive(Clone, Debug, PartialEq)]
pub struct JuliaMap {
    pub degree: u32,
    pub gamma: Complex64,
    pub c: Complex64,
    /// Coefficients of `z^{d-1}, …, z^1`.
    pub lower: Vec<Complex64>,
}

impl JuliaMap {
    pub fn monomial(degree: u32, c: Complex64) -> Self {
        JuliaMap {
            degree,
            gamma: Complex64::new(1.0, 0.0),
            c,
            lower: Vec::new(),
        }
    }
}

/// Several polynomials whose inverse branches together form one system.
#[derive(Clone, Debug, PartialEq)]
pub struct JuliaSpec {
    pub maps: Vec<JuliaMap>,
    /// Seed annulus `(r_lo, r_hi)`; `None` uses [`DEFAULT_ANNULUS`].
    pub annulus: Option<(f64, f64)>,
}

/// The `Σ d_j` inverse branches of the maps of `spec`, on the largest
/// annulus in a fixed shrinking sequence on which every branch is a
/// contraction into the annulus.
pub fn mixed_julia(spec: &JuliaSpec) -> Result<IfsSystem> {
    if spec.maps.is_empty() {
        return Err(Error::InvalidSystem("no maps".into()));
    }
    for (j, m) in spec.maps.iter().enumerate() {
        if m.degree < 2 {
            return Err(Error::InvalidSystem(format!("map {j} has degree {} < 2", m.degree)));
        }
        if m.gamma.norm() == 0.0 {
            return Err(Error::InvalidSystem(format!("map {j} has zero leading coefficient")));
        }
        if m.lower.len() > m.degree as usize - 1 {
            return Err(Error::InvalidSystem(format!(
                "map {j} has {} lower-order coefficients, at most {} allowed",
                m.lower.len(),
                m.degree - 1
            )));
        }
    }
    let (r_lo, r_hi) = spec.annulus.unwrap_or(DEFAULT_ANNULUS);
    if !(0.0 < r_lo && r_lo < 1.0 && 1.0 < r_hi) {
        return Err(Error::InvalidSystem(format!(
            "annulus ({r_lo}, {r_hi}) must surround the unit circle"
        )));
    }
    let mut first_err = None;
    for s in SHRINK_STEPS {
        let lo = 1.0 - (1.0 - r_lo) * s;
        let hi = 1.0 + (r_hi - 1.0) * s;
        match branches(spec, hi).and_then(|maps| IfsSystem::new(maps, Seed::annulus(lo, hi))) {
            Ok(sys) => return Ok(sys),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    Err(first_err.unwrap())
}

fn branches(spec: &JuliaSpec, r_hi: f64) -> Result<Vec<ConformalMap>> {
    let mut out = Vec::new();
    for m in &spec.maps {
        // pad the lower-order coefficients to the full z^{d-1}..z^1 list
        let mut lower = m.lower.clone();
        lower.resize(m.degree as usize - 1, Complex64::new(0.0, 0.0));
        for k in 0..m.degree {
            out.push(ConformalMap::InverseBranch(InverseBranch::new(
                m.degree,
                m.gamma,
                m.c,
                lower.clone(),
                k,
                r_hi,
            )));
        }
    }
    if u32::try_from(out.len()).is_err() {
        return Err(Error::InvalidSystem("too many branches".into()));
    }
    Ok(out)
}
