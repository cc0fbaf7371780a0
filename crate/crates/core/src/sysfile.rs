//! System description files.
//!
//! A JSON object with a `type` tag and the map parameters of that family:
//!
//! ```json
//! {"type": "affine1d", "maps": [{"slope": 0.5, "offset": 0}], "seed": [0, 1],
//!  "weights": [1.0]}
//! {"type": "cubic1d", "lambda": 0.25, "epsilon": 0.001}
//! {"type": "cubic1d", "maps": [{"lambda": 0.25, "epsilon": 0, "offset": 0}], "seed": [0, 1.1]}
//! {"type": "julia2d", "maps": [{"degree": 2, "c": [0.05, 0]}], "seed": {"r_lo": 0.8, "r_hi": 1.25}}
//! ```
//!
//! `seed` is optional: `[0, 1]` for `affine1d`, `[0, 3λ/(1-λ) + 0.1]` for
//! the cubic family and the default annulus for `julia2d`, where it is the
//! starting annulus of the shrinking search. Complex numbers are `[re, im]`.
//! Julia maps take `gamma` (default `[1, 0]`) and `lower`, the coefficients
//! of `z^{d-1}, …, z^1`. An optional `potential` `{"k": k, "table": [...]}`
//! (row-major over `k`-words, first symbol most significant) overrides
//! `weights`.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ifs::{ConformalMap, IfsSystem, Seed};
use crate::systems::{cantor_affine, cubic_family, cubic_seed_end, mixed_julia, JuliaMap, JuliaSpec};
use crate::thermo::{BernoulliWeights, GibbsMeasure, LocalPotential};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineMapSpec {
    pub slope: f64,
    pub offset: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CubicMapSpec {
    pub lambda: f64,
    pub epsilon: f64,
    pub offset: f64,
}

fn one() -> [f64; 2] {
    [1.0, 0.0]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JuliaMapSpec {
    pub degree: u32,
    #[serde(default = "one")]
    pub gamma: [f64; 2],
    #[serde(default)]
    pub c: [f64; 2],
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lower: Vec<[f64; 2]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnulusSpec {
    pub r_lo: f64,
    pub r_hi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PotentialSpec {
    pub k: usize,
    pub table: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum SystemSpec {
    #[serde(rename = "affine1d")]
    Affine1d {
        maps: Vec<AffineMapSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<[f64; 2]>,
    },
    #[serde(rename = "cubic1d")]
    Cubic1d {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        maps: Option<Vec<CubicMapSpec>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lambda: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        epsilon: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<[f64; 2]>,
    },
    #[serde(rename = "julia2d")]
    Julia2d {
        maps: Vec<JuliaMapSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<AnnulusSpec>,
    },
}

/// A parsed system file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemFile {
    #[serde(flatten)]
    pub system: SystemSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<PotentialSpec>,
}

fn complex(v: [f64; 2]) -> Complex64 {
    Complex64::new(v[0], v[1])
}

impl SystemFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::SystemFile(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::SystemFile(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("system files serialize")
    }

    /// Single-line JSON, for embedding in reports.
    pub fn to_compact_json(&self) -> String {
        serde_json::to_string(self).expect("system files serialize")
    }

    /// Builds and validates the system.
    pub fn build(&self) -> Result<IfsSystem> {
        match &self.system {
            SystemSpec::Affine1d { maps, seed } => {
                let ratios: Vec<f64> = maps.iter().map(|m| m.slope).collect();
                let offsets: Vec<f64> = maps.iter().map(|m| m.offset).collect();
                match seed {
                    None => cantor_affine(&ratios, &offsets),
                    Some([lo, hi]) => IfsSystem::new(
                        maps.iter().map(|m| ConformalMap::affine(m.slope, m.offset)).collect(),
                        Seed::interval(*lo, *hi),
                    ),
                }
            }
            SystemSpec::Cubic1d {
                maps,
                lambda,
                epsilon,
                seed,
            } => match (maps, lambda, epsilon) {
                (None, Some(l), Some(e)) => match seed {
                    None => cubic_family(*l, *e),
                    Some([lo, hi]) => IfsSystem::new(
                        [0.0, 1.0, 3.0]
                            .iter()
                            .map(|&j| ConformalMap::cubic(*l, *e, l * j))
                            .collect(),
                        Seed::interval(*lo, *hi),
                    ),
                },
                (Some(maps), None, None) => {
                    let [lo, hi] = match seed {
                        Some(s) => *s,
                        None => {
                            let l = maps.iter().map(|m| m.lambda).fold(0.0, f64::max);
                            [0.0, cubic_seed_end(l)]
                        }
                    };
                    IfsSystem::new(
                        maps.iter()
                            .map(|m| ConformalMap::cubic(m.lambda, m.epsilon, m.offset))
                            .collect(),
                        Seed::interval(lo, hi),
                    )
                }
                _ => Err(Error::SystemFile(
                    "cubic1d needs either `maps` or both `lambda` and `epsilon`".into(),
                )),
            },
            SystemSpec::Julia2d { maps, seed } => mixed_julia(&JuliaSpec {
                maps: maps
                    .iter()
                    .map(|m| JuliaMap {
                        degree: m.degree,
                        gamma: complex(m.gamma),
                        c: complex(m.c),
                        lower: m.lower.iter().copied().map(complex).collect(),
                    })
                    .collect(),
                annulus: seed.map(|a| (a.r_lo, a.r_hi)),
            }),
        }
    }

    /// The `weights` array, if present.
    pub fn weights(&self) -> Result<Option<BernoulliWeights>> {
        self.weights.clone().map(BernoulliWeights::new).transpose()
    }

    /// The `potential` object, if present, over an alphabet of `m` symbols.
    pub fn potential(&self, m: usize) -> Result<Option<LocalPotential>> {
        self.potential
            .as_ref()
            .map(|p| LocalPotential::new(m, p.k, p.table.clone()))
            .transpose()
    }

    /// The equilibrium state of `potential`, else the Bernoulli measure of
    /// `weights`, else the uniform measure, on `m` symbols.
    pub fn measure(&self, m: usize) -> Result<GibbsMeasure> {
        if let Some(psi) = self.potential(m)? {
            return GibbsMeasure::equilibrium(&psi);
        }
        let p = self.weights()?.unwrap_or_else(|| BernoulliWeights::uniform(m));
        if p.len() != m {
            return Err(Error::SystemFile(format!("{} weights for {m} maps", p.len())));
        }
        Ok(GibbsMeasure::bernoulli(&p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::Enclosure;
    use crate::ifs::Word;

    #[test]
    fn parses_each_family() {
        let a = SystemFile::parse(
            r#"{"type": "affine1d", "maps": [{"slope": 0.5, "offset": 0}, {"slope": 0.5, "offset": 0.5}],
                "weights": [0.25, 0.75]}"#,
        )
        .unwrap();
        let sys = a.build().unwrap();
        assert_eq!(sys.affine_maps().unwrap(), &[(0.5, 0.0), (0.5, 0.5)]);
        assert_eq!(a.weights().unwrap().unwrap().probs(), &[0.25, 0.75]);
        assert!((a.measure(2).unwrap().symbol_marginals()[1] - 0.75).abs() < 1e-15);

        let c = SystemFile::parse(r#"{"type": "cubic1d", "lambda": 0.25, "epsilon": 0}"#).unwrap();
        assert_eq!(c.build().unwrap().maps(), cubic_family(0.25, 0.0).unwrap().maps());
        let explicit = SystemFile::parse(
            r#"{"type": "cubic1d", "maps": [{"lambda": 0.25, "epsilon": 0, "offset": 0},
                {"lambda": 0.25, "epsilon": 0, "offset": 0.25}, {"lambda": 0.25, "epsilon": 0, "offset": 0.75}]}"#,
        )
        .unwrap();
        assert_eq!(explicit.build().unwrap().seed(), cubic_family(0.25, 0.0).unwrap().seed());

        let j = SystemFile::parse(r#"{"type": "julia2d", "maps": [{"degree": 2, "c": [0.05, 0]}]}"#).unwrap();
        let sys = j.build().unwrap();
        assert_eq!(sys.len(), 2);
        assert!(matches!(sys.enclosure(&Word::new(vec![0])).unwrap(), Enclosure::Polar { .. }));
    }

    #[test]
    fn potential_overrides_weights() {
        let f = SystemFile::parse(
            r#"{"type": "affine1d", "maps": [{"slope": 0.3, "offset": 0}, {"slope": 0.3, "offset": 0.7}],
                "weights": [0.5, 0.5], "potential": {"k": 2, "table": [0, -1, -0.5, 0.2]}}"#,
        )
        .unwrap();
        let mu = f.measure(2).unwrap();
        assert_eq!(mu.locality(), 2);
        assert!(f.measure(3).is_err());
    }

    #[test]
    fn decimal_literals_round_to_nearest() {
        let f = SystemFile::parse(
            r#"{"type": "affine1d", "maps": [{"slope": 0.1, "offset": 2.2250738585072014e-308},
                {"slope": 0.3333333333333333, "offset": 0.6666666666666666}]}"#,
        )
        .unwrap();
        let SystemSpec::Affine1d { maps, .. } = &f.system else { panic!() };
        assert_eq!(maps[0].slope.to_bits(), 0.1f64.to_bits());
        assert_eq!(maps[0].offset, f64::MIN_POSITIVE);
        assert_eq!(maps[1].slope, 1.0 / 3.0);
    }

    #[test]
    fn round_trips_through_json() {
        for text in [
            r#"{"type": "affine1d", "maps": [{"slope": -0.4, "offset": 0.9}], "seed": [0, 1]}"#,
            r#"{"type": "cubic1d", "lambda": 0.3, "epsilon": 0.001, "weights": [0.2, 0.3, 0.5]}"#,
            r#"{"type": "julia2d", "maps": [{"degree": 3, "gamma": [0, 1], "c": [0.01, 0.02], "lower": [[0.001, 0]]}],
                "seed": {"r_lo": 0.85, "r_hi": 1.2}}"#,
        ] {
            let f = SystemFile::parse(text).unwrap();
            assert_eq!(SystemFile::parse(&f.to_json()).unwrap(), f);
        }
    }

    #[test]
    fn reports_bad_files() {
        for text in [
            "not json",
            r#"{"type": "quadratic", "maps": []}"#,
            r#"{"type": "affine1d"}"#,
            r#"{"type": "cubic1d", "lambda": 0.25}"#,
        ] {
            assert!(matches!(SystemFile::parse(text).and_then(|f| f.build()), Err(Error::SystemFile(_))), "{text}");
        }
        let f = SystemFile::parse(r#"{"type": "affine1d", "maps": [{"slope": 1.5, "offset": 0}]}"#).unwrap();
        assert!(f.build().is_err());
        assert!(SystemFile::load("/nonexistent/system.json").is_err());
    }
}
