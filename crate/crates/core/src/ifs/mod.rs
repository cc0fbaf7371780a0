//! Conformal iterated function systems: maps, words, compositions and
//! outer enclosures of cylinder images.

mod chain;
mod enclosure;
mod maps;
mod word;

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

pub(crate) use chain::Chain;
pub use enclosure::{Enclosure, Point};
pub use maps::{ConformalMap, InverseBranch, BRANCH_CUT};
pub use word::{Symbol, Word};

use crate::error::{Error, Result};
use crate::interval::Interval;

/// Default number of grid cells used when bounding derivatives over the seed.
pub const DEFAULT_DERIVATIVE_GRID: usize = 1 << 10;

/// Default cap on the number of words enumerated for a cover.
pub const DEFAULT_COVER_CAP: u128 = 10_000_000;

/// The compact seed set `V` every map sends into itself.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Seed {
    Interval(Interval),
    Annulus { r_lo: f64, r_hi: f64 },
}

impl Seed {
    pub fn interval(lo: f64, hi: f64) -> Self {
        Seed::Interval(Interval::new(lo, hi))
    }

    pub fn annulus(r_lo: f64, r_hi: f64) -> Self {
        Seed::Annulus { r_lo, r_hi }
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            Seed::Interval(_) => 1,
            Seed::Annulus { .. } => 2,
        }
    }

    pub fn enclosure(&self) -> Enclosure {
        match *self {
            Seed::Interval(iv) => Enclosure::Line(iv),
            Seed::Annulus { r_lo, r_hi } => Enclosure::Polar {
                radius: Interval::new(r_lo, r_hi),
                angle: Interval::new(BRANCH_CUT, BRANCH_CUT + TAU),
            },
        }
    }

    /// Reference point used to approximate the coding map: the midpoint of
    /// an interval, or the mid-radius point on the negative real axis of an
    /// annulus.
    pub fn anchor(&self) -> Point {
        match *self {
            Seed::Interval(iv) => Complex64::new(iv.mid(), 0.0),
            Seed::Annulus { r_lo, r_hi } => Complex64::from_polar(0.5 * (r_lo + r_hi), PI),
        }
    }

    /// Euclidean diameter.
    pub fn diameter(&self) -> f64 {
        match *self {
            Seed::Interval(iv) => iv.width(),
            Seed::Annulus { r_hi, .. } => 2.0 * r_hi,
        }
    }

    /// Length bound for paths inside the seed between any two of its points.
    /// Equal to the diameter for an interval. An annulus is slit along the
    /// branch cut, so a path may have to go round the inner circle.
    pub fn path_diameter(&self) -> f64 {
        match *self {
            Seed::Interval(iv) => iv.width(),
            Seed::Annulus { r_lo, r_hi } => TAU * r_lo + 2.0 * (r_hi - r_lo),
        }
    }

    pub fn contains(&self, p: Point, margin: f64) -> bool {
        self.enclosure().contains(p, margin)
    }

    /// Subdivision of the seed into roughly `cells` pieces.
    fn grid(&self, cells: usize) -> Vec<Enclosure> {
        let cells = cells.max(1);
        match *self {
            Seed::Interval(iv) => (0..cells)
                .map(|j| {
                    let a = iv.lo + iv.width() * j as f64 / cells as f64;
                    let b = if j + 1 == cells {
                        iv.hi
                    } else {
                        iv.lo + iv.width() * (j + 1) as f64 / cells as f64
                    };
                    Enclosure::Line(Interval::new(a, b))
                })
                .collect(),
            Seed::Annulus { r_lo, r_hi } => {
                let nr = ((cells as f64).sqrt() / 4.0).ceil().max(1.0) as usize;
                let na = (cells / nr).max(1);
                let mut out = Vec::with_capacity(nr * na);
                for i in 0..nr {
                    let ra = r_lo + (r_hi - r_lo) * i as f64 / nr as f64;
                    let rb = if i + 1 == nr {
                        r_hi
                    } else {
                        r_lo + (r_hi - r_lo) * (i + 1) as f64 / nr as f64
                    };
                    for j in 0..na {
                        let a = BRANCH_CUT + TAU * j as f64 / na as f64;
                        let b = BRANCH_CUT + TAU * (j + 1) as f64 / na as f64;
                        out.push(Enclosure::Polar {
                            radius: Interval::new(ra, rb),
                            angle: Interval::new(a, b),
                        });
                    }
                }
                out
            }
        }
    }
}

/// Uniform derivative bounds of a system over its seed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContractionBounds {
    /// Lower bound on `|φ_i'|` over all maps and the seed.
    pub kappa_min: f64,
    /// Upper bound on `|φ_i'|` over all maps and the seed.
    pub kappa_max: f64,
    /// Bounded distortion constant `C ≥ 1`: `|φ_w'(x)| ≤ C |φ_w'(y)|` for
    /// every word `w` and `x, y` in the seed.
    pub distortion: f64,
}

/// Derivative bounds by interval evaluation over a grid on the seed.
///
/// The distortion constant comes from the total oscillation of `log|φ'|`
/// along a composition: each factor oscillates by at most `L·diam`, with `L`
/// the Lipschitz constant of `log|φ_i'|`, and the diameters shrink
/// geometrically at rate `κ_max`.
pub fn contraction_bounds(maps: &[ConformalMap], seed: &Seed, grid: usize) -> Result<ContractionBounds> {
    let cells = seed.grid(grid);
    let mut kappa_min = f64::INFINITY;
    let mut kappa_max = 0.0f64;
    let mut lipschitz = 0.0f64;
    for (i, map) in maps.iter().enumerate() {
        let mut map_min = f64::INFINITY;
        let mut map_max = 0.0f64;
        for cell in &cells {
            let d = map.derivative_range(cell);
            map_min = map_min.min(d.lo);
            map_max = map_max.max(d.hi);
            lipschitz = lipschitz.max(map.log_derivative_lipschitz(cell));
        }
        if map_max >= 1.0 {
            return Err(Error::NotContracting {
                map: i,
                kappa_max: map_max,
            });
        }
        kappa_min = kappa_min.min(map_min);
        kappa_max = kappa_max.max(map_max);
    }
    let distortion = if lipschitz == 0.0 {
        1.0
    } else {
        (lipschitz * seed.path_diameter() / (1.0 - kappa_max)).exp()
    };
    Ok(ContractionBounds {
        kappa_min,
        kappa_max,
        distortion,
    })
}

/// A finite family of conformal contractions sharing a seed set.
#[derive(Clone, Debug)]
pub struct IfsSystem {
    maps: Vec<ConformalMap>,
    seed: Seed,
    bounds: ContractionBounds,
    affine: Option<Vec<(f64, f64)>>,
    eta: f64,
}

impl IfsSystem {
    /// Validates and builds a system: every map must have the dimension of
    /// the seed, send the seed into itself, be injective and contract
    /// uniformly.
    pub fn new(maps: Vec<ConformalMap>, seed: Seed) -> Result<Self> {
        Self::with_grid(maps, seed, DEFAULT_DERIVATIVE_GRID)
    }

    pub fn with_grid(maps: Vec<ConformalMap>, seed: Seed, grid: usize) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::InvalidSystem("at least one map is required".into()));
        }
        if u32::try_from(maps.len()).is_err() {
            return Err(Error::InvalidSystem("too many maps".into()));
        }
        let dim = seed.ambient_dim();
        if let Some(i) = maps.iter().position(|m| m.ambient_dim() != dim) {
            return Err(Error::InvalidSystem(format!(
                "map {i} has dimension {} but the seed has dimension {dim}",
                maps[i].ambient_dim()
            )));
        }
        if let Seed::Interval(iv) = seed {
            if !(iv.lo.is_finite() && iv.hi.is_finite() && iv.lo < iv.hi) {
                return Err(Error::InvalidSystem("seed interval must be finite and non-degenerate".into()));
            }
        }
        if let Seed::Annulus { r_lo, r_hi } = seed {
            if !(r_lo > 0.0 && r_lo < r_hi && r_hi.is_finite()) {
                return Err(Error::InvalidSystem("annulus needs 0 < r_lo < r_hi".into()));
            }
        }
        let eta = 1e-12 * seed.diameter();
        let seed_enc = seed.enclosure();
        for (i, map) in maps.iter().enumerate() {
            if !map.image(&seed_enc).is_within(&seed_enc, eta) {
                return Err(Error::Containment { map: i });
            }
        }
        if dim == 1 {
            for (i, map) in maps.iter().enumerate() {
                if map.derivative_range(&seed_enc).lo <= 0.0 {
                    return Err(Error::NotInjective { map: i });
                }
            }
        }
        let bounds = contraction_bounds(&maps, &seed, grid)?;
        let affine = maps.iter().map(ConformalMap::as_affine).collect::<Option<Vec<_>>>();
        Ok(IfsSystem {
            maps,
            seed,
            bounds,
            affine,
            eta,
        })
    }

    pub fn maps(&self) -> &[ConformalMap] {
        &self.maps
    }

    /// Alphabet size `m`.
    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn seed(&self) -> &Seed {
        &self.seed
    }

    pub fn ambient_dim(&self) -> usize {
        self.seed.ambient_dim()
    }

    /// Boundary tolerance `η = 10⁻¹² · diam V`.
    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn contraction_bounds(&self) -> ContractionBounds {
        self.bounds
    }

    /// Slopes and offsets when every map is affine.
    pub fn affine_maps(&self) -> Option<&[(f64, f64)]> {
        self.affine.as_deref()
    }

    /// `true` when every `|φ_i'|` is constant.
    pub fn has_constant_derivatives(&self) -> bool {
        self.affine.is_some()
    }

    fn check_symbol(&self, i: Symbol) -> Result<()> {
        if (i as usize) < self.maps.len() {
            Ok(())
        } else {
            Err(Error::SymbolOutOfRange {
                symbol: i,
                alphabet: self.maps.len(),
            })
        }
    }

    fn check_word(&self, w: &Word) -> Result<()> {
        w.iter().try_for_each(|s| self.check_symbol(s))
    }

    fn check_point(&self, x: Point) -> Result<()> {
        if self.seed.contains(x, 1e-9 * self.seed.diameter()) {
            Ok(())
        } else {
            Err(Error::PointOutsideSeed(format!("{x}")))
        }
    }

    /// `φ_i(x)`.
    pub fn apply_map(&self, i: Symbol, x: Point) -> Result<Point> {
        self.check_symbol(i)?;
        self.check_point(x)?;
        Ok(self.maps[i as usize].eval(x))
    }

    /// `φ_{i_1} ∘ … ∘ φ_{i_n}(x)`; the empty word is the identity.
    pub fn apply_word(&self, w: &Word, x: Point) -> Result<Point> {
        self.check_word(w)?;
        self.check_point(x)?;
        Ok(self.apply_word_unchecked(w.symbols(), x))
    }

    pub(crate) fn apply_word_unchecked(&self, w: &[Symbol], x: Point) -> Point {
        w.iter()
            .rev()
            .fold(x, |p, &s| self.maps[s as usize].eval(p))
    }

    /// `|φ_w'(x)|` by the chain rule along the orbit of `x`.
    pub fn word_derivative_modulus(&self, w: &Word, x: Point) -> Result<f64> {
        self.check_word(w)?;
        self.check_point(x)?;
        Ok(self.log_word_derivative_unchecked(w.symbols(), x).exp())
    }

    /// `log|φ_w'(x)|`, summed in log space so long words do not underflow.
    pub(crate) fn log_word_derivative_unchecked(&self, w: &[Symbol], x: Point) -> f64 {
        let mut p = x;
        let mut acc = 0.0;
        for &s in w.iter().rev() {
            let map = &self.maps[s as usize];
            acc += map.derivative_modulus(p).ln();
            p = map.eval(p);
        }
        acc
    }

    /// Outer enclosure of `φ_w(V)`.
    pub fn enclosure(&self, w: &Word) -> Result<Enclosure> {
        self.check_word(w)?;
        Ok(self.enclosure_unchecked(w.symbols()))
    }

    pub(crate) fn enclosure_unchecked(&self, w: &[Symbol]) -> Enclosure {
        self.image_unchecked(w, &self.seed.enclosure())
    }

    /// Outer enclosure of `φ_w(e)`.
    pub(crate) fn image_unchecked(&self, w: &[Symbol], e: &Enclosure) -> Enclosure {
        w.iter()
            .rev()
            .fold(*e, |acc, &s| self.maps[s as usize].image(&acc))
    }

    /// The cover `Λ_depth = ⋃_{|w| = depth} φ_w(V)`, one entry per word in
    /// lexicographic order.
    pub fn limit_set_cover(&self, depth: usize) -> Result<Vec<(Word, Enclosure)>> {
        self.limit_set_cover_capped(depth, DEFAULT_COVER_CAP)
    }

    pub fn limit_set_cover_capped(&self, depth: usize, cap: u128) -> Result<Vec<(Word, Enclosure)>> {
        let m = self.maps.len();
        let requested = (m as u128).checked_pow(depth as u32).unwrap_or(u128::MAX);
        if requested > cap {
            return Err(Error::CapExceeded { requested, cap });
        }
        let mut level = vec![(Word::empty(), self.seed.enclosure())];
        for _ in 0..depth {
            let mut next = Vec::with_capacity(level.len() * m);
            for (i, map) in self.maps.iter().enumerate() {
                for (w, e) in &level {
                    let mut v = Vec::with_capacity(w.len() + 1);
                    v.push(i as Symbol);
                    v.extend(w.iter());
                    next.push((Word::new(v), map.image(e)));
                }
            }
            level = next;
        }
        Ok(level)
    }

    /// Approximates `π(ω)` for any infinite extension `ω` of `w` by
    /// `φ_w(anchor)`, together with an error radius.
    pub fn pi_point(&self, w: &Word) -> Result<(Point, f64)> {
        self.check_word(w)?;
        if w.is_empty() {
            return Err(Error::InvalidArgument("pi_point needs a non-empty word".into()));
        }
        let p = self.apply_word_unchecked(w.symbols(), self.seed.anchor());
        let radius = self.bounds.kappa_max.powi(w.len() as i32) * self.seed.path_diameter();
        Ok((p, radius))
    }

    /// Fixed point of `φ_i`, by iteration from the anchor.
    pub fn fixed_point(&self, i: Symbol) -> Result<Point> {
        self.check_symbol(i)?;
        let map = &self.maps[i as usize];
        let mut p = self.seed.anchor();
        for _ in 0..10_000 {
            let q = map.eval(p);
            let done = (q - p).norm() <= 1e-17 * (1.0 + q.norm());
            p = q;
            if done {
                break;
            }
        }
        Ok(p)
    }

    pub(crate) fn chain(&self) -> Chain<'_> {
        Chain::new(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cantor() -> IfsSystem {
        IfsSystem::new(
            vec![ConformalMap::affine(1.0 / 3.0, 0.0), ConformalMap::affine(1.0 / 3.0, 2.0 / 3.0)],
            Seed::interval(0.0, 1.0),
        )
        .unwrap()
    }

    fn binary() -> IfsSystem {
        IfsSystem::new(
            vec![ConformalMap::affine(0.5, 0.0), ConformalMap::affine(0.5, 0.5)],
            Seed::interval(0.0, 1.0),
        )
        .unwrap()
    }

    fn re(x: f64) -> Point {
        Complex64::new(x, 0.0)
    }

    fn cubic(lambda: f64, epsilon: f64, hi: f64) -> IfsSystem {
        IfsSystem::new(
            [0.0, 1.0, 3.0]
                .iter()
                .map(|j| ConformalMap::cubic(lambda, epsilon, lambda * j))
                .collect(),
            Seed::interval(0.0, hi),
        )
        .unwrap()
    }

    #[test]
    fn apply_map_examples() {
        let s = IfsSystem::new(vec![ConformalMap::affine(1.0 / 3.0, 0.0)], Seed::interval(0.0, 1.0)).unwrap();
        assert!((s.apply_map(0, re(1.0)).unwrap().re - 1.0 / 3.0).abs() < 1e-16);
        let c = cubic(0.25, 0.0, 1.1);
        assert_eq!(c.apply_map(1, re(0.0)).unwrap().re, 0.25);
        assert!(matches!(c.apply_map(3, re(0.0)), Err(Error::SymbolOutOfRange { .. })));
        assert!(matches!(c.apply_map(0, re(2.0)), Err(Error::PointOutsideSeed(_))));
    }

    #[test]
    fn apply_word_examples() {
        let c = cantor();
        let v = c.apply_word(&Word::new(vec![0, 1]), re(0.0)).unwrap().re;
        assert!((v - 2.0 / 9.0).abs() < 1e-15);
        assert_eq!(c.apply_word(&Word::empty(), re(0.3)).unwrap().re, 0.3);
        let b = binary();
        let v = b.apply_word(&Word::new(vec![1, 0, 0]), re(0.0)).unwrap().re;
        assert_eq!(v, 0.5);
    }

    #[test]
    fn derivative_examples() {
        let c = cantor();
        let d = c.word_derivative_modulus(&Word::new(vec![0, 1, 1, 0]), re(0.7)).unwrap();
        assert!((d - 3f64.powi(-4)).abs() < 1e-15);
        let q = cubic(0.25, 0.0, 1.1);
        let d = q.word_derivative_modulus(&Word::new(vec![2, 0, 1]), re(0.5)).unwrap();
        assert!((d - 0.25f64.powi(3)).abs() < 1e-15);
        let q = cubic(0.25, 1e-3, 1.1);
        let d = q.word_derivative_modulus(&Word::new(vec![0]), re(0.5)).unwrap();
        assert!((d - 0.25175).abs() < 1e-14);
    }

    #[test]
    fn enclosure_examples() {
        let c = cantor();
        let e = c.enclosure(&Word::new(vec![0])).unwrap();
        let Enclosure::Line(iv) = e else { panic!() };
        assert!((iv.lo - 0.0).abs() < 1e-15 && (iv.hi - 1.0 / 3.0).abs() < 1e-15);
        assert!(iv.contains(0.0) && iv.contains(1.0 / 3.0));
        let Enclosure::Line(iv) = c.enclosure(&Word::new(vec![1, 1])).unwrap() else { panic!() };
        assert!((iv.lo - 8.0 / 9.0).abs() < 1e-15 && (iv.hi - 1.0).abs() < 1e-15);
        let Enclosure::Line(iv) = binary().enclosure(&Word::new(vec![0, 1])).unwrap() else { panic!() };
        assert!(iv.contains(0.25) && iv.contains(0.5) && iv.width() < 0.25 + 1e-15);
    }

    #[test]
    fn cover_examples() {
        let c = cantor();
        let cover = c.limit_set_cover(1).unwrap();
        assert_eq!(cover.len(), 2);
        let Enclosure::Line(a) = cover[0].1 else { panic!() };
        let Enclosure::Line(b) = cover[1].1 else { panic!() };
        assert!((a.hi - 1.0 / 3.0).abs() < 1e-15 && (b.lo - 2.0 / 3.0).abs() < 1e-15);
        let dup = IfsSystem::new(
            vec![
                ConformalMap::affine(0.5, 0.0),
                ConformalMap::affine(0.5, 0.5),
                ConformalMap::affine(0.5, 0.5),
            ],
            Seed::interval(0.0, 1.0),
        )
        .unwrap();
        let cover = dup.limit_set_cover(1).unwrap();
        assert_eq!(cover[1].1, cover[2].1);
        let zero = c.limit_set_cover(0).unwrap();
        assert_eq!(zero, vec![(Word::empty(), Seed::interval(0.0, 1.0).enclosure())]);
        assert!(matches!(
            c.limit_set_cover_capped(30, 1 << 20),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn pi_point_examples() {
        let c = cantor();
        let (p, r) = c.pi_point(&Word::repeat(0, 20)).unwrap();
        assert!(p.re.abs() <= r && r <= 3f64.powi(-20) * (1.0 + 1e-12));
        let b = binary();
        let w: Word = (0..20).map(|i| if i % 2 == 0 { 1 } else { 0 }).collect();
        let (p, r) = b.pi_point(&w).unwrap();
        assert!((p.re - 2.0 / 3.0).abs() <= r);
        let (p, r) = c.pi_point(&Word::new(vec![1])).unwrap();
        assert!((2.0 / 3.0..=1.0).contains(&p.re) && r <= 1.0 / 3.0 + 1e-15);
    }

    #[test]
    fn contraction_bounds_examples() {
        let b = cantor().contraction_bounds();
        assert!((b.kappa_min - 1.0 / 3.0).abs() < 1e-15 && (b.kappa_max - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(b.distortion, 1.0);
        let b = cubic(0.25, 0.0, 1.1).contraction_bounds();
        assert_eq!((b.kappa_min, b.kappa_max, b.distortion), (0.25, 0.25, 1.0));

        let q = cubic(0.25, 1e-3, 1.1);
        let b = q.contraction_bounds();
        // oracle: the derivative λ + 2εx + 3εx² is increasing on [0, 1.1]
        let exact_max = 0.25 + 2e-3 * 1.1 + 3e-3 * 1.1 * 1.1;
        assert!(b.kappa_min <= 0.25 && b.kappa_min > 0.25 - 1e-12);
        assert!(b.kappa_max >= exact_max && b.kappa_max < exact_max + 1e-12);
        assert!(b.distortion > 1.0 && b.distortion < 1.1);
        // sampled oscillation of log φ' along random words stays below log C
        let x = re(0.0);
        let y = re(1.1);
        for w in Word::all(3, 5) {
            let dx = q.word_derivative_modulus(&w, x).unwrap();
            let dy = q.word_derivative_modulus(&w, y).unwrap();
            assert!(dy / dx <= b.distortion);
        }
    }

    #[test]
    fn rejects_expanding_and_escaping_maps() {
        let err = IfsSystem::new(vec![ConformalMap::affine(1.5, 0.0)], Seed::interval(0.0, 1.0)).unwrap_err();
        assert!(matches!(err, Error::Containment { .. } | Error::NotContracting { .. }));
        let err = IfsSystem::new(vec![ConformalMap::affine(0.5, 0.7)], Seed::interval(0.0, 1.0)).unwrap_err();
        assert_eq!(err, Error::Containment { map: 0 });
        let err = IfsSystem::new(vec![ConformalMap::affine(0.0, 0.5)], Seed::interval(0.0, 1.0)).unwrap_err();
        assert_eq!(err, Error::NotInjective { map: 0 });
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn julia() -> IfsSystem {
            let c = Complex64::new(0.05, 0.0);
            let maps = (0..2)
                .map(|k| {
                    ConformalMap::InverseBranch(InverseBranch::new(2, Complex64::new(1.0, 0.0), c, vec![], k, 1.25))
                })
                .collect();
            IfsSystem::new(maps, Seed::annulus(0.8, 1.25)).unwrap()
        }

        fn systems() -> Vec<IfsSystem> {
            vec![
                cantor(),
                IfsSystem::new(
                    vec![ConformalMap::affine(0.4, 0.0), ConformalMap::affine(-0.3, 0.9)],
                    Seed::interval(0.0, 1.0),
                )
                .unwrap(),
                cubic(0.25, 1e-3, 1.1),
                julia(),
            ]
        }

        fn point_in(sys: &IfsSystem, t: f64, u: f64) -> Point {
            match *sys.seed() {
                Seed::Interval(iv) => re(iv.lo + t * iv.width()),
                Seed::Annulus { r_lo, r_hi } => Complex64::from_polar(r_lo + t * (r_hi - r_lo), TAU * u),
            }
        }

        fn word(sys: &IfsSystem, raw: &[u32]) -> Word {
            raw.iter().map(|s| s % sys.len() as u32).collect()
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(250))]

            #[test]
            fn composition_order(which in 0usize..4, u in prop::collection::vec(0u32..8, 0..7),
                                 v in prop::collection::vec(0u32..8, 0..7), t in 0.0f64..1.0, a in 0.0f64..1.0) {
                let sys = &systems()[which];
                let (u, v) = (word(sys, &u), word(sys, &v));
                let x = point_in(sys, t, a);
                let lhs = sys.apply_word(&u.concat(&v), x).unwrap();
                let rhs = sys.apply_word(&u, sys.apply_word(&v, x).unwrap()).unwrap();
                prop_assert!((lhs - rhs).norm() <= 1e-12);
            }

            #[test]
            fn nesting(which in 0usize..4, u in prop::collection::vec(0u32..8, 0..7),
                       v in prop::collection::vec(0u32..8, 1..7)) {
                let sys = &systems()[which];
                let (u, v) = (word(sys, &u), word(sys, &v));
                let long = sys.enclosure(&u.concat(&v)).unwrap();
                let short = sys.enclosure(&u).unwrap();
                prop_assert!(long.is_within(&short, 1e-10), "{:?} not in {:?}", long, short);
            }

            #[test]
            fn soundness(which in 0usize..4, w in prop::collection::vec(0u32..8, 0..=12),
                         t in 0.0f64..=1.0, a in 0.0f64..1.0) {
                let sys = &systems()[which];
                let w = word(sys, &w);
                let x = point_in(sys, t, a);
                let y = sys.apply_word(&w, x).unwrap();
                prop_assert!(sys.enclosure(&w).unwrap().contains(y, 0.0));
            }

            #[test]
            fn enclosures_shrink(which in 0usize..4, w in prop::collection::vec(0u32..8, 1..=16)) {
                let sys = &systems()[which];
                let w = word(sys, &w);
                let b = sys.contraction_bounds();
                let bound = b.distortion * b.kappa_max.powi(w.len() as i32) * sys.seed().path_diameter();
                let d = sys.enclosure(&w).unwrap().diameter();
                prop_assert!(d <= bound * (1.0 + 1e-6) + 1e-12, "diam {} > {}", d, bound);
            }

            #[test]
            fn chain_rule(which in 0usize..4, u in prop::collection::vec(0u32..8, 0..7),
                          v in prop::collection::vec(0u32..8, 0..7), t in 0.0f64..1.0, a in 0.0f64..1.0) {
                let sys = &systems()[which];
                let (u, v) = (word(sys, &u), word(sys, &v));
                let x = point_in(sys, t, a);
                let whole = sys.word_derivative_modulus(&u.concat(&v), x).unwrap();
                let y = sys.apply_word(&v, x).unwrap();
                let split = sys.word_derivative_modulus(&u, y).unwrap() * sys.word_derivative_modulus(&v, x).unwrap();
                prop_assert!((whole - split).abs() <= 1e-10 * whole);
            }

            #[test]
            fn pi_point_consistency(which in 0usize..4, w in prop::collection::vec(0u32..8, 1..14)) {
                let sys = &systems()[which];
                let w = word(sys, &w);
                let (p, r) = sys.pi_point(&w).unwrap();
                for j in 0..sys.len() as u32 {
                    let mut ext = w.clone();
                    ext.push(j);
                    let (q, _) = sys.pi_point(&ext).unwrap();
                    prop_assert!((q - p).norm() <= r);
                }
            }
        }
    }
}
