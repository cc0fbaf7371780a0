//! Overlap counting: how many `n`-cylinders of the limit set contain a
//! point, with and without a Birkhoff genericity filter, and Monte Carlo
//! estimates of the overlap numbers built on those counts.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ifs::{Chain, Enclosure, IfsSystem, Point, Symbol, Word};
use crate::interval::Interval;
use crate::rng::{stream, Purpose};
use crate::thermo::{BernoulliWeights, GibbsMeasure, LocalPotential};

pub const DEFAULT_COVER_DEPTH: usize = 10;
pub const DEFAULT_BURN_IN: usize = 40;
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;
/// Largest enumeration `brute_force_beta` accepts.
pub const BRUTE_FORCE_CAP: u128 = 10_000_000;

/// Decides `x ∈ φ_w(Λ)` against the depth-`m_cover` cover of the limit set.
///
/// The upper test accepts when `x` is within `η` of the image of the cover.
/// The lower test accepts when `x` is inside the image of the cover shrunk by
/// `η`, or within `η` of the image of a fixed point of one of the maps,
/// which lies in `Λ`.
pub struct MembershipTester<'a> {
    sys: &'a IfsSystem,
    cover_depth: usize,
    /// Sorted disjoint pieces of the cover, on the line.
    merged: Vec<Interval>,
    fixed_points: Vec<Point>,
    eta: f64,
    node_budget: u64,
}

/// Bracket on a count, with a flag when the search ran out of budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountBracket {
    pub lower: u128,
    pub upper: u128,
    pub truncated: bool,
}

/// Genericity filter: keep words `η` with `|S_nψ(η)/n - ∫ψ dμ| < τ` for each
/// `τ` in `taus`.
struct Genericity<'p> {
    psi: &'p LocalPotential,
    mean: f64,
    taus: Vec<f64>,
    tau_max: f64,
    slack: f64,
}

impl<'a> MembershipTester<'a> {
    pub fn new(sys: &'a IfsSystem, cover_depth: usize) -> Result<Self> {
        let merged = if sys.ambient_dim() == 1 {
            merged_cover(sys, cover_depth)
        } else {
            Vec::new()
        };
        let fixed_points = (0..sys.len() as Symbol)
            .map(|i| sys.fixed_point(i))
            .collect::<Result<_>>()?;
        Ok(MembershipTester {
            sys,
            cover_depth,
            merged,
            fixed_points,
            eta: sys.eta(),
            node_budget: DEFAULT_NODE_BUDGET,
        })
    }

    pub fn with_node_budget(mut self, budget: u64) -> Self {
        self.node_budget = budget;
        self
    }

    pub fn system(&self) -> &IfsSystem {
        self.sys
    }

    pub fn cover_depth(&self) -> usize {
        self.cover_depth
    }

    fn check_point(&self, x: Point) -> Result<()> {
        let seed = self.sys.seed();
        if seed.contains(x, 1e-9 * seed.diameter()) {
            Ok(())
        } else {
            Err(Error::PointOutsideSeed(format!("{x}")))
        }
    }

    /// Bracket on `β_n(x) = #{w ∈ I^n : x ∈ φ_{w_1} ∘ … ∘ φ_{w_n}(Λ)}` by a
    /// pruned depth-first search over prefixes.
    pub fn beta_n(&self, x: Point, n: usize) -> Result<CountBracket> {
        self.check_point(x)?;
        if n == 0 {
            return Err(Error::InvalidArgument("word length must be at least 1".into()));
        }
        Ok(self.search(x, n, None)[0])
    }

    /// `β_n(x)` by testing every word of length `n` against the upper test,
    /// without pruning.
    pub fn brute_force_beta(&self, x: Point, n: usize) -> Result<u128> {
        self.check_point(x)?;
        let m = self.sys.len() as u128;
        let requested = m.checked_pow(n as u32).unwrap_or(u128::MAX);
        if requested > BRUTE_FORCE_CAP {
            return Err(Error::CapExceeded {
                requested,
                cap: BRUTE_FORCE_CAP,
            });
        }
        let mut count = 0;
        for w in Word::all(self.sys.len(), n) {
            let mut chain = self.sys.chain();
            for s in w.iter() {
                chain.push(s);
            }
            if self.leaf_test(&chain, x).0 {
                count += 1;
            }
        }
        Ok(count)
    }

    /// Bracket on `b_n`: the number of `n`-words `η` with
    /// `φ_{ω_n…ω_1}(x) ∈ φ_{η_n…η_1}(Λ)` whose Birkhoff average of the
    /// measure's potential is within `τ` of its mean.
    pub fn generic_count_bn(
        &self,
        mu: &GibbsMeasure,
        omega: &Word,
        x: Point,
        n: usize,
        tau: f64,
    ) -> Result<CountBracket> {
        if omega.len() < n {
            return Err(Error::InvalidArgument("ω must have at least n symbols".into()));
        }
        if !(tau > 0.0) {
            return Err(Error::InvalidArgument("τ must be positive".into()));
        }
        let step: Vec<Symbol> = omega.symbols()[..n].iter().rev().copied().collect();
        let y = self.sys.apply_word(&Word::new(step), x)?;
        Ok(self.generic_counts(mu, y, n, &[tau])[0])
    }

    /// `b_n` at an already iterated point `y`, one bracket per `τ`.
    fn generic_counts(&self, mu: &GibbsMeasure, y: Point, n: usize, taus: &[f64]) -> Vec<CountBracket> {
        let psi = mu.potential();
        let mean = mu.integral(psi);
        let range = psi.max() - psi.min();
        let filter = Genericity {
            psi,
            mean,
            taus: taus.to_vec(),
            tau_max: taus.iter().copied().fold(0.0, f64::max),
            slack: 1e-12 * (mean.abs() + range + 1.0),
        };
        self.search(y, n, Some(&filter))
    }

    /// Pruned depth-first search over composition prefixes `u_1 … u_d`,
    /// counting leaves at depth `n` that pass the membership tests (and the
    /// genericity filter of `η = reverse(u)` when given).
    fn search(&self, x: Point, n: usize, filter: Option<&Genericity>) -> Vec<CountBracket> {
        let classes = filter.map_or(1, |f| f.taus.len());
        let mut out = vec![
            CountBracket {
                lower: 0,
                upper: 0,
                truncated: false,
            };
            classes
        ];
        let m = self.sys.len();
        let mut chain = self.sys.chain();
        let mut next: Vec<usize> = vec![0];
        let mut sums: Vec<f64> = vec![0.0];
        let mut nodes: u64 = 0;
        let mut window = filter.map(|f| vec![0 as Symbol; f.psi.locality()]);
        loop {
            let d = chain.depth();
            let s = next[d];
            if s == m {
                if d == 0 {
                    break;
                }
                chain.pop();
                next.pop();
                sums.pop();
                continue;
            }
            if nodes >= self.node_budget {
                // every leaf below an unexplored branch may count
                let mut rest: u128 = 0;
                for (level, &tried) in next.iter().enumerate() {
                    let leaves = (m as u128).saturating_pow((n - level - 1) as u32);
                    rest = rest.saturating_add(((m - tried) as u128).saturating_mul(leaves));
                }
                for c in out.iter_mut() {
                    c.upper = c.upper.saturating_add(rest);
                    c.truncated = true;
                }
                break;
            }
            next[d] += 1;
            nodes += 1;
            chain.push(s as Symbol);

            let mut sum = 0.0;
            if let (Some(f), Some(win)) = (filter, window.as_mut()) {
                // window of η starting at u_{d+1}, padded with zeros past η_n
                let syms = chain.symbols();
                for (i, slot) in win.iter_mut().enumerate() {
                    *slot = if i <= d { syms[d - i] } else { 0 };
                }
                sum = sums[d] + f.psi.value(win);
                let remaining = (n - d - 1) as f64;
                let lo = (sum + remaining * f.psi.min()) / n as f64;
                let hi = (sum + remaining * f.psi.max()) / n as f64;
                if hi <= f.mean - f.tau_max - f.slack || lo >= f.mean + f.tau_max + f.slack {
                    chain.pop();
                    continue;
                }
            }

            if !chain.seed_image().contains(x, self.eta) {
                chain.pop();
                continue;
            }
            if d + 1 == n {
                let (upper, lower) = self.leaf_test(&chain, x);
                if upper {
                    match filter {
                        None => {
                            out[0].upper += 1;
                            out[0].lower += u128::from(lower);
                        }
                        Some(f) => {
                            let avg = sum / n as f64;
                            for (c, &tau) in out.iter_mut().zip(&f.taus) {
                                if (avg - f.mean).abs() < tau {
                                    c.upper += 1;
                                    c.lower += u128::from(lower);
                                }
                            }
                        }
                    }
                }
                chain.pop();
                continue;
            }
            next.push(0);
            sums.push(sum);
        }
        out
    }

    /// `(upper, lower)` membership of `x` in the image of the cover under
    /// the chain's composition.
    fn leaf_test(&self, chain: &Chain, x: Point) -> (bool, bool) {
        let (upper, lower) = if self.sys.ambient_dim() == 1 {
            self.leaf_test_line(chain, x.re)
        } else {
            self.leaf_test_plane(chain, x)
        };
        if !upper || lower {
            return (upper, lower);
        }
        let certified = self
            .fixed_points
            .iter()
            .any(|&p| (chain.apply_point(p) - x).norm() <= self.eta);
        (upper, certified)
    }

    fn leaf_test_line(&self, chain: &Chain, x: f64) -> (bool, bool) {
        let len = self.merged.len();
        let reversed = chain.orientation() < 0;
        let image = |pos: usize| -> Interval {
            let i = if reversed { len - 1 - pos } else { pos };
            match chain.image(&Enclosure::Line(self.merged[i])) {
                Enclosure::Line(iv) => iv,
                Enclosure::Polar { .. } => unreachable!(),
            }
        };
        // images are sorted along the line; find the first reaching x
        let (mut lo, mut hi) = (0, len);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if image(mid).hi < x - self.eta {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        let mut upper = false;
        let mut lower = false;
        for pos in lo.saturating_sub(1)..(lo + 2).min(len) {
            let iv = image(pos);
            upper |= iv.contains_with_margin(x, self.eta);
            lower |= iv.contains_with_margin(x, -self.eta);
        }
        (upper, lower)
    }

    /// Depth-first search for a cover word `v` with `x ∈ φ_w(φ_v(V))`.
    fn leaf_test_plane(&self, chain: &Chain, x: Point) -> (bool, bool) {
        let m = self.sys.len();
        let depth = self.cover_depth;
        if depth == 0 {
            let e = chain.seed_image();
            return (e.contains(x, self.eta), e.contains(x, -self.eta));
        }
        let seed = self.sys.seed().enclosure();
        let mut v: Vec<Symbol> = Vec::with_capacity(depth);
        let mut next: Vec<usize> = vec![0];
        let mut upper = false;
        loop {
            let d = v.len();
            if next[d] == m {
                if d == 0 {
                    break;
                }
                v.pop();
                next.pop();
                continue;
            }
            let s = next[d];
            next[d] += 1;
            v.push(s as Symbol);
            let e = chain.image(&self.sys.image_unchecked(&v, &seed));
            if !e.contains(x, self.eta) {
                v.pop();
                continue;
            }
            if d + 1 == depth {
                if e.contains(x, -self.eta) {
                    return (true, true);
                }
                upper = true;
                v.pop();
                continue;
            }
            next.push(0);
        }
        (upper, false)
    }
}

/// The depth-`depth` cover of the limit set on the line as sorted disjoint
/// intervals. Touching or overlapping pieces are merged level by level: the
/// image of a merged piece is the union of the images of its parts.
fn merged_cover(sys: &IfsSystem, depth: usize) -> Vec<Interval> {
    let Enclosure::Line(v) = sys.seed().enclosure() else {
        unreachable!()
    };
    let mut level = vec![v];
    for _ in 0..depth {
        let mut next: Vec<Interval> = Vec::with_capacity(level.len() * sys.len());
        for map in sys.maps() {
            for piece in &level {
                if let Enclosure::Line(iv) = map.image(&Enclosure::Line(*piece)) {
                    next.push(iv);
                }
            }
        }
        next.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        let mut merged: Vec<Interval> = Vec::with_capacity(next.len());
        for iv in next {
            match merged.last_mut() {
                Some(last) if iv.lo <= last.hi => last.hi = last.hi.max(iv.hi),
                _ => merged.push(iv),
            }
        }
        level = merged;
    }
    level
}

/// Parameters of the Monte Carlo overlap estimators.
#[derive(Clone, Debug, PartialEq)]
pub struct OverlapSettings {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub cover_depth: usize,
    pub burn_in: usize,
    /// Genericity tolerance; `None` picks `0.1·(max ψ - min ψ)`.
    pub tau: Option<f64>,
    pub node_budget: u64,
}

impl OverlapSettings {
    pub fn new(n: usize, samples: usize, seed: u64) -> Self {
        OverlapSettings {
            n,
            samples,
            seed,
            cover_depth: DEFAULT_COVER_DEPTH,
            burn_in: DEFAULT_BURN_IN,
            tau: None,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.samples == 0 {
            return Err(Error::InvalidArgument("n and samples must be at least 1".into()));
        }
        if let Some(t) = self.tau {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::InvalidArgument("τ must be positive".into()));
            }
        }
        Ok(())
    }
}

/// Default genericity tolerance for a potential.
pub fn default_tau(psi: &LocalPotential) -> f64 {
    (0.1 * (psi.max() - psi.min())).max(1e-6)
}

/// Estimate at one genericity tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct TauSensitivity {
    pub tau: f64,
    pub mean: f64,
    pub std_err: f64,
}

/// Monte Carlo estimate of a log overlap number.
#[derive(Clone, Debug, PartialEq)]
pub struct OverlapEstimate {
    pub n: usize,
    /// Genericity tolerance; 0 for the topological overlap number.
    pub tau: f64,
    pub samples: usize,
    /// `(1/n) log` of each sample's upper count.
    pub values: Vec<f64>,
    pub mean: f64,
    pub std_err: f64,
    /// `max(0, mean of lower-count values - 3 se)`.
    pub lower: f64,
    /// `mean of upper-count values + 3 se`.
    pub upper: f64,
    /// Samples whose search hit the node budget.
    pub truncated: usize,
    /// Samples whose upper count was 0 (scored as count 1).
    pub zero_counts: usize,
    /// Estimates at `τ/2` and `2τ` (empty for the topological number).
    pub sensitivity: Vec<TauSensitivity>,
    /// `τ` is below the Birkhoff tail oscillation per symbol, so the filter
    /// is decided partly by the padding convention.
    pub tau_warning: bool,
}

fn log_count(c: u128, n: usize) -> f64 {
    (c.max(1) as f64).ln() / n as f64
}

pub(crate) fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let k = values.len() as f64;
    let mean = values.iter().sum::<f64>() / k;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, (var / k).sqrt())
}

struct SampleCounts {
    brackets: Vec<CountBracket>,
}

fn assemble(settings: &OverlapSettings, taus: &[f64], counts: &[SampleCounts], tau_warning: bool) -> OverlapEstimate {
    let n = settings.n;
    // the headline tolerance is the middle class when three are tracked
    let main = if taus.len() == 3 { 1 } else { 0 };
    let class_values = |class: usize, upper: bool| -> Vec<f64> {
        counts
            .iter()
            .map(|c| {
                let b = c.brackets[class];
                log_count(if upper { b.upper } else { b.lower }, n)
            })
            .collect()
    };
    let values = class_values(main, true);
    let (mean, std_err) = mean_and_se(&values);
    let (mean_lower, _) = mean_and_se(&class_values(main, false));
    let truncated = counts.iter().filter(|c| c.brackets.iter().any(|b| b.truncated)).count();
    let zero_counts = counts.iter().filter(|c| c.brackets[main].upper == 0).count();
    let sensitivity = if taus.len() == 3 {
        [0, 2]
            .iter()
            .map(|&class| {
                let (m, se) = mean_and_se(&class_values(class, true));
                TauSensitivity {
                    tau: taus[class],
                    mean: m,
                    std_err: se,
                }
            })
            .collect()
    } else {
        Vec::new()
    };
    OverlapEstimate {
        n,
        tau: if taus.is_empty() { 0.0 } else { taus[main] },
        samples: settings.samples,
        values,
        mean,
        std_err,
        lower: (mean_lower - 3.0 * std_err).max(0.0),
        upper: mean + 3.0 * std_err,
        truncated,
        zero_counts,
        sensitivity,
        tau_warning,
    }
}

/// `log o(S) ≈ (1/n) E[log β_n(πω)]` with `ω` uniform.
pub fn topological_overlap(sys: &IfsSystem, settings: &OverlapSettings) -> Result<OverlapEstimate> {
    settings.validate()?;
    let tester = MembershipTester::new(sys, settings.cover_depth)?.with_node_budget(settings.node_budget);
    let uniform = GibbsMeasure::bernoulli(&BernoulliWeights::uniform(sys.len()));
    let n = settings.n;
    let counts: Vec<SampleCounts> = (0..settings.samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(settings.seed, Purpose::TopologicalOverlap, i);
            let w = uniform.sample_word(n + settings.burn_in, &mut rng);
            let x = sys.apply_word_unchecked(w.symbols(), sys.seed().anchor());
            SampleCounts {
                brackets: tester.search(x, n, None),
            }
        })
        .collect();
    Ok(assemble(settings, &[], &counts, false))
}

/// `log o(S, μ) ≈ (1/n) E[log b_n((ω, x), τ, μ)]`, sampling `(ω, x)` by
/// running the measure's chain for `burn_in + n` steps and composing the
/// maps in reverse from the anchor.
pub fn measure_overlap(sys: &IfsSystem, mu: &GibbsMeasure, settings: &OverlapSettings) -> Result<OverlapEstimate> {
    settings.validate()?;
    if mu.alphabet() != sys.len() {
        return Err(Error::InvalidArgument(format!(
            "measure has {} symbols, system has {}",
            mu.alphabet(),
            sys.len()
        )));
    }
    let tester = MembershipTester::new(sys, settings.cover_depth)?.with_node_budget(settings.node_budget);
    let psi = mu.potential();
    let tau = settings.tau.unwrap_or_else(|| default_tau(psi));
    let taus = [0.5 * tau, tau, 2.0 * tau];
    let n = settings.n;
    let tau_warning = tau < psi.oscillation_bound() / n as f64;
    let counts: Vec<SampleCounts> = (0..settings.samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(settings.seed, Purpose::MeasureOverlap, i);
            let s = mu.sample_word(settings.burn_in + n, &mut rng);
            let reversed: Vec<Symbol> = s.symbols().iter().rev().copied().collect();
            let y = sys.apply_word_unchecked(&reversed, sys.seed().anchor());
            SampleCounts {
                brackets: tester.generic_counts(mu, y, n, &taus),
            }
        })
        .collect();
    Ok(assemble(settings, &taus, &counts, tau_warning))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::{ConformalMap, Seed};
    use num_complex::Complex64;
    use proptest::prelude::*;
    use rand::Rng;
    use std::f64::consts::LN_2;

    fn affine(maps: &[(f64, f64)]) -> IfsSystem {
        IfsSystem::new(
            maps.iter().map(|&(a, b)| ConformalMap::affine(a, b)).collect(),
            Seed::interval(0.0, 1.0),
        )
        .unwrap()
    }

    fn cantor() -> IfsSystem {
        affine(&[(1.0 / 3.0, 0.0), (1.0 / 3.0, 2.0 / 3.0)])
    }

    fn dupbin() -> IfsSystem {
        affine(&[(0.5, 0.0), (0.5, 0.5), (0.5, 0.5)])
    }

    fn coincident() -> IfsSystem {
        affine(&[(0.5, 0.0), (0.5, 0.0)])
    }

    fn cubic() -> IfsSystem {
        IfsSystem::new(
            [0.0, 1.0, 3.0]
                .iter()
                .map(|j| ConformalMap::cubic(0.25, 1e-3, 0.25 * j))
                .collect(),
            Seed::interval(0.0, 1.1),
        )
        .unwrap()
    }

    fn re(x: f64) -> Point {
        Complex64::new(x, 0.0)
    }

    fn exact(c: u128) -> CountBracket {
        CountBracket {
            lower: c,
            upper: c,
            truncated: false,
        }
    }

    #[test]
    fn beta_examples() {
        let sys = cantor();
        let t = MembershipTester::new(&sys, 10).unwrap();
        for n in 1..10 {
            assert_eq!(t.beta_n(re(0.0), n).unwrap(), exact(1));
        }
        let sys = coincident();
        let t = MembershipTester::new(&sys, 10).unwrap();
        assert_eq!(t.beta_n(re(0.0), 5).unwrap(), exact(32));
        assert_eq!(t.brute_force_beta(re(0.0), 8).unwrap(), 256);
        let sys = dupbin();
        let t = MembershipTester::new(&sys, 10).unwrap();
        // 0.10101₂: binary prefix 1, 0, 1 away from every dyadic endpoint
        assert_eq!(t.beta_n(re(0.65625), 3).unwrap(), exact(4));
        // 0.101₂ itself is the shared endpoint of two level-3 images
        assert_eq!(t.beta_n(re(0.625), 3).unwrap().upper, 6);
    }

    #[test]
    fn node_budget_truncates_with_sound_upper() {
        let sys = coincident();
        let t = MembershipTester::new(&sys, 6).unwrap().with_node_budget(100);
        let b = t.beta_n(re(0.0), 12).unwrap();
        assert!(b.truncated);
        assert!(b.upper >= 4096 && b.lower <= 4096);
    }

    #[test]
    fn julia_point_has_a_preimage_word() {
        let maps = (0..2)
            .map(|k| {
                ConformalMap::InverseBranch(crate::ifs::InverseBranch::new(
                    2,
                    Complex64::new(1.0, 0.0),
                    Complex64::new(0.05, 0.0),
                    vec![],
                    k,
                    1.25,
                ))
            })
            .collect();
        let sys = IfsSystem::new(maps, Seed::annulus(0.8, 1.25)).unwrap();
        let t = MembershipTester::new(&sys, 6).unwrap();
        for i in 0..20 {
            let mut rng = stream(4, Purpose::Test, i);
            let w: Vec<Symbol> = (0..40).map(|_| rng.gen_range(0..2)).collect();
            let x = sys.apply_word(&Word::new(w), sys.seed().anchor()).unwrap();
            let b = t.beta_n(x, 8).unwrap();
            assert!(b.upper >= 1 && b.lower <= b.upper);
        }
    }

    fn random_points(sys: &IfsSystem, seed: u64, count: u64) -> Vec<Point> {
        let uniform = GibbsMeasure::bernoulli(&BernoulliWeights::uniform(sys.len()));
        (0..count)
            .map(|i| {
                let mut rng = stream(seed, Purpose::Test, i);
                if i % 2 == 0 {
                    let w = uniform.sample_word(30, &mut rng);
                    sys.pi_point(&w).unwrap().0
                } else {
                    let Enclosure::Line(v) = sys.seed().enclosure() else { unreachable!() };
                    re(rng.gen_range(v.lo..=v.hi))
                }
            })
            .collect()
    }

    #[test]
    fn pruned_matches_brute_force() {
        for sys in [cantor(), dupbin(), coincident(), cubic()] {
            let t = MembershipTester::new(&sys, 8).unwrap();
            for x in random_points(&sys, 1, 20) {
                for n in 1..=6 {
                    let pruned = t.beta_n(x, n).unwrap();
                    assert_eq!(pruned.upper, t.brute_force_beta(x, n).unwrap());
                    assert!(pruned.lower <= pruned.upper);
                }
            }
        }
    }

    #[test]
    fn upper_count_shrinks_with_cover_depth() {
        for sys in [cantor(), dupbin(), cubic()] {
            let testers: Vec<_> = [4, 8, 12].iter().map(|&d| MembershipTester::new(&sys, d).unwrap()).collect();
            for x in random_points(&sys, 2, 30) {
                let counts: Vec<u128> = testers.iter().map(|t| t.beta_n(x, 6).unwrap().upper).collect();
                assert!(counts[0] >= counts[1] && counts[1] >= counts[2], "{counts:?}");
            }
        }
    }

    /// Filtered enumeration of all `η` without pruning.
    fn brute_force_bn(t: &MembershipTester, mu: &GibbsMeasure, y: Point, n: usize, tau: f64) -> u128 {
        let psi = mu.potential();
        let mean = mu.integral(psi);
        let sys = t.system();
        let mut count = 0;
        for eta in Word::all(sys.len(), n) {
            let (s, _) = crate::thermo::birkhoff_sum(psi, eta.symbols());
            if (s / n as f64 - mean).abs() >= tau {
                continue;
            }
            let mut chain = sys.chain();
            for sym in eta.symbols().iter().rev() {
                chain.push(*sym);
            }
            if t.leaf_test(&chain, y).0 {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn generic_count_examples() {
        let sys = dupbin();
        let t = MembershipTester::new(&sys, 10).unwrap();
        let uniform = GibbsMeasure::bernoulli(&BernoulliWeights::uniform(3));
        let omega = Word::new(vec![1, 0, 2, 2, 0, 1, 1, 0]);
        let x = re(0.3);
        let b = t.generic_count_bn(&uniform, &omega, x, 8, 0.05).unwrap();
        let y = sys.apply_word(&omega.reversed(), x).unwrap();
        assert_eq!(b.upper, t.beta_n(y, 8).unwrap().upper);

        let point_mass = GibbsMeasure::bernoulli(&BernoulliWeights::new(vec![1.0, 0.0, 0.0]).unwrap());
        for i in 0..10 {
            let mut rng = stream(6, Purpose::Test, i);
            let w: Vec<Symbol> = (0..8).map(|_| rng.gen_range(0..3)).collect();
            let b = t.generic_count_bn(&point_mass, &Word::new(w), re(rng.gen_range(0.0..1.0)), 8, 0.01).unwrap();
            assert!(b.upper <= 1);
        }

        let p = BernoulliWeights::new(vec![0.5, 0.25, 0.25]).unwrap();
        let mu = GibbsMeasure::bernoulli(&p);
        for i in 0..20 {
            let mut rng = stream(7, Purpose::Test, i);
            let omega = mu.sample_word(8, &mut rng);
            let x = re(rng.gen_range(0.0..1.0));
            let b = t.generic_count_bn(&mu, &omega, x, 8, 0.1).unwrap();
            let y = sys.apply_word(&omega.reversed(), x).unwrap();
            assert_eq!(b.upper, brute_force_bn(&t, &mu, y, 8, 0.1));
            assert!(b.upper <= t.beta_n(y, 8).unwrap().upper);
        }
    }

    #[test]
    fn generic_count_with_memory_matches_brute_force() {
        let sys = dupbin();
        let t = MembershipTester::new(&sys, 8).unwrap();
        let mut rng = stream(8, Purpose::Test, 0);
        let table = (0..9).map(|_| rng.gen_range(-1.5..0.0)).collect();
        let psi = LocalPotential::new(3, 2, table).unwrap();
        let mu = GibbsMeasure::equilibrium(&psi).unwrap();
        for i in 0..20 {
            let mut rng = stream(9, Purpose::Test, i);
            let omega = mu.sample_word(7, &mut rng);
            let x = re(rng.gen_range(0.0..1.0));
            let y = sys.apply_word(&omega.reversed(), x).unwrap();
            for tau in [0.05, 0.2] {
                let b = t.generic_count_bn(&mu, &omega, x, 7, tau).unwrap();
                assert_eq!(b.upper, brute_force_bn(&t, &mu, y, 7, tau));
            }
        }
    }

    #[test]
    fn topological_examples() {
        let sys = coincident();
        let est = topological_overlap(&sys, &OverlapSettings::new(9, 50, 1)).unwrap();
        assert!(est.values.iter().all(|&v| (v - LN_2).abs() < 1e-15));
        assert!((est.mean - LN_2).abs() < 1e-15);

        let sys = cantor();
        let est = topological_overlap(&sys, &OverlapSettings::new(6, 300, 2)).unwrap();
        assert!(est.mean.abs() < 0.02);
        // brute-force check of the same samples at n = 6
        let t = MembershipTester::new(&sys, DEFAULT_COVER_DEPTH).unwrap();
        let uniform = GibbsMeasure::bernoulli(&BernoulliWeights::uniform(2));
        for i in 0..50 {
            let mut rng = stream(2, Purpose::TopologicalOverlap, i);
            let w = uniform.sample_word(6 + DEFAULT_BURN_IN, &mut rng);
            let x = sys.apply_word(&w, sys.seed().anchor()).unwrap();
            let v = log_count(t.brute_force_beta(x, 6).unwrap(), 6);
            assert_eq!(v, est.values[i as usize]);
        }
    }

    #[test]
    fn measure_overlap_examples() {
        let sys = coincident();
        let mu = GibbsMeasure::bernoulli(&BernoulliWeights::uniform(2));
        let est = measure_overlap(&sys, &mu, &OverlapSettings::new(8, 40, 3)).unwrap();
        assert!((est.mean - LN_2).abs() < 1e-15);

        let sys = cantor();
        let mu = GibbsMeasure::bernoulli(&BernoulliWeights::new(vec![0.3, 0.7]).unwrap());
        let est = measure_overlap(&sys, &mu, &OverlapSettings::new(12, 200, 4)).unwrap();
        assert!(est.mean.abs() < 0.03);
        assert!(est.lower <= est.mean && est.mean <= est.upper);
        assert_eq!(est.sensitivity.len(), 2);
    }

    #[test]
    fn estimates_are_deterministic() {
        let sys = dupbin();
        let mu = GibbsMeasure::bernoulli(&BernoulliWeights::uniform(3));
        let s = OverlapSettings::new(8, 100, 42);
        assert_eq!(measure_overlap(&sys, &mu, &s).unwrap(), measure_overlap(&sys, &mu, &s).unwrap());
        assert_eq!(topological_overlap(&sys, &s).unwrap(), topological_overlap(&sys, &s).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn bn_never_exceeds_beta(seed in 0u64..10_000, which in 0usize..3) {
            let sys = [cantor(), dupbin(), cubic()][which].clone();
            let t = MembershipTester::new(&sys, 8).unwrap();
            let mu = GibbsMeasure::bernoulli(&BernoulliWeights::uniform(sys.len()));
            let mut rng = stream(seed, Purpose::Test, 0);
            let omega = mu.sample_word(7, &mut rng);
            let x = sys.pi_point(&mu.sample_word(30, &mut rng)).unwrap().0;
            let b = t.generic_count_bn(&mu, &omega, x, 7, 0.01).unwrap();
            let y = sys.apply_word(&omega.reversed(), x).unwrap();
            let beta = t.beta_n(y, 7).unwrap();
            prop_assert!(b.upper <= beta.upper && b.lower <= b.upper);
        }
    }
}
