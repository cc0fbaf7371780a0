//! Dimension of projected Gibbs measures: the entropy/overlap/Lyapunov
//! formula, lower bounds from partitions of `q`-words, detection of
//! dimension drop, and an empirical pointwise-dimension estimate.

use std::f64::consts::LN_2;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ifs::{IfsSystem, Point, Symbol, Word};
use crate::overlap::{mean_and_se, measure_overlap, OverlapEstimate, OverlapSettings};
use crate::rng::{stream, Purpose};
use crate::thermo::{BernoulliWeights, GibbsMeasure};

/// Negative values of `h - log o` down to this size are rounding noise.
pub const HD_SLACK: f64 = 1e-12;
pub const DEFAULT_LYAPUNOV_N: usize = 200;
pub const DEFAULT_POINTS: usize = 10_000;
pub const DEFAULT_PIVOTS: usize = 400;
/// Word length used to place sample points on the limit set.
pub const DEFAULT_POINT_DEPTH: usize = 40;
/// A radius is usable when pivots see at least this many points on average.
pub const DEFAULT_MIN_COUNT: usize = 20;
pub const MIN_LADDER: usize = 4;
/// Largest number of `q`-words a partition may enumerate.
pub const PARTITION_CAP: u128 = 1 << 13;

/// `HD = (h - log o)/|χ|`.
pub fn hd_formula(h: f64, log_o: f64, chi: f64) -> Result<f64> {
    if !(chi < 0.0) || !(h >= 0.0) || !(log_o >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "hd_formula needs h ≥ 0, log o ≥ 0, χ < 0 (got {h}, {log_o}, {chi})"
        )));
    }
    let num = h - log_o;
    if num < -HD_SLACK {
        return Err(Error::InconsistentDimension { h, log_o });
    }
    Ok(num.max(0.0) / -chi)
}

/// Monte Carlo Lyapunov exponent `χ(μ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LyapunovEstimate {
    pub n: usize,
    pub samples: usize,
    /// Mean of `(1/n) log|φ_w'(anchor)|` over sampled words.
    pub mean: f64,
    pub std_err: f64,
    /// `Σ μ[a] log|a_a|` for affine systems.
    pub exact: Option<f64>,
    /// `log C / n`: the largest shift of any sample caused by the choice of
    /// base point.
    pub bias_bound: f64,
}

impl LyapunovEstimate {
    /// The exact value when known, the Monte Carlo mean otherwise.
    pub fn value(&self) -> f64 {
        self.exact.unwrap_or(self.mean)
    }

    /// Standard error of [`value`](Self::value).
    pub fn error(&self) -> f64 {
        if self.exact.is_some() {
            0.0
        } else {
            self.std_err
        }
    }
}

/// `χ(μ) = ∫ log|φ'_{ω_1}(π σω)| dμ`, estimated from `samples` words of
/// length `n`.
pub fn lyapunov(sys: &IfsSystem, mu: &GibbsMeasure, n: usize, samples: usize, seed: u64) -> Result<LyapunovEstimate> {
    check_alphabet(sys, mu)?;
    if n == 0 || samples == 0 {
        return Err(Error::InvalidArgument("n and samples must be at least 1".into()));
    }
    let anchor = sys.seed().anchor();
    let values: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, Purpose::Lyapunov, i);
            let w = mu.sample_word(n, &mut rng);
            sys.log_word_derivative_unchecked(w.symbols(), anchor) / n as f64
        })
        .collect();
    let (mean, std_err) = mean_and_se(&values);
    let exact = sys.affine_maps().map(|maps| {
        mu.symbol_marginals()
            .iter()
            .zip(maps)
            .filter(|(q, _)| **q > 0.0)
            .map(|(q, (a, _))| q * a.abs().ln())
            .sum()
    });
    Ok(LyapunovEstimate {
        n,
        samples,
        mean,
        std_err,
        exact,
        bias_bound: sys.contraction_bounds().distortion.ln() / n as f64,
    })
}

/// A partition of the `q`-words into groups whose images are pairwise
/// separated across groups.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionScheme {
    m: usize,
    q: usize,
    groups: Vec<Vec<Word>>,
}

impl PartitionScheme {
    /// Checks that the groups are non-empty, disjoint and cover all `q`-words
    /// over `m` symbols.
    pub fn new(m: usize, q: usize, groups: Vec<Vec<Word>>) -> Result<Self> {
        if m == 0 || q == 0 {
            return Err(Error::InvalidPartition("m and q must be at least 1".into()));
        }
        let total = word_count(m, q)?;
        let mut owner = vec![usize::MAX; total];
        for (g, group) in groups.iter().enumerate() {
            if group.is_empty() {
                return Err(Error::InvalidPartition(format!("group {g} is empty")));
            }
            for w in group {
                if w.len() != q || w.iter().any(|s| s as usize >= m) {
                    return Err(Error::InvalidPartition(format!("{w:?} is not a {q}-word over {m} symbols")));
                }
                let i = word_index(m, w.symbols());
                if owner[i] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("{w:?} appears twice")));
                }
                owner[i] = g;
            }
        }
        if let Some(i) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::InvalidPartition(format!(
                "{:?} belongs to no group",
                index_word(m, q, i)
            )));
        }
        Ok(PartitionScheme { m, q, groups })
    }

    /// A scheme on single symbols (`q = 1`).
    pub fn from_symbols(m: usize, groups: Vec<Vec<Symbol>>) -> Result<Self> {
        let groups = groups
            .into_iter()
            .map(|g| g.into_iter().map(|s| Word::new(vec![s])).collect())
            .collect();
        Self::new(m, 1, groups)
    }

    pub fn alphabet(&self) -> usize {
        self.m
    }

    pub fn block_length(&self) -> usize {
        self.q
    }

    pub fn groups(&self) -> &[Vec<Word>] {
        &self.groups
    }

    /// `m_i = |G_i|`.
    pub fn cardinalities(&self) -> Vec<usize> {
        self.groups.iter().map(Vec::len).collect()
    }
}

fn word_count(m: usize, q: usize) -> Result<usize> {
    let total = (m as u128).checked_pow(q as u32).unwrap_or(u128::MAX);
    if total > PARTITION_CAP {
        return Err(Error::CapExceeded {
            requested: total,
            cap: PARTITION_CAP,
        });
    }
    Ok(total as usize)
}

fn word_index(m: usize, w: &[Symbol]) -> usize {
    w.iter().fold(0, |acc, &s| acc * m + s as usize)
}

fn index_word(m: usize, q: usize, mut i: usize) -> Word {
    let mut out = vec![0; q];
    for slot in out.iter_mut().rev() {
        *slot = (i % m) as Symbol;
        i /= m;
    }
    Word::new(out)
}

/// A pair of words from different groups whose images overlap.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub first: Word,
    pub second: Word,
    /// Thickness of the shared interior.
    pub overlap: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PartitionCheck {
    pub accepted: bool,
    pub violations: Vec<Violation>,
}

/// Checks that `φ_C(V)` and `φ_{C'}(V)` share no interior, up to the
/// system's tolerance `η`, whenever `C` and `C'` lie in different groups.
/// Touching images are allowed.
pub fn verify_partition(sys: &IfsSystem, scheme: &PartitionScheme) -> Result<PartitionCheck> {
    if scheme.m != sys.len() {
        return Err(Error::InvalidPartition(format!(
            "scheme has {} symbols, system has {}",
            scheme.m,
            sys.len()
        )));
    }
    let images: Vec<Vec<_>> = scheme
        .groups
        .iter()
        .map(|g| g.iter().map(|w| sys.enclosure(w)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let mut violations = Vec::new();
    for (i, gi) in images.iter().enumerate() {
        for (j, gj) in images.iter().enumerate().skip(i + 1) {
            for (a, ea) in gi.iter().enumerate() {
                for (b, eb) in gj.iter().enumerate() {
                    let overlap = ea.interior_overlap(eb);
                    if overlap > sys.eta() {
                        violations.push(Violation {
                            first: scheme.groups[i][a].clone(),
                            second: scheme.groups[j][b].clone(),
                            overlap,
                        });
                    }
                }
            }
        }
    }
    Ok(PartitionCheck {
        accepted: violations.is_empty(),
        violations,
    })
}

/// The finest scheme accepted by [`verify_partition`]: connected components
/// of the graph joining `q`-words whose images overlap. Groups are listed
/// by their first word in lexicographic order.
pub fn default_partition(sys: &IfsSystem, q: usize) -> Result<PartitionScheme> {
    let m = sys.len();
    let total = word_count(m, q)?;
    let words: Vec<Word> = Word::all(m, q).collect();
    let images = words.iter().map(|w| sys.enclosure(w)).collect::<Result<Vec<_>>>()?;
    let mut parent: Vec<usize> = (0..total).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for a in 0..total {
        for b in a + 1..total {
            if images[a].interior_overlap(&images[b]) > sys.eta() {
                let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let mut groups: Vec<Vec<Word>> = Vec::new();
    let mut slot = vec![usize::MAX; total];
    for (i, w) in words.into_iter().enumerate() {
        let r = root(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(w);
    }
    PartitionScheme::new(m, q, groups)
}

/// A dimension lower bound; negative raw values are clamped to 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PartitionBound {
    pub value: f64,
    pub raw: f64,
    pub clamped: bool,
}

impl PartitionBound {
    fn new(raw: f64) -> Self {
        PartitionBound {
            value: raw.max(0.0),
            raw,
            clamped: raw < 0.0,
        }
    }
}

/// `(h(μ) - (1/q)∫θ dμ)/|χ|` with `θ = log m_i` on the cylinders of `G_i`.
pub fn qint_lower_bound(scheme: &PartitionScheme, mu: &GibbsMeasure, chi: f64) -> Result<PartitionBound> {
    if mu.alphabet() != scheme.m {
        return Err(Error::InvalidPartition("scheme and measure alphabets differ".into()));
    }
    check_chi(chi)?;
    let theta: f64 = scheme
        .groups
        .iter()
        .map(|g| (g.len() as f64).ln() * g.iter().map(|w| mu.cylinder_mass(w.symbols())).sum::<f64>())
        .sum();
    Ok(PartitionBound::new((mu.entropy() - theta / scheme.q as f64) / -chi))
}

/// The Bernoulli case of [`qint_lower_bound`]:
/// `(-Σ p_i log p_i - (1/q) Σ_i log m_i Σ_{w∈G_i} p_w)/|χ|`.
pub fn scm_lower_bound(scheme: &PartitionScheme, p: &BernoulliWeights, chi: f64) -> Result<PartitionBound> {
    if p.len() != scheme.m {
        return Err(Error::InvalidPartition("scheme and weight alphabets differ".into()));
    }
    check_chi(chi)?;
    let probs = p.probs();
    let h: f64 = probs.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.ln()).sum();
    let theta: f64 = scheme
        .groups
        .iter()
        .map(|g| {
            let mass: f64 = g
                .iter()
                .map(|w| w.iter().map(|s| probs[s as usize]).product::<f64>())
                .sum();
            (g.len() as f64).ln() * mass
        })
        .sum();
    Ok(PartitionBound::new((h - theta / scheme.q as f64) / -chi))
}

fn check_chi(chi: f64) -> Result<()> {
    if chi < 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("χ must be negative, got {chi}")))
    }
}

/// Outcome of the dimension-drop test on a `log o` bracket.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DropVerdict {
    /// `o > 1`: the dimension is strictly below `h/|χ|`.
    Drop,
    /// `o = 1` within resolution.
    Separated,
    Inconclusive,
}

impl DropVerdict {
    /// Decides on the bracket `[lower, upper]` of an estimate at word length
    /// `n`. Per-sample values are multiples of `log(count)/n`, so `log 2/n`
    /// (one doubling of a count) is the smallest overlap a finite run
    /// resolves: the bracket must clear it to report a drop, and stay below
    /// it to report separation.
    pub fn from_bracket(lower: f64, upper: f64, n: usize) -> Self {
        let resolution = LN_2 / n as f64;
        if lower > resolution {
            DropVerdict::Drop
        } else if upper <= resolution {
            DropVerdict::Separated
        } else {
            DropVerdict::Inconclusive
        }
    }

    pub fn drop(self) -> bool {
        self == DropVerdict::Drop
    }

    pub fn separated(self) -> bool {
        self == DropVerdict::Separated
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DropVerdict::Drop => "drop",
            DropVerdict::Separated => "separated",
            DropVerdict::Inconclusive => "inconclusive",
        }
    }
}

/// Parameters of the empirical pointwise-dimension estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalSettings {
    pub points: usize,
    pub pivots: usize,
    pub seed: u64,
    pub depth: usize,
    /// Largest radius; `None` picks a tenth of the seed diameter.
    pub r_max: Option<f64>,
    /// Smallest radius; `None` picks `κ_max^depth · diam`.
    pub r_min: Option<f64>,
    pub min_count: usize,
}

impl EmpiricalSettings {
    pub fn new(points: usize, seed: u64) -> Self {
        EmpiricalSettings {
            points,
            pivots: DEFAULT_PIVOTS,
            seed,
            depth: DEFAULT_POINT_DEPTH,
            r_max: None,
            r_min: None,
            min_count: DEFAULT_MIN_COUNT,
        }
    }
}

/// Slopes of `log ν(B(x, r))` against `log r` at sampled pivots.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalDimension {
    pub median: f64,
    pub iqr: f64,
    pub slopes: Vec<f64>,
    /// The dyadic ladder used in the regressions.
    pub radii: Vec<f64>,
}

/// `points` samples of `π_* μ`, each `φ_w(anchor)` for a word `w ~ μ` of
/// length `depth`.
pub fn sample_points(sys: &IfsSystem, mu: &GibbsMeasure, points: usize, depth: usize, seed: u64) -> Result<Vec<Point>> {
    check_alphabet(sys, mu)?;
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    let anchor = sys.seed().anchor();
    Ok((0..points as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, Purpose::PointCloud, i);
            let w = mu.sample_word(depth, &mut rng);
            sys.apply_word_unchecked(w.symbols(), anchor)
        })
        .collect())
}

/// Median and interquartile range of finite-scale pointwise dimensions of
/// `ν_p`.
///
/// The radii form the ladder `r_max·2^{-k}` down to `r_min`, keeping those
/// at which pivots see at least `min_count` points on average. Each pivot's
/// slope is the least-squares fit of `log(fraction within r)` on `log r`;
/// coincident points give slope 0.
pub fn empirical_pointwise_dimension(
    sys: &IfsSystem,
    p: &BernoulliWeights,
    settings: &EmpiricalSettings,
) -> Result<EmpiricalDimension> {
    if settings.points < 1000 {
        return Err(Error::InvalidArgument("at least 1000 points are needed".into()));
    }
    if settings.pivots == 0 {
        return Err(Error::InvalidArgument("at least one pivot is needed".into()));
    }
    let mu = GibbsMeasure::bernoulli(p);
    let pts = sample_points(sys, &mu, settings.points, settings.depth, settings.seed)?;
    let r_max = settings.r_max.unwrap_or(sys.seed().diameter() / 10.0);
    let r_min = settings.r_min.unwrap_or_else(|| {
        sys.contraction_bounds().kappa_max.powi(settings.depth as i32) * sys.seed().path_diameter()
    });
    let mut ladder = Vec::new();
    let mut r = r_max;
    while r >= r_min && r > 0.0 && ladder.len() < 1100 {
        ladder.push(r);
        r *= 0.5;
    }
    let pivots = settings.pivots.min(pts.len());
    let counts: Vec<Vec<usize>> = pts[..pivots]
        .par_iter()
        .map(|&x| {
            let mut d: Vec<f64> = pts.iter().map(|&y| (y - x).norm()).collect();
            d.sort_by(f64::total_cmp);
            ladder.iter().map(|&r| d.partition_point(|&v| v <= r)).collect()
        })
        .collect();
    let usable: Vec<usize> = (0..ladder.len())
        .filter(|&k| {
            let mean = counts.iter().map(|c| c[k] as f64).sum::<f64>() / pivots as f64;
            mean >= settings.min_count as f64
        })
        .collect();
    if usable.len() < MIN_LADDER {
        return Err(Error::DegenerateLadder(format!(
            "{} usable radii in [{r_min:e}, {r_max:e}], need {MIN_LADDER}",
            usable.len()
        )));
    }
    let total = pts.len() as f64;
    let xs: Vec<f64> = usable.iter().map(|&k| ladder[k].ln()).collect();
    let slopes: Vec<f64> = counts
        .iter()
        .map(|c| {
            let ys: Vec<f64> = usable.iter().map(|&k| (c[k] as f64 / total).ln()).collect();
            fit_slope(&xs, &ys)
        })
        .collect();
    let mut sorted = slopes.clone();
    sorted.sort_by(f64::total_cmp);
    Ok(EmpiricalDimension {
        median: quantile(&sorted, 0.5),
        iqr: quantile(&sorted, 0.75) - quantile(&sorted, 0.25),
        slopes,
        radii: usable.iter().map(|&k| ladder[k]).collect(),
    })
}

fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if ys.iter().all(|&y| y == ys[0]) {
        return 0.0;
    }
    sxy / sxx
}

/// Linearly interpolated quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let i = pos.floor() as usize;
    let frac = pos - i as f64;
    if i + 1 < sorted.len() {
        sorted[i] + frac * (sorted[i + 1] - sorted[i])
    } else {
        sorted[i]
    }
}

/// Parameters of a full dimension report.
#[derive(Clone, Debug, PartialEq)]
pub struct DimensionSettings {
    pub overlap: OverlapSettings,
    pub lyapunov_n: usize,
    pub lyapunov_samples: usize,
    pub scheme: Option<PartitionScheme>,
    pub empirical: Option<EmpiricalSettings>,
}

impl DimensionSettings {
    pub fn new(n: usize, samples: usize, seed: u64) -> Self {
        DimensionSettings {
            overlap: OverlapSettings::new(n, samples, seed),
            lyapunov_n: DEFAULT_LYAPUNOV_N,
            lyapunov_samples: samples,
            scheme: None,
            empirical: None,
        }
    }
}

/// Entropy, Lyapunov exponent, overlap number and the resulting dimension
/// of a projected Gibbs measure.
#[derive(Clone, Debug, PartialEq)]
pub struct DimensionReport {
    pub h: f64,
    pub chi: f64,
    pub chi_err: f64,
    pub log_o: f64,
    pub log_o_err: f64,
    pub log_o_lower: f64,
    pub log_o_upper: f64,
    /// The estimate exceeded `h` by less than its noise and was set to `h`.
    pub log_o_clamped: bool,
    pub hd: f64,
    pub hd_err: f64,
    /// `h/|χ|`, the value without overlaps.
    pub hd_naive: f64,
    pub bound: Option<PartitionBound>,
    pub verdict: DropVerdict,
    pub overlap: OverlapEstimate,
    pub lyapunov: LyapunovEstimate,
    pub empirical: Option<EmpiricalDimension>,
}

impl DimensionReport {
    pub fn drop(&self) -> bool {
        self.verdict.drop()
    }

    pub fn separated(&self) -> bool {
        self.verdict.separated()
    }

    pub fn truncated(&self) -> bool {
        self.overlap.truncated > 0
    }
}

/// The drop verdict of a report, from its `log o` bracket.
pub fn dimension_drop(report: &DimensionReport) -> DropVerdict {
    DropVerdict::from_bracket(report.log_o_lower, report.log_o_upper, report.overlap.n)
}

/// `HD(ν_ψ) = (h(μ_ψ) - log o(S, μ_ψ))/|χ(μ_ψ)|` for the equilibrium state
/// `mu`. With a scheme, adds the partition lower bound; with empirical
/// settings and a Bernoulli `mu`, adds the pointwise-dimension estimate.
pub fn projection_dimension(sys: &IfsSystem, mu: &GibbsMeasure, settings: &DimensionSettings) -> Result<DimensionReport> {
    check_alphabet(sys, mu)?;
    let h = mu.entropy();
    let lyap = lyapunov(
        sys,
        mu,
        settings.lyapunov_n,
        settings.lyapunov_samples,
        settings.overlap.seed,
    )?;
    let chi = lyap.value();
    let chi_err = lyap.error();
    if !(chi < 0.0) {
        return Err(Error::InvalidArgument(format!("Lyapunov exponent {chi} is not negative")));
    }
    let overlap = measure_overlap(sys, mu, &settings.overlap)?;
    let (mut log_o, mut log_o_clamped) = (overlap.mean, false);
    if log_o > h - HD_SLACK {
        // within rounding of h, or above h by less than the noise
        if log_o - h <= 3.0 * overlap.std_err + HD_SLACK {
            log_o_clamped = log_o > h;
            log_o = h;
        } else {
            return Err(Error::InconsistentDimension { h, log_o });
        }
    }
    let hd = hd_formula(h, log_o, chi)?;
    let hd_err = (overlap.std_err / -chi).hypot(hd * chi_err / -chi);
    let bound = match &settings.scheme {
        Some(scheme) => {
            let check = verify_partition(sys, scheme)?;
            if let Some(v) = check.violations.first() {
                return Err(Error::InvalidPartition(format!(
                    "images of {:?} and {:?} overlap by {:e}",
                    v.first, v.second, v.overlap
                )));
            }
            Some(qint_lower_bound(scheme, mu, chi)?)
        }
        None => None,
    };
    let empirical = match &settings.empirical {
        Some(e) if mu.locality() == 1 => {
            let p = BernoulliWeights::new(mu.symbol_marginals())?;
            Some(empirical_pointwise_dimension(sys, &p, e)?)
        }
        _ => None,
    };
    Ok(DimensionReport {
        h,
        chi,
        chi_err,
        log_o,
        log_o_err: overlap.std_err,
        log_o_lower: overlap.lower,
        log_o_upper: overlap.upper,
        log_o_clamped,
        hd,
        hd_err,
        hd_naive: h / -chi,
        bound,
        verdict: DropVerdict::from_bracket(overlap.lower, overlap.upper, overlap.n),
        overlap,
        lyapunov: lyap,
        empirical,
    })
}

/// [`projection_dimension`] for the Bernoulli measure `μ_p`, whose two
/// projections coincide.
pub fn self_conformal_dimension(
    sys: &IfsSystem,
    p: &BernoulliWeights,
    settings: &DimensionSettings,
) -> Result<DimensionReport> {
    if !p.probs().iter().any(|&x| x > 0.0) {
        return Err(Error::InvalidWeights("all weights vanish".into()));
    }
    projection_dimension(sys, &GibbsMeasure::bernoulli(p), settings)
}

fn check_alphabet(sys: &IfsSystem, mu: &GibbsMeasure) -> Result<()> {
    if mu.alphabet() != sys.len() {
        return Err(Error::InvalidArgument(format!(
            "measure has {} symbols, system has {}",
            mu.alphabet(),
            sys.len()
        )));
    }
    Ok(())
}
