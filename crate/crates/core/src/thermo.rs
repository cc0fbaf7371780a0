//! Locally constant potentials on the full shift, their pressure and their
//! equilibrium measures, which are Markov measures on (k-1)-word states.

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;

use crate::error::{Error, Result};
use crate::ifs::{Symbol, Word};

/// Power-iteration tolerance on the relative change of the eigenvalue.
pub const EIGEN_TOLERANCE: f64 = 1e-13;

/// Power-iteration cap.
pub const EIGEN_MAX_ITERATIONS: usize = 100_000;

/// Floor applied to `log p` when a probability is zero, keeping potential
/// tables finite.
pub const LOG_FLOOR: f64 = -708.0;

/// A potential depending on the first `k` symbols: `ψ(ω) = table[ω_1…ω_k]`,
/// with `ω_1` the most significant digit of the index.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalPotential {
    m: usize,
    k: usize,
    table: Vec<f64>,
    min: f64,
    max: f64,
}

impl LocalPotential {
    pub fn new(m: usize, k: usize, table: Vec<f64>) -> Result<Self> {
        if m == 0 || k == 0 {
            return Err(Error::InvalidPotential("alphabet and locality must be positive".into()));
        }
        let expected = (k as u32)
            .try_into()
            .ok()
            .and_then(|e: u32| m.checked_pow(e))
            .ok_or_else(|| Error::InvalidPotential("table size overflows".into()))?;
        if table.len() != expected {
            return Err(Error::InvalidPotential(format!(
                "expected {expected} entries for m = {m}, k = {k}, got {}",
                table.len()
            )));
        }
        if let Some(v) = table.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidPotential(format!("non-finite entry {v}")));
        }
        let min = table.iter().copied().fold(f64::INFINITY, f64::min);
        let max = table.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(LocalPotential { m, k, table, min, max })
    }

    pub fn zero(m: usize) -> Self {
        Self::constant(m, 0.0)
    }

    pub fn constant(m: usize, c: f64) -> Self {
        LocalPotential::new(m, 1, vec![c; m]).expect("constant potential")
    }

    /// `ψ(ω) = log p_{ω_1}`, floored at [`LOG_FLOOR`] for zero weights.
    pub fn from_bernoulli(p: &BernoulliWeights) -> Self {
        let table = p.probs().iter().map(|&q| q.ln().max(LOG_FLOOR)).collect();
        LocalPotential::new(p.len(), 1, table).expect("weights are valid")
    }

    pub fn alphabet(&self) -> usize {
        self.m
    }

    pub fn locality(&self) -> usize {
        self.k
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    /// `(k - 1)·(max - min)`: how much a Birkhoff sum can depend on symbols
    /// past the end of a finite word.
    pub fn oscillation_bound(&self) -> f64 {
        (self.k - 1) as f64 * (self.max - self.min)
    }

    /// The same potential plus a constant.
    pub fn shifted(&self, c: f64) -> Result<Self> {
        LocalPotential::new(self.m, self.k, self.table.iter().map(|v| v + c).collect())
    }

    /// Table index of a `k`-word.
    pub fn index(&self, w: &[Symbol]) -> usize {
        debug_assert_eq!(w.len(), self.k);
        w.iter().fold(0, |acc, &s| acc * self.m + s as usize)
    }

    /// `ψ` on a `k`-word.
    pub fn value(&self, w: &[Symbol]) -> f64 {
        self.table[self.index(w)]
    }
}

/// A probability vector `(p_1, …, p_m)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BernoulliWeights(Vec<f64>);

impl BernoulliWeights {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidWeights("empty weight vector".into()));
        }
        if p.iter().any(|q| !q.is_finite() || *q < 0.0) {
            return Err(Error::InvalidWeights("weights must be finite and non-negative".into()));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidWeights(format!("weights sum to {total}, not 1")));
        }
        Ok(BernoulliWeights(p))
    }

    pub fn uniform(m: usize) -> Self {
        BernoulliWeights(vec![1.0 / m as f64; m])
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn is_uniform(&self) -> bool {
        self.0.iter().all(|&q| q == self.0[0])
    }
}

/// A shift-invariant Markov measure with memory `k - 1`, together with the
/// potential it is the equilibrium state of and that potential's pressure.
#[derive(Clone, Debug)]
pub struct GibbsMeasure {
    m: usize,
    k: usize,
    /// Stationary law of the first `k - 1` symbols (one state when `k = 1`).
    stationary: Vec<f64>,
    /// `transition[s·m + a]`: probability of symbol `a` after state `s`.
    transition: Vec<f64>,
    samplers: Vec<WeightedIndex<f64>>,
    initial: WeightedIndex<f64>,
    pressure: f64,
    potential: LocalPotential,
    uniform: bool,
}

impl GibbsMeasure {
    /// The Bernoulli measure with weights `p`.
    pub fn bernoulli(p: &BernoulliWeights) -> Self {
        let potential = LocalPotential::from_bernoulli(p);
        let total: f64 = p.probs().iter().sum();
        Self::assemble(
            p.len(),
            1,
            vec![1.0],
            p.probs().to_vec(),
            total.ln(),
            potential,
            p.is_uniform(),
        )
    }

    /// The equilibrium state of `psi`: the Parry-type Markov measure built from
    /// the principal left and right eigenvectors of the transfer matrix.
    pub fn equilibrium(psi: &LocalPotential) -> Result<Self> {
        let (m, k) = (psi.m, psi.k);
        if k == 1 {
            let pressure = pressure(psi)?;
            let probs: Vec<f64> = psi.table.iter().map(|v| (v - pressure).exp()).collect();
            let total: f64 = probs.iter().sum();
            let probs: Vec<f64> = probs.iter().map(|q| q / total).collect();
            let uniform = psi.table.iter().all(|&v| v == psi.table[0]);
            return Ok(Self::assemble(m, 1, vec![1.0], probs, pressure, psi.clone(), uniform));
        }
        let tm = TransferMatrix::new(psi);
        let (lambda, right) = tm.perron(false)?;
        let (_, left) = tm.perron(true)?;
        let states = tm.states;
        let mut transition = vec![0.0; states * m];
        for s in 0..states {
            let row = &mut transition[s * m..(s + 1) * m];
            if right[s] > 0.0 {
                for (a, t) in row.iter_mut().enumerate() {
                    let next = tm.next(s, a);
                    *t = tm.weight(s, a) * right[next] / (lambda * right[s]);
                }
            } else {
                for (a, t) in row.iter_mut().enumerate() {
                    *t = tm.weight(s, a);
                }
            }
            let total: f64 = row.iter().sum();
            row.iter_mut().for_each(|t| *t /= total);
        }
        let mut stationary: Vec<f64> = left.iter().zip(&right).map(|(l, r)| l * r).collect();
        let total: f64 = stationary.iter().sum();
        stationary.iter_mut().for_each(|p| *p /= total);
        let uniform = psi.table.iter().all(|&v| v == psi.table[0]);
        Ok(Self::assemble(
            m,
            k,
            stationary,
            transition,
            psi.max + lambda.ln(),
            psi.clone(),
            uniform,
        ))
    }

    fn assemble(
        m: usize,
        k: usize,
        stationary: Vec<f64>,
        transition: Vec<f64>,
        pressure: f64,
        potential: LocalPotential,
        uniform: bool,
    ) -> Self {
        let samplers = transition
            .chunks(m)
            .map(|row| WeightedIndex::new(row).expect("rows are probability vectors"))
            .collect();
        let initial = WeightedIndex::new(&stationary).expect("stationary law is a probability vector");
        GibbsMeasure {
            m,
            k,
            stationary,
            transition,
            samplers,
            initial,
            pressure,
            potential,
            uniform,
        }
    }

    pub fn alphabet(&self) -> usize {
        self.m
    }

    pub fn locality(&self) -> usize {
        self.k
    }

    pub fn pressure(&self) -> f64 {
        self.pressure
    }

    pub fn potential(&self) -> &LocalPotential {
        &self.potential
    }

    /// Stationary law of the `(k - 1)`-word states.
    pub fn stationary(&self) -> &[f64] {
        &self.stationary
    }

    /// Row-major transition matrix over states × symbols.
    pub fn transition(&self) -> &[f64] {
        &self.transition
    }

    fn states(&self) -> usize {
        self.stationary.len()
    }

    fn next_state(&self, s: usize, a: usize) -> usize {
        (s * self.m + a) % self.states()
    }

    /// Entropy rate `-Σ_s π_s Σ_a P(s,a) log P(s,a)`; exactly `log m` for the
    /// uniform measure.
    pub fn entropy(&self) -> f64 {
        if self.uniform {
            return (self.m as f64).ln();
        }
        let mut h = 0.0;
        for (s, &pi) in self.stationary.iter().enumerate() {
            let row = &self.transition[s * self.m..(s + 1) * self.m];
            let hs: f64 = row.iter().filter(|&&q| q > 0.0).map(|&q| -q * q.ln()).sum();
            h += pi * hs;
        }
        h.max(0.0)
    }

    /// `μ[w]`.
    pub fn cylinder_mass(&self, w: &[Symbol]) -> f64 {
        let memory = self.k - 1;
        if w.len() < memory {
            // marginal over states extending w
            let free = memory - w.len();
            let base = w.iter().fold(0usize, |acc, &s| acc * self.m + s as usize);
            let span = self.m.pow(free as u32);
            return self.stationary[base * span..(base + 1) * span].iter().sum();
        }
        let mut state = w[..memory]
            .iter()
            .fold(0usize, |acc, &s| acc * self.m + s as usize);
        let mut mass = self.stationary[state];
        for &a in &w[memory..] {
            mass *= self.transition[state * self.m + a as usize];
            state = self.next_state(state, a as usize);
        }
        mass
    }

    /// Masses of the single-symbol cylinders.
    pub fn symbol_marginals(&self) -> Vec<f64> {
        (0..self.m as Symbol).map(|a| self.cylinder_mass(&[a])).collect()
    }

    /// A word of length `n` distributed as `μ` on `n`-cylinders.
    pub fn sample_word<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Word {
        let mut out = Vec::with_capacity(n.max(self.k - 1));
        let mut state = self.initial.sample(rng);
        let memory = self.k - 1;
        for j in (0..memory).rev() {
            out.push((state / self.m.pow(j as u32) % self.m) as Symbol);
        }
        while out.len() < n {
            let a = self.samplers[state].sample(rng);
            out.push(a as Symbol);
            state = self.next_state(state, a);
        }
        out.truncate(n);
        Word::new(out)
    }

    /// `∫ψ dμ` for a locally constant `ψ` of any locality.
    pub fn integral(&self, psi: &LocalPotential) -> f64 {
        Word::all(psi.m, psi.k)
            .map(|w| self.cylinder_mass(w.symbols()) * psi.value(w.symbols()))
            .sum()
    }
}

/// `P(ψ)`: the log spectral radius of the transfer matrix on `(k-1)`-word
/// states; `log Σ exp ψ_i` when `k = 1`.
pub fn pressure(psi: &LocalPotential) -> Result<f64> {
    if psi.k == 1 {
        let total: f64 = psi.table.iter().map(|v| (v - psi.max).exp()).sum();
        return Ok(psi.max + total.ln());
    }
    let (lambda, _) = TransferMatrix::new(psi).perron(false)?;
    Ok(psi.max + lambda.ln())
}

/// `h(μ)`.
pub fn entropy(mu: &GibbsMeasure) -> f64 {
    mu.entropy()
}

/// `|h(μ) + ∫ψ dμ - P(ψ)|`.
pub fn variational_residual(psi: &LocalPotential, mu: &GibbsMeasure) -> Result<f64> {
    Ok((mu.entropy() + mu.integral(psi) - pressure(psi)?).abs())
}

/// `S_nψ` on `w` followed by the all-zeros tail, and the bound on how much
/// another tail could change it.
pub fn birkhoff_sum(psi: &LocalPotential, w: &[Symbol]) -> (f64, f64) {
    let n = w.len();
    let mut window = vec![0 as Symbol; psi.k];
    let mut total = 0.0;
    for j in 0..n {
        for (i, slot) in window.iter_mut().enumerate() {
            *slot = w.get(j + i).copied().unwrap_or(0);
        }
        total += psi.value(&window);
    }
    (total, psi.oscillation_bound())
}

/// Transfer matrix of a `k ≥ 2` potential with the table maximum factored
/// out: from state `s = (ω_1…ω_{k-1})` symbol `a` leads to `(ω_2…ω_{k-1}a)`
/// with weight `exp(ψ(ω_1…ω_{k-1}a) - max ψ)`.
struct TransferMatrix {
    m: usize,
    states: usize,
    weights: Vec<f64>,
}

impl TransferMatrix {
    fn new(psi: &LocalPotential) -> Self {
        let states = psi.m.pow((psi.k - 1) as u32);
        let weights = psi.table.iter().map(|v| (v - psi.max).exp()).collect();
        TransferMatrix {
            m: psi.m,
            states,
            weights,
        }
    }

    fn weight(&self, s: usize, a: usize) -> f64 {
        self.weights[s * self.m + a]
    }

    fn next(&self, s: usize, a: usize) -> usize {
        (s * self.m + a) % self.states
    }

    /// One application of `M` (or `Mᵀ` when `transpose`).
    fn apply(&self, v: &[f64], out: &mut [f64], transpose: bool) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for s in 0..self.states {
            for a in 0..self.m {
                let t = self.next(s, a);
                let w = self.weight(s, a);
                if transpose {
                    out[t] += w * v[s];
                } else {
                    out[s] += w * v[t];
                }
            }
        }
    }

    /// Principal eigenvalue and sum-normalised eigenvector.
    ///
    /// Iterates `M + I`, which has the same Perron vector and a strictly
    /// dominant eigenvalue even when `M` is periodic; the eigenvalue of `M`
    /// is read off as `Σ(Mv) / Σv`.
    fn perron(&self, transpose: bool) -> Result<(f64, Vec<f64>)> {
        let n = self.states;
        let mut v = vec![1.0 / n as f64; n];
        let mut mv = vec![0.0; n];
        let mut prev = f64::NAN;
        for _ in 0..EIGEN_MAX_ITERATIONS {
            self.apply(&v, &mut mv, transpose);
            let lambda = mv.iter().sum::<f64>() / v.iter().sum::<f64>();
            let next: Vec<f64> = v.iter().zip(&mv).map(|(a, b)| a + b).collect();
            let total: f64 = next.iter().sum();
            let mut change = 0.0f64;
            for (vi, ni) in v.iter_mut().zip(&next) {
                let ni = ni / total;
                change = change.max((ni - *vi).abs());
                *vi = ni;
            }
            let settled = (lambda - prev).abs() <= EIGEN_TOLERANCE * lambda && change <= EIGEN_TOLERANCE;
            prev = lambda;
            if settled {
                self.apply(&v, &mut mv, transpose);
                let lambda = mv.iter().sum::<f64>() / v.iter().sum::<f64>();
                return Ok((lambda, v));
            }
        }
        Err(Error::EigenNonConvergence {
            iterations: EIGEN_MAX_ITERATIONS,
        })
    }
}
