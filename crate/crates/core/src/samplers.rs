//! Random samplers: one-sided stable subordinators, subordinated Brownian
//! motion, radial stable marginals, the first-passage construction of the
//! radial Cauchy process, and Lamperti simulation of `η` and `Y`.
//!
//! Every sampler is a sequential function of one ChaCha8 stream. Parallel
//! runs go through [`sharded`], which cuts the sample into fixed blocks with
//! derived stream ids, so results do not depend on the number of workers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, Open01, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::StabilityIndex;
use crate::levy_lamperti::{invert_tail_negative, invert_tail_positive, TruncatedLevy};
use crate::stable_numerics::PositiveStable;

/// Samples per block in [`sharded`].
pub const BLOCK_SIZE: usize = 8192;
/// Bits of the derived stream id reserved for the block index.
const BLOCK_BITS: u32 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngSeed {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(self.stream_id);
        r
    }

    /// Stream of block `index` under this seed. Stream ids above 2^40 alias.
    pub fn block(&self, index: u64) -> RngSeed {
        RngSeed {
            seed: self.seed,
            stream_id: (self.stream_id << BLOCK_BITS) | (index & ((1 << BLOCK_BITS) - 1)),
        }
    }
}

/// Runs `sampler(block_seed, block_len)` over blocks of [`BLOCK_SIZE`] on
/// `shards` worker threads and concatenates the blocks in order.
pub fn sharded<T, F>(rng: RngSeed, n: usize, shards: usize, sampler: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(RngSeed, usize) -> Result<Vec<T>> + Sync,
{
    if shards == 0 {
        return Err(Error::config("shard count must be positive"));
    }
    let blocks: Vec<(u64, usize)> = (0..n.div_ceil(BLOCK_SIZE))
        .map(|b| (b as u64, BLOCK_SIZE.min(n - b * BLOCK_SIZE)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(shards)
        .build()
        .map_err(|e| Error::config(format!("thread pool: {e}")))?;
    let parts: Vec<Vec<T>> = pool.install(|| {
        blocks
            .par_iter()
            .map(|&(b, len)| sampler(rng.block(b), len))
            .collect::<Result<_>>()
    })?;
    Ok(parts.into_iter().flatten().collect())
}

/// Scalar path on a strictly increasing time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSample {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl PathSample {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::domain(format!(
                "path has {} times but {} values",
                times.len(),
                values.len()
            )));
        }
        if times.is_empty() {
            return Err(Error::domain("empty path"));
        }
        if !(times[0] >= 0.0) || times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::domain("path times must be non-negative and strictly increasing"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("path values must be finite"));
        }
        Ok(Self { times, values })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LampertiSimConfig {
    pub jump_cutoff: f64,
    pub horizon: f64,
    pub step: f64,
}

impl Default for LampertiSimConfig {
    fn default() -> Self {
        Self {
            jump_cutoff: 1e-3,
            horizon: 100.0,
            step: 1e-3,
        }
    }
}

impl LampertiSimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.jump_cutoff > 0.0 && self.jump_cutoff < 0.5) {
            return Err(Error::config(format!(
                "jump cutoff must lie in (0, 0.5), got {}",
                self.jump_cutoff
            )));
        }
        if !(self.step > 0.0 && self.horizon.is_finite() && self.step < self.horizon) {
            return Err(Error::config(format!(
                "need 0 < step < horizon, got step {} and horizon {}",
                self.step, self.horizon
            )));
        }
        Ok(())
    }

    fn steps(&self) -> usize {
        (self.horizon / self.step).round() as usize
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain(format!("time must be positive, got {t}")));
    }
    Ok(())
}

fn check_radius(x: f64) -> Result<()> {
    if !(x >= 0.0 && x.is_finite()) {
        return Err(Error::domain(format!("radius must be non-negative, got {x}")));
    }
    Ok(())
}

/// Kanter's representation: `S = (A(U)/E)^{(1-β)/β}` with `U` uniform on
/// `(0, π)` and `E` standard exponential has `E e^{-λS} = e^{-λ^β}`.
struct Kanter {
    law: PositiveStable,
    power: f64,
}

impl Kanter {
    fn new(alpha: StabilityIndex) -> Result<Self> {
        let law = PositiveStable::new(alpha)?;
        let b = law.beta();
        Ok(Self {
            power: (1.0 - b) / b,
            law,
        })
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.sample(Open01);
        let e: f64 = rng.sample(Exp1);
        (self.law.zolotarev_a(std::f64::consts::PI * u) / e).powf(self.power)
    }
}

/// Samples of `Λ_t`, the stable subordinator with `E e^{-λΛ_t} = e^{-tλ^{α/2}}`.
pub fn sample_subordinator(alpha: StabilityIndex, t: f64, rng: RngSeed, n: usize) -> Result<Vec<f64>> {
    check_time(t)?;
    let k = Kanter::new(alpha)?;
    let scale = t.powf(1.0 / k.law.beta());
    let mut r = rng.rng();
    Ok((0..n).map(|_| scale * k.draw(&mut r)).collect())
}

/// Samples of `x0 + √2 G √Λ_t`; at `α = 2` the clock is deterministic.
pub fn sample_stable_marginal(
    d: usize,
    alpha: StabilityIndex,
    t: f64,
    x0: &[f64],
    rng: RngSeed,
    n: usize,
) -> Result<Vec<Vec<f64>>> {
    check_time(t)?;
    if d == 0 || x0.len() != d {
        return Err(Error::domain(format!(
            "start point must have dimension {d}, got {}",
            x0.len()
        )));
    }
    let kanter = if alpha.is_pure_jump() {
        Some(Kanter::new(alpha)?)
    } else {
        None
    };
    let scale = t.powf(2.0 / alpha.value());
    let mut r = rng.rng();
    Ok((0..n)
        .map(|_| {
            let clock = kanter.as_ref().map_or(t, |k| scale * k.draw(&mut r));
            let s = (2.0 * clock).sqrt();
            x0.iter()
                .map(|&x| {
                    let g: f64 = r.sample(StandardNormal);
                    x + s * g
                })
                .collect()
        })
        .collect())
}

/// `|X_t|` for the 3-d isotropic stable process started at `(x, 0, 0)`.
pub fn sample_radial3_doob(alpha: StabilityIndex, t: f64, x: f64, rng: RngSeed, n: usize) -> Result<Vec<f64>> {
    check_radius(x)?;
    Ok(sample_stable_marginal(3, alpha, t, &[x, 0.0, 0.0], rng, n)?
        .into_iter()
        .map(|v| v.iter().map(|c| c * c).sum::<f64>().sqrt())
        .collect())
}

/// First time `√2 W` reaches level `t`: `t² / (2Z²)`.
pub fn first_passage_gamma(t: f64, rng: RngSeed, n: usize) -> Result<Vec<f64>> {
    check_time(t)?;
    let mut r = rng.rng();
    Ok((0..n)
        .map(|_| {
            let z: f64 = r.sample(StandardNormal);
            t * t / (2.0 * z * z)
        })
        .collect())
}

/// Passage times of one path through increasing `levels`; by the strong
/// Markov property the level increments contribute independent passage times.
pub fn first_passage_coupled(levels: &[f64], rng: RngSeed, n: usize) -> Result<Vec<Vec<f64>>> {
    if levels.is_empty() || !(levels[0] > 0.0) || levels.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain("levels must be positive and strictly increasing"));
    }
    let mut r = rng.rng();
    Ok((0..n)
        .map(|_| {
            let mut prev = 0.0;
            let mut acc = 0.0;
            levels
                .iter()
                .map(|&l| {
                    let z: f64 = r.sample(StandardNormal);
                    acc += (l - prev) * (l - prev) / (2.0 * z * z);
                    prev = l;
                    acc
                })
                .collect()
        })
        .collect())
}

/// `√2 R_{Γ_t}` with `R` a 3-d Bessel process from `x/√2`, written as
/// `|x e₁ + √2 √Γ_t G|`.
pub fn sample_pathwise_doob(t: f64, x: f64, rng: RngSeed, n: usize) -> Result<Vec<f64>> {
    check_time(t)?;
    check_radius(x)?;
    let mut r = rng.rng();
    Ok((0..n)
        .map(|_| {
            let z: f64 = r.sample(StandardNormal);
            let s = (t * t / (z * z)).sqrt();
            let g: [f64; 3] = [
                r.sample(StandardNormal),
                r.sample(StandardNormal),
                r.sample(StandardNormal),
            ];
            let a = x + s * g[0];
            (a * a + s * s * (g[1] * g[1] + g[2] * g[2])).sqrt()
        })
        .collect())
}

/// Grid-step generator for `η`: drift, Gaussian small jumps and a compound
/// Poisson process of jumps with `|x| ≥ ε`, whose arrival clock carries over
/// between steps.
struct EtaStepper {
    levy: TruncatedLevy,
    dt: f64,
    sd: f64,
    until_jump: f64,
    rng: ChaCha8Rng,
}

impl EtaStepper {
    fn new(levy: TruncatedLevy, dt: f64, rng: RngSeed) -> Self {
        let mut rng = rng.rng();
        let e: f64 = rng.sample(Exp1);
        Self {
            sd: (levy.small_jump_variance * dt).sqrt(),
            until_jump: e / levy.jump_rate(),
            levy,
            dt,
            rng,
        }
    }

    fn jump(&mut self) -> Result<f64> {
        let rate = self.levy.jump_rate();
        let side: f64 = self.rng.random::<f64>() * rate;
        let u: f64 = self.rng.sample(Open01);
        if side < self.levy.rate_positive {
            invert_tail_positive(u * self.levy.rate_positive)
        } else {
            Ok(-invert_tail_negative(u * self.levy.rate_negative)?)
        }
    }

    fn step(&mut self) -> Result<f64> {
        let g: f64 = self.rng.sample(StandardNormal);
        let mut inc = self.levy.drift * self.dt + self.sd * g;
        let mut left = self.dt;
        while self.until_jump <= left {
            left -= self.until_jump;
            inc += self.jump()?;
            let e: f64 = self.rng.sample(Exp1);
            self.until_jump = e / self.levy.jump_rate();
        }
        self.until_jump -= left;
        Ok(inc)
    }
}

/// One path of `η` from 0 on the grid `k·step`, `k ≤ horizon/step`.
pub fn simulate_eta(cfg: LampertiSimConfig, rng: RngSeed) -> Result<PathSample> {
    cfg.validate()?;
    let steps = cfg.steps();
    let mut stepper = EtaStepper::new(TruncatedLevy::new(cfg.jump_cutoff)?, cfg.step, rng);
    let mut values = Vec::with_capacity(steps + 1);
    let mut x = 0.0;
    values.push(x);
    for _ in 0..steps {
        x += stepper.step()?;
        values.push(x);
    }
    let times = (0..=steps).map(|k| k as f64 * cfg.step).collect();
    PathSample::new(times, values)
}

/// Additive functional `A(s) = ∫_0^s rate(v(u)) du` of a path, accumulated
/// by the trapezoidal rule, with its grid inverse.
#[derive(Debug, Clone)]
pub struct TimeChange {
    path: PathSample,
    clock: Vec<f64>,
}

impl TimeChange {
    pub fn new<F: Fn(f64) -> f64>(path: &PathSample, rate: F) -> Result<Self> {
        let r: Vec<f64> = path.values.iter().map(|&v| rate(v)).collect();
        if r.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
            return Err(Error::domain("clock rate must be positive and finite along the path"));
        }
        let mut clock = Vec::with_capacity(r.len());
        let mut acc = 0.0;
        clock.push(acc);
        for k in 1..r.len() {
            acc += 0.5 * (path.times[k] - path.times[k - 1]) * (r[k] + r[k - 1]);
            clock.push(acc);
        }
        Ok(Self {
            path: path.clone(),
            clock,
        })
    }

    /// Total clock time available on the grid.
    pub fn horizon(&self) -> f64 {
        *self.clock.last().expect("non-empty path")
    }

    pub fn clock(&self) -> &[f64] {
        &self.clock
    }

    /// Grid index `k` and position `s` with `A(s) = t`, `s ∈ [s_k, s_{k+1})`.
    fn locate(&self, t: f64) -> Result<(usize, f64)> {
        if !(t >= 0.0) {
            return Err(Error::domain(format!("time must be non-negative, got {t}")));
        }
        let available = self.horizon();
        if t > available {
            return Err(Error::Horizon {
                requested: t,
                available,
            });
        }
        let k = self.clock.partition_point(|&a| a <= t) - 1;
        if k + 1 == self.clock.len() {
            return Ok((k, self.path.times[k]));
        }
        let (a0, a1) = (self.clock[k], self.clock[k + 1]);
        let (s0, s1) = (self.path.times[k], self.path.times[k + 1]);
        Ok((k, s0 + (t - a0) / (a1 - a0) * (s1 - s0)))
    }

    /// Inverse clock: `inf{s : A(s) > t}` with `A` linear between grid points.
    pub fn inverse(&self, t: f64) -> Result<f64> {
        Ok(self.locate(t)?.1)
    }

    /// Path value at the inverse clock, read càdlàg from the grid.
    pub fn state_at(&self, t: f64) -> Result<f64> {
        Ok(self.path.values[self.locate(t)?.0])
    }

    /// The time-changed path on the clock grid, with states mapped by `f`.
    pub fn to_path<F: Fn(f64) -> f64>(&self, f: F) -> Result<PathSample> {
        PathSample::new(self.clock.clone(), self.path.values.iter().map(|&v| f(v)).collect())
    }
}

/// Lamperti clock of `ξ`, `A(s) = ∫_0^s e^{ξ_u} du`; `inverse` is `φ`.
pub fn lamperti_clock(xi: &PathSample) -> Result<TimeChange> {
    TimeChange::new(xi, f64::exp)
}

/// `Y_t = exp(ξ_{φ(t)})` on the grid of clock times `A(s_k)`.
pub fn lamperti_time_change(xi: &PathSample) -> Result<PathSample> {
    lamperti_clock(xi)?.to_path(f64::exp)
}

/// Clock `A(s) = ∫_0^s Y_u^{-1} du` of a positive path; `inverse` is `χ`.
pub fn uparrow_clock(y: &PathSample) -> Result<TimeChange> {
    if y.values.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::domain("path must be strictly positive"));
    }
    TimeChange::new(y, f64::recip)
}

/// `(Y_{χ(t)})²` on the grid of clock times `A(s_k)`.
pub fn y_uparrow_transform(y: &PathSample) -> Result<PathSample> {
    uparrow_clock(y)?.to_path(|v| v * v)
}

/// Samples of `Y_t` from `Y_0 = y0` via Lamperti: `η` is simulated from
/// `ln y0` and stopped as soon as its exponential functional passes `t`.
/// Fails with a horizon error if a path has not reached `t` by `cfg.horizon`.
pub fn sample_lamperti_y(t: f64, y0: f64, cfg: LampertiSimConfig, rng: RngSeed, n: usize) -> Result<Vec<f64>> {
    check_time(t)?;
    if !(y0 > 0.0 && y0.is_finite()) {
        return Err(Error::domain(format!("start must be positive, got {y0}")));
    }
    cfg.validate()?;
    let levy = TruncatedLevy::new(cfg.jump_cutoff)?;
    let steps = cfg.steps();
    (0..n as u64)
        .map(|i| {
            let mut stepper = EtaStepper::new(levy, cfg.step, rng.block(i));
            let mut xi = y0.ln();
            let mut clock = 0.0;
            for _ in 0..steps {
                let next = xi + stepper.step()?;
                let grown = clock + 0.5 * cfg.step * (xi.exp() + next.exp());
                if grown > t {
                    return Ok(xi.exp());
                }
                xi = next;
                clock = grown;
            }
            Err(Error::Horizon {
                requested: t,
                available: clock,
            })
        })
        .collect()
}
