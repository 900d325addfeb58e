//! The acceptance checks. Each is a pure function of the configuration and
//! its own random streams, so checks may run in any order or concurrently.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::time::Instant;

use doob_mckean::generators::{
    bessel3_backward_residual, doob_lemma_check, generator_from_kernel_limit, generator_l_drift, generator_l_pv,
    semigroup_generator_check, test_battery, TestFunction,
};
use doob_mckean::kernels::{
    cauchy_density, cauchy_radial3_density, doob_mckean_kernel, dyson_stable_kernel, elliot_feller_image_sum,
    elliot_feller_kernel, elliot_feller_sine_series, ChamberPoint, DoobMcKeanKernel, IntervalSpec, KernelQuery,
    StabilityIndex,
};
use doob_mckean::levy_lamperti::{psi_closed, psi_from_levy_khintchine, psi_gamma_form};
use doob_mckean::quad::{geometric_breaks, Integrator, Tolerance};
use doob_mckean::samplers::{
    sample_lamperti_y, sample_pathwise_doob, sample_radial3_doob, sharded, simulate_eta, LampertiSimConfig, RngSeed,
};
use doob_mckean::stable_numerics::{gaussian_radial_density, pv_integral, subordinate, PositiveStable, PvConfig};
use doob_mckean::stats::{
    ks_critical_one_sample, ks_critical_two_sample, ks_one_sample, ks_two_sample, sorted, TabulatedCdf, KS_C_1PCT,
};
use doob_mckean::Error;
use serde_json::{json, Value};

use crate::config::{ExperimentConfig, Suite};
use crate::report::{Meta, TestReport, RUNTIME_KEY};
use crate::HarnessError;

type CheckResult = Result<Measured, HarnessError>;

/// What a check measured, before it is compared with its reference.
#[derive(Debug, Clone, Default)]
pub struct Measured {
    pub statistic: f64,
    pub meta: Meta,
    /// Failed sample dumps; any entry fails the check.
    pub io_errors: Vec<String>,
}

impl Measured {
    fn new(statistic: f64, meta: Value) -> Self {
        let meta = match meta {
            Value::Object(m) => m.into_iter().collect(),
            _ => Meta::new(),
        };
        Self {
            statistic,
            meta,
            io_errors: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Reference {
    Fixed(f64),
    /// `c/√n` for the configured Monte Carlo size.
    KsOneSample,
    /// `c·√((n+m)/nm)` with `n = m` the configured Monte Carlo size.
    KsTwoSample,
}

pub struct Check {
    pub name: &'static str,
    pub suite: Suite,
    /// Local stream index; distinct checks never share random numbers.
    pub stream: u64,
    pub reference: Reference,
    run: fn(&Ctx) -> CheckResult,
}

impl Check {
    pub fn reference(&self, cfg: &ExperimentConfig) -> f64 {
        if let Some(&r) = cfg.tolerances.get(self.name) {
            return r;
        }
        let n = cfg.samples.monte_carlo;
        match self.reference {
            Reference::Fixed(r) => r,
            Reference::KsOneSample => ks_critical_one_sample(n, KS_C_1PCT),
            Reference::KsTwoSample => ks_critical_two_sample(n, n, KS_C_1PCT),
        }
    }

    /// Runs the check; errors become a failed report rather than propagating.
    pub fn run(&self, cfg: &ExperimentConfig) -> TestReport {
        let ctx = Ctx {
            cfg,
            stream: self.stream,
        };
        let reference = self.reference(cfg);
        let start = Instant::now();
        let outcome = (self.run)(&ctx);
        let runtime = start.elapsed().as_secs_f64();
        let mut base = Meta::new();
        base.insert("seed".into(), json!(cfg.seed.seed));
        base.insert("stream".into(), json!(ctx.rng(0).stream_id));
        match outcome {
            Ok(m) => {
                let mut meta = base;
                meta.extend(m.meta);
                meta.insert(RUNTIME_KEY.into(), json!(runtime));
                let mut r = TestReport::new(self.name, m.statistic, reference, meta);
                if !m.io_errors.is_empty() {
                    r.passed = false;
                    r.meta.insert("io_error".into(), json!(m.io_errors));
                }
                r
            }
            Err(e) => {
                base.insert(RUNTIME_KEY.into(), json!(runtime));
                TestReport::errored(self.name, reference, &e, base)
            }
        }
    }
}

pub struct Ctx<'a> {
    pub cfg: &'a ExperimentConfig,
    stream: u64,
}

impl Ctx<'_> {
    /// Stream `k` of this check under the master seed.
    pub fn rng(&self, k: u64) -> RngSeed {
        let master = self.cfg.seed;
        RngSeed::new(master.seed, (master.stream_id << 12) | (self.stream << 4) | (k & 0xf))
    }

    fn sample<F>(&self, k: u64, n: usize, sampler: F) -> Result<Vec<f64>, HarnessError>
    where
        F: Fn(RngSeed, usize) -> doob_mckean::Result<Vec<f64>> + Sync,
    {
        Ok(sharded(self.rng(k), n, self.cfg.shards, sampler)?)
    }

    /// Writes `columns` to `<dump_dir>/<file>.csv` when dumps are enabled.
    fn dump(&self, m: &mut Measured, file: &str, columns: &[(&str, &[f64])]) {
        let Some(dir) = &self.cfg.dump_dir else { return };
        let path: PathBuf = dir.join(format!("{file}.csv"));
        match crate::write_columns(&path, columns) {
            Ok(()) => {
                m.meta.insert("dump".into(), json!(path.display().to_string()));
            }
            Err(e) => m.io_errors.push(format!("{}: {e}", path.display())),
        }
    }
}

fn alpha(a: f64) -> Result<StabilityIndex, HarnessError> {
    Ok(StabilityIndex::new(a)?)
}

fn kq(t: f64, x: f64, y: f64) -> doob_mckean::Result<KernelQuery> {
    KernelQuery::new(t, x, y)
}

// ---- principal values -------------------------------------------------------

fn pv_log_benchmark(_: &Ctx) -> CheckResult {
    let f = |u: f64| u * u * u.ln() / (u * u - 1.0).powi(2);
    let est = pv_integral(f, 1.0, (0.0, f64::INFINITY), &PvConfig::default())?;
    Ok(Measured::new(
        (est.value - PI * PI / 8.0).abs(),
        json!({"value": est.value, "extrapolation_error": est.extrapolation_error}),
    ))
}

fn pv_lemma_normalization(_: &Ctx) -> CheckResult {
    let mut worst: f64 = 0.0;
    let mut values = Vec::new();
    for x in [0.5, 1.0, 2.0] {
        let f = |y: f64| 2.0 * x * y / ((y - x) * (y + x).powi(2));
        let v = pv_integral(f, x, (0.0, f64::INFINITY), &PvConfig::default())?.value;
        worst = worst.max((v - 1.0).abs());
        values.push(json!({"x": x, "value": v}));
    }
    Ok(Measured::new(worst, json!({"values": values})))
}

fn pv_sinh_integral(_: &Ctx) -> CheckResult {
    let f = |x: f64| if x == 0.0 { 1.0 } else { x / x.sinh() };
    let q = Integrator::new(Tolerance::default());
    // x/sinh x < 1e-23 beyond 60.
    let v = q
        .integrate_breaks(f, &[0.0, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 60.0])?
        .value;
    Ok(Measured::new((v - PI * PI / 4.0).abs(), json!({"value": v})))
}

// ---- Lévy layer --------------------------------------------------------------

const PSI_GRID: [f64; 6] = [-5.0, -2.0, -0.5, 0.5, 2.0, 5.0];

fn psi_analytic_pair(_: &Ctx) -> CheckResult {
    let worst = PSI_GRID
        .iter()
        .map(|&z| (psi_closed(z) - psi_gamma_form(z)).norm())
        .fold(0.0, f64::max);
    Ok(Measured::new(worst, json!({"z": PSI_GRID})))
}

fn psi_levy_khintchine(_: &Ctx) -> CheckResult {
    let tol = Tolerance::new(1e-13, 1e-11);
    let mut worst: f64 = 0.0;
    for &z in &PSI_GRID {
        let lk = psi_from_levy_khintchine(z, &tol)?;
        worst = worst
            .max((lk - psi_closed(z)).norm())
            .max((lk - psi_gamma_form(z)).norm());
    }
    Ok(Measured::new(worst, json!({"z": PSI_GRID})))
}

fn eta_mean_derivative(_: &Ctx) -> CheckResult {
    let h = 1e-5;
    let d = (psi_closed(h) - psi_closed(-h)) / (2.0 * h);
    let mean = doob_mckean::levy_lamperti::ComplexValue::i() * d;
    Ok(Measured::new(
        (mean - PI / 2.0).norm(),
        json!({"re": mean.re, "im": mean.im, "h": h}),
    ))
}

fn eta_mean_slope(ctx: &Ctx) -> CheckResult {
    let sim = LampertiSimConfig::default();
    let n = ctx.cfg.samples.eta_paths;
    let ends = ctx.sample(0, n, |r, m| {
        (0..m as u64)
            .map(|i| Ok(*simulate_eta(sim, r.block(i))?.values().last().unwrap_or(&f64::NAN)))
            .collect()
    })?;
    let slope = ends.iter().sum::<f64>() / (n as f64 * sim.horizon);
    let up = ends.iter().filter(|&&v| v > 0.0).count() as f64 / n as f64;
    let mut m = Measured::new(
        (slope - PI / 2.0).abs(),
        json!({"n": n, "slope": slope, "fraction_up": up, "horizon": sim.horizon,
               "step": sim.step, "jump_cutoff": sim.jump_cutoff}),
    );
    ctx.dump(&mut m, "levy.eta-mean-slope", &[("eta_end", &ends)]);
    Ok(m)
}

fn lamperti_y_ks(ctx: &Ctx) -> CheckResult {
    let sim = LampertiSimConfig {
        horizon: 50.0,
        ..Default::default()
    };
    let (t, y0) = (1.0, 1.0);
    let n = ctx.cfg.samples.lamperti_paths;
    let y = sorted(ctx.sample(0, n, |r, m| sample_lamperti_y(t, y0, sim, r, m))?);
    let cdf = TabulatedCdf::half_line(|v| cauchy_radial3_density(kq(t, y0, v)?), t + y0)?;
    let d = ks_one_sample(&y, |v| cdf.eval(v))?;
    let mut m = Measured::new(
        d,
        json!({"n": n, "alpha": 1.0, "t": t, "x": y0, "horizon": sim.horizon,
               "step": sim.step, "jump_cutoff": sim.jump_cutoff}),
    );
    ctx.dump(&mut m, "levy.lamperti-y-ks", &[("y", &y)]);
    Ok(m)
}

// ---- kernels ------------------------------------------------------------------

fn subordination_identity(_: &Ctx) -> CheckResult {
    let law = PositiveStable::new(alpha(1.0)?)?;
    let mut worst: f64 = 0.0;
    for t in [0.25, 0.5, 1.0, 2.0, 4.0] {
        for z in [0.0, 0.3, 1.0, 2.5, 6.0] {
            let v = subordinate(&law, t, z, |tau| gaussian_radial_density(1, tau, 0.0, z) / 2.0)?;
            worst = worst.max((v - cauchy_density(kq(t, 0.0, z)?)?).abs());
        }
    }
    Ok(Measured::new(worst, json!({"alpha": 1.0})))
}

fn cauchy_closed_form(_: &Ctx) -> CheckResult {
    let a = alpha(1.0)?;
    let mut worst: f64 = 0.0;
    for t in [0.1, 0.5, 1.0, 3.0] {
        for x in [0.0, 1e-3, 0.5, 1.0, 4.0] {
            for y in [0.0, 0.2, 1.0, 2.5, 7.0] {
                let q = kq(t, x, y)?;
                worst = worst.max((doob_mckean_kernel(a, q)? - cauchy_radial3_density(q)?).abs());
            }
        }
    }
    Ok(Measured::new(worst, json!({"alpha": 1.0})))
}

fn conservativeness(_: &Ctx) -> CheckResult {
    let mut worst: f64 = 0.0;
    for a in [0.5, 1.0, 1.5] {
        let k = DoobMcKeanKernel::new(alpha(a)?)?;
        for t in [0.5f64, 1.0, 2.0] {
            for x in [0.0, 0.5, 1.0, 3.0] {
                let cdf = TabulatedCdf::half_line(|y| k.eval(kq(t, x, y)?), t.powf(1.0 / a) + x)?;
                worst = worst.max((cdf.total_mass() - 1.0).abs());
            }
        }
    }
    Ok(Measured::new(worst, json!({"alpha": [0.5, 1.0, 1.5]})))
}

fn half_line_integral<F: Fn(f64) -> f64>(f: F, scale: f64) -> Result<f64, HarnessError> {
    let q = Integrator::new(Tolerance::new(1e-14, 1e-11).with_max_panels(50_000));
    let mut breaks = vec![0.0];
    breaks.extend(geometric_breaks(1e-4 * scale, 1e3 * scale, 4));
    let reach = *breaks.last().unwrap_or(&scale);
    Ok(q.integrate_breaks(&f, &breaks)?.value + q.integrate_reciprocal_tail(&f, reach)?.value)
}

fn chapman_kolmogorov(_: &Ctx) -> CheckResult {
    let k = |t: f64, x: f64, y: f64| kq(t, x, y).and_then(cauchy_radial3_density).unwrap_or(f64::NAN);
    let mut worst: f64 = 0.0;
    for (s, t) in [(0.5, 0.5), (1.0, 2.0)] {
        for (x, y) in [(0.5, 1.0), (1.0, 3.0), (0.0, 1.0)] {
            let lhs = half_line_integral(|z| k(s, x, z) * k(t, z, y), s + t + x + y)?;
            worst = worst.max((lhs - k(s + t, x, y)).abs());
        }
    }
    Ok(Measured::new(worst, json!({"alpha": 1.0})))
}

fn scaling(_: &Ctx) -> CheckResult {
    let t = 1.0;
    let mut worst: f64 = 0.0;
    for a in [0.5, 1.0, 1.5] {
        let k = DoobMcKeanKernel::new(alpha(a)?)?;
        for c in [0.5f64, 2.0, 10.0] {
            for (x, y) in [(0.0, 0.7), (1.0, 1.3), (2.0, 0.4)] {
                let l = c * k.eval(kq(t, c * x, c * y)?)?;
                let r = k.eval(kq(c.powf(-a) * t, x, y)?)?;
                worst = worst.max((l - r).abs());
            }
        }
    }
    Ok(Measured::new(worst, json!({"t": t})))
}

fn bessel3_backward(_: &Ctx) -> CheckResult {
    let mut worst: f64 = 0.0;
    for t in [0.5, 1.0, 2.0] {
        for (x, y) in [(1.0, 1.0), (2.0, 0.3), (0.5, 3.0)] {
            worst = worst.max(bessel3_backward_residual(t, x, y)?);
        }
    }
    Ok(Measured::new(worst, json!({"points": 9})))
}

const EF_A: f64 = 1.0;

fn ef_spec() -> Result<IntervalSpec, HarnessError> {
    Ok(IntervalSpec::new(EF_A, 200)?)
}

fn elliot_feller_series(_: &Ctx) -> CheckResult {
    let spec = ef_spec()?;
    let mut worst: f64 = 0.0;
    for t in [0.1, 0.5, 1.0] {
        for x in [0.2, 0.5, 0.8] {
            for y in [0.1, 0.5, 0.9] {
                let q = kq(t, x, y)?;
                worst = worst.max((elliot_feller_kernel(q, spec)? - elliot_feller_sine_series(q, EF_A, 2000)?).abs());
            }
        }
    }
    Ok(Measured::new(worst, json!({"a": EF_A, "images": 200, "terms": 2000})))
}

fn elliot_feller_boundary(_: &Ctx) -> CheckResult {
    let spec = ef_spec()?;
    let (mut worst, mut raw): (f64, f64) = (0.0, 0.0);
    for t in [0.1, 0.5, 1.0] {
        for inner in [0.2, 0.5, 0.8] {
            for edge in [0.0, EF_A] {
                for q in [kq(t, edge, inner)?, kq(t, inner, edge)?] {
                    worst = worst.max(elliot_feller_kernel(q, spec)?.abs());
                    raw = raw.max(elliot_feller_image_sum(q, spec)?.value.abs());
                }
            }
        }
    }
    Ok(Measured::new(worst, json!({"a": EF_A, "image_sum_at_boundary": raw})))
}

fn elliot_feller_mass(_: &Ctx) -> CheckResult {
    let spec = ef_spec()?;
    let q = Integrator::new(Tolerance::new(1e-13, 1e-11));
    let mut worst = f64::NEG_INFINITY;
    let mut masses = Vec::new();
    for t in [0.1, 0.5, 1.0] {
        for x in [0.1, 0.5, 0.9] {
            let f = |y: f64| {
                kq(t, x, y)
                    .and_then(|q| elliot_feller_kernel(q, spec))
                    .unwrap_or(f64::NAN)
            };
            let m = q.integrate_breaks(f, &[0.0, x, EF_A])?.value;
            worst = worst.max(m);
            masses.push(m);
        }
    }
    Ok(Measured::new(worst, json!({"a": EF_A, "masses": masses})))
}

const DYSON_X: [f64; 2] = [1.0, -1.0];

fn dyson_nonnegative(_: &Ctx) -> CheckResult {
    let a = alpha(1.0)?;
    let x = ChamberPoint::new(DYSON_X.to_vec())?;
    let grid: [f64; 10] = [-4.0, -2.0, -1.0, -0.3, 0.0, 0.2, 1.0, 1.5, 3.0, 6.0];
    let mut min = f64::INFINITY;
    let mut points = 0;
    for t in [0.25, 1.0, 4.0] {
        for (i, &y1) in grid.iter().enumerate() {
            for &y2 in &grid[..i] {
                let y = ChamberPoint::new(vec![y1.max(y2), y1.min(y2)])?;
                min = min.min(dyson_stable_kernel(a, t, &x, &y)?);
                points += 1;
            }
        }
    }
    Ok(Measured::new(
        -min,
        json!({"alpha": 1.0, "x": DYSON_X, "min": min, "points": points}),
    ))
}

fn dyson_mass(_: &Ctx) -> CheckResult {
    let (a, t) = (alpha(1.0)?, 1.0);
    let x = ChamberPoint::new(DYSON_X.to_vec())?;
    let r2 = std::f64::consts::SQRT_2;
    // Rotated coordinates u = (y₁+y₂)/√2 ∈ ℝ, v = (y₁-y₂)/√2 > 0; unit Jacobian.
    let density = |u: f64, v: f64| -> f64 {
        if v <= 0.0 {
            return 0.0;
        }
        ChamberPoint::new(vec![(u + v) / r2, (u - v) / r2])
            .and_then(|y| dyson_stable_kernel(a, t, &x, &y))
            .unwrap_or(f64::NAN)
    };
    let inner_q = Integrator::new(Tolerance::new(1e-11, 1e-9).with_max_panels(20_000));
    let line = |v: f64| -> f64 {
        let reach = 8.0 + 2.0 * v;
        let breaks = [-reach, -2.0, -0.5, 0.0, 0.5, 2.0, reach];
        let mid = inner_q.integrate_breaks(|u| density(u, v), &breaks);
        let right = inner_q.integrate_reciprocal_tail(|u| density(u, v), reach);
        let left = inner_q.integrate_reciprocal_tail(|u| density(-u, v), reach);
        match (mid, right, left) {
            (Ok(m), Ok(r), Ok(l)) => m.value + r.value + l.value,
            _ => f64::NAN,
        }
    };
    let outer_q = Integrator::new(Tolerance::new(1e-9, 1e-8).with_max_panels(5_000));
    let breaks = [0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 10.0];
    let mass = outer_q.integrate_breaks(line, &breaks)?.value + outer_q.integrate_reciprocal_tail(line, 10.0)?.value;
    if !mass.is_finite() {
        return Err(Error::Accuracy {
            context: "Dyson chamber integral".into(),
            achieved: f64::INFINITY,
            required: 1e-3,
        }
        .into());
    }
    Ok(Measured::new(
        (mass - 1.0).abs(),
        json!({"alpha": 1.0, "t": t, "x": DYSON_X, "mass": mass}),
    ))
}

// ---- generators ----------------------------------------------------------------

const GENERATOR_GRID: [f64; 4] = [0.5, 1.0, 2.0, 4.0];

fn over_battery(f: impl Fn(&TestFunction, f64) -> doob_mckean::Result<f64>) -> Result<f64, HarnessError> {
    let mut worst: f64 = 0.0;
    for g in &test_battery() {
        for &x in &GENERATOR_GRID {
            worst = worst.max(f(g, x)?);
        }
    }
    Ok(worst)
}

fn generator_forms(_: &Ctx) -> CheckResult {
    let cfg = PvConfig::default();
    let worst = over_battery(|f, x| Ok((generator_l_pv(f, x, &cfg)? - generator_l_drift(f, x, &cfg)?).abs()))?;
    Ok(Measured::new(
        worst,
        json!({"functions": test_battery().len(), "x": GENERATOR_GRID}),
    ))
}

fn doob_lemma(_: &Ctx) -> CheckResult {
    let cfg = PvConfig::default();
    let worst = over_battery(|f, x| Ok(doob_lemma_check(f, x, &cfg)?.residual))?;
    Ok(Measured::new(
        worst,
        json!({"functions": test_battery().len(), "x": GENERATOR_GRID}),
    ))
}

/// Statistic is `1 - order`, so the check passes when the order is at least 0.9.
fn kernel_limit_order(_: &Ctx) -> CheckResult {
    let f = TestFunction::gaussian(1.0, 1.0);
    let x = 1.0;
    let target = generator_l_pv(&f, x, &PvConfig::default())?;
    let ts = [0.2, 0.1, 0.05, 0.025, 0.0125];
    let vals = generator_from_kernel_limit(&f, x, &ts)?;
    let errs: Vec<f64> = vals.iter().map(|v| (v - target).abs()).collect();
    let order = (errs[3] / errs[4]).log2();
    Ok(Measured::new(
        1.0 - order,
        json!({"x": x, "t": ts, "errors": errs, "order": order}),
    ))
}

fn semigroup_consistency(_: &Ctx) -> CheckResult {
    let cfg = PvConfig::default();
    let f = TestFunction::gaussian(1.0, 1.0);
    let t = 0.5;
    let mut worst: f64 = 0.0;
    for x in [0.0, 1.0] {
        let c = semigroup_generator_check(&f, x, t, &cfg)?;
        worst = worst.max((c.time_derivative - c.generator_side).abs());
    }
    Ok(Measured::new(worst, json!({"alpha": 1.0, "t": t, "x": [0.0, 1.0]})))
}

// ---- Monte Carlo ------------------------------------------------------------------

fn radial_ks(ctx: &Ctx, a: f64, x: f64, file: &str) -> CheckResult {
    let t = 1.0;
    let n = ctx.cfg.samples.monte_carlo;
    let idx = alpha(a)?;
    let k = DoobMcKeanKernel::new(idx)?;
    let cdf = TabulatedCdf::half_line(|y| k.eval(kq(t, x, y)?), t + x)?;
    let s = sorted(ctx.sample(0, n, |r, m| sample_radial3_doob(idx, t, x, r, m))?);
    let d = ks_one_sample(&s, |y| cdf.eval(y))?;
    let mut m = Measured::new(
        d,
        json!({"n": n, "alpha": a, "t": t, "x": x, "cdf_mass": cdf.total_mass()}),
    );
    ctx.dump(&mut m, file, &[("y", &s)]);
    Ok(m)
}

fn pathwise_two_sample(ctx: &Ctx) -> CheckResult {
    let (t, x) = (1.0, 1.0);
    let n = ctx.cfg.samples.monte_carlo;
    let p = sorted(ctx.sample(0, n, |r, m| sample_pathwise_doob(t, x, r, m))?);
    let r = sorted(ctx.sample(1, n, |r, m| sample_radial3_doob(StabilityIndex::new(1.0)?, t, x, r, m))?);
    let d = ks_two_sample(&p, &r)?;
    let mut m = Measured::new(d, json!({"n": n, "alpha": 1.0, "t": t, "x": x}));
    ctx.dump(&mut m, "mc.pathwise-two-sample", &[("pathwise", &p), ("radial", &r)]);
    Ok(m)
}

macro_rules! radial_cell {
    ($name:literal, $stream:expr, $a:expr, $x:expr) => {
        Check {
            name: $name,
            suite: Suite::Theorem1Mc,
            stream: $stream,
            reference: Reference::KsOneSample,
            run: |c| radial_ks(c, $a, $x, $name),
        }
    };
}

const fn fixed(name: &'static str, suite: Suite, stream: u64, r: f64, run: fn(&Ctx) -> CheckResult) -> Check {
    Check {
        name,
        suite,
        stream,
        reference: Reference::Fixed(r),
        run,
    }
}

static REGISTRY: [Check; 30] = [
    fixed("pv.log-benchmark", Suite::PvBenchmarks, 1, 1e-8, pv_log_benchmark),
    fixed(
        "pv.lemma-normalization",
        Suite::PvBenchmarks,
        2,
        1e-8,
        pv_lemma_normalization,
    ),
    fixed("pv.sinh-integral", Suite::PvBenchmarks, 3, 1e-8, pv_sinh_integral),
    fixed("levy.psi-analytic-pair", Suite::Levy, 4, 1e-10, psi_analytic_pair),
    fixed("levy.psi-levy-khintchine", Suite::Levy, 5, 1e-5, psi_levy_khintchine),
    fixed("levy.eta-mean-derivative", Suite::Levy, 6, 1e-6, eta_mean_derivative),
    fixed("levy.eta-mean-slope", Suite::Levy, 7, 0.05, eta_mean_slope),
    fixed("levy.lamperti-y-ks", Suite::Levy, 8, 0.02, lamperti_y_ks),
    fixed(
        "kernels.subordination-identity",
        Suite::Kernels,
        9,
        1e-6,
        subordination_identity,
    ),
    fixed(
        "kernels.cauchy-closed-form",
        Suite::Kernels,
        10,
        1e-12,
        cauchy_closed_form,
    ),
    fixed("kernels.conservativeness", Suite::Kernels, 11, 1e-5, conservativeness),
    fixed(
        "kernels.chapman-kolmogorov",
        Suite::Kernels,
        12,
        1e-4,
        chapman_kolmogorov,
    ),
    fixed("kernels.scaling", Suite::Kernels, 13, 1e-6, scaling),
    fixed("kernels.bessel3-backward", Suite::Kernels, 14, 1e-8, bessel3_backward),
    fixed(
        "kernels.elliot-feller-series",
        Suite::Kernels,
        15,
        1e-8,
        elliot_feller_series,
    ),
    fixed(
        "kernels.elliot-feller-boundary",
        Suite::Kernels,
        16,
        0.0,
        elliot_feller_boundary,
    ),
    fixed(
        "kernels.elliot-feller-mass",
        Suite::Kernels,
        17,
        1.0,
        elliot_feller_mass,
    ),
    fixed("kernels.dyson-nonnegative", Suite::Kernels, 18, 0.0, dyson_nonnegative),
    fixed("kernels.dyson-mass", Suite::Kernels, 19, 1e-3, dyson_mass),
    fixed(
        "generators.pv-vs-compensated",
        Suite::Generators,
        20,
        1e-5,
        generator_forms,
    ),
    fixed("generators.doob-lemma", Suite::Generators, 21, 1e-5, doob_lemma),
    fixed(
        "generators.kernel-limit-order",
        Suite::Generators,
        22,
        0.1,
        kernel_limit_order,
    ),
    fixed(
        "generators.semigroup-consistency",
        Suite::Generators,
        23,
        1e-3,
        semigroup_consistency,
    ),
    radial_cell!("mc.radial-ks-alpha0.5-x0", 24, 0.5, 0.0),
    radial_cell!("mc.radial-ks-alpha0.5-x1", 25, 0.5, 1.0),
    radial_cell!("mc.radial-ks-alpha1-x0", 26, 1.0, 0.0),
    radial_cell!("mc.radial-ks-alpha1-x1", 27, 1.0, 1.0),
    radial_cell!("mc.radial-ks-alpha1.5-x0", 28, 1.5, 0.0),
    radial_cell!("mc.radial-ks-alpha1.5-x1", 29, 1.5, 1.0),
    Check {
        name: "mc.pathwise-two-sample",
        suite: Suite::Theorem1Mc,
        stream: 30,
        reference: Reference::KsTwoSample,
        run: pathwise_two_sample,
    },
];

pub fn registry() -> &'static [Check] {
    &REGISTRY
}

pub fn find(name: &str) -> Option<&'static Check> {
    REGISTRY.iter().find(|c| c.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn names_and_streams_are_unique() {
        let names: HashSet<_> = REGISTRY.iter().map(|c| c.name).collect();
        let streams: HashSet<_> = REGISTRY.iter().map(|c| c.stream).collect();
        assert_eq!(names.len(), REGISTRY.len());
        assert_eq!(streams.len(), REGISTRY.len());
        assert!(REGISTRY.iter().all(|c| c.stream < 256));
    }

    #[test]
    fn every_named_suite_has_checks() {
        for s in Suite::NAMED {
            assert!(REGISTRY.iter().any(|c| c.suite == s), "{s}");
        }
    }
}
