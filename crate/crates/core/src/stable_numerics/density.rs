//! One-dimensional symmetric stable densities under the normalization
//! `E exp(iθX_t) = exp(-|θ|^α t)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::kernels::StabilityIndex;
use crate::quad::{GaussLegendre, Integrator, Tolerance};
use crate::special::ln_gamma;

/// `-ln(1e-16)`: the characteristic function must have decayed below 1e-16
/// at the cutoff.
const CF_DECAY: f64 = 36.84;
/// Values in `(-NEG_CLIP, 0)` are quadrature noise and are clipped to zero.
pub const NEG_CLIP: f64 = 1e-12;
const SERIES_TERMS: usize = 400;
/// Largest ratio `max |term| / |sum|` accepted from a series. Coefficients
/// come from `ln Γ` with relative errors near 1e-13, so this keeps series
/// results within about 1e-10.
const MAX_CANCELLATION: f64 = 1e3;
const MAX_HALF_PERIODS: f64 = 200_000.0;

/// Truncation policy for the characteristic-function integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierInversionConfig {
    pub cutoff: f64,
    pub nodes: usize,
}

impl FourierInversionConfig {
    /// Smallest cutoff with `exp(-cutoff^α t) < 1e-16`, padded slightly so
    /// the derivative integrand `θ e^{-θ^α t}` is covered too.
    pub fn for_params(alpha: StabilityIndex, t: f64) -> Self {
        Self {
            cutoff: ((CF_DECAY + 8.0) / t).powf(1.0 / alpha.value()),
            nodes: 15,
        }
    }

    pub fn validate(&self, alpha: StabilityIndex, t: f64) -> Result<()> {
        if !(self.cutoff > 0.0) || self.nodes == 0 {
            return Err(Error::config("Fourier cutoff and node count must be positive"));
        }
        if self.cutoff.powf(alpha.value()) * t < CF_DECAY {
            return Err(Error::config(format!(
                "Fourier cutoff {} too small for alpha={} t={}: exp(-cutoff^alpha t) >= 1e-16",
                self.cutoff,
                alpha.value(),
                t
            )));
        }
        Ok(())
    }
}

fn clip_density(v: f64, context: &str) -> Result<f64> {
    if v >= 0.0 {
        Ok(v)
    } else if v > -NEG_CLIP {
        Ok(0.0)
    } else {
        Err(Error::accuracy(format!("{context}: negative density"), -v, NEG_CLIP))
    }
}

/// What a series term `c_k w^{e_k}` is turned into.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Eval {
    /// `w^e`
    Value(f64),
    /// `d/dw w^e`
    Derivative(f64),
    /// `|w-h|^e - (w+h)^e`, the building block of `g(w-h) - g(w+h)`.
    Difference(f64, f64),
}

struct Prepared {
    eval: Eval,
    ln_a: f64,
    ln_ratio: f64,
}

impl Prepared {
    fn new(eval: Eval) -> Self {
        match eval {
            Eval::Value(w) | Eval::Derivative(w) => Self {
                eval,
                ln_a: w.ln(),
                ln_ratio: 0.0,
            },
            Eval::Difference(w, h) => Self {
                eval,
                ln_a: (w + h).ln(),
                ln_ratio: (-2.0 * w.min(h) / (w + h)).ln_1p(),
            },
        }
    }

    /// `(ln |P|, sign P)` for the transformed power `P`.
    fn power(&self, e: f64) -> (f64, f64) {
        match self.eval {
            Eval::Value(_) => (scaled_log(e, self.ln_a), 1.0),
            Eval::Derivative(_) => {
                if e == 0.0 {
                    (f64::NEG_INFINITY, 0.0)
                } else {
                    (e.abs().ln() + scaled_log(e - 1.0, self.ln_a), e.signum())
                }
            }
            Eval::Difference(..) => {
                let m = (e * self.ln_ratio).exp_m1();
                if m == 0.0 {
                    (f64::NEG_INFINITY, 0.0)
                } else {
                    (e * self.ln_a + m.abs().ln(), m.signum())
                }
            }
        }
    }
}

/// `e · ln w` with `0 · ln 0 = 0`.
fn scaled_log(e: f64, ln_w: f64) -> f64 {
    if e == 0.0 {
        0.0
    } else {
        e * ln_w
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Mode {
    /// Sum until the terms are negligible.
    Convergent,
    /// Sum up to the smallest term of a divergent asymptotic expansion.
    Asymptotic,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct SeriesSum {
    pub value: f64,
    pub max_term: f64,
    pub converged: bool,
}

impl SeriesSum {
    pub fn usable(&self) -> bool {
        self.converged && self.value != 0.0 && self.max_term <= MAX_CANCELLATION * self.value.abs()
    }
}

/// `norm · Σ_k sign_k exp(ln_coef_k) w^{e_k}` with the coefficients kept
/// in log form.
#[derive(Debug, Clone)]
pub(crate) struct PowerSeries {
    ln_coef: Vec<f64>,
    sign: Vec<f64>,
    exponent: Vec<f64>,
    norm: f64,
}

impl PowerSeries {
    /// Tail expansion of the symmetric stable density,
    /// `(1/π) Σ_{k≥1} (-1)^{k+1} Γ(kα+1)/k! sin(kπα/2) w^{-kα-1}`;
    /// convergent for α < 1, asymptotic for α > 1.
    pub fn stable_tail(alpha: f64, terms: usize) -> Self {
        Self::tail_family(alpha, alpha / 2.0, terms)
    }

    /// Series of the one-sided stable density with Laplace exponent `λ^β`,
    /// `(1/π) Σ_{n≥1} (-1)^{n-1} Γ(1+nβ)/n! sin(nπβ) s^{-nβ-1}`.
    pub fn one_sided(beta: f64, terms: usize) -> Self {
        Self::tail_family(beta, beta, terms)
    }

    fn tail_family(index: f64, sine_index: f64, terms: usize) -> Self {
        let mut out = Self {
            ln_coef: Vec::with_capacity(terms),
            sign: Vec::with_capacity(terms),
            exponent: Vec::with_capacity(terms),
            norm: 1.0 / PI,
        };
        for k in 1..=terms {
            let kf = k as f64;
            out.ln_coef.push(ln_gamma(kf * index + 1.0) - ln_gamma(kf + 1.0));
            let alt = if k % 2 == 1 { 1.0 } else { -1.0 };
            out.sign.push(alt * (kf * PI * sine_index).sin());
            out.exponent.push(-(kf * index + 1.0));
        }
        out
    }

    /// `(1/(πα)) Σ_{k≥0} (-1)^k Γ((2k+1)/α)/(2k)! w^{2k}`, convergent for α > 1.
    pub fn central(alpha: f64, terms: usize) -> Self {
        let mut out = Self {
            ln_coef: Vec::with_capacity(terms),
            sign: Vec::with_capacity(terms),
            exponent: Vec::with_capacity(terms),
            norm: 1.0 / (PI * alpha),
        };
        for k in 0..terms {
            let kf = k as f64;
            out.ln_coef
                .push(ln_gamma((2.0 * kf + 1.0) / alpha) - ln_gamma(2.0 * kf + 1.0));
            out.sign.push(if k % 2 == 0 { 1.0 } else { -1.0 });
            out.exponent.push(2.0 * kf);
        }
        out
    }

    /// Sums the series. Term magnitudes ignore `sign_k`, so vanishing sine
    /// factors never trigger an early stop. Convergent mode stops once a
    /// term is below `stop_rel · |sum|` and decreasing; asymptotic mode stops
    /// at the smallest term and reports convergence only if it is below
    /// `1e-15 · |sum|`.
    pub fn sum(&self, eval: Eval, mode: Mode, stop_rel: f64, max_terms: usize) -> SeriesSum {
        let prep = Prepared::new(eval);
        let mut sum = 0.0;
        let mut max_term: f64 = 0.0;
        let mut prev = f64::INFINITY;
        let n = max_terms.min(self.ln_coef.len());
        let finish = |sum: f64, max_term: f64, converged: bool| SeriesSum {
            value: sum * self.norm,
            max_term: max_term * self.norm,
            converged,
        };
        for k in 0..n {
            let (lp, sp) = prep.power(self.exponent[k]);
            if sp == 0.0 {
                continue;
            }
            let lm = self.ln_coef[k] + lp;
            if mode == Mode::Asymptotic && lm > prev {
                let smallest = prev.exp();
                return finish(sum, max_term, smallest <= 1e-15 * sum.abs());
            }
            let mag = lm.exp();
            sum += self.sign[k] * sp * mag;
            max_term = max_term.max(mag);
            if lm < prev && mag <= stop_rel * sum.abs() {
                return finish(sum, max_term, true);
            }
            prev = lm;
        }
        finish(sum, max_term, false)
    }
}

/// `∫_0^cutoff integrand(θ) dθ` on panels of half-periods of `freq`, refined
/// near the decay scale of `e^{-θ^α t}`.
fn fourier_integral<F: Fn(f64) -> f64>(
    alpha: f64,
    t: f64,
    freq: f64,
    cfg: &FourierInversionConfig,
    integrand: F,
) -> Result<f64> {
    let freq = freq.abs();
    let half_periods = cfg.cutoff * freq / PI;
    if half_periods > MAX_HALF_PERIODS {
        return Err(Error::config(format!(
            "Fourier inversion at frequency {freq} needs {half_periods:.0} oscillation panels"
        )));
    }
    let mut breaks = vec![0.0, cfg.cutoff];
    if freq > 0.0 {
        let step = PI / freq;
        let mut b = step;
        while b < cfg.cutoff {
            breaks.push(b);
            b += step;
        }
    }
    let scale = t.powf(-1.0 / alpha);
    let mut b = scale * 1e-4;
    while b < cfg.cutoff {
        breaks.push(b);
        b *= 4.0;
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    let rule = GaussLegendre::new(cfg.nodes);
    let integrator = Integrator::with_rule(&rule, Tolerance::new(1e-15, 1e-12).with_max_panels(800_000));
    Ok(integrator.integrate_breaks(integrand, &breaks)?.value)
}

fn fourier_value(alpha: f64, t: f64, z: f64, cfg: &FourierInversionConfig) -> Result<f64> {
    Ok(fourier_integral(alpha, t, z, cfg, |th| (th * z).cos() * (-th.powf(alpha) * t).exp())? / PI)
}

fn fourier_derivative(alpha: f64, t: f64, z: f64, cfg: &FourierInversionConfig) -> Result<f64> {
    Ok(fourier_integral(alpha, t, z, cfg, |th| {
        -th * (th * z).sin() * (-th.powf(alpha) * t).exp()
    })? / PI)
}

/// `q_t(w-h) - q_t(w+h) = (2/π) ∫ sin(θw) sin(θh) e^{-θ^α t} dθ`.
fn fourier_difference(alpha: f64, t: f64, w: f64, h: f64, cfg: &FourierInversionConfig) -> Result<f64> {
    let v = fourier_integral(alpha, t, w + h, cfg, |th| {
        (th * w).sin() * (th * h).sin() * (-th.powf(alpha) * t).exp()
    })?;
    Ok(2.0 * v / PI)
}

/// Density of `X_t - X_0` at `z` by direct Fourier inversion.
pub fn stable_density_1d(alpha: StabilityIndex, t: f64, z: f64, cfg: &FourierInversionConfig) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("time must be positive, got {t}")));
    }
    cfg.validate(alpha, t)?;
    clip_density(fourier_value(alpha.value(), t, z, cfg)?, "stable_density_1d")
}

/// `z`-derivative of [`stable_density_1d`], again by Fourier inversion.
pub fn stable_density_1d_derivative(
    alpha: StabilityIndex,
    t: f64,
    z: f64,
    cfg: &FourierInversionConfig,
) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("time must be positive, got {t}")));
    }
    cfg.validate(alpha, t)?;
    fourier_derivative(alpha.value(), t, z, cfg)
}

/// Fast evaluator for `q_t(z)`, `∂_z q_t(z)` and `q_t(y-x) - q_t(y+x)` at a
/// fixed index.
///
/// Works on the standardized variable `w = |z| t^{-1/α}` and picks, per
/// point, a convergent or asymptotic series whose cancellation is under
/// control, falling back to Fourier inversion otherwise. `α = 1` and `α = 2`
/// use their closed forms.
#[derive(Debug, Clone)]
pub struct StableDensity {
    alpha: StabilityIndex,
    tail: Option<PowerSeries>,
    central: Option<PowerSeries>,
    fourier: FourierInversionConfig,
}

impl StableDensity {
    pub fn new(alpha: StabilityIndex) -> Self {
        let a = alpha.value();
        let closed = a == 1.0 || a == 2.0;
        Self {
            alpha,
            tail: (!closed).then(|| PowerSeries::stable_tail(a, SERIES_TERMS)),
            central: (!closed && a > 1.0).then(|| PowerSeries::central(a, SERIES_TERMS)),
            fourier: FourierInversionConfig::for_params(alpha, 1.0),
        }
    }

    pub fn alpha(&self) -> StabilityIndex {
        self.alpha
    }

    fn scale(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::domain(format!("time must be positive, got {t}")));
        }
        Ok(t.powf(-1.0 / self.alpha.value()))
    }

    /// `q_t(0, z)`.
    pub fn density(&self, t: f64, z: f64) -> Result<f64> {
        let sc = self.scale(t)?;
        let v = self.standard(Eval::Value(z.abs() * sc))? * sc;
        clip_density(v, "stable density")
    }

    /// `∂_z q_t(0, z)`.
    pub fn derivative(&self, t: f64, z: f64) -> Result<f64> {
        let sc = self.scale(t)?;
        let d = self.standard(Eval::Derivative(z.abs() * sc))? * sc * sc;
        Ok(if z < 0.0 { -d } else { d })
    }

    /// `q_t(y - x) - q_t(y + x)` for `x, y ≥ 0`, without the cancellation
    /// of subtracting two nearby densities when `x` is small.
    pub fn difference(&self, t: f64, y: f64, x: f64) -> Result<f64> {
        if x < 0.0 || y < 0.0 {
            return Err(Error::domain("difference needs x, y >= 0"));
        }
        let sc = self.scale(t)?;
        // Symmetric in (x, y); a fixed order makes it symmetric to the bit.
        let (w, h) = (x.max(y), x.min(y));
        Ok(self.standard(Eval::Difference(w * sc, h * sc))? * sc)
    }

    fn standard(&self, eval: Eval) -> Result<f64> {
        let a = self.alpha.value();
        if a == 1.0 || a == 2.0 {
            return Ok(closed_form(a, eval));
        }
        if let Eval::Difference(w, h) = eval {
            if h == 0.0 || w == 0.0 {
                return Ok(0.0);
            }
            if h >= 0.25 * w.max(1.0) {
                return Ok(self.standard(Eval::Value((w - h).abs()))? - self.standard(Eval::Value(w + h))?);
            }
        }
        // Variable that decides between the small- and large-argument series.
        let (lo, hi) = match eval {
            Eval::Value(w) | Eval::Derivative(w) => (w, w),
            Eval::Difference(w, h) => (w - h, w + h),
        };
        let tail = self.tail.as_ref().expect("tail series present off the closed forms");
        if a < 1.0 {
            if lo > 0.0 {
                let s = tail.sum(eval, Mode::Convergent, 1e-17, SERIES_TERMS);
                if s.usable() {
                    return Ok(s.value);
                }
            }
        } else {
            let central = self.central.as_ref().expect("central series present for alpha > 1");
            if hi == 0.0 {
                return Ok(central.sum(eval, Mode::Convergent, 1e-17, SERIES_TERMS).value);
            }
            let try_tail = || {
                (lo > 0.0)
                    .then(|| tail.sum(eval, Mode::Asymptotic, 1e-17, SERIES_TERMS))
                    .filter(SeriesSum::usable)
            };
            let try_central =
                || Some(central.sum(eval, Mode::Convergent, 1e-17, SERIES_TERMS)).filter(SeriesSum::usable);
            let found = if lo > 3.0 {
                try_tail().or_else(try_central)
            } else {
                try_central().or_else(try_tail)
            };
            if let Some(s) = found {
                return Ok(s.value);
            }
        }
        match eval {
            Eval::Value(w) => fourier_value(a, 1.0, w, &self.fourier),
            Eval::Derivative(w) => fourier_derivative(a, 1.0, w, &self.fourier),
            Eval::Difference(w, h) => fourier_difference(a, 1.0, w, h, &self.fourier),
        }
    }
}

fn closed_form(alpha: f64, eval: Eval) -> f64 {
    if alpha == 1.0 {
        match eval {
            Eval::Value(w) => 1.0 / (PI * (1.0 + w * w)),
            Eval::Derivative(w) => -2.0 * w / (PI * (1.0 + w * w).powi(2)),
            Eval::Difference(w, h) => 4.0 * w * h / (PI * ((w - h) * (w - h) + 1.0) * ((w + h) * (w + h) + 1.0)),
        }
    } else {
        let g = |w: f64| (-w * w / 4.0).exp() / (4.0 * PI).sqrt();
        match eval {
            Eval::Value(w) => g(w),
            Eval::Derivative(w) => -w / 2.0 * g(w),
            Eval::Difference(w, h) => g(w - h) * -(-w * h).exp_m1(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(a: f64) -> StabilityIndex {
        StabilityIndex::new(a).unwrap()
    }

    #[test]
    fn fourier_reproduces_cauchy_and_gaussian() {
        let a1 = idx(1.0);
        let v = stable_density_1d(a1, 1.0, 0.0, &FourierInversionConfig::for_params(a1, 1.0)).unwrap();
        assert!((v - 1.0 / PI).abs() < 1e-8);
        let a2 = idx(2.0);
        let v = stable_density_1d(a2, 1.0, 0.0, &FourierInversionConfig::for_params(a2, 1.0)).unwrap();
        assert!((v - 0.282_094_791_773_878_14).abs() < 1e-8);
    }

    #[test]
    fn fourier_closed_form_grid() {
        let a1 = idx(1.0);
        let a2 = idx(2.0);
        for &t in &[0.3, 1.0, 2.5] {
            for &z in &[-4.0, -0.5, 0.0, 0.7, 3.0] {
                let c = stable_density_1d(a1, t, z, &FourierInversionConfig::for_params(a1, t)).unwrap();
                let want = t / (PI * (z * z + t * t));
                assert!((c - want).abs() < 1e-8, "cauchy t={t} z={z}");
                let g = stable_density_1d(a2, t, z, &FourierInversionConfig::for_params(a2, t)).unwrap();
                let want = (-z * z / (4.0 * t)).exp() / (4.0 * PI * t).sqrt();
                assert!((g - want).abs() < 1e-8, "gauss t={t} z={z}");
            }
        }
    }

    #[test]
    fn short_cutoff_is_a_config_error() {
        let a = idx(0.5);
        let cfg = FourierInversionConfig {
            cutoff: 10.0,
            nodes: 15,
        };
        assert!(matches!(stable_density_1d(a, 1.0, 0.3, &cfg), Err(Error::Config(_))));
    }

    #[test]
    fn hybrid_agrees_with_fourier() {
        for &a in &[0.5, 0.7, 0.8, 1.3, 1.5, 1.8] {
            let alpha = idx(a);
            let hybrid = StableDensity::new(alpha);
            for &t in &[0.5, 1.0, 2.0] {
                let cfg = FourierInversionConfig::for_params(alpha, t);
                for &z in &[0.0, 0.01, 0.1, 0.7, 2.0, 5.0, 12.0] {
                    let f = stable_density_1d(alpha, t, z, &cfg).unwrap();
                    let h = hybrid.density(t, z).unwrap();
                    assert!((f - h).abs() < 1e-9 * f.max(1e-3), "a={a} t={t} z={z}: {f} vs {h}");
                    let fd = stable_density_1d_derivative(alpha, t, z, &cfg).unwrap();
                    let hd = hybrid.derivative(t, z).unwrap();
                    assert!(
                        (fd - hd).abs() < 1e-9 * fd.abs().max(1e-3),
                        "d a={a} t={t} z={z}: {fd} vs {hd}"
                    );
                }
            }
        }
    }

    #[test]
    fn difference_matches_fourier_sine_form() {
        for &a in &[0.5, 0.8, 1.0, 1.3, 1.7] {
            let alpha = idx(a);
            let hybrid = StableDensity::new(alpha);
            let cfg = FourierInversionConfig::for_params(alpha, 1.0);
            for &(y, x) in &[
                (1.0, 1e-6),
                (0.3, 1e-4),
                (2.0, 0.01),
                (5.0, 0.2),
                (0.5, 2.0),
                (7.0, 1e-5),
            ] {
                let want = fourier_difference(a, 1.0, y, x, &cfg).unwrap();
                let got = hybrid.difference(1.0, y, x).unwrap();
                assert!(
                    (got - want).abs() <= 1e-9 * want.abs(),
                    "a={a} y={y} x={x}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn hybrid_far_tail_matches_leading_asymptotics() {
        // q_1(z) ~ Γ(α+1) sin(πα/2) / (π z^{α+1})
        for &a in &[0.5, 1.5] {
            let d = StableDensity::new(idx(a));
            let z: f64 = 1e6;
            let lead = (ln_gamma(a + 1.0)).exp() * (PI * a / 2.0).sin() / (PI * z.powf(a + 1.0));
            let v = d.density(1.0, z).unwrap();
            assert!((v / lead - 1.0).abs() < 1e-3, "a={a}");
        }
    }
}
