//! Kolmogorov–Smirnov statistics and tabulated distribution functions.

use crate::error::{Error, Result};
use crate::quad::{Integrator, Tolerance};

/// Asymptotic 1% constant of the Kolmogorov distribution.
pub const KS_C_1PCT: f64 = 1.63;

fn check_sorted(xs: &[f64], what: &str) -> Result<()> {
    if xs.is_empty() {
        return Err(Error::domain(format!("{what}: empty sample")));
    }
    if xs.iter().any(|v| v.is_nan()) {
        return Err(Error::domain(format!("{what}: NaN in sample")));
    }
    if xs.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::domain(format!("{what}: sample is not sorted")));
    }
    Ok(())
}

/// `sup_x |F_n(x) - F(x)|` for a sorted sample.
pub fn ks_one_sample<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<f64> {
    check_sorted(samples, "ks_one_sample")?;
    let n = samples.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    Ok(d)
}

/// `sup_x |F_a(x) - F_b(x)|` for two sorted samples; ties are stepped over
/// together.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    check_sorted(a, "ks_two_sample")?;
    check_sorted(b, "ks_two_sample")?;
    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    Ok(d)
}

/// `c / √n`.
pub fn ks_critical_one_sample(n: usize, c: f64) -> f64 {
    c / (n as f64).sqrt()
}

/// `c √((n+m)/(nm))`.
pub fn ks_critical_two_sample(n: usize, m: usize, c: f64) -> f64 {
    let (n, m) = (n as f64, m as f64);
    c * ((n + m) / (n * m)).sqrt()
}

pub fn sorted(mut xs: Vec<f64>) -> Vec<f64> {
    xs.sort_by(f64::total_cmp);
    xs
}

/// Distribution function tabulated from a density by adaptive quadrature
/// on log-spaced knots, with cubic Hermite interpolation (the density gives
/// the slopes) and power-law extrapolation outside the knot range.
///
/// The table is not renormalized: `total_mass` reports how close the density
/// integrates to one.
#[derive(Debug, Clone)]
pub struct TabulatedCdf {
    knots: Vec<f64>,
    cum: Vec<f64>,
    pdf: Vec<f64>,
    /// Exponent of `pdf ~ x^p` below the first knot.
    head_power: f64,
    /// Exponent of `pdf ~ x^p` above the last knot.
    tail_power: f64,
    mass: f64,
    symmetric: bool,
}

const KNOTS_PER_DECADE: f64 = 120.0;
const LOW_DECADES: f64 = 6.0;
const HIGH_DECADES: f64 = 10.0;

impl TabulatedCdf {
    /// Distribution on `[0, ∞)`; `scale` is a typical magnitude of the variable.
    pub fn half_line<F: Fn(f64) -> Result<f64>>(pdf: F, scale: f64) -> Result<Self> {
        Self::build(pdf, scale, false)
    }

    /// Distribution on `ℝ` with an even density; the table covers `|x|`.
    pub fn symmetric<F: Fn(f64) -> Result<f64>>(pdf: F, scale: f64) -> Result<Self> {
        Self::build(pdf, scale, true)
    }

    fn build<F: Fn(f64) -> Result<f64>>(pdf: F, scale: f64, symmetric: bool) -> Result<Self> {
        if !(scale > 0.0) {
            return Err(Error::domain("tabulation scale must be positive"));
        }
        let lo = scale * 10f64.powf(-LOW_DECADES);
        let n = ((LOW_DECADES + HIGH_DECADES) * KNOTS_PER_DECADE) as usize;
        let ratio = 10f64.powf(1.0 / KNOTS_PER_DECADE);
        let knots: Vec<f64> = (0..=n).map(|k| lo * ratio.powi(k as i32)).collect();

        let failure = std::cell::RefCell::new(None);
        let f = |x: f64| match pdf(x) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        };
        let dens: Vec<f64> = knots.iter().map(|&x| f(x)).collect();
        if let Some(e) = failure.borrow_mut().take() {
            return Err(e);
        }

        let power = |i: usize, j: usize| {
            if dens[i] > 0.0 && dens[j] > 0.0 {
                (dens[j] / dens[i]).ln() / (knots[j] / knots[i]).ln()
            } else {
                f64::NAN
            }
        };
        let head_power = power(0, 1);
        let tail_power = power(n - 1, n);
        let head = if head_power.is_finite() && head_power > -1.0 {
            dens[0] * knots[0] / (head_power + 1.0)
        } else {
            0.0
        };
        let tail = if tail_power.is_finite() && tail_power < -1.0 {
            dens[n] * knots[n] / (-tail_power - 1.0)
        } else {
            0.0
        };

        let q = Integrator::new(Tolerance::new(1e-14, 1e-11).with_max_panels(20_000));
        let mut cum = Vec::with_capacity(n + 1);
        let mut acc = head;
        cum.push(acc);
        for w in knots.windows(2) {
            acc += q.integrate(f, w[0], w[1])?.value;
            if let Some(e) = failure.borrow_mut().take() {
                return Err(e);
            }
            cum.push(acc);
        }
        let mut mass = acc + tail;
        if symmetric {
            mass *= 2.0;
        }
        Ok(Self {
            knots,
            cum,
            pdf: dens,
            head_power,
            tail_power,
            mass,
            symmetric,
        })
    }

    pub fn total_mass(&self) -> f64 {
        self.mass
    }

    /// `∫_0^x pdf` for `x ≥ 0`.
    fn half(&self, x: f64) -> f64 {
        let n = self.knots.len() - 1;
        if x <= 0.0 {
            return 0.0;
        }
        if x < self.knots[0] {
            if !(self.head_power > -1.0) {
                return 0.0;
            }
            return self.cum[0] * (x / self.knots[0]).powf(self.head_power + 1.0);
        }
        if x >= self.knots[n] {
            if !(self.tail_power < -1.0) {
                return self.cum[n];
            }
            let tail_total = self.pdf[n] * self.knots[n] / (-self.tail_power - 1.0);
            let remaining = tail_total * (x / self.knots[n]).powf(self.tail_power + 1.0);
            return self.cum[n] + tail_total - remaining;
        }
        let i = match self.knots.binary_search_by(|k| k.total_cmp(&x)) {
            Ok(i) => return self.cum[i],
            Err(i) => i - 1,
        };
        let (x0, x1) = (self.knots[i], self.knots[i + 1]);
        let h = x1 - x0;
        let s = (x - x0) / h;
        let (h00, h10, h01, h11) = (
            (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s),
            s * (1.0 - s) * (1.0 - s),
            s * s * (3.0 - 2.0 * s),
            s * s * (s - 1.0),
        );
        h00 * self.cum[i] + h10 * h * self.pdf[i] + h01 * self.cum[i + 1] + h11 * h * self.pdf[i + 1]
    }

    pub fn eval(&self, x: f64) -> f64 {
        if self.symmetric {
            let h = self.half(x.abs());
            if x >= 0.0 {
                0.5 + h
            } else {
                0.5 - h
            }
        } else {
            self.half(x)
        }
    }
}
