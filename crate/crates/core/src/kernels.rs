//! Closed-form and h-transformed transition densities.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stable_numerics::{isotropic_stable_density, StableDensity, NEG_CLIP};

pub use crate::stable_numerics::subordinator_density;

/// Stability index `α ∈ (0, 2]`. `α = 2` is Brownian motion with
/// variance `2t` and is only meaningful for validation.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct StabilityIndex(f64);

impl StabilityIndex {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha <= 2.0 {
            Ok(Self(alpha))
        } else {
            Err(Error::domain(format!(
                "stability index must lie in (0, 2], got {alpha}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_pure_jump(self) -> bool {
        self.0 < 2.0
    }

    pub fn require_pure_jump(self) -> Result<()> {
        if self.is_pure_jump() {
            Ok(())
        } else {
            Err(Error::domain("operation requires alpha in (0, 2)"))
        }
    }
}

impl TryFrom<f64> for StabilityIndex {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<StabilityIndex> for f64 {
    fn from(a: StabilityIndex) -> f64 {
        a.0
    }
}

/// Argument `(t, x, y)` of a transition density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelQuery {
    pub t: f64,
    pub x: f64,
    pub y: f64,
}

impl KernelQuery {
    pub fn new(t: f64, x: f64, y: f64) -> Result<Self> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::domain(format!("time must be positive, got {t}")));
        }
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::domain("space arguments must be finite"));
        }
        Ok(Self { t, x, y })
    }

    fn check(&self) -> Result<()> {
        Self::new(self.t, self.x, self.y).map(|_| ())
    }

    fn check_half_line(&self) -> Result<()> {
        self.check()?;
        if self.x < 0.0 || self.y < 0.0 {
            return Err(Error::domain(format!(
                "half-line kernel needs x, y >= 0, got x={} y={}",
                self.x, self.y
            )));
        }
        Ok(())
    }
}

/// The interval `[0, a]` and the image-sum truncation `|n| ≤ n_images`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalSpec {
    pub a: f64,
    pub n_images: usize,
}

impl IntervalSpec {
    pub fn new(a: f64, n_images: usize) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::domain(format!("interval length must be positive, got {a}")));
        }
        if n_images == 0 {
            return Err(Error::domain("n_images must be at least 1"));
        }
        Ok(Self { a, n_images })
    }
}

/// A point of the open Weyl chamber `x_1 > x_2 > … > x_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChamberPoint {
    coords: Vec<f64>,
}

impl ChamberPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::domain("chamber point needs at least one coordinate"));
        }
        if coords.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("chamber coordinates must be finite"));
        }
        if coords.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::domain(format!(
                "coordinates {coords:?} are not strictly decreasing"
            )));
        }
        Ok(Self { coords })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// `(2πs)^{-d/2} exp(-|y-x|²/2s)`.
pub fn gauss_heat_kernel(d: usize, s: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::domain(format!("heat kernel time must be positive, got {s}")));
    }
    if d == 0 || x.len() != d || y.len() != d {
        return Err(Error::domain(format!("expected two {d}-vectors")));
    }
    let r2: f64 = x.iter().zip(y).map(|(a, b)| (b - a) * (b - a)).sum();
    Ok((2.0 * PI * s).powf(-(d as f64) / 2.0) * (-r2 / (2.0 * s)).exp())
}

/// `q_t(x, y) = (1/π) t / ((y-x)² + t²)`.
pub fn cauchy_density(q: KernelQuery) -> Result<f64> {
    q.check()?;
    let z = q.y - q.x;
    Ok(q.t / (PI * (z * z + q.t * q.t)))
}

/// Bessel-3 kernel `(y/x)(p_t(x,y) - p_t(x,-y))` for the standard heat
/// kernel `p`; at `x = 0` the entrance density `2y²/t · p_t(0, y)`.
pub fn bessel3_density(q: KernelQuery) -> Result<f64> {
    q.check_half_line()?;
    let KernelQuery { t, x, y } = q;
    let g = |z: f64| (-z * z / (2.0 * t)).exp() / (2.0 * PI * t).sqrt();
    if x == 0.0 {
        return Ok(2.0 * y * y / t * g(y));
    }
    // p(x,y) - p(x,-y) = p(x,y) (1 - e^{-2xy/t})
    Ok(y / x * g(y - x) * -(-2.0 * x * y / t).exp_m1())
}

/// Explicit radial 3-d Cauchy density
/// `(1/π) 4y²t / ((y²-x²)² + 2t²(y²+x²) + t⁴)`.
pub fn cauchy_radial3_density(q: KernelQuery) -> Result<f64> {
    q.check_half_line()?;
    let KernelQuery { t, x, y } = q;
    let (x2, y2, t2) = (x * x, y * y, t * t);
    let den = (y2 - x2) * (y2 - x2) + 2.0 * t2 * (y2 + x2) + t2 * t2;
    Ok(4.0 * y2 * t / (PI * den))
}

/// `q*_t(x, y) = (y/x)(q_t(x, y) - q_t(x, -y))` for the symmetric
/// `α`-stable kernel `q`, with the `x → 0` limit `-2y ∂q_t(y)`.
#[derive(Debug, Clone)]
pub struct DoobMcKeanKernel {
    density: StableDensity,
}

impl DoobMcKeanKernel {
    pub fn new(alpha: StabilityIndex) -> Result<Self> {
        alpha.require_pure_jump()?;
        Ok(Self {
            density: StableDensity::new(alpha),
        })
    }

    pub fn alpha(&self) -> StabilityIndex {
        self.density.alpha()
    }

    pub fn eval(&self, q: KernelQuery) -> Result<f64> {
        q.check_half_line()?;
        let KernelQuery { t, x, y } = q;
        if y == 0.0 {
            return Ok(0.0);
        }
        let v = if x == 0.0 {
            -2.0 * y * self.density.derivative(t, y)?
        } else {
            y / x * self.density.difference(t, y, x)?
        };
        if v >= 0.0 {
            Ok(v)
        } else if v > -NEG_CLIP {
            Ok(0.0)
        } else {
            Err(Error::accuracy("Doob-McKean kernel: negative value", -v, NEG_CLIP))
        }
    }
}

pub fn doob_mckean_kernel(alpha: StabilityIndex, q: KernelQuery) -> Result<f64> {
    DoobMcKeanKernel::new(alpha)?.eval(q)
}

/// Killed Cauchy kernel on `[0, a]` by the image sum
/// `Σ_{|n|≤N} [q_t(x, 2an+y) - q_t(x, 2an-y)]`, together with a bound on
/// the neglected images.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageSum {
    pub value: f64,
    /// Bound on `|Σ_{|n|>N} …|` before the tail correction.
    pub tail_bound: f64,
    /// Leading-order estimate of the neglected images, included in `value`.
    pub tail_correction: f64,
}

pub fn elliot_feller_image_sum(q: KernelQuery, spec: IntervalSpec) -> Result<ImageSum> {
    q.check()?;
    let IntervalSpec { a, n_images } = IntervalSpec::new(spec.a, spec.n_images)?;
    let KernelQuery { t, x, y } = q;
    if !(0.0..=a).contains(&x) || !(0.0..=a).contains(&y) {
        return Err(Error::domain(format!("x={x}, y={y} must lie in [0, {a}]")));
    }
    let f = |u: f64| t / (PI * (u * u + t * t));
    let mut sum = f(y - x) - f(-y - x);
    for n in 1..=n_images {
        let u = 2.0 * a * n as f64;
        sum += (f(u + y - x) + f(u - y + x)) - (f(u - y - x) + f(u + y + x));
    }
    // Paired images n, -n differ by -4xy f''(2an) + O(f''''); Euler-Maclaurin
    // (midpoint) sums the tail of f'' to -f'(2a(N+1/2)) / 2a.
    let u_n = 2.0 * a * (n_images as f64 + 0.5);
    let fprime = -2.0 * t * u_n / (PI * (u_n * u_n + t * t).powi(2));
    let tail_correction = 4.0 * x * y * fprime / (2.0 * a);
    let nf = n_images as f64;
    let tail_bound = 24.0 * x * y * t / (PI * (2.0 * a).powi(4)) * (1.0 / nf.powi(4) + 1.0 / (3.0 * nf.powi(3)));
    Ok(ImageSum {
        value: sum + tail_correction,
        tail_bound,
        tail_correction,
    })
}

pub fn elliot_feller_kernel(q: KernelQuery, spec: IntervalSpec) -> Result<f64> {
    let s = elliot_feller_image_sum(q, spec)?;
    let (x, y, a) = (q.x, q.y, spec.a);
    if x == 0.0 || y == 0.0 || x == a || y == a {
        return Ok(0.0);
    }
    Ok(s.value)
}

/// Spectral form `(2/a) Σ_{k≥1} sin(kπx/a) sin(kπy/a) e^{-t kπ/a}` of the
/// killed Cauchy kernel on `[0, a]`.
pub fn elliot_feller_sine_series(q: KernelQuery, a: f64, terms: usize) -> Result<f64> {
    q.check()?;
    let w = PI / a;
    Ok((1..=terms)
        .map(|k| {
            let k = k as f64;
            (k * w * q.x).sin() * (k * w * q.y).sin() * (-q.t * k * w).exp()
        })
        .sum::<f64>()
        * 2.0
        / a)
}

/// `∏_{i<j} (x_i - x_j)` for an arbitrary coordinate vector.
pub fn vandermonde_product(coords: &[f64]) -> f64 {
    let mut h = 1.0;
    for i in 0..coords.len() {
        for j in i + 1..coords.len() {
            h *= coords[i] - coords[j];
        }
    }
    h
}

pub fn vandermonde(x: &ChamberPoint) -> f64 {
    vandermonde_product(x.coords())
}

fn permutations(n: usize) -> Vec<(Vec<usize>, f64)> {
    fn rec(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, f64)>) {
        if rest.is_empty() {
            let mut sign = 1.0;
            for i in 0..prefix.len() {
                for j in i + 1..prefix.len() {
                    if prefix[i] > prefix[j] {
                        sign = -sign;
                    }
                }
            }
            out.push((prefix.clone(), sign));
            return;
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            prefix.push(v);
            rec(prefix, rest, out);
            prefix.pop();
            rest.insert(i, v);
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut (0..n).collect(), &mut out);
    out
}

/// `Σ_σ sgn(σ) P_t(σy - x)` for the isotropic `n`-dimensional stable density
/// `P_t`; no chamber restriction on `y`.
pub fn signed_permutation_sum(alpha: StabilityIndex, t: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::domain("dimension mismatch"));
    }
    let n = x.len();
    let mut sum = 0.0;
    let mut z = vec![0.0; n];
    for (perm, sign) in permutations(n) {
        for i in 0..n {
            z[i] = y[perm[i]] - x[i];
        }
        sum += sign * isotropic_stable_density(alpha, t, &z)?;
    }
    Ok(sum)
}

/// Dyson-type kernel `h(x)^{-1} h(y) Σ_σ sgn(σ) P_t(x, σy)` on the Weyl chamber.
pub fn dyson_stable_kernel(alpha: StabilityIndex, t: f64, x: &ChamberPoint, y: &ChamberPoint) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("time must be positive, got {t}")));
    }
    let n = x.dim();
    if n != y.dim() {
        return Err(Error::domain("chamber points of different dimension"));
    }
    if n > 3 {
        return Err(Error::domain(format!("Dyson kernel limited to n <= 3, got {n}")));
    }
    let s = signed_permutation_sum(alpha, t, x.coords(), y.coords())?;
    let v = vandermonde(y) / vandermonde(x) * s;
    if v >= 0.0 {
        Ok(v)
    } else if v > -NEG_CLIP {
        Ok(0.0)
    } else {
        Err(Error::accuracy("Dyson kernel: negative value", -v, NEG_CLIP))
    }
}
