//! Generator identities for the radial Cauchy process `Y`: the two
//! principal-value forms of its generator, the Cauchy generator split into
//! one-sided parts, the Doob-transform lemma, the small-time kernel limit,
//! and backward-equation residuals.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::{cauchy_radial3_density, KernelQuery};
use crate::quad::{geometric_breaks, Integrator, Tolerance};
use crate::stable_numerics::pv::regular_part;
use crate::stable_numerics::{pv_integral, PvConfig};

type Jet = Arc<dyn Fn(f64) -> [f64; 3] + Send + Sync>;

/// Smooth test function with analytic first and second derivatives.
#[derive(Clone)]
pub struct TestFunction {
    name: String,
    jet: Jet,
    support: (f64, f64),
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestFunction")
            .field("name", &self.name)
            .field("support", &self.support)
            .finish()
    }
}

/// `C^∞` step `τ(z) = 1/(1 + e^{r(z)})`, `r = 1/z - 1/(1-z)`, from 0 at
/// `z = 0` to 1 at `z = 1`, with its first two derivatives.
fn smooth_step(z: f64) -> [f64; 3] {
    if z <= 0.0 {
        return [0.0; 3];
    }
    if z >= 1.0 {
        return [1.0, 0.0, 0.0];
    }
    let w = 1.0 - z;
    let r = 1.0 / z - 1.0 / w;
    let r1 = -1.0 / (z * z) - 1.0 / (w * w);
    let r2 = 2.0 / (z * z * z) - 2.0 / (w * w * w);
    let tau = 1.0 / (1.0 + r.exp());
    let s = tau * (1.0 - tau);
    let t1 = -s * r1;
    [tau, t1, -(1.0 - 2.0 * tau) * t1 * r1 - s * r2]
}

impl TestFunction {
    /// Build from a function returning `[f, f', f'']`.
    pub fn new<F>(name: impl Into<String>, support: (f64, f64), jet: F) -> Self
    where
        F: Fn(f64) -> [f64; 3] + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            jet: Arc::new(jet),
            support,
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(format!("const({c})"), (0.0, f64::INFINITY), move |_| [c, 0.0, 0.0])
    }

    /// `e^{-((y-c)/w)²}`.
    pub fn gaussian(center: f64, width: f64) -> Self {
        Self::new(
            format!("gauss({center},{width})"),
            (center - 6.0 * width, center + 6.0 * width),
            move |y| {
                let z = (y - center) / width;
                let e = (-z * z).exp();
                [e, -2.0 * z * e / width, (4.0 * z * z - 2.0) * e / (width * width)]
            },
        )
    }

    /// `exp(1 - 1/(1 - z²))` for `|z| < 1`, `z = (y-c)/r`, zero outside.
    pub fn compact_bump(center: f64, radius: f64) -> Self {
        Self::new(
            format!("bump({center},{radius})"),
            (center - radius, center + radius),
            move |y| {
                let z = (y - center) / radius;
                let w = 1.0 - z * z;
                if w <= 0.0 {
                    return [0.0; 3];
                }
                let e = (1.0 - 1.0 / w).exp();
                // h = -1/w, h' = -2z/w², h'' = -(2 + 6z²)/w³ in z
                let h1 = -2.0 * z / (w * w);
                let h2 = -(2.0 + 6.0 * z * z) / (w * w * w);
                [e, e * h1 / radius, e * (h1 * h1 + h2) / (radius * radius)]
            },
        )
    }

    /// `y` on `[a, b]`, tapered to zero over `[a-w, a]` and `[b, b+w]`.
    pub fn smoothed_ramp(a: f64, b: f64, w: f64) -> Self {
        Self::new(format!("ramp({a},{b},{w})"), (a - w, b + w), move |y| {
            let (c, c1, c2) = if y < a {
                let s = smooth_step((y - (a - w)) / w);
                (s[0], s[1] / w, s[2] / (w * w))
            } else if y > b {
                let s = smooth_step(((b + w) - y) / w);
                (s[0], -s[1] / w, s[2] / (w * w))
            } else {
                (1.0, 0.0, 0.0)
            };
            [y * c, c + y * c1, 2.0 * c1 + y * c2]
        })
    }

    /// `y ↦ y f(y)`.
    pub fn times_identity(&self) -> Self {
        let jet = self.jet.clone();
        Self {
            name: format!("y*{}", self.name),
            jet: Arc::new(move |y| {
                let [f, f1, f2] = jet(y);
                [y * f, f + y * f1, 2.0 * f1 + y * f2]
            }),
            support: self.support,
        }
    }

    /// `a·f + b·g`.
    pub fn combine(a: f64, f: &Self, b: f64, g: &Self) -> Self {
        let (jf, jg) = (f.jet.clone(), g.jet.clone());
        Self {
            name: format!("{a}*{}+{b}*{}", f.name, g.name),
            jet: Arc::new(move |y| {
                let (u, v) = (jf(y), jg(y));
                [a * u[0] + b * v[0], a * u[1] + b * v[1], a * u[2] + b * v[2]]
            }),
            support: (f.support.0.min(g.support.0), f.support.1.max(g.support.1)),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn value(&self, y: f64) -> f64 {
        (self.jet)(y)[0]
    }

    pub fn d1(&self, y: f64) -> f64 {
        (self.jet)(y)[1]
    }

    pub fn d2(&self, y: f64) -> f64 {
        (self.jet)(y)[2]
    }
}

/// Gaussian bumps at three centers, a compactly supported bump and a
/// smoothed ramp.
pub fn test_battery() -> Vec<TestFunction> {
    vec![
        TestFunction::gaussian(0.5, 0.5),
        TestFunction::gaussian(1.0, 1.0),
        TestFunction::gaussian(2.0, 1.0),
        TestFunction::compact_bump(1.5, 1.0),
        TestFunction::smoothed_ramp(0.7, 3.0, 0.6),
    ]
}

fn check_x(x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::domain(format!("generator needs x > 0, got {x}")));
    }
    Ok(())
}

/// `u²/(u²-1)²`.
fn log_kernel(u: f64) -> f64 {
    let d = u * u - 1.0;
    u * u / (d * d)
}

/// `L f(x) = 4/(πx) (PV)∫_0^∞ (f(xu) - f(x)) u²/(u²-1)² du`.
pub fn generator_l_pv(f: &TestFunction, x: f64, cfg: &PvConfig) -> Result<f64> {
    check_x(x)?;
    let fx = f.value(x);
    let est = pv_integral(
        |u| (f.value(x * u) - fx) * log_kernel(u),
        1.0,
        (0.0, f64::INFINITY),
        cfg,
    )?;
    Ok(4.0 / (PI * x) * est.value)
}

/// `f(xu) - f(x) - x f'(x) ln u`, with its second-order Taylor form near
/// `u = 1` where the direct difference cancels.
pub fn drift_compensated(f: &TestFunction, x: f64, u: f64) -> f64 {
    let [fx, f1, f2] = (f.jet)(x);
    let w = u - 1.0;
    if w.abs() < 1e-4 {
        0.5 * (x * x * f2 + x * f1) * w * w
    } else {
        f.value(x * u) - fx - x * f1 * u.ln()
    }
}

/// `L f(x) = (π/2) f'(x) + 4/(πx) ∫_0^∞ (f(xu) - f(x) - x f'(x) ln u) u²/(u²-1)² du`.
pub fn generator_l_drift(f: &TestFunction, x: f64, cfg: &PvConfig) -> Result<f64> {
    check_x(x)?;
    cfg.validate()?;
    let g = |u: f64| {
        if u == 1.0 {
            let [_, f1, f2] = (f.jet)(x);
            return 0.125 * (x * x * f2 + x * f1);
        }
        drift_compensated(f, x, u) * log_kernel(u)
    };
    let left = regular_part(&g, 0.0, 1.0 - 1e-6, 1.0, cfg.grid_points)? + regular_part(&g, 1.0 - 1e-6, 1.0, 1.0, 1)?;
    let right =
        regular_part(&g, 1.0, 1.0 + 1e-6, 1.0, 1)? + regular_part(&g, 1.0 + 1e-6, f64::INFINITY, 1.0, cfg.grid_points)?;
    Ok(PI / 2.0 * f.d1(x) + 4.0 / (PI * x) * (left + right))
}

/// `C f(x) = (1/π) (PV)∫_ℝ (f(y) - f(x))/(y - x)² dy`: principal value over
/// `|y - x| < 1`, folded tails `∫_1^∞ (f(x+s) + f(x-s) - 2f(x))/s² ds`.
pub fn cauchy_generator(f: &TestFunction, x: f64, cfg: &PvConfig) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain("generator needs a finite point"));
    }
    let fx = f.value(x);
    let window = pv_integral(|y| (f.value(y) - fx) / ((y - x) * (y - x)), x, (x - 1.0, x + 1.0), cfg)?.value;
    let tails = regular_part(
        &|s: f64| (f.value(x + s) + f.value(x - s)) / (s * s),
        1.0,
        f64::INFINITY,
        1.0,
        cfg.grid_points,
    )?;
    Ok((window + tails - 2.0 * fx) / PI)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeneratorComponents {
    pub c_plus: f64,
    pub c_minus: f64,
    pub kill_rate: f64,
    pub d_value: f64,
}

/// `C₊ f(x) = (1/π)(PV)∫_0^∞ (f(y) - f(x))/(y-x)² dy`.
pub fn c_plus(f: &TestFunction, x: f64, cfg: &PvConfig) -> Result<f64> {
    check_x(x)?;
    let fx = f.value(x);
    Ok(pv_integral(
        |y| (f.value(y) - fx) / ((y - x) * (y - x)),
        x,
        (0.0, f64::INFINITY),
        cfg,
    )?
    .value
        / PI)
}

/// `C₋ f(x) = (1/π)∫_0^∞ (f(y) - f(x))/(x+y)² dy`.
pub fn c_minus(f: &TestFunction, x: f64, cfg: &PvConfig) -> Result<f64> {
    check_x(x)?;
    let fx = f.value(x);
    let v = regular_part(
        &|y: f64| f.value(y) / ((x + y) * (x + y)),
        0.0,
        f64::INFINITY,
        x,
        cfg.grid_points,
    )?;
    Ok((v - fx / x) / PI)
}

/// `D f(x) = (C₊ - C₋) f(x) - 2f(x)/(πx)`, evaluated with the merged kernel
/// `1/(y-x)² - 1/(y+x)² = 4xy/((y-x)²(y+x)²)` so that it also applies to
/// functions growing linearly, for which `C₊` and `C₋` separately diverge.
pub fn doob_operator(f: &TestFunction, x: f64, cfg: &PvConfig) -> Result<f64> {
    check_x(x)?;
    let fx = f.value(x);
    let k = |y: f64| {
        let (a, b) = (y - x, y + x);
        4.0 * x * y / (a * a * b * b)
    };
    let v = pv_integral(|y| (f.value(y) - fx) * k(y), x, (0.0, f64::INFINITY), cfg)?.value;
    Ok(v / PI - 2.0 * fx / (PI * x))
}

/// Generator of the reflected Cauchy process, `C_R = C₊ + C₋`, from the
/// merged kernel `2(x² + y²)/((y-x)²(y+x)²)`.
pub fn reflected_generator(f: &TestFunction, x: f64, cfg: &PvConfig) -> Result<f64> {
    check_x(x)?;
    let fx = f.value(x);
    let k = |y: f64| {
        let (a, b) = (y - x, y + x);
        2.0 * (x * x + y * y) / (a * a * b * b)
    };
    Ok(pv_integral(|y| (f.value(y) - fx) * k(y), x, (0.0, f64::INFINITY), cfg)?.value / PI)
}

pub fn generator_components(f: &TestFunction, x: f64, cfg: &PvConfig) -> Result<GeneratorComponents> {
    Ok(GeneratorComponents {
        c_plus: c_plus(f, x, cfg)?,
        c_minus: c_minus(f, x, cfg)?,
        kill_rate: 1.0 / (PI * x),
        d_value: doob_operator(f, x, cfg)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LemmaCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

/// `L f(x)` against `(1/x) D(y ↦ y f(y))(x)`.
pub fn doob_lemma_check(f: &TestFunction, x: f64, cfg: &PvConfig) -> Result<LemmaCheck> {
    let lhs = generator_l_pv(f, x, cfg)?;
    let rhs = doob_operator(&f.times_identity(), x, cfg)? / x;
    Ok(LemmaCheck {
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
    })
}

/// `(4/π)∫_0^∞ (f(y) - f(x)) y²/((y²-x²)² + 2t²(y²+x²) + t⁴) dy` for each `t`:
/// `(P_t f(x) - f(x))/t` with the explicit radial Cauchy kernel.
pub fn generator_from_kernel_limit(f: &TestFunction, x: f64, t_sequence: &[f64]) -> Result<Vec<f64>> {
    check_x(x)?;
    let fx = f.value(x);
    let q = Integrator::new(Tolerance::new(1e-14, 1e-12).with_max_panels(50_000));
    t_sequence
        .iter()
        .map(|&t| {
            if !(t > 0.0) {
                return Err(Error::domain(format!("kernel limit needs t > 0, got {t}")));
            }
            let g = |y: f64| {
                let (y2, x2, t2) = (y * y, x * x, t * t);
                let den = (y2 - x2) * (y2 - x2) + 2.0 * t2 * (y2 + x2) + t2 * t2;
                (f.value(y) - fx) * y2 / den
            };
            let reach = 2.0 * x + 10.0;
            let mut breaks: Vec<f64> = geometric_breaks(t * 1e-3, x, 4)
                .into_iter()
                .flat_map(|d| [x - d, x + d])
                .filter(|&y| y > 0.0 && y < reach)
                .collect();
            breaks.extend([0.0, x, reach]);
            breaks.sort_by(f64::total_cmp);
            breaks.dedup();
            let body = q.integrate_breaks(g, &breaks)?.value;
            let tail = q.integrate_reciprocal_tail(g, reach)?.value;
            Ok(4.0 / PI * (body + tail))
        })
        .collect()
}

/// `p↑_t(x, y) = (y/x)(p_t(y-x) - p_t(y+x))` with `p_t` the heat kernel of
/// variance `t`, and its derivatives `[p, ∂_t p, ∂_x p, ∂²_x p]`.
fn bessel3_jet(t: f64, x: f64, y: f64) -> [f64; 4] {
    let g = |z: f64| (-z * z / (2.0 * t)).exp() / (2.0 * PI * t).sqrt();
    let (zm, zp) = (y - x, y + x);
    let (gm, gp) = (g(zm), g(zp));
    let h = gm - gp;
    let ht = gm * (zm * zm / (2.0 * t * t) - 0.5 / t) - gp * (zp * zp / (2.0 * t * t) - 0.5 / t);
    let hx = gm * zm / t + gp * zp / t;
    let hxx = gm * (zm * zm / (t * t) - 1.0 / t) - gp * (zp * zp / (t * t) - 1.0 / t);
    let r = y / x;
    [
        r * h,
        r * ht,
        r * hx - r / x * h,
        r * hxx - 2.0 * r / x * hx + 2.0 * r / (x * x) * h,
    ]
}

fn check_interior(t: f64, x: f64, y: f64) -> Result<()> {
    if !(t > 0.0 && x > 0.0 && y > 0.0) || !(t.is_finite() && x.is_finite() && y.is_finite()) {
        return Err(Error::domain(format!(
            "backward residual needs t, x, y > 0, got ({t}, {x}, {y})"
        )));
    }
    Ok(())
}

/// `|∂_t p↑ - ½(∂²_x p↑ + (2/x) ∂_x p↑)|` with analytic derivatives.
pub fn bessel3_backward_residual(t: f64, x: f64, y: f64) -> Result<f64> {
    check_interior(t, x, y)?;
    let [_, pt, px, pxx] = bessel3_jet(t, x, y);
    Ok((pt - 0.5 * (pxx + 2.0 / x * px)).abs())
}

/// Same residual by central differences of step `h` in `t` and `x`.
pub fn bessel3_backward_residual_fd(t: f64, x: f64, y: f64, h: f64) -> Result<f64> {
    check_interior(t, x, y)?;
    if !(h > 0.0 && h < t && h < x) {
        return Err(Error::domain(format!(
            "difference step {h} must be positive and below t and x"
        )));
    }
    let p = |t: f64, x: f64| bessel3_jet(t, x, y)[0];
    let pt = (p(t + h, x) - p(t - h, x)) / (2.0 * h);
    let px = (p(t, x + h) - p(t, x - h)) / (2.0 * h);
    let pxx = (p(t, x + h) - 2.0 * p(t, x) + p(t, x - h)) / (h * h);
    Ok((pt - 0.5 * (pxx + 2.0 / x * px)).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SemigroupCheck {
    /// `∂_t ∫ q*_t(x, y) f(y) dy` by central differences.
    pub time_derivative: f64,
    /// `∫ q*_t(x, y) L f(y) dy`.
    pub generator_side: f64,
}

fn radial_cauchy_expectation<F: Fn(f64) -> f64>(t: f64, x: f64, g: F, tol: Tolerance) -> Result<f64> {
    let q = Integrator::new(tol);
    let k = |y: f64| cauchy_radial3_density(KernelQuery { t, x, y }).unwrap_or(0.0) * g(y);
    let mut breaks = vec![0.0];
    breaks.extend(geometric_breaks(1e-3, 50.0 * (x + t), 4));
    let reach = *breaks.last().expect("non-empty");
    Ok(q.integrate_breaks(k, &breaks)?.value + q.integrate_reciprocal_tail(k, reach)?.value)
}

/// Generator/semigroup consistency for the radial Cauchy kernel:
/// `∂_t P_t f(x) = P_t L f(x)`.
pub fn semigroup_generator_check(f: &TestFunction, x: f64, t: f64, cfg: &PvConfig) -> Result<SemigroupCheck> {
    if !(t > 0.0 && x >= 0.0) {
        return Err(Error::domain(format!("need t > 0 and x >= 0, got ({t}, {x})")));
    }
    let h = 1e-3 * t;
    let tol = Tolerance::new(1e-14, 1e-12).with_max_panels(20_000);
    let pf = |s: f64| radial_cauchy_expectation(s, x, |y| f.value(y), tol);
    let time_derivative = (pf(t + h)? - pf(t - h)?) / (2.0 * h);

    let failure = std::sync::Mutex::new(None);
    let lf = |y: f64| {
        if y <= 0.0 {
            return 0.0;
        }
        generator_l_drift(f, y, cfg).unwrap_or_else(|e| {
            failure.lock().expect("unpoisoned").get_or_insert(e);
            0.0
        })
    };
    let generator_side = radial_cauchy_expectation(t, x, lf, Tolerance::new(1e-10, 1e-8).with_max_panels(5_000))?;
    if let Some(e) = failure.into_inner().expect("unpoisoned") {
        return Err(e);
    }
    Ok(SemigroupCheck {
        time_derivative,
        generator_side,
    })
}
