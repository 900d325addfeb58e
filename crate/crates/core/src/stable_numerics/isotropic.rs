//! Isotropic stable densities through subordination: `X_t = √2 B_{Λ_t}`,
//! so given `Λ_t = s` each coordinate is Gaussian with variance `2s`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::kernels::StabilityIndex;
use crate::quad::{Integrator, Tolerance};
use crate::special::{bessel_i0_scaled, ln_gamma};

use super::subordinator::PositiveStable;

/// `∫_0^∞ γ_t(s) k(2s) ds` for a kernel `k(τ)` of the per-coordinate
/// variance `τ`. `spatial_scale` is the largest distance the kernel is
/// sensitive to and sets how far into large `s` the integral runs.
pub fn subordinate<K: Fn(f64) -> f64>(law: &PositiveStable, t: f64, spatial_scale: f64, kernel: K) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("time must be positive, got {t}")));
    }
    let beta = law.beta();
    let s0 = t.powf(1.0 / beta);
    let v_lo = -(40.0f64).max(8.0 * (1.0 - beta) / beta);
    let reach = (2.0 * (spatial_scale.abs() + 1.0).ln() - s0.ln()).max(0.0);
    let v_hi = reach + 40.0 / (beta + 0.5);
    let n = (v_hi - v_lo).ceil() as usize;
    let breaks: Vec<f64> = (0..=n).map(|k| v_lo + (v_hi - v_lo) * k as f64 / n as f64).collect();

    let failure = std::cell::Cell::new(None);
    let q = Integrator::new(Tolerance::new(1e-15, 1e-10).with_max_panels(20_000));
    let est = q.integrate_breaks(
        |v| {
            let s = s0 * v.exp();
            match law.density(t, s) {
                Ok(g) if g > 0.0 => g * kernel(2.0 * s) * s,
                Ok(_) => 0.0,
                Err(e) => {
                    failure.set(Some(e));
                    0.0
                }
            }
        },
        &breaks,
    )?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(est.value)
}

fn gauss(tau: f64, z: f64) -> f64 {
    (-z * z / (2.0 * tau)).exp() / (2.0 * PI * tau).sqrt()
}

/// Density in `r` of `|x e_1 + √τ G|` for a standard `d`-dimensional `G`.
pub fn gaussian_radial_density(d: usize, tau: f64, x: f64, r: f64) -> f64 {
    if r < 0.0 {
        return 0.0;
    }
    match d {
        1 => gauss(tau, r - x) + gauss(tau, r + x),
        2 => {
            let z = r * x / tau;
            r / tau * (-(r - x) * (r - x) / (2.0 * tau)).exp() * bessel_i0_scaled(z)
        }
        3 => {
            if x == 0.0 {
                2.0 * r * r / tau * gauss(tau, r)
            } else {
                r / x * gauss(tau, r - x) * -(-2.0 * r * x / tau).exp_m1()
            }
        }
        _ => unreachable!("dimension checked by callers"),
    }
}

/// Density in `r` of the distance from the origin of a `d`-dimensional
/// isotropic stable process started at distance `x`.
pub fn isotropic_stable_radial_density(d: usize, alpha: StabilityIndex, t: f64, x: f64, r: f64) -> Result<f64> {
    if !(1..=3).contains(&d) {
        return Err(Error::domain(format!(
            "radial density implemented for d in 1..=3, got {d}"
        )));
    }
    if x < 0.0 || r < 0.0 {
        return Err(Error::domain("radii must be non-negative"));
    }
    if !(t > 0.0) {
        return Err(Error::domain(format!("time must be positive, got {t}")));
    }
    if alpha.value() == 2.0 {
        return Ok(gaussian_radial_density(d, 2.0 * t, x, r));
    }
    let law = PositiveStable::new(alpha)?;
    subordinate(&law, t, x.max(r), |tau| gaussian_radial_density(d, tau, x, r))
}

/// Isotropic `n`-dimensional stable density of the increment `z`.
///
/// Closed forms for `α = 1` (multivariate Cauchy) and `α = 2`; otherwise
/// the subordination integral.
pub fn isotropic_stable_density(alpha: StabilityIndex, t: f64, z: &[f64]) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("time must be positive, got {t}")));
    }
    let n = z.len();
    if n == 0 {
        return Err(Error::domain("empty increment vector"));
    }
    let nf = n as f64;
    let r2: f64 = z.iter().map(|v| v * v).sum();
    match alpha.value() {
        1.0 => {
            let ln_c = ln_gamma((nf + 1.0) / 2.0) - (nf + 1.0) / 2.0 * PI.ln();
            Ok(ln_c.exp() * t / (t * t + r2).powf((nf + 1.0) / 2.0))
        }
        2.0 => Ok((4.0 * PI * t).powf(-nf / 2.0) * (-r2 / (4.0 * t)).exp()),
        _ => {
            let law = PositiveStable::new(alpha)?;
            subordinate(&law, t, r2.sqrt(), |tau| {
                (2.0 * PI * tau).powf(-nf / 2.0) * (-r2 / (2.0 * tau)).exp()
            })
        }
    }
}
