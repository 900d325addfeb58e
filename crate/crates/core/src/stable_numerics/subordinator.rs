//! One-sided stable law with Laplace exponent `λ^β`, `β = α/2`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::kernels::StabilityIndex;
use crate::quad::{geometric_breaks, Integrator, Tolerance};

use super::density::{Eval, Mode, PowerSeries};

const SERIES_TERMS: usize = 200;
const SERIES_STOP: f64 = 1e-14;
/// Largest accepted `max |term| / |sum|`. The `ln Γ` coefficients carry
/// relative errors near 1e-13, so this bounds the lost precision by 1e-10.
const MAX_CANCELLATION: f64 = 1e3;
const COEFFICIENT_PRECISION: f64 = 1e-13;
const REQUIRED_PRECISION: f64 = 1e-8;

/// Density and distribution function of `Λ_t`, where `E e^{-λΛ_t} = e^{-t λ^β}`.
///
/// The density comes from the alternating series
/// `γ_1(s) = (1/π) Σ (-1)^{n-1} Γ(1+nβ)/n! sin(nπβ) s^{-nβ-1}`
/// where it is well conditioned, and from Zolotarev's integral
/// representation near the origin, where the series cancels catastrophically.
#[derive(Debug, Clone)]
pub struct PositiveStable {
    beta: f64,
    series: PowerSeries,
    /// `lim_{φ→0} A(φ) = β^{β/(1-β)} (1-β)`.
    a0: f64,
}

impl PositiveStable {
    pub fn new(alpha: StabilityIndex) -> Result<Self> {
        alpha.require_pure_jump()?;
        let beta = alpha.value() / 2.0;
        Ok(Self {
            beta,
            series: PowerSeries::one_sided(beta, SERIES_TERMS),
            a0: beta.powf(beta / (1.0 - beta)) * (1.0 - beta),
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Zolotarev's function
    /// `A(φ) = sin(βφ)^{β/(1-β)} sin((1-β)φ) / sin(φ)^{1/(1-β)}` on `(0, π)`.
    pub fn zolotarev_a(&self, phi: f64) -> f64 {
        let b = self.beta;
        if phi <= 0.0 {
            return self.a0;
        }
        let ln = (b / (1.0 - b)) * (b * phi).sin().ln() + ((1.0 - b) * phi).sin().ln() - phi.sin().ln() / (1.0 - b);
        ln.exp()
    }

    /// `γ_t(s)`.
    pub fn density(&self, t: f64, s: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::domain(format!("time must be positive, got {t}")));
        }
        if !(s > 0.0) {
            return Err(Error::domain(format!("subordinator density needs s > 0, got {s}")));
        }
        let scale = t.powf(1.0 / self.beta);
        Ok(self.standard_density(s / scale)? / scale)
    }

    /// `P(Λ_t ≤ s)` from the integral representation.
    pub fn cdf(&self, t: f64, s: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::domain(format!("time must be positive, got {t}")));
        }
        if s <= 0.0 {
            return Ok(0.0);
        }
        let u = s / t.powf(1.0 / self.beta);
        let c = self.exponent_scale(u);
        if self.a0 * c > 745.0 {
            return Ok(0.0);
        }
        let est = self.integrate_phi(|phi| {
            let a = self.zolotarev_a(phi);
            let e = (a - self.a0) * c;
            if !a.is_finite() || e > 745.0 {
                0.0
            } else {
                (-e).exp()
            }
        })?;
        Ok(((-self.a0 * c).exp() * est / PI).clamp(0.0, 1.0))
    }

    fn exponent_scale(&self, u: f64) -> f64 {
        u.powf(-self.beta / (1.0 - self.beta))
    }

    fn standard_density(&self, u: f64) -> Result<f64> {
        // Below u^{-β} ≈ 4 the series is hopeless; skip straight to the integral.
        let mut lost = f64::INFINITY;
        if u.powf(-self.beta) < 4.0 {
            let s = self
                .series
                .sum(Eval::Value(u), Mode::Convergent, SERIES_STOP, SERIES_TERMS);
            if s.converged && s.value > 0.0 {
                let ratio = s.max_term / s.value;
                if ratio <= MAX_CANCELLATION {
                    return Ok(s.value);
                }
                lost = ratio * COEFFICIENT_PRECISION;
            }
        }
        self.zolotarev_density(u).map_err(|_| {
            Error::accuracy(
                format!("subordinator density at s={u} (beta={})", self.beta),
                lost,
                REQUIRED_PRECISION,
            )
        })
    }

    /// `γ_1(u) = β/(1-β) u^{-1/(1-β)} (1/π) ∫_0^π A e^{-A u^{-β/(1-β)}} dφ`.
    pub(crate) fn zolotarev_density(&self, u: f64) -> Result<f64> {
        let b = self.beta;
        let c = self.exponent_scale(u);
        let ln_prefactor = (b / (1.0 - b)).ln() - u.ln() / (1.0 - b) - PI.ln();
        let ln_base = ln_prefactor - self.a0 * c;
        if ln_base < -745.0 {
            return Ok(0.0);
        }
        let est = self.integrate_phi(|phi| {
            let a = self.zolotarev_a(phi);
            let e = (a - self.a0) * c;
            if !a.is_finite() || e > 745.0 {
                0.0
            } else {
                a * (-e).exp()
            }
        })?;
        Ok(ln_base.exp() * est)
    }

    fn integrate_phi<F: Fn(f64) -> f64>(&self, f: F) -> Result<f64> {
        let mut breaks = vec![0.0];
        breaks.extend(geometric_breaks(1e-6, PI, 2));
        let q = Integrator::new(Tolerance::new(1e-15, 1e-11));
        Ok(q.integrate_breaks(f, &breaks)?.value)
    }
}

/// `γ^{(α/2)}_t(s)`: density of the stable subordinator with Laplace
/// exponent `λ^{α/2}` at time `t`.
pub fn subordinator_density(alpha: StabilityIndex, t: f64, s: f64) -> Result<f64> {
    PositiveStable::new(alpha)?.density(t, s)
}
