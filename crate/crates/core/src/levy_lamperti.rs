//! Lévy layer of the Cauchy process conditioned to stay positive: the
//! characteristic exponent `Ψ` in three forms, the Lévy density `μ`, its
//! tail masses, and the relation `Ψ↑(z) = Ψ(2z)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{geometric_breaks, Integrator, Tolerance};
use crate::special::ln_gamma_complex;

pub type ComplexValue = Complex64;

/// Lévy–Khintchine integrals are truncated at `|x| = LK_RANGE` (in units of
/// the density's own scale); the neglected mass is below `e^{-40}`.
pub const LK_RANGE: f64 = 40.0;

/// `Ψ(z) = (z - i) tanh(πz/2)`.
pub fn psi_closed(z: f64) -> ComplexValue {
    Complex64::new(z, -1.0) * (PI * z / 2.0).tanh()
}

/// `2 Γ((1-iz)/2)/Γ(-iz/2) · Γ((iz+3)/2)/Γ((iz+2)/2)`.
pub fn psi_gamma_form(z: f64) -> ComplexValue {
    if z.abs() < 1e-10 {
        return Complex64::new(PI * z * z / 2.0, -PI * z / 2.0);
    }
    let iz = Complex64::new(0.0, z);
    let ln = ln_gamma_complex((1.0 - iz) / 2.0) - ln_gamma_complex(-iz / 2.0) + ln_gamma_complex((iz + 3.0) / 2.0)
        - ln_gamma_complex((iz + 2.0) / 2.0);
    2.0 * ln.exp()
}

/// `Ψ↑(z) = Ψ(2z)`.
pub fn psi_uparrow(z: f64) -> ComplexValue {
    psi_closed(2.0 * z)
}

/// `μ(x) = (4/π) e^{3x} / (e^{2x} - 1)²`.
pub fn levy_density_mu(x: f64) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::domain("Lévy density is not integrable at x = 0"));
    }
    Ok(x2_mu(x) / (x * x))
}

/// `μ↑(x) = μ(x/2) / 2`.
pub fn levy_density_mu_uparrow(x: f64) -> Result<f64> {
    Ok(levy_density_mu(x / 2.0)? / 2.0)
}

/// `x² μ(x)`, continuous at 0 with value `1/π`.
pub fn x2_mu(x: f64) -> f64 {
    if x == 0.0 {
        return 1.0 / PI;
    }
    // e^{3x}/(e^{2x}-1)² = e^{-x}/(1-e^{-2x})² = e^{3x}/(1-e^{2x})²
    let (e, d) = if x > 0.0 {
        ((-x).exp(), (-2.0 * x).exp_m1())
    } else {
        ((3.0 * x).exp(), (2.0 * x).exp_m1())
    };
    4.0 / PI * x * x * e / (d * d)
}

/// `T₊(x) = ∫_x^∞ μ = (1/π)(1/sinh x - ln tanh(x/2))` for `x > 0`.
pub fn tail_mass_positive(x: f64) -> f64 {
    let q = (-x).exp();
    // -ln tanh(x/2) = ln(1+q) - ln(1-q)
    (1.0 / x.sinh() + q.ln_1p() - (-q).ln_1p()) / PI
}

/// `T₋(a) = ∫_{-∞}^{-a} μ = (1/π)(ln tanh(a/2) + 1/sinh a)` for `a > 0`.
pub fn tail_mass_negative(a: f64) -> f64 {
    let q = (-a).exp();
    if q < 0.5 {
        // (2/π) Σ_{k odd ≥ 3} (1 - 1/k) q^k, free of the leading cancellation
        let q2 = q * q;
        let mut term = q * q2;
        let mut sum: f64 = 0.0;
        let mut k = 3.0;
        while term > 1e-17 * sum.max(f64::MIN_POSITIVE) {
            sum += (1.0 - 1.0 / k) * term;
            term *= q2;
            k += 2.0;
        }
        2.0 * sum / PI
    } else {
        ((-q).ln_1p() - q.ln_1p() + 1.0 / a.sinh()) / PI
    }
}

/// Solves `T(x) = mass` for a decreasing tail function `T` with density
/// `-T' = density`: Newton's method on `ln T` in the variable `ln x`,
/// falling back to bisection whenever a step leaves the bracket.
fn invert_tail(mass: f64, x0: f64, tail: impl Fn(f64) -> f64, density: impl Fn(f64) -> f64) -> Result<f64> {
    if !(mass > 0.0) {
        return Err(Error::domain(format!("tail mass must be positive, got {mass}")));
    }
    let target = mass.ln();
    let g = |u: f64| {
        let t = tail(u.exp());
        if t > 0.0 {
            t.ln() - target
        } else {
            f64::NEG_INFINITY
        }
    };
    // g is decreasing in u = ln x
    let (mut lo, mut hi) = (-30.0f64, 745.0f64.ln());
    let mut u = x0.max(1e-300).ln().clamp(lo, hi);
    for _ in 0..200 {
        let gu = g(u);
        if gu == 0.0 {
            return Ok(u.exp());
        }
        if gu > 0.0 {
            lo = u;
        } else {
            hi = u;
        }
        let x = u.exp();
        let t = tail(x);
        let mut next = u + gu * t / (density(x) * x);
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - u).abs() <= 1e-15 * u.abs().max(1.0) {
            return Ok(next.exp());
        }
        u = next;
    }
    Err(Error::accuracy("tail inversion", hi - lo, 1e-15))
}

/// `x > 0` with `T₊(x) = mass`.
pub fn invert_tail_positive(mass: f64) -> Result<f64> {
    let x0 = if mass >= tail_mass_positive(1.0) {
        1.0 / (PI * mass)
    } else {
        (4.0 / (PI * mass)).ln()
    };
    invert_tail(mass, x0, tail_mass_positive, |x| x2_mu(x) / (x * x))
}

/// `a > 0` with `T₋(a) = mass`.
pub fn invert_tail_negative(mass: f64) -> Result<f64> {
    let a0 = if mass >= tail_mass_negative(1.0) {
        1.0 / (PI * mass)
    } else {
        (4.0 / (3.0 * PI * mass)).ln() / 3.0
    };
    invert_tail(mass, a0, tail_mass_negative, |a| x2_mu(-a) / (a * a))
}

fn lk_tolerance(tol: &Tolerance) -> Tolerance {
    Tolerance {
        max_panels: tol.max_panels.max(20_000),
        ..*tol
    }
}

/// `∫_{-R}^{R} (1 - e^{izx} + izx) ν(x) dx` for a Lévy density given in the
/// form `x² ν(x)` (bounded near 0), split at the origin.
pub fn levy_khintchine_integral(
    z: f64,
    x2_nu: impl Fn(f64) -> f64,
    range: f64,
    tol: &Tolerance,
) -> Result<ComplexValue> {
    if z == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    // (1 - cos zx)/x² = 2 sin²(zx/2)/x²; (zx - sin zx)/x² by series when zx is small.
    let re = |x: f64| {
        let s = if x == 0.0 { z / 2.0 } else { (z * x / 2.0).sin() / x };
        2.0 * s * s * x2_nu(x)
    };
    let im = |x: f64| {
        let u = z * x;
        let r = if u.abs() < 1e-3 {
            let u2 = u * u;
            z * z * u / 6.0 * (1.0 - u2 / 20.0 * (1.0 - u2 / 42.0))
        } else {
            (u - u.sin()) / (x * x)
        };
        r * x2_nu(x)
    };
    let mut breaks: Vec<f64> = vec![0.0];
    breaks.extend(geometric_breaks(1e-3, range, 8));
    let period = PI / z.abs();
    let mut b = period;
    while b < range {
        breaks.push(b);
        b += period;
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let neg: Vec<f64> = breaks.iter().rev().map(|b| -b).collect();

    let q = Integrator::new(lk_tolerance(tol));
    let re_v = q.integrate_breaks(re, &breaks)?.value + q.integrate_breaks(re, &neg)?.value;
    let im_v = q.integrate_breaks(im, &breaks)?.value + q.integrate_breaks(im, &neg)?.value;
    Ok(Complex64::new(re_v, im_v))
}

/// `Ψ(z) = -(π/2) i z + ∫ (1 - e^{izx} + izx) μ(x) dx`.
pub fn psi_from_levy_khintchine(z: f64, tol: &Tolerance) -> Result<ComplexValue> {
    let jumps = levy_khintchine_integral(z, x2_mu, LK_RANGE, tol)?;
    Ok(Complex64::new(0.0, -PI / 2.0 * z) + jumps)
}

/// `Ψ↑` from its own triplet: drift `π` and Lévy density `μ↑(x) = μ(x/2)/2`.
pub fn psi_uparrow_from_levy_khintchine(z: f64, tol: &Tolerance) -> Result<ComplexValue> {
    let jumps = levy_khintchine_integral(z, |x| 2.0 * x2_mu(x / 2.0), 2.0 * LK_RANGE, tol)?;
    Ok(Complex64::new(0.0, -PI * z) + jumps)
}

/// Parameters of `η` with jumps smaller than `ε` replaced by Brownian
/// motion: compound-Poisson rates on each side, small-jump variance and the
/// drift making the mean rate `π/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedLevy {
    pub epsilon: f64,
    pub rate_positive: f64,
    pub rate_negative: f64,
    /// `σ²(ε) = ∫_{|x|<ε} x² μ(x) dx`.
    pub small_jump_variance: f64,
    /// `∫_{|x|≥ε} x μ(x) dx`.
    pub large_jump_mean: f64,
    /// `π/2 - large_jump_mean`.
    pub drift: f64,
}

impl TruncatedLevy {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 0.5) {
            return Err(Error::config(format!(
                "jump cutoff must lie in (0, 0.5), got {epsilon}"
            )));
        }
        let q = Integrator::new(Tolerance::new(1e-15, 1e-12));
        let small_jump_variance =
            q.integrate(x2_mu, 0.0, epsilon)?.value + q.integrate(|x| x2_mu(-x), 0.0, epsilon)?.value;
        let breaks = geometric_breaks(epsilon, epsilon.max(1.0) * 60.0, 4);
        let large_jump_mean = q.integrate_breaks(|x| (x2_mu(x) - x2_mu(-x)) / x, &breaks)?.value;
        Ok(Self {
            epsilon,
            rate_positive: tail_mass_positive(epsilon),
            rate_negative: tail_mass_negative(epsilon),
            small_jump_variance,
            large_jump_mean,
            drift: PI / 2.0 - large_jump_mean,
        })
    }

    pub fn jump_rate(&self) -> f64 {
        self.rate_positive + self.rate_negative
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_and_gamma_forms_agree() {
        for &z in &[-5.0, -2.5, -0.5, 1e-11, 0.3, 1.0, 2.0, 5.0, 12.0] {
            let a = psi_closed(z);
            let b = psi_gamma_form(z);
            assert!((a - b).norm() < 1e-10, "z={z}: {a} vs {b}");
        }
        let v = psi_closed(1.0);
        assert!((v.re - 0.917_152_335_667_274_3).abs() < 1e-15);
        assert!((v.im + 0.917_152_335_667_274_3).abs() < 1e-15);
    }

    #[test]
    fn mu_values_and_asymptotics() {
        assert!((levy_density_mu(1.0).unwrap() - 0.626_498_681_628_757_6).abs() < 1e-15);
        for &x in &[1e-4, -1e-4] {
            assert!((x * x * levy_density_mu(x).unwrap() * PI - 1.0).abs() < 1e-3);
        }
        assert!((levy_density_mu(20.0).unwrap() * 20f64.exp() * PI / 4.0 - 1.0).abs() < 1e-12);
        assert!((levy_density_mu(-20.0).unwrap() * 60f64.exp() * PI / 4.0 - 1.0).abs() < 1e-12);
        assert!(levy_density_mu(0.0).is_err());
    }

    #[test]
    fn tail_masses_match_quadrature() {
        let q = Integrator::default();
        for &x in &[0.05, 0.3, 0.7, 1.0, 4.0] {
            let pos = q
                .integrate_log_tail(|y| levy_density_mu(y).unwrap(), x, 60.0)
                .unwrap()
                .value;
            let neg = q
                .integrate_log_tail(|y| levy_density_mu(-y).unwrap(), x, 60.0)
                .unwrap()
                .value;
            assert!((tail_mass_positive(x) - pos).abs() < 1e-11 * pos, "x={x}");
            assert!((tail_mass_negative(x) - neg).abs() < 1e-11 * neg, "x={x}");
        }
    }

    #[test]
    fn tail_inversion_round_trips() {
        for &x in &[1e-3, 0.1, 0.7, 1.0, 3.0, 25.0] {
            let m = tail_mass_positive(x);
            assert!(
                (invert_tail_positive(m).unwrap() / x - 1.0).abs() < 1e-12,
                "x={x}: {:?}",
                invert_tail_positive(m)
            );
            let m = tail_mass_negative(x);
            assert!(
                (invert_tail_negative(m).unwrap() / x - 1.0).abs() < 1e-12,
                "x={x}: {:?}",
                invert_tail_negative(m)
            );
        }
    }

    #[test]
    fn levy_khintchine_reproduces_closed_form() {
        let tol = Tolerance::new(1e-13, 1e-11);
        for &z in &[-5.0, -2.0, -0.5, 0.5, 1.0, 2.0, 5.0] {
            let lk = psi_from_levy_khintchine(z, &tol).unwrap();
            assert!((lk - psi_closed(z)).norm() < 1e-8, "z={z}: {lk} vs {}", psi_closed(z));
            let up = psi_uparrow_from_levy_khintchine(z, &tol).unwrap();
            assert!((up - psi_uparrow(z)).norm() < 1e-8, "z={z}");
        }
    }

    #[test]
    fn truncated_levy_rates() {
        let t = TruncatedLevy::new(0.1).unwrap();
        assert!((t.jump_rate() - 6.355_599_759_815_115).abs() < 1e-8);
        let t = TruncatedLevy::new(1e-3).unwrap();
        assert!((t.small_jump_variance / 1e-3 - 0.636_619_807_735_339).abs() < 1e-9);
        assert!(TruncatedLevy::new(0.6).is_err());
    }
}
