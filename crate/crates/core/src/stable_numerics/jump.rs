use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::kernels::StabilityIndex;
use crate::special::ln_gamma;

/// Lévy density of the isotropic `d`-dimensional stable process:
/// `2^α π^{-d/2} Γ((d+α)/2) / |Γ(-α/2)| · |z|^{-α-d}`.
pub fn stable_jump_measure(d: usize, alpha: StabilityIndex, z: &[f64]) -> Result<f64> {
    alpha.require_pure_jump()?;
    if d == 0 || z.len() != d {
        return Err(Error::domain(format!("expected a {d}-vector, got length {}", z.len())));
    }
    let r = z.iter().map(|v| v * v).sum::<f64>().sqrt();
    if r == 0.0 {
        return Err(Error::domain("jump measure is singular at z = 0"));
    }
    let a = alpha.value();
    let df = d as f64;
    // |Γ(-α/2)| = Γ(1 - α/2) / (α/2)
    let ln_abs_gamma = ln_gamma(1.0 - a / 2.0) - (a / 2.0).ln();
    let ln_c = a * 2f64.ln() - df / 2.0 * PI.ln() + ln_gamma((df + a) / 2.0) - ln_abs_gamma;
    Ok((ln_c - (a + df) * r.ln()).exp())
}
