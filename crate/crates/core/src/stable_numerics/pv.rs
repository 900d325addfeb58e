//! Principal-value quadrature with symmetric excision and Richardson
//! extrapolation in the excision radius.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{geometric_breaks, Integrator, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PvConfig {
    /// Half-width of the interval removed around the singularity.
    pub excision: f64,
    /// Panels per decade in the geometric grid around the singularity.
    pub grid_points: usize,
    pub richardson_levels: usize,
}

impl Default for PvConfig {
    fn default() -> Self {
        Self {
            excision: 1e-3,
            grid_points: 4,
            richardson_levels: 4,
        }
    }
}

impl PvConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.excision > 0.0) {
            return Err(Error::config(format!(
                "excision must be positive, got {}",
                self.excision
            )));
        }
        if self.grid_points == 0 {
            return Err(Error::config("grid_points must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PvEstimate {
    pub value: f64,
    /// Difference between the last two diagonal Richardson entries.
    pub extrapolation_error: f64,
    /// Diagonal of the Richardson table, least to most extrapolated.
    pub diagonal: Vec<f64>,
}

fn tolerance() -> Tolerance {
    Tolerance::new(1e-12, 1e-12).with_max_panels(20_000)
}

/// `∫_a^b f` where either end may be infinite and `f` is regular on `[a, b]`.
/// Finite ends near `anchor` get a geometric grid in the distance to it.
pub(crate) fn regular_part<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, anchor: f64, per_decade: usize) -> Result<f64> {
    let q = Integrator::new(tolerance());
    let tail_breaks = {
        let mut v = vec![0.0];
        v.extend(geometric_breaks(1e-6, 1.0, 2));
        v
    };
    match (a.is_finite(), b.is_finite()) {
        (true, true) => {
            if b <= a {
                return Ok(0.0);
            }
            let (near, far) = (
                (a - anchor).abs().min((b - anchor).abs()),
                (a - anchor).abs().max((b - anchor).abs()),
            );
            let mut breaks: Vec<f64> = if near > 0.0 {
                geometric_breaks(near, far, per_decade)
                    .into_iter()
                    .map(|d| if b <= anchor { anchor - d } else { anchor + d })
                    .collect()
            } else {
                vec![a, b]
            };
            breaks.sort_by(f64::total_cmp);
            *breaks.first_mut().expect("non-empty") = a;
            *breaks.last_mut().expect("non-empty") = b;
            Ok(q.integrate_breaks(f, &breaks)?.value)
        }
        (true, false) => {
            // y = a - 1 + 1/v, v ∈ (0, 1]
            let g = |v: f64| {
                if v == 0.0 {
                    0.0
                } else {
                    f(a - 1.0 + 1.0 / v) / (v * v)
                }
            };
            Ok(q.integrate_breaks(g, &tail_breaks)?.value)
        }
        (false, true) => {
            let g = |v: f64| {
                if v == 0.0 {
                    0.0
                } else {
                    f(b + 1.0 - 1.0 / v) / (v * v)
                }
            };
            Ok(q.integrate_breaks(g, &tail_breaks)?.value)
        }
        (false, false) => {
            let mid = anchor;
            Ok(regular_part(f, a, mid, anchor, per_decade)? + regular_part(f, mid, b, anchor, per_decade)?)
        }
    }
}

/// `(PV) ∫_lo^hi f(y) dy` with the singularity at `c`.
///
/// The window `[c-δ, c+δ]` is folded onto `s ∈ (0, δ]` as `f(c+s) + f(c-s)`,
/// whose small-`s` expansion is even; integrating it from `ε_k = ε/2^k`
/// gives an error series in `ε_k, ε_k^3, ε_k^5, …`, which Richardson
/// extrapolation removes level by level.
pub fn pv_integral<F: Fn(f64) -> f64>(
    f: F,
    singularity: f64,
    domain: (f64, f64),
    cfg: &PvConfig,
) -> Result<PvEstimate> {
    cfg.validate()?;
    let (lo, hi) = domain;
    let c = singularity;
    if !(lo < c && c < hi) {
        return Err(Error::domain(format!("singularity {c} must lie inside ({lo}, {hi})")));
    }
    let delta = (c - lo).min(hi - c).min(c.abs().max(1.0)) / 2.0;
    if cfg.excision * 4.0 > delta {
        return Err(Error::config(format!(
            "excision {} too wide for a singular window of half-width {delta}",
            cfg.excision
        )));
    }

    let outer =
        regular_part(&f, lo, c - delta, c, cfg.grid_points)? + regular_part(&f, c + delta, hi, c, cfg.grid_points)?;

    // Snap s so that c + s is exact; otherwise rounding in c + s breaks the
    // cancellation of the two pole contributions.
    let fold = |s: f64| {
        let s = (c + s) - c;
        f(c + s) + f(c - s)
    };
    let q = Integrator::new(tolerance());
    let breaks = geometric_breaks(cfg.excision, delta, cfg.grid_points);
    let mut inner = q.integrate_breaks(fold, &breaks)?.value;

    let levels = cfg.richardson_levels;
    let mut table: Vec<Vec<f64>> = Vec::with_capacity(levels + 1);
    let mut eps = cfg.excision;
    for k in 0..=levels {
        if k > 0 {
            let next = eps / 2.0;
            inner += q.integrate(fold, next, eps)?.value;
            eps = next;
        }
        let mut row = vec![outer + inner];
        for j in 1..=k {
            let factor = 2f64.powi(2 * j as i32 - 1) - 1.0;
            let prev_row = &table[k - 1];
            let v = row[j - 1] + (row[j - 1] - prev_row[j - 1]) / factor;
            row.push(v);
        }
        table.push(row);
    }
    let diagonal: Vec<f64> = table.iter().enumerate().map(|(k, row)| row[k]).collect();
    let value = *diagonal.last().expect("at least one level");
    if !value.is_finite() {
        return Err(Error::accuracy("principal value", f64::INFINITY, 0.0));
    }
    let diffs: Vec<f64> = diagonal.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let scale = value.abs().max(1.0);
    let extrapolation_error = diffs.last().copied().unwrap_or(0.0);
    let required = 1e-6 * scale;
    let settling = diffs.len() < 2 || extrapolation_error <= diffs[diffs.len() - 2].max(1e-10 * scale);
    if extrapolation_error > required || !settling {
        return Err(Error::accuracy(
            "principal value Richardson sequence did not converge",
            extrapolation_error,
            required,
        ));
    }
    Ok(PvEstimate {
        value,
        extrapolation_error,
        diagonal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn log_benchmark_is_pi_squared_over_eight() {
        let f = |u: f64| u * u * u.ln() / ((u * u - 1.0) * (u * u - 1.0));
        let est = pv_integral(f, 1.0, (0.0, f64::INFINITY), &PvConfig::default()).unwrap();
        assert!((est.value - PI * PI / 8.0).abs() < 1e-10, "{est:?}");
    }

    #[test]
    fn lemma_normalization_is_one() {
        for &x in &[0.5, 1.0, 2.0, 7.0] {
            let f = |y: f64| 2.0 * x * y / ((y - x) * (y + x) * (y + x));
            let est = pv_integral(f, x, (0.0, f64::INFINITY), &PvConfig::default()).unwrap();
            assert!((est.value - 1.0).abs() < 1e-10, "x={x}: {est:?}");
        }
    }

    #[test]
    fn hilbert_kernel_over_the_line() {
        // (PV) ∫ e^{-y²}/(y - x) dy = -2√π D(x), Dawson's function; D(1) = 0.5380795069127684
        let x = 1.0;
        let f = |y: f64| (-y * y).exp() / (y - x);
        let est = pv_integral(f, x, (f64::NEG_INFINITY, f64::INFINITY), &PvConfig::default()).unwrap();
        assert!(
            (est.value + 2.0 * PI.sqrt() * 0.538_079_506_912_768_4).abs() < 1e-9,
            "{est:?}"
        );
    }

    #[test]
    fn non_symmetric_singularity_is_rejected() {
        let f = |y: f64| 1.0 / ((y - 1.0) * (y - 1.0));
        assert!(matches!(
            pv_integral(f, 1.0, (0.0, 3.0), &PvConfig::default()),
            Err(Error::Accuracy { .. })
        ));
    }

    #[test]
    fn bad_configs() {
        let f = |y: f64| y;
        let cfg = PvConfig {
            excision: 0.0,
            ..PvConfig::default()
        };
        assert!(matches!(pv_integral(f, 0.5, (0.0, 1.0), &cfg), Err(Error::Config(_))));
        assert!(matches!(
            pv_integral(f, 2.0, (0.0, 1.0), &PvConfig::default()),
            Err(Error::Domain(_))
        ));
    }
}
