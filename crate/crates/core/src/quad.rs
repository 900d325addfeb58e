//! Adaptive Gauss-Legendre quadrature.
//!
//! Every integral in the crate goes through [`Integrator`]: a global adaptive
//! scheme that keeps a heap of panels keyed on their error estimate and
//! bisects the worst panel until the summed estimate meets the tolerance.
//! The per-panel estimate compares an `n`-point rule on the whole panel with
//! the same rule applied to both halves; the halves are kept as the value.
//!
//! Half-line integrals are mapped to finite panels either by `y = a / v`
//! (integrands with `O(1/y^2)` decay) or by `y = a e^u` (heavy algebraic
//! tails such as stable densities).

use std::cell::Cell;
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be positive");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            // Tricomi's initial guess, then Newton on P_n.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Applies the rule on `[a, b]`, returning `(sum w f, sum w |f|)`.
    fn apply<F: FnMut(f64) -> f64 + ?Sized>(&self, f: &mut F, a: f64, b: f64) -> (f64, f64) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut sum = 0.0;
        let mut abs_sum = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            let v = f(mid + half * x);
            sum += w * v;
            abs_sum += w * v.abs();
        }
        (sum * half, abs_sum * half.abs())
    }

    /// Non-adaptive evaluation of the rule on `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> f64 {
        self.apply(&mut f, a, b).0
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    let d = n * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn default_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(15))
}

/// Stopping rule for adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_panels: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: 1e-13,
            rel: 1e-11,
            max_panels: 5000,
        }
    }
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Self {
            abs,
            rel,
            ..Self::default()
        }
    }

    pub fn with_max_panels(mut self, max_panels: usize) -> Self {
        self.max_panels = max_panels;
        self
    }
}

/// Value of an integral together with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

impl std::ops::Add for Estimate {
    type Output = Estimate;

    fn add(self, rhs: Estimate) -> Estimate {
        Estimate {
            value: self.value + rhs.value,
            error: self.error + rhs.error,
            evaluations: self.evaluations + rhs.evaluations,
        }
    }
}

struct Panel {
    a: f64,
    b: f64,
    left: f64,
    right: f64,
    abs: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Global adaptive integrator over a list of breakpoints.
#[derive(Debug, Clone)]
pub struct Integrator<'r> {
    rule: &'r GaussLegendre,
    tol: Tolerance,
}

impl Default for Integrator<'static> {
    fn default() -> Self {
        Self {
            rule: default_rule(),
            tol: Tolerance::default(),
        }
    }
}

impl Integrator<'static> {
    pub fn new(tol: Tolerance) -> Self {
        Self {
            rule: default_rule(),
            tol,
        }
    }
}

impl<'r> Integrator<'r> {
    pub fn with_rule(rule: &'r GaussLegendre, tol: Tolerance) -> Self {
        Self { rule, tol }
    }

    pub fn tolerance(&self) -> Tolerance {
        self.tol
    }

    /// Integrates over `[breaks[0], breaks[last]]`, treating every interior
    /// breakpoint as a panel boundary.
    pub fn integrate_breaks<F: Fn(f64) -> f64>(&self, f: F, breaks: &[f64]) -> Result<Estimate> {
        if breaks.len() < 2 {
            return Err(Error::domain("integration needs at least two breakpoints"));
        }
        if breaks.iter().any(|b| !b.is_finite()) {
            return Err(Error::domain("breakpoints must be finite"));
        }
        let evaluations = Cell::new(0usize);
        let non_finite = Cell::new(false);
        let mut g = |x: f64| {
            evaluations.set(evaluations.get() + 1);
            let v = f(x);
            if !v.is_finite() {
                non_finite.set(true);
                0.0
            } else {
                v
            }
        };
        let rule = self.rule;
        let make_panel = |g: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, whole: f64| {
            let m = 0.5 * (a + b);
            let (l, la) = rule.apply(g, a, m);
            let (r, ra) = rule.apply(g, m, b);
            Panel {
                a,
                b,
                left: l,
                right: r,
                abs: la + ra,
                err: (whole - l - r).abs(),
            }
        };

        let mut heap = BinaryHeap::new();
        for w in breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            if a == b {
                continue;
            }
            let (whole, _) = rule.apply(&mut g, a, b);
            heap.push(make_panel(&mut g, a, b, whole));
        }

        let mut frozen_value = 0.0;
        let mut frozen_err = 0.0;
        let mut frozen_abs = 0.0;
        loop {
            let (mut value, mut err, mut abs) = (frozen_value, frozen_err, frozen_abs);
            for p in heap.iter() {
                value += p.left + p.right;
                err += p.err;
                abs += p.abs;
            }
            let target = self
                .tol
                .abs
                .max(self.tol.rel * value.abs())
                .max(50.0 * f64::EPSILON * abs);
            if err <= target || heap.is_empty() {
                if non_finite.get() {
                    return Err(Error::accuracy("non-finite integrand", f64::INFINITY, target));
                }
                if err > target {
                    return Err(Error::accuracy("adaptive quadrature", err, target));
                }
                return Ok(Estimate {
                    value,
                    error: err,
                    evaluations: evaluations.get(),
                });
            }
            if heap.len() >= self.tol.max_panels {
                return Err(Error::accuracy("adaptive quadrature panel budget", err, target));
            }
            let worst = heap.pop().expect("heap is non-empty");
            let m = 0.5 * (worst.a + worst.b);
            if (worst.b - worst.a).abs() <= 1e3 * f64::EPSILON * worst.a.abs().max(worst.b.abs()) {
                frozen_value += worst.left + worst.right;
                frozen_err += worst.err;
                frozen_abs += worst.abs;
                continue;
            }
            heap.push(make_panel(&mut g, worst.a, m, worst.left));
            heap.push(make_panel(&mut g, m, worst.b, worst.right));
        }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> Result<Estimate> {
        self.integrate_breaks(f, &[a, b])
    }

    /// `∫_a^∞ f` for `a > 0` via `y = a / v`; suited to integrands decaying
    /// at least like `1/y^2`.
    pub fn integrate_reciprocal_tail<F: Fn(f64) -> f64>(&self, f: F, a: f64) -> Result<Estimate> {
        if a <= 0.0 {
            return Err(Error::domain("reciprocal tail needs a positive lower limit"));
        }
        self.integrate(
            |v| {
                if v <= 0.0 {
                    0.0
                } else {
                    f(a / v) * a / (v * v)
                }
            },
            0.0,
            1.0,
        )
    }

    /// `∫_a^∞ f` for `a > 0` via `y = a e^u`, `u ∈ [0, span]`.
    ///
    /// The integrand is assumed negligible beyond `a e^span`; geometric panels
    /// of unit length in `u` seed the adaptive refinement.
    pub fn integrate_log_tail<F: Fn(f64) -> f64>(&self, f: F, a: f64, span: f64) -> Result<Estimate> {
        if a <= 0.0 {
            return Err(Error::domain("log tail needs a positive lower limit"));
        }
        let panels = span.ceil().max(1.0) as usize;
        let breaks: Vec<f64> = (0..=panels).map(|k| span * k as f64 / panels as f64).collect();
        self.integrate_breaks(
            |u| {
                let y = a * u.exp();
                f(y) * y
            },
            &breaks,
        )
    }

    /// `∫_0^∞ f` split at `scale`: a finite panel `[0, scale]` and a log tail.
    pub fn integrate_half_line<F: Fn(f64) -> f64>(&self, f: F, scale: f64, span: f64) -> Result<Estimate> {
        let head = self.integrate(&f, 0.0, scale)?;
        let tail = self.integrate_log_tail(&f, scale, span)?;
        Ok(head + tail)
    }
}

/// Geometric breakpoints `lo, lo·r, …, hi` with at most `per_decade` points
/// per factor of ten.
pub fn geometric_breaks(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo);
    let decades = (hi / lo).log10();
    let n = ((decades * per_decade as f64).ceil() as usize).max(1);
    let ratio = (hi / lo).powf(1.0 / n as f64);
    let mut out: Vec<f64> = (0..n).map(|k| lo * ratio.powi(k as i32)).collect();
    out.push(hi);
    out
}
