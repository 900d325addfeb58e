//! Monte Carlo checks of the samplers against numerically integrated CDFs.

use std::f64::consts::PI;

use doob_mckean::kernels::{cauchy_radial3_density, DoobMcKeanKernel, KernelQuery, StabilityIndex};
use doob_mckean::samplers::*;
use doob_mckean::stable_numerics::{PositiveStable, StableDensity};
use doob_mckean::stats::*;

const N: usize = 100_000;

fn alpha(a: f64) -> StabilityIndex {
    StabilityIndex::new(a).unwrap()
}

fn crit(n: usize) -> f64 {
    ks_critical_one_sample(n, KS_C_1PCT)
}

fn crit2(n: usize, m: usize) -> f64 {
    ks_critical_two_sample(n, m, KS_C_1PCT)
}

fn radial_cdf(a: f64, t: f64, x: f64) -> TabulatedCdf {
    let k = DoobMcKeanKernel::new(alpha(a)).unwrap();
    let cdf = TabulatedCdf::half_line(|y| k.eval(KernelQuery::new(t, x, y)?), t.powf(1.0 / a) + x).unwrap();
    assert!((cdf.total_mass() - 1.0).abs() < 1e-6, "mass {}", cdf.total_mass());
    cdf
}

#[test]
fn subordinator_matches_numeric_cdf() {
    let law = PositiveStable::new(alpha(0.8)).unwrap();
    let cdf = TabulatedCdf::half_line(|s| law.density(1.0, s), 1.0).unwrap();
    let s = sorted(sample_subordinator(alpha(0.8), 1.0, RngSeed::new(1, 0), N).unwrap());
    let d = ks_one_sample(&s, |x| cdf.eval(x)).unwrap();
    assert!(d < crit(N), "D = {d}");
}

#[test]
fn one_dimensional_marginals_match_stable_densities() {
    for (i, &a) in [0.5, 1.0, 1.5].iter().enumerate() {
        let dens = StableDensity::new(alpha(a));
        let cdf = TabulatedCdf::symmetric(|z| dens.density(1.0, z), 1.0).unwrap();
        let s = sample_stable_marginal(1, alpha(a), 1.0, &[0.0], RngSeed::new(2, i as u64), N).unwrap();
        let s = sorted(s.into_iter().map(|v| v[0]).collect());
        let d = ks_one_sample(&s, |x| cdf.eval(x)).unwrap();
        assert!(d < crit(N), "alpha={a}: D = {d}");
    }
}

#[test]
fn cauchy_marginal_against_arctan_and_median() {
    let s = sample_stable_marginal(1, alpha(1.0), 1.0, &[0.0], RngSeed::new(3, 0), N).unwrap();
    let s = sorted(s.into_iter().map(|v| v[0]).collect());
    let d = ks_one_sample(&s, |x| 0.5 + x.atan() / PI).unwrap();
    assert!(d < crit(N), "D = {d}");
    // The sample median has standard error π/(2√n) ≈ 0.005 here.
    let median = 0.5 * (s[N / 2 - 1] + s[N / 2]);
    assert!(median.abs() < 3.0 * PI / (2.0 * (N as f64).sqrt()), "median {median}");
}

#[test]
fn radial_cauchy_marginal_matches_closed_form_kernel() {
    let cdf = TabulatedCdf::half_line(|y| cauchy_radial3_density(KernelQuery::new(1.0, 1.0, y)?), 2.0).unwrap();
    let s = sorted(sample_radial3_doob(alpha(1.0), 1.0, 1.0, RngSeed::new(4, 0), N).unwrap());
    let d = ks_one_sample(&s, |x| cdf.eval(x)).unwrap();
    assert!(d < crit(N), "D = {d}");
}

#[test]
fn radial_marginals_match_doob_mckean_kernel() {
    let mut stream = 0;
    for &a in &[0.5, 1.5] {
        for &(t, x) in &[(1.0, 0.0), (1.0, 1.0), (2.0, 0.5)] {
            let cdf = radial_cdf(a, t, x);
            let s = sorted(sample_radial3_doob(alpha(a), t, x, RngSeed::new(5, stream), N).unwrap());
            stream += 1;
            let d = ks_one_sample(&s, |y| cdf.eval(y)).unwrap();
            assert!(d < crit(N), "alpha={a} t={t} x={x}: D = {d}");
        }
    }
}

#[test]
fn radial_first_moment_is_infinite_but_truncated_moments_match() {
    // ∫ y q*(y) dy diverges for α = 1 (q* ~ 4t/(πy²)), so the sample mean
    // has no limit; compare E[min(Y, 10)] instead.
    let k = DoobMcKeanKernel::new(alpha(1.0)).unwrap();
    let cdf = radial_cdf(1.0, 1.0, 1.0);
    let q = doob_mckean::quad::Integrator::new(Default::default());
    let want = q
        .integrate(
            |y| y * k.eval(KernelQuery::new(1.0, 1.0, y).unwrap()).unwrap(),
            0.0,
            10.0,
        )
        .unwrap()
        .value
        + 10.0 * (1.0 - cdf.eval(10.0));
    let s = sample_radial3_doob(alpha(1.0), 1.0, 1.0, RngSeed::new(6, 0), N).unwrap();
    let clipped: Vec<f64> = s.iter().map(|y| y.min(10.0)).collect();
    let mean = clipped.iter().sum::<f64>() / N as f64;
    let var = clipped.iter().map(|y| (y - mean).powi(2)).sum::<f64>() / (N - 1) as f64;
    assert!((mean - want).abs() < 3.0 * (var / N as f64).sqrt(), "{mean} vs {want}");

    let z = sample_radial3_doob(alpha(1.0), 1.0, 0.0, RngSeed::new(6, 1), N).unwrap();
    assert!(z.iter().all(|&y| y > 0.0));
}

#[test]
fn radial_scaling_in_law() {
    // c⁻¹ Y(c^α t, c x) has the law of Y(t, x); here c = 2, α = 1.5.
    let (a, c): (f64, f64) = (1.5, 2.0);
    let big: Vec<f64> = sample_radial3_doob(alpha(a), c.powf(a), c * 0.7, RngSeed::new(7, 0), N)
        .unwrap()
        .into_iter()
        .map(|y| y / c)
        .collect();
    let small = sample_radial3_doob(alpha(a), 1.0, 0.7, RngSeed::new(7, 1), N).unwrap();
    let d = ks_two_sample(&sorted(big), &sorted(small)).unwrap();
    assert!(d < crit2(N, N), "D = {d}");
}

#[test]
fn first_passage_is_the_half_stable_subordinator() {
    let g = sorted(first_passage_gamma(1.0, RngSeed::new(8, 0), N).unwrap());
    let l = sorted(sample_subordinator(alpha(1.0), 1.0, RngSeed::new(8, 1), N).unwrap());
    let d = ks_two_sample(&g, &l).unwrap();
    assert!(d < crit2(N, N), "D = {d}");
    let below = g.partition_point(|&v| v <= 1.0) as f64 / N as f64;
    assert!((below - 0.479_500_122_186_953_5).abs() < 0.005);
}

#[test]
fn pathwise_construction_matches_radial_marginal() {
    let p = sorted(sample_pathwise_doob(1.0, 1.0, RngSeed::new(9, 0), N).unwrap());
    let r = sorted(sample_radial3_doob(alpha(1.0), 1.0, 1.0, RngSeed::new(9, 1), N).unwrap());
    assert!(p[0] >= 0.0);
    let d = ks_two_sample(&p, &r).unwrap();
    assert!(d < crit2(N, N), "D = {d}");

    let e = sorted(sample_pathwise_doob(1.0, 0.0, RngSeed::new(9, 2), N).unwrap());
    let d = ks_one_sample(&e, |y| 2.0 / PI * (y.atan() - y / (1.0 + y * y))).unwrap();
    assert!(d < crit(N), "entrance D = {d}");
}

#[test]
fn independent_streams_look_independent() {
    let a = sample_subordinator(alpha(1.2), 1.0, RngSeed::new(10, 0), N).unwrap();
    let b = sample_subordinator(alpha(1.2), 1.0, RngSeed::new(10, 1), N).unwrap();
    assert!(ks_two_sample(&sorted(a.clone()), &sorted(b.clone())).unwrap() < crit2(N, N));
    // Pairs (a_i, b_i) from independent streams: P(a < b) = 1/2.
    let frac = a.iter().zip(&b).filter(|(x, y)| x < y).count() as f64 / N as f64;
    assert!((frac - 0.5).abs() < 3.0 * 0.5 / (N as f64).sqrt(), "{frac}");
}

#[test]
fn eta_has_mean_slope_pi_over_two_and_drifts_up() {
    let cfg = LampertiSimConfig::default();
    let ends = sharded(RngSeed::new(12, 0), 200, 8, |r, m| {
        (0..m as u64)
            .map(|i| Ok(*simulate_eta(cfg, r.block(i))?.values().last().unwrap()))
            .collect()
    })
    .unwrap();
    let slope = ends.iter().sum::<f64>() / (ends.len() as f64 * cfg.horizon);
    assert!((slope - PI / 2.0).abs() < 0.05, "slope {slope}");
    let up = ends.iter().filter(|&&v| v > 0.0).count() as f64 / ends.len() as f64;
    assert!(up > 0.99, "{up}");
}

#[test]
fn lamperti_marginal_matches_radial_cauchy() {
    let cfg = LampertiSimConfig {
        horizon: 50.0,
        ..Default::default()
    };
    let n = 10_000;
    let y = sharded(RngSeed::new(13, 0), n, 8, |r, m| sample_lamperti_y(1.0, 1.0, cfg, r, m)).unwrap();
    let cdf = TabulatedCdf::half_line(|v| cauchy_radial3_density(KernelQuery::new(1.0, 1.0, v)?), 2.0).unwrap();
    let d = ks_one_sample(&sorted(y), |v| cdf.eval(v)).unwrap();
    assert!(d < 0.02, "D = {d}");
}
