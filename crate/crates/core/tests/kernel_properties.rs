use doob_mckean::kernels::*;
use doob_mckean::quad::{geometric_breaks, Integrator, Tolerance};
use doob_mckean::stable_numerics::{gaussian_radial_density, subordinate, PositiveStable};
use doob_mckean::stats::TabulatedCdf;
use proptest::prelude::*;

fn alpha(a: f64) -> StabilityIndex {
    StabilityIndex::new(a).unwrap()
}

fn kq(t: f64, x: f64, y: f64) -> KernelQuery {
    KernelQuery::new(t, x, y).unwrap()
}

fn half_line_integral<F: Fn(f64) -> f64>(f: F, scale: f64) -> f64 {
    let q = Integrator::new(Tolerance::new(1e-14, 1e-11).with_max_panels(50_000));
    let mut breaks = vec![0.0];
    breaks.extend(geometric_breaks(1e-4 * scale, 1e3 * scale, 4));
    let reach = *breaks.last().unwrap();
    q.integrate_breaks(&f, &breaks).unwrap().value + q.integrate_reciprocal_tail(&f, reach).unwrap().value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn detailed_balance(a in 0.3f64..1.9, t in 0.2f64..3.0, x in 0.05f64..4.0, y in 0.05f64..4.0) {
        let k = DoobMcKeanKernel::new(alpha(a)).unwrap();
        let l = x * x * k.eval(kq(t, x, y)).unwrap();
        let r = y * y * k.eval(kq(t, y, x)).unwrap();
        prop_assert!((l - r).abs() <= 4.0 * f64::EPSILON * l.abs().max(r.abs()), "{l} vs {r}");
    }

    #[test]
    fn self_similarity(a in 0.3f64..1.9, c in 0.3f64..4.0, t in 0.2f64..3.0, x in 0.0f64..3.0, y in 0.05f64..3.0) {
        let k = DoobMcKeanKernel::new(alpha(a)).unwrap();
        let l = c * k.eval(kq(t, c * x, c * y)).unwrap();
        let r = k.eval(kq(c.powf(-a) * t, x, y)).unwrap();
        prop_assert!((l - r).abs() <= 1e-6 * r.max(1e-3), "{l} vs {r}");
    }

    #[test]
    fn cauchy_case_has_closed_form(t in 0.05f64..5.0, x in 1e-3f64..6.0, y in 0.0f64..8.0) {
        let a = doob_mckean_kernel(alpha(1.0), kq(t, x, y)).unwrap();
        let b = cauchy_radial3_density(kq(t, x, y)).unwrap();
        prop_assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
    }

    #[test]
    fn kernels_are_non_negative(a in 0.3f64..1.9, t in 0.1f64..3.0, x in 0.0f64..5.0, y in 0.0f64..10.0) {
        prop_assert!(doob_mckean_kernel(alpha(a), kq(t, x, y)).unwrap() >= 0.0);
        prop_assert!(bessel3_density(kq(t, x, y)).unwrap() >= 0.0);
    }

    #[test]
    fn elliot_feller_kernel_is_bounded_by_cauchy(t in 0.05f64..2.0, x in 0.0f64..1.0, y in 0.0f64..1.0) {
        let spec = IntervalSpec::new(1.0, 50).unwrap();
        let k = elliot_feller_kernel(kq(t, x, y), spec).unwrap();
        let free = cauchy_density(kq(t, x, y)).unwrap();
        prop_assert!(k >= -1e-12 && k <= free + 1e-12, "{k} vs {free}");
    }

    #[test]
    fn vandermonde_is_alternating(v in prop::collection::vec(-5.0f64..5.0, 3)) {
        let p = vandermonde_product(&v);
        let swapped = [v[1], v[0], v[2]];
        prop_assert!((p + vandermonde_product(&swapped)).abs() <= 1e-12 * p.abs().max(1.0));
    }
}

#[test]
fn doob_mckean_kernel_is_conservative() {
    for &a in &[0.5f64, 1.0, 1.5] {
        let k = DoobMcKeanKernel::new(alpha(a)).unwrap();
        for &t in &[0.5f64, 1.0, 2.0] {
            for &x in &[0.0, 0.5, 1.0, 3.0] {
                let cdf = TabulatedCdf::half_line(|y| k.eval(kq(t, x, y)), t.powf(1.0 / a) + x).unwrap();
                assert!(
                    (cdf.total_mass() - 1.0).abs() < 1e-5,
                    "a={a} t={t} x={x}: {}",
                    cdf.total_mass()
                );
            }
        }
    }
}

#[test]
fn radial_cauchy_chapman_kolmogorov() {
    for &(s, t) in &[(0.5, 0.5), (1.0, 2.0)] {
        for &(x, y) in &[(0.5, 1.0), (1.0, 3.0), (0.0, 1.0)] {
            let lhs = half_line_integral(
                |z| cauchy_radial3_density(kq(s, x, z)).unwrap() * cauchy_radial3_density(kq(t, z, y)).unwrap(),
                s + t + x + y,
            );
            let rhs = cauchy_radial3_density(kq(s + t, x, y)).unwrap();
            assert!((lhs - rhs).abs() < 1e-4, "s={s} t={t} x={x} y={y}: {lhs} vs {rhs}");
        }
    }
}

#[test]
fn cauchy_kernel_by_subordination() {
    let law = PositiveStable::new(alpha(1.0)).unwrap();
    for &t in &[0.5, 1.0, 2.0] {
        for &(x, y) in &[(0.0, 0.3), (1.0, -1.0), (0.5, 4.0)] {
            let z: f64 = y - x;
            let v = subordinate(&law, t, z, |tau| gaussian_radial_density(1, tau, 0.0, z.abs()) / 2.0).unwrap();
            let want = cauchy_density(kq(t, x, y)).unwrap();
            assert!((v - want).abs() < 1e-6, "t={t} x={x} y={y}: {v} vs {want}");
        }
    }
}

#[test]
fn radial_cauchy_kernel_by_bessel_subordination() {
    // Given Λ_t = s, √2 R_s from x has the density (1/√2) p↑_s(x/√2, y/√2).
    let law = PositiveStable::new(alpha(1.0)).unwrap();
    let r2 = 2f64.sqrt();
    for &t in &[0.5, 1.0, 2.0] {
        for &(x, y) in &[(0.0, 0.3), (1.0, 1.0), (0.5, 4.0)] {
            let v = subordinate(&law, t, x + y, |tau| {
                bessel3_density(kq(tau / 2.0, x / r2, y / r2)).unwrap() / r2
            })
            .unwrap();
            let want = cauchy_radial3_density(kq(t, x, y)).unwrap();
            assert!((v - want).abs() < 1e-6, "t={t} x={x} y={y}: {v} vs {want}");
        }
    }
}

#[test]
fn elliot_feller_matches_sine_series() {
    let spec = IntervalSpec::new(1.0, 200).unwrap();
    for &t in &[0.1, 0.5, 1.0] {
        for &x in &[0.2, 0.5, 0.8] {
            for &y in &[0.1, 0.5, 0.9] {
                let a = elliot_feller_kernel(kq(t, x, y), spec).unwrap();
                let b = elliot_feller_sine_series(kq(t, x, y), 1.0, 2000).unwrap();
                assert!((a - b).abs() < 1e-8, "t={t} x={x} y={y}: {a} vs {b}");
            }
        }
        assert_eq!(elliot_feller_kernel(kq(t, 0.0, 0.4), spec).unwrap(), 0.0);
        assert_eq!(elliot_feller_kernel(kq(t, 0.4, 1.0), spec).unwrap(), 0.0);
    }
}

#[test]
fn dyson_kernel_example_and_positivity() {
    // 1/(2π) - 1/(2π·27) at x = y = (1, -1)
    let x = ChamberPoint::new(vec![1.0, -1.0]).unwrap();
    let v = dyson_stable_kernel(alpha(1.0), 1.0, &x, &x).unwrap();
    assert!((v - 0.153_260_315_569_973_3).abs() < 1e-10, "{v}");
    for &(a, b) in &[(0.1, 0.0), (3.0, -2.0), (0.7, 0.69), (10.0, 9.0)] {
        let y = ChamberPoint::new(vec![a, b]).unwrap();
        assert!(dyson_stable_kernel(alpha(1.0), 0.5, &x, &y).unwrap() >= 0.0);
    }
}
