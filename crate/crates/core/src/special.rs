//! Special functions not covered by `statrs`: complex log-gamma and the
//! exponentially scaled modified Bessel function `I_0`.

use std::f64::consts::PI;

use num_complex::Complex64;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(z)` for complex `z` away from the poles, Lanczos (g = 7, n = 9)
/// with reflection for `Re z < 1/2`. The imaginary part is only defined
/// modulo `2π`.
pub fn ln_gamma_complex(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let pi = Complex64::new(PI, 0.0);
        return pi.ln() - (pi * z).sin().ln() - ln_gamma_complex(1.0 - z);
    }
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

pub fn gamma_complex(z: Complex64) -> Complex64 {
    ln_gamma_complex(z).exp()
}

/// `e^{-z} I_0(z)` for `z ≥ 0`.
pub fn bessel_i0_scaled(z: f64) -> f64 {
    debug_assert!(z >= 0.0);
    if z <= 15.0 {
        let q = 0.25 * z * z;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 1.0;
        while term > 1e-17 * sum {
            term *= q / (k * k);
            sum += term;
            k += 1.0;
        }
        sum * (-z).exp()
    } else {
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..60 {
            let k = k as f64;
            let next = term * (2.0 * k - 1.0).powi(2) / (8.0 * k * z);
            if next > term || next < 1e-17 * sum {
                break;
            }
            term = next;
            sum += term;
        }
        sum / (2.0 * PI * z).sqrt()
    }
}

/// Standard normal distribution function.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(-x / std::f64::consts::SQRT_2)
}

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_gamma_matches_real_gamma() {
        for &x in &[0.3, 0.5, 1.0, 2.5, 7.2] {
            let g = gamma_complex(Complex64::new(x, 0.0));
            let want = statrs::function::gamma::gamma(x);
            assert!((g.re - want).abs() < 1e-13 * want, "x={x}");
            assert!(g.im.abs() < 1e-13 * want);
        }
    }

    #[test]
    fn complex_gamma_satisfies_recurrence_and_modulus_identity() {
        let z = Complex64::new(0.7, 1.3);
        let lhs = gamma_complex(z + 1.0);
        let rhs = z * gamma_complex(z);
        assert!((lhs - rhs).norm() < 1e-13 * lhs.norm());
        // |Γ(1/2 + iy)|^2 = π / cosh(π y)
        let y = 2.3;
        let g = gamma_complex(Complex64::new(0.5, y));
        assert!((g.norm_sqr() - PI / (PI * y).cosh()).abs() < 1e-14);
        // |Γ(iy)|^2 = π / (y sinh(π y)), exercised through reflection.
        let g = gamma_complex(Complex64::new(0.0, y));
        assert!((g.norm_sqr() / (PI / (y * (PI * y).sinh())) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn scaled_i0_is_continuous_across_the_branch_switch() {
        let below = bessel_i0_scaled(15.0);
        let above = bessel_i0_scaled(15.0 + 1e-12);
        assert!((below - above).abs() < 1e-13);
        // I_0(1) = 1.2660658777520082
        assert!((bessel_i0_scaled(1.0) * 1f64.exp() - 1.266_065_877_752_008_2).abs() < 1e-15);
    }
}
