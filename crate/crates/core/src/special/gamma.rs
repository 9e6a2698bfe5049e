//! Complex Gamma and Beta via the Lanczos approximation (g = 7, n = 9).

use crate::C64;
use std::f64::consts::PI;

const G: f64 = 7.0;
const COEF: [f64; 9] = [
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

/// log Γ(z) on the principal branch away from the negative real axis.
pub fn lgamma(z: C64) -> C64 {
    if z.re < 0.5 {
        // reflection: Γ(z)Γ(1−z) = π / sin(πz)
        let s = (z * PI).sin();
        return C64::new(PI.ln(), 0.0) - s.ln() - lgamma(C64::new(1.0, 0.0) - z);
    }
    let z = z - 1.0;
    let mut x = C64::new(COEF[0], 0.0);
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + G + 0.5;
    C64::new(0.5 * (2.0 * PI).ln(), 0.0) + (z + 0.5) * t.ln() - t + x.ln()
}

pub fn gamma(z: C64) -> C64 {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return C64::new(f64::INFINITY, 0.0);
    }
    if z.re < 0.5 {
        let s = (z * PI).sin();
        return PI / (s * gamma(C64::new(1.0, 0.0) - z));
    }
    let z1 = z - 1.0;
    let mut x = C64::new(COEF[0], 0.0);
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        x += c / (z1 + i as f64);
    }
    let t = z1 + G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z1 + 0.5) * (-t).exp() * x
}

pub fn gamma_real(x: f64) -> f64 {
    gamma(C64::new(x, 0.0)).re
}

/// B(a, b) = Γ(a)Γ(b)/Γ(a+b), through log-Gamma when the arguments are large.
pub fn beta(a: C64, b: C64) -> C64 {
    if a.re > 0.5 && b.re > 0.5 && (a.norm() > 30.0 || b.norm() > 30.0) {
        return (lgamma(a) + lgamma(b) - lgamma(a + b)).exp();
    }
    gamma(a) * gamma(b) / gamma(a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorials_and_half() {
        assert!((gamma_real(5.0) - 24.0).abs() < 1e-12);
        assert!((gamma_real(0.5) - PI.sqrt()).abs() < 1e-13);
        assert!((gamma_real(-0.5) + 2.0 * PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn beta_half_half_is_pi() {
        let b = beta(C64::new(0.5, 0.0), C64::new(0.5, 0.0));
        assert!((b.re - PI).abs() < 1e-13 && b.im.abs() < 1e-15);
    }

    #[test]
    fn lgamma_matches_gamma() {
        let z = C64::new(3.3, 1.7);
        assert!((lgamma(z).exp() - gamma(z)).norm() < 1e-12 * gamma(z).norm());
    }
}
