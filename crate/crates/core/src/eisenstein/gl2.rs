//! The SL(2, ℤ) Eisenstein series E(z, s) = ½ Σ_{gcd(c,d)=1} (Im z/|cz+d|²)^{s+1/2},
//! normalised so that its constant term is y^{s+1/2} + Λ(2s)/Λ(2s+1) y^{1/2−s}.

use std::f64::consts::PI;

use crate::arith::{gcd, ComplexSum};
use crate::special::quad::integrate;
use crate::special::{divisor_sigma, lambda_completed, QuadratureSpec};
use crate::{Error, Result, C64};

/// Residue of E(z, s) at s = 1/2.
pub const GL2_RESIDUE: f64 = 3.0 / PI;

/// Truncated defining sum over coprime (c, d) with max(|c|, |d|) ≤ bound.
pub fn gl2_eisenstein(z: C64, s: C64, bound: i64) -> Result<C64> {
    if !(z.im > 0.0) {
        return Err(Error::Invalid("Im z must be positive".into()));
    }
    if s.re <= 0.5 {
        return Err(Error::Region("Re s > 1/2".into()));
    }
    if bound < 1 {
        return Err(Error::Invalid("bound must be at least 1".into()));
    }
    let e = s + 0.5;
    let y = z.im;
    let mut total = ComplexSum::default();
    for h in 1..=bound {
        let mut shell = ComplexSum::default();
        let mut visit = |c: i64, d: i64| {
            if gcd(c, d) == 1 {
                let w = C64::new(c as f64, 0.0) * z + d as f64;
                shell.add((e * (y / w.norm_sqr()).ln()).exp());
            }
        };
        for k in -h..=h {
            visit(h, k);
            visit(-h, k);
            if k.abs() < h {
                visit(k, h);
                visit(k, -h);
            }
        }
        total.add(shell.value());
    }
    // (c, d) = (0, ±1) is the shell h = 1 contribution y^{s+1/2} twice
    Ok(total.value() * 0.5)
}

/// K_s(x) = ∫_0^∞ e^{−x cosh t} cosh(st) dt for x > 0.
pub fn bessel_k(s: C64, x: f64) -> Result<C64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Invalid("bessel_k needs x > 0".into()));
    }
    // cut where the log-integrand is 50 below its maximum
    let sr = s.re.abs();
    let logf = |t: f64| -x * (t.cosh() - 1.0) + sr * t;
    let t_peak = (sr / x).asinh();
    let top = logf(t_peak);
    let mut t_max = t_peak + 1.0;
    while logf(t_max) > top - 50.0 {
        t_max += 0.5;
    }
    let spec = QuadratureSpec::with_tol(1e-300, 1e-13);
    let f = |t: f64| {
        let ch = C64::new(t, 0.0) * s;
        // e^{-x(cosh t - 1)} cosh(st), the e^{-x} is restored below
        (-x * (t.cosh() - 1.0)).exp() * (ch.exp() + (-ch).exp()) * 0.5
    };
    let r = integrate(f, 0.0, t_max, &spec)?;
    Ok(r.value * (-x).exp())
}

/// Meromorphic continuation through the Fourier expansion
/// E(z, s) = y^{s+1/2} + Λ(2s)/Λ(2s+1) y^{1/2−s}
///         + 4/Λ(2s+1) Σ_{n≥1} n^s σ_{−2s}(n) √y K_s(2πny) cos(2πnx).
pub fn gl2_eisenstein_fourier(z: C64, s: C64) -> Result<C64> {
    if !(z.im > 0.0) {
        return Err(Error::Invalid("Im z must be positive".into()));
    }
    let (x, y) = (z.re, z.im);
    let (c0, c1) = gl2_constant_term(y, s)?;
    let l1 = lambda_completed(2.0 * s + 1.0)?;
    let mut acc = ComplexSum::default();
    let mut n = 1u64;
    loop {
        let arg = 2.0 * PI * n as f64 * y;
        if arg > 750.0 {
            break;
        }
        let nf = n as f64;
        let k = bessel_k(s, arg)?;
        let t = (s * nf.ln()).exp() * divisor_sigma(-2.0 * s, n) * k * (2.0 * PI * nf * x).cos();
        acc.add(t);
        // the K-Bessel tail decays like e^{-2πny}
        if (-arg).exp() * nf.powf(s.re.abs() + 2.0) < 1e-20 {
            break;
        }
        n += 1;
    }
    Ok(c0 + c1 + acc.value() * (4.0 * y.sqrt()) / l1)
}

/// The two constant-term summands y^{s+1/2} and Λ(2s)/Λ(2s+1) y^{1/2−s}.
pub fn gl2_constant_term(y: f64, s: C64) -> Result<(C64, C64)> {
    if !(y > 0.0) {
        return Err(Error::Invalid("y must be positive".into()));
    }
    let lr = lambda_completed(2.0 * s)? / lambda_completed(2.0 * s + 1.0)?;
    let ly = y.ln();
    Ok((((s + 0.5) * ly).exp(), lr * ((0.5 - s) * ly).exp()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bessel_half_order() {
        // K_{1/2}(x) = sqrt(π/(2x)) e^{-x}
        for x in [0.3, 1.0, 4.0, 20.0] {
            let k = bessel_k(C64::new(0.5, 0.0), x).unwrap();
            let want = (PI / (2.0 * x)).sqrt() * (-x as f64).exp();
            assert!((k.re - want).abs() < 1e-12 * want, "{x}: {k} vs {want}");
        }
    }

    #[test]
    fn bessel_k0_value() {
        // K_0(1) = 0.42102443824070833
        let k = bessel_k(C64::new(0.0, 0.0), 1.0).unwrap();
        assert!((k.re - 0.421_024_438_240_708_3).abs() < 1e-13);
    }

    #[test]
    fn fourier_matches_direct_sum() {
        let z = C64::new(0.3, 1.1);
        let s = C64::new(2.0, 0.0);
        let direct = gl2_eisenstein(z, s, 300).unwrap();
        let four = gl2_eisenstein_fourier(z, s).unwrap();
        assert!((direct - four).norm() < 1e-6 * four.norm(), "{direct} {four}");
    }

    #[test]
    fn invariant_under_inversion() {
        let z = C64::new(0.2, 0.9);
        let s = C64::new(1.3, 0.4);
        let a = gl2_eisenstein_fourier(z, s).unwrap();
        let b = gl2_eisenstein_fourier(-z.inv(), s).unwrap();
        assert!((a - b).norm() < 1e-9 * a.norm());
    }

    #[test]
    fn residue_at_one_half() {
        let z = C64::new(0.1, 1.3);
        let eps = 1e-5;
        let up = gl2_eisenstein_fourier(z, C64::new(0.5 + eps, 0.0)).unwrap() * eps;
        let dn = gl2_eisenstein_fourier(z, C64::new(0.5 - eps, 0.0)).unwrap() * (-eps);
        let r = (up + dn) * 0.5;
        assert!((r.re - GL2_RESIDUE).abs() < 1e-8, "{r}");
    }

    #[test]
    fn functional_equation() {
        // Λ(2s+1) E(z, s) = Λ(1−2s) E(z, −s)
        let z = C64::new(0.37, 0.8);
        let s = C64::new(0.3, 0.7);
        let a = gl2_eisenstein_fourier(z, s).unwrap() * lambda_completed(2.0 * s + 1.0).unwrap();
        let b = gl2_eisenstein_fourier(z, -s).unwrap() * lambda_completed(1.0 - 2.0 * s).unwrap();
        assert!((a - b).norm() < 1e-9 * a.norm(), "{a} {b}");
    }
}
