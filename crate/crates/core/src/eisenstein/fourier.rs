//! Degenerate and nondegenerate Fourier coefficients along N0 with respect
//! to the characters χ_{t1,t5}.

use std::f64::consts::PI;

use super::constant::{cell_sums, grid_average};
use super::series::CosetTable;
use super::{
    check_convergence, zeta_checked, zratio, Along, Breakdown, NumericMethod, Params, SeriesId,
    Term, TruncationSpec,
};
use crate::ramanujan::sigma_pair;
use crate::special::whittaker::{whittaker_closed, whittaker_w, SpectralParam, UniChar};
use crate::special::{divisor_sigma, QuadratureSpec};
use crate::symplectic::{IwasawaPoint, WeylWord};
use crate::{Result, C64};

/// Coefficients c_w with F_χ = Σ c_w W_w(g, ν_W, χ), and the ν_W at which
/// the Whittaker functions are evaluated.
pub(crate) fn fourier_coefficients(
    id: SeriesId,
    chi: UniChar,
    params: &Params,
) -> Result<(Vec<(WeylWord, C64)>, SpectralParam)> {
    match id {
        SeriesId::E0 => {
            let nu = params.minimal()?;
            Ok((e0_coefficients(chi, &nu)?, nu))
        }
        SeriesId::Ealpha => {
            let nu = params.maximal()?;
            let nw = SpectralParam::new(nu + 0.5, nu);
            Ok((scale(ealpha_coefficients(chi, nu)?), nw))
        }
        SeriesId::Ebeta => {
            let nu = params.maximal()?;
            let nw = SpectralParam::new(nu, (nu + 1.0) / 2.0);
            Ok((scale(ebeta_coefficients(chi, nu)?), nw))
        }
    }
}

/// The maximal series are residues of E0 divided by 3/π, while the
/// residue of ζ(2s)/ζ(2s+1) at s = 1/2 is 3/π²; hence an overall 1/π.
fn scale(v: Vec<(WeylWord, C64)>) -> Vec<(WeylWord, C64)> {
    v.into_iter().map(|(w, c)| (w, c / PI)).collect()
}

fn sig(s: C64, t: i64) -> C64 {
    divisor_sigma(s, t.unsigned_abs())
}

fn e0_coefficients(chi: UniChar, nu: &SpectralParam) -> Result<Vec<(WeylWord, C64)>> {
    let (n1, n2) = (nu.nu1, nu.nu2);
    let ra = zratio(2.0 * n1 - 2.0 * n2)?;
    let rb = zratio(2.0 * n2 - n1)?;
    let r1 = zratio(n1)?;
    let r2 = zratio(2.0 * n2)?;
    let za = zeta_checked(2.0 * n1 - 2.0 * n2 + 1.0)?;
    let zb = zeta_checked(2.0 * n2 - n1 + 1.0)?;
    let z1 = zeta_checked(n1 + 1.0)?;
    let z2 = zeta_checked(2.0 * n2 + 1.0)?;
    let den4 = za * zb * z1 * z2;
    use WeylWord::*;
    Ok(match (chi.t1 != 0, chi.t5 != 0) {
        (false, false) => vec![
            (Id, C64::new(1.0, 0.0)),
            (A, ra),
            (B, rb),
            (AB, ra * r1),
            (BA, rb * r2),
            (ABA, r1 * ra * r2),
            (BAB, r2 * rb * r1),
            (ABAB, ra * rb * r1 * r2),
        ],
        (true, false) => {
            let t = chi.t1;
            let s_a = sig(2.0 * n2 - 2.0 * n1, t);
            let s_2 = sig(-2.0 * n2, t);
            vec![
                (A, s_a / za),
                (BA, rb * s_2 / z2),
                (ABA, r1 * ra * s_2 / z2),
                (
                    ABAB,
                    s_a * zeta_checked(2.0 * n2 - n1)? * zeta_checked(n1)? * zeta_checked(2.0 * n2)?
                        / den4,
                ),
            ]
        }
        (false, true) => {
            let t = chi.t5;
            let s_b = sig(n1 - 2.0 * n2, t);
            let s_1 = sig(-n1, t);
            vec![
                (B, s_b / zb),
                (AB, ra * s_1 / z1),
                (BAB, r2 * rb * s_1 / z1),
                (
                    ABAB,
                    s_b * zeta_checked(2.0 * n1 - 2.0 * n2)?
                        * zeta_checked(n1)?
                        * zeta_checked(2.0 * n2)?
                        / den4,
                ),
            ]
        }
        (true, true) => {
            let s = sigma_pair(-n2, n2 - n1, chi.t1.unsigned_abs(), chi.t5.unsigned_abs())?;
            vec![(ABAB, s / den4)]
        }
    })
}

fn ealpha_coefficients(chi: UniChar, nu: C64) -> Result<Vec<(WeylWord, C64)>> {
    let r_h = zratio(nu + 0.5)?;
    let r_2 = zratio(2.0 * nu)?;
    let r_m = zratio(nu - 0.5)?;
    use WeylWord::*;
    Ok(match (chi.t1 != 0, chi.t5 != 0) {
        (false, false) => vec![
            (A, C64::new(1.0, 0.0)),
            (AB, r_h),
            (ABA, r_2 * r_h),
            (ABAB, r_m * r_2 * r_h),
        ],
        (true, false) => vec![(
            ABA,
            sig(-2.0 * nu, chi.t1) / zeta_checked(2.0 * nu + 1.0)? * r_h,
        )],
        (false, true) => vec![
            (AB, sig(-nu - 0.5, chi.t5) / zeta_checked(nu + 1.5)?),
            (
                ABAB,
                sig(0.5 - nu, chi.t5) / zeta_checked(nu + 0.5)? * r_2 * r_h,
            ),
        ],
        (true, true) => vec![],
    })
}

fn ebeta_coefficients(chi: UniChar, nu: C64) -> Result<Vec<(WeylWord, C64)>> {
    let r1 = zratio(nu + 1.0)?;
    let r0 = zratio(nu)?;
    let rm = zratio(nu - 1.0)?;
    use WeylWord::*;
    Ok(match (chi.t1 != 0, chi.t5 != 0) {
        (false, false) => vec![
            (B, C64::new(1.0, 0.0)),
            (BA, r1),
            (BAB, r0 * r1),
            (ABAB, rm * r0 * r1),
        ],
        (true, false) => vec![
            (BA, sig(-nu - 1.0, chi.t1) / zeta_checked(nu + 2.0)?),
            (
                ABAB,
                sig(1.0 - nu, chi.t1) / zeta_checked(nu)? * r0 * r1,
            ),
        ],
        // σ_{−ν}: the residue of the s_β s_α s_β coefficient of E0
        (false, true) => vec![(BAB, sig(-nu, chi.t5) / zeta_checked(nu + 1.0)? * r1)],
        (true, true) => vec![],
    })
}

/// W_w by closed form where one exists, by quadrature for the long element
/// at a nondegenerate character.
pub(crate) fn whittaker_value(
    w: WeylWord,
    g: &IwasawaPoint,
    nu: &SpectralParam,
    chi: UniChar,
    quad: &QuadratureSpec,
) -> Result<(C64, f64)> {
    if w == WeylWord::ABAB && chi.t1 != 0 && chi.t5 != 0 {
        let r = whittaker_w(w, g, nu, chi, quad)?;
        Ok((r.value, r.error))
    } else {
        Ok((whittaker_closed(w, g, nu, chi, quad)?, 0.0))
    }
}

/// Closed-form Fourier coefficient F_χ(g) with one term per Weyl element.
pub fn fourier_closed(
    id: SeriesId,
    chi: UniChar,
    g: &IwasawaPoint,
    params: &Params,
    quad: &QuadratureSpec,
) -> Result<Breakdown> {
    g.validate()?;
    let (coefs, nw) = fourier_coefficients(id, chi, params)?;
    let mut terms = Vec::new();
    for (w, c) in coefs {
        let (wv, err) = whittaker_value(w, g, &nw, chi, quad)?;
        terms.push(Term {
            label: w.name().into(),
            value: c * wv,
            error: c.norm() * err,
        });
    }
    Ok(Breakdown::from_terms(terms))
}

/// Numerical Fourier coefficient. `Unfolded` (E0) multiplies truncated
/// coset sums S_w(χ) by Jacquet integrals cell by cell; `Grid` integrates
/// the truncated series against χ̄ over a midpoint grid on N0(ℤ)\N0(ℝ).
pub fn fourier_numeric(
    id: SeriesId,
    chi: UniChar,
    g: &IwasawaPoint,
    params: &Params,
    t: &TruncationSpec,
) -> Result<Breakdown> {
    g.validate()?;
    t.validate()?;
    check_convergence(id, params)?;
    match (t.method, id) {
        (NumericMethod::Unfolded, SeriesId::E0) => {
            let nu = params.minimal()?;
            let mut terms = Vec::new();
            for w in WeylWord::ALL {
                let s = cell_sums(w, t.height_bound, &[chi], &nu)[0];
                let j = whittaker_w(w, g, &nu, chi, &t.quad)?;
                terms.push(Term {
                    label: w.name().into(),
                    value: s * j.value,
                    error: s.norm() * j.error,
                });
            }
            Ok(Breakdown::from_terms(terms))
        }
        (NumericMethod::Unfolded, _) => Err(crate::Error::Invalid(
            "the unfolded method is available for E0 only; use the grid".into(),
        )),
        (NumericMethod::Grid, _) => {
            let table = CosetTable::build(id, params, t.height_bound, t.max_terms)?;
            grid_average(&table, g, Along::P0, chi, t.grid)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::constant_term_closed;
    use super::*;

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn trivial_character_matches_constant_term() {
        let g = IwasawaPoint::new(0.1, 0.2, -0.3, 0.15, 1.1, 0.9);
        let q = QuadratureSpec::default();
        let cases = [
            (SeriesId::E0, Params::Minimal(SpectralParam::new(C64::new(8.0, 0.3), C64::new(6.0, 0.1)))),
            (SeriesId::Ealpha, Params::Maximal(C64::new(3.3, 0.2))),
            (SeriesId::Ebeta, Params::Maximal(C64::new(4.1, -0.3))),
        ];
        for (id, p) in cases {
            let f = fourier_closed(id, UniChar::default(), &g, &p, &q).unwrap();
            let c = constant_term_closed(id, Along::P0, &g, &p).unwrap();
            assert_eq!(f.terms.len(), c.terms.len());
            for (a, b) in f.terms.iter().zip(&c.terms) {
                assert!(rel(a.value, b.value) < 1e-11, "{id:?} {} {}: {} {}", a.label, b.label, a.value, b.value);
            }
        }
    }

    #[test]
    fn unfolded_degenerate_matches_closed() {
        let g = IwasawaPoint::new(0.1, 0.2, -0.3, 0.15, 1.1, 0.9);
        let p = Params::Minimal(SpectralParam::real(8.0, 6.0));
        let t = TruncationSpec::new(30, 16);
        for chi in [UniChar::new(1, 0), UniChar::new(0, 1), UniChar::new(-2, 0)] {
            let n = fourier_numeric(SeriesId::E0, chi, &g, &p, &t).unwrap();
            let c = fourier_closed(SeriesId::E0, chi, &g, &p, &t.quad).unwrap();
            assert!(rel(n.total, c.total) < 1e-2, "{chi:?}: {} {}", n.total, c.total);
        }
    }
}
