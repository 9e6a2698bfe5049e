//! Eα and Eβ as residues of E0 at s = 1/2 along the lines
//! ν = (ν + s, ν) and ν = (ν, ν/2 + s), with residue 3/π.

use serde::{Deserialize, Serialize};

use super::constant::constant_term_closed;
use super::fourier::{fourier_coefficients, whittaker_value};
use super::gl2::GL2_RESIDUE;
use super::{Along, Breakdown, Params, SeriesId, Term};
use crate::special::whittaker::{SpectralParam, UniChar};
use crate::special::QuadratureSpec;
use crate::symplectic::IwasawaPoint;
use crate::{Error, Result, C64};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidueCheck {
    pub eps: f64,
    /// Symmetric estimate of Res_{s=1/2} of the P0 constant term of E0.
    pub alpha_residue: C64,
    /// (3/π)·(P0 constant term of Eα).
    pub alpha_expected: C64,
    pub beta_residue: C64,
    pub beta_expected: C64,
}

impl ResidueCheck {
    pub fn alpha_rel_error(&self) -> f64 {
        (self.alpha_residue - self.alpha_expected).norm() / self.alpha_expected.norm()
    }

    pub fn beta_rel_error(&self) -> f64 {
        (self.beta_residue - self.beta_expected).norm() / self.beta_expected.norm()
    }
}

/// E0 parameter on the residue line of the given maximal series.
fn line(id: SeriesId, nu: C64, s: f64) -> Result<SpectralParam> {
    match id {
        SeriesId::Ealpha => Ok(SpectralParam::new(nu + s, nu)),
        SeriesId::Ebeta => Ok(SpectralParam::new(nu, nu / 2.0 + s)),
        SeriesId::E0 => Err(Error::Invalid("residues are taken for ea or eb".into())),
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 0.1) {
        return Err(Error::Invalid("eps must lie in (0, 0.1)".into()));
    }
    Ok(())
}

/// (s − 1/2)·f(s) averaged over s = 1/2 ± eps; the O(eps) terms cancel.
fn symmetric<T>(eps: f64, mut f: impl FnMut(f64) -> Result<T>, mut get: impl FnMut(&T) -> Vec<C64>) -> Result<Vec<C64>> {
    let up = get(&f(0.5 + eps)?);
    let dn = get(&f(0.5 - eps)?);
    Ok(up
        .iter()
        .zip(&dn)
        .map(|(a, b)| (*a * eps - *b * eps) * 0.5)
        .collect())
}

/// Compare the residue of the P0 constant term of E0 with (3/π) times the
/// P0 constant term of Eα and Eβ.
pub fn residue_check(g: &IwasawaPoint, nu: C64, eps: f64) -> Result<ResidueCheck> {
    check_eps(eps)?;
    let mut out = Vec::new();
    for id in [SeriesId::Ealpha, SeriesId::Ebeta] {
        let r = symmetric(
            eps,
            |s| constant_term_closed(SeriesId::E0, Along::P0, g, &Params::Minimal(line(id, nu, s)?)),
            |b: &Breakdown| vec![b.total],
        )?[0];
        let want = constant_term_closed(id, Along::P0, g, &Params::Maximal(nu))?.total * GL2_RESIDUE;
        out.push((r, want));
    }
    Ok(ResidueCheck {
        eps,
        alpha_residue: out[0].0,
        alpha_expected: out[0].1,
        beta_residue: out[1].0,
        beta_expected: out[1].1,
    })
}

/// (π/3)·Res of each summand of the E0 constant term along `along`,
/// labelled by the E0 summand.
pub fn residue_construction(
    id: SeriesId,
    along: Along,
    g: &IwasawaPoint,
    nu: C64,
    eps: f64,
) -> Result<Breakdown> {
    check_eps(eps)?;
    let at = |s: f64| constant_term_closed(SeriesId::E0, along, g, &Params::Minimal(line(id, nu, s)?));
    let labels: Vec<String> = at(0.5 + eps)?.terms.into_iter().map(|t| t.label).collect();
    let res = symmetric(eps, at, |b: &Breakdown| b.terms.iter().map(|t| t.value).collect())?;
    Ok(Breakdown::from_terms(
        labels
            .into_iter()
            .zip(res)
            .map(|(label, v)| Term {
                label,
                value: v / GL2_RESIDUE,
                error: 0.0,
            })
            .collect(),
    ))
}

/// (π/3)·Res of the E0 Fourier coefficient. Whittaker functions are
/// analytic across the line, so only the coefficients are differenced and
/// terms whose coefficient has no pole are dropped.
pub fn fourier_residue_construction(
    id: SeriesId,
    chi: UniChar,
    g: &IwasawaPoint,
    nu: C64,
    eps: f64,
    quad: &QuadratureSpec,
) -> Result<Breakdown> {
    check_eps(eps)?;
    let coefs = |s: f64| -> Result<Vec<(crate::symplectic::WeylWord, C64)>> {
        Ok(fourier_coefficients(SeriesId::E0, chi, &Params::Minimal(line(id, nu, s)?))?.0)
    };
    let words: Vec<_> = coefs(0.5 + eps)?.into_iter().map(|(w, _)| w).collect();
    let res = symmetric(eps, coefs, |v: &Vec<(_, C64)>| v.iter().map(|(_, c)| *c).collect())?;
    let scale = res.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let nw = line(id, nu, 0.5)?;
    let mut terms = Vec::new();
    for (w, c) in words.into_iter().zip(res) {
        if c.norm() <= 1e-6 * scale {
            continue;
        }
        let (wv, err) = whittaker_value(w, g, &nw, chi, quad)?;
        terms.push(Term {
            label: w.name().into(),
            value: c * wv / GL2_RESIDUE,
            error: c.norm() * err / GL2_RESIDUE,
        });
    }
    Ok(Breakdown::from_terms(terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn residues_at_nu_four() {
        let g = IwasawaPoint::new(0.1, 0.2, -0.3, 0.15, 1.1, 0.9);
        let r = residue_check(&g, C64::new(4.0, 0.0), 1e-5).unwrap();
        assert!(r.alpha_rel_error() < 1e-4, "{r:?}");
        assert!(r.beta_rel_error() < 1e-4, "{r:?}");
    }

    #[test]
    fn corollary_constant_terms_are_residues() {
        let g = IwasawaPoint::new(0.23, 0.2, -0.3, -0.31, 1.1, 0.9);
        let nu = C64::new(4.3, 0.2);
        for id in [SeriesId::Ealpha, SeriesId::Ebeta] {
            for along in [Along::P0, Along::Pa, Along::Pb] {
                let built = residue_construction(id, along, &g, nu, 1e-5).unwrap();
                let cor = constant_term_closed(id, along, &g, &Params::Maximal(nu)).unwrap();
                assert!(rel(built.total, cor.total) < 1e-6, "{id:?} {along:?}");
                let scale = built.terms.iter().map(|t| t.value.norm()).fold(0.0, f64::max);
                let nonzero: Vec<&Term> =
                    built.terms.iter().filter(|t| t.value.norm() > 1e-6 * scale).collect();
                assert_eq!(nonzero.len(), cor.terms.len(), "{id:?} {along:?}");
                for (a, b) in nonzero.iter().zip(&cor.terms) {
                    assert!(rel(a.value, b.value) < 1e-6, "{id:?} {along:?} {} {}", a.label, b.label);
                }
            }
        }
    }

    #[test]
    fn corollary_fourier_coefficients_are_residues() {
        let g = IwasawaPoint::new(0.23, 0.2, -0.3, -0.31, 1.1, 0.9);
        let q = QuadratureSpec::default();
        let nu = C64::new(4.3, 0.0);
        for id in [SeriesId::Ealpha, SeriesId::Ebeta] {
            for chi in [UniChar::new(0, 0), UniChar::new(2, 0), UniChar::new(0, 3)] {
                let built = fourier_residue_construction(id, chi, &g, nu, 1e-5, &q).unwrap();
                let cor = super::super::fourier_closed(id, chi, &g, &Params::Maximal(nu), &q).unwrap();
                assert_eq!(built.terms.len(), cor.terms.len(), "{id:?} {chi:?}");
                for (a, b) in built.terms.iter().zip(&cor.terms) {
                    assert_eq!(a.label, b.label);
                    assert!(rel(a.value, b.value) < 1e-6, "{id:?} {chi:?} {}: {} {}", a.label, a.value, b.value);
                }
            }
        }
    }
}
