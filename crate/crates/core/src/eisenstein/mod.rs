//! Eisenstein series on Sp(4, ℤ)\Sp(4, ℝ).
//!
//! Three series are supported: the minimal parabolic series E0(g, ν) and
//! the two maximal parabolic (Klingen and Siegel) series Eα(g, ν), Eβ(g, ν).
//! For each we provide a truncated direct evaluation, closed-form constant
//! terms along P0, Pα, Pβ, degenerate Fourier coefficients, and numerical
//! counterparts of all of these.
//!
//! Exponent conventions: E0 is normalised so that its leading constant term
//! is I0(g, ν) = y1^{ν1+2} y2^{2ν2−ν1+1}; Eα has leading term
//! (y1 y2)^{ν+3/2} and Eβ has leading term y1^{ν+2}.

mod constant;
mod fourier;
mod gl2;
mod residue;
mod series;

use serde::{Deserialize, Serialize};

use crate::special::whittaker::SpectralParam;
use crate::special::QuadratureSpec;
use crate::{Error, Result, C64};

pub use constant::{
    constant_term_closed, constant_term_numeric, fit_exponents, p0_exponents, ExponentFit,
};
pub use fourier::{fourier_closed, fourier_numeric};
pub use gl2::{bessel_k, gl2_constant_term, gl2_eisenstein, gl2_eisenstein_fourier, GL2_RESIDUE};
pub use residue::{
    fourier_residue_construction, residue_check, residue_construction, ResidueCheck,
};
pub use series::{
    epstein_exponents, epstein_term, eval_alt, eval_direct, i0, psi_w, CosetTable,
    EpsteinConvention, PsiTable, SeriesValue,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesId {
    E0,
    #[serde(rename = "ea")]
    Ealpha,
    #[serde(rename = "eb")]
    Ebeta,
}

impl SeriesId {
    pub fn name(self) -> &'static str {
        match self {
            SeriesId::E0 => "e0",
            SeriesId::Ealpha => "ea",
            SeriesId::Ebeta => "eb",
        }
    }
}

impl std::str::FromStr for SeriesId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "e0" => Ok(SeriesId::E0),
            "ea" => Ok(SeriesId::Ealpha),
            "eb" => Ok(SeriesId::Ebeta),
            _ => Err(Error::Invalid(format!("unknown series '{s}'"))),
        }
    }
}

/// Parabolic along which a constant term is taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Along {
    P0,
    Pa,
    Pb,
}

impl Along {
    pub fn name(self) -> &'static str {
        match self {
            Along::P0 => "p0",
            Along::Pa => "pa",
            Along::Pb => "pb",
        }
    }
}

impl std::str::FromStr for Along {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p0" => Ok(Along::P0),
            "pa" => Ok(Along::Pa),
            "pb" => Ok(Along::Pb),
            _ => Err(Error::Invalid(format!("unknown parabolic '{s}'"))),
        }
    }
}

/// Spectral data: (ν1, ν2) for E0, a single ν for Eα and Eβ.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Params {
    Minimal(SpectralParam),
    Maximal(C64),
}

impl Params {
    pub fn minimal(&self) -> Result<SpectralParam> {
        match self {
            Params::Minimal(nu) => Ok(*nu),
            Params::Maximal(_) => Err(Error::Invalid("E0 needs (nu1, nu2)".into())),
        }
    }

    pub fn maximal(&self) -> Result<C64> {
        match self {
            Params::Maximal(nu) => Ok(*nu),
            Params::Minimal(_) => Err(Error::Invalid("maximal series need a single nu".into())),
        }
    }
}

/// Check that `params` fits `id` and lies in the region of absolute
/// convergence of the defining sum.
pub fn check_convergence(id: SeriesId, params: &Params) -> Result<()> {
    let fin = |z: C64| z.re.is_finite() && z.im.is_finite();
    match id {
        SeriesId::E0 => {
            let nu = params.minimal()?;
            if !(fin(nu.nu1) && fin(nu.nu2)) {
                return Err(Error::Invalid("non-finite nu".into()));
            }
            let (a, b) = (nu.nu1.re, nu.nu2.re);
            let conds = [
                (2.0 * a - 2.0 * b, "Re(2nu1 - 2nu2) > 1"),
                (2.0 * b - a, "Re(2nu2 - nu1) > 1"),
                (a, "Re nu1 > 1"),
                (2.0 * b, "Re 2nu2 > 1"),
            ];
            for (x, what) in conds {
                if x <= 1.0 {
                    return Err(Error::Region(what.into()));
                }
            }
        }
        SeriesId::Ealpha | SeriesId::Ebeta => {
            let nu = params.maximal()?;
            if !fin(nu) {
                return Err(Error::Invalid("non-finite nu".into()));
            }
            let (lim, what) = if id == SeriesId::Ealpha {
                (1.5, "Re nu > 3/2")
            } else {
                (2.0, "Re nu > 2")
            };
            if nu.re <= lim {
                return Err(Error::Region(what.into()));
            }
        }
    }
    Ok(())
}

/// How numerical constant terms and Fourier coefficients are computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NumericMethod {
    /// Coset sums per Bruhat cell times Jacquet integrals (E0 only).
    Unfolded,
    /// Midpoint tensor grid over the unipotent radical applied to the
    /// truncated series.
    Grid,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncationSpec {
    /// Sup-norm bound on coset data.
    pub height_bound: i64,
    /// Grid points per unipotent coordinate.
    pub grid: usize,
    pub method: NumericMethod,
    pub quad: QuadratureSpec,
    /// Cap on coset representatives visited.
    pub max_terms: u64,
}

impl TruncationSpec {
    pub fn new(height_bound: i64, grid: usize) -> Self {
        TruncationSpec {
            height_bound,
            grid,
            method: NumericMethod::Unfolded,
            quad: QuadratureSpec::with_tol(1e-12, 1e-9),
            max_terms: 2_000_000_000,
        }
    }

    pub fn with_method(mut self, method: NumericMethod) -> Self {
        self.method = method;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.height_bound < 1 {
            return Err(Error::Invalid("height bound must be at least 1".into()));
        }
        if self.height_bound > 1_000_000 {
            return Err(Error::Budget("height bound too large".into()));
        }
        if self.grid == 0 {
            return Err(Error::Invalid("grid must be positive".into()));
        }
        self.quad.validate()
    }
}

/// One labelled summand of a constant term or Fourier coefficient.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub label: String,
    pub value: C64,
    /// Error estimate for numerically computed terms (0 for closed forms).
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Breakdown {
    pub total: C64,
    pub terms: Vec<Term>,
    pub error: f64,
}

impl Breakdown {
    pub fn from_terms(terms: Vec<Term>) -> Breakdown {
        let total = terms.iter().fold(C64::new(0.0, 0.0), |a, t| a + t.value);
        let error = terms.iter().map(|t| t.error).sum();
        Breakdown {
            total,
            terms,
            error,
        }
    }

    pub fn term(&self, label: &str) -> Option<&Term> {
        self.terms.iter().find(|t| t.label == label)
    }
}

fn term(label: &str, value: C64) -> Term {
    Term {
        label: label.to_string(),
        value,
        error: 0.0,
    }
}

/// Λ(s)/Λ(s+1), rejecting only exact poles.
fn lratio(s: C64) -> Result<C64> {
    let near = |z: C64| (z - C64::new(0.0, 0.0)).norm() < 1e-13 || (z - C64::new(1.0, 0.0)).norm() < 1e-13;
    if near(s) || near(s + 1.0) {
        return Err(Error::Pole(format!("Lambda({s})")));
    }
    Ok(crate::special::lambda_completed(s)? / crate::special::lambda_completed(s + 1.0)?)
}

/// ζ(s)/ζ(s+1), rejecting only the exact pole.
fn zratio(s: C64) -> Result<C64> {
    Ok(zeta_checked(s)? / zeta_checked(s + 1.0)?)
}

fn zeta_checked(s: C64) -> Result<C64> {
    if (s - C64::new(1.0, 0.0)).norm() < 1e-13 {
        return Err(Error::Pole(format!("zeta({s})")));
    }
    crate::special::zeta(s)
}
