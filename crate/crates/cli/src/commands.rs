//! The computing subcommands.

use clap::{Args, Subcommand};
use serde_json::{json, Value};

use sp4::cosets::{enumerate_primitive, enumerate_r, PrimitiveSpace};
use sp4::eisenstein::{
    constant_term_closed, constant_term_numeric, eval_alt, eval_direct, fourier_closed,
    fourier_numeric, Along, Breakdown, EpsteinConvention, NumericMethod, Params, SeriesId,
    TruncationSpec,
};
use sp4::ramanujan::{dirichlet_closed, dirichlet_truncated, r_bruteforce, r_closed, RamanujanQuery};
use sp4::special::whittaker::{whittaker_closed, whittaker_w, UniChar};
use sp4::symplectic::{IwasawaPoint, WeylWord};
use sp4::C64;

use crate::config::RunConfig;
use crate::{parse, Failure, Output};

fn cval(z: C64) -> Value {
    json!([z.re, z.im])
}

fn point_json(g: &IwasawaPoint) -> Value {
    json!({"n1": g.n1, "n2": g.n2, "n4": g.n4, "n5": g.n5, "y1": g.y1, "y2": g.y2})
}

fn rel_err(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}

fn parse_with<T>(s: &str, f: impl Fn(&str) -> Result<T, String>) -> Result<T, Failure> {
    f(s).map_err(Failure::invalid)
}

// ---------------------------------------------------------------------------

#[derive(Args, Debug)]
pub struct CosetsArgs {
    /// Bruhat cell, e.g. id, s_alpha, s_beta_s_alpha, long.
    #[arg(long, conflicts_with = "space", required_unless_present = "space")]
    cell: Option<String>,
    /// Primitive variety instead of a cell: v0, va or vb.
    #[arg(long)]
    space: Option<String>,
    #[arg(long)]
    bound: i64,
}

pub fn cosets(a: &CosetsArgs, _cfg: &RunConfig) -> Result<Output, Failure> {
    if a.bound < 1 {
        return Err(Failure::invalid("bound must be at least 1"));
    }
    if let Some(space) = &a.space {
        let sp = match space.to_ascii_lowercase().as_str() {
            "v0" => PrimitiveSpace::V0,
            "va" => PrimitiveSpace::Va,
            "vb" => PrimitiveSpace::Vb,
            _ => return Err(Failure::invalid(format!("unknown space '{space}'"))),
        };
        let lines = enumerate_primitive(sp, a.bound)
            .into_iter()
            .map(|v| json!({"space": space.to_ascii_lowercase(), "v": v}))
            .collect();
        return Ok(Output::Lines(lines));
    }
    let cell: WeylWord = a.cell.as_deref().unwrap_or_default().parse()?;
    let lines = enumerate_r(cell, a.bound)
        .into_iter()
        .map(|(v, w)| json!({"cell": cell.name(), "v": v.v, "witness": w}))
        .collect();
    Ok(Output::Lines(lines))
}

// ---------------------------------------------------------------------------

#[derive(Args, Debug)]
#[command(args_conflicts_with_subcommands = true)]
pub struct RamanujanArgs {
    #[command(subcommand)]
    series: Option<RamanujanSub>,
    #[arg(long)]
    v1: Option<i64>,
    #[arg(long)]
    v12: Option<i64>,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    n1: i64,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    n2: i64,
}

#[derive(Subcommand, Debug)]
enum RamanujanSub {
    /// Truncated Dirichlet series Σ_{v1,v12 ≤ N} v1^−ν1 v12^−ν2 R, with the
    /// closed form for comparison.
    Series {
        #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
        nu1: C64,
        #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
        nu2: C64,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        n1: i64,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        n2: i64,
        #[arg(long = "N")]
        n: i64,
    },
}

pub fn ramanujan(a: &RamanujanArgs, cfg: &RunConfig) -> Result<Output, Failure> {
    if let Some(RamanujanSub::Series { nu1, nu2, n1, n2, n }) = &a.series {
        let (nu1, nu2, n1, n2, n) = (*nu1, *nu2, *n1, *n2, *n);
        let value = dirichlet_truncated(nu1, nu2, n1, n2, n, cfg.ramanujan_budget)?;
        let closed = dirichlet_closed(nu1, nu2, n1, n2, cfg.pole_eps)?;
        // Σ v1² v12² over the grid
        let s2: u128 = (1..=n as u128).map(|v| v * v).sum();
        return Ok(Output::Doc(json!({
            "command": "ramanujan series",
            "inputs": {"nu1": cval(nu1), "nu2": cval(nu2), "n1": n1, "n2": n2, "N": n},
            "value": cval(value),
            "terms": (n as u128 * n as u128).to_string(),
            "budget_used": (s2 * s2).to_string(),
            "closed": cval(closed),
            "rel_error": rel_err(value, closed),
        })));
    }
    let (Some(v1), Some(v12)) = (a.v1, a.v12) else {
        return Err(Failure::invalid("ramanujan needs --v1 and --v12 (or the series subcommand)"));
    };
    let q = RamanujanQuery { v1, v12, n1: a.n1, n2: a.n2 };
    let r = r_bruteforce(&q, cfg.ramanujan_budget)?;
    Ok(Output::Doc(json!({
        "command": "ramanujan",
        "inputs": {"v1": v1, "v12": v12, "n1": a.n1, "n2": a.n2},
        "value": cval(r.value),
        "terms": r.terms,
        "budget_used": r.budget_used,
        // r = Σ_{u|v} R, exact from the local factors
        "divisor_sum_closed": r_closed(v1, v12, a.n1, a.n2).to_string(),
    })))
}

// ---------------------------------------------------------------------------

#[derive(Args, Debug)]
pub struct WhittakerArgs {
    #[arg(long)]
    w: String,
    /// y1,y2 or n1,n2,n4,n5,y1,y2
    #[arg(long, allow_hyphen_values = true)]
    g: String,
    /// nu1,nu2
    #[arg(long, allow_hyphen_values = true)]
    nu: String,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    t1: i64,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    t5: i64,
    /// Closed form only.
    #[arg(long, conflicts_with = "integral")]
    closed: bool,
    /// Defining integral only.
    #[arg(long)]
    integral: bool,
}

pub fn whittaker(a: &WhittakerArgs, cfg: &RunConfig) -> Result<Output, Failure> {
    let w: WeylWord = a.w.parse()?;
    let g = parse_with(&a.g, parse::point)?;
    let nu = parse_with(&a.nu, parse::spectral)?;
    let chi = UniChar::new(a.t1, a.t5);
    let quad = cfg.quad();
    let mut doc = json!({
        "command": "whittaker",
        "inputs": {"w": w.name(), "g": point_json(&g), "nu": [cval(nu.nu1), cval(nu.nu2)],
                   "t1": a.t1, "t5": a.t5},
    });
    let both = !a.closed && !a.integral;
    if a.closed || both {
        match whittaker_closed(w, &g, &nu, chi, &quad) {
            Ok(v) => doc["closed"] = cval(v),
            // without a flag, a missing closed form is not an error
            Err(e) if both => doc["closed"] = json!({"unavailable": e.to_string()}),
            Err(e) => return Err(e.into()),
        }
    }
    if a.integral || both {
        let r = whittaker_w(w, &g, &nu, chi, &quad)?;
        doc["integral"] = json!({"value": cval(r.value), "error": r.error, "evals": r.evals});
    }
    Ok(Output::Doc(doc))
}

// ---------------------------------------------------------------------------

fn series_params(id: SeriesId, nu: &str) -> Result<Params, Failure> {
    match id {
        SeriesId::E0 => Ok(Params::Minimal(parse_with(nu, parse::spectral)?)),
        _ => Ok(Params::Maximal(parse_with(nu, parse::complex)?)),
    }
}

fn params_json(p: &Params) -> Value {
    match p {
        Params::Minimal(nu) => json!([cval(nu.nu1), cval(nu.nu2)]),
        Params::Maximal(nu) => cval(*nu),
    }
}

fn breakdown_json(b: &Breakdown) -> Value {
    json!({
        "total": cval(b.total),
        "error": b.error,
        "terms": b.terms.iter()
            .map(|t| json!({"label": t.label, "value": cval(t.value), "error": t.error}))
            .collect::<Vec<_>>(),
    })
}

/// Series, point and spectral parameter shared by the Eisenstein commands.
#[derive(Args, Debug)]
pub struct SeriesArgs {
    /// e0, ea or eb
    #[arg(long, default_value = "e0")]
    series: String,
    /// y1,y2 or n1,n2,n4,n5,y1,y2
    #[arg(long, allow_hyphen_values = true)]
    g: String,
    /// nu1,nu2 for e0; a single nu for ea and eb
    #[arg(long, allow_hyphen_values = true)]
    nu: String,
}

impl SeriesArgs {
    fn resolve(&self) -> Result<(SeriesId, IwasawaPoint, Params), Failure> {
        let id: SeriesId = self.series.parse()?;
        let g = parse_with(&self.g, parse::point)?;
        Ok((id, g, series_params(id, &self.nu)?))
    }
}

/// Options of the numerical routes.
#[derive(Args, Debug)]
pub struct NumericArgs {
    /// Numerical evaluation instead of the closed form.
    #[arg(long)]
    numeric: bool,
    /// Both routes and their relative difference.
    #[arg(long, conflicts_with = "numeric")]
    compare: bool,
    /// unfolded (E0 only) or grid
    #[arg(long, default_value = "unfolded")]
    method: String,
    #[arg(long)]
    bound: Option<i64>,
    #[arg(long)]
    grid: Option<usize>,
}

impl NumericArgs {
    fn truncation(&self, cfg: &RunConfig) -> Result<TruncationSpec, Failure> {
        let method = match self.method.as_str() {
            "unfolded" => NumericMethod::Unfolded,
            "grid" => NumericMethod::Grid,
            m => return Err(Failure::invalid(format!("unknown method '{m}'"))),
        };
        let mut t = TruncationSpec::new(
            self.bound.unwrap_or(cfg.height_bound),
            self.grid.unwrap_or(cfg.grid),
        )
        .with_method(method);
        t.quad = cfg.quad();
        t.max_terms = cfg.max_terms;
        t.validate()?;
        Ok(t)
    }

    fn run(
        &self,
        cfg: &RunConfig,
        doc: &mut Value,
        closed: impl FnOnce() -> sp4::Result<Breakdown>,
        numeric: impl FnOnce(&TruncationSpec) -> sp4::Result<Breakdown>,
    ) -> Result<(), Failure> {
        if self.numeric || self.compare {
            let t = self.truncation(cfg)?;
            doc["truncation"] = json!({"bound": t.height_bound, "grid": t.grid, "method": self.method});
            let n = numeric(&t)?;
            doc["numeric"] = breakdown_json(&n);
            if self.compare {
                let c = closed()?;
                doc["rel_error"] = json!(rel_err(n.total, c.total));
                doc["closed"] = breakdown_json(&c);
            }
        } else {
            doc["closed"] = breakdown_json(&closed()?);
        }
        Ok(())
    }
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    s: SeriesArgs,
    #[arg(long)]
    bound: Option<i64>,
    /// Epstein-form evaluation over primitive points.
    #[arg(long)]
    alt: bool,
    /// Exponent convention of the E0 Epstein form: resolved or displayed.
    #[arg(long, default_value = "resolved", requires = "alt")]
    convention: String,
}

pub fn eval(a: &EvalArgs, cfg: &RunConfig) -> Result<Output, Failure> {
    let (id, g, params) = a.s.resolve()?;
    let mut t = TruncationSpec::new(a.bound.unwrap_or(cfg.height_bound), cfg.grid);
    t.max_terms = cfg.max_terms;
    let conv = match a.convention.as_str() {
        "resolved" => EpsteinConvention::Resolved,
        "displayed" => EpsteinConvention::Displayed,
        c => return Err(Failure::invalid(format!("unknown convention '{c}'"))),
    };
    let v = if a.alt {
        eval_alt(id, &g, &params, &t, conv)?
    } else {
        eval_direct(id, &g, &params, &t)?
    };
    Ok(Output::Doc(json!({
        "command": "eval",
        "inputs": {"series": id.name(), "g": point_json(&g), "nu": params_json(&params),
                   "bound": t.height_bound, "method": if a.alt { "alt" } else { "direct" }},
        "value": cval(v.value),
        "terms": v.terms,
        // the outermost height shell, a proxy for the truncation error
        "last_shell": cval(v.last_shell),
        "error": v.last_shell.norm(),
    })))
}

#[derive(Args, Debug)]
pub struct ConstantArgs {
    #[command(flatten)]
    s: SeriesArgs,
    /// p0, pa or pb
    #[arg(long)]
    along: String,
    #[command(flatten)]
    num: NumericArgs,
}

pub fn constant_term(a: &ConstantArgs, cfg: &RunConfig) -> Result<Output, Failure> {
    let (id, g, params) = a.s.resolve()?;
    let along: Along = a.along.parse()?;
    let mut doc = json!({
        "command": "constant-term",
        "inputs": {"series": id.name(), "along": along.name(), "g": point_json(&g),
                   "nu": params_json(&params)},
    });
    a.num.run(
        cfg,
        &mut doc,
        || constant_term_closed(id, along, &g, &params),
        |t| constant_term_numeric(id, along, &g, &params, t),
    )?;
    Ok(Output::Doc(doc))
}

#[derive(Args, Debug)]
pub struct FourierArgs {
    #[command(flatten)]
    s: SeriesArgs,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    t1: i64,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    t5: i64,
    #[command(flatten)]
    num: NumericArgs,
}

pub fn fourier(a: &FourierArgs, cfg: &RunConfig) -> Result<Output, Failure> {
    let (id, g, params) = a.s.resolve()?;
    let chi = UniChar::new(a.t1, a.t5);
    let mut doc = json!({
        "command": "fourier",
        "inputs": {"series": id.name(), "t1": a.t1, "t5": a.t5, "g": point_json(&g),
                   "nu": params_json(&params)},
    });
    let quad = cfg.quad();
    a.num.run(
        cfg,
        &mut doc,
        || fourier_closed(id, chi, &g, &params, &quad),
        |t| fourier_numeric(id, chi, &g, &params, t),
    )?;
    Ok(Output::Doc(doc))
}
