//! Scalar commands: one computation, one envelope.

use std::str::FromStr;

use heightlab_core::arch::{mahler_univariate_certified, torus_grids, SliceSum, TorusGrid};
use heightlab_core::heights::{canonical_height as core_canonical, weil_height, EscapeConfig};
use heightlab_core::padic::{
    empirical_integral_padic, empirical_integral_padic_polygon, newton_polygon as core_polygon, root_valuations,
    LocalValue, Prime,
};
use heightlab_core::poly::identifiers;
use heightlab_core::{parse_poly, parse_univariate, BigRational, IntPoly};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::envelope::{exact, Envelope, Real};
use crate::error::CliError;

const DEFAULT_GRID: usize = 256;

/// Parses a univariate polynomial, taking the variable from `var` or from
/// the text itself (`T` for constants).
pub fn univariate(text: &str, var: Option<String>) -> Result<(IntPoly, String), CliError> {
    let var = match var {
        Some(v) => v,
        None => {
            let ids = identifiers(text).map_err(CliError::input)?;
            match ids.as_slice() {
                [] => "T".to_string(),
                [v] => v.clone(),
                _ => {
                    return Err(CliError::input(format!(
                        "expected a univariate polynomial, found variables {}",
                        ids.join(", ")
                    )))
                }
            }
        }
    };
    let p = parse_univariate(text, &var)?;
    Ok((p, var))
}

pub fn nonconstant(text: &str, var: Option<String>) -> Result<(IntPoly, String), CliError> {
    let (p, var) = univariate(text, var)?;
    match p.degree() {
        None => Err(CliError::input("polynomial is zero")),
        Some(0) => Err(CliError::input("polynomial is constant")),
        Some(_) => Ok((p, var)),
    }
}

pub fn rational(text: &str) -> Result<BigRational, CliError> {
    let t = text.trim();
    if t.ends_with("/0") || t.contains("/-0") {
        return Err(CliError::input(format!("zero denominator in {t:?}")));
    }
    BigRational::from_str(t).map_err(|_| CliError::input(format!("not a rational number: {t:?}")))
}

pub fn prime(p: u64) -> Result<Prime, CliError> {
    Ok(Prime::new(p)?)
}

#[derive(Serialize)]
struct LocalJson {
    p: u64,
    coefficient_of_log_p: String,
    value: Real,
}

fn local(v: &LocalValue) -> LocalJson {
    LocalJson { p: v.p.get(), coefficient_of_log_p: exact(&v.coefficient_of_log_p), value: Real(v.to_f64()) }
}

/// Integrates a grid with slices spread over the thread pool; the
/// reduction order is fixed, so the result does not depend on scheduling.
pub fn integrate(grid: &TorusGrid) -> Result<(f64, u64), CliError> {
    let parts: Vec<SliceSum> = (0..grid.slices()).into_par_iter().map(|k| grid.slice(k)).collect();
    Ok(grid.finish(&parts)?)
}

#[derive(Serialize)]
struct QuadJson {
    grid: usize,
    estimate: Real,
    error_estimate: Real,
    nodes_dropped: u64,
}

fn quadrature(f: &heightlab_core::MultiPoly, n: usize) -> Result<QuadJson, CliError> {
    let (coarse, fine) = torus_grids(f, n)?;
    let (c, f) = (integrate(&coarse)?, integrate(&fine)?);
    Ok(QuadJson { grid: n, estimate: Real(f.0), error_estimate: Real((c.0 - f.0).abs()), nodes_dropped: f.1 })
}

pub fn mahler(text: &str, vars: Option<Vec<String>>, grid: Option<usize>) -> Result<Envelope, CliError> {
    let vars = match vars {
        Some(v) => v,
        None => identifiers(text).map_err(CliError::input)?,
    };
    let inputs = json!({ "poly": text, "vars": vars, "grid": grid });
    let mut warnings = Vec::new();
    if vars.len() <= 1 {
        let var = vars.first().cloned().unwrap_or_else(|| "T".to_string());
        let p = parse_univariate(text, &var)?;
        if p.is_zero() {
            return Err(CliError::input("Mahler measure of the zero polynomial is undefined"));
        }
        let m = mahler_univariate_certified(&p)?;
        let quad = grid.map(|n| quadrature(&p.to_multi(), n)).transpose()?;
        if let Some(q) = &quad {
            let tol = 1e-6_f64.max(3.0 * q.error_estimate.0);
            if (q.estimate.0 - m.log_mahler).abs() > tol {
                warnings.push(format!(
                    "quadrature {} differs from the root-based value {} by more than {tol:e}",
                    q.estimate.0, m.log_mahler
                ));
            }
            if q.nodes_dropped > 0 {
                warnings.push(format!("{} quadrature nodes dropped near zeros on the circle", q.nodes_dropped));
            }
        }
        let results = json!({
            "method": "roots",
            "degree": p.degree(),
            "log_mahler": Real(m.log_mahler),
            "error_bound": Real(m.error_bound),
            "quadrature": quad,
        });
        return Ok(Envelope::new("mahler", inputs, results, warnings));
    }
    let refs: Vec<&str> = vars.iter().map(String::as_str).collect();
    let f = parse_poly(text, &refs).map_err(CliError::input)?;
    if f.is_zero() {
        return Err(CliError::input("Mahler measure of the zero polynomial is undefined"));
    }
    let q = quadrature(&f, grid.unwrap_or(DEFAULT_GRID))?;
    if q.nodes_dropped > 0 {
        warnings.push(format!("{} quadrature nodes dropped near zeros on the torus", q.nodes_dropped));
    }
    let results = json!({
        "method": "quadrature",
        "homogeneous": f.is_homogeneous(),
        "log_mahler": q.estimate,
        "error_estimate": q.error_estimate,
        "quadrature": q,
    });
    Ok(Envelope::new("mahler", inputs, results, warnings))
}

pub fn height(text: &str, var: Option<String>) -> Result<Envelope, CliError> {
    let (p, var) = nonconstant(text, var)?;
    let h = weil_height(&p)?;
    let mut warnings = Vec::new();
    if h.normalized {
        warnings.push("input divided by its content".to_string());
    }
    if !h.is_complete() {
        warnings.push("leading coefficient not fully factored; see `unresolved`".to_string());
    }
    let results = json!({
        "degree": h.degree,
        "total": Real(h.total),
        "arch": Real(h.arch),
        "arch_error": Real(h.arch_error),
        "finite": h.finite.iter().map(local).collect::<Vec<_>>(),
        "unresolved": Real(h.unresolved),
    });
    Ok(Envelope::new("height", json!({ "poly": text, "var": var }), results, warnings))
}

pub fn canonical_height(
    text: &str,
    c: &str,
    var: Option<String>,
    tol: f64,
    max_iterations: usize,
) -> Result<Envelope, CliError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(CliError::input("--tol must be positive"));
    }
    let (p, var) = nonconstant(text, var)?;
    let cq = rational(c)?;
    let cfg = EscapeConfig { tol, max_iterations, ..EscapeConfig::default() };
    let h = core_canonical(&cq, &p, &cfg)?;
    let mut warnings = Vec::new();
    if h.unresolved != 0.0 {
        warnings.push("leading coefficient not fully factored; see `unresolved`".to_string());
    }
    let results = json!({
        "c": exact(&cq),
        "degree": h.degree,
        "total": Real(h.total),
        "arch": Real(h.arch),
        "arch_error": Real(h.arch_error),
        "finite": h.finite.iter().map(local).collect::<Vec<_>>(),
        "unresolved": Real(h.unresolved),
        "preperiodic": h.preperiodic,
    });
    let inputs = json!({ "poly": text, "var": var, "c": c, "tol": tol, "max_iterations": max_iterations });
    Ok(Envelope::new("canonical-height", inputs, results, warnings))
}

pub fn newton_polygon(text: &str, p: u64, var: Option<String>) -> Result<Envelope, CliError> {
    let (f, var) = univariate(text, var)?;
    if f.is_zero() {
        return Err(CliError::input("Newton polygon of the zero polynomial is undefined"));
    }
    let q = prime(p)?;
    let np = core_polygon(&f, q);
    let segments: Vec<_> =
        np.segments.iter().map(|s| json!({ "slope": exact(&s.slope), "width": s.width })).collect();
    let vals: Vec<_> = root_valuations(&np)
        .iter()
        .map(|(v, m)| json!({ "valuation": exact(v), "multiplicity": m }))
        .collect();
    let results = json!({
        "p": p,
        "points": np.points,
        "vertices": np.vertices,
        "segments": segments,
        "root_valuations": vals,
        "zero_roots": f.trailing_zeros(),
    });
    let mut warnings = Vec::new();
    if q.is_trusted() {
        warnings.push(format!("{p} assumed prime (beyond the trial-division bound)"));
    }
    Ok(Envelope::new("newton-polygon", json!({ "poly": text, "var": var, "p": p }), results, warnings))
}

pub fn local_integral(text: &str, at: &str, p: u64, var: Option<String>) -> Result<Envelope, CliError> {
    let (f, var) = nonconstant(text, var)?;
    let a = rational(at)?;
    let q = prime(p)?;
    let v = empirical_integral_padic(&f, &a, q)?;
    let check = empirical_integral_padic_polygon(&f, &a, q)?;
    let mut warnings = Vec::new();
    if check != v {
        warnings.push(format!(
            "Newton-polygon route gives {} instead of {}",
            check.coefficient_of_log_p, v.coefficient_of_log_p
        ));
    }
    if q.is_trusted() {
        warnings.push(format!("{p} assumed prime (beyond the trial-division bound)"));
    }
    let results = json!({
        "p": p,
        "at": exact(&a),
        "degree": f.degree(),
        "coefficient_of_log_p": exact(&v.coefficient_of_log_p),
        "value": Real(v.to_f64()),
        "polygon_check": exact(&check.coefficient_of_log_p),
    });
    Ok(Envelope::new("local-integral", json!({ "poly": text, "var": var, "at": at, "p": p }), results, warnings))
}
