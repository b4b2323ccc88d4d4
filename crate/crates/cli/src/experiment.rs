//! `experiment`: rows in parallel, assembled in order of n.

use heightlab_core::equidist::{
    family_autissier, family_template, Experiment, ExperimentReport, PlaceEntry, Row, RowFlag,
};
use heightlab_core::heights::Place;
use heightlab_core::padic::Prime;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::commands::{prime, univariate};
use crate::envelope::{exact, Envelope, Real};
use crate::error::CliError;

#[derive(Debug)]
pub struct Args {
    pub autissier: bool,
    pub family: Option<String>,
    pub divisor: Option<String>,
    pub n_min: u64,
    pub n_max: u64,
    pub places: Option<String>,
    pub truncate: Option<f64>,
}

#[derive(Debug)]
pub struct Output {
    pub envelope: Envelope,
    pub report: ExperimentReport,
}

fn place_name(p: &Place) -> String {
    match p {
        Place::Infinite => "inf".to_string(),
        Place::Finite(q) => q.get().to_string(),
    }
}

pub fn parse_places(text: &str) -> Result<Vec<Place>, CliError> {
    let mut out = Vec::new();
    for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let place = match tok {
            "inf" | "infinity" | "∞" => Place::Infinite,
            _ => {
                let p: u64 = tok.parse().map_err(|_| CliError::input(format!("not a place: {tok:?}")))?;
                Place::Finite(prime(p)?)
            }
        };
        if out.contains(&place) {
            return Err(CliError::input(format!("place {tok} listed twice")));
        }
        out.push(place);
    }
    if out.is_empty() {
        return Err(CliError::input("no places given"));
    }
    Ok(out)
}

fn flag_text(f: &RowFlag) -> String {
    match f {
        RowFlag::GeneratorFailed(e) => format!("generator-failed: {e}"),
        RowFlag::RootFailure(e) => format!("root-failure: {e}"),
        RowFlag::DivisorCollision => "divisor-collision".to_string(),
        RowFlag::AuditMismatch { root_based, exact } => {
            format!("audit-mismatch: root-based {root_based}, exact {exact}")
        }
        RowFlag::NotSIntegral(ps) => {
            let ps: Vec<String> = ps.iter().map(u64::to_string).collect();
            format!("not-s-integral: {}", ps.join(","))
        }
        RowFlag::IncompletePlaces => "incomplete-places".to_string(),
        RowFlag::Normalized => "normalized".to_string(),
        RowFlag::ImpreciseRoots(r) => format!("imprecise-roots: radius {r:e}"),
    }
}

#[derive(Serialize)]
struct PlaceJson {
    place: String,
    empirical: Real,
    equilibrium: Real,
    empirical_exact: Option<String>,
    equilibrium_exact: Option<String>,
    audit: Option<Real>,
}

#[derive(Serialize)]
struct RowJson {
    n: u64,
    degree: usize,
    height: Option<Real>,
    places: Vec<PlaceJson>,
    empirical_sum: Option<Real>,
    equilibrium_sum: Real,
    gap: Option<Real>,
    flags: Vec<String>,
}

fn place_json(e: &PlaceEntry) -> PlaceJson {
    PlaceJson {
        place: place_name(&e.place),
        empirical: Real(e.empirical),
        equilibrium: Real(e.equilibrium),
        empirical_exact: e.empirical_exact.as_ref().map(exact),
        equilibrium_exact: e.equilibrium_exact.as_ref().map(exact),
        audit: e.audit.map(Real),
    }
}

fn row_json(r: &Row) -> RowJson {
    RowJson {
        n: r.n,
        degree: r.degree,
        height: r.height.map(Real),
        places: r.places.iter().map(place_json).collect(),
        empirical_sum: r.empirical_sum.map(Real),
        equilibrium_sum: Real(r.equilibrium_sum),
        gap: r.gap.map(Real),
        flags: r.flags.iter().map(flag_text).collect(),
    }
}

pub fn run(args: Args) -> Result<Output, CliError> {
    let mut warnings = Vec::new();
    let (family, divisor_text, places_text) = if args.autissier {
        if args.family.is_some() {
            warnings.push("--family is ignored for the autissier experiment".to_string());
        }
        (family_autissier(), args.divisor.clone().unwrap_or_else(|| "T-2".into()), args.places.clone().unwrap_or_else(|| "inf,3".into()))
    } else {
        let template = args.family.clone().unwrap_or_else(|| "T^n-2".into());
        (
            family_template(&template)?,
            args.divisor.clone().unwrap_or_else(|| "T-1".into()),
            args.places.clone().unwrap_or_else(|| "inf".into()),
        )
    };
    if let Some(b) = args.truncate {
        if b.is_nan() {
            return Err(CliError::input("--truncate must be a number"));
        }
    }
    let (divisor, _) = univariate(&divisor_text, None)?;
    let places = parse_places(&places_text)?;
    if places.iter().any(|p| matches!(p, Place::Finite(q) if Prime::is_trusted(*q))) {
        warnings.push("some primes were assumed rather than checked".to_string());
    }
    let exp = Experiment::new(family, divisor, places, args.truncate)?;
    let ns: Vec<u64> = (args.n_min..=args.n_max).collect();
    let rows: Vec<Row> = ns.par_iter().map(|&n| exp.row(n)).collect();
    let report = exp.report(rows);

    let flagged = report.rows.iter().filter(|r| !r.flags.is_empty()).count();
    if flagged > 0 {
        warnings.push(format!("{flagged} row(s) carry flags"));
    }
    let incomplete = report.rows.iter().filter(|r| r.gap.is_none()).count();
    if incomplete > 0 {
        warnings.push(format!("{incomplete} row(s) have no gap value"));
    }
    let inputs = json!({
        "experiment": if args.autissier { "autissier" } else { "equidist" },
        "family": report.family,
        "divisor": divisor_text,
        "places": report.places.iter().map(place_name).collect::<Vec<_>>(),
        "n_min": args.n_min,
        "n_max": args.n_max,
        "truncate": args.truncate.map(Real),
    });
    let results = json!({
        "family": report.family,
        "description": report.description,
        "divisor": report.divisor.to_string(),
        "places": report.places.iter().map(place_name).collect::<Vec<_>>(),
        "truncation": report.truncation.map(Real),
        "divisor_height": Real(report.divisor_height),
        "equilibrium_sum": Real(report.equilibrium_sum),
        "predicted_limit": Real(report.predicted_limit),
        "rows": report.rows.iter().map(row_json).collect::<Vec<_>>(),
        "gap_series": report.gap_series.iter().map(|(n, g)| json!([n, Real(*g)])).collect::<Vec<_>>(),
    });
    Ok(Output { envelope: Envelope::new("experiment", inputs, results, warnings), report })
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// CSV projection: `n, degree, height`, an empirical/equilibrium pair per
/// place, `gap`, `predicted_limit`.
pub fn to_csv(report: &ExperimentReport) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["n".to_string(), "degree".to_string(), "height".to_string()];
    for p in &report.places {
        let name = place_name(p);
        header.push(format!("empirical_{name}"));
        header.push(format!("equilibrium_{name}"));
    }
    header.push("gap".to_string());
    header.push("predicted_limit".to_string());
    w.write_record(&header)?;
    for r in &report.rows {
        let mut rec = vec![r.n.to_string(), r.degree.to_string(), cell(r.height)];
        for p in &report.places {
            let e = r.places.iter().find(|e| e.place == *p);
            rec.push(cell(e.map(|e| e.empirical)));
            rec.push(cell(e.map(|e| e.equilibrium)));
        }
        rec.push(cell(r.gap));
        rec.push(report.predicted_limit.to_string());
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Numeric(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Numeric(e.to_string()))
}
