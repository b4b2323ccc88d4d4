//! Equidistribution experiments on families of Galois orbits.
//!
//! A [`PointFamily`] produces polynomials `P_n`; for each `n` the runner
//! integrates the Green function of a divisor `G` against the empirical
//! measure of the roots of `P_n` at every chosen place and compares with the
//! equilibrium integral. Finite places are exact rationals in units of
//! `log p`.

mod families;

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::Zero;

pub use families::{family_autissier, family_power_shift, family_template, PointFamily};

use crate::arch::{
    empirical_integral_arch, empirical_integral_arch_centered, equilibrium_integral_circle, log_plus,
    mahler_univariate, ArchError, GreenSpec,
};
use crate::heights::Place;
use crate::numeric::ln_abs_bigint;
use crate::padic::{
    empirical_integral_padic_divisor, equilibrium_integral_gauss, relevant_primes, LocalValue, PadicError,
    DEFAULT_TRIAL_BOUND,
};
use crate::heights::weil_height;
use crate::poly::{primitive_gcd, resultant, IntPoly, PolyError};
use crate::roots::{find_roots_with, RootConfig, RootSet};

/// Rows whose root inclusion radii exceed this are flagged.
pub const IMPRECISE_RADIUS: f64 = 1e-8;

/// Root-based and exact archimedean integrals may differ by this much.
pub const AUDIT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EquidistError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Arch(#[from] ArchError),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error("{0}")]
    BadFamily(String),
    #[error("divisor polynomial must be nonzero and primitive")]
    BadDivisor,
}

/// `eq + (d·deg D/deg X)·(h_D/(d·deg D) − h_X/((d+1)·deg X))`: the limit of
/// `Σ_S` empirical integrals for a sequence of S-integral points of height
/// tending to the minimum.
pub fn predicted_limit(h_d: f64, h_x: f64, d: u32, deg_d: u32, deg_x: u32, equilibrium_sum: f64) -> f64 {
    let (d, deg_d, deg_x) = (d as f64, deg_d as f64, deg_x as f64);
    equilibrium_sum + (d * deg_d / deg_x) * (h_d / (d * deg_d) - h_x / ((d + 1.0) * deg_x))
}

/// Something noteworthy about one row.
#[derive(Debug, Clone, PartialEq)]
pub enum RowFlag {
    GeneratorFailed(String),
    RootFailure(String),
    /// The orbit meets the divisor.
    DivisorCollision,
    /// The root-based archimedean integral disagrees with the exact
    /// resultant identity.
    AuditMismatch { root_based: f64, exact: f64 },
    /// `Res(P_n, G)` has prime factors outside the chosen finite places.
    NotSIntegral(Vec<u64>),
    /// `Res(P_n, G)` could not be fully factored by trial division.
    IncompletePlaces,
    /// `P_n` was divided by its content.
    Normalized,
    /// Some root inclusion radius exceeds [`IMPRECISE_RADIUS`].
    ImpreciseRoots(f64),
}

/// Integrals at one place for one row.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaceEntry {
    pub place: Place,
    pub empirical: f64,
    pub equilibrium: f64,
    /// Exact values in units of `log p` at finite places.
    pub empirical_exact: Option<BigRational>,
    pub equilibrium_exact: Option<BigRational>,
    /// Archimedean empirical integral from the resultant identity.
    pub audit: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub n: u64,
    pub degree: usize,
    pub height: Option<f64>,
    pub places: Vec<PlaceEntry>,
    pub empirical_sum: Option<f64>,
    pub equilibrium_sum: f64,
    pub gap: Option<f64>,
    pub flags: Vec<RowFlag>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub family: String,
    pub description: String,
    pub divisor: IntPoly,
    pub places: Vec<Place>,
    pub truncation: Option<f64>,
    pub rows: Vec<Row>,
    /// `h(D) = log M(G)`.
    pub divisor_height: f64,
    pub equilibrium_sum: f64,
    pub predicted_limit: f64,
    /// `(n, Σ_S empirical − Σ_S equilibrium)` for every complete row.
    pub gap_series: Vec<(u64, f64)>,
}

/// A configured experiment; rows can be computed in any order or in
/// parallel and assembled with [`Experiment::report`].
#[derive(Debug)]
pub struct Experiment {
    family: PointFamily,
    divisor: IntPoly,
    spec: GreenSpec,
    places: Vec<Place>,
    truncation: Option<f64>,
    roots: RootConfig,
    center: Option<BigRational>,
    equilibrium: Vec<(f64, Option<BigRational>)>,
    divisor_height: f64,
}

struct Orbit {
    plain: RootSet,
    centered: Option<(RootSet, BigRational)>,
}

impl Experiment {
    /// `places` lists the archimedean place and/or primes. The divisor must
    /// be primitive (the Weil metric is then trivial at every prime).
    pub fn new(
        family: PointFamily,
        divisor: IntPoly,
        places: Vec<Place>,
        truncation: Option<f64>,
    ) -> Result<Self, EquidistError> {
        if divisor.is_zero() || !divisor.is_primitive() {
            return Err(EquidistError::BadDivisor);
        }
        let spec = GreenSpec::new(divisor.clone())?;
        let mut equilibrium = Vec::with_capacity(places.len());
        for place in &places {
            equilibrium.push(match place {
                Place::Infinite => (equilibrium_integral_circle(&spec)?, None),
                Place::Finite(p) => {
                    let v = equilibrium_integral_gauss(&divisor, *p)?;
                    (v.to_f64(), Some(v.coefficient_of_log_p))
                }
            });
        }
        let center = match divisor.degree() {
            Some(1) => Some(BigRational::new(-divisor.coeff(0), divisor.coeff(1))),
            _ => None,
        };
        let divisor_height = mahler_univariate(&divisor)?;
        Ok(Self {
            family,
            divisor,
            spec,
            places,
            truncation,
            roots: RootConfig::default(),
            center,
            equilibrium,
            divisor_height,
        })
    }

    pub fn family(&self) -> &PointFamily {
        &self.family
    }

    pub fn places(&self) -> &[Place] {
        &self.places
    }

    fn equilibrium_sum(&self) -> f64 {
        self.equilibrium.iter().map(|e| e.0).sum()
    }

    fn orbit(&self, p: &IntPoly) -> Result<Orbit, String> {
        let plain = find_roots_with(p, &self.roots).map_err(|e| e.to_string())?;
        let centered = self.center.as_ref().map(|a| (plain.recentered(p, a), a.clone()));
        Ok(Orbit { plain, centered })
    }

    /// One row of the report.
    pub fn row(&self, n: u64) -> Row {
        let mut row = Row {
            n,
            degree: 0,
            height: None,
            places: Vec::new(),
            empirical_sum: None,
            equilibrium_sum: self.equilibrium_sum(),
            gap: None,
            flags: Vec::new(),
        };
        let p = match self.family.generate(n) {
            Ok(p) => p,
            Err(e) => {
                row.flags.push(RowFlag::GeneratorFailed(e.to_string()));
                return row;
            }
        };
        let p = if p.is_primitive() {
            p
        } else {
            row.flags.push(RowFlag::Normalized);
            p.primitive_part().expect("nonzero")
        };
        let d = p.degree().unwrap_or(0);
        row.degree = d;
        let df = d as f64;
        let lead = p.leading_coeff().expect("nonzero").clone();

        let res = resultant(&p, &self.divisor);
        if res.is_zero() {
            row.flags.push(RowFlag::DivisorCollision);
        } else {
            let finite: Vec<_> = self.places.iter().filter_map(|pl| match pl {
                Place::Finite(q) => Some(q.get()),
                Place::Infinite => None,
            }).collect();
            let rp = relevant_primes(core::slice::from_ref(&res), &[], DEFAULT_TRIAL_BOUND);
            let outside: Vec<u64> = rp.primes.iter().map(|q| q.get()).filter(|q| !finite.contains(q)).collect();
            if !outside.is_empty() {
                row.flags.push(RowFlag::NotSIntegral(outside));
            }
            if !rp.is_complete() {
                row.flags.push(RowFlag::IncompletePlaces);
            }
        }

        // roots on the divisor are split off exactly
        let (arch_poly, on_divisor) = if res.is_zero() { split_off(&p, &self.divisor) } else { (p.clone(), 0) };
        let arch_degree = arch_poly.degree().unwrap_or(0);
        let needs_roots = arch_degree > 0 && (d > 1 || self.places.contains(&Place::Infinite));
        let orbit = if needs_roots {
            match self.orbit(&arch_poly) {
                Ok(o) => {
                    if o.plain.radius_bound() > IMPRECISE_RADIUS {
                        row.flags.push(RowFlag::ImpreciseRoots(o.plain.radius_bound()));
                    }
                    Some(o)
                }
                Err(e) => {
                    row.flags.push(RowFlag::RootFailure(e));
                    return row;
                }
            }
        } else {
            None
        };

        let sum_log_plus = orbit.as_ref().map(|o| o.plain.weighted_sum(|x| log_plus(x.value.norm())));
        row.height = if d == 1 {
            Some(ln_abs_bigint(&p.coeff(0)).max(ln_abs_bigint(&p.coeff(1))))
        } else if on_divisor == 0 {
            Some((ln_abs_bigint(&lead) + sum_log_plus.unwrap_or(0.0)) / df)
        } else {
            match weil_height(&p) {
                Ok(h) => Some(h.total),
                Err(e) => {
                    row.flags.push(RowFlag::RootFailure(e.to_string()));
                    None
                }
            }
        };

        let m = self.divisor.degree().unwrap_or(0) as f64;
        let mut complete = true;
        for (place, (eq, eq_exact)) in self.places.iter().zip(&self.equilibrium) {
            let entry = match place {
                Place::Infinite => {
                    let off = match &orbit {
                        None => Ok(0.0),
                        Some(Orbit { centered: Some((r, a)), .. }) => {
                            empirical_integral_arch_centered(r, a, &self.spec, self.truncation)
                        }
                        Some(Orbit { plain, .. }) => empirical_integral_arch(plain, &self.spec, self.truncation),
                    };
                    let value = match (on_divisor, self.truncation) {
                        (0, _) => off,
                        (_, None) => Err(ArchError::ZeroPolynomial),
                        (k, Some(b)) => off.map(|v| (k as f64 * b + arch_degree as f64 * v) / df),
                    };
                    let audit = (!res.is_zero()).then(|| {
                        (m * sum_log_plus.unwrap_or(0.0) - ln_abs_bigint(&res) + m * ln_abs_bigint(&lead)) / df
                    });
                    match value {
                        Ok(v) => {
                            if let (Some(a), None) = (audit, self.truncation) {
                                if (a - v).abs() > AUDIT_TOLERANCE {
                                    row.flags.push(RowFlag::AuditMismatch { root_based: v, exact: a });
                                }
                            }
                            PlaceEntry {
                                place: *place,
                                empirical: v,
                                equilibrium: *eq,
                                empirical_exact: None,
                                equilibrium_exact: None,
                                audit,
                            }
                        }
                        Err(_) => {
                            complete = false;
                            continue;
                        }
                    }
                }
                Place::Finite(q) => match empirical_integral_padic_divisor(&p, &self.divisor, *q) {
                    Ok(v) => finite_entry(*place, v, *eq, eq_exact.clone()),
                    Err(_) => {
                        complete = false;
                        continue;
                    }
                },
            };
            row.places.push(entry);
        }
        if complete {
            let s: f64 = row.places.iter().map(|e| e.empirical).sum();
            row.empirical_sum = Some(s);
            row.gap = Some(s - row.equilibrium_sum);
        }
        row
    }

    /// Assembles rows (in any order) into a report sorted by `n`.
    pub fn report(&self, mut rows: Vec<Row>) -> ExperimentReport {
        rows.sort_by_key(|r| r.n);
        let equilibrium_sum = self.equilibrium_sum();
        let deg_d = self.divisor.degree().unwrap_or(0) as u32;
        let predicted = if deg_d == 0 {
            equilibrium_sum
        } else {
            predicted_limit(self.divisor_height, 0.0, 1, deg_d, 1, equilibrium_sum)
        };
        let gap_series = rows.iter().filter_map(|r| r.gap.map(|g| (r.n, g))).collect();
        ExperimentReport {
            family: self.family.name.clone(),
            description: self.family.description.clone(),
            divisor: self.divisor.clone(),
            places: self.places.clone(),
            truncation: self.truncation,
            rows,
            divisor_height: self.divisor_height,
            equilibrium_sum,
            predicted_limit: predicted,
            gap_series,
        }
    }

    /// Computes every row sequentially.
    pub fn run(&self, ns: &[u64]) -> ExperimentReport {
        self.report(ns.iter().map(|&n| self.row(n)).collect())
    }
}

// (P / gcd(P, G)^∞, number of roots of P on G = 0)
fn split_off(p: &IntPoly, g: &IntPoly) -> (IntPoly, usize) {
    let d = p.degree().unwrap_or(0);
    let mut rest = p.clone();
    loop {
        let common = primitive_gcd(&rest, g);
        if common.degree().unwrap_or(0) == 0 {
            break;
        }
        rest = rest.div_exact(&common).expect("gcd divides");
    }
    let k = d - rest.degree().unwrap_or(0);
    (rest, k)
}

fn finite_entry(place: Place, v: LocalValue, eq: f64, eq_exact: Option<BigRational>) -> PlaceEntry {
    PlaceEntry {
        place,
        empirical: v.to_f64(),
        equilibrium: eq,
        empirical_exact: Some(v.coefficient_of_log_p),
        equilibrium_exact: eq_exact,
        audit: None,
    }
}

/// Runs `family` against the divisor `G` over `ns`.
pub fn run_experiment(
    family: PointFamily,
    divisor: IntPoly,
    places: Vec<Place>,
    ns: &[u64],
    truncation: Option<f64>,
) -> Result<ExperimentReport, EquidistError> {
    Ok(Experiment::new(family, divisor, places, truncation)?.run(ns))
}

/// True when every row's gap is within `tol` of `target` from `n_min` on.
pub fn gap_within(report: &ExperimentReport, n_min: u64, target: f64, tol: f64) -> bool {
    report.gap_series.iter().filter(|(n, _)| *n >= n_min).all(|(_, g)| (g - target).abs() <= tol)
}
