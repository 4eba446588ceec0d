//! Finite-prefix diagnostics for marked subset sequences. Nothing here
//! decides a limit property; the report only carries per-index values and
//! monotonicity flags.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::eval::{Arity, CompiledFormula};
use crate::logic::Formula;
use crate::rational::{self, Exact, Rational};
use crate::structure::{Structure, VertexSet};

/// Measure of the marked set followed by pairings on the induced
/// substructure. The pairings are absent when the set is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    pub measure: Rational,
    pub pairings: Option<Vec<Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadiusStats {
    pub d: usize,
    pub ball: Rational,
    pub boundary_ball: Rational,
    /// `sup_v nu(Ball_d(v) ∩ X) / nu(X)`; absent for empty `X`.
    pub globularity: Option<Rational>,
    /// `sup_v nu(Ball_d(v))`.
    pub residual: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexReport {
    pub size: usize,
    pub measure: Rational,
    pub boundary_measure: Rational,
    pub radii: Vec<RadiusStats>,
    pub profile: Profile,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Trend {
    pub non_increasing: bool,
    pub non_decreasing: bool,
}

impl Trend {
    fn of<'a>(values: impl Iterator<Item = &'a Rational> + Clone) -> Trend {
        let pairs: Vec<(&Rational, &Rational)> = values.clone().zip(values.skip(1)).collect();
        Trend {
            non_increasing: pairs.iter().all(|(a, b)| b <= a),
            non_decreasing: pairs.iter().all(|(a, b)| b >= a),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterReport {
    pub mark: usize,
    pub d_max: usize,
    pub indices: Vec<IndexReport>,
    /// Keyed by series name, e.g. `ball_d2`.
    pub trends: BTreeMap<String, Trend>,
}

fn measure(n: usize, k: usize) -> Rational {
    rational::ratio(k, n)
}

fn index_report(s: &Structure, mark: usize, d_max: usize, formulas: &[CompiledFormula]) -> Result<IndexReport> {
    let n = s.domain_size();
    if n == 0 {
        return Err(Error::EmptyDomain);
    }
    if mark == 0 || mark > s.signature().marks() {
        return Err(Error::InvalidParameter(format!(
            "mark M{mark} missing from signature {}",
            s.signature()
        )));
    }
    let x = s.mark_set(mark)?;
    let boundary = s.boundary(&x);
    let radii = (1..=d_max)
        .map(|d| {
            let balls: Vec<VertexSet> = (0..n).map(|v| s.ball(&VertexSet::from_iter(n, [v]), d)).collect();
            let globularity = (!x.is_empty()).then(|| {
                let best = balls.iter().map(|b| b.intersection(&x).len()).max().unwrap_or(0);
                rational::ratio(best, x.len())
            });
            RadiusStats {
                d,
                ball: measure(n, s.ball(&x, d).len()),
                boundary_ball: measure(n, s.ball(&boundary, d).len()),
                globularity,
                residual: measure(n, balls.iter().map(VertexSet::len).max().unwrap_or(0)),
            }
        })
        .collect();
    let pairings = if x.is_empty() {
        None
    } else {
        let sub = s.induced_on(&x);
        Some(
            formulas
                .iter()
                .map(|f| f.pairing(&sub, Arity::Auto))
                .collect::<Result<Vec<_>>>()?,
        )
    };
    Ok(IndexReport {
        size: n,
        measure: measure(n, x.len()),
        boundary_measure: measure(n, boundary.len()),
        radii,
        profile: Profile {
            measure: measure(n, x.len()),
            pairings,
        },
    })
}

/// Per-index measures of the set marked by `M{mark}` (1-based) and of its
/// neighborhoods for `d = 1..=d_max`, with profiles over `formulas`.
pub fn cluster_report(seq: &[Structure], mark: usize, d_max: usize, formulas: &[Formula]) -> Result<ClusterReport> {
    if seq.is_empty() {
        return Err(Error::InvalidParameter("cluster report needs a non-empty sequence".into()));
    }
    let mut indices = Vec::with_capacity(seq.len());
    for s in seq {
        let compiled = formulas
            .iter()
            .map(|f| CompiledFormula::new(s.signature(), f))
            .collect::<Result<Vec<_>>>()?;
        indices.push(index_report(s, mark, d_max, &compiled)?);
    }
    let mut trends = BTreeMap::new();
    trends.insert("measure".to_string(), Trend::of(indices.iter().map(|i| &i.measure)));
    trends.insert(
        "boundary_measure".to_string(),
        Trend::of(indices.iter().map(|i| &i.boundary_measure)),
    );
    for k in 0..d_max {
        let d = k + 1;
        trends.insert(format!("ball_d{d}"), Trend::of(indices.iter().map(|i| &i.radii[k].ball)));
        trends.insert(
            format!("boundary_ball_d{d}"),
            Trend::of(indices.iter().map(|i| &i.radii[k].boundary_ball)),
        );
        trends.insert(format!("residual_d{d}"), Trend::of(indices.iter().map(|i| &i.radii[k].residual)));
    }
    Ok(ClusterReport {
        mark,
        d_max,
        indices,
        trends,
    })
}

/// Index-wise profile equality of two reports over their common prefix.
pub fn profiles_match(a: &ClusterReport, b: &ClusterReport) -> Vec<bool> {
    a.indices
        .iter()
        .zip(&b.indices)
        .map(|(x, y)| x.profile == y.profile)
        .collect()
}

#[derive(Serialize)]
pub struct RadiusStatsJson {
    pub d: usize,
    pub ball: Exact,
    pub boundary_ball: Exact,
    pub globularity: Option<Exact>,
    pub residual: Exact,
}

#[derive(Serialize)]
pub struct ProfileJson {
    pub measure: Exact,
    pub pairings: Option<Vec<Exact>>,
}

#[derive(Serialize)]
pub struct IndexReportJson {
    pub index: usize,
    pub size: usize,
    pub measure: Exact,
    pub boundary_measure: Exact,
    pub radii: Vec<RadiusStatsJson>,
    pub profile: ProfileJson,
}

#[derive(Serialize)]
pub struct ClusterReportJson {
    pub mark: usize,
    pub d_max: usize,
    pub indices: Vec<IndexReportJson>,
    pub trends: BTreeMap<String, Trend>,
}

impl ClusterReport {
    pub fn to_json(&self) -> ClusterReportJson {
        ClusterReportJson {
            mark: self.mark,
            d_max: self.d_max,
            indices: self
                .indices
                .iter()
                .enumerate()
                .map(|(index, r)| IndexReportJson {
                    index,
                    size: r.size,
                    measure: (&r.measure).into(),
                    boundary_measure: (&r.boundary_measure).into(),
                    radii: r
                        .radii
                        .iter()
                        .map(|s| RadiusStatsJson {
                            d: s.d,
                            ball: (&s.ball).into(),
                            boundary_ball: (&s.boundary_ball).into(),
                            globularity: s.globularity.as_ref().map(Exact::from),
                            residual: (&s.residual).into(),
                        })
                        .collect(),
                    profile: ProfileJson {
                        measure: (&r.profile.measure).into(),
                        pairings: r.profile.pairings.as_ref().map(|v| v.iter().map(Exact::from).collect()),
                    },
                })
                .collect(),
            trends: self.trends.clone(),
        }
    }
}
