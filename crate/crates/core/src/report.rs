//! Pairwise distance tables over a list of structures, with tail-window
//! summaries that show whether the sequence looks Cauchy.

use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lifts::{lift_hausdorff, LiftParams};
use crate::metrics::{dist_bounds, ChainCovering, DistanceBounds};
use crate::rational::{Exact, Rational};
use crate::structure::Structure;

#[derive(Debug, Clone)]
pub struct ConvergeParams {
    pub n_max: usize,
    pub chain: ChainCovering,
    /// One lift-Hausdorff matrix per entry; `r` and `c` come from the entry.
    pub lift_levels: Vec<LiftParams>,
}

#[derive(Debug, Clone)]
pub struct LiftMatrix {
    pub r: usize,
    pub c: usize,
    pub heuristic: bool,
    pub values: Vec<Vec<Rational>>,
}

#[derive(Debug, Clone)]
pub struct ConvergeReport {
    pub names: Vec<String>,
    pub dist: Vec<Vec<DistanceBounds>>,
    pub lifts: Vec<LiftMatrix>,
}

/// Loads every `*.json` structure in `dir`, ordered by file name.
pub fn load_dir(dir: impl AsRef<Path>) -> Result<Vec<(String, Structure)>> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    paths.retain(|p| p.extension().is_some_and(|e| e == "json"));
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let name = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            Ok((name, Structure::load(&p)?))
        })
        .collect()
}

pub fn converge_report(structures: &[(String, Structure)], params: &ConvergeParams) -> Result<ConvergeReport> {
    if structures.len() < 2 {
        return Err(Error::InvalidParameter("a convergence report needs at least two structures".into()));
    }
    let k = structures.len();
    let mut dist: Vec<Vec<DistanceBounds>> = vec![Vec::with_capacity(k); k];
    for i in 0..k {
        for j in 0..k {
            let bounds = if j < i {
                dist[j][i].clone()
            } else {
                dist_bounds(&structures[i].1, &structures[j].1, &params.chain, params.n_max)?
            };
            dist[i].push(bounds);
        }
    }
    let mut lifts = Vec::new();
    for level in &params.lift_levels {
        let mut values: Vec<Vec<Rational>> = vec![Vec::with_capacity(k); k];
        let mut heuristic = false;
        for i in 0..k {
            for j in 0..k {
                let v = if j < i {
                    values[j][i].clone()
                } else {
                    let d = lift_hausdorff(&structures[i].1, &structures[j].1, level)?;
                    heuristic |= d.heuristic;
                    d.value
                };
                values[i].push(v);
            }
        }
        lifts.push(LiftMatrix {
            r: level.r,
            c: level.c,
            heuristic,
            values,
        });
    }
    Ok(ConvergeReport {
        names: structures.iter().map(|(n, _)| n.clone()).collect(),
        dist,
        lifts,
    })
}

/// `max_{i <= a < b} m[a][b]` for every start `i`.
fn tails(m: &[Vec<Rational>]) -> Vec<Rational> {
    let k = m.len();
    (0..k)
        .map(|i| {
            (i..k)
                .flat_map(|a| (a..k).map(move |b| (a, b)))
                .map(|(a, b)| m[a][b].clone())
                .max()
                .unwrap_or_default()
        })
        .collect()
}

#[derive(Serialize)]
pub struct BoundsCell {
    pub lower: Exact,
    pub upper: Exact,
    pub exact: bool,
}

#[derive(Serialize)]
pub struct LiftMatrixJson {
    pub r: usize,
    pub c: usize,
    pub heuristic: bool,
    pub values: Vec<Vec<Exact>>,
    /// Max pairwise value among structures from each index on.
    pub tail_max: Vec<Exact>,
    pub tail_non_increasing: bool,
}

#[derive(Serialize)]
pub struct ConvergeReportJson {
    pub structures: Vec<String>,
    pub dist: Vec<Vec<BoundsCell>>,
    /// Tail maxima of the upper bounds.
    pub dist_tail_max: Vec<Exact>,
    pub dist_tail_non_increasing: bool,
    pub lift_hausdorff: Vec<LiftMatrixJson>,
}

fn non_increasing(v: &[Rational]) -> bool {
    v.windows(2).all(|w| w[1] <= w[0])
}

impl ConvergeReport {
    pub fn to_json(&self) -> ConvergeReportJson {
        let uppers: Vec<Vec<Rational>> = self
            .dist
            .iter()
            .map(|row| row.iter().map(|b| b.upper.clone()).collect())
            .collect();
        let dist_tail = tails(&uppers);
        ConvergeReportJson {
            structures: self.names.clone(),
            dist: self
                .dist
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|b| BoundsCell {
                            lower: (&b.lower).into(),
                            upper: (&b.upper).into(),
                            exact: b.exact,
                        })
                        .collect()
                })
                .collect(),
            dist_tail_non_increasing: non_increasing(&dist_tail),
            dist_tail_max: dist_tail.iter().map(Exact::from).collect(),
            lift_hausdorff: self
                .lifts
                .iter()
                .map(|m| {
                    let tail = tails(&m.values);
                    LiftMatrixJson {
                        r: m.r,
                        c: m.c,
                        heuristic: m.heuristic,
                        values: m.values.iter().map(|row| row.iter().map(Exact::from).collect()).collect(),
                        tail_non_increasing: non_increasing(&tail),
                        tail_max: tail.iter().map(Exact::from).collect(),
                    }
                })
                .collect(),
        }
    }
}
