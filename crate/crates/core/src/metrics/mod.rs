//! Ball-type statistics, total variation, and the truncated chain-covering
//! pseudometric with certified bounds.

mod ball;

use num_traits::Signed;
use serde::Serialize;

use crate::analysis::fo1local_equiv;
use crate::error::{Error, Result};
use crate::eval::{Arity, CompiledFormula};
use crate::logic::{normalize, Formula};
use crate::rational::{self, Exact, Rational};
use crate::structure::{Structure, DEFAULT_CANON_LIMIT};

pub use ball::{
    ball_distribution, ball_distribution_with_limit, rooted_ball, shadow_projection, tv_distance,
    BallDistribution, BallDistributionJson, BallType, WeightedBall,
};

/// `max_{phi in level} |<phi,A> - <phi,B>|`, 0 for an empty level.
pub fn formula_stat_max(a: &Structure, b: &Structure, level: &[Formula]) -> Result<Rational> {
    let mut best = rational::zero();
    for f in level {
        let fa = CompiledFormula::new(a.signature(), f)?.pairing(a, Arity::Auto)?;
        let fb = CompiledFormula::new(b.signature(), f)?.pairing(b, Arity::Auto)?;
        best = best.max((fa - fb).abs());
    }
    Ok(best)
}

/// Increasing sequence of statistic levels `X_1, X_2, ...`.
#[derive(Debug, Clone)]
pub enum ChainCovering {
    /// `X_n` is the set of radius-`n` ball formulas over the first `n`
    /// marks, measured through ball-type total variation.
    BallChain { canon_limit: usize },
    /// Finite formula lists; the last level repeats forever.
    ExplicitChain(Vec<Vec<Formula>>),
}

impl Default for ChainCovering {
    fn default() -> Self {
        ChainCovering::BallChain {
            canon_limit: DEFAULT_CANON_LIMIT,
        }
    }
}

impl ChainCovering {
    /// Checks that every level contains the previous one (up to
    /// normalization).
    pub fn explicit(levels: Vec<Vec<Formula>>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidParameter("a chain needs at least one level".into()));
        }
        for (i, pair) in levels.windows(2).enumerate() {
            let next: Vec<Formula> = pair[1].iter().map(normalize).collect();
            if let Some(missing) = pair[0].iter().find(|f| !next.contains(&normalize(f))) {
                return Err(Error::InvalidParameter(format!(
                    "chain level {} lacks `{missing}` from level {}",
                    i + 2,
                    i + 1
                )));
            }
        }
        Ok(ChainCovering::ExplicitChain(levels))
    }

    /// `D_n`, or `None` when level `n` is out of reach for this chain.
    fn level(&self, a: &Structure, b: &Structure, n: usize) -> Result<Option<Rational>> {
        match self {
            ChainCovering::BallChain { canon_limit } => {
                let c = n.min(a.signature().marks());
                let da = ball_distribution_with_limit(a, n, c, *canon_limit);
                let db = ball_distribution_with_limit(b, n, c, *canon_limit);
                match (da, db) {
                    (Ok(da), Ok(db)) => tv_distance(&da, &db).map(Some),
                    (Err(e), _) | (_, Err(e)) if e.is_limit() && n > 1 => Ok(None),
                    (Err(e), _) | (_, Err(e)) => Err(e),
                }
            }
            ChainCovering::ExplicitChain(levels) => {
                let level = &levels[(n - 1).min(levels.len() - 1)];
                formula_stat_max(a, b, level).map(Some)
            }
        }
    }
}

/// Bounds on `inf_n max(1/n, D_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceBounds {
    pub lower: Rational,
    pub upper: Rational,
    pub exact: bool,
    /// First `n` with `D_n >= 1/n`.
    pub crossing_level: Option<usize>,
    /// `D_1, D_2, ...` as computed.
    pub levels: Vec<Rational>,
    /// Set when the ball chain stopped early at the canonicalization limit.
    pub truncated: bool,
}

#[derive(Serialize)]
pub struct DistanceBoundsJson {
    pub lower: Exact,
    pub upper: Exact,
    pub exact: bool,
    pub crossing_level: Option<usize>,
    pub levels: Vec<Exact>,
    pub truncated: bool,
}

impl DistanceBounds {
    pub fn value(&self) -> Option<&Rational> {
        self.exact.then_some(&self.lower)
    }

    pub fn to_json(&self) -> DistanceBoundsJson {
        DistanceBoundsJson {
            lower: (&self.lower).into(),
            upper: (&self.upper).into(),
            exact: self.exact,
            crossing_level: self.crossing_level,
            levels: self.levels.iter().map(Exact::from).collect(),
            truncated: self.truncated,
        }
    }
}

/// The component certificate, treating oversized components as "no
/// certificate" rather than an error.
fn certified_equal(a: &Structure, b: &Structure) -> Result<bool> {
    if a == b {
        return Ok(true);
    }
    match fo1local_equiv(a, b) {
        Ok(v) => Ok(v.is_equivalent()),
        Err(e) if e.is_limit() => Ok(false),
        Err(e) => Err(e),
    }
}

pub fn dist_bounds(a: &Structure, b: &Structure, chain: &ChainCovering, n_max: usize) -> Result<DistanceBounds> {
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    if a.signature() != b.signature() {
        return Err(Error::SignatureMismatch(format!("{} vs {}", a.signature(), b.signature())));
    }
    let mut levels: Vec<Rational> = Vec::new();
    let mut best: Option<Rational> = None;
    let mut truncated = false;
    for n in 1..=n_max {
        let Some(d) = chain.level(a, b, n)? else {
            truncated = true;
            break;
        };
        if levels.last().is_some_and(|prev| &d < prev) {
            return Err(Error::DistanceDecreased(n - 1));
        }
        let inv = rational::ratio(1, n);
        let candidate = d.clone().max(inv.clone());
        best = Some(best.map_or(candidate.clone(), |b| b.min(candidate)));
        levels.push(d.clone());
        if d >= inv {
            let value = best.expect("set above");
            return Ok(DistanceBounds {
                lower: value.clone(),
                upper: value,
                exact: true,
                crossing_level: Some(n),
                levels,
                truncated,
            });
        }
    }
    let last = levels.len();
    let d_last = levels.last().cloned().expect("level 1 is always computed");
    let upper = rational::ratio(1, last);
    let exact_value = match chain {
        // The last level repeats, so the tail infimum is D_last itself.
        ChainCovering::ExplicitChain(levels_list) if last >= levels_list.len() => Some(d_last.clone()),
        ChainCovering::BallChain { .. } if d_last == rational::zero() && certified_equal(a, b)? => Some(rational::zero()),
        _ => None,
    };
    Ok(match exact_value {
        Some(v) => DistanceBounds {
            lower: v.clone(),
            upper: v,
            exact: true,
            crossing_level: None,
            levels,
            truncated,
        },
        None => DistanceBounds {
            lower: d_last,
            upper,
            exact: false,
            crossing_level: None,
            levels,
            truncated,
        },
    })
}
