//! Exhaustive subset checks: `(d, eps, delta)`-expansion and `h_out`.

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::structure::{Structure, VertexSet};

/// Largest domain for exhaustive subset enumeration.
pub const DEFAULT_SUBSET_LIMIT: usize = 22;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpanderParams {
    pub d: usize,
    pub eps: Rational,
    pub delta: Rational,
}

impl ExpanderParams {
    pub fn new(d: usize, eps: Rational, delta: Rational) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("d must be positive".into()));
        }
        if eps <= rational::zero() || eps >= rational::ratio(1, 2) {
            return Err(Error::InvalidParameter("eps must lie in (0, 1/2)".into()));
        }
        if delta <= rational::zero() {
            return Err(Error::InvalidParameter("delta must be positive".into()));
        }
        Ok(ExpanderParams { d, eps, delta })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpanderVerdict {
    pub holds: bool,
    /// Least violating subset (by bit mask), when `holds` is false.
    pub witness: Option<VertexSet>,
    /// `inf |Ball_d(X) \ X| / |X|` over eligible `X`; `None` if there are none.
    pub inf_ratio: Option<Rational>,
}

fn small(value: &Rational) -> Result<(u128, u128)> {
    match (value.numer().to_u128(), value.denom().to_u128()) {
        (Some(p), Some(q)) if p < 1 << 60 && q < 1 << 60 => Ok((p, q)),
        _ => Err(Error::InvalidParameter(format!("{value} has too large a numerator or denominator"))),
    }
}

/// Closed radius-`d` neighborhoods as bit masks.
fn neighborhoods(s: &Structure, d: usize) -> Vec<u64> {
    let n = s.domain_size();
    (0..n)
        .map(|v| {
            s.ball(&VertexSet::from_iter(n, [v]), d)
                .iter()
                .fold(0u64, |m, u| m | 1 << u)
        })
        .collect()
}

fn ball_mask(nbhd: &[u64], mut x: u64) -> u64 {
    let mut out = 0;
    while x != 0 {
        out |= nbhd[x.trailing_zeros() as usize];
        x &= x - 1;
    }
    out
}

fn check_size(n: usize, limit: usize, hint: &str) -> Result<()> {
    if n > limit.min(63) {
        return Err(Error::BudgetExceeded(format!(
            "2^{n} subsets exceed the enumeration limit 2^{limit}{hint}"
        )));
    }
    Ok(())
}

/// Least element by cross-multiplied ratio, ties broken by mask.
fn better(a: (u64, u64, u64), b: (u64, u64, u64)) -> (u64, u64, u64) {
    let lhs = a.0 as u128 * b.1 as u128;
    let rhs = b.0 as u128 * a.1 as u128;
    if lhs < rhs || (lhs == rhs && a.2 < b.2) {
        a
    } else {
        b
    }
}

/// Checks `eps < nu(X) < 1 - eps  ==>  nu(Ball_d(X)) > (1 + delta) nu(X)`
/// for every subset `X`.
pub fn expanding_check(s: &Structure, params: &ExpanderParams) -> Result<ExpanderVerdict> {
    expanding_check_with_limit(s, params, DEFAULT_SUBSET_LIMIT)
}

pub fn expanding_check_with_limit(s: &Structure, params: &ExpanderParams, limit: usize) -> Result<ExpanderVerdict> {
    let n = s.domain_size();
    check_size(n, limit, "; use the h_out local search instead")?;
    let (ep, eq) = small(&params.eps)?;
    let (dp, dq) = small(&params.delta)?;
    let nbhd = neighborhoods(s, params.d);
    let n128 = n as u128;
    let eligible = |k: u128| k * eq > ep * n128 && k * eq < (eq - ep) * n128;
    let full = if n == 0 { 0 } else { (1u64 << n) - 1 };
    let violation = (1..=full)
        .into_par_iter()
        .filter(|&x| {
            let k = x.count_ones() as u128;
            if !eligible(k) {
                return false;
            }
            let ball = ball_mask(&nbhd, x).count_ones() as u128;
            ball * dq <= (dq + dp) * k
        })
        .min();
    let inf = (1..=full)
        .into_par_iter()
        .filter(|&x| eligible(x.count_ones() as u128))
        .map(|x| {
            let k = x.count_ones() as u64;
            let gain = (ball_mask(&nbhd, x) & !x).count_ones() as u64;
            (gain, k, x)
        })
        .reduce_with(better);
    Ok(ExpanderVerdict {
        holds: violation.is_none(),
        witness: violation.map(|x| VertexSet::from_mask(n, x)),
        inf_ratio: inf.map(|(g, k, _)| rational::ratio(g, k)),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HoutMode {
    Exact,
    /// Greedy flips from random singletons; `restarts` runs with `seed`.
    LocalSearch { restarts: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HoutResult {
    /// `None` when no `X` has `0 < |X| < |A|/2`.
    pub value: Option<Rational>,
    pub witness: Option<VertexSet>,
    /// Local search only gives an upper bound.
    pub heuristic: bool,
}

/// `inf |Ball_1(X) \ X| / |X|` over `0 < |X| < |A|/2`.
pub fn h_out(s: &Structure, mode: &HoutMode) -> Result<HoutResult> {
    match mode {
        HoutMode::Exact => h_out_exact(s, DEFAULT_SUBSET_LIMIT),
        HoutMode::LocalSearch { restarts, seed } => Ok(h_out_local_search(s, *restarts, *seed)),
    }
}

pub fn h_out_exact(s: &Structure, limit: usize) -> Result<HoutResult> {
    let n = s.domain_size();
    check_size(n, limit, "; use local search for an upper bound")?;
    let nbhd = neighborhoods(s, 1);
    let full = if n == 0 { 0 } else { (1u64 << n) - 1 };
    let best = (1..=full)
        .into_par_iter()
        .filter(|&x| 2 * (x.count_ones() as usize) < n)
        .map(|x| {
            let gain = (ball_mask(&nbhd, x) & !x).count_ones() as u64;
            (gain, x.count_ones() as u64, x)
        })
        .reduce_with(better);
    Ok(HoutResult {
        value: best.map(|(g, k, _)| rational::ratio(g, k)),
        witness: best.map(|(_, _, x)| VertexSet::from_mask(n, x)),
        heuristic: false,
    })
}

fn outer_boundary(s: &Structure, x: &VertexSet) -> usize {
    s.ball(x, 1).len() - x.len()
}

pub fn h_out_local_search(s: &Structure, restarts: usize, seed: u64) -> HoutResult {
    let n = s.domain_size();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(Rational, VertexSet)> = None;
    let ok = |k: usize| k > 0 && 2 * k < n;
    if !ok(1) {
        return HoutResult {
            value: None,
            witness: None,
            heuristic: true,
        };
    }
    for _ in 0..restarts.max(1) {
        let mut x = VertexSet::from_iter(n, [rng.gen_range(0..n)]);
        let mut score = rational::ratio(outer_boundary(s, &x), x.len());
        loop {
            let mut step: Option<(Rational, usize)> = None;
            for v in 0..n {
                let mut y = x.clone();
                if y.contains(v) {
                    y.remove(v);
                } else {
                    y.insert(v);
                }
                if !ok(y.len()) {
                    continue;
                }
                let r = rational::ratio(outer_boundary(s, &y), y.len());
                if r < score && step.as_ref().is_none_or(|(b, _)| r < *b) {
                    step = Some((r, v));
                }
            }
            let Some((r, v)) = step else { break };
            if x.contains(v) {
                x.remove(v);
            } else {
                x.insert(v);
            }
            score = r;
        }
        if best.as_ref().is_none_or(|(b, _)| score < *b) {
            best = Some((score, x));
        }
    }
    let (value, witness) = best.expect("at least one restart");
    HoutResult {
        value: Some(value),
        witness: Some(witness),
        heuristic: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn complete(n: usize) -> Structure {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        Structure::graph(n, &edges).unwrap()
    }

    fn path(n: usize) -> Structure {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Structure::graph(n, &edges).unwrap()
    }

    fn params() -> ExpanderParams {
        ExpanderParams::new(1, ratio(1, 4), ratio(3, 10)).unwrap()
    }

    #[test]
    fn expander_examples() {
        let k5 = expanding_check(&complete(5), &params()).unwrap();
        assert!(k5.holds && k5.witness.is_none());
        let p10 = path(10);
        let v = expanding_check(&p10, &params()).unwrap();
        assert!(!v.holds);
        let x = v.witness.unwrap();
        let nu = ratio(x.len(), 10);
        assert!(nu > ratio(1, 4) && nu < ratio(3, 4));
        assert!(ratio(p10.ball(&x, 1).len(), 10) <= ratio(13, 10) * nu);
        let single = expanding_check(&Structure::graph(1, &[]).unwrap(), &params()).unwrap();
        assert!(single.holds && single.inf_ratio.is_none());
        assert!(ExpanderParams::new(1, ratio(1, 2), ratio(1, 1)).is_err());
    }

    #[test]
    fn reformulation_agrees() {
        for s in [complete(5), path(10), path(7), complete(3).copies(2)] {
            let v = expanding_check(&s, &params()).unwrap();
            let by_ratio = v.inf_ratio.as_ref().is_none_or(|r| *r > params().delta);
            assert_eq!(v.holds, by_ratio);
        }
    }

    #[test]
    fn hout_examples() {
        assert_eq!(h_out(&complete(4), &HoutMode::Exact).unwrap().value, Some(ratio(3, 1)));
        assert_eq!(h_out(&path(10), &HoutMode::Exact).unwrap().value, Some(ratio(1, 4)));
        assert_eq!(h_out(&complete(3).copies(2), &HoutMode::Exact).unwrap().value, Some(ratio(1, 2)));
        assert_eq!(h_out(&complete(2), &HoutMode::Exact).unwrap().value, None);
        let big = path(30);
        assert!(matches!(h_out(&big, &HoutMode::Exact), Err(Error::BudgetExceeded(_))));
        let heuristic = h_out(&big, &HoutMode::LocalSearch { restarts: 5, seed: 1 }).unwrap();
        assert!(heuristic.heuristic && heuristic.value.unwrap() >= ratio(1, 14));
    }
}
