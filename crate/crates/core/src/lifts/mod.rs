//! Monadic lifts: every way of adding `c` unary marks to a base structure,
//! their ball-type statistics, and the Hausdorff distance between the
//! resulting sets of statistics.

mod engine;

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metrics::{tv_distance, BallDistribution};
use crate::rational::{self, Rational};
use crate::structure::{Structure, VertexSet, DEFAULT_CANON_LIMIT};
use engine::Engine;

/// Default cap on the number of lifts enumerated in exact mode.
pub const DEFAULT_LIFT_BUDGET: u64 = 1 << 24;

/// One mark assignment. Element `v` carries the pattern stored at bits
/// `c*(n-1-v)..c*(n-v)` of `word`, bit `k` of a pattern meaning
/// membership in `M{k+1}`; increasing words are lexicographic in the
/// sequence of patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lift {
    pub word: u64,
    pub n: usize,
    pub c: usize,
}

impl Lift {
    pub fn pattern(&self, v: usize) -> u64 {
        (self.word >> (self.c * (self.n - 1 - v))) & ((1u64 << self.c) - 1)
    }

    pub fn mark_sets(&self) -> Vec<VertexSet> {
        (0..self.c)
            .map(|k| VertexSet::from_iter(self.n, (0..self.n).filter(|&v| self.pattern(v) >> k & 1 == 1)))
            .collect()
    }

    /// The marked structure over `base`.
    pub fn apply(&self, base: &Structure) -> Structure {
        base.with_mark_sets(&self.mark_sets())
    }
}

fn check_base(s: &Structure) -> Result<()> {
    if s.signature().marks() > 0 {
        return Err(Error::InvalidParameter(format!(
            "lifts are taken over unmarked structures; signature {} already has marks",
            s.signature()
        )));
    }
    if s.domain_size() == 0 {
        return Err(Error::EmptyDomain);
    }
    Ok(())
}

/// Number of lifts, if it fits the budget.
fn lift_count(n: usize, c: usize, budget: u64) -> Result<u64> {
    let bits = n * c;
    if bits > 63 || (1u64 << bits) > budget {
        return Err(Error::BudgetExceeded(format!(
            "{n} elements with {c} marks give 2^{bits} lifts, budget is {budget}"
        )));
    }
    Ok(1u64 << bits)
}

/// All `(2^c)^n` lifts in lexicographic order.
pub fn enumerate_lifts(s: &Structure, c: usize, budget: u64) -> Result<impl Iterator<Item = Lift>> {
    check_base(s)?;
    let n = s.domain_size();
    let total = lift_count(n, c, budget)?;
    Ok((0..total).map(move |word| Lift { word, n, c }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftMode {
    Exact,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftParams {
    pub r: usize,
    pub c: usize,
    pub mode: LiftMode,
    /// Exact mode: maximum number of lifts. Sampled mode: number of draws.
    pub budget: u64,
    pub seed: u64,
    pub canon_limit: usize,
}

impl LiftParams {
    pub fn exact(r: usize, c: usize) -> Self {
        LiftParams {
            r,
            c,
            mode: LiftMode::Exact,
            budget: DEFAULT_LIFT_BUDGET,
            seed: 0,
            canon_limit: DEFAULT_CANON_LIMIT,
        }
    }

    pub fn sampled(r: usize, c: usize, draws: u64, seed: u64) -> Self {
        LiftParams {
            mode: LiftMode::Sampled,
            budget: draws,
            seed,
            ..LiftParams::exact(r, c)
        }
    }
}

/// Distinct ball-type distributions over lifts of one structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftStatSet {
    pub r: usize,
    pub c: usize,
    pub stats: BTreeSet<BallDistribution>,
    /// Lifts examined, before deduplication.
    pub lifts: u64,
    /// Sampled sets only witness part of the lift space.
    pub heuristic: bool,
}

impl LiftStatSet {
    pub fn len(&self) -> usize {
        self.stats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stats.is_empty()
    }
}

pub fn lift_stat_set(s: &Structure, params: &LiftParams) -> Result<LiftStatSet> {
    check_base(s)?;
    let (r, c) = (params.r, params.c);
    let engine = Engine::new(s, r, c, params.canon_limit)?;
    let n = engine.domain();
    let mask = (1u64 << c) - 1;
    let (stats, lifts): (HashSet<Vec<u32>>, u64) = match params.mode {
        LiftMode::Exact => {
            let total = lift_count(n, c, params.budget)?;
            let chunk = (total / (rayon::current_num_threads() as u64 * 8)).max(1024);
            let chunks = total.div_ceil(chunk);
            let sets = (0..chunks)
                .into_par_iter()
                .map(|i| {
                    let mut seen = HashSet::new();
                    for word in i * chunk..((i + 1) * chunk).min(total) {
                        seen.insert(engine.stat(|v| (word >> (c * (n - 1 - v))) & mask)?);
                    }
                    Ok(seen)
                })
                .collect::<Result<Vec<_>>>()?;
            let mut all = HashSet::new();
            for set in sets {
                all.extend(set);
            }
            (all, total)
        }
        LiftMode::Sampled => {
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
            let mut draws: Vec<Vec<u64>> = (0..=mask).map(|p| vec![p; n]).collect();
            for _ in 0..params.budget {
                draws.push((0..n).map(|_| rng.gen::<u64>() & mask).collect());
            }
            let stats = draws
                .par_iter()
                .map(|patterns| engine.stat(|v| patterns[v]))
                .collect::<Result<HashSet<_>>>()?;
            (stats, draws.len() as u64)
        }
    };
    Ok(LiftStatSet {
        r,
        c,
        stats: stats.iter().map(|stat| engine.distribution(stat)).collect(),
        lifts,
        heuristic: params.mode == LiftMode::Sampled,
    })
}

/// Both sets as integer vectors over a common denominator `denom`: the tv
/// distance between `x` and `y` is `sum |x_i - y_i| / (2 denom)`.
struct Dense {
    denom: BigInt,
    left: Vec<Vec<u64>>,
    right: Vec<Vec<u64>>,
}

fn densify(a: &BTreeSet<BallDistribution>, b: &BTreeSet<BallDistribution>) -> Option<Dense> {
    let types: BTreeSet<_> = a.iter().chain(b).flat_map(|d| d.weights().keys()).collect();
    let index: std::collections::BTreeMap<_, usize> = types.into_iter().enumerate().map(|(i, t)| (t, i)).collect();
    let denom = a
        .iter()
        .chain(b)
        .flat_map(|d| d.weights().values())
        .fold(BigInt::from(1), |l, w| l.lcm(w.denom()));
    // Keeps every l1 sum inside u64.
    denom.to_u64().filter(|&l| l < 1 << 40)?;
    let vectors = |set: &BTreeSet<BallDistribution>| -> Vec<Vec<u64>> {
        set.iter()
            .map(|d| {
                let mut v = vec![0u64; index.len()];
                for (t, w) in d.weights() {
                    let scaled = (w.numer() * (&denom / w.denom())).to_u64().expect("bounded by denominator");
                    v[index[t]] = scaled;
                }
                v
            })
            .collect()
    };
    Some(Dense {
        left: vectors(a),
        right: vectors(b),
        denom,
    })
}

fn l1(x: &[u64], y: &[u64]) -> u64 {
    x.iter().zip(y).map(|(a, b)| a.abs_diff(*b)).sum()
}

/// `max_{x in from} min_{y in to} l1(x, y)`.
fn directed(from: &[Vec<u64>], to: &[Vec<u64>]) -> u64 {
    from.par_iter()
        .map(|x| {
            let mut best = u64::MAX;
            for y in to {
                best = best.min(l1(x, y));
                if best == 0 {
                    break;
                }
            }
            best
        })
        .max()
        .unwrap_or(0)
}

fn check_levels(m1: &LiftStatSet, m2: &LiftStatSet) -> Result<()> {
    if (m1.r, m1.c) != (m2.r, m2.c) {
        return Err(Error::ParameterMismatch(format!(
            "stat sets at (r, c) = ({}, {}) and ({}, {})",
            m1.r, m1.c, m2.r, m2.c
        )));
    }
    if m1.is_empty() || m2.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(())
}

/// Hausdorff distance between two stat sets under total variation.
pub fn hausdorff_distance(m1: &LiftStatSet, m2: &LiftStatSet) -> Result<Rational> {
    check_levels(m1, m2)?;
    if let Some(dense) = densify(&m1.stats, &m2.stats) {
        let num = directed(&dense.left, &dense.right).max(directed(&dense.right, &dense.left));
        return Ok(Rational::new(BigInt::from(num), dense.denom * 2));
    }
    let one_way = |from: &BTreeSet<BallDistribution>, to: &BTreeSet<BallDistribution>| -> Result<Rational> {
        let mut worst = rational::zero();
        for x in from {
            let mut best: Option<Rational> = None;
            for y in to {
                let d = tv_distance(x, y)?;
                if best.as_ref().is_none_or(|b| d < *b) {
                    best = Some(d);
                }
            }
            worst = worst.max(best.expect("non-empty"));
        }
        Ok(worst)
    };
    Ok(one_way(&m1.stats, &m2.stats)?.max(one_way(&m2.stats, &m1.stats)?))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftDistance {
    pub value: Rational,
    pub heuristic: bool,
    pub left_stats: usize,
    pub right_stats: usize,
}

pub fn lift_hausdorff(a: &Structure, b: &Structure, params: &LiftParams) -> Result<LiftDistance> {
    if a.signature() != b.signature() {
        return Err(Error::SignatureMismatch(format!("{} vs {}", a.signature(), b.signature())));
    }
    let ma = lift_stat_set(a, params)?;
    let mb = lift_stat_set(b, params)?;
    Ok(LiftDistance {
        value: hausdorff_distance(&ma, &mb)?,
        heuristic: ma.heuristic || mb.heuristic,
        left_stats: ma.len(),
        right_stats: mb.len(),
    })
}

/// Greedy farthest-point net: every member of the stat set is within `eps`
/// of some returned distribution.
pub fn epsilon_net(s: &Structure, params: &LiftParams, eps: &Rational) -> Result<(Vec<BallDistribution>, bool)> {
    let set = lift_stat_set(s, params)?;
    Ok((net_of(&set.stats, eps), set.heuristic))
}

pub fn net_of(stats: &BTreeSet<BallDistribution>, eps: &Rational) -> Vec<BallDistribution> {
    let points: Vec<&BallDistribution> = stats.iter().collect();
    if points.is_empty() {
        return Vec::new();
    }
    let dense = densify(stats, &BTreeSet::new());
    let dist = |i: usize, j: usize| -> Rational {
        match &dense {
            Some(d) => Rational::new(BigInt::from(l1(&d.left[i], &d.left[j])), &d.denom * 2),
            None => tv_distance(points[i], points[j]).expect("one level"),
        }
    };
    let mut net = vec![0];
    let mut gap: Vec<Rational> = (0..points.len()).map(|i| dist(0, i)).collect();
    loop {
        let (far, d) = gap
            .iter()
            .enumerate()
            .fold((0, rational::zero()), |(bi, bd), (i, d)| if *d > bd { (i, d.clone()) } else { (bi, bd) });
        if d <= *eps || d.is_negative() {
            break;
        }
        net.push(far);
        for (i, g) in gap.iter_mut().enumerate() {
            let di = dist(far, i);
            if di < *g {
                *g = di;
            }
        }
    }
    net.into_iter().map(|i| points[i].clone()).collect()
}
