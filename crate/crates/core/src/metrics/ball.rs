use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::structure::{
    canonical_labeling, CanonicalForm, Structure, StructureJson, DEFAULT_CANON_LIMIT,
};

/// Isomorphism type of a rooted ball. The representative `ball` is in
/// canonical order with the root at element 0.
#[derive(Debug, Clone)]
pub struct BallType {
    r: usize,
    c: usize,
    form: CanonicalForm,
    ball: Arc<Structure>,
}

impl PartialEq for BallType {
    fn eq(&self, other: &Self) -> bool {
        (self.r, self.c, &self.form) == (other.r, other.c, &other.form)
    }
}

impl Eq for BallType {}

impl PartialOrd for BallType {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BallType {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.r, self.c, &self.form).cmp(&(other.r, other.c, &other.form))
    }
}

impl Hash for BallType {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (self.r, self.c, &self.form).hash(state);
    }
}

impl BallType {
    /// Types the rooted structure `(ball, root)`; the caller guarantees it
    /// is a radius-`r` ball over base symbols and `c` marks.
    pub fn of_rooted(ball: &Structure, root: usize, r: usize, limit: usize) -> Result<BallType> {
        let mut colors = vec![1; ball.domain_size()];
        colors[root] = 0;
        let labeling = canonical_labeling(ball, &colors, limit)?;
        Ok(BallType {
            r,
            c: ball.signature().marks(),
            form: labeling.form,
            ball: Arc::new(ball.induced(&labeling.order)),
        })
    }

    pub fn radius(&self) -> usize {
        self.r
    }

    pub fn marks(&self) -> usize {
        self.c
    }

    pub fn form(&self) -> &CanonicalForm {
        &self.form
    }

    /// Canonical representative, rooted at element 0.
    pub fn ball(&self) -> &Structure {
        &self.ball
    }
}

/// Rooted radius-`r` ball of `v` in `s` restricted to base symbols and the
/// first `c` marks, with the root at element 0 and the rest in BFS order.
pub fn rooted_ball(s: &Structure, v: usize, r: usize, c: usize) -> Structure {
    let order: Vec<usize> = s.ball_order(v, r).into_iter().map(|(u, _)| u).collect();
    let ball = s.induced(&order);
    if ball.signature().marks() == c {
        ball
    } else {
        ball.with_marks(c)
    }
}

/// Distribution of rooted ball types; weights are positive and sum to 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BallDistribution {
    r: usize,
    c: usize,
    weights: BTreeMap<BallType, Rational>,
}

impl BallDistribution {
    /// Builds from per-type counts over `n` roots.
    pub fn from_counts(r: usize, c: usize, counts: impl IntoIterator<Item = (BallType, usize)>, n: usize) -> Self {
        let mut weights = BTreeMap::new();
        for (t, k) in counts {
            *weights.entry(t).or_insert_with(rational::zero) += rational::ratio(k, n);
        }
        weights.retain(|_, w: &mut Rational| *w > rational::zero());
        BallDistribution { r, c, weights }
    }

    pub fn radius(&self) -> usize {
        self.r
    }

    pub fn marks(&self) -> usize {
        self.c
    }

    pub fn weights(&self) -> &BTreeMap<BallType, Rational> {
        &self.weights
    }

    pub fn weight(&self, t: &BallType) -> Rational {
        self.weights.get(t).cloned().unwrap_or_else(rational::zero)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn to_json(&self) -> BallDistributionJson {
        BallDistributionJson {
            r: self.r,
            c: self.c,
            types: self
                .weights
                .iter()
                .map(|(t, w)| {
                    let mut ball = StructureJson::from(t.ball());
                    ball.root = Some(0);
                    WeightedBall {
                        ball,
                        weight: w.clone(),
                    }
                })
                .collect(),
        }
    }

    pub fn from_json(json: &BallDistributionJson) -> Result<Self> {
        let mut weights = BTreeMap::new();
        for entry in &json.types {
            let ball = Structure::try_from(&entry.ball)?;
            let root = entry.ball.root.unwrap_or(0);
            if root >= ball.domain_size() || ball.ball_order(root, json.r).len() != ball.domain_size() {
                return Err(Error::InvalidStructure(format!(
                    "ball type is not a radius-{} ball around {root}",
                    json.r
                )));
            }
            if ball.signature().marks() != json.c {
                return Err(Error::ParameterMismatch(format!(
                    "ball with {} marks in a distribution with c = {}",
                    ball.signature().marks(),
                    json.c
                )));
            }
            let t = BallType::of_rooted(&ball, root, json.r, DEFAULT_CANON_LIMIT.max(ball.domain_size()))?;
            if entry.weight <= rational::zero() {
                return Err(Error::InvalidParameter("ball type weights must be positive".into()));
            }
            *weights.entry(t).or_insert_with(rational::zero) += entry.weight.clone();
        }
        if weights.values().sum::<Rational>() != rational::one() {
            return Err(Error::InvalidParameter("ball type weights must sum to 1".into()));
        }
        Ok(BallDistribution {
            r: json.r,
            c: json.c,
            weights,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightedBall {
    pub ball: StructureJson,
    #[serde(with = "rational::as_string")]
    pub weight: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallDistributionJson {
    pub r: usize,
    pub c: usize,
    pub types: Vec<WeightedBall>,
}

pub fn ball_distribution(s: &Structure, r: usize, c: usize) -> Result<BallDistribution> {
    ball_distribution_with_limit(s, r, c, DEFAULT_CANON_LIMIT)
}

pub fn ball_distribution_with_limit(s: &Structure, r: usize, c: usize, limit: usize) -> Result<BallDistribution> {
    let n = s.domain_size();
    if n == 0 {
        return Err(Error::EmptyDomain);
    }
    let types: Vec<BallType> = (0..n)
        .into_par_iter()
        .map(|v| BallType::of_rooted(&rooted_ball(s, v, r, c), 0, r, limit))
        .collect::<Result<_>>()?;
    let mut counts: BTreeMap<BallType, usize> = BTreeMap::new();
    for t in types {
        *counts.entry(t).or_default() += 1;
    }
    Ok(BallDistribution::from_counts(r, c, counts, n))
}

pub fn tv_distance(d1: &BallDistribution, d2: &BallDistribution) -> Result<Rational> {
    if (d1.r, d1.c) != (d2.r, d2.c) {
        return Err(Error::ParameterMismatch(format!(
            "distributions at (r, c) = ({}, {}) and ({}, {})",
            d1.r, d1.c, d2.r, d2.c
        )));
    }
    let mut total = rational::zero();
    for (t, w) in &d1.weights {
        total += (w - d2.weight(t)).abs();
    }
    for (t, w) in &d2.weights {
        if !d1.weights.contains_key(t) {
            total += w;
        }
    }
    Ok(total / rational::int(2))
}

/// Forgets marks `M_{c'+1}..M_c` and merges the types that become equal.
pub fn shadow_projection(d: &BallDistribution, c: usize) -> Result<BallDistribution> {
    if c > d.c {
        return Err(Error::InvalidParameter(format!(
            "cannot project {} marks up to {c}",
            d.c
        )));
    }
    if c == d.c {
        return Ok(d.clone());
    }
    let mut weights = BTreeMap::new();
    for (t, w) in &d.weights {
        let ball = t.ball().with_marks(c);
        let limit = ball.domain_size().max(DEFAULT_CANON_LIMIT);
        let projected = BallType::of_rooted(&ball, 0, d.r, limit)?;
        *weights.entry(projected).or_insert_with(rational::zero) += w.clone();
    }
    Ok(BallDistribution { r: d.r, c, weights })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::structure::VertexSet;

    fn cycle(n: usize) -> Structure {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Structure::graph(n, &edges).unwrap()
    }

    fn path(n: usize) -> Structure {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Structure::graph(n, &edges).unwrap()
    }

    #[test]
    fn distribution_examples() {
        let c8 = ball_distribution(&cycle(8), 1, 0).unwrap();
        assert_eq!(c8.len(), 1);
        let t = c8.weights().keys().next().unwrap();
        assert_eq!(t.ball().domain_size(), 3);
        assert_eq!(t.ball().degree(0), 2);
        let c3 = ball_distribution(&cycle(3), 1, 0).unwrap();
        assert_eq!(c3.len(), 1);
        let p4 = ball_distribution(&path(4), 1, 0).unwrap();
        assert_eq!(p4.weights().values().cloned().collect::<Vec<_>>(), vec![ratio(1, 2), ratio(1, 2)]);
    }

    #[test]
    fn tv_examples() {
        let d = |s: &Structure| ball_distribution(s, 1, 0).unwrap();
        assert_eq!(tv_distance(&d(&cycle(5)), &d(&cycle(5))).unwrap(), ratio(0, 1));
        assert_eq!(tv_distance(&d(&cycle(3)), &d(&cycle(4))).unwrap(), ratio(1, 1));
        assert_eq!(tv_distance(&d(&path(4)), &d(&cycle(4))).unwrap(), ratio(1, 2));
        let other = ball_distribution(&cycle(4), 2, 0).unwrap();
        assert!(tv_distance(&d(&cycle(4)), &other).is_err());
    }

    #[test]
    fn projection_merges_types() {
        let marked = cycle(4).with_mark_sets(&[VertexSet::from_iter(4, [0, 2])]);
        let d = ball_distribution(&marked, 1, 1).unwrap();
        assert_eq!(d.len(), 2);
        let shadow = shadow_projection(&d, 0).unwrap();
        assert_eq!(shadow, ball_distribution(&cycle(4), 1, 0).unwrap());
        assert_eq!(shadow_projection(&d, 1).unwrap(), d);
    }

    #[test]
    fn json_round_trip() {
        let d = ball_distribution(&path(5), 2, 0).unwrap();
        let text = serde_json::to_string(&d.to_json()).unwrap();
        let back: BallDistributionJson = serde_json::from_str(&text).unwrap();
        assert_eq!(BallDistribution::from_json(&back).unwrap(), d);
        assert!(text.contains("\"root\":0"));
    }
}
