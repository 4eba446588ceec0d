//! Ball-type statistics of many lifts of one base structure.
//!
//! Every root's radius-`r` ball is a fixed set of base elements, so the
//! type of a root in a lift only depends on the mark patterns of those
//! elements. Roots with identical relabeled balls share a template, and each
//! template maps a packed pattern word to an interned type id.

use std::collections::HashMap;
use std::sync::{Mutex, RwLock};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metrics::{BallDistribution, BallType};
use crate::structure::{CanonicalForm, Structure, VertexSet};

/// Dense pattern tables are built eagerly up to this many entries.
const DENSE_LIMIT: u64 = 4096;

enum Table {
    Dense(Vec<u32>),
    Lazy(RwLock<HashMap<u64, u32>>),
}

struct Template {
    ball: Structure,
    table: Table,
}

#[derive(Default)]
struct Interner {
    ids: HashMap<CanonicalForm, u32>,
    types: Vec<BallType>,
}

pub(crate) struct Engine {
    n: usize,
    c: usize,
    r: usize,
    limit: usize,
    /// Per root: template index and ball members in BFS order.
    roots: Vec<(usize, Vec<usize>)>,
    templates: Vec<Template>,
    interner: Mutex<Interner>,
}

/// Ball size and relation tuples in BFS labels.
type BallShape = (usize, Vec<Vec<Vec<usize>>>);

impl Engine {
    pub(crate) fn new(base: &Structure, r: usize, c: usize, limit: usize) -> Result<Engine> {
        let n = base.domain_size();
        let mut templates: Vec<Template> = Vec::new();
        let mut by_ball: HashMap<BallShape, usize> = HashMap::new();
        let mut roots = Vec::with_capacity(n);
        for v in 0..n {
            let order: Vec<usize> = base.ball_order(v, r).into_iter().map(|(u, _)| u).collect();
            if order.len() > limit {
                return Err(Error::CanonLimit {
                    size: order.len(),
                    limit,
                });
            }
            if c * order.len() > 64 {
                return Err(Error::BudgetExceeded(format!(
                    "ball of {} elements with {c} marks does not fit a 64-bit pattern",
                    order.len()
                )));
            }
            let ball = base.induced(&order);
            let key = (
                order.len(),
                ball.relations().iter().map(|rel| rel.tuples().to_vec()).collect(),
            );
            let index = *by_ball.entry(key).or_insert_with(|| {
                templates.push(Template {
                    ball,
                    table: Table::Lazy(RwLock::new(HashMap::new())),
                });
                templates.len() - 1
            });
            roots.push((index, order));
        }
        let mut engine = Engine {
            n,
            c,
            r,
            limit,
            roots,
            templates,
            interner: Mutex::new(Interner::default()),
        };
        let dense: Vec<Option<Vec<u32>>> = (0..engine.templates.len())
            .map(|t| {
                let m = engine.templates[t].ball.domain_size();
                let size = 1u64.checked_shl((c * m) as u32).unwrap_or(u64::MAX);
                if size > DENSE_LIMIT {
                    return Ok(None);
                }
                (0..size)
                    .into_par_iter()
                    .map(|w| engine.classify(t, w))
                    .collect::<Result<Vec<u32>>>()
                    .map(Some)
            })
            .collect::<Result<_>>()?;
        for (t, table) in dense.into_iter().enumerate() {
            if let Some(table) = table {
                engine.templates[t].table = Table::Dense(table);
            }
        }
        Ok(engine)
    }

    pub(crate) fn domain(&self) -> usize {
        self.n
    }

    /// Types template `t` under pattern word `w` (element `i` of the ball
    /// carries bits `c*i..c*i+c`).
    fn classify(&self, t: usize, w: u64) -> Result<u32> {
        let ball = &self.templates[t].ball;
        let m = ball.domain_size();
        let marks: Vec<VertexSet> = (0..self.c)
            .map(|k| VertexSet::from_iter(m, (0..m).filter(|&i| w >> (self.c * i + k) & 1 == 1)))
            .collect();
        let marked = ball.with_mark_sets(&marks);
        let ty = BallType::of_rooted(&marked, 0, self.r, self.limit)?;
        let mut interner = self.interner.lock().expect("interner lock");
        let next = interner.types.len() as u32;
        let id = *interner.ids.entry(ty.form().clone()).or_insert(next);
        if id == next {
            interner.types.push(ty);
        }
        Ok(id)
    }

    fn lookup(&self, t: usize, w: u64) -> Result<u32> {
        match &self.templates[t].table {
            Table::Dense(table) => Ok(table[w as usize]),
            Table::Lazy(cache) => {
                if let Some(&id) = cache.read().expect("cache lock").get(&w) {
                    return Ok(id);
                }
                let id = self.classify(t, w)?;
                cache.write().expect("cache lock").insert(w, id);
                Ok(id)
            }
        }
    }

    /// Sorted type ids of all roots, given each element's mark pattern.
    pub(crate) fn stat(&self, pattern: impl Fn(usize) -> u64) -> Result<Vec<u32>> {
        let mut ids = Vec::with_capacity(self.n);
        for (t, order) in &self.roots {
            let w = order
                .iter()
                .enumerate()
                .fold(0u64, |w, (i, &u)| w | pattern(u) << (self.c * i));
            ids.push(self.lookup(*t, w)?);
        }
        ids.sort_unstable();
        Ok(ids)
    }

    pub(crate) fn distribution(&self, stat: &[u32]) -> BallDistribution {
        let interner = self.interner.lock().expect("interner lock");
        let mut counts: Vec<(BallType, usize)> = Vec::new();
        for &id in stat {
            match counts.last_mut() {
                Some((t, k)) if t == &interner.types[id as usize] => *k += 1,
                _ => counts.push((interner.types[id as usize].clone(), 1)),
            }
        }
        BallDistribution::from_counts(self.r, self.c, counts, self.n)
    }
}
