use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::structure::{Structure, VertexSet};

pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

struct Mis<'a> {
    adj: &'a [VertexSet],
    best: usize,
    nodes: u64,
    budget: u64,
}

impl Mis<'_> {
    /// Greedy clique cover size of `cand`: an upper bound on its
    /// independence number.
    fn cover_bound(&self, cand: &VertexSet) -> usize {
        let mut cliques: Vec<VertexSet> = Vec::new();
        'next: for v in cand.iter() {
            for clique in cliques.iter_mut() {
                if clique.is_subset(&self.adj[v]) {
                    clique.insert(v);
                    continue 'next;
                }
            }
            cliques.push(VertexSet::from_iter(cand.universe(), [v]));
        }
        cliques.len()
    }

    fn expand(&mut self, size: usize, mut cand: VertexSet) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded(format!(
                "independence search exceeded {} nodes",
                self.budget
            )));
        }
        if cand.is_empty() {
            self.best = self.best.max(size);
            return Ok(());
        }
        if size + self.cover_bound(&cand) <= self.best {
            return Ok(());
        }
        // Branch on a vertex of least degree within the candidates: taking
        // it, then discarding it.
        let v = cand
            .iter()
            .min_by_key(|&v| (self.adj[v].intersection(&cand).len(), v))
            .expect("non-empty");
        let mut taken = cand.difference(&self.adj[v]);
        taken.remove(v);
        self.expand(size + 1, taken)?;
        cand.remove(v);
        if self.adj[v].intersection(&cand).is_empty() {
            return Ok(());
        }
        self.expand(size, cand)
    }
}

/// Independence number of the Gaifman graph (loops ignored).
pub fn independence_number(s: &Structure, budget: u64) -> Result<usize> {
    let n = s.domain_size();
    let adj: Vec<VertexSet> = (0..n)
        .map(|v| VertexSet::from_iter(n, s.gaifman()[v].iter().copied().filter(|&u| u != v)))
        .collect();
    let mut search = Mis {
        adj: &adj,
        best: 0,
        nodes: 0,
        budget,
    };
    search.expand(0, VertexSet::full(n))?;
    Ok(search.best)
}

/// `alpha(G) / |G|`.
pub fn hall_ratio(s: &Structure, budget: u64) -> Result<Rational> {
    if s.domain_size() == 0 {
        return Err(Error::EmptyDomain);
    }
    Ok(rational::ratio(independence_number(s, budget)?, s.domain_size()))
}
