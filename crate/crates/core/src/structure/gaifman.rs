//! The Gaifman graph: `u ~ v` iff `u != v` and both occur in one tuple.

use std::collections::VecDeque;

use super::{Structure, VertexSet};

impl Structure {
    /// Sorted neighbor lists of the Gaifman graph.
    pub fn gaifman(&self) -> &[Vec<usize>] {
        self.gaifman.get_or_init(|| {
            let mut adj = vec![Vec::new(); self.domain];
            for rel in &self.relations {
                for t in &rel.tuples {
                    for (i, &u) in t.iter().enumerate() {
                        for &v in &t[i + 1..] {
                            if u != v {
                                adj[u].push(v);
                                adj[v].push(u);
                            }
                        }
                    }
                }
            }
            for list in &mut adj {
                list.sort_unstable();
                list.dedup();
            }
            adj
        })
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.gaifman()[u].binary_search(&v).is_ok()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.gaifman()[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.gaifman().iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Gaifman distances from `centers`, `None` beyond `limit`.
    pub fn distances(&self, centers: &VertexSet, limit: usize) -> Vec<Option<usize>> {
        let adj = self.gaifman();
        let mut dist = vec![None; self.domain];
        let mut queue = VecDeque::new();
        for v in centers.iter() {
            dist[v] = Some(0);
            queue.push_back(v);
        }
        while let Some(u) = queue.pop_front() {
            let du = dist[u].expect("queued vertices have a distance");
            if du == limit {
                continue;
            }
            for &w in &adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Vertices at Gaifman distance at most `d` from `centers`.
    pub fn ball(&self, centers: &VertexSet, d: usize) -> VertexSet {
        let dist = self.distances(centers, d);
        VertexSet::from_iter(
            self.domain,
            dist.iter()
                .enumerate()
                .filter_map(|(v, dv)| dv.map(|_| v)),
        )
    }

    /// The `d`-ball around `root` in BFS order: root first, then by
    /// distance, ties by element index. Returns `(element, distance)`.
    pub fn ball_order(&self, root: usize, d: usize) -> Vec<(usize, usize)> {
        let centers = VertexSet::from_iter(self.domain, [root]);
        let dist = self.distances(&centers, d);
        let mut order: Vec<(usize, usize)> = dist
            .iter()
            .enumerate()
            .filter_map(|(v, dv)| dv.map(|dv| (v, dv)))
            .collect();
        order.sort_by_key(|&(v, dv)| (dv, v));
        order
    }

    /// Both endpoints of every Gaifman edge between `x` and its complement.
    pub fn boundary(&self, x: &VertexSet) -> VertexSet {
        let adj = self.gaifman();
        let mut out = VertexSet::new(self.domain);
        for u in x.iter() {
            for &w in &adj[u] {
                if !x.contains(w) {
                    out.insert(u);
                    out.insert(w);
                }
            }
        }
        out
    }

    /// Gaifman-connectivity classes, each sorted, ordered by least element.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let adj = self.gaifman();
        let mut seen = vec![false; self.domain];
        let mut out = Vec::new();
        for start in 0..self.domain {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for &w in &adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Largest finite eccentricity. Zero for the empty structure.
    pub fn diameter(&self) -> usize {
        (0..self.domain)
            .map(|v| {
                self.distances(&VertexSet::from_iter(self.domain, [v]), usize::MAX)
                    .into_iter()
                    .flatten()
                    .max()
                    .unwrap_or(0)
            })
            .max()
            .unwrap_or(0)
    }
}
