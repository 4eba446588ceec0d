//! Canonical forms of small structures.
//!
//! Exhaustive search over labelings, pruned in two ways: labelings must
//! respect an isomorphism-invariant color refinement (degree-like counts per
//! relation and tuple position), and a branch is skipped when swapping its
//! vertex with an already explored one is an automorphism. The form is the
//! lexicographically least encoding over the surviving leaves.

use super::Structure;
use crate::error::{Error, Result};

pub const DEFAULT_CANON_LIMIT: usize = 12;

/// Byte encoding; equal iff the (colored) structures are isomorphic.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

/// A canonical form together with the labeling that attains it:
/// `order[i]` is the original element placed at canonical position `i`.
#[derive(Debug, Clone)]
pub struct Labeling {
    pub form: CanonicalForm,
    pub order: Vec<usize>,
}

pub fn canonical_form(s: &Structure) -> Result<CanonicalForm> {
    canonical_form_with_limit(s, DEFAULT_CANON_LIMIT)
}

pub fn canonical_form_with_limit(s: &Structure, limit: usize) -> Result<CanonicalForm> {
    let colors = vec![0; s.domain_size()];
    canonical_labeling(s, &colors, limit).map(|l| l.form)
}

/// Canonical labeling of `s` with an initial vertex coloring that
/// isomorphisms must preserve.
pub fn canonical_labeling(s: &Structure, colors: &[u32], limit: usize) -> Result<Labeling> {
    let n = s.domain_size();
    if n > limit {
        return Err(Error::CanonLimit { size: n, limit });
    }
    assert_eq!(colors.len(), n, "one initial color per element");
    let mut incidence = vec![Vec::new(); n];
    for (r, rel) in s.relations().iter().enumerate() {
        for (t, tuple) in rel.tuples().iter().enumerate() {
            for (pos, &v) in tuple.iter().enumerate() {
                incidence[v].push((r, t, pos));
            }
        }
    }
    let mut search = Search {
        s,
        initial: colors,
        incidence,
        best: None,
    };
    search.run(rank(colors));
    let (bytes, order) = search.best.expect("search visits at least one leaf");
    Ok(Labeling {
        form: CanonicalForm(bytes),
        order,
    })
}

fn rank(values: &[u32]) -> Vec<u32> {
    let mut distinct: Vec<u32> = values.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    values
        .iter()
        .map(|v| distinct.binary_search(v).expect("present") as u32)
        .collect()
}

fn cell_count(colors: &[u32]) -> usize {
    colors.iter().copied().max().map_or(0, |m| m as usize + 1)
}

struct Search<'a> {
    s: &'a Structure,
    initial: &'a [u32],
    incidence: Vec<Vec<(usize, usize, usize)>>,
    best: Option<(Vec<u8>, Vec<usize>)>,
}

impl Search<'_> {
    /// Iterated refinement; colors stay ranks `0..k` and refine the input
    /// ordered partition.
    fn refine(&self, mut colors: Vec<u32>) -> Vec<u32> {
        let n = colors.len();
        let mut cells = cell_count(&colors);
        loop {
            if cells == n {
                return colors;
            }
            let keys: Vec<Vec<u32>> = (0..n)
                .map(|v| {
                    let mut records: Vec<Vec<u32>> = self.incidence[v]
                        .iter()
                        .map(|&(r, t, pos)| {
                            let tuple = &self.s.relation(r).tuples()[t];
                            let mut rec = Vec::with_capacity(tuple.len() + 2);
                            rec.push(r as u32);
                            rec.push(pos as u32);
                            rec.extend(tuple.iter().map(|&w| colors[w]));
                            rec
                        })
                        .collect();
                    records.sort_unstable();
                    let mut key = vec![colors[v]];
                    key.extend(records.into_iter().flatten());
                    key
                })
                .collect();
            let mut distinct: Vec<&Vec<u32>> = keys.iter().collect();
            distinct.sort_unstable();
            distinct.dedup();
            let next: Vec<u32> = keys
                .iter()
                .map(|k| distinct.binary_search(&k).expect("present") as u32)
                .collect();
            let next_cells = distinct.len();
            colors = next;
            if next_cells == cells {
                return colors;
            }
            cells = next_cells;
        }
    }

    fn run(&mut self, colors: Vec<u32>) {
        let colors = self.refine(colors);
        let n = colors.len();
        if cell_count(&colors) == n {
            self.leaf(&colors);
            return;
        }
        let mut sizes = vec![0usize; n];
        for &c in &colors {
            sizes[c as usize] += 1;
        }
        let target = sizes.iter().position(|&k| k > 1).expect("non-discrete") as u32;
        let cell: Vec<usize> = (0..n).filter(|&v| colors[v] == target).collect();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &cell {
            if explored
                .iter()
                .any(|&u| self.swap_is_automorphism(u, v))
            {
                continue;
            }
            let next: Vec<u32> = colors
                .iter()
                .enumerate()
                .map(|(w, &c)| if w == v { 2 * c } else { 2 * c + 1 })
                .collect();
            self.run(rank(&next));
            explored.push(v);
        }
    }

    /// `u` and `v` share a color, so only tuples through them can break it.
    fn swap_is_automorphism(&self, u: usize, v: usize) -> bool {
        let swap = |w: usize| {
            if w == u {
                v
            } else if w == v {
                u
            } else {
                w
            }
        };
        let mut image = Vec::new();
        [u, v].iter().all(|&x| {
            self.incidence[x].iter().all(|&(r, t, _)| {
                image.clear();
                image.extend(self.s.relation(r).tuples()[t].iter().map(|&w| swap(w)));
                self.s.holds(r, &image)
            })
        })
    }

    fn leaf(&mut self, colors: &[u32]) {
        let n = colors.len();
        let mut order = vec![0usize; n];
        for (v, &c) in colors.iter().enumerate() {
            order[c as usize] = v;
        }
        let bytes = encode(self.s, self.initial, &order, colors);
        let better = match &self.best {
            Some((best, _)) => bytes < *best,
            None => true,
        };
        if better {
            self.best = Some((bytes, order));
        }
    }
}

fn push_u32(out: &mut Vec<u8>, value: usize) {
    out.extend_from_slice(&(value as u32).to_be_bytes());
}

fn encode(s: &Structure, initial: &[u32], order: &[usize], position: &[u32]) -> Vec<u8> {
    let sig = s.signature();
    let mut out = Vec::new();
    push_u32(&mut out, sig.len());
    for (name, arity) in sig.symbols() {
        out.extend_from_slice(name.as_bytes());
        out.push(0);
        push_u32(&mut out, arity);
    }
    push_u32(&mut out, order.len());
    for &v in order {
        push_u32(&mut out, initial[v] as usize);
    }
    for rel in s.relations() {
        let mut tuples: Vec<Vec<u32>> = rel
            .tuples()
            .iter()
            .map(|t| t.iter().map(|&v| position[v]).collect())
            .collect();
        tuples.sort_unstable();
        push_u32(&mut out, tuples.len());
        for t in tuples {
            for x in t {
                push_u32(&mut out, x as usize);
            }
        }
    }
    out
}
