//! Independent reference implementations and random generators shared by
//! the integration and acceptance tests. Nothing here calls into the
//! library's evaluation, canonicalization or lift code.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use structlim::{Formula, Signature, Structure};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

// ---------------------------------------------------------------- evaluation

/// Tarski semantics by direct recursion.
pub fn naive_holds(s: &Structure, f: &Formula, env: &mut BTreeMap<u32, usize>) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Rel(name, vars) => {
            let index = s.signature().index_of(name).expect("symbol in signature");
            let tuple: Vec<usize> = vars.iter().map(|v| env[v]).collect();
            s.relation(index).tuples().contains(&tuple)
        }
        Formula::Eq(a, b) => env[a] == env[b],
        Formula::Not(g) => !naive_holds(s, g, env),
        Formula::And(fs) => fs.iter().all(|g| naive_holds(s, g, env)),
        Formula::Or(fs) => fs.iter().any(|g| naive_holds(s, g, env)),
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let saved = env.get(v).copied();
            let want = matches!(f, Formula::Exists(..));
            let mut result = !want;
            for a in 0..s.domain_size() {
                env.insert(*v, a);
                if naive_holds(s, g, env) == want {
                    result = want;
                    break;
                }
            }
            match saved {
                Some(a) => env.insert(*v, a),
                None => env.remove(v),
            };
            result
        }
    }
}

/// Fraction of the `n^p` assignments to `x1..xp` satisfying `f`.
pub fn naive_pairing(s: &Structure, f: &Formula, p: usize) -> Q {
    let n = s.domain_size();
    let total = n.pow(p as u32);
    let mut hits = 0i64;
    for code in 0..total {
        let mut env = BTreeMap::new();
        let mut c = code;
        for v in 1..=p as u32 {
            env.insert(v, c % n);
            c /= n;
        }
        if naive_holds(s, f, &mut env) {
            hits += 1;
        }
    }
    q(hits, total as i64)
}

// ---------------------------------------------------------------- generators

pub fn sig_eu() -> Signature {
    Signature::new([("E", 2), ("U", 1)], 0).unwrap()
}

/// Every tuple of every relation independently with probability `density`.
pub fn random_structure(rng: &mut impl Rng, sig: &Signature, n: usize, density: f64) -> Structure {
    let mut b = Structure::builder(sig.clone(), n);
    for (name, arity) in sig.symbols() {
        for code in 0..n.pow(arity as u32) {
            let mut t = Vec::with_capacity(arity);
            let mut c = code;
            for _ in 0..arity {
                t.push(c % n);
                c /= n;
            }
            if rng.gen_bool(density) {
                b.add(&name, &t).unwrap();
            }
        }
    }
    b.build()
}

/// Random simple graph with maximum degree at most `max_deg`.
pub fn random_bounded_graph(rng: &mut impl Rng, n: usize, max_deg: usize, attempts: usize) -> Structure {
    let mut deg = vec![0; n];
    let mut edges = BTreeSet::new();
    for _ in 0..attempts {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v && deg[u] < max_deg && deg[v] < max_deg && edges.insert((u.min(v), u.max(v))) {
            deg[u] += 1;
            deg[v] += 1;
        }
    }
    let edges: Vec<_> = edges.into_iter().collect();
    Structure::graph(n, &edges).unwrap()
}

fn random_atom(rng: &mut impl Rng, symbols: &[(String, usize)], vars: u32) -> Formula {
    match rng.gen_range(0..10) {
        0 => Formula::True,
        1 => Formula::False,
        2 | 3 => Formula::Eq(rng.gen_range(1..=vars), rng.gen_range(1..=vars)),
        _ => {
            let (name, arity) = &symbols[rng.gen_range(0..symbols.len())];
            Formula::Rel(name.clone(), (0..*arity).map(|_| rng.gen_range(1..=vars)).collect())
        }
    }
}

/// Formula of quantifier depth at most `depth` over variables `x1..x{vars}`.
pub fn random_formula(rng: &mut impl Rng, symbols: &[(String, usize)], depth: usize, vars: u32) -> Formula {
    let choice = rng.gen_range(0..10);
    match choice {
        0..=2 => random_atom(rng, symbols, vars),
        3 => Formula::not(random_formula(rng, symbols, depth, vars)),
        4 | 5 => Formula::And(vec![
            random_formula(rng, symbols, depth, vars),
            random_formula(rng, symbols, depth, vars),
        ]),
        6 => Formula::Or(vec![
            random_formula(rng, symbols, depth, vars),
            random_formula(rng, symbols, depth, vars),
        ]),
        _ if depth == 0 => random_atom(rng, symbols, vars),
        7 | 8 => Formula::exists(rng.gen_range(1..=vars), random_formula(rng, symbols, depth - 1, vars)),
        _ => Formula::forall(rng.gen_range(1..=vars), random_formula(rng, symbols, depth - 1, vars)),
    }
}

pub fn symbols_of(sig: &Signature) -> Vec<(String, usize)> {
    sig.symbols().collect()
}

// ---------------------------------------------------------------- balls

fn adjacency(s: &Structure) -> Vec<BTreeSet<usize>> {
    let mut adj = vec![BTreeSet::new(); s.domain_size()];
    for rel in s.relations() {
        for t in rel.tuples() {
            for &a in t {
                for &b in t {
                    if a != b {
                        adj[a].insert(b);
                    }
                }
            }
        }
    }
    adj
}

pub fn naive_distances(s: &Structure, root: usize) -> Vec<Option<usize>> {
    let adj = adjacency(s);
    let mut dist = vec![None; s.domain_size()];
    dist[root] = Some(0);
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if dist[w].is_none() {
                dist[w] = Some(dist[u].unwrap() + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Isomorphism key of a rooted structure: the least sorted tuple list over
/// all relabelings sending the root to 0.
pub type RootedKey = (usize, Vec<(usize, Vec<usize>)>);

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

pub fn naive_rooted_key(s: &Structure, root: usize) -> RootedKey {
    let n = s.domain_size();
    assert!(n <= 8, "brute-force key limited to 8 elements");
    let others: Vec<usize> = (0..n).filter(|&v| v != root).collect();
    let mut best: Option<Vec<(usize, Vec<usize>)>> = None;
    for perm in permutations(&others) {
        let mut label = vec![0; n];
        label[root] = 0;
        for (i, &v) in perm.iter().enumerate() {
            label[v] = i + 1;
        }
        let mut tuples: Vec<(usize, Vec<usize>)> = s
            .relations()
            .iter()
            .enumerate()
            .flat_map(|(r, rel)| rel.tuples().iter().map(move |t| (r, t.clone())))
            .map(|(r, t)| (r, t.iter().map(|&v| label[v]).collect()))
            .collect();
        tuples.sort();
        if best.as_ref().is_none_or(|b| tuples < *b) {
            best = Some(tuples);
        }
    }
    (n, best.unwrap())
}

/// Induced substructure on the radius-`r` ball, root first.
pub fn naive_ball(s: &Structure, root: usize, r: usize) -> (Structure, usize) {
    let dist = naive_distances(s, root);
    let mut members: Vec<usize> = (0..s.domain_size()).filter(|&v| dist[v].is_some_and(|d| d <= r)).collect();
    members.sort_by_key(|&v| (v != root, v));
    (s.induced(&members), 0)
}

/// Ball-type counts; keys from [`naive_rooted_key`].
pub fn naive_ball_counts(s: &Structure, r: usize) -> BTreeMap<RootedKey, usize> {
    let mut counts = BTreeMap::new();
    for v in 0..s.domain_size() {
        let (ball, root) = naive_ball(s, v, r);
        *counts.entry(naive_rooted_key(&ball, root)).or_insert(0) += 1;
    }
    counts
}

pub fn naive_tv(a: &BTreeMap<RootedKey, usize>, na: usize, b: &BTreeMap<RootedKey, usize>, nb: usize) -> Q {
    let keys: BTreeSet<&RootedKey> = a.keys().chain(b.keys()).collect();
    let mut total = 0i64;
    for k in keys {
        let x = *a.get(k).unwrap_or(&0) as i64 * nb as i64;
        let y = *b.get(k).unwrap_or(&0) as i64 * na as i64;
        total += (x - y).abs();
    }
    q(total, 2 * na as i64 * nb as i64)
}

// ---------------------------------------------------------------- lifts

/// Every one-mark coloring of a graph, as a type-count vector over a
/// shared type index. No coloring is skipped or merged.
pub fn naive_one_mark_lifts(s: &Structure, r: usize, index: &mut BTreeMap<RootedKey, usize>) -> Vec<Vec<u32>> {
    let n = s.domain_size();
    assert!(n <= 16);
    let mut out = Vec::with_capacity(1 << n);
    for mask in 0u32..(1 << n) {
        let mut b = Structure::builder(s.signature().with_marks(1), n);
        for t in s.tuples_of("E").unwrap() {
            b.add("E", t).unwrap();
        }
        for v in 0..n {
            if mask >> v & 1 == 1 {
                b.add("M1", &[v]).unwrap();
            }
        }
        let lifted = b.build();
        let mut counts = Vec::new();
        for (key, c) in naive_ball_counts(&lifted, r) {
            let next = index.len();
            let id = *index.entry(key).or_insert(next);
            if counts.len() <= id {
                counts.resize(id + 1, 0);
            }
            counts[id] += c as u32;
        }
        out.push(counts);
    }
    out
}

/// Hausdorff distance between two families of count vectors with totals
/// `na` and `nb`, under total variation.
pub fn naive_hausdorff(a: &[Vec<u32>], na: usize, b: &[Vec<u32>], nb: usize) -> Q {
    let width = a.iter().chain(b).map(Vec::len).max().unwrap_or(0);
    let pad = |v: &Vec<u32>| {
        let mut v = v.clone();
        v.resize(width, 0);
        v
    };
    let a: Vec<Vec<u32>> = a.iter().map(pad).collect();
    let b: Vec<Vec<u32>> = b.iter().map(pad).collect();
    let dist = |x: &[u32], y: &[u32]| -> u64 {
        x.iter()
            .zip(y)
            .map(|(&p, &q)| (p as i64 * nb as i64 - q as i64 * na as i64).unsigned_abs())
            .sum()
    };
    let directed = |from: &[Vec<u32>], to: &[Vec<u32>], flip: bool| -> u64 {
        from.iter()
            .map(|x| {
                let mut best = u64::MAX;
                for y in to {
                    let d = if flip { dist(y, x) } else { dist(x, y) };
                    if d < best {
                        best = d;
                        if d == 0 {
                            break;
                        }
                    }
                }
                best
            })
            .max()
            .unwrap_or(0)
    };
    let h = directed(&a, &b, false).max(directed(&b, &a, true));
    q(h as i64, 2 * na as i64 * nb as i64)
}

// ---------------------------------------------------------------- subsets

/// `min |N(X) \ X| / |X|` over `0 < |X| < n/2` by plain enumeration.
pub fn naive_h_out(s: &Structure) -> Option<Q> {
    let n = s.domain_size();
    let adj = adjacency(s);
    let mut best: Option<Q> = None;
    for mask in 1u32..(1 << n) {
        let k = mask.count_ones() as usize;
        if 2 * k >= n {
            continue;
        }
        let mut out = BTreeSet::new();
        for v in (0..n).filter(|v| mask >> v & 1 == 1) {
            out.extend(adj[v].iter().copied().filter(|w| mask >> w & 1 == 0));
        }
        let ratio = q(out.len() as i64, k as i64);
        if best.as_ref().is_none_or(|b| ratio < *b) {
            best = Some(ratio);
        }
    }
    best
}

/// Largest independent set by enumeration.
pub fn naive_independence(s: &Structure) -> usize {
    let n = s.domain_size();
    let adj = adjacency(s);
    (0u32..(1 << n))
        .filter(|&mask| (0..n).all(|v| mask >> v & 1 == 0 || adj[v].iter().all(|&w| mask >> w & 1 == 0)))
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

pub fn cycle(n: usize) -> Structure {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Structure::graph(n, &edges).unwrap()
}

pub fn path(n: usize) -> Structure {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Structure::graph(n, &edges).unwrap()
}

pub fn complete(n: usize) -> Structure {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    Structure::graph(n, &edges).unwrap()
}
