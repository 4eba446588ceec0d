//! Formulas `zeta_{B,r}(x1)` stating that the radius-`r` ball around `x1`
//! is isomorphic to the rooted structure `B`.
//!
//! Layout: `x1` is the root, `x2..xm` the other ball elements in BFS order.
//! The body conjoins pairwise distinctness, the full atomic diagram of `B`
//! over all symbols, and for every element closer than `r` to the root a
//! clause saying that all its Gaifman neighbors are among `x1..xm`.

use super::{Formula, Var};
use crate::error::{Error, Result};
use crate::structure::{Signature, Structure, VertexSet};

/// Gaifman adjacency of `a` and `b` as a formula; extra tuple positions are
/// existentially quantified starting at `fresh`.
fn adjacency(sig: &Signature, a: Var, b: Var, fresh: Var) -> Formula {
    let mut parts = Vec::new();
    for s in 0..sig.len() {
        let k = sig.arity(s);
        for i in 0..k {
            for j in 0..k {
                if i == j {
                    continue;
                }
                let mut next = fresh;
                let mut helpers = Vec::new();
                let vars: Vec<Var> = (0..k)
                    .map(|pos| {
                        if pos == i {
                            a
                        } else if pos == j {
                            b
                        } else {
                            helpers.push(next);
                            next += 1;
                            next - 1
                        }
                    })
                    .collect();
                parts.push(Formula::exists_all(
                    helpers,
                    Formula::Rel(sig.name(s), vars),
                ));
            }
        }
    }
    Formula::or(parts)
}

fn tuples(m: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = m.checked_pow(k as u32).unwrap_or(0);
    (0..total).map(move |mut code| {
        let mut t = vec![0; k];
        for slot in t.iter_mut().rev() {
            *slot = code % m;
            code /= m;
        }
        t
    })
}

/// Builds `zeta_{B,r}(x1)` for the rooted structure `(ball, root)`.
pub fn ball_formula(ball: &Structure, root: usize, r: usize) -> Result<Formula> {
    let m = ball.domain_size();
    if root >= m {
        return Err(Error::InvalidParameter(format!(
            "root {root} outside ball of size {m}"
        )));
    }
    let order = ball.ball_order(root, r);
    if order.len() != m {
        return Err(Error::InvalidParameter(format!(
            "structure of size {m} is not a radius-{r} ball around {root}"
        )));
    }
    let sig = ball.signature();
    let var = |position: usize| position as Var + 1;
    let mut conjuncts = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            conjuncts.push(Formula::not(Formula::Eq(var(i), var(j))));
        }
    }
    let mut image = Vec::new();
    for s in 0..sig.len() {
        for t in tuples(m, sig.arity(s)) {
            image.clear();
            image.extend(t.iter().map(|&p| order[p].0));
            let atom = Formula::Rel(sig.name(s), t.iter().map(|&p| var(p)).collect());
            conjuncts.push(if ball.holds(s, &image) {
                atom
            } else {
                Formula::not(atom)
            });
        }
    }
    let z = var(m);
    for (position, &(_, dist)) in order.iter().enumerate() {
        if dist >= r {
            continue;
        }
        let mut options = vec![Formula::not(adjacency(sig, var(position), z, z + 1))];
        options.extend((0..m).map(|p| Formula::Eq(z, var(p))));
        conjuncts.push(Formula::forall(z, Formula::Or(options)));
    }
    Ok(Formula::exists_all(2..=m as Var, Formula::and(conjuncts)))
}

fn first_relation(f: &Formula) -> Option<&Vec<Var>> {
    match f {
        Formula::Rel(_, vars) => Some(vars),
        Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => first_relation(g),
        Formula::And(fs) | Formula::Or(fs) => fs.iter().find_map(first_relation),
        _ => None,
    }
}

/// Recovers `(B, r)` from a formula produced by [`ball_formula`], with `B`
/// rooted at element 0 and `r` the least radius producing this exact
/// formula. Returns `None` for anything else.
pub fn decode_ball_formula(f: &Formula) -> Option<(Structure, usize)> {
    let mut body = f;
    let mut m = 1usize;
    while let Formula::Exists(v, g) = body {
        if *v as usize != m + 1 {
            return None;
        }
        m += 1;
        body = g;
    }
    let conjuncts: Vec<&Formula> = match body {
        Formula::And(fs) => fs.iter().collect(),
        other => vec![other],
    };
    let in_ball = |vars: &[Var]| vars.iter().all(|&v| v >= 1 && v as usize <= m);
    let mut names: Vec<(String, usize)> = Vec::new();
    let mut positive: Vec<(String, Vec<usize>)> = Vec::new();
    let mut closures = Vec::new();
    for c in conjuncts {
        let (atom, negated) = match c {
            Formula::Not(g) => (&**g, true),
            other => (other, false),
        };
        match atom {
            Formula::Eq(..) if negated => {}
            Formula::Rel(name, vars) if in_ball(vars) => {
                if !names.iter().any(|(n, _)| n == name) {
                    names.push((name.clone(), vars.len()));
                }
                if !negated {
                    positive.push((name.clone(), vars.iter().map(|&v| v as usize - 1).collect()));
                }
            }
            Formula::Forall(_, g) if !negated => {
                let Formula::Or(options) = &**g else {
                    return None;
                };
                let vars = first_relation(options.first()?)?;
                let v = *vars.iter().find(|&&v| v as usize <= m)?;
                closures.push(v as usize - 1);
            }
            _ => return None,
        }
    }
    let mut base = Vec::new();
    let mut marks = 0;
    for (name, arity) in &names {
        match name.strip_prefix('M').and_then(|d| d.parse::<usize>().ok()) {
            Some(k) if *arity == 1 && k == marks + 1 => marks += 1,
            _ if marks == 0 => base.push((name.clone(), *arity)),
            _ => return None,
        }
    }
    let sig = Signature::new(base, marks).ok()?;
    let mut b = Structure::builder(sig, m);
    for (name, t) in &positive {
        b.add(name, t).ok()?;
    }
    let ball = b.build();
    let dist = ball.distances(&VertexSet::from_iter(m, [0]), usize::MAX);
    let r = closures
        .iter()
        .map(|&v| dist[v].map(|d| d + 1))
        .try_fold(0, |acc, d| d.map(|d| acc.max(d)))?;
    let again = ball_formula(&ball, 0, r).ok()?;
    (again == *f).then_some((ball, r))
}
