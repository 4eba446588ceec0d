//! Conservative syntactic normal form.
//!
//! Negation normal form, canonical bound-variable numbering, flattened and
//! sorted connectives with duplicates and unit constants removed. Free
//! variables are never renamed or dropped.

use std::collections::BTreeSet;

use super::{Formula, Var};

pub fn normalize(f: &Formula) -> Formula {
    let free = f.free_variables();
    let nnf = to_nnf(f, false);
    let renamed = rename_bound(&nnf, &free, &mut Vec::new());
    simplify(renamed)
}

fn to_nnf(f: &Formula, negate: bool) -> Formula {
    match f {
        Formula::True | Formula::False => {
            if (*f == Formula::True) != negate {
                Formula::True
            } else {
                Formula::False
            }
        }
        Formula::Rel(..) | Formula::Eq(..) => {
            if negate {
                Formula::not(f.clone())
            } else {
                f.clone()
            }
        }
        Formula::Not(g) => to_nnf(g, !negate),
        Formula::And(fs) => {
            let parts = fs.iter().map(|g| to_nnf(g, negate)).collect();
            if negate {
                Formula::Or(parts)
            } else {
                Formula::And(parts)
            }
        }
        Formula::Or(fs) => {
            let parts = fs.iter().map(|g| to_nnf(g, negate)).collect();
            if negate {
                Formula::And(parts)
            } else {
                Formula::Or(parts)
            }
        }
        Formula::Exists(v, g) => {
            let body = to_nnf(g, negate);
            if negate {
                Formula::forall(*v, body)
            } else {
                Formula::exists(*v, body)
            }
        }
        Formula::Forall(v, g) => {
            let body = to_nnf(g, negate);
            if negate {
                Formula::exists(*v, body)
            } else {
                Formula::forall(*v, body)
            }
        }
    }
}

/// Each binder gets the least index that is neither free in the whole
/// formula nor taken by an enclosing binder. The choice depends only on the
/// nesting, so sibling order does not matter.
fn rename_bound(f: &Formula, free: &BTreeSet<Var>, scope: &mut Vec<(Var, Var)>) -> Formula {
    let lookup = |v: Var, scope: &[(Var, Var)]| {
        scope
            .iter()
            .rev()
            .find(|(old, _)| *old == v)
            .map_or(v, |&(_, new)| new)
    };
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Rel(name, vars) => {
            Formula::Rel(name.clone(), vars.iter().map(|&v| lookup(v, scope)).collect())
        }
        Formula::Eq(a, b) => Formula::Eq(lookup(*a, scope), lookup(*b, scope)),
        Formula::Not(g) => Formula::not(rename_bound(g, free, scope)),
        Formula::And(fs) => Formula::And(fs.iter().map(|g| rename_bound(g, free, scope)).collect()),
        Formula::Or(fs) => Formula::Or(fs.iter().map(|g| rename_bound(g, free, scope)).collect()),
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let fresh = (1..)
                .find(|j| !free.contains(j) && !scope.iter().any(|&(_, new)| new == *j))
                .expect("unbounded search");
            scope.push((*v, fresh));
            let body = rename_bound(g, free, scope);
            scope.pop();
            if matches!(f, Formula::Exists(..)) {
                Formula::exists(fresh, body)
            } else {
                Formula::forall(fresh, body)
            }
        }
    }
}

fn simplify(f: Formula) -> Formula {
    match f {
        Formula::Not(g) => Formula::not(simplify(*g)),
        Formula::Exists(v, g) => Formula::exists(v, simplify(*g)),
        Formula::Forall(v, g) => Formula::forall(v, simplify(*g)),
        Formula::And(fs) => junction(fs, true),
        Formula::Or(fs) => junction(fs, false),
        Formula::Eq(a, b) => Formula::Eq(a.min(b), a.max(b)),
        atom => atom,
    }
}

fn junction(children: Vec<Formula>, conjunction: bool) -> Formula {
    let unit = if conjunction {
        Formula::True
    } else {
        Formula::False
    };
    let mut parts = Vec::new();
    for child in children.into_iter().map(simplify) {
        match child {
            Formula::And(inner) if conjunction => parts.extend(inner),
            Formula::Or(inner) if !conjunction => parts.extend(inner),
            c if c == unit => {}
            c => parts.push(c),
        }
    }
    parts.sort();
    parts.dedup();
    if conjunction {
        Formula::and(parts)
    } else {
        Formula::or(parts)
    }
}
