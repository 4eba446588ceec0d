//! Interpretations `(nu, eta, rho)` of width `p`, acting on formulas by
//! substitution and on structures by definable quotient.

mod builtin;
mod json;

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::eval::CompiledFormula;
use crate::logic::{normalize, Formula, Var};
use crate::structure::{Signature, Structure};

pub use builtin::{builtin, cantor_beta, complement, forget, identity, mark_reindex, project, rename, shadow};
pub use json::InterpretationJson;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interpretation {
    source: Signature,
    target: Signature,
    p: usize,
    nu: Formula,
    eta: Formula,
    rho: BTreeMap<String, Formula>,
    basic: bool,
}

fn block_equality(p: usize) -> Formula {
    Formula::and((1..=p as Var).map(|i| Formula::Eq(i, i + p as Var)).collect())
}

fn check_free(what: &str, f: &Formula, bound: usize) -> Result<()> {
    match f.free_variables().into_iter().find(|&v| v as usize > bound) {
        Some(v) => Err(Error::InvalidInterpretation(format!(
            "{what} has free variable x{v}, allowed x1..x{bound}"
        ))),
        None => Ok(()),
    }
}

impl Interpretation {
    pub fn new(
        source: Signature,
        target: Signature,
        p: usize,
        nu: Formula,
        eta: Formula,
        rho: BTreeMap<String, Formula>,
        basic: bool,
    ) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidInterpretation("width must be at least 1".into()));
        }
        check_free("nu", &nu, p)?;
        check_free("eta", &eta, 2 * p)?;
        nu.check_signature(&source)?;
        eta.check_signature(&source)?;
        for (name, arity) in target.symbols() {
            let f = rho.get(&name).ok_or_else(|| {
                Error::InvalidInterpretation(format!("missing rho for `{name}`"))
            })?;
            check_free(&format!("rho for `{name}`"), f, arity * p)?;
            f.check_signature(&source)?;
        }
        if let Some(extra) = rho.keys().find(|k| target.index_of(k).is_none()) {
            return Err(Error::InvalidInterpretation(format!(
                "rho given for `{extra}`, which is not in the target signature"
            )));
        }
        if basic {
            let diagonal = normalize(&Formula::and(
                (1..=p as Var).map(|i| Formula::Eq(i, i)).collect(),
            ));
            let nu_n = normalize(&nu);
            if nu_n != Formula::True && nu_n != diagonal {
                return Err(Error::InvalidInterpretation(format!(
                    "basic interpretation needs nu = true or blockwise x=x, got {nu}"
                )));
            }
            if normalize(&eta) != normalize(&block_equality(p)) {
                return Err(Error::InvalidInterpretation(format!(
                    "basic interpretation needs eta = blockwise equality, got {eta}"
                )));
            }
        }
        Ok(Interpretation {
            source,
            target,
            p,
            nu,
            eta,
            rho,
            basic,
        })
    }

    pub fn source(&self) -> &Signature {
        &self.source
    }

    pub fn target(&self) -> &Signature {
        &self.target
    }

    pub fn width(&self) -> usize {
        self.p
    }

    pub fn nu(&self) -> &Formula {
        &self.nu
    }

    pub fn eta(&self) -> &Formula {
        &self.eta
    }

    pub fn rho(&self) -> &BTreeMap<String, Formula> {
        &self.rho
    }

    pub fn is_basic(&self) -> bool {
        self.basic
    }

    fn block(&self, j: Var) -> Vec<Var> {
        let p = self.p as Var;
        ((j - 1) * p + 1..=j * p).collect()
    }

    /// `nu` on the block of `x_j`.
    fn nu_on(&self, j: Var, fresh: &mut Var) -> Formula {
        let block = self.block(j);
        substitute(&self.nu, &|v| block[v as usize - 1], fresh)
    }

    /// Translates a target-signature formula into the source signature.
    pub fn transform_formula(&self, f: &Formula) -> Result<Formula> {
        f.check_signature(&self.target)?;
        let mut fresh = self.p as Var * f.max_var().max(1) + 1;
        Ok(self.translate(f, &mut fresh))
    }

    fn translate(&self, f: &Formula, fresh: &mut Var) -> Formula {
        let p = self.p as Var;
        match f {
            Formula::True | Formula::False => f.clone(),
            Formula::Eq(a, b) if a == b => self.nu_on(*a, fresh),
            Formula::Eq(a, b) => {
                let (ba, bb) = (self.block(*a), self.block(*b));
                substitute(
                    &self.eta,
                    &|v| {
                        let i = v as usize - 1;
                        if v <= p {
                            ba[i]
                        } else {
                            bb[i - p as usize]
                        }
                    },
                    fresh,
                )
            }
            Formula::Rel(name, vars) => {
                let blocks: Vec<Vec<Var>> = vars.iter().map(|&v| self.block(v)).collect();
                substitute(
                    &self.rho[name],
                    &|v| {
                        let i = (v - 1) as usize;
                        blocks[i / self.p][i % self.p]
                    },
                    fresh,
                )
            }
            Formula::Not(g) => Formula::not(self.translate(g, fresh)),
            Formula::And(gs) => Formula::And(gs.iter().map(|g| self.translate(g, fresh)).collect()),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| self.translate(g, fresh)).collect()),
            Formula::Exists(v, g) => {
                let body = self.translate(g, fresh);
                let body = if self.basic {
                    body
                } else {
                    Formula::and(vec![self.nu_on(*v, fresh), body])
                };
                Formula::exists_all(self.block(*v), body)
            }
            Formula::Forall(v, g) => {
                let body = self.translate(g, fresh);
                let body = if self.basic {
                    body
                } else {
                    Formula::or(vec![Formula::not(self.nu_on(*v, fresh)), body])
                };
                Formula::forall_all(self.block(*v), body)
            }
        }
    }

    pub fn apply(&self, a: &Structure) -> Result<Structure> {
        self.apply_with_classes(a).map(|(s, _)| s)
    }

    /// Also returns, for each element of the result, the `nu`-tuples of its
    /// `eta`-class in increasing order.
    pub fn apply_with_classes(&self, a: &Structure) -> Result<(Structure, Vec<Vec<Vec<usize>>>)> {
        if a.signature() != &self.source {
            return Err(Error::SignatureMismatch(format!(
                "structure over {}, interpretation expects {}",
                a.signature(),
                self.source
            )));
        }
        let nu = CompiledFormula::new(&self.source, &self.nu)?;
        let tuples = nu.sat_set(a, self.p)?.tuples().to_vec();
        let (classes, class_of) = if self.basic {
            let classes = (0..tuples.len()).map(|t| vec![t]).collect();
            (classes, (0..tuples.len()).collect::<Vec<_>>())
        } else {
            self.eta_classes(a, &tuples)?
        };
        let mut b = Structure::builder(self.target.clone(), classes.len());
        for index in 0..self.target.len() {
            let name = self.target.name(index);
            let k = self.target.arity(index);
            let rho = CompiledFormula::new(&self.source, &self.rho[&name])?;
            let holds = |combo: &[usize]| {
                let flat: Vec<usize> = combo.iter().flat_map(|&t| tuples[t].iter().copied()).collect();
                rho.holds_tuple(a, &flat)
            };
            let m = tuples.len();
            let total = m.checked_pow(k as u32).ok_or_else(|| {
                Error::BudgetExceeded(format!("{m}^{k} tuples for `{name}`"))
            })?;
            let decode = |mut code: usize| {
                let mut combo = vec![0; k];
                for slot in combo.iter_mut().rev() {
                    *slot = code % m;
                    code /= m;
                }
                combo
            };
            // Representatives are the first tuple of each class.
            let reps: Vec<usize> = {
                let mut reps = vec![usize::MAX; classes.len()];
                for (t, &c) in class_of.iter().enumerate() {
                    if reps[c] == usize::MAX {
                        reps[c] = t;
                    }
                }
                reps
            };
            let verdicts: Vec<(Vec<usize>, bool)> = (0..total)
                .into_par_iter()
                .map(|code| {
                    let combo = decode(code);
                    let value = holds(&combo);
                    (combo, value)
                })
                .collect();
            let is_rep: Vec<bool> = (0..m).map(|t| reps[class_of[t]] == t).collect();
            let mut by_class = BTreeMap::new();
            for (combo, value) in &verdicts {
                let key: Vec<usize> = combo.iter().map(|&t| class_of[t]).collect();
                if combo.iter().all(|&t| is_rep[t]) && *value {
                    b.add_at(index, &key)?;
                }
                if !self.basic {
                    match by_class.get(&key) {
                        None => {
                            by_class.insert(key, (combo.clone(), *value));
                        }
                        Some((other, v)) if v != value => {
                            return Err(Error::NotCompatible {
                                symbol: name.clone(),
                                witness: format!(
                                    "{:?} and {:?}",
                                    other.iter().map(|&t| &tuples[t]).collect::<Vec<_>>(),
                                    combo.iter().map(|&t| &tuples[t]).collect::<Vec<_>>()
                                ),
                            });
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        let members = classes
            .into_iter()
            .map(|c| c.into_iter().map(|t| tuples[t].clone()).collect())
            .collect();
        Ok((b.build(), members))
    }

    /// Groups `nu`-tuples into `eta`-classes, checking that `eta` is an
    /// equivalence relation on them. Classes are ordered by least member.
    fn eta_classes(&self, a: &Structure, tuples: &[Vec<usize>]) -> Result<(Vec<Vec<usize>>, Vec<usize>)> {
        let eta = CompiledFormula::new(&self.source, &self.eta)?;
        let m = tuples.len();
        let rows: Vec<Vec<bool>> = (0..m)
            .into_par_iter()
            .map(|i| {
                (0..m)
                    .map(|j| {
                        let flat: Vec<usize> = tuples[i].iter().chain(&tuples[j]).copied().collect();
                        eta.holds_tuple(a, &flat)
                    })
                    .collect()
            })
            .collect();
        for i in 0..m {
            if !rows[i][i] {
                return Err(Error::NotEquivalence(format!("not reflexive at {:?}", tuples[i])));
            }
            for j in 0..m {
                if rows[i][j] && !rows[j][i] {
                    return Err(Error::NotEquivalence(format!(
                        "not symmetric on {:?}, {:?}",
                        tuples[i], tuples[j]
                    )));
                }
                if rows[i][j] {
                    if let Some(k) = (0..m).find(|&k| rows[j][k] && !rows[i][k]) {
                        return Err(Error::NotEquivalence(format!(
                            "not transitive on {:?}, {:?}, {:?}",
                            tuples[i], tuples[j], tuples[k]
                        )));
                    }
                }
            }
        }
        let mut class_of = vec![usize::MAX; m];
        let mut classes = Vec::new();
        for i in 0..m {
            if class_of[i] != usize::MAX {
                continue;
            }
            let members: Vec<usize> = (i..m).filter(|&j| rows[i][j]).collect();
            for &j in &members {
                class_of[j] = classes.len();
            }
            classes.push(members);
        }
        Ok((classes, class_of))
    }
}

/// Renames free variables through `map` and bound ones to fresh indices.
fn substitute(f: &Formula, map: &dyn Fn(Var) -> Var, fresh: &mut Var) -> Formula {
    fn go(f: &Formula, map: &dyn Fn(Var) -> Var, bound: &mut Vec<(Var, Var)>, fresh: &mut Var) -> Formula {
        let var = |v: Var, bound: &[(Var, Var)]| {
            bound
                .iter()
                .rev()
                .find(|(old, _)| *old == v)
                .map_or_else(|| map(v), |&(_, new)| new)
        };
        match f {
            Formula::True | Formula::False => f.clone(),
            Formula::Rel(name, vars) => {
                Formula::Rel(name.clone(), vars.iter().map(|&v| var(v, bound)).collect())
            }
            Formula::Eq(a, b) => Formula::Eq(var(*a, bound), var(*b, bound)),
            Formula::Not(g) => Formula::not(go(g, map, bound, fresh)),
            Formula::And(gs) => Formula::And(gs.iter().map(|g| go(g, map, bound, fresh)).collect()),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| go(g, map, bound, fresh)).collect()),
            Formula::Exists(v, g) | Formula::Forall(v, g) => {
                let new = *fresh;
                *fresh += 1;
                bound.push((*v, new));
                let body = go(g, map, bound, fresh);
                bound.pop();
                if matches!(f, Formula::Exists(..)) {
                    Formula::exists(new, body)
                } else {
                    Formula::forall(new, body)
                }
            }
        }
    }
    go(f, map, &mut Vec::new(), fresh)
}

/// `second` after `first`: applying the result equals applying `first`, then
/// `second`.
pub fn compose(first: &Interpretation, second: &Interpretation) -> Result<Interpretation> {
    if second.source != first.target {
        return Err(Error::SignatureMismatch(format!(
            "cannot compose: {} does not match {}",
            second.source, first.target
        )));
    }
    let p = first.p * second.p;
    let mut nu_parts = Vec::new();
    if !first.basic {
        let mut fresh = (p as Var) + 1;
        for j in 1..=second.p as Var {
            nu_parts.push(first.nu_on(j, &mut fresh));
        }
    }
    nu_parts.push(first.transform_formula(&second.nu)?);
    let rho = second
        .rho
        .iter()
        .map(|(name, f)| Ok((name.clone(), first.transform_formula(f)?)))
        .collect::<Result<_>>()?;
    let basic = first.basic && second.basic;
    Interpretation::new(
        first.source.clone(),
        second.target.clone(),
        p,
        Formula::and(nu_parts),
        first.transform_formula(&second.eta)?,
        rho,
        basic,
    )
}
