//! First-order formulas with numbered variables `x1, x2, ...`.

mod ball;
mod classify;
mod normalize;
mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::structure::Signature;

pub use ball::{ball_formula, decode_ball_formula};
pub use classify::{classify, FragmentTag};
pub use normalize::normalize;
pub use parse::parse;

/// Variable index; `x3` is `3`. Indices are positive.
pub type Var = u32;

/// Formula syntax tree. `And`/`Or` are n-ary; parsed formulas always carry
/// at least two children there.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Rel(String, Vec<Var>),
    Eq(Var, Var),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Exists(Var, Box<Formula>),
    Forall(Var, Box<Formula>),
}

impl Formula {
    pub fn rel(name: impl Into<String>, vars: impl Into<Vec<Var>>) -> Formula {
        Formula::Rel(name.into(), vars.into())
    }

    pub fn eq(a: Var, b: Var) -> Formula {
        Formula::Eq(a, b)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    /// Empty conjunction is `True`, a single conjunct is returned as is.
    pub fn and(mut parts: Vec<Formula>) -> Formula {
        match parts.len() {
            0 => Formula::True,
            1 => parts.pop().expect("one element"),
            _ => Formula::And(parts),
        }
    }

    pub fn or(mut parts: Vec<Formula>) -> Formula {
        match parts.len() {
            0 => Formula::False,
            1 => parts.pop().expect("one element"),
            _ => Formula::Or(parts),
        }
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Or(vec![Formula::not(a), b])
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::And(vec![
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b, a),
        ])
    }

    pub fn exists(v: Var, f: Formula) -> Formula {
        Formula::Exists(v, Box::new(f))
    }

    pub fn forall(v: Var, f: Formula) -> Formula {
        Formula::Forall(v, Box::new(f))
    }

    /// Exists over several variables, outermost first.
    pub fn exists_all(vars: impl IntoIterator<Item = Var>, f: Formula) -> Formula {
        let vars: Vec<Var> = vars.into_iter().collect();
        vars.into_iter().rev().fold(f, |acc, v| Formula::exists(v, acc))
    }

    pub fn forall_all(vars: impl IntoIterator<Item = Var>, f: Formula) -> Formula {
        let vars: Vec<Var> = vars.into_iter().collect();
        vars.into_iter().rev().fold(f, |acc, v| Formula::forall(v, acc))
    }

    pub fn free_variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Rel(_, vars) => {
                out.extend(vars.iter().filter(|v| !bound.contains(v)));
            }
            Formula::Eq(a, b) => {
                out.extend([a, b].into_iter().filter(|v| !bound.contains(v)));
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => {
                for f in fs {
                    f.collect_free(bound, out);
                }
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                bound.push(*v);
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Largest free index, 0 for sentences.
    pub fn max_free(&self) -> usize {
        self.free_variables().last().map_or(0, |&v| v as usize)
    }

    /// Largest index occurring anywhere, bound or free.
    pub fn max_var(&self) -> Var {
        match self {
            Formula::True | Formula::False => 0,
            Formula::Rel(_, vars) => vars.iter().copied().max().unwrap_or(0),
            Formula::Eq(a, b) => *a.max(b),
            Formula::Not(f) => f.max_var(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::max_var).max().unwrap_or(0),
            Formula::Exists(v, f) | Formula::Forall(v, f) => (*v).max(f.max_var()),
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Rel(..) | Formula::Eq(..) => true,
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().all(Formula::is_quantifier_free),
            Formula::Exists(..) | Formula::Forall(..) => false,
        }
    }

    pub fn uses_equality(&self) -> bool {
        match self {
            Formula::Eq(..) => true,
            Formula::True | Formula::False | Formula::Rel(..) => false,
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => f.uses_equality(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().any(Formula::uses_equality),
        }
    }

    /// Relation symbols with the arities they are used at.
    pub fn symbols(&self) -> BTreeMap<String, BTreeSet<usize>> {
        let mut out = BTreeMap::new();
        self.visit_atoms(&mut |f| {
            if let Formula::Rel(name, vars) = f {
                out.entry(name.clone())
                    .or_insert_with(BTreeSet::new)
                    .insert(vars.len());
            }
        });
        out
    }

    fn visit_atoms(&self, visit: &mut impl FnMut(&Formula)) {
        match self {
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => f.visit_atoms(visit),
            Formula::And(fs) | Formula::Or(fs) => {
                for f in fs {
                    f.visit_atoms(visit);
                }
            }
            atom => visit(atom),
        }
    }

    /// Checks symbols and arities against `sig`.
    pub fn check_signature(&self, sig: &Signature) -> Result<()> {
        for (name, arities) in self.symbols() {
            let index = sig
                .index_of(&name)
                .ok_or_else(|| Error::UnknownSymbol(name.clone()))?;
            let expected = sig.arity(index);
            if let Some(&found) = arities.iter().find(|&&a| a != expected) {
                return Err(Error::ArityMismatch {
                    symbol: name,
                    expected,
                    found,
                });
            }
        }
        Ok(())
    }

    /// Quantifier nesting depth.
    pub fn depth(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Rel(..) | Formula::Eq(..) => 0,
            Formula::Not(f) => f.depth(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::depth).max().unwrap_or(0),
            Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.depth(),
        }
    }

    fn is_tight(&self) -> bool {
        matches!(
            self,
            Formula::True | Formula::False | Formula::Rel(..) | Formula::Eq(..) | Formula::Not(_)
        )
    }
}

fn write_var(f: &mut fmt::Formatter<'_>, v: Var) -> fmt::Result {
    write!(f, "x{v}")
}

fn write_wrapped(f: &mut fmt::Formatter<'_>, child: &Formula, bare: bool) -> fmt::Result {
    if bare {
        write!(f, "{child}")
    } else {
        write!(f, "({child})")
    }
}

/// Renders in the grammar accepted by [`parse`].
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Rel(name, vars) => {
                write!(f, "{name}(")?;
                for (i, &v) in vars.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write_var(f, v)?;
                }
                write!(f, ")")
            }
            Formula::Eq(a, b) => write!(f, "x{a}=x{b}"),
            Formula::Not(g) => {
                write!(f, "!")?;
                write_wrapped(f, g, g.is_tight())
            }
            Formula::And(fs) if fs.is_empty() => write!(f, "true"),
            Formula::Or(fs) if fs.is_empty() => write!(f, "false"),
            Formula::And(fs) => {
                for (i, g) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " & ")?;
                    }
                    write_wrapped(f, g, g.is_tight())?;
                }
                Ok(())
            }
            Formula::Or(fs) => {
                for (i, g) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " | ")?;
                    }
                    let bare = g.is_tight() || matches!(g, Formula::And(c) if c.len() > 1);
                    write_wrapped(f, g, bare)?;
                }
                Ok(())
            }
            Formula::Exists(v, g) => write!(f, "exists x{v}. {g}"),
            Formula::Forall(v, g) => write!(f, "forall x{v}. {g}"),
        }
    }
}
