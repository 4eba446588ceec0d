//! Model checking and Stone pairings `|phi(A)| / |A|^p`.
//!
//! Formulas are compiled against a signature once. Runs of like quantifiers
//! are evaluated as a small constraint search: each conjunct under `exists`
//! (disjunct under `forall`) is tested as soon as the last quantified
//! variable it mentions is assigned.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::logic::{Formula, Var};
use crate::rational::Rational;
use crate::structure::{Signature, Structure};

/// Free variable index to domain element.
pub type Assignment = BTreeMap<Var, usize>;

const UNSET: usize = usize::MAX;

#[derive(Debug, Clone)]
enum Node {
    Const(bool),
    Rel(usize, Vec<usize>),
    Eq(usize, usize),
    Not(Box<Node>),
    And(Vec<Node>),
    Or(Vec<Node>),
    /// `exists` (or `forall`) over `vars`; `stages[i]` holds the parts that
    /// become decidable once `vars[..i]` are assigned.
    Search {
        exists: bool,
        vars: Vec<usize>,
        stages: Vec<Vec<Node>>,
    },
}

/// A formula resolved against a signature, ready for repeated evaluation.
#[derive(Debug, Clone)]
pub struct CompiledFormula {
    root: Node,
    free: Vec<Var>,
    width: usize,
}

fn compile(sig: &Signature, f: &Formula) -> Result<Node> {
    Ok(match f {
        Formula::True => Node::Const(true),
        Formula::False => Node::Const(false),
        Formula::Rel(name, vars) => {
            let index = sig
                .index_of(name)
                .ok_or_else(|| Error::UnknownSymbol(name.clone()))?;
            if sig.arity(index) != vars.len() {
                return Err(Error::ArityMismatch {
                    symbol: name.clone(),
                    expected: sig.arity(index),
                    found: vars.len(),
                });
            }
            Node::Rel(index, vars.iter().map(|&v| v as usize).collect())
        }
        Formula::Eq(a, b) => Node::Eq(*a as usize, *b as usize),
        Formula::Not(g) => Node::Not(Box::new(compile(sig, g)?)),
        Formula::And(fs) => Node::And(fs.iter().map(|g| compile(sig, g)).collect::<Result<_>>()?),
        Formula::Or(fs) => Node::Or(fs.iter().map(|g| compile(sig, g)).collect::<Result<_>>()?),
        Formula::Exists(..) | Formula::Forall(..) => compile_search(sig, f)?,
    })
}

fn compile_search(sig: &Signature, f: &Formula) -> Result<Node> {
    let exists = matches!(f, Formula::Exists(..));
    let mut vars: Vec<Var> = Vec::new();
    let mut body = f;
    loop {
        match (body, exists) {
            (Formula::Exists(v, g), true) | (Formula::Forall(v, g), false)
                if !vars.contains(v) =>
            {
                vars.push(*v);
                body = g;
            }
            _ => break,
        }
    }
    let parts: Vec<&Formula> = match (body, exists) {
        (Formula::And(fs), true) | (Formula::Or(fs), false) => fs.iter().collect(),
        (other, _) => vec![other],
    };
    let mut stages = vec![Vec::new(); vars.len() + 1];
    for part in parts {
        let free = part.free_variables();
        let stage = vars
            .iter()
            .rposition(|v| free.contains(v))
            .map_or(0, |i| i + 1);
        stages[stage].push(compile(sig, part)?);
    }
    Ok(Node::Search {
        exists,
        vars: vars.into_iter().map(|v| v as usize).collect(),
        stages,
    })
}

fn eval(node: &Node, s: &Structure, env: &mut [usize], buf: &mut Vec<usize>) -> bool {
    match node {
        Node::Const(b) => *b,
        Node::Rel(sym, vars) => {
            let start = buf.len();
            buf.extend(vars.iter().map(|&v| env[v]));
            let holds = s.holds(*sym, &buf[start..]);
            buf.truncate(start);
            holds
        }
        Node::Eq(a, b) => env[*a] == env[*b],
        Node::Not(g) => !eval(g, s, env, buf),
        Node::And(gs) => gs.iter().all(|g| eval(g, s, env, buf)),
        Node::Or(gs) => gs.iter().any(|g| eval(g, s, env, buf)),
        Node::Search {
            exists,
            vars,
            stages,
        } => {
            let want = *exists;
            if !stages[0].iter().all(|g| eval(g, s, env, buf) == want) {
                return !want;
            }
            let saved: Vec<usize> = vars.iter().map(|&v| env[v]).collect();
            let found = search(0, *exists, vars, stages, s, env, buf);
            for (&v, old) in vars.iter().zip(saved) {
                env[v] = old;
            }
            if want {
                found
            } else {
                !found
            }
        }
    }
}

/// Looks for values of `vars[depth..]` making every staged part evaluate to
/// `exists`.
fn search(
    depth: usize,
    exists: bool,
    vars: &[usize],
    stages: &[Vec<Node>],
    s: &Structure,
    env: &mut [usize],
    buf: &mut Vec<usize>,
) -> bool {
    if depth == vars.len() {
        return true;
    }
    for value in 0..s.domain_size() {
        env[vars[depth]] = value;
        if stages[depth + 1].iter().all(|g| eval(g, s, env, buf) == exists)
            && search(depth + 1, exists, vars, stages, s, env, buf)
        {
            return true;
        }
    }
    false
}

impl CompiledFormula {
    pub fn new(sig: &Signature, f: &Formula) -> Result<Self> {
        Ok(CompiledFormula {
            root: compile(sig, f)?,
            free: f.free_variables().into_iter().collect(),
            width: f.max_var() as usize + 1,
        })
    }

    pub fn free_variables(&self) -> &[Var] {
        &self.free
    }

    pub fn max_free(&self) -> usize {
        self.free.last().map_or(0, |&v| v as usize)
    }

    /// Evaluates with the free variables bound to `values`, in increasing
    /// variable order.
    pub fn holds(&self, s: &Structure, values: &[usize]) -> bool {
        let mut env = vec![UNSET; self.width];
        let mut buf = Vec::new();
        self.holds_in(s, values, &mut env, &mut buf)
    }

    /// Evaluates with `x_{i+1}` bound to `tuple[i]`; entries for variables
    /// that are not free are ignored.
    pub fn holds_tuple(&self, s: &Structure, tuple: &[usize]) -> bool {
        let values: Vec<usize> = self.free.iter().map(|&v| tuple[v as usize - 1]).collect();
        self.holds(s, &values)
    }

    fn holds_in(&self, s: &Structure, values: &[usize], env: &mut [usize], buf: &mut Vec<usize>) -> bool {
        for (&v, &x) in self.free.iter().zip(values) {
            env[v as usize] = x;
        }
        eval(&self.root, s, env, buf)
    }

    pub fn satisfies(&self, s: &Structure, a: &Assignment) -> Result<bool> {
        let mut values = Vec::with_capacity(self.free.len());
        for v in &self.free {
            let x = *a.get(v).ok_or(Error::UnassignedVariable(*v))?;
            if x >= s.domain_size() {
                return Err(Error::InvalidParameter(format!(
                    "x{v} assigned to {x}, outside a domain of size {}",
                    s.domain_size()
                )));
            }
            values.push(x);
        }
        Ok(self.holds(s, &values))
    }

    /// Satisfying assignments of the free variables, as value vectors in
    /// lexicographic order.
    fn free_solutions(&self, s: &Structure) -> Result<Vec<Vec<usize>>> {
        let n = s.domain_size();
        let k = self.free.len();
        let total = (n as u64)
            .checked_pow(k as u32)
            .filter(|&t| t <= 1 << 40)
            .ok_or_else(|| Error::BudgetExceeded(format!("{n}^{k} assignments")))?;
        let decode = move |mut code: u64| {
            let mut values = vec![0; k];
            for slot in values.iter_mut().rev() {
                *slot = (code % n as u64) as usize;
                code /= n as u64;
            }
            values
        };
        Ok((0..total)
            .into_par_iter()
            .map_init(
                || (vec![UNSET; self.width], Vec::new()),
                |(env, buf), code| {
                    let values = decode(code);
                    self.holds_in(s, &values, env, buf).then_some(values)
                },
            )
            .flatten()
            .collect())
    }

    fn check_width(&self, p: usize) -> Result<()> {
        if p < self.max_free() {
            return Err(Error::WidthTooSmall {
                p,
                required: self.max_free(),
            });
        }
        Ok(())
    }

    /// `|phi(A)|` at width `p`.
    pub fn count(&self, s: &Structure, p: usize) -> Result<BigUint> {
        self.check_width(p)?;
        let solutions = self.free_solutions(s)?.len();
        let padding = BigUint::from(s.domain_size()).pow((p - self.free.len()) as u32);
        Ok(BigUint::from(solutions) * padding)
    }

    pub fn sat_set(&self, s: &Structure, p: usize) -> Result<SatSet> {
        self.check_width(p)?;
        let n = s.domain_size();
        let solutions: HashSet<Vec<usize>> = self.free_solutions(s)?.into_iter().collect();
        let mut tuples = Vec::new();
        let total = n.checked_pow(p as u32).ok_or_else(|| {
            Error::BudgetExceeded(format!("{n}^{p} tuples"))
        })?;
        let mut tuple = vec![0; p];
        let mut projection = vec![0; self.free.len()];
        for _ in 0..total {
            for (slot, &v) in projection.iter_mut().zip(&self.free) {
                *slot = tuple[v as usize - 1];
            }
            if solutions.contains(&projection) {
                tuples.push(tuple.clone());
            }
            for slot in tuple.iter_mut().rev() {
                *slot += 1;
                if *slot < n {
                    break;
                }
                *slot = 0;
            }
        }
        Ok(SatSet { arity: p, tuples })
    }

    pub fn pairing(&self, s: &Structure, arity: Arity) -> Result<Rational> {
        let n = s.domain_size();
        if n == 0 {
            return Err(Error::EmptyDomain);
        }
        let p = arity.resolve(self.max_free());
        let count = self.count(s, p)?;
        let denom = BigUint::from(n).pow(p as u32);
        Ok(Rational::new(count.into(), denom.into()))
    }
}

/// Satisfying set `phi(A)` as sorted `p`-tuples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SatSet {
    arity: usize,
    tuples: Vec<Vec<usize>>,
}

impl SatSet {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, tuple: &[usize]) -> bool {
        self.tuples
            .binary_search_by(|t| t.as_slice().cmp(tuple))
            .is_ok()
    }
}

/// Width of the pairing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Arity {
    /// Largest free index, 0 for sentences.
    #[default]
    Auto,
    Fixed(usize),
}

impl Arity {
    fn resolve(self, max_free: usize) -> usize {
        match self {
            Arity::Auto => max_free,
            Arity::Fixed(p) => p,
        }
    }
}

pub fn satisfies(s: &Structure, f: &Formula, a: &Assignment) -> Result<bool> {
    CompiledFormula::new(s.signature(), f)?.satisfies(s, a)
}

pub fn sat_set(s: &Structure, f: &Formula, p: usize) -> Result<SatSet> {
    CompiledFormula::new(s.signature(), f)?.sat_set(s, p)
}

/// Stone pairing `<phi, A>`.
pub fn pairing(s: &Structure, f: &Formula, arity: Arity) -> Result<Rational> {
    if s.domain_size() == 0 {
        return Err(Error::EmptyDomain);
    }
    CompiledFormula::new(s.signature(), f)?.pairing(s, arity)
}
