//! Finite relational structures over a declared signature.

mod canon;
mod gaifman;
mod json;
mod vertex_set;

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::rational::{ratio, Rational};

pub use canon::{
    canonical_form, canonical_form_with_limit, canonical_labeling, CanonicalForm, Labeling,
    DEFAULT_CANON_LIMIT,
};
pub use json::{SignatureJson, StructureJson};
pub use vertex_set::VertexSet;

/// One base relation symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

/// Base symbols followed by `marks` unary symbols named `M1`, `M2`, ...
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    base: Vec<Symbol>,
    marks: usize,
}

const KEYWORDS: [&str; 4] = ["true", "false", "exists", "forall"];

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub(crate) fn is_variable_name(name: &str) -> bool {
    name.len() > 1 && name.starts_with('x') && name[1..].bytes().all(|b| b.is_ascii_digit())
}

fn mark_number(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('M')?;
    if digits.is_empty() || digits.starts_with('0') || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

impl Signature {
    pub fn new<S: Into<String>>(
        base: impl IntoIterator<Item = (S, usize)>,
        marks: usize,
    ) -> Result<Self> {
        let base: Vec<Symbol> = base
            .into_iter()
            .map(|(name, arity)| Symbol {
                name: name.into(),
                arity,
            })
            .collect();
        let sig = Signature { base, marks };
        sig.validate()?;
        Ok(sig)
    }

    /// The signature of graphs: one binary symbol `E`.
    pub fn graph() -> Self {
        Signature {
            base: vec![Symbol {
                name: "E".into(),
                arity: 2,
            }],
            marks: 0,
        }
    }

    fn validate(&self) -> Result<()> {
        let mut seen = HashMap::new();
        for sym in &self.base {
            if !is_identifier(&sym.name)
                || is_variable_name(&sym.name)
                || KEYWORDS.contains(&sym.name.as_str())
            {
                return Err(Error::InvalidSignature(format!(
                    "`{}` is not a valid relation name",
                    sym.name
                )));
            }
            if sym.arity == 0 {
                return Err(Error::InvalidSignature(format!(
                    "symbol `{}` has arity 0",
                    sym.name
                )));
            }
            if let Some(k) = mark_number(&sym.name) {
                if k <= self.marks {
                    return Err(Error::InvalidSignature(format!(
                        "base symbol `{}` collides with a mark",
                        sym.name
                    )));
                }
            }
            if seen.insert(sym.name.as_str(), ()).is_some() {
                return Err(Error::InvalidSignature(format!(
                    "duplicate symbol `{}`",
                    sym.name
                )));
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &[Symbol] {
        &self.base
    }

    pub fn marks(&self) -> usize {
        self.marks
    }

    /// Total number of symbols, marks included.
    pub fn len(&self) -> usize {
        self.base.len() + self.marks
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn name(&self, index: usize) -> String {
        if index < self.base.len() {
            self.base[index].name.clone()
        } else {
            format!("M{}", index - self.base.len() + 1)
        }
    }

    pub fn arity(&self, index: usize) -> usize {
        if index < self.base.len() {
            self.base[index].arity
        } else {
            1
        }
    }

    /// Position of the `k`-th mark (1-based) in the full symbol list.
    pub fn mark_index(&self, k: usize) -> Option<usize> {
        (1..=self.marks)
            .contains(&k)
            .then(|| self.base.len() + k - 1)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        if let Some(i) = self.base.iter().position(|s| s.name == name) {
            return Some(i);
        }
        mark_number(name).and_then(|k| self.mark_index(k))
    }

    pub fn symbols(&self) -> impl Iterator<Item = (String, usize)> + '_ {
        (0..self.len()).map(|i| (self.name(i), self.arity(i)))
    }

    pub fn with_marks(&self, marks: usize) -> Signature {
        Signature {
            base: self.base.clone(),
            marks,
        }
    }

    pub fn max_arity(&self) -> usize {
        (0..self.len()).map(|i| self.arity(i)).max().unwrap_or(0)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.symbols().map(|(n, a)| format!("{n}/{a}")).collect();
        write!(f, "{{{}}}", names.join(", "))
    }
}

/// Tuple set of one symbol. Tuples are kept sorted and unique.
#[derive(Debug, Clone)]
pub struct Relation {
    arity: usize,
    tuples: Vec<Vec<usize>>,
    dense: Option<Vec<u64>>,
}

const DENSE_LIMIT: usize = 1 << 20;

impl Relation {
    fn new(arity: usize, domain: usize, mut tuples: Vec<Vec<usize>>) -> Self {
        tuples.sort_unstable();
        tuples.dedup();
        let cells = domain.checked_pow(arity as u32).filter(|&c| c <= DENSE_LIMIT);
        let dense = cells.map(|cells| {
            let mut bits = vec![0u64; cells.div_ceil(64).max(1)];
            for t in &tuples {
                let i = dense_index(t, domain);
                bits[i / 64] |= 1 << (i % 64);
            }
            bits
        });
        Relation {
            arity,
            tuples,
            dense,
        }
    }

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
}

fn dense_index(tuple: &[usize], domain: usize) -> usize {
    tuple.iter().fold(0, |acc, &v| acc * domain + v)
}

/// A finite structure with domain `0..n`. Immutable once built.
#[derive(Clone)]
pub struct Structure {
    signature: Signature,
    domain: usize,
    relations: Vec<Relation>,
    gaifman: OnceLock<Vec<Vec<usize>>>,
}

impl fmt::Debug for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_struct("Structure");
        d.field("signature", &self.signature.to_string())
            .field("domain", &self.domain);
        for (i, rel) in self.relations.iter().enumerate() {
            d.field(&self.signature.name(i), &rel.tuples);
        }
        d.finish()
    }
}

impl PartialEq for Structure {
    fn eq(&self, other: &Self) -> bool {
        self.signature == other.signature
            && self.domain == other.domain
            && self
                .relations
                .iter()
                .zip(&other.relations)
                .all(|(a, b)| a.tuples == b.tuples)
    }
}

impl Eq for Structure {}

/// Accumulates tuples with set semantics; validation happens per tuple.
pub struct StructureBuilder {
    signature: Signature,
    domain: usize,
    tuples: Vec<Vec<Vec<usize>>>,
}

impl StructureBuilder {
    pub fn add(&mut self, symbol: &str, tuple: &[usize]) -> Result<&mut Self> {
        let index = self
            .signature
            .index_of(symbol)
            .ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))?;
        self.add_at(index, tuple)
    }

    pub fn add_at(&mut self, index: usize, tuple: &[usize]) -> Result<&mut Self> {
        let arity = self.signature.arity(index);
        if tuple.len() != arity {
            return Err(Error::InvalidStructure(format!(
                "tuple {:?} of `{}` has width {}, expected {}",
                tuple,
                self.signature.name(index),
                tuple.len(),
                arity
            )));
        }
        if let Some(&v) = tuple.iter().find(|&&v| v >= self.domain) {
            return Err(Error::InvalidStructure(format!(
                "tuple {:?} of `{}` mentions element {} outside domain of size {}",
                tuple,
                self.signature.name(index),
                v,
                self.domain
            )));
        }
        self.tuples[index].push(tuple.to_vec());
        Ok(self)
    }

    pub fn build(self) -> Structure {
        let domain = self.domain;
        let relations = self
            .tuples
            .into_iter()
            .enumerate()
            .map(|(i, t)| Relation::new(self.signature.arity(i), domain, t))
            .collect();
        Structure {
            signature: self.signature,
            domain,
            relations,
            gaifman: OnceLock::new(),
        }
    }
}

impl Structure {
    pub fn builder(signature: Signature, domain: usize) -> StructureBuilder {
        let tuples = vec![Vec::new(); signature.len()];
        StructureBuilder {
            signature,
            domain,
            tuples,
        }
    }

    /// Undirected graph: each edge `{u, v}` is stored as both `E(u,v)` and
    /// `E(v,u)`.
    pub fn graph(domain: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut b = Structure::builder(Signature::graph(), domain);
        for &(u, v) in edges {
            b.add_at(0, &[u, v])?;
            b.add_at(0, &[v, u])?;
        }
        Ok(b.build())
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn domain_size(&self) -> usize {
        self.domain
    }

    pub fn relation(&self, index: usize) -> &Relation {
        &self.relations[index]
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn tuples_of(&self, symbol: &str) -> Option<&[Vec<usize>]> {
        self.signature
            .index_of(symbol)
            .map(|i| self.relations[i].tuples())
    }

    pub fn holds(&self, index: usize, tuple: &[usize]) -> bool {
        let rel = &self.relations[index];
        match &rel.dense {
            Some(bits) => {
                let i = dense_index(tuple, self.domain);
                bits[i / 64] >> (i % 64) & 1 == 1
            }
            None => rel
                .tuples
                .binary_search_by(|t| t.as_slice().cmp(tuple))
                .is_ok(),
        }
    }

    pub fn tuple_count(&self) -> usize {
        self.relations.iter().map(Relation::len).sum()
    }

    /// Members of the `k`-th mark (1-based).
    pub fn mark_set(&self, k: usize) -> Result<VertexSet> {
        let index = self
            .signature
            .mark_index(k)
            .ok_or_else(|| Error::UnknownSymbol(format!("M{k}")))?;
        Ok(VertexSet::from_iter(
            self.domain,
            self.relations[index].tuples.iter().map(|t| t[0]),
        ))
    }

    /// Substructure induced on `order`, relabeled so that `order[i]` becomes
    /// element `i`.
    pub fn induced(&self, order: &[usize]) -> Structure {
        let mut position = vec![usize::MAX; self.domain];
        for (i, &v) in order.iter().enumerate() {
            position[v] = i;
        }
        let relations = self
            .relations
            .iter()
            .map(|rel| {
                let tuples = rel
                    .tuples
                    .iter()
                    .filter(|t| t.iter().all(|&v| position[v] != usize::MAX))
                    .map(|t| t.iter().map(|&v| position[v]).collect())
                    .collect();
                Relation::new(rel.arity, order.len(), tuples)
            })
            .collect();
        Structure {
            signature: self.signature.clone(),
            domain: order.len(),
            relations,
            gaifman: OnceLock::new(),
        }
    }

    pub fn induced_on(&self, set: &VertexSet) -> Structure {
        let order: Vec<usize> = set.iter().collect();
        self.induced(&order)
    }

    /// Relabels element `v` as `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Structure {
        assert_eq!(perm.len(), self.domain, "permutation length");
        let relations = self
            .relations
            .iter()
            .map(|rel| {
                let tuples = rel
                    .tuples
                    .iter()
                    .map(|t| t.iter().map(|&v| perm[v]).collect())
                    .collect();
                Relation::new(rel.arity, self.domain, tuples)
            })
            .collect();
        Structure {
            signature: self.signature.clone(),
            domain: self.domain,
            relations,
            gaifman: OnceLock::new(),
        }
    }

    /// Keeps the base symbols and the first `c` marks; missing marks are
    /// added empty.
    pub fn with_marks(&self, c: usize) -> Structure {
        let base = self.signature.base.len();
        let signature = self.signature.with_marks(c);
        let relations = (0..signature.len())
            .map(|i| {
                if i < self.relations.len() {
                    self.relations[i].clone()
                } else {
                    Relation::new(1, self.domain, Vec::new())
                }
            })
            .take(base + c)
            .collect();
        Structure {
            signature,
            domain: self.domain,
            relations,
            gaifman: OnceLock::new(),
        }
    }

    /// Replaces all marks by the given sets (`marks[i]` becomes `M{i+1}`).
    pub fn with_mark_sets(&self, marks: &[VertexSet]) -> Structure {
        let base = self.signature.base.len();
        let mut relations: Vec<Relation> = self.relations[..base].to_vec();
        for set in marks {
            relations.push(Relation::new(
                1,
                self.domain,
                set.iter().map(|v| vec![v]).collect(),
            ));
        }
        Structure {
            signature: self.signature.with_marks(marks.len()),
            domain: self.domain,
            relations,
            gaifman: OnceLock::new(),
        }
    }

    /// Disjoint union; both operands must share a signature.
    pub fn disjoint_union(&self, other: &Structure) -> Result<Structure> {
        if self.signature != other.signature {
            return Err(Error::SignatureMismatch(format!(
                "{} vs {}",
                self.signature, other.signature
            )));
        }
        let shift = self.domain;
        let domain = self.domain + other.domain;
        let relations = self
            .relations
            .iter()
            .zip(&other.relations)
            .map(|(a, b)| {
                let mut tuples = a.tuples.clone();
                tuples.extend(
                    b.tuples
                        .iter()
                        .map(|t| t.iter().map(|&v| v + shift).collect::<Vec<_>>()),
                );
                Relation::new(a.arity, domain, tuples)
            })
            .collect();
        Ok(Structure {
            signature: self.signature.clone(),
            domain,
            relations,
            gaifman: OnceLock::new(),
        })
    }

    /// `copies` disjoint copies of `self`.
    pub fn copies(&self, copies: usize) -> Structure {
        let mut out = self.induced(&[]);
        for _ in 0..copies {
            out = out.disjoint_union(self).expect("same signature");
        }
        out
    }

    /// `|X| / |A|`.
    pub fn measure(&self, set: &VertexSet) -> Result<Rational> {
        if self.domain == 0 {
            return Err(Error::EmptyDomain);
        }
        Ok(ratio(set.len() as u64, self.domain as u64))
    }

    pub fn all(&self) -> VertexSet {
        VertexSet::full(self.domain)
    }

    pub fn empty_set(&self) -> VertexSet {
        VertexSet::new(self.domain)
    }
}
