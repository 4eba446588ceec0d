//! Basic interpretations of width 1.

use std::collections::BTreeMap;

use super::Interpretation;
use crate::error::{Error, Result};
use crate::logic::{Formula, Var};
use crate::structure::Signature;

fn atom(name: &str, arity: usize) -> Formula {
    Formula::Rel(name.to_string(), (1..=arity as Var).collect())
}

fn basic(source: &Signature, target: Signature, rho: BTreeMap<String, Formula>) -> Result<Interpretation> {
    Interpretation::new(
        source.clone(),
        target,
        1,
        Formula::True,
        Formula::Eq(1, 2),
        rho,
        true,
    )
}

pub fn identity(sig: &Signature) -> Interpretation {
    let rho = sig.symbols().map(|(n, k)| (n.clone(), atom(&n, k))).collect();
    basic(sig, sig.clone(), rho).expect("identity is well formed")
}

/// Each target symbol is read off the source symbol `map[target]`.
pub fn project(source: &Signature, target: &Signature, map: &BTreeMap<String, String>) -> Result<Interpretation> {
    let mut rho = BTreeMap::new();
    for (name, arity) in target.symbols() {
        let from = map.get(&name).map_or(name.as_str(), String::as_str);
        let index = source
            .index_of(from)
            .ok_or_else(|| Error::UnknownSymbol(from.to_string()))?;
        if source.arity(index) != arity {
            return Err(Error::ArityMismatch {
                symbol: from.to_string(),
                expected: arity,
                found: source.arity(index),
            });
        }
        let f = atom(from, arity);
        rho.insert(name, f);
    }
    basic(source, target.clone(), rho)
}

/// Drops the listed symbols. Marks may only be dropped as a suffix, so the
/// remaining ones are still `M1..Mc`.
pub fn forget(source: &Signature, drop: &[&str]) -> Result<Interpretation> {
    for name in drop {
        if source.index_of(name).is_none() {
            return Err(Error::UnknownSymbol(name.to_string()));
        }
    }
    let base: Vec<(String, usize)> = source
        .base()
        .iter()
        .filter(|s| !drop.contains(&s.name.as_str()))
        .map(|s| (s.name.clone(), s.arity))
        .collect();
    let kept = (1..=source.marks())
        .take_while(|k| !drop.contains(&format!("M{k}").as_str()))
        .count();
    if (kept + 1..=source.marks()).any(|k| !drop.contains(&format!("M{k}").as_str())) {
        return Err(Error::InvalidParameter(
            "only a suffix M_k..M_c of the marks can be forgotten".into(),
        ));
    }
    project(source, &Signature::new(base, kept)?, &BTreeMap::new())
}

/// Renames base symbols by `map` (old name to new name).
pub fn rename(source: &Signature, map: &BTreeMap<String, String>) -> Result<Interpretation> {
    let mut back = BTreeMap::new();
    for (old, new) in map {
        let index = source
            .index_of(old)
            .ok_or_else(|| Error::UnknownSymbol(old.clone()))?;
        if index >= source.base().len() {
            return Err(Error::InvalidParameter(format!("mark `{old}` cannot be renamed")));
        }
        back.insert(new.clone(), old.clone());
    }
    let base: Vec<(String, usize)> = source
        .base()
        .iter()
        .map(|s| (map.get(&s.name).unwrap_or(&s.name).clone(), s.arity))
        .collect();
    let target = Signature::new(base, source.marks())?;
    project(source, &target, &back)
}

/// Forgets every mark.
pub fn shadow(sig: &Signature) -> Interpretation {
    let base = sig.base().iter().map(|s| (s.name.clone(), s.arity));
    let target = Signature::new(base, 0).expect("base of a valid signature");
    project(sig, &target, &BTreeMap::new()).expect("shadow is well formed")
}

/// Cantor pairing shifted to positive arguments: a bijection from pairs of
/// positive integers onto positive integers.
pub fn cantor_beta(c: usize, i: usize) -> usize {
    assert!(c >= 1 && i >= 1, "cantor_beta takes positive arguments");
    let (a, b) = (c - 1, i - 1);
    (a + b) * (a + b + 1) / 2 + b + 1
}

/// `Z_c`: target mark `M_i` is source mark `M_{beta(c,i)}`; other marks are
/// forgotten.
pub fn mark_reindex(source: &Signature, c: usize) -> Result<Interpretation> {
    if c == 0 {
        return Err(Error::InvalidParameter("mark_reindex needs c >= 1".into()));
    }
    let marks = (1..).take_while(|&i| cantor_beta(c, i) <= source.marks()).count();
    let base = source.base().iter().map(|s| (s.name.clone(), s.arity));
    let target = Signature::new(base, marks)?;
    let map = (1..=marks)
        .map(|i| (format!("M{i}"), format!("M{}", cantor_beta(c, i))))
        .collect();
    project(source, &target, &map)
}

/// Replaces the binary `symbol` by its irreflexive complement.
pub fn complement(sig: &Signature, symbol: &str) -> Result<Interpretation> {
    let index = sig
        .index_of(symbol)
        .ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))?;
    if sig.arity(index) != 2 {
        return Err(Error::ArityMismatch {
            symbol: symbol.to_string(),
            expected: 2,
            found: sig.arity(index),
        });
    }
    let mut rho: BTreeMap<String, Formula> = sig.symbols().map(|(n, k)| (n.clone(), atom(&n, k))).collect();
    rho.insert(
        symbol.to_string(),
        Formula::and(vec![
            Formula::not(atom(symbol, 2)),
            Formula::not(Formula::Eq(1, 2)),
        ]),
    );
    basic(sig, sig.clone(), rho)
}

fn pairs(args: &str) -> Result<BTreeMap<String, String>> {
    args.split(',')
        .filter(|a| !a.is_empty())
        .map(|a| {
            a.split_once('=')
                .map(|(l, r)| (l.trim().to_string(), r.trim().to_string()))
                .ok_or_else(|| Error::InvalidParameter(format!("expected name=name, got `{a}`")))
        })
        .collect()
}

/// Builds a builtin from a spec string over `source`:
/// `identity`, `shadow`, `forget:A,B`, `rename:E=F`, `mark_reindex:C`,
/// `complement:E`.
pub fn builtin(spec: &str, source: &Signature) -> Result<Interpretation> {
    let (kind, args) = spec.split_once(':').unwrap_or((spec, ""));
    match kind.trim() {
        "identity" => Ok(identity(source)),
        "shadow" => Ok(shadow(source)),
        "forget" => {
            let drop: Vec<&str> = args.split(',').map(str::trim).filter(|a| !a.is_empty()).collect();
            forget(source, &drop)
        }
        "rename" => rename(source, &pairs(args)?),
        "mark_reindex" => {
            let c = args
                .trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad mark_reindex parameter `{args}`")))?;
            mark_reindex(source, c)
        }
        "complement" => complement(source, args.trim()),
        other => Err(Error::InvalidParameter(format!("unknown builtin interpretation `{other}`"))),
    }
}
