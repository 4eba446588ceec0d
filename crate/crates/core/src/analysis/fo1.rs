use std::collections::BTreeMap;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::metrics::{ball_distribution, tv_distance};
use crate::structure::{canonical_form, CanonicalForm, Structure};

/// Outcome of the component-count comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fo1Verdict {
    /// `a ≅ a_copies · common` and `b ≅ b_copies · common`.
    Equivalent {
        common: Structure,
        a_copies: usize,
        b_copies: usize,
    },
    /// Not proportional; `radius` is the least `r` at which the radius-`r`
    /// ball distributions differ.
    Distinct { radius: usize },
}

impl Fo1Verdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Fo1Verdict::Equivalent { .. })
    }
}

struct Components {
    counts: BTreeMap<CanonicalForm, (usize, Structure)>,
    diameter: usize,
}

fn components(s: &Structure) -> Result<Components> {
    let mut counts = BTreeMap::new();
    let mut diameter = 0;
    for comp in s.connected_components() {
        let part = s.induced(&comp);
        diameter = diameter.max(part.diameter());
        let form = canonical_form(&part)?;
        counts.entry(form).or_insert((0, part)).0 += 1;
    }
    Ok(Components { counts, diameter })
}

fn gcd_of(values: impl Iterator<Item = usize>) -> usize {
    values.fold(0, |g, v| g.gcd(&v))
}

/// Decides whether `a` and `b` are disjoint unions of copies of one common
/// structure, by comparing component isomorphism-type counts.
pub fn fo1local_equiv(a: &Structure, b: &Structure) -> Result<Fo1Verdict> {
    if a.signature() != b.signature() {
        return Err(Error::SignatureMismatch(format!("{} vs {}", a.signature(), b.signature())));
    }
    if a.domain_size() == 0 || b.domain_size() == 0 {
        return Err(Error::EmptyDomain);
    }
    let ca = components(a)?;
    let cb = components(b)?;
    let ga = gcd_of(ca.counts.values().map(|(k, _)| *k));
    let gb = gcd_of(cb.counts.values().map(|(k, _)| *k));
    let same_support = ca.counts.keys().eq(cb.counts.keys());
    let proportional = same_support
        && ca
            .counts
            .values()
            .zip(cb.counts.values())
            .all(|((x, _), (y, _))| x / ga == y / gb);
    if proportional {
        let mut common: Option<Structure> = None;
        for (k, part) in ca.counts.values() {
            let block = part.copies(k / ga);
            common = Some(match common {
                None => block,
                Some(c) => c.disjoint_union(&block)?,
            });
        }
        return Ok(Fo1Verdict::Equivalent {
            common: common.expect("non-empty domain has a component"),
            a_copies: ga,
            b_copies: gb,
        });
    }
    let marks = a.signature().marks();
    let bound = ca.diameter.max(cb.diameter) + 1;
    for r in 0..=bound {
        let da = ball_distribution(a, r, marks)?;
        let db = ball_distribution(b, r, marks)?;
        if tv_distance(&da, &db)? > crate::rational::zero() {
            return Ok(Fo1Verdict::Distinct { radius: r });
        }
    }
    unreachable!("balls of radius above every component diameter separate non-proportional structures")
}
