use std::collections::BTreeSet;
use std::fmt;

use super::{decode_ball_formula, Formula};

/// Syntactic fragments a formula belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FragmentTag {
    QF,
    /// Quantifier-free without equality.
    QFMinus,
    /// First order with free variables among `x1..xp`; `FO(0)` for sentences.
    FO(u32),
    /// Boolean combination of ball formulas of radius at most `r` over marks
    /// `M1..Mc`.
    BallLocal { r: usize, c: usize },
}

impl fmt::Display for FragmentTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FragmentTag::QF => write!(f, "QF"),
            FragmentTag::QFMinus => write!(f, "QF_minus"),
            FragmentTag::FO(p) => write!(f, "FO_{p}"),
            FragmentTag::BallLocal { r, c } => write!(f, "BallLocal({r},{c})"),
        }
    }
}

fn ball_local(f: &Formula) -> Option<(usize, usize)> {
    if let Some((ball, r)) = decode_ball_formula(f) {
        return Some((r, ball.signature().marks()));
    }
    match f {
        Formula::Not(g) => ball_local(g),
        Formula::And(fs) | Formula::Or(fs) if !fs.is_empty() => {
            fs.iter().try_fold((0, 0), |(r, c), g| {
                ball_local(g).map(|(r2, c2)| (r.max(r2), c.max(c2)))
            })
        }
        _ => None,
    }
}

pub fn classify(f: &Formula) -> BTreeSet<FragmentTag> {
    let mut tags = BTreeSet::new();
    if f.is_quantifier_free() {
        tags.insert(FragmentTag::QF);
        if !f.uses_equality() {
            tags.insert(FragmentTag::QFMinus);
        }
    }
    tags.insert(FragmentTag::FO(f.max_free() as u32));
    if let Some((r, c)) = ball_local(f) {
        tags.insert(FragmentTag::BallLocal { r, c });
    }
    tags
}
