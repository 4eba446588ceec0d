//! Structure families for experiments and tests.
//!
//! Spec strings: `path:N`, `cycle:N`, `complete:N`, `star:N` (one center and
//! `N-1` leaves), `grid:W,H`, `edgeless:N`, `random_regular:N,D,SEED`;
//! `K*spec` repeats a spec `K` times and `a+b` takes disjoint unions.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::structure::Structure;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorSpec {
    Path(usize),
    Cycle(usize),
    Complete(usize),
    Star(usize),
    Grid(usize, usize),
    Edgeless(usize),
    RandomRegular { n: usize, d: usize, seed: u64 },
    Copies(usize, Box<GeneratorSpec>),
    DisjointUnion(Vec<GeneratorSpec>),
}

fn bad(message: String) -> Error {
    Error::InvalidParameter(message)
}

fn numbers(family: &str, args: &str, count: usize) -> Result<Vec<u64>> {
    let values: Vec<u64> = args
        .split(',')
        .map(|a| a.trim().parse::<u64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| bad(format!("`{family}` takes {count} non-negative integers, got `{args}`")))?;
    if values.len() != count {
        return Err(bad(format!("`{family}` takes {count} parameters, got {}", values.len())));
    }
    Ok(values)
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.contains('+') {
            return Ok(GeneratorSpec::DisjointUnion(
                text.split('+').map(str::parse).collect::<Result<_>>()?,
            ));
        }
        if let Some((k, rest)) = text.split_once('*') {
            let k = k.trim().parse().map_err(|_| bad(format!("bad repetition count in `{text}`")))?;
            return Ok(GeneratorSpec::Copies(k, Box::new(rest.parse()?)));
        }
        let (family, args) = text
            .split_once(':')
            .ok_or_else(|| bad(format!("expected family:parameters, got `{text}`")))?;
        let one = || numbers(family, args, 1).map(|v| v[0] as usize);
        Ok(match family.trim() {
            "path" => GeneratorSpec::Path(one()?),
            "cycle" => GeneratorSpec::Cycle(one()?),
            "complete" => GeneratorSpec::Complete(one()?),
            "star" => GeneratorSpec::Star(one()?),
            "edgeless" => GeneratorSpec::Edgeless(one()?),
            "grid" => {
                let v = numbers(family, args, 2)?;
                GeneratorSpec::Grid(v[0] as usize, v[1] as usize)
            }
            "random_regular" => {
                let v = numbers(family, args, 3)?;
                GeneratorSpec::RandomRegular {
                    n: v[0] as usize,
                    d: v[1] as usize,
                    seed: v[2],
                }
            }
            other => return Err(bad(format!("unknown family `{other}`"))),
        })
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSpec::Path(n) => write!(f, "path:{n}"),
            GeneratorSpec::Cycle(n) => write!(f, "cycle:{n}"),
            GeneratorSpec::Complete(n) => write!(f, "complete:{n}"),
            GeneratorSpec::Star(n) => write!(f, "star:{n}"),
            GeneratorSpec::Grid(w, h) => write!(f, "grid:{w},{h}"),
            GeneratorSpec::Edgeless(n) => write!(f, "edgeless:{n}"),
            GeneratorSpec::RandomRegular { n, d, seed } => write!(f, "random_regular:{n},{d},{seed}"),
            GeneratorSpec::Copies(k, inner) => write!(f, "{k}*{inner}"),
            GeneratorSpec::DisjointUnion(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, "+")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
        }
    }
}

pub fn path(n: usize) -> Structure {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Structure::graph(n, &edges).expect("valid edges")
}

/// `n >= 3`.
pub fn cycle(n: usize) -> Structure {
    assert!(n >= 3, "cycles need at least 3 vertices");
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Structure::graph(n, &edges).expect("valid edges")
}

pub fn complete(n: usize) -> Structure {
    let edges: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    Structure::graph(n, &edges).expect("valid edges")
}

/// Center 0 joined to `n - 1` leaves.
pub fn star(n: usize) -> Structure {
    let edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
    Structure::graph(n, &edges).expect("valid edges")
}

/// Element `(x, y)` is `y * w + x`.
pub fn grid(w: usize, h: usize) -> Structure {
    let mut edges = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let v = y * w + x;
            if x + 1 < w {
                edges.push((v, v + 1));
            }
            if y + 1 < h {
                edges.push((v, v + w));
            }
        }
    }
    Structure::graph(w * h, &edges).expect("valid edges")
}

pub fn edgeless(n: usize) -> Structure {
    Structure::graph(n, &[]).expect("no edges")
}

/// Uniform pairing model, retried until the result is simple.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Structure> {
    if (n * d) % 2 == 1 {
        return Err(bad(format!("random_regular needs n*d even, got {n}*{d}")));
    }
    if d > 0 && d >= n {
        return Err(bad(format!("degree {d} impossible on {n} vertices")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    for _ in 0..10_000 {
        points.shuffle(&mut rng);
        let mut edges: Vec<(usize, usize)> = points
            .chunks(2)
            .map(|p| (p[0].min(p[1]), p[0].max(p[1])))
            .collect();
        if edges.iter().any(|(a, b)| a == b) {
            continue;
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        return Structure::graph(n, &edges);
    }
    Err(Error::BudgetExceeded(format!(
        "no simple {d}-regular graph on {n} vertices after 10000 pairings"
    )))
}

pub fn generate(spec: &GeneratorSpec) -> Result<Structure> {
    Ok(match spec {
        GeneratorSpec::Path(n) => path(*n),
        GeneratorSpec::Cycle(n) if *n < 3 => return Err(bad(format!("cycle needs at least 3 vertices, got {n}"))),
        GeneratorSpec::Cycle(n) => cycle(*n),
        GeneratorSpec::Complete(n) => complete(*n),
        GeneratorSpec::Star(n) => star(*n),
        GeneratorSpec::Grid(w, h) => grid(*w, *h),
        GeneratorSpec::Edgeless(n) => edgeless(*n),
        GeneratorSpec::RandomRegular { n, d, seed } => random_regular(*n, *d, *seed)?,
        GeneratorSpec::Copies(k, inner) => generate(inner)?.copies(*k),
        GeneratorSpec::DisjointUnion(parts) => {
            let mut out = generate(&parts[0])?;
            for p in &parts[1..] {
                out = out.disjoint_union(&generate(p)?)?;
            }
            out
        }
    })
}
