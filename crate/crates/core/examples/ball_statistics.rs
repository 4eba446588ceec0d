// Ball-type distributions, total variation, and the chain-covering
// distance between cycles of different lengths.
//
// ```bash
// cargo run --example ball_statistics
// ```

use structlim::generate::{cycle, path};
use structlim::logic::{ball_formula, parse};
use structlim::metrics::{
    ball_distribution, dist_bounds, formula_stat_max, rooted_ball, tv_distance, ChainCovering,
};
use structlim::rational;

pub fn run_example() -> structlim::Result<()> {
    let p6 = path(6);
    let d = ball_distribution(&p6, 1, 0)?;
    println!("radius-1 ball types of P6:");
    for (t, w) in d.weights() {
        println!("  {} vertices, weight {w}", t.ball().domain_size());
    }

    // Ball types can be written down as formulas; the largest pairing gap
    // over them is the total variation distance.
    let c6 = cycle(6);
    let dc = ball_distribution(&c6, 1, 0)?;
    let formulas = d
        .weights()
        .keys()
        .chain(dc.weights().keys())
        .map(|t| ball_formula(t.ball(), 0, 1))
        .collect::<structlim::Result<Vec<_>>>()?;
    let tv = tv_distance(&d, &dc)?;
    assert_eq!(formula_stat_max(&p6, &c6, &formulas)?, tv);
    println!("tv(P6, C6) at r=1: {tv}");
    println!("centre ball formula: {}", ball_formula(&rooted_ball(&p6, 2, 1, 0), 0, 1)?);

    // Long cycles look alike until the radius reaches half the shorter one.
    let chain = ChainCovering::default();
    for (a, b) in [(3, 4), (8, 12), (8, 16)] {
        let bounds = dist_bounds(&cycle(a), &cycle(b), &chain, 10)?;
        let levels: Vec<String> = bounds.levels.iter().map(rational::format).collect();
        println!(
            "dist(C{a}, C{b}) = {}  (levels {}, crossing at {:?})",
            rational::format(&bounds.lower),
            levels.join(" "),
            bounds.crossing_level
        );
    }

    // Beyond the canonicalization limit the chain is cut short and only
    // bounds are reported.
    let bounds = dist_bounds(&cycle(12), &cycle(16), &chain, 10)?;
    println!(
        "dist(C12, C16) in [{}, {}], truncated: {}",
        bounds.lower, bounds.upper, bounds.truncated
    );
    let wide = ChainCovering::BallChain { canon_limit: 16 };
    println!("with limit 16: {}", dist_bounds(&cycle(12), &cycle(16), &wide, 10)?.lower);

    // Any increasing family of formula lists works as a chain.
    let explicit = ChainCovering::explicit(vec![
        vec![parse("E(x1,x2)")?],
        vec![parse("E(x1,x2)")?, parse("E(x1,x2) & E(x2,x3) & !x1=x3")?],
    ])?;
    println!("explicit-chain distance P6 vs C6: {}", dist_bounds(&p6, &c6, &explicit, 4)?.lower);
    Ok(())
}

fn main() -> structlim::Result<()> {
    run_example()
}
