// Expansion and independence diagnostics on small graphs.
//
// ```bash
// cargo run --release --example expansion
// ```

use structlim::analysis::{
    expanding_check, h_out, hall_ratio, ExpanderParams, HoutMode, DEFAULT_NODE_BUDGET,
};
use structlim::generate::{complete, cycle, grid, path, random_regular};
use structlim::rational::ratio;

pub fn run_example() -> structlim::Result<()> {
    let params = ExpanderParams::new(1, ratio(1, 4), ratio(3, 10))?;
    for (name, s) in [("K5", complete(5)), ("P10", path(10)), ("C10", cycle(10))] {
        let v = expanding_check(&s, &params)?;
        match v.witness {
            None => println!("{name}: expanding"),
            Some(x) => println!("{name}: not expanding, witness {:?}", x.iter().collect::<Vec<_>>()),
        }
    }

    for (name, s) in [
        ("K4", complete(4)),
        ("P10", path(10)),
        ("C10", cycle(10)),
        ("grid 3x3", grid(3, 3)),
        ("random 3-regular on 12", random_regular(12, 3, 1)?),
    ] {
        let h = h_out(&s, &HoutMode::Exact)?;
        let hall = hall_ratio(&s, DEFAULT_NODE_BUDGET)?;
        let h = h.value.map_or("-".to_string(), |v| v.to_string());
        println!("{name:<24} h_out {h:>5}   hall ratio {hall}");
    }

    // Larger graphs: seeded local search gives an upper bound.
    let big = random_regular(40, 3, 5)?;
    let h = h_out(&big, &HoutMode::LocalSearch { restarts: 32, seed: 5 })?;
    println!("random 3-regular on 40: h_out <= {}", h.value.expect("nonempty"));
    Ok(())
}

fn main() -> structlim::Result<()> {
    run_example()
}
