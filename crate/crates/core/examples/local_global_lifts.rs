// Monadic lifts: every way of coloring the vertices with `c` marks gives
// a ball-type distribution, and two structures are compared through the
// Hausdorff distance between their sets of such distributions.
//
// ```bash
// cargo run --release --example local_global_lifts
// ```

use structlim::generate::{cycle, path};
use structlim::lifts::{epsilon_net, lift_hausdorff, lift_stat_set, LiftParams};
use structlim::metrics::{ball_distribution, tv_distance};
use structlim::rational;

pub fn run_example() -> structlim::Result<()> {
    let exact = LiftParams::exact(1, 1);

    for n in [8, 10, 12] {
        let d = lift_hausdorff(&cycle(n), &cycle(n + 4), &exact)?;
        println!(
            "C{n} vs C{}: {} ({} and {} distinct statistics)",
            n + 4,
            d.value,
            d.left_stats,
            d.right_stats
        );
    }

    // Lifting can only separate more than the bare ball statistics do.
    let (a, b) = (cycle(8), path(8));
    let lifted = lift_hausdorff(&a, &b, &exact)?.value;
    let plain = tv_distance(&ball_distribution(&a, 1, 0)?, &ball_distribution(&b, 1, 0)?)?;
    println!("C8 vs P8: lifted {lifted} >= plain {plain}");
    assert!(lifted >= plain);

    // Sampling gives an estimate that always includes the constant lifts.
    let sampled = LiftParams::sampled(1, 1, 200, 7);
    let est = lift_hausdorff(&cycle(20), &cycle(24), &sampled)?;
    println!("C20 vs C24 sampled: {} (heuristic: {})", est.value, est.heuristic);

    let stats = lift_stat_set(&cycle(10), &exact)?;
    let (net, _) = epsilon_net(&cycle(10), &exact, &rational::ratio(1, 4))?;
    println!("C10: {} statistics, a 1/4-net needs {}", stats.len(), net.len());
    Ok(())
}

fn main() -> structlim::Result<()> {
    run_example()
}
