// Diagnostics for a sequence of structures with a marked subset: how big
// the set and its neighborhoods are, and how concentrated it is.
//
// ```bash
// cargo run --example clusters
// ```

use structlim::analysis::cluster_report;
use structlim::generate::path;
use structlim::logic::parse;
use structlim::VertexSet;

pub fn run_example() -> structlim::Result<()> {
    // Mark the first quarter of ever longer paths.
    let seq: Vec<_> = [8, 16, 32, 64]
        .into_iter()
        .map(|n| {
            let p = path(n);
            let x = VertexSet::from_iter(n, 0..n / 4);
            p.with_mark_sets(&[x])
        })
        .collect();
    let formulas = vec![parse("exists x2. E(x1,x2)")?, parse("E(x1,x2)")?];
    let report = cluster_report(&seq, 1, 2, &formulas)?;

    for idx in &report.indices {
        let g: Vec<String> = idx
            .radii
            .iter()
            .map(|r| r.globularity.as_ref().map_or("-".into(), ToString::to_string))
            .collect();
        println!(
            "n={:<3} measure {}  boundary {}  globularity {}",
            idx.size,
            idx.measure,
            idx.boundary_measure,
            g.join(" ")
        );
    }
    for (series, trend) in &report.trends {
        println!("{series:<16} non-increasing {}", trend.non_increasing);
    }
    Ok(())
}

fn main() -> structlim::Result<()> {
    run_example()
}
