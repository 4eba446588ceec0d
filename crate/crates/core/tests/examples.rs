//! Every example must run to completion.

macro_rules! example {
    ($name:ident, $file:literal) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }

        #[test]
        fn $name() {
            $name::run_example().expect("example runs");
        }
    };
}

example!(stone_pairings, "stone_pairings.rs");
example!(interpretations, "interpretations.rs");
example!(ball_statistics, "ball_statistics.rs");
example!(local_global_lifts, "local_global_lifts.rs");
example!(expansion, "expansion.rs");
example!(fo1_equivalence, "fo1_equivalence.rs");
example!(clusters, "clusters.rs");
example!(convergence_report, "convergence_report.rs");
