// Pairwise distance tables for a family of structures, with tail maxima
// as a finite view of the Cauchy property.
//
// ```bash
// cargo run --release --example convergence_report
// ```

use structlim::generate::{generate, GeneratorSpec};
use structlim::lifts::LiftParams;
use structlim::metrics::ChainCovering;
use structlim::report::{converge_report, ConvergeParams};

pub fn run_example() -> structlim::Result<()> {
    let family = ["cycle:6", "cycle:8", "cycle:10", "cycle:12"]
        .iter()
        .map(|spec| {
            let spec: GeneratorSpec = spec.parse()?;
            Ok((spec.to_string(), generate(&spec)?))
        })
        .collect::<structlim::Result<Vec<_>>>()?;

    let params = ConvergeParams {
        n_max: 8,
        chain: ChainCovering::default(),
        lift_levels: vec![LiftParams::exact(1, 1)],
    };
    let report = converge_report(&family, &params)?;
    let json = report.to_json();
    println!("{}", serde_json::to_string_pretty(&json).expect("serializable"));
    Ok(())
}

fn main() -> structlim::Result<()> {
    run_example()
}
