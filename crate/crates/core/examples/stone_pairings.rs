// Stone pairings: the probability that a formula holds under a uniformly
// random assignment of its free variables.
//
// ```bash
// cargo run --example stone_pairings
// ```

use structlim::eval::{pairing, sat_set, Arity, CompiledFormula};
use structlim::generate::{cycle, path};
use structlim::logic::{classify, normalize, parse};

pub fn run_example() -> structlim::Result<()> {
    let c6 = cycle(6);
    let p6 = path(6);

    for text in [
        "E(x1,x2)",
        "exists x2. E(x1,x2) & !exists x3. (E(x2,x3) & !x3=x1)",
        "forall x1. exists x2. E(x1,x2)",
        "E(x1,x2) & E(x2,x3) & !x1=x3",
    ] {
        let f = parse(text)?;
        let tags: Vec<String> = classify(&f).iter().map(ToString::to_string).collect();
        println!("{f}");
        println!("  normal form  {}", normalize(&f));
        println!("  fragments    {}", tags.join(", "));
        println!(
            "  C6: {:>6}   P6: {:>6}",
            pairing(&c6, &f, Arity::Auto)?.to_string(),
            pairing(&p6, &f, Arity::Auto)?.to_string()
        );
    }

    // Padding with unused coordinates leaves the pairing alone.
    let edge = parse("E(x1,x2)")?;
    assert_eq!(pairing(&p6, &edge, Arity::Auto)?, pairing(&p6, &edge, Arity::Fixed(4))?);

    // The endpoints of the path are the vertices of degree one.
    let leaf = parse("exists x2. E(x1,x2) & forall x3. (E(x1,x3) -> x3=x2)")?;
    let leaves = sat_set(&p6, &leaf, 1)?;
    println!("leaves of P6: {:?}", leaves.tuples());

    // Compile once when evaluating the same formula repeatedly.
    let triangle = CompiledFormula::new(c6.signature(), &parse("E(x1,x2) & E(x2,x3) & E(x3,x1)")?)?;
    for n in 3..=6 {
        println!("triangle count in C{n}: {}", triangle.count(&cycle(n), 3)?);
    }
    Ok(())
}

fn main() -> structlim::Result<()> {
    run_example()
}
