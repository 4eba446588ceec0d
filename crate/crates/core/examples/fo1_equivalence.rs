// Structures made of the same components in the same proportions cannot
// be told apart by local formulas with one free variable.
//
// ```bash
// cargo run --example fo1_equivalence
// ```

use structlim::analysis::{fo1local_equiv, Fo1Verdict};
use structlim::eval::{pairing, Arity};
use structlim::generate::{cycle, path};
use structlim::logic::parse;

pub fn run_example() -> structlim::Result<()> {
    let base = cycle(3).disjoint_union(&path(2))?;
    let a = base.copies(2);
    let b = base.copies(3);

    match fo1local_equiv(&a, &b)? {
        Fo1Verdict::Equivalent { common, a_copies, b_copies } => println!(
            "equivalent: {a_copies} and {b_copies} copies of a {}-element structure",
            common.domain_size()
        ),
        Fo1Verdict::Distinct { radius } => println!("distinct at radius {radius}"),
    }

    let on_triangle = parse("exists x2. exists x3. E(x1,x2) & E(x2,x3) & E(x3,x1)")?;
    assert_eq!(pairing(&a, &on_triangle, Arity::Auto)?, pairing(&b, &on_triangle, Arity::Auto)?);

    // Changing the proportions is visible at some radius.
    let c = cycle(3).copies(2).disjoint_union(&path(2))?;
    if let Fo1Verdict::Distinct { radius } = fo1local_equiv(&a, &c)? {
        println!("proportions differ: separated at radius {radius}");
    }
    if let Fo1Verdict::Distinct { radius } = fo1local_equiv(&cycle(6), &cycle(3).copies(2))? {
        println!("C6 vs 2 C3: separated at radius {radius}");
    }
    Ok(())
}

fn main() -> structlim::Result<()> {
    run_example()
}
