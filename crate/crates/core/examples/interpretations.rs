// Interpretations: a formula over the target signature is pulled back to
// one over the source, and a source structure is pushed forward to a
// target structure. Both directions agree on every tuple.
//
// ```bash
// cargo run --example interpretations
// ```

use std::collections::BTreeMap;

use structlim::eval::{pairing, Arity, CompiledFormula};
use structlim::generate::{cycle, path};
use structlim::interp::{builtin, complement, compose, Interpretation};
use structlim::logic::parse;
use structlim::{Formula, Signature};

/// Distance-at-most-two graph: the square of a graph.
fn square() -> structlim::Result<Interpretation> {
    let rho = BTreeMap::from([(
        "E".to_string(),
        parse("!x1=x2 & (E(x1,x2) | exists x3. (E(x1,x3) & E(x3,x2)))")?,
    )]);
    Interpretation::new(
        Signature::graph(),
        Signature::graph(),
        1,
        Formula::True,
        parse("x1=x2")?,
        rho,
        true,
    )
}

/// Ordered pairs of adjacent vertices, adjacent when they share an end.
fn line_digraph() -> structlim::Result<Interpretation> {
    let rho = BTreeMap::from([("E".to_string(), parse("x2=x3")?)]);
    Interpretation::new(
        Signature::graph(),
        Signature::graph(),
        2,
        parse("E(x1,x2)")?,
        parse("x1=x3 & x2=x4")?,
        rho,
        false,
    )
}

pub fn run_example() -> structlim::Result<()> {
    let c8 = cycle(8);
    let sq = square()?;
    let c8_sq = sq.apply(&c8)?;
    println!("C8 squared has {} directed edges", c8_sq.tuples_of("E").map_or(0, |t| t.len()));

    // Pull back a question about the image to the source.
    let phi = parse("exists x2. exists x3. E(x1,x2) & E(x2,x3) & E(x3,x1)")?;
    let pulled = sq.transform_formula(&phi)?;
    println!("pulled back: {pulled}");
    let image_side = CompiledFormula::new(c8_sq.signature(), &phi)?;
    let source_side = CompiledFormula::new(c8.signature(), &pulled)?;
    for v in 0..c8.domain_size() {
        assert_eq!(image_side.holds_tuple(&c8_sq, &[v]), source_side.holds_tuple(&c8, &[v]));
    }

    // Width two with a domain formula: one element per directed edge.
    let line = line_digraph()?;
    let p4 = path(4);
    let (l, classes) = line.apply_with_classes(&p4)?;
    println!("line digraph of P4: {} elements", l.domain_size());
    for (i, class) in classes.iter().enumerate() {
        println!("  element {i} <- {class:?}");
    }

    // Composition applies the first interpretation, then the second.
    let comp = compose(&complement(&Signature::graph(), "E")?, &sq)?;
    let direct = sq.apply(&complement(&Signature::graph(), "E")?.apply(&c8)?)?;
    assert_eq!(comp.apply(&c8)?, direct);
    println!(
        "edge density of the square of the complement of C8: {}",
        pairing(&direct, &parse("E(x1,x2)")?, Arity::Auto)?
    );

    // The built-in shadow forgets marks.
    let marked = c8.with_marks(1);
    let shadow = builtin("shadow", marked.signature())?;
    assert_eq!(shadow.apply(&marked)?, c8);
    Ok(())
}

fn main() -> structlim::Result<()> {
    run_example()
}
