// Builds a small domain, queries its order structure, and checks the
// domain-theoretic predicates by enumeration.

use std::error::Error;

use ctxdom::order::{validate_poset, MeasurementMap, PosetSpec};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // ⊥ below two incomparable partial states, both below a complete one
    let diamond = validate_poset(PosetSpec::new(
        ["bottom", "p", "q", "top"],
        [("bottom", "p"), ("bottom", "q"), ("p", "top"), ("q", "top")],
    ))?;

    println!("upset(p)      = {:?}", diamond.upset("p")?);
    println!("downset(p)    = {:?}", diamond.downset("p")?);
    println!("maximal       = {:?}", diamond.maximal_elements());
    println!("{{p,q}} directed = {}", diamond.is_directed(["p", "q"])?);
    println!("sup {{p,q}}     = {:?}", diamond.supremum(["p", "q"])?);
    println!("dcpo          = {}", diamond.is_dcpo()?);

    println!("\nway-below table (rows ≼ columns):");
    let table = diamond.way_below_table()?;
    for (i, row) in table.iter().enumerate() {
        let cells: Vec<&str> = row.iter().map(|&b| if b { "1" } else { "." }).collect();
        println!("  {:>6} {}", diamond.name(i), cells.join(" "));
    }
    let report = diamond.approximation_transitivity_check()?;
    println!(
        "approximation transitivity: pass={} over {} triples",
        report.pass, report.triples_checked
    );

    // two exclusive outcomes above an undetermined state
    let outcomes = validate_poset(PosetSpec::new(
        ["bottom", "v0", "v1"],
        [("bottom", "v0"), ("bottom", "v1")],
    ))?;
    let m = MeasurementMap::new(outcomes, [("bottom", 1.0), ("v0", 0.0), ("v1", 0.0)])?;
    println!("\nv0 ⊥ v1: {}", m.orthogonal("v0", "v1")?);
    println!("bottom ⊥ bottom: {}", m.orthogonal("bottom", "bottom")?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("poset example failed");
}
