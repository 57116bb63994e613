// Shannon entropy, success probability, the order on distributions, and the
// two laws that make a content map a measurement.

use std::error::Error;

use ctxdom::info::{
    bayesian_leq, is_monotone_measurement, reflects_max, shannon_entropy, success_probability,
    ProbVector,
};
use ctxdom::order::{validate_poset, MeasurementMap, PosetSpec};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for probs in [
        vec![1.0, 0.0],
        vec![0.5, 0.5],
        vec![0.8, 0.2],
        vec![0.125; 8],
    ] {
        let p = ProbVector::new(probs)?;
        println!(
            "{:?}: H = {:.6} bits, P_success = {}",
            p.probs(),
            shannon_entropy(&p),
            success_probability(&p)
        );
    }

    let uniform = ProbVector::new(vec![0.5, 0.5])?;
    let certain = ProbVector::new(vec![1.0, 0.0])?;
    println!("\n(0.5,0.5) ⊑ (1,0): {}", bayesian_leq(&uniform, &certain)?);
    println!("(1,0) ⊑ (0.5,0.5): {}", bayesian_leq(&certain, &uniform)?);

    // knowledge of a 2-bit message: content = bits still missing
    let d = validate_poset(PosetSpec::new(
        ["??", "0?", "1?", "00", "01", "10", "11"],
        [
            ("??", "0?"),
            ("??", "1?"),
            ("0?", "00"),
            ("0?", "01"),
            ("1?", "10"),
            ("1?", "11"),
        ],
    ))?;
    let content = [
        ("??", 2.0),
        ("0?", 1.0),
        ("1?", 1.0),
        ("00", 0.0),
        ("01", 0.0),
        ("10", 0.0),
        ("11", 0.0),
    ];
    let m = MeasurementMap::new(d.clone(), content)?;
    let r = is_monotone_measurement(&m);
    println!(
        "\nremaining-bits content: monotone={} max_reflecting={}",
        r.monotone,
        reflects_max(&m).max_reflecting
    );

    let inverted = MeasurementMap::new(d, content.map(|(k, v)| (k, 2.0 - v)))?;
    let r = is_monotone_measurement(&inverted);
    println!(
        "inverted content: monotone={} ({} violations)",
        r.monotone,
        r.violations.len()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("measurement example failed");
}
