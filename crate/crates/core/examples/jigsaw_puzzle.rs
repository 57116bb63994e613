// Reveals an 8-bit message one piece at a time under two hypothesis
// classes and reports when the message becomes predictable.

use std::error::Error;

use ctxdom::classical::{is_bit_domain, BitDomainSpec, HypothesisClass, PuzzleState, Trajectory};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    println!(
        "{{0,1}} exclusive is a bit: {}",
        is_bit_domain(&BitDomainSpec::new([0, 1], true))
    );
    println!(
        "{{0,1,2}} exclusive is a bit: {}",
        is_bit_domain(&BitDomainSpec::new([0, 1, 2], true))
    );

    let message = [0u8, 1, 0, 1, 0, 1, 0, 1];
    let reveals: Vec<(usize, u8)> = message.iter().copied().enumerate().collect();
    let confidence = 0.99;

    for (name, class) in [
        ("full", HypothesisClass::Full),
        ("period <= 2", HypothesisClass::Periodic { max_period: 2 }),
    ] {
        let t = Trajectory::from_reveals(PuzzleState::new(8, &class)?, &reveals, true)?;
        println!("\nclass {name}:");
        for (k, s) in t.states().iter().enumerate() {
            let guess = s.predict_message(confidence)?;
            println!(
                "  state {k}: {} consistent, {:.3} bits left, prediction {}",
                s.consistent().count(),
                s.entropy()?,
                guess.map(|m| m.to_string()).unwrap_or_else(|| "-".into())
            );
        }
        println!(
            "  threshold at {confidence}: {:?}",
            t.determinism_threshold(confidence)?
        );
    }

    let mutating = Trajectory::from_reveals(
        PuzzleState::new(8, &HypothesisClass::Periodic { max_period: 2 })?,
        &reveals,
        false,
    )?;
    println!(
        "\nmutating message threshold: {:?}",
        mutating.determinism_threshold(confidence)?
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("puzzle example failed");
}
