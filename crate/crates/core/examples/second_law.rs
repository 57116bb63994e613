// Record entropy under a fixed basis, an alternating basis, and random axes.

use std::error::Error;

use ctxdom::experiments::{entropy_growth, second_law_report, Policy};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let policies = [
        Policy::fixed_z(),
        Policy::alternating_deg(90.0)?,
        Policy::alternating_deg(45.0)?,
        Policy::RandomAxis,
    ];
    let curves = policies
        .iter()
        .map(|p| entropy_growth(p, 6, 4_000, 7))
        .collect::<Result<Vec<_>, _>>()?;
    for c in &curves {
        println!("{}:", c.policy);
        print!("{}", c.to_csv());
    }
    let report = second_law_report(&curves)?;
    for arm in &report.arms {
        println!(
            "{:<20} observed {:<10} expected {:<10} mean increment {:.3}",
            arm.policy.to_string(),
            arm.observed.to_string(),
            arm.expected.to_string(),
            arm.mean_increment
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("growth example failed");
}
