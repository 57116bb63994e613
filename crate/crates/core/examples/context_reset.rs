// Measuring a, then an orthogonal b, then c = a again: the third result no
// longer remembers the first.

use std::error::Error;

use ctxdom::quantum::{context_overlap, reset_demonstration, reset_demonstration_with, SpinAxis};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let z = SpinAxis::z();
    for deg in [0.0, 30.0, 60.0, 90.0, 120.0, 180.0] {
        let m = SpinAxis::in_xz_plane(f64::to_radians(deg))?;
        println!("overlap(z, {deg:>5}°) = {:.6}", context_overlap(&z, &m));
    }

    let r = reset_demonstration();
    println!("\nθ_ab = θ_bc = 90°, a = c: {}", r.a_equals_c);
    println!("  P(third | first +)   = {:?}", r.third_given_first_plus);
    println!("  overlap(a, c) by axes = {:.3}", r.overlap_a_c);
    println!("  overlap along chain   = {:.3}", r.overlap_along_path);

    for (ab, bc) in [(0.0, 0.0), (90.0, 60.0)] {
        let r = reset_demonstration_with(ab, bc)?;
        println!(
            "\nθ_ab = {ab}°, θ_bc = {bc}°: P(third | +) = {:?}, P(third | +, -) = {:?}",
            r.third_given_first_plus, r.third_given_first_plus_second_minus
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("reset example failed");
}
