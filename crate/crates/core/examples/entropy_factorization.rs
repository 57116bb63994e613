// Von Neumann entropy equals the Shannon entropy of the eigenvalue spectrum,
// checked on random density matrices.

use std::error::Error;

use ctxdom::info::shannon_entropy;
use ctxdom::quantum::{classical_projection, von_neumann_entropy, DensityMatrix, C64};
use nalgebra::Matrix2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        let mut g = || C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let a = Matrix2::new(g(), g(), g(), g());
        let m = a * a.adjoint();
        let rho = DensityMatrix::new(m / m.trace())?;
        let sigma = von_neumann_entropy(&rho);
        let spectrum = classical_projection(&rho)?;
        let mu_q = shannon_entropy(&spectrum);
        worst = worst.max((sigma - mu_q).abs());
        if i < 4 {
            println!(
                "σ(ρ) = {sigma:.9}  μ(q(ρ)) = {mu_q:.9}  spectrum {:?}",
                spectrum.probs()
            );
        }
    }
    println!("largest |σ − μ∘q| over 10 samples: {worst:.2e}");
    println!(
        "I/2: {} bit",
        von_neumann_entropy(&DensityMatrix::maximally_mixed())
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("factorization example failed");
}
