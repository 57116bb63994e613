// Three spin measurements along z, x, z: Born probabilities, a seeded Monte
// Carlo run, and the exact distribution it should match.

use std::error::Error;

use ctxdom::quantum::{
    born_probabilities, chain_distribution, run_chain, run_ensemble, sequence_label, Context,
    Outcome, PureState, SpinAxis,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let b = SpinAxis::z();
    for deg in [0.0, 60.0, 90.0] {
        let c = Context::new(SpinAxis::in_xz_plane(f64::to_radians(deg))?);
        let p = born_probabilities(&PureState::eigenstate(b, Outcome::Minus), &c);
        println!(
            "|b-> measured at {deg:>4}°: P(+) = {:.4}, P(-) = {:.4}",
            p.probs()[0],
            p.probs()[1]
        );
    }

    let contexts = [SpinAxis::z(), SpinAxis::x(), SpinAxis::z()].map(Context::new);
    let initial = PureState::z_plus();
    let one = run_chain(&initial, &contexts, 42)?;
    println!("\nseed 42: {}", sequence_label(&one.outcomes()));

    let trials = 20_000;
    let records = run_ensemble(&initial, &contexts, trials, 42)?;
    let exact = chain_distribution(&initial, &contexts)?;
    println!("\nsequence  exact   empirical");
    for (seq, p) in exact.iter().filter(|(_, p)| *p > 0.0) {
        let hits = records.iter().filter(|r| r.outcomes() == seq).count();
        println!(
            "{:>8}  {p:.4}  {:.4}",
            sequence_label(&seq),
            hits as f64 / trials as f64
        );
    }
    println!("total variation: {:.4}", exact.total_variation(&records));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("chain example failed");
}
