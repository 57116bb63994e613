//! Acceptance suite. Each criterion prints one `[PASS]`/`[FAIL]` line; the
//! process exits non-zero if any criterion fails.

mod common;

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use ctxdom::classical::{HypothesisClass, PuzzleState, Trajectory};
use ctxdom::experiments::{entropy_growth, Policy};
use ctxdom::info::shannon_entropy;
use ctxdom::quantum::{
    born_probabilities, chain_distribution, classical_projection, context_overlap,
    reset_demonstration, run_ensemble, von_neumann_entropy, Context, DensityMatrix, Outcome,
    PureState, SpinAxis, C64,
};
use nalgebra::Matrix2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check, Option<Duration>);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn within_time(elapsed: Duration, limit: Option<Duration>) -> Result<(), String> {
    match limit {
        Some(l) if elapsed > l => Err(format!(
            "took {:.2}s, limit {:.0}s",
            elapsed.as_secs_f64(),
            l.as_secs_f64()
        )),
        _ => Ok(()),
    }
}

fn frequencies(records: &[ctxdom::quantum::OutcomeRecord], step: usize) -> [f64; 2] {
    let minus = records
        .iter()
        .filter(|r| r.steps[step].outcome == Outcome::Minus)
        .count();
    let n = records.len() as f64;
    [(n - minus as f64) / n, minus as f64 / n]
}

fn born_law() -> Check {
    // |b−⟩ with b = x, measured along c = z
    let b = SpinAxis::x();
    let c = Context::new(SpinAxis::z());
    let initial = PureState::eigenstate(b, Outcome::Minus);
    let exact = born_probabilities(&initial, &c);
    ensure(
        (exact.probs()[0] - 0.5).abs() < 1e-12 && (exact.probs()[1] - 0.5).abs() < 1e-12,
        format!("exact {:?}", exact.probs()),
    )?;
    let records = run_ensemble(&initial, &[c], 100_000, 1).map_err(err)?;
    let f = frequencies(&records, 0);
    ensure((f[0] - 0.5).abs() <= 0.01, format!("empirical {f:?}"))?;
    Ok(format!(
        "exact (0.5, 0.5), empirical ({:.4}, {:.4}) at 1e5",
        f[0], f[1]
    ))
}

fn confirmation() -> Check {
    let b = SpinAxis::from_degrees(37.0, 110.0).map_err(err)?;
    let p = born_probabilities(&PureState::eigenstate(b, Outcome::Minus), &Context::new(b));
    ensure(
        (p.probs()[1] - 1.0).abs() <= 1e-12,
        format!("P(−) = {}", p.probs()[1]),
    )?;
    Ok(format!("P(−) = {}", p.probs()[1]))
}

fn reset() -> Check {
    let report = reset_demonstration();
    ensure(report.a_equals_c, "a and c differ")?;
    let [p, m] = report.third_given_first_plus;
    ensure(
        (p - 0.5).abs() <= 1e-12 && (m - 0.5).abs() <= 1e-12,
        format!("exact ({p}, {m})"),
    )?;
    let contexts = [SpinAxis::z(), SpinAxis::x(), SpinAxis::z()].map(Context::new);
    let records = run_ensemble(&PureState::z_plus(), &contexts, 100_000, 2).map_err(err)?;
    let given: Vec<_> = records
        .into_iter()
        .filter(|r| r.steps[0].outcome == Outcome::Plus)
        .collect();
    ensure(!given.is_empty(), "no first-outcome + trials")?;
    let f = frequencies(&given, 2);
    ensure((f[0] - 0.5).abs() <= 0.01, format!("empirical {f:?}"))?;
    Ok(format!(
        "exact (0.5, 0.5), empirical ({:.4}, {:.4}) over {} trials",
        f[0],
        f[1],
        given.len()
    ))
}

fn overlap_endpoints() -> Check {
    let z = SpinAxis::z();
    let at90 = context_overlap(&z, &SpinAxis::x());
    let at0 = context_overlap(&z, &z);
    ensure(at90.abs() <= 1e-12, format!("overlap(90°) = {at90}"))?;
    ensure((at0 - 1.0).abs() <= 1e-12, format!("overlap(0°) = {at0}"))?;
    Ok(format!("overlap(90°) = {at90}, overlap(0°) = {at0}"))
}

fn factorization() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let mut g = || C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let a = Matrix2::new(g(), g(), g(), g());
        let m = a * a.adjoint();
        let m = m / m.trace();
        let rho = DensityMatrix::new(m).map_err(err)?;
        let sigma = von_neumann_entropy(&rho);
        let factored = shannon_entropy(&classical_projection(&rho).map_err(err)?);
        // closed-form 2x2 Hermitian eigenvalues as a third route
        let (a, d, b) = (m[(0, 0)].re, m[(1, 1)].re, m[(0, 1)].norm());
        let disc = ((a - d).powi(2) + 4.0 * b * b).sqrt();
        let oracle: f64 = [(1.0 + disc) / 2.0, (1.0 - disc) / 2.0]
            .iter()
            .filter(|&&l| l > 0.0)
            .map(|&l| -l * l.log2())
            .sum();
        worst = worst
            .max((sigma - factored).abs())
            .max((sigma - oracle).abs());
    }
    ensure(worst <= 1e-9, format!("max deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:.1e} over 100 matrices"))
}

fn second_law() -> Check {
    let fixed = entropy_growth(&Policy::fixed_z(), 6, 10_000, 6).map_err(err)?;
    for p in &fixed.steps {
        ensure(
            p.empirical_entropy_bits == 0.0 && p.exact_entropy_bits == Some(0.0),
            format!("fixed step {}: {:?}", p.step, p),
        )?;
    }
    let alt =
        entropy_growth(&Policy::alternating_deg(90.0).map_err(err)?, 6, 10_000, 6).map_err(err)?;
    let mut worst = 0.0f64;
    for p in &alt.steps {
        let expected = (p.step - 1) as f64;
        let exact = p.exact_entropy_bits.ok_or("missing exact entropy")?;
        ensure(
            (exact - expected).abs() <= 1e-12,
            format!("exact step {}: {exact}", p.step),
        )?;
        worst = worst.max((p.empirical_entropy_bits - expected).abs());
    }
    ensure(
        worst <= 0.05,
        format!("alternating empirical deviation {worst}"),
    )?;
    Ok(format!(
        "fixed flat at 0; alternating exact k−1, empirical within {worst:.4} bits"
    ))
}

fn order_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let instances = 600;
    for i in 0..instances {
        let n = rng.gen_range(1..=10);
        let density = rng.gen_range(0.0..0.7);
        let d = common::random_poset(&mut rng, n, density);
        ensure(
            common::poset_axioms_hold(&d),
            format!("instance {i}: poset axioms"),
        )?;
        ensure(
            d.is_dcpo().map_err(err)?,
            format!("instance {i}: not a dcpo"),
        )?;
        let wb = d.way_below_table().map_err(err)?;
        for (x, row) in wb.iter().enumerate() {
            for (y, &w) in row.iter().enumerate() {
                ensure(
                    w == d.leq_at(x, y),
                    format!("instance {i}: way_below ≠ leq at ({x},{y})"),
                )?;
            }
        }
        let t = d.approximation_transitivity_check().map_err(err)?;
        ensure(
            t.pass,
            format!(
                "instance {i}: transitivity counterexamples {:?}",
                t.counterexamples
            ),
        )?;
    }
    Ok(format!("{instances} posets with 1..=10 elements"))
}

fn puzzle() -> Check {
    let message = [0u8, 1, 1, 0, 1, 0, 0, 1];
    let mut state = PuzzleState::new(8, &HypothesisClass::Full).map_err(err)?;
    for n in 0..=8 {
        // independent count of bit strings agreeing with the first n bits
        let oracle = (0u32..256)
            .filter(|s| (0..n).all(|i| ((s >> (7 - i)) & 1) as u8 == message[i]))
            .count();
        let h = state.entropy().map_err(err)?;
        ensure(
            (h - (oracle as f64).log2()).abs() <= 1e-12,
            format!("n={n}: entropy {h}, oracle count {oracle}"),
        )?;
        ensure(
            (h - (8 - n) as f64).abs() <= 1e-12,
            format!("n={n}: entropy {h}"),
        )?;
        if n < 8 {
            state = state.place_piece(n, message[n]).map_err(err)?;
        }
    }
    let periodic = HypothesisClass::Periodic { max_period: 2 };
    let reveals = [(0, 0u8), (1, 1), (2, 0), (3, 1)];
    let initial = PuzzleState::new(8, &periodic).map_err(err)?;
    let t = Trajectory::from_reveals(initial.clone(), &reveals, true).map_err(err)?;
    let threshold = t.determinism_threshold(0.99).map_err(err)?;
    ensure(
        threshold == Some(2),
        format!("static threshold {threshold:?}"),
    )?;
    let t = Trajectory::from_reveals(initial, &reveals, false).map_err(err)?;
    let dynamic = t.determinism_threshold(0.99).map_err(err)?;
    ensure(
        dynamic.is_none(),
        format!("non-static threshold {dynamic:?}"),
    )?;
    Ok(
        "entropy 8−n under full class, 0 at completion; threshold 2 (static), none (non-static)"
            .into(),
    )
}

fn oracle_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let random_axis = |rng: &mut ChaCha8Rng| {
        SpinAxis::new(
            rng.gen_range(-1.0f64..=1.0).acos(),
            rng.gen_range(0.0..std::f64::consts::TAU),
        )
    };
    let mut worst = 0.0f64;
    for chain in 0..20u64 {
        let len = rng.gen_range(1..=4);
        let contexts = (0..len)
            .map(|_| random_axis(&mut rng).map(Context::new))
            .collect::<Result<Vec<_>, _>>()
            .map_err(err)?;
        let initial = PureState::eigenstate(random_axis(&mut rng).map_err(err)?, Outcome::Plus);
        let exact = chain_distribution(&initial, &contexts).map_err(err)?;
        let records = run_ensemble(&initial, &contexts, 100_000, 1000 + chain).map_err(err)?;
        let tv = exact.total_variation(&records);
        ensure(
            tv <= 0.01,
            format!("chain {chain} (length {len}): total variation {tv}"),
        )?;
        worst = worst.max(tv);
    }
    Ok(format!("20 chains, max total variation {worst:.4}"))
}

fn cli_determinism() -> Check {
    let data = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/data");
    let runs: [(&str, &str, &[&str]); 6] = [
        ("chain", "zxz_chain.json", &[]),
        ("chain", "sixty_two_step.json", &["--format", "json"]),
        ("growth", "growth_random_axis.json", &["--trials", "2000"]),
        (
            "growth",
            "growth_alternating90.json",
            &["--format", "json", "--trials", "2000"],
        ),
        ("puzzle", "puzzle_full.json", &[]),
        ("poset", "outcome_domain.json", &[]),
    ];
    for (sub, file, extra) in runs {
        let path = data.join(file);
        let invoke = || {
            Command::new(env!("CARGO_BIN_EXE_ctxdom"))
                .arg(sub)
                .arg("--input")
                .arg(&path)
                .args(extra)
                .output()
                .map_err(err)
        };
        let (a, b) = (invoke()?, invoke()?);
        ensure(
            a.status.success(),
            format!("{sub} {file}: exit {:?}", a.status.code()),
        )?;
        ensure(
            a.stdout == b.stdout && a.stderr == b.stderr,
            format!("{sub} {file}: outputs differ"),
        )?;
    }
    Ok(format!("{} invocation pairs byte-identical", runs.len()))
}

fn main() -> ExitCode {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria: [Criterion; 10] = [
        ("AC1 born law at 90°", born_law, secs(5)),
        ("AC2 confirmation at 0°", confirmation, None),
        ("AC3 reset with a = c", reset, None),
        ("AC4 overlap endpoints", overlap_endpoints, None),
        ("AC5 entropy factorization", factorization, secs(1)),
        ("AC6 entropy growth by policy", second_law, secs(30)),
        ("AC7 order-theory suite", order_suite, secs(60)),
        ("AC8 puzzle entropy and threshold", puzzle, None),
        (
            "AC9 sampler vs exact distribution",
            oracle_equivalence,
            None,
        ),
        ("AC10 CLI determinism", cli_determinism, None),
    ];
    let mut failed = 0;
    for (name, check, limit) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|detail| within_time(elapsed, limit).map(|_| detail));
        match outcome {
            Ok(detail) => println!("[PASS] {name}: {detail} ({:.2}s)", elapsed.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {name}: {why} ({:.2}s)", elapsed.as_secs_f64());
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
