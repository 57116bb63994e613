use ctxdom::experiments::{entropy_growth, second_law_report, Policy, Trend};

fn policies() -> Vec<Policy> {
    vec![
        Policy::fixed_z(),
        Policy::alternating_deg(90.0).unwrap(),
        Policy::alternating_deg(30.0).unwrap(),
        Policy::RandomAxis,
    ]
}

#[test]
fn curves_do_not_depend_on_thread_count() {
    for policy in policies() {
        let parallel = entropy_growth(&policy, 5, 3000, 11).unwrap();
        let serial = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| entropy_growth(&policy, 5, 3000, 11).unwrap());
        assert_eq!(parallel, serial, "{policy}");
    }
}

#[test]
fn random_axis_increments_are_at_most_one_bit() {
    let curve = entropy_growth(&Policy::RandomAxis, 6, 10_000, 3).unwrap();
    assert!(curve.is_non_decreasing());
    for inc in curve.increments() {
        // a binary outcome adds at most one bit; allow a few standard errors below zero
        assert!((-0.01..=1.0).contains(&inc), "{inc}");
    }
    assert!(curve.steps.iter().all(|p| p.exact_entropy_bits.is_none()));
}

#[test]
fn every_policy_curve_is_non_decreasing() {
    for policy in policies() {
        let curve = entropy_growth(&policy, 6, 5000, 21).unwrap();
        assert!(curve.is_non_decreasing(), "{policy}");
    }
}

#[test]
fn verdicts_separate_fixed_from_basis_changing() {
    let curves: Vec<_> = policies()
        .iter()
        .map(|p| entropy_growth(p, 6, 10_000, 5).unwrap())
        .collect();
    let report = second_law_report(&curves).unwrap();
    assert!(report.all_hold);
    let observed: Vec<Trend> = report.arms.iter().map(|a| a.observed).collect();
    assert_eq!(
        observed,
        [
            Trend::Flat,
            Trend::Increasing,
            Trend::Increasing,
            Trend::Increasing
        ]
    );
}
