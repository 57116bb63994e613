//! Finite information domains and spin-½ contextuality experiments.
//!
//! - [`order`]: finite posets, directed sets, suprema, the way-below relation
//!   and orthogonality of elements under a content map.
//! - [`info`]: probability vectors, Shannon entropy, and the monotonicity
//!   laws a content map must satisfy to be a measurement.
//! - [`classical`]: the bit domain, a bit-revealing puzzle and its
//!   determinism threshold.
//! - [`quantum`]: spin contexts, Born probabilities, collapse, seeded
//!   measurement chains with an exact oracle, context overlap, and von
//!   Neumann entropy.
//! - [`experiments`]: record-entropy growth under fixed and basis-changing
//!   measurement policies.
//! - [`cli`]: the `ctxdom` command-line front end.

pub mod classical;
pub mod cli;
pub mod experiments;
pub mod info;
pub mod order;
pub mod quantum;

/// Formats a number with 6 significant digits, `%g` style: plain decimal for
/// moderate magnitudes, exponent form otherwise, trailing zeros trimmed.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let s = format!("{x:.5e}");
        let (mantissa, exponent) = s.split_once('e').expect("exponent form");
        format!("{}e{}", trim_zeros(mantissa.to_string()), exponent)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
