#![allow(dead_code)]

use ctxdom::order::{validate_poset, FiniteDomain, PosetSpec};
use rand::seq::SliceRandom;
use rand::Rng;

/// Random poset on `n` elements: a random DAG over a hidden topological
/// order, with labels shuffled so the order is not visible in the names.
pub fn random_poset<R: Rng>(rng: &mut R, n: usize, density: f64) -> FiniteDomain {
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(rng);
    let name = |i: usize| format!("e{}", labels[i]);
    let mut covers = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(density) {
                covers.push((name(i), name(j)));
            }
        }
    }
    let mut elements: Vec<String> = (0..n).map(name).collect();
    elements.shuffle(rng);
    validate_poset(PosetSpec { elements, covers }).expect("DAG closure is a partial order")
}

/// Poset axioms by triple enumeration over the public `leq` query.
pub fn poset_axioms_hold(d: &FiniteDomain) -> bool {
    let names = d.elements();
    names.iter().all(|x| d.leq(x, x).unwrap())
        && names.iter().all(|x| {
            names.iter().all(|y| {
                let (xy, yx) = (d.leq(x, y).unwrap(), d.leq(y, x).unwrap());
                (!(xy && yx) || x == y)
                    && names
                        .iter()
                        .all(|z| !(xy && d.leq(y, z).unwrap()) || d.leq(x, z).unwrap())
            })
        })
}
