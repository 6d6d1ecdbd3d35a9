#![allow(dead_code)]

use conedist::Instance64;
use proptest::prelude::*;

/// Entry in `[0, 10)`, zero about a quarter of the time.
pub fn entry() -> impl Strategy<Value = f64> {
    prop_oneof![1 => Just(0.0), 3 => 0.0..10.0]
}

pub fn vector(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(entry(), n)
}

/// Instances with at least one generator reaching the target.
pub fn reachable_instance(max_n: usize, max_m: usize) -> impl Strategy<Value = Instance64> {
    (1..=max_n, 1..=max_m)
        .prop_flat_map(|(n, m)| (prop::collection::vec(vector(n), m), vector(n)))
        .prop_filter_map("unreachable or degenerate", |(gens, target)| {
            let inst = Instance64::new(gens, target).ok()?;
            conedist::check_reachability(&inst)
                .reachable
                .then_some(inst)
        })
}

pub fn lifted(instance: &Instance64) -> Vec<(usize, Vec<f64>)> {
    instance
        .generators()
        .iter()
        .enumerate()
        .filter_map(|(i, y)| {
            conedist::lift_to_slice(y, instance.target())
                .ok()
                .map(|l| (i, l.point))
        })
        .collect()
}
