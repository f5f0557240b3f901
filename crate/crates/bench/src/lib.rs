//! Shared fixtures for the criterion benches.

use paretoscope_core::{FeasibleSet, Polity, TransformSpec};

/// Box grid `{0, .., levels-1}` for `agents` agents holding one commodity.
pub fn grid(agents: usize, levels: u64) -> (Polity, FeasibleSet) {
    let values: Vec<u64> = (0..levels).collect();
    (
        Polity::new(agents, 1).expect("valid polity"),
        FeasibleSet::int_box(&values),
    )
}

pub fn own(agents: usize) -> Vec<TransformSpec> {
    vec![TransformSpec::OwnBundle; agents]
}

pub fn relative(agents: usize) -> Vec<TransformSpec> {
    vec![TransformSpec::relative_mean(); agents]
}

/// Box grid `{1, .., levels}`, so relative transforms are defined everywhere.
pub fn positive_grid(agents: usize, levels: u64) -> (Polity, FeasibleSet) {
    let values: Vec<u64> = (1..=levels).collect();
    (
        Polity::new(agents, 1).expect("valid polity"),
        FeasibleSet::int_box(&values),
    )
}
