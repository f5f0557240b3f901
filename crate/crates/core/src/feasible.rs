//! Finite candidate state spaces and their deterministic enumeration.
//!
//! Allocations are produced in lexicographic order of their agent-major
//! flattening `(x_1^1, .., x_1^C, x_2^1, ..)`, so the first component varies
//! slowest. Explicit lists keep their declared order.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::polity::{Allocation, Bundle, Polity};
use crate::quantity::{int, Quantity};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FeasibleSet {
    /// Every agent independently picks a level per commodity. One level list
    /// applies to all commodities, otherwise one list per commodity.
    BoxGrid {
        levels: Vec<Vec<Quantity>>,
    },
    /// Redistributions of fixed per-commodity totals in multiples of `step`.
    FixedTotalLattice {
        totals: Vec<Quantity>,
        step: Quantity,
    },
    ExplicitList(Vec<Allocation>),
}

impl FeasibleSet {
    /// Box grid with the same levels for every commodity.
    pub fn box_grid<I: IntoIterator<Item = Quantity>>(levels: I) -> Self {
        FeasibleSet::BoxGrid {
            levels: vec![levels.into_iter().collect()],
        }
    }

    /// Box grid over integer levels.
    pub fn int_box(levels: &[u64]) -> Self {
        Self::box_grid(levels.iter().copied().map(Quantity::from))
    }

    /// Lattice with the same total for every commodity.
    pub fn fixed_total(total: Quantity, step: Quantity) -> Self {
        FeasibleSet::FixedTotalLattice {
            totals: vec![total],
            step,
        }
    }

    pub fn int_lattice(total: u64, step: u64) -> Self {
        Self::fixed_total(Quantity::from(total), Quantity::from(step))
    }

    /// Number of states, saturating at `u128::MAX`.
    pub fn count(&self, polity: &Polity) -> Result<u128> {
        match self {
            FeasibleSet::BoxGrid { .. } => {
                let levels = self.box_levels(polity)?;
                let mut count: u128 = 1;
                for _ in 0..polity.n_agents() {
                    for l in &levels {
                        count = count.saturating_mul(l.len() as u128);
                    }
                }
                Ok(count)
            }
            FeasibleSet::FixedTotalLattice { .. } => {
                let units = self.lattice_units(polity)?;
                let k = polity.n_agents() as u128 - 1;
                Ok(units
                    .iter()
                    .fold(1u128, |acc, &u| acc.saturating_mul(binomial(u as u128 + k, k))))
            }
            FeasibleSet::ExplicitList(list) => Ok(list.len() as u128),
        }
    }

    /// Lazily enumerates the set in canonical order.
    pub fn iter(&self, polity: &Polity) -> Result<FeasibleIter> {
        let inner = match self {
            FeasibleSet::BoxGrid { .. } => {
                let levels = self.box_levels(polity)?;
                let positions = polity.n_agents() * polity.commodity_dim();
                let exhausted = levels.iter().any(Vec::is_empty);
                IterState::Box {
                    levels,
                    digits: vec![0; positions],
                    done: exhausted,
                }
            }
            FeasibleSet::FixedTotalLattice { step, .. } => {
                let units = self.lattice_units(polity)?;
                let free = (polity.n_agents() - 1) * polity.commodity_dim();
                IterState::Lattice {
                    used: vec![0; units.len()],
                    units,
                    step: step.clone(),
                    digits: vec![0; free],
                    done: false,
                }
            }
            FeasibleSet::ExplicitList(list) => {
                for a in list {
                    polity.check_allocation(a)?;
                }
                IterState::List {
                    items: list.clone(),
                    next: 0,
                }
            }
        };
        Ok(FeasibleIter { polity: *polity, inner })
    }

    /// Membership test without enumerating.
    pub fn contains(&self, polity: &Polity, state: &Allocation) -> Result<bool> {
        if polity.check_allocation(state).is_err() {
            return Ok(false);
        }
        match self {
            FeasibleSet::BoxGrid { .. } => {
                let levels = self.box_levels(polity)?;
                Ok(state.bundles().iter().all(|b| {
                    b.quantities()
                        .iter()
                        .enumerate()
                        .all(|(c, q)| levels[c].binary_search(q).is_ok())
                }))
            }
            FeasibleSet::FixedTotalLattice { step, .. } => {
                let units = self.lattice_units(polity)?;
                let on_grid = state
                    .bundles()
                    .iter()
                    .all(|b| b.quantities().iter().all(|q| (q.value() / step.value()).is_integer()));
                let totals_match = state
                    .totals()
                    .iter()
                    .zip(&units)
                    .all(|(t, &u)| t.value() / step.value() == int(u as i64));
                Ok(on_grid && totals_match)
            }
            FeasibleSet::ExplicitList(list) => Ok(list.contains(state)),
        }
    }

    fn box_levels(&self, polity: &Polity) -> Result<Vec<Vec<Quantity>>> {
        let FeasibleSet::BoxGrid { levels } = self else {
            unreachable!("box_levels on non-box set")
        };
        let dim = polity.commodity_dim();
        let per_commodity: Vec<Vec<Quantity>> = match levels.len() {
            1 => vec![levels[0].clone(); dim],
            n if n == dim => levels.clone(),
            n => {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: n,
                })
            }
        };
        let normalized: Vec<Vec<Quantity>> = per_commodity
            .into_iter()
            .map(|l| l.into_iter().collect::<BTreeSet<_>>().into_iter().collect())
            .collect();
        if normalized.iter().any(Vec::is_empty) {
            return Err(Error::InfeasibleConfig(
                "box grid needs at least one level per commodity".into(),
            ));
        }
        Ok(normalized)
    }

    fn lattice_units(&self, polity: &Polity) -> Result<Vec<u64>> {
        let FeasibleSet::FixedTotalLattice { totals, step } = self else {
            unreachable!("lattice_units on non-lattice set")
        };
        if step.is_zero() {
            return Err(Error::InfeasibleConfig("lattice step must be positive".into()));
        }
        let dim = polity.commodity_dim();
        let totals: Vec<Quantity> = match totals.len() {
            1 => vec![totals[0].clone(); dim],
            n if n == dim => totals.clone(),
            n => {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: n,
                })
            }
        };
        totals
            .iter()
            .map(|t| {
                let units = t.value() / step.value();
                if !units.is_integer() {
                    return Err(Error::InfeasibleConfig(format!(
                        "step {step} does not divide total {t}"
                    )));
                }
                units
                    .to_integer()
                    .to_u64()
                    .ok_or_else(|| Error::InfeasibleConfig(format!("total {t} is too large for step {step}")))
            })
            .collect()
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

impl fmt::Display for FeasibleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |qs: &[Quantity]| qs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        match self {
            FeasibleSet::BoxGrid { levels } => {
                let parts: Vec<String> = levels.iter().map(|l| format!("{{{}}}", join(l))).collect();
                write!(f, "box_grid levels={}", parts.join(";"))
            }
            FeasibleSet::FixedTotalLattice { totals, step } => {
                write!(f, "fixed_total total={} step={}", join(totals), step)
            }
            FeasibleSet::ExplicitList(list) => write!(f, "list of {} states", list.len()),
        }
    }
}

/// Enumerates every allocation of `fs` in canonical order.
pub fn enumerate_feasible(fs: &FeasibleSet, polity: &Polity) -> Result<Vec<Allocation>> {
    Ok(fs.iter(polity)?.collect())
}

/// Streaming enumeration; recreate with [`FeasibleSet::iter`] to restart.
#[derive(Debug, Clone)]
pub struct FeasibleIter {
    polity: Polity,
    inner: IterState,
}

#[derive(Debug, Clone)]
enum IterState {
    Box {
        levels: Vec<Vec<Quantity>>,
        digits: Vec<usize>,
        done: bool,
    },
    Lattice {
        units: Vec<u64>,
        used: Vec<u64>,
        step: Quantity,
        digits: Vec<u64>,
        done: bool,
    },
    List {
        items: Vec<Allocation>,
        next: usize,
    },
}

impl Iterator for FeasibleIter {
    type Item = Allocation;

    fn next(&mut self) -> Option<Allocation> {
        let dim = self.polity.commodity_dim();
        let n = self.polity.n_agents();
        match &mut self.inner {
            IterState::Box { levels, digits, done } => {
                if *done {
                    return None;
                }
                let bundles = (0..n)
                    .map(|a| {
                        Bundle::new((0..dim).map(|c| levels[c][digits[a * dim + c]].clone()).collect())
                            .expect("dim >= 1")
                    })
                    .collect();
                let current = Allocation::new(bundles).expect("uniform bundles");
                // odometer, last position fastest
                let mut p = digits.len();
                loop {
                    if p == 0 {
                        *done = true;
                        break;
                    }
                    p -= 1;
                    digits[p] += 1;
                    if digits[p] < levels[p % dim].len() {
                        break;
                    }
                    digits[p] = 0;
                }
                Some(current)
            }
            IterState::Lattice {
                units,
                used,
                step,
                digits,
                done,
            } => {
                if *done {
                    return None;
                }
                let unit_qty = |u: u64| Quantity::new(step.value() * int(u as i64)).expect("non-negative");
                let mut bundles: Vec<Bundle> = (0..n - 1)
                    .map(|a| Bundle::new((0..dim).map(|c| unit_qty(digits[a * dim + c])).collect()).expect("dim >= 1"))
                    .collect();
                bundles.push(Bundle::new((0..dim).map(|c| unit_qty(units[c] - used[c])).collect()).expect("dim >= 1"));
                let current = Allocation::new(bundles).expect("uniform bundles");
                let mut p = digits.len();
                loop {
                    if p == 0 {
                        *done = true;
                        break;
                    }
                    p -= 1;
                    let c = p % dim;
                    if used[c] < units[c] {
                        digits[p] += 1;
                        used[c] += 1;
                        break;
                    }
                    // release this position's units before carrying left
                    used[c] -= digits[p];
                    digits[p] = 0;
                }
                Some(current)
            }
            IterState::List { items, next } => {
                let item = items.get(*next).cloned();
                *next += 1;
                item
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn show(states: &[Allocation]) -> Vec<String> {
        states.iter().map(ToString::to_string).collect()
    }

    fn polity(n: usize, c: usize) -> Polity {
        Polity::new(n, c).unwrap()
    }

    #[test]
    fn fixed_total_two_agents() {
        let states = enumerate_feasible(&FeasibleSet::int_lattice(2, 1), &polity(2, 1)).unwrap();
        assert_eq!(show(&states), ["(0,2)", "(1,1)", "(2,0)"]);
    }

    #[test]
    fn box_grid_two_agents() {
        let states = enumerate_feasible(&FeasibleSet::int_box(&[0, 1]), &polity(2, 1)).unwrap();
        assert_eq!(show(&states), ["(0,0)", "(0,1)", "(1,0)", "(1,1)"]);
    }

    #[test]
    fn box_grid_three_agents_count_matches_product_oracle() {
        let fs = FeasibleSet::int_box(&[0, 1, 2]);
        let states = enumerate_feasible(&fs, &polity(3, 1)).unwrap();
        let mut oracle = Vec::new();
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    oracle.push(format!("({a},{b},{c})"));
                }
            }
        }
        assert_eq!(states.len(), 27);
        assert_eq!(show(&states), oracle);
        assert_eq!(fs.count(&polity(3, 1)).unwrap(), 27);
    }

    #[test]
    fn lattice_with_step_that_does_not_divide_is_rejected() {
        let fs = FeasibleSet::fixed_total("3".parse().unwrap(), "2".parse().unwrap());
        assert!(matches!(fs.iter(&polity(2, 1)), Err(Error::InfeasibleConfig(_))));
        let zero = FeasibleSet::fixed_total("3".parse().unwrap(), Quantity::zero());
        assert!(matches!(zero.iter(&polity(2, 1)), Err(Error::InfeasibleConfig(_))));
    }

    #[test]
    fn lattice_with_fractional_step() {
        let fs = FeasibleSet::fixed_total("1".parse().unwrap(), "1/2".parse().unwrap());
        let states = enumerate_feasible(&fs, &polity(2, 1)).unwrap();
        assert_eq!(show(&states), ["(0,1)", "(1/2,1/2)", "(1,0)"]);
    }

    #[test]
    fn lattice_sizes_and_totals() {
        for total in 0..8u64 {
            let fs = FeasibleSet::int_lattice(total, 1);
            let states = enumerate_feasible(&fs, &polity(2, 1)).unwrap();
            assert_eq!(states.len() as u64, total + 1);
            for s in &states {
                assert_eq!(s.totals(), vec![Quantity::from(total)]);
            }
        }
    }

    #[test]
    fn multi_commodity_lattice_is_lexicographic_and_complete() {
        let p = polity(3, 2);
        let fs = FeasibleSet::FixedTotalLattice {
            totals: vec![Quantity::from(2), Quantity::from(1)],
            step: Quantity::from(1),
        };
        let states = enumerate_feasible(&fs, &p).unwrap();
        // brute force over the full box, filtered by totals
        let mut oracle = Vec::new();
        let box_fs = FeasibleSet::BoxGrid {
            levels: vec![
                vec![0u64, 1, 2].into_iter().map(Quantity::from).collect(),
                vec![0u64, 1].into_iter().map(Quantity::from).collect(),
            ],
        };
        for s in box_fs.iter(&p).unwrap() {
            if s.totals() == vec![Quantity::from(2), Quantity::from(1)] {
                oracle.push(s);
            }
        }
        assert_eq!(states, oracle);
        assert_eq!(fs.count(&p).unwrap(), states.len() as u128);
        let mut sorted = states.clone();
        sorted.sort();
        assert_eq!(sorted, states);
        assert!(states.iter().all(|s| fs.contains(&p, s).unwrap()));
    }

    #[test]
    fn single_agent_lattice_has_one_state() {
        let states = enumerate_feasible(&FeasibleSet::int_lattice(4, 1), &polity(1, 1)).unwrap();
        assert_eq!(show(&states), ["(4)"]);
    }

    #[test]
    fn box_levels_are_sorted_and_deduplicated() {
        let states = enumerate_feasible(&FeasibleSet::int_box(&[2, 0, 2]), &polity(1, 1)).unwrap();
        assert_eq!(show(&states), ["(0)", "(2)"]);
    }

    #[test]
    fn explicit_list_is_validated_and_ordered() {
        let list = vec![Allocation::from_scalars(&[2, 0]), Allocation::from_scalars(&[0, 2])];
        let fs = FeasibleSet::ExplicitList(list.clone());
        assert_eq!(enumerate_feasible(&fs, &polity(2, 1)).unwrap(), list);
        assert!(fs.iter(&polity(3, 1)).is_err());
    }

    #[test]
    fn membership() {
        let p = polity(2, 1);
        let lattice = FeasibleSet::int_lattice(2, 1);
        assert!(lattice.contains(&p, &Allocation::from_scalars(&[1, 1])).unwrap());
        assert!(!lattice.contains(&p, &Allocation::from_scalars(&[2, 1])).unwrap());
        let grid = FeasibleSet::int_box(&[0, 1]);
        assert!(grid.contains(&p, &Allocation::from_scalars(&[0, 1])).unwrap());
        assert!(!grid.contains(&p, &Allocation::from_scalars(&[0, 2])).unwrap());
        assert!(!grid.contains(&p, &Allocation::from_scalars(&[0, 1, 1])).unwrap());
    }

    #[test]
    fn iteration_is_recreatable() {
        let fs = FeasibleSet::int_box(&[0, 1, 2]);
        let p = polity(2, 1);
        let first: Vec<_> = fs.iter(&p).unwrap().collect();
        let second: Vec<_> = fs.iter(&p).unwrap().collect();
        assert_eq!(first, second);
    }
}
