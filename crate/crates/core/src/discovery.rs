//! Repeated windfalls to a single beneficiary.
//!
//! Each step raises the beneficiary's bundle by a fixed increment in every
//! commodity and leaves everyone else untouched. Every step is checked as an
//! own-bundle improvement, and every state on the way is checked for
//! efficiency against pure redistributions of its own totals.

use num_traits::Zero;

use crate::engine::{check_improvement_neoclassical, is_pareto_efficient, EfficiencyVerdict, ImprovementVerdict};
use crate::error::{Error, Result};
use crate::feasible::FeasibleSet;
use crate::polity::{AgentId, Allocation, Move, Polity};
use crate::quantity::{Quantity, Rational};
use crate::transform::TransformSpec;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscoveryRun {
    pub initial: Allocation,
    pub beneficiary: AgentId,
    pub steps: usize,
    pub increment: Quantity,
    pub lattice_step: Quantity,
    /// `steps + 1` states, starting with `initial`.
    pub trajectory: Vec<Allocation>,
    pub step_verdicts: Vec<ImprovementVerdict>,
    /// One per trajectory state, on the lattice of that state's totals.
    pub efficiency_verdicts: Vec<EfficiencyVerdict>,
    /// Beneficiary's aggregate minus the largest aggregate among the others.
    pub gap_series: Vec<Rational>,
}

impl DiscoveryRun {
    pub fn all_steps_improve(&self) -> bool {
        self.step_verdicts.iter().all(|v| v.is_improvement)
    }

    pub fn all_states_efficient(&self) -> bool {
        self.efficiency_verdicts.iter().all(|v| v.is_efficient)
    }

    /// The lattice of redistributions of `trajectory[t]`.
    pub fn lattice_at(&self, t: usize) -> FeasibleSet {
        FeasibleSet::FixedTotalLattice {
            totals: self.trajectory[t].totals(),
            step: self.lattice_step.clone(),
        }
    }
}

fn gap(a: &Allocation, beneficiary: AgentId) -> Result<Rational> {
    let mut own = Rational::zero();
    let mut best_other: Option<Rational> = None;
    for (i, b) in a.bundles().iter().enumerate() {
        let total = b.aggregate(None)?;
        if i == beneficiary.index() {
            own = total;
        } else if best_other.as_ref().is_none_or(|best| &total > best) {
            best_other = Some(total);
        }
    }
    Ok(own - best_other.unwrap_or_else(Rational::zero))
}

fn divides(step: &Quantity, q: &Quantity) -> bool {
    (q.value() / step.value()).is_integer()
}

pub fn simulate_discovery(
    initial: &Allocation,
    beneficiary: AgentId,
    steps: usize,
    increment: &Quantity,
    lattice_step: &Quantity,
) -> Result<DiscoveryRun> {
    let polity = Polity::new(initial.n_agents(), initial.commodity_dim())?;
    polity.check_agent(beneficiary)?;
    if steps == 0 {
        return Err(Error::InfeasibleConfig("discovery needs at least one step".into()));
    }
    if increment.is_zero() {
        return Err(Error::InfeasibleConfig("increment must be strictly positive".into()));
    }
    if lattice_step.is_zero() {
        return Err(Error::InfeasibleLattice(
            "lattice step must be strictly positive".into(),
        ));
    }
    if !divides(lattice_step, increment) {
        return Err(Error::InfeasibleLattice(format!(
            "step {lattice_step} does not divide increment {increment}"
        )));
    }
    if let Some(q) = initial
        .bundles()
        .iter()
        .flat_map(|b| b.quantities())
        .find(|q| !divides(lattice_step, q))
    {
        return Err(Error::InfeasibleLattice(format!(
            "step {lattice_step} does not divide quantity {q} of the initial state"
        )));
    }

    let mut trajectory = vec![initial.clone()];
    for _ in 0..steps {
        let next = trajectory
            .last()
            .expect("non-empty")
            .with_increment(beneficiary, increment)?;
        trajectory.push(next);
    }
    let step_verdicts = trajectory
        .windows(2)
        .map(|w| Ok(check_improvement_neoclassical(&Move::new(w[0].clone(), w[1].clone())?)))
        .collect::<Result<Vec<_>>>()?;
    let own = vec![TransformSpec::OwnBundle; polity.n_agents()];
    let efficiency_verdicts = trajectory
        .iter()
        .map(|state| {
            let lattice = FeasibleSet::FixedTotalLattice {
                totals: state.totals(),
                step: lattice_step.clone(),
            };
            is_pareto_efficient(state, &lattice, &own).map_err(|e| match e {
                Error::InfeasibleConfig(why) => Error::InfeasibleLattice(why),
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let gap_series = trajectory
        .iter()
        .map(|s| gap(s, beneficiary))
        .collect::<Result<Vec<_>>>()?;

    Ok(DiscoveryRun {
        initial: initial.clone(),
        beneficiary,
        steps,
        increment: increment.clone(),
        lattice_step: lattice_step.clone(),
        trajectory,
        step_verdicts,
        efficiency_verdicts,
        gap_series,
    })
}
