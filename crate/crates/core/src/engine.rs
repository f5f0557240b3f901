//! Pareto improvement checks, efficiency, frontiers and exhaustive move scans.
//!
//! Efficiency is always judged against a finite [`FeasibleSet`]. States at
//! which some agent's transform is undefined (zero reference point) are left
//! out of scans and counted as skipped.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::feasible::FeasibleSet;
use crate::polity::{classify_move_agents, compare_components, AgentId, Allocation, Move, PartialOrderResult, Polity};
use crate::quantity::Rational;
use crate::transform::{evaluate_transform, PreferenceInfo, TransformSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Definitional,
    Neoclassical,
    RatioForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationReason {
    StrictlyWorse,
    IncomparableInfo,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImprovementVerdict {
    pub is_improvement: bool,
    pub strict_gainers: BTreeSet<AgentId>,
    pub violators: Vec<(AgentId, ViolationReason)>,
    pub method: Method,
}

impl ImprovementVerdict {
    fn from_comparisons(method: Method, cmps: impl IntoIterator<Item = PartialOrderResult>) -> Self {
        let mut strict_gainers = BTreeSet::new();
        let mut violators = Vec::new();
        for (index, cmp) in cmps.into_iter().enumerate() {
            let agent = AgentId::from_index(index);
            match cmp {
                PartialOrderResult::StrictlyGreater => {
                    strict_gainers.insert(agent);
                }
                PartialOrderResult::Equal => {}
                PartialOrderResult::StrictlyLess => violators.push((agent, ViolationReason::StrictlyWorse)),
                PartialOrderResult::Incomparable => violators.push((agent, ViolationReason::IncomparableInfo)),
            }
        }
        ImprovementVerdict {
            is_improvement: violators.is_empty() && !strict_gainers.is_empty(),
            strict_gainers,
            violators,
            method,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EfficiencyVerdict {
    pub is_efficient: bool,
    /// First improving move in enumeration order, when one exists.
    pub witness: Option<Move>,
    /// Candidates left out because a transform was undefined there.
    pub skipped_states: usize,
    pub in_feasible_set: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanReport {
    pub states_examined: usize,
    pub moves_examined: u64,
    pub improvements_found: usize,
    pub improving_moves: Vec<Move>,
    pub efficient_state_count: usize,
    pub skipped_states: Vec<Allocation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanOptions {
    /// Upper bound on ordered state pairs; `None` disables the guard.
    pub cap: Option<u64>,
    /// Worker threads; 0 or 1 runs on the calling thread.
    pub workers: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            cap: Some(DEFAULT_MOVE_CAP),
            workers: 1,
        }
    }
}

pub const DEFAULT_MOVE_CAP: u64 = 4_000_000;

type Profile = Vec<PreferenceInfo>;

fn check_transform_count(transforms: &[TransformSpec], n_agents: usize) -> Result<()> {
    if transforms.len() != n_agents {
        return Err(Error::DimensionMismatch {
            expected: n_agents,
            found: transforms.len(),
        });
    }
    Ok(())
}

fn profile(transforms: &[TransformSpec], a: &Allocation) -> Result<Profile> {
    transforms
        .iter()
        .enumerate()
        .map(|(i, t)| evaluate_transform(t, a, AgentId::from_index(i)))
        .collect()
}

fn compare_profiles(from: &Profile, to: &Profile) -> Result<Vec<PartialOrderResult>> {
    to.iter()
        .zip(from)
        .map(|(after, before)| after.compare(before))
        .collect()
}

fn improves(from: &Profile, to: &Profile) -> Result<bool> {
    let mut strict = false;
    for (after, before) in to.iter().zip(from) {
        match after.compare(before)? {
            PartialOrderResult::StrictlyGreater => strict = true,
            PartialOrderResult::Equal => {}
            _ => return Ok(false),
        }
    }
    Ok(strict)
}

/// Definitional check: every agent's information weakly rises and at least one strictly.
pub fn check_improvement(m: &Move, transforms: &[TransformSpec]) -> Result<ImprovementVerdict> {
    check_transform_count(transforms, m.n_agents())?;
    let before = profile(transforms, m.from())?;
    let after = profile(transforms, m.to())?;
    let cmps = compare_profiles(&before, &after)?;
    Ok(ImprovementVerdict::from_comparisons(Method::Definitional, cmps))
}

/// Own-bundle check under the componentwise order, without any transform.
pub fn check_improvement_neoclassical(m: &Move) -> ImprovementVerdict {
    let cmps = m
        .from()
        .bundles()
        .iter()
        .zip(m.to().bundles())
        .map(|(before, after)| compare_components(after.quantities(), before.quantities()));
    ImprovementVerdict::from_comparisons(Method::Neoclassical, cmps)
}

/// Ratio-form test for single-commodity moves in which some agents gain and
/// the rest weakly lose.
///
/// For every agent `k`, `(f_k(to) - f_k(from)) / (x_i(to) - x_i(from))` must be
/// non-negative for each gainer `i` and non-positive for each loser `j` whose
/// holding changed; pairs with an unchanged holding have no ratio and impose
/// nothing. At least one inequality must hold strictly.
pub fn check_improvement_ratio_form(m: &Move, transforms: &[TransformSpec]) -> Result<ImprovementVerdict> {
    check_transform_count(transforms, m.n_agents())?;
    if m.commodity_dim() != 1 {
        return Err(Error::HypothesisViolated(format!(
            "ratio form needs a single commodity, move has {}",
            m.commodity_dim()
        )));
    }
    let classes = classify_move_agents(m);
    if !classes.mixed.is_empty() {
        return Err(Error::HypothesisViolated(
            "some agent's bundle changed incomparably".into(),
        ));
    }
    if classes.gainers.is_empty() {
        return Err(Error::HypothesisViolated("no agent's bundle strictly increased".into()));
    }

    let holding_change = |agent: AgentId| -> Rational {
        m.to().bundles()[agent.index()].get(0) - m.from().bundles()[agent.index()].get(0)
    };
    let gainer_changes: Vec<Rational> = classes.gainers.iter().map(|&i| holding_change(i)).collect();
    let loser_changes: Vec<Rational> = classes
        .weak_losers
        .iter()
        .map(|&j| holding_change(j))
        .filter(|d| !d.is_zero())
        .collect();

    let mut strict_gainers = BTreeSet::new();
    let mut violators = Vec::new();
    for (index, t) in transforms.iter().enumerate() {
        let k = AgentId::from_index(index);
        let info_change = scalar_info(t, m.to(), k)? - scalar_info(t, m.from(), k)?;
        let mut satisfied = true;
        let mut strict = false;
        for dx in &gainer_changes {
            let ratio = &info_change / dx;
            satisfied &= !ratio.is_negative();
            strict |= ratio.is_positive();
        }
        for dx in &loser_changes {
            let ratio = &info_change / dx;
            satisfied &= !ratio.is_positive();
            strict |= ratio.is_negative();
        }
        if !satisfied {
            violators.push((k, ViolationReason::StrictlyWorse));
        } else if strict {
            strict_gainers.insert(k);
        }
    }
    Ok(ImprovementVerdict {
        is_improvement: violators.is_empty() && !strict_gainers.is_empty(),
        strict_gainers,
        violators,
        method: Method::RatioForm,
    })
}

fn scalar_info(t: &TransformSpec, a: &Allocation, agent: AgentId) -> Result<Rational> {
    match evaluate_transform(t, a, agent)? {
        PreferenceInfo::Scalar(v) => Ok(v),
        PreferenceInfo::Vector(_) => Err(Error::VectorValuedAgentInfo { agent }),
    }
}

/// A state is efficient iff no feasible state is reachable by an improving move.
pub fn is_pareto_efficient(
    state: &Allocation,
    fs: &FeasibleSet,
    transforms: &[TransformSpec],
) -> Result<EfficiencyVerdict> {
    let polity = Polity::new(state.n_agents(), state.commodity_dim())?;
    check_transform_count(transforms, polity.n_agents())?;
    let in_feasible_set = fs.contains(&polity, state)?;
    if !in_feasible_set {
        log::warn!("state {state} is not a member of the feasible set ({fs})");
    }
    let here = profile(transforms, state)?;
    let mut skipped_states = 0;
    for candidate in fs.iter(&polity)? {
        let there = match profile(transforms, &candidate) {
            Ok(p) => p,
            Err(e) if e.is_zero_reference() => {
                log::warn!("skipping state {candidate}: {e}");
                skipped_states += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        if improves(&here, &there)? {
            return Ok(EfficiencyVerdict {
                is_efficient: false,
                witness: Some(Move::new(state.clone(), candidate)?),
                skipped_states,
                in_feasible_set,
            });
        }
    }
    Ok(EfficiencyVerdict {
        is_efficient: true,
        witness: None,
        skipped_states,
        in_feasible_set,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FrontierStatus {
    Efficient,
    Dominated,
    /// A transform is undefined at this state.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrontierEntry {
    /// Zero-based position in enumeration order.
    pub state_id: usize,
    pub state: Allocation,
    pub status: FrontierStatus,
}

/// Every feasible state with its efficiency status, in enumeration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frontier {
    pub entries: Vec<FrontierEntry>,
}

impl Frontier {
    /// The efficient states, in enumeration order.
    pub fn members(&self) -> Vec<&Allocation> {
        self.entries
            .iter()
            .filter(|e| e.status == FrontierStatus::Efficient)
            .map(|e| &e.state)
            .collect()
    }

    pub fn skipped(&self) -> impl Iterator<Item = &FrontierEntry> {
        self.entries.iter().filter(|e| e.status == FrontierStatus::Skipped)
    }
}

struct Evaluated {
    states: Vec<Allocation>,
    profiles: Vec<Option<Profile>>,
}

impl Evaluated {
    fn build(polity: &Polity, fs: &FeasibleSet, transforms: &[TransformSpec]) -> Result<Self> {
        check_transform_count(transforms, polity.n_agents())?;
        let states: Vec<Allocation> = fs.iter(polity)?.collect();
        let profiles = states
            .par_iter()
            .map(|s| match profile(transforms, s) {
                Ok(p) => Ok(Some(p)),
                Err(e) if e.is_zero_reference() => Ok(None),
                Err(e) => Err(e),
            })
            .collect::<Result<Vec<_>>>()?;
        for (s, p) in states.iter().zip(&profiles) {
            if p.is_none() {
                log::warn!("skipping state {s}: zero reference point");
            }
        }
        Ok(Evaluated { states, profiles })
    }

    fn valid(&self) -> impl Iterator<Item = (usize, &Profile)> + '_ {
        self.profiles
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.as_ref().map(|p| (i, p)))
    }

    fn into_frontier(self, efficient: &[bool]) -> Result<Frontier> {
        let has_valid = self.profiles.iter().any(Option::is_some);
        if has_valid && !efficient.iter().any(|&e| e) {
            return Err(Error::InternalInvariant(
                "frontier of a non-empty finite set came out empty".into(),
            ));
        }
        let entries = self
            .states
            .into_iter()
            .zip(self.profiles)
            .enumerate()
            .map(|(state_id, (state, p))| FrontierEntry {
                state_id,
                state,
                status: match (p, efficient[state_id]) {
                    (None, _) => FrontierStatus::Skipped,
                    (Some(_), true) => FrontierStatus::Efficient,
                    (Some(_), false) => FrontierStatus::Dominated,
                },
            })
            .collect();
        Ok(Frontier { entries })
    }
}

/// Quadratic reference pass: each state is tested against every other.
pub fn enumerate_frontier_naive(polity: &Polity, fs: &FeasibleSet, transforms: &[TransformSpec]) -> Result<Frontier> {
    let evaluated = Evaluated::build(polity, fs, transforms)?;
    let mut efficient = vec![false; evaluated.states.len()];
    for (i, from) in evaluated.valid() {
        let mut dominated = false;
        for (_, to) in evaluated.valid() {
            if improves(from, to)? {
                dominated = true;
                break;
            }
        }
        efficient[i] = !dominated;
    }
    evaluated.into_frontier(&efficient)
}

/// Sort-filter pass: states are visited by descending total information, so a
/// state can only be dominated by one already visited, and it suffices to test
/// it against the efficient states found so far.
pub fn enumerate_frontier(polity: &Polity, fs: &FeasibleSet, transforms: &[TransformSpec]) -> Result<Frontier> {
    let evaluated = Evaluated::build(polity, fs, transforms)?;
    let mut order: Vec<(usize, Rational)> = evaluated
        .valid()
        .map(|(i, p)| (i, p.iter().map(PreferenceInfo::score).sum()))
        .collect();
    order.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));

    let mut window: Vec<usize> = Vec::new();
    for (i, _) in order {
        let candidate = evaluated.profiles[i].as_ref().expect("valid index");
        let mut dominated = false;
        for &w in &window {
            if improves(candidate, evaluated.profiles[w].as_ref().expect("valid index"))? {
                dominated = true;
                break;
            }
        }
        if !dominated {
            window.push(i);
        }
    }
    let mut efficient = vec![false; evaluated.states.len()];
    for i in window {
        efficient[i] = true;
    }
    evaluated.into_frontier(&efficient)
}

/// Examines every ordered pair of distinct feasible states.
pub fn scan_all_moves(
    polity: &Polity,
    fs: &FeasibleSet,
    transforms: &[TransformSpec],
    options: &ScanOptions,
) -> Result<ScanReport> {
    check_transform_count(transforms, polity.n_agents())?;
    let count = fs.count(polity)?;
    let pairs = count.saturating_mul(count.saturating_sub(1));
    if let Some(cap) = options.cap {
        if pairs > u128::from(cap) {
            return Err(Error::CapExceeded {
                cap,
                required: u64::try_from(pairs).unwrap_or(u64::MAX),
            });
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.workers.max(1))
        .build()
        .map_err(|e| Error::InternalInvariant(format!("cannot start worker pool: {e}")))?;
    pool.install(|| scan_inner(polity, fs, transforms))
}

fn scan_inner(polity: &Polity, fs: &FeasibleSet, transforms: &[TransformSpec]) -> Result<ScanReport> {
    let evaluated = Evaluated::build(polity, fs, transforms)?;
    let valid: Vec<(usize, &Profile)> = evaluated.valid().collect();
    // per-source target lists, merged in enumeration order
    let targets: Vec<Vec<usize>> = valid
        .par_iter()
        .map(|&(i, from)| {
            let mut hits = Vec::new();
            for &(j, to) in &valid {
                if i != j && improves(from, to)? {
                    hits.push(j);
                }
            }
            Ok(hits)
        })
        .collect::<Result<_>>()?;

    let mut improving_moves = Vec::new();
    let mut efficient_state_count = 0;
    for (&(i, _), hits) in valid.iter().zip(&targets) {
        if hits.is_empty() {
            efficient_state_count += 1;
        }
        for &j in hits {
            improving_moves.push(Move::new(evaluated.states[i].clone(), evaluated.states[j].clone())?);
        }
    }
    let states_examined = valid.len();
    let skipped_states = evaluated
        .states
        .iter()
        .zip(&evaluated.profiles)
        .filter(|(_, p)| p.is_none())
        .map(|(s, _)| s.clone())
        .collect();
    Ok(ScanReport {
        states_examined,
        moves_examined: (states_examined as u64) * (states_examined.saturating_sub(1) as u64),
        improvements_found: improving_moves.len(),
        improving_moves,
        efficient_state_count,
        skipped_states,
    })
}
