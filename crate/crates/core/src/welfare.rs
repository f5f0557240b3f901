//! Social welfare functionals over allocations.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::polity::{AgentId, Allocation, Polity};
use crate::quantity::{format_rational, int, parse_rational, Rational};
use crate::transform::{evaluate_transform, PreferenceInfo, TransformSpec};

/// How per-agent values are combined into one welfare number.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Combiner {
    Sum,
    /// Non-negative per-agent weights, not all zero.
    WeightedSum(Vec<Rational>),
    Maximin,
}

impl Combiner {
    pub fn weighted_sum(weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidWeights("weight list is empty".into()));
        }
        if let Some(w) = weights.iter().find(|w| w.is_negative()) {
            return Err(Error::InvalidWeights(format!(
                "weight {} is negative",
                format_rational(w)
            )));
        }
        if weights.iter().all(Zero::is_zero) {
            return Err(Error::InvalidWeights("weights all zero".into()));
        }
        Ok(Combiner::WeightedSum(weights))
    }
}

impl FromStr for Combiner {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "sum" => return Ok(Combiner::Sum),
            "maximin" => return Ok(Combiner::Maximin),
            _ => {}
        }
        let args = s
            .strip_prefix("weighted_sum")
            .map(str::trim)
            .and_then(|rest| rest.strip_prefix('('))
            .and_then(|rest| rest.strip_suffix(')'))
            .ok_or_else(|| Error::InvalidTransform(format!("unknown welfare combiner `{s}`")))?;
        let weights = args.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
        Combiner::weighted_sum(weights)
    }
}

impl fmt::Display for Combiner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Combiner::Sum => f.write_str("sum"),
            Combiner::Maximin => f.write_str("maximin"),
            Combiner::WeightedSum(w) => {
                let parts: Vec<String> = w.iter().map(format_rational).collect();
                write!(f, "weighted_sum({})", parts.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwfSpec {
    pub combiner: Combiner,
    /// Stand-in for each agent's utility.
    pub agent_value: Vec<TransformSpec>,
}

impl SwfSpec {
    /// Uses the unit-weighted sum of each agent's own bundle as its value.
    pub fn with_unit_values(combiner: Combiner, polity: &Polity) -> Self {
        let unit = TransformSpec::WeightedOwn {
            weights: vec![int(1); polity.commodity_dim()],
        };
        SwfSpec {
            combiner,
            agent_value: vec![unit; polity.n_agents()],
        }
    }
}

/// Combined welfare of an allocation.
pub fn welfare_value(swf: &SwfSpec, a: &Allocation) -> Result<Rational> {
    let n = a.n_agents();
    if swf.agent_value.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: swf.agent_value.len(),
        });
    }
    let values = swf
        .agent_value
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let agent = AgentId::from_index(i);
            match evaluate_transform(t, a, agent)? {
                PreferenceInfo::Scalar(v) => Ok(v),
                PreferenceInfo::Vector(_) => Err(Error::VectorValuedAgentInfo { agent }),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    match &swf.combiner {
        Combiner::Sum => Ok(values.into_iter().sum()),
        Combiner::WeightedSum(weights) => {
            if weights.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: weights.len(),
                });
            }
            Ok(values.iter().zip(weights).map(|(v, w)| v * w).sum())
        }
        Combiner::Maximin => Ok(values.into_iter().min().expect("at least one agent")),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankEntry {
    /// Position of the state in the input list.
    pub state_id: usize,
    pub state: Allocation,
    pub value: Rational,
    /// Shares its welfare value with another entry.
    pub tied: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ranking {
    pub entries: Vec<RankEntry>,
}

impl Ranking {
    pub fn top(&self) -> &RankEntry {
        &self.entries[0]
    }

    pub fn has_ties(&self) -> bool {
        self.entries.iter().any(|e| e.tied)
    }
}

/// Ranks states by descending welfare; ties keep input order.
pub fn welfare_rank(swf: &SwfSpec, states: &[Allocation]) -> Result<Ranking> {
    if states.is_empty() {
        return Err(Error::EmptyStateList);
    }
    let mut entries = states
        .iter()
        .enumerate()
        .map(|(state_id, s)| {
            Ok(RankEntry {
                state_id,
                state: s.clone(),
                value: welfare_value(swf, s)?,
                tied: false,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    entries.sort_by(|a, b| b.value.cmp(&a.value));
    for i in 0..entries.len() {
        let tied = (i > 0 && entries[i - 1].value == entries[i].value)
            || (i + 1 < entries.len() && entries[i + 1].value == entries[i].value);
        entries[i].tied = tied;
    }
    Ok(Ranking { entries })
}
