//! Individual preference-information transforms.
//!
//! A transform maps the whole allocation to the information an agent ranks
//! states by. Preferences are taken to be increasing in that information.
//!
//! Textual syntax, as used in scenario files:
//!
//! ```text
//! own
//! weighted_own(w1,...,wC)
//! relative_mean
//! relative_mean(w1,...,wC)
//! relative_nbhd(id1,...,idK)
//! relative_nbhd(id1,...,idK;w1,...,wC)
//! ```
//!
//! Relative transforms collapse bundles to scalars with the given positive
//! weights (unit weights when omitted) before dividing by the mean aggregate of
//! the reference group.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::polity::{compare_components, AgentId, Allocation, Bundle, PartialOrderResult, Polity};
use crate::quantity::{format_rational, int, parse_rational, Quantity, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TransformSpec {
    /// The agent's own bundle.
    OwnBundle,
    /// Weighted sum of the agent's own bundle.
    WeightedOwn { weights: Vec<Rational> },
    /// Own aggregate over the population mean aggregate.
    RelativeToMean { weights: Option<Vec<Rational>> },
    /// Own aggregate over the mean aggregate of a declared neighbour group.
    RelativeToNeighborhood {
        neighbors: BTreeSet<AgentId>,
        weights: Option<Vec<Rational>>,
    },
}

impl TransformSpec {
    pub fn weighted_own(weights: Vec<Rational>) -> Result<Self> {
        check_weights(&weights)?;
        Ok(TransformSpec::WeightedOwn { weights })
    }

    pub fn relative_mean() -> Self {
        TransformSpec::RelativeToMean { weights: None }
    }

    pub fn relative_mean_weighted(weights: Vec<Rational>) -> Result<Self> {
        check_weights(&weights)?;
        Ok(TransformSpec::RelativeToMean { weights: Some(weights) })
    }

    pub fn relative_neighborhood(
        neighbors: impl IntoIterator<Item = AgentId>,
        weights: Option<Vec<Rational>>,
    ) -> Result<Self> {
        let neighbors: BTreeSet<AgentId> = neighbors.into_iter().collect();
        if neighbors.is_empty() {
            return Err(Error::InvalidTransform("neighbourhood must not be empty".into()));
        }
        if let Some(w) = &weights {
            check_weights(w)?;
        }
        Ok(TransformSpec::RelativeToNeighborhood { neighbors, weights })
    }

    /// Checks agent ids and weight lengths against a polity.
    pub fn validate(&self, polity: &Polity) -> Result<()> {
        let check_len = |w: &Vec<Rational>| {
            if w.len() != polity.commodity_dim() {
                Err(Error::DimensionMismatch {
                    expected: polity.commodity_dim(),
                    found: w.len(),
                })
            } else {
                Ok(())
            }
        };
        match self {
            TransformSpec::OwnBundle => Ok(()),
            TransformSpec::WeightedOwn { weights } => check_len(weights),
            TransformSpec::RelativeToMean { weights } => weights.as_ref().map_or(Ok(()), check_len),
            TransformSpec::RelativeToNeighborhood { neighbors, weights } => {
                for &n in neighbors {
                    polity.check_agent(n)?;
                }
                weights.as_ref().map_or(Ok(()), check_len)
            }
        }
    }

    /// True when the value depends on nothing but the agent's own bundle.
    pub fn is_own_only(&self) -> bool {
        matches!(self, TransformSpec::OwnBundle | TransformSpec::WeightedOwn { .. })
    }
}

fn check_weights(weights: &[Rational]) -> Result<()> {
    if weights.is_empty() {
        return Err(Error::InvalidWeights("weight list is empty".into()));
    }
    if let Some(w) = weights.iter().find(|w| !w.is_positive()) {
        return Err(Error::InvalidWeights(format!(
            "weight {} is not strictly positive",
            format_rational(w)
        )));
    }
    Ok(())
}

fn parse_list(text: &str) -> Result<Vec<Rational>> {
    text.split(',').map(parse_rational).collect()
}

impl FromStr for TransformSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |why: &str| Error::InvalidTransform(format!("{why}: `{s}`"));
        let (name, args) = match s.split_once('(') {
            Some((name, rest)) => {
                let args = rest.strip_suffix(')').ok_or_else(|| bad("missing `)`"))?;
                (name.trim(), Some(args.trim()))
            }
            None => (s, None),
        };
        match (name, args) {
            ("own", None) => Ok(TransformSpec::OwnBundle),
            ("weighted_own", Some(args)) => TransformSpec::weighted_own(parse_list(args)?),
            ("relative_mean", None) => Ok(TransformSpec::relative_mean()),
            ("relative_mean", Some(args)) => TransformSpec::relative_mean_weighted(parse_list(args)?),
            ("relative_nbhd", Some(args)) => {
                let (ids, weights) = match args.split_once(';') {
                    Some((ids, w)) => (ids, Some(parse_list(w)?)),
                    None => (args, None),
                };
                let neighbors = ids
                    .split(',')
                    .map(|id| {
                        id.trim()
                            .parse::<usize>()
                            .map_err(|_| bad("agent ids must be positive integers"))
                            .and_then(|id| AgentId::new(id).map_err(|_| bad("agent ids start at 1")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                TransformSpec::relative_neighborhood(neighbors, weights)
            }
            ("weighted_own" | "relative_nbhd", None) => Err(bad("missing arguments")),
            ("own", Some(_)) => Err(bad("`own` takes no arguments")),
            _ => Err(bad("unknown transform")),
        }
    }
}

impl fmt::Display for TransformSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |w: &[Rational]| w.iter().map(format_rational).collect::<Vec<_>>().join(",");
        match self {
            TransformSpec::OwnBundle => f.write_str("own"),
            TransformSpec::WeightedOwn { weights } => write!(f, "weighted_own({})", join(weights)),
            TransformSpec::RelativeToMean { weights: None } => f.write_str("relative_mean"),
            TransformSpec::RelativeToMean { weights: Some(w) } => write!(f, "relative_mean({})", join(w)),
            TransformSpec::RelativeToNeighborhood { neighbors, weights } => {
                let ids = neighbors.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
                match weights {
                    None => write!(f, "relative_nbhd({ids})"),
                    Some(w) => write!(f, "relative_nbhd({ids};{})", join(w)),
                }
            }
        }
    }
}

/// The information an agent ranks states by.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PreferenceInfo {
    Scalar(Rational),
    Vector(Bundle),
}

impl PreferenceInfo {
    /// Compares `self` against `other`: numerically for scalars,
    /// componentwise for vectors.
    pub fn compare(&self, other: &PreferenceInfo) -> Result<PartialOrderResult> {
        match (self, other) {
            (PreferenceInfo::Scalar(a), PreferenceInfo::Scalar(b)) => Ok(PartialOrderResult::from_ordering(a.cmp(b))),
            (PreferenceInfo::Vector(a), PreferenceInfo::Vector(b)) => {
                if a.dim() != b.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: a.dim(),
                        found: b.dim(),
                    });
                }
                Ok(compare_components(a.quantities(), b.quantities()))
            }
            (PreferenceInfo::Scalar(_), PreferenceInfo::Vector(b)) => Err(Error::DimensionMismatch {
                expected: 1,
                found: b.dim(),
            }),
            (PreferenceInfo::Vector(a), PreferenceInfo::Scalar(_)) => Err(Error::DimensionMismatch {
                expected: a.dim(),
                found: 1,
            }),
        }
    }

    pub fn as_scalar(&self) -> Option<&Rational> {
        match self {
            PreferenceInfo::Scalar(v) => Some(v),
            PreferenceInfo::Vector(_) => None,
        }
    }

    /// Sum of all components; strictly increasing in the info's order.
    pub(crate) fn score(&self) -> Rational {
        match self {
            PreferenceInfo::Scalar(v) => v.clone(),
            PreferenceInfo::Vector(b) => b.quantities().iter().map(Quantity::value).sum(),
        }
    }
}

impl fmt::Display for PreferenceInfo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PreferenceInfo::Scalar(v) => f.write_str(&format_rational(v)),
            PreferenceInfo::Vector(b) => {
                let parts: Vec<String> = b.quantities().iter().map(ToString::to_string).collect();
                write!(f, "[{}]", parts.join(","))
            }
        }
    }
}

/// Evaluates `t` for `agent` at allocation `a`.
pub fn evaluate_transform(t: &TransformSpec, a: &Allocation, agent: AgentId) -> Result<PreferenceInfo> {
    let own = a.bundle(agent)?;
    match t {
        TransformSpec::OwnBundle => Ok(if own.dim() == 1 {
            PreferenceInfo::Scalar(own.get(0).value().clone())
        } else {
            PreferenceInfo::Vector(own.clone())
        }),
        TransformSpec::WeightedOwn { weights } => Ok(PreferenceInfo::Scalar(own.aggregate(Some(weights))?)),
        TransformSpec::RelativeToMean { weights } => {
            let group: Vec<&Bundle> = a.bundles().iter().collect();
            relative(own, &group, weights.as_deref(), agent, a)
        }
        TransformSpec::RelativeToNeighborhood { neighbors, weights } => {
            let group = neighbors.iter().map(|&n| a.bundle(n)).collect::<Result<Vec<_>>>()?;
            relative(own, &group, weights.as_deref(), agent, a)
        }
    }
}

fn relative(
    own: &Bundle,
    group: &[&Bundle],
    weights: Option<&[Rational]>,
    agent: AgentId,
    a: &Allocation,
) -> Result<PreferenceInfo> {
    let mut total = Rational::zero();
    for b in group {
        total += b.aggregate(weights)?;
    }
    let mean = total / int(group.len() as i64);
    if mean.is_zero() {
        return Err(Error::ZeroReferencePoint {
            agent,
            state: Some(a.clone()),
        });
    }
    Ok(PreferenceInfo::Scalar(own.aggregate(weights)? / mean))
}

/// Direction of change in preference information.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
    /// Vector information moved up in some components and down in others.
    Mixed,
}

impl Sign {
    fn of_change(after: &PreferenceInfo, before: &PreferenceInfo) -> Result<Sign> {
        Ok(match after.compare(before)? {
            PartialOrderResult::StrictlyGreater => Sign::Positive,
            PartialOrderResult::Equal => Sign::Zero,
            PartialOrderResult::StrictlyLess => Sign::Negative,
            PartialOrderResult::Incomparable => Sign::Mixed,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignReport {
    pub sign: Sign,
    pub before: PreferenceInfo,
    pub after: PreferenceInfo,
}

/// Sign of the change in `agent`'s own information when its bundle grows by
/// `delta` in every commodity.
pub fn verify_own_monotonicity(
    t: &TransformSpec,
    a: &Allocation,
    agent: AgentId,
    delta: &Quantity,
) -> Result<SignReport> {
    perturbation_sign(t, a, agent, agent, delta)
}

/// Sign of the change in `observer`'s information when `gainer`'s bundle grows
/// by `delta` in every commodity.
pub fn cross_effect_sign(
    t: &TransformSpec,
    a: &Allocation,
    observer: AgentId,
    gainer: AgentId,
    delta: &Quantity,
) -> Result<SignReport> {
    if observer == gainer {
        return Err(Error::InvalidTransform(format!(
            "observer and gainer must differ (both are agent {observer})"
        )));
    }
    perturbation_sign(t, a, observer, gainer, delta)
}

fn perturbation_sign(
    t: &TransformSpec,
    a: &Allocation,
    observer: AgentId,
    gainer: AgentId,
    delta: &Quantity,
) -> Result<SignReport> {
    if delta.is_zero() {
        return Err(Error::InvalidQuantity("perturbation must be strictly positive".into()));
    }
    let before = evaluate_transform(t, a, observer)?;
    let perturbed = a.with_increment(gainer, delta)?;
    let after = evaluate_transform(t, &perturbed, observer)?;
    Ok(SignReport {
        sign: Sign::of_change(&after, &before)?,
        before,
        after,
    })
}
