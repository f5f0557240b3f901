//! Polities, bundles, allocations and moves, with the componentwise order on bundles.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::quantity::{Quantity, Rational};

/// One-based agent identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AgentId(usize);

impl AgentId {
    /// Builds an id from its one-based number. Zero is rejected.
    pub fn new(id: usize) -> Result<Self> {
        if id == 0 {
            return Err(Error::InvalidAgent { agent: 0, agents: 0 });
        }
        Ok(AgentId(id))
    }

    pub fn from_index(index: usize) -> Self {
        AgentId(index + 1)
    }

    pub fn get(self) -> usize {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 - 1
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The agent set `N` and the commodity dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Polity {
    n_agents: usize,
    commodity_dim: usize,
}

impl Polity {
    pub fn new(n_agents: usize, commodity_dim: usize) -> Result<Self> {
        if n_agents == 0 {
            return Err(Error::InfeasibleConfig("polity needs at least one agent".into()));
        }
        if commodity_dim == 0 {
            return Err(Error::InfeasibleConfig("commodity dimension must be at least 1".into()));
        }
        Ok(Polity {
            n_agents,
            commodity_dim,
        })
    }

    pub fn n_agents(&self) -> usize {
        self.n_agents
    }

    pub fn commodity_dim(&self) -> usize {
        self.commodity_dim
    }

    pub fn agents(&self) -> impl Iterator<Item = AgentId> + Clone {
        (0..self.n_agents).map(AgentId::from_index)
    }

    pub fn check_agent(&self, agent: AgentId) -> Result<()> {
        if agent.get() > self.n_agents {
            return Err(Error::InvalidAgent {
                agent: agent.get(),
                agents: self.n_agents,
            });
        }
        Ok(())
    }

    /// Checks that `allocation` lives in this polity.
    pub fn check_allocation(&self, allocation: &Allocation) -> Result<()> {
        if allocation.n_agents() != self.n_agents {
            return Err(Error::DimensionMismatch {
                expected: self.n_agents,
                found: allocation.n_agents(),
            });
        }
        if allocation.commodity_dim() != self.commodity_dim {
            return Err(Error::DimensionMismatch {
                expected: self.commodity_dim,
                found: allocation.commodity_dim(),
            });
        }
        Ok(())
    }
}

/// A commodity bundle in the non-negative orthant.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bundle(Vec<Quantity>);

impl Bundle {
    pub fn new(quantities: Vec<Quantity>) -> Result<Self> {
        if quantities.is_empty() {
            return Err(Error::InvalidAllocation(
                "bundle must hold at least one commodity".into(),
            ));
        }
        Ok(Bundle(quantities))
    }

    /// Builds a bundle from integer quantities. Panics on an empty slice.
    pub fn from_integers(values: &[u64]) -> Self {
        Bundle::new(values.iter().copied().map(Quantity::from).collect()).expect("non-empty bundle")
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn quantities(&self) -> &[Quantity] {
        &self.0
    }

    pub fn get(&self, commodity: usize) -> &Quantity {
        &self.0[commodity]
    }

    /// Adds `delta` to every commodity.
    pub fn add_uniform(&self, delta: &Quantity) -> Bundle {
        Bundle(self.0.iter().map(|q| q + delta).collect())
    }

    /// Weighted aggregate `sum_c w_c x_c`; `None` weights mean unit weights.
    pub fn aggregate(&self, weights: Option<&[Rational]>) -> Result<Rational> {
        match weights {
            None => Ok(self.0.iter().map(Quantity::value).sum()),
            Some(w) => {
                if w.len() != self.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: self.dim(),
                        found: w.len(),
                    });
                }
                Ok(self.0.iter().zip(w).map(|(q, w)| q.value() * w).sum())
            }
        }
    }
}

impl fmt::Display for Bundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        f.write_str("[")?;
        for (i, q) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{q}")?;
        }
        f.write_str("]")
    }
}

/// Outcome of comparing two bundles under the componentwise order.
///
/// `StrictlyGreater` means every component is at least as large and at least
/// one is larger.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PartialOrderResult {
    Equal,
    StrictlyGreater,
    StrictlyLess,
    Incomparable,
}

impl PartialOrderResult {
    pub fn reverse(self) -> Self {
        match self {
            PartialOrderResult::StrictlyGreater => PartialOrderResult::StrictlyLess,
            PartialOrderResult::StrictlyLess => PartialOrderResult::StrictlyGreater,
            other => other,
        }
    }

    pub(crate) fn from_ordering(ordering: std::cmp::Ordering) -> Self {
        match ordering {
            std::cmp::Ordering::Less => PartialOrderResult::StrictlyLess,
            std::cmp::Ordering::Equal => PartialOrderResult::Equal,
            std::cmp::Ordering::Greater => PartialOrderResult::StrictlyGreater,
        }
    }
}

/// Compares `a` against `b` componentwise.
pub fn compare_bundles(a: &Bundle, b: &Bundle) -> Result<PartialOrderResult> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(compare_components(a.quantities(), b.quantities()))
}

pub(crate) fn compare_components<T: Ord>(a: &[T], b: &[T]) -> PartialOrderResult {
    let mut some_greater = false;
    let mut some_less = false;
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            std::cmp::Ordering::Greater => some_greater = true,
            std::cmp::Ordering::Less => some_less = true,
            std::cmp::Ordering::Equal => {}
        }
    }
    match (some_greater, some_less) {
        (false, false) => PartialOrderResult::Equal,
        (true, false) => PartialOrderResult::StrictlyGreater,
        (false, true) => PartialOrderResult::StrictlyLess,
        (true, true) => PartialOrderResult::Incomparable,
    }
}

/// One bundle per agent, all of the same dimension.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Allocation(Vec<Bundle>);

impl Allocation {
    pub fn new(bundles: Vec<Bundle>) -> Result<Self> {
        let first = bundles
            .first()
            .ok_or_else(|| Error::InvalidAllocation("allocation needs at least one agent".into()))?;
        let dim = first.dim();
        if let Some(bad) = bundles.iter().find(|b| b.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(Allocation(bundles))
    }

    /// Single-commodity allocation from integer holdings, one per agent.
    pub fn from_scalars(values: &[u64]) -> Self {
        Allocation::new(values.iter().map(|&v| Bundle::from_integers(&[v])).collect()).expect("non-empty allocation")
    }

    pub fn n_agents(&self) -> usize {
        self.0.len()
    }

    pub fn commodity_dim(&self) -> usize {
        self.0[0].dim()
    }

    pub fn bundles(&self) -> &[Bundle] {
        &self.0
    }

    pub fn bundle(&self, agent: AgentId) -> Result<&Bundle> {
        self.0.get(agent.index()).ok_or(Error::InvalidAgent {
            agent: agent.get(),
            agents: self.0.len(),
        })
    }

    /// Copy of this allocation with `agent`'s bundle raised by `delta` in every commodity.
    pub fn with_increment(&self, agent: AgentId, delta: &Quantity) -> Result<Allocation> {
        let bundle = self.bundle(agent)?.add_uniform(delta);
        let mut bundles = self.0.clone();
        bundles[agent.index()] = bundle;
        Ok(Allocation(bundles))
    }

    /// Per-commodity totals across all agents.
    pub fn totals(&self) -> Vec<Quantity> {
        (0..self.commodity_dim())
            .map(|c| self.0.iter().fold(Quantity::zero(), |acc, b| &acc + b.get(c)))
            .collect()
    }

    /// Scales every quantity by a positive rational.
    pub fn scaled(&self, factor: &Rational) -> Result<Allocation> {
        let bundles = self
            .0
            .iter()
            .map(|b| {
                b.quantities()
                    .iter()
                    .map(|q| Quantity::new(q.value() * factor))
                    .collect::<Result<Vec<_>>>()
                    .and_then(Bundle::new)
            })
            .collect::<Result<Vec<_>>>()?;
        Allocation::new(bundles)
    }
}

impl fmt::Display for Allocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{b}")?;
        }
        f.write_str(")")
    }
}

/// Parses `(1,2)` for single-commodity allocations and `([1,0],[2,3/2])` otherwise.
impl FromStr for Allocation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::InvalidAllocation(format!("{why} in `{}`", s.trim()));
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| bad("expected parentheses"))?;
        let mut bundles = Vec::new();
        for item in split_top_level(inner, ',').map_err(|why| bad(&why))? {
            let item = item.trim();
            let bundle = if let Some(body) = item.strip_prefix('[') {
                let body = body.strip_suffix(']').ok_or_else(|| bad("unclosed bracket"))?;
                let quantities = body
                    .split(',')
                    .map(|q| q.trim().parse::<Quantity>())
                    .collect::<Result<Vec<_>>>()?;
                Bundle::new(quantities)?
            } else {
                Bundle::new(vec![item.parse::<Quantity>()?])?
            };
            bundles.push(bundle);
        }
        Allocation::new(bundles)
    }
}

/// Splits on `sep` outside of `()` and `[]` nesting.
pub fn split_top_level(text: &str, sep: char) -> std::result::Result<Vec<&str>, String> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => {
                depth -= 1;
                if depth < 0 {
                    return Err("unbalanced brackets".into());
                }
            }
            c if c == sep && depth == 0 => {
                parts.push(&text[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err("unbalanced brackets".into());
    }
    parts.push(&text[start..]);
    Ok(parts)
}

/// An ordered pair of allocations `from -> to`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Move {
    from: Allocation,
    to: Allocation,
}

impl Move {
    pub fn new(from: Allocation, to: Allocation) -> Result<Self> {
        if from.n_agents() != to.n_agents() {
            return Err(Error::DimensionMismatch {
                expected: from.n_agents(),
                found: to.n_agents(),
            });
        }
        if from.commodity_dim() != to.commodity_dim() {
            return Err(Error::DimensionMismatch {
                expected: from.commodity_dim(),
                found: to.commodity_dim(),
            });
        }
        Ok(Move { from, to })
    }

    pub fn from(&self) -> &Allocation {
        &self.from
    }

    pub fn to(&self) -> &Allocation {
        &self.to
    }

    pub fn n_agents(&self) -> usize {
        self.from.n_agents()
    }

    pub fn commodity_dim(&self) -> usize {
        self.from.commodity_dim()
    }

    pub fn reversed(&self) -> Move {
        Move {
            from: self.to.clone(),
            to: self.from.clone(),
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.from, self.to)
    }
}

/// Parses `from -> to`.
impl FromStr for Move {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (from, to) = s
            .split_once("->")
            .ok_or_else(|| Error::InvalidAllocation(format!("expected `from -> to` in `{}`", s.trim())))?;
        Move::new(from.parse()?, to.parse()?)
    }
}

/// How each agent's own bundle changed across a move.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AgentClasses {
    pub gainers: BTreeSet<AgentId>,
    pub weak_losers: BTreeSet<AgentId>,
    pub mixed: BTreeSet<AgentId>,
}

/// Partitions the polity by the componentwise change of each own bundle.
pub fn classify_move_agents(m: &Move) -> AgentClasses {
    let mut classes = AgentClasses::default();
    for (index, (before, after)) in m.from.0.iter().zip(&m.to.0).enumerate() {
        let agent = AgentId::from_index(index);
        match compare_components(after.quantities(), before.quantities()) {
            PartialOrderResult::StrictlyGreater => classes.gainers.insert(agent),
            PartialOrderResult::Equal | PartialOrderResult::StrictlyLess => classes.weak_losers.insert(agent),
            PartialOrderResult::Incomparable => classes.mixed.insert(agent),
        };
    }
    classes
}
