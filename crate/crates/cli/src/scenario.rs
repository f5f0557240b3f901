//! Scenario files.
//!
//! A scenario is a UTF-8 text file of `key = value` lines. Blank lines and
//! lines starting with `#` are ignored; keys may appear at most once.
//!
//! ```text
//! agents = 2
//! commodities = 1
//! feasible.kind = box_grid          # box_grid | fixed_total | list
//! feasible.levels = 0..2            # or 0,1,2 ; per commodity: 0,1,2; 0,1
//! feasible.total = 2                # fixed_total: one total, or one per commodity
//! feasible.step = 1
//! feasible.list = (0,2); (1,1)      # list: allocations separated by `;`
//! transform = own                   # default for every agent
//! transform.2 = relative_mean       # per-agent override (ids start at 1)
//! swf = maximin                     # sum | weighted_sum(w1,...) | maximin
//! moves = (1,1)->(2,1); (1,1)->(2,0)
//! discover.initial = (1,1)
//! discover.beneficiary = 1
//! discover.steps = 10
//! discover.increment = 1
//! discover.lattice_step = 1         # defaults to feasible.step, else 1
//! scan.cap = 100000
//! ```
//!
//! Quantities are integers, decimals or `p/q` fractions, all exact.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use paretoscope_core::polity::split_top_level;
use paretoscope_core::{
    AgentId, Allocation, Combiner, Error as CoreError, FeasibleSet, Move, Polity, Quantity, TransformSpec,
};
use sha2::{Digest, Sha256};

use crate::error::CliError;

const KNOWN_KEYS: &[&str] = &[
    "agents",
    "commodities",
    "feasible.kind",
    "feasible.levels",
    "feasible.total",
    "feasible.step",
    "feasible.list",
    "transform",
    "swf",
    "moves",
    "discover.initial",
    "discover.beneficiary",
    "discover.steps",
    "discover.increment",
    "discover.lattice_step",
    "scan.cap",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscoverParams {
    pub initial: Allocation,
    pub beneficiary: AgentId,
    pub steps: usize,
    pub increment: Quantity,
    pub lattice_step: Quantity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub polity: Polity,
    pub feasible: Option<FeasibleSet>,
    pub transforms: Vec<TransformSpec>,
    pub swf: Option<Combiner>,
    pub moves: Vec<Move>,
    pub discover: Option<DiscoverParams>,
    pub scan_cap: Option<u64>,
    /// Leading 16 hex digits of the SHA-256 of the file contents.
    pub digest: String,
}

#[derive(Debug, Clone)]
struct Entry {
    line: usize,
    column: usize,
    value: String,
}

pub fn parse_scenario(path: &Path) -> Result<Scenario, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let text = String::from_utf8(bytes).map_err(|_| CliError::Parse {
        line: 0,
        column: 0,
        message: "scenario file is not valid UTF-8".into(),
    })?;
    parse_scenario_str(&text)
}

pub fn parse_scenario_str(text: &str) -> Result<Scenario, CliError> {
    let entries = read_entries(text)?;
    let digest = digest(text);
    Builder { entries: &entries }.build(digest)
}

fn digest(text: &str) -> String {
    let hash = Sha256::digest(text.as_bytes());
    let mut out = String::with_capacity(16);
    for byte in &hash[..8] {
        write!(out, "{byte:02x}").expect("write to string");
    }
    out
}

fn read_entries(text: &str) -> Result<BTreeMap<String, Entry>, CliError> {
    let mut entries = BTreeMap::new();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let Some(eq) = content.find('=') else {
            return Err(CliError::Parse {
                line,
                column: content.len() - content.trim_start().len() + 1,
                message: "expected `key = value`".into(),
            });
        };
        let key = content[..eq].trim().to_string();
        if key.is_empty() {
            return Err(CliError::Parse {
                line,
                column: 1,
                message: "missing key before `=`".into(),
            });
        }
        let after = &content[eq + 1..];
        let value = after.trim().to_string();
        let column = eq + 2 + (after.len() - after.trim_start().len());
        if entries.contains_key(&key) {
            return Err(CliError::Parse {
                line,
                column: 1,
                message: format!("duplicate key `{key}`"),
            });
        }
        entries.insert(key, Entry { line, column, value });
    }
    Ok(entries)
}

struct Builder<'a> {
    entries: &'a BTreeMap<String, Entry>,
}

impl Builder<'_> {
    fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.get(key)
    }

    fn require(&self, key: &str) -> Result<&Entry, CliError> {
        self.get(key).ok_or_else(|| CliError::Validation {
            key: key.to_string(),
            message: "required key is missing".into(),
        })
    }

    /// Maps a core error raised while reading `key` to a parse or validation error.
    fn lift(&self, key: &str, err: CoreError) -> CliError {
        let entry = self.get(key);
        match err {
            CoreError::InvalidQuantity(_) | CoreError::InvalidAllocation(_) | CoreError::InvalidTransform(_) => {
                CliError::Parse {
                    line: entry.map_or(0, |e| e.line),
                    column: entry.map_or(0, |e| e.column),
                    message: format!("{key}: {err}"),
                }
            }
            CoreError::InvalidWeights(why) => CliError::Validation {
                key: key.to_string(),
                message: why,
            },
            other => CliError::Validation {
                key: key.to_string(),
                message: other.to_string(),
            },
        }
    }

    fn parse_with<T>(&self, key: &str, f: impl FnOnce(&str) -> Result<T, CoreError>) -> Result<Option<T>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some(entry) => f(&entry.value).map(Some).map_err(|e| self.lift(key, e)),
        }
    }

    fn positive_int(&self, key: &str) -> Result<Option<usize>, CliError> {
        let Some(entry) = self.get(key) else {
            return Ok(None);
        };
        match entry.value.parse::<usize>() {
            Ok(0) => Err(CliError::Validation {
                key: key.to_string(),
                message: "must be at least 1".into(),
            }),
            Ok(n) => Ok(Some(n)),
            Err(_) => Err(CliError::Parse {
                line: entry.line,
                column: entry.column,
                message: format!("{key}: expected a positive integer, found `{}`", entry.value),
            }),
        }
    }

    fn build(&self, digest: String) -> Result<Scenario, CliError> {
        for key in self.entries.keys() {
            let known = KNOWN_KEYS.contains(&key.as_str())
                || key
                    .strip_prefix("transform.")
                    .is_some_and(|id| id.parse::<usize>().is_ok_and(|id| id >= 1));
            if !known {
                return Err(CliError::Validation {
                    key: key.clone(),
                    message: "unknown key".into(),
                });
            }
        }

        self.require("agents")?;
        self.require("commodities")?;
        let agents = self.positive_int("agents")?.expect("required");
        let commodities = self.positive_int("commodities")?.expect("required");
        let polity = Polity::new(agents, commodities).map_err(|e| self.lift("agents", e))?;

        let feasible = self.feasible(&polity)?;
        let transforms = self.transforms(&polity)?;
        let swf = self.parse_with("swf", |v| v.parse::<Combiner>())?;
        if let Some(Combiner::WeightedSum(w)) = &swf {
            if w.len() != agents {
                return Err(CliError::Validation {
                    key: "swf".into(),
                    message: format!("expected {agents} weights, found {}", w.len()),
                });
            }
        }
        let moves = self
            .parse_with("moves", |v| {
                split_top_level(v, ';')
                    .map_err(CoreError::InvalidAllocation)?
                    .into_iter()
                    .filter(|m| !m.trim().is_empty())
                    .map(str::parse::<Move>)
                    .collect::<Result<Vec<_>, _>>()
            })?
            .unwrap_or_default();
        for m in &moves {
            polity.check_allocation(m.from()).map_err(|e| self.lift("moves", e))?;
        }
        let discover = self.discover(&polity, feasible.as_ref())?;
        let scan_cap = match self.get("scan.cap") {
            None => None,
            Some(entry) => Some(entry.value.parse::<u64>().map_err(|_| CliError::Parse {
                line: entry.line,
                column: entry.column,
                message: format!("scan.cap: expected a non-negative integer, found `{}`", entry.value),
            })?),
        };

        Ok(Scenario {
            polity,
            feasible,
            transforms,
            swf,
            moves,
            discover,
            scan_cap,
            digest,
        })
    }

    fn feasible(&self, polity: &Polity) -> Result<Option<FeasibleSet>, CliError> {
        let Some(kind) = self.get("feasible.kind") else {
            for key in ["feasible.levels", "feasible.total", "feasible.step", "feasible.list"] {
                if self.get(key).is_some() {
                    return Err(CliError::Validation {
                        key: "feasible.kind".into(),
                        message: format!("`{key}` is set but `feasible.kind` is missing"),
                    });
                }
            }
            return Ok(None);
        };
        let fs = match kind.value.as_str() {
            "box_grid" => {
                self.require("feasible.levels")?;
                let levels = self.parse_with("feasible.levels", parse_levels)?.expect("required");
                FeasibleSet::BoxGrid { levels }
            }
            "fixed_total" => {
                self.require("feasible.total")?;
                self.require("feasible.step")?;
                let totals = self.parse_with("feasible.total", parse_quantities)?.expect("required");
                let step = self
                    .parse_with("feasible.step", |v| v.parse::<Quantity>())?
                    .expect("required");
                FeasibleSet::FixedTotalLattice { totals, step }
            }
            "list" => {
                self.require("feasible.list")?;
                let list = self
                    .parse_with("feasible.list", |v| {
                        split_top_level(v, ';')
                            .map_err(CoreError::InvalidAllocation)?
                            .into_iter()
                            .filter(|a| !a.trim().is_empty())
                            .map(str::parse::<Allocation>)
                            .collect::<Result<Vec<_>, _>>()
                    })?
                    .expect("required");
                if list.is_empty() {
                    return Err(CliError::Validation {
                        key: "feasible.list".into(),
                        message: "list is empty".into(),
                    });
                }
                FeasibleSet::ExplicitList(list)
            }
            other => {
                return Err(CliError::Validation {
                    key: "feasible.kind".into(),
                    message: format!("unknown kind `{other}` (expected box_grid, fixed_total or list)"),
                })
            }
        };
        // surfaces step/total and dimension problems now rather than at run time
        let key = match &fs {
            FeasibleSet::BoxGrid { .. } => "feasible.levels",
            FeasibleSet::FixedTotalLattice { .. } => "feasible.total",
            FeasibleSet::ExplicitList(_) => "feasible.list",
        };
        fs.iter(polity).map_err(|e| self.lift(key, e))?;
        Ok(Some(fs))
    }

    fn transforms(&self, polity: &Polity) -> Result<Vec<TransformSpec>, CliError> {
        let default = self.parse_with("transform", |v| v.parse::<TransformSpec>())?;
        for key in self.entries.keys() {
            if let Some(id) = key.strip_prefix("transform.") {
                let id: usize = id.parse().expect("checked in build");
                if id > polity.n_agents() {
                    return Err(CliError::Validation {
                        key: key.clone(),
                        message: format!("agent {id} does not exist (polity has {} agents)", polity.n_agents()),
                    });
                }
            }
        }
        polity
            .agents()
            .map(|agent| {
                let key = format!("transform.{agent}");
                let t = match self.parse_with(&key, |v| v.parse::<TransformSpec>())? {
                    Some(t) => t,
                    None => default.clone().ok_or_else(|| CliError::Validation {
                        key: key.clone(),
                        message: "no transform for this agent and no default `transform`".into(),
                    })?,
                };
                let source = if self.get(&key).is_some() {
                    key.as_str()
                } else {
                    "transform"
                };
                t.validate(polity).map_err(|e| self.lift(source, e))?;
                if let TransformSpec::RelativeToNeighborhood { neighbors, .. } = &t {
                    if neighbors.len() == 1 && neighbors.contains(&agent) {
                        return Err(CliError::Validation {
                            key: source.to_string(),
                            message: format!("agent {agent}'s neighbourhood contains only itself"),
                        });
                    }
                }
                Ok(t)
            })
            .collect()
    }

    fn discover(&self, polity: &Polity, feasible: Option<&FeasibleSet>) -> Result<Option<DiscoverParams>, CliError> {
        let keys = [
            "discover.initial",
            "discover.beneficiary",
            "discover.steps",
            "discover.increment",
        ];
        if keys.iter().all(|k| self.get(k).is_none()) && self.get("discover.lattice_step").is_none() {
            return Ok(None);
        }
        for key in keys {
            self.require(key)?;
        }
        let initial = self
            .parse_with("discover.initial", |v| v.parse::<Allocation>())?
            .expect("required");
        polity
            .check_allocation(&initial)
            .map_err(|e| self.lift("discover.initial", e))?;
        let beneficiary = self.positive_int("discover.beneficiary")?.expect("required");
        let beneficiary = AgentId::new(beneficiary).expect("positive");
        polity
            .check_agent(beneficiary)
            .map_err(|e| self.lift("discover.beneficiary", e))?;
        let steps = self.positive_int("discover.steps")?.expect("required");
        let increment = self
            .parse_with("discover.increment", |v| v.parse::<Quantity>())?
            .expect("required");
        if increment.is_zero() {
            return Err(CliError::Validation {
                key: "discover.increment".into(),
                message: "must be strictly positive".into(),
            });
        }
        let lattice_step = match self.parse_with("discover.lattice_step", |v| v.parse::<Quantity>())? {
            Some(step) => step,
            None => match feasible {
                Some(FeasibleSet::FixedTotalLattice { step, .. }) => step.clone(),
                _ => Quantity::from(1),
            },
        };
        Ok(Some(DiscoverParams {
            initial,
            beneficiary,
            steps,
            increment,
            lattice_step,
        }))
    }
}

fn parse_quantities(text: &str) -> Result<Vec<Quantity>, CoreError> {
    text.split(',').map(|q| q.trim().parse::<Quantity>()).collect()
}

/// `0,1,2`, `{0,1,2}`, `0..2` (inclusive integer range), or several of
/// those separated by `;`, one per commodity.
fn parse_levels(text: &str) -> Result<Vec<Vec<Quantity>>, CoreError> {
    text.split(';')
        .map(|part| {
            let part = part.trim();
            let part = part
                .strip_prefix('{')
                .and_then(|p| p.strip_suffix('}'))
                .unwrap_or(part)
                .trim();
            if let Some((lo, hi)) = part.split_once("..") {
                let bad = || CoreError::InvalidQuantity(part.to_string());
                let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
                let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
                if lo > hi {
                    return Err(bad());
                }
                return Ok((lo..=hi).map(Quantity::from).collect());
            }
            parse_quantities(part)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use paretoscope_core::enumerate_feasible;

    const MINIMAL: &str =
        "agents = 2\ncommodities = 1\nfeasible.kind = box_grid\nfeasible.levels = 0..2\ntransform = own\n";

    fn validation_key(err: CliError) -> String {
        match err {
            CliError::Validation { key, .. } => key,
            other => panic!("expected a validation error, got {other:?}"),
        }
    }

    #[test]
    fn minimal_scenario() {
        let s = parse_scenario_str(MINIMAL).unwrap();
        assert_eq!(s.transforms, vec![TransformSpec::OwnBundle; 2]);
        let states = enumerate_feasible(s.feasible.as_ref().unwrap(), &s.polity).unwrap();
        assert_eq!(states.len(), 9);
        assert_eq!(s.digest.len(), 16);
    }

    #[test]
    fn default_transform_applies_to_every_agent() {
        let s = parse_scenario_str("agents = 3\ncommodities = 1\ntransform = relative_mean\n").unwrap();
        assert_eq!(s.transforms, vec![TransformSpec::relative_mean(); 3]);
        assert!(s.feasible.is_none());
    }

    #[test]
    fn per_agent_overrides() {
        let s = parse_scenario_str("agents = 2\ncommodities = 1\ntransform = own\ntransform.2 = relative_nbhd(1)\n")
            .unwrap();
        assert_eq!(s.transforms[0], TransformSpec::OwnBundle);
        assert_eq!(s.transforms[1].to_string(), "relative_nbhd(1)");
    }

    #[test]
    fn all_zero_welfare_weights() {
        let err = parse_scenario_str(&format!("{MINIMAL}swf = weighted_sum(0,0)\n")).unwrap_err();
        match err {
            CliError::Validation { key, message } => {
                assert_eq!(key, "swf");
                assert_eq!(message, "weights all zero");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_line_and_column() {
        let err = parse_scenario_str("agents = 2\ncommodities 1\n").unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 2, column: 1, .. }), "{err:?}");

        let err = parse_scenario_str("agents = 2\ncommodities = 1\ntransform = sideways\n").unwrap_err();
        assert!(
            matches!(
                err,
                CliError::Parse {
                    line: 3,
                    column: 13,
                    ..
                }
            ),
            "{err:?}"
        );

        let err = parse_scenario_str("agents = 2\nagents = 3\n").unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 2, .. }), "{err:?}");

        let err = parse_scenario_str(&format!("{MINIMAL}moves = (1,1)->(x,1)\n")).unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 6, column: 9, .. }), "{err:?}");
    }

    #[test]
    fn validation_errors_name_the_key() {
        assert_eq!(
            validation_key(parse_scenario_str("commodities = 1\n").unwrap_err()),
            "agents"
        );
        assert_eq!(
            validation_key(parse_scenario_str("agents = 2\ncommodities = 1\ncolour = red\n").unwrap_err()),
            "colour"
        );
        assert_eq!(
            validation_key(parse_scenario_str("agents = 2\ncommodities = 1\n").unwrap_err()),
            "transform.1"
        );
        assert_eq!(
            validation_key(
                parse_scenario_str("agents = 2\ncommodities = 1\ntransform = relative_nbhd(3)\n").unwrap_err()
            ),
            "transform"
        );
        assert_eq!(
            validation_key(
                parse_scenario_str("agents = 2\ncommodities = 1\ntransform = own\ntransform.2 = relative_nbhd(2)\n")
                    .unwrap_err()
            ),
            "transform.2"
        );
        assert_eq!(
            validation_key(
                parse_scenario_str("agents = 2\ncommodities = 1\ntransform = own\ntransform.3 = own\n").unwrap_err()
            ),
            "transform.3"
        );
        let lattice = "agents = 2\ncommodities = 1\ntransform = own\nfeasible.kind = fixed_total\nfeasible.total = 3\nfeasible.step = 2\n";
        assert_eq!(
            validation_key(parse_scenario_str(lattice).unwrap_err()),
            "feasible.total"
        );
        let no_kind = "agents = 2\ncommodities = 1\ntransform = own\nfeasible.levels = 0,1\n";
        assert_eq!(
            validation_key(parse_scenario_str(no_kind).unwrap_err()),
            "feasible.kind"
        );
        let bad_beneficiary = format!(
            "{MINIMAL}discover.initial = (1,1)\ndiscover.beneficiary = 3\ndiscover.steps = 2\ndiscover.increment = 1\n"
        );
        assert_eq!(
            validation_key(parse_scenario_str(&bad_beneficiary).unwrap_err()),
            "discover.beneficiary"
        );
        let partial = format!("{MINIMAL}discover.steps = 2\n");
        assert_eq!(
            validation_key(parse_scenario_str(&partial).unwrap_err()),
            "discover.initial"
        );
    }

    #[test]
    fn full_scenario() {
        let text = "\
# everything at once
agents = 2
commodities = 1
feasible.kind = fixed_total
feasible.total = 4
feasible.step = 1/2
transform = own
swf = weighted_sum(1, 1/2)
moves = (1,1)->(2,1); (1,1) -> (2,0)
discover.initial = (1,1)
discover.beneficiary = 2
discover.steps = 3
discover.increment = 0.5
scan.cap = 500
";
        let s = parse_scenario_str(text).unwrap();
        assert_eq!(s.moves.len(), 2);
        assert_eq!(s.scan_cap, Some(500));
        let d = s.discover.unwrap();
        assert_eq!(d.lattice_step, "1/2".parse().unwrap());
        assert_eq!(d.increment, "1/2".parse().unwrap());
        assert_eq!(s.swf.unwrap().to_string(), "weighted_sum(1,1/2)");
    }

    #[test]
    fn level_syntax() {
        let parsed = parse_levels("{0,1/2}; 0..2").unwrap();
        assert_eq!(parsed.len(), 2);
        assert_eq!(parsed[0].len(), 2);
        assert_eq!(parsed[1], vec![Quantity::from(0), Quantity::from(1), Quantity::from(2)]);
        assert!(parse_levels("3..1").is_err());
    }

    #[test]
    fn explicit_list() {
        let s = parse_scenario_str(
            "agents = 2\ncommodities = 1\ntransform = own\nfeasible.kind = list\nfeasible.list = (0,2); (1,1);\n",
        )
        .unwrap();
        assert_eq!(
            s.feasible.unwrap(),
            FeasibleSet::ExplicitList(vec![
                Allocation::from_scalars(&[0, 2]),
                Allocation::from_scalars(&[1, 1])
            ])
        );
    }

    #[test]
    fn digest_tracks_content() {
        let a = parse_scenario_str(MINIMAL).unwrap();
        let b = parse_scenario_str(&format!("{MINIMAL}# comment\n")).unwrap();
        assert_ne!(a.digest, b.digest);
        assert_eq!(a.digest, parse_scenario_str(MINIMAL).unwrap().digest);
    }
}
