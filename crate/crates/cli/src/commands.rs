use std::fmt;
use std::str::FromStr;

use paretoscope_core::{
    check_improvement, check_improvement_neoclassical, check_improvement_ratio_form, enumerate_feasible,
    enumerate_frontier, is_pareto_efficient, scan_all_moves, simulate_discovery, welfare_rank, Allocation,
    DiscoveryRun, EfficiencyVerdict, Error as CoreError, FeasibleSet, Frontier, ImprovementVerdict, Move, Ranking,
    ScanOptions, ScanReport, SwfSpec, TransformSpec, DEFAULT_MOVE_CAP, ENGINE_VERSION,
};

use crate::error::CliError;
use crate::scenario::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum Command {
    CheckMove,
    Efficient,
    Frontier,
    Scan,
    Discover,
    Welfare,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::CheckMove => "check-move",
            Command::Efficient => "efficient",
            Command::Frontier => "frontier",
            Command::Scan => "scan",
            Command::Discover => "discover",
            Command::Welfare => "welfare",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            Command::CheckMove,
            Command::Efficient,
            Command::Frontier,
            Command::Scan,
            Command::Discover,
            Command::Welfare,
        ]
        .into_iter()
        .find(|c| c.name() == s)
        .ok_or_else(|| format!("unknown command `{s}`"))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunFlags {
    /// Zero-based feasible state index, or an allocation literal.
    pub state: Option<String>,
    pub parallel: usize,
    /// Overrides `scan.cap`.
    pub cap: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportHeader {
    pub command: Command,
    pub scenario_digest: String,
    pub feasible: String,
    pub engine_version: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveRow {
    pub m: Move,
    pub definitional: ImprovementVerdict,
    pub neoclassical: ImprovementVerdict,
    /// `None` when the move falls outside the ratio form's hypotheses.
    pub ratio_form: Option<ImprovementVerdict>,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReportBody {
    CheckMove(Vec<MoveRow>),
    Efficient {
        state: Allocation,
        verdict: EfficiencyVerdict,
    },
    Frontier(Frontier),
    Scan(ScanReport),
    Discover(DiscoveryRun),
    Welfare(Ranking),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub header: ReportHeader,
    pub body: ReportBody,
    pub diagnostics: Vec<String>,
}

fn require_feasible(command: Command, scenario: &Scenario) -> Result<&FeasibleSet, CliError> {
    scenario.feasible.as_ref().ok_or_else(|| CliError::MissingField {
        command: command.name().into(),
        requirement: "`feasible.kind` and its parameters".into(),
    })
}

fn missing(command: Command, requirement: &str) -> CliError {
    CliError::MissingField {
        command: command.name().into(),
        requirement: requirement.into(),
    }
}

fn select_state(scenario: &Scenario, fs: &FeasibleSet, selector: &str) -> Result<Allocation, CliError> {
    let selector = selector.trim();
    if let Ok(id) = selector.parse::<usize>() {
        let states =
            enumerate_feasible(fs, &scenario.polity).map_err(|e| CliError::engine(format!("feasible set {fs}"), e))?;
        return states.get(id).cloned().ok_or_else(|| CliError::Validation {
            key: "--state".into(),
            message: format!("state id {id} out of range (feasible set has {} states)", states.len()),
        });
    }
    let state: Allocation = selector.parse().map_err(|e: CoreError| CliError::Validation {
        key: "--state".into(),
        message: e.to_string(),
    })?;
    scenario
        .polity
        .check_allocation(&state)
        .map_err(|e| CliError::Validation {
            key: "--state".into(),
            message: e.to_string(),
        })?;
    Ok(state)
}

fn check_move(m: &Move, transforms: &[TransformSpec]) -> Result<MoveRow, CliError> {
    let context = || format!("move {m}");
    let definitional = check_improvement(m, transforms).map_err(|e| CliError::engine(context(), e))?;
    let neoclassical = check_improvement_neoclassical(m);
    let ratio_form = match check_improvement_ratio_form(m, transforms) {
        Ok(v) => Some(v),
        Err(CoreError::HypothesisViolated(_)) => None,
        Err(e) => return Err(CliError::engine(context(), e)),
    };
    // the neoclassical verdict is only expected to match under own-bundle preferences
    let own_only = transforms.iter().all(|t| *t == TransformSpec::OwnBundle);
    let agree = ratio_form
        .as_ref()
        .is_none_or(|r| r.is_improvement == definitional.is_improvement)
        && (!own_only || neoclassical.is_improvement == definitional.is_improvement);
    Ok(MoveRow {
        m: m.clone(),
        definitional,
        neoclassical,
        ratio_form,
        agree,
    })
}

pub fn run_command(command: Command, scenario: &Scenario, flags: &RunFlags) -> Result<Report, CliError> {
    let transforms = &scenario.transforms;
    let mut diagnostics = Vec::new();
    let mut feasible = scenario
        .feasible
        .as_ref()
        .map_or_else(|| "none".to_string(), ToString::to_string);

    let body = match command {
        Command::CheckMove => {
            if scenario.moves.is_empty() {
                return Err(missing(command, "`moves`"));
            }
            ReportBody::CheckMove(
                scenario
                    .moves
                    .iter()
                    .map(|m| check_move(m, transforms))
                    .collect::<Result<_, _>>()?,
            )
        }
        Command::Efficient => {
            let fs = require_feasible(command, scenario)?;
            let selector = flags.state.as_deref().ok_or_else(|| missing(command, "`--state`"))?;
            let state = select_state(scenario, fs, selector)?;
            let verdict = is_pareto_efficient(&state, fs, transforms)
                .map_err(|e| CliError::engine(format!("efficiency of state {state}"), e))?;
            if !verdict.in_feasible_set {
                diagnostics.push(format!("warning: state {state} is not a member of the feasible set"));
            }
            if verdict.skipped_states > 0 {
                diagnostics.push(format!(
                    "skipped {} candidate states where a transform is undefined",
                    verdict.skipped_states
                ));
            }
            ReportBody::Efficient { state, verdict }
        }
        Command::Frontier => {
            let fs = require_feasible(command, scenario)?;
            let frontier = enumerate_frontier(&scenario.polity, fs, transforms)
                .map_err(|e| CliError::engine(format!("frontier of {fs}"), e))?;
            for entry in frontier.skipped() {
                diagnostics.push(format!("skipped state {}: a transform is undefined there", entry.state));
            }
            ReportBody::Frontier(frontier)
        }
        Command::Scan => {
            let fs = require_feasible(command, scenario)?;
            let options = ScanOptions {
                cap: Some(flags.cap.or(scenario.scan_cap).unwrap_or(DEFAULT_MOVE_CAP)),
                workers: flags.parallel.max(1),
            };
            let report = scan_all_moves(&scenario.polity, fs, transforms, &options)
                .map_err(|e| CliError::engine(format!("scan of {fs}"), e))?;
            for s in &report.skipped_states {
                diagnostics.push(format!("skipped state {s}: a transform is undefined there"));
            }
            ReportBody::Scan(report)
        }
        Command::Discover => {
            let d = scenario
                .discover
                .as_ref()
                .ok_or_else(|| missing(command, "the `discover.*` keys"))?;
            let run = simulate_discovery(&d.initial, d.beneficiary, d.steps, &d.increment, &d.lattice_step)
                .map_err(|e| CliError::engine(format!("discovery from {}", d.initial), e))?;
            feasible = format!("fixed_total at each trajectory state step={}", d.lattice_step);
            ReportBody::Discover(run)
        }
        Command::Welfare => {
            let fs = require_feasible(command, scenario)?;
            let combiner = scenario.swf.clone().ok_or_else(|| missing(command, "`swf`"))?;
            let swf = SwfSpec::with_unit_values(combiner, &scenario.polity);
            let states = enumerate_feasible(fs, &scenario.polity)
                .map_err(|e| CliError::engine(format!("feasible set {fs}"), e))?;
            let ranking =
                welfare_rank(&swf, &states).map_err(|e| CliError::engine(format!("swf {}", swf.combiner), e))?;
            if ranking.has_ties() {
                diagnostics.push("some states share a welfare value; ties keep enumeration order".into());
            }
            ReportBody::Welfare(ranking)
        }
    };

    Ok(Report {
        header: ReportHeader {
            command,
            scenario_digest: scenario.digest.clone(),
            feasible,
            engine_version: ENGINE_VERSION.to_string(),
        },
        body,
        diagnostics,
    })
}
