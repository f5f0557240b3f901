//! Report rendering.
//!
//! CSV columns per command:
//!
//! | command    | columns                                                              |
//! |------------|----------------------------------------------------------------------|
//! | check-move | `move_id,from,to,definitional,neoclassical,ratio_form,agree`         |
//! | efficient  | `state,efficient,witness`                                            |
//! | frontier   | `state_id,allocation,efficient`                                      |
//! | scan       | `states,moves,improvements,efficient_states`                         |
//! | discover   | `step,allocation,improvement,efficient,gap`                          |
//! | welfare    | `rank,state_id,allocation,welfare,tied`                              |
//!
//! CSV output has no metadata lines; the table format adds a header with the
//! scenario digest, feasible set and engine version, and lists diagnostics at
//! the end. Rationals are written as `p/q`, or `p` when integral.

use paretoscope_core::{format_rational, FrontierStatus, ImprovementVerdict};

use crate::commands::{Report, ReportBody};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Csv,
}

struct Table {
    title: Option<&'static str>,
    columns: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

fn flag(b: bool) -> String {
    b.to_string()
}

fn verdict(v: &ImprovementVerdict) -> String {
    flag(v.is_improvement)
}

fn tables(body: &ReportBody) -> Vec<Table> {
    match body {
        ReportBody::CheckMove(rows) => vec![Table {
            title: None,
            columns: vec![
                "move_id",
                "from",
                "to",
                "definitional",
                "neoclassical",
                "ratio_form",
                "agree",
            ],
            rows: rows
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    vec![
                        i.to_string(),
                        r.m.from().to_string(),
                        r.m.to().to_string(),
                        verdict(&r.definitional),
                        verdict(&r.neoclassical),
                        r.ratio_form.as_ref().map_or_else(|| "n/a".to_string(), verdict),
                        if r.agree { "yes" } else { "no" }.to_string(),
                    ]
                })
                .collect(),
        }],
        ReportBody::Efficient { state, verdict } => vec![Table {
            title: None,
            columns: vec!["state", "efficient", "witness"],
            rows: vec![vec![
                state.to_string(),
                flag(verdict.is_efficient),
                verdict.witness.as_ref().map_or_else(String::new, ToString::to_string),
            ]],
        }],
        ReportBody::Frontier(frontier) => vec![Table {
            title: None,
            columns: vec!["state_id", "allocation", "efficient"],
            rows: frontier
                .entries
                .iter()
                .map(|e| {
                    let status = match e.status {
                        FrontierStatus::Efficient => "true",
                        FrontierStatus::Dominated => "false",
                        FrontierStatus::Skipped => "skipped",
                    };
                    vec![e.state_id.to_string(), e.state.to_string(), status.to_string()]
                })
                .collect(),
        }],
        ReportBody::Scan(scan) => vec![
            Table {
                title: None,
                columns: vec!["states", "moves", "improvements", "efficient_states"],
                rows: vec![vec![
                    scan.states_examined.to_string(),
                    scan.moves_examined.to_string(),
                    scan.improvements_found.to_string(),
                    scan.efficient_state_count.to_string(),
                ]],
            },
            Table {
                title: Some("improving moves"),
                columns: vec!["from", "to"],
                rows: scan
                    .improving_moves
                    .iter()
                    .map(|m| vec![m.from().to_string(), m.to().to_string()])
                    .collect(),
            },
        ],
        ReportBody::Discover(run) => vec![Table {
            title: None,
            columns: vec!["step", "allocation", "improvement", "efficient", "gap"],
            rows: run
                .trajectory
                .iter()
                .enumerate()
                .map(|(t, state)| {
                    let improvement = match t {
                        0 => String::new(),
                        _ => verdict(&run.step_verdicts[t - 1]),
                    };
                    vec![
                        t.to_string(),
                        state.to_string(),
                        improvement,
                        flag(run.efficiency_verdicts[t].is_efficient),
                        format_rational(&run.gap_series[t]),
                    ]
                })
                .collect(),
        }],
        ReportBody::Welfare(ranking) => vec![Table {
            title: None,
            columns: vec!["rank", "state_id", "allocation", "welfare", "tied"],
            rows: ranking
                .entries
                .iter()
                .enumerate()
                .map(|(rank, e)| {
                    vec![
                        (rank + 1).to_string(),
                        e.state_id.to_string(),
                        e.state.to_string(),
                        format_rational(&e.value),
                        flag(e.tied),
                    ]
                })
                .collect(),
        }],
    }
}

fn write_csv(table: &Table) -> Vec<u8> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer.write_record(&table.columns).expect("write to memory");
    for row in &table.rows {
        writer.write_record(row).expect("write to memory");
    }
    writer.into_inner().expect("flush to memory")
}

fn write_aligned(out: &mut String, table: &Table) {
    let mut widths: Vec<usize> = table.columns.iter().map(|c| c.len()).collect();
    for row in &table.rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut line = |cells: &mut dyn Iterator<Item = &str>| {
        let text: Vec<String> = cells.zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
        out.push_str(text.join("  ").trim_end());
        out.push('\n');
    };
    line(&mut table.columns.iter().copied());
    let rules: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
    line(&mut rules.iter().map(String::as_str));
    for row in &table.rows {
        line(&mut row.iter().map(String::as_str));
    }
}

/// Renders a report. The same report always yields the same bytes.
pub fn emit_report(report: &Report, format: Format) -> Vec<u8> {
    let tables = tables(&report.body);
    match format {
        Format::Csv => write_csv(&tables[0]),
        Format::Table => {
            let h = &report.header;
            let mut out = format!(
                "paretoscope {}  command: {}\nscenario: {}\nfeasible set: {}\n",
                h.engine_version, h.command, h.scenario_digest, h.feasible
            );
            for table in &tables {
                out.push('\n');
                if let Some(title) = table.title {
                    out.push_str(title);
                    out.push_str(":\n");
                }
                write_aligned(&mut out, table);
            }
            if !report.diagnostics.is_empty() {
                out.push_str("\ndiagnostics:\n");
                for d in &report.diagnostics {
                    out.push_str("  ");
                    out.push_str(d);
                    out.push('\n');
                }
            }
            out.into_bytes()
        }
    }
}
