use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn paretoscope(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_paretoscope"))
        .args(args)
        .output()
        .expect("run paretoscope")
}

fn run_csv(command: &str, scenario: &Path, extra: &[&str]) -> Output {
    let scenario = scenario.to_str().unwrap();
    let mut args = vec![command, "--scenario", scenario, "--format", "csv"];
    args.extend_from_slice(extra);
    paretoscope(&args)
}

fn write_scenario(dir: &tempfile::TempDir, text: &str) -> PathBuf {
    let path = dir.path().join("scenario.scn");
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn golden_csv_outputs() {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut checked = 0;
    for entry in std::fs::read_dir(&golden).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_str().unwrap().to_string();
        let mut parts = name.strip_suffix(".csv").unwrap().splitn(2, '.');
        let (scenario, command) = (parts.next().unwrap(), parts.next().unwrap());
        let out = run_csv(command, &fixture(&format!("{scenario}.scn")), &[]);
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        let expected = std::fs::read(&path).unwrap();
        assert_eq!(
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&expected),
            "{name}"
        );
        checked += 1;
    }
    assert!(checked >= 10);
}

#[test]
fn repeated_runs_are_byte_identical() {
    for (command, scenario) in [
        ("frontier", "mixed.scn"),
        ("scan", "two_goods.scn"),
        ("discover", "discovery.scn"),
    ] {
        for format in ["csv", "table"] {
            let path = fixture(scenario);
            let args = [command, "--scenario", path.to_str().unwrap(), "--format", format];
            let first = paretoscope(&args);
            let second = paretoscope(&args);
            assert!(first.status.success());
            assert_eq!(first.stdout, second.stdout, "{command} {scenario} {format}");
        }
    }
}

#[test]
fn worker_count_does_not_change_scan_output() {
    for scenario in ["own_grid.scn", "two_goods.scn", "mixed.scn"] {
        let path = fixture(scenario);
        let one = run_csv("scan", &path, &["--parallel", "1"]);
        for workers in ["2", "3", "8"] {
            let many = run_csv("scan", &path, &["--parallel", workers]);
            assert_eq!(one.stdout, many.stdout, "{scenario} with {workers} workers");
        }
        // the table lists every improving move, so it exercises the merge order too
        let table = |w: &str| paretoscope(&["scan", "--scenario", path.to_str().unwrap(), "--parallel", w]).stdout;
        assert_eq!(table("1"), table("4"));
    }
}

#[test]
fn table_header_names_scenario_and_feasible_set() {
    let out = paretoscope(&["frontier", "--scenario", fixture("own_grid.scn").to_str().unwrap()]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("paretoscope ") && lines[0].ends_with("command: frontier"));
    assert!(lines[1].starts_with("scenario: ") && lines[1].len() == "scenario: ".len() + 16);
    assert_eq!(lines[2], "feasible set: box_grid levels={0,1,2}");
}

#[test]
fn output_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("frontier.csv");
    let out = run_csv(
        "frontier",
        &fixture("own_grid.scn"),
        &["--output", target.to_str().unwrap()],
    );
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&target).unwrap();
    assert!(written.starts_with("state_id,allocation,efficient\n"));
}

#[test]
fn efficient_accepts_ids_and_literals() {
    let path = fixture("own_grid.scn");
    let by_id = run_csv("efficient", &path, &["--state", "4"]);
    let by_literal = run_csv("efficient", &path, &["--state", "(1,1)"]);
    assert_eq!(by_id.stdout, by_literal.stdout);
    assert_eq!(
        String::from_utf8(by_id.stdout).unwrap(),
        "state,efficient,witness\n\"(1,1)\",false,\"(1,1)->(1,2)\"\n"
    );
    let top = run_csv("efficient", &path, &["--state", "(2,2)"]);
    assert_eq!(
        String::from_utf8(top.stdout).unwrap(),
        "state,efficient,witness\n\"(2,2)\",true,\n"
    );
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let code = |out: Output| out.status.code().unwrap();

    // validation and parse problems
    let bad = write_scenario(
        &dir,
        "agents = 2\ncommodities = 1\ntransform = own\nswf = weighted_sum(0,0)\n",
    );
    let out = run_csv("welfare", &bad, &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("weights all zero"));
    let bad = write_scenario(
        &dir,
        "agents = 2\ncommodities = 1\ntransform = own\nfeasible.kind box_grid\n",
    );
    let out = run_csv("scan", &bad, &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4, column 1"));
    assert_eq!(code(run_csv("scan", &dir.path().join("missing.scn"), &[])), 1);
    assert_eq!(code(paretoscope(&["explode", "--scenario", "x"])), 1);
    assert_eq!(code(paretoscope(&["--help"])), 0);

    // a required field for the command is absent
    let out = run_csv("discover", &fixture("own_grid.scn"), &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("discover"));

    // engine errors name the move that triggered them
    let zero = write_scenario(
        &dir,
        "agents = 2\ncommodities = 1\ntransform = relative_mean\nmoves = (0,0)->(1,1)\n",
    );
    let out = run_csv("check-move", &zero, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("(0,0)->(1,1)"));

    assert_eq!(code(run_csv("scan", &fixture("own_grid.scn"), &["--cap", "71"])), 3);
    assert_eq!(code(run_csv("scan", &fixture("own_grid.scn"), &["--cap", "72"])), 0);
}
