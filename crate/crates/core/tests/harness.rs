use lhybrid::harness::config::{parse_key_values, SweepConfig};
use lhybrid::harness::{cmd_profile, run_sweep, write_csv};
use std::process::Command;

fn lhybrid(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_lhybrid"))
        .args(args)
        .output()
        .expect("run lhybrid");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn csv_is_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for threads in ["1", "3"] {
        let path = dir.path().join(format!("out{threads}.csv"));
        let (code, _, err) = lhybrid(&[
            "verify",
            "--moduli",
            "27,64",
            "--chars",
            "all",
            "--t-count",
            "4",
            "--t-max",
            "900",
            "--threads",
            threads,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "{err}");
        files.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(files[0], files[1]);
    let text = String::from_utf8(files.pop().unwrap()).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("q,chi_index,conductor,primitive,t,"));
    // 18 + 32 characters, 4 heights
    assert_eq!(lines.count(), 50 * 4);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.cfg");
    let json = dir.path().join("summary.json");
    std::fs::write(&cfg, "# small sweep\nmoduli = 9\nt_min = 300\nt_max = 400\nt_count = 2\nbounds = all\n").unwrap();
    let (code, out, err) = lhybrid(&[
        "verify",
        "--config",
        cfg.to_str().unwrap(),
        "--t-count",
        "3",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    // 4 primitive characters mod 9, 3 heights
    assert!(out.starts_with("cells: 12  passed: 12  failed: 0"), "{out}");
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&json).unwrap()).unwrap();
    assert_eq!(v["config"]["t_grid"]["count"], 3);
    assert_eq!(v["failed"], 0);
    assert!(v["families"]["rademacher"]["checked"].as_u64().unwrap() > 0);
}

#[test]
fn exit_codes() {
    assert_eq!(lhybrid(&["profile", "64"]).0, 0);
    assert_eq!(lhybrid(&["profile", "0"]).0, 1);
    assert_eq!(lhybrid(&["verify", "--t-min", "100"]).0, 1);
    assert_eq!(lhybrid(&["verify", "--t-min", "100", "--t-max", "150", "--bounds", "partial", "--moduli", "5"]).0, 0);
    assert_eq!(lhybrid(&["verify", "--moduli", "5", "--eps", "1e-20"]).0, 1);
    assert_eq!(lhybrid(&["verify", "--bounds", "nonsense"]).0, 1);
    assert_eq!(lhybrid(&["lemmas", "--trials", "0"]).0, 1);
    assert_eq!(lhybrid(&["replay", "64", "1", "150"]).0, 1);
    assert_eq!(lhybrid(&["replay", "64", "0", "500"]).0, 1);
    assert_eq!(lhybrid(&["--threads", "0", "profile", "5"]).0, 1);
    assert_eq!(lhybrid(&["frobnicate"]).0, 1);
    assert_eq!(lhybrid(&["--help"]).0, 0);
}

#[test]
fn lemmas_and_replay_run() {
    let (code, out, _) = lhybrid(&["lemmas", "--trials", "20", "--seed", "7"]);
    assert_eq!(code, 0);
    assert!(out.contains("seed = 7") && out.trim_end().ends_with("PASS"), "{out}");
    let (code, out, _) = lhybrid(&["replay", "729", "1", "1000"]);
    assert_eq!(code, 0);
    assert!(out.contains("total"), "{out}");
}

#[test]
fn profile_counts() {
    let p = cmd_profile(729).unwrap();
    assert_eq!(p.rows.len(), 486);
    assert_eq!(p.rows.iter().filter(|r| r.primitive).count(), 324);
    assert!(p.render().contains("C1=27"));
    let one = cmd_profile(1).unwrap();
    assert_eq!(one.rows.len(), 1);
}

#[test]
fn in_process_sweep_is_deterministic() {
    let map = parse_key_values("moduli = 64\nt_count = 3\nt_max = 600\nreplay = true").unwrap();
    let cfg = SweepConfig::from_map(&map).unwrap();
    let (a, b) = (run_sweep(&cfg).unwrap(), run_sweep(&cfg).unwrap());
    let (mut wa, mut wb) = (Vec::new(), Vec::new());
    write_csv(&a.cells, &mut wa).unwrap();
    write_csv(&b.cells, &mut wb).unwrap();
    assert_eq!(wa, wb);
    assert!(a.all_pass());
    assert_eq!(a.exit_code(), 0);
    assert!(a.cells.iter().all(|c| c.replay_dominates == Some(true)));
}
