use std::path::PathBuf;
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vqebench")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(rel: &str) -> String {
    fixtures().join(rel).display().to_string()
}

#[test]
fn inspect_reports_counts_and_dumps() {
    let dir = tempfile::tempdir().unwrap();
    let ham = dir.path().join("h.txt");
    let circ = dir.path().join("c.txt");
    let o = run(&[
        "inspect",
        &path("h2o/STO-6G.fcidump"),
        "--dump-hamiltonian",
        ham.to_str().unwrap(),
        "--dump-circuit",
        circ.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("8 after tapering"), "{text}");
    assert!(text.contains("parity"));
    let h = vqebench::PauliSum::parse_text(&std::fs::read_to_string(ham).unwrap()).unwrap();
    assert_eq!(h.n_qubits(), 8);
    let c = vqebench::ansatz::Circuit::parse_text(&std::fs::read_to_string(circ).unwrap()).unwrap();
    assert_eq!(c.n_parameters(), 30);
}

#[test]
fn energy_at_zero_is_the_hf_energy() {
    let o = run(&["energy", &path("oh_minus/STO-6G.fcidump")]);
    assert!(o.status.success());
    let text = stdout(&o);
    let value = |prefix: &str| -> f64 {
        text.lines()
            .find(|l| l.starts_with(prefix))
            .and_then(|l| l.split_whitespace().nth(1))
            .unwrap()
            .parse()
            .unwrap()
    };
    assert!((value("energy") - value("hf")).abs() < 1e-9);
}

#[test]
fn sampled_energy_is_seeded() {
    let args = ["energy", &path("h2/STO-3G.fcidump"), "--backend", "sampled", "--shots", "500", "--seed", "3", "--params", "0.1"];
    let (a, b) = (run(&args), run(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn vqe_writes_a_trace() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let o = run(&["vqe", &path("h2/STO-3G.fcidump"), "--tol", "1e-8", "--trace", trace.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(trace).unwrap();
    assert!(text.starts_with("iteration,energy,grad_norm"));
    assert!(text.lines().count() >= 2);
}

#[test]
fn exact_prints_both_oracles() {
    let o = run(&["exact", &path("h2/STO-3G.fcidump")]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("tapered  -1.137283"), "{text}");
    assert!(text.contains("sector   -1.137283"));
}

#[test]
fn bench_suite_full_mode_csv() {
    let dir = tempfile::tempdir().unwrap();
    let h2 = dir.path().join("h2");
    std::fs::create_dir(&h2).unwrap();
    for f in ["STO-3G.fcidump", "STO-3G.json"] {
        std::fs::copy(fixtures().join("h2").join(f), h2.join(f)).unwrap();
    }
    let o = run(&["bench", "--suite", dir.path().to_str().unwrap(), "--mode", "full"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].contains("count_convention"));
    assert!(lines[1].starts_with("h2,STO-3G,full,2,1,"));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, format!("fixture = {}\nmode = full\n", path("h2/STO-3G.fcidump"))).unwrap();
    let o = run(&["bench", "--config", cfg.to_str().unwrap(), "--mode", "inspect", "--format", "table"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().nth(2).unwrap().contains("inspect"), "{text}");
}

#[test]
fn failing_rows_set_the_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.fcidump");
    std::fs::write(&bad, "&FCI NORB=2,NELEC=2,\n&END\ngarbage\n").unwrap();
    let o = run(&["bench", &path("h2/STO-3G.fcidump"), bad.to_str().unwrap()]);
    assert!(!o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("chem-io"));
}

#[test]
fn parallel_rows_need_inspect_mode() {
    let o = run(&["bench", "--suite", fixtures().to_str().unwrap(), "--mode", "estimate", "--parallel-rows", "2"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("inspect mode"));
}

#[test]
fn reduction_without_parity_is_rejected() {
    let o = run(&["inspect", &path("h2/STO-3G.fcidump"), "--encoding", "bk", "--two-qubit-reduction", "on"]);
    assert!(!o.status.success());
}
