use std::ffi::OsString;
use std::path::{Path, PathBuf};

use ifsdim_cli::{run, Command, Format, OverlapKind, Psi, RunConfig, EXIT_FLAGGED, EXIT_INVALID, EXIT_OK};
use proptest::prelude::*;

fn systems() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../systems")
}

fn args(line: &str, out: &Path) -> Vec<OsString> {
    let mut v: Vec<OsString> = std::iter::once("ifsdim".into())
        .chain(line.split_whitespace().map(|s| {
            if s.ends_with(".json") && !s.contains('/') {
                systems().join(s).into_os_string()
            } else {
                s.into()
            }
        }))
        .collect();
    v.push("--out".into());
    v.push(out.into());
    v
}

fn run_to(line: &str) -> (i32, String) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report");
    let code = run(args(line, &out));
    (code, std::fs::read_to_string(&out).unwrap_or_default())
}

#[test]
fn dimension_report_has_the_documented_header() {
    let (code, text) = run_to("dimension --system cantor.json --n 12 --samples 500 --seed 7");
    assert_eq!(code, EXIT_OK);
    let keys: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("  \""))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    assert_eq!(
        &keys[..10],
        &["h", "chi", "log_o", "log_o_err", "hd", "hd_naive", "bound", "drop", "separated", "flags"]
    );
    assert_eq!(keys.last(), Some(&"config"));
    assert!(text.contains("\"hd\": 6.3092975357145742e-1"));
    assert!(text.contains("\"separated\": true"));
}

#[test]
fn pressure_of_zero_is_log_m() {
    let (code, text) = run_to("pressure --system dupbin.json --psi zero --seed 1");
    assert_eq!(code, EXIT_OK);
    let line = text.lines().find(|l| l.contains("\"pressure\"")).unwrap();
    let v: f64 = line.split(": ").nth(1).unwrap().trim_end_matches(',').parse().unwrap();
    assert_eq!(v, 3f64.ln());
}

#[test]
fn exit_codes() {
    assert_eq!(run_to("dimension --system missing.json --seed 1").0, EXIT_INVALID);
    assert_eq!(run_to("dimension --system cantor.json --n 0 --seed 1").0, EXIT_INVALID);
    assert_eq!(run_to("dimension --system cantor.json").0, EXIT_INVALID);
    assert_eq!(run_to("frobnicate --system cantor.json --seed 1").0, EXIT_INVALID);
    assert_eq!(run_to("overlap --system cantor.json --seed 1 --tau -1").0, EXIT_INVALID);
    assert_eq!(run_to("verify --system markov.json --seed 1").0, EXIT_INVALID);
    assert_eq!(run_to("pressure --system cantor.json --psi potential --seed 1").0, EXIT_INVALID);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"type\": \"affine1d\", \"maps\": [{\"slope\": 2, \"offset\": 0}]}").unwrap();
    let line = format!("lyapunov --system {} --seed 1", bad.display());
    assert_eq!(run_to(&line).0, EXIT_INVALID);

    // truncated search and an inconclusive drop test both still write the report
    let (code, text) = run_to("overlap --system dupbin.json --n 10 --samples 20 --seed 1 --node-budget 50");
    assert_eq!(code, EXIT_FLAGGED);
    assert!(text.contains("\"truncated\""));
    let (code, text) = run_to("overlap --system dupbin.json --n 1 --samples 3 --seed 1");
    assert_eq!(code, EXIT_FLAGGED);
    assert!(text.contains("\"inconclusive\""));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for line in [
        "dimension --system dupbin.json --n 10 --samples 300 --seed 3",
        "overlap --system julia.json --n 8 --samples 100 --seed 3 --kind topological",
        "lyapunov --system cubic_perturbed.json --samples 100 --seed 3",
        "bound --system cubic.json --seed 3 --q 2",
        "cloud --system julia.json --seed 3 --points 200",
        "cloud --system cantor.json --seed 3 --points 200 --format json",
    ] {
        let (c1, a) = run_to(line);
        let (c2, b) = run_to(line);
        assert_eq!(c1, c2, "{line}");
        assert!(!a.is_empty() && a == b, "{line}");
    }
}

#[test]
fn csv_outputs() {
    let (code, text) = run_to("cloud --system cantor.json --seed 1 --points 5");
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x");
    assert_eq!(lines.len(), 6);
    let (_, text) = run_to("cloud --system julia.json --seed 1 --points 5");
    assert!(text.starts_with("x,y\n"));
    assert!(text.lines().skip(1).all(|l| l.split(',').count() == 2));
    let (_, text) = run_to("bound --system cubic.json --seed 1 --format csv");
    assert!(text.starts_with("h,chi,log_o,log_o_err,hd,hd_naive,bound,drop,separated\n"));
    assert!(!text.contains('"'));
}

#[test]
fn help_exits_cleanly() {
    assert_eq!(run(["ifsdim", "--help"]), EXIT_OK);
}

fn config() -> impl Strategy<Value = RunConfig> {
    let command = prop_oneof![
        Just(Command::Dimension),
        Just(Command::Overlap),
        Just(Command::Lyapunov),
        Just(Command::Pressure),
        Just(Command::Bound),
        Just(Command::Verify),
        Just(Command::Cloud),
    ];
    let format = prop::option::of(prop_oneof![Just(Format::Json), Just(Format::Csv)]);
    let kind = prop_oneof![Just(OverlapKind::Measure), Just(OverlapKind::Topological)];
    let psi = prop::option::of(prop_oneof![Just(Psi::Zero), Just(Psi::Weights), Just(Psi::Potential)]);
    (
        (command, "[a-z]{1,8}(/[a-z_]{1,8})?\\.json", 1usize..=64, 1usize..100_000, any::<u64>()),
        (0usize..=30, prop::option::of(1e-9f64..10.0), 1usize..=12, format),
        (prop::option::of("[a-z]{1,6}\\.(json|csv)"), prop::option::of(1000usize..100_000)),
        (kind, psi, 1usize..10_000, 1u64..100_000_000),
    )
        .prop_map(
            |((command, system, n, samples, seed), (cover_depth, tau, q, format), (out, points), (kind, psi, ly, nb))| {
                RunConfig {
                    command,
                    system: system.into(),
                    n,
                    samples,
                    seed,
                    cover_depth,
                    tau,
                    q,
                    format,
                    out: out.map(Into::into),
                    points,
                    kind,
                    psi,
                    lyapunov_n: ly,
                    node_budget: nb,
                }
            },
        )
}

proptest! {
    #[test]
    fn config_round_trips_through_arguments(c in config()) {
        prop_assert!(c.validate().is_ok());
        let back = RunConfig::parse_args(c.to_args()).unwrap();
        prop_assert_eq!(back, c);
    }
}
