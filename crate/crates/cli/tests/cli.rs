use std::io::Write;
use std::path::PathBuf;

use longevity_cli::run;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("longevity").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn temp_file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

fn is_key_value(text: &str) -> bool {
    !text.is_empty()
        && text.lines().all(|l| {
            l.split_once('=')
                .is_some_and(|(k, v)| !k.is_empty() && !v.is_empty() && !k.contains(','))
        })
}

fn is_csv(text: &str) -> bool {
    let mut lines = text.lines();
    let Some(header) = lines.next() else {
        return false;
    };
    let width = header.split(',').count();
    width > 1 && !header.contains('=') && lines.all(|l| l.split(',').count() == width)
}

#[test]
fn irr_on_first_reference_column() {
    let (code, out, _) = invoke(&["irr", "--cashflows", &data("settlement_cf1.csv")]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("irr=2.951170"));
    assert!(out.contains("irr_percent=295.1170"));
}

#[test]
fn zero_horizon_value_is_the_benefit() {
    let (code, out, _) = invoke(&[
        "price-lsv",
        "--premium",
        "0",
        "--benefit",
        "1000",
        "--rate",
        "0.05",
        "--t",
        "0",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out, "lsv=1000\n");
}

#[test]
fn schedule_matches_flat_policy() {
    let schedule = temp_file("period,premium,benefit\n1,100,5000\n2,100,5000\n3,100,5000\n");
    let path = schedule.path().to_str().unwrap();
    let (_, from_schedule, _) = invoke(&[
        "price-lsv",
        "--schedule",
        path,
        "--rate",
        "0.05",
        "--t",
        "3",
    ]);
    let (_, flat, _) = invoke(&[
        "price-lsv",
        "--premium",
        "100",
        "--benefit",
        "5000",
        "--rate",
        "0.05",
        "--t",
        "3",
    ]);
    let parse = |s: &str| {
        s.trim()
            .strip_prefix("lsv=")
            .unwrap()
            .parse::<f64>()
            .unwrap()
    };
    assert!((parse(&from_schedule) - parse(&flat)).abs() < 1e-9);
    let (code, _, _) = invoke(&[
        "price-lsv",
        "--schedule",
        path,
        "--rate",
        "0.05",
        "--t",
        "2.5",
    ]);
    assert_eq!(code, 1);
}

#[test]
fn seeded_simulation_is_reproducible() {
    let args = [
        "simulate",
        "--table",
        &data("sample_table.csv"),
        "--age",
        "70",
        "--n",
        "100000",
        "--seed",
        "7",
    ];
    let first = invoke(&args);
    let second = invoke(&args);
    assert_eq!(first.0, 0);
    assert_eq!(first.1, second.1);
    assert!(is_key_value(&first.1));
}

#[test]
fn histogram_counts_sum_to_n() {
    let (code, out, _) = invoke(&[
        "simulate", "--age", "80", "--n", "5000", "--seed", "1", "--csv",
    ]);
    assert_eq!(code, 0);
    assert!(is_csv(&out));
    let total: u64 = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 5000);
}

#[test]
fn every_command_emits_one_format() {
    let samples: String = (0..500)
        .map(|k| format!("{}\n", (k as f64 * 0.37).sin()))
        .collect();
    let samples = temp_file(&samples);
    let cases: Vec<Vec<String>> = vec![
        vec![
            "vole".into(),
            "--e".into(),
            "15".into(),
            "--max".into(),
            "40".into(),
        ],
        vec![
            "markov".into(),
            "--mean".into(),
            "10".into(),
            "--horizon".into(),
            "5".into(),
        ],
        vec![
            "fit-stable".into(),
            "--input".into(),
            samples.path().to_string_lossy().into(),
        ],
        vec![
            "alpha-profile".into(),
            "--ages".into(),
            "80..82".into(),
            "--n".into(),
            "2000".into(),
            "--seed".into(),
            "1".into(),
        ],
        [
            "duration",
            "--premium",
            "300",
            "--benefit",
            "10000",
            "--rate",
            "0.05",
            "--t",
            "10",
        ]
        .map(String::from)
        .to_vec(),
        [
            "critical-time",
            "--premium",
            "300",
            "--benefit",
            "10000",
            "--rate",
            "0.05",
        ]
        .map(String::from)
        .to_vec(),
        [
            "price-option",
            "--kind",
            "call",
            "--strike",
            "100",
            "--rate",
            "0.05",
            "--vol",
            "0.2",
            "--expiry",
            "1",
            "--grid",
            "100,100",
        ]
        .map(String::from)
        .to_vec(),
        [
            "price-option",
            "--kind",
            "put",
            "--strike",
            "100",
            "--rate",
            "0.05",
            "--vol",
            "0.2",
            "--expiry",
            "1",
            "--grid",
            "100,100",
            "--csv",
        ]
        .map(String::from)
        .to_vec(),
        [
            "fdm-demo", "--scheme", "fitted", "--sigma", "0.01", "--J", "20",
        ]
        .map(String::from)
        .to_vec(),
        [
            "price-mortality-option",
            "--age",
            "80",
            "--seed",
            "2",
            "--premium",
            "1000",
            "--benefit",
            "50000",
            "--policy-rate",
            "0.06",
            "--rate",
            "0.03",
            "--n",
            "2000",
            "--grid",
            "100,100",
        ]
        .map(String::from)
        .to_vec(),
    ];
    for args in cases {
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, out, err) = invoke(&refs);
        assert_eq!(code, 0, "{refs:?}: {err}");
        assert!(is_key_value(&out) ^ is_csv(&out), "{refs:?}:\n{out}");
    }
}

#[test]
fn fdm_demo_fitted_is_exact() {
    let (_, out, _) = invoke(&[
        "fdm-demo", "--scheme", "fitted", "--sigma", "0.01", "--J", "100",
    ]);
    for line in out.lines().skip(1) {
        let err: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(err.abs() < 1e-10, "{line}");
    }
    let (_, _, note) = invoke(&[
        "fdm-demo", "--scheme", "centered", "--sigma", "1e-6", "--J", "10",
    ]);
    assert!(note.contains("oscillates"));
}

#[test]
fn exit_codes() {
    assert_eq!(invoke(&["bogus"]).0, 1);
    assert_eq!(invoke(&[]).0, 1);
    assert_eq!(invoke(&["irr"]).0, 1);
    assert_eq!(invoke(&["--help"]).0, 0);
    // Domain violations in flags are usage errors.
    assert_eq!(invoke(&["vole", "--e", "50", "--max", "40"]).0, 1);
    assert_eq!(
        invoke(&[
            "price-lsv",
            "--premium",
            "1",
            "--benefit",
            "1",
            "--rate",
            "-2",
            "--t",
            "1"
        ])
        .0,
        1
    );
    // Files that are missing or malformed are data errors.
    assert_eq!(
        invoke(&["irr", "--cashflows", "/nonexistent/flows.csv"]).0,
        2
    );
    let empty = temp_file("");
    assert_eq!(
        invoke(&["irr", "--cashflows", empty.path().to_str().unwrap()]).0,
        2
    );
    // All-positive flows have no rate of return.
    let positive = temp_file("period,amount\n0,1\n1,2\n");
    assert_eq!(
        invoke(&["irr", "--cashflows", positive.path().to_str().unwrap()]).0,
        2
    );
    // At r = 1 and p = b the settlement value at t = 1 is exactly zero, so
    // the duration formulas divide by zero.
    assert_eq!(
        invoke(&[
            "duration",
            "--premium",
            "1",
            "--benefit",
            "1",
            "--rate",
            "1",
            "--t",
            "1"
        ])
        .0,
        3
    );
}

#[test]
fn table_without_terminal_age_is_rejected() {
    let table = temp_file("age,qx\n100,0.5\n101,0.7\n");
    let (code, _, err) = invoke(&[
        "simulate",
        "--table",
        table.path().to_str().unwrap(),
        "--age",
        "100",
        "--n",
        "10",
        "--seed",
        "1",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("qx") && err.contains("1"), "{err}");
    let gap = temp_file("age,qx\n100,0.5\n102,1\n");
    let (code, _, err) = invoke(&[
        "simulate",
        "--table",
        gap.path().to_str().unwrap(),
        "--age",
        "100",
        "--n",
        "10",
        "--seed",
        "1",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn bundled_table_loads() {
    let (code, out, _) = invoke(&[
        "vole",
        "--table",
        &data("sample_table.csv"),
        "--age",
        "70",
        "--n",
        "1000",
        "--seed",
        "1",
    ]);
    assert_eq!(code, 0);
    let e: f64 = out
        .lines()
        .next()
        .unwrap()
        .strip_prefix("e_complete=")
        .unwrap()
        .parse()
        .unwrap();
    assert!((e - 15.0).abs() < 0.5, "{e}");
}

#[test]
fn out_flag_writes_file_only() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("irr.txt");
    let (code, out, _) = invoke(&[
        "irr",
        "--cashflows",
        &data("settlement_cf2.csv"),
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    assert!(std::fs::read_to_string(path)
        .unwrap()
        .starts_with("irr=0.840403"));
}

#[test]
fn help_lists_flags_with_units() {
    for (cmd, flags) in [
        (
            "simulate",
            vec![
                "--table",
                "--age",
                "--n",
                "--seed",
                "--multiplier",
                "--improvement",
            ],
        ),
        (
            "price-option",
            vec![
                "--kind", "--style", "--strike", "--rate", "--vol", "--expiry", "--grid",
            ],
        ),
        ("fdm-demo", vec!["--scheme", "--sigma", "--J"]),
    ] {
        let (code, out, _) = invoke(&[cmd, "--help"]);
        assert_eq!(code, 0);
        for f in flags {
            assert!(out.contains(f), "{cmd} help lacks {f}");
        }
    }
    let (_, out, _) = invoke(&["price-option", "--help"]);
    assert!(out.contains("years") && out.contains("per year"));
}
