mod support;

use proptest::prelude::*;

use qes_cli::document::{parse, to_canonical_string};
use support::{parse_csv, qes, qes_with_stdin, schema_errors, tmp_file};

const SOLVE_CASES: &[&[&str]] = &[
    &[
        "--family", "quartic", "--n", "0", "--parity", "even", "--a", "0",
    ],
    &[
        "--family", "quartic", "--n", "1", "--parity", "odd", "--a", "1",
    ],
    &[
        "--family", "quartic", "--n", "1", "--parity", "even", "--b", "-1",
    ],
    &[
        "--family", "quartic", "--n", "1", "--parity", "even", "--b", "1",
    ],
    &[
        "--family", "quartic", "--n", "1", "--parity", "odd", "--a", "1", "--b", "0",
    ],
    &[
        "--family", "quartic", "--n", "2", "--parity", "even", "--a", "0.5",
    ],
    &[
        "--family", "sextic", "--n", "0", "--parity", "even", "--a", "1", "--b", "-1",
    ],
    &[
        "--family", "sextic", "--n", "1", "--parity", "even", "--a", "1", "--b", "-1",
    ],
    &[
        "--family", "sextic", "--n", "2", "--parity", "even", "--a", "0", "--b", "0",
    ],
    &[
        "--family", "sextic", "--n", "2", "--parity", "odd", "--a", "-1", "--b", "-1",
    ],
    &[
        "--family", "sextic", "--n", "2", "--parity", "even", "--a", "0", "--b", "0", "--c", "0",
    ],
    &[
        "--family", "sextic", "--n", "1", "--parity", "odd", "--a", "0.5", "--b", "-1", "--verify",
    ],
];

fn solve(args: &[&str]) -> support::Run {
    let mut full = vec!["solve"];
    full.extend_from_slice(args);
    qes(&full)
}

#[test]
fn solve_documents_validate_and_round_trip() {
    for args in SOLVE_CASES {
        let run = solve(args);
        assert_eq!(run.code, 0, "{args:?}: {}", run.stderr);
        let errors = schema_errors("result_document.schema.json", &run.stdout);
        assert!(errors.is_empty(), "{args:?}: {errors:?}");
        let doc = parse(&run.stdout).unwrap();
        assert_eq!(to_canonical_string(&doc).unwrap(), run.stdout, "{args:?}");
    }
}

#[test]
fn bethe_document_validates() {
    let run = qes(&[
        "bethe", "--n", "3", "--a", "0.2", "--b", "-0.7", "--c", "0.4", "--seed", "5",
    ]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let errors = schema_errors("bethe_document.schema.json", &run.stdout);
    assert!(errors.is_empty(), "{errors:?}");
    let doc: serde_json::Value = serde_json::from_str(&run.stdout).unwrap();
    for set in doc["root_sets"].as_array().unwrap() {
        assert!(set["max_residual"].as_f64().unwrap() <= 1e-10);
    }
}

#[test]
fn bethe_is_repeatable() {
    let a = qes(&[
        "bethe", "--n", "2", "--a", "0", "--b", "0", "--c", "0", "--seed", "0",
    ]);
    let b = qes(&[
        "bethe", "--n", "2", "--a", "0", "--b", "0", "--c", "0", "--seed", "0",
    ]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verification_failure_exits_four() {
    let run = solve(&[
        "--family", "sextic", "--n", "1", "--parity", "odd", "--a", "0.5", "--b", "-1",
    ]);
    let mut doc: serde_json::Value = serde_json::from_str(&run.stdout).unwrap();
    let e = doc["states"][0]["energy"].as_f64().unwrap();
    doc["states"][0]["energy"] = (e + 0.5).into();
    let path = tmp_file("corrupt.json", &doc.to_string());
    let run = qes(&["verify", "--input", path.to_str().unwrap()]);
    assert_eq!(run.code, 4);
    let out = parse(&run.stdout).unwrap();
    let report = &out.verification.unwrap()[0];
    assert!(!report.converged);
    assert!(schema_errors("result_document.schema.json", &run.stdout).is_empty());
}

#[test]
fn verify_reads_standard_input() {
    let run = solve(&[
        "--family", "quartic", "--n", "1", "--parity", "even", "--b", "-1",
    ]);
    let run = qes_with_stdin(&["verify"], Some(&run.stdout));
    assert_eq!(run.code, 0, "{}", run.stderr);
    let doc = parse(&run.stdout).unwrap();
    assert_eq!(doc.verification.unwrap()[0].matched_index, Some(2));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &[
            "solve", "--family", "quartic", "--n", "2", "--parity", "even",
        ][..],
        &[
            "solve", "--family", "quartic", "--n", "0", "--parity", "even", "--c", "1",
        ],
        &[
            "solve", "--family", "sextic", "--n", "3", "--parity", "odd", "--a", "0", "--b", "0",
        ],
        &[
            "solve", "--family", "sextic", "--n", "1", "--parity", "even", "--a", "1",
        ],
        &["solve", "--family", "cubic", "--n", "1", "--parity", "even"],
        &[
            "solve", "--family", "quartic", "--n", "1", "--parity", "even", "--b", "0",
        ],
        &["export", "--figure", "7"],
    ] {
        assert_eq!(qes(args).code, 2, "{args:?}");
    }
    assert_eq!(qes_with_stdin(&["verify"], Some("not json")).code, 2);
}

#[test]
fn no_state_exits_three() {
    let run = solve(&[
        "--family", "quartic", "--n", "1", "--parity", "odd", "--a", "1", "--b", "0.3",
    ]);
    assert_eq!(run.code, 3);
    assert!(parse(&run.stdout).unwrap().states.is_empty());
}

#[test]
fn output_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("qes-out-{}.json", std::process::id()));
    let run = solve(&[
        "--family",
        "quartic",
        "--n",
        "0",
        "--parity",
        "even",
        "--a",
        "0",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.is_empty());
    let doc = parse(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc.states[0].energy, 0.0);
}

#[test]
fn figure_one_potentials_are_even() {
    let run = qes(&["export", "--figure", "1", "--samples", "401"]);
    assert_eq!(run.code, 0);
    let (header, rows) = parse_csv(&run.stdout);
    assert_eq!(header, ["x", "V[a=0]", "V[a=+1]", "V[a=-1]"]);
    let m = rows.len();
    for i in 0..m {
        assert_eq!(rows[i][0], -rows[m - 1 - i][0]);
        assert_eq!(rows[i][1..], rows[m - 1 - i][1..]);
    }
}

fn sign_changes(ys: impl Iterator<Item = f64>) -> usize {
    let signs: Vec<f64> = ys.filter(|y| *y != 0.0).map(f64::signum).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

#[test]
fn figure_two_ground_states_have_no_nodes() {
    let (header, rows) = parse_csv(&qes(&["export", "--figure", "2"]).stdout);
    assert_eq!(header.len(), 4);
    for col in 1..4 {
        assert_eq!(sign_changes(rows.iter().map(|r| r[col])), 0);
        assert!(rows.iter().all(|r| r[col] >= 0.0));
    }
}

#[test]
fn figure_four_states_have_two_nodes() {
    let (header, rows) = parse_csv(&qes(&["export", "--figure", "4"]).stdout);
    assert_eq!(header, ["x", "psi[a=+1]", "psi[a=-1]"]);
    // a = +1 is the second excited state
    assert_eq!(sign_changes(rows.iter().map(|r| r[1])), 2);
}

#[test]
fn exported_odd_state_is_odd() {
    let run = solve(&[
        "--family", "sextic", "--n", "1", "--parity", "odd", "--a", "0.5", "--b", "-1",
    ]);
    let path = tmp_file("odd.json", &run.stdout);
    let out = qes(&[
        "export",
        "--input",
        path.to_str().unwrap(),
        "--samples",
        "301",
    ]);
    assert_eq!(out.code, 0);
    let (header, rows) = parse_csv(&out.stdout);
    assert_eq!(header, ["x", "V", "psi"]);
    let m = rows.len();
    for i in 0..m {
        assert_eq!(rows[i][2] + rows[m - 1 - i][2], 0.0);
    }
    // unit norm by the trapezoid rule on the exported grid
    let h = rows[1][0] - rows[0][0];
    let norm: f64 = rows.iter().map(|r| r[2] * r[2]).sum::<f64>() * h;
    assert!((norm - 1.0).abs() < 1e-6, "{norm}");
    let missing = qes(&["export", "--input", path.to_str().unwrap(), "--state", "3"]);
    assert_eq!(missing.code, 2);
}

#[test]
fn export_is_deterministic() {
    let a = qes(&["export", "--figure", "3"]).stdout;
    let b = qes(&["export", "--figure", "3"]).stdout;
    assert_eq!(a, b);
}

proptest! {
    #[test]
    fn canonical_floats_round_trip(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        let text = to_canonical_string(&vec![x]).unwrap();
        let back: Vec<f64> = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back[0].to_bits(), x.to_bits());
    }
}
