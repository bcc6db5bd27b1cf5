use std::path::PathBuf;
use std::process::{Command, Output};

use latkit::enumeration::enumerate_pforest_frames;
use latkit::frames::BinRel;
use latkit::Exec;
use latkit_cli::dot::{dotted_edges, frame_dot, generated};
use latkit_cli::json::{parse, to_json, Item};

fn latkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latkit")).args(args).env_remove("LATKIT_BUDGET_SECONDS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.to_str().unwrap().to_string()
}

#[test]
fn forest_counts() {
    let o = latkit(&["count", "--sequence", "F", "--to", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("1 3 8 24 71 224"));
}

#[test]
fn count_reports_reference_mismatches() {
    let o = latkit(&["count", "--sequence", "T", "--to", "7"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("MISMATCH(337, 332)"));
    let o = latkit(&["count", "--sequence", "Fs", "--to", "6", "--oracle"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Fs oracle: agrees agrees agrees agrees agrees agrees"));
}

#[test]
fn forest_frames() {
    let o = latkit(&["enumerate", "--class", "pforest-frames", "--size", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("n=3: 34 match"));
    let o = latkit(&["enumerate", "--class", "pforest-frames", "--size", "1..3"]);
    assert!(stdout(&o).ends_with("total: 40\n"), "{}", stdout(&o));
}

#[test]
fn table_rows_print_cells() {
    let o = latkit(&["enumerate", "--class", "dlp", "--size", "2..5"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    for line in ["n=2: 2 match", "n=3: 4 match", "n=4: 15 match", "n=5: 46 match", "total: 67"] {
        assert!(s.contains(line), "{s}");
    }
    let o = latkit(&["enumerate", "--class", "dlpq", "--size", "5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("MISMATCH(3435, 343)"));
}

#[test]
fn budget_skips_cells() {
    let o = Command::new(env!("CARGO_BIN_EXE_latkit"))
        .args(["enumerate", "--class", "dlp", "--size", "7"])
        .env("LATKIT_BUDGET_SECONDS", "0.000001")
        .output()
        .unwrap();
    assert!(stdout(&o).contains("n=7: skipped (budget)"), "{}", stdout(&o));
    let o = Command::new(env!("CARGO_BIN_EXE_latkit"))
        .args(["enumerate", "--class", "dlp", "--size", "3"])
        .env("LATKIT_BUDGET_SECONDS", "soon")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn output_is_schedule_independent() {
    let dir = tempfile::tempdir().unwrap();
    let run = |exec: &str| {
        let path = dir.path().join(format!("{exec}.jsonl"));
        let o = latkit(&[
            "enumerate",
            "--class",
            "assoc-idem-dlp",
            "--size",
            "2..6",
            "--exec",
            exec,
            "--jsonl",
            path.to_str().unwrap(),
        ]);
        (stdout(&o), std::fs::read_to_string(path).unwrap())
    };
    let (a, b) = (run("sequential"), run("parallel"));
    assert_eq!(a, b);
    assert!(a.1.lines().count() > 0);
}

#[test]
fn check_methods() {
    let o = latkit(&["check", "--property", "associative", "--method", "characterized", &data("meet4.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = latkit(&["check", "--property", "associative", "--method", "both", &data("meet4.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 2);
    // Only the brute force decides normality: reported, never resolved.
    let o = latkit(&["check", "--property", "normal", &data("meet4.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("DISCREPANCY"));
    let o = latkit(&["check", "--property", "pforest", &data("pforest3.json")]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn failing_checks_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.json");
    // p ≠ q, so the product is not commutative.
    std::fs::write(
        &path,
        r#"{"size":3,"leq":[[1,1,1],[0,1,1],[0,0,1]],"ops":{"p":[0,2,2],"q":[0,1,2]}}"#,
    )
    .unwrap();
    let o = latkit(&["check", "--property", "commutative", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("(brute): fails"));
    assert!(stdout(&o).contains("(characterized): fails"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(latkit(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(latkit(&["count", "--to", "3", "--bogus"]).status.code(), Some(2));
    assert_eq!(latkit(&["enumerate", "--class", "nope", "--size", "3"]).status.code(), Some(2));
    assert_eq!(latkit(&["si"]).status.code(), Some(2));
    let o = latkit(&["count", "--sequence", "X", "--to", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("expected T, c, F"));
}

#[test]
fn malformed_files_are_located() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"size\": 2,\n \"leq\": [[1,1],[0,1]],\n \"ops\": {\"p\": [0, \"x\"]}}").unwrap();
    let o = latkit(&["check", "--property", "normal", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    std::fs::write(&path, r#"{"size":2,"leq":[[1,1],[0,1]],"ops":{"mul":[[0,0],[0,7]]}}"#).unwrap();
    let o = latkit(&["render", "--dot", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("ops.mul[1][1]"));
}

#[test]
fn conversions() {
    let o = latkit(&["convert", "--from", "pq", "--to", "birkhoff", &data("pforest3.json")]);
    assert_eq!(o.status.code(), Some(0));
    let Item::Frame(b) = parse(&stdout(&o)).unwrap() else { panic!("frame expected") };
    assert!(b.r.is_some());
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.json");
    std::fs::write(&path, stdout(&o)).unwrap();
    let o = latkit(&["convert", "--from", "birkhoff", "--to", "pq", path.to_str().unwrap()]);
    let Item::Frame(back) = parse(&stdout(&o)).unwrap() else { panic!("frame expected") };
    let Item::Frame(orig) = parse(&std::fs::read_to_string(data("pforest3.json")).unwrap()).unwrap() else {
        panic!()
    };
    assert_eq!(back.p_rel, orig.p_rel);
    let o = latkit(&["convert", "--from", "mul", "--to", "pq", &data("meet4.json")]);
    let Item::Algebra(a) = parse(&stdout(&o)).unwrap() else { panic!("algebra expected") };
    assert_eq!(a.p_table().unwrap(), &[0, 1, 2, 3]);
    let o = latkit(&["convert", "--from", "algebra", "--to", "frame", &data("pforest3.json")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn si_verbs() {
    let o = latkit(&["si", "--census", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("n=8: D8 D9 D10 D11 D12 D13 D14 D15 D16"), "{s}");
    assert!(s.contains("fixtures: 18 match"));
    let o = latkit(&["si", "--chain", "Bp:1"]);
    assert!(stdout(&o).contains("simple: yes"));
    let o = latkit(&["si", "--chain", "C:5,2", "--json"]);
    let Item::Algebra(a) = parse(&stdout(&o)).unwrap() else { panic!() };
    assert_eq!(a.one(), Some(2));
    assert_eq!(latkit(&["si", "--chain", "C:2,2"]).status.code(), Some(2));
}

#[test]
fn every_structure_type_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let mut lines = Vec::new();
    for args in [
        vec!["si", "--census", "8"],
        vec!["enumerate", "--class", "pforest-frames", "--size", "1..3"],
        vec!["enumerate", "--class", "linear-algebras", "--size", "2..5"],
        vec!["enumerate", "--class", "dlpq", "--size", "2..3"],
        vec!["enumerate", "--class", "comm-idem-dl-monoids", "--size", "2..4"],
        vec!["enumerate", "--class", "distributive-lattices", "--size", "2..5"],
    ] {
        let path = dir.path().join("out.jsonl");
        let mut a = args.clone();
        a.extend(["--jsonl", path.to_str().unwrap()]);
        assert!(latkit(&a).status.code().is_some());
        lines.extend(std::fs::read_to_string(&path).unwrap().lines().map(String::from).collect::<Vec<_>>());
    }
    let o = latkit(&["convert", "--from", "frame", "--to", "algebra", &data("pforest3.json")]);
    lines.push(stdout(&o).trim().to_string());
    for name in ["meet4.json", "pforest3.json", "closure_a2.json"] {
        lines.push(std::fs::read_to_string(data(name)).unwrap());
    }
    for line in &lines {
        let x = parse(line).unwrap();
        assert_eq!(parse(&to_json(&x)).unwrap(), x, "{line}");
    }
    assert!(lines.len() > 60);
}

#[test]
fn forest_frame_diagrams() {
    for n in 1..=3 {
        for f in enumerate_pforest_frames(n, Exec::Sequential).unwrap().items() {
            let dot = frame_dot(f);
            let edges = |style: &str| -> Vec<(usize, usize)> {
                dot.lines()
                    .filter(|l| l.contains(style))
                    .map(|l| {
                        let t: Vec<&str> = l.split_whitespace().collect();
                        (t[0].parse().unwrap(), t[2].parse().unwrap())
                    })
                    .collect()
            };
            let mut solid = edges("dir=none");
            solid.sort_unstable();
            assert_eq!(solid, f.poset.hasse_edges());
            let mut dotted = edges("style=dotted");
            for (x, y) in dotted.clone() {
                if dot.contains(&format!("{x} -> {y} [style=dotted, dir=both]")) {
                    dotted.push((y, x));
                }
            }
            let p = f.p_rel.as_ref().unwrap();
            // Dotted edges lie in P outside the order, regenerate P, and
            // none of them is implied by the rest.
            for &(x, y) in &dotted {
                assert!(p.contains(x, y) && !f.poset.leq(x, y));
                let rest: Vec<_> = dotted.iter().copied().filter(|&e| e != (x, y)).collect();
                assert_eq!(generated(&f.poset, &rest, true)[x] >> y & 1, 0);
            }
            assert_eq!(BinRel::from_rows(generated(&f.poset, &dotted, true)), *p);
            assert_eq!(dotted.len(), dotted_edges(&f.poset, p.rows()).len());
        }
    }
}

#[test]
fn render_marks_closed_elements() {
    let o = latkit(&["render", "--dot", &data("closure_a2.json")]);
    let s = stdout(&o);
    assert!(s.contains("0 [style=filled"));
    assert!(s.contains("2 [style=filled"));
    assert!(s.contains("  1;"));
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a.dot");
    let o = latkit(&["render", "--dot", &data("closure_a2.json"), "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(out).unwrap(), s);
}
