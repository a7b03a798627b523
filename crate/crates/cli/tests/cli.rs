mod common;

use std::fs;

use common::{fixture, ingest, run, scratch, sst, stdout};

fn sorted_lines(s: &str) -> Vec<String> {
    let mut v: Vec<String> = s.lines().map(str::to_string).collect();
    v.sort();
    v
}

#[test]
fn missing_graph_exits_2() {
    let tmp = scratch();
    let g = tmp.path().join("nope");
    let g = g.to_str().unwrap();
    for args in [
        vec!["stories", "-s", "x", "-g", g],
        vec!["gc", "-g", g],
        vec!["dump", "-g", g],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("does not exist"));
    }
}

#[test]
fn unknown_subject_exits_1() {
    let tmp = scratch();
    let g = tmp.path().join("km");
    ingest(&g, "dsl", &[fixture("tidal.dsl")]);
    let o = run(&["stories", "-s", "no such thing here", "-g", g.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no such concept"));
}

#[test]
fn malformed_dsl_reports_file_and_line() {
    let tmp = scratch();
    let bad = tmp.path().join("bad.dsl");
    fs::write(&bad, "Gr(\"a\", a_contains, \"b\", \"c\");\nGr(\"a\", a_contains \"b\");\n").unwrap();
    let g = tmp.path().join("km");
    let o = sst()
        .args(["ingest", "-g"])
        .arg(&g)
        .arg(&bad)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("bad.dsl:2"), "{err}");
    // nothing was written
    assert!(!g.exists());
}

#[test]
fn bad_flags_are_rejected() {
    let tmp = scratch();
    let g = tmp.path().join("km");
    ingest(&g, "dsl", &[fixture("tidal.dsl")]);
    let g = g.to_str().unwrap();
    assert!(!run(&["stories", "-s", "tidal", "-t", "5", "-g", g]).status.success());
    assert!(!run(&["stories", "-s", "tidal", "-d", "0", "-g", g]).status.success());
    assert_eq!(run(&["gc", "--max-age=-1", "-g", g]).status.code(), Some(1));
}

#[test]
fn gc_on_fresh_graph_removes_nothing() {
    let tmp = scratch();
    let g = tmp.path().join("km");
    ingest(&g, "dsl", &[fixture("tidal.dsl")]);
    let o = run(&["gc", "--now", "1000", "-g", g.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "removed 0 edges\n");
}

#[test]
fn gc_zero_age_removes_single_observations() {
    let tmp = scratch();
    let g = tmp.path().join("km");
    ingest(&g, "dsl", &[fixture("tidal.dsl")]);
    let gs = g.to_str().unwrap();
    let before = stdout(&run(&["dump", "-g", gs]));
    let o = run(&["gc", "--min-weight", "2", "--max-age", "0", "--now", "2000", "-g", gs]);
    assert!(o.status.success());
    let n: usize = stdout(&o)
        .trim()
        .strip_prefix("removed ")
        .and_then(|s| s.strip_suffix(" edges"))
        .unwrap()
        .parse()
        .unwrap();
    assert!(n > 0);
    // the store keeps only edges observed at least twice
    let after = stdout(&run(&["dump", "-g", gs]));
    assert!(after.lines().count() < before.lines().count());
    let o = run(&["gc", "--min-weight", "2", "--max-age", "0", "--now", "2000", "-g", gs]);
    assert_eq!(stdout(&o), "removed 0 edges\n");
}

#[test]
fn dump_and_reingest_round_trips() {
    let tmp = scratch();
    let g1 = tmp.path().join("one");
    ingest(&g1, "dsl", &[fixture("microservice.dsl")]);
    let dumped = stdout(&run(&["dump", "-g", g1.to_str().unwrap()]));
    assert!(!dumped.is_empty());
    let file = tmp.path().join("dump.tuples");
    fs::write(&file, &dumped).unwrap();
    let g2 = tmp.path().join("two");
    ingest(&g2, "tuples", &[file]);
    let again = stdout(&run(&["dump", "-g", g2.to_str().unwrap()]));
    assert_eq!(sorted_lines(&again), sorted_lines(&dumped));
}

#[test]
fn ldd_ingest_builds_dependency_dirs() {
    let tmp = scratch();
    let g = tmp.path().join("km");
    ingest(&g, "ldd", &[fixture("ldd/cgn-agent.ldd")]);
    assert!(g.join("cgn-agent").join("2").is_dir());
    assert!(g.join("!lib64!ld-linux-x86-64.so.2").join("-2").join("cgn-agent").is_file());
    let o = run(&["stories", "-s", "cgn-agent", "-t", "2", "-d", "1", "-g", g.to_str().unwrap()]);
    let out = stdout(&o);
    assert!(out.starts_with("Found story subject: \"cgn-agent\"\nStories of type 2 only\n"));
    assert!(out.contains("\"cgn-agent\" depends on \"libz.so.1\""), "{out}");
}

#[test]
fn ingest_summary_line() {
    let tmp = scratch();
    let g = tmp.path().join("km");
    let o = sst()
        .args(["ingest", "--now", "5", "--format", "ldd", "-g"])
        .arg(&g)
        .arg(fixture("ldd/libz.so.1.ldd"))
        .output()
        .unwrap();
    assert!(o.status.success());
    let line = stdout(&o);
    assert!(line.starts_with("statements "), "{line}");
    assert!(line.contains(", tuples ") && line.contains(", total edges "), "{line}");
}
