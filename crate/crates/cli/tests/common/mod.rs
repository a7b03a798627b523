#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use sst_core::{AssociationEdge, ConceptToken, ContextSet, Graph, KnowledgeTuple, SignedAssocType};

/// Scratch space for graph stores: memory-backed when the host offers it,
/// since the store creates one file per association target.
pub fn scratch() -> tempfile::TempDir {
    let shm = Path::new("/dev/shm");
    if shm.is_dir() {
        if let Ok(d) = tempfile::tempdir_in(shm) {
            return d;
        }
    }
    tempfile::tempdir().expect("temporary directory")
}

pub fn sst() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sst"))
}

pub fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(rel)
}

pub fn run(args: &[&str]) -> Output {
    sst().args(args).output().expect("sst runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

/// Ingests fixture files into a fresh graph directory at a fixed time.
pub fn ingest(dir: &Path, format: &str, files: &[PathBuf]) {
    let mut cmd = sst();
    cmd.args(["ingest", "--now", "1000", "--format", format, "-g"]).arg(dir);
    cmd.args(files);
    let o = cmd.output().expect("sst runs");
    assert!(
        o.status.success(),
        "ingest failed: {}",
        String::from_utf8_lossy(&o.stderr)
    );
}

/// Every file under `dir` keyed by relative path.
pub fn snapshot(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    fn walk(base: &Path, dir: &Path, out: &mut BTreeMap<PathBuf, Vec<u8>>) {
        for entry in fs::read_dir(dir).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                out.insert(p.strip_prefix(base).unwrap().to_path_buf(), Vec::new());
                walk(base, &p, out);
            } else {
                out.insert(p.strip_prefix(base).unwrap().to_path_buf(), fs::read(&p).unwrap());
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(dir, dir, &mut out);
    out
}

pub const ALIASES: &[(&str, &str)] = &[
    ("is close to", "is close to"),
    ("depends on", "partly determines"),
    ("may use", "may be used by"),
    ("contains", "belongs to or is part of"),
    ("expresses", "is expressed by"),
    ("has value", "is the value of"),
];

/// Concept names with '/' and spaces but no '!'.
pub fn concept_name(rng: &mut StdRng) -> String {
    const PARTS: &[&str] = &[
        "lib", "doctor", "/usr", "/lib64/", "x86-64", "so.2", "service", "a", "b", "ø", "http:", "//",
        "node", "é", "7",
    ];
    let n = rng.gen_range(1..=3);
    let mut s: String = (0..n).map(|_| *PARTS.choose(rng).unwrap()).collect::<Vec<_>>().join(" ");
    s.push_str(&rng.gen_range(0..1000).to_string());
    s
}

pub fn context(rng: &mut StdRng, max_phrases: usize) -> ContextSet {
    const WORDS: &[&str] = &["software", "ops", "physics", "web", "online", "fault", "music", "gravity"];
    let k = rng.gen_range(0..=max_phrases);
    let phrases: Vec<String> = (0..k)
        .map(|_| {
            let n = rng.gen_range(1..=3);
            (0..n).map(|_| *WORDS.choose(rng).unwrap()).collect::<Vec<_>>().join(" ")
        })
        .collect();
    ContextSet::new(phrases).unwrap()
}

/// A random graph of plain associations (no role or context-channel
/// aliases), built by upserts with random repetitions and timestamps.
pub fn random_graph(
    rng: &mut StdRng,
    nodes: usize,
    edges: usize,
    max_phrases: usize,
    learn_tuples: bool,
) -> Graph {
    let mut names: Vec<String> = Vec::new();
    while names.len() < nodes.max(2) {
        let n = concept_name(rng);
        if !names.contains(&n) {
            names.push(n);
        }
    }
    let mut g = Graph::new();
    for n in &names {
        g.add_node(ConceptToken::new(n).unwrap());
    }
    for _ in 0..edges {
        let a = names.choose(rng).unwrap();
        let b = names.choose(rng).unwrap();
        let (fwd, bwd) = *ALIASES.choose(rng).unwrap();
        let mag: i64 = rng.gen_range(1..=4);
        let t = if rng.gen_bool(0.5) { mag } else { -mag };
        let ctx = context(rng, max_phrases);
        let now = rng.gen_range(0..10_000);
        let reps = rng.gen_range(1..=2);
        if learn_tuples {
            let mut tup = KnowledgeTuple::new(
                ConceptToken::new(a).unwrap(),
                SignedAssocType::forward(mag as u8),
                fwd,
                ConceptToken::new(b).unwrap(),
                bwd,
                ctx,
            )
            .unwrap();
            tup.negated = rng.gen_bool(0.1);
            for _ in 0..reps {
                g.learn(&tup, now);
            }
        } else {
            let e = AssociationEdge::new(
                ConceptToken::new(a).unwrap(),
                SignedAssocType::new(t).unwrap(),
                fwd,
                ConceptToken::new(b).unwrap(),
                bwd,
                ctx,
                rng.gen_bool(0.1),
            )
            .unwrap();
            for _ in 0..reps {
                g.upsert_edge(&e, now);
            }
        }
    }
    g
}
