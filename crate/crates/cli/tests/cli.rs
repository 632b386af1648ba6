use std::fs;
use std::path::Path;
use std::process::{Command, Output};
use std::sync::Arc;

use serde_json::Value;
use weightlab::context::{Ambient, TableStore};
use weightlab::perm::dsl::parse_group_spec;
use weightlab_cli::cache::DiskCache;

fn weightlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weightlab"))
        .args(args)
        .env_remove("WEIGHTLAB_CACHE")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn verify_awc_examples() {
    let out = weightlab(&["verify-awc", "S(3)", "-p", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("pass"));

    let out = weightlab(&["verify-awc", "C(1)", "-p", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let r = &v[0];
    for k in ["group", "p", "block", "sum", "verdict", "ledger"] {
        assert!(r.get(k).is_some(), "missing {k}");
    }
    assert_eq!(r["sum"], 1);
    assert_eq!(r["defect"], 0);
    assert_eq!(r["verdict"], "pass");

    assert_eq!(
        weightlab(&["verify-awc", "S(5)", "-p", "2", "--budget", "100"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        weightlab(&["verify-awc", "S(3", "-p", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        weightlab(&["verify-awc", "S(6)", "-p", "2", "--cap", "100"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        weightlab(&["verify-awc", "S(3)", "-p", "4"]).status.code(),
        Some(2)
    );
}

#[test]
fn s3_ledger_at_three() {
    let v = json(&weightlab(&["verify-awc", "S(3)", "-p", "3", "--json"]));
    let ledger = v[0]["ledger"].as_array().unwrap();
    let rows: Vec<(u64, u64, u64)> = ledger
        .iter()
        .map(|e| {
            (
                e["length"].as_u64().unwrap(),
                e["stabilizer_order"].as_u64().unwrap(),
                e["l"].as_u64().unwrap(),
            )
        })
        .collect();
    assert_eq!(rows, vec![(0, 6, 2), (1, 6, 2)]);
}

#[test]
fn functorial_examples() {
    let out = weightlab(&["functorial", "S(3)", "-p", "3", "--max-L", "3", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v.as_array().unwrap().len(), 1);
    assert!(v[0]["coordinates"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c == 0));
    assert_eq!(v[0]["verdict"], "pass");

    // at p = 2, S(3) has a defect-zero block: a unit vector at the trivial label
    let v = json(&weightlab(&["functorial", "S(3)", "-p", "2", "--json"]));
    let d0 = v
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["defect"] == 0)
        .unwrap();
    let labels = d0["labels"].as_array().unwrap();
    let coords = d0["coordinates"].as_array().unwrap();
    for (l, c) in labels.iter().zip(coords) {
        let trivial = l["L_key"] == "1#0";
        assert_eq!(c, if trivial { 1 } else { 0 });
    }

    let v = json(&weightlab(&["functorial", "C(1)", "-p", "2", "--json"]));
    assert_eq!(v[0]["coordinates"], serde_json::json!([1]));
}

#[test]
fn other_subcommands() {
    let v = json(&weightlab(&["blocks", "S(4)", "-p", "2", "--json"]));
    assert_eq!(v["blocks"].as_array().unwrap().len(), 1);
    assert_eq!(v["blocks"][0]["l"], 2);

    let v = json(&weightlab(&["chartable", "S(4)", "--json"]));
    let mut d: Vec<u64> = v["degrees"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    d.sort();
    assert_eq!(d, vec![1, 1, 2, 3, 3]);

    let v = json(&weightlab(&["chains", "S(3)", "-p", "3", "--json"]));
    assert_eq!(v["orbits"].as_array().unwrap().len(), 2);

    let v = json(&weightlab(&["dpairs", "-p", "2", "--max-L", "4", "--json"]));
    let outs: Vec<u64> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["out_order"].as_u64().unwrap())
        .collect();
    assert_eq!(outs, vec![1, 1, 2, 6, 1]);

    let out = weightlab(&["chartable", "S(3)"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("χ"));
}

#[test]
fn corpus_runs() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.txt");
    fs::write(&empty, "# nothing here\n").unwrap();
    let out = weightlab(&["corpus", empty.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["entries"], serde_json::json!([]));

    let mixed = dir.path().join("mixed.txt");
    fs::write(&mixed, "S(3) ; auto\nS(6) ; 2\nA(4) ; 2\n").unwrap();
    let out = weightlab(&["corpus", mixed.to_str().unwrap(), "--json", "--cap", "400"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let st: Vec<&str> = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["status"].as_str().unwrap())
        .collect();
    assert_eq!(st, vec!["pass", "pass", "cap-exceeded", "pass"]);
    let total: u64 = v["summary"]
        .as_object()
        .unwrap()
        .values()
        .map(|x| x.as_u64().unwrap())
        .sum();
    assert_eq!(total, 4);

    assert_eq!(
        weightlab(&["corpus", dir.path().join("missing").to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

fn table_files(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.to_string_lossy().ends_with(".table.json"))
        .collect();
    v.sort();
    v
}

#[test]
fn cache_round_trip_and_eviction() {
    let dir = tempfile::tempdir().unwrap();
    let g = Arc::new(parse_group_spec("S(4)").unwrap());
    let store: Arc<DiskCache> = Arc::new(DiskCache::open(dir.path()).unwrap());

    // cold: everything computed and stored
    let a = Ambient::new(g.clone(), 2).with_store(store.clone());
    let w = a.whole().unwrap();
    assert_eq!(a.stats.loaded.load(std::sync::atomic::Ordering::Relaxed), 0);
    let key = w.table.group_key.clone();
    let saved = store.load_table(&key).unwrap();
    assert_eq!(saved, w.table.to_repr(&g));

    // warm: loaded, verified, identical
    let b = Ambient::new(g.clone(), 2).with_store(store.clone());
    let wb = b.whole().unwrap();
    assert_eq!(b.stats.loaded.load(std::sync::atomic::Ordering::Relaxed), 2);
    assert_eq!(wb.table.irr, w.table.irr);
    assert_eq!(wb.blocks, w.blocks);

    // unparsable entry: evicted, recomputed, rewritten
    let path = store.path_for("table", &key);
    fs::write(&path, "{ not json").unwrap();
    let c = Ambient::new(g.clone(), 2).with_store(store.clone());
    assert_eq!(c.whole().unwrap().table.irr, w.table.irr);
    assert_eq!(
        c.stats.computed.load(std::sync::atomic::Ordering::Relaxed),
        1
    );
    assert_eq!(store.load_table(&key).unwrap(), saved);

    // well-formed but wrong values: rejected by the re-check, then replaced
    let mut bad = saved.clone();
    bad.irr.swap(0, 1);
    bad.irr[0][1] = weightlab::arith::Cyclotomic::from_int(1, 7);
    fs::write(&path, serde_json::to_string(&bad).unwrap()).unwrap();
    let d = Ambient::new(g, 2).with_store(store.clone());
    assert_eq!(d.whole().unwrap().table.irr, w.table.irr);
    assert_eq!(
        d.stats.rejected.load(std::sync::atomic::Ordering::Relaxed),
        1
    );
    assert_eq!(store.load_table(&key).unwrap(), saved);
}

#[test]
fn cache_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_weightlab"))
        .args(["verify-awc", "A(4)", "-p", "2"])
        .env("WEIGHTLAB_CACHE", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(!table_files(dir.path()).is_empty());
    let first: Vec<String> = table_files(dir.path())
        .iter()
        .map(|p| fs::read_to_string(p).unwrap())
        .collect();
    for p in table_files(dir.path()) {
        fs::write(p, "garbage").unwrap();
    }
    let out = Command::new(env!("CARGO_BIN_EXE_weightlab"))
        .args(["verify-awc", "A(4)", "-p", "2"])
        .env("WEIGHTLAB_CACHE", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("evicting"));
    let again: Vec<String> = table_files(dir.path())
        .iter()
        .map(|p| fs::read_to_string(p).unwrap())
        .collect();
    assert_eq!(first, again);
}
