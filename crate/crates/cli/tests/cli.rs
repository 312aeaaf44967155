use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn spf(args: &[&str], cache: Option<&Path>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_spf"));
    c.args(args);
    match cache {
        Some(dir) => c.env("SPF_CACHE_DIR", dir),
        None => c.env_remove("SPF_CACHE_DIR"),
    };
    c.output().expect("spawn spf")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn divided_square_at_rank_one() {
    let o = spf(&["derive", "--functor", "G[2]", "--ring", "Z", "--rank", "1", "--height", "1"], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "{\"degrees\":{\"1\":{\"rank\":0,\"torsion\":[2]}}}\n");
}

#[test]
fn hook_is_its_own_block_at_two() {
    let o = spf(&["blocks", "--weight", "3", "--prime", "2"], None);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let alone = v["blocks"].as_array().unwrap().iter().any(|b| b["partitions"] == serde_json::json!(["2,1"]));
    assert!(alone, "{v}");
}

#[test]
fn main_theorem_for_symmetric_square() {
    let o = spf(&["verify", "main-theorem", "--functor", "S[2]", "--height", "1", "--ring", "Z", "--ranks", "1,2"], None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["match"], true);
}

#[test]
fn exit_codes() {
    let parse = spf(&["derive", "--functor", "S[2", "--ring", "Z", "--rank", "1", "--height", "1"], None);
    assert_eq!(parse.status.code(), Some(2));
    let ring = spf(&["derive", "--functor", "S[2]", "--ring", "F4", "--rank", "1", "--height", "1"], None);
    assert_eq!(ring.status.code(), Some(2));
    let budget = spf(&["derive", "--functor", "S[3]", "--ring", "Z", "--rank", "3", "--height", "3", "--budget", "10"], None);
    assert_eq!(budget.status.code(), Some(3));
    let unmet = spf(&["verify", "plethysm", "--outer", "S[2]", "--inner", "G[2]", "--ranks", "2"], None);
    assert_eq!(unmet.status.code(), Some(1));
}

#[test]
fn verification_outcomes() {
    let bott = spf(&["verify", "bott", "--partition", "2,1", "--height", "1", "--rank", "2"], None);
    assert_eq!(bott.status.code(), Some(0));
    let iterate = spf(&["verify", "iterate", "--functor", "S[2]", "--rank", "1", "--heights", "1,1"], None);
    assert_eq!(iterate.status.code(), Some(0));
    let decalage = spf(&["verify", "decalage", "--partition", "2,1", "--height", "1", "--rank", "2", "--ring", "Z"], None);
    assert_eq!(decalage.status.code(), Some(0));
    let same = spf(&["verify", "compare", "--functor", "Dual(T[2])", "--against", "T[2]", "--ring", "Z", "--rank", "2", "--height", "1"], None);
    assert_eq!(same.status.code(), Some(0));
    let differ = spf(&["verify", "compare", "--functor", "S[2]", "--against", "G[2]", "--ring", "Z", "--rank", "1", "--height", "1"], None);
    assert_eq!(differ.status.code(), Some(4));
    assert_eq!(json(&differ)["match"], false);
}

#[test]
fn output_is_stable_and_cache_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["theta", "--functor", "G[2]", "--iterations", "1", "--ranks", "1,2"];
    let plain = spf(&args, None);
    let again = spf(&args, None);
    assert_eq!(plain.stdout, again.stdout);
    let cold = spf(&args, Some(dir.path()));
    let warm = spf(&args, Some(dir.path()));
    assert_eq!(plain.stdout, cold.stdout);
    assert_eq!(plain.stdout, warm.stdout);
    assert_eq!(warm.status.code(), Some(0));
    let v = json(&plain);
    assert_eq!(v["ranks"]["2"]["degrees"]["1"]["torsion"], serde_json::json!([2, 2]));
}

#[test]
fn corrupt_cache_entries_are_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["derive", "--functor", "W[2]", "--ring", "Z", "--rank", "2", "--height", "2"];
    let first = spf(&args, Some(dir.path()));
    let mut entries = Vec::new();
    for sub in fs::read_dir(dir.path()).unwrap() {
        for f in fs::read_dir(sub.unwrap().path()).unwrap() {
            entries.push(f.unwrap().path());
        }
    }
    assert_eq!(entries.len(), 1);
    let raw = fs::read_to_string(&entries[0]).unwrap();
    fs::write(&entries[0], raw.replace("rank", "RANK")).unwrap();
    let second = spf(&args, Some(dir.path()));
    assert_eq!(first.stdout, second.stdout);
    fs::write(&entries[0], "{").unwrap();
    let third = spf(&args, Some(dir.path()));
    assert_eq!(first.stdout, third.stdout);
    assert!(fs::read_to_string(&entries[0]).unwrap().contains("digest"));
}

#[test]
fn text_and_prime_power_views() {
    let o = spf(&["derive", "--functor", "G[2]", "--ring", "Z", "--rank", "1", "--height", "1", "--format", "text"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Z/2"), "{}", stdout(&o));
    let args = ["derive", "--functor", "Schur[2,1]", "--ring", "Z", "--rank", "2", "--height", "2"];
    let inv = json(&spf(&args, None));
    let pp = json(&spf(&[&args[..], &["--view", "prime-power"]].concat(), None));
    assert_eq!(inv["degrees"]["5"]["torsion"], serde_json::json!([3, 3]));
    assert_eq!(pp["degrees"]["5"]["torsion"], serde_json::json!([3, 3]));
}

#[test]
fn ext_between_exterior_and_symmetric_cubes_vanishes() {
    let o = spf(&["ext", "--source", "W[3]", "--target", "S[3]", "--ring", "F3", "--max-degree", "3"], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "{\"degrees\":{}}\n");
    let o = spf(&["ext", "--source", "S[3]", "--target", "G[3]", "--ring", "F3", "--max-degree", "5"], None);
    let v = json(&o);
    let degs: Vec<&String> = v["degrees"].as_object().unwrap().keys().collect();
    assert_eq!(degs, ["0", "3", "4"]);
}
