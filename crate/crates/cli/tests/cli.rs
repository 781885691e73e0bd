use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const K22: &str = r#"{"n_left":2,"n_right":2,"edges":[
 {"left":0,"right":0,"plan":{"domain":{"kind":"interval","end":4},"pieces":[{"t0":0,"t1":4,"form":{"linear":{"a":1,"b":0}}}]}},
 {"left":0,"right":1,"plan":{"domain":{"kind":"interval","end":4},"pieces":[{"t0":0,"t1":4,"form":{"linear":{"a":5,"b":0}}}]}},
 {"left":1,"right":0,"plan":{"domain":{"kind":"interval","end":4},"pieces":[{"t0":0,"t1":4,"form":{"linear":{"a":4,"b":0}}}]}},
 {"left":1,"right":1,"plan":{"domain":{"kind":"interval","end":4},"pieces":[{"t0":0,"t1":4,"form":{"linear":{"a":2,"b":1}}}]}}]}"#;

const SEGMENT: &str = r#"{"vertices":[[0,0],[1,0]],"edges":[[0,1]]}"#;
const SEGMENT_UP: &str = r#"{"vertices":[[0,0.3],[1,0.3]],"edges":[[0,1]]}"#;
const V_SHAPE: &str = r#"{"vertices":[[0,0],[1,1],[2,0.2]],"edges":[[0,1],[1,2]]}"#;
const V_SHAPE_MOVED: &str = r#"{"vertices":[[0.1,0],[1.1,1],[2.1,0.2]],"edges":[[0,1],[1,2]]}"#;

struct Sandbox {
    dir: TempDir,
}

impl Sandbox {
    fn new() -> Self {
        Self {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn file(&self, name: &str, content: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        std::fs::write(&p, content).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn hourglass(args: &[&dyn AsRef<std::ffi::OsStr>]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hourglass"))
        .args(args.iter().map(|a| a.as_ref()))
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn value_after(o: &Output, key: &str) -> f64 {
    stdout(o)
        .lines()
        .find_map(|l| l.strip_prefix(key))
        .unwrap_or_else(|| panic!("no {key} in {}", stdout(o)))
        .trim()
        .parse()
        .unwrap()
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn static_diagrams() {
    let s = Sandbox::new();
    let x = s.file("x.json", r#"{"points":[[0,4]]}"#);
    let y = s.file("y.json", r#"{"points":[[0,1]]}"#);
    let o = hourglass(&[&"static-bottleneck", &x, &y]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(value_after(&o, "bottleneck:"), 2.0);
    let o = hourglass(&[&"static-bottleneck", &x, &x]);
    assert_eq!(value_after(&o, "bottleneck:"), 0.0);
}

#[test]
fn malformed_json_exits_1() {
    let s = Sandbox::new();
    let bad = s.file("bad.json", "{\"points\": [[0,");
    let o = hourglass(&[&"static-bottleneck", &bad, &bad]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn unknown_flag_exits_1() {
    let o = hourglass(&[&"kinetic", &"--no-such-flag"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn infeasible_graph_exits_2_with_witness() {
    let s = Sandbox::new();
    let g = s.file(
        "g.json",
        r#"{"n_left":2,"n_right":2,"edges":[{"left":0,"right":0,"weight":1},{"left":1,"right":0,"weight":3}]}"#,
    );
    let o = hourglass(&[&"static-bottleneck", &g]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("[0, 1]"));
}

#[test]
fn kinetic_k22_trace() {
    let s = Sandbox::new();
    let g = s.file("k22.json", K22);
    let (trace, traj, pieces) = (s.path("trace.csv"), s.path("traj.csv"), s.path("pieces.json"));
    let o = hourglass(&[&"kinetic", &g, &"--out-trace", &trace, &"--out-traj", &traj, &"--out-pieces", &pieces]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(value_after(&o, "integral:"), 15.5);
    let t = read(&trace);
    assert!(t.contains("2.0,U2,"), "{t}");
    assert!(t.contains("3.0,U1,"), "{t}");
    assert_eq!(
        read(&traj),
        "t_start,t_end,root_edge,value_at_midpoint\n0.0,3.0,3,3.5\n3.0,4.0,1,5.0\n"
    );
    let json: serde_json::Value = serde_json::from_str(&read(&pieces)).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 2);
}

#[test]
fn constant_weights_give_empty_trace() {
    let s = Sandbox::new();
    let g = s.file(
        "c.json",
        r#"{"n_left":1,"n_right":1,"edges":[{"left":0,"right":0,"plan":{"domain":{"kind":"interval","end":3},"pieces":[{"t0":0,"t1":3,"form":{"linear":{"a":2,"b":0}}}]}}]}"#,
    );
    let trace = s.path("trace.csv");
    let o = hourglass(&[&"kinetic", &g, &"--out-trace", &trace]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(read(&trace).lines().count(), 1);
}

#[test]
fn hanger_needs_seed_and_matches_heap() {
    let s = Sandbox::new();
    let g = s.file("k22.json", K22);
    let o = hourglass(&[&"kinetic", &g, &"--flavor", &"hanger"]);
    assert_eq!(o.status.code(), Some(1));
    let (a, b) = (s.path("heap.csv"), s.path("hanger.csv"));
    hourglass(&[&"kinetic", &g, &"--out-traj", &a]);
    let o = hourglass(&[&"kinetic", &g, &"--flavor", &"hanger", &"--seed", &"9", &"--out-traj", &b]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(read(&a), read(&b));
}

#[test]
fn outputs_are_deterministic() {
    let s = Sandbox::new();
    let (g1, g2) = (s.file("v.json", V_SHAPE), s.file("w.json", V_SHAPE_MOVED));
    let (a, b) = (s.path("a.csv"), s.path("b.csv"));
    let (ta, tb) = (s.path("ta.csv"), s.path("tb.csv"));
    hourglass(&[&"pht-distance", &g1, &g2, &"--out-traj", &a, &"--out-trace", &ta]);
    hourglass(&[&"pht-distance", &g1, &g2, &"--out-traj", &b, &"--out-trace", &tb]);
    assert_eq!(read(&a), read(&b));
    assert_eq!(read(&ta), read(&tb));
}

#[test]
fn pht_distance_examples() {
    let s = Sandbox::new();
    let (a, b) = (s.file("a.json", SEGMENT), s.file("b.json", SEGMENT_UP));
    let o = hourglass(&[&"pht-distance", &a, &b]);
    assert_eq!(o.status.code(), Some(0));
    assert!((value_after(&o, "distance:") - 1.2).abs() < 1e-9);
    let o = hourglass(&[&"pht-distance", &a, &a]);
    assert_eq!(value_after(&o, "distance:"), 0.0);
    let (v, w) = (s.file("v.json", V_SHAPE), s.file("w.json", V_SHAPE_MOVED));
    let vines = s.path("vines.json");
    let o = hourglass(&[&"pht-distance", &v, &w, &"--out-vines", &vines]);
    assert_eq!(o.status.code(), Some(0));
    assert!(value_after(&o, "distance:") <= std::f64::consts::TAU * 0.1 + 1e-9);
    let dump: serde_json::Value = serde_json::from_str(&read(&vines)).unwrap();
    assert_eq!(dump.as_array().unwrap().len(), 2);
}

#[test]
fn bad_geometry_exits_3() {
    let s = Sandbox::new();
    let square = s.file(
        "sq.json",
        r#"{"vertices":[[0,0],[1,0],[1,1],[0,1]],"edges":[[0,1],[1,2],[2,3],[3,0]]}"#,
    );
    let seg = s.file("seg.json", SEGMENT);
    let o = hourglass(&[&"pht-distance", &square, &seg]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    let split = s.file("split.json", r#"{"vertices":[[0,0],[1,0.2],[3,1],[4,1.5]],"edges":[[0,1],[2,3]]}"#);
    let o = hourglass(&[&"pht-distance", &split, &seg]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn compare_oracle_reports_gap() {
    let s = Sandbox::new();
    let (a, b) = (s.file("a.json", SEGMENT), s.file("b.json", SEGMENT_UP));
    let o = hourglass(&[&"compare-oracle", &a, &a, &"--samples", &"100"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(value_after(&o, "absolute gap:"), 0.0);
    let o = hourglass(&[&"compare-oracle", &a, &b]);
    assert!(value_after(&o, "absolute gap:") <= 1e-3);
    assert!(stdout(&o).contains("within tolerance: yes"));
}
