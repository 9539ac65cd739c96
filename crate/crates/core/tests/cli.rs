use std::path::PathBuf;
use std::process::Command;

use polar_kernels::cli::{run, EXIT_INVALID, EXIT_OK};

fn cli(args: &[&str]) -> (u8, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("polar-kernels").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let (code, out, err) = cli(&all);
    assert_eq!(code, EXIT_OK, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("polar-kernels-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

/// All 2^n leaf values of Z for G_2 on BEC(ε).
fn bec_leaves(eps: f64, depth: usize) -> Vec<f64> {
    let mut z = vec![eps];
    for _ in 0..depth {
        z = z.iter().flat_map(|&v| [v + v - v * v, v * v]).collect();
    }
    z
}

#[test]
fn exponent_of_kernel_one() {
    let v = json(&["exponent", "--kernel", "1"]);
    assert_eq!(v["exponent"], 0.52742);
    assert_eq!(v["chain_exponent_bound"], 0.52742);
    assert_eq!(
        v["partial_distances"],
        serde_json::json!([1, 2, 2, 2, 2, 4, 4, 4, 6, 6, 6, 8, 8, 8, 8, 16])
    );
}

#[test]
fn dumped_kernels_round_trip() {
    let dir = scratch("dump");
    for (sel, hex) in [("1", false), ("1", true), ("2", false), ("example", true)] {
        let path = dir.join(format!("k{sel}-{hex}.txt"));
        let p = path.to_str().unwrap();
        let mut args = vec!["dump-kernel", "--kernel", sel, "--out", p];
        if hex {
            args.push("--hex");
        }
        assert_eq!(cli(&args).0, EXIT_OK);
        let direct = json(&["exponent", "--kernel", sel]);
        let loaded = json(&["exponent", "--kernel", &format!("file:{p}")]);
        assert_eq!(direct["partial_distances"], loaded["partial_distances"]);
        assert_eq!(direct["exponent"], loaded["exponent"]);
        // The dump of a loaded kernel is the dump it was loaded from.
        let (_, again, _) = cli(&["dump-kernel", "--kernel", &format!("file:{p}")].iter().copied().chain(hex.then_some("--hex")).collect::<Vec<_>>());
        assert_eq!(again, std::fs::read_to_string(&path).unwrap());
    }
}

#[test]
fn csv_and_json_agree_on_exponents() {
    for sel in ["arikan", "example", "3"] {
        let v = json(&["exponent", "--kernel", sel]);
        let (_, csv, _) = cli(&["exponent", "--kernel", sel, "--format", "csv"]);
        let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(row[3].parse::<f64>().unwrap(), v["exponent"].as_f64().unwrap());
    }
}

#[test]
fn bound_small_dimensions() {
    let v = json(&["bound", "--l", "2"]);
    assert_eq!(v["exponent"], 0.5);
    let v = json(&["bound", "--l", "4", "--certificates"]);
    assert_eq!(v["optimal_sequence"], serde_json::json!([1, 2, 2, 4]));
    assert_eq!(v["certificate"]["verdict"], "Feasible");
    assert_eq!(v["pruned_branches"].as_array().unwrap().len() as u64, v["pruned"].as_u64().unwrap());
}

#[test]
fn tree_csv_is_seeded_and_lands_on_exact_leaves() {
    let args = [
        "simulate", "tree", "--kernel", "arikan", "--channel", "bec:0.5", "--depth", "10", "--trials", "1000", "--seed",
        "7", "--format", "csv",
    ];
    let (code, out, _) = cli(&args);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, cli(&args).1);
    let mut lines = out.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("# polar-kernels simulate tree") && header.contains("seed=7") && header.contains("trials=1000"));
    assert_eq!(lines.next(), Some("trial,n,Z"));
    let leaves = bec_leaves(0.5, 10);
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 1000);
    for (t, r) in rows.iter().enumerate() {
        assert_eq!(r[0], t.to_string());
        assert_eq!(r[1], "10");
        let z: f64 = r[2].parse().unwrap();
        assert!(leaves.iter().any(|&v| (v - z).abs() < 1e-12), "{z} is not a leaf value");
    }

    let v = json(&args[..args.len() - 2]);
    let z: Vec<f64> = v["samples"].as_array().unwrap().iter().map(|s| s["Z"].as_f64().unwrap()).collect();
    let from_csv: Vec<f64> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
    assert_eq!(z, from_csv);
    assert_eq!(v["config"]["seed"], 7);
}

#[test]
fn tree_depth_zero_is_the_channel() {
    let (_, out, _) = cli(&["simulate", "tree", "--channel", "bsc:0.11", "--depth", "0", "--trials", "5", "--format", "csv"]);
    let z0 = 2.0 * (0.11f64 * 0.89).sqrt();
    let rows: Vec<&str> = out.lines().skip(2).collect();
    assert_eq!(rows.len(), 5);
    for r in rows {
        let z: f64 = r.rsplit(',').next().unwrap().parse().unwrap();
        assert!((z - z0).abs() < 1e-12);
    }
}

#[test]
fn sc_smoke_runs() {
    let base = ["simulate", "sc", "--kernel", "1", "--m", "2", "--trials", "10", "--design-trials", "10"];
    let with = |channel: &str, rate: &str| json(&[&base[..], &["--channel", channel, "--rate", rate]].concat());
    let clean = with("noiseless", "0.5");
    assert_eq!(clean["block_errors"], 0);
    assert_eq!(clean["config"]["N"], 256);
    let frozen_all = with("bsc:0.4", "0");
    assert_eq!(frozen_all["block_errors"], 0);
    let noisy = with("bec:0.3", "0.5");
    assert_eq!(noisy["snr_or_eps"], 0.3);
    assert_eq!(noisy["rate"], 0.5);
    assert_eq!(noisy["config"]["design"], "genie");

    let (_, csv, _) = cli(&[&base[..], &["--channel", "bec:0.3", "--rate", "0.5", "--format", "csv"]].concat());
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().contains("seed=0"));
    assert_eq!(lines.next(), Some("snr_or_eps,rate,block_errors,trials"));
    assert_eq!(lines.next().unwrap(), format!("0.3,0.5,{},10", noisy["block_errors"]));
}

#[test]
fn subchannel_reports() {
    let v = json(&["simulate", "subchannel", "--kernel", "arikan", "--channel", "bec:0.4"]);
    let z = v["bhattacharyya"].as_array().unwrap();
    assert!((z[0].as_f64().unwrap() - 0.64).abs() < 1e-12);
    assert!((z[1].as_f64().unwrap() - 0.16).abs() < 1e-12);
    let mc = json(&[
        "simulate", "subchannel", "--kernel", "example", "--channel", "bsc:0.1", "--method", "monte-carlo", "--samples",
        "2000", "--seed", "3",
    ]);
    assert_eq!(mc["config"]["seed"], 3);
    assert_eq!(mc["stderr"].as_array().unwrap().len(), 4);
}

#[test]
fn table_two_is_idempotent() {
    let dir = scratch("tables");
    let d = dir.to_str().unwrap();
    let (code, out, _) = cli(&["tables", "--only", "2", "--out-dir", d]);
    assert_eq!(code, EXIT_OK, "{out}");
    let first = std::fs::read(dir.join("table2.csv")).unwrap();
    assert_eq!(cli(&["tables", "--only", "2", "--out-dir", d]).0, EXIT_OK);
    assert_eq!(first, std::fs::read(dir.join("table2.csv")).unwrap());
    let text = String::from_utf8(first).unwrap();
    // The quoted chain field holds commas; the exponent is second from the right.
    let exps: Vec<f64> = text.lines().skip(1).map(|l| l.rsplit(',').nth(1).unwrap().parse().unwrap()).collect();
    for (got, want) in exps.iter().zip([0.52742, 0.51828, 0.50773, 0.50193]) {
        assert!((got - want).abs() <= 5e-5, "{got} vs {want}");
    }
}

#[test]
fn check_decomposition_files() {
    let dir = scratch("check");
    let good = dir.join("good.txt");
    std::fs::write(
        &good,
        "decomposition length=4\nlevel distance=1 code=universe:4\n0000\n1000\nlevel distance=2\n0000\n1010\n1100\n0110\nlevel distance=4\n0000\n1111\n",
    )
    .unwrap();
    let (code, out, err) = cli(&["check-decomposition", good.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.contains("partial distances: 1,2,2,4"), "{out}");
    assert!(out.contains("lp system: feasible"));

    let bad = dir.join("bad.txt");
    std::fs::write(&bad, "decomposition length=4\nlevel distance=3\n0000\n").unwrap();
    assert_eq!(cli(&["check-decomposition", bad.to_str().unwrap()]).0, EXIT_INVALID);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_polar-kernels");
    let ok = Command::new(bin).args(["exponent", "--kernel", "arikan"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("exponent: 0.500000"));
    let bad = Command::new(bin).args(["simulate", "tree", "--depth", "1", "--channel", "bec:1.5"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    let missing = Command::new(bin).args(["exponent", "--kernel", "file:/nonexistent/k.txt"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(1));
}
