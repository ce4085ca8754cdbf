//! Byte-exact output for canned configurations. Regenerate with
//! `UPDATE_GOLDEN=1 cargo test -p survival-cli --test golden`.

use std::path::PathBuf;
use std::process::Command;

const CASES: &[(&str, &[&str], i32)] = &[
    (
        "voronoi_z2_grid",
        &[
            "voronoi", "--graph", "z:2:std", "--site", "0,0", "--site", "3,0", "-R", "6", "--out",
            "grid",
        ],
        0,
    ),
    (
        "voronoi_free23_profile",
        &[
            "voronoi",
            "--graph",
            "free23",
            "--site",
            "a",
            "--site",
            "b",
            "-R",
            "10",
            "--profile",
        ],
        0,
    ),
    (
        "voronoi_z1_tie",
        &[
            "voronoi", "--graph", "z:1:std", "--site", "-2", "--site", "2", "-R", "5",
        ],
        0,
    ),
    (
        "voronoi_ladder_equiv",
        &[
            "voronoi",
            "--graph",
            "ladder",
            "--site",
            "0,0",
            "--site",
            "3,1",
            "-R",
            "6",
            "--check-equiv",
            "--out",
            "grid",
        ],
        0,
    ),
    (
        "compete_z2_m2",
        &[
            "compete", "--graph", "z:2:std", "--x", "0,0", "--y", "4,0", "-m", "2", "-R", "40",
        ],
        0,
    ),
    (
        "compete_z2_m1_grid",
        &[
            "compete", "--graph", "z:2:std", "--x", "0,0", "--y", "4,0", "-m", "1", "-R", "12",
            "--out", "grid",
        ],
        0,
    ),
    (
        "compete_tree_m1",
        &[
            "compete", "--graph", "tree:3", "--x", "e", "--y", "g1", "-m", "1", "-R", "10",
        ],
        0,
    ),
    (
        "cover_probe_z2",
        &[
            "cover", "--graph", "z:2:std", "--probe", "-d", "1", "-r", "4:14",
        ],
        0,
    ),
    (
        "cover_search_diag",
        &[
            "cover", "--graph", "z:2:diag", "--search", "-r", "12", "-d", "1",
        ],
        0,
    ),
    (
        "cover_eight_llz",
        &["cover", "--graph", "ll-z", "--eight", "-d", "1", "-r", "10"],
        0,
    ),
    (
        "cover_verify_missing_ball",
        &[
            "cover", "--graph", "z:2:std", "--verify", "-r", "5", "--center", "0,5", "--center",
            "5,0", "--center", "0,-5",
        ],
        1,
    ),
    (
        "witness_antipodal_llz",
        &["witness", "--graph", "ll-z", "--antipodal", "-r", "5"],
        0,
    ),
    (
        "witness_spread_llz2",
        &[
            "witness",
            "--graph",
            "ll-z2",
            "--spread",
            "-r",
            "6",
            "-n",
            "3",
            "--min-pair",
            "8",
        ],
        0,
    ),
    (
        "witness_sprawl_z2",
        &[
            "witness", "--graph", "z:2:std", "--sprawl", "-r", "3", "--exact",
        ],
        0,
    ),
];

fn run(args: &[&str]) -> (Vec<u8>, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_survival"))
        .args(args)
        .output()
        .unwrap();
    (out.stdout, out.status.code().unwrap())
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{name}.out"))
}

#[test]
fn outputs_match_golden_files() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for &(name, args, code) in CASES {
        let (stdout, got) = run(args);
        assert_eq!(got, code, "{name}: exit code");
        let path = golden_path(name);
        if update {
            std::fs::write(&path, &stdout).unwrap();
            continue;
        }
        let want = std::fs::read(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
        assert!(
            stdout == want,
            "{name}: output differs from {}",
            path.display()
        );
    }
}

#[test]
fn output_does_not_depend_on_thread_count() {
    for &(name, args, _) in CASES
        .iter()
        .filter(|c| c.0.starts_with("cover") || c.0.starts_with("voronoi"))
    {
        let mut one = args.to_vec();
        one.extend(["--threads", "1"]);
        let mut four = args.to_vec();
        four.extend(["--threads", "4"]);
        assert_eq!(run(&one), run(&four), "{name}");
    }
}

#[test]
fn every_json_line_is_versioned() {
    for &(name, args, _) in CASES {
        if args.contains(&"grid") {
            continue;
        }
        let (stdout, _) = run(args);
        for line in String::from_utf8(stdout).unwrap().lines() {
            let v: serde_json::Value =
                serde_json::from_str(line).unwrap_or_else(|e| panic!("{name}: {e}: {line}"));
            assert_eq!(v["v"], 1, "{name}");
            assert!(v["kind"].is_string(), "{name}");
            assert!(v.get("wall_ms").is_none(), "{name}");
        }
    }
}
