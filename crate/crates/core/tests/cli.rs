mod common;

use std::path::Path;
use std::process::Command;

use common::arb_instance;
use cyclic_orbit::cli::{run, InstanceFile, Outcome};
use proptest::prelude::*;
use tempfile::TempDir;

const EXAMPLE: &str = "n 9\nalphabet 01\nperm (6,5,7,3,2,1)(4,8)\nv 010001111\nw 101110001\n";

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("cyclic-orbit").chain(args.iter().copied()))
}

fn binary(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cyclic-orbit")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn solve_and_oracle_on_example() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "g1.txt", EXAMPLE);
    let (code, stdout, _) = binary(&["solve", &path]);
    assert_eq!((code, stdout.as_str()), (0, "YES r=1 solutions=1+2Z\n"));
    let (code, stdout, _) = binary(&["oracle", &path]);
    assert_eq!((code, stdout.as_str()), (0, "YES r=1 solutions=1+2Z\n"));
    let verbose = cli(&["--verbose", "solve", &path]);
    assert!(verbose.stdout.starts_with("YES r=1 solutions=1+2Z\n"));
    assert!(verbose.stdout.contains("# cycle (6,5,7,3,2,1): x = 1 mod 2"), "{}", verbose.stdout);
}

#[test]
fn solve_trivial_answers() {
    let dir = TempDir::new().unwrap();
    let same = write(&dir, "id.txt", "n 3\nalphabet abc\nperm\nv abc\nw abc\n");
    assert_eq!(
        cli(&["solve", &same]),
        Outcome { code: 0, stdout: "YES r=0 solutions=0+1Z\n".into(), stderr: String::new() }
    );
    let fixed = write(&dir, "fixed.txt", "n 3\nalphabet abc\nperm (1,2)\nv aab\nw aac\n");
    let out = cli(&["solve", &fixed]);
    assert_eq!((out.code, out.stdout.as_str()), (1, "NO\n"));
    assert_eq!(cli(&["oracle", &fixed]).stdout, "NO\n");
}

#[test]
fn oracle_refuses_large_orders() {
    let dir = TempDir::new().unwrap();
    let g = cyclic_orbit::permutation::primorial_permutation(8);
    let v = cyclic_orbit::bench::marked_configuration(&g);
    let inst = InstanceFile { n: g.degree(), alphabet: vec!['0', '1'], perm: g, v: v.clone(), w: v };
    let path = write(&dir, "big.txt", &inst.to_string());
    let (code, _, stderr) = binary(&["oracle", &path]);
    assert_eq!(code, 3);
    assert!(stderr.contains("9699690"));
    assert_eq!(cli(&["oracle", "--bound", "10000000", &path]).code, 0);
    assert_eq!(cli(&["solve", &path]).stdout, "YES r=0 solutions=0+9699690Z\n");
}

#[test]
fn congruence_and_crt_check() {
    let dir = TempDir::new().unwrap();
    let ok = write(&dir, "ok.txt", "# both cycles\n1 mod 2\n1 mod 3\n");
    let out = cli(&["congruence", &ok]);
    assert_eq!((out.code, out.stdout.as_str()), (0, "1 + 6 Z\n"));
    let out = cli(&["crt-check", &ok]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout.lines().next(), Some("SOLVABLE"));
    assert!(out.stdout.contains("p_max 3\ne_max 1\n"));

    let bad = write(&dir, "bad.txt", "1 mod 4\n3 mod 8\n");
    assert_eq!(cli(&["congruence", &bad]).stdout, "EMPTY\n");
    let out = cli(&["crt-check", &bad]);
    assert_eq!((out.code, out.stdout.lines().next()), (1, Some("UNSOLVABLE")));

    let broken = write(&dir, "broken.txt", "1 mod 2\n3 mod 3\n");
    let (code, _, stderr) = binary(&["congruence", &broken]);
    assert_eq!(code, 2);
    assert!(stderr.contains("line 2"), "{stderr}");
}

#[test]
fn stirling_report() {
    let out = cli(&["stirling", "--max-n", "40"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout.lines().filter(|l| l.starts_with("ok")).count(), 5);
    assert_eq!(cli(&["stirling", "--max-n", "1000"]).code, 2);
}

#[test]
fn bench_outputs_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let csv_a = dir.path().join("a.csv");
    let csv_b = dir.path().join("b.csv");
    let args = |p: &Path| {
        ["--seed", "4", "--csv", p.to_str().unwrap(), "bench", "--mode", "primorial", "--max-i", "8"]
            .map(String::from)
            .to_vec()
    };
    let a = run(std::iter::once("cyclic-orbit".to_string()).chain(args(&csv_a)));
    let b = run(std::iter::once("cyclic-orbit".to_string()).chain(args(&csv_b)));
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a.stdout, b.stdout);
    let text = std::fs::read_to_string(&csv_a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&csv_b).unwrap());
    assert_eq!(text.lines().count(), 9);
    assert!(text.contains(",9699690,"));

    let avg = dir.path().join("avg.csv");
    let out = cli(&[
        "bench",
        "--mode",
        "average",
        "--n",
        "50",
        "--trials",
        "30",
        "--seed",
        "2",
        "--csv",
        avg.to_str().unwrap(),
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let text = std::fs::read_to_string(&avg).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,trial,k_cycles,word_ops,max_bits"));
    assert_eq!(lines.count(), 30);
    assert_eq!(cli(&["bench", "--mode", "primorial", "--max-i", "26"]).code, 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(cli(&[]).code, 2);
    assert_eq!(cli(&["frobnicate"]).code, 2);
    assert_eq!(cli(&["solve", "/nonexistent/instance.txt"]).code, 2);
    assert_eq!(cli(&["--help"]).code, 0);
}

#[test]
fn malformed_files_report_position() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "dup.txt", "n 9\nalphabet 01\nperm (6,5,7,3,2,1)(4,6)\nv 010001111\nw 101110001\n");
    let (code, stdout, stderr) = binary(&["solve", &path]);
    assert_eq!((code, stdout.as_str()), (2, ""));
    assert!(stderr.starts_with("error: line 3:"), "{stderr}");
    assert!(stderr.contains("column"), "{stderr}");
}

fn mutate(text: &str, edits: &[(usize, u8, u8)]) -> String {
    let mut bytes = text.as_bytes().to_vec();
    for &(pos, op, byte) in edits {
        let pos = pos % (bytes.len() + 1);
        let byte = b" \n#(),0123456789abnvwplm-x"[byte as usize % 25];
        match op % 3 {
            0 if pos < bytes.len() => {
                bytes.remove(pos);
            }
            1 if pos < bytes.len() => bytes[pos] = byte,
            _ => bytes.insert(pos, byte),
        }
    }
    String::from_utf8(bytes).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn fuzzed_instances_never_crash(edits in proptest::collection::vec((any::<usize>(), any::<u8>(), any::<u8>()), 1..6)) {
        let dir = TempDir::new().unwrap();
        let text = mutate(EXAMPLE, &edits);
        let path = write(&dir, "fuzz.txt", &text);
        for cmd in ["solve", "oracle"] {
            let out = cli(&[cmd, &path]);
            match text.parse::<InstanceFile>() {
                Ok(_) => prop_assert!(out.code == 0 || out.code == 1, "{text:?}: {out:?}"),
                Err(_) => {
                    prop_assert_eq!(out.code, 2, "{:?}", text);
                    prop_assert!(out.stderr.starts_with("error: line "), "{:?}", out.stderr);
                }
            }
        }
    }

    #[test]
    fn arbitrary_text_exits_two(text in "[ -~\n]{0,80}") {
        let dir = TempDir::new().unwrap();
        let path = write(&dir, "junk.txt", &text);
        prop_assert_eq!(cli(&["solve", &path]).code, 2);
        prop_assert!([0, 1, 2].contains(&cli(&["congruence", &path]).code));
        prop_assert!([0, 1, 2].contains(&cli(&["crt-check", &path]).code));
    }

    #[test]
    fn solve_and_oracle_lines_identical((g, v, w) in arb_instance(10, &['0', '1', '2'])) {
        let dir = TempDir::new().unwrap();
        let inst = InstanceFile { n: g.degree(), alphabet: vec!['0', '1', '2'], perm: g, v, w };
        let path = write(&dir, "inst.txt", &inst.to_string());
        let solve = cli(&["solve", &path]);
        let oracle = cli(&["oracle", &path]);
        prop_assert_eq!(solve, oracle);
    }
}

#[test]
fn binary_rejects_broken_files() {
    let dir = TempDir::new().unwrap();
    let cases = [
        "",
        "n\n",
        "n 2\nalphabet 01\nperm (1,3)\nv 01\nw 10\n",
        "n 2\nalphabet 01\nperm (1,99999999999999999999999)\nv 01\nw 10\n",
    ];
    for (i, text) in cases.iter().enumerate() {
        let path = write(&dir, &format!("f{i}.txt"), text);
        assert_eq!(binary(&["solve", &path]).0, 2, "{text:?}");
    }
}
