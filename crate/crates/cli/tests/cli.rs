use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use braceforge::brace::{brace_from_regular, verify_brace, RegularSubgroup};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_braceforge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn enumerate_to(path: &Path, group: &str, extra: &[&str]) -> Output {
    let mut args = vec!["enumerate", "--group", group, "--out", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn class_count(path: &Path) -> usize {
    let text = fs::read_to_string(path).unwrap();
    text.lines()
        .last()
        .unwrap()
        .strip_prefix("count=")
        .unwrap()
        .parse()
        .unwrap()
}

#[test]
fn enumerate_small_groups() {
    let dir = tempfile::tempdir().unwrap();
    for (group, prime, classes) in [("4", "2", 2), ("2,2", "2", 2), ("2", "2", 1), ("3", "3", 1)] {
        let path = dir.path().join(format!("{group}.txt"));
        let out = enumerate_to(&path, group, &["--prime", prime]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(class_count(&path), classes, "{group}");
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert!(stderr.contains(&format!("classes\t{classes}")));
    }
}

#[test]
fn wrong_prime_and_bad_flags() {
    assert_eq!(code(&run(&["enumerate", "--group", "4", "--prime", "3"])), 1);
    assert_eq!(code(&run(&["enumerate", "--group", "6"])), 1);
    assert_eq!(code(&run(&["enumerate", "--group", "4", "--jobs", "0"])), 1);
    assert_eq!(code(&run(&["enumerate", "--group", "1,4"])), 1);
    assert_eq!(code(&run(&["report", "--in", "/nonexistent/file"])), 1);
}

#[test]
fn output_is_deterministic_across_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    let c = dir.path().join("c.txt");
    assert_eq!(code(&enumerate_to(&a, "2,4", &["--jobs", "1"])), 0);
    assert_eq!(code(&enumerate_to(&b, "2,4", &["--jobs", "8"])), 0);
    assert_eq!(code(&enumerate_to(&c, "2,4", &["--jobs", "1"])), 0);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(fs::read(&a).unwrap(), fs::read(&c).unwrap());
}

#[test]
fn interrupted_run_resumes_identically() {
    let dir = tempfile::tempdir().unwrap();
    let reference = dir.path().join("reference.txt");
    assert_eq!(code(&enumerate_to(&reference, "2,2,2", &[])), 0);

    let ckpt = dir.path().join("ckpt");
    let resumed = dir.path().join("resumed.txt");
    let ckpt_arg = ckpt.to_str().unwrap();
    let out = enumerate_to(&resumed, "2,2,2", &["--checkpoint-dir", ckpt_arg, "--stop-after", "3"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("interrupted"));
    assert!(!resumed.exists());
    let mut rounds = 0;
    loop {
        let out = enumerate_to(
            &resumed,
            "2,2,2",
            &["--checkpoint-dir", ckpt_arg, "--resume", "--stop-after", "3"],
        );
        rounds += 1;
        if code(&out) == 0 {
            break;
        }
        assert_eq!(code(&out), 1);
        assert!(rounds < 100);
    }
    assert_eq!(fs::read(&reference).unwrap(), fs::read(&resumed).unwrap());
}

#[test]
fn corrupted_checkpoint_exits_with_integrity_code() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("ckpt");
    let ckpt_arg = ckpt.to_str().unwrap();
    let out_path = dir.path().join("out.txt");
    assert_eq!(
        code(&enumerate_to(
            &out_path,
            "2,4",
            &["--checkpoint-dir", ckpt_arg, "--stop-after", "1"]
        )),
        1
    );
    for entry in fs::read_dir(&ckpt).unwrap() {
        let path = entry.unwrap().path();
        let text = fs::read_to_string(&path).unwrap();
        fs::write(&path, text.replace("2,4\n", "4,2\n")).unwrap();
    }
    let out = enumerate_to(&out_path, "2,4", &["--checkpoint-dir", ckpt_arg, "--resume"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains(".ckpt"));
}

#[test]
fn oversized_group_exits_with_capacity_code() {
    assert_eq!(code(&run(&["enumerate", "--group", "4,4,4"])), 4);
}

#[test]
fn oracle_comparison_passes() {
    for group in ["4", "2,4"] {
        let out = run(&["oracle", "--group", group]);
        assert_eq!(code(&out), 0);
        assert!(String::from_utf8_lossy(&out.stdout).starts_with("PASS"));
    }
}

#[test]
fn report_rows_sum_to_total() {
    let dir = tempfile::tempdir().unwrap();
    let list = dir.path().join("c4.txt");
    assert_eq!(code(&enumerate_to(&list, "4", &[])), 0);
    let out = run(&["report", "--in", list.to_str().unwrap(), "--format", "tsv"]);
    assert_eq!(code(&out), 0);
    let table = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines.first(), Some(&"mult_group\tcount"));
    assert_eq!(lines.len(), 4);
    let counts: Vec<usize> = lines[1..3]
        .iter()
        .map(|l| l.split('\t').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(counts, vec![1, 1]);
    assert_eq!(lines[3], "total\t2");

    let id_map = dir.path().join("ids.tsv");
    let first_hash = lines[1].split('\t').next().unwrap();
    fs::write(&id_map, format!("{first_hash}\tNAMED\n")).unwrap();
    let out = run(&[
        "report",
        "--in",
        list.to_str().unwrap(),
        "--id-map",
        id_map.to_str().unwrap(),
    ]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("NAMED\t1"));

    let empty = dir.path().join("empty.txt");
    fs::write(&empty, "BRACEFORGE-CLASSES 1\n4\ncount=0\n").unwrap();
    let out = run(&["report", "--in", empty.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "mult_group\tcount\ntotal\t0\n");
}

#[test]
fn classify_and_merge_class_lists() {
    let dir = tempfile::tempdir().unwrap();
    let list = dir.path().join("list.txt");
    assert_eq!(code(&enumerate_to(&list, "2,4", &[])), 0);
    let again = dir.path().join("again.txt");
    let merged = dir.path().join("merged.txt");
    let l = list.to_str().unwrap();
    assert_eq!(
        code(&run(&["classify", "--in", l, "--out", again.to_str().unwrap()])),
        0
    );
    assert_eq!(fs::read(&list).unwrap(), fs::read(&again).unwrap());
    assert_eq!(
        code(&run(&[
            "classify",
            "--in",
            l,
            "--in",
            l,
            "--jobs",
            "4",
            "--out",
            merged.to_str().unwrap()
        ])),
        0
    );
    assert_eq!(fs::read(&list).unwrap(), fs::read(&merged).unwrap());
}

#[test]
fn verify_accepts_good_and_rejects_tampered_lists() {
    let dir = tempfile::tempdir().unwrap();
    let list = dir.path().join("list.txt");
    assert_eq!(code(&enumerate_to(&list, "2,2", &[])), 0);
    let l = list.to_str().unwrap();
    let out = run(&["verify", "--in", l, "--seed", "7", "--conjugators", "20"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let text = fs::read_to_string(&list).unwrap();
    let truncated = dir.path().join("truncated.txt");
    fs::write(&truncated, &text[..text.rfind("count=").unwrap()]).unwrap();
    assert_eq!(code(&run(&["verify", "--in", truncated.to_str().unwrap()])), 3);
}

#[test]
fn exported_braces_satisfy_the_axioms() {
    let dir = tempfile::tempdir().unwrap();
    let list = dir.path().join("list.txt");
    assert_eq!(code(&enumerate_to(&list, "2,4", &[])), 0);
    let out_dir = dir.path().join("braces");
    let out = run(&[
        "braces",
        "--in",
        list.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let files: Vec<_> = fs::read_dir(&out_dir).unwrap().collect();
    assert_eq!(files.len(), class_count(&list));
    for f in files {
        let text = fs::read_to_string(f.unwrap().path()).unwrap();
        assert!(text.starts_with("2,4\n"));
        let lambda = RegularSubgroup::from_text(&text).unwrap();
        assert!(verify_brace(&brace_from_regular(&lambda).unwrap()));
    }
}
