use std::path::Path;
use std::process::{Command, Output};

use kachash::HashedDataset;

fn kachash(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kachash"))
        .args(args)
        .current_dir(cwd)
        .env_remove("KACHASH_DATA_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const BUILD_SHORT: &[&str] = &[
    "build", "--family", "short", "--projection", "circulant", "--n", "784", "--k", "392", "--seed", "7", "--out", "p.doc",
];

#[test]
fn build_reports_padded_dim_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let o = kachash(BUILD_SHORT, dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("padded_dim = 1024"));
    let first = std::fs::read(dir.path().join("p.doc")).unwrap();
    kachash(BUILD_SHORT, dir.path());
    assert_eq!(std::fs::read(dir.path().join("p.doc")).unwrap(), first);
}

#[test]
fn build_reports_kac_step_count() {
    let dir = tempfile::tempdir().unwrap();
    let o = kachash(
        &["build", "--family", "extended_kac", "--n", "784", "--k", "98", "--out", "k.doc"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("kac_steps = 7098"), "{}", stdout(&o));
}

#[test]
fn forbidden_combination_exits_with_configuration_code() {
    let dir = tempfile::tempdir().unwrap();
    let o = kachash(
        &["build", "--family", "unstructured", "--projection", "toeplitz", "--n", "784", "--k", "392", "--out", "x.doc"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("toeplitz"));
    assert!(stdout(&o).is_empty());
    assert!(!dir.path().join("x.doc").exists());
}

#[test]
fn build_without_out_writes_document_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let o = kachash(&["build", "--family", "short", "--n", "8", "--k", "4", "--seed", "1"], dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("# kachash pipeline\n"));
    assert!(stdout(&o).contains("projection = circulant"));
}

#[test]
fn hash_csv_rows_and_rerun_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("x.csv"), "1,2,3,4,5\n-1,0,2,0.5,3\n0,0,0,0,1\n").unwrap();
    let o = kachash(&["build", "--family", "extended_hadamard", "--projection", "toeplitz", "--n", "5", "--k", "6", "--out", "p.doc"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let run = |out: &str| {
        let o = kachash(&["hash", "--pipeline", "p.doc", "--input", "x.csv", "--out", out], dir.path());
        assert!(o.status.success(), "{}", stderr(&o));
        std::fs::read(dir.path().join(out)).unwrap()
    };
    let a = run("a.khsh");
    assert_eq!(run("b.khsh"), a);
    let codes = HashedDataset::from_khsh(&a).unwrap();
    assert_eq!(codes.len(), 3);
    assert_eq!(codes.code_len(), 6);
}

#[test]
fn hash_reads_labelled_delimited_input() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("x.tsv"), "1\t2\t3\n4\t5\t6\n").unwrap();
    kachash(&["build", "--family", "short", "--n", "2", "--k", "2", "--out", "p.doc"], dir.path());
    let o = kachash(
        &["hash", "--pipeline", "p.doc", "--input", "x.tsv", "--delimiter", "\t", "--labels", "--out", "c.khsh"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let codes = HashedDataset::from_khsh(&std::fs::read(dir.path().join("c.khsh")).unwrap()).unwrap();
    assert_eq!(codes.len(), 2);
}

#[test]
fn hash_dimension_mismatch_prints_both_dimensions() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("x.csv"), "1,2,3\n").unwrap();
    kachash(&["build", "--family", "short", "--n", "4", "--k", "2", "--out", "p.doc"], dir.path());
    let o = kachash(&["hash", "--pipeline", "p.doc", "--input", "x.csv", "--out", "c.khsh"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains('4') && err.contains('3'), "{err}");
}

#[test]
fn hash_rejects_malformed_pipeline_document() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("p.doc"), "# kachash pipeline\nversion = 1\nfamily = wavelet\n").unwrap();
    std::fs::write(dir.path().join("x.csv"), "1,2\n").unwrap();
    let o = kachash(&["hash", "--pipeline", "p.doc", "--input", "x.csv", "--out", "c.khsh"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("p.doc"));
}

#[test]
fn missing_input_file_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    kachash(&["build", "--family", "short", "--n", "4", "--k", "2", "--out", "p.doc"], dir.path());
    let o = kachash(&["hash", "--pipeline", "p.doc", "--input", "absent.csv", "--out", "c.khsh"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("absent.csv"));
}

#[test]
fn verify_collision_table_has_one_row_per_angle() {
    let dir = tempfile::tempdir().unwrap();
    let o = kachash(
        &["verify", "collision", "--angles", "0,1.5708,3.14159", "--trials", "100", "--bits", "256"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let table: Vec<&str> = out.lines().skip_while(|l| !l.starts_with("theta,")).collect();
    assert_eq!(table.len(), 4);
    let first: Vec<&str> = table[1].split(',').collect();
    assert_eq!(first[0], "0");
    assert_eq!(first[2], "0");
}

#[test]
fn verify_collision_rejects_out_of_range_angle() {
    let dir = tempfile::tempdir().unwrap();
    let o = kachash(&["verify", "collision", "--angles", "0,4"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_jl_reports_bound_probability() {
    let dir = tempfile::tempdir().unwrap();
    let o = kachash(
        &["verify", "jl", "--n-points", "10", "--dim", "1000", "--k", "1000", "--epsilon", "0.3", "--family", "unstructured"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let line = out.lines().find(|l| l.starts_with("bound_probability = ")).unwrap();
    let got: f64 = line["bound_probability = ".len()..].parse().unwrap();
    let want = 1.0 - 2.0 * 100.0 * (-(0.09f64 - 0.027) * 1000.0 / 4.0).exp();
    assert_eq!(got, want);
    assert!(out.contains("pair_count = 45"));
}

#[test]
fn verify_jl_epsilon_outside_unit_interval_is_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = kachash(&["verify", "jl", "--n-points", "5", "--epsilon", "1.5", "--family", "unstructured"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("1.5"));
}

#[test]
fn unknown_family_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = kachash(&["build", "--family", "wavelet", "--n", "4", "--k", "2"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

fn write_tiny_mnist(dir: &Path) {
    use kachash::data::{write_idx_images, write_idx_labels, DatasetMatrix};
    let mnist = dir.join("mnist");
    std::fs::create_dir(&mnist).unwrap();
    let make = |n: usize, seed: u64| {
        let mut values = kachash::rng::gaussian_vec(seed, n * 16);
        let labels: Vec<u32> = (0..n as u32).map(|i| i % 2).collect();
        for (r, &l) in labels.iter().enumerate() {
            for c in 0..16 {
                let v = &mut values[r * 16 + c];
                *v = ((*v * 0.1 + if (c < 8) == (l == 0) { 0.7 } else { 0.2 }).clamp(0.0, 1.0) * 255.0).round() / 255.0;
            }
        }
        let d = DatasetMatrix::from_flat(16, values, None).unwrap();
        (write_idx_images(&d, 4, 4).unwrap(), write_idx_labels(&labels))
    };
    let (ti, tl) = make(60, 1);
    let (si, sl) = make(20, 2);
    std::fs::write(mnist.join("train-images-idx3-ubyte"), ti).unwrap();
    std::fs::write(mnist.join("train-labels-idx1-ubyte"), tl).unwrap();
    std::fs::write(mnist.join("t10k-images-idx3-ubyte"), si).unwrap();
    std::fs::write(mnist.join("t10k-labels-idx1-ubyte"), sl).unwrap();
}

#[test]
fn experiment_writes_table_and_summary_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    write_tiny_mnist(dir.path());
    let args = [
        "experiment", "--data-dir", "mnist", "--reductions", "1,2,4", "--families", "short,extended_kac",
        "--projections", "toeplitz", "--seeds", "1,2", "--epochs", "3", "--batch-size", "16",
    ];
    let run = |out: &str| {
        let mut a = args.to_vec();
        a.extend(["--out", out, "--summary", "s.doc"]);
        let o = kachash(&a, dir.path());
        assert!(o.status.success(), "{}", stderr(&o));
        std::fs::read_to_string(dir.path().join(out)).unwrap()
    };
    let first = run("a.csv");
    assert_eq!(run("b.csv"), first);
    let lines: Vec<&str> = first.lines().collect();
    assert_eq!(lines[0], "family,projection,k,reduction,seed,test_accuracy");
    // per seed: baseline, 3 unstructured, 2 families x 3 reductions
    assert_eq!(lines.len() - 1, 2 * (1 + 3 + 6));
    assert!(lines.iter().any(|l| l.starts_with("unstructured,gaussian_full,16,1,1,")));
    let summary = std::fs::read_to_string(dir.path().join("s.doc")).unwrap();
    assert!(summary.contains("extended_kac.toeplitz.r4.mean"));
}

#[test]
fn experiment_reads_data_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    write_tiny_mnist(dir.path());
    let o = Command::new(env!("CARGO_BIN_EXE_kachash"))
        .args(["experiment", "--reductions", "2", "--families", "short", "--projections", "circulant", "--seeds", "3", "--epochs", "1", "--batch-size", "20"])
        .current_dir(dir.path())
        .env("KACHASH_DATA_DIR", dir.path().join("mnist"))
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("family,projection"));
}

#[test]
fn experiment_without_data_fails_with_context() {
    let dir = tempfile::tempdir().unwrap();
    let o = kachash(&["experiment", "--data-dir", "nowhere"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("train-images-idx3-ubyte"));
}
