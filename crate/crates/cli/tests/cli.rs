use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use affinity::format::{parse_communities, parse_ranked, write_ranked};
use affinity::generators::blob_instance;
use affinity::reduction::{default_epsilon, reduce};
use affinity::{CommunityParams, MemberSet};
use tempfile::TempDir;

const INST_A: &str = "ranked 4\n0: 0 1 2 3\n1: 1 0 2 3\n2: 2 3 0 1\n3: 3 2 0 1\n";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_affinity")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn verify_exit_codes_on_inst_a() {
    let dir = TempDir::new().unwrap();
    let a = file(&dir, "a.txt", INST_A);
    let yes = run(&["verify", "--ranked", s(&a), "--set", "0 1", "--theta", "1", "--alpha", "1", "--beta", "0.5"]);
    assert_eq!(code(&yes), 0);
    assert!(stdout(&yes).contains("tally: 0:2 1:2"));
    let no = run(&["verify", "--ranked", s(&a), "--set", "0 2", "--theta", "1", "--alpha", "1", "--beta", "0.5"]);
    assert_eq!(code(&no), 1);
}

#[test]
fn malformed_input_exits_2_with_line_number() {
    let dir = TempDir::new().unwrap();
    let bad = file(&dir, "bad.txt", "# comment\nrankd 4\n");
    let out = run(&["verify", "--ranked", s(&bad), "--set", "0", "--alpha", "1", "--beta", "0.5"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    let a = file(&dir, "a.txt", INST_A);
    let params = run(&["verify", "--ranked", s(&a), "--set", "0", "--alpha", "1/2", "--beta", "1"]);
    assert_eq!(code(&params), 2);
    let missing = run(&["verify", "--ranked", s(&dir.path().join("nope.txt")), "--set", "0", "--alpha", "1", "--beta", "0"]);
    assert_eq!(code(&missing), 2);
}

#[test]
fn budget_failure_exits_3() {
    let dir = TempDir::new().unwrap();
    let a = file(&dir, "a.txt", INST_A);
    let out = run(&["enumerate", "--ranked", s(&a), "--alpha", "1", "--beta", "0.5", "--k1", "3", "--budget", "2"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn enumerate_inst_a_pairs() {
    let dir = TempDir::new().unwrap();
    let a = file(&dir, "a.txt", INST_A);
    let out = run(&[
        "enumerate", "--ranked", s(&a), "--alpha", "1", "--beta", "0.5", "--sizes", "2", "--k1", "1", "--k2", "4", "--n2", "8",
    ]);
    assert_eq!(code(&out), 0);
    let file = parse_communities(&stdout(&out)).unwrap();
    assert_eq!(file.communities, vec![MemberSet::from([0, 1]), MemberSet::from([2, 3])]);
}

#[test]
fn generated_files_match_the_library_and_verify() {
    let dir = TempDir::new().unwrap();
    let inst = dir.path().join("blob.txt");
    let planted = dir.path().join("planted.txt");
    let out = run(&[
        "generate", "blob", "--blobs", "4", "--blob-size", "5", "--out", s(&inst), "--planted", s(&planted), "--rng-seed", "9",
    ]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&inst).unwrap();
    let expected = blob_instance(4, 5, 1, 9).unwrap();
    assert_eq!(text, write_ranked(&expected.system));
    let system = parse_ranked(&text).unwrap();
    assert_eq!(system, expected.system);
    let communities = parse_communities(&std::fs::read_to_string(&planted).unwrap()).unwrap();
    assert_eq!(communities.communities.len(), 4);
    for set in &communities.communities {
        assert!(system.verify(set, &communities.params).unwrap().is_community);
        let ids = set.to_string();
        let cli = run(&["verify", "--ranked", s(&inst), "--set", &ids, "--alpha", "1", "--beta", "1/2"]);
        assert_eq!(code(&cli), 0);
    }
    let again = dir.path().join("again.txt");
    run(&["generate", "blob", "--blobs", "4", "--blob-size", "5", "--out", s(&again), "--rng-seed", "9"]);
    assert_eq!(std::fs::read(&inst).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = TempDir::new().unwrap();
    let inst = dir.path().join("blob.txt");
    run(&["generate", "blob", "--blobs", "3", "--blob-size", "4", "--out", s(&inst), "--rng-seed", "2"]);
    let enumerate = |threads: &str| {
        stdout(&run(&[
            "--threads", threads, "--rng-seed", "5", "enumerate", "--ranked", s(&inst), "--alpha", "1", "--beta", "1/2", "--sizes",
            "4", "--k2", "8", "--n2", "4",
        ]))
    };
    let one = enumerate("1");
    assert!(one.contains("0 1 2 3"));
    assert_eq!(one, enumerate("3"));
}

#[test]
fn reduction_maps_the_planted_image_back() {
    let dir = TempDir::new().unwrap();
    let w = dir.path().join("w.txt");
    let planted = dir.path().join("p.txt");
    let out = run(&["generate", "planted-weighted", "--n", "8", "--size", "3", "--out", s(&w), "--planted", s(&planted), "--rng-seed", "4"]);
    assert_eq!(code(&out), 0);
    let planted = parse_communities(&std::fs::read_to_string(&planted).unwrap()).unwrap();
    let params: CommunityParams = planted.params.clone();
    let set = &planted.communities[0];
    let system = affinity::format::parse_weighted(&std::fs::read_to_string(&w).unwrap()).unwrap();
    let (_, map) = reduce(&system, &params, 3, &default_epsilon(&params)).unwrap();
    let image = affinity::format::write_communities(&params, [&map.image(set)], false);
    let found = file(&dir, "image.txt", &image);
    let (alpha, beta) = (params.alpha().to_string(), params.beta().to_string());
    let back = run(&[
        "reduce", "--weighted", s(&w), "--alpha", &alpha, "--beta", &beta, "--size", "3", "--map-back", s(&found),
    ]);
    assert_eq!(code(&back), 0);
    assert_eq!(parse_communities(&stdout(&back)).unwrap().communities, vec![set.clone()]);
}

#[test]
fn facets_recovers_f_inst_pair() {
    let dir = TempDir::new().unwrap();
    let f = file(
        &dir,
        "f.txt",
        "faceted 4 2\n0/1: 0 1 2 3\n0/2: 3 2 1 0\n1/1: 1 0 2 3\n1/2: 3 2 0 1\n2/1: 2 3 0 1\n2/2: 1 0 3 2\n3/1: 3 2 0 1\n3/2: 1 0 2 3\n",
    );
    let out = run(&["facets", "--faceted", s(&f), "--alpha", "1", "--beta", "0.5", "--set", "0 1", "--method", "exhaustive"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("facets: 0/1 1/1"));
    let none = run(&["facets", "--faceted", s(&f), "--alpha", "1", "--beta", "0.5", "--set", "0 2", "--method", "exhaustive"]);
    assert_eq!(code(&none), 3);
}

#[test]
fn report_has_a_header_row() {
    let out = run(&["report", "clique", "--n", "40", "--seeds", "2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("seed,n,k,p,beta,is_cluster,max_outsider_degree"));
    assert_eq!(lines.count(), 2);
}
