mod common;

use common::{check_case, sympolar, CASES};

#[test]
fn every_case_matches_its_golden_file() {
    let failures: Vec<String> = CASES
        .iter()
        .filter_map(|c| check_case(c, &[]).err())
        .collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn every_golden_file_has_a_case() {
    let dir = common::crate_dir().join("tests").join("golden");
    for entry in std::fs::read_dir(dir).unwrap() {
        let name = entry
            .unwrap()
            .path()
            .file_stem()
            .unwrap()
            .to_string_lossy()
            .into_owned();
        assert!(
            CASES.iter().any(|c| c.name == name),
            "stale golden file {name}"
        );
    }
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    for case in CASES
        .iter()
        .filter(|c| c.name.starts_with("thm1") || c.name.starts_with("oracle"))
    {
        let one = sympolar(case.args, &[("RAYON_NUM_THREADS", "1")]);
        let many = sympolar(case.args, &[("RAYON_NUM_THREADS", "4")]);
        assert_eq!(one.stdout, many.stdout, "{}", case.name);
        assert_eq!(one.status.code(), many.status.code());
    }
}
