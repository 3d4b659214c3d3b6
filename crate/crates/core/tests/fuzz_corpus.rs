//! Runs the checked-in fuzz seeds through the parsers they target.

use std::fs;
use std::path::Path;

use casorati::cli::parse::{
    parse, parse_bivariate, parse_complex, parse_form, parse_matrix, parse_operator, parse_poly, parse_ratfunc,
    parse_rational, parse_sequence, parse_window,
};
use casorati::cli::print::{bivariate_to_string, form_to_string, ratfunc_to_string};
use casorati::cli::{parse_diff_op, parse_relation, parse_solution};
use casorati::Error;

fn round_trip<T: PartialEq + std::fmt::Debug>(s: &str, parse: fn(&str) -> casorati::Result<T>, print: fn(&T) -> String) {
    if let Ok(v) = parse(s) {
        let printed = print(&v);
        match parse(&printed) {
            Ok(again) => assert_eq!(again, v, "round trip of {printed:?}"),
            Err(Error::TooLarge(_)) => {}
            Err(e) => panic!("printed output {printed:?} does not parse: {e}"),
        }
    }
}

fn run_target(target: &str, s: &str) {
    match target {
        "parse_expr" => drop(parse(s)),
        "parse_ratfunc" => round_trip(s, parse_ratfunc, ratfunc_to_string),
        "parse_poly" => drop(parse_poly(s)),
        "parse_rational" => drop(parse_rational(s)),
        "parse_sequence" => drop(parse_sequence(s)),
        "parse_form" => round_trip(s, parse_form, form_to_string),
        "parse_bivariate" => round_trip(s, parse_bivariate, bivariate_to_string),
        "parse_complex" => drop(parse_complex(s)),
        "parse_matrix" => drop(parse_matrix(s)),
        "parse_window" => drop(parse_window(s)),
        "parse_operator" => drop(parse_operator(s, 8)),
        "parse_solution" => drop(parse_solution(s)),
        "parse_diff_op" => drop(parse_diff_op(s)),
        "parse_relation" => drop(parse_relation(s)),
        other => panic!("no parser for fuzz target {other}"),
    }
}

#[test]
fn seeds_run_cleanly() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus");
    let mut seen = 0;
    for dir in fs::read_dir(&root).expect("corpus directory") {
        let dir = dir.unwrap().path();
        let target = dir.file_name().unwrap().to_str().unwrap().to_string();
        for seed in fs::read_dir(&dir).unwrap() {
            let bytes = fs::read(seed.unwrap().path()).unwrap();
            if let Ok(s) = std::str::from_utf8(&bytes) {
                run_target(&target, s);
                seen += 1;
            }
        }
    }
    assert!(seen >= 14, "only {seen} seeds found");
}

#[test]
fn every_target_has_seeds() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz");
    for t in fs::read_dir(root.join("fuzz_targets")).unwrap() {
        let name = t.unwrap().path().file_stem().unwrap().to_str().unwrap().to_string();
        let seeds = fs::read_dir(root.join("corpus").join(&name)).map(|d| d.count()).unwrap_or(0);
        assert!(seeds > 0, "target {name} has no seeds");
    }
}
