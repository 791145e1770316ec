#![allow(dead_code)]

use std::path::PathBuf;

use polyfront::exactmath::from_int;
use polyfront::io::ProblemFile;
use polyfront::{HPolyhedron, Problem, Rat, RatConstraint, Region, SemiClosedPolyhedron};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn load(name: &str) -> Problem {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture readable");
    ProblemFile::parse(&text).unwrap().to_problem().unwrap()
}

pub fn r(n: i64) -> Rat {
    from_int(n)
}

pub fn q(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

pub fn v(xs: &[i64]) -> Vec<Rat> {
    xs.iter().map(|&x| r(x)).collect()
}

pub fn piece(rows: Vec<RatConstraint>) -> SemiClosedPolyhedron {
    SemiClosedPolyhedron::from_constraints(2, rows)
}

pub fn region(pieces: Vec<SemiClosedPolyhedron>) -> Region {
    Region::new(2, pieces)
}

pub fn eq(a: &[i64], b: i64) -> RatConstraint {
    RatConstraint::eq(v(a), r(b))
}

pub fn le(a: &[i64], b: i64) -> RatConstraint {
    RatConstraint::le(v(a), r(b))
}

pub fn ge(a: &[i64], b: i64) -> RatConstraint {
    RatConstraint::ge(v(a), r(b))
}

pub fn lt(a: &[i64], b: i64) -> RatConstraint {
    RatConstraint::lt(v(a), r(b))
}

/// `{t1 = 0, 0 ≤ t2 ≤ 1}`.
pub fn sol_a() -> Region {
    region(vec![piece(vec![
        eq(&[1, 0], 0),
        ge(&[0, 1], 0),
        le(&[0, 1], 1),
    ])])
}

pub fn wsol_a() -> Region {
    region(vec![
        piece(vec![eq(&[1, 0], 0), ge(&[0, 1], 0), le(&[0, 1], 1)]),
        piece(vec![le(&[1, 0], 0), eq(&[0, 1], 1)]),
    ])
}

/// `{t1 = 0, t2 = 1} ∪ {t1 = 0, t2 < −1}`.
pub fn sol_b() -> Region {
    region(vec![
        piece(vec![eq(&[1, 0], 0), eq(&[0, 1], 1)]),
        piece(vec![eq(&[1, 0], 0), lt(&[0, 1], -1)]),
    ])
}

pub fn wsol_b() -> Region {
    region(vec![
        piece(vec![le(&[1, 0], 0), eq(&[0, 1], 1)]),
        piece(vec![eq(&[1, 0], 0), le(&[0, 1], -1)]),
    ])
}

pub fn fixture_q_a() -> HPolyhedron {
    HPolyhedron::whole(2)
        .with_le(v(&[1, 0]), r(0))
        .with_le(v(&[0, 1]), r(1))
        .with_le(v(&[1, 1]), r(0))
}

pub mod random;
