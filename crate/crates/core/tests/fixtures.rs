mod common;

use common::*;
use polyfront::oracle::{grid_crosscheck, is_efficient, is_weakly_efficient, GridSpec};
use polyfront::solver::{self, decomposition_equal, Method, SolveOptions};

fn solve(name: &str, method: Method) -> polyfront::SolveReport {
    solver::solve(&load(name), &SolveOptions { method }).unwrap()
}

#[test]
fn fixture_a_solution_sets() {
    let rep = solve("fixture_a.json", Method::Both);
    assert!(rep.convex);
    assert!(decomposition_equal(&rep.sol, &sol_a()), "{:?}", rep.sol);
    assert!(decomposition_equal(rep.wsol.as_ref().unwrap(), &wsol_a()));
    assert!(rep.sol_closed);
    assert!(rep.sol_connectivity.connected && rep.sol_connectivity.certified);
    assert!(rep.wsol_connectivity.as_ref().unwrap().connected);
}

#[test]
fn fixture_b_solution_sets() {
    let rep = solve("fixture_b.json", Method::Both);
    assert!(!rep.convex);
    assert!(decomposition_equal(&rep.sol, &sol_b()), "{:?}", rep.sol);
    assert!(decomposition_equal(rep.wsol.as_ref().unwrap(), &wsol_b()));
    assert!(!rep.sol_closed);
    assert!(rep.sol.pieces.iter().any(|p| !p.strict.is_empty()));
    assert!(!rep.sol_connectivity.connected);
    let w = rep.wsol_connectivity.as_ref().unwrap();
    assert!(!w.connected && w.certified);
    assert_eq!(w.components.len(), 2);
}

#[test]
fn witness_points_of_both_fixtures() {
    let a = load("fixture_a.json");
    let e0e3 = [q(-5, 4), r(1)];
    assert!(is_weakly_efficient(&e0e3, &a).unwrap());
    assert!(!is_efficient(&e0e3, &a).unwrap());
    assert!(is_efficient(&[r(0), q(1, 2)], &a).unwrap());
    assert!(!is_efficient(&[r(-1), q(1, 2)], &a).unwrap());
    assert!(!is_weakly_efficient(&[r(-1), q(-1, 2)], &a).unwrap());
    let b = load("fixture_b.json");
    assert!(!is_efficient(&[r(0), q(-1, 2)], &b).unwrap());
    assert!(is_efficient(&[r(0), r(-2)], &b).unwrap());
    assert!(!is_efficient(&[r(0), r(-1)], &b).unwrap());
}

#[test]
fn oracle_grid_agrees_with_decompositions() {
    let grid = GridSpec::new(vec![r(-3), r(-3)], vec![r(3), r(3)], vec![25, 25]).unwrap();
    for name in ["fixture_a.json", "fixture_b.json"] {
        let p = load(name);
        let rep = solver::solve(&p, &SolveOptions::default()).unwrap();
        let c = grid_crosscheck(&p, &rep, &grid).unwrap();
        assert!(c.checked > 0);
        assert!(c.mismatches.is_empty(), "{name}: {:?}", c.mismatches);
    }
}
