use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use recourse_core::ilp::{add_blocking_constraint, solve, Constraint, LinearProgram01, Sense, SolveStatus, FEASIBILITY_TOL};
use recourse_testkit::ilp::{brute_force_minimum, random_program, ranked_blocking_program};

const LIMIT: Duration = Duration::from_secs(30);

#[test]
fn matches_enumeration_on_random_programs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut feasible = 0;
    for case in 0..150 {
        let n = rng.gen_range(1..=12);
        let m = rng.gen_range(0..=8);
        let program = random_program(&mut rng, n, m, false);
        let expected = brute_force_minimum(&program, FEASIBILITY_TOL);
        let got = solve(&program, LIMIT).unwrap();
        match expected {
            None => assert_eq!(got.status, SolveStatus::Infeasible, "case {case}: {program:?}"),
            Some(best) => {
                feasible += 1;
                assert_eq!(got.status, SolveStatus::Optimal, "case {case}");
                let assignment = got.assignment.as_ref().unwrap();
                assert!(program.is_feasible(assignment, FEASIBILITY_TOL), "case {case}");
                let value = got.objective_value.unwrap();
                assert_eq!(value, program.objective_value(assignment));
                assert!((value - best).abs() < 1e-9, "case {case}: got {value}, want {best}\n{program:?}");
            }
        }
    }
    assert!(feasible >= 100, "only {feasible} feasible programs generated");
}

#[test]
fn blocking_follows_ranked_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    for case in 0..100 {
        let n = rng.gen_range(2..=10);
        let m = rng.gen_range(1..=6);
        let mut program = random_program(&mut rng, n, m, true);
        // At least one variable on.
        program.add_constraint(Constraint::new((0..n).map(|v| (v, 1.0)), Sense::Ge, 1.0));
        let expected = ranked_blocking_program(&program, 5, FEASIBILITY_TOL);
        let mut got = Vec::new();
        for _ in 0..5 {
            let s = solve(&program, LIMIT).unwrap();
            if s.status == SolveStatus::Infeasible {
                break;
            }
            got.push(s.objective_value.unwrap());
            program = add_blocking_constraint(&program, &s.active_set()).unwrap();
        }
        assert_eq!(got.len(), expected.len(), "case {case}: {got:?} vs {expected:?}");
        for (g, e) in got.iter().zip(&expected) {
            assert!((g - e).abs() < 1e-9, "case {case}: {got:?} vs {expected:?}");
        }
        for w in got.windows(2) {
            assert!(w[0] <= w[1] + 1e-9);
        }
    }
}

#[test]
fn deterministic_solutions() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    for _ in 0..30 {
        let program = random_program(&mut rng, 10, 6, false);
        let a = solve(&program, LIMIT).unwrap();
        let b = solve(&program, LIMIT).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn larger_set_cover_matches_enumeration() {
    // 16 variables, overlapping cover rows with real costs.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    for _ in 0..5 {
        let n = 16;
        let objective: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..5.0)).collect();
        let constraints: Vec<Constraint> = (0..10)
            .map(|_| {
                let terms: Vec<(usize, f64)> = (0..n).filter(|_| rng.gen_bool(0.25)).map(|v| (v, 1.0)).collect();
                Constraint::new(terms, Sense::Ge, 1.0)
            })
            .filter(|c| !c.terms().is_empty())
            .collect();
        let program = LinearProgram01::with_constraints(objective, constraints).unwrap();
        let best = brute_force_minimum(&program, FEASIBILITY_TOL).unwrap();
        let got = solve(&program, LIMIT).unwrap();
        assert!((got.objective_value.unwrap() - best).abs() < 1e-9);
    }
}
