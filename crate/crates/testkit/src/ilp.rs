//! Random 0-1 programs and enumeration oracles.

use rand::Rng;
use recourse_core::ilp::{Constraint, LinearProgram01, Sense};

/// A random program with `num_vars` variables and `num_constraints` rows.
///
/// Coefficients are small integers or halves; right-hand sides are drawn
/// around the activity of a random assignment, leaving most programs
/// feasible. With `positive_costs` every objective
/// coefficient is at least 0.5.
pub fn random_program<R: Rng>(rng: &mut R, num_vars: usize, num_constraints: usize, positive_costs: bool) -> LinearProgram01 {
    let objective: Vec<f64> = (0..num_vars)
        .map(|_| {
            let c = f64::from(rng.gen_range(1..=20)) * 0.5;
            if positive_costs || rng.gen_bool(0.8) {
                c
            } else {
                -c
            }
        })
        .collect();
    let witness: Vec<bool> = (0..num_vars).map(|_| rng.gen_bool(0.4)).collect();
    let mut constraints = Vec::with_capacity(num_constraints);
    for _ in 0..num_constraints {
        let mut terms = Vec::new();
        for v in 0..num_vars {
            if rng.gen_bool(0.5) {
                terms.push((v, f64::from(rng.gen_range(-8..=8)) * 0.5));
            }
        }
        if terms.is_empty() {
            terms.push((rng.gen_range(0..num_vars), 1.0));
        }
        let activity: f64 = terms.iter().filter(|(v, _)| witness[*v]).map(|(_, c)| c).sum();
        let slack = f64::from(rng.gen_range(0..=4)) * 0.5;
        let (sense, rhs) = match rng.gen_range(0..10) {
            0..=3 => (Sense::Le, activity + slack),
            4..=7 => (Sense::Ge, activity - slack),
            8 => (Sense::Eq, activity),
            // Occasionally tighten past the witness.
            _ => (Sense::Ge, activity + slack + 1.0),
        };
        constraints.push(Constraint::new(terms, sense, rhs));
    }
    LinearProgram01::with_constraints(objective, constraints).expect("generated program is well formed")
}

/// Every feasible assignment with its objective, sorted by objective and then
/// lexicographically by the bit pattern (variable 0 most significant).
pub fn feasible_assignments(program: &LinearProgram01, tol: f64) -> Vec<(Vec<bool>, f64)> {
    let n = program.num_vars();
    assert!(n <= 24, "enumeration over {n} variables is too large");
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << n) {
        let assignment: Vec<bool> = (0..n).map(|i| mask & (1 << i) != 0).collect();
        if program.is_feasible(&assignment, tol) {
            let value = program.objective_value(&assignment);
            out.push((assignment, value));
        }
    }
    out.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    out
}

/// Minimum objective over all feasible assignments, or `None` if there is none.
pub fn brute_force_minimum(program: &LinearProgram01, tol: f64) -> Option<f64> {
    feasible_assignments(program, tol).first().map(|(_, v)| *v)
}

/// Support (indices of ones) of an assignment.
pub fn support(assignment: &[bool]) -> Vec<usize> {
    assignment.iter().enumerate().filter(|(_, on)| **on).map(|(i, _)| i).collect()
}

/// Objectives that `k` rounds of "solve, then block the support" must produce.
///
/// Blocking a support `S` removes every assignment whose support contains `S`.
/// Each round picks a minimum-objective survivor. The sequence stops early when
/// no survivor remains or when the minimum has an empty support (which cannot
/// be blocked). With strictly positive costs the sequence of values does not
/// depend on how ties are broken.
pub fn ranked_blocking_values(candidates: &[(Vec<usize>, f64)], k: usize) -> Vec<f64> {
    let mut pool: Vec<&(Vec<usize>, f64)> = candidates.iter().collect();
    pool.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut values = Vec::new();
    while values.len() < k {
        let Some(best) = pool.first().copied() else {
            break;
        };
        values.push(best.1);
        if best.0.is_empty() {
            break;
        }
        pool.retain(|c| !best.0.iter().all(|v| c.0.contains(v)));
    }
    values
}

/// [`ranked_blocking_values`] over the feasible assignments of a program.
pub fn ranked_blocking_program(program: &LinearProgram01, k: usize, tol: f64) -> Vec<f64> {
    let candidates: Vec<(Vec<usize>, f64)> = feasible_assignments(program, tol)
        .into_iter()
        .map(|(a, v)| (support(&a), v))
        .collect();
    ranked_blocking_values(&candidates, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_finds_cover() {
        let p = LinearProgram01::with_constraints(
            vec![2.0, 3.0],
            vec![Constraint::new([(0, 1.0), (1, 1.0)], Sense::Ge, 1.0)],
        )
        .unwrap();
        assert_eq!(brute_force_minimum(&p, 1e-9), Some(2.0));
        assert_eq!(ranked_blocking_program(&p, 5, 1e-9), vec![2.0, 3.0]);
    }

    #[test]
    fn ranked_values_skip_supersets() {
        let c = vec![(vec![0], 1.0), (vec![0, 1], 2.0), (vec![1], 2.5), (vec![2], 3.0)];
        assert_eq!(ranked_blocking_values(&c, 5), vec![1.0, 2.5, 3.0]);
        assert_eq!(ranked_blocking_values(&c, 2), vec![1.0, 2.5]);
    }
}
