use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use recourse_core::model::Link;
use recourse_core::recourse::{
    compute_gains, generate_plans, greedy_plan, Difficulty, PlanOptions, Preferences, RecourseGoal,
};
use recourse_core::{EbmModel, Instance};
use recourse_testkit::models::{random_goal, random_instance, random_model, Shape};
use recourse_testkit::recourse::{meets_with_margin, oracle_minimum, oracle_top_k};

fn options(k: usize) -> PlanOptions {
    PlanOptions {
        k,
        time_limit: Duration::from_secs(30),
        fast: false,
    }
}

fn case(rng: &mut ChaCha8Rng, link: Link) -> (EbmModel, Instance, RecourseGoal) {
    let model = random_model(rng, link, Shape::default());
    let instance = random_instance(rng, &model);
    let goal = random_goal(rng, &model, &instance);
    (model, instance, goal)
}

fn assert_matches_oracle(link: Link, seed: u64, cases: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut feasible = 0;
    for n in 0..cases {
        let (model, x, goal) = case(&mut rng, link);
        let prefs = Preferences::neutral(&model);
        let want = oracle_minimum(&model, &x, &goal, &prefs);
        let set = generate_plans(&model, &x, &goal, &prefs, &options(1)).unwrap();
        match want {
            None => assert!(set.plans.is_empty(), "case {n}: oracle infeasible, got {:?}", set.plans),
            Some(cost) => {
                feasible += 1;
                let plan = set.plans.first().unwrap_or_else(|| panic!("case {n}: no plan, oracle {cost}"));
                assert!((plan.distance - cost).abs() < 1e-9, "case {n}: {} vs {cost}", plan.distance);
                assert!(plan.verified);
                assert!(goal.is_met(&plan.new_scores));
            }
        }
    }
    assert!(feasible * 2 >= cases, "too few feasible cases: {feasible}/{cases}");
}

#[test]
fn binary_models_match_enumeration() {
    assert_matches_oracle(Link::Logit, 11, 120);
}

#[test]
fn regression_models_match_enumeration() {
    assert_matches_oracle(Link::Identity, 12, 80);
}

#[test]
fn multiclass_models_match_enumeration() {
    assert_matches_oracle(Link::Softmax, 13, 80);
}

#[test]
fn top_k_matches_ranked_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for n in 0..80 {
        let (model, x, goal) = case(&mut rng, Link::Logit);
        let prefs = Preferences::neutral(&model);
        let want = oracle_top_k(&model, &x, &goal, &prefs, 5);
        let set = generate_plans(&model, &x, &goal, &prefs, &options(5)).unwrap();
        let got: Vec<f64> = set.plans.iter().map(|p| p.distance).collect();
        assert_eq!(got.len(), want.len(), "case {n}: {got:?} vs {want:?}");
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-9, "case {n}: {got:?} vs {want:?}");
        }
        for (a, plan) in set.plans.iter().enumerate() {
            for b in &set.plans[a + 1..] {
                assert_ne!(plan.changes, b.changes);
            }
        }
    }
}

#[test]
fn fast_filter_keeps_the_optimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for n in 0..100 {
        let link = if n % 2 == 0 { Link::Logit } else { Link::Identity };
        let (model, x, goal) = case(&mut rng, link);
        let prefs = Preferences::neutral(&model);
        let slow = generate_plans(&model, &x, &goal, &prefs, &options(1)).unwrap();
        let fast = generate_plans(&model, &x, &goal, &prefs, &PlanOptions { fast: true, ..options(1) }).unwrap();
        assert!(fast.candidates <= slow.candidates);
        match (slow.plans.first(), fast.plans.first()) {
            (None, None) => {}
            (Some(a), Some(b)) => assert!((a.distance - b.distance).abs() < 1e-9, "case {n}"),
            (a, b) => panic!("case {n}: {a:?} vs {b:?}"),
        }
    }
}

#[test]
fn gains_add_up_on_joint_moves() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let mut checked = 0;
    while checked < 500 {
        let model = random_model(&mut rng, Link::Logit, Shape::default());
        if model.interactions().is_empty() {
            continue;
        }
        let x = random_instance(&mut rng, &model);
        let gains = compute_gains(&model, &x);
        let s0 = model.raw_score(&x)[0];
        for (t, term) in model.interactions().iter().enumerate() {
            let (i, j) = (term.feature_i, term.feature_j);
            for _ in 0..10 {
                let mut bins = model.bins_of(&x);
                let b1 = rng.gen_range(0..model.feature(i).num_bins());
                let b2 = rng.gen_range(0..model.feature(j).num_bins());
                bins[i] = b1;
                bins[j] = b2;
                let want = model.raw_score_of_bins(&bins)[0] - s0;
                let got = gains.main_gain(i, b1, 0) + gains.main_gain(j, b2, 0) + gains.pair_gain(t, b1, b2)
                    // Other terms touching i or j see one side move with the partner fixed.
                    + model
                        .interactions()
                        .iter()
                        .enumerate()
                        .filter(|(u, o)| *u != t && o.touches(i) && o.touches(j))
                        .map(|(u, o)| if o.feature_i == i { gains.pair_gain(u, b1, b2) } else { gains.pair_gain(u, b2, b1) })
                        .sum::<f64>();
                assert!((want - got).abs() < 1e-9, "{want} vs {got}");
                checked += 1;
            }
        }
    }
}

#[test]
fn random_preferences_are_respected() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..150 {
        let (model, x, goal) = case(&mut rng, Link::Logit);
        let prefs = recourse_testkit::models::random_preferences(&mut rng, &model, &x);
        let set = generate_plans(&model, &x, &goal, &prefs, &options(3)).unwrap();
        for plan in &set.plans {
            assert!(plan.changes.len() <= prefs.max_features);
            for c in &plan.changes {
                let p = prefs.feature(c.feature);
                assert_ne!(p.difficulty, Difficulty::Impossible);
                assert!(p.acceptable.allows(c.new_value));
            }
        }
        let want = oracle_minimum(&model, &x, &goal, &prefs);
        assert_eq!(set.plans.first().map(|p| p.distance).is_some(), want.is_some());
        if let (Some(p), Some(w)) = (set.plans.first(), want) {
            assert!((p.distance - w).abs() < 1e-9);
        }
    }
}

#[test]
fn greedy_never_beats_the_exact_plan() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    for _ in 0..100 {
        let (model, x, goal) = case(&mut rng, Link::Logit);
        let prefs = Preferences::neutral(&model);
        let exact = generate_plans(&model, &x, &goal, &prefs, &options(1)).unwrap();
        if let Some(g) = greedy_plan(&model, &x, &goal, &prefs).unwrap() {
            assert!(g.verified);
            assert!(meets_with_margin(&goal, &g.new_scores));
            let e = exact.plans.first().expect("greedy found a plan, so the exact search must");
            assert!(e.distance <= g.distance + 1e-9);
        }
    }
}
