use std::time::Duration;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use recourse_core::model::{load_model_str, model_hash, serialize_model, FeatureKind, Link};
use recourse_core::recourse::{generate_plans, Difficulty, PlanOptions, Preferences};
use recourse_core::FeatureValue;
use recourse_testkit::models::{random_goal, random_instance, random_model, random_preferences, Shape};

fn link_of(k: u8) -> Link {
    match k % 3 {
        0 => Link::Logit,
        1 => Link::Identity,
        _ => Link::Softmax,
    }
}

fn options(k: usize) -> PlanOptions {
    PlanOptions {
        k,
        time_limit: Duration::from_secs(30),
        fast: false,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn one_feature_change_moves_score_by_its_terms(seed in any::<u64>(), link in 0u8..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let model = random_model(&mut rng, link_of(link), Shape::default());
        let x = random_instance(&mut rng, &model);
        let y = random_instance(&mut rng, &model);
        let f = rng.gen_range(0..model.features().len());
        let moved = x.with_value(f, y.value(f));
        let (old, new) = (model.bins_of(&x), model.bins_of(&moved));
        let before = model.raw_score(&x);
        let after = model.raw_score(&moved);
        for class in 0..before.len() {
            let spec = model.feature(f);
            let mut want = spec.scores[new[f]][class] - spec.scores[old[f]][class];
            for t in model.interactions().iter().filter(|t| t.touches(f)) {
                let (i, j) = (t.feature_i, t.feature_j);
                want += t.table[new[i]][new[j]] - t.table[old[i]][old[j]];
            }
            prop_assert!((after[class] - before[class] - want).abs() < 1e-12);
        }
    }

    #[test]
    fn serialization_round_trips(seed in any::<u64>(), link in 0u8..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let model = random_model(&mut rng, link_of(link), Shape::default());
        let again = load_model_str(&serialize_model(&model)).unwrap();
        prop_assert_eq!(model_hash(&again), model_hash(&model));
        let x = random_instance(&mut rng, &model);
        prop_assert_eq!(again.raw_score(&x), model.raw_score(&x));
    }

    #[test]
    fn bin_lookup_is_total_and_half_open(seed in any::<u64>(), offset in -50.0f64..50.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let model = random_model(&mut rng, Link::Logit, Shape::default());
        for (f, spec) in model.features().iter().enumerate() {
            if let FeatureKind::Continuous { cuts } = &spec.kind {
                for (k, &c) in cuts.iter().enumerate() {
                    prop_assert_eq!(model.bin_index(f, FeatureValue::Number(c)).unwrap(), k + 1);
                    prop_assert_eq!(model.bin_index(f, FeatureValue::Number(c.next_down())).unwrap(), k);
                }
                let v = cuts[0] + offset;
                let bin = model.bin_index(f, FeatureValue::Number(v)).unwrap();
                let (lo, hi) = spec.bin_edges(bin).unwrap();
                prop_assert!(lo <= v && v < hi);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn raising_difficulty_never_lowers_the_optimum(seed in any::<u64>(), link in 0u8..3, steps in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let model = random_model(&mut rng, link_of(link), Shape::default());
        let x = random_instance(&mut rng, &model);
        let goal = random_goal(&mut rng, &model, &x);
        let base = random_preferences(&mut rng, &model, &x);
        let f = rng.gen_range(0..model.features().len());
        let from = base.feature(f).difficulty;
        let rank = Difficulty::ALL.iter().position(|d| *d == from).unwrap();
        let to = Difficulty::ALL[(rank + steps).min(Difficulty::ALL.len() - 1)];
        let harder = base.clone().with_difficulty(f, to);
        let cost = |prefs: &Preferences| {
            generate_plans(&model, &x, &goal, prefs, &options(1))
                .map(|s| s.plans.first().map_or(f64::INFINITY, |p| p.distance))
                .unwrap_or(f64::INFINITY)
        };
        prop_assert!(cost(&harder) >= cost(&base) - 1e-9, "{:?} -> {:?}", from, to);
    }

    #[test]
    fn plan_lists_are_ordered_distinct_and_verified(seed in any::<u64>(), link in 0u8..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let model = random_model(&mut rng, link_of(link), Shape::default());
        let x = random_instance(&mut rng, &model);
        let goal = random_goal(&mut rng, &model, &x);
        let prefs = random_preferences(&mut rng, &model, &x);
        let set = generate_plans(&model, &x, &goal, &prefs, &options(5)).unwrap();
        prop_assert!(set.plans.len() <= 5);
        prop_assert_eq!(set.plans.is_empty(), set.reason.is_some());
        for (a, plan) in set.plans.iter().enumerate() {
            prop_assert!(plan.verified);
            prop_assert!(goal.is_met(&model.raw_score(&recourse_core::recourse::apply_changes(&x, &plan.changes))));
            prop_assert!(plan.changes.len() <= prefs.max_features);
            for later in &set.plans[a + 1..] {
                prop_assert!(later.distance >= plan.distance - 1e-12);
                prop_assert_ne!(&later.changes, &plan.changes);
            }
        }
    }
}
