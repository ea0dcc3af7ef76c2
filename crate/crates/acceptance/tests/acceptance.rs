//! Acceptance suite: one PASS/FAIL line per criterion, run one after another.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use recourse_cli::{run_batch_eval, write_instances, Generator};
use recourse_core::ilp::{add_blocking_constraint, solve, Constraint, Sense, SolveStatus, FEASIBILITY_TOL};
use recourse_core::model::{model_hash, serialize_model, FeatureValue, Link};
use recourse_core::receipt::{build_and_sign, generate_key, verify_receipt_bytes, Receipt, Verdict};
use recourse_core::recourse::{
    apply_changes, compute_gains, generate_plans, Change, Difficulty, PlanOptions, Preferences, RecourseGoal,
};
use recourse_core::{EbmModel, Instance};
use recourse_testkit::fixtures::{t1, t1_instance};
use recourse_testkit::ilp::{brute_force_minimum, random_program, ranked_blocking_program};
use recourse_testkit::models::{random_goal, random_instance, random_model, random_preferences, scale_model, Shape};
use recourse_testkit::recourse::{oracle_minimum, oracle_top_k};
use serde_json::{json, Value};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if $cond {
        } else {
            return Err(format!($($msg)+));
        }
    };
}

fn options(k: usize) -> PlanOptions {
    PlanOptions {
        k,
        time_limit: Duration::from_secs(30),
        fast: false,
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-9
}

/// Random models of at most 5 features, 6 bins and 2 interactions, each with
/// an instance it rejects.
fn corpus(seed: u64, link: Link, size: usize) -> Vec<(EbmModel, Instance, RecourseGoal)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..size)
        .map(|_| {
            let model = random_model(&mut rng, link, Shape::default());
            let x = random_instance(&mut rng, &model);
            let goal = random_goal(&mut rng, &model, &x);
            (model, x, goal)
        })
        .collect()
}

fn oracle_optimality() -> Outcome {
    let started = Instant::now();
    let cases = corpus(101, Link::Logit, 150);
    let mut feasible = 0;
    for (n, (model, x, goal)) in cases.iter().enumerate() {
        let prefs = Preferences::neutral(model);
        let want = oracle_minimum(model, x, goal, &prefs);
        let set = generate_plans(model, x, goal, &prefs, &options(1)).map_err(|e| format!("case {n}: {e}"))?;
        match (want, set.plans.first()) {
            (None, None) => {}
            (Some(cost), Some(plan)) => {
                feasible += 1;
                ensure!(close(plan.distance, cost), "case {n}: distance {} vs oracle {cost}", plan.distance);
                let before = model.predict(x).label();
                let after = model.predict(&apply_changes(x, &plan.changes)).label();
                ensure!(plan.verified && before != after, "case {n}: prediction not flipped ({before} -> {after})");
            }
            (want, got) => return Err(format!("case {n}: oracle {want:?}, got {:?}", got.map(|p| p.distance))),
        }
    }
    let elapsed = started.elapsed();
    ensure!(feasible >= 100, "only {feasible} feasible models");
    ensure!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    Ok(format!("{} models, {feasible} with recourse, all optimal, {elapsed:.1?}", cases.len()))
}

fn top_k_diversity() -> Outcome {
    let cases = corpus(101, Link::Logit, 150);
    let mut lists = 0;
    for (n, (model, x, goal)) in cases.iter().enumerate() {
        let prefs = Preferences::neutral(model);
        let want = oracle_top_k(model, x, goal, &prefs, 5);
        let set = generate_plans(model, x, goal, &prefs, &options(5)).map_err(|e| format!("case {n}: {e}"))?;
        let got: Vec<f64> = set.plans.iter().map(|p| p.distance).collect();
        ensure!(
            got.len() == want.len() && got.iter().zip(&want).all(|(g, w)| close(*g, *w)),
            "case {n}: {got:?} vs {want:?}"
        );
        for (a, plan) in set.plans.iter().enumerate() {
            ensure!(set.plans[a + 1..].iter().all(|b| b.changes != plan.changes), "case {n}: repeated plan");
        }
        lists += usize::from(!got.is_empty());
    }
    Ok(format!("{lists} ranked lists match enumeration"))
}

fn t1_fixture() -> Outcome {
    let model = t1();
    let x = t1_instance(&model);
    let change = |feature, old, new| Change {
        feature,
        old_value: old,
        new_value: new,
    };
    let (a8, red, blue) = (FeatureValue::Number(8.0), FeatureValue::Level(0), FeatureValue::Level(1));
    let neutral = Preferences::neutral(&model);
    let set = generate_plans(&model, &x, &RecourseGoal::ToPositive, &neutral, &options(2)).map_err(|e| e.to_string())?;
    let got: Vec<(f64, Vec<Change>)> = set.plans.iter().map(|p| (p.distance, p.changes.clone())).collect();
    let want = vec![
        (4.5, vec![change(0, a8, FeatureValue::Number(10.0)), change(1, red, blue)]),
        (6.0, vec![change(0, a8, FeatureValue::Number(20.0))]),
    ];
    ensure!(got == want, "got {got:?}");

    let only_a = vec![(6.0, vec![change(0, a8, FeatureValue::Number(20.0))])];
    let capped = neutral.clone().with_max_features(1);
    let set = generate_plans(&model, &x, &RecourseGoal::ToPositive, &capped, &options(1)).map_err(|e| e.to_string())?;
    let got: Vec<_> = set.plans.iter().map(|p| (p.distance, p.changes.clone())).collect();
    ensure!(got == only_a, "max_features=1: {got:?}");
    let no_b = neutral.with_difficulty(1, Difficulty::Impossible);
    let set = generate_plans(&model, &x, &RecourseGoal::ToPositive, &no_b, &options(5)).map_err(|e| e.to_string())?;
    let got: Vec<_> = set.plans.iter().map(|p| (p.distance, p.changes.clone())).collect();
    ensure!(got == only_a, "B impossible: {got:?}");
    Ok("[4.5, 6.0] with the expected changes; caps and impossible B give A->20 only".into())
}

fn preference_respect() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let links = [Link::Logit, Link::Identity, Link::Softmax];
    let mut plans_checked = 0;
    for draw in 0..1000 {
        let model = random_model(&mut rng, links[draw % 3], Shape::default());
        let x = random_instance(&mut rng, &model);
        let goal = random_goal(&mut rng, &model, &x);
        let prefs = random_preferences(&mut rng, &model, &x);
        let set = generate_plans(&model, &x, &goal, &prefs, &options(3)).map_err(|e| format!("draw {draw}: {e}"))?;
        for plan in &set.plans {
            plans_checked += 1;
            ensure!(plan.changes.len() <= prefs.max_features, "draw {draw}: too many changes");
            for c in &plan.changes {
                let p = prefs.feature(c.feature);
                ensure!(p.difficulty != Difficulty::Impossible, "draw {draw}: impossible feature {} changed", c.feature);
                ensure!(p.acceptable.allows(c.new_value), "draw {draw}: feature {} left its range", c.feature);
            }
        }
        let best = |prefs: &Preferences| {
            generate_plans(&model, &x, &goal, prefs, &options(1))
                .ok()
                .and_then(|s| s.plans.first().map(|p| p.distance))
                .unwrap_or(f64::INFINITY)
        };
        let f = rng.gen_range(0..model.features().len());
        let rank = Difficulty::ALL.iter().position(|d| *d == prefs.feature(f).difficulty).expect("known level");
        let harder = Difficulty::ALL[(rank + rng.gen_range(1..=5)).min(Difficulty::ALL.len() - 1)];
        let base = set.plans.first().map_or(f64::INFINITY, |p| p.distance);
        let raised = best(&prefs.clone().with_difficulty(f, harder));
        ensure!(raised >= base - 1e-9, "draw {draw}: raising feature {f} to {harder} lowered {base} to {raised}");
    }
    Ok(format!("1000 draws, {plans_checked} plans, no violations, difficulty monotone"))
}

fn gain_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let mut checked = 0;
    while checked < 2000 {
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
                let (b1, b2) = (rng.gen_range(0..model.feature(i).num_bins()), rng.gen_range(0..model.feature(j).num_bins()));
                bins[i] = b1;
                bins[j] = b2;
                let want = model.raw_score_of_bins(&bins)[0] - s0;
                let same_pair: f64 = model
                    .interactions()
                    .iter()
                    .enumerate()
                    .filter(|(u, o)| *u != t && o.touches(i) && o.touches(j))
                    .map(|(u, o)| if o.feature_i == i { gains.pair_gain(u, b1, b2) } else { gains.pair_gain(u, b2, b1) })
                    .sum();
                let got = gains.main_gain(i, b1, 0) + gains.main_gain(j, b2, 0) + gains.pair_gain(t, b1, b2) + same_pair;
                ensure!(close(want, got), "joint move ({i}:{b1}, {j}:{b2}): {want} vs {got}");
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} joint moves match re-inference"))
}

fn regression_and_multiclass() -> Outcome {
    let mut summary = Vec::new();
    for (link, seed) in [(Link::Identity, 106), (Link::Softmax, 107)] {
        let cases = corpus(seed, link, 100);
        let mut feasible = 0;
        for (n, (model, x, goal)) in cases.iter().enumerate() {
            let prefs = Preferences::neutral(model);
            let want = oracle_minimum(model, x, goal, &prefs);
            let set = generate_plans(model, x, goal, &prefs, &options(1)).map_err(|e| format!("{link} case {n}: {e}"))?;
            match (want, set.plans.first()) {
                (None, None) => {}
                (Some(cost), Some(plan)) => {
                    feasible += 1;
                    ensure!(close(plan.distance, cost), "{link} case {n}: {} vs {cost}", plan.distance);
                    let scores = model.raw_score(&apply_changes(x, &plan.changes));
                    let lands = match *goal {
                        RecourseGoal::RegressionRange { lo, hi } => lo <= scores[0] && scores[0] <= hi,
                        RecourseGoal::MulticlassTarget { target } => recourse_core::model::argmax(&scores) == target,
                        _ => false,
                    };
                    ensure!(lands, "{link} case {n}: goal {} not reached", goal.describe());
                }
                (want, got) => return Err(format!("{link} case {n}: oracle {want:?}, got {:?}", got.map(|p| p.distance))),
            }
        }
        summary.push(format!("{link} {feasible}/{}", cases.len()));
    }
    Ok(format!("{} feasible cases optimal and on target", summary.join(", ")))
}

fn scalability() -> Outcome {
    let mut times = Vec::new();
    for (seed, margin) in [(1u64, 0.5), (2, 1.0), (3, 1.5), (4, 1.0), (5, 2.0), (6, 0.75)] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (model, x) = scale_model(&mut rng, 95, 32, 10, margin);
        let prefs = Preferences::neutral(&model);
        let started = Instant::now();
        let set = generate_plans(
            &model,
            &x,
            &RecourseGoal::ToPositive,
            &prefs,
            &PlanOptions {
                k: 1,
                time_limit: Duration::from_secs(10),
                fast: false,
            },
        )
        .map_err(|e| e.to_string())?;
        let elapsed = started.elapsed();
        ensure!(!set.timed_out && set.plans.len() == 1, "seed {seed}: no plan within 10 s");
        times.push(elapsed.as_secs_f64());
    }
    let worst = times.iter().cloned().fold(0.0, f64::max);
    let shown: Vec<String> = times.iter().map(|t| format!("{t:.2}")).collect();
    ensure!(worst <= 3.0, "slowest plan took {worst:.2} s (all: {shown:?})");
    Ok(format!("95 features x 32 bins, 10 interactions: [{}] s", shown.join(", ")))
}

fn solver_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let limit = Duration::from_secs(30);
    for case in 0..100 {
        let n = rng.gen_range(1..=12);
        let m = rng.gen_range(0..=8);
        let program = random_program(&mut rng, n, m, false);
        let want = brute_force_minimum(&program, FEASIBILITY_TOL);
        let got = solve(&program, limit).map_err(|e| e.to_string())?;
        match want {
            None => ensure!(got.status == SolveStatus::Infeasible, "case {case}: expected infeasible"),
            Some(best) => ensure!(
                got.status == SolveStatus::Optimal && got.objective_value.is_some_and(|v| close(v, best)),
                "case {case}: {:?} vs {best}",
                got.objective_value
            ),
        }
    }
    for case in 0..100 {
        let n = rng.gen_range(2..=10);
        let m = rng.gen_range(1..=6);
        let mut program = random_program(&mut rng, n, m, true);
        program.add_constraint(Constraint::new((0..n).map(|v| (v, 1.0)), Sense::Ge, 1.0));
        let want = ranked_blocking_program(&program, 5, FEASIBILITY_TOL);
        let mut got = Vec::new();
        for _ in 0..5 {
            let s = solve(&program, limit).map_err(|e| e.to_string())?;
            let Some(value) = s.objective_value else { break };
            got.push(value);
            program = add_blocking_constraint(&program, &s.active_set()).map_err(|e| e.to_string())?;
        }
        ensure!(
            got.len() == want.len() && got.iter().zip(&want).all(|(g, w)| close(*g, *w)),
            "blocking case {case}: {got:?} vs {want:?}"
        );
    }
    Ok("100 programs match enumeration; 100 blocking sequences in ranked order".into())
}

fn receipts() -> Outcome {
    let model = t1();
    let x = t1_instance(&model);
    let goal = RecourseGoal::ToPositive;
    let set = generate_plans(&model, &x, &goal, &Preferences::neutral(&model), &options(2)).map_err(|e| e.to_string())?;
    let key = generate_key();
    let public = key.verifying_key();
    let receipt = build_and_sign(&model, &x, &goal, &set.plans, &key, chrono_now()).map_err(|e| e.to_string())?;
    let file = receipt.render();
    ensure!(verify_receipt_bytes(&file, &public).ok() == Some(Verdict::Valid), "fresh receipt does not verify");
    ensure!(
        receipt.field("model").as_deref() == Some(model_hash(&model).as_str()),
        "receipt digest differs from the model hash"
    );
    let mut mutations = 0;
    for i in 0..receipt.body.len() {
        for b in 0..=255u8 {
            if b == file[i] {
                continue;
            }
            let mut bad = file.clone();
            bad[i] = b;
            let verdict = verify_receipt_bytes(&bad, &public);
            ensure!(verdict.as_ref().ok() == Some(&Verdict::Tampered), "byte {i} -> {b:#04x}: {verdict:?}");
            mutations += 1;
        }
    }
    for i in receipt.body.len()..file.len() {
        let mut bad = file.clone();
        bad[i] ^= 0x01;
        let verdict = verify_receipt_bytes(&bad, &public);
        ensure!(verdict.as_ref().ok() != Some(&Verdict::Valid), "signature byte {i} mutation accepted");
    }
    let other = generate_key().verifying_key();
    ensure!(
        verify_receipt_bytes(&file, &other).ok() == Some(Verdict::WrongKey),
        "unrelated key not reported"
    );
    ensure!(Receipt::parse(&file).is_ok(), "receipt does not parse");
    Ok(format!("round trip valid; {mutations} single-byte body mutations all tampered; digest matches"))
}

fn chrono_now() -> chrono::DateTime<chrono::Utc> {
    chrono::Utc::now()
}

fn cli_batch() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let model = loop {
        let m = random_model(&mut rng, Link::Logit, Shape::default());
        if m.features().len() == 5 && !m.interactions().is_empty() {
            break m;
        }
    };
    let neutral = Preferences::neutral(&model);
    let mut instances = Vec::new();
    while instances.len() < 200 {
        let x = random_instance(&mut rng, &model);
        if model.raw_score(&x)[0] < 0.0 && oracle_minimum(&model, &x, &RecourseGoal::ToPositive, &neutral).is_some() {
            instances.push(x);
        }
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let model_path = dir.path().join("model.json");
    let rows_path = dir.path().join("instances.csv");
    std::fs::write(&model_path, serialize_model(&model)).map_err(|e| e.to_string())?;
    write_instances(&model, &instances, &rows_path).map_err(|e| e.to_string())?;
    let report = run_batch_eval(
        &model_path,
        &rows_path,
        Some("to-positive"),
        &[Generator::Ilp, Generator::Greedy],
        Duration::from_secs(10),
    )
    .map_err(|e| e.to_string())?;
    ensure!(report.samples == 200, "{} samples", report.samples);
    let mut strictly_better = 0;
    for n in 0..report.samples {
        let ilp = report.row(n, Generator::Ilp).expect("row");
        let greedy = report.row(n, Generator::Greedy).expect("row");
        let ilp_distance = ilp.distance.ok_or(format!("instance {n}: ilp failed"))?;
        if let Some(g) = greedy.distance {
            ensure!(ilp_distance <= g + 1e-9, "instance {n}: ilp {ilp_distance} > greedy {g}");
            strictly_better += usize::from(ilp_distance < g - 1e-9);
        }
    }
    let ilp = report.summary(Generator::Ilp).expect("summary");
    let greedy = report.summary(Generator::Greedy).expect("summary");
    ensure!(ilp.failures == 0, "{} ilp failures", ilp.failures);
    Ok(format!(
        "200 instances; ilp mean {:.4}, 0 failures; greedy mean {:.4}, {} failures; ilp strictly better on {strictly_better}",
        ilp.mean_distance.unwrap_or(f64::NAN),
        greedy.mean_distance.unwrap_or(f64::NAN),
        greedy.failures
    ))
}

fn service_contract() -> Outcome {
    let runtime = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
    runtime.block_on(async {
        let key = generate_key();
        let state = recourse_service::AppState::new(t1(), Some(key.clone()), Duration::from_secs(10));
        let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.map_err(|e| e.to_string())?;
        let base = format!("http://{}", listener.local_addr().map_err(|e| e.to_string())?);
        tokio::spawn(recourse_service::serve(listener, state));
        let client = reqwest::Client::new();
        let post = |path: &str, body: Value| {
            let request = client.post(format!("{base}{path}")).json(&body);
            async move {
                let resp = request.send().await.map_err(|e| e.to_string())?;
                let status = resp.status().as_u16();
                let bytes = resp.bytes().await.map_err(|e| e.to_string())?;
                Ok::<_, String>((status, bytes.to_vec()))
            }
        };
        let as_json = |bytes: &[u8]| serde_json::from_slice::<Value>(bytes).unwrap_or(Value::Null);
        let x = json!({"A": 8, "B": "red"});

        let (status, body) = post("/predict", json!({"instance": x})).await?;
        let p = as_json(&body);
        ensure!(status == 200 && p["score"] == -1.0 && p["label"] == "negative", "predict: {p}");
        ensure!((p["probability"].as_f64().unwrap_or(0.0) - 0.2689).abs() < 5e-5, "probability {}", p["probability"]);
        let (status, body) = post("/predict", json!({"instance": {"A": 8}})).await?;
        ensure!(status == 400 && as_json(&body)["detail"]["feature"] == "B", "missing feature: {status}");
        let (status, _) = post("/predict", json!({"instance": {"A": 8, "B": "green"}})).await?;
        ensure!(status == 422, "unknown level: {status}");
        let mut latencies = Vec::new();
        for _ in 0..50 {
            let started = Instant::now();
            post("/predict", json!({"instance": x})).await?;
            latencies.push(started.elapsed());
        }
        latencies.sort();
        let p50 = latencies[latencies.len() / 2];
        ensure!(p50 <= Duration::from_millis(10), "predict p50 {p50:?}");

        let (status, body) = post("/plans", json!({"instance": x, "k": 2})).await?;
        let plans = as_json(&body);
        let distances: Vec<f64> = plans["plans"].as_array().into_iter().flatten().filter_map(|p| p["distance"].as_f64()).collect();
        ensure!(status == 200 && distances == [4.5, 6.0], "plans k=2: {status} {distances:?}");
        let (_, body) = post("/plans", json!({"instance": x, "preferences": {"max_features": 1}})).await?;
        let capped = as_json(&body);
        ensure!(
            capped["plans"].as_array().is_some_and(|ps| !ps.is_empty() && ps.iter().all(|p| p["changes"].as_array().map(Vec::len) == Some(1))),
            "max_features=1: {capped}"
        );
        let (status, _) = post("/plans", json!({"instance": {"A": 25, "B": "red"}, "goal": {"kind": "to-positive"}})).await?;
        ensure!(status == 409, "already positive: {status}");

        let submitted: Vec<Value> = plans["plans"]
            .as_array()
            .into_iter()
            .flatten()
            .map(|p| json!({"changes": p["changes"], "distance": p["distance"]}))
            .collect();
        let (status, body) = post("/receipt", json!({"instance": x, "plans": submitted})).await?;
        ensure!(status == 200, "receipt: {status}");
        let model = client
            .get(format!("{base}/model"))
            .send()
            .await
            .map_err(|e| e.to_string())?
            .json::<Value>()
            .await
            .map_err(|e| e.to_string())?;
        let receipt = Receipt::parse(&body).map_err(|e| e.to_string())?;
        ensure!(receipt.field("model").as_deref() == model["digest"].as_str(), "receipt digest differs from /model");
        ensure!(
            verify_receipt_bytes(&body, &key.verifying_key()).ok() == Some(Verdict::Valid),
            "service receipt does not verify"
        );
        let tampered = json!({"changes": [{"feature": "A", "old": 8, "new": 12}]});
        let (status, _) = post("/receipt", json!({"instance": x, "plans": [tampered]})).await?;
        ensure!(status == 400, "tampered plan: {status}");

        let unsigned = recourse_service::AppState::new(t1(), None, Duration::from_secs(10));
        let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.map_err(|e| e.to_string())?;
        let other = format!("http://{}/receipt", listener.local_addr().map_err(|e| e.to_string())?);
        tokio::spawn(recourse_service::serve(listener, unsigned));
        let status = client
            .post(other)
            .json(&json!({"instance": x, "plans": submitted}))
            .send()
            .await
            .map_err(|e| e.to_string())?
            .status();
        ensure!(status.as_u16() == 503, "no key: {status}");
        Ok(format!("predict, plans and receipt examples pass; predict p50 {p50:?}"))
    })
}

fn panic_message(payload: Box<dyn std::any::Any + Send>) -> String {
    payload
        .downcast_ref::<String>()
        .cloned()
        .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_else(|| "panicked".into())
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("oracle optimality", oracle_optimality),
        ("top-k diversity", top_k_diversity),
        ("T1 fixture", t1_fixture),
        ("preference respect", preference_respect),
        ("gain-table identity", gain_identity),
        ("regression & multiclass", regression_and_multiclass),
        ("scalability", scalability),
        ("solver suite", solver_suite),
        ("receipt", receipts),
        ("CLI batch", cli_batch),
        ("service contract", service_contract),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| Err(panic_message(p)));
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail} [{:.1?}]", started.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
