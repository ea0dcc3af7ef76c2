use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use recourse_cli::{flags, read_instances, read_model, run_batch_eval, CliError, Generator};
use recourse_core::receipt::{
    build_and_sign, decode_public_key, decode_secret_key, encode_public_key, encode_secret_key, generate_key, key_id,
    verify_receipt_bytes, Verdict,
};
use recourse_core::recourse::{generate_plans, PlanOptions};
use recourse_core::wire::{instance_from_value, PlanJson, PredictionJson};
use recourse_core::{EbmModel, Instance};

/// Counterfactual recourse plans for additive models.
#[derive(Debug, Parser)]
#[command(name = "recourse", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Score instances.
    Predict {
        #[arg(long)]
        model: PathBuf,
        /// One instance as a JSON object keyed by feature name.
        #[arg(long, conflicts_with = "instances", required_unless_present = "instances")]
        instance: Option<String>,
        /// Comma-separated file with a header of feature names.
        #[arg(long)]
        instances: Option<PathBuf>,
    },
    /// Generate plans for one instance.
    Coach(CoachArgs),
    /// Compare generators over a file of instances.
    Batch {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        instances: PathBuf,
        #[arg(long)]
        goal: Option<String>,
        #[arg(long, value_delimiter = ',', default_value = "ilp,greedy")]
        generators: Vec<Generator>,
        /// Seconds per instance and generator.
        #[arg(long, default_value_t = 10.0)]
        time_limit: f64,
        /// Print one JSON line per (instance, generator) instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long, env = "COACH_ADDR", default_value = "127.0.0.1:8080")]
        addr: String,
        #[arg(long, env = "COACH_MODEL")]
        model: PathBuf,
        /// Secret key file; without it receipts are disabled.
        #[arg(long, env = "COACH_KEY")]
        key: Option<PathBuf>,
        /// Seconds per plan request.
        #[arg(long, default_value_t = 10.0)]
        time_limit: f64,
    },
    /// Create a signing key pair as PREFIX.key and PREFIX.pub.
    Keygen {
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        force: bool,
    },
    /// Check a receipt against a public key.
    VerifyReceipt {
        receipt: PathBuf,
        #[arg(long)]
        public_key: PathBuf,
    },
}

#[derive(Debug, Args)]
struct CoachArgs {
    #[arg(long)]
    model: PathBuf,
    /// JSON object keyed by feature name.
    #[arg(long)]
    instance: String,
    /// to-positive, to-negative, class=N or range=lo:hi; binary models
    /// default to flipping the decision.
    #[arg(long)]
    goal: Option<String>,
    #[arg(long, default_value_t = 5)]
    k: usize,
    /// feature=level, with level one of very-easy, easy, neutral, hard,
    /// very-hard, impossible.
    #[arg(long, value_name = "FEATURE=LEVEL")]
    difficulty: Vec<String>,
    /// feature=lo:hi for continuous features, feature=a|b for categorical.
    #[arg(long, value_name = "FEATURE=SPEC")]
    range: Vec<String>,
    #[arg(long)]
    max_features: Option<usize>,
    /// Thin candidate bins before solving.
    #[arg(long)]
    fast: bool,
    #[arg(long, default_value_t = 10.0)]
    time_limit: f64,
    #[arg(long)]
    json: bool,
    /// Write a signed receipt of the plans here (needs --key).
    #[arg(long, requires = "key")]
    receipt: Option<PathBuf>,
    #[arg(long)]
    key: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn seconds(value: f64) -> Result<Duration, CliError> {
    Duration::try_from_secs_f64(value).map_err(|_| CliError::Usage(format!("invalid time limit {value}")))
}

fn parse_instance(model: &EbmModel, text: &str) -> Result<Instance, CliError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("--instance is not valid JSON: {e}")))?;
    instance_from_value(model, &value).map_err(|e| CliError::Usage(e.to_string()))
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn print_json(value: &impl serde::Serialize) {
    println!("{}", serde_json::to_string(value).expect("output serializes"));
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Predict {
            model,
            instance,
            instances,
        } => {
            let model = read_model(&model)?;
            let rows = match (instance, instances) {
                (Some(text), _) => vec![parse_instance(&model, &text)?],
                (None, Some(path)) => read_instances(&model, &path)?,
                (None, None) => unreachable!("clap requires one of them"),
            };
            for x in &rows {
                print_json(&PredictionJson::of(&model, x));
            }
            Ok(0)
        }
        Command::Coach(args) => coach(args),
        Command::Batch {
            model,
            instances,
            goal,
            generators,
            time_limit,
            json,
        } => {
            let report = run_batch_eval(&model, &instances, goal.as_deref(), &generators, seconds(time_limit)?)?;
            if json {
                print!("{}", report.json_lines());
            } else {
                print!("{}", report.table());
            }
            Ok(0)
        }
        Command::Serve {
            addr,
            model,
            key,
            time_limit,
        } => {
            let state = recourse_service::AppState::load(&model, key.as_deref(), seconds(time_limit)?)
                .map_err(|e| CliError::io(&model, e))?;
            let runtime = tokio::runtime::Runtime::new().map_err(|e| CliError::Usage(e.to_string()))?;
            runtime.block_on(async {
                let listener = tokio::net::TcpListener::bind(&addr)
                    .await
                    .map_err(|e| CliError::io(Path::new(&addr), e))?;
                let local = listener.local_addr().map_err(|e| CliError::io(Path::new(&addr), e))?;
                eprintln!("listening on http://{local} (model {})", state.digest());
                recourse_service::serve(listener, state)
                    .await
                    .map_err(|e| CliError::io(Path::new(&addr), e))
            })?;
            Ok(0)
        }
        Command::Keygen { out, force } => {
            let secret_path = out.with_extension("key");
            let public_path = out.with_extension("pub");
            for path in [&secret_path, &public_path] {
                if path.exists() && !force {
                    return Err(CliError::io(path, "already exists (use --force to overwrite)"));
                }
            }
            let key = generate_key();
            write_file(&secret_path, encode_secret_key(&key).as_bytes())?;
            write_file(&public_path, encode_public_key(&key.verifying_key()).as_bytes())?;
            println!("key-id: {}", key_id(&key.verifying_key()));
            println!("secret key: {}", secret_path.display());
            println!("public key: {}", public_path.display());
            Ok(0)
        }
        Command::VerifyReceipt { receipt, public_key } => {
            let key = decode_public_key(&read_text(&public_key)?).map_err(|e| CliError::io(&public_key, e))?;
            let bytes = std::fs::read(&receipt).map_err(|e| CliError::io(&receipt, e))?;
            let verdict = verify_receipt_bytes(&bytes, &key).map_err(|e| CliError::io(&receipt, e))?;
            println!("{}", verdict.as_str());
            Ok(if verdict == Verdict::Valid { 0 } else { 2 })
        }
    }
}

fn coach(args: CoachArgs) -> Result<u8, CliError> {
    let model = read_model(&args.model)?;
    let x = parse_instance(&model, &args.instance)?;
    let goal = flags::parse_goal(&model, &x, args.goal.as_deref())?;
    let prefs = flags::parse_preferences(&model, &args.difficulty, &args.range, args.max_features)?;
    if args.k == 0 {
        return Err(CliError::Usage("--k must be at least 1".into()));
    }
    let key = match &args.key {
        Some(path) => Some(decode_secret_key(&read_text(path)?).map_err(|e| CliError::io(path, e))?),
        None => None,
    };
    let options = PlanOptions {
        k: args.k,
        time_limit: seconds(args.time_limit)?,
        fast: args.fast,
    };
    let set = generate_plans(&model, &x, &goal, &prefs, &options)?;

    if args.json {
        let plans: Vec<PlanJson> = set.plans.iter().map(|p| PlanJson::from_plan(&model, p)).collect();
        print_json(&serde_json::json!({
            "current": PredictionJson::of(&model, &x),
            "goal": goal,
            "plans": plans,
            "timed_out": set.timed_out,
            "reason": set.reason,
        }));
    } else {
        let current = PredictionJson::of(&model, &x);
        let mut out = std::io::stdout().lock();
        let _ = writeln!(out, "current: {} (score {})", current.label, current.score);
        let _ = writeln!(out, "goal: {}", goal.describe());
        for (n, plan) in set.plans.iter().enumerate() {
            let outcome = plan.new_prediction.label();
            let _ = writeln!(
                out,
                "plan {}: distance {}, score gain {:+}, outcome {outcome}",
                n + 1,
                plan.distance,
                plan.score_gain
            );
            for c in &plan.changes {
                let _ = writeln!(
                    out,
                    "  {}: {} -> {}",
                    model.feature(c.feature).name,
                    model.display_value(c.feature, c.old_value),
                    model.display_value(c.feature, c.new_value)
                );
            }
        }
        if set.timed_out {
            let _ = writeln!(out, "time limit reached");
        }
        if let Some(reason) = set.reason.as_ref().filter(|_| !set.plans.is_empty()) {
            let _ = writeln!(out, "{reason}");
        }
    }

    if set.plans.is_empty() {
        return Err(CliError::NoRecourse(
            set.reason.unwrap_or_else(|| "no plan found".into()),
        ));
    }
    if let (Some(path), Some(key)) = (&args.receipt, &key) {
        let receipt = build_and_sign(&model, &x, &goal, &set.plans, key, chrono::Utc::now())?;
        write_file(path, &receipt.render())?;
        eprintln!("receipt written to {}", path.display());
    }
    Ok(0)
}
