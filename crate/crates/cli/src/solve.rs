use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use fermatq::encoders::VarMap;
use fermatq::solvers::{auto_beta_range, recover_factors, solve_exact, solve_sa, SaParams, SolveError, DEFAULT_VAR_LIMIT};
use fermatq::{BigInt, BigUint, Factorization, QuboDocument};
use serde_json::{json, Value};

use crate::factor::factorization_json;
use crate::{elapsed_ms, read_file, write_report, CliError, OutputArgs, SolverKind, EXIT_NOT_FACTORED, EXIT_OK};

/// Samples listed per file in the report.
const REPORTED_SAMPLES: usize = 5;

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// QUBO documents for one N (several when encoded with a pattern depth).
    #[arg(required = true)]
    files: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "sa")]
    solver: SolverKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = SaParams::default().sweeps)]
    sweeps: usize,
    #[arg(long, default_value_t = SaParams::default().restarts)]
    restarts: usize,
    /// Distinct assignments kept by the annealer.
    #[arg(long, default_value_t = SaParams::default().samples_kept)]
    samples_kept: usize,
    /// Inverse temperature at the first sweep; derived from the model when omitted.
    #[arg(long, requires = "beta_final")]
    beta_initial: Option<f64>,
    #[arg(long, requires = "beta_initial")]
    beta_final: Option<f64>,
    /// Largest model the exact solver accepts.
    #[arg(long, default_value_t = DEFAULT_VAR_LIMIT)]
    var_limit: usize,
    #[command(flatten)]
    output: OutputArgs,
}

fn solve_error(e: SolveError) -> CliError {
    match e {
        SolveError::InvalidParams(_) => CliError::Usage(e.to_string()),
        SolveError::TooLarge { .. } | SolveError::CoefficientOverflow => CliError::Resource(e.to_string()),
    }
}

fn load(path: &PathBuf) -> Result<(QuboDocument, BigUint, VarMap), CliError> {
    let text = read_file(path)?;
    let doc = QuboDocument::from_json(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let (n, map) =
        VarMap::from_metadata(&doc.metadata).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    if map.num_vars() != doc.model.num_vars() {
        return Err(CliError::Parse(format!(
            "{}: variable map covers {} variables, model has {}",
            path.display(),
            map.num_vars(),
            doc.model.num_vars()
        )));
    }
    Ok((doc, n, map))
}

pub fn run(args: &SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let start = Instant::now();
    let mut loaded = Vec::with_capacity(args.files.len());
    for path in &args.files {
        loaded.push(load(path)?);
    }
    let (n, approach) = (loaded[0].1.clone(), loaded[0].2.approach());
    if loaded.iter().any(|(_, m, map)| *m != n || map.approach() != approach) {
        return Err(CliError::Usage("all files must encode the same N with the same approach".into()));
    }
    let mut params = SaParams {
        sweeps: args.sweeps,
        restarts: args.restarts,
        beta_range: args.beta_initial.zip(args.beta_final),
        seed: args.seed,
        samples_kept: args.samples_kept,
    };

    let mut found: Option<Factorization> = None;
    let mut best: Option<BigInt> = None;
    let mut per_file = Vec::new();
    for ((doc, _, map), path) in loaded.iter().zip(&args.files) {
        let model = &doc.model;
        let mut beta = Value::Null;
        let set = match args.solver {
            SolverKind::Exact => solve_exact(model, args.var_limit),
            SolverKind::Sa => {
                let range = match args.beta_initial.zip(args.beta_final) {
                    Some(r) => r,
                    None => auto_beta_range(model, args.seed).map_err(solve_error)?,
                };
                params.beta_range = Some(range);
                beta = json!({ "initial": range.0, "final": range.1 });
                solve_sa(model, &params)
            }
        }
        .map_err(solve_error)?;
        let recovered = recover_factors(&n, &set, map).filter(|f| &f.p * &f.q == n);
        if let Some(e) = set.min_energy() {
            if best.as_ref().is_none_or(|b| e < b) {
                best = Some(e.clone());
            }
        }
        writeln!(
            err,
            "{}: {} variables, {} samples, min energy {}",
            path.display(),
            model.num_vars(),
            set.len(),
            set.min_energy().map_or("-".into(), BigInt::to_string)
        )?;
        per_file.push(json!({
            "file": path.display().to_string(),
            "num_vars": model.num_vars(),
            "beta": beta,
            "samples": set.len(),
            "zero_energy_samples": set.iter().filter(|s| s.energy == BigInt::from(0)).count(),
            "min_energy": set.min_energy().map(BigInt::to_string),
            "top_samples": set.samples().iter().take(REPORTED_SAMPLES).collect::<Vec<_>>(),
            "factored": recovered.is_some(),
        }));
        if found.is_none() {
            found = recovered;
        }
    }

    let mut report = json!({
        "command": "solve",
        "N": n.to_string(),
        "approach": approach.as_str(),
        "solver": match args.solver { SolverKind::Exact => "exact", SolverKind::Sa => "sa" },
        "result": found.as_ref().map(factorization_json),
        "best_energy": best.as_ref().map(BigInt::to_string),
        "files": per_file,
    });
    if args.solver == SolverKind::Sa {
        report["seed"] = json!(args.seed);
        report["params"] = json!({
            "sweeps": args.sweeps,
            "restarts": args.restarts,
            "samples_kept": args.samples_kept,
        });
    } else {
        report["var_limit"] = json!(args.var_limit);
    }
    if !args.output.no_timing {
        report["wall_time_ms"] = json!(elapsed_ms(start));
    }
    write_report(out, &report)?;
    Ok(if found.is_some() { EXIT_OK } else { EXIT_NOT_FACTORED })
}
