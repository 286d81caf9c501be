use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::Args;
use fermatq::corpus::{balanced_semiprimes, MAX_BITS};
use fermatq::fermat::{factor_fermat, Method};
use fermatq::BigUint;
use serde_json::json;

use crate::{write_report, CliError, EXIT_OK};

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Bit sizes, `LO..HI` (inclusive) or a single size.
    #[arg(long, value_parser = parse_bits)]
    bits: RangeInclusive<u32>,
    /// Semiprimes per bit size.
    #[arg(long, default_value_t = 50)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Per-run rows are written here.
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn parse_bits(s: &str) -> Result<RangeInclusive<u32>, String> {
    let (lo, hi) = s.split_once("..").unwrap_or((s, s));
    let num = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("bad bit size `{t}`"));
    let (lo, hi) = (num(lo)?, num(hi)?);
    if !(8 <= lo && lo <= hi && hi <= MAX_BITS) {
        return Err(format!("need 8 <= LO <= HI <= {MAX_BITS}, got {lo}..{hi}"));
    }
    Ok(lo..=hi)
}

pub const CSV_HEADER: &str = "bits,N,method,iterations,found";

pub fn run(args: &BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    if args.samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    let mut per_bits = Vec::new();
    for bits in args.bits.clone() {
        let mut corpus = balanced_semiprimes(bits, args.samples, args.seed);
        if corpus.len() < args.samples {
            writeln!(err, "{bits} bits: only {} balanced semiprimes exist", corpus.len())?;
        }
        corpus.sort();
        let mut totals: BTreeMap<Method, (u64, usize)> = BTreeMap::new();
        for s in &corpus {
            for method in Method::ALL {
                let (iterations, found) = match factor_fermat(&BigUint::from(s.n), method, false) {
                    Ok(f) => (f.iterations, &f.p * &f.q == BigUint::from(s.n) && f.q == BigUint::from(s.q)),
                    Err(_) => (0, false),
                };
                let _ = writeln!(csv, "{bits},{},{method},{iterations},{found}", s.n);
                let t = totals.entry(method).or_default();
                t.0 += iterations;
                t.1 += 1;
            }
        }
        let mean = |m: Method| totals.get(&m).map_or(0.0, |&(sum, k)| sum as f64 / k as f64);
        let ratio = |m: Method| if mean(m) > 0.0 { mean(Method::Naive) / mean(m) } else { 0.0 };
        per_bits.push(json!({
            "bits": bits,
            "count": corpus.len(),
            "mean_iterations": Method::ALL.iter().map(|&m| (m.as_str().to_owned(), json!(mean(m)))).collect::<serde_json::Map<_, _>>(),
            "ratio_naive_mod4": ratio(Method::Mod4),
            "ratio_naive_mod8_16": ratio(Method::Mod8_16),
        }));
    }
    if let Some(path) = &args.csv {
        std::fs::write(path, &csv)?;
    }
    write_report(out, &json!({ "command": "bench", "seed": args.seed, "samples": args.samples, "bits": per_bits }))?;
    Ok(EXIT_OK)
}
