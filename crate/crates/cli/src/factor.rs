use std::io::Write;
use std::time::Instant;

use clap::Args;
use fermatq::corpus::is_probable_prime;
use fermatq::fermat::{factor_fermat, trial_divide_small, FermatError, Method};
use fermatq::{BigUint, Factorization};
use num_traits::One;
use serde_json::{json, Value};

use crate::{elapsed_ms, parse_n, write_report, CliError, OutputArgs, EXIT_NOT_FACTORED, EXIT_OK};

/// Primes up to this bound are divided out before any Fermat search.
pub const SMALL_PRIME_LIMIT: u64 = 100;

#[derive(Debug, Args)]
pub struct FactorArgs {
    #[arg(value_parser = parse_n)]
    n: BigUint,
    #[arg(long, default_value_t = Method::Wheel)]
    method: Method,
    /// Assume both factors have ⌈bitlen(N)/2⌉ bits, tightening the search bound.
    #[arg(long)]
    assume_balanced: bool,
    #[command(flatten)]
    output: OutputArgs,
}

pub(crate) fn factorization_json(f: &Factorization) -> Value {
    json!({ "p": f.p.to_string(), "q": f.q.to_string(), "x": f.x.to_string(), "y": f.y.to_string() })
}

/// Divides out every prime up to `limit`, smallest first.
fn strip_small(n: &BigUint, limit: u64) -> (Vec<u64>, BigUint) {
    let mut small = Vec::new();
    let mut rest = n.clone();
    while let Some((d, cofactor)) = trial_divide_small(&rest, limit) {
        small.push(d);
        rest = cofactor;
    }
    (small, rest)
}

pub fn run(args: &FactorArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let n = &args.n;
    if *n < BigUint::from(2u32) {
        return Err(CliError::Usage(format!("N must be at least 2, got {n}")));
    }
    let start = Instant::now();
    let (small, cofactor) = strip_small(n, SMALL_PRIME_LIMIT);
    // with no large cofactor left, search the odd part instead
    let target = if cofactor.is_one() { n >> n.trailing_zeros().unwrap_or(0) } else { cofactor.clone() };
    let target_prime = is_probable_prime(&target);

    let mut result = None;
    let mut iterations = None;
    let mut failure = None;
    if target >= BigUint::from(9u32) && !target_prime {
        match factor_fermat(&target, args.method, args.assume_balanced) {
            Ok(f) if &f.p * &f.q == target && !f.q.is_one() => {
                iterations = Some(f.iterations);
                result = Some(f);
            }
            Ok(f) => failure = Some(format!("rejected unverified split {} · {}", f.p, f.q)),
            Err(e @ FermatError::BoundExceeded { .. }) => failure = Some(e.to_string()),
            Err(e) => return Err(CliError::Usage(e.to_string())),
        }
    }
    let small_product = small.iter().fold(BigUint::one(), |acc, &p| acc * p);
    assert_eq!(&small_product * &cofactor, *n, "small-factor stripping lost a factor");

    let split = result.is_some() || small.len() + usize::from(!cofactor.is_one()) >= 2;
    if let Some(msg) = &failure {
        writeln!(err, "{msg}")?;
    }
    let mut report = json!({
        "command": "factor",
        "N": n.to_string(),
        "method": args.method.as_str(),
        "assume_balanced": args.assume_balanced,
        "small_factors": small.iter().map(u64::to_string).collect::<Vec<_>>(),
        "cofactor": cofactor.to_string(),
        "fermat_input": target.to_string(),
        "fermat_input_prime": target_prime,
        "result": result.as_ref().map(factorization_json),
        "iterations": iterations,
        "factored": split,
    });
    if !args.output.no_timing {
        report["wall_time_ms"] = json!(elapsed_ms(start));
    }
    write_report(out, &report)?;
    Ok(if split { EXIT_OK } else { EXIT_NOT_FACTORED })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stripping() {
        let (small, rest) = strip_small(&BigUint::from(2u32 * 2 * 3 * 97 * 101 * 103), 100);
        assert_eq!(small, vec![2, 2, 3, 97]);
        assert_eq!(rest, BigUint::from(101u32 * 103));
        let (small, rest) = strip_small(&BigUint::from(9u32), 100);
        assert_eq!((small, rest), (vec![3, 3], BigUint::one()));
        let (small, rest) = strip_small(&BigUint::from(8_689_739u32), 100);
        assert_eq!((small, rest), (vec![], BigUint::from(8_689_739u32)));
    }
}
