use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Args;
use fermatq::encoders::{
    default_penalty, encode_bit_pattern_with_depth, encode_sum_of_odds, Approach, EncodeError, VarMap,
};
use fermatq::fermat::{fermat_bounds, FermatError};
use fermatq::{BigUint, QuboDocument, QuboModel};
use serde_json::json;

use crate::{parse_n, CliError, EXIT_OK};

#[derive(Debug, Args)]
pub struct EncodeArgs {
    #[arg(value_parser = parse_n)]
    n: BigUint,
    #[arg(long, default_value = "bit-pattern")]
    approach: Approach,
    /// Assume both factors have ⌈bitlen(N)/2⌉ bits.
    #[arg(long)]
    assume_balanced: bool,
    /// Chain penalty weight (sum-odds only); defaults to 4·N² + 1.
    #[arg(long, value_parser = parse_n)]
    penalty: Option<BigUint>,
    /// Extra low bits fixed per sub-problem (bit-pattern only).
    #[arg(long, default_value_t = 0)]
    pattern_depth: u32,
    /// Output file; standard output when omitted. With a pattern depth,
    /// sub-problem `k` goes to `<stem>.<k>.<ext>`.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn encode_error(e: EncodeError) -> CliError {
    match e {
        EncodeError::TooManyVariables { .. } => CliError::Resource(e.to_string()),
        EncodeError::Fermat(FermatError::EvenInput | FermatError::TooSmall) => CliError::Usage(e.to_string()),
        other => CliError::Usage(other.to_string()),
    }
}

/// Path for sub-problem `k`: `dir/stem.k.ext`.
pub fn subproblem_path(out: &Path, k: usize) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match out.extension() {
        Some(ext) => format!("{stem}.{k}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{k}"),
    };
    out.with_file_name(name)
}

pub fn run(args: &EncodeArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let n = &args.n;
    let bounds = fermat_bounds(n, args.assume_balanced).map_err(|e| encode_error(e.into()))?;
    let models: Vec<(QuboModel, VarMap)> = match args.approach {
        Approach::SumOdds => {
            if args.pattern_depth != 0 {
                return Err(CliError::Usage("--pattern-depth applies to the bit-pattern approach only".into()));
            }
            let penalty = args.penalty.clone().unwrap_or_else(|| default_penalty(n));
            let (model, map) = encode_sum_of_odds(n, &bounds, &penalty).map_err(encode_error)?;
            vec![(model, VarMap::SumOfOdds(map))]
        }
        Approach::BitPattern => {
            if args.penalty.is_some() {
                return Err(CliError::Usage("--penalty applies to the sum-odds approach only".into()));
            }
            encode_bit_pattern_with_depth(n, &bounds, args.pattern_depth)
                .map_err(encode_error)?
                .into_iter()
                .map(|(model, map)| (model, VarMap::BitPattern(map)))
                .collect()
        }
    };
    if args.pattern_depth > 0 && args.out.is_none() {
        return Err(CliError::Usage("--pattern-depth above 0 writes several files and needs --out".into()));
    }

    let split = args.pattern_depth > 0;
    for (k, (model, map)) in models.into_iter().enumerate() {
        let mut metadata = map.to_metadata(n);
        metadata["assume_balanced"] = json!(args.assume_balanced);
        if split {
            metadata["pattern_depth"] = json!(args.pattern_depth);
            metadata["subproblem"] = json!(k);
        }
        writeln!(err, "variables: {}, offset: {}", model.num_vars(), model.offset())?;
        let text = QuboDocument::new(model, metadata).to_json();
        match &args.out {
            Some(path) => {
                let path = if split { subproblem_path(path, k) } else { path.clone() };
                std::fs::write(&path, text)?;
                if split {
                    writeln!(err, "wrote {}", path.display())?;
                }
            }
            None => out.write_all(text.as_bytes())?,
        }
    }
    Ok(EXIT_OK)
}
