//! Command line front end: parse field/divisor specifications, run the
//! h0 / jump / reduce / sweep pipelines, and emit results as JSON, CSV or
//! plain text.
//!
//! Exit codes: 0 success, 2 parameter errors, 3 precision exhaustion,
//! 4 domain errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::ops::CompleteRound;
use rug::Float;

use arakelov::error::Error;
use arakelov::io;
use arakelov::pipeline;
use arakelov::{ArakelovDivisor, NumberField};

#[derive(Parser)]
#[command(name = "h0", version, about = "Size function computations on Arakelov divisor classes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct FieldArgs {
    /// Path to the field specification JSON
    #[arg(long)]
    field: PathBuf,
    /// Working precision override in bits (beats the file and the
    /// H0_PRECISION_BITS environment variable)
    #[arg(long)]
    precision_bits: Option<u32>,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Compute h⁰ at a divisor with a target error delta
    H0 {
        #[command(flatten)]
        field: FieldArgs,
        /// Divisor: inline JSON or a path to a JSON file
        #[arg(long)]
        divisor: String,
        #[arg(long, default_value_t = 1e-5)]
        delta: f64,
        /// Expert override of the enumeration bound M
        #[arg(long, value_name = "M")]
        m: Option<f64>,
    },
    /// Run the jump algorithm on a degree-zero log vector (trivial ideal)
    Jump {
        #[command(flatten)]
        field: FieldArgs,
        /// Comma-separated log u_σ, one per infinite place
        #[arg(long, allow_hyphen_values = true)]
        logu: String,
        /// Print every doubling step as a JSON line
        #[arg(long)]
        trace: bool,
    },
    /// One LLL reduction on a degree-zero divisor
    Reduce {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        divisor: String,
    },
    /// Evaluate h⁰ over a grid spanned by orthonormal directions
    Sweep {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        divisor: String,
        /// Direction: a name (e, e1, e2, ...) or comma-separated coordinates;
        /// repeat per dimension
        #[arg(long = "dir", allow_hyphen_values = true)]
        dirs: Vec<String>,
        /// Length of the swept interval per direction
        #[arg(long = "extent")]
        extents: Vec<f64>,
        /// Sample count per direction
        #[arg(long = "samples")]
        samples: Vec<usize>,
        #[arg(long, default_value_t = 1e-5)]
        delta: f64,
        /// Write the CSV table here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the field invariants
    Info {
        #[command(flatten)]
        field: FieldArgs,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Parameter(_) => 2,
        Error::Precision(_) => 3,
        Error::Domain(_) => 4,
        Error::Internal(_) => 1,
    }
}

fn load_field(args: &FieldArgs) -> Result<NumberField, Error> {
    let text = std::fs::read_to_string(&args.field)
        .map_err(|e| Error::Parameter(format!("cannot read {}: {}", args.field.display(), e)))?;
    let env_prec = std::env::var("H0_PRECISION_BITS")
        .ok()
        .and_then(|s| s.trim().parse::<u32>().ok());
    io::field_from_spec_str(&text, args.precision_bits.or(env_prec))
}

fn load_divisor(spec: &str, field: &NumberField) -> Result<ArakelovDivisor, Error> {
    let text = if spec.trim_start().starts_with('{') {
        spec.to_string()
    } else {
        std::fs::read_to_string(spec)
            .map_err(|e| Error::Parameter(format!("cannot read {}: {}", spec, e)))?
    };
    io::divisor_from_str(&text, field)
}

fn parse_log_vector(s: &str, field: &NumberField) -> Result<Vec<Float>, Error> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != field.num_places() {
        return Err(Error::Parameter(format!(
            "expected {} comma-separated coordinates, got {}",
            field.num_places(),
            parts.len()
        )));
    }
    parts
        .iter()
        .map(|p| {
            Float::parse(p)
                .map(|v| Float::with_val(field.precision_bits, v))
                .map_err(|_| Error::Parameter(format!("not a real: {}", p)))
        })
        .collect()
}

/// Deterministic orthonormal basis of the degree-zero subspace in the
/// degree-weighted inner product, built by Gram-Schmidt over the
/// differences of consecutive coordinate vectors.
fn canonical_directions(field: &NumberField) -> Vec<Vec<Float>> {
    let prec = field.precision_bits;
    let degs = field.place_degrees();
    let places = field.num_places();
    let ip = |a: &[Float], b: &[Float]| {
        let mut acc = Float::new(prec);
        for ((x, y), d) in a.iter().zip(b).zip(&degs) {
            acc += (x * y).complete(prec) * Float::with_val(prec, *d);
        }
        acc
    };
    let mut basis: Vec<Vec<Float>> = Vec::new();
    for i in 0..places.saturating_sub(1) {
        let mut v = vec![Float::new(prec); places];
        v[i] = Float::with_val(prec, 1);
        v[i + 1] = Float::with_val(prec, -1);
        for e in &basis {
            let c = ip(&v, e);
            for (vt, et) in v.iter_mut().zip(e) {
                *vt -= (&c * et).complete(prec);
            }
        }
        let norm = ip(&v, &v).sqrt();
        for vt in v.iter_mut() {
            *vt /= &norm;
        }
        basis.push(v);
    }
    basis
}

fn resolve_direction(name: &str, field: &NumberField) -> Result<Vec<Float>, Error> {
    let canon = canonical_directions(field);
    let named = match name {
        "e" | "e1" => canon.first().cloned(),
        "e2" => canon.get(1).cloned(),
        "e3" => canon.get(2).cloned(),
        _ => None,
    };
    if let Some(d) = named {
        return Ok(d);
    }
    if name.contains(',') {
        return parse_log_vector(name, field);
    }
    Err(Error::Parameter(format!("unknown direction: {}", name)))
}

fn run() -> Result<(), Error> {
    let cli = Cli::parse();
    match cli.command {
        Command::Info { field } => {
            let f = load_field(&field)?;
            let v = serde_json::json!({
                "n": f.n,
                "r1": f.r1,
                "r2": f.r2,
                "disc": f.disc.to_string(),
                "partial_const": io::float_to_string(&f.ideal_norm_const),
                "reduce_dist_const": io::float_to_string(&f.reduce_dist_const),
                "precision_bits": f.precision_bits,
            });
            match field.format {
                Format::Text => {
                    println!("degree n     = {}", f.n);
                    println!("signature    = ({}, {})", f.r1, f.r2);
                    println!("disc         = {}", f.disc);
                    println!("partial_F    = {:.10e}", f.ideal_norm_const.to_f64());
                    println!("D_F          = {:.10e}", f.reduce_dist_const.to_f64());
                    println!("precision    = {} bits", f.precision_bits);
                }
                _ => println!("{}", serde_json::to_string(&v).expect("serializable")),
            }
            Ok(())
        }
        Command::H0 { field, divisor, delta, m } => {
            let f = load_field(&field)?;
            let d = load_divisor(&divisor, &f)?;
            let r = pipeline::h0_with_m(&d, delta, m, &f)?;
            match field.format {
                Format::Text => {
                    println!("h0         = {:.10}", r.value.to_f64());
                    println!("M          = {}", r.m);
                    println!("terms      = {}", r.term_count);
                    println!("path       = {}", r.path.as_str());
                    println!("tail_bound = {:.3e}", r.tail_bound.to_f64());
                }
                _ => println!(
                    "{}",
                    serde_json::to_string(&io::h0_result_to_value(&r)).expect("serializable")
                ),
            }
            Ok(())
        }
        Command::Jump { field, logu, trace } => {
            let f = load_field(&field)?;
            let log_u = parse_log_vector(&logu, &f)?;
            let out = pipeline::jump(&log_u, &f)?;
            if trace {
                for row in out.trace.as_deref().unwrap_or(&[]) {
                    println!(
                        "{}",
                        serde_json::to_string(&io::trace_row_to_value(row)).expect("serializable")
                    );
                }
            } else {
                println!(
                    "{}",
                    serde_json::to_string(&io::reduction_to_value(&out)).expect("serializable")
                );
            }
            Ok(())
        }
        Command::Reduce { field, divisor } => {
            let f = load_field(&field)?;
            let d = load_divisor(&divisor, &f)?;
            let out = pipeline::reduce_divisor(&d, &f)?;
            println!(
                "{}",
                serde_json::to_string(&io::reduction_to_value(&out)).expect("serializable")
            );
            Ok(())
        }
        Command::Sweep { field, divisor, dirs, extents, samples, delta, out } => {
            let f = load_field(&field)?;
            let d = load_divisor(&divisor, &f)?;
            if dirs.is_empty() || dirs.len() != extents.len() || dirs.len() != samples.len() {
                return Err(Error::Parameter(
                    "need matching --dir/--extent/--samples, one triple per dimension".into(),
                ));
            }
            let directions = dirs
                .iter()
                .map(|name| resolve_direction(name, &f))
                .collect::<Result<Vec<_>, _>>()?;
            let ext: Vec<(f64, usize)> =
                extents.iter().zip(&samples).map(|(&l, &s)| (l, s)).collect();
            let result = pipeline::sweep(&d, &directions, &ext, delta, &f)?;
            let csv = io::sweep_to_csv(&result, dirs.len());
            eprintln!("cache entries: {}", result.cache.entries.len());
            match out {
                Some(path) => std::fs::write(&path, &csv).map_err(|e| {
                    Error::Parameter(format!("cannot write {}: {}", path.display(), e))
                })?,
                None => print!("{}", csv),
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(exit_code_for(&e))
        }
    }
}
