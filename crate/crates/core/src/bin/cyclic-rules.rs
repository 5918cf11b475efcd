use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use cyclic_rules::bench::{self, Algorithm, DataSource, Dimension, OutputFormat, RunConfig};
use cyclic_rules::db::{BasketSpec, InputFormat};
use cyclic_rules::{AggregateConstraint, ConstraintSet, Error, ItemFilter, MiningParams};

/// Mine cyclic association rules from a temporal transaction database.
#[derive(Parser, Debug)]
#[command(name = "cyclic-rules", version)]
struct Cli {
    /// Transaction file (FIMI, quantified FIMI or timestamped CSV).
    #[arg(long, conflicts_with = "synthetic")]
    input: Option<PathBuf>,

    /// Generate a basket database instead, e.g. `transactions=100000,items=1000,per_unit=1000`.
    #[arg(long, value_name = "KEY=VALUE,...")]
    synthetic: Option<String>,

    #[arg(long, default_value = "fimi", value_parser = parse::<InputFormat>)]
    format: InputFormat,

    /// Consecutive FIMI lines per time unit (divides the CSV unit column).
    #[arg(long, default_value_t = 1)]
    units_per_group: u32,

    #[arg(long, default_value = "cbcar", value_parser = parse::<Algorithm>)]
    algorithm: Algorithm,

    #[arg(long, default_value_t = 0.5)]
    minsupp: f64,

    #[arg(long, default_value_t = 0.5)]
    minconf: f64,

    #[arg(long, default_value_t = 1)]
    partitions: usize,

    /// Cycle length for pcar/cbcar.
    #[arg(long, default_value_t = 2)]
    cycle_length: u32,

    /// Shortest cycle length for sequential/interleaved.
    #[arg(long, default_value_t = 1)]
    lmin: u32,

    /// Longest cycle length for sequential/interleaved.
    #[arg(long, default_value_t = 2)]
    lmax: u32,

    /// Report every cycle, not only the minimal ones (sequential/interleaved).
    #[arg(long)]
    all_cycles: bool,

    /// Premise items, comma-separated, or `*`.
    #[arg(long, value_parser = parse::<ItemFilter>)]
    prm: Option<ItemFilter>,

    /// Conclusion items, comma-separated, or `*`.
    #[arg(long, value_parser = parse::<ItemFilter>)]
    cl: Option<ItemFilter>,

    /// Aggregate constraint such as `SUM(0)>=1`; repeatable.
    #[arg(long, value_parser = parse::<AggregateConstraint>)]
    agg: Vec<AggregateConstraint>,

    #[arg(long)]
    allow_empty_premise: bool,

    /// Write here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,

    #[arg(long, default_value = "json", value_parser = parse::<OutputFormat>)]
    out_format: OutputFormat,

    /// Sweep one dimension: minsupp, partitions, cycle_length, constraint_count.
    #[arg(long, value_parser = parse::<Dimension>, requires = "values")]
    sweep: Option<Dimension>,

    /// Comma-separated values for --sweep.
    #[arg(long, value_delimiter = ',')]
    values: Vec<f64>,

    /// Compare algorithms on the same input, e.g. `sequential,interleaved`.
    #[arg(long, value_delimiter = ',', value_parser = parse::<Algorithm>, conflicts_with = "sweep")]
    compare: Vec<Algorithm>,

    /// Timed repetitions; the median is reported.
    #[arg(long, default_value_t = 1)]
    repeat: usize,

    /// Seed for --synthetic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse<T>(s: &str) -> Result<T, String>
where
    T: std::str::FromStr<Err = Error>,
{
    s.parse().map_err(|e: Error| match e {
        Error::InvalidArgument { message, .. } => message,
        other => other.to_string(),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", describe(&e));
            ExitCode::FAILURE
        }
    }
}

fn execute(cli: Cli) -> Result<(), Error> {
    let config = config_from(&cli)?;
    let mut out: Box<dyn Write> = match &cli.output {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| Error::InvalidArgument {
                name: "output",
                message: format!("{}: {e}", path.display()),
            })?,
        )),
        None => Box::new(io::stdout().lock()),
    };
    if let Some(dimension) = cli.sweep {
        bench::sweep(&config, dimension, &cli.values, &mut out)?;
    } else if !cli.compare.is_empty() {
        let configs: Vec<RunConfig> = cli
            .compare
            .iter()
            .map(|&algorithm| {
                let constraints = if algorithm == Algorithm::Cbcar {
                    config.constraints.clone()
                } else {
                    ConstraintSet::default()
                };
                RunConfig { algorithm, constraints, ..config.clone() }
            })
            .collect();
        bench::compare(&configs, &mut out)?;
    } else {
        let report = bench::run(&config)?;
        out.write_all(report.render(config.out_format)?.as_bytes())?;
    }
    out.flush()?;
    Ok(())
}

fn config_from(cli: &Cli) -> Result<RunConfig, Error> {
    let input = match (&cli.input, &cli.synthetic) {
        (Some(path), _) => DataSource::File(path.clone()),
        (None, Some(spec)) => DataSource::Synthetic(basket_spec(spec)?),
        (None, None) => {
            return Err(Error::InvalidArgument {
                name: "input",
                message: "either --input or --synthetic is required".into(),
            })
        }
    };
    Ok(RunConfig {
        input,
        format: cli.format,
        units_per_group: cli.units_per_group,
        algorithm: cli.algorithm,
        params: MiningParams {
            minsupp: cli.minsupp,
            minconf: cli.minconf,
            nb_partitions: cli.partitions,
            cycle_length: cli.cycle_length,
            l_min: cli.lmin,
            l_max: cli.lmax,
            allow_empty_premise: cli.allow_empty_premise,
            all_cycles: cli.all_cycles,
        },
        constraints: ConstraintSet {
            prm: cli.prm.clone().unwrap_or_default(),
            cl: cli.cl.clone().unwrap_or_default(),
            aggregates: cli.agg.clone(),
        },
        out_format: cli.out_format,
        seed: cli.seed,
        repeat: cli.repeat,
    })
}

fn basket_spec(text: &str) -> Result<BasketSpec, Error> {
    let bad = |message: String| Error::InvalidArgument { name: "synthetic", message };
    let mut fields = serde_json::Map::new();
    for pair in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| bad(format!("`{pair}` is not KEY=VALUE")))?;
        let value: serde_json::Value =
            serde_json::from_str(value.trim()).map_err(|_| bad(format!("`{value}` is not a number")))?;
        fields.insert(key.trim().to_string(), value);
    }
    serde_json::from_value(serde_json::Value::Object(fields)).map_err(|e| bad(e.to_string()))
}

/// Prefixes errors with the flag they came from.
fn describe(e: &Error) -> String {
    match e {
        Error::InvalidArgument { name, message } => {
            let flags = name
                .split('/')
                .map(|n| format!("--{n}"))
                .collect::<Vec<_>>()
                .join("/");
            format!("{flags}: {message}")
        }
        Error::Parse { .. } | Error::EmptyInput => format!("--input: {e}"),
        Error::UnknownItem(_) => format!("--prm/--cl/--agg: {e}"),
        other => other.to_string(),
    }
}
