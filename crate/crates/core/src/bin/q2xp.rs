use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use q2xp::bench::{fit_power_law, run_bench, time_triangle, write_csv};
use q2xp::input::{compute_rows, read_elements, write_rows, IoResult, OutputFormat};
use q2xp::verify::{self, VerifyConfig};

const EXIT_VERIFY: u8 = 1;
const EXIT_INPUT: u8 = 2;

#[derive(Parser)]
#[command(name = "q2xp", version, about = "Analytic multipole moments of triangles and segments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Moment tables for every element of a line-delimited JSON file.
    Compute {
        #[arg(long)]
        input: PathBuf,
        #[arg(long = "ps")]
        p_s: usize,
        #[arg(long = "pd")]
        p_d: usize,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutputFormat,
    },
    /// Oracle, far-field and invariant checks.
    Verify {
        #[arg(long = "ps", default_value_t = 10)]
        p_s: usize,
        #[arg(long = "pd", default_value_t = 10)]
        p_d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Timing sweep over p_s, p_d in {4, 8, ..., pmax} and power-law fit.
    Bench {
        #[arg(long = "pmax", default_value_t = 32)]
        p_max: usize,
        #[arg(long, default_value_t = 5)]
        repeats: usize,
        #[arg(long)]
        output: PathBuf,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::Compute { input, p_s, p_d, output, format } => compute(&input, p_s, p_d, &output, format),
        Command::Verify { p_s, p_d, seed, trials } => run_verify(VerifyConfig { p_s, p_d, seed, trials }),
        Command::Bench { p_max, repeats, output } => bench(p_max, repeats, &output),
    }
}

fn input_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_INPUT)
}

fn compute(input: &PathBuf, p_s: usize, p_d: usize, output: &PathBuf, format: OutputFormat) -> ExitCode {
    let file = match File::open(input) {
        Ok(f) => f,
        Err(e) => return input_error(format!("{}: {e}", input.display())),
    };
    let records = match read_elements(BufReader::new(file)) {
        Ok(r) => r,
        Err(e) => return input_error(format!("{}: {e}", input.display())),
    };
    let (rows, failures) = compute_rows(&records, p_s, p_d);
    for f in &failures {
        eprintln!("error: element '{}' skipped: {}", f.id, f.error);
    }
    let written: IoResult<()> = File::create(output)
        .map_err(|e| e.into())
        .and_then(|f| {
            let mut w = BufWriter::new(f);
            write_rows(&rows, format, &mut w)?;
            w.flush()?;
            Ok(())
        });
    if let Err(e) = written {
        return input_error(format!("{}: {e}", output.display()));
    }
    if failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_INPUT)
    }
}

fn run_verify(config: VerifyConfig) -> ExitCode {
    let report = match verify::run(&config) {
        Ok(r) => r,
        Err(e) => return input_error(e),
    };
    println!(
        "q2xp verify: p_s = {}, p_d = {}, seed = {}, trials = {}",
        config.p_s, config.p_d, config.seed, config.trials
    );
    println!("{report}");
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        for c in report.failures() {
            eprintln!(
                "threshold breach: {} = {:e} > {:e}{}",
                c.name,
                c.value,
                c.threshold,
                c.worst.as_ref().map(|w| format!(" at {w}")).unwrap_or_default()
            );
        }
        ExitCode::from(EXIT_VERIFY)
    }
}

fn bench(p_max: usize, repeats: usize, output: &PathBuf) -> ExitCode {
    let records = match run_bench(p_max, repeats) {
        Ok(r) => r,
        Err(e) => return input_error(e),
    };
    let written = File::create(output)
        .map_err(csv::Error::from)
        .and_then(|f| write_csv(&records, BufWriter::new(f)));
    if let Err(e) = written {
        return input_error(format!("{}: {e}", output.display()));
    }
    let fit = match fit_power_law(&records) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("warning: {e}");
            return ExitCode::SUCCESS;
        }
    };
    println!("alpha = {:.3}", fit.alpha);
    println!("beta  = {:.3}", fit.beta);
    if p_max >= 32 {
        if let (Ok(a), Ok(b)) = (time_triangle(32, 8, repeats), time_triangle(16, 8, repeats)) {
            println!("t(32, 8) / t(16, 8) = {:.3}", a / b);
        }
    }
    ExitCode::SUCCESS
}
