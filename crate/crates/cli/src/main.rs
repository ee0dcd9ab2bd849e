//! `maua`: validate, evaluate and explore decision problems from the shell.

mod render;
mod set;

use std::fs;
use std::io::{self, Read, Write};
use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use maua_core::io::{
    export_csv, import_csv, parse_problem, results_json, serialize_problem, ParseError,
};
use maua_core::{
    evaluate_problem, rank_options, sensitivity_report, validate_problem, what_if, DecisionProblem,
    SweepMethod, ValidationReport,
};
use maua_service::{ServeError, ServiceConfig};
use tracing_subscriber::EnvFilter;

#[derive(Parser)]
#[command(name = "maua", version, about = "Multi-attribute utility analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a problem document and list every issue.
    Validate {
        /// Problem document, or `-` for standard input.
        file: String,
        #[arg(long)]
        json: bool,
    },
    /// Compute utilities and the ranking.
    Evaluate {
        file: String,
        /// Print machine-readable results.
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        /// Print one CSV row per option in ranking order.
        #[arg(long)]
        csv: bool,
    },
    /// Find the weights at which the top option changes.
    Sensitivity {
        file: String,
        /// Attribute to sweep; all attributes when omitted.
        #[arg(long)]
        attribute: Option<String>,
        #[arg(long, value_enum, default_value_t = Mode::Critical)]
        mode: Mode,
        /// Grid size for `--mode sweep`.
        #[arg(long, default_value_t = 101)]
        samples: usize,
        #[arg(long)]
        json: bool,
    },
    /// Compare results before and after hypothetical changes.
    Whatif {
        file: String,
        /// `ATTRIBUTE.importance=V` or `OPTION.ATTRIBUTE=V`; repeatable.
        #[arg(long = "set", value_name = "TARGET=VALUE", required = true)]
        sets: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Fill a problem skeleton with options read from CSV.
    ImportCsv {
        /// Problem document providing the attributes.
        skeleton: String,
        /// CSV with header `option,<attribute names>`.
        csv: String,
        /// Output path, or `-` for standard output.
        #[arg(short, long)]
        output: String,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long, env = "MAUA_STORE")]
        store: PathBuf,
        #[arg(long, env = "MAUA_BIND", default_value = "127.0.0.1:8080")]
        bind: SocketAddr,
        /// Allowed CORS origin; any origin when omitted.
        #[arg(long, env = "MAUA_CORS_ORIGIN")]
        cors_origin: Option<String>,
        /// Built web UI to serve at `/`.
        #[arg(long, env = "MAUA_STATIC_DIR")]
        static_dir: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Critical,
    Sweep,
}

/// A failed command. The variant picks the exit status.
enum Failure {
    Invalid(String),
    Usage(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::Usage(m) | Failure::Io(m) => m,
        }
    }
}

impl From<maua_core::Error> for Failure {
    fn from(err: maua_core::Error) -> Self {
        match err {
            maua_core::Error::Invalid(report) => Failure::Invalid(render::report(&report)),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read_input(path: &str) -> Result<String, Failure> {
    let mut text = String::new();
    let result = if path == "-" {
        io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        fs::read_to_string(path).map(|t| text = t)
    };
    result.map_err(|e| Failure::Io(format!("cannot read {path}: {e}")))?;
    Ok(text)
}

fn write_output(path: &str, text: &str) -> Outcome {
    let result = if path == "-" {
        io::stdout().write_all(text.as_bytes())
    } else {
        fs::write(path, text)
    };
    result.map_err(|e| Failure::Io(format!("cannot write {path}: {e}")))
}

fn print(text: &str) -> Outcome {
    write_output("-", text)
}

fn parse_failure(path: &str, err: ParseError) -> Failure {
    Failure::Invalid(format!("{path}: {err}"))
}

fn load(path: &str) -> Result<DecisionProblem, Failure> {
    let text = read_input(path)?;
    parse_problem(&text).map_err(|e| parse_failure(path, e))
}

fn warn_about(report: &ValidationReport) {
    for issue in report.warnings() {
        eprintln!("warning: {}: {}", issue.path, issue.message);
    }
}

fn validate(file: &str, json: bool) -> Outcome {
    let text = read_input(file)?;
    let report = match parse_problem(&text) {
        Ok(problem) => validate_problem(&problem),
        Err(e) => ValidationReport::single_error(e.path(), e.to_string()),
    };
    if json {
        print(&(serde_json::to_string_pretty(&report).expect("reports serialize") + "\n"))?;
    } else {
        print(&render::report(&report))?;
    }
    if report.ok {
        Ok(())
    } else {
        Err(Failure::Invalid(String::new()))
    }
}

fn evaluate(file: &str, json: bool, csv: bool) -> Outcome {
    let problem = load(file)?;
    let result = evaluate_problem(&problem)?;
    warn_about(&validate_problem(&problem));
    let ranking = rank_options(&result);
    if json {
        print(&results_json(&result, &ranking, None))
    } else if csv {
        print(&export_csv(&result, &ranking))
    } else {
        print(&render::evaluation(&result, &ranking))
    }
}

fn sensitivity(
    file: &str,
    attribute: Option<&str>,
    mode: Mode,
    samples: usize,
    json: bool,
) -> Outcome {
    let problem = load(file)?;
    let method = match mode {
        Mode::Critical => SweepMethod::Critical,
        Mode::Sweep => SweepMethod::Sweep { samples },
    };
    let report = sensitivity_report(&problem, attribute, method)?;
    if json {
        print(&(serde_json::to_string_pretty(&report).expect("reports serialize") + "\n"))
    } else {
        print(&render::sensitivity(&report))
    }
}

fn whatif(file: &str, sets: &[String], json: bool) -> Outcome {
    let problem = load(file)?;
    let overrides = sets
        .iter()
        .map(|s| set::parse(s, &problem))
        .collect::<Result<Vec<_>, _>>()
        .map_err(Failure::Usage)?;
    let delta = what_if(&problem, &overrides)?;
    if json {
        print(&(serde_json::to_string_pretty(&delta).expect("deltas serialize") + "\n"))
    } else {
        print(&render::what_if(&delta))
    }
}

fn import(skeleton: &str, csv: &str, output: &str) -> Outcome {
    let mut problem = load(skeleton)?;
    let text = read_input(csv)?;
    problem.options = import_csv(&text, &problem.attributes)
        .map_err(|e| Failure::Invalid(format!("{csv}: {e}")))?;
    let report = validate_problem(&problem);
    if !report.ok {
        return Err(Failure::Invalid(render::report(&report)));
    }
    warn_about(&report);
    write_output(output, &serialize_problem(&problem))
}

fn serve(config: ServiceConfig) -> Outcome {
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::Io(e.to_string()))?;
    runtime
        .block_on(maua_service::serve(config))
        .map_err(|e| match e {
            ServeError::CorsOrigin(_) => Failure::Usage(e.to_string()),
            other => Failure::Io(other.to_string()),
        })
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Validate { file, json } => validate(&file, json),
        Command::Evaluate { file, json, csv } => evaluate(&file, json, csv),
        Command::Sensitivity {
            file,
            attribute,
            mode,
            samples,
            json,
        } => sensitivity(&file, attribute.as_deref(), mode, samples, json),
        Command::Whatif { file, sets, json } => whatif(&file, &sets, json),
        Command::ImportCsv {
            skeleton,
            csv,
            output,
        } => import(&skeleton, &csv, &output),
        Command::Serve {
            store,
            bind,
            cors_origin,
            static_dir,
        } => serve(ServiceConfig {
            store_root: store,
            bind,
            cors_origin,
            static_dir,
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let default_level = if matches!(cli.command, Command::Serve { .. }) {
        "info"
    } else {
        "warn"
    };
    tracing_subscriber::fmt()
        .with_writer(io::stderr)
        .with_env_filter(
            EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new(default_level)),
        )
        .init();

    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            let message = failure.message().trim_end();
            if !message.is_empty() {
                eprintln!("maua: {message}");
            }
            ExitCode::from(failure.code())
        }
    }
}
