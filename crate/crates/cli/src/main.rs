use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qfi_cli::config::{self, Format};
use qfi_cli::families::FamilySpec;
use qfi_cli::sweep::{self, SweepError};
use qfi_cli::verify::{self, Suite};
use qfi_cli::{exit, ld};
use qfi_core::Model;

#[derive(Parser)]
#[command(name = "qfi", version, about = "Quantum Fisher information sweeps and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every model over a parameter grid.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's `output`; `-` writes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Run a seeded property suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print one logarithmic derivative with diagnostics.
    Ld {
        #[arg(long)]
        family: String,
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long)]
        model: String,
        /// Family parameter as `key=value`; repeatable.
        #[arg(long = "param")]
        params: Vec<String>,
    },
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("qfi: {msg}");
    ExitCode::from(code)
}

fn sweep_cmd(path: PathBuf, out: Option<PathBuf>, format: Option<FormatArg>) -> ExitCode {
    let text = match std::fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) => return fail(exit::USAGE, format!("{}: {e}", path.display())),
    };
    let cfg = match config::parse(&text) {
        Ok(c) => c,
        Err(e) => return fail(exit::USAGE, format!("{}:{e}", path.display())),
    };
    let format = match format {
        Some(FormatArg::Csv) => Format::Csv,
        Some(FormatArg::Json) => Format::Json,
        None => cfg.format,
    };
    let rows = match sweep::run(&cfg, sweep::thread_count()) {
        Ok(r) => r,
        Err(e @ SweepError::Config(_)) => return fail(exit::USAGE, e),
        Err(e) => return fail(exit::RUNTIME, e),
    };
    let target = out.or_else(|| cfg.output.clone());
    let written = match target {
        Some(p) if p.as_os_str() != "-" => match File::create(&p) {
            Ok(f) => sweep::write(&cfg, &rows, format, BufWriter::new(f)),
            Err(e) => return fail(exit::USAGE, format!("{}: {e}", p.display())),
        },
        _ => sweep::write(&cfg, &rows, format, io::stdout().lock()),
    };
    match written {
        Ok(()) => ExitCode::from(exit::OK),
        Err(e) => fail(exit::USAGE, e),
    }
}

fn ld_cmd(family: &str, theta: f64, model: &str, params: &[String]) -> ExitCode {
    let Some(model) = Model::parse(model) else {
        return fail(exit::USAGE, format!("unknown model `{model}` (expected bvn, ld1, ld2 or sld)"));
    };
    let spec = match FamilySpec::from_pairs(family, params) {
        Ok(s) => s,
        Err(e) => return fail(exit::USAGE, e),
    };
    match ld::run(family, &spec, theta, model) {
        Ok(report) => {
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            print!("{}", report.text);
            ExitCode::from(exit::OK)
        }
        Err(e) => fail(exit::RUNTIME, format!("at theta = {theta}: {e}")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Sweep { config, out, format } => sweep_cmd(config, out, format),
        Command::Verify { suite, seed } => {
            let summary = verify::run(suite, seed);
            let mut stdout = io::stdout().lock();
            let _ = stdout.write_all(summary.text.as_bytes());
            ExitCode::from(if summary.ok() { exit::OK } else { exit::RUNTIME })
        }
        Command::Ld { family, theta, model, params } => ld_cmd(&family, theta, &model, &params),
    }
}
