//! Command-line front end for `ckder-core`: runs the verification battery,
//! prints dimension tables and exports structure constants as JSON.

pub mod battery;
pub mod export;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub use battery::{run_battery, GROUPS};
pub use export::AlgebraName;
pub use report::{CheckRecord, Status, VerificationReport};

pub const DEFAULT_MAX_P: u32 = 13;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid prime: {0}")]
    InvalidPrime(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] ckder_core::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot write {0}: {1}")]
    Io(String, std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::InvalidPrime(_) | CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "ckder", version, about = "Derivations of Cheng-Kac Jordan superalgebras over finite fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the verification battery.
    Verify {
        #[arg(long)]
        p: i64,
        /// Comma-separated groups: all, jordan, props, dims, s4, coord, tkk.
        #[arg(long, value_delimiter = ',', default_value = "all")]
        checks: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the dimension table.
    Dims {
        #[arg(long)]
        p: i64,
    },
    /// Write structure constants as JSON.
    Export {
        #[arg(long)]
        p: i64,
        #[arg(long, value_enum)]
        algebra: AlgebraName,
        #[arg(long)]
        out: PathBuf,
    },
}

/// The prime bound, from `CKDER_MAX_P` when set.
pub fn max_p() -> Result<u32, CliError> {
    match std::env::var("CKDER_MAX_P") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("CKDER_MAX_P must be a positive integer, got '{s}'"))),
        Err(_) => Ok(DEFAULT_MAX_P),
    }
}

pub fn validate_p(p: i64, max: u32) -> Result<u32, CliError> {
    if p < 3 || p % 2 == 0 || !ckder_core::field::is_prime(p as u64) {
        return Err(CliError::InvalidPrime(format!("{p} is not an odd prime")));
    }
    if p > max as i64 {
        return Err(CliError::InvalidPrime(format!("{p} exceeds the bound {max} (set CKDER_MAX_P to raise it)")));
    }
    Ok(p as u32)
}

fn dims_text(p: u32) -> Result<String, CliError> {
    let ctx = battery::Context::new(p)?;
    let t = battery::dims_table(&ctx).map_err(ckder_core::Error::Verification)?;
    let get = |k: &str| t.get(k).copied().unwrap_or(0);
    let mut s = format!("p = {p}  field {}\n", battery::field_name(ctx.base));
    let mut row = |name: &str, v: String| s.push_str(&format!("{name:<28}{v}\n"));
    row("dim Z", get("Z_dim").to_string());
    row("dim K", get("K_dim").to_string());
    row("dim J", get("J_dim").to_string());
    for (label, key) in [("Der(K)", "der_K"), ("Inder(K)", "inder_K"), ("Der(J)", "der_J"), ("Inder(J)", "inder_J")] {
        row(
            &format!("{label} (even, odd)"),
            format!("({}, {})  total {}", get(&format!("{key}_even")), get(&format!("{key}_odd")), get(&format!("{key}_dim"))),
        );
    }
    for tag in ["00", "10", "01", "11"] {
        let label = format!("[{},{}]", &tag[..1], &tag[1..]);
        row(
            &format!("Der(J)^{label}"),
            format!("({}, {})", get(&format!("der_J_{tag}_even")), get(&format!("der_J_{tag}_odd"))),
        );
        row(
            &format!("Inder(J)^{label}"),
            format!("({}, {})", get(&format!("inder_J_{tag}_even")), get(&format!("inder_J_{tag}_odd"))),
        );
    }
    row("dim bar Der(K)", get("bar_der_K_dim").to_string());
    row("dim T(K)", get("T_K_dim").to_string());
    row("dim T(K, bar Der(K))", get("T_K_bar_der_dim").to_string());
    row(
        "dim K(J) (even, odd)",
        format!("({}, {})  total {}", get("K_J_even"), get("K_J_odd"), get("K_J_dim")),
    );
    Ok(s)
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let max = max_p()?;
    match cli.command {
        Command::Verify { p, checks, format } => {
            let p = validate_p(p, max)?;
            let groups = battery::select(&checks).map_err(CliError::Usage)?;
            let report = run_battery(p, &groups)?;
            let text = match format {
                Format::Json => report.to_json(),
                Format::Text => report.to_text(),
            };
            out.write_all(text.as_bytes()).map_err(|e| CliError::Io("stdout".into(), e))?;
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Dims { p } => {
            let p = validate_p(p, max)?;
            out.write_all(dims_text(p)?.as_bytes()).map_err(|e| CliError::Io("stdout".into(), e))?;
            Ok(0)
        }
        Command::Export { p, algebra, out: path } => {
            let p = validate_p(p, max)?;
            export::export_to(p, algebra, &path)?;
            Ok(0)
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "ckder: {e}");
            e.exit_code()
        }
    }
}
