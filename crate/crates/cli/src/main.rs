//! Command-line front end: simulate / simulate-absolute / reduce / pattern /
//! selfsimilar / sweep, with JSON or CSV output.
//!
//! Exit codes: 0 success, 2 argument validation failure, 3 I/O failure.
//! Degenerate or singular trajectory terminations are data, not errors.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use collapse4::dynamics::{self, CollisionType, Restitution};
use collapse4::pattern::{self, Branch, CollisionWord};
use collapse4::spherical::{self, SphericalConfig};
use collapse4::sweep::{self, SweepConfig, SweepMode};

/// Parses a real given either as a decimal literal or as an exact expression
/// `A`, `A+B*sqrt(C)` or `A-B*sqrt(C)`, so thresholds like `3-2*sqrt(2)` can
/// be entered without rounding by hand.
fn parse_real_expr(s: &str) -> Result<f64, String> {
    let t = s.trim();
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    let (head, sqrt_arg) = t
        .split_once("sqrt(")
        .ok_or_else(|| format!("expected a decimal or A±B*sqrt(C), got {t:?}"))?;
    let c: f64 = sqrt_arg
        .strip_suffix(')')
        .ok_or_else(|| "missing ')' after sqrt argument".to_string())?
        .trim()
        .parse()
        .map_err(|e| format!("bad sqrt argument: {e}"))?;
    if c < 0.0 {
        return Err("sqrt argument must be nonnegative".into());
    }
    let head = head.trim();
    let (a_part, b_part, sign) = match (head.rfind('+'), head.rfind('-')) {
        (Some(i), j) if j.is_none_or(|j| i > j) && i > 0 => (&head[..i], &head[i + 1..], 1.0),
        (_, Some(j)) if j > 0 => (&head[..j], &head[j + 1..], -1.0),
        _ => ("0", head, 1.0),
    };
    let a: f64 = if a_part.trim().is_empty() {
        0.0
    } else {
        a_part
            .trim()
            .parse()
            .map_err(|e| format!("bad constant term: {e}"))?
    };
    let b_part = b_part.trim();
    let b: f64 = if b_part.is_empty() {
        1.0
    } else {
        b_part
            .strip_suffix('*')
            .unwrap_or(b_part)
            .trim()
            .parse()
            .map_err(|e| format!("bad sqrt multiplier: {e}"))?
    };
    Ok(a + sign * b * c.sqrt())
}

fn parse_vec3(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(parse_real_expr)
        .collect::<Result<_, _>>()?;
    <[f64; 3]>::try_from(parts)
        .map_err(|v| format!("expected 3 comma-separated reals, got {}", v.len()))
}

fn parse_vec4(s: &str) -> Result<[f64; 4], String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(parse_real_expr)
        .collect::<Result<_, _>>()?;
    <[f64; 4]>::try_from(parts)
        .map_err(|v| format!("expected 4 comma-separated reals, got {}", v.len()))
}

fn parse_contact(s: &str) -> Result<CollisionType, String> {
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => CollisionType::from_letter(c).ok_or_else(|| "use a, b or c".into()),
        _ => Err("use a, b or c".into()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Destination path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format (sweep defaults to csv, everything else to json).
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Parser, Debug)]
#[command(
    name = "collapse4",
    version,
    about = "Four-particle inelastic collapse toolkit"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Event-driven simulation in relative coordinates (gaps p, relative velocities q).
    Simulate {
        /// Initial gaps, e.g. "1,0,1.4262".
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
        p0: [f64; 3],
        /// Initial relative velocities.
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
        q0: [f64; 3],
        #[arg(long, value_parser = parse_real_expr)]
        r: f64,
        #[arg(long, default_value_t = 1000)]
        max_collisions: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Independent simulation in absolute coordinates (4 positions, 4 velocities).
    SimulateAbsolute {
        #[arg(long, value_parser = parse_vec4, allow_hyphen_values = true)]
        x0: [f64; 4],
        #[arg(long, value_parser = parse_vec4, allow_hyphen_values = true)]
        v0: [f64; 4],
        #[arg(long, value_parser = parse_real_expr)]
        r: f64,
        #[arg(long, default_value_t = 1000)]
        max_collisions: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Iterate the reduced map on {a,b,c} x S^2 from one configuration.
    Reduce {
        #[arg(long, value_parser = parse_real_expr)]
        theta0: f64,
        #[arg(long, value_parser = parse_real_expr)]
        phi0: f64,
        #[arg(long, value_parser = parse_contact)]
        contact: CollisionType,
        #[arg(long, value_parser = parse_real_expr)]
        r: f64,
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
        #[arg(long, default_value_t = 500)]
        keep_last_b: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Self-similar analysis of one collision word at one restitution coefficient.
    Pattern {
        #[arg(long)]
        word: String,
        #[arg(long, value_parser = parse_real_expr)]
        r: f64,
        #[arg(long, default_value = "upper")]
        branch: Branch,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Self-similar analysis swept over an r grid, one JSON line per (r, branch).
    Selfsimilar {
        #[arg(long)]
        word: String,
        #[arg(long, value_parser = parse_real_expr)]
        r_min: f64,
        #[arg(long, value_parser = parse_real_expr)]
        r_max: f64,
        #[arg(long, value_parser = parse_real_expr)]
        r_step: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Reduced-map sweep over (r x initial configurations) with trailing-b recording.
    Sweep {
        #[arg(long, value_parser = parse_real_expr)]
        r_min: f64,
        #[arg(long, value_parser = parse_real_expr)]
        r_max: f64,
        #[arg(long, value_parser = parse_real_expr)]
        r_step: f64,
        #[arg(long, default_value_t = 2)]
        grid_theta: usize,
        #[arg(long, default_value_t = 4)]
        grid_phi: usize,
        #[arg(long, value_parser = parse_contact, default_value = "b")]
        contact0: CollisionType,
        #[arg(long, default_value_t = 10_000)]
        max_collisions: usize,
        #[arg(long, default_value_t = 500)]
        keep_last_b: usize,
        /// Use `count` seeded random initial configurations per r instead of the grid.
        #[arg(long)]
        random: Option<usize>,
        /// Seed for random mode (generator: chacha8).
        #[arg(long)]
        seed: Option<u64>,
        /// Destination for the numerical-break log; stderr-adjacent sibling of --out.
        #[arg(long)]
        singularities_out: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

enum CliError {
    Validation(String),
    Io(io::Error),
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

fn validation(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn write_json_line<T: serde::Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    let line = serde_json::to_string(value).expect("serializable");
    out.write_all(line.as_bytes())?;
    out.write_all(b"\n")?;
    Ok(())
}

fn restitution(r: f64, flag: &str) -> Result<Restitution, CliError> {
    Restitution::new(r).map_err(|e| validation(format!("{flag}: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Simulate {
            p0,
            q0,
            r,
            max_collisions,
            output,
        } => {
            let rest = restitution(r, "--r")?;
            dynamics::RelativeState::initial(p0, q0)
                .map_err(|e| validation(format!("--p0: {e}")))?;
            if output.format == Some(Format::Csv) {
                return Err(validation(
                    "--format: trajectories are emitted as json only",
                ));
            }
            let tr = dynamics::simulate(p0, q0, rest, max_collisions);
            write_json_line(&mut *open_out(&output.out)?, &tr)
        }
        Cmd::SimulateAbsolute {
            x0,
            v0,
            r,
            max_collisions,
            output,
        } => {
            let rest = restitution(r, "--r")?;
            if x0.windows(2).any(|w| w[1] < w[0]) {
                return Err(validation("--x0: positions must be sorted non-decreasing"));
            }
            if output.format == Some(Format::Csv) {
                return Err(validation(
                    "--format: trajectories are emitted as json only",
                ));
            }
            let tr = dynamics::simulate_absolute(x0, v0, rest, max_collisions);
            write_json_line(&mut *open_out(&output.out)?, &tr)
        }
        Cmd::Reduce {
            theta0,
            phi0,
            contact,
            r,
            steps,
            keep_last_b,
            output,
        } => {
            let rest = restitution(r, "--r")?;
            let c0 = SphericalConfig::new(contact, theta0, phi0)
                .map_err(|e| validation(format!("--theta0/--phi0: {e}")))?;
            if output.format == Some(Format::Csv) {
                return Err(validation(
                    "--format: reduced orbits are emitted as json only",
                ));
            }
            let orbit = spherical::iterate(&c0, rest, steps, keep_last_b);
            write_json_line(&mut *open_out(&output.out)?, &orbit)
        }
        Cmd::Pattern {
            word,
            r,
            branch,
            output,
        } => {
            let rest = restitution(r, "--r")?;
            let word = parse_word(&word)?;
            if output.format == Some(Format::Csv) {
                return Err(validation("--format: reports are emitted as json only"));
            }
            let report = pattern::self_similar_datum(&word, rest, branch);
            write_json_line(&mut *open_out(&output.out)?, &report)
        }
        Cmd::Selfsimilar {
            word,
            r_min,
            r_max,
            r_step,
            output,
        } => {
            let word = parse_word(&word)?;
            if !(r_min > 0.0 && r_max < 1.0 && r_min <= r_max) {
                return Err(validation(format!(
                    "--r-min/--r-max: need 0 < r_min <= r_max < 1, got [{r_min}, {r_max}]"
                )));
            }
            if r_step <= 0.0 {
                return Err(validation(format!("--r-step: must be > 0, got {r_step}")));
            }
            if output.format == Some(Format::Csv) {
                return Err(validation(
                    "--format: reports are emitted as json lines only",
                ));
            }
            let mut out = open_out(&output.out)?;
            let n = ((r_max - r_min) / r_step + 1e-9).floor() as usize;
            for i in 0..=n {
                let r = r_min + i as f64 * r_step;
                let rest = restitution(r, "--r-min/--r-step")?;
                for branch in [Branch::Upper, Branch::Middle, Branch::Lower] {
                    let report = pattern::self_similar_datum(&word, rest, branch);
                    if report.lambda.is_none() && branch != Branch::Upper {
                        continue; // branch not real at this r
                    }
                    write_json_line(&mut *out, &report)?;
                }
            }
            Ok(())
        }
        Cmd::Sweep {
            r_min,
            r_max,
            r_step,
            grid_theta,
            grid_phi,
            contact0,
            max_collisions,
            keep_last_b,
            random,
            seed,
            singularities_out,
            output,
        } => {
            let cfg = SweepConfig {
                r_min,
                r_max,
                r_step,
                grid_theta,
                grid_phi,
                contact0,
                max_collisions,
                keep_last_b,
                rng_seed: seed,
                mode: match random {
                    Some(count) => SweepMode::Random { count },
                    None => SweepMode::Grid,
                },
            };
            cfg.validate().map_err(|e| validation(e.to_string()))?;
            let (records, singularities) =
                sweep::run_sweep(&cfg).map_err(|e| validation(e.to_string()))?;
            let fmt = output.format.unwrap_or(Format::Csv);
            {
                let mut out = open_out(&output.out)?;
                match fmt {
                    Format::Csv => sweep::write_records_csv(&records, &mut *out)
                        .map_err(|e| CliError::Io(e.source))?,
                    Format::Json => sweep::write_records_jsonl(&records, &mut *out)
                        .map_err(|e| CliError::Io(e.source))?,
                }
                out.flush()?;
            }
            if let Some(path) = singularities_out {
                let mut out = open_out(&Some(path))?;
                match fmt {
                    Format::Csv => sweep::write_singularities_csv(&singularities, &mut *out)
                        .map_err(|e| CliError::Io(e.source))?,
                    Format::Json => sweep::write_singularities_jsonl(&singularities, &mut *out)
                        .map_err(|e| CliError::Io(e.source))?,
                }
                out.flush()?;
            }
            Ok(())
        }
    }
}

fn parse_word(s: &str) -> Result<CollisionWord, CliError> {
    let word = CollisionWord::parse(s).map_err(|e| validation(format!("--word: {e}")))?;
    Ok(word)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Io(e)) => {
            eprintln!("i/o error: {e}");
            ExitCode::from(3)
        }
    }
}
