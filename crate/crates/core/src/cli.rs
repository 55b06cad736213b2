//! Command-line interface.
//!
//! Exit codes: 0 success, 1 usage or precondition error, 2 numerical
//! failure or inconclusive result, 3 I/O error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex;

use crate::blaschke::{BlaschkeClass, HyperbolicStepKind, UnicriticalBlaschke};
use crate::ellipticity::{classify_unicritical_with_tol, s_zero, S_ZERO_TOL};
use crate::error::{Error, Result};
use crate::format::{complex17, sig17};
use crate::julia::{
    backward_orbit, hyperbolic_step_kind_of, julia_type_of, DEFAULT_COUNT, DEFAULT_TRANSIENT,
};
use crate::normalization::{normalize, FiniteBlaschke};
use crate::render::{boundary_curve, render_julia_circle, render_parameter_plane, Region};
use crate::selfcheck::{self, Level};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Default parabolic band for `classify`: decimal input typed on a command
/// line rarely carries more than nine or ten digits.
pub const CLI_CLASSIFY_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "unicritical",
    version,
    about = "Unicritical Blaschke products ((z - w)/(1 - conj(w) z))^n of the unit disk"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify B_w and print one key=value per line.
    Classify {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        param: ParamArgs,
        /// Width of the parabolic band |s - s0| <= tol.
        #[arg(long, default_value_t = CLI_CLASSIFY_TOL)]
        tol: f64,
    },
    /// Write the threshold curve s0(psi) as CSV.
    Boundary {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        angles: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Render the parameter plane as a PPM image.
    RenderParam {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 512)]
        width: usize,
        #[arg(long, default_value_t = 512)]
        height: usize,
        #[arg(long, value_enum, default_value_t = RegionArg::FullDisk)]
        region: RegionArg,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads; defaults to the number of CPUs.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Sample the Julia set by inverse iteration; write a PPM and a CSV.
    RenderJulia {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        param: ParamArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_COUNT)]
        count: usize,
        #[arg(long, default_value_t = DEFAULT_TRANSIENT)]
        transient: usize,
        #[arg(long, default_value_t = 512)]
        width: usize,
        #[arg(long)]
        out_image: PathBuf,
        #[arg(long)]
        out_csv: PathBuf,
    },
    /// Normalize a finite Blaschke product read from a file.
    Normalize { spec_path: PathBuf },
    /// Run the invariant checks of every module.
    Selfcheck {
        #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
        level: LevelArg,
    },
}

/// Either `--s` and `--psi` (radians) or `--re` and `--im`.
#[derive(Debug, Args)]
#[group(required = true, multiple = true)]
struct ParamArgs {
    #[arg(long, allow_negative_numbers = true, requires = "psi", conflicts_with_all = ["re", "im"])]
    s: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires = "s")]
    psi: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires = "im", conflicts_with_all = ["s", "psi"])]
    re: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires = "re")]
    im: Option<f64>,
}

impl ParamArgs {
    fn blaschke(&self, n: u32) -> Result<UnicriticalBlaschke<f64>> {
        match (self.s, self.psi, self.re, self.im) {
            (Some(s), Some(psi), None, None) => UnicriticalBlaschke::from_polar(n, s, psi),
            (None, None, Some(re), Some(im)) => UnicriticalBlaschke::new(n, Complex::new(re, im)),
            _ => Err(Error::Precondition(
                "give either --s and --psi or --re and --im".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RegionArg {
    Sector,
    FullDisk,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

/// Parses `argv` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::Precondition(_) => EXIT_USAGE,
        Error::Numeric(_) | Error::Inconclusive(_) => EXIT_NUMERIC,
        Error::Io { .. } => EXIT_IO,
    }
}

fn io_error(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Prints a stdout line; a closed pipe is an I/O error.
macro_rules! emit {
    ($out:expr, $($arg:tt)*) => {
        writeln!($out, $($arg)*).map_err(|e| io_error(Path::new("<stdout>"), e))?
    };
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Classify { n, param, tol } => {
            let b = param.blaschke(n)?;
            classify(&b, tol, out)?;
        }
        Command::Boundary {
            n,
            angles,
            out: path,
        } => {
            boundary_curve(n, angles)?.write_csv(&path)?;
        }
        Command::RenderParam {
            n,
            width,
            height,
            region,
            out: path,
            workers,
        } => {
            let region = match region {
                RegionArg::Sector => Region::Sector,
                RegionArg::FullDisk => Region::FullDisk,
            };
            render_parameter_plane(n, width, height, region, workers)?.write_ppm(&path)?;
        }
        Command::RenderJulia {
            n,
            param,
            seed,
            count,
            transient,
            width,
            out_image,
            out_csv,
        } => {
            let b = param.blaschke(n)?;
            let sample = backward_orbit(&b, seed, transient, count)?;
            render_julia_circle(&b, &sample, width)?.write_ppm(&out_image)?;
            sample.write_csv(&out_csv)?;
        }
        Command::Normalize { spec_path } => {
            let text = std::fs::read_to_string(&spec_path).map_err(|e| io_error(&spec_path, e))?;
            let f = parse_normalize_input(&text)?;
            let r = normalize(&f)?;
            emit!(out, "w {} {}", sig17(r.w.re), sig17(r.w.im));
            emit!(out, "residual {}", sig17(r.residual));
        }
        Command::Selfcheck { level } => {
            let level = match level {
                LevelArg::Quick => Level::Quick,
                LevelArg::Full => Level::Full,
            };
            let report = selfcheck::run(level);
            for line in report.lines() {
                emit!(out, "{line}");
            }
            if !report.all_passed() {
                let _ = writeln!(
                    err,
                    "{} of {} checks failed",
                    report.failures(),
                    report.len()
                );
                return Ok(EXIT_NUMERIC);
            }
        }
    }
    Ok(EXIT_OK)
}

/// `+0` for a signed zero, so that printed values never read `-0`.
fn unsigned_zero(x: f64) -> f64 {
    x + 0.0
}

fn classify(b: &UnicriticalBlaschke<f64>, tol: f64, out: &mut dyn Write) -> Result<()> {
    let class = classify_unicritical_with_tol(b.n(), b.w(), tol)?;
    let dw = class.dw_point();
    let dw = Complex::new(unsigned_zero(dw.re), unsigned_zero(dw.im));
    let multiplier = match class {
        BlaschkeClass::Elliptic { multiplier, .. } => {
            let m = Complex::new(unsigned_zero(multiplier.re), unsigned_zero(multiplier.im));
            if m.im == 0.0 {
                sig17(m.re)
            } else {
                complex17(m)
            }
        }
        BlaschkeClass::Parabolic { .. } => "1".to_string(),
        BlaschkeClass::Hyperbolic { multiplier, .. } => sig17(multiplier),
    };
    let s0 = match s_zero(b.n(), b.psi(), S_ZERO_TOL) {
        Ok(ray) => ray.s0().unwrap_or(f64::NAN),
        Err(Error::Numeric(_)) => f64::NAN,
        Err(e) => return Err(e),
    };
    emit!(out, "class={}", class.name());
    emit!(out, "dw={}", complex17(dw));
    emit!(out, "multiplier={multiplier}");
    emit!(out, "s0={}", sig17(s0));
    emit!(out, "julia={}", julia_type_of(b, &class)?.name());
    if class.is_parabolic() {
        let step = match hyperbolic_step_kind_of(b, &class)? {
            HyperbolicStepKind::ZeroStep => "zero",
            HyperbolicStepKind::PositiveStep => "positive",
        };
        emit!(out, "step={step}");
    }
    Ok(())
}

/// Parses `theta <radians>`, `n <int>` and `n` lines `zero <re> <im>`.
/// Blank lines and lines starting with `#` are skipped.
pub fn parse_normalize_input(text: &str) -> Result<FiniteBlaschke<f64>> {
    let bad = |msg: String| Error::Precondition(format!("normalize input: {msg}"));
    let mut theta = None;
    let mut n = None;
    let mut zeros = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| bad(format!("line {}: `{s}` is not a number", i + 1)))
        };
        match fields.as_slice() {
            ["theta", v] if theta.is_none() => theta = Some(num(v)?),
            ["n", v] if n.is_none() => {
                n = Some(
                    v.parse::<usize>()
                        .map_err(|_| bad(format!("line {}: `{v}` is not a degree", i + 1)))?,
                )
            }
            ["zero", re, im] => zeros.push(Complex::new(num(re)?, num(im)?)),
            _ => return Err(bad(format!("line {}: unexpected `{line}`", i + 1))),
        }
    }
    let theta = theta.ok_or_else(|| bad("missing `theta` line".into()))?;
    let n = n.ok_or_else(|| bad("missing `n` line".into()))?;
    if zeros.len() != n {
        return Err(bad(format!("expected {n} zeros, found {}", zeros.len())));
    }
    FiniteBlaschke::new(theta, zeros)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("unicritical").chain(args.iter().copied());
        let code = run_with(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn classify_origin() {
        let (code, out, _) = call(&["classify", "--n", "2", "--re", "0", "--im", "0"]);
        assert_eq!(code, 0);
        assert!(out.contains("class=elliptic\n"));
        assert!(out.contains("dw=0+0i\n"));
        assert!(out.contains("multiplier=0\n"));
        assert!(out.contains("julia=full_circle\n"));
        assert!(!out.contains("step="));
    }

    #[test]
    fn classify_hyperbolic_negative_input() {
        let (code, out, _) = call(&["classify", "--n", "2", "--re", "-0.5", "--im", "0"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("class=hyperbolic\n"));
        assert!(out.contains("dw=1+0i\n"));
        assert!(out.contains("julia=cantor\n"));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&["classify", "--n", "2"]).0, EXIT_USAGE);
        assert_eq!(call(&["classify", "--n", "2", "--s", "0.1"]).0, EXIT_USAGE);
        assert_eq!(
            call(&["classify", "--n", "2", "--s", "0.1", "--psi", "0", "--re", "0"]).0,
            EXIT_USAGE
        );
        assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
        let (code, _, err) = call(&["classify", "--n", "2", "--re", "1.5", "--im", "0"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("error"));
        assert_eq!(call(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn io_errors() {
        let (code, _, _) = call(&[
            "boundary",
            "--n",
            "2",
            "--angles",
            "4",
            "--out",
            "/nonexistent/dir/b.csv",
        ]);
        assert_eq!(code, EXIT_IO);
        let (code, _, _) = call(&["normalize", "/nonexistent/product.txt"]);
        assert_eq!(code, EXIT_IO);
    }

    #[test]
    fn normalize_input_parsing() {
        let f = parse_normalize_input("theta 0.5\nn 2\nzero 0.1 0\nzero 0.1 0\n").unwrap();
        assert_eq!(f.degree(), 2);
        assert!(parse_normalize_input("theta 0\nn 3\nzero 0 0\n").is_err());
        assert!(parse_normalize_input("n 2\nzero 0 0\nzero 0 0\n").is_err());
        assert!(parse_normalize_input("theta x\nn 2\n").is_err());
    }
}
