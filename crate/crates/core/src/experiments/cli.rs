use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use super::{find, registry, run_with, ExperimentReport, Params, RunOptions};
use crate::constants::{decimal15, exact_c_l1, harris_bound, root_sequence, Partition};
use crate::error::{Error, Result};
use crate::optimize::{
    estimate_blocked_norm, estimate_bochnak_ratio, estimate_multilinear_norm, estimate_poly_norm, estimate_ratio,
    OptimConfig,
};
use crate::poly::{random_polynomial, read_polynomial, HomogeneousPolynomial};
use crate::quotient::{build_quotient, verify_transfer_bound};
use crate::spaces::{Exponent, Field, SpaceSpec};

#[derive(Parser, Debug)]
#[command(name = "polarization", version, about = "Polarization constants of polynomials on l_p spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Target {
    Poly,
    Multilinear,
    Blocked,
}

#[derive(clap::Args, Debug)]
struct Optim {
    /// Number of optimizer starts.
    #[arg(long, default_value_t = 200)]
    starts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 500)]
    max_iters: usize,
    /// Run the iterative optimizer even where the spectral oracle applies.
    #[arg(long)]
    no_shortcut: bool,
}

impl Optim {
    fn config(&self) -> OptimConfig {
        OptimConfig {
            starts: self.starts,
            seed: self.seed,
            max_iters: self.max_iters,
            spectral_shortcut: !self.no_shortcut,
            ..OptimConfig::default()
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact c(k, l1^d): fraction, decimal and k-th root. Accepts comma lists.
    ExactC {
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<u32>,
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<u32>,
    },
    /// Harris' mixed polarization bound for block multiplicities.
    Harris {
        #[arg(long, value_delimiter = ',', required = true)]
        parts: Vec<u32>,
    },
    /// k-th roots of c(k, l1^d).
    Roots {
        #[arg(long)]
        d: u32,
        #[arg(long = "k-list", value_delimiter = ',', required = true)]
        k_list: Vec<u32>,
    },
    /// Lower bound for a norm of a polynomial read from a JSON file.
    Estimate {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        p: Exponent,
        /// Field of the space; defaults to the polynomial's field.
        #[arg(long)]
        field: Option<Field>,
        #[arg(long, value_enum, default_value = "poly")]
        target: Target,
        /// Block multiplicities for `--target blocked`.
        #[arg(long, value_delimiter = ',')]
        blocks: Option<Vec<u32>>,
        #[command(flatten)]
        optim: Optim,
    },
    /// Estimated ratio of the multilinear norm to the polynomial norm.
    Ratio {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        p: Exponent,
        #[arg(long)]
        field: Option<Field>,
        /// Exact value (or an upper bound) of the polynomial norm.
        #[arg(long)]
        exact_denominator: Option<f64>,
        #[command(flatten)]
        optim: Optim,
    },
    /// Norm growth of a real polynomial under complexification.
    Bochnak {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        p: Exponent,
        #[command(flatten)]
        optim: Optim,
    },
    /// Builds an eta-net quotient map and audits the transfer bound.
    QuotientDemo {
        #[arg(long)]
        p: Exponent,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        eta: f64,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value = "real")]
        field: Field,
        /// Degree of the random polynomial used in the audit.
        #[arg(long, default_value_t = 2)]
        degree: u32,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Runs a named experiment (or `all`) and checks its claims.
    Verify {
        /// Experiment name, `all`, or `list`.
        name: String,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Overrides the experiment's default seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Experiment parameter as key=value; repeatable.
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        /// Perturbs the expected value of one claim (testing hook).
        #[arg(long, hide = true)]
        inject_failure: Option<usize>,
    },
}

/// Runs the command line and returns the process exit code:
/// 0 on success, 1 when a checked claim fails, 2 on a usage error.
pub fn cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    cli_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// [`cli`] with explicit output streams.
pub fn cli_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let parsed = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(parsed.command, out) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_usage() {
                2
            } else {
                1
            }
        }
    }
}

fn load(path: &PathBuf, field: Option<Field>) -> Result<(HomogeneousPolynomial, Field)> {
    let p = read_polynomial(path)?;
    match (p.field(), field.unwrap_or(p.field())) {
        (Field::Real, Field::Complex) => Ok((p.complexify()?, Field::Complex)),
        (Field::Complex, Field::Real) => Err(Error::invalid(
            "a complex polynomial cannot be maximized over a real space",
        )),
        (_, f) => Ok((p, f)),
    }
}

fn print_json(out: &mut dyn Write, value: &serde_json::Value) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(value)?)?;
    Ok(())
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<bool> {
    match command {
        Command::ExactC { k, d } => {
            writeln!(out, "k\td\texact\tdecimal\troot")?;
            for &kk in &k {
                for &dd in &d {
                    if kk == 0 || dd == 0 {
                        return Err(Error::invalid("k and d must be positive"));
                    }
                    let c = exact_c_l1(kk, dd)?;
                    let (_, root) = root_sequence(dd, &[kk])?[0];
                    writeln!(
                        out,
                        "{kk}\t{dd}\t{}\t{}\t{}",
                        c.fraction_string(),
                        decimal15(c.to_f64()),
                        decimal15(root)
                    )?;
                }
            }
            Ok(true)
        }
        Command::Harris { parts } => {
            let pt = Partition::new(parts)?;
            let h = harris_bound(&pt)?;
            writeln!(out, "{pt}\t{}\t{}", h.fraction_string(), decimal15(h.to_f64()))?;
            Ok(true)
        }
        Command::Roots { d, k_list } => {
            if d == 0 || k_list.contains(&0) {
                return Err(Error::invalid("k and d must be positive"));
            }
            writeln!(out, "k\troot")?;
            for (k, r) in root_sequence(d, &k_list)? {
                writeln!(out, "{k}\t{}", decimal15(r))?;
            }
            Ok(true)
        }
        Command::Estimate {
            poly,
            p,
            field,
            target,
            blocks,
            optim,
        } => {
            let (poly, field) = load(&poly, field)?;
            let spec = SpaceSpec::new(poly.dim(), p, field)?;
            let cfg = optim.config();
            let est = match (target, blocks) {
                (Target::Blocked, Some(b)) => estimate_blocked_norm(&poly, &Partition::new(b)?, &spec, &cfg)?,
                (Target::Blocked, None) => return Err(Error::invalid("--target blocked needs --blocks")),
                (_, Some(_)) => return Err(Error::invalid("--blocks only applies to --target blocked")),
                (Target::Poly, None) => estimate_poly_norm(&poly, &spec, &cfg)?,
                (Target::Multilinear, None) => estimate_multilinear_norm(&poly, &spec, &cfg)?,
            };
            print_json(out, &est.to_json())?;
            Ok(true)
        }
        Command::Ratio {
            poly,
            p,
            field,
            exact_denominator,
            optim,
        } => {
            let (poly, field) = load(&poly, field)?;
            let spec = SpaceSpec::new(poly.dim(), p, field)?;
            let report = estimate_ratio(&poly, &spec, &optim.config(), exact_denominator)?;
            print_json(out, &report.to_json())?;
            Ok(true)
        }
        Command::Bochnak { poly, p, optim } => {
            let poly = read_polynomial(&poly)?;
            let spec = SpaceSpec::real(poly.dim(), p)?;
            let report = estimate_bochnak_ratio(&poly, &spec, &optim.config())?;
            print_json(out, &report.to_json())?;
            Ok(true)
        }
        Command::QuotientDemo {
            p,
            dim,
            eta,
            epsilon,
            field,
            degree,
            samples,
            seed,
        } => {
            let spec = SpaceSpec::new(dim, p, field)?;
            let q = build_quotient(&spec, eta, epsilon, seed)?;
            let poly = random_polynomial(degree, dim, field, seed)?;
            let cfg = OptimConfig {
                starts: 32,
                ..OptimConfig::with_seed(seed)
            };
            let report = verify_transfer_bound(&poly, &q, &cfg, samples)?;
            print_json(
                out,
                &serde_json::json!({
                    "d": report.d,
                    "eta": report.eta,
                    "epsilon": report.epsilon,
                    "max_l1_ratio": report.max_l1_ratio,
                    "max_residual": report.max_residual,
                    "transfer_slack": report.transfer_slack,
                    "violations": report.violations,
                }),
            )?;
            Ok(report.passed())
        }
        Command::Verify {
            name,
            json,
            csv,
            seed,
            params,
            inject_failure,
        } => verify(out, &name, json, csv, seed, &params, inject_failure),
    }
}

fn verify(
    out: &mut dyn Write,
    name: &str,
    json: Option<PathBuf>,
    csv: Option<PathBuf>,
    seed: Option<u64>,
    params: &[String],
    inject_failure: Option<usize>,
) -> Result<bool> {
    if name == "list" {
        for e in registry() {
            writeln!(out, "{:<22} {}", e.name, e.summary)?;
        }
        return Ok(true);
    }
    let names: Vec<&str> = if name == "all" {
        registry().iter().map(|e| e.name).collect()
    } else {
        vec![find(name)?.name]
    };
    if names.len() > 1 && !params.is_empty() {
        return Err(Error::invalid("--param needs a single experiment name"));
    }
    let params = Params::parse_pairs(params.iter().map(String::as_str))?;
    let opts = RunOptions { seed, inject_failure };
    let mut reports: Vec<ExperimentReport> = Vec::new();
    for n in names {
        let report = run_with(n, params.clone(), &opts)?;
        writeln!(out, "== {} (seed {}, {:.2}s)", report.name, report.seed, report.wall_time)?;
        for c in &report.claims {
            writeln!(out, "{c}")?;
        }
        let failed = report.failures().count();
        writeln!(
            out,
            "{}: {}/{} claims pass",
            if failed == 0 { "PASS" } else { "FAIL" },
            report.claims.len() - failed,
            report.claims.len()
        )?;
        reports.push(report);
    }
    if let Some(path) = json {
        if let [single] = reports.as_slice() {
            single.save_json(&path)?;
        } else {
            std::fs::write(&path, serde_json::to_string_pretty(&reports)? + "\n")?;
        }
    }
    if let Some(path) = csv {
        let mut w = std::fs::File::create(&path)?;
        let mut text = String::new();
        for (i, r) in reports.iter().enumerate() {
            let body = r.to_csv()?;
            // one header for the whole file
            text.push_str(if i == 0 { &body } else { body.split_once('\n').map_or("", |x| x.1) });
        }
        w.write_all(text.as_bytes())?;
    }
    Ok(reports.iter().all(ExperimentReport::passed))
}
