//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 malformed model
//! file or invalid options, 3 a precondition of the requested operation
//! does not hold.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model_file::{self, Model};
use crate::product::verify_product;
use crate::rational::{self, Prob};
use crate::report::Report;
use crate::trajectory::{verify_chain, ChainModel, Cylinder, Prefix};

#[derive(Debug, Parser)]
#[command(name = "markov-traj", about = "Exact trajectory laws of finite Markov chains", version)]
pub struct Cli {
    #[command(subcommand)]
    pub verb: Verb,
    /// Model file (JSON).
    #[arg(long, global = true)]
    pub model: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 10_000)]
    pub samples: usize,
    /// Start depth `a`.
    #[arg(long, global = true, default_value_t = 0)]
    pub from: usize,
    /// Target depth `b`.
    #[arg(long, global = true)]
    pub at: Option<usize>,
    /// Start prefix, labels joined by `|`.
    #[arg(long, global = true)]
    pub point: Option<String>,
    /// Positive rational `p/q`.
    #[arg(long, global = true)]
    pub eps: Option<String>,
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// Cylinder as comma-separated prefix patterns, `*` matching any state,
    /// e.g. `S|*|R,R|R|R`. Repeat for a nested family.
    #[arg(long = "cyl", global = true)]
    pub cylinders: Vec<String>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Verb {
    /// Check that the model file is well formed.
    Validate,
    /// Law of the prefix up to `--at` started from `--point` at `--from`.
    Marginal,
    /// List the base of `--cyl` described at `--depth`.
    Cylinder,
    /// Content of `--cyl` from `--point`.
    Content,
    /// Sample trajectories and compare frequencies with exact marginals.
    Sample,
    /// Find a trajectory prefix inside a nested family of cylinders.
    Witness,
    /// Conditional expectation of the indicator of `--cyl` given depth `--at`.
    Condexp,
    /// Run every identity check on the model.
    Verify,
}

/// Exit status with what goes to stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let mut out = String::new();
    match execute(&cli, &mut out) {
        Ok(code) => Outcome { code, stdout: out, stderr: String::new() },
        Err(e) => Outcome {
            code: exit_code(&e),
            stdout: out,
            stderr: format!("error: {e}\n"),
        },
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Model(_) | Error::Domain(_) => 2,
        Error::Precondition(_) => 3,
        Error::Invariant(_) => 1,
    }
}

fn usage(msg: &str) -> Error {
    Error::Domain(msg.to_string())
}

fn execute(cli: &Cli, out: &mut String) -> Result<i32> {
    let path = cli.model.as_ref().ok_or_else(|| usage("--model PATH is required"))?;
    let model = model_file::load(path)?;
    let chain = model.chain();
    match cli.verb {
        Verb::Validate => {
            writeln!(out, "VALID {chain}").unwrap();
            if let Model::Product(_) = model {
                writeln!(out, "product model with constant step kernels").unwrap();
            }
            Ok(0)
        }
        Verb::Marginal => {
            let x = start_point(cli, chain)?;
            let b = cli.at.unwrap_or(chain.max_depth());
            let law = chain.traj_marginal(cli.from, &x, b)?;
            writeln!(
                out,
                "marginal from {} (depth {}) at depth {b}",
                chain.prefix_label(&x),
                cli.from
            )
            .unwrap();
            for (i, w) in law.support() {
                writeln!(out, "{} {}", law.space().label(*i), rational::format(w)).unwrap();
            }
            Ok(0)
        }
        Verb::Cylinder => {
            let cyl = one_cylinder(cli, chain)?;
            let m = cli.depth.unwrap_or(cyl.depth());
            let lifted = chain.lift_cylinder(&cyl, m)?;
            writeln!(out, "cylinder at depth {m}: {} prefixes", lifted.base().len()).unwrap();
            for &i in lifted.base() {
                writeln!(out, "{}", chain.prefix_label(&chain.prefix_at(m, i))).unwrap();
            }
            Ok(0)
        }
        Verb::Content => {
            let x = start_point(cli, chain)?;
            let cyl = one_cylinder(cli, chain)?;
            let c = chain.cylinder_content(cli.from, &x, &cyl)?;
            writeln!(out, "content {}", rational::format(&c)).unwrap();
            Ok(0)
        }
        Verb::Sample => sample(cli, chain, out),
        Verb::Witness => {
            let x = start_point(cli, chain)?;
            let family = all_cylinders(cli, chain)?;
            let eps_text = cli.eps.as_deref().ok_or_else(|| usage("--eps is required"))?;
            let eps = rational::parse(eps_text)?;
            let w = chain.extract_witness(cli.from, &x, &family, &eps)?;
            writeln!(out, "witness {}", chain.prefix_label(&w)).unwrap();
            Ok(0)
        }
        Verb::Condexp => {
            let u = start_point(cli, chain)?;
            let b = cli.at.ok_or_else(|| usage("--at is required"))?;
            let cyl = one_cylinder(cli, chain)?;
            let f = indicator(chain, &cyl)?;
            let g = chain.cond_exp(cli.from, &u, b, &f)?;
            for (p, v) in g.iter().enumerate() {
                writeln!(out, "{} {}", chain.prefix_label(&chain.prefix_at(b, p)), rational::format(v))
                    .unwrap();
            }
            let check = chain.check_cond_exp(cli.from, &u, b, &f)?;
            writeln!(out, "{check}").unwrap();
            Ok(if check.pass { 0 } else { 1 })
        }
        Verb::Verify => {
            let report: Report = match &model {
                Model::Chain(c) => verify_chain(c, cli.seed)?,
                Model::Product(p) => verify_product(p, cli.seed)?,
            };
            write!(out, "{report}").unwrap();
            Ok(if report.all_pass() { 0 } else { 1 })
        }
    }
}

fn start_point(cli: &Cli, chain: &ChainModel) -> Result<Prefix> {
    let text = cli.point.as_deref().ok_or_else(|| usage("--point is required"))?;
    let x = chain.prefix_from_labels(text)?;
    if x.depth() != cli.from {
        return Err(usage(&format!(
            "--point {text:?} has depth {}, but --from is {}",
            x.depth(),
            cli.from
        )));
    }
    Ok(x)
}

fn all_cylinders(cli: &Cli, chain: &ChainModel) -> Result<Vec<Cylinder>> {
    if cli.cylinders.is_empty() {
        return Err(usage("--cyl is required"));
    }
    cli.cylinders
        .iter()
        .map(|c| chain.cylinder_from_patterns(c))
        .collect()
}

fn one_cylinder(cli: &Cli, chain: &ChainModel) -> Result<Cylinder> {
    let mut all = all_cylinders(cli, chain)?;
    if all.len() != 1 {
        return Err(usage("exactly one --cyl is expected"));
    }
    Ok(all.remove(0))
}

fn indicator(chain: &ChainModel, cyl: &Cylinder) -> Result<Vec<Prob>> {
    let top = chain.max_depth();
    let lifted = chain.lift_cylinder(cyl, top)?;
    let card = chain.prefix_space(top)?.card();
    Ok((0..card)
        .map(|i| if lifted.base().contains(&i) { rational::one() } else { rational::zero() })
        .collect())
}

fn sample(cli: &Cli, chain: &ChainModel, out: &mut String) -> Result<i32> {
    let x = start_point(cli, chain)?;
    let a = cli.from;
    let depth = cli.depth.unwrap_or(chain.max_depth());
    if cli.samples == 0 {
        return Err(usage("--samples must be positive"));
    }
    let cylinder = match cli.cylinders.len() {
        0 => None,
        _ => Some(one_cylinder(cli, chain)?),
    };
    let law = chain.traj_marginal(a, &x, depth)?;
    let space = law.space().clone();

    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let mut counts: Vec<Vec<usize>> = chain.spaces()[..=depth].iter().map(|s| vec![0; s.card()]).collect();
    let mut in_cylinder = 0usize;
    let lifted = match &cylinder {
        Some(c) if c.depth() <= depth => Some(chain.lift_cylinder(c, depth)?),
        Some(_) => return Err(usage("--cyl is deeper than the sampling depth")),
        None => None,
    };
    for _ in 0..cli.samples {
        let y = chain.sample_trajectory(a, &x, depth, &mut rng)?;
        for (k, &s) in y.coords().iter().enumerate() {
            counts[k][s] += 1;
        }
        if let Some(c) = &lifted {
            if c.base().contains(&chain.prefix_index(&y)?) {
                in_cylinder += 1;
            }
        }
    }

    let n = cli.samples;
    writeln!(
        out,
        "sampled {n} trajectories from {} (depth {a}) to depth {depth}, seed {}",
        chain.prefix_label(&x),
        cli.seed
    )
    .unwrap();
    for (k, row) in counts.iter().enumerate().skip(a + 1) {
        for (s, &count) in row.iter().enumerate() {
            let exact = law.mass_where(|p| space.decode(p)[k] == s);
            writeln!(
                out,
                "freq x{k}={} {count}/{n} {:.4} exact {}",
                chain.space(k).label(s),
                count as f64 / n as f64,
                rational::format(&exact)
            )
            .unwrap();
        }
    }
    if let Some(c) = &lifted {
        let exact = chain.cylinder_content(a, &x, c)?;
        writeln!(
            out,
            "freq cylinder {in_cylinder}/{n} {:.4} exact {} ({:.4})",
            in_cylinder as f64 / n as f64,
            rational::format(&exact),
            exact.to_f64().unwrap_or(f64::NAN)
        )
        .unwrap();
    }
    Ok(0)
}
