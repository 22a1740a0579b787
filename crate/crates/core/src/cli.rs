//! Command-line front end. [`run`] is pure (no process exit, no stdio) so the
//! binary and the golden tests share it.

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::adelic::{adelic_report, gain_at_prime};
use crate::channel::{channel_condition, GaussianChannel, GaussianState};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::ledger::{LogBase, LogLedger};
use crate::linalg::{Mat2, Vec2};
use crate::oracle::{self, WeylSystem};
use crate::padic::{format_rational, Prime};
use crate::sample;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "padic-channels",
    version,
    about = "Exact p-adic lattices, Gaussian channels and entropy gains"
)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Logarithm base for rendered ledgers: e, 2 or 10.
    #[arg(long, global = true, default_value = "e")]
    pub base: LogBase,
    /// Seed for the randomized subcommands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lattice geometry over Q_p^2.
    Lattice {
        #[command(subcommand)]
        cmd: LatticeCmd,
    },
    /// Gaussian channels (K, L).
    Channel {
        #[command(subcommand)]
        cmd: ChannelCmd,
    },
    /// Entropy gain of K at every place and their sum.
    Adelic {
        #[arg(long = "K", allow_hyphen_values = true)]
        k: String,
    },
    /// Finite Weyl-system oracle.
    Oracle {
        #[arg(long)]
        p: u64,
        #[arg(long = "N")]
        n: u32,
        #[arg(long = "max-cases")]
        max_cases: Option<usize>,
    },
    /// Randomized property checks of the exact modules.
    Check {
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

#[derive(Debug, clap::Args)]
pub struct BasisArgs {
    #[arg(long)]
    pub p: u64,
    /// Basis columns as "a,b;c,d".
    #[arg(long, allow_hyphen_values = true)]
    pub basis: String,
}

#[derive(Debug, clap::Args)]
pub struct PairArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
    #[arg(long, allow_hyphen_values = true)]
    pub b: String,
}

#[derive(Debug, Subcommand)]
pub enum LatticeCmd {
    /// Haar measure |L| of the lattice
    Measure(BasisArgs),
    /// Symplectic dual lattice
    Dual(BasisArgs),
    /// Whether the lattice equals its dual
    Selfdual(BasisArgs),
    /// Canonical basis [[p^a,0],[c,p^b]]
    Canon(BasisArgs),
    /// Intersection of two lattices
    Intersect(PairArgs),
    /// Sum of two lattices
    Sum(PairArgs),
}

#[derive(Debug, clap::Args)]
pub struct ChannelArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long = "K", allow_hyphen_values = true)]
    pub k: String,
    /// Noise lattice basis.
    #[arg(long = "L", allow_hyphen_values = true)]
    pub l: Option<String>,
    /// Input state lattice basis (apply).
    #[arg(long, allow_hyphen_values = true)]
    pub input: Option<String>,
    /// Input shift "x,y" (apply).
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum ChannelCmd {
    /// Check |1 - det K|_p |L| <= 1
    Validate(ChannelArgs),
    /// Push a Gaussian state through the channel
    Apply(ChannelArgs),
    /// Entropy gain -v_p(det K) log p
    Gain(ChannelArgs),
    /// Smallest n with gain witnessed by gamma(p^n L)
    Threshold(ChannelArgs),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and executes the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: 1, stdout: String::new(), stderr: text },
            };
        }
    };
    match execute(&cli) {
        Ok((value, code)) => Outcome {
            code,
            stdout: render(&value, cli.format),
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn render(value: &Value, format: Format) -> String {
    match format {
        Format::Json => format!("{}\n", serde_json::to_string(value).expect("serializable")),
        Format::Text => {
            let mut out = String::new();
            if let Value::Object(map) = value {
                for (k, v) in map {
                    match v {
                        Value::String(s) => out.push_str(&format!("{k}: {s}\n")),
                        other => out.push_str(&format!("{k}: {other}\n")),
                    }
                }
            } else {
                out.push_str(&format!("{value}\n"));
            }
            out
        }
    }
}

fn lattice(p: Prime, basis: &str) -> Result<Lattice> {
    Lattice::from_basis(Mat2::parse(basis)?, p)
}

fn execute(cli: &Cli) -> Result<(Value, i32)> {
    match &cli.command {
        Command::Lattice { cmd } => lattice_cmd(cmd).map(|v| (v, 0)),
        Command::Channel { cmd } => channel_cmd(cmd, cli.base).map(|v| (v, 0)),
        Command::Adelic { k } => {
            let report = adelic_report(&Mat2::parse(k)?)?;
            let total = &report.total_prime_gain() + &report.real_gain;
            let mut value = serde_json::to_value(&report).expect("serializable");
            value[format!("real_base_{}", cli.base.key())] = json!(report.real_gain.render(cli.base));
            value["total"] = json!(total.render(cli.base));
            Ok((value, 0))
        }
        Command::Oracle { p, n, max_cases } => {
            let sys = WeylSystem::new(*p, *n)?;
            let report = oracle::run(&sys, *max_cases, cli.seed)?;
            let code = if report.all_pass { 0 } else { 2 };
            Ok((serde_json::to_value(&report).expect("serializable"), code))
        }
        Command::Check { trials } => check(*trials, cli.seed),
    }
}

fn lattice_cmd(cmd: &LatticeCmd) -> Result<Value> {
    let summary = |l: &Lattice| {
        json!({
            "canonical": l.canonical_form().to_string(),
            "measure": format_rational(&l.measure()),
        })
    };
    Ok(match cmd {
        LatticeCmd::Measure(a) => {
            let l = lattice(Prime::new(a.p)?, &a.basis)?;
            json!({ "measure": format_rational(&l.measure()) })
        }
        LatticeCmd::Dual(a) => {
            let l = lattice(Prime::new(a.p)?, &a.basis)?;
            let dual = l.dual();
            json!({
                "canonical": dual.canonical_form().to_string(),
                "measure": format_rational(&dual.measure()),
                "self_dual": dual == l,
            })
        }
        LatticeCmd::Selfdual(a) => {
            let l = lattice(Prime::new(a.p)?, &a.basis)?;
            json!({
                "measure": format_rational(&l.measure()),
                "self_dual": l.is_self_dual(),
            })
        }
        LatticeCmd::Canon(a) => {
            let l = lattice(Prime::new(a.p)?, &a.basis)?;
            let (pa, pb) = l.pivots();
            json!({
                "canonical": l.canonical_form().to_string(),
                "pivots": [pa, pb],
            })
        }
        LatticeCmd::Intersect(a) => {
            let p = Prime::new(a.p)?;
            summary(&lattice(p, &a.a)?.intersect(&lattice(p, &a.b)?)?)
        }
        LatticeCmd::Sum(a) => {
            let p = Prime::new(a.p)?;
            summary(&lattice(p, &a.a)?.sum(&lattice(p, &a.b)?)?)
        }
    })
}

fn require_noise(args: &ChannelArgs, p: Prime) -> Result<Lattice> {
    let basis = args
        .l
        .as_deref()
        .ok_or_else(|| Error::InvalidInput("--L is required".into()))?;
    lattice(p, basis)
}

fn channel_cmd(cmd: &ChannelCmd, base: LogBase) -> Result<Value> {
    let value_key = format!("value_base_{}", base.key());
    Ok(match cmd {
        ChannelCmd::Validate(a) => {
            let p = Prime::new(a.p)?;
            let k = Mat2::parse(&a.k)?;
            let noise = require_noise(a, p)?;
            let lhs = channel_condition(&k, &noise);
            json!({
                "det": format_rational(&k.det()),
                "lhs": format_rational(&lhs),
                "valid": GaussianChannel::new(k, noise).is_ok(),
            })
        }
        ChannelCmd::Apply(a) => {
            let p = Prime::new(a.p)?;
            let channel = GaussianChannel::new(Mat2::parse(&a.k)?, require_noise(a, p)?)?;
            let input_basis = a
                .input
                .as_deref()
                .ok_or_else(|| Error::InvalidInput("--input is required".into()))?;
            let shift = a.alpha.as_deref().map(Vec2::parse).transpose()?.unwrap_or_else(Vec2::zero);
            let input = GaussianState::new(lattice(p, input_basis)?, shift)?;
            let output = channel.apply(&input)?;
            let change = &output.entropy() - &input.entropy();
            json!({
                "output": {
                    "canonical": output.lattice().canonical_form().to_string(),
                    "measure": format_rational(&output.lattice().measure()),
                    "shift": output.shift().to_string(),
                },
                "entropy_in": input.entropy().render(base),
                "entropy_out": output.entropy().render(base),
                "entropy_change": change.render(base),
            })
        }
        ChannelCmd::Gain(a) => {
            let p = Prime::new(a.p)?;
            let k = Mat2::parse(&a.k)?;
            if a.l.is_some() {
                GaussianChannel::new(k.clone(), require_noise(a, p)?)?;
            }
            let exponent = gain_at_prime(&k, p)?;
            let mut v = json!({ "exponent": exponent, "prime": p.get() });
            v[value_key] = json!(LogLedger::prime_power(p, exponent).render(base));
            v
        }
        ChannelCmd::Threshold(a) => {
            let p = Prime::new(a.p)?;
            let channel = GaussianChannel::new(Mat2::parse(&a.k)?, require_noise(a, p)?)?;
            let threshold = channel.threshold();
            let witness = channel.gain_witness(threshold)?;
            if witness != channel.gain() {
                return Err(Error::Invariant(format!(
                    "witness {witness} differs from the gain {}",
                    channel.gain()
                )));
            }
            let mut v = json!({ "threshold": threshold });
            v[value_key] = json!(witness.render(base));
            v
        }
    })
}

/// Randomized checks: duality, symplectic invariance, the entropy-gain
/// witness and the adelic sum. Exit code 2 on any failure.
fn check(trials: usize, seed: u64) -> Result<(Value, i32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let primes: Vec<Prime> = [2, 3, 5, 7, 11].iter().map(|&p| Prime::new(p).unwrap()).collect();
    let mut failures = Vec::new();

    for i in 0..trials {
        let p = primes[i % primes.len()];
        let l = sample::random_lattice(&mut rng, p, 4);
        let d = l.dual();
        if (l.measure() * d.measure()) != num_traits::One::one() || d.dual() != l {
            failures.push(format!("duality: {l}"));
        }
        let s = sample::random_symplectic(&mut rng);
        if l.apply_matrix(&s)?.measure() != l.measure() {
            failures.push(format!("symplectic invariance: {l} under {s}"));
        }

        let channel = sample::random_channel(&mut rng, p);
        let n = channel.threshold();
        if channel.gain_witness(n)? != channel.gain() {
            failures.push(format!("gain witness: K = {}", channel.matrix()));
        }

        let k = sample::random_matrix(&mut rng, 1_000_000);
        if !adelic_report(&k)?.sum_is_zero {
            failures.push(format!("adelic sum: K = {k}"));
        }
    }
    let code = if failures.is_empty() { 0 } else { 2 };
    Ok((
        json!({ "trials": trials, "seed": seed, "failures": failures, "pass": code == 0 }),
        code,
    ))
}
