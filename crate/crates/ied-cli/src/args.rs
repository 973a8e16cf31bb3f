//! Command-line surface: subcommands, shared flag groups, and the builders
//! that turn flag groups into library specs.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use ied::distributions::DistributionSpec;
use ied::sfpe::CoeffPairSpec;
use ied::{IedError, RngStream};

use crate::output::{CliError, CliResult};

#[derive(Parser)]
#[command(
    name = "ied",
    version,
    about = "Inverse-exponential-decay left tails: sampling, estimation, \
             ARMA and fixed-point simulation, envelope diagnostics, and \
             experiment presets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Draw i.i.d. samples and write an `index,value` CSV
    Sample(SampleArgs),
    /// Fit (rho, lambda) from the deep-left empirical CDF
    FitLeft(FitLeftArgs),
    /// Fit (rho, lambda) from the empirical Laplace transform
    FitLaplace(FitLaplaceArgs),
    /// Hill estimate of the right-tail index
    FitRight(FitRightArgs),
    /// ARMA(p,q): psi expansion, limit parameters, simulation
    Arma {
        #[command(subcommand)]
        cmd: ArmaCmd,
    },
    /// The stochastic fixed point equation X = AX + B
    Sfpe {
        #[command(subcommand)]
        cmd: SfpeCmd,
    },
    /// Lower-envelope statistic of a simulated chain
    Envelope(EnvelopeArgs),
    /// The dependent Brownian coefficient pair (A, B)
    Fv {
        #[command(subcommand)]
        cmd: FvCmd,
    },
    /// Run an experiment preset and write CSVs plus a run manifest
    Experiment(ExperimentArgs),
}

/// Flags selecting one distribution; which parameter flags are required
/// depends on `--dist`.
#[derive(Args, Clone, Default)]
pub struct DistArgs {
    /// One of: inverse-gamma, reciprocal-exponential, reciprocal-abs-normal,
    /// counterexample-b, half-cauchy-scaled, constant
    #[arg(long, global = false)]
    pub dist: Option<String>,
    /// Shape (inverse-gamma)
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Rate (inverse-gamma)
    #[arg(long)]
    pub beta: Option<f64>,
    /// Exponential rate (reciprocal-exponential)
    #[arg(long)]
    pub rate: Option<f64>,
    /// Upper cap (reciprocal-exponential); omit for no cap
    #[arg(long)]
    pub cap: Option<f64>,
    /// Normal location (reciprocal-abs-normal)
    #[arg(long)]
    pub mu: Option<f64>,
    /// Normal scale (reciprocal-abs-normal)
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Family index i (counterexample-b)
    #[arg(long)]
    pub index: Option<u32>,
    /// Scale constant c (counterexample-b)
    #[arg(long)]
    pub c: Option<f64>,
    /// Scale (half-cauchy-scaled)
    #[arg(long)]
    pub scale: Option<f64>,
    /// Point mass location (constant)
    #[arg(long)]
    pub value: Option<f64>,
}

impl DistArgs {
    pub fn build(&self) -> CliResult<DistributionSpec> {
        let tag = self
            .dist
            .as_deref()
            .ok_or_else(|| CliError::Config("--dist is required".into()))?;
        self.build_tagged(tag)
    }

    fn build_tagged(&self, tag: &str) -> CliResult<DistributionSpec> {
        fn need(v: Option<f64>, flag: &str, tag: &str) -> CliResult<f64> {
            v.ok_or_else(|| {
                CliError::Config(format!("--{flag} is required for --dist {tag}"))
            })
        }
        let spec = match tag {
            "inverse-gamma" => DistributionSpec::InverseGamma {
                alpha: need(self.alpha, "alpha", tag)?,
                beta: need(self.beta, "beta", tag)?,
            },
            "reciprocal-exponential" => DistributionSpec::ReciprocalExponential {
                rate: need(self.rate, "rate", tag)?,
                cap: self.cap,
            },
            "reciprocal-abs-normal" => DistributionSpec::ReciprocalAbsNormal {
                mu: need(self.mu, "mu", tag)?,
                sigma: need(self.sigma, "sigma", tag)?,
            },
            "counterexample-b" => DistributionSpec::CounterexampleB {
                index: self.index.ok_or_else(|| {
                    CliError::Config("--index is required for --dist counterexample-b".into())
                })?,
                c: need(self.c, "c", tag)?,
            },
            "half-cauchy-scaled" => DistributionSpec::HalfCauchyScaled {
                scale: need(self.scale, "scale", tag)?,
            },
            "constant" => DistributionSpec::Constant {
                value: need(self.value, "value", tag)?,
            },
            other => {
                return Err(IedError::Argument(format!("unknown distribution '{other}'")).into())
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Sample source for the fit commands: a CSV file or an inline distribution.
#[derive(Args, Clone)]
pub struct InputArgs {
    /// CSV of samples (`index,value` or a single value column)
    #[arg(long, conflicts_with = "dist")]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub dist: DistArgs,
    /// Number of draws when sampling inline
    #[arg(long)]
    pub n: Option<u64>,
    /// RNG seed for inline sampling
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// RNG stream id for inline sampling
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
}

impl InputArgs {
    pub fn samples(&self) -> CliResult<Vec<f64>> {
        if let Some(path) = &self.input {
            return crate::output::read_samples(path);
        }
        let spec = self.dist.build()?;
        let n = self
            .n
            .ok_or_else(|| CliError::Config("--n is required without --input".into()))?;
        let mut rng = RngStream::new(self.seed, self.stream);
        Ok((0..n).map(|_| spec.sample(&mut rng)).collect())
    }
}

/// Flags selecting a coefficient-pair law. `constant-a` and
/// `fleming-viot-pair` build from flags; `independent-pair` needs two
/// component laws and comes from a TOML file via `--pair-config`.
#[derive(Args, Clone)]
pub struct PairArgs {
    /// One of: constant-a, fleming-viot-pair (with flags), or use --pair-config
    #[arg(long)]
    pub pair: Option<String>,
    /// Constant multiplicative coefficient (constant-a)
    #[arg(long)]
    pub r: Option<f64>,
    #[command(flatten)]
    pub dist: DistArgs,
    /// TOML file describing the pair (required for independent-pair)
    #[arg(long, conflicts_with = "pair")]
    pub pair_config: Option<PathBuf>,
}

impl PairArgs {
    pub fn build(&self) -> CliResult<CoeffPairSpec> {
        if let Some(path) = &self.pair_config {
            let text = std::fs::read_to_string(path)?;
            let spec: CoeffPairSpec = toml::from_str(&text)
                .map_err(|e| CliError::Config(format!("pair config: {e}")))?;
            spec.validate()?;
            return Ok(spec);
        }
        let spec = match self.pair.as_deref() {
            Some("constant-a") => {
                let r = self
                    .r
                    .ok_or_else(|| CliError::Config("--r is required for --pair constant-a".into()))?;
                CoeffPairSpec::ConstantA {
                    r,
                    noise: self.dist.build()?,
                }
            }
            Some("fleming-viot-pair") => CoeffPairSpec::FlemingViotPair,
            Some("independent-pair") => {
                return Err(CliError::Config(
                    "independent-pair carries two component laws; pass it via --pair-config".into(),
                ))
            }
            Some(other) => {
                return Err(IedError::Argument(format!("unknown pair '{other}'")).into())
            }
            None => return Err(CliError::Config("--pair or --pair-config is required".into())),
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub dist: DistArgs,
    /// Number of draws
    #[arg(long)]
    pub n: u64,
    /// RNG seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// RNG stream id
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct FitLeftArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Pin rho and estimate only lambda (median of -x^rho log F)
    #[arg(long)]
    pub fixed_rho: Option<f64>,
    /// Pin rho and fit lambda with the corrected whitened model
    #[arg(long, conflicts_with = "fixed_rho")]
    pub pinned_rho: Option<f64>,
    /// Minimum tail observations behind the deepest grid point
    #[arg(long, default_value_t = 5)]
    pub min_hits: usize,
    /// Upper quantile cap of the grid
    #[arg(long, default_value_t = 0.15)]
    pub upper_quantile: f64,
    /// Number of geometrically spaced quantile levels
    #[arg(long, default_value_t = 24)]
    pub grid_points: usize,
    /// Output JSON path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct FitLaplaceArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Transform arguments (comma separated); default geometric in [1, 100]
    #[arg(long, value_delimiter = ',')]
    pub z_grid: Vec<f64>,
    /// Output JSON path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct FitRightArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Number of upper order statistics (default n^(2/3))
    #[arg(long)]
    pub k: Option<usize>,
    /// Output JSON path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand)]
pub enum ArmaCmd {
    /// psi-expansion of Theta(z)/Phi(z); writes a `k,psi` CSV
    Psi(ArmaPsiArgs),
    /// Limit class of the stationary solution; writes JSON
    Lambda(ArmaLambdaArgs),
    /// Simulate the recursion; writes an `n,x` CSV
    Simulate(ArmaSimulateArgs),
}

#[derive(Args)]
pub struct ArmaPsiArgs {
    /// Autoregressive coefficients (comma separated)
    #[arg(long, value_delimiter = ',')]
    pub phi: Vec<f64>,
    /// Moving-average coefficients (comma separated)
    #[arg(long, value_delimiter = ',')]
    pub theta: Vec<f64>,
    /// Target bound on the truncated psi tail
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct ArmaLambdaArgs {
    /// Autoregressive coefficients (comma separated)
    #[arg(long, value_delimiter = ',')]
    pub phi: Vec<f64>,
    /// Moving-average coefficients (comma separated)
    #[arg(long, value_delimiter = ',')]
    pub theta: Vec<f64>,
    /// Noise class exponent (with --noise-lambda, bypasses --dist)
    #[arg(long)]
    pub noise_rho: Option<f64>,
    /// Noise class constant
    #[arg(long)]
    pub noise_lambda: Option<f64>,
    #[command(flatten)]
    pub dist: DistArgs,
    /// Also report the finite-horizon constant Lambda_n at this n
    #[arg(long)]
    pub horizon: Option<usize>,
    /// Target bound on the truncated psi tail
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Output JSON path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct ArmaSimulateArgs {
    /// Autoregressive coefficients (comma separated)
    #[arg(long, value_delimiter = ',')]
    pub phi: Vec<f64>,
    /// Moving-average coefficients (comma separated)
    #[arg(long, value_delimiter = ',')]
    pub theta: Vec<f64>,
    #[command(flatten)]
    pub dist: DistArgs,
    /// Chain length
    #[arg(long)]
    pub n: u64,
    /// RNG seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// RNG stream id
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
    /// Cross-check the recursion against the psi-convolution form
    #[arg(long, default_value_t = false)]
    pub check: bool,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand)]
pub enum SfpeCmd {
    /// Run the Markov recursion X_n = A_n X_{n-1} + B_n; writes an `n,x` CSV
    Iterate(SfpeIterateArgs),
    /// Draw truncated perpetuity series solutions; writes an `index,value` CSV
    Series(SfpeSeriesArgs),
    /// Closed-form limit constant Lambda; writes JSON
    Lambda(SfpeLambdaArgs),
    /// Monte Carlo contraction diagnostics; writes JSON
    Contraction(SfpeContractionArgs),
}

#[derive(Args)]
pub struct SfpeIterateArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    /// Number of steps
    #[arg(long)]
    pub n: u64,
    /// RNG seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// RNG stream id
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct SfpeSeriesArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    /// Number of independent series draws
    #[arg(long, default_value_t = 1)]
    pub draws: u64,
    /// Relative truncation tolerance on the running coefficient product
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// RNG seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// RNG stream id
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct SfpeLambdaArgs {
    /// Noise class exponent rho
    #[arg(long)]
    pub rho: f64,
    /// Noise class constant lambda
    #[arg(long)]
    pub lambda: f64,
    /// Essential infimum of A (equals r for a constant coefficient)
    #[arg(long)]
    pub essinf_a: f64,
    /// Also report the finite-horizon constant Lambda_n at this n
    #[arg(long)]
    pub horizon: Option<usize>,
    /// Output JSON path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct SfpeContractionArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    /// Number of Monte Carlo draws
    #[arg(long, default_value_t = 100_000)]
    pub n: u64,
    /// RNG seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// RNG stream id
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
    /// Output JSON path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct EnvelopeArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    /// Chain length
    #[arg(long)]
    pub n: u64,
    /// RNG seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// RNG stream id
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
    /// Window `lo,hi` of chain indices to report
    #[arg(long, value_delimiter = ',', num_args = 2)]
    pub window: Vec<u64>,
    /// Dip levels to count (comma separated)
    #[arg(long, value_delimiter = ',', default_values_t = [1.0])]
    pub levels: Vec<f64>,
    /// Override the limit class exponent (with --lambda)
    #[arg(long)]
    pub rho: Option<f64>,
    /// Override the limit class constant
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Output CSV path (`n,x,statistic,running_min`); summary JSON on stdout
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Subcommand)]
pub enum FvCmd {
    /// Draw (A, B, Y, T) tuples; writes an `index,a,b,y,t` CSV
    Sample(FvSampleArgs),
    /// Evaluate closed-form densities at a point; writes JSON
    Density(FvDensityArgs),
    /// Dependent vs independent-control left-tail table; writes CSV
    Tail(FvTailArgs),
}

#[derive(Args)]
pub struct FvSampleArgs {
    /// Number of draws
    #[arg(long)]
    pub n: u64,
    /// RNG seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// RNG stream id
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct FvDensityArgs {
    /// Evaluate the A-marginal density and CDF at this point
    #[arg(long)]
    pub a: Option<f64>,
    /// Evaluate the B-marginal density at this point
    #[arg(long)]
    pub b: Option<f64>,
    /// Output JSON path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct FvTailArgs {
    /// Epsilon grid (comma separated, each in [0.04, 0.5])
    #[arg(long, value_delimiter = ',', default_values_t = [0.2, 0.1, 0.05])]
    pub eps: Vec<f64>,
    /// Number of two-pair draws
    #[arg(long)]
    pub n: u64,
    /// RNG seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Chain length for the iterated variant
    #[arg(long, default_value_t = 50)]
    pub chain_m: usize,
    /// Skip the iterated-chain variant
    #[arg(long, default_value_t = false)]
    pub no_chain: bool,
    /// Worker threads (outputs are identical for any count)
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct ExperimentArgs {
    /// One of: fig1, arma-envelope, series-lambda, fv-left-tail, kg-right-tail
    pub preset: String,
    /// TOML run configuration (flags override file values)
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Number of independent seeds (envelope presets)
    #[arg(long)]
    pub seeds: Option<u64>,
    /// Main sample size / chain length of the preset
    #[arg(long)]
    pub n: Option<u64>,
    /// Base RNG seed
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (outputs are identical for any count)
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output directory (falls back to IED_OUT_DIR)
    #[arg(long)]
    pub out: Option<PathBuf>,
}
