//! One handler per subcommand; every handler returns the text artifacts it
//! owes and routes them through `output::emit`.

use ied::arma::{self, ArmaModel};
use ied::class::IedClass;
use ied::distributions::DistributionSpec;
use ied::envelope::{self, EnvelopeReport};
use ied::flemingviot;
use ied::sfpe::{self, CoeffPairSpec};
use ied::tail_estimation::{self, EcdfOptions};
use ied::{IedError, RngStream};

use crate::args::*;
use crate::experiments;
use crate::output::{csv, emit, fmt_float, json_pretty, CliError, CliResult};

pub fn dispatch(command: Command) -> CliResult<()> {
    match command {
        Command::Sample(a) => sample(a),
        Command::FitLeft(a) => fit_left(a),
        Command::FitLaplace(a) => fit_laplace(a),
        Command::FitRight(a) => fit_right(a),
        Command::Arma { cmd } => match cmd {
            ArmaCmd::Psi(a) => arma_psi(a),
            ArmaCmd::Lambda(a) => arma_lambda(a),
            ArmaCmd::Simulate(a) => arma_simulate(a),
        },
        Command::Sfpe { cmd } => match cmd {
            SfpeCmd::Iterate(a) => sfpe_iterate(a),
            SfpeCmd::Series(a) => sfpe_series(a),
            SfpeCmd::Lambda(a) => sfpe_lambda(a),
            SfpeCmd::Contraction(a) => sfpe_contraction(a),
        },
        Command::Envelope(a) => envelope_cmd(a),
        Command::Fv { cmd } => match cmd {
            FvCmd::Sample(a) => fv_sample(a),
            FvCmd::Density(a) => fv_density(a),
            FvCmd::Tail(a) => fv_tail(a),
        },
        Command::Experiment(a) => experiments::run_experiment(a),
    }
}

fn sample(args: SampleArgs) -> CliResult<()> {
    let spec = args.dist.build()?;
    let mut rng = RngStream::new(args.seed, args.stream);
    let mut rows = Vec::with_capacity(args.n as usize);
    for i in 0..args.n {
        rows.push(format!("{i},{}", fmt_float(spec.sample(&mut rng))));
    }
    emit(args.out.as_deref(), &csv("index,value", rows))
}

fn fit_left(args: FitLeftArgs) -> CliResult<()> {
    let samples = args.input.samples()?;
    let options = EcdfOptions {
        min_hits: args.min_hits,
        upper_quantile: args.upper_quantile,
        grid_points: args.grid_points,
        fixed_rho: args.fixed_rho,
    };
    let report = if let Some(rho) = args.pinned_rho {
        tail_estimation::ecdf_pinned_fit(&samples, rho, &options)?
    } else {
        tail_estimation::ecdf_left_fit(&samples, &options)?
    };
    emit(args.out.as_deref(), &json_pretty(&report))
}

fn fit_laplace(args: FitLaplaceArgs) -> CliResult<()> {
    let samples = args.input.samples()?;
    let report = tail_estimation::laplace_fit(&samples, &args.z_grid)?;
    emit(args.out.as_deref(), &json_pretty(&report))
}

fn fit_right(args: FitRightArgs) -> CliResult<()> {
    let samples = args.input.samples()?;
    let k = args
        .k
        .unwrap_or_else(|| tail_estimation::hill_default_k(samples.len()));
    let report = tail_estimation::hill_fit(&samples, k)?;
    emit(args.out.as_deref(), &json_pretty(&report))
}

/// Noise used when a subcommand needs a well-formed model but the requested
/// quantity does not depend on the noise law (the psi expansion).
fn placeholder_noise() -> DistributionSpec {
    DistributionSpec::ReciprocalExponential {
        rate: 1.0,
        cap: None,
    }
}

fn arma_psi(args: ArmaPsiArgs) -> CliResult<()> {
    let model = ArmaModel::new(args.phi, args.theta, placeholder_noise())?;
    let expansion = arma::psi_expansion(&model, args.tol)?;
    let rows = expansion
        .psi
        .iter()
        .enumerate()
        .map(|(k, &psi)| format!("{k},{}", fmt_float(psi)));
    emit(args.out.as_deref(), &csv("k,psi", rows))
}

fn arma_lambda(args: ArmaLambdaArgs) -> CliResult<()> {
    let (noise, class) = match (args.noise_rho, args.noise_lambda) {
        (Some(rho), Some(lambda)) => (placeholder_noise(), IedClass::unit(rho, lambda)?),
        (None, None) => {
            let spec = args.dist.build()?;
            let class = spec.theoretical_ied().ok_or_else(|| {
                IedError::Unsupported(format!(
                    "no known left-tail class for noise {}",
                    spec.tag()
                ))
            })?;
            (spec, class)
        }
        _ => {
            return Err(CliError::Config(
                "--noise-rho and --noise-lambda must be given together".into(),
            ))
        }
    };
    let certificate = arma::check_stability(&args.phi)?;
    let model = ArmaModel::new(args.phi, args.theta, noise)?;
    let expansion = arma::psi_expansion(&model, args.tol)?;
    let limit = expansion.lambda_limit(&class)?;
    let lambda_horizon = match args.horizon {
        Some(n) => Some(expansion.lambda_n(&class, n)?.lambda()),
        None => None,
    };
    let report = serde_json::json!({
        "rho": limit.rho(),
        "lambda": limit.lambda(),
        "noise_rho": class.rho(),
        "noise_lambda": class.lambda(),
        "horizon": args.horizon,
        "lambda_horizon": lambda_horizon,
        "psi_terms": expansion.psi.len(),
        "decay_c": expansion.decay.0,
        "decay_beta": expansion.decay.1,
        "truncation_error": expansion.truncation_error,
        "stability_margin": certificate.margin,
    });
    emit(
        args.out.as_deref(),
        &format!("{}\n", serde_json::to_string_pretty(&report).unwrap()),
    )
}

fn arma_simulate(args: ArmaSimulateArgs) -> CliResult<()> {
    let model = ArmaModel::new(args.phi, args.theta, args.dist.build()?)?;
    let mut rng = RngStream::new(args.seed, args.stream);
    let xs = arma::simulate(&model, args.n as usize, &mut rng, args.check)?;
    let rows = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| format!("{},{}", i + 1, fmt_float(x)));
    emit(args.out.as_deref(), &csv("n,x", rows))
}

fn sfpe_iterate(args: SfpeIterateArgs) -> CliResult<()> {
    let spec = args.pair.build()?;
    let mut rng = RngStream::new(args.seed, args.stream);
    let trajectory = sfpe::iterate(&spec, args.n as usize, &mut rng)?;
    let rows = trajectory
        .values
        .iter()
        .enumerate()
        .map(|(n, &x)| format!("{n},{}", fmt_float(x)));
    emit(args.out.as_deref(), &csv("n,x", rows))
}

fn sfpe_series(args: SfpeSeriesArgs) -> CliResult<()> {
    let spec = args.pair.build()?;
    let mut rng = RngStream::new(args.seed, args.stream);
    let mut rows = Vec::with_capacity(args.draws as usize);
    for i in 0..args.draws {
        let draw = sfpe::series_solution(&spec, args.tol, &mut rng)?;
        rows.push(format!("{i},{}", fmt_float(draw.value)));
    }
    emit(args.out.as_deref(), &csv("index,value", rows))
}

fn sfpe_lambda(args: SfpeLambdaArgs) -> CliResult<()> {
    let noise = IedClass::unit(args.rho, args.lambda)?;
    let limit = sfpe::lambda_fixed_point(&noise, args.essinf_a)?;
    let lambda_horizon = match args.horizon {
        Some(n) => Some(sfpe::lambda_n_fixed_point(&noise, args.essinf_a, n)?.lambda()),
        None => None,
    };
    let report = serde_json::json!({
        "rho": limit.rho(),
        "lambda": limit.lambda(),
        "noise_rho": args.rho,
        "noise_lambda": args.lambda,
        "essinf_a": args.essinf_a,
        "horizon": args.horizon,
        "lambda_horizon": lambda_horizon,
        "theoretical_level": limit.lambda().powf(1.0 / limit.rho()),
    });
    emit(
        args.out.as_deref(),
        &format!("{}\n", serde_json::to_string_pretty(&report).unwrap()),
    )
}

fn sfpe_contraction(args: SfpeContractionArgs) -> CliResult<()> {
    let spec = args.pair.build()?;
    let mut rng = RngStream::new(args.seed, args.stream);
    let report = sfpe::contraction_check(&spec, args.n as usize, &mut rng)?;
    emit(args.out.as_deref(), &json_pretty(&report))
}

/// The limit class of a coefficient-pair recursion, from the closed-form
/// fixed-point constant.
pub fn pair_limit_class(spec: &CoeffPairSpec) -> CliResult<IedClass> {
    let unsupported = |tag: &str| {
        IedError::Unsupported(format!(
            "no known left-tail class for the {tag} component; pass --rho and --lambda"
        ))
    };
    match spec {
        CoeffPairSpec::ConstantA { r, noise } => {
            let class = noise
                .theoretical_ied()
                .ok_or_else(|| unsupported(&noise.tag()))?;
            Ok(sfpe::lambda_ar1(&class, *r)?)
        }
        CoeffPairSpec::IndependentPair {
            spec_b, essinf_a, ..
        } => {
            let class = spec_b
                .theoretical_ied()
                .ok_or_else(|| unsupported(&spec_b.tag()))?;
            Ok(sfpe::lambda_fixed_point(&class, *essinf_a)?)
        }
        CoeffPairSpec::FlemingViotPair => Err(IedError::Unsupported(
            "the dependent Brownian pair has no closed-form limit class; pass --rho and --lambda"
                .into(),
        )
        .into()),
    }
}

pub fn envelope_csv(xs: &[f64], report: &EnvelopeReport) -> String {
    let rows = report.n_grid.iter().enumerate().map(|(j, &n)| {
        format!(
            "{n},{},{},{}",
            fmt_float(xs[(n - 1) as usize]),
            fmt_float(report.statistic[j]),
            fmt_float(report.running_min[j]),
        )
    });
    csv("n,x,statistic,running_min", rows)
}

fn envelope_cmd(args: EnvelopeArgs) -> CliResult<()> {
    let spec = args.pair.build()?;
    let class = match (args.rho, args.lambda) {
        (Some(rho), Some(lambda)) => IedClass::unit(rho, lambda)?,
        (None, None) => pair_limit_class(&spec)?,
        _ => {
            return Err(CliError::Config(
                "--rho and --lambda must be given together".into(),
            ))
        }
    };
    let mut rng = RngStream::new(args.seed, args.stream);
    let trajectory = sfpe::iterate(&spec, args.n as usize, &mut rng)?;
    let xs = &trajectory.values[1..];
    let window = (args.window[0], args.window[1]);
    let report = envelope::envelope_report(xs, &class, window, &args.levels)?;
    emit(Some(&args.out), &envelope_csv(xs, &report))?;
    let summary = serde_json::json!({
        "level": report.levels[0],
        "dip_count": report.dip_counts[0],
        "levels": report.levels,
        "dip_counts": report.dip_counts,
        "min_on_window": report.min_on_window(),
        "theoretical_level": report.theoretical_level,
        "window": [window.0, window.1],
    });
    println!("{}", serde_json::to_string_pretty(&summary).unwrap());
    Ok(())
}

fn fv_sample(args: FvSampleArgs) -> CliResult<()> {
    let mut rng = RngStream::new(args.seed, args.stream);
    let mut rows = Vec::with_capacity(args.n as usize);
    for i in 0..args.n {
        let s = flemingviot::sample_pair(&mut rng)?;
        rows.push(format!(
            "{i},{},{},{},{}",
            fmt_float(s.a),
            fmt_float(s.b),
            fmt_float(s.y),
            fmt_float(s.t)
        ));
    }
    emit(args.out.as_deref(), &csv("index,a,b,y,t", rows))
}

fn fv_density(args: FvDensityArgs) -> CliResult<()> {
    if args.a.is_none() && args.b.is_none() {
        return Err(CliError::Config("pass --a and/or --b".into()));
    }
    let mut report = serde_json::Map::new();
    if let Some(a) = args.a {
        report.insert("a".into(), a.into());
        report.insert("density_a".into(), flemingviot::density_a(a)?.into());
        report.insert("cdf_a".into(), flemingviot::cdf_a(a).into());
    }
    if let Some(b) = args.b {
        report.insert("b".into(), b.into());
        report.insert("density_b".into(), flemingviot::density_b(b)?.into());
    }
    if let (Some(a), Some(b)) = (args.a, args.b) {
        report.insert(
            "density_joint".into(),
            flemingviot::density_joint(a, b)?.into(),
        );
    }
    emit(
        args.out.as_deref(),
        &format!(
            "{}\n",
            serde_json::to_string_pretty(&serde_json::Value::Object(report)).unwrap()
        ),
    )
}

fn fv_tail(args: FvTailArgs) -> CliResult<()> {
    let options = flemingviot::TailExperimentOptions {
        chain_m: args.chain_m,
        include_chain: !args.no_chain,
    };
    let rows = experiments::fv_tail_sharded(&args.eps, args.n, &options, args.seed, args.workers)?;
    emit(args.out.as_deref(), &experiments::experiment_csv(&rows))
}
