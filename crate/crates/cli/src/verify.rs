use std::io::Write;
use std::path::PathBuf;

use andoyer_core::canonicity::{run_suite, BodySource, CheckReport, SuiteConfig, Tolerances};
use clap::Args;

use crate::format::{csv_row, json, real};
use crate::{emit, BodyArgs, Failure, Format, Outcome};

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Random tangents per fixture in the one-form check.
    #[arg(long, default_value_t = 100)]
    pub directions: usize,
    #[arg(long, value_name = "TOL")]
    pub tol_coefficients: Option<f64>,
    #[arg(long, value_name = "TOL")]
    pub tol_oneform: Option<f64>,
    #[arg(long, value_name = "TOL")]
    pub tol_symplectic: Option<f64>,
    #[arg(long, value_name = "TOL")]
    pub tol_lagrange: Option<f64>,
    #[command(flatten)]
    pub body: BodyArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, short, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Worker threads; 1 runs the trials serially. Defaults to all cores.
    #[arg(long, value_name = "N")]
    pub jobs: Option<usize>,
}

fn tolerances(args: &VerifyArgs) -> Result<Tolerances, Failure> {
    let d = Tolerances::default();
    let t = Tolerances {
        coefficients: args.tol_coefficients.unwrap_or(d.coefficients),
        oneform: args.tol_oneform.unwrap_or(d.oneform),
        symplectic: args.tol_symplectic.unwrap_or(d.symplectic),
        lagrange: args.tol_lagrange.unwrap_or(d.lagrange),
    };
    if [t.coefficients, t.oneform, t.symplectic, t.lagrange].iter().any(|v| v.is_nan() || *v <= 0.0 || v.is_infinite()) {
        return Err(Failure::Usage("tolerances must be positive and finite".into()));
    }
    Ok(t)
}

pub fn render(reports: &[CheckReport], format: Format) -> String {
    match format {
        Format::Json => json(&reports),
        Format::Csv => {
            let mut out = csv_row(&["check_name", "max_residual", "tolerance", "trials", "seed", "passed"].map(String::from));
            for r in reports {
                out += &csv_row(&[
                    r.check_name.clone(),
                    real(r.max_residual),
                    real(r.tolerance),
                    r.trials.to_string(),
                    r.seed.to_string(),
                    r.passed.to_string(),
                ]);
            }
            out
        }
    }
}

pub fn run(args: &VerifyArgs, stdout: &mut dyn Write) -> Outcome {
    if args.trials == 0 {
        return Err(Failure::Usage("--trials must be at least 1".into()));
    }
    if args.jobs == Some(0) {
        return Err(Failure::Usage("--jobs must be at least 1".into()));
    }
    let body = match args.body.resolve(args.seed)? {
        Some(b) if args.body.body_file.is_some() => BodySource::Fixed(b),
        _ => BodySource::Random { n: args.body.masses.unwrap_or(5), scale: args.body.scale.unwrap_or(1.0) },
    };
    let cfg = SuiteConfig {
        seed: args.seed,
        trials: args.trials,
        directions: args.directions,
        tolerances: tolerances(args)?,
        body,
        parallel: args.jobs != Some(1),
        ..SuiteConfig::default()
    };
    let reports = match args.jobs {
        Some(n) if n > 1 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Failure::Usage(e.to_string()))?
            .install(|| run_suite(&cfg)),
        _ => run_suite(&cfg),
    }?;
    emit(args.output.as_deref(), &render(&reports, args.format), stdout)?;
    if reports.iter().all(|r| r.passed) {
        Ok(())
    } else {
        Err(Failure::ChecksFailed)
    }
}
