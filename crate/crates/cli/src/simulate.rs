use std::io::Write;
use std::path::PathBuf;

use andoyer_core::body::InertiaTensor;
use andoyer_core::charts::{momentum_vector_body, AndoyerState};
use andoyer_core::dynamics::{euler_oracle, integrate, AndoyerTrajectory, DynamicsError, HamiltonianSpec, Method};
use andoyer_core::geometry::Mat3;
use clap::{Args, ValueEnum};

use crate::format::{csv_row, real};
use crate::{emit, fixed, Failure, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Rk4,
    Midpoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimFormat {
    Csv,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Body-frame inertia: `I1,I2,I3` (diagonal), `Ixx,Iyy,Izz,Ixy,Ixz,Iyz`, or nine entries
    /// row by row.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub inertia: Vec<f64>,
    /// Initial state `l,g,theta,L,G,Theta`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub state: Vec<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t_end: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub dt: f64,
    #[arg(long, value_enum, default_value_t = MethodArg::Rk4)]
    pub method: MethodArg,
    /// Append `oracle_dev`, the max-norm distance of `M` from the Euler-equation oracle.
    #[arg(long)]
    pub oracle: bool,
    #[arg(long, value_enum, default_value_t = SimFormat::Csv)]
    pub format: SimFormat,
    #[arg(long, short, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

fn inertia_matrix(v: &[f64]) -> Result<Mat3<f64>, Failure> {
    match v.len() {
        3 => Ok(Mat3::diagonal(andoyer_core::Vec3d::new(v[0], v[1], v[2]))),
        6 => Ok(Mat3::from_rows([[v[0], v[3], v[4]], [v[3], v[1], v[5]], [v[4], v[5], v[2]]])),
        9 => Ok(Mat3::from_rows([[v[0], v[1], v[2]], [v[3], v[4], v[5]], [v[6], v[7], v[8]]])),
        n => Err(Failure::Usage(format!("--inertia takes 3, 6 or 9 numbers, got {n}"))),
    }
}

fn render(trajectory: &AndoyerTrajectory<f64>, oracle: Option<&[(f64, andoyer_core::Vec3d)]>) -> String {
    let mut header = "t,l,g,theta,L,G,Theta,Mx,My,Mz,H".to_string();
    if oracle.is_some() {
        header += ",oracle_dev";
    }
    let mut out = header + "\n";
    for (k, s) in trajectory.samples.iter().enumerate() {
        let a = &s.state;
        let m = s.momentum_body;
        let mut fields: Vec<String> =
            [s.t, a.l, a.g, a.theta, a.big_l, a.big_g, a.big_theta, m.x, m.y, m.z, s.energy].map(real).to_vec();
        if let Some(o) = oracle {
            fields.push(real((m - o[k].1).max_abs()));
        }
        out += &csv_row(&fields);
    }
    out
}

pub fn run(args: &SimulateArgs, stdout: &mut dyn Write) -> Outcome {
    let spec = HamiltonianSpec::new(InertiaTensor::new(inertia_matrix(&args.inertia)?)?)?;
    let [l, g, theta, big_l, big_g, big_theta] = fixed::<6>("state", &args.state)?;
    let a0 = AndoyerState::new(l, g, theta, big_l, big_g, big_theta)?;
    let method = match args.method {
        MethodArg::Rk4 => Method::Rk4,
        MethodArg::Midpoint => Method::Midpoint,
    };
    let (trajectory, aborted) = match integrate(&spec, &a0, args.t_end, args.dt, method) {
        Ok(t) => (t, false),
        Err(DynamicsError::SingularBandReached { trajectory, .. }) => (trajectory, true),
        Err(DynamicsError::Core(e)) => return Err(e.into()),
    };
    let oracle = if args.oracle { Some(euler_oracle(&spec, momentum_vector_body(&a0), args.t_end, args.dt)?) } else { None };
    let mut text = render(&trajectory, oracle.as_deref());
    if aborted {
        text += "# aborted: singular band\n";
    }
    emit(args.output.as_deref(), &text, stdout)?;
    if aborted {
        Err(Failure::SingularBand)
    } else {
        Ok(())
    }
}
