use std::io::Write;
use std::path::PathBuf;

use andoyer_core::body::euler_momenta;
use andoyer_core::charts::{andoyer_from_euler, euler_from_andoyer, AndoyerState, EulerAngles, EulerVelocityState};
use andoyer_core::geometry::Vec3;
use clap::{Args, Subcommand};
use serde::Serialize;

use crate::format::json;
use crate::{emit, fixed, BodyArgs, Failure, Outcome};

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[command(subcommand)]
    pub direction: Direction,
    #[arg(long, short, value_name = "PATH", global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Direction {
    /// Euler angles and rates of a given body to `(l, g, theta, L, G, Theta)`.
    EulerToAndoyer(EulerToAndoyerArgs),
    /// `(l, g, theta, L, G, Theta)` to Euler angles and conjugate momenta.
    AndoyerToEuler(AndoyerToEulerArgs),
}

#[derive(Debug, Args)]
pub struct EulerToAndoyerArgs {
    /// `phi,theta,psi`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub q: Vec<f64>,
    /// Euler-angle rates `phi_dot,theta_dot,psi_dot`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub qdot: Vec<f64>,
    #[command(flatten)]
    pub body: BodyArgs,
    /// Seed for a random body.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct AndoyerToEulerArgs {
    /// `l,g,theta,L,G,Theta`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub state: Vec<f64>,
}

#[derive(Serialize)]
struct AndoyerOut {
    l: f64,
    g: f64,
    theta: f64,
    #[serde(rename = "L")]
    big_l: f64,
    #[serde(rename = "G")]
    big_g: f64,
    #[serde(rename = "Theta")]
    big_theta: f64,
}

#[derive(Serialize)]
struct EulerOut {
    phi: f64,
    theta: f64,
    psi: f64,
    p_phi: f64,
    p_theta: f64,
    p_psi: f64,
}

pub fn run(args: &ConvertArgs, stdout: &mut dyn Write) -> Outcome {
    let text = match &args.direction {
        Direction::EulerToAndoyer(a) => {
            let body = a.body.resolve(a.seed)?.ok_or_else(|| {
                Failure::Usage("euler-to-andoyer needs a body: pass --body-file or --masses".into())
            })?;
            let q = fixed::<3>("q", &a.q)?;
            let qdot = fixed::<3>("qdot", &a.qdot)?;
            let v = EulerVelocityState::new(EulerAngles::new(q[0], q[1], q[2]), Vec3::from_array(qdot));
            let s = andoyer_from_euler(&euler_momenta(&body, &v))?;
            json(&AndoyerOut { l: s.l, g: s.g, theta: s.theta, big_l: s.big_l, big_g: s.big_g, big_theta: s.big_theta })
        }
        Direction::AndoyerToEuler(a) => {
            let [l, g, theta, big_l, big_g, big_theta] = fixed::<6>("state", &a.state)?;
            let e = euler_from_andoyer(&AndoyerState::new(l, g, theta, big_l, big_g, big_theta)?)?;
            json(&EulerOut { phi: e.q.phi, theta: e.q.theta, psi: e.q.psi, p_phi: e.p.x, p_theta: e.p.y, p_psi: e.p.z })
        }
    };
    emit(args.output.as_deref(), &text, stdout)
}
