//! The six subcommands, each producing a table and an exit code.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use optocool_core::atom::{bare_steady_state, build_bloch, spectral_factor, AtomParams};
use optocool_core::cooling::{design_detuning, design_position, StrategyChoice, StrategyKind};
use optocool_core::params::rabi_frequency;
use optocool_core::scenario::load_scenario;
use optocool_core::sweep::{
    apply_value, evaluate, minimize_nss, run_sweep, ParamPath, Placement, PointStatus, Scenario,
};
use optocool_core::{CoolError, Result};

use crate::table::{Table, Value};
use crate::{exit, exit_code_for};

#[derive(Debug, Parser)]
#[command(
    name = "optocool",
    version,
    about = "Cavity-free optomechanical cooling of a mirror by a remote Λ-atom cloud"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct OutputOpts {
    /// Write the table here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Normalize {
    /// Divide by |J(+ν)|.
    Plus,
    /// Divide by |J(−ν)|.
    Minus,
    /// Raw SI values (metres).
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Bs,
    Tms,
}

impl From<StrategyArg> for StrategyKind {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Bs => StrategyKind::BsEnhance,
            StrategyArg::Tms => StrategyKind::TmsSuppress,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate the spectral factor J(ω) over a frequency range.
    Spectrum {
        #[arg(long)]
        scenario: PathBuf,
        /// Lower edge of the range, in units of ν.
        #[arg(long, default_value_t = -3.0, allow_hyphen_values = true)]
        omega_min: f64,
        /// Upper edge of the range, in units of ν.
        #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
        omega_max: f64,
        /// Number of grid points (>= 2).
        #[arg(long, default_value_t = 601)]
        points: usize,
        #[arg(long, value_enum, default_value_t = Normalize::None)]
        normalize: Normalize,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Evaluate one scenario: rates, η±, steady state, dark residual.
    Steady {
        #[arg(long)]
        scenario: PathBuf,
        /// Drop the environmental channel.
        #[arg(long)]
        no_env: bool,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Integrate the occupation from n0 over [0, t_max].
    Evolve {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        n0: f64,
        /// End time (s).
        #[arg(long)]
        t_max: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[arg(long)]
        no_env: bool,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Cartesian grid sweep; axes as "path=start:stop:count".
    Sweep {
        #[arg(long)]
        scenario: PathBuf,
        /// e.g. --axis cloud.delta=-2.0e6:2.0e6:401 (repeatable).
        #[arg(long = "axis", required = true)]
        axes: Vec<String>,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Minimise n_ss over one or two parameters; specs as "path=lo:hi".
    Optimize {
        #[arg(long)]
        scenario: PathBuf,
        /// e.g. --free cloud.delta=-2.0e6:2.0e6 (1-2 allowed).
        #[arg(long = "free", required = true)]
        free: Vec<String>,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Recommend detuning and placement for a strategy, with predicted rates.
    Design {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, value_enum)]
        strategy: StrategyArg,
        /// Placement index n.
        #[arg(long, default_value_t = 0)]
        index: u32,
        #[command(flatten)]
        out: OutputOpts,
    },
}

fn emit(table: &Table, out: &OutputOpts) -> std::io::Result<()> {
    let text = match out.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    };
    match &out.output {
        Some(path) => std::fs::write(path, text),
        None => {
            use std::io::Write as _;
            std::io::stdout().write_all(text.as_bytes())
        }
    }
}

fn scenario_columns() -> Vec<&'static str> {
    vec![
        "n0",
        "lambda_plus",
        "lambda_minus",
        "eta_plus_re",
        "eta_plus_im",
        "eta_minus_re",
        "eta_minus_im",
        "j_plus_abs",
        "j_minus_abs",
        "n_ss",
        "status",
    ]
}

fn atom_params(s: &Scenario) -> AtomParams {
    AtomParams::symmetric(
        rabi_frequency(&s.probe),
        rabi_frequency(&s.control),
        s.cloud.delta,
        s.probe.gamma,
        s.control.gamma,
        s.probe.big_gamma,
        s.control.big_gamma,
    )
}

fn spectral_at(s: &Scenario, omega: f64) -> Result<Complex64> {
    let p = atom_params(s);
    spectral_factor(
        omega,
        p.omega_p,
        p.omega_c,
        p.delta_g,
        p.gamma_p,
        p.gamma_c,
        p.big_gamma_p,
        p.big_gamma_c,
    )
}

fn cmd_spectrum(
    scenario_path: &Path,
    omega_min: f64,
    omega_max: f64,
    points: usize,
    normalize: Normalize,
) -> Result<(Table, i32)> {
    if points < 2 || !(omega_max > omega_min) {
        return Err(CoolError::Scenario(
            "spectrum needs points >= 2 and omega_max > omega_min".into(),
        ));
    }
    let (_, scenario) = load_scenario(scenario_path)?;
    let nu = scenario.mirror.nu;
    let norm = match normalize {
        Normalize::Plus => spectral_at(&scenario, nu)?.norm(),
        Normalize::Minus => spectral_at(&scenario, -nu)?.norm(),
        Normalize::None => 1.0,
    };
    if norm == 0.0 {
        return Err(CoolError::SpectralPole { omega: nu });
    }
    let mut table = Table::new(vec!["omega_over_nu", "re_j", "im_j", "abs_j"]);
    for k in 0..points {
        let x = omega_min + (omega_max - omega_min) * k as f64 / (points - 1) as f64;
        let j = spectral_at(&scenario, x * nu)? / norm;
        table.push(vec![x.into(), j.re.into(), j.im.into(), j.norm().into()]);
    }
    Ok((table, exit::OK))
}

fn push_scenario_row(table: &mut Table, s: &Scenario) -> Result<i32> {
    let ev = evaluate(s)?;
    let status = match ev.n_ss.finite() {
        Some(_) => "ok",
        None => "divergent",
    };
    table.push(vec![
        ev.rates.n0.into(),
        ev.rates.lambda_plus.into(),
        ev.rates.lambda_minus.into(),
        ev.eta_plus.re.into(),
        ev.eta_plus.im.into(),
        ev.eta_minus.re.into(),
        ev.eta_minus.im.into(),
        ev.j_plus_abs.into(),
        ev.j_minus_abs.into(),
        ev.n_ss.finite().into(),
        Value::Text(status.into()),
    ]);
    Ok(if ev.n_ss.finite().is_some() {
        exit::OK
    } else {
        exit::DIVERGENT
    })
}

fn cmd_steady(scenario_path: &Path, no_env: bool) -> Result<(Table, i32)> {
    let (_, mut scenario) = load_scenario(scenario_path)?;
    if no_env {
        scenario.environment = None;
    }
    let mut cols = scenario_columns();
    cols.push("dark_residual");
    let mut table = Table::new(cols);
    // Assemble the row manually so the dark residual rides along.
    let code = push_scenario_row(&mut table, &scenario)?;
    let dark = build_bloch(&atom_params(&scenario))
        .and_then(|sys| bare_steady_state(&sys))
        .map(|ss| ss.dark_residual());
    let cell = match dark {
        Ok(r) => Value::Float(r),
        Err(_) => Value::Empty,
    };
    table.rows[0].push(cell);
    Ok((table, code))
}

fn cmd_evolve(
    scenario_path: &Path,
    n0: f64,
    t_max: f64,
    points: usize,
    no_env: bool,
) -> Result<(Table, i32)> {
    if points == 0 || !(t_max >= 0.0) {
        return Err(CoolError::Scenario(
            "evolve needs points >= 1 and t_max >= 0".into(),
        ));
    }
    let (_, mut scenario) = load_scenario(scenario_path)?;
    if no_env {
        scenario.environment = None;
    }
    let ev = evaluate(&scenario)?;
    let grid: Vec<f64> = if t_max == 0.0 || points == 1 {
        vec![0.0]
    } else {
        (0..points)
            .map(|k| t_max * k as f64 / (points - 1) as f64)
            .collect()
    };
    let traj = optocool_core::cooling::evolve_occupation(n0, &ev.rates, true, &grid)?;
    let mut table = Table::new(vec!["t_s", "n"]);
    for (t, n) in traj.times.iter().zip(&traj.occupation) {
        table.push(vec![(*t).into(), (*n).into()]);
    }
    let code = if traj.diverges {
        exit::DIVERGENT
    } else {
        exit::OK
    };
    Ok((table, code))
}

fn parse_axis(spec: &str) -> Result<(ParamPath, Vec<f64>)> {
    let usage = || {
        CoolError::Scenario(format!(
            "malformed axis '{spec}': expected path=start:stop:count"
        ))
    };
    let (path, rest) = spec.split_once('=').ok_or_else(usage)?;
    let parts: Vec<&str> = rest.split(':').collect();
    if parts.len() != 3 {
        return Err(usage());
    }
    let start: f64 = parts[0].parse().map_err(|_| usage())?;
    let stop: f64 = parts[1].parse().map_err(|_| usage())?;
    let count: usize = parts[2].parse().map_err(|_| usage())?;
    if count == 0 {
        return Err(usage());
    }
    let values = if count == 1 {
        vec![start]
    } else {
        (0..count)
            .map(|k| start + (stop - start) * k as f64 / (count - 1) as f64)
            .collect()
    };
    Ok((path.parse()?, values))
}

fn parse_free(spec: &str) -> Result<(ParamPath, (f64, f64))> {
    let usage = || {
        CoolError::Scenario(format!(
            "malformed free parameter '{spec}': expected path=lo:hi"
        ))
    };
    let (path, rest) = spec.split_once('=').ok_or_else(usage)?;
    let (lo, hi) = rest.split_once(':').ok_or_else(usage)?;
    let lo: f64 = lo.parse().map_err(|_| usage())?;
    let hi: f64 = hi.parse().map_err(|_| usage())?;
    Ok((path.parse()?, (lo, hi)))
}

fn threads_from_env() -> Option<usize> {
    std::env::var("OPTOCOOL_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
}

fn cmd_sweep(scenario_path: &Path, axis_specs: &[String]) -> Result<(Table, i32)> {
    let (_, scenario) = load_scenario(scenario_path)?;
    let axes = axis_specs
        .iter()
        .map(|s| parse_axis(s))
        .collect::<Result<Vec<_>>>()?;
    let result = run_sweep(&scenario, &axes, threads_from_env())?;
    let mut cols: Vec<String> = result.axes.iter().map(|(name, _)| name.clone()).collect();
    cols.extend(scenario_columns().iter().map(|s| s.to_string()));
    let mut table = Table::new(cols);
    for rec in &result.records {
        let mut row: Vec<Value> = rec.coords.iter().map(|&c| c.into()).collect();
        row.extend([
            rec.n0.into(),
            rec.lambda_plus.into(),
            rec.lambda_minus.into(),
            rec.eta_plus.re.into(),
            rec.eta_plus.im.into(),
            rec.eta_minus.re.into(),
            rec.eta_minus.im.into(),
            rec.j_plus_abs.into(),
            rec.j_minus_abs.into(),
            rec.n_ss.into(),
            Value::Text(rec.status.label().to_string()),
        ]);
        if let PointStatus::Error(_) = rec.status {
            // keep the row; the label column already says "error"
        }
        table.push(row);
    }
    Ok((table, exit::OK))
}

fn cmd_optimize(scenario_path: &Path, free_specs: &[String]) -> Result<(Table, i32)> {
    let (_, scenario) = load_scenario(scenario_path)?;
    let free = free_specs
        .iter()
        .map(|s| parse_free(s))
        .collect::<Result<Vec<_>>>()?;
    let opt = minimize_nss(&scenario, &free, threads_from_env())?;
    let mut cols: Vec<String> = free.iter().map(|(p, _)| p.name().to_string()).collect();
    cols.push("n_ss".into());
    cols.push("evaluations".into());
    let mut table = Table::new(cols);
    let mut row: Vec<Value> = opt.coords.iter().map(|&c| c.into()).collect();
    row.push(opt.n_ss.into());
    row.push(Value::Int(opt.evaluations as i64));
    table.push(row);
    Ok((table, exit::OK))
}

fn cmd_design(scenario_path: &Path, strategy: StrategyArg, index: u32) -> Result<(Table, i32)> {
    let (_, scenario) = load_scenario(scenario_path)?;
    let kind: StrategyKind = strategy.into();
    let nu = scenario.mirror.nu;
    let omega_p = rabi_frequency(&scenario.probe);
    let omega_c = rabi_frequency(&scenario.control);
    let delta = design_detuning(kind, omega_p, omega_c, nu)?;
    let position = design_position(kind, nu, index)?;
    if position.impractical {
        eprintln!(
            "warning: designed cloud position x̄ = {:.3e} m is likely impractical",
            position.xbar
        );
    }

    // Predict the rates with the designed detuning and placement in place.
    let mut designed = apply_value(&scenario, ParamPath::CloudDelta, delta)?;
    designed.placement = Placement::Designed(StrategyChoice {
        kind,
        placement_index: index,
    });
    let designed = designed.validated()?;
    let ev = evaluate(&designed)?;
    let no_env = {
        let mut s = designed.clone();
        s.environment = None;
        evaluate(&s)?.n_ss
    };

    // Asymptotic many-atom limits of the steady state.
    let mu_p = optocool_core::params::optomech_coupling(&designed.probe, &designed.mirror);
    let mu_c = optocool_core::params::optomech_coupling(&designed.control, &designed.mirror);
    let mu_prod = mu_p * mu_c;
    let n_ss_limit = if mu_prod > 0.0 {
        let sum = mu_p * mu_p + mu_c * mu_c;
        match kind {
            StrategyKind::BsEnhance => Some(sum / (2.0 * mu_prod)),
            StrategyKind::TmsSuppress => Some((sum - 2.0 * mu_prod) / (2.0 * mu_prod)),
        }
    } else {
        None
    };

    let mut table = Table::new(vec![
        "strategy",
        "delta_rad_s",
        "xbar_m",
        "tau_s",
        "phase_re",
        "phase_im",
        "feasible",
        "n0",
        "lambda_plus",
        "lambda_minus",
        "n_ss",
        "n_ss_no_env",
        "n_ss_many_atom_limit",
        "status",
    ]);
    let status = match ev.n_ss.finite() {
        Some(_) => "ok",
        None => "divergent",
    };
    table.push(vec![
        Value::Text(
            match kind {
                StrategyKind::BsEnhance => "bs_enhance",
                StrategyKind::TmsSuppress => "tms_suppress",
            }
            .into(),
        ),
        delta.into(),
        position.xbar.into(),
        position.tau.into(),
        position.phase.value().re.into(),
        position.phase.value().im.into(),
        Value::Text((!position.impractical).to_string()),
        ev.rates.n0.into(),
        ev.rates.lambda_plus.into(),
        ev.rates.lambda_minus.into(),
        ev.n_ss.finite().into(),
        no_env.finite().into(),
        n_ss_limit.into(),
        Value::Text(status.into()),
    ]);
    let code = if ev.n_ss.finite().is_some() {
        exit::OK
    } else {
        exit::DIVERGENT
    };
    Ok((table, code))
}

/// Dispatch one parsed command; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let outcome = match &cli.command {
        Command::Spectrum {
            scenario,
            omega_min,
            omega_max,
            points,
            normalize,
            out,
        } => cmd_spectrum(scenario, *omega_min, *omega_max, *points, *normalize)
            .map(|(t, c)| (t, c, out.clone())),
        Command::Steady {
            scenario,
            no_env,
            out,
        } => cmd_steady(scenario, *no_env).map(|(t, c)| (t, c, out.clone())),
        Command::Evolve {
            scenario,
            n0,
            t_max,
            points,
            no_env,
            out,
        } => cmd_evolve(scenario, *n0, *t_max, *points, *no_env)
            .map(|(t, c)| (t, c, out.clone())),
        Command::Sweep {
            scenario,
            axes,
            out,
        } => cmd_sweep(scenario, axes).map(|(t, c)| (t, c, out.clone())),
        Command::Optimize {
            scenario,
            free,
            out,
        } => cmd_optimize(scenario, free).map(|(t, c)| (t, c, out.clone())),
        Command::Design {
            scenario,
            strategy,
            index,
            out,
        } => cmd_design(scenario, *strategy, *index).map(|(t, c)| (t, c, out.clone())),
    };
    match outcome {
        Ok((table, code, out)) => {
            if let Err(e) = emit(&table, &out) {
                eprintln!("error: failed to write output: {e}");
                return exit::INPUT;
            }
            code
        }
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_spec_parsing() {
        let (path, values) = parse_axis("cloud.delta=-1.0e6:1.0e6:5").unwrap();
        assert_eq!(path, ParamPath::CloudDelta);
        assert_eq!(values.len(), 5);
        assert_eq!(values[0], -1.0e6);
        assert_eq!(values[4], 1.0e6);
        assert_eq!(values[2], 0.0);

        assert!(parse_axis("cloud.delta=1:2").is_err());
        assert!(parse_axis("cloud.delta").is_err());
        assert!(parse_axis("cloud.delta=a:b:3").is_err());
        assert!(parse_axis("no.such.path=0:1:3").is_err());
        let (_, single) = parse_axis("cloud.n_atoms=7:7:1").unwrap();
        assert_eq!(single, vec![7.0]);
    }

    #[test]
    fn free_spec_parsing() {
        let (path, (lo, hi)) = parse_free("drive.power=1e-3:2e-2").unwrap();
        assert_eq!(path, ParamPath::DrivePower);
        assert_eq!(lo, 1e-3);
        assert_eq!(hi, 2e-2);
        assert!(parse_free("drive.power=1e-3").is_err());
    }
}
