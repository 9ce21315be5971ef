//! Command-line front end. Every flag can also be given in a flat TOML
//! file passed with `--config`; flags on the command line win.

use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{compare_with_dynamics, frequency_sweep, sweep_csv, LinearFit, Solver, SweepResult};
use crate::error::{Error, Result};
use crate::fs::{converge_truncation, solve_fs, TruncationOptions};
use crate::io::{fmt_f64, sideband_csv, CsvTable};
use crate::params::{BarrierParams, Units};
use crate::solution::SidebandSolution;
use crate::tdse::{
    default_levels, default_t_final, phase_count, propagate_phase_averaged, PacketSpec, Plateau, PlateauOptions,
    PropagationOptions, WellSpec,
};
use crate::ts::solve_ts_with_tail;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_CONVERGENCE: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "delta-floquet",
    version,
    about = "Sidebands and tunneling times of an oscillating delta barrier"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full truncated solution at one frequency.
    Fs(Flags),
    /// Toeplitz closure solution at one frequency.
    Ts(Flags),
    /// Sideband asymmetry over a frequency grid.
    Sweep(Flags),
    /// Wave packet propagation in a well with the barrier at its centre.
    Tdse(Flags),
    /// Full vs Toeplitz intensities for the preset panels.
    Fig2 {
        #[arg(long, value_enum, default_value = "a")]
        panel: Panel,
        #[command(flatten)]
        flags: Flags,
    },
    /// Packet transmission vs frequency: averaged full solution and propagation.
    Fig3(Flags),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Panel {
    A,
    B,
    C,
    D,
}

impl Panel {
    /// (E, ε) with ħ = 2m = 1, Ω = 1, V₀ = 10.
    pub fn preset(&self) -> (f64, f64) {
        match self {
            Panel::A => (2.5, 1.0),
            Panel::B => (1.5, 1.0),
            Panel::C => (0.5, 1.0),
            Panel::D => (2.5, 0.5),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

fn parse_solver(s: &str) -> std::result::Result<Solver, String> {
    Solver::parse(s).ok_or_else(|| format!("unknown solver `{s}` (expected fs or ts)"))
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Flags {
    /// Incident energy (mean packet energy for tdse/fig3).
    #[arg(long = "E")]
    #[serde(rename = "E")]
    pub energy: Option<f64>,
    #[arg(long = "V0")]
    #[serde(rename = "V0")]
    pub v0: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub hbar: Option<f64>,
    #[arg(long)]
    pub mass: Option<f64>,
    /// Fixed half-width of the channel window; convergence search if absent.
    #[arg(long)]
    pub trunc: Option<i32>,
    /// Truncation tolerance (fs, sweep) or integrator tolerance (tdse, fig3).
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub omega_min: Option<f64>,
    #[arg(long)]
    pub omega_max: Option<f64>,
    #[arg(long)]
    pub omega_points: Option<usize>,
    #[arg(long, value_parser = parse_solver)]
    pub solver: Option<Solver>,
    /// Well width.
    #[arg(long = "L")]
    #[serde(rename = "L")]
    pub length: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub k_mean: Option<f64>,
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long)]
    pub t_final: Option<f64>,
    /// Launch phases averaged over; 0 picks a count from the packet width.
    #[arg(long)]
    pub phases: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

macro_rules! merge_fields {
    ($a:ident, $b:ident; $($f:ident),*) => {
        Flags { $($f: $a.$f.or($b.$f),)* config: $a.config }
    };
}

impl Flags {
    /// Fields set here win over `file`.
    pub fn merge(self, file: Flags) -> Flags {
        let (a, b) = (self, file);
        merge_fields!(a, b; energy, v0, eps, omega, hbar, mass, trunc, tol, omega_min, omega_max, omega_points,
            solver, length, x0, sigma, k_mean, levels, t_final, phases, out, format)
    }

    /// Applies `--config` if given.
    pub fn resolve(self) -> Result<Flags> {
        match &self.config {
            None => Ok(self),
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::invalid("config", format!("{}: {e}", path.display())))?;
                let file: Flags =
                    toml::from_str(&text).map_err(|e| Error::invalid("config", format!("{}: {e}", path.display())))?;
                Ok(self.merge(file))
            }
        }
    }

    fn units(&self) -> Result<Units> {
        let d = Units::default();
        Units::new(self.hbar.unwrap_or(d.hbar), self.mass.unwrap_or(d.mass))
    }

    fn need(value: Option<f64>, name: &'static str) -> Result<f64> {
        value.ok_or_else(|| Error::invalid(name, "required"))
    }

    fn barrier(&self) -> Result<BarrierParams> {
        BarrierParams::new(
            self.units()?,
            Self::need(self.v0, "V0")?,
            Self::need(self.eps, "eps")?,
            Self::need(self.omega, "omega")?,
            Self::need(self.energy, "E")?,
        )
    }

    fn trunc_options(&self) -> TruncationOptions {
        match self.tol {
            Some(tol) => TruncationOptions::with_tol(tol),
            None => TruncationOptions::default(),
        }
    }

    fn omega_grid(&self, lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
        let lo = self.omega_min.unwrap_or(lo);
        let hi = self.omega_max.unwrap_or(hi);
        let n = self.omega_points.unwrap_or(points);
        if n == 0 {
            return Err(Error::invalid("omega-points", "must be >= 1"));
        }
        if n == 1 {
            return Ok(vec![lo]);
        }
        if !(hi > lo) {
            return Err(Error::invalid(
                "omega-max",
                format!("must exceed omega-min ({hi} <= {lo})"),
            ));
        }
        Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
    }

    fn propagation(&self) -> Result<PropagationOptions> {
        let mut o = PropagationOptions::default();
        if let Some(tol) = self.tol {
            o.tol = tol;
        }
        Ok(o)
    }
}

/// Well, packet, final time and level count for the packet subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PacketSetup {
    pub well: WellSpec,
    pub packet: PacketSpec,
    pub t_final: f64,
}

fn packet_setup(flags: &Flags, params: &BarrierParams) -> Result<PacketSetup> {
    let units = params.units();
    let length = flags.length.unwrap_or(40.0);
    let probe = WellSpec::new(length, 2)?;
    let k_mean = match flags.k_mean {
        Some(k) => k,
        None => units.k_squared(params.energy()).sqrt(),
    };
    let base = PacketSpec::left_half(&probe, k_mean)?;
    let packet = PacketSpec::new(flags.x0.unwrap_or(base.x0), flags.sigma.unwrap_or(base.sigma), k_mean)?;
    let levels = match flags.levels {
        Some(n) => n,
        None => default_levels(length, &packet, params),
    };
    let well = WellSpec::new(length, levels)?;
    let t_final = flags.t_final.unwrap_or_else(|| default_t_final(&well, &packet, units));
    Ok(PacketSetup { well, packet, t_final })
}

fn tdse_params(flags: &Flags) -> Result<BarrierParams> {
    let units = flags.units()?;
    let energy = match (flags.energy, flags.k_mean) {
        (Some(e), _) => e,
        (None, Some(k)) => units.energy_of_k(k),
        (None, None) => return Err(Error::invalid("E", "required (or give --k-mean)")),
    };
    BarrierParams::new(
        units,
        Flags::need(flags.v0, "V0")?,
        Flags::need(flags.eps, "eps")?,
        Flags::need(flags.omega, "omega")?,
        energy,
    )
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn solution_output(sol: &SidebandSolution, format: Format) -> Result<String> {
    match format {
        Format::Csv => Ok(sideband_csv(sol)),
        Format::Json => json(sol),
    }
}

pub fn cmd_fs(flags: &Flags) -> Result<String> {
    let params = flags.barrier()?;
    let sol = match flags.trunc {
        Some(h) => solve_fs(&params, -h, h)?,
        None => converge_truncation(&params, &flags.trunc_options())?,
    };
    eprintln!(
        "fs: window {:?}, transmitted {:.12}, flux sum {:.15}",
        sol.window(),
        sol.transmitted_flux,
        sol.flux_sum()
    );
    solution_output(&sol, flags.format.unwrap_or(Format::Json))
}

pub fn cmd_ts(flags: &Flags) -> Result<String> {
    let params = flags.barrier()?;
    let sol = solve_ts_with_tail(&params, flags.trunc.unwrap_or(crate::ts::DEFAULT_TAIL))?;
    eprintln!(
        "ts: transmitted {:.12}, flux sum {:.15}",
        sol.transmitted_flux,
        sol.flux_sum()
    );
    solution_output(&sol, flags.format.unwrap_or(Format::Json))
}

#[derive(Debug, Serialize)]
struct SweepMeta<'a> {
    template: &'a BarrierParams,
    solver: Solver,
    tau_delta: f64,
    fit: Option<LinearFit>,
}

fn sidecar_path(out: &Path) -> PathBuf {
    if out.extension().is_some_and(|e| e == "json") {
        out.with_extension("fit.json")
    } else {
        out.with_extension("json")
    }
}

pub fn cmd_sweep(flags: &Flags) -> Result<(String, Option<String>)> {
    let template = BarrierParams::new(
        flags.units()?,
        Flags::need(flags.v0, "V0")?,
        Flags::need(flags.eps, "eps")?,
        1.0,
        Flags::need(flags.energy, "E")?,
    )?;
    let grid = flags.omega_grid(0.01, 0.2, 20)?;
    let result: SweepResult = frequency_sweep(
        &template,
        &grid,
        flags.solver.unwrap_or(Solver::Fs),
        &flags.trunc_options(),
    )?;
    match &result.fit {
        Some(fit) => eprintln!(
            "sweep: slope {:.10e} (tau_delta {:.10e}), intercept {:.3e}, R^2 {:.8}",
            fit.slope, result.tau_delta, fit.intercept, fit.r_squared
        ),
        None => eprintln!("sweep: fewer than two regime A/B points, no fit"),
    }
    let meta = SweepMeta {
        template: &result.template,
        solver: result.solver,
        tau_delta: result.tau_delta,
        fit: result.fit,
    };
    match flags.format.unwrap_or(Format::Csv) {
        Format::Csv => Ok((sweep_csv(&result), Some(json(&meta)?))),
        Format::Json => Ok((json(&result)?, None)),
    }
}

#[derive(Debug, Serialize)]
struct TdseReport {
    params: BarrierParams,
    setup: PacketSetup,
    phases: Vec<f64>,
    plateau: Plateau,
    max_norm_drift: f64,
    trace: Vec<(f64, f64, f64)>,
}

pub fn cmd_tdse(flags: &Flags) -> Result<String> {
    let params = tdse_params(flags)?;
    let setup = packet_setup(flags, &params)?;
    let count = match flags.phases.unwrap_or(1) {
        0 => phase_count(&setup.packet, &params),
        n => n,
    };
    let run = propagate_phase_averaged(
        &setup.well,
        &setup.packet,
        &params,
        setup.t_final,
        &flags.propagation()?,
        count,
    )?;
    let plateau = run.plateau(&PlateauOptions::default());
    eprintln!(
        "tdse: {} levels, {} phase(s), plateau P_right = {:.10} on [{:.4}, {:.4}]{}, norm drift {:.2e}",
        setup.well.n_levels,
        count,
        plateau.value,
        plateau.t_start,
        plateau.t_end,
        if plateau.found { "" } else { " (no flat stretch)" },
        run.max_norm_drift
    );
    let trace: Vec<(f64, f64, f64)> = run.trace.iter().zip(&run.norm).map(|(p, n)| (p.0, n.1, p.1)).collect();
    match flags.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut table = CsvTable::new(&["t", "norm", "P_right"]);
            for (t, n, p) in &trace {
                table.row(&[fmt_f64(*t), fmt_f64(*n), fmt_f64(*p)]);
            }
            Ok(table.finish())
        }
        Format::Json => json(&TdseReport {
            params,
            setup,
            phases: run.phases,
            plateau,
            max_norm_drift: run.max_norm_drift,
            trace,
        }),
    }
}

#[derive(Debug, Serialize)]
struct Fig2Report {
    panel: Panel,
    fs: SidebandSolution,
    ts: SidebandSolution,
}

pub fn cmd_fig2(panel: Panel, flags: &Flags) -> Result<String> {
    let (e, eps) = panel.preset();
    let preset = Flags {
        energy: Some(e),
        v0: Some(10.0),
        eps: Some(eps),
        omega: Some(1.0),
        hbar: Some(1.0),
        mass: Some(0.5),
        ..Flags::default()
    };
    let flags = flags.clone().merge(preset);
    let params = flags.barrier()?;
    let fs = match flags.trunc {
        Some(h) => solve_fs(&params, -h, h)?,
        None => converge_truncation(&params, &flags.trunc_options())?,
    };
    let ts = solve_ts_with_tail(&params, fs.n_max)?;
    match flags.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut table = CsvTable::new(&["n", "I_fs", "I_ts", "rel_dev"]);
            for n in fs.indices() {
                let (a, b) = (fs.intensity(n), ts.intensity(n));
                table.row(&[n.to_string(), fmt_f64(a), fmt_f64(b), fmt_f64((b - a).abs() / a)]);
            }
            Ok(table.finish())
        }
        Format::Json => json(&Fig2Report { panel, fs, ts }),
    }
}

pub fn cmd_fig3(flags: &Flags) -> Result<String> {
    let preset = Flags {
        energy: Some(5.0),
        v0: Some(5.0),
        eps: Some(0.9),
        omega: Some(1.0),
        hbar: Some(1.0),
        mass: Some(0.5),
        ..Flags::default()
    };
    let flags = flags.clone().merge(preset);
    let params = tdse_params(&flags)?;
    let grid = flags.omega_grid(1.0, 12.0, 20)?;
    let opts = flags.propagation()?;
    let phases = flags.phases.filter(|&n| n > 0);
    let rows = grid
        .par_iter()
        .map(|&omega| {
            let p = params.with_omega(omega)?;
            let setup = packet_setup(&flags, &p)?;
            compare_with_dynamics(&p, &setup.well, &setup.packet, omega, setup.t_final, &opts, phases)
        })
        .collect::<Result<Vec<_>>>()?;
    let worst = rows.iter().map(|r| r.relative_deviation()).fold(0.0, f64::max);
    eprintln!(
        "fig3: {} frequencies, largest relative deviation {worst:.3e}",
        rows.len()
    );
    match flags.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut table = CsvTable::new(&["omega", "P_fs", "P_tdse", "rel_dev"]);
            for r in &rows {
                table.row(&[
                    fmt_f64(r.omega),
                    fmt_f64(r.p_fs),
                    fmt_f64(r.p_tdse),
                    fmt_f64(r.relative_deviation()),
                ]);
            }
            Ok(table.finish())
        }
        Format::Json => json(&rows),
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Fs(f) => {
            let f = f.resolve()?;
            emit(&f.out, &cmd_fs(&f)?)
        }
        Command::Ts(f) => {
            let f = f.resolve()?;
            emit(&f.out, &cmd_ts(&f)?)
        }
        Command::Sweep(f) => {
            let f = f.resolve()?;
            let (body, meta) = cmd_sweep(&f)?;
            emit(&f.out, &body)?;
            if let (Some(out), Some(meta)) = (&f.out, meta) {
                std::fs::write(sidecar_path(out), meta)?;
            }
            Ok(())
        }
        Command::Tdse(f) => {
            let f = f.resolve()?;
            emit(&f.out, &cmd_tdse(&f)?)
        }
        Command::Fig2 { panel, flags } => {
            let f = flags.resolve()?;
            emit(&f.out, &cmd_fig2(panel, &f)?)
        }
        Command::Fig3(f) => {
            let f = f.resolve()?;
            emit(&f.out, &cmd_fig3(&f)?)
        }
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err.root_cause() {
        Error::InvalidParameter { .. } | Error::WindowTooSmall { .. } | Error::Domain(_) | Error::Parse(_) => {
            EXIT_USAGE
        }
        e if e.is_convergence_failure() => EXIT_CONVERGENCE,
        _ => EXIT_SOLVER,
    }
}

/// Parses `args` (program name first), runs, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win_over_config() {
        let file: Flags = toml::from_str("E = 1.0\nV0 = 10\neps = 0.5\nomega-min = 0.02\n").unwrap();
        let cli = Flags {
            energy: Some(2.5),
            ..Flags::default()
        };
        let m = cli.merge(file);
        assert_eq!(m.energy, Some(2.5));
        assert_eq!(m.v0, Some(10.0));
        assert_eq!(m.omega_min, Some(0.02));
    }

    #[test]
    fn unknown_config_key_rejected() {
        assert!(toml::from_str::<Flags>("energy = 1.0\n").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::invalid("E", "x")), EXIT_USAGE);
        assert_eq!(exit_code(&Error::SingularPivot { n: 0 }), EXIT_SOLVER);
        let conv = Error::AtFrequency {
            omega: 1.0,
            source: Box::new(Error::StepUnderflow {
                t: 0.0,
                h: 0.0,
                norm: 1.0,
            }),
        };
        assert_eq!(exit_code(&conv), EXIT_CONVERGENCE);
    }

    #[test]
    fn sidecar_names() {
        assert_eq!(sidecar_path(Path::new("a/s.csv")), PathBuf::from("a/s.json"));
        assert_eq!(sidecar_path(Path::new("s.json")), PathBuf::from("s.fit.json"));
    }

    #[test]
    fn panel_presets() {
        assert_eq!(Panel::D.preset(), (2.5, 0.5));
    }
}
