//! Experiments behind the subcommands. Each `*_table` function is pure; the
//! `run_*` functions write its tables through an [`OutputSession`].

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use bjj_core::dynamics::{eigendecompose, hamiltonian, trajectory, uniform_times, Propagator};
use bjj_core::eqpm::{cov_pi, cov_zero, omega_pi_squared, omega_zero_squared};
use bjj_core::oat::oat_trajectory;
use bjj_core::optimize::minimize_sampled;
use bjj_core::spin::StateVector;
use bjj_core::wigner::{separatrix, wigner, GridSpec};
use bjj_core::witness::{
    fit_taylor_coeffs, taylor_zeta2, zeta2_min, MinimumRegime, TaylorFit, TaylorModel,
    WitnessRecord,
};
use bjj_core::ModelParams;
use rayon::prelude::*;

use crate::config::{
    Comparison, FitProtocol, Format, InitialState, OutputKind, RunConfig, SweepConfig,
};
use crate::output::{Cell, OutputSession, Table};
use crate::{CliError, Result};

pub const EVOLVE_COLUMNS: &[&str] = &[
    "t",
    "omega_t",
    "nchi_t",
    "jx_mean",
    "gzz",
    "gyy",
    "gyz",
    "lambda_plus",
    "lambda_minus",
    "xi2_opt",
    "zeta2_opt",
    "analytic_jx_mean",
    "analytic_gzz",
    "analytic_gyy",
    "analytic_gyz",
    "analytic_xi2_opt",
    "analytic_zeta2_opt",
    "oat_jx_mean",
    "oat_xi2_opt",
    "oat_zeta2_opt",
];

pub const SWEEP_COLUMNS: &[&str] = &[
    "lambda",
    "status",
    "t_min",
    "omega_t_min",
    "zeta2_min_numeric",
    "zeta2_min_analytic",
    "p2_fit",
    "p3_fit",
    "p4_fit",
    "p2_analytic",
    "p3_analytic",
    "p4_analytic",
    "r_numeric",
    "r_analytic",
    "message",
];

pub const FIT_COLUMNS: &[&str] = &[
    "source",
    "lambda",
    "p1",
    "p2",
    "p3",
    "p4",
    "p1_analytic",
    "p2_analytic",
    "p3_analytic",
    "p4_analytic",
    "residual_norm",
    "condition",
    "samples",
];

pub const WIGNER_COLUMNS: &[&str] = &["t", "theta", "phi", "w_raw", "w_peak_normalized"];

pub const SEPARATRIX_COLUMNS: &[&str] = &["phi", "z_plus", "z_minus"];

pub const OAT_COMPARE_COLUMNS: &[&str] = &[
    "t",
    "omega_t",
    "nchi_t",
    "zeta2_oat",
    "xi2_oat",
    "zeta2_bjj",
    "xi2_bjj",
    "zeta2_gap",
];

const SEPARATRIX_POINTS: usize = 721;

/// Frequency that makes `ωt` dimensionless in the regime of the initial
/// state: `|ω_π|` or `ω_0` for the coherent states, `Ω` otherwise.
pub fn regime_frequency(state: &InitialState, params: &ModelParams) -> f64 {
    let n = params.n_particles();
    match (state, params.lambda()) {
        (InitialState::CssPi, Some(l)) => omega_pi_squared(l, n).abs().sqrt(),
        (InitialState::CssZero, Some(l)) => omega_zero_squared(l, n).sqrt(),
        _ => params.omega(),
    }
}

fn model_for(state: &InitialState) -> Option<TaylorModel> {
    match state {
        InitialState::CssPi => Some(TaylorModel::Pi),
        InitialState::CssZero => Some(TaylorModel::Zero),
        InitialState::Custom { .. } => None,
    }
}

/// Closed-form Gaussian records on the same time grid.
pub fn analytic_records(
    params: &ModelParams,
    state: &InitialState,
    times: &[f64],
) -> Result<Vec<WitnessRecord>> {
    let lambda = params
        .lambda()
        .ok_or_else(|| CliError::config("analytic comparison needs Ω > 0"))?;
    let n = params.n_particles();
    let cov = match state {
        InitialState::CssPi => cov_pi,
        InitialState::CssZero => cov_zero,
        InitialState::Custom { .. } => {
            return Err(CliError::config(
                "analytic comparison needs --state pi or --state zero",
            ))
        }
    };
    times
        .iter()
        .map(|&t| {
            let (gamma, jx_scaled) = cov(t, lambda, n)?;
            Ok(WitnessRecord::new(t, 0.5 * n as f64 * jx_scaled, gamma, n)?)
        })
        .collect()
}

pub fn evolve_table(cfg: &RunConfig) -> Result<Table> {
    cfg.validate()?;
    let n = cfg.params.n_particles();
    let times = cfg.times();
    let psi0 = cfg.initial_state.prepare(n)?;
    let records = trajectory(&cfg.params, &psi0, &times)?;
    let analytic = if cfg.compare.contains(&Comparison::Analytic) {
        Some(analytic_records(&cfg.params, &cfg.initial_state, &times)?)
    } else {
        None
    };
    let oat = if cfg.compare.contains(&Comparison::Oat) {
        Some(oat_trajectory(n, cfg.params.chi(), &times)?)
    } else {
        None
    };
    let omega = regime_frequency(&cfg.initial_state, &cfg.params);
    let nchi = n as f64 * cfg.params.chi();

    let mut table = Table::new("evolve", EVOLVE_COLUMNS);
    for (i, r) in records.iter().enumerate() {
        let mut row: Vec<Cell> = [
            r.t,
            omega * r.t,
            nchi * r.t,
            r.jx_mean,
            r.gamma.gzz,
            r.gamma.gyy,
            r.gamma.gyz,
            r.lambda_plus,
            r.lambda_minus,
            r.xi2_opt,
            r.zeta2_opt,
        ]
        .into_iter()
        .map(Cell::from)
        .collect();
        let a = analytic.as_ref().map(|a| &a[i]);
        row.extend(
            [
                a.map(|a| a.jx_mean),
                a.map(|a| a.gamma.gzz),
                a.map(|a| a.gamma.gyy),
                a.map(|a| a.gamma.gyz),
                a.map(|a| a.xi2_opt),
                a.map(|a| a.zeta2_opt),
            ]
            .into_iter()
            .map(|x| Cell::from(x.unwrap_or(f64::NAN))),
        );
        let o = oat.as_ref().map(|o| &o[i]);
        row.extend(
            [
                o.map(|o| o.jx_mean),
                o.map(|o| o.xi2_opt),
                o.map(|o| o.zeta2_opt),
            ]
            .into_iter()
            .map(|x| Cell::from(x.unwrap_or(f64::NAN))),
        );
        table.push(row);
    }
    Ok(table)
}

/// Exact ζ² fit over the short-time window, in powers of `Nχt`.
pub fn fit_exact(params: &ModelParams, psi0: &StateVector, fit: FitProtocol) -> Result<TaylorFit> {
    let n = params.n_particles();
    let t_window = fit.window / (n as f64 * params.chi());
    let records = trajectory(params, psi0, &uniform_times(t_window, fit.samples))?;
    Ok(fit_taylor_coeffs(
        &records,
        n,
        params.chi(),
        fit.degree,
        fit.window,
    )?)
}

/// The same fit applied to the closed-form one-axis-twisting trajectory.
pub fn fit_oat(n_particles: usize, fit: FitProtocol) -> Result<TaylorFit> {
    let t_window = fit.window / n_particles as f64;
    let records = oat_trajectory(n_particles, 1.0, &uniform_times(t_window, fit.samples))?;
    Ok(fit_taylor_coeffs(
        &records,
        n_particles,
        1.0,
        fit.degree,
        fit.window,
    )?)
}

/// Fitted and analytic coefficients of the chosen state and of one-axis
/// twisting, both in powers of `Nχt`.
pub fn fit_table(params: &ModelParams, state: &InitialState, fit: FitProtocol) -> Result<Table> {
    let n = params.n_particles();
    let lambda = params.lambda().unwrap_or(f64::NAN);
    let bjj = fit_exact(params, &state.prepare(n)?, fit)?;
    let bjj_analytic = match (model_for(state), params.lambda()) {
        (Some(m), Some(l)) => Some(taylor_zeta2(m, l)?.as_array()),
        _ => None,
    };
    let oat = fit_oat(n, fit)?;
    let oat_analytic = taylor_zeta2(TaylorModel::OneAxisTwisting, 1.0)?.as_array();

    let mut table = Table::new("fit", FIT_COLUMNS);
    for (source, lam, f, analytic) in [
        (state.name(), lambda, &bjj, bjj_analytic),
        ("oat", f64::NAN, &oat, Some(oat_analytic)),
    ] {
        let mut row = vec![Cell::from(source), lam.into()];
        row.extend(f.coeffs.as_array().map(Cell::from));
        row.extend(analytic.unwrap_or([f64::NAN; 4]).map(Cell::from));
        row.push(f.residual_norm.into());
        row.push(f.condition.into());
        row.push((f.samples as f64).into());
        table.push(row);
    }
    Ok(table)
}

/// Search window for the minimum of ζ²: the first period for stable motion,
/// `1/|ω_π|` for the unstable fixed point.
pub fn natural_window(state: &InitialState, lambda: f64, n_particles: usize) -> Result<f64> {
    let w2 = match state {
        InitialState::CssPi => omega_pi_squared(lambda, n_particles),
        InitialState::CssZero => omega_zero_squared(lambda, n_particles),
        InitialState::Custom { .. } => {
            return Err(CliError::config("sweeps of a custom state need --t-max"))
        }
    };
    if w2.abs() < 1e-12 {
        return Err(bjj_core::Error::CriticalPoint { lambda }.into());
    }
    Ok(if w2 > 0.0 {
        PI / w2.sqrt()
    } else {
        1.0 / (-w2).sqrt()
    })
}

/// `(t, ζ²)` at the smallest ζ² of the exact trajectory on `[0, window]`.
pub fn exact_zeta2_minimum(
    propagator: &Propagator,
    window: f64,
    samples: usize,
) -> Result<(f64, f64)> {
    let mut failure = None;
    let best = minimize_sampled(
        |t| match propagator.record_at(t) {
            Ok(r) => r.zeta2_opt,
            Err(e) => {
                failure.get_or_insert(e);
                f64::INFINITY
            }
        },
        0.0,
        window,
        samples,
        window * 1e-7,
    );
    match failure {
        Some(e) => Err(e.into()),
        None => Ok(best),
    }
}

fn sweep_row(cfg: &SweepConfig, lambda: f64, oat: Option<&TaylorFit>) -> Result<Vec<Cell>> {
    let n = cfg.base.params.n_particles();
    let state = &cfg.base.initial_state;
    let params = ModelParams::from_lambda(n, lambda)?;
    let psi0 = state.prepare(n)?;
    let spectrum = eigendecompose(&hamiltonian(&params))?;
    let propagator = Propagator::new(&spectrum, &psi0)?;
    let window = match cfg.search_window {
        Some(t) => t,
        None => natural_window(state, lambda, n)?,
    };
    let (t_min, z_min) = exact_zeta2_minimum(&propagator, window, cfg.base.n_steps + 1)?;
    let omega = regime_frequency(state, &params);

    let fit = fit_exact(&params, &psi0, cfg.fit)?;
    let analytic = cfg.compare.contains(&Comparison::Analytic);
    let model = model_for(state).filter(|_| analytic);
    let z_analytic = match state {
        InitialState::CssPi if analytic && lambda < 1.0 => {
            zeta2_min(MinimumRegime::StablePi, lambda)?
        }
        InitialState::CssZero if analytic => zeta2_min(MinimumRegime::Zero, lambda)?,
        _ => f64::NAN,
    };
    let coeffs = match model {
        Some(m) => Some(taylor_zeta2(m, lambda)?),
        None => None,
    };
    let p_analytic = coeffs.map_or([f64::NAN; 4], |c| c.per_omega_t(lambda));
    let oat_p3 = taylor_zeta2(TaylorModel::OneAxisTwisting, 1.0)?.p3;
    let r_analytic = coeffs.map_or(f64::NAN, |c| c.p3 / oat_p3);
    let r_numeric = oat.map_or(f64::NAN, |o| fit.coeffs.p3 / o.coeffs.p3);
    let p_fit = fit.coeffs.per_omega_t(lambda);

    let mut row = vec![Cell::from(lambda), "ok".into()];
    row.extend(
        [
            t_min,
            omega * t_min,
            z_min,
            z_analytic,
            p_fit[1],
            p_fit[2],
            p_fit[3],
            p_analytic[1],
            p_analytic[2],
            p_analytic[3],
            r_numeric,
            r_analytic,
        ]
        .map(Cell::from),
    );
    row.push("".into());
    Ok(row)
}

fn error_row(lambda: f64, err: &CliError) -> Vec<Cell> {
    let mut row = vec![Cell::from(lambda), "error".into()];
    row.extend((0..SWEEP_COLUMNS.len() - 3).map(|_| Cell::from(f64::NAN)));
    row.push(err.to_string().into());
    row
}

/// One summary row per Λ, in grid order. Coefficients are per power of `Ωt`.
/// A failing Λ becomes an error row and the sweep goes on.
pub fn sweep_table(cfg: &SweepConfig, workers: usize) -> Result<Table> {
    cfg.validate()?;
    let n = cfg.base.params.n_particles();
    let oat = if cfg.compare.contains(&Comparison::Oat) {
        Some(fit_oat(n, cfg.fit)?)
    } else {
        None
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| CliError::config(format!("cannot start worker pool: {e}")))?;
    let rows: Vec<Vec<Cell>> = pool.install(|| {
        cfg.lambda_grid
            .par_iter()
            .map(|&lambda| {
                sweep_row(cfg, lambda, oat.as_ref()).unwrap_or_else(|e| error_row(lambda, &e))
            })
            .collect()
    });
    let mut table = Table::new("sweep", SWEEP_COLUMNS);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

/// One Wigner grid per snapshot, and the separatrix when `Λ > 1` or when
/// forced (an error for `Λ ≤ 1`).
pub fn wigner_tables(
    cfg: &RunConfig,
    snapshots: &[f64],
    force_separatrix: bool,
) -> Result<(Vec<Table>, Option<Table>)> {
    if snapshots.is_empty() {
        return Err(CliError::config("no snapshot times"));
    }
    if let Some(t) = snapshots.iter().find(|t| !(**t >= 0.0) || !t.is_finite()) {
        return Err(CliError::config(format!(
            "snapshot times must be non-negative, got {t}"
        )));
    }
    let lambda = cfg.lambda();
    let has_separatrix = lambda.is_some_and(|l| l > 1.0);
    if force_separatrix && !has_separatrix {
        return Err(CliError::config(format!(
            "no separatrix for Λ = {} (needs Λ > 1)",
            lambda.unwrap_or(0.0)
        )));
    }
    let n = cfg.params.n_particles();
    let psi0 = cfg.initial_state.prepare(n)?;
    let spectrum = eigendecompose(&hamiltonian(&cfg.params))?;
    let propagator = Propagator::new(&spectrum, &psi0)?;
    let grid_spec = GridSpec::for_particles(n);

    let mut grids = Vec::with_capacity(snapshots.len());
    for &t in snapshots {
        let grid = wigner(&propagator.state_at(t), grid_spec)?;
        let normalized = grid.peak_normalized();
        let mut table = Table::new("wigner", WIGNER_COLUMNS);
        let np = grid.phi_samples.len();
        for (idx, (w, w_norm)) in grid.values.iter().zip(&normalized).enumerate() {
            let (theta, phi) = (grid.theta_samples[idx / np], grid.phi_samples[idx % np]);
            table.push([t, theta, phi, *w, *w_norm].map(Cell::from).to_vec());
        }
        grids.push(table);
    }

    let sep = match lambda {
        Some(l) if has_separatrix => {
            let curve = separatrix(l, SEPARATRIX_POINTS)?;
            let mut table = Table::new("separatrix", SEPARATRIX_COLUMNS);
            for (phi, z) in curve.points {
                table.push([phi, z, -z].map(Cell::from).to_vec());
            }
            Some(table)
        }
        _ => None,
    };
    Ok((grids, sep))
}

/// ζ² and ξ² of one-axis twisting next to the exact BJJ values at equal χ.
pub fn oat_compare_table(cfg: &RunConfig) -> Result<Table> {
    cfg.validate()?;
    let n = cfg.params.n_particles();
    let times = cfg.times();
    let bjj = trajectory(&cfg.params, &cfg.initial_state.prepare(n)?, &times)?;
    let oat = oat_trajectory(n, cfg.params.chi(), &times)?;
    let omega = regime_frequency(&cfg.initial_state, &cfg.params);
    let nchi = n as f64 * cfg.params.chi();
    let mut table = Table::new("oat_compare", OAT_COMPARE_COLUMNS);
    for (b, o) in bjj.iter().zip(&oat) {
        table.push(
            [
                b.t,
                omega * b.t,
                nchi * b.t,
                o.zeta2_opt,
                o.xi2_opt,
                b.zeta2_opt,
                b.xi2_opt,
                o.zeta2_opt - b.zeta2_opt,
            ]
            .map(Cell::from)
            .to_vec(),
        );
    }
    Ok(table)
}

pub fn run_evolve(cfg: &RunConfig, fit: FitProtocol, out: &Path) -> Result<Vec<PathBuf>> {
    cfg.validate()?;
    if cfg.outputs.is_empty() {
        return Err(CliError::config("no outputs requested"));
    }
    let mut tables = Vec::new();
    if cfg.outputs.contains(&OutputKind::Witness) || cfg.outputs.contains(&OutputKind::Covariance) {
        tables.push(("evolve".to_owned(), evolve_table(cfg)?));
    }
    if cfg.outputs.contains(&OutputKind::TaylorFit) {
        tables.push((
            "fit".to_owned(),
            fit_table(&cfg.params, &cfg.initial_state, fit)?,
        ));
    }
    if cfg.outputs.contains(&OutputKind::Wigner) {
        let (grids, sep) = wigner_tables(cfg, &[cfg.t_max], false)?;
        tables.extend(grids.into_iter().map(|g| ("wigner_final".to_owned(), g)));
        tables.extend(sep.map(|s| ("separatrix".to_owned(), s)));
    }
    write_all(out, cfg.format, &tables)
}

pub fn run_sweep(cfg: &SweepConfig, workers: usize, out: &Path) -> Result<Vec<PathBuf>> {
    let table = sweep_table(cfg, workers)?;
    write_all(out, cfg.base.format, &[("sweep".to_owned(), table)])
}

pub fn run_wigner(
    cfg: &RunConfig,
    snapshots: &[f64],
    force_separatrix: bool,
    out: &Path,
) -> Result<Vec<PathBuf>> {
    let (grids, sep) = wigner_tables(cfg, snapshots, force_separatrix)?;
    let mut tables: Vec<(String, Table)> = grids
        .into_iter()
        .enumerate()
        .map(|(i, g)| (format!("wigner_{i:02}"), g))
        .collect();
    tables.extend(sep.map(|s| ("separatrix".to_owned(), s)));
    write_all(out, cfg.format, &tables)
}

pub fn run_oat_compare(cfg: &RunConfig, out: &Path) -> Result<Vec<PathBuf>> {
    let table = oat_compare_table(cfg)?;
    write_all(out, cfg.format, &[("oat_compare".to_owned(), table)])
}

pub fn run_fit(
    params: &ModelParams,
    state: &InitialState,
    fit: FitProtocol,
    format: Format,
    out: &Path,
) -> Result<Vec<PathBuf>> {
    let table = fit_table(params, state, fit)?;
    write_all(out, format, &[("fit".to_owned(), table)])
}

fn write_all(out: &Path, format: Format, tables: &[(String, Table)]) -> Result<Vec<PathBuf>> {
    let mut session = OutputSession::create(out, format)?;
    for (stem, table) in tables {
        session.write(stem, table)?;
    }
    Ok(session.finish())
}
