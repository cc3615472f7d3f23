//! One table builder per subcommand. Each is a pure function of the config.

use qrma_core::dynamics::{
    exact_inversion, rwa_inversion_series, InitialCondition, TimeGrid, TimeSeries,
};
use qrma_core::fourier::{fourier_spectrum, FrequencySpectrum};
use qrma_core::spectrum::crossing::{exact_crossings, rwar_crossings};
use qrma_core::spectrum::{
    ground_state, linspace, max_tail, photon_number_exact, sweep, VECTOR_TAIL,
};
use qrma_core::{derive_params, rwa, ModelParams, QrmaError};
use rayon::prelude::*;

use crate::config::{Command, RunConfig, Series};
use crate::output::{Cell, Table};
use crate::CliError;

pub fn build(cfg: &RunConfig) -> Result<Table, CliError> {
    match cfg.command {
        Command::Spectrum => spectrum(cfg),
        Command::Ground => ground(cfg),
        Command::Photon => photon(cfg),
        Command::Dynamics => dynamics(cfg),
        Command::Wspec if cfg.long => wspec_long(cfg),
        Command::Wspec => wspec(cfg),
        Command::Crossings => crossings(cfg),
    }
}

fn f_grid(cfg: &RunConfig) -> Vec<f64> {
    linspace(cfg.f_min, cfg.f_max, cfg.f_steps)
}

fn not_converged(n_max: usize, vector: &[f64]) -> CliError {
    CliError::Convergence(QrmaError::TruncationInsufficient {
        n_max,
        tail: max_tail(&[vector.to_vec()]),
        limit: VECTOR_TAIL,
    })
}

pub fn spectrum(cfg: &RunConfig) -> Result<Table, CliError> {
    let rows = sweep(&cfg.base_params()?, &f_grid(cfg), cfg.levels, cfg.n_max)?;
    let mut t = Table::new(&["f", "parity", "level", "E_exact", "E_rwar"]);
    for r in rows {
        t.push(vec![
            Cell::Num(r.f),
            Cell::Int(r.parity.value().into()),
            Cell::Int(r.level as i64),
            Cell::Num(r.e_exact),
            Cell::Num(r.e_rwar),
        ]);
    }
    Ok(t)
}

struct GroundPoint {
    f: f64,
    parity: i32,
    energy: f64,
    e_rwar: f64,
    n_exact: f64,
    n_rwa: f64,
}

fn ground_points(cfg: &RunConfig) -> Result<Vec<GroundPoint>, CliError> {
    let base = cfg.base_params()?;
    f_grid(cfg)
        .par_iter()
        .map(|&f| {
            let p = base.with_coupling(f)?;
            let g = ground_state(&p, cfg.n_max)?;
            if !g.converged {
                return Err(not_converged(g.n_max, &g.vector));
            }
            Ok(GroundPoint {
                f,
                parity: g.parity.value(),
                energy: g.energy,
                e_rwar: rwa::rwar_ground(&p)?,
                n_exact: photon_number_exact(&g.vector, derive_params(&p)?.omega),
                n_rwa: rwa::rwa_photon_number(&p)?,
            })
        })
        .collect()
}

pub fn ground(cfg: &RunConfig) -> Result<Table, CliError> {
    let mut t = Table::new(&["f", "parity", "E_exact", "E_rwar"]);
    for g in ground_points(cfg)? {
        t.push(vec![
            Cell::Num(g.f),
            Cell::Int(g.parity.into()),
            Cell::Num(g.energy),
            Cell::Num(g.e_rwar),
        ]);
    }
    Ok(t)
}

pub fn photon(cfg: &RunConfig) -> Result<Table, CliError> {
    let mut t = Table::new(&["f", "n_exact", "n_rwa"]);
    for g in ground_points(cfg)? {
        t.push(vec![
            Cell::Num(g.f),
            Cell::Num(g.n_exact),
            Cell::Num(g.n_rwa),
        ]);
    }
    Ok(t)
}

fn series_pair(cfg: &RunConfig, p: &ModelParams) -> Result<(TimeSeries, TimeSeries), CliError> {
    let ic = InitialCondition::new(cfg.epsilon)?;
    let grid = TimeGrid::new(cfg.t_max, cfg.samples)?;
    let exact = exact_inversion(p, &ic, &grid, cfg.n_max)?;
    let rwa = rwa_inversion_series(p, &ic, &grid)?;
    Ok((exact, rwa))
}

pub fn dynamics(cfg: &RunConfig) -> Result<Table, CliError> {
    let (exact, rwa) = series_pair(cfg, &cfg.base_params()?)?;
    let mut t = Table::new(&["t", "w_exact", "w_rwa"]);
    for (i, (we, wr)) in exact.w.iter().zip(&rwa.w).enumerate() {
        t.push(vec![
            Cell::Num(exact.grid.time(i)),
            Cell::Num(*we),
            Cell::Num(*wr),
        ]);
    }
    Ok(t)
}

pub fn wspec(cfg: &RunConfig) -> Result<Table, CliError> {
    let (exact, rwa) = series_pair(cfg, &cfg.base_params()?)?;
    let se = fourier_spectrum(&exact, cfg.window.into())?;
    let sr = fourier_spectrum(&rwa, cfg.window.into())?;
    let mut t = Table::new(&["omega", "mag_exact", "mag_rwa"]);
    for ((om, me), mr) in se.freqs.iter().zip(&se.mags).zip(&sr.mags) {
        t.push(vec![Cell::Num(*om), Cell::Num(*me), Cell::Num(*mr)]);
    }
    Ok(t)
}

/// Heatmap data: one spectrum per coupling in long format.
pub fn wspec_long(cfg: &RunConfig) -> Result<Table, CliError> {
    let base = cfg.base_params()?;
    let ic = InitialCondition::new(cfg.epsilon)?;
    let grid = TimeGrid::new(cfg.t_max, cfg.samples)?;
    let spectra: Vec<(f64, FrequencySpectrum)> = f_grid(cfg)
        .par_iter()
        .map(|&f| {
            let p = base.with_coupling(f)?;
            let ts = match cfg.series {
                Series::Exact => exact_inversion(&p, &ic, &grid, cfg.n_max)?,
                Series::Rwa => rwa_inversion_series(&p, &ic, &grid)?,
            };
            Ok((f, fourier_spectrum(&ts, cfg.window.into())?))
        })
        .collect::<Result<_, CliError>>()?;
    let mut t = Table::new(&["f", "omega", "mag"]);
    for (f, s) in spectra {
        for (om, m) in s.freqs.iter().zip(&s.mags) {
            t.push(vec![Cell::Num(f), Cell::Num(*om), Cell::Num(*m)]);
        }
    }
    Ok(t)
}

/// Crossings for `n = 0..levels`, searched on the coupling grid. One row per
/// crossing found; `n` without any crossing produces no row.
pub fn crossings(cfg: &RunConfig) -> Result<Table, CliError> {
    let base = cfg.base_params()?;
    let grid = cfg.f_steps.max(2);
    let per_n: Vec<(usize, Vec<f64>, Vec<f64>)> = (0..cfg.levels)
        .into_par_iter()
        .map(|n| {
            let rwa = rwar_crossings(&base, n, cfg.f_min, cfg.f_max, grid)?;
            let exact = exact_crossings(&base, n, cfg.f_min, cfg.f_max, grid, cfg.n_max)?;
            Ok((n, rwa, exact))
        })
        .collect::<Result<_, CliError>>()?;
    let mut t = Table::new(&["n", "f_star_rwa", "f_star_exact"]);
    let cell = |v: &[f64], i: usize| v.get(i).map_or(Cell::Empty, |x| Cell::Num(*x));
    for (n, rwa, exact) in per_n {
        for i in 0..rwa.len().max(exact.len()) {
            t.push(vec![Cell::Int(n as i64), cell(&rwa, i), cell(&exact, i)]);
        }
    }
    Ok(t)
}
