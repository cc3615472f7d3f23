//! Exact spectrum of the renormalized model, one combined-parity sector at a
//! time.
//!
//! Within a sector levels are indexed by ascending energy; a global label is
//! `(parity, index)`. A sector eigenvector `C` over Fock index `l` maps to the
//! spinor state `Σ_l C_l · s_l · |spin_l⟩ ⊗ S|l⟩` where `spin_l` is upper when
//! `p(−1)ˡ = +1` (with `s_l = +1`) and lower otherwise (with `s_l = −1`).

pub mod crossing;
pub mod tridiag;

use rayon::prelude::*;

use crate::error::{QrmaError, Result};
use crate::model::{build_parity_block, derive_params, ModelParams, Parity, TridiagonalBlock};
use crate::rwa::{self, Branch};
use crate::squeeze::squeezed_vacuum_photon_number;

pub use tridiag::{tridiagonal_eigen, TridiagonalEigen};

/// First basis size tried by the automatic policy.
pub const AUTO_START: usize = 64;
/// Largest basis size the automatic policy will use.
pub const AUTO_CAP: usize = 4096;
/// Absolute energy change accepted between successive basis sizes.
pub const ENERGY_TOL: f64 = 1e-10;
/// Squared weight allowed in the top Fock rows of a converged eigenvector.
pub const VECTOR_TAIL: f64 = 1e-10;

/// Basis-size policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    /// Double from [`AUTO_START`] until the requested energies settle.
    Auto,
    Fixed(usize),
}

/// Lowest eigenpairs of one parity sector.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSolution {
    pub parity: Parity,
    /// Ascending.
    pub energies: Vec<f64>,
    /// Unit-norm coefficient vectors over Fock index, first significant
    /// component positive.
    pub vectors: Vec<Vec<f64>>,
    pub n_max: usize,
    pub converged: bool,
}

impl EigenSolution {
    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }
}

/// Largest squared weight in the top 8 Fock rows over a set of vectors.
pub fn max_tail(vectors: &[Vec<f64>]) -> f64 {
    vectors
        .iter()
        .map(|v| {
            let start = v.len().saturating_sub(8);
            v[start..].iter().map(|x| x * x).sum::<f64>()
        })
        .fold(0.0, f64::max)
}

fn vectors_settled(vectors: &[Vec<f64>]) -> bool {
    max_tail(vectors) < VECTOR_TAIL
}

/// Lowest `levels` eigenpairs of a sector block.
pub fn solve_block(
    block: &TridiagonalBlock,
    parity: Parity,
    levels: usize,
) -> Result<EigenSolution> {
    if levels > block.len() {
        return Err(QrmaError::InvalidParameter(format!(
            "requested {levels} levels from a block of size {}",
            block.len()
        )));
    }
    let TridiagonalEigen {
        mut values,
        mut vectors,
    } = tridiagonal_eigen(block, true)?;
    values.truncate(levels);
    vectors.truncate(levels);
    let converged = vectors_settled(&vectors);
    Ok(EigenSolution {
        parity,
        energies: values,
        vectors,
        n_max: block.len(),
        converged,
    })
}

fn lowest_values(p: &ModelParams, parity: Parity, n_max: usize, levels: usize) -> Result<Vec<f64>> {
    let block = build_parity_block(p, parity, n_max)?;
    let mut v = tridiagonal_eigen(&block, false)?.values;
    v.truncate(levels);
    Ok(v)
}

/// Basis size at which the lowest `levels` energies of every listed sector
/// change by less than [`ENERGY_TOL`] on doubling.
pub fn auto_size(p: &ModelParams, sectors: &[Parity], levels: usize) -> Result<usize> {
    let mut n = AUTO_START;
    while n < levels + 16 {
        n *= 2;
    }
    if n > AUTO_CAP {
        return Err(QrmaError::InvalidParameter(format!(
            "{levels} levels exceed the automatic basis-size cap {AUTO_CAP}"
        )));
    }
    let mut previous: Vec<Vec<f64>> = sectors
        .iter()
        .map(|&s| lowest_values(p, s, n, levels))
        .collect::<Result<_>>()?;
    let mut change = f64::INFINITY;
    while n < AUTO_CAP {
        let next = n * 2;
        let current: Vec<Vec<f64>> = sectors
            .iter()
            .map(|&s| lowest_values(p, s, next, levels))
            .collect::<Result<_>>()?;
        change = previous
            .iter()
            .zip(&current)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max);
        if change < ENERGY_TOL {
            return Ok(next);
        }
        previous = current;
        n = next;
    }
    Err(QrmaError::TruncationCap {
        cap: AUTO_CAP,
        change,
        tol: ENERGY_TOL,
    })
}

pub fn resolve_size(
    p: &ModelParams,
    sectors: &[Parity],
    levels: usize,
    trunc: Truncation,
) -> Result<usize> {
    match trunc {
        Truncation::Auto => auto_size(p, sectors, levels),
        Truncation::Fixed(n) => Ok(n),
    }
}

/// Lowest `levels` eigenpairs of one sector under the given truncation policy.
pub fn solve_sector(
    p: &ModelParams,
    parity: Parity,
    levels: usize,
    trunc: Truncation,
) -> Result<EigenSolution> {
    let n = resolve_size(p, &[parity], levels, trunc)?;
    let block = build_parity_block(p, parity, n)?;
    let mut sol = solve_block(&block, parity, levels)?;
    if trunc == Truncation::Auto {
        // auto_size already checked the energies
        sol.converged = true;
    }
    Ok(sol)
}

/// Both sectors at a shared basis size, `[Even, Odd]`.
pub fn solve_both(p: &ModelParams, levels: usize, trunc: Truncation) -> Result<[EigenSolution; 2]> {
    let n = resolve_size(p, &Parity::BOTH, levels, trunc)?;
    let even = solve_block(
        &build_parity_block(p, Parity::Even, n)?,
        Parity::Even,
        levels,
    )?;
    let odd = solve_block(&build_parity_block(p, Parity::Odd, n)?, Parity::Odd, levels)?;
    let mut out = [even, odd];
    if trunc == Truncation::Auto {
        out.iter_mut().for_each(|s| s.converged = true);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    pub energy: f64,
    pub parity: Parity,
    pub vector: Vec<f64>,
    pub n_max: usize,
    pub converged: bool,
}

/// Lowest level over both sectors.
pub fn ground_state(p: &ModelParams, trunc: Truncation) -> Result<GroundState> {
    let [even, odd] = solve_both(p, 1, trunc)?;
    let pick = if odd.energies[0] < even.energies[0] {
        odd
    } else {
        even
    };
    Ok(GroundState {
        energy: pick.energies[0],
        parity: pick.parity,
        vector: pick.vectors.into_iter().next().unwrap_or_default(),
        n_max: pick.n_max,
        converged: pick.converged,
    })
}

/// Photon number `⟨a†a⟩` of an exact eigenstate in the original frame,
/// from its sector coefficients `c`:
///
/// `(Ω−1)²/(4Ω) + (Ω²+1)/(2Ω)·Σ k c_k² + ¼(1/Ω − Ω)·Σ √((k+1)(k+2))·2c_k c_{k+2}`.
pub fn photon_number_exact(c: &[f64], omega: f64) -> f64 {
    let number: f64 = c.iter().enumerate().map(|(k, x)| k as f64 * x * x).sum();
    let pair: f64 = c
        .windows(3)
        .enumerate()
        .map(|(k, w)| (((k + 1) * (k + 2)) as f64).sqrt() * 2.0 * w[0] * w[2])
        .sum();
    squeezed_vacuum_photon_number(omega)
        + (omega * omega + 1.0) / (2.0 * omega) * number
        + 0.25 * (1.0 / omega - omega) * pair
}

/// Rotating-wave label of a sector level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelLabel {
    Ground,
    Doublet { n: usize, branch: Branch },
}

/// Rotating-wave quantum numbers attached to sector index `index`.
///
/// Doublet `n` lives in sector `(−1)ⁿ`; the ground state `χ↓|0⟩` in the odd
/// sector. Labels follow the zero-coupling ordering, with `E⁻ₙ` at index `n`.
pub fn rwa_label(parity: Parity, index: usize) -> LevelLabel {
    let branch = |i: usize| {
        if i.is_multiple_of(2) {
            Branch::Minus
        } else {
            Branch::Plus
        }
    };
    match parity {
        Parity::Even => LevelLabel::Doublet {
            n: 2 * (index / 2),
            branch: branch(index),
        },
        Parity::Odd if index == 0 => LevelLabel::Ground,
        Parity::Odd => LevelLabel::Doublet {
            n: 2 * ((index - 1) / 2) + 1,
            branch: branch(index - 1),
        },
    }
}

/// Rotating-wave energy and photon number for a labelled level.
pub fn rwar_values(p: &ModelParams, label: LevelLabel) -> Result<(f64, f64)> {
    match label {
        LevelLabel::Ground => Ok((rwa::rwar_ground(p)?, rwa::rwa_photon_number(p)?)),
        LevelLabel::Doublet { n, branch } => {
            let level = rwa::rwar_level(p, n, branch)?;
            Ok((level.energy, rwa::rwa_level_photon_number(p, &level)?))
        }
    }
}

/// One level at one coupling.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRow {
    pub f: f64,
    pub parity: Parity,
    pub level: usize,
    pub e_exact: f64,
    pub e_rwar: f64,
    pub photon_exact: f64,
    pub photon_rwa: f64,
}

fn rows_at(
    base: &ModelParams,
    f: f64,
    levels: usize,
    trunc: Truncation,
) -> Result<Vec<SpectrumRow>> {
    let p = base.with_coupling(f)?;
    let omega = derive_params(&p)?.omega;
    let sectors = solve_both(&p, levels, trunc)?;
    let mut rows = Vec::with_capacity(2 * levels);
    for sol in &sectors {
        if !sol.converged {
            return Err(QrmaError::TruncationInsufficient {
                n_max: sol.n_max,
                tail: max_tail(&sol.vectors),
                limit: VECTOR_TAIL,
            });
        }
        for (i, (e, c)) in sol.energies.iter().zip(&sol.vectors).enumerate() {
            let (e_rwar, photon_rwa) = rwar_values(&p, rwa_label(sol.parity, i))?;
            rows.push(SpectrumRow {
                f,
                parity: sol.parity,
                level: i,
                e_exact: *e,
                e_rwar,
                photon_exact: photon_number_exact(c, omega),
                photon_rwa,
            });
        }
    }
    Ok(rows)
}

/// Spectrum over a coupling grid: `levels` rows per sector per grid point,
/// ordered by grid position, then parity (+1 first), then level index.
///
/// Grid points are evaluated in parallel; the output order depends only on
/// the grid.
pub fn sweep(
    base: &ModelParams,
    f_grid: &[f64],
    levels: usize,
    trunc: Truncation,
) -> Result<Vec<SpectrumRow>> {
    if f_grid.is_empty() {
        return Err(QrmaError::InvalidParameter("empty coupling grid".into()));
    }
    if levels == 0 {
        return Err(QrmaError::InvalidParameter("levels must be >= 1".into()));
    }
    let per_point: Vec<Vec<SpectrumRow>> = f_grid
        .par_iter()
        .map(|&f| rows_at(base, f, levels, trunc))
        .collect::<Result<_>>()?;
    Ok(per_point.into_iter().flatten().collect())
}

/// `steps` evenly spaced points from `lo` to `hi` inclusive (`lo` alone when
/// `steps == 1`).
pub fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..steps)
            .map(|i| {
                if i == steps - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (steps - 1) as f64
                }
            })
            .collect(),
    }
}
