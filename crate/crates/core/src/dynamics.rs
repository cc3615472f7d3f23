//! Coherent-state dynamics of the atomic inversion.
//!
//! The atom starts in the lower state and the field in a coherent state
//! `|ε⟩`. In the squeezed frame the initial field state is `S†|ε⟩`; it is
//! projected onto the eigenstates of both parity sectors and evolved by
//! phase factors. Tracing out the field is unaffected by the squeeze (it acts
//! on the field only), so the atomic density matrix is read off the
//! squeezed-frame amplitudes directly.
//!
//! Sign convention: `w = P↓ − P↑`, so the initial state has `w(0) = +1`.

use nalgebra::{DVector, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{QrmaError, Result};
use crate::model::{build_parity_block, build_qrma_dense, derive_params, ModelParams, Parity};
use crate::rwa::RwaInversion;
use crate::spectrum::{solve_block, EigenSolution, Truncation, AUTO_CAP, AUTO_START, VECTOR_TAIL};
use crate::squeeze::{self, coherent_amplitudes, squeezed_coherent_overlaps, SqueezeSpec};

/// Allowed loss of norm in the initial-state projection.
pub const COMPLETENESS_TOL: f64 = 1e-6;

/// Weight the automatic policy tolerates on eigenvectors that are not
/// resolved by the basis.
const UNRESOLVED_WEIGHT: f64 = 1e-12;

/// Field in a coherent state of real amplitude ε, atom in `χ↓`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialCondition {
    pub epsilon: f64,
}

impl InitialCondition {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !epsilon.is_finite() || epsilon < 0.0 {
            return Err(QrmaError::InvalidParameter(format!(
                "coherent amplitude must be finite and >= 0, got {epsilon}"
            )));
        }
        Ok(Self { epsilon })
    }
}

/// Uniform samples `t_i = i·t_max/(samples − 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub t_max: f64,
    pub samples: usize,
}

impl TimeGrid {
    pub fn new(t_max: f64, samples: usize) -> Result<Self> {
        if !t_max.is_finite() || t_max <= 0.0 {
            return Err(QrmaError::InvalidParameter(format!(
                "t_max must be finite and > 0, got {t_max}"
            )));
        }
        if samples < 2 {
            return Err(QrmaError::InvalidParameter(format!(
                "need at least 2 samples, got {samples}"
            )));
        }
        Ok(Self { t_max, samples })
    }

    pub fn dt(&self) -> f64 {
        self.t_max / (self.samples - 1) as f64
    }

    pub fn time(&self, i: usize) -> f64 {
        if i + 1 == self.samples {
            self.t_max
        } else {
            i as f64 * self.dt()
        }
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.samples).map(|i| self.time(i)).collect()
    }
}

/// Inverse population sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub grid: TimeGrid,
    pub w: Vec<f64>,
}

/// Reduced 2×2 density matrix of the atom in the `(χ↑, χ↓)` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomicDensity(pub [[Complex64; 2]; 2]);

impl AtomicDensity {
    pub fn trace(&self) -> f64 {
        (self.0[0][0] + self.0[1][1]).re
    }

    /// `P↓ − P↑`.
    pub fn inversion(&self) -> f64 {
        self.0[1][1].re - self.0[0][0].re
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let a = self.0[0][0].re;
        let d = self.0[1][1].re;
        let b = 0.5 * (self.0[0][1] + self.0[1][0].conj());
        let half = 0.5 * (a - d);
        0.5 * (a + d) - (half * half + b.norm_sqr()).sqrt()
    }

    pub fn hermiticity_error(&self) -> f64 {
        (self.0[0][1] - self.0[1][0].conj())
            .norm()
            .max(self.0[0][0].im.abs())
            .max(self.0[1][1].im.abs())
    }
}

/// Eigen-decomposition of one sector together with the initial-state weights.
#[derive(Debug, Clone)]
pub struct SectorProjection {
    pub solution: EigenSolution,
    /// `A_np` for each eigenvector of the sector.
    pub amplitudes: Vec<f64>,
}

/// Initial state expanded over all eigenstates of both sectors.
#[derive(Debug, Clone)]
pub struct Projection {
    pub sectors: [SectorProjection; 2],
    pub n_max: usize,
    pub omega: f64,
}

impl Projection {
    /// `Σ |A_np|²`.
    pub fn completeness(&self) -> f64 {
        self.sectors
            .iter()
            .flat_map(|s| s.amplitudes.iter())
            .map(|a| a * a)
            .sum()
    }

    /// Squeezed-frame spinor at time `t`: `(upper, lower)` Fock amplitudes.
    pub fn state_at(&self, t: f64) -> (Vec<Complex64>, Vec<Complex64>) {
        let n = self.n_max;
        let mut upper = vec![Complex64::new(0.0, 0.0); n];
        let mut lower = vec![Complex64::new(0.0, 0.0); n];
        for sector in &self.sectors {
            let parity = sector.solution.parity;
            let mut field = vec![Complex64::new(0.0, 0.0); n];
            for ((e, c), &a) in sector
                .solution
                .energies
                .iter()
                .zip(&sector.solution.vectors)
                .zip(&sector.amplitudes)
            {
                if a == 0.0 {
                    continue;
                }
                let phase = Complex64::from_polar(a, -e * t);
                for (x, &cl) in field.iter_mut().zip(c) {
                    *x += phase * cl;
                }
            }
            for (l, x) in field.into_iter().enumerate() {
                if parity.spin_sign(l) > 0.0 {
                    upper[l] = x;
                } else {
                    lower[l] = -x;
                }
            }
        }
        (upper, lower)
    }

    /// `ρ_A(t) = Tr_F |Ψ(t)⟩⟨Ψ(t)|`.
    pub fn atomic_density(&self, t: f64) -> AtomicDensity {
        let (u, d) = self.state_at(t);
        let dot = |x: &[Complex64], y: &[Complex64]| -> Complex64 {
            x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
        };
        AtomicDensity([[dot(&u, &u), dot(&u, &d)], [dot(&d, &u), dot(&d, &d)]])
    }
}

/// Weights `A_np = ⟨ψ_n^p|χ↓ ⊗ S†|ε⟩` for complete sector solutions.
///
/// Only the lower-spin Fock components of each eigenstate overlap the initial
/// state; they carry the sign −1.
pub fn project_initial(
    ic: &InitialCondition,
    solutions: [EigenSolution; 2],
    omega: f64,
) -> Result<Projection> {
    project_with(ic, solutions, omega, true)
}

fn project_with(
    ic: &InitialCondition,
    solutions: [EigenSolution; 2],
    omega: f64,
    checked: bool,
) -> Result<Projection> {
    let n_max = solutions[0].n_max;
    if solutions[1].n_max != n_max {
        return Err(QrmaError::InvalidParameter(
            "sector solutions have different basis sizes".into(),
        ));
    }
    for s in &solutions {
        if s.len() != n_max {
            return Err(QrmaError::InvalidParameter(format!(
                "projection needs all {n_max} eigenvectors of each sector, got {}",
                s.len()
            )));
        }
    }
    let spec = SqueezeSpec::new(omega, n_max)?;
    let overlaps = if checked {
        squeezed_coherent_overlaps(ic.epsilon, &spec)?
    } else {
        squeeze::overlaps_unchecked(ic.epsilon, &spec)?
    };
    let sectors = solutions.map(|solution| {
        let parity = solution.parity;
        let amplitudes = solution
            .vectors
            .iter()
            .map(|c| {
                -c.iter()
                    .zip(&overlaps.amps)
                    .enumerate()
                    .filter(|(l, _)| parity.spin_sign(*l) < 0.0)
                    .map(|(_, (cl, g))| cl * g)
                    .sum::<f64>()
            })
            .collect();
        SectorProjection {
            solution,
            amplitudes,
        }
    });
    let proj = Projection {
        sectors,
        n_max,
        omega,
    };
    let weight = proj.completeness();
    if checked && weight < 1.0 - COMPLETENESS_TOL {
        return Err(QrmaError::CompletenessDeficit { weight, n_max });
    }
    Ok(proj)
}

fn full_solutions(p: &ModelParams, n_max: usize) -> Result<[EigenSolution; 2]> {
    let even = solve_block(
        &build_parity_block(p, Parity::Even, n_max)?,
        Parity::Even,
        n_max,
    )?;
    let odd = solve_block(
        &build_parity_block(p, Parity::Odd, n_max)?,
        Parity::Odd,
        n_max,
    )?;
    Ok([even, odd])
}

/// Weight of the projection on eigenvectors that still touch the top of the
/// basis.
fn unresolved_weight(proj: &Projection) -> f64 {
    proj.sectors
        .iter()
        .flat_map(|s| s.solution.vectors.iter().zip(&s.amplitudes))
        .filter(|(c, _)| {
            let start = c.len().saturating_sub(8);
            c[start..].iter().map(|x| x * x).sum::<f64>() >= VECTOR_TAIL
        })
        .map(|(_, a)| a * a)
        .sum()
}

/// Projection at a fixed basis size, or the smallest doubling of
/// [`AUTO_START`] whose initial state fits the basis and is carried by
/// resolved eigenvectors only.
pub fn prepare(p: &ModelParams, ic: &InitialCondition, trunc: Truncation) -> Result<Projection> {
    let omega = derive_params(p)?.omega;
    match trunc {
        Truncation::Fixed(n) => project_initial(ic, full_solutions(p, n)?, omega),
        Truncation::Auto => {
            let mut n = AUTO_START;
            let mut last_err = None;
            while n <= AUTO_CAP {
                match project_initial(ic, full_solutions(p, n)?, omega) {
                    Ok(proj) if unresolved_weight(&proj) < UNRESOLVED_WEIGHT => return Ok(proj),
                    Ok(proj) => {
                        last_err = Some(QrmaError::TruncationInsufficient {
                            n_max: n,
                            tail: unresolved_weight(&proj),
                            limit: UNRESOLVED_WEIGHT,
                        })
                    }
                    Err(
                        e @ (QrmaError::TruncationInsufficient { .. }
                        | QrmaError::CompletenessDeficit { .. }),
                    ) => last_err = Some(e),
                    Err(e) => return Err(e),
                }
                n *= 2;
            }
            Err(last_err.unwrap_or(QrmaError::TruncationCap {
                cap: AUTO_CAP,
                change: f64::NAN,
                tol: UNRESOLVED_WEIGHT,
            }))
        }
    }
}

/// Inverse population on `grid` from a projection.
pub fn evolve_inversion(proj: &Projection, grid: &TimeGrid) -> TimeSeries {
    let w = (0..grid.samples)
        .into_par_iter()
        .map(|i| proj.atomic_density(grid.time(i)).inversion())
        .collect();
    TimeSeries { grid: *grid, w }
}

/// Exact inverse population: [`prepare`] followed by [`evolve_inversion`].
pub fn exact_inversion(
    p: &ModelParams,
    ic: &InitialCondition,
    grid: &TimeGrid,
    trunc: Truncation,
) -> Result<TimeSeries> {
    let proj = prepare(p, ic, trunc)?;
    Ok(evolve_inversion(&proj, grid))
}

/// Rotating-wave inverse population on `grid`.
pub fn rwa_inversion_series(
    p: &ModelParams,
    ic: &InitialCondition,
    grid: &TimeGrid,
) -> Result<TimeSeries> {
    let series = RwaInversion::new(p, ic.epsilon, None)?;
    let w = (0..grid.samples).map(|i| series.at(grid.time(i))).collect();
    Ok(TimeSeries { grid: *grid, w })
}

/// Independent route: diagonalize the untransformed Hamiltonian densely in
/// the plain Fock basis and evolve `χ↓ ⊗ |ε⟩` directly.
pub fn direct_evolution_oracle(
    p: &ModelParams,
    ic: &InitialCondition,
    grid: &TimeGrid,
    n_max: usize,
) -> Result<TimeSeries> {
    let h = build_qrma_dense(p, n_max)?;
    let coherent = coherent_amplitudes(ic.epsilon, n_max)?;
    let eig = SymmetricEigen::new(h);
    let dim = 2 * n_max;
    let mut psi0 = DVector::zeros(dim);
    psi0.rows_mut(n_max, n_max).copy_from_slice(&coherent.amps);
    let coeffs = eig.eigenvectors.transpose() * psi0;
    let vectors = &eig.eigenvectors;
    let energies = &eig.eigenvalues;

    let w = (0..grid.samples)
        .into_par_iter()
        .map(|i| {
            let t = grid.time(i);
            let mut re = vec![0.0; dim];
            let mut im = vec![0.0; dim];
            for j in 0..dim {
                let c = coeffs[j];
                if c == 0.0 {
                    continue;
                }
                let (s, co) = (energies[j] * t).sin_cos();
                let (cr, ci) = (c * co, -c * s);
                for (k, v) in vectors.column(j).iter().enumerate() {
                    re[k] += cr * v;
                    im[k] += ci * v;
                }
            }
            let prob = |k: usize| re[k] * re[k] + im[k] * im[k];
            let upper: f64 = (0..n_max).map(prob).sum();
            let lower: f64 = (n_max..dim).map(prob).sum();
            lower - upper
        })
        .collect();
    Ok(TimeSeries { grid: *grid, w })
}
