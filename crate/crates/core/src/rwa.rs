//! Rotating-wave closed forms applied to the renormalized model: doublet
//! energies and mixing coefficients, photon numbers and the coherent-state
//! inverse population.
//!
//! With δ = 0 (Ω = 1, f̃ = f) these are the textbook Jaynes–Cummings results.

use crate::error::{QrmaError, Result};
use crate::model::{derive_params, ModelParams};
use crate::squeeze::squeezed_vacuum_photon_number;

/// Which member of a doublet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

/// One RWA eigenstate `A χ↑|n,Ω⟩ + B χ↓|n+1,Ω⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RwaLevel {
    pub n: usize,
    pub branch: Branch,
    pub energy: f64,
    pub a_coeff: f64,
    pub b_coeff: f64,
    /// Mixing ratio with `A = 1/√(1+λ²)`, `B = −λ/√(1+λ²)`; infinite when
    /// the state is purely `χ↓|n+1⟩`.
    pub lambda: f64,
}

/// `E_GS = −Δ/2 + (Ω − 1)/2`, state `χ↓|0,Ω⟩`.
pub fn rwar_ground(p: &ModelParams) -> Result<f64> {
    let d = derive_params(p)?;
    Ok(-0.5 * p.big_delta + d.shift)
}

/// The `n`-th doublet `(E⁺ₙ, E⁻ₙ)`.
pub fn rwar_excited(p: &ModelParams, n: usize) -> Result<(RwaLevel, RwaLevel)> {
    let d = derive_params(p)?;
    let detuning = p.big_delta - d.omega;
    let m = (n + 1) as f64;
    // x = 2 f̃ √(n+1), radius = √(D² + x²)
    let x = 2.0 * d.f_tilde * m.sqrt();
    let radius = detuning.hypot(x);
    let center = d.omega * m - 0.5;

    // λ⁺ = (D − R)/x = −x/(D + R) and λ⁻ = (D + R)/x = x/(R − D); the
    // second forms avoid cancellation, and the (A, B) pairs follow from
    // normalizing (D + R, x) and (R − D, −x).
    let (plus_a, plus_b, minus_a, minus_b) = if x == 0.0 && detuning == 0.0 {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        (h, h, h, -h)
    } else {
        let up = detuning + radius;
        let dn = radius - detuning;
        let np = up.hypot(x);
        let nm = dn.hypot(x);
        let (pa, pb) = if np == 0.0 {
            (0.0, 1.0)
        } else {
            (up / np, x / np)
        };
        let (ma, mb) = if nm == 0.0 {
            (0.0, -1.0)
        } else {
            (dn / nm, -x / nm)
        };
        (pa, pb, ma, mb)
    };
    let lambda = |a: f64, b: f64| {
        if a == 0.0 {
            f64::INFINITY.copysign(-b)
        } else {
            -b / a
        }
    };

    let plus = RwaLevel {
        n,
        branch: Branch::Plus,
        energy: center + 0.5 * radius,
        a_coeff: plus_a,
        b_coeff: plus_b,
        lambda: lambda(plus_a, plus_b),
    };
    let minus = RwaLevel {
        n,
        branch: Branch::Minus,
        energy: center - 0.5 * radius,
        a_coeff: minus_a,
        b_coeff: minus_b,
        lambda: lambda(minus_a, minus_b),
    };
    Ok((plus, minus))
}

pub fn rwar_level(p: &ModelParams, n: usize, branch: Branch) -> Result<RwaLevel> {
    let (plus, minus) = rwar_excited(p, n)?;
    Ok(match branch {
        Branch::Plus => plus,
        Branch::Minus => minus,
    })
}

/// Ground-state photon number `(Ω − 1)²/(4Ω)`.
pub fn rwa_photon_number(p: &ModelParams) -> Result<f64> {
    let d = derive_params(p)?;
    Ok(squeezed_vacuum_photon_number(d.omega))
}

/// Photon number of an excited RWA level in the original frame:
/// `(Ω−1)²/(4Ω) + (Ω²+1)/(2Ω)·(A²n + B²(n+1))`.
pub fn rwa_level_photon_number(p: &ModelParams, level: &RwaLevel) -> Result<f64> {
    let d = derive_params(p)?;
    let w = d.omega;
    let field =
        level.a_coeff.powi(2) * level.n as f64 + level.b_coeff.powi(2) * (level.n + 1) as f64;
    Ok(squeezed_vacuum_photon_number(w) + (w * w + 1.0) / (2.0 * w) * field)
}

/// Effective Poisson amplitude `ε̃ = ε(Ω + 1)/(2√Ω)`.
pub fn effective_amplitude(p: &ModelParams, epsilon: f64) -> Result<f64> {
    let d = derive_params(p)?;
    Ok(epsilon * (d.omega + 1.0) / (2.0 * d.omega.sqrt()))
}

/// Default number of Poisson terms, `⌈ε̃² + 12√(ε̃² + 1)⌉`.
pub fn default_terms(eps_tilde: f64) -> usize {
    let m = eps_tilde * eps_tilde;
    (m + 12.0 * (m + 1.0).sqrt()).ceil() as usize
}

/// Poisson tail allowed beyond the last summed term.
pub const POISSON_TAIL: f64 = 1e-12;

/// Precomputed weights and frequencies of the RWA inverse-population series.
#[derive(Debug, Clone)]
pub struct RwaInversion {
    weights: Vec<f64>,
    static_part: Vec<f64>,
    frequencies: Vec<f64>,
}

impl RwaInversion {
    pub fn new(p: &ModelParams, epsilon: f64, n_terms: Option<usize>) -> Result<Self> {
        if !epsilon.is_finite() || epsilon < 0.0 {
            return Err(QrmaError::InvalidParameter(format!(
                "coherent amplitude must be finite and >= 0, got {epsilon}"
            )));
        }
        let d = derive_params(p)?;
        let eps_t = effective_amplitude(p, epsilon)?;
        let n_terms = n_terms.unwrap_or_else(|| default_terms(eps_t)).max(1);
        let mean = eps_t * eps_t;

        let mut weights = Vec::with_capacity(n_terms);
        let mut static_part = Vec::with_capacity(n_terms);
        let mut frequencies = Vec::with_capacity(n_terms);
        let detuning2 = (p.big_delta - d.omega).powi(2);
        let mut log_fact = 0.0;
        for n in 0..n_terms {
            if n > 0 {
                log_fact += (n as f64).ln();
            }
            let w = if mean == 0.0 {
                if n == 0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                (-mean + n as f64 * mean.ln() - log_fact).exp()
            };
            let coupling2 = 4.0 * d.f_tilde * d.f_tilde * (n + 1) as f64;
            let omega2 = detuning2 + coupling2;
            let (stat, osc) = if omega2 == 0.0 {
                (0.0, 1.0)
            } else {
                (detuning2 / omega2, coupling2 / omega2)
            };
            weights.push(w * osc);
            static_part.push(w * stat);
            frequencies.push(omega2.sqrt());
        }
        let covered: f64 = weights.iter().chain(&static_part).sum();
        let tail = (1.0 - covered).max(0.0);
        if tail > POISSON_TAIL {
            return Err(QrmaError::TailTolerance { n_terms, tail });
        }
        Ok(Self {
            weights,
            static_part,
            frequencies,
        })
    }

    /// Number of Poisson terms summed.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Rabi frequency `ω_A(n) = √((Δ−Ω)² + 4f̃²(n+1))`.
    pub fn rabi_frequency(&self, n: usize) -> f64 {
        self.frequencies[n]
    }

    pub fn at(&self, t: f64) -> f64 {
        self.static_part.iter().sum::<f64>()
            + self
                .weights
                .iter()
                .zip(&self.frequencies)
                .map(|(w, om)| w * (om * t).cos())
                .sum::<f64>()
    }
}

/// Inverse population in the rotating-wave approximation:
/// `W(t) = Σₙ P(n; ε̃²) [(Δ−Ω)² + 4f̃²(n+1) cos(ω_A(n) t)] / ω_A(n)²`.
pub fn rwa_inversion(p: &ModelParams, epsilon: f64, t: f64, n_terms: usize) -> Result<f64> {
    Ok(RwaInversion::new(p, epsilon, Some(n_terms))?.at(t))
}
