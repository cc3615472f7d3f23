//! Model parameters and Hamiltonian builders.
//!
//! Dense matrices act on the product basis `spin ⊗ Fock(0..n_max)` with the
//! row index `spin * n_max + n`; spin 0 is the upper atomic state (σ₃ = +1)
//! and spin 1 the lower one (σ₃ = −1).

use nalgebra::DMatrix;

use crate::error::{QrmaError, Result};

/// Physical inputs: atomic frequency Δ (in units of the field frequency),
/// relative oscillator strength δ and coupling f.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub big_delta: f64,
    /// δ ≥ 1 for the model with the A² term; exactly 0 selects the plain Rabi model.
    pub osc_delta: f64,
    pub coupling: f64,
}

impl ModelParams {
    pub fn new(big_delta: f64, osc_delta: f64, coupling: f64) -> Result<Self> {
        let p = Self {
            big_delta,
            osc_delta,
            coupling,
        };
        p.validate()?;
        Ok(p)
    }

    /// Same Δ and δ, different coupling.
    pub fn with_coupling(&self, coupling: f64) -> Result<Self> {
        Self::new(self.big_delta, self.osc_delta, coupling)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.big_delta.is_finite() || self.big_delta <= 0.0 {
            return Err(QrmaError::InvalidParameter(format!(
                "big_delta must be finite and > 0, got {}",
                self.big_delta
            )));
        }
        if !self.coupling.is_finite() || self.coupling < 0.0 {
            return Err(QrmaError::InvalidParameter(format!(
                "coupling must be finite and >= 0, got {}",
                self.coupling
            )));
        }
        let d = self.osc_delta;
        if !d.is_finite() || !(d == 0.0 || d >= 1.0) {
            return Err(QrmaError::InvalidParameter(format!(
                "osc_delta must be 0 or >= 1, got {d}"
            )));
        }
        Ok(())
    }
}

/// Quantities fixed by the squeeze reduction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    /// Strength of the k(a + a†)² term.
    pub k: f64,
    /// Renormalized field frequency Ω = √(1 + 4k).
    pub omega: f64,
    /// Renormalized coupling f / √Ω.
    pub f_tilde: f64,
    /// Constant energy offset (Ω − 1) / 2.
    pub shift: f64,
}

/// Eigenvalue of the combined parity σ₃·exp(iπ a†a).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub const BOTH: [Parity; 2] = [Parity::Even, Parity::Odd];

    pub fn value(self) -> i32 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }

    pub fn sign(self) -> f64 {
        self.value() as f64
    }

    pub fn from_value(v: i32) -> Option<Self> {
        match v {
            1 => Some(Parity::Even),
            -1 => Some(Parity::Odd),
            _ => None,
        }
    }

    /// `p · (−1)ⁿ`: +1 when Fock index `n` sits on the upper atomic state
    /// within this sector, −1 when it sits on the lower one.
    pub fn spin_sign(self, n: usize) -> f64 {
        if n.is_multiple_of(2) {
            self.sign()
        } else {
            -self.sign()
        }
    }
}

impl std::fmt::Display for Parity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value())
    }
}

pub fn derive_params(p: &ModelParams) -> Result<DerivedParams> {
    p.validate()?;
    let k = p.osc_delta * p.coupling * p.coupling / p.big_delta;
    let omega = (1.0 + 4.0 * k).sqrt();
    Ok(DerivedParams {
        k,
        omega,
        f_tilde: p.coupling / omega.sqrt(),
        shift: (omega - 1.0) / 2.0,
    })
}

fn check_size(n_max: usize) -> Result<()> {
    if n_max < 2 {
        return Err(QrmaError::InvalidParameter(format!(
            "n_max must be >= 2, got {n_max}"
        )));
    }
    Ok(())
}

/// Adds `spin ⊗ field` where the field operator is given as sparse
/// `(row, col, value)` entries.
fn add_kron(
    h: &mut DMatrix<f64>,
    spin: [[f64; 2]; 2],
    n_max: usize,
    entries: &[(usize, usize, f64)],
) {
    for (s, row) in spin.iter().enumerate() {
        for (t, &sv) in row.iter().enumerate() {
            if sv == 0.0 {
                continue;
            }
            for &(m, n, v) in entries {
                h[(s * n_max + m, t * n_max + n)] += sv * v;
            }
        }
    }
}

/// Field entries of `a + a†`.
fn position_entries(n_max: usize) -> Vec<(usize, usize, f64)> {
    let mut e = Vec::with_capacity(2 * n_max);
    for n in 0..n_max - 1 {
        let v = ((n + 1) as f64).sqrt();
        e.push((n, n + 1, v));
        e.push((n + 1, n, v));
    }
    e
}

const SIGMA_0: [[f64; 2]; 2] = [[1.0, 0.0], [0.0, 1.0]];
const SIGMA_1: [[f64; 2]; 2] = [[0.0, 1.0], [1.0, 0.0]];
const SIGMA_3: [[f64; 2]; 2] = [[1.0, 0.0], [0.0, -1.0]];

/// Untransformed Hamiltonian
/// `(Δ/2)σ₃ + f(a + a†)σ₁ + a†a + k(a + a†)²`.
///
/// The quadratic term is expanded as `a² + a†² + 2a†a + 1` before
/// truncation, so the constant `+k` is kept.
pub fn build_qrma_dense(p: &ModelParams, n_max: usize) -> Result<DMatrix<f64>> {
    check_size(n_max)?;
    let d = derive_params(p)?;
    let mut h = DMatrix::zeros(2 * n_max, 2 * n_max);

    let mut field = Vec::with_capacity(3 * n_max);
    for n in 0..n_max {
        field.push((n, n, n as f64 + d.k * (2.0 * n as f64 + 1.0)));
        if n + 2 < n_max {
            let v = d.k * (((n + 1) * (n + 2)) as f64).sqrt();
            field.push((n, n + 2, v));
            field.push((n + 2, n, v));
        }
    }
    add_kron(&mut h, SIGMA_0, n_max, &field);
    let atom: Vec<_> = (0..n_max).map(|n| (n, n, p.big_delta / 2.0)).collect();
    add_kron(&mut h, SIGMA_3, n_max, &atom);
    let coupling: Vec<_> = position_entries(n_max)
        .into_iter()
        .map(|(m, n, v)| (m, n, p.coupling * v))
        .collect();
    add_kron(&mut h, SIGMA_1, n_max, &coupling);
    Ok(h)
}

/// Squeeze-transformed Hamiltonian
/// `(Δ/2)σ₃ + f̃(a + a†)σ₁ + Ω a†a + (Ω − 1)/2`.
pub fn build_transformed_dense(p: &ModelParams, n_max: usize) -> Result<DMatrix<f64>> {
    check_size(n_max)?;
    let d = derive_params(p)?;
    let mut h = DMatrix::zeros(2 * n_max, 2 * n_max);
    let field: Vec<_> = (0..n_max)
        .map(|n| (n, n, d.omega * n as f64 + d.shift))
        .collect();
    add_kron(&mut h, SIGMA_0, n_max, &field);
    let atom: Vec<_> = (0..n_max).map(|n| (n, n, p.big_delta / 2.0)).collect();
    add_kron(&mut h, SIGMA_3, n_max, &atom);
    let coupling: Vec<_> = position_entries(n_max)
        .into_iter()
        .map(|(m, n, v)| (m, n, d.f_tilde * v))
        .collect();
    add_kron(&mut h, SIGMA_1, n_max, &coupling);
    Ok(h)
}

/// Transformed Hamiltonian after the spin rotation `R = (1 + iσ₂)/√2`:
/// `(Δ/2)σ₁ − f̃(a + a†)σ₃ + Ω a†a + (Ω − 1)/2`.
pub fn build_rotated_dense(p: &ModelParams, n_max: usize) -> Result<DMatrix<f64>> {
    check_size(n_max)?;
    let d = derive_params(p)?;
    let mut h = DMatrix::zeros(2 * n_max, 2 * n_max);
    let field: Vec<_> = (0..n_max)
        .map(|n| (n, n, d.omega * n as f64 + d.shift))
        .collect();
    add_kron(&mut h, SIGMA_0, n_max, &field);
    let atom: Vec<_> = (0..n_max).map(|n| (n, n, p.big_delta / 2.0)).collect();
    add_kron(&mut h, SIGMA_1, n_max, &atom);
    let coupling: Vec<_> = position_entries(n_max)
        .into_iter()
        .map(|(m, n, v)| (m, n, -d.f_tilde * v))
        .collect();
    add_kron(&mut h, SIGMA_3, n_max, &coupling);
    Ok(h)
}

/// Real symmetric tridiagonal matrix stored as its diagonal and first
/// off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalBlock {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl TridiagonalBlock {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || offdiag.len() + 1 != diag.len() {
            return Err(QrmaError::InvalidParameter(format!(
                "tridiagonal block needs len(offdiag) = len(diag) - 1 >= 0, got {} and {}",
                diag.len(),
                offdiag.len()
            )));
        }
        if diag.iter().chain(offdiag.iter()).any(|x| !x.is_finite()) {
            return Err(QrmaError::InvalidParameter(
                "tridiagonal block has non-finite entries".into(),
            ));
        }
        Ok(Self { diag, offdiag })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.len();
        let mut m = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.diag));
        for (i, &e) in self.offdiag.iter().enumerate() {
            m[(i, i + 1)] = e;
            m[(i + 1, i)] = e;
        }
        debug_assert_eq!(m.nrows(), n);
        m
    }
}

/// One parity sector of the rotated Hamiltonian reduced to the upper spinor
/// component: `diag[n] = Ωn + (Ω−1)/2 + (Δ/2)p(−1)ⁿ`, `offdiag[n] = −f̃√(n+1)`.
pub fn build_parity_block(
    p: &ModelParams,
    parity: Parity,
    n_max: usize,
) -> Result<TridiagonalBlock> {
    check_size(n_max)?;
    let d = derive_params(p)?;
    let diag = (0..n_max)
        .map(|n| d.omega * n as f64 + d.shift + 0.5 * p.big_delta * parity.spin_sign(n))
        .collect();
    let offdiag = (0..n_max - 1)
        .map(|n| -d.f_tilde * ((n + 1) as f64).sqrt())
        .collect();
    Ok(TridiagonalBlock { diag, offdiag })
}
