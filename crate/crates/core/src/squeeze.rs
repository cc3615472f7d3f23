//! Single-mode squeeze operator `S = exp(¼(a² − a†²) ln Ω)` on a truncated
//! Fock space, plus coherent-state amplitudes.
//!
//! The truncated generator is real antisymmetric, so every matrix built here
//! is real orthogonal. Amplitudes within the top [`EDGE_ROWS`] rows are
//! polluted by the truncation edge (the generator couples k to k ± 2) and are
//! only used as a convergence diagnostic.

use nalgebra::DMatrix;

use crate::error::{QrmaError, Result};

/// Rows at the top of the basis whose amplitudes are not trusted.
pub const EDGE_ROWS: usize = 16;

/// Tail-mass threshold for a state to count as converged.
pub const TAIL_LIMIT: f64 = 1e-10;

/// Relative size of the last Taylor term kept in exponentials.
const SERIES_TOL: f64 = 1e-14;

/// Real amplitudes over Fock states `0..n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    pub amps: Vec<f64>,
}

impl FockVector {
    pub fn n_max(&self) -> usize {
        self.amps.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a * a).sum()
    }

    /// Probability carried by the top `rows` Fock states.
    pub fn tail_mass_over(&self, rows: usize) -> f64 {
        let start = self.amps.len().saturating_sub(rows);
        self.amps[start..].iter().map(|a| a * a).sum()
    }

    /// Probability carried by the top 8 Fock states.
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass_over(8)
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(k, a)| k as f64 * a * a)
            .sum()
    }

    /// ⟨a⟩ for real amplitudes.
    pub fn mean_annihilation(&self) -> f64 {
        self.amps
            .windows(2)
            .enumerate()
            .map(|(k, w)| ((k + 1) as f64).sqrt() * w[0] * w[1])
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeSpec {
    pub omega: f64,
    pub n_max: usize,
}

impl SqueezeSpec {
    pub fn new(omega: f64, n_max: usize) -> Result<Self> {
        if !omega.is_finite() || omega <= 0.0 {
            return Err(QrmaError::InvalidParameter(format!(
                "squeeze frequency must be finite and > 0, got {omega}"
            )));
        }
        if n_max < 2 {
            return Err(QrmaError::InvalidParameter(format!(
                "n_max must be >= 2, got {n_max}"
            )));
        }
        Ok(Self { omega, n_max })
    }

    fn rate(&self) -> f64 {
        0.25 * self.omega.ln()
    }
}

/// Truncated generator `¼(a² − a†²) ln Ω`.
pub fn squeeze_generator(spec: &SqueezeSpec) -> DMatrix<f64> {
    let n = spec.n_max;
    let rate = spec.rate();
    let mut g = DMatrix::zeros(n, n);
    for k in 0..n.saturating_sub(2) {
        let v = rate * (((k + 1) * (k + 2)) as f64).sqrt();
        g[(k, k + 2)] = v;
        g[(k + 2, k)] = -v;
    }
    g
}

fn one_norm(m: &DMatrix<f64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(m)` by scaling and squaring with a Taylor series on the scaled matrix.
pub fn matrix_exp(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "matrix_exp needs a square matrix");
    let norm = one_norm(m);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = m * 2f64.powi(-squarings);

    let mut result = DMatrix::identity(n, n);
    let mut term = DMatrix::identity(n, n);
    for j in 1..=60 {
        term = &term * &scaled / j as f64;
        result += &term;
        if one_norm(&term) <= SERIES_TOL * one_norm(&result) {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// The squeeze operator as an `n_max × n_max` real orthogonal matrix.
pub fn squeeze_matrix(spec: &SqueezeSpec) -> DMatrix<f64> {
    matrix_exp(&squeeze_generator(spec))
}

/// `exp(sign · G) v` without forming the matrix: the banded generator is
/// applied directly inside a sub-stepped Taylor series.
fn apply_squeeze(spec: &SqueezeSpec, sign: f64, v: &[f64]) -> Vec<f64> {
    let n = v.len();
    let rate = sign * spec.rate();
    if rate == 0.0 {
        return v.to_vec();
    }
    let band: Vec<f64> = (0..n.saturating_sub(2))
        .map(|k| rate * (((k + 1) * (k + 2)) as f64).sqrt())
        .collect();
    let apply = |x: &[f64], out: &mut [f64]| {
        out.iter_mut().for_each(|o| *o = 0.0);
        for (k, &b) in band.iter().enumerate() {
            out[k] += b * x[k + 2];
            out[k + 2] -= b * x[k];
        }
    };
    // ‖G‖₁ ≤ 2 max|band|; keep each step's norm below 1/2
    let norm = 2.0 * band.last().map_or(0.0, |b| b.abs());
    let steps = ((norm / 0.5).ceil() as usize).max(1);
    let h = 1.0 / steps as f64;

    let mut state = v.to_vec();
    let mut term = vec![0.0; n];
    let mut next = vec![0.0; n];
    for _ in 0..steps {
        term.copy_from_slice(&state);
        let mut acc = state.clone();
        let acc_norm = acc.iter().map(|x| x * x).sum::<f64>().sqrt();
        for j in 1..=60 {
            apply(&term, &mut next);
            let scale = h / j as f64;
            for (t, x) in term.iter_mut().zip(&next) {
                *t = scale * x;
            }
            for (a, t) in acc.iter_mut().zip(&term) {
                *a += t;
            }
            let tn = term.iter().map(|x| x * x).sum::<f64>().sqrt();
            if tn <= SERIES_TOL * acc_norm {
                break;
            }
        }
        state = acc;
    }
    state
}

/// Coherent state `|ε⟩` for real ε ≥ 0:
/// `amps[k] = e^{−ε²/2} εᵏ / √(k!)`, built by the recurrence
/// `amps[k] = amps[k−1]·ε/√k`.
pub fn coherent_amplitudes(epsilon: f64, n_max: usize) -> Result<FockVector> {
    let v = coherent_unchecked(epsilon, n_max)?;
    let tail = v.tail_mass();
    let missing = (1.0 - v.norm_sqr()).max(0.0);
    if tail >= TAIL_LIMIT || missing >= TAIL_LIMIT {
        return Err(QrmaError::TruncationInsufficient {
            n_max,
            tail: tail.max(missing),
            limit: TAIL_LIMIT,
        });
    }
    Ok(v)
}

/// Truncated coherent amplitudes without the tail check.
pub(crate) fn coherent_unchecked(epsilon: f64, n_max: usize) -> Result<FockVector> {
    if !epsilon.is_finite() || epsilon < 0.0 {
        return Err(QrmaError::InvalidParameter(format!(
            "coherent amplitude must be finite and >= 0, got {epsilon}"
        )));
    }
    if n_max < 2 {
        return Err(QrmaError::InvalidParameter(format!(
            "n_max must be >= 2, got {n_max}"
        )));
    }
    let mut amps = vec![0.0; n_max];
    // Start from the log of the peak term so large ε does not underflow the
    // prefactor before the powers of ε can compensate.
    let peak = (epsilon * epsilon).floor() as usize;
    let anchor = peak.min(n_max - 1);
    amps[anchor] = ln_coherent(epsilon, anchor).exp();
    for k in anchor + 1..n_max {
        amps[k] = amps[k - 1] * epsilon / (k as f64).sqrt();
    }
    for k in (0..anchor).rev() {
        amps[k] = if epsilon == 0.0 {
            0.0
        } else {
            amps[k + 1] * ((k + 1) as f64).sqrt() / epsilon
        };
    }
    Ok(FockVector { amps })
}

/// `ln(e^{−ε²/2} εⁿ/√n!)`. For large `n` the three terms are each of order
/// `n ln n` and nearly cancel, so the Stirling series is folded in
/// analytically with `ε² = n + r`.
fn ln_coherent(epsilon: f64, n: usize) -> f64 {
    let e2 = epsilon * epsilon;
    if n == 0 {
        return -0.5 * e2;
    }
    if n < 32 {
        let ln_fact: f64 = (2..=n).map(|k| (k as f64).ln()).sum();
        return -0.5 * e2 + n as f64 * epsilon.ln() - 0.5 * ln_fact;
    }
    let nf = n as f64;
    let r = e2 - nf;
    let inv = 1.0 / nf;
    let inv2 = inv * inv;
    let stirling =
        inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    -0.5 * r + 0.5 * nf * (r / nf).ln_1p()
        - 0.25 * (2.0 * std::f64::consts::PI * nf).ln()
        - 0.5 * stirling
}

/// Overlaps `⟨k|S†|ε⟩`: the coherent state seen from the squeezed frame.
pub fn squeezed_coherent_overlaps(epsilon: f64, spec: &SqueezeSpec) -> Result<FockVector> {
    let coherent = coherent_amplitudes(epsilon, spec.n_max)?;
    let amps = apply_squeeze(spec, -1.0, &coherent.amps);
    let v = FockVector { amps };
    let tail = v.tail_mass_over(EDGE_ROWS.min(spec.n_max));
    if tail >= TAIL_LIMIT {
        return Err(QrmaError::TruncationInsufficient {
            n_max: spec.n_max,
            tail,
            limit: TAIL_LIMIT,
        });
    }
    Ok(v)
}

/// [`squeezed_coherent_overlaps`] without any truncation checks.
pub(crate) fn overlaps_unchecked(epsilon: f64, spec: &SqueezeSpec) -> Result<FockVector> {
    let coherent = coherent_unchecked(epsilon, spec.n_max)?;
    Ok(FockVector {
        amps: apply_squeeze(spec, -1.0, &coherent.amps),
    })
}

/// Mean photon number of the squeezed vacuum `S|0⟩`, `(Ω − 1)²/(4Ω)`.
pub fn squeezed_vacuum_photon_number(omega: f64) -> f64 {
    (omega - 1.0).powi(2) / (4.0 * omega)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn spec(omega: f64, n: usize) -> SqueezeSpec {
        SqueezeSpec::new(omega, n).unwrap()
    }

    /// ⟨2m|S|0⟩ = (−tanh r)^m √((2m)!) / (2^m m! √cosh r), r = ½ ln Ω.
    fn squeezed_vacuum_closed_form(omega: f64, n: usize) -> Vec<f64> {
        let r = 0.5 * omega.ln();
        let mut out = vec![0.0; n];
        let mut c = 1.0 / r.cosh().sqrt();
        for m in 0..n.div_ceil(2) {
            if 2 * m < n {
                out[2 * m] = c;
            }
            // ratio between consecutive even amplitudes
            c *= -r.tanh() * (((2 * m + 1) * (2 * m + 2)) as f64).sqrt() / (2.0 * (m + 1) as f64);
        }
        out
    }

    #[test]
    fn identity_at_unit_omega() {
        let s = squeeze_matrix(&spec(1.0, 10));
        assert_eq!(s, DMatrix::identity(10, 10));
    }

    #[test]
    fn squeezed_vacuum_matches_closed_form() {
        for &omega in &[1.1, std::f64::consts::SQRT_2, 2.0, 0.6] {
            let n = 128;
            let s = squeeze_matrix(&spec(omega, n));
            let exact = squeezed_vacuum_closed_form(omega, n);
            for k in 0..n - EDGE_ROWS {
                assert_abs_diff_eq!(s[(k, 0)], exact[k], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn squeezed_vacuum_photon_number_at_root_two() {
        let omega = std::f64::consts::SQRT_2;
        let s = squeeze_matrix(&spec(omega, 256));
        let n: f64 = (0..256).map(|k| k as f64 * s[(k, 0)].powi(2)).sum();
        assert_abs_diff_eq!(n, 0.030_330_085_889_910_65, epsilon = 1e-12);
        assert_abs_diff_eq!(
            squeezed_vacuum_photon_number(omega),
            (0.5 * omega.ln()).sinh().powi(2),
            epsilon = 1e-15
        );
        for k in (1..256).step_by(2) {
            assert_eq!(s[(k, 0)], 0.0);
        }
    }

    #[test]
    fn orthogonal_on_interior_block() {
        let n = 256;
        for &omega in &[1.2, 2.0] {
            let s = squeeze_matrix(&spec(omega, n));
            let sts = s.transpose() * &s;
            let m = n - EDGE_ROWS;
            let dev = (0..m)
                .flat_map(|i| (0..m).map(move |j| (i, j)))
                .map(|(i, j)| (sts[(i, j)] - if i == j { 1.0 } else { 0.0 }).abs())
                .fold(0.0, f64::max);
            assert!(dev < 1e-10, "deviation {dev}");
        }
    }

    #[test]
    fn inverse_squeeze_undoes_squeeze() {
        let n = 128;
        let prod = squeeze_matrix(&spec(1.7, n)) * squeeze_matrix(&spec(1.0 / 1.7, n));
        for i in 0..n - 2 * EDGE_ROWS {
            for j in 0..n - 2 * EDGE_ROWS {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(prod[(i, j)], expect, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn coherent_examples() {
        let v = coherent_amplitudes(0.0, 16).unwrap();
        assert_eq!(v.amps[0], 1.0);
        assert!(v.amps[1..].iter().all(|&a| a == 0.0));

        let v = coherent_amplitudes(5.0, 128).unwrap();
        assert_abs_diff_eq!(v.mean_photon_number(), 25.0, epsilon = 1e-8);
        assert_abs_diff_eq!(v.norm_sqr(), 1.0, epsilon = 1e-12);

        assert!(matches!(
            coherent_amplitudes(5.0, 32),
            Err(QrmaError::TruncationInsufficient { .. })
        ));
        assert!(coherent_amplitudes(-1.0, 32).is_err());
    }

    #[test]
    fn coherent_large_amplitude_does_not_underflow() {
        let v = coherent_amplitudes(30.0, 1400).unwrap();
        assert_abs_diff_eq!(v.norm_sqr(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v.mean_photon_number(), 900.0, epsilon = 1e-7);
    }

    #[test]
    fn overlaps_examples() {
        let c = coherent_amplitudes(2.0, 64).unwrap();
        let o = squeezed_coherent_overlaps(2.0, &spec(1.0, 64)).unwrap();
        assert_eq!(o, c);

        let o = squeezed_coherent_overlaps(0.0, &spec(std::f64::consts::SQRT_2, 64)).unwrap();
        for k in (1..64).step_by(2) {
            assert_eq!(o.amps[k], 0.0);
        }

        let o = squeezed_coherent_overlaps(5.0, &spec(std::f64::consts::SQRT_2, 512)).unwrap();
        assert_abs_diff_eq!(o.norm_sqr(), 1.0, epsilon = 1e-8);
    }

    #[test]
    fn overlaps_equal_transposed_matrix_action() {
        let sp = spec(1.6, 160);
        let dense = squeeze_matrix(&sp).transpose()
            * nalgebra::DVector::from_vec(coherent_amplitudes(3.0, 160).unwrap().amps);
        let sparse = squeezed_coherent_overlaps(3.0, &sp).unwrap();
        for k in 0..160 {
            assert_abs_diff_eq!(dense[k], sparse.amps[k], epsilon = 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        /// S a S† = μa − νa† gives ⟨a⟩ = √Ω ε and ⟨n⟩ = Ωε² + (Ω−1)²/(4Ω)
        /// for the state S†|ε⟩.
        #[test]
        fn overlap_moments(omega in 0.5f64..3.0, eps in 0.0f64..5.0) {
            let o = squeezed_coherent_overlaps(eps, &spec(omega, 320)).unwrap();
            prop_assert!((o.mean_annihilation() - omega.sqrt() * eps).abs() < 1e-9);
            let n_exact = omega * eps * eps + squeezed_vacuum_photon_number(omega);
            prop_assert!((o.mean_photon_number() - n_exact).abs() < 1e-8);
        }

        /// S†aS = μa + νa† makes S†|ε⟩ an eigenvector of μa + νa†, which
        /// fixes the amplitudes by a three-term recurrence.
        #[test]
        fn overlaps_match_closed_recurrence(omega in 0.5f64..2.0, eps in 0.0f64..2.5) {
            let o = squeezed_coherent_overlaps(eps, &spec(omega, 256)).unwrap();
            let mu = (omega + 1.0) / (2.0 * omega.sqrt());
            let nu = (1.0 - omega) / (2.0 * omega.sqrt());
            let m = 40;
            let mut psi = vec![0.0; m];
            psi[0] = 1.0;
            psi[1] = eps / mu;
            for k in 1..m - 1 {
                psi[k + 1] = (eps * psi[k] - nu * (k as f64).sqrt() * psi[k - 1]) / (mu * ((k + 1) as f64).sqrt());
            }
            let scale = o.amps[0] / psi[0];
            for (k, (&a, &p)) in o.amps.iter().zip(&psi).enumerate() {
                prop_assert!((a - scale * p).abs() < 1e-9, "k={} {} vs {}", k, a, scale * p);
            }
            // closed-form vacuum overlap ⟨0|S†|ε⟩
            let a0 = mu.powf(-0.5) * (-0.5 * eps * eps * omega.sqrt() / mu).exp();
            prop_assert!((o.amps[0] - a0).abs() < 1e-10);
        }

        #[test]
        fn squeezed_vacuum_has_only_even_components(omega in 0.3f64..3.0) {
            let s = squeeze_matrix(&spec(omega, 48));
            for k in (1..48).step_by(2) {
                prop_assert_eq!(s[(k, 0)], 0.0);
            }
        }
    }
}
