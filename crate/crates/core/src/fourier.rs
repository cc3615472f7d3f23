//! Discrete Fourier magnitude spectrum of a sampled inverse population.

use rustfft::{num_complex::Complex64, FftPlanner};

use crate::dynamics::TimeSeries;
use crate::error::{QrmaError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Window {
    #[default]
    None,
    Hann,
}

/// One-sided magnitude spectrum, bins `0..=N/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencySpectrum {
    /// Angular frequencies `2πn/(N·dt)`.
    pub freqs: Vec<f64>,
    pub mags: Vec<f64>,
    /// Number of samples transformed.
    pub samples: usize,
    pub dt: f64,
}

impl FrequencySpectrum {
    /// Spacing of the angular-frequency axis.
    pub fn bin_width(&self) -> f64 {
        2.0 * std::f64::consts::PI / (self.samples as f64 * self.dt)
    }

    /// Signal energy `Σ|x|²·dt` recovered from the one-sided spectrum.
    pub fn power_sum(&self) -> f64 {
        let n = self.samples;
        let doubled = |k: usize| {
            if k == 0 || (n.is_multiple_of(2) && k == n / 2) {
                1.0
            } else {
                2.0
            }
        };
        let total: f64 = self
            .mags
            .iter()
            .enumerate()
            .map(|(k, m)| doubled(k) * m * m)
            .sum();
        total * self.dt / n as f64
    }

    /// Bin index of the largest magnitude (lowest index on ties).
    pub fn peak_bin(&self) -> usize {
        let mut best = 0;
        for (i, &m) in self.mags.iter().enumerate() {
            if m > self.mags[best] {
                best = i;
            }
        }
        best
    }

    /// Local maxima whose magnitude exceeds `fraction` of the global maximum.
    pub fn peaks_above(&self, fraction: f64) -> Vec<usize> {
        let max = self.mags.iter().copied().fold(0.0, f64::max);
        let cut = fraction * max;
        let m = &self.mags;
        (1..m.len().saturating_sub(1))
            .filter(|&i| m[i] > cut && m[i] >= m[i - 1] && m[i] > m[i + 1])
            .collect()
    }
}

/// Magnitude of the DFT of `w(t)` after removing its mean and applying
/// `window`.
pub fn fourier_spectrum(ts: &TimeSeries, window: Window) -> Result<FrequencySpectrum> {
    let n = ts.w.len();
    if n < 4 {
        return Err(QrmaError::InvalidParameter(format!(
            "need at least 4 samples, got {n}"
        )));
    }
    let mean = ts.w.iter().sum::<f64>() / n as f64;
    let mut buf: Vec<Complex64> =
        ts.w.iter()
            .enumerate()
            .map(|(i, &x)| {
                let taper = match window {
                    Window::None => 1.0,
                    Window::Hann => {
                        0.5 - 0.5 * (2.0 * std::f64::consts::PI * i as f64 / (n - 1) as f64).cos()
                    }
                };
                Complex64::new((x - mean) * taper, 0.0)
            })
            .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);

    let dt = ts.grid.dt();
    let bins = n / 2 + 1;
    let step = 2.0 * std::f64::consts::PI / (n as f64 * dt);
    Ok(FrequencySpectrum {
        freqs: (0..bins).map(|k| k as f64 * step).collect(),
        mags: buf[..bins].iter().map(|c| c.norm()).collect(),
        samples: n,
        dt,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::TimeGrid;
    use approx::assert_abs_diff_eq;

    fn series(t_max: f64, samples: usize, f: impl Fn(f64) -> f64) -> TimeSeries {
        let grid = TimeGrid::new(t_max, samples).unwrap();
        let w = grid.times().into_iter().map(f).collect();
        TimeSeries { grid, w }
    }

    /// O(N²) reference transform.
    fn naive_dft(x: &[f64]) -> Vec<f64> {
        let n = x.len();
        (0..=n / 2)
            .map(|k| {
                let (mut re, mut im) = (0.0, 0.0);
                for (j, &v) in x.iter().enumerate() {
                    let ang = -2.0 * std::f64::consts::PI * (k * j) as f64 / n as f64;
                    re += v * ang.cos();
                    im += v * ang.sin();
                }
                re.hypot(im)
            })
            .collect()
    }

    #[test]
    fn cosine_on_a_bin_is_recovered() {
        let probe = series(100.0, 512, |_| 0.0);
        let bin = 2.0 * std::f64::consts::PI / (512.0 * probe.grid.dt());
        let ts = series(100.0, 512, |t| (17.0 * bin * t).cos());
        let spec = fourier_spectrum(&ts, Window::None).unwrap();
        assert_eq!(spec.peak_bin(), 17);
        assert_abs_diff_eq!(spec.freqs[17], 17.0 * bin, epsilon = 1e-12);
        assert_abs_diff_eq!(spec.mags[17], 256.0, epsilon = 1e-9);
        let others = spec
            .mags
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != 17)
            .map(|(_, m)| *m)
            .fold(0.0, f64::max);
        assert!(others < 1e-9);
    }

    #[test]
    fn parseval() {
        for &n in &[256usize, 255] {
            let ts = series(50.0, n, |t| {
                (0.3 * t).sin() + 0.2 * (1.7 * t).cos() + 0.1 * t.sqrt()
            });
            let spec = fourier_spectrum(&ts, Window::None).unwrap();
            let mean = ts.w.iter().sum::<f64>() / n as f64;
            let energy: f64 = ts.w.iter().map(|x| (x - mean).powi(2)).sum::<f64>() * ts.grid.dt();
            assert_abs_diff_eq!(energy, spec.power_sum(), epsilon = 1e-8);
        }
    }

    #[test]
    fn matches_naive_transform() {
        let ts = series(10.0, 64, |t| (1.1 * t).cos() * (-0.05 * t).exp());
        let spec = fourier_spectrum(&ts, Window::None).unwrap();
        let mean = ts.w.iter().sum::<f64>() / 64.0;
        let centered: Vec<f64> = ts.w.iter().map(|x| x - mean).collect();
        for (a, b) in spec.mags.iter().zip(naive_dft(&centered)) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-10);
        }
    }

    #[test]
    fn hann_window_keeps_the_peak() {
        let probe = series(100.0, 1024, |_| 0.0);
        let bin = 2.0 * std::f64::consts::PI / (1024.0 * probe.grid.dt());
        let ts = series(100.0, 1024, |t| (40.3 * bin * t).cos());
        let spec = fourier_spectrum(&ts, Window::Hann).unwrap();
        assert_eq!(spec.peak_bin(), 40);
        assert!(spec.mags.iter().all(|m| *m >= 0.0));
    }

    #[test]
    fn too_short() {
        let ts = series(1.0, 3, |t| t);
        assert!(fourier_spectrum(&ts, Window::None).is_err());
    }
}
