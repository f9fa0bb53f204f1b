use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::{Error, Result};

struct Plans {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

/// Uniform periodic grid on `[0, L)` with `n` points.
///
/// Wavenumbers are stored in transform order: index `k` carries
/// `2πk/L` for `k = 0..=n/2` and `2π(k-n)/L` above that, so the set is
/// `{-n/2+1, …, n/2}·2π/L` with the Nyquist mode on the positive side.
///
/// Cloning is cheap; FFT plans are shared and every transform allocates its
/// own scratch, so concurrent transforms on distinct buffers are race-free.
#[derive(Clone)]
pub struct Grid {
    n: usize,
    length: f64,
    dx: f64,
    wavenumbers: Arc<[f64]>,
    plans: Arc<Plans>,
}

impl Grid {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::GridSize(n));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::invalid(
                "length",
                format!("must be positive, got {length}"),
            ));
        }
        let base = 2.0 * PI / length;
        let half = n / 2;
        let wavenumbers: Arc<[f64]> = (0..n)
            .map(|k| {
                let m = if k <= half {
                    k as i64
                } else {
                    k as i64 - n as i64
                };
                base * m as f64
            })
            .collect();
        let mut planner = FftPlanner::new();
        let plans = Plans {
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        };
        Ok(Grid {
            n,
            length,
            dx: length / n as f64,
            wavenumbers,
            plans: Arc::new(plans),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Physical wavenumbers in transform order.
    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    /// Signed integer mode index of transform slot `k`.
    pub fn mode_index(&self, k: usize) -> i64 {
        if k <= self.n / 2 {
            k as i64
        } else {
            k as i64 - self.n as i64
        }
    }

    pub fn nyquist_index(&self) -> usize {
        self.n / 2
    }

    /// Largest resolved `|ξ|` (the Nyquist wavenumber).
    pub fn max_wavenumber(&self) -> f64 {
        PI * self.n as f64 / self.length
    }

    pub fn x(&self, j: usize) -> f64 {
        j as f64 * self.dx
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |j| self.x(j))
    }

    /// Unnormalised forward DFT, `û_k = Σ_j u_j e^{-iξ_k x_j}`.
    pub fn forward(&self, values: &[Complex64]) -> Vec<Complex64> {
        let mut buf = values.to_vec();
        self.forward_in_place(&mut buf);
        buf
    }

    pub fn forward_in_place(&self, buf: &mut [Complex64]) {
        assert_eq!(buf.len(), self.n, "buffer length does not match grid");
        let mut scratch =
            vec![Complex64::new(0.0, 0.0); self.plans.forward.get_inplace_scratch_len()];
        self.plans.forward.process_with_scratch(buf, &mut scratch);
    }

    /// Inverse DFT including the `1/n` normalisation.
    pub fn inverse(&self, spectrum: &[Complex64]) -> Vec<Complex64> {
        let mut buf = spectrum.to_vec();
        self.inverse_in_place(&mut buf);
        buf
    }

    pub fn inverse_in_place(&self, buf: &mut [Complex64]) {
        assert_eq!(buf.len(), self.n, "buffer length does not match grid");
        let mut scratch =
            vec![Complex64::new(0.0, 0.0); self.plans.inverse.get_inplace_scratch_len()];
        self.plans.inverse.process_with_scratch(buf, &mut scratch);
        let scale = 1.0 / self.n as f64;
        for z in buf.iter_mut() {
            *z *= scale;
        }
    }

    /// Mask for the 2/3 rule: `true` on retained modes `|m| <= n/3`.
    pub fn dealias_mask(&self) -> Vec<bool> {
        let cutoff = self.n as i64 / 3;
        (0..self.n)
            .map(|k| self.mode_index(k).abs() <= cutoff)
            .collect()
    }

    /// Box integral `∫ g dx` by the trapezoidal (periodic) rule.
    pub fn integrate(&self, values: impl IntoIterator<Item = f64>) -> f64 {
        self.dx * values.into_iter().sum::<f64>()
    }

    pub fn l2_norm_sq(&self, values: &[Complex64]) -> f64 {
        self.integrate(values.iter().map(|z| z.norm_sqr()))
    }

    pub fn l2_norm(&self, values: &[Complex64]) -> f64 {
        self.l2_norm_sq(values).sqrt()
    }

    /// `⟨f, g⟩ = ∫ f ḡ dx`.
    pub fn inner(&self, f: &[Complex64], g: &[Complex64]) -> Complex64 {
        let s: Complex64 = f.iter().zip(g).map(|(a, b)| a * b.conj()).sum();
        s * self.dx
    }

    /// Inhomogeneous Sobolev norm squared `Σ (1+ξ²)^s |ĝ|²` scaled so that
    /// `s = 0` reproduces [`Grid::l2_norm_sq`] exactly (Plancherel).
    pub fn sobolev_norm_sq(&self, values: &[Complex64], s: f64) -> f64 {
        let spec = self.forward(values);
        self.spectral_sobolev_norm_sq(&spec, s)
    }

    pub fn spectral_sobolev_norm_sq(&self, spectrum: &[Complex64], s: f64) -> f64 {
        let scale = self.length / (self.n as f64 * self.n as f64);
        let sum: f64 = spectrum
            .iter()
            .zip(self.wavenumbers.iter())
            .map(|(z, &xi)| (1.0 + xi * xi).powf(s) * z.norm_sqr())
            .sum();
        scale * sum
    }

    pub fn same_as(&self, other: &Grid) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch {
                left_n: self.n,
                left_len: self.length,
                right_n: other.n,
                right_len: other.length,
            })
        }
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.length == other.length
    }
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("n", &self.n)
            .field("length", &self.length)
            .field("dx", &self.dx)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wavenumbers_two_pi_box() {
        let g = Grid::new(8, 2.0 * PI).unwrap();
        let ks: Vec<f64> = g.wavenumbers().to_vec();
        let expected = [0.0, 1.0, 2.0, 3.0, 4.0, -3.0, -2.0, -1.0];
        for (a, b) in ks.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15, "{a} vs {b}");
        }
        let mut sorted = ks.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((sorted[0] + 3.0).abs() < 1e-15 && (sorted[7] - 4.0).abs() < 1e-15);
    }

    #[test]
    fn smallest_positive_wavenumber() {
        let g = Grid::new(8, PI).unwrap();
        assert!((g.wavenumbers()[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_sizes() {
        assert_eq!(Grid::new(7, 1.0).unwrap_err(), Error::GridSize(7));
        assert_eq!(Grid::new(4, 1.0).unwrap_err(), Error::GridSize(4));
        assert!(Grid::new(16, 0.0).is_err());
        assert!(Grid::new(16, -1.0).is_err());
    }

    #[test]
    fn spacing_times_count_is_length() {
        for &(n, l) in &[(8usize, 0.3f64), (64, 2.0 * PI), (1024, 64.0), (256, 1e-3)] {
            let g = Grid::new(n, l).unwrap();
            assert!((g.dx() * n as f64 - l).abs() <= f64::EPSILON * l);
        }
    }

    #[test]
    fn transforms_round_trip() {
        let g = Grid::new(32, 3.0).unwrap();
        let v: Vec<Complex64> = (0..32)
            .map(|j| Complex64::new((j as f64).sin(), (0.3 * j as f64).cos()))
            .collect();
        let back = g.inverse(&g.forward(&v));
        for (a, b) in v.iter().zip(&back) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn plancherel_is_exact() {
        let g = Grid::new(64, 5.0).unwrap();
        let v: Vec<Complex64> = g
            .points()
            .map(|x| Complex64::new((x * 1.3).exp().sin(), x.cos()))
            .collect();
        let a = g.l2_norm_sq(&v);
        let b = g.sobolev_norm_sq(&v, 0.0);
        assert!((a - b).abs() < 1e-12 * a);
    }
}
