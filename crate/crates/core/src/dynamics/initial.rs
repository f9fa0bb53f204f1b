use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::spectral::{FieldState, Grid};
use crate::zhidkov::seam_gap;
use crate::{Error, Result};

/// Seam tolerance a grey pair must meet on its box.
const GREY_PAIR_SEAM_TOL: f64 = 1e-8;

fn default_band_amp() -> f64 {
    0.1
}

/// Initial-data descriptors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialData {
    Constant,
    /// `ρe^{ikx}`; `k` must be a lattice wavenumber of the box.
    PlaneWave {
        k: f64,
    },
    /// Dark soliton at `x0` times its mirror image at `L - x0`.
    GreyPair {
        theta: f64,
        x0: f64,
    },
    /// `ρ(1 + amp·e^{-((x - L/2)/width)²})`.
    BumpPerturbation {
        amp: f64,
        width: f64,
    },
    /// `ρ(1 + amp·g)` with `g` a random trigonometric polynomial of modes
    /// `1 ≤ |m| ≤ band`, normalised so `|g| ≤ 1`.
    RandomBand {
        seed: u64,
        band: usize,
        #[serde(default = "default_band_amp")]
        amp: f64,
    },
}

/// The grey pair `-ρ·q(x - x0)·q̃(x - (L - x0))` with
/// `q(y) = cosθ·tanh(ρcosθ·y) + i sinθ` and `q̃(y) = -cosθ·tanh(ρcosθ·y) + i sinθ`.
/// Equals `ρ` far outside the pair and `-ρe^{2iθ}` between the solitons.
pub fn grey_pair_profile(x: f64, rho: f64, theta: f64, x0: f64, length: f64) -> Complex64 {
    let (s, c) = theta.sin_cos();
    let a = rho * c;
    let q1 = Complex64::new(c * (a * (x - x0)).tanh(), s);
    let q2 = Complex64::new(-c * (a * (x - (length - x0))).tanh(), s);
    -rho * q1 * q2
}

pub fn make_initial_data(kind: &InitialData, grid: &Grid, rho: f64) -> Result<FieldState> {
    let g = grid.clone();
    let length = grid.length();
    match *kind {
        InitialData::Constant => FieldState::constant(g, rho),
        InitialData::PlaneWave { k } => {
            let m = k * length / (2.0 * PI);
            if !k.is_finite() || (m - m.round()).abs() > 1e-9 {
                return Err(Error::invalid(
                    "k",
                    format!("{k} is not a wavenumber of a box of length {length}"),
                ));
            }
            FieldState::from_fn(g, rho, |x| Complex64::from_polar(rho, k * x))
        }
        InitialData::GreyPair { theta, x0 } => {
            if !(theta.is_finite() && theta.cos() > 0.0) {
                return Err(Error::invalid("theta", "need cos(theta) > 0"));
            }
            if !(x0 > 0.0 && x0 < length / 2.0) {
                return Err(Error::invalid(
                    "x0",
                    format!("must lie in (0, L/2), got {x0}"),
                ));
            }
            let f = FieldState::from_fn(g, rho, |x| grey_pair_profile(x, rho, theta, x0, length))?;
            let gap = seam_gap(&f);
            if gap > GREY_PAIR_SEAM_TOL {
                return Err(Error::SeamViolation {
                    gap,
                    tol: GREY_PAIR_SEAM_TOL,
                });
            }
            Ok(f)
        }
        InitialData::BumpPerturbation { amp, width } => {
            if !(width > 0.0 && width.is_finite()) {
                return Err(Error::invalid("width", "must be positive"));
            }
            if !(amp.is_finite() && amp > -1.0) {
                return Err(Error::invalid(
                    "amp",
                    "must exceed -1 so the datum stays nonvanishing",
                ));
            }
            let mid = length / 2.0;
            FieldState::from_fn(g, rho, |x| {
                let y = (x - mid) / width;
                Complex64::new(rho * (1.0 + amp * (-y * y).exp()), 0.0)
            })
        }
        InitialData::RandomBand { seed, band, amp } => {
            if band == 0 || band >= grid.n() / 3 {
                return Err(Error::invalid(
                    "band",
                    format!("must lie in 1..{}", grid.n() / 3),
                ));
            }
            if !(amp.is_finite() && amp.abs() < 1.0) {
                return Err(Error::invalid("amp", "must satisfy |amp| < 1"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let base = 2.0 * PI / length;
            let modes: Vec<(f64, Complex64)> = (1..=band as i64)
                .flat_map(|m| [m, -m])
                .map(|m| {
                    let c =
                        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                    (m as f64 * base, c / (1.0 + (m * m) as f64))
                })
                .collect();
            let total: f64 = modes.iter().map(|(_, c)| c.norm()).sum();
            FieldState::from_fn(g, rho, |x| {
                let s: Complex64 = modes
                    .iter()
                    .map(|(k, c)| c * Complex64::from_polar(1.0, k * x))
                    .sum();
                rho * (1.0 + amp * s / total)
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_plane_wave() {
        let g = Grid::new(64, 2.0 * PI).unwrap();
        let c = make_initial_data(&InitialData::Constant, &g, 1.2).unwrap();
        assert!(c.values().iter().all(|z| *z == Complex64::new(1.2, 0.0)));
        let w = make_initial_data(&InitialData::PlaneWave { k: 2.0 }, &g, 1.0).unwrap();
        for (x, z) in g.points().zip(w.values()) {
            assert!((z - Complex64::from_polar(1.0, 2.0 * x)).norm() < 1e-15);
        }
        assert!(make_initial_data(&InitialData::PlaneWave { k: 2.5 }, &g, 1.0).is_err());
    }

    #[test]
    fn grey_pair_dips_to_rho_sin_theta() {
        let l = 64.0;
        let g = Grid::new(1024, l).unwrap();
        let (theta, rho) = (0.3, 1.0);
        let f = make_initial_data(&InitialData::GreyPair { theta, x0: l / 4.0 }, &g, rho).unwrap();
        let dip = rho * theta.sin();
        for centre in [l / 4.0, 3.0 * l / 4.0] {
            let j = (centre / g.dx()).round() as usize;
            assert!((f.values()[j].norm() - dip).abs() < 1e-12);
        }
        let min = f
            .values()
            .iter()
            .map(|z| z.norm())
            .fold(f64::INFINITY, f64::min);
        assert!((min - dip).abs() < 1e-12);
        assert!(seam_gap(&f) < 1e-8);
    }

    #[test]
    fn grey_pair_rejects_small_box() {
        let g = Grid::new(64, 6.0).unwrap();
        let r = make_initial_data(
            &InitialData::GreyPair {
                theta: 0.3,
                x0: 1.5,
            },
            &g,
            1.0,
        );
        assert!(matches!(r, Err(Error::SeamViolation { .. })));
    }

    #[test]
    fn random_band_is_seeded_and_band_limited() {
        let g = Grid::new(64, 2.0 * PI).unwrap();
        let kind = InitialData::RandomBand {
            seed: 7,
            band: 5,
            amp: 0.3,
        };
        let a = make_initial_data(&kind, &g, 1.0).unwrap();
        let b = make_initial_data(&kind, &g, 1.0).unwrap();
        assert_eq!(a, b);
        let other = make_initial_data(
            &InitialData::RandomBand {
                seed: 8,
                band: 5,
                amp: 0.3,
            },
            &g,
            1.0,
        )
        .unwrap();
        assert_ne!(a, other);
        let spec = g.forward(a.values());
        for (k, z) in spec.iter().enumerate() {
            if g.mode_index(k).abs() > 5 {
                assert!(z.norm() < 1e-11);
            }
        }
        assert!(a.values().iter().all(|z| z.norm() >= 0.7 - 1e-12));
    }

    #[test]
    fn bump_profile() {
        let g = Grid::new(128, 40.0).unwrap();
        let kind = InitialData::BumpPerturbation {
            amp: 0.2,
            width: 2.0,
        };
        let f = make_initial_data(&kind, &g, 1.0).unwrap();
        assert!((f.max_modulus() - 1.2).abs() < 1e-12);
        assert!(make_initial_data(
            &InitialData::BumpPerturbation {
                amp: -1.5,
                width: 2.0
            },
            &g,
            1.0
        )
        .is_err());
    }
}
