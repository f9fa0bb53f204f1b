use ginls_core::dynamics::{make_initial_data, InitialData};
use ginls_core::spectral::{symbol_lp, FieldState, Grid, LpKind};
use ginls_core::zhidkov::{
    dist_dk, dx_sobolev_norm_sq, energy_ek, freq_envelope, linf, seam_check, sq_dev,
};
use ginls_core::Complex64;
use proptest::prelude::*;

fn band_field(g: &Grid, seed: u64, band: usize, amp: f64) -> FieldState {
    make_initial_data(&InitialData::RandomBand { seed, band, amp }, g, 1.0).unwrap()
}

/// A localised perturbation of the flat state on a large box: passes the
/// seam check, so line inequalities apply.
fn local_field(g: &Grid, seed: u64, amp: f64, width: f64) -> FieldState {
    let band = band_field(g, seed, 6, 0.9);
    let mid = g.length() / 2.0;
    let values = g
        .points()
        .zip(band.values())
        .map(|(x, z)| {
            let env = (-((x - mid) / width).powi(2)).exp();
            Complex64::new(1.0, 0.0) + amp * env * (z - 1.0)
        })
        .collect();
    FieldState::new(g.clone(), values, 1.0, 0.0).unwrap()
}

fn project(f: &FieldState, level: u32) -> FieldState {
    symbol_lp(f.grid(), level, LpKind::AtMost).apply(f).unwrap()
}

/// `C_ε` with `‖c‖²/E² ∈ [1/C_ε, C_ε]`.
///
/// Upper: Young gives `‖c‖ ≤ S‖a‖ + b(1-2^{-2ε})^{-1/2}` with
/// `S = Σ_m 2^{-ε|m|}`, `‖a‖² ≤ ‖∂f‖²_{H¹}` (Σφ_k² ≤ 1) and
/// `b² ≤ 2(‖f‖²_∞ + ‖w‖)`. Lower: at most two blocks overlap, so
/// `‖∂f‖²_{H¹} ≤ 2‖a‖²`, and `c_0 ≥ a_0 + b` gives `E² ≤ 2‖c‖²`.
fn envelope_equivalence_constant(eps: f64) -> f64 {
    let q = 2f64.powf(-eps);
    let s = 1.0 + 2.0 * q / (1.0 - q);
    (2.0 * s * s + 4.0 / (1.0 - q * q)).max(2.0)
}

/// `C` with `E³(P_{≤j}f)^{1/2} ≤ C 2^j c_j[f]` on a box of length `L`:
/// Bernstein on each block plus geometric sums with ratios `r = 2^{ε-1}`
/// and `2^{ε-2}`, and `‖h‖²_∞ ≤ ‖h‖²/L + ‖h‖‖∂h‖` for the high part.
fn lemma_iii_constant(eps: f64, length: f64) -> f64 {
    let r = 2f64.powf(eps - 1.0);
    let beta1 = 2f64.powf(eps) / (1.0 - r);
    let beta2 = 2f64.powf(eps) / (1.0 - 2f64.powf(eps - 2.0));
    let gamma = (beta2 * beta2 / length + beta1 * beta2).sqrt();
    (5.0 / (1.0 - r).powi(2) + (1.0 + gamma).powi(2) + 1.0 + beta2 * (2.0 + gamma)).sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn projection_energy_bound(seed in any::<u64>(), band in 1usize..40, amp in 0.05f64..0.95, k in 1u32..4) {
        let g = Grid::new(128, 2.0 * std::f64::consts::PI).unwrap();
        let f = band_field(&g, seed, band, amp);
        let e = energy_ek(&f, k).unwrap();
        for level in 0..8 {
            prop_assert!(energy_ek(&project(&f, level), k).unwrap() <= 3.0 * e + 1e-10);
        }
    }

    #[test]
    fn distance_triangle(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>(), k in 1u32..4) {
        let g = Grid::new(64, 10.0).unwrap();
        let (a, b, c) = (band_field(&g, s1, 8, 0.5), band_field(&g, s2, 8, 0.5), band_field(&g, s3, 8, 0.5));
        let ab = dist_dk(&a, &b, k).unwrap();
        let bc = dist_dk(&b, &c, k).unwrap();
        let ac = dist_dk(&a, &c, k).unwrap();
        prop_assert!(ac <= (ab + bc) * (1.0 + 1e-12));
    }

    #[test]
    fn envelope_lemma(seed in any::<u64>(), band in 1usize..40, amp in 0.05f64..0.95, eps in 0.05f64..0.95) {
        let g = Grid::new(128, 2.0 * std::f64::consts::PI).unwrap();
        let f = band_field(&g, seed, band, amp);
        let c = freq_envelope(&f, eps).unwrap();
        let step = 2f64.powf(eps);
        for j in 0..c.values.len() {
            prop_assert!(c.block_norms[j] <= c.values[j] * (1.0 + 1e-12));
            prop_assert!(c.values[j] > 0.0);
            for k in 0..c.values.len() {
                let lim = 2f64.powf(eps * (k as f64 - j as f64).abs()) * c.values[j];
                prop_assert!(c.values[k] <= lim * (1.0 + 1e-12));
            }
            if j + 1 < c.values.len() {
                prop_assert!(c.values[j + 1] <= step * c.values[j] * (1.0 + 1e-12));
            }
        }
        let ce = envelope_equivalence_constant(eps);
        let ratio = c.l2_norm_sq() / energy_ek(&f, 2).unwrap();
        prop_assert!(ratio >= 1.0 / ce && ratio <= ce, "ratio {} outside [1/{ce}, {ce}]", ratio);

        let cl = lemma_iii_constant(eps, g.length());
        for j in 0..c.values.len() {
            let e3 = energy_ek(&project(&f, j as u32), 3).unwrap();
            prop_assert!(e3.sqrt() <= cl * 2f64.powi(j as i32) * c.values[j] * (1.0 + 1e-12));
        }
    }

    #[test]
    fn linf_inequalities_on_line_like_states(seed in any::<u64>(), amp in 0.05f64..0.9, width in 1.0f64..4.0) {
        let g = Grid::new(512, 80.0).unwrap();
        let f = local_field(&g, seed, amp, width);
        prop_assume!(seam_check(&f, 1e-10));
        let m = linf(f.values());
        prop_assert!(m >= f.rho() - 1e-12);
        // line constant: ‖w‖²_∞ ≤ ‖w‖‖∂w‖ ≤ 2‖w‖‖f‖_∞‖∂f‖
        let d = dx_sobolev_norm_sq(&g, f.values(), 0.0).sqrt();
        let rhs = f.rho().powi(2) + 2f64.sqrt() * (sq_dev(&f) * m * d).sqrt();
        prop_assert!(m * m <= rhs * (1.0 + 1e-9));
    }
}

#[test]
fn projection_distance_decreases() {
    let g = Grid::new(256, 2.0 * std::f64::consts::PI).unwrap();
    for seed in 0..10 {
        let f = band_field(&g, seed, 60, 0.5);
        let d: Vec<f64> = (0..8)
            .map(|l| dist_dk(&project(&f, l), &f, 1).unwrap())
            .collect();
        for w in d.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-12) + 1e-12, "seed {seed}: {d:?}");
        }
        assert!(d[7] < 1e-12 && d[0] > 1e-3);
    }
}
