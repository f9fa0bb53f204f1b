use std::f64::consts::PI;

use ginls_core::oracles::{deepwater_gap, grid_vs_line, kernel_vs_line, operator_corpus};

const DELTAS: [f64; 4] = [0.5, 1.0, 2.0, 4.0];

#[test]
fn kernel_and_line_multiplier_agree() {
    for e in operator_corpus() {
        for d in DELTAS {
            let err = kernel_vs_line(&e, d).unwrap();
            assert!(err <= 1e-6, "{} δ={d}: {err:e}", e.name);
        }
    }
}

#[test]
fn grid_multiplier_matches_line_up_to_zero_mode() {
    for e in operator_corpus() {
        for d in DELTAS {
            let big = grid_vs_line(&e, d, 2048, 160.0).unwrap();
            assert!(big.corrected <= 1e-4, "{} δ={d}: {big:?}", e.name);
            let small = grid_vs_line(&e, d, 512, 40.0).unwrap();
            assert!(small.corrected <= 1e-4, "{} δ={d}: {small:?}", e.name);
            if big.zero_mode_offset.abs() > 1e-12 {
                // the only periodisation error left is the dropped zero mode, ∝ 1/L
                let ratio = small.raw / big.raw;
                assert!(
                    (ratio - 4.0).abs() < 0.05,
                    "{} δ={d}: ratio {ratio}",
                    e.name
                );
            } else {
                assert!(big.raw <= 1e-10 && small.raw <= 1e-10);
            }
        }
    }
}

/// `coth(πt/2δ)/(2δ) = 1/(πt) + πt/(12δ²) + O(t³/δ⁴)`, so on localised data
/// `T_δ f − H f ≈ (π/12δ²)(x∫f − ∫y f)`.
#[test]
fn tdelta_tends_to_hilbert() {
    let deltas = [2.0, 4.0, 8.0, 16.0];
    for e in operator_corpus() {
        let gaps = deepwater_gap(&e, &deltas).unwrap();
        for w in gaps.windows(2) {
            assert!(w[1] < w[0], "{}: {gaps:?}", e.name);
        }
        let slope = (gaps[3] / gaps[0]).ln() / (deltas[3] / deltas[0]).ln();
        assert!(slope <= -1.0, "{}: slope {slope}", e.name);

        let h = 1e-3;
        let ys = (-20_000..=20_000).map(|j| j as f64 * h);
        let (m0, m1) = ys.fold((0.0, 0.0), |(a, b), y| {
            (a + (e.f)(y) * h, b + y * (e.f)(y) * h)
        });
        let lead = (-2000..=2000)
            .map(|j| (j as f64 * 1e-3 * m0 - m1).abs())
            .fold(0.0, f64::max)
            * PI
            / 12.0;
        let measured = gaps[3] * 256.0;
        assert!(
            (measured - lead).abs() <= 0.02 * lead,
            "{}: {measured} vs {lead}",
            e.name
        );
    }
}
