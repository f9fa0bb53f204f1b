use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::quad::integrate_panels;
use crate::{Error, Result};

/// Threshold below which samples count as zero for the support radius.
const NEGLIGIBLE: f64 = 1e-14;

/// Uniform samples of a function on `[-R, R]` that vanishes near the ends.
#[derive(Debug, Clone, PartialEq)]
pub struct LineSampledFunction {
    nodes: Vec<f64>,
    values: Vec<Complex64>,
    support_radius: f64,
    h: f64,
}

impl LineSampledFunction {
    pub fn new(nodes: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if nodes.len() != values.len() || nodes.len() < 3 {
            return Err(Error::invalid(
                "nodes",
                "need at least 3 nodes matching the values",
            ));
        }
        let n = nodes.len();
        let h = (nodes[n - 1] - nodes[0]) / (n - 1) as f64;
        if !(h > 0.0) {
            return Err(Error::invalid("nodes", "must be strictly increasing"));
        }
        for (j, x) in nodes.iter().enumerate() {
            if (x - (nodes[0] + j as f64 * h)).abs() > 1e-9 * h {
                return Err(Error::invalid("nodes", "must be uniformly spaced"));
            }
        }
        let radius = nodes[n - 1];
        if (nodes[0] + radius).abs() > 1e-9 * h {
            return Err(Error::invalid("nodes", "window must be symmetric about 0"));
        }
        let support_radius = nodes
            .iter()
            .zip(&values)
            .filter(|(_, v)| v.norm() >= NEGLIGIBLE)
            .map(|(x, _)| x.abs())
            .fold(0.0, f64::max);
        if support_radius >= radius {
            return Err(Error::invalid(
                "values",
                format!("not negligible at the window edge (support radius {support_radius} >= {radius})"),
            ));
        }
        Ok(LineSampledFunction {
            nodes,
            values,
            support_radius,
            h,
        })
    }

    /// Samples `f` at `jh`, `|j| ≤ m`, with `h = R/m`.
    pub fn from_fn(radius: f64, m: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        if !(radius > 0.0) || m == 0 {
            return Err(Error::invalid("radius", "need radius > 0 and m >= 1"));
        }
        let h = radius / m as f64;
        let nodes: Vec<f64> = (-(m as i64)..=m as i64).map(|j| j as f64 * h).collect();
        let values = nodes.iter().map(|&x| f(x)).collect();
        Self::new(nodes, values)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn radius(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    fn snap(&self, x: f64) -> Result<usize> {
        if !(x.abs() <= self.radius() - self.h) {
            return Err(Error::invalid(
                "x",
                format!("{x} is too close to the window edge"),
            ));
        }
        Ok(((x - self.nodes[0]) / self.h).round() as usize)
    }

    fn at(&self, i: i64) -> Complex64 {
        if i < 0 || i as usize >= self.values.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.values[i as usize]
        }
    }

    /// `f̂(ξ) = ∫ f e^{-iyξ} dy` by the trapezoidal rule on the nodes.
    pub fn fourier(&self, xi: f64) -> Complex64 {
        let s: Complex64 = self
            .nodes
            .iter()
            .zip(&self.values)
            .filter(|(_, v)| v.norm() != 0.0)
            .map(|(y, v)| v * Complex64::from_polar(1.0, -y * xi))
            .sum();
        s * self.h
    }

    fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).sum::<f64>() * self.h
    }
}

/// `p.v.∫ k(x-y) f(y) dy` for an odd kernel `k`, at nodal `x`.
///
/// Folding gives `∫₀^∞ k(t)[f(x-t) - f(x+t)] dt` whose integrand extends
/// evenly and smoothly through `t = 0`; the trapezoidal rule with step
/// `2h` on the odd offsets `t = mh` avoids the singular node and is
/// spectrally accurate.
fn odd_kernel_pv(
    f: &LineSampledFunction,
    k: impl Fn(f64) -> f64,
    xs: &[f64],
) -> Result<Vec<Complex64>> {
    let h = f.h;
    let n = f.values.len() as i64;
    xs.iter()
        .map(|&x| {
            let i = f.snap(x)? as i64;
            let mut acc = Complex64::new(0.0, 0.0);
            let mut m = 1i64;
            while i - m >= 0 || i + m < n {
                acc += k(m as f64 * h) * (f.at(i - m) - f.at(i + m));
                m += 2;
            }
            Ok(2.0 * h * acc)
        })
        .collect()
}

/// `T_δ f(x) = (1/2δ) p.v.∫ coth(π(x-y)/2δ) f(y) dy` at the nodes nearest `xs`.
pub fn kernel_tdelta_pv(f: &LineSampledFunction, delta: f64, xs: &[f64]) -> Result<Vec<Complex64>> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::invalid("delta", "must be positive"));
    }
    odd_kernel_pv(
        f,
        |t| 1.0 / ((PI * t / (2.0 * delta)).tanh() * 2.0 * delta),
        xs,
    )
}

/// `Hf(x) = (1/π) p.v.∫ f(y)/(x-y) dy` at the nodes nearest `xs`.
pub fn kernel_hilbert_pv(f: &LineSampledFunction, xs: &[f64]) -> Result<Vec<Complex64>> {
    odd_kernel_pv(f, |t| 1.0 / (PI * t), xs)
}

/// `coth(y) - 1/y`, stable near 0.
fn coth_minus_inverse(y: f64) -> f64 {
    if y.abs() < 1e-3 {
        let y2 = y * y;
        y / 3.0 - y * y2 / 45.0 + 2.0 * y * y2 * y2 / 945.0
    } else {
        1.0 / y.tanh() - 1.0 / y
    }
}

/// `(1/2π)∫ e^{ixξ}(-iσ(ξ)) f̂(ξ) dξ` for odd `σ`, folded onto `ξ > 0`:
/// `(1/2π)∫₀^Ξ (-i)[σ(ξ)·(e^{ixξ}f̂(ξ) - e^{-ixξ}f̂(-ξ))] dξ`.
/// `weight(ξ, b)` returns `σ(ξ)·b` so the caller controls the singular part.
fn line_odd_multiplier(
    f: &LineSampledFunction,
    weight: impl Fn(f64, Complex64) -> Complex64,
    xs: &[f64],
) -> Result<Vec<Complex64>> {
    let scale = f.l1_norm().max(f64::MIN_POSITIVE);
    // band limit: first Ξ beyond which f̂ stays negligible
    let nyquist = PI / f.h;
    let step = 0.5;
    let mut cut = step;
    let mut quiet = 0;
    let mut xi = step;
    while xi < nyquist / 2.0 {
        if f.fourier(xi).norm().max(f.fourier(-xi).norm()) < 1e-15 * scale {
            quiet += 1;
            if quiet >= 4 {
                break;
            }
        } else {
            quiet = 0;
            cut = xi + step;
        }
        xi += step;
    }
    let x_max = xs.iter().fold(1.0f64, |a, x| a.max(x.abs()));
    let panels = (cut * x_max).ceil().max(4.0) as usize;
    let memo: RefCell<HashMap<u64, (Complex64, Complex64)>> = RefCell::new(HashMap::new());
    let transform = |xi: f64| {
        *memo
            .borrow_mut()
            .entry(xi.to_bits())
            .or_insert_with(|| (f.fourier(xi), f.fourier(-xi)))
    };
    let tol = 1e-12 * scale;
    xs.iter()
        .map(|&x| {
            let integrand = |xi: f64| {
                let (p, m) = transform(xi);
                let b = Complex64::from_polar(1.0, x * xi) * p
                    - Complex64::from_polar(1.0, -x * xi) * m;
                -Complex64::i() * weight(xi, b) / (2.0 * PI)
            };
            let (re, _) = integrate_panels(|xi| integrand(xi).re, 0.0, cut, panels, tol)?;
            let (im, _) = integrate_panels(|xi| integrand(xi).im, 0.0, cut, panels, tol)?;
            Ok(Complex64::new(re, im))
        })
        .collect()
}

/// `T_δ f` through its Fourier symbol `-i coth(δξ)`, with `f̂` by direct
/// quadrature. The pole is split off as `coth(δξ) = 1/(δξ) + (coth(δξ) - 1/(δξ))`;
/// the `1/(δξ)` piece pairs with the odd combination, which vanishes at 0.
pub fn line_multiplier_tdelta(
    f: &LineSampledFunction,
    delta: f64,
    xs: &[f64],
) -> Result<Vec<Complex64>> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::invalid("delta", "must be positive"));
    }
    line_odd_multiplier(
        f,
        |xi, b| {
            let y = delta * xi;
            if y == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                b / y + coth_minus_inverse(y) * b
            }
        },
        xs,
    )
}

/// `Hf` through the symbol `-i sgn ξ`.
pub fn line_multiplier_hilbert(f: &LineSampledFunction, xs: &[f64]) -> Result<Vec<Complex64>> {
    line_odd_multiplier(f, |_, b| b, xs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian() -> LineSampledFunction {
        LineSampledFunction::from_fn(10.0, 400, |x| Complex64::new((-x * x).exp(), 0.0)).unwrap()
    }

    #[test]
    fn validation() {
        assert!(
            LineSampledFunction::from_fn(2.0, 40, |x| Complex64::new((-x * x).exp(), 0.0)).is_err()
        );
        let g = gaussian();
        assert!(g.support_radius() < 7.0 && g.support_radius() > 5.0);
        assert!(kernel_tdelta_pv(&g, 1.0, &[10.0]).is_err());
        assert!(
            LineSampledFunction::new(vec![-1.0, 0.0, 2.0], vec![Complex64::new(0.0, 0.0); 3])
                .is_err()
        );
    }

    #[test]
    fn even_function_vanishes_at_centre() {
        // k odd, f even about 0: every folded pair f(-t) - f(t) is exactly zero
        let g = gaussian();
        let v = kernel_tdelta_pv(&g, 1.0, &[0.0]).unwrap();
        assert_eq!(v[0], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn gaussian_hilbert_closed_form() {
        // H e^{-x²} = (2/√π) D(x), D the Dawson function; D(1) = 0.5380795069127684
        let g = gaussian();
        let k = kernel_hilbert_pv(&g, &[1.0]).unwrap()[0];
        let expected = 2.0 / PI.sqrt() * 0.538_079_506_912_768_4;
        assert!((k.re - expected).abs() < 1e-10, "{}", k.re);
        let l = line_multiplier_hilbert(&g, &[1.0]).unwrap()[0];
        assert!((l.re - expected).abs() < 1e-9, "{}", l.re);
    }

    #[test]
    fn even_real_gives_real_odd_output() {
        let g = gaussian();
        let v = line_multiplier_tdelta(&g, 1.0, &[0.5, -0.5]).unwrap();
        assert!(v[0].im.abs() < 1e-12 && (v[0] + v[1]).norm() < 1e-10);
    }

    #[test]
    fn kernel_matches_multiplier() {
        let g = gaussian();
        let xs = [-2.0, -0.75, 0.5, 1.25, 2.0];
        for delta in [0.5, 1.0, 2.0, 4.0] {
            let a = kernel_tdelta_pv(&g, delta, &xs).unwrap();
            let b = line_multiplier_tdelta(&g, delta, &xs).unwrap();
            let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
            for (p, q) in a.iter().zip(&b) {
                assert!((p - q).norm() <= 1e-6 * scale, "delta {delta}: {p} vs {q}");
            }
        }
    }
}
