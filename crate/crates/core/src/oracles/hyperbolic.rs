use crate::{Error, Result};

fn coth(x: f64) -> f64 {
    1.0 / x.tanh()
}

fn cosech(x: f64) -> f64 {
    1.0 / x.sinh()
}

/// Residuals of `coth x = tanh(x/2) + cosech x` and
/// `cosech x + coth x = coth(x/2)`, each relative to `max(1, |terms|)`.
pub fn hyperbolic_identity_suite(x: f64) -> Result<[f64; 2]> {
    if x == 0.0 || !x.is_finite() {
        return Err(Error::invalid("x", "must be finite and nonzero"));
    }
    let (c, t2, cs, c2) = (coth(x), (x / 2.0).tanh(), cosech(x), coth(x / 2.0));
    let first = (c - t2 - cs).abs() / c.abs().max(t2.abs()).max(cs.abs()).max(1.0);
    let second = (cs + c - c2).abs() / c.abs().max(cs.abs()).max(c2.abs()).max(1.0);
    Ok([first, second])
}
