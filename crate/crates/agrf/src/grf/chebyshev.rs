//! Chebyshev approximation of matrix functions of the scaled stiffness.
//!
//! `f(S) w` is replaced by `P_f(S) w` where `P_f` interpolates `f` at
//! Chebyshev-Gauss points of `[0, lambda_max]`; the polynomial is applied
//! with the three-term recurrence, one sparse mat-vec per degree. No
//! eigenvalues are ever needed, only the spectral interval.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::grf::fem::FemOperators;
use crate::grf::spectral::SpectralDensity;

/// Interpolation coefficients of `f` on `[lo, hi]` at the `degree + 1`
/// Chebyshev-Gauss points. `c[0]` is already halved, so
/// `p(x) = sum_k c[k] T_k(t(x))` with `t` the affine map onto `[-1, 1]`.
pub fn chebyshev_coeffs(f: impl Fn(f64) -> f64, lo: f64, hi: f64, degree: usize) -> Vec<f64> {
    let m = degree + 1;
    let samples: Vec<f64> = (0..m)
        .map(|j| {
            let theta = std::f64::consts::PI * (j as f64 + 0.5) / m as f64;
            let x = lo + (hi - lo) * 0.5 * (theta.cos() + 1.0);
            f(x)
        })
        .collect();
    (0..m)
        .map(|k| {
            let scale = if k == 0 { 1.0 } else { 2.0 } / m as f64;
            scale
                * samples
                    .iter()
                    .enumerate()
                    .map(|(j, fj)| {
                        fj * (k as f64 * std::f64::consts::PI * (j as f64 + 0.5) / m as f64).cos()
                    })
                    .sum::<f64>()
        })
        .collect()
}

/// `P_f(S) w` for an arbitrary scalar function `f` on `[0, lambda_max]`.
pub fn chebyshev_apply_fn(
    ops: &FemOperators,
    f: impl Fn(f64) -> f64,
    w: &DVector<f64>,
    degree: usize,
) -> Result<DVector<f64>> {
    let n = ops.n_nodes();
    if w.len() != n {
        return Err(Error::invalid(format!(
            "vector length {} does not match node count {n}",
            w.len()
        )));
    }
    let coeffs = chebyshev_coeffs(f, 0.0, ops.lambda_max, degree);
    // t(S) = (2 / lambda_max) S - I maps the spectral interval onto [-1, 1].
    let scale = 2.0 / ops.lambda_max;
    let shifted = |v: &DVector<f64>| -> DVector<f64> {
        let mut out = ops.apply_scaled_stiffness(v);
        out.axpy(-1.0, v, scale);
        out
    };

    let mut acc = w * coeffs[0];
    if degree == 0 {
        return Ok(acc);
    }
    let mut t_prev = w.clone();
    let mut t_curr = shifted(w);
    acc.axpy(coeffs[1], &t_curr, 1.0);
    for &c in &coeffs[2..] {
        let mut t_next = shifted(&t_curr);
        t_next *= 2.0;
        t_next -= &t_prev;
        acc.axpy(c, &t_next, 1.0);
        t_prev = t_curr;
        t_curr = t_next;
    }
    Ok(acc)
}

/// `P_gamma(S) w` for the Matérn spectral density.
pub fn chebyshev_apply(
    ops: &FemOperators,
    sd: &SpectralDensity,
    w: &DVector<f64>,
    degree: usize,
) -> Result<DVector<f64>> {
    chebyshev_apply_fn(ops, |lambda| sd.gamma(lambda), w, degree)
}
