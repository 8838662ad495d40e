//! Matérn-type spectral density applied to the scaled stiffness spectrum.

use crate::error::{Error, Result};

/// `gamma(lambda) = tau * (kappa^2 + lambda)^{-(nu+1)/2}` with
/// `kappa = sqrt(8 nu) / a`.
#[derive(Clone, Copy, Debug)]
pub struct SpectralDensity {
    pub tau: f64,
    pub range_a: f64,
    pub nu: f64,
    pub kappa: f64,
}

impl SpectralDensity {
    pub fn new(tau: f64, range_a: f64, nu: f64) -> Result<Self> {
        if !(tau >= 0.0) || !tau.is_finite() {
            return Err(Error::invalid(format!("tau must be >= 0, got {tau}")));
        }
        if !(range_a > 0.0) || !(nu > 0.0) {
            return Err(Error::invalid(format!(
                "range_a and nu must be > 0, got a={range_a}, nu={nu}"
            )));
        }
        Ok(SpectralDensity {
            tau,
            range_a,
            nu,
            kappa: (8.0 * nu).sqrt() / range_a,
        })
    }

    /// Density with `tau` calibrated for the given stationary marginal
    /// variance; see [`calibrate_tau`].
    pub fn with_variance(range_a: f64, nu: f64, target_variance: f64) -> Result<Self> {
        let tau = calibrate_tau(range_a, nu, target_variance)?;
        SpectralDensity::new(tau, range_a, nu)
    }

    /// Checked evaluation; `lambda < 0` is rejected.
    pub fn eval(&self, lambda: f64) -> Result<f64> {
        if lambda < 0.0 {
            return Err(Error::invalid(format!("lambda must be >= 0, got {lambda}")));
        }
        Ok(self.gamma(lambda))
    }

    /// Unchecked evaluation for hot loops where `lambda >= 0` holds by
    /// construction (spectral intervals, eigenvalues of a PSD matrix).
    #[inline]
    pub fn gamma(&self, lambda: f64) -> f64 {
        self.tau * (self.kappa * self.kappa + lambda).powf(-(self.nu + 1.0) / 2.0)
    }

    /// `gamma^2`, the covariance-side density.
    #[inline]
    pub fn gamma_sq(&self, lambda: f64) -> f64 {
        let g = self.gamma(lambda);
        g * g
    }
}

/// Amplitude giving a stationary 2-d Matérn field the requested marginal
/// variance: inverts `sigma^2 = tau^2 Gamma(nu) / (Gamma(nu+1) 4 pi kappa^{2 nu})`
/// using `Gamma(nu+1) = nu Gamma(nu)`, so
/// `tau = sqrt(target * 4 pi * nu * kappa^{2 nu})`.
pub fn calibrate_tau(range_a: f64, nu: f64, target_variance: f64) -> Result<f64> {
    if !(range_a > 0.0) || !(nu > 0.0) {
        return Err(Error::invalid(format!(
            "range_a and nu must be > 0, got a={range_a}, nu={nu}"
        )));
    }
    if !(target_variance >= 0.0) || !target_variance.is_finite() {
        return Err(Error::invalid(format!(
            "target_variance must be >= 0, got {target_variance}"
        )));
    }
    let kappa = (8.0 * nu).sqrt() / range_a;
    Ok((target_variance * 4.0 * std::f64::consts::PI * nu * kappa.powf(2.0 * nu)).sqrt())
}
