//! The three index transforms — Kontorovich-Lebedev, index Whittaker and
//! Mehler-Fock — as forward/inverse pairs with their spectral densities and
//! Parseval checks.
//!
//! Normalizations follow the classical transform definitions:
//!
//! * KL:  `F(τ) = ∫₀^∞ K_{iτ}(y) f(y) dy/y`,
//!   inverse `(2/π²) ∫ τ sinh(πτ) K_{iτ}(x) F(τ) dτ`
//! * IW:  `F(τ) = ∫₀^∞ W_{α,iτ}(y) f(y) dy/y²`,
//!   inverse `(1/π²) ∫ τ sinh(2πτ) |Γ(1/2-α+iτ)|² W_{α,iτ}(y) F(τ) dτ`
//! * MF:  `F(τ) = ∫₁^∞ P^{-μ}_{-1/2+iτ}(y) f(y) dy`,
//!   inverse `(1/π) ∫ τ sinh(πτ) |Γ(1/2+μ+iτ)|² P^{-μ}_{-1/2+iτ}(x) F(τ) dτ`
//!
//! Kernels and densities carry e^{±πτ/2}-scale factors; everything here is
//! assembled from the `_scaled` evaluators in log space so no intermediate
//! quantity overflows.

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::logscale::LogScaledValue;
use crate::quad::{integrate, integrate_log_scaled, QuadSpec};
use crate::specfun;

const PI: f64 = std::f64::consts::PI;

/// ln sinh(z) for z ≥ 0 without overflow.
pub(crate) fn ln_sinh(z: f64) -> f64 {
    if z <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if z < 1e-3 {
        (z * (1.0 + z * z / 6.0)).ln()
    } else {
        z + (-(-(2.0 * z)).exp()).ln_1p() - std::f64::consts::LN_2
    }
}

/// One of the three transform families of this crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TransformFamily {
    KontorovichLebedev,
    IndexWhittaker { alpha: f64 },
    MehlerFock { mu: f64 },
}

impl std::fmt::Display for TransformFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TransformFamily::KontorovichLebedev => write!(f, "kl"),
            TransformFamily::IndexWhittaker { alpha } => write!(f, "iw(alpha={alpha})"),
            TransformFamily::MehlerFock { mu } => write!(f, "mf(mu={mu})"),
        }
    }
}

impl TransformFamily {
    pub fn validate(&self) -> Result<()> {
        match *self {
            TransformFamily::KontorovichLebedev => Ok(()),
            TransformFamily::IndexWhittaker { alpha } => {
                if alpha < 0.5 {
                    Ok(())
                } else {
                    Err(Error::domain(format!("index Whittaker requires alpha < 1/2, got {alpha}")))
                }
            }
            TransformFamily::MehlerFock { mu } => {
                if (0.0..1.0).contains(&mu) {
                    Ok(())
                } else {
                    Err(Error::domain(format!("Mehler-Fock requires 0 <= mu < 1, got {mu}")))
                }
            }
        }
    }

    /// Open interval the transform lives on.
    pub fn domain(&self) -> (f64, f64) {
        match self {
            TransformFamily::MehlerFock { .. } => (1.0, f64::INFINITY),
            _ => (0.0, f64::INFINITY),
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        let (a, b) = self.domain();
        x > a && x < b
    }

    /// Density of the reference measure r(y)dy in the transform
    /// normalization: dy/y for KL, dy/y² for IW, dy for MF.
    pub fn reference_weight(&self, y: f64) -> f64 {
        match self {
            TransformFamily::KontorovichLebedev => 1.0 / y,
            TransformFamily::IndexWhittaker { .. } => 1.0 / (y * y),
            TransformFamily::MehlerFock { .. } => 1.0,
        }
    }

    /// Eigenvalue of the underlying operator at spectral index τ.
    pub fn eigenvalue(&self, tau: f64) -> f64 {
        match self {
            TransformFamily::KontorovichLebedev => tau * tau,
            TransformFamily::IndexWhittaker { alpha } => tau * tau + alpha * alpha,
            TransformFamily::MehlerFock { .. } => tau * tau + 0.25,
        }
    }

    /// ln of the e^{cτ} factor folded into `kernel_scaled`.
    pub fn kernel_scale_log(&self, tau: f64) -> f64 {
        match self {
            TransformFamily::MehlerFock { .. } => 0.0,
            _ => 0.5 * PI * tau,
        }
    }

    /// Transform kernel at (τ, y): K_{iτ}(y), W_{α,iτ}(y) or P^{-μ}_{-1/2+iτ}(y)
    /// (the classical normalizations; the heat module's operator coordinates
    /// use W_{α,iτ}(2x) instead).
    /// Underflows for large τ; spectral integrands use [`Self::kernel_scaled`].
    pub fn kernel(&self, tau: f64, y: f64) -> Result<f64> {
        let s = self.kernel_scaled(tau, y)?;
        Ok(s.sign as f64 * (s.log_mag - self.kernel_scale_log(tau)).exp())
    }

    /// The kernel times e^{πτ/2} (KL, IW) or unscaled (MF), in log form.
    pub fn kernel_scaled(&self, tau: f64, y: f64) -> Result<LogScaledValue> {
        if !self.contains(y) {
            return Err(Error::domain(format!(
                "argument {y} outside the domain of {self}"
            )));
        }
        match *self {
            TransformFamily::KontorovichLebedev => specfun::bessel_k_im_scaled(tau, y),
            TransformFamily::IndexWhittaker { alpha } => {
                specfun::whittaker_w_im_scaled(alpha, tau, y)
            }
            TransformFamily::MehlerFock { mu } => specfun::legendre_p_im_scaled(mu, tau, y),
        }
    }

    /// Spectral density ρ'(τ) of the inversion integral:
    /// (2/π²) τ sinh(πτ), (1/π²) τ sinh(2πτ)|Γ(1/2-α+iτ)|²,
    /// (1/π) τ sinh(πτ)|Γ(1/2+μ+iτ)|².
    pub fn spectral_density(&self, tau: f64) -> Result<f64> {
        Ok(self.spectral_density_log(tau)?.to_f64())
    }

    /// Spectral density in log form; finite far beyond f64 range.
    pub fn spectral_density_log(&self, tau: f64) -> Result<LogScaledValue> {
        self.validate()?;
        if tau < 0.0 {
            return Err(Error::domain("spectral density requires tau >= 0"));
        }
        if tau == 0.0 {
            return Ok(LogScaledValue::ZERO);
        }
        let lg = match *self {
            TransformFamily::KontorovichLebedev => {
                (2.0 / (PI * PI)).ln() + tau.ln() + ln_sinh(PI * tau)
            }
            TransformFamily::IndexWhittaker { alpha } => {
                (1.0 / (PI * PI)).ln()
                    + tau.ln()
                    + ln_sinh(2.0 * PI * tau)
                    + specfun::ln_gamma_abs2(0.5 - alpha, tau)?
            }
            TransformFamily::MehlerFock { mu } => {
                (1.0 / PI).ln() + tau.ln() + ln_sinh(PI * tau) + specfun::ln_gamma_abs2(0.5 + mu, tau)?
            }
        };
        Ok(LogScaledValue::new(1, lg))
    }

    /// ln ρ'(τ) − k · (kernel scale), the bounded combination entering
    /// integrands with k scaled kernel factors (k = 1 for inversions of
    /// plain data, k = 2 for heat kernels and Parseval weights).
    pub fn log_density_adjusted(&self, tau: f64, k_kernels: u32) -> Result<f64> {
        let d = self.spectral_density_log(tau)?;
        if d.is_zero() {
            return Ok(f64::NEG_INFINITY);
        }
        Ok(d.log_mag - k_kernels as f64 * self.kernel_scale_log(tau))
    }
}

/// Truncation point for ∫ e^{-tλ(τ)}·(spectral weight) dτ: solves
/// t·τ² − πτ − 5·ln(1+τ) = ln(1/tol), never below τ = 30.
pub fn spectral_tau_max(t: f64, tol: f64) -> f64 {
    let target = (1.0 / tol.clamp(1e-300, 0.5)).ln();
    let f = |tau: f64| t * tau * tau - PI * tau - 5.0 * (1.0 + tau).ln() - target;
    let mut lo = 1.0;
    let mut hi = 30.0;
    while f(hi) < 0.0 && hi < 4000.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi.max(30.0)
}

fn forward_integrand_support(family: &TransformFamily, f: &GridFunction) -> (f64, f64) {
    let (a, b) = family.domain();
    let (lo, hi) = f.support();
    (lo.max(a + f64::MIN_POSITIVE), if b.is_finite() { hi.min(b) } else { hi })
}

/// Forward transform of a tabulated function at one spectral index.
pub fn forward(family: TransformFamily, f: &GridFunction, tau: f64) -> Result<f64> {
    let scaled = forward_scaled(family, |y| f.eval(y), forward_integrand_support(&family, f), tau)?;
    Ok(scaled * (-family.kernel_scale_log(tau)).exp())
}

/// Forward transform of a closure over an explicit support interval,
/// returned in kernel-scaled form: e^{πτ/2}·F(τ) for KL/IW, F(τ) for MF.
/// Scaled values stay representable at every τ the inversion integrals use.
pub fn forward_scaled(
    family: TransformFamily,
    f: impl Fn(f64) -> f64,
    support: (f64, f64),
    tau: f64,
) -> Result<f64> {
    family.validate()?;
    if tau < 0.0 {
        return Err(Error::domain("forward requires tau >= 0"));
    }
    let (lo, hi) = support;
    let (a, _b) = family.domain();
    let lo = lo.max(a * (1.0 + 1e-15) + 1e-300);
    if hi <= lo {
        return Ok(0.0);
    }
    let spec = QuadSpec::with_rel_tol(1e-11).abs_tol(1e-14).decay(crate::quad::DecayHint::None);
    let mut failure: Option<Error> = None;
    let r = integrate(
        |y: f64| {
            if y <= a {
                return 0.0;
            }
            let fy = f(y);
            if fy == 0.0 {
                return 0.0;
            }
            match family.kernel_scaled(tau, y) {
                Ok(k) => k.to_f64() * fy * family.reference_weight(y),
                // deep-tail accuracy floors still carry a usable value
                Err(Error::Accuracy { value, .. }) => value * fy * family.reference_weight(y),
                Err(e) => {
                    if failure.is_none() {
                        failure = Some(e);
                    }
                    0.0
                }
            }
        },
        lo,
        hi,
        &spec,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    r.into_result()
}

/// Inverse transform ∫₀^∞ F(τ)·kernel(τ,x)·ρ'(τ) dτ, evaluated in log space
/// over expanding τ-panels until the remaining panels are negligible.
pub fn inverse(family: TransformFamily, f_hat: impl Fn(f64) -> f64, x: f64) -> Result<f64> {
    inverse_scaled(family, |tau| f_hat(tau) * family.kernel_scale_log(tau).exp(), x)
}

/// Inverse transform taking kernel-scaled samples (as produced by
/// [`forward_scaled`]): F̂(τ) = e^{πτ/2} F(τ) for KL/IW, F itself for MF.
pub fn inverse_scaled(
    family: TransformFamily,
    f_hat_scaled: impl Fn(f64) -> f64,
    x: f64,
) -> Result<f64> {
    family.validate()?;
    if !family.contains(x) {
        return Err(Error::domain(format!("{x} outside the domain of {family}")));
    }
    let spec = QuadSpec::with_rel_tol(1e-10).abs_tol(1e-300);
    let failure: std::cell::RefCell<Option<Error>> = std::cell::RefCell::new(None);
    let mut integrand = |tau: f64| -> LogScaledValue {
        if tau <= 0.0 {
            return LogScaledValue::ZERO;
        }
        let fv = f_hat_scaled(tau);
        if fv == 0.0 || !fv.is_finite() {
            return LogScaledValue::ZERO;
        }
        let k = match family.kernel_scaled(tau, x) {
            Ok(k) => k,
            Err(Error::Accuracy { value, .. }) => LogScaledValue::from_f64(value),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                return LogScaledValue::ZERO;
            }
        };
        let adj = match family.log_density_adjusted(tau, 2) {
            Ok(a) => a,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                return LogScaledValue::ZERO;
            }
        };
        k.mul_f64(fv).mul_exp(adj)
    };
    // expanding panels in τ
    let edges = [0.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0, 512.0];
    let mut total = 0.0;
    let mut err = 0.0;
    let mut small = 0;
    for w in edges.windows(2) {
        let (v, e, _n, conv) = integrate_log_scaled(&mut integrand, w[0], w[1], &spec);
        if let Some(e) = failure.borrow_mut().take() {
            return Err(e);
        }
        let val = v.to_f64();
        total += val;
        err += e.to_f64().abs();
        if !conv {
            return Err(Error::NonConvergence {
                estimate: total,
                err_estimate: err,
                nodes_used: 0,
            });
        }
        if val.abs() <= 1e-11 * total.abs().max(1e-280) {
            small += 1;
            if small >= 2 {
                break;
            }
        } else {
            small = 0;
        }
    }
    Ok(total)
}

/// Both sides of the Parseval identity: `(∫ |f|² r dy, ∫ |F|² ρ' dτ)`.
/// The caller asserts closeness; returning both keeps the check honest.
pub fn parseval_gap(family: TransformFamily, f: &GridFunction) -> Result<(f64, f64)> {
    family.validate()?;
    let support = forward_integrand_support(&family, f);
    parseval_gap_fn(family, |y| f.eval(y), support)
}

/// Parseval check for a closure over an explicit support.
pub fn parseval_gap_fn(
    family: TransformFamily,
    f: impl Fn(f64) -> f64 + Copy,
    support: (f64, f64),
) -> Result<(f64, f64)> {
    let spec = QuadSpec::with_rel_tol(1e-11).abs_tol(1e-15);
    let lhs = integrate(
        |y: f64| {
            let v = f(y);
            v * v * family.reference_weight(y)
        },
        support.0,
        support.1,
        &spec,
    )
    .into_result()?;

    // rhs = ∫ F̂(τ)² · exp(ln ρ' − 2·scale) dτ over expanding panels
    let edges = [0.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0];
    let mut rhs = 0.0;
    let mut small = 0;
    'outer: for w in edges.windows(2) {
        let spec_tau = QuadSpec::with_rel_tol(1e-9).abs_tol(1e-14 * lhs.abs().max(1e-30));
        let mut bad: Option<Error> = None;
        let r = integrate(
            |tau: f64| {
                if tau <= 0.0 {
                    return 0.0;
                }
                let fh = match forward_scaled(family, f, support, tau) {
                    Ok(v) => v,
                    Err(e) => {
                        if bad.is_none() {
                            bad = Some(e);
                        }
                        return 0.0;
                    }
                };
                let adj = family.log_density_adjusted(tau, 2).unwrap_or(f64::NEG_INFINITY);
                fh * fh * adj.exp()
            },
            w[0],
            w[1],
            &spec_tau,
        );
        if let Some(e) = bad {
            return Err(e);
        }
        rhs += r.value;
        if r.value.abs() <= 1e-9 * rhs.abs().max(1e-280) {
            small += 1;
            if small >= 2 {
                break 'outer;
            }
        } else {
            small = 0;
        }
    }
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Interpolation;

    #[test]
    fn density_vanishes_at_zero_and_matches_kl_value() {
        let kl = TransformFamily::KontorovichLebedev;
        assert_eq!(kl.spectral_density(0.0).unwrap(), 0.0);
        let got = kl.spectral_density(1.0).unwrap();
        let exact = 2.0 / (PI * PI) * PI.sinh();
        assert!((got - exact).abs() < 1e-12 * exact);
    }

    #[test]
    fn mf_density_at_half_is_tau_squared() {
        // (1/π) τ sinh(πτ) |Γ(1+iτ)|² = τ², via |Γ(1+iτ)|² = πτ/sinh(πτ)
        let mf = TransformFamily::MehlerFock { mu: 0.5 };
        for &tau in &[0.3, 1.0, 2.5, 7.0] {
            let got = mf.spectral_density(tau).unwrap();
            let gamma_route = (1.0 / PI)
                * tau
                * (PI * tau).sinh()
                * crate::specfun::gamma_abs2(1.0, tau).unwrap();
            assert!((got - tau * tau).abs() < 1e-12 * (tau * tau));
            assert!((got - gamma_route).abs() < 1e-12 * got.abs());
        }
    }

    #[test]
    fn densities_positive_for_positive_tau() {
        for fam in [
            TransformFamily::KontorovichLebedev,
            TransformFamily::IndexWhittaker { alpha: -0.5 },
            TransformFamily::MehlerFock { mu: 0.3 },
        ] {
            for &tau in &[0.1, 1.0, 10.0, 60.0] {
                let d = fam.spectral_density_log(tau).unwrap();
                assert_eq!(d.sign, 1, "{fam} at {tau}");
            }
            assert!(fam.spectral_density_log(0.0).unwrap().is_zero());
        }
    }

    #[test]
    fn kl_density_increasing_on_small_tau() {
        let kl = TransformFamily::KontorovichLebedev;
        let mut last = 0.0;
        for i in 1..=50 {
            let tau = 0.1 * i as f64;
            let d = kl.spectral_density(tau).unwrap();
            assert!(d > last, "density must increase on (0,5]");
            last = d;
        }
    }

    #[test]
    fn forward_of_zero_and_linearity() {
        let kl = TransformFamily::KontorovichLebedev;
        let zero =
            GridFunction::sample_geometric(|_| 0.0, 0.01, 10.0, 50, Interpolation::Cubic).unwrap();
        assert_eq!(forward(kl, &zero, 1.3).unwrap(), 0.0);

        let f = |y: f64| y * (-y).exp();
        let one = forward_scaled(kl, f, (1e-8, 45.0), 0.8).unwrap();
        let two = forward_scaled(kl, |y| 2.0 * f(y), (1e-8, 45.0), 0.8).unwrap();
        assert!((two - 2.0 * one).abs() <= 1e-12 * two.abs());
    }

    #[test]
    fn tau_max_rule_floors_at_thirty() {
        assert!(spectral_tau_max(5.0, 1e-10) >= 30.0);
        let t_small = spectral_tau_max(0.05, 1e-12);
        assert!(t_small > 30.0 && t_small < 300.0);
    }
}
