//! Spectral heat kernels (fundamental solutions) and resolvent kernels for
//! the three operator families.
//!
//! The fundamental solutions with respect to the family's reference measure
//! r(x)dx (dx/x for KL and IW, dx for MF) are
//!
//! * KL:  `p_r(t,x,y) = (2/π²) ∫ e^{-tτ²} K_{iτ}(x)K_{iτ}(y) τ sinh(πτ) dτ`
//! * IW:  `p_r(t,x,y) = (1/(2π²√(xy))) ∫ e^{-t(τ²+α²)} W_{α,iτ}(2x)W_{α,iτ}(2y)
//!          τ sinh(2πτ) |Γ(1/2-α+iτ)|² dτ`
//! * MF:  `p_r(t,x,y) = (1/π) ∫ e^{-t(τ²+1/4)} P^{-μ}_{-1/2+iτ}(x)P^{-μ}_{-1/2+iτ}(y)
//!          τ sinh(πτ) |Γ(1/2+μ+iτ)|² dτ`
//!
//! all evaluated in log space over the shared τ-grid of
//! [`crate::spectral::SpectralEngine`].

use crate::error::{Error, Result};
use crate::operators::SLOperator;
use crate::quad::{integrate, QuadSpec};
use crate::spectral::SpectralEngine;
use crate::specfun;
use crate::transforms::TransformFamily;

/// Which measure the kernel is a density against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    /// Density w.r.t. r(x)dx (the symmetric normalization).
    WrtR,
    /// Density w.r.t. Lebesgue measure: p(t,x,y) = r(x)·p_r(t,x,y).
    WrtLebesgue,
}

/// Evaluation request for a fundamental solution.
#[derive(Debug, Clone, Copy)]
pub struct HeatKernelSpec {
    pub family: TransformFamily,
    pub t: f64,
    pub measure: Measure,
}

impl HeatKernelSpec {
    pub fn validate(&self) -> Result<()> {
        self.family.validate()?;
        if !(self.t > 0.0) {
            return Err(Error::domain("heat kernel requires t > 0"));
        }
        Ok(())
    }
}

/// Density of the operator reference measure r(x)dx: 1/x for KL and IW
/// (operator coordinates), 1 for MF.
pub fn operator_weight(family: TransformFamily, x: f64) -> f64 {
    match family {
        TransformFamily::MehlerFock { .. } => 1.0,
        _ => 1.0 / x,
    }
}

fn heat_prefactor(family: TransformFamily, x: f64, y: f64) -> f64 {
    match family {
        TransformFamily::IndexWhittaker { .. } => 0.5 / (x * y).sqrt(),
        _ => 1.0,
    }
}

pub(crate) fn check_in_domain(family: TransformFamily, v: f64, name: &str) -> Result<()> {
    if !family.contains(v) {
        return Err(Error::domain(format!(
            "{name} = {v} outside the domain of {family}"
        )));
    }
    Ok(())
}

/// p_r(t, x, y) through a cached engine (the fast path for repeated use).
pub fn heat_kernel_cached(eng: &SpectralEngine, t: f64, x: f64, y: f64) -> Result<f64> {
    let family = eng.family();
    check_in_domain(family, x, "x")?;
    check_in_domain(family, y, "y")?;
    let (v, _e) = eng.two_kernel_sum(t, x, y)?;
    Ok(heat_prefactor(family, x, y) * v)
}

/// p_r(t,x,y) by fully adaptive log-space integration in τ — independent
/// node placement from the fixed-grid engine path, used as the reference
/// side of self-consistency residuals (Chapman-Kolmogorov, evolution).
pub fn heat_kernel_adaptive(family: TransformFamily, t: f64, x: f64, y: f64) -> Result<f64> {
    family.validate()?;
    check_in_domain(family, x, "x")?;
    check_in_domain(family, y, "y")?;
    if !(t > 0.0) {
        return Err(Error::domain("heat kernel requires t > 0"));
    }
    let tau_max = crate::transforms::spectral_tau_max(t, 1e-11);
    let spec = QuadSpec::with_rel_tol(1e-10).abs_tol(1e-300);
    let fail: std::cell::RefCell<Option<Error>> = std::cell::RefCell::new(None);
    let mut integrand = |tau: f64| -> crate::logscale::LogScaledValue {
        use crate::logscale::LogScaledValue;
        if tau <= 0.0 {
            return LogScaledValue::ZERO;
        }
        let kernel = |v: f64| match family {
            TransformFamily::IndexWhittaker { alpha } => {
                crate::specfun::whittaker_w_im_scaled(alpha, tau, 2.0 * v)
            }
            _ => family.kernel_scaled(tau, v),
        };
        let (kx, ky) = match (kernel(x), kernel(y)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(Error::Accuracy { value, .. }), Ok(b)) => (LogScaledValue::from_f64(value), b),
            (Ok(a), Err(Error::Accuracy { value, .. })) => (a, LogScaledValue::from_f64(value)),
            (Err(e), _) | (_, Err(e)) => {
                fail.borrow_mut().get_or_insert(e);
                return LogScaledValue::ZERO;
            }
        };
        match family.log_density_adjusted(tau, 2) {
            Ok(adj) => kx.mul(ky).mul_exp(adj - t * family.eigenvalue(tau)),
            Err(e) => {
                fail.borrow_mut().get_or_insert(e);
                LogScaledValue::ZERO
            }
        }
    };
    let (v, _e, _n, conv) =
        crate::quad::integrate_log_scaled(&mut integrand, 0.0, tau_max, &spec);
    if let Some(e) = fail.into_inner() {
        return Err(e);
    }
    if !conv {
        return Err(Error::NonConvergence {
            estimate: v.to_f64(),
            err_estimate: f64::NAN,
            nodes_used: 0,
        });
    }
    Ok(heat_prefactor(family, x, y) * v.to_f64())
}

/// p_r(t, x, y): the fundamental solution w.r.t. the measure r(y)dy.
pub fn heat_kernel(family: TransformFamily, t: f64, x: f64, y: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain("heat kernel requires t > 0"));
    }
    if t < 1e-3 {
        return Err(Error::Accuracy {
            value: f64::NAN,
            achieved: f64::INFINITY,
            requested: 1e-10,
        });
    }
    let eng = SpectralEngine::new(family, t, 1e-11)?;
    heat_kernel_cached(&eng, t, x, y)
}

/// Fundamental solution under the requested measure convention.
pub fn heat_kernel_with(spec: &HeatKernelSpec, x: f64, y: f64) -> Result<f64> {
    spec.validate()?;
    let p_r = heat_kernel(spec.family, spec.t, x, y)?;
    Ok(match spec.measure {
        Measure::WrtR => p_r,
        Measure::WrtLebesgue => {
            let op = SLOperator::from_family(spec.family);
            (op.r)(x) * p_r
        }
    })
}

/// Integration window in transformed coordinates (log for KL/IW, acosh for
/// MF) wide enough to exhaust the kernels' mass at the given times.
fn transverse_window(family: TransformFamily, centers: &[f64], t_total: f64) -> (f64, f64) {
    let span = (4.0 * t_total * 26.0).sqrt() + 2.0 * t_total + 3.0;
    let map = |x: f64| match family {
        TransformFamily::MehlerFock { .. } => x.acosh(),
        _ => x.ln(),
    };
    let lo = centers.iter().map(|&c| map(c)).fold(f64::INFINITY, f64::min) - span;
    let hi = centers.iter().map(|&c| map(c)).fold(f64::NEG_INFINITY, f64::max) + span;
    match family {
        TransformFamily::MehlerFock { .. } => (lo.max(1e-8), hi),
        _ => (lo, hi),
    }
}

/// ∫ p_r(t,x,y) r(y) dy — the total (sub-Markov) mass.
pub fn heat_mass(eng: &SpectralEngine, t: f64, x: f64) -> Result<f64> {
    let family = eng.family();
    check_in_domain(family, x, "x")?;
    let (lo, hi) = transverse_window(family, &[x], t);
    let spec = QuadSpec { max_nodes: 1800, ..QuadSpec::with_rel_tol(3e-7).abs_tol(1e-9) };
    let mut fail: Option<Error> = None;
    // integrate in the transformed coordinate; the induced measure is
    // dv for KL/IW (v = ln y) and sinh(w)dw for MF (w = acosh y)
    let r = integrate(
        |v: f64| {
            let (y, jac) = match family {
                TransformFamily::MehlerFock { .. } => (v.cosh(), v.sinh()),
                _ => (v.exp(), 1.0),
            };
            match heat_kernel_cached(eng, t, x, y) {
                Ok(p) => p * operator_weight(family, y) * jac * match family {
                    TransformFamily::MehlerFock { .. } => 1.0,
                    _ => y, // dy = y dv
                },
                Err(e) => {
                    if fail.is_none() {
                        fail = Some(e);
                    }
                    0.0
                }
            }
        },
        lo,
        hi,
        &spec,
    );
    if let Some(e) = fail {
        return Err(e);
    }
    r.into_result()
}

/// ∫ ψ(y) p_r(t,x,y) r(y) dy — the spectral side of the Feynman-Kac
/// identity for a bounded nonnegative ψ.
pub fn weighted_expectation(
    eng: &SpectralEngine,
    t: f64,
    x: f64,
    psi: impl Fn(f64) -> f64,
) -> Result<f64> {
    let family = eng.family();
    check_in_domain(family, x, "x")?;
    let (lo, hi) = transverse_window(family, &[x], t);
    let spec = QuadSpec {
        max_nodes: 1800,
        ..QuadSpec::with_rel_tol(3e-7).abs_tol(1e-9)
    };
    let mut fail: Option<Error> = None;
    let r = integrate(
        |v: f64| {
            let (y, jac) = match family {
                TransformFamily::MehlerFock { .. } => (v.cosh(), v.sinh()),
                _ => (v.exp(), v.exp()),
            };
            match heat_kernel_cached(eng, t, x, y) {
                Ok(p) => p * psi(y) * operator_weight(family, y) * jac,
                Err(e) => {
                    if fail.is_none() {
                        fail = Some(e);
                    }
                    0.0
                }
            }
        },
        lo,
        hi,
        &spec,
    );
    if let Some(e) = fail {
        return Err(e);
    }
    r.into_result()
}

/// |p_r(t+s,x,y) − ∫ p_r(t,x,ξ) p_r(s,ξ,y) r(ξ) dξ|.
pub fn chapman_kolmogorov_residual(
    family: TransformFamily,
    t: f64,
    s: f64,
    x: f64,
    y: f64,
) -> Result<f64> {
    if !(t > 0.0 && s > 0.0) {
        return Err(Error::domain("Chapman-Kolmogorov requires t, s > 0"));
    }
    check_in_domain(family, x, "x")?;
    check_in_domain(family, y, "y")?;
    // the reference side uses independent (adaptive) τ nodes so the
    // residual genuinely probes the semigroup property, not grid identity
    let lhs = heat_kernel_adaptive(family, t + s, x, y)?;
    let eng = SpectralEngine::new(family, t.min(s), 1e-11)?;
    let (lo, hi) = transverse_window(family, &[x, y], t + s);
    let spec = QuadSpec { max_nodes: 2400, ..QuadSpec::with_rel_tol(3e-7).abs_tol(1e-8 * lhs.abs().max(1e-8)) };
    let mut fail: Option<Error> = None;
    let r = integrate(
        |v: f64| {
            let (xi, jac) = match family {
                TransformFamily::MehlerFock { .. } => (v.cosh(), v.sinh()),
                _ => (v.exp(), v.exp()),
            };
            let a = heat_kernel_cached(&eng, t, x, xi);
            let b = heat_kernel_cached(&eng, s, xi, y);
            match (a, b) {
                (Ok(a), Ok(b)) => a * b * operator_weight(family, xi) * jac,
                (Err(e), _) | (_, Err(e)) => {
                    if fail.is_none() {
                        fail = Some(e);
                    }
                    0.0
                }
            }
        },
        lo,
        hi,
        &spec,
    );
    if let Some(e) = fail {
        return Err(e);
    }
    Ok((lhs - r.into_result()?).abs())
}

/// Normalized PDE residual |∂_t p + L_x p| / (|p| + floor) by central
/// differences on a shared engine (so the quadrature error is a smooth
/// function of the stencil point and cancels in the differences).
pub fn pde_residual(
    family: TransformFamily,
    t: f64,
    x: f64,
    y: f64,
    h_t: f64,
    h_x: f64,
) -> Result<f64> {
    if !(t > 2.0 * h_t) {
        return Err(Error::domain("pde_residual requires t > 2 h_t"));
    }
    check_in_domain(family, x - 2.0 * h_x, "x - 2h")?;
    check_in_domain(family, y, "y")?;
    let eng = SpectralEngine::new(family, t - 2.0 * h_t, 1e-12)?;
    let p = |xx: f64, tt: f64| heat_kernel_cached(&eng, tt, xx, y);
    let dt = (p(x, t + h_t)? - p(x, t - h_t)?) / (2.0 * h_t);
    let op = SLOperator::from_family(family);
    let mut u = |xx: f64| p(xx, t);
    let lp = op.apply(&mut u, x, h_x)?;
    let scale = p(x, t)?.abs() + 1e-30;
    Ok((dt + lp).abs() / scale)
}

/// Resolvent kernel of (L - λ)^{-1} for λ < 0 (below the spectrum), from
/// the boundary-adapted solution pair of each family:
///
/// * KL:  I_σ(min)·K_σ(max), σ = √(-λ)
/// * IW:  Γ(1/2-α+s)/Γ(1+2s) · M_{α,s}(2·min) W_{α,s}(2·max) / (2√(xy)),
///   s = √(α²-λ)
/// * MF:  Γ(1/2+μ+σ)·P^{-μ}_{-1/2+σ}(min)·𝑸^μ_{-1/2+σ}(max), σ = √(1/4-λ)
pub fn resolvent_kernel(family: TransformFamily, lambda: f64, x: f64, y: f64) -> Result<f64> {
    family.validate()?;
    if lambda >= 0.0 {
        return Err(Error::domain(format!(
            "resolvent requires lambda < 0 (below the spectrum), got {lambda}"
        )));
    }
    check_in_domain(family, x, "x")?;
    check_in_domain(family, y, "y")?;
    let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
    match family {
        TransformFamily::KontorovichLebedev => {
            let sigma = (-lambda).sqrt();
            Ok(specfun::bessel_i(sigma, lo)? * specfun::bessel_k_real(sigma, hi)?)
        }
        TransformFamily::IndexWhittaker { alpha } => {
            let s = (alpha * alpha - lambda).sqrt();
            let ln_ratio = specfun::ln_gamma(0.5 - alpha + s) - specfun::ln_gamma(1.0 + 2.0 * s);
            Ok(ln_ratio.exp() * specfun::whittaker_m_real(alpha, s, 2.0 * lo)?
                * specfun::whittaker_w_real(alpha, s, 2.0 * hi)?
                / (2.0 * (x * y).sqrt()))
        }
        TransformFamily::MehlerFock { mu } => {
            let sigma = (0.25 - lambda).sqrt();
            let nu = -0.5 + sigma;
            Ok(specfun::gamma(0.5 + mu + sigma)
                * specfun::legendre_p_real_deg(mu, nu, lo)?
                * specfun::legendre_q_olver(mu, nu, hi)?)
        }
    }
}

/// The Laplace-transform route to the same kernel:
/// ∫₀^∞ e^{λt} p_r(t,x,y) dt, integrated numerically in t. Independent of
/// [`resolvent_kernel`], which is what makes the identity a real check.
pub fn resolvent_via_laplace(
    family: TransformFamily,
    lambda: f64,
    x: f64,
    y: f64,
) -> Result<f64> {
    if lambda >= 0.0 {
        return Err(Error::domain("resolvent requires lambda < 0"));
    }
    check_in_domain(family, x, "x")?;
    check_in_domain(family, y, "y")?;
    // distance in the natural coordinate controls how small t must go
    let d = match family {
        TransformFamily::MehlerFock { .. } => (x.acosh() - y.acosh()).abs(),
        _ => (x.ln() - y.ln()).abs(),
    };
    let t_lo = (d * d / 180.0).max(2e-3);
    let eng = SpectralEngine::for_heat(family, t_lo, 1e-10)?;
    resolvent_via_laplace_cached(&eng, lambda, x, y, t_lo)
}

/// Laplace-transform route on a caller-provided two-kernel engine, so a
/// sweep over several λ at fixed (x, y) reuses the cached kernel rows.
pub fn resolvent_via_laplace_cached(
    eng: &SpectralEngine,
    lambda: f64,
    x: f64,
    y: f64,
    t_lo: f64,
) -> Result<f64> {
    let family = eng.family();
    if lambda >= 0.0 {
        return Err(Error::domain("resolvent requires lambda < 0"));
    }
    if t_lo < eng.min_t() {
        return Err(Error::domain("engine resolution does not cover t_lo"));
    }
    let t_hi = 40.0 / (-lambda) + 5.0;
    let spec = QuadSpec { max_nodes: 3000, ..QuadSpec::with_rel_tol(1e-7).abs_tol(1e-11) };
    let mut fail: Option<Error> = None;
    let r = integrate(
        |t: f64| {
            if t < t_lo {
                return 0.0;
            }
            match heat_kernel_cached(&eng, t, x, y) {
                Ok(p) => (lambda * t).exp() * p,
                Err(e) => {
                    if fail.is_none() {
                        fail = Some(e);
                    }
                    0.0
                }
            }
        },
        t_lo,
        t_hi,
        &spec,
    );
    if let Some(e) = fail {
        return Err(e);
    }
    // the [0, t_lo) sliver: bounded by t_lo · max p_r on it; the Gaussian
    // factor makes it negligible by the choice of t_lo, checked here
    let head = t_lo * heat_kernel_cached(&eng, t_lo, x, y)?.abs();
    let val = r.into_result()?;
    if head > 1e-5 * val.abs().max(1e-12) {
        return Err(Error::Accuracy {
            value: val,
            achieved: head / val.abs().max(1e-300),
            requested: 1e-8,
        });
    }
    Ok(val)
}

/// p_r gap between two operators sharing (p, r) with ordered killing terms:
/// the kernel of the *less* killed family minus the more killed one. For
/// Mehler-Fock pass μ₁ ≤ μ₂; for index Whittaker α₂ ≤ α₁ ≤ 0.
pub fn monotonicity_gap(
    family1: TransformFamily,
    family2: TransformFamily,
    t: f64,
    x: f64,
    y: f64,
) -> Result<f64> {
    match (family1, family2) {
        (TransformFamily::MehlerFock { mu: m1 }, TransformFamily::MehlerFock { mu: m2 }) => {
            if m1 > m2 {
                return Err(Error::domain(format!(
                    "monotonicity pair needs mu1 <= mu2, got ({m1}, {m2})"
                )));
            }
        }
        (
            TransformFamily::IndexWhittaker { alpha: a1 },
            TransformFamily::IndexWhittaker { alpha: a2 },
        ) => {
            if !(a2 <= a1 && a1 <= 0.0) {
                return Err(Error::domain(format!(
                    "monotonicity pair needs alpha2 <= alpha1 <= 0, got ({a1}, {a2})"
                )));
            }
        }
        _ => {
            return Err(Error::domain(
                "monotonicity gap is defined within one family (MF or IW pairs)",
            ))
        }
    }
    let p1 = heat_kernel(family1, t, x, y)?;
    let p2 = heat_kernel(family2, t, x, y)?;
    Ok(p1 - p2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn symmetric_in_its_arguments() {
        let eng = SpectralEngine::new(TransformFamily::KontorovichLebedev, 1.0, 1e-11).unwrap();
        let a = heat_kernel_cached(&eng, 1.0, 1.0, 2.0).unwrap();
        let b = heat_kernel_cached(&eng, 1.0, 2.0, 1.0).unwrap();
        assert!(a > 0.0);
        assert!((a - b).abs() <= 1e-12 * a.abs());
    }

    #[test]
    fn mf_half_closed_form() {
        // (t, ξ, χ) = (0.5, 1.0, 1.5):
        // p_r = (1/√(πt)) (sinh ξ sinh χ)^{-1/2} e^{-t/4-(ξ²+χ²)/4t} sinh(ξχ/2t)
        let (t, xi, chi) = (0.5, 1.0f64, 1.5f64);
        let got = heat_kernel(
            TransformFamily::MehlerFock { mu: 0.5 },
            t,
            xi.cosh(),
            chi.cosh(),
        )
        .unwrap();
        let closed = (PI * t).sqrt().recip()
            * (xi.sinh() * chi.sinh()).powf(-0.5)
            * (-t / 4.0 - (xi * xi + chi * chi) / (4.0 * t)).exp()
            * (xi * chi / (2.0 * t)).sinh();
        assert!(
            (got - closed).abs() <= 1e-6 * closed.abs(),
            "{got} vs {closed}"
        );
    }

    #[test]
    fn kl_mass_strictly_below_one() {
        let eng = SpectralEngine::new(TransformFamily::KontorovichLebedev, 1.0, 1e-11).unwrap();
        let m = heat_mass(&eng, 1.0, 1.0).unwrap();
        assert!(m > 0.0 && m < 1.0, "mass {m}");
    }

    #[test]
    fn iw_alpha_zero_equals_kl() {
        // the two spectral formulas describe the same operator at α = 0
        let a = heat_kernel(TransformFamily::KontorovichLebedev, 0.8, 1.2, 2.0).unwrap();
        let b = heat_kernel(TransformFamily::IndexWhittaker { alpha: 0.0 }, 0.8, 1.2, 2.0).unwrap();
        assert!((a - b).abs() <= 1e-8 * a.abs(), "{a} vs {b}");
    }

    #[test]
    fn chapman_kolmogorov_degenerate_symmetry() {
        let fam = TransformFamily::KontorovichLebedev;
        let r1 = chapman_kolmogorov_residual(fam, 0.5, 0.5, 1.0, 1.0).unwrap();
        let r2 = chapman_kolmogorov_residual(fam, 0.5, 0.5, 1.0, 1.0).unwrap();
        assert!((r1 - r2).abs() <= 1e-10 * r1.abs().max(1e-300));
        assert!(r1 <= 1e-4, "residual {r1}");
    }

    #[test]
    fn resolvent_matches_bessel_product() {
        // KL, λ = -1, x = 1, y = 2 → I₁(1)·K₁(2)
        let got = resolvent_kernel(TransformFamily::KontorovichLebedev, -1.0, 1.0, 2.0).unwrap();
        let expect = specfun::bessel_i(1.0, 1.0).unwrap() * specfun::bessel_k_real(1.0, 2.0).unwrap();
        assert!((got - expect).abs() <= 1e-12 * expect);
        // symmetric in (x, y)
        let sym = resolvent_kernel(TransformFamily::KontorovichLebedev, -1.0, 2.0, 1.0).unwrap();
        assert!((got - sym).abs() <= 1e-14 * got.abs());
    }

    #[test]
    fn resolvent_rejects_spectrum() {
        assert!(resolvent_kernel(TransformFamily::KontorovichLebedev, 0.5, 1.0, 2.0).is_err());
        assert!(resolvent_kernel(TransformFamily::KontorovichLebedev, 0.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn laplace_identity_kl() {
        let lam = -1.0;
        let direct = resolvent_kernel(TransformFamily::KontorovichLebedev, lam, 1.0, 2.0).unwrap();
        let via_heat =
            resolvent_via_laplace(TransformFamily::KontorovichLebedev, lam, 1.0, 2.0).unwrap();
        assert!(
            (direct - via_heat).abs() <= 1e-4 * direct.abs(),
            "{direct} vs {via_heat}"
        );
    }

    #[test]
    fn monotonicity_equal_parameters_gap_zero() {
        let f = TransformFamily::MehlerFock { mu: 0.4 };
        let g = monotonicity_gap(f, f, 1.0, 2.0, 3.0).unwrap();
        assert!(g.abs() <= 1e-12);
    }

    #[test]
    fn monotonicity_rejects_misordered_pairs() {
        assert!(monotonicity_gap(
            TransformFamily::MehlerFock { mu: 0.6 },
            TransformFamily::MehlerFock { mu: 0.2 },
            1.0,
            2.0,
            3.0
        )
        .is_err());
        assert!(monotonicity_gap(
            TransformFamily::IndexWhittaker { alpha: -1.0 },
            TransformFamily::IndexWhittaker { alpha: -0.5 },
            1.0,
            2.0,
            3.0
        )
        .is_err());
    }

    #[test]
    fn lebesgue_measure_flag_scales_by_r() {
        let spec_r = HeatKernelSpec {
            family: TransformFamily::KontorovichLebedev,
            t: 1.0,
            measure: Measure::WrtR,
        };
        let spec_leb = HeatKernelSpec {
            measure: Measure::WrtLebesgue,
            ..spec_r
        };
        let (x, y) = (2.0, 1.5);
        let pr = heat_kernel_with(&spec_r, x, y).unwrap();
        let pl = heat_kernel_with(&spec_leb, x, y).unwrap();
        assert!((pl - pr / x).abs() <= 1e-12 * pl.abs());
    }
}
