//! Whittaker functions W and M for the index-Whittaker kernel and resolvent.
//!
//! `W_{α,iτ}(z)` is evaluated by one of three routes, picked per argument:
//!
//! * tiny τ — the Laplace-type integral representation in logarithmic
//!   coordinates (no cancellation there),
//! * moderate and large τ with `z ≲ πτ` — the connection formula
//!   `W = 2 Re[Γ(-2iτ)/Γ(1/2-α-iτ) · M_{α,iτ}(z)]`, whose two conjugate
//!   terms share the e^{-πτ/2} scale of W itself, so the Kummer series
//!   never sees exponential cancellation,
//! * very large `z` — the divergent asymptotic series, summed to its
//!   smallest term.
//!
//! The real-index variants needed by the resolvent kernels are the easy
//! cases (positive integrands / positive series) and get direct code paths.

use super::cx::Cx;
use super::cxquad::{integrate_cx, integrate_cx_oscillatory};
use super::gamma::{ln_gamma, ln_gamma_complex};
use crate::error::{Error, Result};
use crate::logscale::LogScaledValue;
use crate::quad::{integrate, QuadSpec};

const PI: f64 = std::f64::consts::PI;

/// Kummer's confluent series M(a, b, z) for complex parameters and real
/// z ≥ 0. Stable whenever the caller keeps z below the cancellation
/// threshold of its connection formula.
fn kummer_series_cx(a: Cx, b: Cx, z: f64) -> Cx {
    let mut term = Cx::ONE;
    let mut sum = Cx::ONE;
    let mut small_streak = 0;
    for k in 0..2000 {
        let kf = k as f64;
        let num = a.add(Cx::real(kf));
        let den = b.add(Cx::real(kf)).scale(kf + 1.0);
        term = term.mul(num).div(den).scale(z);
        sum = sum.add(term);
        if term.abs() <= 1e-18 * sum.abs() {
            small_streak += 1;
            if small_streak >= 2 {
                break;
            }
        } else {
            small_streak = 0;
        }
    }
    sum
}

fn kummer_series_real(a: f64, b: f64, z: f64) -> f64 {
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    for k in 0..2000 {
        let kf = k as f64;
        term *= (a + kf) * z / ((b + kf) * (kf + 1.0));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Generalized binomial coefficient C(c, k) for complex c, by recurrence.
fn binom_cx(c: Cx, k: usize, prev: Cx) -> Cx {
    // C(c,k) = C(c,k-1) * (c - k + 1)/k
    prev.mul(c.sub(Cx::real(k as f64 - 1.0))).scale(1.0 / k as f64)
}

/// The full-line integral J(τ) = ∫ exp(-z e^w) e^{(iτ-α+1/2)w} (1+e^w)^{iτ+α-1/2} dw
/// with an analytic series for the left tail. Valid for any τ (signed), but
/// only well conditioned for |τ| small.
fn w_integral_j(alpha: f64, tau: f64, z: f64) -> Cx {
    let c_pow = Cx::new(alpha - 0.5, tau); // exponent of (1+e^w)
    let w1 = (-2.5f64).min((0.2 / z).ln());
    let w_max = (46.0 / z).ln().max(w1 + 0.5) + 0.5;
    // numeric part on [w1, w_max]
    let mut f = |w: f64| {
        let ew = w.exp();
        let damped = Cx::new(-z * ew, 0.0).add(Cx::new((0.5 - alpha) * w, tau * w));
        let base = Cx::new(1.0 + ew, 0.0);
        damped.exp().mul(base.powc(c_pow))
    };
    let budget = 400_000;
    let (numeric, _e, _n) = if tau.abs() > 2.0 {
        integrate_cx_oscillatory(&mut f, w1, w_max, |_| tau.abs(), 1e-14, 1e-20, budget)
    } else {
        integrate_cx(&mut f, w1, w_max, 1e-14, 1e-20, budget)
    };
    // analytic left tail: coefficients of exp(-z e^w)(1+e^w)^{c} in powers of e^w
    const N: usize = 32;
    let mut expc = [0.0f64; N]; // (-z)^m / m!
    expc[0] = 1.0;
    for m in 1..N {
        expc[m] = expc[m - 1] * (-z) / m as f64;
    }
    let mut bin = [Cx::ZERO; N];
    bin[0] = Cx::ONE;
    for k in 1..N {
        bin[k] = binom_cx(c_pow, k, bin[k - 1]);
    }
    let mut tail = Cx::ZERO;
    for n in 0..N {
        let mut dn = Cx::ZERO;
        for m in 0..=n {
            dn = dn.add(bin[n - m].scale(expc[m]));
        }
        // ∫_{-∞}^{w1} e^{p_n w} dw = e^{p_n w1}/p_n, p_n = (1/2 - α + n) + iτ
        let p = Cx::new(0.5 - alpha + n as f64, tau);
        let contrib = dn.mul(p.scale(w1).exp()).div(p);
        tail = tail.add(contrib);
    }
    numeric.add(tail)
}

/// Route A: W from its Laplace-type representation (log coordinates).
/// Accepts signed τ; exposed for the evenness and oracle tests.
#[doc(hidden)]
pub fn whittaker_w_im_quadrature(alpha: f64, tau_signed: f64, z: f64) -> f64 {
    let j = w_integral_j(alpha, tau_signed, z);
    // W = √z e^{-z/2} Re[ exp(iτ ln z - lnΓ(1/2-α+iτ)) J ]
    let pref = Cx::new(0.0, tau_signed * z.ln()).sub(ln_gamma_complex(Cx::new(
        0.5 - alpha,
        tau_signed,
    )));
    let val = pref.exp().mul(j);
    z.sqrt() * (-0.5 * z).exp() * val.re
}

/// Route B: connection formula through M_{α,±iτ}; returns the scaled value.
fn w_scaled_connection(alpha: f64, tau: f64, z: f64) -> LogScaledValue {
    let a = Cx::new(0.5 - alpha, tau);
    let b = Cx::new(1.0, 2.0 * tau);
    let s = kummer_series_cx(a, b, z);
    // E = lnΓ(-2iτ) - lnΓ(1/2 - α - iτ) + (1/2 + iτ) ln z - z/2
    let e = ln_gamma_complex(Cx::new(0.0, -2.0 * tau))
        .sub(ln_gamma_complex(Cx::new(0.5 - alpha, -tau)))
        .add(Cx::new(0.5, tau).scale(z.ln()))
        .sub(Cx::real(0.5 * z));
    let phase = e.im;
    let real_part = phase.cos() * s.re - phase.sin() * s.im;
    if real_part == 0.0 {
        return LogScaledValue::ZERO;
    }
    LogScaledValue::new(
        if real_part > 0.0 { 1 } else { -1 },
        e.re + (2.0 * real_part.abs()).ln() + 0.5 * PI * tau,
    )
}

/// Route C: asymptotic series for large z, summed to the smallest term.
/// Returns (scaled value, relative accuracy floor).
fn w_scaled_asymptotic(alpha: f64, tau: f64, z: f64) -> (LogScaledValue, f64) {
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut min_term = 1.0f64;
    for k in 0..400 {
        let kf = k as f64;
        let next = term * ((kf + 0.5 - alpha) * (kf + 0.5 - alpha) + tau * tau)
            / (-(z) * (kf + 1.0));
        if next.abs() >= term.abs() && k > 0 {
            break; // divergence point reached
        }
        term = next;
        sum += term;
        min_term = min_term.min(term.abs());
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    let floor = min_term / sum.abs().max(1e-280);
    if sum == 0.0 {
        return (LogScaledValue::ZERO, floor);
    }
    let lsv = LogScaledValue::new(
        if sum > 0.0 { 1 } else { -1 },
        -0.5 * z + alpha * z.ln() + sum.abs().ln() + 0.5 * PI * tau,
    );
    (lsv, floor)
}

fn validate_w_args(alpha: f64, tau: f64, x: f64) -> Result<()> {
    if x <= 0.0 {
        return Err(Error::domain(format!(
            "whittaker_w_im requires x > 0, got {x}"
        )));
    }
    if alpha >= 0.5 {
        return Err(Error::domain(format!(
            "whittaker_w_im requires alpha < 1/2, got {alpha}"
        )));
    }
    if tau < 0.0 {
        return Err(Error::domain(format!(
            "whittaker_w_im requires tau >= 0, got {tau} (the function is even in tau)"
        )));
    }
    Ok(())
}

/// e^{πτ/2} W_{α,iτ}(x) as a sign/log-magnitude pair.
pub fn whittaker_w_im_scaled(alpha: f64, tau: f64, x: f64) -> Result<LogScaledValue> {
    validate_w_args(alpha, tau, x)?;
    let z = x;
    if tau < 0.05 {
        let w = whittaker_w_im_quadrature(alpha, tau, z);
        return Ok(LogScaledValue::from_f64(w).mul_exp(0.5 * PI * tau));
    }
    if z <= PI * tau + 12.0 {
        return Ok(w_scaled_connection(alpha, tau, z));
    }
    if tau <= 4.0 {
        let w = whittaker_w_im_quadrature(alpha, tau, z);
        return Ok(LogScaledValue::from_f64(w).mul_exp(0.5 * PI * tau));
    }
    let (v, floor) = w_scaled_asymptotic(alpha, tau, z);
    if floor > 1e-6 {
        return Err(Error::Accuracy {
            value: v.to_f64(),
            achieved: floor,
            requested: 1e-10,
        });
    }
    Ok(v)
}

/// W_{α,iτ}(x): real-valued Whittaker function of the second kind with
/// purely imaginary second index. Plain argument convention — callers
/// evaluating the index-Whittaker kernel pass 2x themselves.
pub fn whittaker_w_im(alpha: f64, tau: f64, x: f64) -> Result<f64> {
    let s = whittaker_w_im_scaled(alpha, tau, x)?;
    Ok(s.sign as f64 * (s.log_mag - 0.5 * PI * tau).exp())
}

/// W_{α,s}(z) for real second index s ≥ 0, via the Laplace-type integral
/// (positive integrand, no conditioning issues). Needed by the resolvent.
pub fn whittaker_w_real(alpha: f64, s: f64, z: f64) -> Result<f64> {
    if z <= 0.0 || alpha >= 0.5 || s < 0.0 {
        return Err(Error::domain(format!(
            "whittaker_w_real arguments out of range: alpha={alpha}, s={s}, z={z}"
        )));
    }
    // W = e^{-z/2} z^{s+1/2} / Γ(1/2+s-α) ∫ exp(-z e^v) e^{(s-α+1/2)v} (1+e^v)^{s+α-1/2} dv
    let p = s - alpha + 0.5;
    let v_min = (-(42.0) / p).min(-2.0);
    let v_max = (46.0 / z).ln().max(v_min + 1.0) + 0.5;
    let spec = QuadSpec::with_rel_tol(1e-13).abs_tol(1e-300);
    let integral = integrate(
        |v: f64| {
            let ev = v.exp();
            (-z * ev + p * v).exp() * (1.0 + ev).powf(s + alpha - 0.5)
        },
        v_min,
        v_max,
        &spec,
    )
    .into_result()?;
    let ln_w = -0.5 * z + (s + 0.5) * z.ln() - ln_gamma(0.5 + s - alpha) + integral.ln();
    Ok(ln_w.exp())
}

/// M_{α,s}(z) for real second index s ≥ 0 (positive-term Kummer series).
pub fn whittaker_m_real(alpha: f64, s: f64, z: f64) -> Result<f64> {
    if z <= 0.0 || s < 0.0 {
        return Err(Error::domain(format!(
            "whittaker_m_real arguments out of range: s={s}, z={z}"
        )));
    }
    let sum = kummer_series_real(0.5 + s - alpha, 1.0 + 2.0 * s, z);
    Ok(((s + 0.5) * z.ln() - 0.5 * z).exp() * sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bessel::{bessel_k_im, bessel_k_real};

    #[test]
    fn reduces_to_bessel_at_alpha_zero() {
        // W_{0,iτ}(2x) = sqrt(2x/π) K_{iτ}(x)
        for &(tau, x) in &[(0.5, 0.8), (1.0, 1.0), (2.0, 1.7), (3.0, 0.6), (1.5, 2.5)] {
            let w = whittaker_w_im(0.0, tau, 2.0 * x).unwrap();
            let k = bessel_k_im(tau, x).unwrap();
            let expect = (2.0 * x / PI).sqrt() * k;
            assert!(
                (w - expect).abs() <= 1e-8 * expect.abs().max(1e-30),
                "(tau,x)=({tau},{x}): {w} vs {expect}"
            );
        }
    }

    #[test]
    fn large_argument_asymptotics() {
        // W_{α,η}(x) ~ x^α e^{-x/2}. The first correction term is
        // (μ²-(α-1/2)²)/x; at (α, x) = (-1, 40) that is -5.6%, so the raw
        // leading-order ratio sits near 0.948 — assert both the corrected
        // value tightly and the leading order loosely.
        let w = whittaker_w_im(-1.0, 0.0, 40.0).unwrap();
        let leading = 40.0f64.powf(-1.0) * (-20.0f64).exp();
        let ratio = w / leading;
        assert!((ratio - 1.0).abs() < 0.06, "leading-order ratio {ratio}");
        let corrected = 1.0 - 1.5 * 1.5 / 40.0 + (1.5 * 2.5) * (1.5 * 2.5) / (2.0 * 1600.0);
        assert!(
            (ratio - corrected).abs() < 5e-3,
            "ratio {ratio} vs corrected {corrected}"
        );
        // further out the leading order is inside 3%
        let w80 = whittaker_w_im(-1.0, 0.0, 80.0).unwrap();
        let lead80 = 80.0f64.powf(-1.0) * (-40.0f64).exp();
        assert!((w80 / lead80 - 1.0).abs() < 0.03);
    }

    #[test]
    fn dual_quadrature_oracle() {
        // connection-series value against the independent Laplace-integral
        // route at (α, τ, x) = (-1, 2, 1)
        let via_series = whittaker_w_im(-1.0, 2.0, 1.0).unwrap();
        let via_quadrature = whittaker_w_im_quadrature(-1.0, 2.0, 1.0);
        assert!(
            (via_series - via_quadrature).abs() <= 1e-8 * via_quadrature.abs(),
            "{via_series} vs {via_quadrature}"
        );
    }

    #[test]
    fn even_in_the_second_index() {
        // the integral representation at ±τ
        let plus = whittaker_w_im_quadrature(-0.7, 1.3, 2.0);
        let minus = whittaker_w_im_quadrature(-0.7, -1.3, 2.0);
        assert!((plus - minus).abs() <= 1e-12 * plus.abs());
    }

    #[test]
    fn scaled_consistency() {
        let (alpha, tau, x) = (-0.5, 5.0, 2.0);
        let s = whittaker_w_im_scaled(alpha, tau, x).unwrap();
        let plain = whittaker_w_im(alpha, tau, x).unwrap();
        let rebuilt = s.sign as f64 * (s.log_mag - 0.5 * PI * tau).exp();
        assert!((rebuilt - plain).abs() <= 1e-12 * plain.abs().max(1e-300));
    }

    #[test]
    fn scaled_finite_at_large_tau() {
        let s = whittaker_w_im_scaled(-0.5, 60.0, 2.0).unwrap();
        assert!(s.log_mag.is_finite());
    }

    #[test]
    fn real_index_against_imaginary_index_limit() {
        // s = 0 and τ = 0 meet: W_{α,0}(z)
        let a = whittaker_w_real(-0.5, 0.0, 3.0).unwrap();
        let b = whittaker_w_im(-0.5, 0.0, 3.0).unwrap();
        assert!((a - b).abs() < 1e-9 * a.abs());
    }

    #[test]
    fn real_m_and_w_satisfy_their_wronskian() {
        // W{M_{α,s}, W_{α,s}}(z) = -Γ(1+2s)/Γ(1/2+s-α)
        // (equivalent statement of the pair's independence; central diffs)
        let (alpha, s, z) = (-0.5, 0.8, 2.0);
        let h = 1e-5;
        let m = |z: f64| whittaker_m_real(alpha, s, z).unwrap();
        let w = |z: f64| whittaker_w_real(alpha, s, z).unwrap();
        let dm = (m(z + h) - m(z - h)) / (2.0 * h);
        let dw = (w(z + h) - w(z - h)) / (2.0 * h);
        let wron = m(z) * dw - dm * w(z);
        let exact = -ln_gamma(1.0 + 2.0 * s).exp() / ln_gamma(0.5 + s - alpha).exp();
        assert!(
            (wron - exact).abs() < 1e-7 * exact.abs(),
            "wronskian {wron} vs {exact}"
        );
    }

    #[test]
    fn bessel_reduction_with_real_index() {
        // W_{0,s}(2x) = sqrt(2x/π) K_s(x) also holds for real s
        let (s, x) = (0.75, 1.3);
        let w = whittaker_w_real(0.0, s, 2.0 * x).unwrap();
        let expect = (2.0 * x / PI).sqrt() * bessel_k_real(s, x).unwrap();
        assert!((w - expect).abs() < 1e-9 * expect);
    }

    #[test]
    fn domain_errors() {
        assert!(whittaker_w_im(0.6, 1.0, 1.0).is_err());
        assert!(whittaker_w_im(0.0, 1.0, -1.0).is_err());
        assert!(whittaker_w_im(0.0, -1.0, 1.0).is_err());
    }
}
