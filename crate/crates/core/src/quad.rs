//! Adaptive quadrature over finite, semi-infinite and oscillatory integrands.
//!
//! Three engines cover everything the transform and kernel code needs:
//!
//! * adaptive Gauss-Kronrod (7/15) bisection on finite intervals,
//! * exp-sinh double-exponential transform for smooth semi-infinite
//!   integrands, with expanding geometric panels as the fallback when the
//!   integrand oscillates,
//! * composite Filon-Simpson rules for `g(x)·sin(ωx)` / `g(x)·cos(ωx)`
//!   with Richardson error estimates, for frequencies too high for
//!   panel-adaptive rules to track.
//!
//! Everything is deterministic: fixed node sets, fixed summation order.

use crate::error::{Error, Result};
use crate::logscale::{LogScaledValue, LogSum};

/// Decay behaviour of the integrand toward +∞, used to pick truncation points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecayHint {
    /// `exp(-(x/scale)^2)`-type decay.
    Gaussian { scale: f64 },
    /// `exp(-x/scale)`-type decay.
    Exponential { scale: f64 },
    /// Nothing known; rely on expanding panels with a stop rule.
    None,
}

/// Tolerances and budget for one quadrature call.
#[derive(Debug, Clone, Copy)]
pub struct QuadSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_nodes: usize,
    pub decay_hint: DecayHint,
    /// Dominant oscillation frequency ω of the integrand, if any.
    pub oscillation_hint: Option<f64>,
}

impl QuadSpec {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        QuadSpec {
            rel_tol,
            abs_tol: 0.0,
            max_nodes: 200_000,
            decay_hint: DecayHint::None,
            oscillation_hint: None,
        }
    }

    pub fn decay(mut self, hint: DecayHint) -> Self {
        self.decay_hint = hint;
        self
    }

    pub fn abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn oscillation(mut self, omega: f64) -> Self {
        self.oscillation_hint = Some(omega);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::domain("rel_tol must lie in (0, 1)"));
        }
        if self.abs_tol < 0.0 {
            return Err(Error::domain("abs_tol must be >= 0"));
        }
        if self.max_nodes < 15 {
            return Err(Error::domain("max_nodes must be >= 15"));
        }
        Ok(())
    }

    fn tolerance_for(&self, value_scale: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value_scale.abs())
    }
}

impl Default for QuadSpec {
    fn default() -> Self {
        QuadSpec::with_rel_tol(1e-10)
    }
}

/// Outcome of a quadrature call.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub err_estimate: f64,
    pub nodes_used: usize,
    pub converged: bool,
}

impl QuadResult {
    /// Turns a non-converged result into an error; convenience for callers
    /// that must propagate quadrature failures.
    pub fn into_result(self) -> Result<f64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::NonConvergence {
                estimate: self.value,
                err_estimate: self.err_estimate,
                nodes_used: self.nodes_used,
            })
        }
    }
}

// 15-point Kronrod nodes on [-1,1] (positive half) and weights, with the
// embedded 7-point Gauss weights. Classical QUADPACK values.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Pushes the 15 Kronrod nodes of panel [a, b] with their Kronrod and
/// embedded-Gauss weights (the latter zero off the Gauss subset), ascending.
pub(crate) fn gk15_panel_nodes(a: f64, b: f64, mut push: impl FnMut(f64, f64, f64)) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    // left half ascending: c - h·0.991, ..., c - h·0.208, then the center
    for j in 0..8 {
        let wg = if j % 2 == 1 { h * WG[j / 2] } else { 0.0 };
        push(c - h * XGK[j], h * WGK[j], wg);
    }
    // right half ascending: c + h·0.208, ..., c + h·0.991
    for j in (0..7).rev() {
        let wg = if j % 2 == 1 { h * WG[j / 2] } else { 0.0 };
        push(c + h * XGK[j], h * WGK[j], wg);
    }
}

/// One Gauss-Kronrod 7/15 panel. Returns (value, error estimate, ∫|f|).
fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut result_k = fc * WGK[7];
    let mut result_g = fc * WG[3];
    let mut resabs = fc.abs() * WGK[7];
    let mut fv = [0.0f64; 15];
    fv[7] = fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let f1 = f(c - x);
        let f2 = f(c + x);
        fv[j] = f1;
        fv[14 - j] = f2;
        result_k += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            result_g += WG[j / 2] * (f1 + f2);
        }
    }
    let value = result_k * h;
    // QUADPACK-style rescaled error estimate
    let mean = result_k * 0.5;
    let mut asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        asc += WGK[j] * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }
    let asc = asc * h.abs();
    let raw = ((result_k - result_g) * h).abs();
    let err = if asc != 0.0 && raw != 0.0 {
        asc * (200.0 * raw / asc).powf(1.5).min(1.0)
    } else {
        raw
    };
    (value, err, resabs * h.abs())
}

/// Adaptive GK bisection on a finite interval.
fn adaptive_gk<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    spec: &QuadSpec,
    budget: usize,
) -> QuadResult {
    let (v0, e0, r0) = gk15(f, a, b);
    let mut nodes = 15usize;
    // worklist of (a, b, value, err, resabs), worst-error-first refinement
    let mut segments: Vec<(f64, f64, f64, f64, f64)> = vec![(a, b, v0, e0, r0)];
    loop {
        let total: f64 = segments.iter().map(|s| s.2).sum();
        let err: f64 = segments.iter().map(|s| s.3).sum();
        let resabs: f64 = segments.iter().map(|s| s.4).sum();
        // no quadrature can certify below the rounding of Σ w|f|
        let tol = spec.tolerance_for(total).max(30.0 * f64::EPSILON * resabs);
        if err <= tol {
            return QuadResult {
                value: total,
                err_estimate: err,
                nodes_used: nodes,
                converged: true,
            };
        }
        if nodes + 30 > budget {
            return QuadResult {
                value: total,
                err_estimate: err,
                nodes_used: nodes,
                converged: err <= tol,
            };
        }
        // split the worst segment
        let (worst_idx, _) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).unwrap())
            .unwrap();
        let (sa, sb, _, _, _) = segments.swap_remove(worst_idx);
        let mid = 0.5 * (sa + sb);
        if mid <= sa || mid >= sb {
            // interval exhausted at machine precision; keep as-is
            let (v, e, r) = gk15(f, sa, sb);
            segments.push((sa, sb, v, 0.1 * e, r));
            nodes += 15;
            continue;
        }
        let (v1, e1, r1) = gk15(f, sa, mid);
        let (v2, e2, r2) = gk15(f, mid, sb);
        nodes += 30;
        segments.push((sa, mid, v1, e1, r1));
        segments.push((mid, sb, v2, e2, r2));
    }
}

/// Truncation point beyond which the tail is below `tol`, given the decay hint.
fn truncation_point(lower: f64, spec: &QuadSpec, tol_exponent: f64) -> Option<f64> {
    match spec.decay_hint {
        DecayHint::Gaussian { scale } => Some(lower.max(0.0) + scale * tol_exponent.sqrt()),
        DecayHint::Exponential { scale } => Some(lower.max(0.0) + scale * tol_exponent),
        DecayHint::None => None,
    }
}

/// Exp-sinh double-exponential rule on [a, ∞), for smooth non-oscillatory
/// integrands. Trapezoid in the transformed variable with level doubling.
fn exp_sinh<F: FnMut(f64) -> f64>(f: &mut F, a: f64, spec: &QuadSpec, budget: usize) -> QuadResult {
    let half_pi = std::f64::consts::FRAC_PI_2;
    // x = a + exp(half_pi * sinh t), dx = half_pi * cosh t * exp(half_pi * sinh t) dt
    let eval = |f: &mut F, t: f64| -> f64 {
        let s = half_pi * t.sinh();
        if s > 700.0 {
            return 0.0; // x overflows; integrand must have decayed long before
        }
        let x = a + s.exp();
        let w = half_pi * t.cosh() * s.exp();
        let fx = f(x);
        if fx == 0.0 || !fx.is_finite() {
            0.0
        } else {
            fx * w
        }
    };
    let t_cap = 4.2; // sinh(4.2)*pi/2 ≈ 52.4 -> x ≈ e^52; far beyond any tolerance we use
    let mut h = 0.5;
    let mut nodes = 0usize;
    // level 0
    let mut sum = eval(f, 0.0);
    nodes += 1;
    let mut k = 1;
    loop {
        let t = k as f64 * h;
        if t > t_cap {
            break;
        }
        let term = eval(f, t) + eval(f, -t);
        nodes += 2;
        sum += term;
        let scale = sum.abs().max(1e-300);
        if term.abs() < 1e-18 * scale && t > 1.0 {
            break;
        }
        k += 1;
    }
    let mut value = sum * h;
    let mut prev;
    loop {
        // halve h: add midpoints
        h *= 0.5;
        let mut add = 0.0;
        let mut k = 1;
        loop {
            let t = k as f64 * h;
            if t > t_cap {
                break;
            }
            let term = eval(f, t) + eval(f, -t);
            nodes += 2;
            add += term;
            let scale = (add.abs() + value.abs() / h).max(1e-300);
            if term.abs() < 1e-18 * scale && t > 1.0 {
                break;
            }
            k += 2; // only odd multiples are new
        }
        prev = value;
        value = 0.5 * prev + add * h;
        let err = (value - prev).abs();
        let tol = spec.tolerance_for(value);
        if err <= tol.max(1e-16 * value.abs()) && h <= 0.25 {
            return QuadResult {
                value,
                err_estimate: err,
                nodes_used: nodes,
                converged: true,
            };
        }
        if nodes > budget || h < 1.0 / 4096.0 {
            return QuadResult {
                value,
                err_estimate: err,
                nodes_used: nodes,
                converged: false,
            };
        }
    }
}

/// Semi-infinite integration by expanding geometric panels, each panel
/// handled by adaptive GK. Robust for oscillatory-decaying integrands.
fn panels_to_infinity<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    spec: &QuadSpec,
    budget: usize,
) -> QuadResult {
    let tol_exponent = -(spec.rel_tol.min(1e-6)).ln() + 9.0;
    let trunc = truncation_point(a, spec, tol_exponent);
    // initial panel width: resolve the oscillation if hinted
    let base = match spec.decay_hint {
        DecayHint::Gaussian { scale } => scale.max(1e-3),
        DecayHint::Exponential { scale } => scale.max(1e-3),
        DecayHint::None => 1.0,
    };
    let width0 = match spec.oscillation_hint {
        Some(om) if om > 0.0 => base.min(2.0 * std::f64::consts::PI / om).max(1e-6),
        _ => base,
    };
    let mut lo = a;
    let mut width = width0;
    let mut total = 0.0;
    let mut err = 0.0;
    let mut nodes = 0usize;
    let mut small_streak = 0;
    let hard_cap = trunc.map(|t| 4.0 * (t - a) + 10.0 * width0);
    loop {
        let hi = lo + width;
        let seg_budget = (budget - nodes).max(60).min(budget / 4 + 900);
        let r = adaptive_gk(f, lo, hi, &QuadSpec { abs_tol: 0.0, ..*spec }, seg_budget);
        total += r.value;
        err += r.err_estimate;
        nodes += r.nodes_used;
        let scale = total.abs().max(spec.abs_tol.max(1e-300) / spec.rel_tol.max(1e-15));
        let panel_small = r.value.abs() <= 0.05 * spec.tolerance_for(scale);
        if panel_small {
            small_streak += 1;
        } else {
            small_streak = 0;
        }
        let past_trunc = trunc.map(|t| hi >= t).unwrap_or(false);
        if (small_streak >= 2 && (past_trunc || trunc.is_none())) || small_streak >= 4 {
            let tol = spec.tolerance_for(total);
            return QuadResult {
                value: total,
                err_estimate: err,
                nodes_used: nodes,
                converged: err <= tol,
            };
        }
        if nodes >= budget || hard_cap.map(|c| hi - a > c).unwrap_or(false) {
            let tol = spec.tolerance_for(total);
            return QuadResult {
                value: total,
                err_estimate: err,
                nodes_used: nodes,
                converged: err <= tol && small_streak >= 1,
            };
        }
        lo = hi;
        width *= if spec.oscillation_hint.is_some() { 1.4 } else { 2.0 };
    }
}

/// Integrate `f` over `[lower, upper]`; `upper` may be `f64::INFINITY`.
///
/// Never panics on a hard integrand: a result with `converged == false` is
/// returned instead of a silently wrong value.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, lower: f64, upper: f64, spec: &QuadSpec) -> QuadResult {
    if let Err(_e) = spec.validate() {
        return QuadResult {
            value: f64::NAN,
            err_estimate: f64::INFINITY,
            nodes_used: 0,
            converged: false,
        };
    }
    if upper.is_finite() {
        if upper <= lower {
            return QuadResult {
                value: 0.0,
                err_estimate: 0.0,
                nodes_used: 0,
                converged: true,
            };
        }
        return adaptive_gk(&mut f, lower, upper, spec, spec.max_nodes);
    }
    match spec.oscillation_hint {
        // strong oscillation: expanding panels track sign changes honestly
        Some(om) if om > 0.0 => panels_to_infinity(&mut f, lower, spec, spec.max_nodes),
        _ => {
            let r = exp_sinh(&mut f, lower, spec, spec.max_nodes / 2);
            if r.converged {
                r
            } else {
                // fall back to panels; exp-sinh struggles with interior peaks
                let r2 = panels_to_infinity(&mut f, lower, spec, spec.max_nodes);
                if r2.converged || r2.err_estimate < r.err_estimate {
                    QuadResult {
                        nodes_used: r.nodes_used + r2.nodes_used,
                        ..r2
                    }
                } else {
                    r
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// log-space integration
// ---------------------------------------------------------------------------

/// GK 7/15 panel in log space. Returns (value, error) as log-scaled numbers.
fn gk15_log<F: FnMut(f64) -> LogScaledValue>(
    f: &mut F,
    a: f64,
    b: f64,
) -> (LogScaledValue, LogScaledValue, LogScaledValue) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut vals = [LogScaledValue::ZERO; 15];
    vals[7] = f(c);
    for j in 0..7 {
        let x = h * XGK[j];
        vals[j] = f(c - x);
        vals[14 - j] = f(c + x);
    }
    let mut kron = LogSum::new();
    let mut gauss = LogSum::new();
    let mut abs = LogSum::new();
    for j in 0..15 {
        let w = if j < 7 { WGK[j] } else if j > 7 { WGK[14 - j] } else { WGK[7] };
        kron.add_scaled(vals[j], w);
        abs.add_scaled(vals[j].abs(), w);
    }
    for (i, &j) in [1usize, 3, 5, 7, 9, 11, 13].iter().enumerate() {
        let w = if i < 3 { WG[i] } else if i > 3 { WG[6 - i] } else { WG[3] };
        gauss.add_scaled(vals[j], w);
    }
    let vk = kron.total().mul_f64(h);
    let vg = gauss.total().mul_f64(h);
    // error = |K - G| in log space
    let mut diff = LogSum::new();
    diff.add(vk);
    diff.add(vg.neg());
    (vk, diff.total().abs(), abs.total().mul_f64(h))
}

/// Log-space counterpart of [`integrate`]: the integrand returns
/// sign/log-magnitude pairs, and panel sums are accumulated without ever
/// forming `exp(log_mag)` of an individual factor.
///
/// The returned `value` is the plain-`f64` rendering of the total (callers
/// integrate quantities whose *totals* are representable even though the
/// integrand factors are not).
pub fn integrate_logspace<F: FnMut(f64) -> LogScaledValue>(
    mut f: F,
    lower: f64,
    upper: f64,
    spec: &QuadSpec,
) -> QuadResult {
    let (v, e, n, conv) = integrate_log_scaled(&mut f, lower, upper, spec);
    QuadResult {
        value: v.to_f64(),
        err_estimate: e.to_f64(),
        nodes_used: n,
        converged: conv,
    }
}

/// Like [`integrate_logspace`] but keeps the total in log scale, for callers
/// that combine it with further exponential prefactors.
pub fn integrate_log_scaled<F: FnMut(f64) -> LogScaledValue>(
    f: &mut F,
    lower: f64,
    upper: f64,
    spec: &QuadSpec,
) -> (LogScaledValue, LogScaledValue, usize, bool) {
    // Finite upper bound required from callers; the spectral modules pick
    // truncation points from their own decay analysis, and pass panels here.
    let upper = if upper.is_finite() {
        upper
    } else {
        match truncation_point(lower, spec, -(spec.rel_tol.min(1e-8)).ln() + 8.0) {
            Some(t) => t,
            None => lower + 60.0, // last resort; callers with hints never hit this
        }
    };
    if upper <= lower {
        return (LogScaledValue::ZERO, LogScaledValue::ZERO, 0, true);
    }
    let (v0, e0, r0) = gk15_log(f, lower, upper);
    let mut nodes = 15usize;
    let mut segments: Vec<(f64, f64, LogScaledValue, LogScaledValue, LogScaledValue)> =
        vec![(lower, upper, v0, e0, r0)];
    loop {
        let mut tot = LogSum::new();
        let mut errsum = LogSum::new();
        let mut abssum = LogSum::new();
        for s in &segments {
            tot.add(s.2);
            errsum.add(s.3.abs());
            abssum.add(s.4.abs());
        }
        let total = tot.total();
        let err = errsum.total();
        let resabs = abssum.total();
        // tolerance in log terms, floored at the rounding of Σ w|f|
        let mut log_tol = if total.is_zero() {
            spec.abs_tol.max(1e-300).ln()
        } else {
            (spec.rel_tol.ln() + total.log_mag).max(spec.abs_tol.max(1e-300).ln())
        };
        if !resabs.is_zero() {
            log_tol = log_tol.max((30.0 * f64::EPSILON).ln() + resabs.log_mag);
        }
        if err.is_zero() || err.log_mag <= log_tol {
            return (total, err, nodes, true);
        }
        if nodes + 30 > spec.max_nodes {
            return (total, err, nodes, false);
        }
        let (worst_idx, _) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| {
                let ex = if x.1 .3.is_zero() { f64::NEG_INFINITY } else { x.1 .3.log_mag };
                let ey = if y.1 .3.is_zero() { f64::NEG_INFINITY } else { y.1 .3.log_mag };
                ex.partial_cmp(&ey).unwrap()
            })
            .unwrap();
        let (sa, sb, _, _, _) = segments.swap_remove(worst_idx);
        let mid = 0.5 * (sa + sb);
        if mid <= sa || mid >= sb {
            let (v, e, r) = gk15_log(f, sa, sb);
            segments.push((sa, sb, v, e.mul_f64(0.1), r));
            nodes += 15;
            continue;
        }
        let (v1, e1, r1) = gk15_log(f, sa, mid);
        let (v2, e2, r2) = gk15_log(f, mid, sb);
        nodes += 30;
        segments.push((sa, mid, v1, e1, r1));
        segments.push((mid, sb, v2, e2, r2));
    }
}

// ---------------------------------------------------------------------------
// Filon rules for g(x)·sin(ωx), g(x)·cos(ωx)
// ---------------------------------------------------------------------------

/// Which trigonometric carrier multiplies the smooth amplitude.
#[derive(Debug, Clone, Copy)]
pub enum Carrier {
    Sin(f64),
    Cos(f64),
}

/// Filon coefficients α(θ), β(θ), γ(θ) with series fallback near θ = 0.
fn filon_coeffs(theta: f64) -> (f64, f64, f64) {
    if theta.abs() < 1e-2 {
        let t2 = theta * theta;
        let alpha = theta * t2 * (2.0 / 45.0 - t2 * (2.0 / 315.0 - t2 * 2.0 / 4725.0));
        let beta =
            2.0 / 3.0 + t2 * (2.0 / 15.0 - t2 * (4.0 / 105.0 - t2 * 2.0 / 567.0));
        let gamma = 4.0 / 3.0 - t2 * (2.0 / 15.0 - t2 * (1.0 / 210.0 - t2 / 11340.0));
        (alpha, beta, gamma)
    } else {
        let (s, c) = theta.sin_cos();
        let t3 = theta * theta * theta;
        let alpha = (theta * theta + theta * s * c - 2.0 * s * s) / t3;
        let beta = (2.0 * theta * (1.0 + c * c) - 4.0 * s * c) / t3;
        let gamma = 4.0 * (s - theta * c) / t3;
        (alpha, beta, gamma)
    }
}

fn filon_pass<G: FnMut(f64) -> f64>(
    g: &mut G,
    carrier: Carrier,
    a: f64,
    b: f64,
    n_half: usize,
) -> f64 {
    let n = 2 * n_half;
    let h = (b - a) / n as f64;
    let omega = match carrier {
        Carrier::Sin(w) | Carrier::Cos(w) => w,
    };
    let theta = omega * h;
    let (alpha, beta, gamma) = filon_coeffs(theta);
    let mut s_even = 0.0; // Σ'' g(x_{2i}) trig(ω x_{2i})
    let mut s_odd = 0.0;
    match carrier {
        Carrier::Sin(w) => {
            for i in 0..=n {
                let x = a + i as f64 * h;
                let gx = g(x);
                let t = gx * (w * x).sin();
                if i % 2 == 0 {
                    s_even += if i == 0 || i == n { 0.5 * t } else { t };
                } else {
                    s_odd += t;
                }
            }
            let ga = g(a);
            let gb = g(b);
            h * (alpha * (ga * (w * a).cos() - gb * (w * b).cos()) + beta * s_even + gamma * s_odd)
        }
        Carrier::Cos(w) => {
            for i in 0..=n {
                let x = a + i as f64 * h;
                let gx = g(x);
                let t = gx * (w * x).cos();
                if i % 2 == 0 {
                    s_even += if i == 0 || i == n { 0.5 * t } else { t };
                } else {
                    s_odd += t;
                }
            }
            let ga = g(a);
            let gb = g(b);
            h * (alpha * (gb * (w * b).sin() - ga * (w * a).sin()) + beta * s_even + gamma * s_odd)
        }
    }
}

/// Composite Filon-Simpson quadrature of `g(x)·sin(ωx)` or `g(x)·cos(ωx)`
/// over a finite interval. The amplitude `g` must be smooth; the rule is
/// exact for parabolic `g` at any frequency, and the panel count is doubled
/// until the Richardson difference meets the tolerance.
pub fn integrate_oscillatory<G: FnMut(f64) -> f64>(
    mut g: G,
    carrier: Carrier,
    a: f64,
    b: f64,
    spec: &QuadSpec,
) -> QuadResult {
    if b <= a {
        return QuadResult {
            value: 0.0,
            err_estimate: 0.0,
            nodes_used: 0,
            converged: true,
        };
    }
    let mut n_half = 16usize;
    let mut prev = filon_pass(&mut g, carrier, a, b, n_half);
    let mut nodes = 2 * n_half + 1;
    loop {
        n_half *= 2;
        let cur = filon_pass(&mut g, carrier, a, b, n_half);
        nodes += 2 * n_half + 1;
        let err = (cur - prev).abs() / 15.0;
        let tol = spec.tolerance_for(cur);
        if err <= tol {
            return QuadResult {
                value: cur,
                err_estimate: err,
                nodes_used: nodes,
                converged: true,
            };
        }
        if nodes > spec.max_nodes {
            return QuadResult {
                value: cur,
                err_estimate: err,
                nodes_used: nodes,
                converged: false,
            };
        }
        prev = cur;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gaussian_integral() {
        let spec = QuadSpec::with_rel_tol(1e-13).decay(DecayHint::Gaussian { scale: 1.0 });
        let r = integrate(|u: f64| (-u * u).exp(), 0.0, f64::INFINITY, &spec);
        assert!(r.converged);
        assert!((r.value - PI.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn damped_cosine() {
        let spec = QuadSpec::with_rel_tol(1e-13).decay(DecayHint::Exponential { scale: 1.0 });
        let r = integrate(|u: f64| (-u).exp() * u.cos(), 0.0, f64::INFINITY, &spec);
        assert!(r.converged);
        assert!((r.value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn finite_polynomial_is_exact() {
        let spec = QuadSpec::with_rel_tol(1e-12);
        let r = integrate(|x: f64| 3.0 * x * x, 0.0, 2.0, &spec);
        assert!(r.converged);
        assert!((r.value - 8.0).abs() < 1e-12);
    }

    #[test]
    fn linearity_on_random_gaussian_polynomials() {
        // a*f + b*g integrates to a*I[f] + b*I[g] within combined error bounds
        let mut state = 0x9E3779B97F4A7C15u64;
        let mut rnd = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let spec = QuadSpec::with_rel_tol(1e-11).decay(DecayHint::Gaussian { scale: 1.0 });
        for _ in 0..10 {
            let (c1, c2) = (2.0 * rnd() - 1.0, 2.0 * rnd() - 1.0);
            let (p1, p2) = (1.0 + 3.0 * rnd(), 1.0 + 3.0 * rnd());
            let f = |x: f64| x.powf(p1.floor()) * (-x * x).exp();
            let g = |x: f64| x.powf(p2.floor()) * (-0.5 * x * x).exp();
            let rf = integrate(f, 0.0, f64::INFINITY, &spec);
            let rg = integrate(g, 0.0, f64::INFINITY, &spec);
            let rc = integrate(|x| c1 * f(x) + c2 * g(x), 0.0, f64::INFINITY, &spec);
            assert!(rf.converged && rg.converged && rc.converged);
            let lin = c1 * rf.value + c2 * rg.value;
            let bound = c1.abs() * rf.err_estimate + c2.abs() * rg.err_estimate + rc.err_estimate;
            assert!(
                (rc.value - lin).abs() <= bound.max(1e-12),
                "linearity violated: {} vs {}",
                rc.value,
                lin
            );
        }
    }

    #[test]
    fn refinement_monotonicity() {
        // halving rel_tol never increases the reported error estimate
        let f = |x: f64| (1.0 + x).ln() * (-x * x / 4.0).exp();
        let mut last = f64::INFINITY;
        let mut tol = 1e-4;
        for _ in 0..6 {
            let spec = QuadSpec::with_rel_tol(tol).decay(DecayHint::Gaussian { scale: 2.0 });
            let r = integrate(f, 0.0, f64::INFINITY, &spec);
            assert!(r.converged);
            assert!(r.err_estimate <= last * (1.0 + 1e-12));
            last = r.err_estimate;
            tol *= 0.5;
        }
    }

    #[test]
    fn gaussian_tail_safety() {
        // for decay hint Gaussian(s), the discarded tail is far below abs_tol/10:
        // the analytic tail of exp(-(x/s)^2) past the truncation point
        let spec = QuadSpec {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_nodes: 100_000,
            decay_hint: DecayHint::Gaussian { scale: 2.0 },
            oscillation_hint: None,
        };
        let t = truncation_point(0.0, &spec, -(spec.rel_tol.min(1e-6) as f64).ln() + 9.0).unwrap();
        // tail of ∫_t^∞ e^{-(x/2)^2} dx <= 2 e^{-(t/2)^2} / t  (standard bound)
        let tail = 2.0 * (-(t / 2.0) * (t / 2.0)).exp() / t;
        assert!(tail <= spec.abs_tol / 10.0, "tail {tail} vs {}", spec.abs_tol / 10.0);
    }

    #[test]
    fn logspace_constant_one() {
        let spec = QuadSpec::with_rel_tol(1e-12);
        let r = integrate_logspace(|_x| LogScaledValue::ONE, 0.0, 1.0, &spec);
        assert!(r.converged);
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn logspace_gaussian_assembled_from_huge_factors() {
        // ∫ exp(-τ² + πτ)·exp(-πτ) dτ = √π/2, assembled from factors that
        // individually reach e^{±large}
        let spec = QuadSpec::with_rel_tol(1e-11).decay(DecayHint::Gaussian { scale: 1.0 });
        let r = integrate_logspace(
            |t| {
                let up = LogScaledValue::new(1, -t * t + PI * t * 40.0);
                up.mul(LogScaledValue::new(1, -PI * t * 40.0))
            },
            0.0,
            f64::INFINITY,
            &spec,
        );
        assert!(r.converged);
        assert!((r.value - PI.sqrt() / 2.0).abs() < 1e-10 * r.value.abs());
    }

    #[test]
    fn logspace_matches_direct_where_representable() {
        let spec = QuadSpec::with_rel_tol(1e-11);
        let f = |x: f64| (1.0 + x * x).recip();
        let direct = integrate(f, 0.0, 3.0, &spec);
        let logd = integrate_logspace(|x| LogScaledValue::from_f64(f(x)), 0.0, 3.0, &spec);
        assert!((direct.value - logd.value).abs() < 1e-11 * direct.value);
    }

    #[test]
    fn filon_vs_elementary() {
        // ∫_0^10 e^{-x} sin(50 x) dx = 50/(1+2500)·(1 - e^{-10}(cos 500 + sin 500/50))
        let w = 50.0;
        let spec = QuadSpec::with_rel_tol(1e-11);
        let r = integrate_oscillatory(|x: f64| (-x).exp(), Carrier::Sin(w), 0.0, 10.0, &spec);
        assert!(r.converged);
        let e10 = (-10.0f64).exp();
        let exact = (w - e10 * (w * (w * 10.0).cos() + (w * 10.0).sin())) / (1.0 + w * w);
        assert!(
            (r.value - exact).abs() < 1e-10,
            "filon {} vs exact {}",
            r.value,
            exact
        );
    }

    #[test]
    fn filon_cos_vs_elementary() {
        let w = 37.0;
        let spec = QuadSpec::with_rel_tol(1e-11);
        let r = integrate_oscillatory(|x: f64| (-x).exp(), Carrier::Cos(w), 0.0, 12.0, &spec);
        assert!(r.converged);
        let el = (-12.0f64).exp();
        let exact = (1.0 - el * ((w * 12.0).cos() - w * (w * 12.0).sin())) / (1.0 + w * w);
        assert!((r.value - exact).abs() < 1e-10);
    }

    #[test]
    fn nonconvergence_is_flagged_not_silent() {
        // absurd budget on a hard integrand
        let spec = QuadSpec {
            rel_tol: 1e-14,
            abs_tol: 0.0,
            max_nodes: 60,
            decay_hint: DecayHint::None,
            oscillation_hint: None,
        };
        let r = integrate(|x: f64| (x - 0.3141).abs().powf(-0.5), 0.0, 1.0, &spec);
        assert!(!r.converged);
        assert!(r.into_result().is_err());
    }
}
