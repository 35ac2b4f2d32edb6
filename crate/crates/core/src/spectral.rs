//! Shared machinery for spectral integrals over the index τ: a fixed
//! composite Gauss-Kronrod τ-grid with cached kernel rows.
//!
//! Heat kernels, resolvent Laplace transforms, Chapman-Kolmogorov products
//! and evolution-equation checks all integrate expressions of the shape
//! `∫ e^{-tλ(τ)}·(kernel factors)·ρ'(τ) dτ` for many combinations of the
//! same spatial arguments. Evaluating each kernel row K̂(τ_i, x) once and
//! reusing it across those integrals turns hour-scale test runs into
//! seconds, with a deterministic, fixed summation order.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::logscale::{LogScaledValue, LogSum};
use crate::specfun;
use crate::transforms::{spectral_tau_max, TransformFamily};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
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

/// Which kernel coordinates a row holds: the transform normalization of the
/// classical definitions, or the operator coordinates of the heat kernels
/// (these differ only for the index Whittaker family, W(y) vs W(2x)).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelKind {
    Transform,
    Operator,
}

/// Fixed τ-grid spectral integrator with kernel-row caching.
pub struct SpectralEngine {
    family: TransformFamily,
    min_t: f64,
    taus: Vec<f64>,
    w_fine: Vec<f64>,
    w_gauss: Vec<f64>,
    lambdas: Vec<f64>,
    /// ln ρ'(τ_i) − 2·(kernel scale): weight for two-kernel integrands.
    dens2: Vec<f64>,
    /// ln ρ'(τ_i) − 1·(kernel scale): weight for one-kernel integrands.
    dens1: Vec<f64>,
    rows: RefCell<HashMap<(KernelKind, u64), Rc<Vec<LogScaledValue>>>>,
}

impl SpectralEngine {
    /// An engine able to evaluate spectral integrals with damping e^{-tλ(τ)}
    /// for every t ≥ `min_t`, to roughly `rel_tol`. The truncation point
    /// carries e^{πτ/2} headroom so one-kernel (inverse-transform)
    /// integrands converge too.
    pub fn new(family: TransformFamily, min_t: f64, rel_tol: f64) -> Result<Self> {
        Self::with_tau_max(family, min_t, spectral_tau_max(min_t, rel_tol))
    }

    /// Engine for two-kernel integrands only (heat kernels, resolvents):
    /// their τ-weight is polynomially bounded, so the truncation solves
    /// `t·τ² - 5·ln(1+τ) = ln(1/tol)` without the e^{πτ/2} headroom —
    /// far fewer nodes when `min_t` is small.
    pub fn for_heat(family: TransformFamily, min_t: f64, rel_tol: f64) -> Result<Self> {
        if !(min_t > 0.0) {
            return Err(Error::domain("SpectralEngine requires min_t > 0"));
        }
        let target = (1.0 / rel_tol.clamp(1e-300, 0.5)).ln();
        let mut tau = (target / min_t).sqrt().max(30.0);
        for _ in 0..40 {
            tau = ((target + 5.0 * (1.0 + tau).ln()) / min_t).sqrt();
        }
        Self::with_tau_max(family, min_t, tau.max(30.0))
    }

    fn with_tau_max(family: TransformFamily, min_t: f64, tau_max: f64) -> Result<Self> {
        family.validate()?;
        if !(min_t > 0.0) {
            return Err(Error::domain("SpectralEngine requires min_t > 0"));
        }
        // geometric head panels resolve the τ ~ 1/√t boundary layer when the
        // engine is reused at t much larger than min_t
        let mut edges = vec![0.0f64, 0.02, 0.05, 0.12, 0.3];
        let mut tau = 0.3;
        while tau < tau_max {
            // the kernels oscillate in τ with phase rate ~ ln τ, so the
            // panel width shrinks logarithmically, keeping the per-panel
            // phase short enough that GK15 stays at machine accuracy even
            // against the e^{πτ/2} growth of one-kernel integrands
            let width = if tau < 12.0 {
                0.75
            } else {
                (5.5 / (1.0 + (1.0 + tau).ln())).max(0.35)
            };
            tau = (tau + width).min(tau_max);
            edges.push(tau);
        }
        let mut taus = Vec::new();
        let mut w_fine = Vec::new();
        let mut w_gauss = Vec::new();
        for w in edges.windows(2) {
            let c = 0.5 * (w[0] + w[1]);
            let h = 0.5 * (w[1] - w[0]);
            // nodes in ascending order inside the panel
            for j in 0..8 {
                taus.push(c - h * XGK[j]);
                w_fine.push(h * WGK[j]);
                w_gauss.push(if j % 2 == 1 { h * WG[j / 2] } else { 0.0 });
            }
            for j in (0..7).rev() {
                taus.push(c + h * XGK[j]);
                w_fine.push(h * WGK[j]);
                w_gauss.push(if j % 2 == 1 { h * WG[j / 2] } else { 0.0 });
            }
        }
        let mut lambdas = Vec::with_capacity(taus.len());
        let mut dens2 = Vec::with_capacity(taus.len());
        let mut dens1 = Vec::with_capacity(taus.len());
        for &tau in &taus {
            lambdas.push(family.eigenvalue(tau));
            dens2.push(family.log_density_adjusted(tau, 2)?);
            dens1.push(family.log_density_adjusted(tau, 1)?);
        }
        Ok(SpectralEngine {
            family,
            min_t,
            taus,
            w_fine,
            w_gauss,
            lambdas,
            dens2,
            dens1,
            rows: RefCell::new(HashMap::new()),
        })
    }

    pub fn family(&self) -> TransformFamily {
        self.family
    }

    pub fn min_t(&self) -> f64 {
        self.min_t
    }

    pub fn taus(&self) -> &[f64] {
        &self.taus
    }

    /// Scaled kernel row K̂(τ_i, x), cached per (kind, x).
    pub fn row(&self, kind: KernelKind, x: f64) -> Result<Rc<Vec<LogScaledValue>>> {
        let key = (kind, x.to_bits());
        if let Some(r) = self.rows.borrow().get(&key) {
            return Ok(Rc::clone(r));
        }
        let vals = match self.family {
            TransformFamily::KontorovichLebedev => specfun::bessel_k_im_scaled_row(&self.taus, x)?,
            TransformFamily::MehlerFock { mu } => {
                specfun::legendre_p_im_scaled_row(mu, &self.taus, x)?
            }
            TransformFamily::IndexWhittaker { alpha } => {
                let arg = match kind {
                    KernelKind::Operator => 2.0 * x,
                    KernelKind::Transform => x,
                };
                let mut vals = Vec::with_capacity(self.taus.len());
                for &tau in &self.taus {
                    match specfun::whittaker_w_im_scaled(alpha, tau, arg) {
                        Ok(v) => vals.push(v),
                        // deep-tail accuracy floors carry their value; keep it
                        Err(Error::Accuracy { value, .. }) => {
                            vals.push(LogScaledValue::from_f64(value))
                        }
                        Err(e) => return Err(e),
                    }
                }
                vals
            }
        };
        let rc = Rc::new(vals);
        self.rows.borrow_mut().insert(key, Rc::clone(&rc));
        Ok(rc)
    }

    fn check_t(&self, t: f64) -> Result<()> {
        if t < self.min_t * (1.0 - 1e-12) {
            return Err(Error::domain(format!(
                "t = {t} below engine resolution min_t = {}",
                self.min_t
            )));
        }
        Ok(())
    }

    /// Σ w_i e^{-tλ_i} K̂(τ_i,x) K̂(τ_i,y) e^{dens2_i} with the embedded
    /// lower-order rule as error estimate. Operator coordinates.
    pub fn two_kernel_sum(&self, t: f64, x: f64, y: f64) -> Result<(f64, f64)> {
        self.check_t(t)?;
        let rx = self.row(KernelKind::Operator, x)?;
        let ry = self.row(KernelKind::Operator, y)?;
        let mut fine = LogSum::new();
        let mut gauss = LogSum::new();
        for i in 0..self.taus.len() {
            let term = rx[i]
                .mul(ry[i])
                .mul_exp(self.dens2[i] - t * self.lambdas[i]);
            if term.is_zero() {
                continue;
            }
            fine.add(term.mul_f64(self.w_fine[i]));
            if self.w_gauss[i] != 0.0 {
                gauss.add(term.mul_f64(self.w_gauss[i]));
            }
        }
        let v = fine.total_f64();
        let e = (v - gauss.total_f64()).abs();
        Ok((v, e))
    }

    /// Σ w_i e^{-tλ_i} K̂(τ_i,x) e^{dens1_i} (one kernel factor), operator
    /// coordinates — the raw inverse transform of e^{-tλ}.
    pub fn one_kernel_sum(&self, t: f64, x: f64) -> Result<(f64, f64)> {
        self.check_t(t)?;
        let rx = self.row(KernelKind::Operator, x)?;
        let mut fine = LogSum::new();
        let mut gauss = LogSum::new();
        for i in 0..self.taus.len() {
            let term = rx[i].mul_exp(self.dens1[i] - t * self.lambdas[i]);
            if term.is_zero() {
                continue;
            }
            fine.add(term.mul_f64(self.w_fine[i]));
            if self.w_gauss[i] != 0.0 {
                gauss.add(term.mul_f64(self.w_gauss[i]));
            }
        }
        let v = fine.total_f64();
        let e = (v - gauss.total_f64()).abs();
        Ok((v, e))
    }

    /// Generic weighted spectral sum: caller supplies per-node log-scaled
    /// factors g(i, τ_i); computes Σ w_i g_i and the embedded-rule estimate.
    pub fn weighted_sum(
        &self,
        mut g: impl FnMut(usize, f64) -> LogScaledValue,
    ) -> (LogScaledValue, f64) {
        let mut fine = LogSum::new();
        let mut gauss = LogSum::new();
        for (i, &tau) in self.taus.iter().enumerate() {
            let term = g(i, tau);
            if term.is_zero() {
                continue;
            }
            fine.add(term.mul_f64(self.w_fine[i]));
            if self.w_gauss[i] != 0.0 {
                gauss.add(term.mul_f64(self.w_gauss[i]));
            }
        }
        let v = fine.total();
        let e = (v.to_f64() - gauss.total_f64()).abs();
        (v, e)
    }

    /// Inversion of kernel-scaled transform samples taken on this grid:
    /// Σ w_i F̂_i K̂(τ_i, x) e^{dens2_i} (transform coordinates).
    pub fn inverse_from_samples(&self, samples: &[f64], x: f64) -> Result<f64> {
        if samples.len() != self.taus.len() {
            return Err(Error::domain("sample row length mismatch"));
        }
        let rx = self.row(KernelKind::Transform, x)?;
        let mut fine = LogSum::new();
        for i in 0..self.taus.len() {
            let term = rx[i].mul_f64(samples[i]).mul_exp(self.dens2[i]);
            fine.add(term.mul_f64(self.w_fine[i]));
        }
        Ok(fine.total_f64())
    }

    /// Parseval right-hand side from scaled samples:
    /// Σ w_i F̂_i² e^{dens2_i}.
    pub fn parseval_rhs_from_samples(&self, samples: &[f64]) -> Result<f64> {
        if samples.len() != self.taus.len() {
            return Err(Error::domain("sample row length mismatch"));
        }
        let mut fine = LogSum::new();
        for i in 0..self.taus.len() {
            let f = samples[i];
            fine.add(LogScaledValue::from_f64(f * f).mul_exp(self.dens2[i]).mul_f64(self.w_fine[i]));
        }
        Ok(fine.total_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn engine_matches_adaptive_logspace_integration() {
        // KL heat integrand: engine grid vs the generic adaptive path
        let fam = TransformFamily::KontorovichLebedev;
        let eng = SpectralEngine::new(fam, 0.5, 1e-11).unwrap();
        let (v, e) = eng.two_kernel_sum(1.0, 1.0, 1.0).unwrap();
        let spec = crate::quad::QuadSpec::with_rel_tol(1e-11).abs_tol(1e-300);
        let r = crate::quad::integrate_logspace(
            |tau| {
                if tau <= 0.0 {
                    return LogScaledValue::ZERO;
                }
                let k = fam.kernel_scaled(tau, 1.0).unwrap();
                let adj = fam.log_density_adjusted(tau, 2).unwrap();
                k.mul(k).mul_exp(adj - 1.0 * fam.eigenvalue(tau))
            },
            0.0,
            40.0,
            &spec,
        );
        assert!(r.converged);
        assert!(
            (v - r.value).abs() <= 1e-8 * r.value.abs(),
            "engine {v} (err {e}) vs adaptive {}",
            r.value
        );
    }

    #[test]
    fn row_cache_returns_identical_rows() {
        let eng = SpectralEngine::new(TransformFamily::KontorovichLebedev, 0.5, 1e-10).unwrap();
        let a = eng.row(KernelKind::Operator, 1.5).unwrap();
        let b = eng.row(KernelKind::Operator, 1.5).unwrap();
        assert!(Rc::ptr_eq(&a, &b));
    }

    #[test]
    fn rejects_t_below_resolution() {
        let eng = SpectralEngine::new(TransformFamily::KontorovichLebedev, 0.5, 1e-10).unwrap();
        assert!(eng.two_kernel_sum(0.01, 1.0, 1.0).is_err());
    }
}
