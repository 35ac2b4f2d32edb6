//! Sturm-Liouville operators `L u = (1/r)[-(p u')' + q u]` on an open
//! interval, as coefficient closures. The three transform families come
//! preconfigured; the Feller classifier also accepts arbitrary coefficients.

use std::rc::Rc;

use crate::error::{Error, Result};
use crate::transforms::TransformFamily;

pub type Coeff = Rc<dyn Fn(f64) -> f64>;

/// Coefficient triple (p, q, r) with its interval (a, b).
#[derive(Clone)]
pub struct SLOperator {
    pub p: Coeff,
    pub q: Coeff,
    pub r: Coeff,
    pub a: f64,
    pub b: f64,
    pub family_tag: Option<TransformFamily>,
}

impl std::fmt::Debug for SLOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SLOperator")
            .field("a", &self.a)
            .field("b", &self.b)
            .field("family_tag", &self.family_tag)
            .finish()
    }
}

impl SLOperator {
    pub fn new(p: Coeff, q: Coeff, r: Coeff, a: f64, b: f64) -> Self {
        SLOperator {
            p,
            q,
            r,
            a,
            b,
            family_tag: None,
        }
    }

    /// The operator whose spectral expansion is the Kontorovich-Lebedev
    /// transform: p = q = x, r = 1/x on (0, ∞).
    pub fn kl() -> Self {
        SLOperator {
            p: Rc::new(|x| x),
            q: Rc::new(|x| x),
            r: Rc::new(|x| 1.0 / x),
            a: 0.0,
            b: f64::INFINITY,
            family_tag: Some(TransformFamily::KontorovichLebedev),
        }
    }

    /// Index Whittaker operator: p = x, q = (x-α)²/x, r = 1/x on (0, ∞).
    pub fn iw(alpha: f64) -> Self {
        SLOperator {
            p: Rc::new(|x| x),
            q: Rc::new(move |x| (x - alpha) * (x - alpha) / x),
            r: Rc::new(|x| 1.0 / x),
            a: 0.0,
            b: f64::INFINITY,
            family_tag: Some(TransformFamily::IndexWhittaker { alpha }),
        }
    }

    /// Mehler-Fock operator: p = x²-1, q = μ²/(x²-1), r = 1 on (1, ∞).
    pub fn mf(mu: f64) -> Self {
        SLOperator {
            p: Rc::new(|x| x * x - 1.0),
            q: Rc::new(move |x| mu * mu / (x * x - 1.0)),
            r: Rc::new(|_| 1.0),
            a: 1.0,
            b: f64::INFINITY,
            family_tag: Some(TransformFamily::MehlerFock { mu }),
        }
    }

    pub fn from_family(family: TransformFamily) -> Self {
        match family {
            TransformFamily::KontorovichLebedev => Self::kl(),
            TransformFamily::IndexWhittaker { alpha } => Self::iw(alpha),
            TransformFamily::MehlerFock { mu } => Self::mf(mu),
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.a && x < self.b
    }

    /// Validates the standing positivity assumptions at a few probe points.
    pub fn validate(&self) -> Result<()> {
        if !(self.a < self.b) {
            return Err(Error::domain("operator interval is empty"));
        }
        let probes = self.probe_points();
        for x in probes {
            if !((self.p)(x) > 0.0) || !((self.r)(x) > 0.0) || (self.q)(x) < 0.0 {
                return Err(Error::domain(format!(
                    "coefficient sign assumption violated at x = {x}: need p, r > 0 and q >= 0"
                )));
            }
        }
        Ok(())
    }

    fn probe_points(&self) -> Vec<f64> {
        let lo = if self.a.is_finite() { self.a } else { -1e3 };
        let hi = if self.b.is_finite() { self.b } else { lo.max(0.0) + 1e3 };
        let w = hi - lo;
        (1..=7).map(|i| lo + w * i as f64 / 8.0).collect()
    }

    /// Applies L to a function given as a closure, with central differences:
    /// `L u = (1/r)(-p u'' - p' u' + q u)`.
    pub fn apply(
        &self,
        u: &mut dyn FnMut(f64) -> Result<f64>,
        x: f64,
        h: f64,
    ) -> Result<f64> {
        if !self.contains(x) {
            return Err(Error::domain(format!("x = {x} outside operator interval")));
        }
        let up = u(x + h)?;
        let u0 = u(x)?;
        let um = u(x - h)?;
        let du = (up - um) / (2.0 * h);
        let ddu = (up - 2.0 * u0 + um) / (h * h);
        let hp = 1e-6 * (1.0 + x.abs());
        let dp = ((self.p)(x + hp) - (self.p)(x - hp)) / (2.0 * hp);
        Ok((-(self.p)(x) * ddu - dp * du + (self.q)(x) * u0) / (self.r)(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kl_operator_matches_its_expanded_form() {
        // L u = -x²u'' - xu' + x²u for p = q = x, r = 1/x
        let op = SLOperator::kl();
        let mut u = |x: f64| Ok(x.sin());
        let x = 1.3;
        let got = op.apply(&mut u, x, 1e-4).unwrap();
        let exact = x * x * x.sin() + x * x * x.sin() - x * x.cos();
        assert!((got - exact).abs() < 1e-5, "{got} vs {exact}");
    }

    #[test]
    fn mf_operator_expanded_form() {
        // L u = -(x²-1)u'' - 2xu' + μ²/(x²-1) u
        let op = SLOperator::mf(0.5);
        let mut u = |x: f64| Ok(x * x);
        let x = 2.0;
        let got = op.apply(&mut u, x, 1e-4).unwrap();
        let exact = -(x * x - 1.0) * 2.0 - 2.0 * x * 2.0 * x + 0.25 / (x * x - 1.0) * x * x;
        assert!((got - exact).abs() < 1e-5);
    }

    #[test]
    fn validation_rejects_negative_q() {
        let op = SLOperator::new(
            Rc::new(|_| 1.0),
            Rc::new(|_| -1.0),
            Rc::new(|_| 1.0),
            0.0,
            1.0,
        );
        assert!(op.validate().is_err());
    }
}
