//! Sign/log-magnitude representation of real numbers.
//!
//! The spectral integrands handled by this crate multiply factors like
//! `sinh(πτ)`, `|Γ(1/2 - α + iτ)|²` and `K_{iτ}(x)²` which individually
//! overflow or underflow `f64` long before their product does. All kernel
//! evaluators therefore return a [`LogScaledValue`], `sign · exp(log_mag)`,
//! and products are assembled by adding log-magnitudes.

/// A real number stored as `sign * exp(log_mag)`.
///
/// `sign` is -1, 0 or +1; `log_mag` is meaningless when `sign == 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogScaledValue {
    pub sign: i8,
    pub log_mag: f64,
}

impl LogScaledValue {
    pub const ZERO: LogScaledValue = LogScaledValue {
        sign: 0,
        log_mag: f64::NEG_INFINITY,
    };

    pub const ONE: LogScaledValue = LogScaledValue {
        sign: 1,
        log_mag: 0.0,
    };

    pub fn new(sign: i8, log_mag: f64) -> Self {
        debug_assert!(sign == -1 || sign == 0 || sign == 1);
        if sign == 0 {
            Self::ZERO
        } else {
            Self { sign, log_mag }
        }
    }

    /// Exact conversion from a plain `f64` (0, NaN and ±inf map to ZERO,
    /// NaN should not occur in well-posed callers).
    pub fn from_f64(v: f64) -> Self {
        if v == 0.0 || !v.is_finite() {
            if v.is_finite() {
                Self::ZERO
            } else if v.is_nan() {
                Self::ZERO
            } else {
                Self {
                    sign: if v > 0.0 { 1 } else { -1 },
                    log_mag: f64::INFINITY,
                }
            }
        } else {
            Self {
                sign: if v > 0.0 { 1 } else { -1 },
                log_mag: v.abs().ln(),
            }
        }
    }

    /// Back to a plain `f64`; overflows to ±inf, underflows to 0.
    pub fn to_f64(self) -> f64 {
        self.sign as f64 * self.log_mag.exp()
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn abs(self) -> Self {
        Self {
            sign: self.sign.abs(),
            log_mag: self.log_mag,
        }
    }

    pub fn neg(self) -> Self {
        Self {
            sign: -self.sign,
            log_mag: self.log_mag,
        }
    }

    pub fn mul(self, other: Self) -> Self {
        if self.sign == 0 || other.sign == 0 {
            return Self::ZERO;
        }
        Self {
            sign: self.sign * other.sign,
            log_mag: self.log_mag + other.log_mag,
        }
    }

    /// Multiply by `exp(shift)` without leaving log space.
    pub fn mul_exp(self, shift: f64) -> Self {
        if self.sign == 0 {
            return Self::ZERO;
        }
        Self {
            sign: self.sign,
            log_mag: self.log_mag + shift,
        }
    }

    pub fn mul_f64(self, v: f64) -> Self {
        self.mul(Self::from_f64(v))
    }
}

/// Accumulates a sum of [`LogScaledValue`] terms without leaving log scale.
///
/// Keeps a running sum relative to the largest magnitude seen so far, so the
/// final result is accurate even when the terms span hundreds of orders of
/// magnitude. Summation order is exactly the insertion order (deterministic).
#[derive(Debug, Clone)]
pub struct LogSum {
    /// Reference exponent; the running sum is `acc * exp(shift)`.
    shift: f64,
    acc: f64,
}

impl LogSum {
    pub fn new() -> Self {
        LogSum {
            shift: f64::NEG_INFINITY,
            acc: 0.0,
        }
    }

    pub fn add(&mut self, term: LogScaledValue) {
        if term.sign == 0 || term.log_mag == f64::NEG_INFINITY {
            return;
        }
        if self.shift == f64::NEG_INFINITY {
            self.shift = term.log_mag;
            self.acc = term.sign as f64;
            return;
        }
        if term.log_mag > self.shift {
            // rescale the accumulator to the new, larger reference
            self.acc *= (self.shift - term.log_mag).exp();
            self.shift = term.log_mag;
            self.acc += term.sign as f64;
        } else {
            self.acc += term.sign as f64 * (term.log_mag - self.shift).exp();
        }
    }

    pub fn add_scaled(&mut self, term: LogScaledValue, weight: f64) {
        self.add(term.mul_f64(weight));
    }

    pub fn total(&self) -> LogScaledValue {
        if self.shift == f64::NEG_INFINITY || self.acc == 0.0 {
            LogScaledValue::ZERO
        } else {
            LogScaledValue {
                sign: if self.acc > 0.0 { 1 } else { -1 },
                log_mag: self.shift + self.acc.abs().ln(),
            }
        }
    }

    pub fn total_f64(&self) -> f64 {
        self.total().to_f64()
    }
}

impl Default for LogSum {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_within_floating_range() {
        // moderate magnitudes round-trip to 1e-14 relative error; extreme
        // exponents lose a little more to the rounding of ln itself
        for &v in &[1.0, -2.5, 8.13e-24, 3.7e20, -1.4e-12, 0.417] {
            let l = LogScaledValue::from_f64(v);
            let back = l.to_f64();
            assert!(
                (back - v).abs() <= 1e-14 * v.abs(),
                "roundtrip {v} -> {back}"
            );
        }
        for &v in &[1e-300, 3.7e250] {
            let back = LogScaledValue::from_f64(v).to_f64();
            assert!((back - v).abs() <= 1e-12 * v.abs());
        }
        assert_eq!(LogScaledValue::from_f64(0.0).sign, 0);
    }

    #[test]
    fn product_adds_logs_and_multiplies_signs() {
        let a = LogScaledValue::new(1, 500.0);
        let b = LogScaledValue::new(-1, -300.0);
        let p = a.mul(b);
        assert_eq!(p.sign, -1);
        assert!((p.log_mag - 200.0).abs() < 1e-12);
        assert!(a.mul(LogScaledValue::ZERO).is_zero());
    }

    #[test]
    fn logsum_handles_huge_dynamic_range() {
        let mut s = LogSum::new();
        s.add(LogScaledValue::new(1, 700.0));
        s.add(LogScaledValue::new(1, -700.0)); // negligible but must not panic
        s.add(LogScaledValue::new(-1, 699.0));
        let t = s.total();
        // exp(700) - exp(699) = exp(699)(e - 1)
        let expected = 699.0 + (std::f64::consts::E - 1.0f64).ln();
        assert_eq!(t.sign, 1);
        assert!((t.log_mag - expected).abs() < 1e-12);
    }

    #[test]
    fn logsum_cancellation_to_zero() {
        let mut s = LogSum::new();
        s.add(LogScaledValue::new(1, 10.0));
        s.add(LogScaledValue::new(-1, 10.0));
        assert!(s.total().is_zero());
    }
}
