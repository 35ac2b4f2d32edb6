//! Minimal complex arithmetic for the kernel evaluators.
//!
//! Only what the Whittaker/Legendre/Gamma code paths need; keeping this
//! in-house avoids dragging a dependency in for a handful of operations.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cx {
    pub re: f64,
    pub im: f64,
}

impl Cx {
    pub const ZERO: Cx = Cx { re: 0.0, im: 0.0 };
    pub const ONE: Cx = Cx { re: 1.0, im: 0.0 };

    pub fn new(re: f64, im: f64) -> Self {
        Cx { re, im }
    }

    pub fn real(re: f64) -> Self {
        Cx { re, im: 0.0 }
    }

    pub fn add(self, o: Cx) -> Self {
        Cx::new(self.re + o.re, self.im + o.im)
    }

    pub fn sub(self, o: Cx) -> Self {
        Cx::new(self.re - o.re, self.im - o.im)
    }

    pub fn mul(self, o: Cx) -> Self {
        Cx::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }

    pub fn scale(self, s: f64) -> Self {
        Cx::new(self.re * s, self.im * s)
    }

    pub fn div(self, o: Cx) -> Self {
        let d = o.re * o.re + o.im * o.im;
        Cx::new(
            (self.re * o.re + self.im * o.im) / d,
            (self.im * o.re - self.re * o.im) / d,
        )
    }

    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn arg(self) -> f64 {
        self.im.atan2(self.re)
    }

    pub fn exp(self) -> Self {
        let r = self.re.exp();
        Cx::new(r * self.im.cos(), r * self.im.sin())
    }

    /// Principal branch logarithm.
    pub fn ln(self) -> Self {
        Cx::new(self.abs().ln(), self.arg())
    }

    /// z^w = exp(w ln z), principal branch.
    pub fn powc(self, w: Cx) -> Self {
        if self.re == 0.0 && self.im == 0.0 {
            return Cx::ZERO;
        }
        w.mul(self.ln()).exp()
    }
}
