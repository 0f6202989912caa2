//! Kahan compensated summation.
//!
//! Series here run to ~10^6 terms and quadrature panels accumulate in
//! arbitrary refinement order; plain `+=` loses 2–3 digits on those, which
//! is real money against 1e-12 contracts.

/// Compensated accumulator. `add` maintains a running correction term so
/// the accumulated rounding error stays O(eps) instead of O(n·eps).
#[derive(Debug, Clone, Copy, Default)]
pub struct Kahan {
    sum: f64,
    c: f64,
}

impl Kahan {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let y = x - self.c;
        let t = self.sum + y;
        // (t - sum) is what actually got added; y minus that is what got lost.
        self.c = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum
    }
}
