use crate::error::{Error, Result};

/// Bisection stopping rule.
#[derive(Debug, Clone, Copy)]
pub struct Bisection {
    pub f_tol: f64,
    pub max_iter: usize,
}

impl Bisection {
    pub const fn new(f_tol: f64, max_iter: usize) -> Self {
        Self { f_tol, max_iter }
    }

    /// Finds a root of `f` on `[lo, hi]`; `f(lo)` and `f(hi)` must differ in sign.
    ///
    /// Stops when `|f(mid)| < f_tol`, when the bracket collapses to adjacent floats,
    /// or after `max_iter` halvings. Returns the best midpoint in every case.
    pub fn solve<F>(&self, mut lo: f64, mut hi: f64, mut f: F) -> Result<f64>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let mut f_lo = f(lo)?;
        let f_hi = f(hi)?;
        if f_lo == 0.0 {
            return Ok(lo);
        }
        if f_hi == 0.0 {
            return Ok(hi);
        }
        if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
            return Err(Error::NoBracket { lo, hi });
        }
        let mut mid = 0.5 * (lo + hi);
        for _ in 0..self.max_iter {
            mid = 0.5 * (lo + hi);
            let f_mid = f(mid)?;
            if f_mid.abs() < self.f_tol || mid <= lo || mid >= hi {
                return Ok(mid);
            }
            if f_mid.signum() == f_lo.signum() {
                lo = mid;
                f_lo = f_mid;
            } else {
                hi = mid;
            }
        }
        Ok(mid)
    }
}
