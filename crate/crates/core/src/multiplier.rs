//! Fourier multiplier operators `f -> sym(n) fhat(n)`.

use crate::field::SpectralField;
use crate::phi;
use num_complex::Complex64;
use std::fmt;
use std::sync::Arc;

/// A Fourier multiplier symbol: an evaluation rule on integer frequencies
/// plus a descriptive name. Symbols of real-preserving operators satisfy
/// `sym(-n) = conj(sym(n))`.
#[derive(Clone)]
pub struct MultiplierSymbol {
    name: String,
    eval: Arc<dyn Fn(i64) -> Complex64 + Send + Sync>,
}

impl fmt::Debug for MultiplierSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiplierSymbol({})", self.name)
    }
}

impl MultiplierSymbol {
    pub fn new(name: impl Into<String>, eval: impl Fn(i64) -> Complex64 + Send + Sync + 'static) -> Self {
        Self { name: name.into(), eval: Arc::new(eval) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, n: i64) -> Complex64 {
        (self.eval)(n)
    }

    /// Check `sym(-n) = conj(sym(n))` on `|n| <= band`.
    pub fn is_real_preserving(&self, band: i64) -> bool {
        (0..=band).all(|n| (self.eval(-n) - self.eval(n).conj()).norm() <= 1e-14)
    }

    /// The BBM dispersion `phi(n) = n/(1+n^2)` (real odd symbol).
    pub fn phi() -> Self {
        Self::new("phi", |n| Complex64::new(phi(n as f64), 0.0))
    }

    /// `<D>^s`, the Bessel-potential symbol `(1+n^2)^{s/2}`.
    pub fn bracket_power(s: f64) -> Self {
        Self::new(format!("bracket^{s}"), move |n| {
            Complex64::new((1.0 + (n * n) as f64).powf(s / 2.0), 0.0)
        })
    }

    /// Linear BBM propagator `S(t) = e^{-it phi(D)}`.
    pub fn propagator(t: f64) -> Self {
        Self::new(format!("S({t})"), move |n| {
            Complex64::from_polar(1.0, -t * phi(n as f64))
        })
    }

    /// Sharp frequency projection onto `|n| <= cut`.
    pub fn projection(cut: f64) -> Self {
        Self::new(format!("P_<={cut}"), move |n| {
            if (n.unsigned_abs() as f64) <= cut {
                Complex64::ONE
            } else {
                Complex64::ZERO
            }
        })
    }

    /// Differentiation `d/dx` (symbol `in`).
    pub fn derivative() -> Self {
        Self::new("d/dx", |n| Complex64::new(0.0, n as f64))
    }
}

/// Apply the multiplier coefficientwise: output band equals the input band.
pub fn apply_multiplier(f: &SpectralField, sym: &MultiplierSymbol) -> SpectralField {
    SpectralField::from_fn(f.m_grid(), |n| sym.eval(n) * f.coeff(n))
}
