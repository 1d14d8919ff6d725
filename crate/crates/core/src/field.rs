//! Truncated Fourier representation of periodic fields.

use crate::error::Error;
use crate::fft;
use crate::Result;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A field on the torus represented by its Fourier coefficients on the
/// contiguous band `|n| <= m_grid`:
///
/// ```text
/// f(x) = sum_{|n| <= M} fhat(n) e^{inx}.
/// ```
///
/// Real fields satisfy the conjugate symmetry `fhat(-n) = conj(fhat(n))`;
/// constructors for sampled data enforce it. Intermediate operator outputs
/// (for example `phi(D)` applied to a real field) are legitimately
/// non-symmetric, so the symmetry is checked where required rather than
/// baked into the storage.
///
/// Values are immutable once built; all operations return new fields.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    m_grid: usize,
    /// Length `2*m_grid + 1`, coefficient of frequency `n` at index `m_grid + n`.
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(m_grid: usize) -> Self {
        Self { m_grid, coeffs: vec![Complex64::ZERO; 2 * m_grid + 1] }
    }

    /// Build from an evaluation rule for every stored frequency.
    pub fn from_fn(m_grid: usize, mut f: impl FnMut(i64) -> Complex64) -> Self {
        let m = m_grid as i64;
        let coeffs = (-m..=m).map(&mut f).collect();
        Self { m_grid, coeffs }
    }

    /// Build a real field from coefficients given for `n >= 0`; negative
    /// frequencies are filled in by conjugation and the imaginary part of
    /// the zero mode is dropped.
    pub fn from_nonnegative_modes(m_grid: usize, modes: &[(u64, Complex64)]) -> Self {
        let mut field = Self::zeros(m_grid);
        for &(n, v) in modes {
            if n as usize <= m_grid {
                let v0 = if n == 0 { Complex64::new(v.re, 0.0) } else { v };
                field.coeffs[m_grid + n as usize] = v0;
                if n > 0 {
                    field.coeffs[m_grid - n as usize] = v0.conj();
                }
            }
        }
        field
    }

    pub fn m_grid(&self) -> usize {
        self.m_grid
    }

    /// Coefficient at frequency `n`; zero outside the band.
    pub fn coeff(&self, n: i64) -> Complex64 {
        let m = self.m_grid as i64;
        if n < -m || n > m {
            Complex64::ZERO
        } else {
            self.coeffs[(n + m) as usize]
        }
    }

    pub fn set_coeff(&mut self, n: i64, v: Complex64) {
        let m = self.m_grid as i64;
        assert!((-m..=m).contains(&n), "frequency {n} outside band |n| <= {m}");
        self.coeffs[(n + m) as usize] = v;
    }

    /// Iterate `(n, fhat(n))` over the stored band in increasing `n`.
    pub fn modes(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let m = self.m_grid as i64;
        self.coeffs.iter().enumerate().map(move |(i, c)| (i as i64 - m, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm_sqr() == 0.0)
    }

    /// Max deviation from `fhat(-n) = conj(fhat(n))` (0 for real fields).
    pub fn conjugate_symmetry_defect(&self) -> f64 {
        let m = self.m_grid as i64;
        (0..=m)
            .map(|n| (self.coeff(-n) - self.coeff(n).conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Projection onto the band `|n| <= m`; embeds with zeros when `m` is larger.
    pub fn truncated(&self, m: usize) -> Self {
        Self::from_fn(m, |n| self.coeff(n))
    }

    /// Reflection `x -> -x`, i.e. `fhat(n) -> fhat(-n)`.
    pub fn reflected(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self { m_grid: self.m_grid, coeffs }
    }

    pub fn scaled(&self, a: Complex64) -> Self {
        Self { m_grid: self.m_grid, coeffs: self.coeffs.iter().map(|c| c * a).collect() }
    }

    /// Pointwise-in-frequency sum; the result lives on the larger band.
    pub fn add(&self, other: &Self) -> Self {
        let m = self.m_grid.max(other.m_grid);
        Self::from_fn(m, |n| self.coeff(n) + other.coeff(n))
    }

    pub fn sub(&self, other: &Self) -> Self {
        let m = self.m_grid.max(other.m_grid);
        Self::from_fn(m, |n| self.coeff(n) - other.coeff(n))
    }

    /// Accumulate `self += a * other` on the existing band (frequencies of
    /// `other` outside the band must be zero; used by integrators whose
    /// states share one band).
    pub fn axpy_in_place(&mut self, a: Complex64, other: &Self) {
        debug_assert!(other.m_grid == self.m_grid);
        for (dst, src) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *dst += a * src;
        }
    }

    pub fn has_non_finite(&self) -> bool {
        self.coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite())
    }

    /// Exact product of the two truncated series. The output band is
    /// `m1 + m2`, computed aliasing-free by zero-padded FFT.
    pub fn product_dealiased(&self, other: &Self) -> Self {
        let m_out = self.m_grid + other.m_grid;
        let g = (2 * m_out + 2).next_power_of_two();
        let mut a = embed(self, g);
        let mut b = embed(other, g);
        fft::inverse(&mut a);
        fft::inverse(&mut b);
        for (x, y) in a.iter_mut().zip(&b) {
            *x *= y;
        }
        fft::forward(&mut a);
        let scale = 1.0 / g as f64;
        let mut out = Self::zeros(m_out);
        let m = m_out as i64;
        for n in -m..=m {
            let bin = n.rem_euclid(g as i64) as usize;
            out.coeffs[(n + m) as usize] = a[bin] * scale;
        }
        out
    }

    /// Direct `O(M^2)` convolution; the oracle for `product_dealiased`.
    pub fn product_direct(&self, other: &Self) -> Self {
        let m_out = (self.m_grid + other.m_grid) as i64;
        let m1 = self.m_grid as i64;
        SpectralField::from_fn(m_out as usize, |n| {
            let lo = (-m1).max(n - other.m_grid as i64);
            let hi = m1.min(n + other.m_grid as i64);
            let mut acc = Complex64::ZERO;
            let mut k = lo;
            while k <= hi {
                acc += self.coeff(k) * other.coeff(n - k);
                k += 1;
            }
            acc
        })
    }

    /// Physical-space samples `f(x_j)`, `x_j = 2 pi j / grid_points`.
    pub fn grid_values(&self, grid_points: usize) -> Result<Vec<Complex64>> {
        let floor = 2 * self.m_grid + 1;
        if grid_points < floor {
            return Err(Error::GridTooCoarse { requested: grid_points, floor });
        }
        let mut buf = embed(self, grid_points);
        fft::inverse(&mut buf);
        Ok(buf)
    }

    /// Serialize to the interchange record `{m_grid, pairs: [n, re, im] for n >= 0}`.
    /// Only conjugate-symmetric (real) fields round-trip through this schema.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(json: &str) -> Result<Self> {
        Ok(serde_json::from_str(json)?)
    }
}

/// On-disk schema for real fields.
#[derive(Serialize, Deserialize)]
struct FieldRecord {
    m_grid: usize,
    pairs: Vec<(u64, f64, f64)>,
}

impl Serialize for SpectralField {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let scale = 1.0 + self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if self.conjugate_symmetry_defect() > 1e-9 * scale {
            return Err(serde::ser::Error::custom(
                "field is not conjugate-symmetric; the n >= 0 schema cannot represent it",
            ));
        }
        let pairs: Vec<(u64, f64, f64)> = (0..=self.m_grid as i64)
            .map(|n| (n as u64, self.coeff(n).re, self.coeff(n).im))
            .collect();
        FieldRecord { m_grid: self.m_grid, pairs }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SpectralField {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rec = FieldRecord::deserialize(deserializer)?;
        let modes: Vec<(u64, Complex64)> =
            rec.pairs.iter().map(|&(n, re, im)| (n, Complex64::new(re, im))).collect();
        Ok(Self::from_nonnegative_modes(rec.m_grid, &modes))
    }
}

fn embed(f: &SpectralField, g: usize) -> Vec<Complex64> {
    debug_assert!(g >= 2 * f.m_grid + 1);
    let mut buf = vec![Complex64::ZERO; g];
    let m = f.m_grid as i64;
    for n in -m..=m {
        buf[n.rem_euclid(g as i64) as usize] = f.coeff(n);
    }
    buf
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_field(m: usize, seed: u64) -> SpectralField {
        // cheap deterministic pseudo-random field, real-valued
        let mut state = seed.wrapping_mul(0x9E3779B97F4A7C15).wrapping_add(1);
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let modes: Vec<(u64, Complex64)> =
            (0..=m as u64).map(|n| (n, Complex64::new(next(), next()))).collect();
        SpectralField::from_nonnegative_modes(m, &modes)
    }

    #[test]
    fn grid_round_trip_reproduces_coefficients() {
        let f = random_field(16, 3);
        let g = 64;
        let vals = f.grid_values(g).unwrap();
        let mut buf = vals;
        fft::forward(&mut buf);
        for (n, c) in f.modes() {
            let bin = n.rem_euclid(g as i64) as usize;
            let back = buf[bin] / g as f64;
            assert!((back - c).norm() <= 1e-12 * (1.0 + c.norm()), "mode {n}");
        }
    }

    #[test]
    fn real_field_has_real_grid_values() {
        let f = random_field(12, 9);
        assert!(f.conjugate_symmetry_defect() == 0.0);
        let vals = f.grid_values(32).unwrap();
        let scale = vals.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1.0);
        for v in vals {
            assert!(v.im.abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn dealiased_product_matches_direct_convolution() {
        for seed in 0..25 {
            let a = random_field(13, 2 * seed);
            let b = random_field(9, 2 * seed + 1);
            let fast = a.product_dealiased(&b);
            let slow = a.product_direct(&b);
            assert_eq!(fast.m_grid(), 22);
            let scale = slow.modes().map(|(_, c)| c.norm()).fold(0.0, f64::max).max(1.0);
            for (n, c) in fast.modes() {
                assert!((c - slow.coeff(n)).norm() <= 1e-12 * scale, "n={n}");
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let f = random_field(8, 77);
        let s = f.to_json().unwrap();
        let g = SpectralField::from_json(&s).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn json_rejects_non_symmetric() {
        let mut f = random_field(4, 1);
        f.set_coeff(-2, Complex64::new(5.0, 5.0));
        assert!(f.to_json().is_err());
    }

    #[test]
    fn grid_floor_enforced() {
        let f = random_field(8, 5);
        assert!(matches!(f.grid_values(16), Err(Error::GridTooCoarse { .. })));
        assert!(f.grid_values(17).is_ok());
    }

    proptest! {
        #[test]
        fn product_round_trip_against_direct(seed in 0u64..500, ma in 1usize..12, mb in 1usize..12) {
            let a = random_field(ma, seed);
            let b = random_field(mb, seed ^ 0xabcdef);
            let fast = a.product_dealiased(&b);
            let slow = a.product_direct(&b);
            let scale = slow.modes().map(|(_, c)| c.norm()).fold(0.0, f64::max).max(1.0);
            for (n, c) in fast.modes() {
                prop_assert!((c - slow.coeff(n)).norm() <= 1e-12 * scale);
            }
        }
    }
}
