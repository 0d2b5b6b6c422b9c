//! Series with a monomial prefactor in a fractional power of `t`.
//!
//! Some closed forms pass through intermediates such as `e^xi ~ t^{-1}` and
//! its cube root `~ t^{-1/3}`. A [`PuiseuxSeries`] stores
//! `tau^shift * body(tau)` with `tau = t^{1/d}`; only the final combination
//! is expected to be an ordinary power series in `t`, and
//! [`PuiseuxSeries::into_power_series`] checks that every negative or
//! fractional power has cancelled.

use super::{Complex, TruncatedSeries};
use crate::error::{Error, Result};

/// Threshold for a residual pole or fractional-power coefficient, relative to
/// the largest lattice coefficient at or below it (floor 1).
pub const POLE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct PuiseuxSeries {
    ramification: u32,
    shift: i64,
    body: TruncatedSeries,
}

impl PuiseuxSeries {
    /// Re-expresses an ordinary series in `t` in the variable `tau = t^{1/d}`.
    pub fn from_series(s: &TruncatedSeries, ramification: u32) -> Self {
        assert!(ramification >= 1);
        let d = ramification as usize;
        let order = d * s.order() + d - 1;
        let mut coeffs = vec![Complex::default(); order + 1];
        for (n, c) in s.coeffs().iter().enumerate() {
            coeffs[d * n] = *c;
        }
        Self {
            ramification,
            shift: 0,
            body: TruncatedSeries::from_coeffs(coeffs),
        }
    }

    pub fn ramification(&self) -> u32 {
        self.ramification
    }

    /// Exponent of `tau` in the monomial prefactor.
    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn body(&self) -> &TruncatedSeries {
        &self.body
    }

    /// Highest power of `tau` that is known exactly.
    pub fn precision(&self) -> i64 {
        self.shift + self.body.order() as i64
    }

    /// Multiplies by `t^k`.
    pub fn mul_t_pow(&self, k: i64) -> Self {
        Self {
            shift: self.shift + k * self.ramification as i64,
            ..self.clone()
        }
    }

    pub fn scale(&self, c: Complex) -> Self {
        Self {
            body: self.body.scale(c),
            ..self.clone()
        }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex::new(c, 0.0))
    }

    /// Moves leading near-zero coefficients of the body into the prefactor.
    pub fn normalize(&self) -> Result<Self> {
        let v = self.body.valuation().ok_or(Error::ZeroConstantTerm)?;
        if v == 0 {
            return Ok(self.clone());
        }
        if v > self.body.order() {
            return Err(Error::ZeroConstantTerm);
        }
        Ok(Self {
            ramification: self.ramification,
            shift: self.shift + v as i64,
            body: self.body.shift_down(v),
        })
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(
            self.ramification, other.ramification,
            "mixed ramification indices"
        );
    }

    fn aligned_body(&self, shift: i64, order: usize) -> TruncatedSeries {
        let offset = (self.shift - shift) as usize;
        let mut coeffs = vec![Complex::default(); order + 1];
        for (i, c) in self.body.coeffs().iter().enumerate() {
            if i + offset <= order {
                coeffs[i + offset] = *c;
            }
        }
        TruncatedSeries::from_coeffs(coeffs)
    }

    fn combine(&self, other: &Self, sign: f64) -> Self {
        self.check_compatible(other);
        let shift = self.shift.min(other.shift);
        let precision = self.precision().min(other.precision());
        let order = (precision - shift).max(0) as usize;
        let a = self.aligned_body(shift, order);
        let b = other.aligned_body(shift, order).scale_real(sign);
        Self {
            ramification: self.ramification,
            shift,
            body: &a + &b,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, -1.0)
    }

    /// Product; leading zeros are moved into the prefactor first so that no
    /// precision is spent on them.
    pub fn mul(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let a = self.normalize().unwrap_or_else(|_| self.clone());
        let b = other.normalize().unwrap_or_else(|_| other.clone());
        Self {
            ramification: self.ramification,
            shift: a.shift + b.shift,
            body: &a.body * &b.body,
        }
    }

    pub fn recip(&self) -> Result<Self> {
        let n = self.normalize()?;
        Ok(Self {
            ramification: n.ramification,
            shift: -n.shift,
            body: n.body.recip()?,
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.recip()?))
    }

    /// `self^(p/q)`, principal branch on the leading coefficient. The
    /// prefactor exponent must stay integral.
    pub fn pow_rational(&self, p: i64, q: i64) -> Result<Self> {
        let n = self.normalize()?;
        if (n.shift * p) % q != 0 {
            return Err(Error::FractionalShift {
                shift: n.shift,
                p,
                q,
            });
        }
        Ok(Self {
            ramification: n.ramification,
            shift: n.shift * p / q,
            body: n.body.pow_rational(p, q)?,
        })
    }

    /// Converts back to a power series in `t` of the requested order.
    ///
    /// Fails with [`Error::UncancelledPole`] when a coefficient of a negative
    /// or non-integral power of `t` exceeds [`POLE_TOLERANCE`], or with
    /// [`Error::DomainMismatch`] when the known precision is too short.
    pub fn into_power_series(&self, order: usize) -> Result<TruncatedSeries> {
        let d = self.ramification as i64;
        let needed = d * order as i64;
        if self.precision() < needed {
            return Err(Error::DomainMismatch(format!(
                "precision tau^{} is below the requested t^{order}",
                self.precision()
            )));
        }
        let mut out = vec![Complex::default(); order + 1];
        let mut scale = 1.0f64;
        for (i, c) in self.body.coeffs().iter().enumerate() {
            let exponent = self.shift + i as i64;
            if exponent > needed {
                break;
            }
            let on_lattice = exponent >= 0 && exponent % d == 0;
            if on_lattice {
                out[(exponent / d) as usize] = *c;
                scale = scale.max(c.norm());
            } else if c.norm() > POLE_TOLERANCE * scale {
                return Err(Error::UncancelledPole {
                    exponent: exponent as f64 / d as f64,
                    magnitude: c.norm(),
                });
            }
        }
        Ok(TruncatedSeries::from_coeffs(out))
    }
}
