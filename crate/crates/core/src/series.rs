//! Truncated power series in a formal variable `t` with complex coefficients.
//!
//! A [`TruncatedSeries`] of order `N` stores the coefficients of `t^0 ..= t^N`.
//! Binary operations truncate to the smaller of the two operand orders, so an
//! expression built from many pieces is only as precise as its least precise
//! input. Division by a series that vanishes at `t = 0` cancels the common
//! power of `t` first and loses that many orders.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub(crate) mod extended;
pub mod puiseux;

pub use puiseux::PuiseuxSeries;

/// Complex scalar used for every series coefficient.
pub type Complex = Complex64;

/// Relative threshold below which a coefficient counts as zero when
/// computing valuations.
pub const ZERO_THRESHOLD: f64 = 1e-12;

/// Working order used by the identity checks; reports stop a few orders short
/// of it.
pub const DEFAULT_WORKING_ORDER: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex>,
}

impl TruncatedSeries {
    /// The constant `c`, padded with zeros to `order`.
    pub fn from_constant(c: Complex, order: usize) -> Self {
        let mut coeffs = vec![Complex::new(0.0, 0.0); order + 1];
        coeffs[0] = c;
        Self { coeffs }
    }

    pub fn from_real(c: f64, order: usize) -> Self {
        Self::from_constant(Complex::new(c, 0.0), order)
    }

    pub fn zero(order: usize) -> Self {
        Self::from_real(0.0, order)
    }

    pub fn one(order: usize) -> Self {
        Self::from_real(1.0, order)
    }

    /// The formal variable `t`.
    pub fn variable(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = Complex::new(1.0, 0.0);
        }
        s
    }

    /// Wraps an explicit coefficient list; the order is `len - 1`.
    ///
    /// An empty list is read as the order-0 zero series.
    pub fn from_coeffs(coeffs: Vec<Complex>) -> Self {
        if coeffs.is_empty() {
            return Self::zero(0);
        }
        Self { coeffs }
    }

    pub fn from_real_coeffs(coeffs: &[f64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| Complex::new(c, 0.0)).collect())
    }

    /// A polynomial in `t`, truncated or zero-padded to `order`.
    pub fn polynomial(coeffs: &[Complex], order: usize) -> Self {
        let mut s = Self::zero(order);
        for (dst, src) in s.coeffs.iter_mut().zip(coeffs) {
            *dst = *src;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex> {
        self.coeffs
    }

    /// Coefficient of `t^n`; zero beyond the stored order.
    pub fn coeff(&self, n: usize) -> Complex {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    pub fn constant_term(&self) -> Complex {
        self.coeffs[0]
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::polynomial(&self.coeffs, order.min(self.order()))
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// True when coefficient `k` is below the zero-detection threshold.
    ///
    /// The scale is the largest magnitude among coefficients `0..=k+1` (floor
    /// 1), so series whose coefficients grow geometrically do not drown their
    /// leading terms.
    fn negligible(&self, k: usize) -> bool {
        let end = (k + 1).min(self.order());
        let scale = self.coeffs[..=end].iter().map(|c| c.norm()).fold(1.0, f64::max);
        self.coeffs[k].norm() < ZERO_THRESHOLD * scale
    }

    /// Index of the first coefficient above the zero-detection threshold, or
    /// `None` for the zero series.
    pub fn valuation(&self) -> Option<usize> {
        (0..=self.order()).find(|&k| !self.negligible(k))
    }

    /// True when the constant term is below the zero-detection threshold.
    pub fn vanishes_at_origin(&self) -> bool {
        self.negligible(0)
    }

    pub fn scale(&self, c: Complex) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex::new(c, 0.0))
    }

    /// Adds a constant to the `t^0` coefficient.
    pub fn add_constant(&self, c: Complex) -> Self {
        let mut s = self.clone();
        s.coeffs[0] += c;
        s
    }

    /// Divides by `t^k`, dropping the first `k` coefficients; the order falls
    /// by `k`.
    pub fn shift_down(&self, k: usize) -> Self {
        assert!(k <= self.order(), "cannot shift past the stored order");
        Self {
            coeffs: self.coeffs[k..].to_vec(),
        }
    }

    /// Multiplies by `t^k`, keeping the order.
    pub fn mul_t_pow(&self, k: usize) -> Self {
        let mut s = Self::zero(self.order());
        for (i, c) in self.coeffs.iter().enumerate() {
            if i + k <= self.order() {
                s.coeffs[i + k] = *c;
            }
        }
        s
    }

    /// Multiplies by `t^k` and raises the order by `k`.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut coeffs = vec![Complex::default(); k];
        coeffs.extend_from_slice(&self.coeffs);
        Self { coeffs }
    }

    /// Partial sum at a concrete `t`.
    pub fn eval(&self, t: Complex) -> Complex {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::default(), |acc, c| acc * t + c)
    }

    /// `self / b`, cancelling a common factor `t^v` first.
    ///
    /// The result has order `min(order) - v` where `v` is the valuation of `b`.
    pub fn div(&self, b: &Self) -> Result<Self> {
        let vb = b.valuation().ok_or(Error::DivisionByZeroSeries {
            dividend: self.valuation().unwrap_or(usize::MAX),
            divisor: usize::MAX,
        })?;
        let va = self.valuation().unwrap_or(usize::MAX);
        if vb > va {
            return Err(Error::DivisionByZeroSeries {
                dividend: va,
                divisor: vb,
            });
        }
        let order = self.order().min(b.order());
        if vb > order {
            return Err(Error::DivisionByZeroSeries {
                dividend: va,
                divisor: vb,
            });
        }
        let num = self.truncate(order).shift_down(vb);
        let den = b.truncate(order).shift_down(vb);
        Ok(num.div_unit(&den))
    }

    /// Division by a series whose constant term is nonzero.
    fn div_unit(&self, b: &Self) -> Self {
        let order = self.order().min(b.order());
        let inv_b0 = b.coeffs[0].inv();
        let mut q = vec![Complex::default(); order + 1];
        for n in 0..=order {
            let mut acc = self.coeffs[n];
            for k in 1..=n {
                acc -= b.coeffs[k] * q[n - k];
            }
            q[n] = acc * inv_b0;
        }
        Self { coeffs: q }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.vanishes_at_origin() {
            return Err(Error::ZeroConstantTerm);
        }
        Ok(Self::one(self.order()).div_unit(self))
    }

    /// `self^(p/q)` on the principal branch of the constant term.
    pub fn pow_rational(&self, p: i64, q: i64) -> Result<Self> {
        assert!(q > 0, "denominator of a rational power must be positive");
        self.pow(Complex::new(p as f64 / q as f64, 0.0))
    }

    pub fn pow_real(&self, alpha: f64) -> Result<Self> {
        self.pow(Complex::new(alpha, 0.0))
    }

    /// `self^alpha` for a series with nonzero constant term.
    ///
    /// Uses the recurrence obtained from `a * b' = alpha * a' * b`, with
    /// `b_0 = exp(alpha * Log a_0)`.
    pub fn pow(&self, alpha: Complex) -> Result<Self> {
        if self.vanishes_at_origin() {
            return Err(Error::ZeroConstantTerm);
        }
        let a = &self.coeffs;
        let order = self.order();
        let mut b = vec![Complex::default(); order + 1];
        b[0] = principal_pow(a[0], alpha);
        let inv_a0 = a[0].inv();
        for n in 1..=order {
            let mut acc = Complex::default();
            for k in 1..=n {
                let weight = alpha * k as f64 - (n - k) as f64;
                acc += weight * a[k] * b[n - k];
            }
            b[n] = acc * inv_a0 / n as f64;
        }
        Ok(Self { coeffs: b })
    }

    /// Square root of a series whose valuation is even; the result has order
    /// `N - v/2`.
    pub fn sqrt_shifted(&self) -> Result<Self> {
        let v = self.valuation().ok_or(Error::ZeroConstantTerm)?;
        if v % 2 == 1 {
            return Err(Error::OddValuation(v));
        }
        let root = self.shift_down(v).pow_rational(1, 2)?;
        Ok(root.shift_up(v / 2))
    }

    /// Evaluates the power series with Maclaurin coefficients `outer` at
    /// `inner`, which must vanish at `t = 0`.
    pub fn compose_vanishing(outer: &[Complex], inner: &Self) -> Result<Self> {
        if !inner.vanishes_at_origin() {
            return Err(Error::NonvanishingInner(inner.coeffs[0].norm()));
        }
        let order = inner.order();
        let mut inner = inner.clone();
        inner.coeffs[0] = Complex::default();
        let used = outer.len().min(order + 1);
        let mut acc = Self::zero(order);
        for c in outer[..used].iter().rev() {
            acc = &acc * &inner;
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    /// Largest mixed deviation `|a-b| / max(1,|a|,|b|)` over the first
    /// `order + 1` coefficients.
    pub fn max_mixed_deviation(&self, other: &Self, order: usize) -> f64 {
        (0..=order)
            .map(|n| mixed_deviation(self.coeff(n), other.coeff(n)))
            .fold(0.0, f64::max)
    }

    /// Largest imaginary part over the first `order + 1` coefficients,
    /// relative to `max(1, |c|)`.
    pub fn max_imag_residue(&self, order: usize) -> f64 {
        (0..=order)
            .map(|n| {
                let c = self.coeff(n);
                c.im.abs() / c.norm().max(1.0)
            })
            .fold(0.0, f64::max)
    }
}

/// `|a - b| / max(1, |a|, |b|)`.
pub fn mixed_deviation(a: Complex, b: Complex) -> f64 {
    (a - b).norm() / 1.0f64.max(a.norm()).max(b.norm())
}

/// `z^alpha` with the argument of `z` taken in `(-pi, pi]`.
pub fn principal_pow(z: Complex, alpha: Complex) -> Complex {
    if alpha.im == 0.0 && alpha.re == alpha.re.round() && alpha.re.abs() < 64.0 {
        return z.powi(alpha.re as i32);
    }
    if z.im == 0.0 && z.re > 0.0 && alpha.im == 0.0 {
        return Complex::new(z.re.powf(alpha.re), 0.0);
    }
    (alpha * z.ln()).exp()
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: Self) -> TruncatedSeries {
        let order = self.order().min(rhs.order());
        TruncatedSeries {
            coeffs: (0..=order).map(|n| self.coeffs[n] + rhs.coeffs[n]).collect(),
        }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: Self) -> TruncatedSeries {
        let order = self.order().min(rhs.order());
        TruncatedSeries {
            coeffs: (0..=order).map(|n| self.coeffs[n] - rhs.coeffs[n]).collect(),
        }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: Self) -> TruncatedSeries {
        let order = self.order().min(rhs.order());
        let mut coeffs = vec![Complex::default(); order + 1];
        for (i, a) in self.coeffs[..=order].iter().enumerate() {
            if *a == Complex::default() {
                continue;
            }
            for (j, b) in rhs.coeffs[..=order - i].iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        TruncatedSeries { coeffs }
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        self.scale_real(-1.0)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for TruncatedSeries {
            type Output = TruncatedSeries;
            fn $method(self, rhs: Self) -> TruncatedSeries {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&TruncatedSeries> for TruncatedSeries {
            type Output = TruncatedSeries;
            fn $method(self, rhs: &TruncatedSeries) -> TruncatedSeries {
                (&self).$method(rhs)
            }
        }
        impl $tr<TruncatedSeries> for &TruncatedSeries {
            type Output = TruncatedSeries;
            fn $method(self, rhs: TruncatedSeries) -> TruncatedSeries {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        (&self).neg()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex {
        Complex::new(re, 0.0)
    }

    fn assert_coeffs(s: &TruncatedSeries, expected: &[f64]) {
        assert_eq!(s.order() + 1, expected.len(), "order mismatch: {s:?}");
        for (a, b) in s.coeffs().iter().zip(expected) {
            assert_abs_diff_eq!(a.re, *b, epsilon = 1e-13);
            assert_abs_diff_eq!(a.im, 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn constants() {
        assert_coeffs(&TruncatedSeries::from_real(1.0, 4), &[1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_coeffs(&TruncatedSeries::from_real(0.0, 2), &[0.0, 0.0, 0.0]);
        let s = TruncatedSeries::from_constant(Complex::new(2.0, -3.0), 0);
        assert_eq!(s.coeffs(), &[Complex::new(2.0, -3.0)]);
    }

    #[test]
    fn ring_operations() {
        let one_plus_t = TruncatedSeries::from_real_coeffs(&[1.0, 1.0]);
        assert_coeffs(&(&one_plus_t * &one_plus_t), &[1.0, 2.0]);
        let t = TruncatedSeries::from_real_coeffs(&[0.0, 1.0, 0.0]);
        assert_coeffs(&(&t * &t), &[0.0, 0.0, 1.0]);
        let a = TruncatedSeries::from_real_coeffs(&[1.0, 2.0]);
        let b = TruncatedSeries::from_real_coeffs(&[3.0, -2.0]);
        assert_coeffs(&(&a + &b), &[4.0, 0.0]);
        assert_coeffs(&(&a - &b), &[-2.0, 4.0]);
    }

    #[test]
    fn mixed_orders_truncate_to_the_smaller() {
        let a = TruncatedSeries::from_real_coeffs(&[1.0, 1.0, 1.0, 1.0]);
        let b = TruncatedSeries::from_real_coeffs(&[1.0, 1.0]);
        assert_eq!((&a * &b).order(), 1);
        assert_eq!((&a + &b).order(), 1);
    }

    #[test]
    fn division_cancels_common_power_of_t() {
        let a = TruncatedSeries::from_real_coeffs(&[0.0, 2.0, 2.0]);
        let b = TruncatedSeries::from_real_coeffs(&[0.0, 1.0, 1.0]);
        assert_coeffs(&a.div(&b).unwrap(), &[2.0, 0.0]);

        let one = TruncatedSeries::from_real_coeffs(&[1.0, 0.0, 0.0]);
        let one_plus_t = TruncatedSeries::from_real_coeffs(&[1.0, 1.0, 0.0]);
        assert_coeffs(&one.div(&one_plus_t).unwrap(), &[1.0, -1.0, 1.0]);
    }

    #[test]
    fn division_errors() {
        let a = TruncatedSeries::from_real_coeffs(&[1.0, 1.0]);
        let t = TruncatedSeries::from_real_coeffs(&[0.0, 1.0]);
        assert!(matches!(
            a.div(&TruncatedSeries::zero(1)),
            Err(Error::DivisionByZeroSeries { .. })
        ));
        assert!(matches!(
            a.div(&t),
            Err(Error::DivisionByZeroSeries { dividend: 0, divisor: 1 })
        ));
    }

    #[test]
    fn removable_singularity_of_sinh_ratio() {
        // e^xi = R^{-1}[1 - (x - sqrt(x^2-1)) t] at x = 2; xi(0) = 0.
        let order = 9;
        let x = 2.0f64;
        let r = TruncatedSeries::from_real_coeffs(&[1.0, -2.0 * x, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0])
            .pow_rational(1, 2)
            .unwrap();
        let lin = TruncatedSeries::polynomial(&[c(1.0), c(-(x - (x * x - 1.0).sqrt()))], order);
        let e = lin.div(&r).unwrap();
        let e_inv = e.recip().unwrap();
        let s = e.pow_rational(1, 3).unwrap();
        let s_inv = s.recip().unwrap();
        let sinh = (&e - &e_inv).scale_real(0.5);
        let sinh3 = (&s - &s_inv).scale_real(0.5);
        let ratio = sinh.div(&sinh3).unwrap();
        assert_eq!(ratio.order(), order - 1);
        assert_abs_diff_eq!(ratio.coeff(0).re, 3.0, epsilon = 1e-12);
    }

    #[test]
    fn rational_powers() {
        let sq = TruncatedSeries::from_real_coeffs(&[1.0, 2.0, 1.0]);
        assert_coeffs(&sq.pow_rational(1, 2).unwrap(), &[1.0, 1.0, 0.0]);
        let one = TruncatedSeries::from_real_coeffs(&[1.0, 0.0]);
        assert_coeffs(&one.pow_rational(-1, 1).unwrap(), &[1.0, 0.0]);
        assert_eq!(
            TruncatedSeries::from_real_coeffs(&[0.0, 1.0]).pow_rational(1, 2),
            Err(Error::ZeroConstantTerm)
        );
    }

    #[test]
    fn twelfth_root_of_r_matches_binomial_series() {
        // (1 - 4t + t^2)^{1/24}: expand (1 + y)^{1/24} with y = -4t + t^2 by
        // the binomial series, collecting powers of t by brute force.
        let order = 6;
        let alpha = 1.0 / 24.0;
        let y = [0.0, -4.0, 1.0];
        let mut expected = vec![0.0; order + 1];
        let mut y_pow = vec![0.0; order + 1];
        y_pow[0] = 1.0;
        let mut binom = 1.0;
        for k in 0..=order {
            for n in 0..=order {
                expected[n] += binom * y_pow[n];
            }
            let mut next = vec![0.0; order + 1];
            for i in 0..=order {
                for (j, yj) in y.iter().enumerate() {
                    if i + j <= order {
                        next[i + j] += y_pow[i] * yj;
                    }
                }
            }
            y_pow = next;
            binom *= (alpha - k as f64) / (k as f64 + 1.0);
        }
        let r2 = TruncatedSeries::polynomial(&[c(1.0), c(-4.0), c(1.0)], order);
        let r = r2.pow_rational(1, 2).unwrap();
        let got = r.pow_rational(1, 12).unwrap();
        for n in 0..=order {
            assert_abs_diff_eq!(got.coeff(n).re, expected[n], epsilon = 1e-13);
        }
    }

    #[test]
    fn principal_branch_of_negative_constant() {
        let s = TruncatedSeries::from_real_coeffs(&[-4.0, 0.0]);
        let root = s.pow_rational(1, 2).unwrap();
        assert_abs_diff_eq!(root.coeff(0).re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(root.coeff(0).im, 2.0, epsilon = 1e-15);
    }

    #[test]
    fn square_roots_with_even_valuation() {
        let a = TruncatedSeries::from_real_coeffs(&[0.0, 0.0, 1.0, 2.0]);
        assert_coeffs(&a.sqrt_shifted().unwrap(), &[0.0, 1.0, 1.0]);
        let b = TruncatedSeries::from_real_coeffs(&[4.0, 4.0, 1.0]);
        assert_coeffs(&b.sqrt_shifted().unwrap(), &[2.0, 1.0, 0.0]);
        let d = TruncatedSeries::from_real_coeffs(&[0.0, 0.0, 9.0]);
        assert_coeffs(&d.sqrt_shifted().unwrap(), &[0.0, 3.0]);
        let odd = TruncatedSeries::from_real_coeffs(&[0.0, 1.0, 1.0]);
        assert_eq!(odd.sqrt_shifted(), Err(Error::OddValuation(1)));
    }

    #[test]
    fn composition() {
        let geometric = vec![c(1.0); 6];
        let t = TruncatedSeries::variable(5);
        assert_coeffs(
            &TruncatedSeries::compose_vanishing(&geometric, &t).unwrap(),
            &[1.0; 6],
        );
        let inner = TruncatedSeries::from_real_coeffs(&[0.0, 3.0, -1.0]);
        assert_coeffs(
            &TruncatedSeries::compose_vanishing(&[c(1.0), c(0.0), c(0.0)], &inner).unwrap(),
            &[1.0, 0.0, 0.0],
        );
        let bad = TruncatedSeries::from_real_coeffs(&[0.5, 1.0]);
        assert!(matches!(
            TruncatedSeries::compose_vanishing(&geometric, &bad),
            Err(Error::NonvanishingInner(_))
        ));
    }

    #[test]
    fn partial_sum_error_shrinks_like_t_to_the_order_plus_one() {
        // (1 - 2xt + t^2)^{-1/4} at x = 0.7, order 8.
        let order = 8;
        let x = 0.7;
        let s = TruncatedSeries::polynomial(&[c(1.0), c(-2.0 * x), c(1.0)], order)
            .pow_rational(-1, 4)
            .unwrap();
        let direct = |t: f64| (1.0 - 2.0 * x * t + t * t).powf(-0.25);
        let e1 = (s.eval(c(0.1)).re - direct(0.1)).abs();
        let e2 = (s.eval(c(0.05)).re - direct(0.05)).abs();
        let ratio = e1 / e2;
        assert!(ratio > 2f64.powi(9) * 0.7 && ratio < 2f64.powi(9) * 1.5, "ratio {ratio}");
    }
}
