//! Double-double complex arithmetic for compositions whose intermediate
//! powers cancel far below their own magnitude.

use std::ops::{Add, Mul};

use twofloat::TwoFloat;

use super::{Complex, TruncatedSeries};

/// Double-double quotient with one correction step; the crate's own
/// `TwoFloat / TwoFloat` only reaches double precision.
pub(crate) fn dd_div(a: TwoFloat, b: TwoFloat) -> TwoFloat {
    let q1 = a.hi() / b.hi();
    let r = a - b * q1;
    let q2 = r.hi() / b.hi();
    let r2 = r - b * q2;
    TwoFloat::new_add(q1, q2) + r2.hi() / b.hi()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct DdComplex {
    re: TwoFloat,
    im: TwoFloat,
}

impl DdComplex {
    pub(crate) const ZERO: Self = Self {
        re: TwoFloat::from_f64(0.0),
        im: TwoFloat::from_f64(0.0),
    };

    pub(crate) fn to_complex(self) -> Complex {
        Complex::new(self.re.hi() + self.re.lo(), self.im.hi() + self.im.lo())
    }

    pub(crate) fn scale(self, x: f64) -> Self {
        Self {
            re: self.re * x,
            im: self.im * x,
        }
    }

    pub(crate) fn div(self, d: Self) -> Self {
        let norm = d.re * d.re + d.im * d.im;
        Self {
            re: dd_div(self.re * d.re + self.im * d.im, norm),
            im: dd_div(self.im * d.re - self.re * d.im, norm),
        }
    }
}

impl From<Complex> for DdComplex {
    fn from(z: Complex) -> Self {
        Self {
            re: TwoFloat::from(z.re),
            im: TwoFloat::from(z.im),
        }
    }
}

impl From<f64> for DdComplex {
    fn from(x: f64) -> Self {
        Complex::new(x, 0.0).into()
    }
}

impl Add for DdComplex {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }
}

impl Mul for DdComplex {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}

/// Horner composition `sum_j outer_j inner^j` carried in double-double and
/// rounded once at the end. `inner` must already have a zero constant term.
pub(crate) fn compose_extended(outer: &[DdComplex], inner: &TruncatedSeries) -> TruncatedSeries {
    let order = inner.order();
    let z: Vec<DdComplex> = inner.coeffs().iter().map(|&c| c.into()).collect();
    let used = outer.len().min(order + 1);
    let mut acc = vec![DdComplex::ZERO; order + 1];
    for &c in outer[..used].iter().rev() {
        let mut next = vec![DdComplex::ZERO; order + 1];
        for (i, &a) in acc.iter().enumerate() {
            for (j, &b) in z.iter().enumerate().take(order + 1 - i).skip(1) {
                next[i + j] = next[i + j] + a * b;
            }
        }
        next[0] = next[0] + c;
        acc = next;
    }
    TruncatedSeries::from_coeffs(acc.into_iter().map(DdComplex::to_complex).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_reaches_double_double() {
        let q = dd_div(TwoFloat::from(1.0), TwoFloat::from(3.0));
        let back = q * 3.0 - 1.0;
        assert!(back.hi().abs() < 1e-30);
    }

    #[test]
    fn complex_division_inverts_product() {
        let a = DdComplex::from(Complex::new(0.3, -1.7));
        let b = DdComplex::from(Complex::new(2.5, 0.4));
        let back = (a * b).div(b).to_complex();
        assert!((back - Complex::new(0.3, -1.7)).norm() < 1e-16);
    }

    #[test]
    fn composition_matches_double_for_mild_inputs() {
        let inner = TruncatedSeries::from_real_coeffs(&[0.0, 0.5, -0.25, 0.1]);
        let outer: Vec<DdComplex> = [1.0, 2.0, -1.0, 0.5].iter().map(|&c| DdComplex::from(c)).collect();
        let plain: Vec<Complex> = [1.0, 2.0, -1.0, 0.5].iter().map(|&c| Complex::new(c, 0.0)).collect();
        let a = compose_extended(&outer, &inner);
        let b = TruncatedSeries::compose_vanishing(&plain, &inner).unwrap();
        assert!(a.max_mixed_deviation(&b, 3) < 1e-15);
    }
}
