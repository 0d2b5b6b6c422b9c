//! Gegenbauer polynomials `C_n^lambda(x)`.
//!
//! Values come from the three-term recurrence
//! `n C_n = 2(n+lambda-1) x C_{n-1} - (n+2lambda-2) C_{n-2}`; the terminating
//! hypergeometric form is kept as an independent cross-check.

use crate::error::{Error, Result};
use crate::hypergeo::{gauss_2f1_scalar, non_positive_integer, pochhammer_real};
use crate::series::extended::dd_div;
use crate::series::{Complex, TruncatedSeries};
use twofloat::TwoFloat;

/// A single Gegenbauer polynomial `C_degree^lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GegenbauerSpec {
    pub lambda: f64,
    pub degree: usize,
}

impl GegenbauerSpec {
    pub fn new(lambda: f64, degree: usize) -> Self {
        Self { lambda, degree }
    }

    pub fn eval(&self, x: Complex) -> Complex {
        gegenbauer_recurrence(self.lambda, self.degree, x)[self.degree]
    }

    /// Coefficients of `1, x, x^2, ...` in `C_degree^lambda(x)`.
    pub fn monomial_coeffs(&self) -> Vec<f64> {
        monomial_coeffs(self.lambda, self.degree)
    }
}

/// Rejects `lambda` in `{0, -1/2, -1, ...}`.
pub fn check_lambda(lambda: f64) -> Result<()> {
    if non_positive_integer(Complex::new(2.0 * lambda, 0.0)).is_some() {
        return Err(Error::InvalidLambda(lambda));
    }
    Ok(())
}

/// `C_0^lambda(x), ..., C_{n_max}^lambda(x)`.
pub fn gegenbauer_recurrence(lambda: f64, n_max: usize, x: Complex) -> Vec<Complex> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(Complex::new(1.0, 0.0));
    if n_max >= 1 {
        out.push(x * (2.0 * lambda));
    }
    for n in 2..=n_max {
        let nf = n as f64;
        let next = (x * out[n - 1] * (2.0 * (nf + lambda - 1.0))
            - out[n - 2] * (nf + 2.0 * lambda - 2.0))
            / nf;
        out.push(next);
    }
    out
}

/// `((2lambda)_n / n!) 2F1(-n, n+2lambda; lambda+1/2; (1-x)/2)`.
///
/// For `Re x < 0` the parity `C_n(x) = (-1)^n C_n(-x)` is applied first, so
/// the alternating sum at `(1-x)/2 > 1` is never formed.
pub fn gegenbauer_hypergeometric(lambda: f64, n: usize, x: Complex) -> Result<Complex> {
    check_lambda(lambda)?;
    if x.re < 0.0 {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        return Ok(gegenbauer_hypergeometric(lambda, n, -x)? * sign);
    }
    if x.im == 0.0 {
        return Ok(Complex::new(hypergeometric_sum_extended(lambda, n, x.re), 0.0));
    }
    let prefactor = (0..n).fold(1.0, |acc, k| acc * (2.0 * lambda + k as f64) / (k as f64 + 1.0));
    let f = gauss_2f1_scalar(
        Complex::new(-(n as f64), 0.0),
        Complex::new(n as f64 + 2.0 * lambda, 0.0),
        Complex::new(lambda + 0.5, 0.0),
        (1.0 - x) / 2.0,
        0.0,
    )?;
    Ok(f * prefactor)
}

/// The terminating sum for real `x`, accumulated in double-double precision.
///
/// The alternating terms for `|x| < 1` grow far beyond the result; carrying
/// about 32 digits keeps the cross-check meaningful up to degree 30.
fn hypergeometric_sum_extended(lambda: f64, n: usize, x: f64) -> f64 {
    let one = TwoFloat::from(1.0);
    let two_lambda = TwoFloat::from(2.0 * lambda);
    let y = (one - TwoFloat::from(x)) / 2.0;
    let a = -(n as f64);
    let b = TwoFloat::from(n as f64) + two_lambda;
    let c = TwoFloat::from(lambda) + 0.5;
    let mut term = one;
    let mut sum = one;
    for k in 0..n {
        let kf = k as f64;
        term = dd_div(term * (a + kf) * (b + kf) * y, (c + kf) * (kf + 1.0));
        sum += term;
    }
    let mut prefactor = one;
    for k in 0..n {
        prefactor = dd_div(prefactor * (two_lambda + k as f64), TwoFloat::from(k as f64 + 1.0));
    }
    let v = sum * prefactor;
    v.hi() + v.lo()
}

/// Monomial coefficients of `C_n^lambda`, built by running the recurrence
/// on coefficient vectors.
pub fn monomial_coeffs(lambda: f64, n: usize) -> Vec<f64> {
    let mut prev = vec![1.0];
    if n == 0 {
        return prev;
    }
    let mut cur = vec![0.0, 2.0 * lambda];
    for k in 2..=n {
        let kf = k as f64;
        let mut next = vec![0.0; k + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += 2.0 * (kf + lambda - 1.0) * c / kf;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= (kf + 2.0 * lambda - 2.0) * c / kf;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// `D^n C_n^lambda(num / D)` given `D^2`, expanded as
/// `sum_j a_j num^j (D^2)^{(n-j)/2}` over the monomial coefficients `a_j`
/// (only `j = n mod 2` occur). Polynomial inputs give a polynomial result
/// with no division.
pub fn gegenbauer_homogeneous(
    lambda: f64,
    n: usize,
    num: &TruncatedSeries,
    den_squared: &TruncatedSeries,
) -> TruncatedSeries {
    let coeffs = monomial_coeffs(lambda, n);
    let order = num.order().min(den_squared.order());
    let num = num.truncate(order);
    let num2 = &num * &num;
    // Homogeneous Horner: sum_m a_{n-2m} (num^2)^{M-m} (D^2)^m.
    let mut acc = TruncatedSeries::from_real(coeffs[n], order);
    let mut den_pow = TruncatedSeries::one(order);
    for m in 1..=n / 2 {
        den_pow = &den_pow * den_squared;
        acc = &(&acc * &num2) + &den_pow.scale_real(coeffs[n - 2 * m]);
    }
    if n % 2 == 1 {
        acc = &acc * &num;
    }
    acc
}

/// `C_n^lambda(r + s) C_n^lambda(r - s)` from `r^2` and `s`, without forming
/// `r`. With `C_n(z) = z^p Q(z^2)`, `Q(m + d) Q(m - d)` for `m = r^2 + s^2`,
/// `d = 2rs` only has even powers of `d`, and `d^2 = 4 r^2 s^2`.
pub fn gegenbauer_shift_product(lambda: f64, n: usize, r_squared: &TruncatedSeries, s: &TruncatedSeries) -> TruncatedSeries {
    let coeffs = monomial_coeffs(lambda, n);
    let order = r_squared.order().min(s.order());
    let (r2, s) = (r_squared.truncate(order), s.truncate(order));
    let s2 = &s * &s;
    let m = &r2 + &s2;
    let d2 = (&r2 * &s2).scale_real(4.0);
    let parity = n % 2;
    let q: Vec<f64> = coeffs.iter().skip(parity).step_by(2).copied().collect();
    let k_max = q.len() - 1;
    // Taylor coefficients Q^{(i)}(m)/i! by Horner in m.
    let taylor: Vec<TruncatedSeries> = (0..=k_max)
        .map(|i| {
            (i..=k_max).rev().fold(TruncatedSeries::zero(order), |acc, k| {
                (&acc * &m).add_constant(Complex::new(q[k] * binomial(k, i), 0.0))
            })
        })
        .collect();
    let mut acc = TruncatedSeries::zero(order);
    let mut d_pow = TruncatedSeries::one(order);
    for j in (0..=2 * k_max).step_by(2) {
        let lo = j.saturating_sub(k_max);
        let mut e = TruncatedSeries::zero(order);
        for i in lo..=j.min(k_max) {
            let term = &taylor[i] * &taylor[j - i];
            e = if i % 2 == 0 { &e + &term } else { &e - &term };
        }
        acc = &acc + &(&e * &d_pow);
        d_pow = &d_pow * &d2;
    }
    if parity == 1 {
        acc = &acc * &(&r2 - &s2);
    }
    acc
}

fn binomial(k: usize, i: usize) -> f64 {
    (0..i).fold(1.0, |b, j| b * (k - j) as f64 / (j + 1) as f64)
}

/// `C_n^lambda(z)` for a series argument, by Horner's rule on the monomial
/// form.
pub fn gegenbauer_of_series(lambda: f64, n: usize, z: &TruncatedSeries) -> TruncatedSeries {
    let coeffs = monomial_coeffs(lambda, n);
    let order = z.order();
    coeffs.iter().rev().fold(TruncatedSeries::zero(order), |acc, c| {
        (&acc * z).add_constant(Complex::new(*c, 0.0))
    })
}

/// `C_0^lambda(z), ..., C_{n_max}^lambda(z)` for a series argument, by the
/// recurrence.
pub fn gegenbauer_family_of_series(lambda: f64, n_max: usize, z: &TruncatedSeries) -> Vec<TruncatedSeries> {
    let order = z.order();
    let mut out = vec![TruncatedSeries::one(order)];
    if n_max >= 1 {
        out.push(z.scale_real(2.0 * lambda));
    }
    for n in 2..=n_max {
        let nf = n as f64;
        let a = (z * &out[n - 1]).scale_real(2.0 * (nf + lambda - 1.0) / nf);
        let b = out[n - 2].scale_real((nf + 2.0 * lambda - 2.0) / nf);
        out.push(&a - &b);
    }
    out
}

/// Coefficients `C_n^lambda(x)` as a series in `t` (recurrence path).
pub fn ordinary_gf_by_recurrence(lambda: f64, x: Complex, order: usize) -> TruncatedSeries {
    TruncatedSeries::from_coeffs(gegenbauer_recurrence(lambda, order, x))
}

/// `(1 - 2xt + t^2)^{-lambda}` expanded by a series power (closed-form path).
pub fn ordinary_gf_by_power(lambda: f64, x: Complex, order: usize) -> TruncatedSeries {
    r_squared(x, order)
        .pow_real(-lambda)
        .expect("1 - 2xt + t^2 has constant term 1")
}

/// Tolerance for the agreement check in [`ordinary_gf_series`].
pub const GF_PATH_TOLERANCE: f64 = 1e-9;

/// The ordinary generating function, checked against the recurrence.
///
/// Returns the closed-form expansion; fails when the two paths disagree by
/// more than [`GF_PATH_TOLERANCE`] in mixed deviation.
pub fn ordinary_gf_series(lambda: f64, x: Complex, order: usize) -> Result<TruncatedSeries> {
    let by_power = ordinary_gf_by_power(lambda, x, order);
    let by_recurrence = ordinary_gf_by_recurrence(lambda, x, order);
    let dev = by_power.max_mixed_deviation(&by_recurrence, order);
    if dev > GF_PATH_TOLERANCE {
        return Err(Error::ArgumentOutOfDomain(format!(
            "generating-function paths disagree by {dev:e}"
        )));
    }
    Ok(by_power)
}

/// `1 - 2xt + t^2`.
pub fn r_squared(x: Complex, order: usize) -> TruncatedSeries {
    TruncatedSeries::polynomial(&[Complex::new(1.0, 0.0), x * -2.0, Complex::new(1.0, 0.0)], order)
}

/// Weight `(gamma)_n / (2 lambda)_n` used throughout the Brafman families.
pub fn pochhammer_ratio(gamma: f64, two_lambda: f64, n: usize) -> f64 {
    pochhammer_real(gamma, n) / pochhammer_real(two_lambda, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_product_matches_direct() {
        let x = Complex::new(0.6, 0.0);
        let r2 = r_squared(x, 10);
        let r = r2.pow_real(0.5).unwrap();
        let t = TruncatedSeries::variable(10);
        for n in 0..6 {
            let direct = &gegenbauer_of_series(0.3, n, &(&r + &t)) * &gegenbauer_of_series(0.3, n, &(&r - &t));
            let product = gegenbauer_shift_product(0.3, n, &r2, &t);
            assert!(product.max_mixed_deviation(&direct, 10) < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn homogeneous_form_matches_quotient() {
        let c = |v: f64| Complex::new(v, 0.0);
        let num = TruncatedSeries::polynomial(&[c(1.0), c(-2.0)], 10);
        let d2 = TruncatedSeries::polynomial(&[c(1.0), c(-4.0), c(1.0)], 10);
        let d = d2.pow_rational(1, 2).unwrap();
        for n in 0..6 {
            let direct = &d.pow_real(n as f64).unwrap() * &gegenbauer_of_series(0.3, n, &num.div(&d).unwrap());
            let homog = gegenbauer_homogeneous(0.3, n, &num, &d2);
            // The quotient form carries cancellation noise of order 1e-11 here.
            assert!(homog.max_mixed_deviation(&direct, 6) < 1e-10, "n={n}");
            assert!(homog.coeffs()[n + 1..].iter().all(|c| c.norm() == 0.0));
        }
    }
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(x: f64) -> Complex {
        Complex::new(x, 0.0)
    }

    /// Brute-force expansion of (1 - 2xt + t^2)^{-lambda} as
    /// sum_k binom(-lambda, k) (t^2 - 2xt)^k, collecting t^n.
    fn brute_force_gf(lambda: f64, x: f64, order: usize) -> Vec<f64> {
        let mut out = vec![0.0; order + 1];
        let mut binom = 1.0;
        let mut power = vec![0.0; order + 1];
        power[0] = 1.0;
        for k in 0..=order {
            for n in 0..=order {
                out[n] += binom * power[n];
            }
            let mut next = vec![0.0; order + 1];
            for i in 0..=order {
                if i + 1 <= order {
                    next[i + 1] += -2.0 * x * power[i];
                }
                if i + 2 <= order {
                    next[i + 2] += power[i];
                }
            }
            power = next;
            binom *= (-lambda - k as f64) / (k as f64 + 1.0);
        }
        out
    }

    #[test]
    fn low_degrees() {
        let vals = gegenbauer_recurrence(0.37, 2, c(1.3));
        assert_eq!(vals[0], c(1.0));
        assert_relative_eq!(vals[1].re, 2.0 * 0.37 * 1.3, max_relative = 1e-15);
        let p2 = gegenbauer_recurrence(0.5, 2, c(0.7))[2].re;
        assert_relative_eq!(p2, 0.235, max_relative = 1e-14);
        let brute = brute_force_gf(0.5, 0.7, 2);
        assert_relative_eq!(brute[2], 0.235, max_relative = 1e-14);
    }

    #[test]
    fn recurrence_matches_brute_force_expansion() {
        for &(lambda, x) in &[(0.25, 2.0), (1.0 / 6.0, 0.3), (7.0 / 6.0, -0.9)] {
            let brute = brute_force_gf(lambda, x, 12);
            let rec = gegenbauer_recurrence(lambda, 12, c(x));
            for n in 0..=12 {
                assert_relative_eq!(rec[n].re, brute[n], max_relative = 1e-11, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn hypergeometric_form_agrees() {
        assert_eq!(gegenbauer_hypergeometric(0.3, 0, c(0.1)).unwrap(), c(1.0));
        assert_relative_eq!(gegenbauer_hypergeometric(0.25, 1, c(2.0)).unwrap().re, 1.0, max_relative = 1e-15);
        let rec = gegenbauer_recurrence(1.0 / 6.0, 3, c(0.3))[3].re;
        assert_relative_eq!(
            gegenbauer_hypergeometric(1.0 / 6.0, 3, c(0.3)).unwrap().re,
            rec,
            max_relative = 1e-12
        );
        for &lambda in &[0.25, 1.0 / 6.0, 0.5, 7.0 / 6.0, 2.3] {
            for &x in &[-5.0, -1.2, 0.0, 0.4, 0.95, 3.0, 5.0] {
                let rec = gegenbauer_recurrence(lambda, 30, c(x));
                for n in 0..=30 {
                    let h = gegenbauer_hypergeometric(lambda, n, c(x)).unwrap();
                    let scale = rec[n].norm().max(1.0);
                    assert!(
                        (h - rec[n]).norm() / scale < 1e-10,
                        "lambda={lambda} x={x} n={n}: {h} vs {}",
                        rec[n]
                    );
                }
            }
        }
    }

    #[test]
    fn invalid_lambda() {
        assert_eq!(gegenbauer_hypergeometric(-0.5, 2, c(0.1)), Err(Error::InvalidLambda(-0.5)));
        assert_eq!(gegenbauer_hypergeometric(0.0, 2, c(0.1)), Err(Error::InvalidLambda(0.0)));
    }

    #[test]
    fn monomial_form_matches_recurrence() {
        for n in 0..10 {
            let coeffs = monomial_coeffs(0.3, n);
            let x = 0.83;
            let horner = coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
            assert_relative_eq!(horner, gegenbauer_recurrence(0.3, n, c(x))[n].re, max_relative = 1e-12);
        }
    }

    #[test]
    fn series_argument() {
        let order = 8;
        let z = TruncatedSeries::from_real_coeffs(&[0.2, 1.0, -0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(gegenbauer_of_series(0.4, 0, &z), TruncatedSeries::one(order));
        let lin = gegenbauer_of_series(0.4, 1, &z);
        assert!(lin.max_mixed_deviation(&z.scale_real(0.8), order) < 1e-15);

        // C_2^{1/4}((1-2t)/R) at x = 2 against scalar evaluation at t = 0.05.
        let x = 2.0;
        let r = r_squared(c(x), 16).pow_rational(1, 2).unwrap();
        let w = TruncatedSeries::polynomial(&[c(1.0), c(-x)], 16).div(&r).unwrap();
        let s = gegenbauer_of_series(0.25, 2, &w);
        let t = 0.05f64;
        let rt = (1.0 - 2.0 * x * t + t * t).sqrt();
        let direct = gegenbauer_recurrence(0.25, 2, c((1.0 - x * t) / rt))[2].re;
        assert_relative_eq!(s.eval(c(t)).re, direct, max_relative = 1e-12);

        let fam = gegenbauer_family_of_series(0.25, 5, &w);
        for n in 0..=5 {
            assert!(fam[n].max_mixed_deviation(&gegenbauer_of_series(0.25, n, &w), 16) < 1e-12);
        }
    }

    #[test]
    fn ordinary_gf_examples() {
        let s = ordinary_gf_series(0.5, c(1.0), 10).unwrap();
        for n in 0..=10 {
            assert_relative_eq!(s.coeff(n).re, 1.0, max_relative = 1e-13);
        }
        let s = ordinary_gf_series(0.25, c(2.0), 10).unwrap();
        let rec = gegenbauer_recurrence(0.25, 10, c(2.0));
        for n in 0..=10 {
            assert_relative_eq!(s.coeff(n).re, rec[n].re, max_relative = 1e-12);
        }
    }

    #[test]
    fn ordinary_gf_paths_on_grid() {
        for &lambda in &[1.0 / 6.0, 0.25, 0.5, 7.0 / 6.0] {
            for &x in &[0.3, 0.9, 1.5, 2.0] {
                let a = ordinary_gf_by_power(lambda, c(x), 20);
                let b = ordinary_gf_by_recurrence(lambda, c(x), 20);
                assert!(a.max_mixed_deviation(&b, 20) <= 1e-9);
            }
        }
    }

    #[test]
    fn legendre_reduction() {
        for &x in &[-0.8, 0.1, 0.6, 1.4] {
            let c_half = gegenbauer_recurrence(0.5, 20, c(x));
            let mut p = vec![1.0, x];
            for n in 1..20 {
                let nf = n as f64;
                p.push(((2.0 * nf + 1.0) * x * p[n] - nf * p[n - 1]) / (nf + 1.0));
            }
            for n in 0..=20 {
                assert!((c_half[n].re - p[n]).abs() <= 1e-10 * p[n].abs().max(1.0));
            }
        }
    }

    proptest! {
        #[test]
        fn parity(lambda in 0.05f64..3.0, x in -2.0f64..2.0) {
            let plus = gegenbauer_recurrence(lambda, 20, c(x));
            let minus = gegenbauer_recurrence(lambda, 20, c(-x));
            for n in 0..=20 {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                let diff = (minus[n] - plus[n] * sign).norm();
                prop_assert!(diff <= 1e-12 * plus[n].norm().max(1.0));
            }
        }
    }
}
