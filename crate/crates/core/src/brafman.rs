//! Brafman-type generating functions for Gegenbauer polynomials.
//!
//! Every builder returns an [`IdentityPair`]: the left side as a weighted sum
//! `sum_n w_n C_n^lambda(x) t^n` and the right side assembled from closed
//! forms in series arithmetic. Both are truncated power series in `t`, so an
//! identity holds when the pair agrees coefficient by coefficient.
//!
//! Throughout, `R = (1 - 2xt + t^2)^{1/2}`,
//! `U = [1 - 2(1-u)xt + (1-u)^2 t^2]^{1/2}` and `S = R^2 + u(x-t)t`.

use crate::error::{Error, Result};
use crate::gegenbauer::{
    check_lambda, gegenbauer_family_of_series, gegenbauer_homogeneous, gegenbauer_recurrence,
    gegenbauer_shift_product, r_squared,
};
use crate::hypergeo::{gamma_fn, gauss_2f1_of_series, gauss_terminating, pfq_terminating, pochhammer_real};
use crate::legendre::{congruent, mathcal_f};
use crate::series::{Complex, TruncatedSeries};

mod examples;

pub use examples::{
    octahedral_example, substitution_table, tetrahedral_example, SubstitutionRow, TableForm, TetraBranch,
    TrigForm,
};

/// Left and right sides of one identity.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityPair {
    pub lhs: TruncatedSeries,
    pub rhs: TruncatedSeries,
}

impl IdentityPair {
    pub fn new(lhs: TruncatedSeries, rhs: TruncatedSeries) -> Self {
        Self { lhs, rhs }
    }

    /// Largest mixed deviation over coefficients `0..=order`.
    pub fn deviation(&self, order: usize) -> f64 {
        self.lhs.max_mixed_deviation(&self.rhs, order)
    }

    /// Highest coefficient index available on both sides.
    pub fn order(&self) -> usize {
        self.lhs.order().min(self.rhs.order())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MillerKind {
    /// Finite sum with weights `(-N)_n / (2 lambda)_n`.
    G1,
    /// Weights `(2 lambda + N)_n / (2 lambda)_n`.
    G2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AltKind {
    /// Weights `(lambda + 1/2)_n / (2 lambda)_n`.
    One,
    /// Weights `(lambda - 1/2)_n / (2 lambda)_n`.
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtendedMillerKind {
    /// Weights `2F1(-n, 2 lambda + N; 2 lambda; u)`.
    Plus,
    /// Weights `2F1(-n, -N; 2 lambda; u)`.
    Minus,
}

pub(crate) fn c(x: f64) -> Complex {
    Complex::new(x, 0.0)
}

/// `R = (1 - 2xt + t^2)^{1/2}`.
pub fn r_series(x: Complex, order: usize) -> Result<TruncatedSeries> {
    r_squared(x, order).pow_rational(1, 2)
}

/// `U^2 = 1 - 2(1-u)xt + (1-u)^2 t^2`.
pub fn u_squared(u: Complex, x: Complex, order: usize) -> TruncatedSeries {
    let v = c(1.0) - u;
    TruncatedSeries::polynomial(&[c(1.0), v * x * -2.0, v * v], order)
}

/// `U = [1 - 2(1-u)xt + (1-u)^2 t^2]^{1/2}`, equal to 1 at `t = 0`.
pub fn u_series(u: Complex, x: Complex, order: usize) -> Result<TruncatedSeries> {
    u_squared(u, x, order).pow_rational(1, 2)
}

/// `S = R^2 + u(x-t)t`.
pub fn s_series(u: Complex, x: Complex, order: usize) -> TruncatedSeries {
    TruncatedSeries::polynomial(&[c(1.0), (u - 2.0) * x, c(1.0) - u], order)
}

pub(crate) fn linear(a0: Complex, a1: Complex, order: usize) -> TruncatedSeries {
    TruncatedSeries::polynomial(&[a0, a1], order)
}

/// `2F1(a, b; c; arg)` for a series argument vanishing at `t = 0`.
fn hyp(a: f64, b: f64, cc: f64, arg: &TruncatedSeries) -> Result<TruncatedSeries> {
    gauss_2f1_of_series(a, b, cc, arg)
}

/// `2F1(a, b; c; 1 - 1/w^2)` for `w = num/den` with constant term 1, through
/// the Pfaff form `w^{2a} 2F1(a, c-b; c; 1 - w^2)`. The direct argument has a
/// double pole wherever `w` vanishes, which inflates its Taylor coefficients.
/// `gap = den^2 - num^2` is passed in so that exact polynomial cancellation
/// happens before any division.
fn hyp_inverse_square(
    a: f64,
    b: f64,
    cc: f64,
    num: &TruncatedSeries,
    den: &TruncatedSeries,
    gap: &TruncatedSeries,
) -> Result<TruncatedSeries> {
    let arg = gap.div(&(den * den))?;
    Ok(&num.div(den)?.pow_real(2.0 * a)? * &hyp(a, cc - b, cc, &arg)?)
}

/// `sum_n w_n C_n^lambda(x) t^n` for the given weights.
pub fn weighted_gf(lambda: f64, x: Complex, weights: &[Complex]) -> TruncatedSeries {
    let n_max = weights.len().saturating_sub(1);
    let cs = gegenbauer_recurrence(lambda, n_max, x);
    TruncatedSeries::from_coeffs(weights.iter().zip(cs).map(|(w, c)| w * c).collect())
}

/// `prod (num_i)_n / prod (den_j)_n` for `n = 0..=order`, built by ratios so
/// that a vanishing numerator terminates the list exactly.
fn pochhammer_weights(num: &[f64], den: &[f64], order: usize) -> Result<Vec<Complex>> {
    for d in den {
        if *d <= 0.0 && congruent(*d, 0.0) {
            let shielded = num.iter().any(|a| *a <= 0.0 && congruent(*a, 0.0) && *a >= *d);
            if !shielded {
                return Err(Error::PoleInDenominatorParams(*d));
            }
        }
    }
    let mut out = Vec::with_capacity(order + 1);
    let mut w = 1.0;
    for n in 0..=order {
        out.push(c(w));
        if w == 0.0 {
            continue;
        }
        let k = n as f64;
        let top: f64 = num.iter().map(|a| a + k).product();
        let bottom: f64 = den.iter().map(|d| d + k).product();
        w = if top == 0.0 { 0.0 } else { w * top / bottom };
    }
    Ok(out)
}

fn pfq_weights(extra: &[Complex], den: &[Complex], u: Complex, order: usize) -> Result<Vec<Complex>> {
    match (extra, den) {
        ([b], [d]) => (0..=order).map(|n| gauss_terminating(n, *b, *d, u)).collect(),
        _ => (0..=order).map(|n| pfq_terminating(n, extra, den, u)).collect(),
    }
}

// ---------------------------------------------------------------------------
// Left-hand sides

/// Weights `(gamma)_n / (2 lambda)_n`.
pub fn lhs_first_gf(lambda: f64, gamma: f64, x: Complex, order: usize) -> Result<TruncatedSeries> {
    check_lambda(lambda)?;
    let w = pochhammer_weights(&[gamma], &[2.0 * lambda], order)?;
    Ok(weighted_gf(lambda, x, &w))
}

/// Weights `(gamma)_n (2 lambda - gamma)_n / ((2 lambda)_n (lambda + 1/2)_n)`.
pub fn lhs_second_gf(lambda: f64, gamma: f64, x: Complex, order: usize) -> Result<TruncatedSeries> {
    check_lambda(lambda)?;
    let w = pochhammer_weights(&[gamma, 2.0 * lambda - gamma], &[2.0 * lambda, lambda + 0.5], order)?;
    Ok(weighted_gf(lambda, x, &w))
}

/// Weights `2F1(-n, 2 lambda - gamma; 2 lambda; u)`.
pub fn lhs_extended_first(lambda: f64, gamma: f64, u: Complex, x: Complex, order: usize) -> Result<TruncatedSeries> {
    check_lambda(lambda)?;
    let w = pfq_weights(&[c(2.0 * lambda - gamma)], &[c(2.0 * lambda)], u, order)?;
    Ok(weighted_gf(lambda, x, &w))
}

/// Weights `3F2(-n, gamma, 2 lambda - gamma; 2 lambda, lambda + 1/2; u)`.
pub fn lhs_extended_second(lambda: f64, gamma: f64, u: Complex, x: Complex, order: usize) -> Result<TruncatedSeries> {
    check_lambda(lambda)?;
    let w = pfq_weights(
        &[c(gamma), c(2.0 * lambda - gamma)],
        &[c(2.0 * lambda), c(lambda + 0.5)],
        u,
        order,
    )?;
    Ok(weighted_gf(lambda, x, &w))
}

/// Weights `_{p+1}F_q(-n, c_1..c_p; d_1..d_q; u)`.
pub fn lhs_lemma(lambda: f64, cs: &[Complex], ds: &[Complex], u: Complex, x: Complex, order: usize) -> Result<TruncatedSeries> {
    let w = pfq_weights(cs, ds, u, order)?;
    Ok(weighted_gf(lambda, x, &w))
}

// ---------------------------------------------------------------------------
// First generating function

/// `R^{-gamma} 2F1(gamma, 2 lambda - gamma; lambda + 1/2; (R - 1 + xt) / (2R))`.
pub fn rhs_first_gf_a(lambda: f64, gamma: f64, x: Complex, order: usize) -> Result<TruncatedSeries> {
    check_lambda(lambda)?;
    let r = r_series(x, order)?;
    let arg = (&r + &linear(c(-1.0), x, order)).div(&r.scale_real(2.0))?;
    Ok(&r.pow_real(-gamma)? * &hyp(gamma, 2.0 * lambda - gamma, lambda + 0.5, &arg)?)
}

/// `(1 - xt)^{-gamma} 2F1(gamma/2, gamma/2 + 1/2; lambda + 1/2; 1 - (R / (1 - xt))^2)`.
pub fn rhs_first_gf_b(lambda: f64, gamma: f64, x: Complex, order: usize) -> Result<TruncatedSeries> {
    check_lambda(lambda)?;
    let one_minus_xt = linear(c(1.0), -x, order);
    let ratio = r_squared(x, order).div(&(&one_minus_xt * &one_minus_xt))?;
    let arg = (-&ratio).add_constant(c(1.0));
    let prefactor = one_minus_xt.pow_real(-gamma)?;
    Ok(&prefactor * &hyp(gamma / 2.0, gamma / 2.0 + 0.5, lambda + 0.5, &arg)?)
}

/// Both quadratic-transform variants of the first generating function.
pub fn first_gf(lambda: f64, gamma: f64, x: Complex, order: usize, variant: Variant) -> Result<IdentityPair> {
    let lhs = lhs_first_gf(lambda, gamma, x, order)?;
    let rhs = match variant {
        Variant::A => rhs_first_gf_a(lambda, gamma, x, order)?,
        Variant::B => rhs_first_gf_b(lambda, gamma, x, order)?,
    };
    Ok(IdentityPair::new(lhs, rhs))
}

fn check_rewrite_mu(mu: f64) -> Result<()> {
    if mu > 0.0 && congruent(2.0 * mu, 0.0) {
        return Err(Error::InvalidMu(mu));
    }
    Ok(())
}

/// `2^{-mu} Gamma(1-mu)`, the inverse of the normalization inside `F_nu^mu`.
fn rewrite_scale(mu: f64) -> Result<f64> {
    Ok(2f64.powf(-mu) * gamma_fn(1.0 - mu)?)
}

/// Degree `N` when `2F1(-nu-mu, 1+nu-mu; 1-mu; .)` terminates, in which case
/// `2^{-mu} Gamma(1-mu) F_nu^mu(z) = N!/(2lambda)_N C_N^lambda(z)`.
fn reducible_degree(nu: f64, mu: f64) -> Option<usize> {
    [nu + mu, mu - nu - 1.0]
        .into_iter()
        .find(|&n| n > -0.5 && congruent(n, 0.0))
        .map(|n| n.round() as usize)
}

/// Legendre-function form of the first generating function, with
/// `lambda = 1/2 - mu`.
///
/// Variant A: `2^{-mu} Gamma(1-mu) R^{nu+mu} F_nu^mu((1-xt)/R)`, matching
/// weights `(-nu-mu)_n / (1-2mu)_n`.
///
/// Variant B: `2^{-mu} Gamma(1-mu) (1-xt)^{2mu-1/2} F_{-1/4}^mu(2(R/(1-xt))^2 - 1)`,
/// matching weights `(1/2-2mu)_n / (1-2mu)_n`; `nu` is fixed at `-1/4` and
/// the argument is ignored.
pub fn rhs_rewrite_legendre(nu: f64, mu: f64, x: Complex, order: usize, variant: Variant) -> Result<TruncatedSeries> {
    check_rewrite_mu(mu)?;
    let r = r_series(x, order)?;
    let one_minus_xt = linear(c(1.0), -x, order);
    let scale = rewrite_scale(mu)?;
    match variant {
        Variant::A => {
            if let Some(n) = reducible_degree(nu, mu) {
                // R^N C_N((1-xt)/R) is a polynomial in t.
                let r2 = r_squared(x, order);
                let h = gegenbauer_homogeneous(0.5 - mu, n, &one_minus_xt, &r2);
                let prefactor = r2.pow_real((nu + mu - n as f64) / 2.0)?;
                return Ok((&prefactor * &h).scale_real(miller_scale(0.5 - mu, n)));
            }
            let z = one_minus_xt.div(&r)?;
            Ok((&r.pow_real(nu + mu)? * &mathcal_f(nu, mu, &z)?).scale_real(scale))
        }
        Variant::B => {
            let ratio = r_squared(x, order).div(&(&one_minus_xt * &one_minus_xt))?;
            let z = ratio.scale_real(2.0).add_constant(c(-1.0));
            let prefactor = one_minus_xt.pow_real(2.0 * mu - 0.5)?;
            Ok((&prefactor * &mathcal_f(-0.25, mu, &z)?).scale_real(scale))
        }
    }
}

pub fn first_rewrite(nu: f64, mu: f64, x: Complex, order: usize, variant: Variant) -> Result<IdentityPair> {
    check_rewrite_mu(mu)?;
    let lambda = 0.5 - mu;
    let gamma = match variant {
        Variant::A => -nu - mu,
        Variant::B => 0.5 - 2.0 * mu,
    };
    let lhs = lhs_first_gf(lambda, gamma, x, order)?;
    Ok(IdentityPair::new(lhs, rhs_rewrite_legendre(nu, mu, x, order, variant)?))
}

/// `N! / (2 lambda)_N`.
fn miller_scale(lambda: f64, n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product::<f64>() / pochhammer_real(2.0 * lambda, n)
}

/// The reducible-case identities
/// `sum_{n<=N} (-N)_n/(2lambda)_n C_n t^n = N!/(2lambda)_N R^N C_N((1-xt)/R)` and
/// `sum_n (2lambda+N)_n/(2lambda)_n C_n t^n = N!/(2lambda)_N R^{-2lambda-N} C_N((1-xt)/R)`.
pub fn miller_identities(lambda: f64, n: usize, x: Complex, order: usize, which: MillerKind) -> Result<IdentityPair> {
    check_lambda(lambda)?;
    let r2 = r_squared(x, order);
    // R^N C_N((1-xt)/R) is a polynomial; expanding it directly avoids the
    // cancellation of the quotient form at large |x|.
    let h = gegenbauer_homogeneous(lambda, n, &linear(c(1.0), -x, order), &r2);
    let (gamma, rhs) = match which {
        MillerKind::G1 => (-(n as f64), h),
        MillerKind::G2 => (
            2.0 * lambda + n as f64,
            &r2.pow_real(-lambda - n as f64)? * &h,
        ),
    };
    let lhs = lhs_first_gf(lambda, gamma, x, order)?;
    let rhs = rhs.scale_real(miller_scale(lambda, n));
    Ok(IdentityPair::new(lhs, rhs))
}

/// `R^{-1} ((1+R-xt)/2)^{1/2-lambda}` and `((1+R-xt)/2)^{1/2-lambda}`.
pub fn alt_gf(lambda: f64, x: Complex, order: usize, which: AltKind) -> Result<IdentityPair> {
    check_lambda(lambda)?;
    let r = r_series(x, order)?;
    let base = (&r + &linear(c(1.0), -x, order)).scale_real(0.5);
    let power = base.pow_real(0.5 - lambda)?;
    let (gamma, rhs) = match which {
        AltKind::One => (lambda + 0.5, power.div(&r)?),
        AltKind::Two => (lambda - 0.5, power),
    };
    Ok(IdentityPair::new(lhs_first_gf(lambda, gamma, x, order)?, rhs))
}

// ---------------------------------------------------------------------------
// Extended (u-dependent) first generating function

/// Variant A: `U^{gamma-2lambda} R^{-gamma} 2F1(gamma, 2lambda-gamma; lambda+1/2; (UR - S)/(2UR))`.
/// Variant B: `U^{2gamma-2lambda} S^{-gamma} 2F1(gamma/2, gamma/2+1/2; lambda+1/2; 1 - (UR/S)^2)`.
pub fn extended_first_gf(
    lambda: f64,
    gamma: f64,
    u: Complex,
    x: Complex,
    order: usize,
    variant: Variant,
) -> Result<IdentityPair> {
    let lhs = lhs_extended_first(lambda, gamma, u, x, order)?;
    let r = r_series(x, order)?;
    let uu = u_series(u, x, order)?;
    let s = s_series(u, x, order);
    let ur = &uu * &r;
    let rhs = match variant {
        Variant::A => {
            let arg = (&ur - &s).div(&ur.scale_real(2.0))?;
            let prefactor = &uu.pow_real(gamma - 2.0 * lambda)? * &r.pow_real(-gamma)?;
            &prefactor * &hyp(gamma, 2.0 * lambda - gamma, lambda + 0.5, &arg)?
        }
        Variant::B => {
            let ratio = ur.div(&s)?;
            let arg = (-&(&ratio * &ratio)).add_constant(c(1.0));
            let prefactor = &uu.pow_real(2.0 * gamma - 2.0 * lambda)? * &s.pow_real(-gamma)?;
            &prefactor * &hyp(gamma / 2.0, gamma / 2.0 + 0.5, lambda + 0.5, &arg)?
        }
    };
    Ok(IdentityPair::new(lhs, rhs))
}

/// Legendre-function form of the extended first generating function, with
/// `lambda = 1/2 - mu`.
///
/// Variant A: weights `2F1(-n, nu-mu+1; 1-2mu; u)` against
/// `2^{-mu} Gamma(1-mu) U^{-nu+mu-1} R^{nu+mu} F_nu^mu(S/(UR))`.
///
/// Variant B: weights `2F1(-n, 1/2; 1-2mu; u)` against
/// `2^{-mu} Gamma(1-mu) U^{-2mu} S^{2mu-1/2} F_{-1/4}^mu(2(UR/S)^2 - 1)`.
pub fn extended_rewrite(nu: f64, mu: f64, u: Complex, x: Complex, order: usize, variant: Variant) -> Result<IdentityPair> {
    check_rewrite_mu(mu)?;
    let lambda = 0.5 - mu;
    check_lambda(lambda)?;
    let r = r_series(x, order)?;
    let uu = u_series(u, x, order)?;
    let s = s_series(u, x, order);
    let ur = &uu * &r;
    let scale = rewrite_scale(mu)?;
    let (second, rhs) = match variant {
        Variant::A => {
            let z = s.div(&ur)?;
            let prefactor = &uu.pow_real(-nu + mu - 1.0)? * &r.pow_real(nu + mu)?;
            (nu - mu + 1.0, &prefactor * &mathcal_f(nu, mu, &z)?)
        }
        Variant::B => {
            let ratio = ur.div(&s)?;
            let z = (&ratio * &ratio).scale_real(2.0).add_constant(c(-1.0));
            let prefactor = &uu.pow_real(-2.0 * mu)? * &s.pow_real(2.0 * mu - 0.5)?;
            (0.5, &prefactor * &mathcal_f(-0.25, mu, &z)?)
        }
    };
    let w = pfq_weights(&[c(second)], &[c(1.0 - 2.0 * mu)], u, order)?;
    Ok(IdentityPair::new(weighted_gf(lambda, x, &w), rhs.scale_real(scale)))
}

/// Plus: weights `2F1(-n, 2lambda+N; 2lambda; u)` against
/// `N!/(2lambda)_N U^{-2lambda-N} R^N C_N(S/(UR))`.
///
/// Minus: weights `2F1(-n, -N; 2lambda; u)` against
/// `N!/(2lambda)_N U^N R^{-2lambda-N} C_N(S/(UR))`.
pub fn extended_miller(
    lambda: f64,
    n: usize,
    u: Complex,
    x: Complex,
    order: usize,
    which: ExtendedMillerKind,
) -> Result<IdentityPair> {
    check_lambda(lambda)?;
    let r2 = r_squared(x, order);
    let u2 = u_squared(u, x, order);
    let s = s_series(u, x, order);
    // (UR)^N C_N(S/(UR)) is a polynomial in t.
    let h = gegenbauer_homogeneous(lambda, n, &s, &(&u2 * &r2));
    let nf = n as f64;
    let (second, prefactor) = match which {
        ExtendedMillerKind::Plus => (2.0 * lambda + nf, u2.pow_real(-lambda - nf)?),
        ExtendedMillerKind::Minus => (-nf, r2.pow_real(-lambda - nf)?),
    };
    let w = pfq_weights(&[c(second)], &[c(2.0 * lambda)], u, order)?;
    let rhs = (&prefactor * &h).scale_real(miller_scale(lambda, n));
    Ok(IdentityPair::new(weighted_gf(lambda, x, &w), rhs))
}

/// The series-rearrangement lemma:
/// `sum_n pFq(-n, c; d; u) C_n(x) t^n = R^{-2lambda} sum_n (c)_n/(d)_n C_n((x-t)/R) (-tu/R)^n`.
///
/// The argument is `(x-t)/R`, without a factor 2.
pub fn lemma_key_check(lambda: f64, cs: &[Complex], ds: &[Complex], u: Complex, x: Complex, order: usize) -> Result<IdentityPair> {
    check_lambda(lambda)?;
    let lhs = lhs_lemma(lambda, cs, ds, u, x, order)?;
    let r = r_series(x, order)?;
    let w = linear(x, c(-1.0), order).div(&r)?;
    let q = linear(c(0.0), -u, order).div(&r)?;
    let family = gegenbauer_family_of_series(lambda, order, &w);
    let mut sum = TruncatedSeries::zero(order);
    let mut q_pow = TruncatedSeries::one(order);
    let mut weight = c(1.0);
    for (n, cn) in family.iter().enumerate() {
        sum = &sum + &(cn * &q_pow).scale(weight);
        let k = n as f64;
        let top: Complex = cs.iter().map(|a| a + k).product();
        let bottom: Complex = ds.iter().map(|d| d + k).product();
        if bottom.norm() == 0.0 {
            return Err(Error::PoleInDenominatorParams(-k));
        }
        weight *= top / bottom;
        q_pow = &q_pow * &q;
    }
    Ok(IdentityPair::new(lhs, &r.pow_real(-2.0 * lambda)? * &sum))
}

// ---------------------------------------------------------------------------
// Second generating function

/// Variant A: `2F1(gamma, 2lambda-gamma; lambda+1/2; (1-R-t)/2) 2F1(...; (1-R+t)/2)`.
/// Variant B: `(1-2xt)^{-gamma} 2F1(gamma/2, gamma/2+1/2; lambda+1/2; 1 - 1/(R+t)^2) 2F1(...; 1 - 1/(R-t)^2)`.
pub fn second_gf(lambda: f64, gamma: f64, x: Complex, order: usize, variant: Variant) -> Result<IdentityPair> {
    let lhs = lhs_second_gf(lambda, gamma, x, order)?;
    let r = r_series(x, order)?;
    let t = TruncatedSeries::variable(order);
    let (a, b, cc) = (gamma, 2.0 * lambda - gamma, lambda + 0.5);
    let rhs = match variant {
        Variant::A => {
            let one_minus_r = (-&r).add_constant(c(1.0));
            let p = (&one_minus_r - &t).scale_real(0.5);
            let m = (&one_minus_r + &t).scale_real(0.5);
            &hyp(a, b, cc, &p)? * &hyp(a, b, cc, &m)?
        }
        Variant::B => {
            let h = gamma / 2.0;
            let one = TruncatedSeries::one(order);
            // 1 - R^2 - t^2 = 2xt - 2t^2
            let base = TruncatedSeries::polynomial(&[c(0.0), x * 2.0, c(-2.0)], order);
            let two_tr = (&t * &r).scale_real(2.0);
            let plus = hyp_inverse_square(h, h + 0.5, cc, &(&r + &t), &one, &(&base - &two_tr))?;
            let minus = hyp_inverse_square(h, h + 0.5, cc, &(&r - &t), &one, &(&base + &two_tr))?;
            let prefactor = linear(c(1.0), x * -2.0, order).pow_real(-gamma)?;
            &(&prefactor * &plus) * &minus
        }
    };
    Ok(IdentityPair::new(lhs, rhs))
}

/// Variant A: `R^{-2lambda} 2F1(gamma, 2lambda-gamma; lambda+1/2; (R-U+ut)/(2R)) 2F1(...; (R-U-ut)/(2R))`.
/// Variant B: `(U^2 - u^2 t^2)^{-gamma} R^{2gamma-2lambda} 2F1(gamma/2, gamma/2+1/2; lambda+1/2; 1 - R^2/(U-ut)^2) 2F1(...; 1 - R^2/(U+ut)^2)`.
pub fn extended_second_gf(
    lambda: f64,
    gamma: f64,
    u: Complex,
    x: Complex,
    order: usize,
    variant: Variant,
) -> Result<IdentityPair> {
    let lhs = lhs_extended_second(lambda, gamma, u, x, order)?;
    let r = r_series(x, order)?;
    let uu = u_series(u, x, order)?;
    let ut = linear(c(0.0), u, order);
    let (a, b, cc) = (gamma, 2.0 * lambda - gamma, lambda + 0.5);
    let rhs = match variant {
        Variant::A => {
            let r_minus_u = &r - &uu;
            let two_r = r.scale_real(2.0);
            let p = (&r_minus_u + &ut).div(&two_r)?;
            let m = (&r_minus_u - &ut).div(&two_r)?;
            &(&r.pow_real(-2.0 * lambda)? * &hyp(a, b, cc, &p)?) * &hyp(a, b, cc, &m)?
        }
        Variant::B => {
            let h = gamma / 2.0;
            let r2 = r_squared(x, order);
            // R^2 - (U -+ ut)^2 = (R^2 - U^2 - u^2 t^2) +- 2utU
            let base = &(&r2 - &u_squared(u, x, order)) - &(&ut * &ut);
            let two_utu = (&ut * &uu).scale_real(2.0);
            let minus = hyp_inverse_square(h, h + 0.5, cc, &(&uu - &ut), &r, &(&base + &two_utu))?;
            let plus = hyp_inverse_square(h, h + 0.5, cc, &(&uu + &ut), &r, &(&base - &two_utu))?;
            let base = &(&uu * &uu) - &(&ut * &ut);
            let prefactor = &base.pow_real(-gamma)? * &r.pow_real(2.0 * gamma - 2.0 * lambda)?;
            &(&prefactor * &minus) * &plus
        }
    };
    Ok(IdentityPair::new(lhs, rhs))
}

/// Legendre-function form of the second generating function, with
/// `lambda = 1/2 - mu`.
///
/// Variant A: weights `(-nu-mu)_n (1+nu-mu)_n / ((1-2mu)_n (1-mu)_n)` against
/// `2^{-2mu} Gamma(1-mu)^2 F_nu^mu(R+t) F_nu^mu(R-t)`.
///
/// Variant B: weights `(1/2-2mu)_n (1/2)_n / ((1-2mu)_n (1-mu)_n)` against
/// `2^{-2mu} Gamma(1-mu)^2 (1-2xt)^{2mu-1/2} F_{-1/4}^mu(2/(R-t)^2 - 1) F_{-1/4}^mu(2/(R+t)^2 - 1)`;
/// `nu` is ignored.
pub fn second_rewrite(nu: f64, mu: f64, x: Complex, order: usize, variant: Variant) -> Result<IdentityPair> {
    check_rewrite_mu(mu)?;
    let lambda = 0.5 - mu;
    check_lambda(lambda)?;
    let r = r_series(x, order)?;
    let t = TruncatedSeries::variable(order);
    let plus = &r + &t;
    let minus = &r - &t;
    let scale = rewrite_scale(mu)?.powi(2);
    let (num, rhs) = match variant {
        Variant::A => {
            let rhs = match reducible_degree(nu, mu) {
                Some(n) => gegenbauer_shift_product(lambda, n, &r_squared(x, order), &t)
                    .scale_real(miller_scale(lambda, n).powi(2)),
                None => (&mathcal_f(nu, mu, &plus)? * &mathcal_f(nu, mu, &minus)?).scale_real(scale),
            };
            ([-nu - mu, 1.0 + nu - mu], rhs)
        }
        Variant::B => {
            // scale * F_{-1/4}^mu(2/w^2 - 1) = 2F1(1/4-mu, 3/4-mu; 1-mu; 1 - 1/w^2)
            let one = TruncatedSeries::one(order);
            let base = TruncatedSeries::polynomial(&[c(0.0), x * 2.0, c(-2.0)], order);
            let two_tr = (&t * &r).scale_real(2.0);
            let f = |w: &TruncatedSeries, gap: &TruncatedSeries| {
                hyp_inverse_square(0.25 - mu, 0.75 - mu, 1.0 - mu, w, &one, gap)
            };
            let prefactor = linear(c(1.0), x * -2.0, order).pow_real(2.0 * mu - 0.5)?;
            let product = &f(&minus, &(&base + &two_tr))? * &f(&plus, &(&base - &two_tr))?;
            ([0.5 - 2.0 * mu, 0.5], &prefactor * &product)
        }
    };
    let w = pochhammer_weights(&num, &[1.0 - 2.0 * mu, 1.0 - mu], order)?;
    Ok(IdentityPair::new(weighted_gf(lambda, x, &w), rhs))
}

// ---------------------------------------------------------------------------
// Algebraicity

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlgebraicityClause {
    /// `lambda` in `Z +- 1/4` with `gamma - lambda` in `Z +- 1/3`.
    Quarter,
    /// `lambda` in `Z +- 1/6` with `gamma - lambda` in `Z +- {1/3, 1/4}`.
    Sixth,
}

/// Which sufficient condition for an algebraic generating function holds at
/// `(lambda, gamma)`; the same conditions cover the first, extended first,
/// second and extended second families.
pub fn algebraicity(lambda: f64, gamma: f64) -> Option<AlgebraicityClause> {
    let pm = |x: f64, t: f64| congruent(x, t) || congruent(x, -t);
    let diff = gamma - lambda;
    if pm(lambda, 0.25) && pm(diff, 1.0 / 3.0) {
        return Some(AlgebraicityClause::Quarter);
    }
    if pm(lambda, 1.0 / 6.0) && (pm(diff, 1.0 / 3.0) || pm(diff, 0.25)) {
        return Some(AlgebraicityClause::Sixth);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gegenbauer::gegenbauer_of_series;
    use crate::gegenbauer::ordinary_gf_by_recurrence;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const ORDER: usize = 16;

    fn cx(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn assert_pair(p: &IdentityPair, order: usize, tol: f64) {
        let d = p.deviation(order);
        assert!(d <= tol, "deviation {d:e} > {tol:e}\nlhs {:?}\nrhs {:?}", p.lhs.coeffs(), p.rhs.coeffs());
    }

    #[test]
    fn first_gf_weights() {
        let s = lhs_first_gf(0.25, -1.0, c(2.0), 8).unwrap();
        assert_eq!(s.coeff(0), c(1.0));
        for n in 2..=8 {
            assert_eq!(s.coeff(n), c(0.0));
        }
        let s = lhs_first_gf(0.25, -1.0 / 12.0, c(2.0), 6).unwrap();
        let cs = gegenbauer_recurrence(0.25, 6, c(2.0));
        for n in 0..=6 {
            let w = pochhammer_real(-1.0 / 12.0, n) / pochhammer_real(0.5, n);
            assert_relative_eq!(s.coeff(n).re, w * cs[n].re, max_relative = 1e-13);
        }
    }

    #[test]
    fn first_gf_variants() {
        for (lambda, gamma, x) in [(0.25, -1.0 / 12.0, 2.0), (1.0 / 6.0, 0.3, 0.7), (2.0, 1.1, 1.5)] {
            for v in [Variant::A, Variant::B] {
                assert_pair(&first_gf(lambda, gamma, c(x), ORDER, v).unwrap(), ORDER, 1e-9);
            }
            let a = rhs_first_gf_a(lambda, gamma, c(x), ORDER).unwrap();
            let b = rhs_first_gf_b(lambda, gamma, c(x), ORDER).unwrap();
            assert!(a.max_mixed_deviation(&b, ORDER) < 1e-9);
        }
    }

    #[test]
    fn first_gf_terminating_rhs_is_gegenbauer() {
        // gamma = -N: R^N 2F1 is a multiple of R^N C_N((1-xt)/R).
        let p = first_gf(0.25, -3.0, c(1.5), 12, Variant::A).unwrap();
        assert_pair(&p, 12, 1e-10);
        let m = miller_identities(0.25, 3, c(1.5), 12, MillerKind::G1).unwrap();
        assert!(p.rhs.max_mixed_deviation(&m.rhs, 12) < 1e-10);
    }

    #[test]
    fn rewrites() {
        for (nu, mu, x) in [(-1.0 / 6.0, 0.25, 2.0), (-0.25, 1.0 / 3.0, 0.4), (0.0, 0.25, 1.5), (1.8, 0.2, 0.6)] {
            assert_pair(&first_rewrite(nu, mu, c(x), 14, Variant::A).unwrap(), 14, 1e-8);
            assert_pair(&first_rewrite(nu, mu, c(x), 14, Variant::B).unwrap(), 14, 1e-8);
        }
        assert_eq!(first_rewrite(0.0, 1.5, c(2.0), 4, Variant::A), Err(Error::InvalidMu(1.5)));
    }

    #[test]
    fn reducible_rewrites_at_large_x() {
        for (nu, mu) in [(1.8, 0.2), (1.75, 0.25), (-2.75, 0.25), (0.0, 0.25)] {
            for x in [2.0, 5.0, 0.6] {
                assert_pair(&first_rewrite(nu, mu, c(x), 16, Variant::A).unwrap(), 16, 1e-10);
                assert_pair(&second_rewrite(nu, mu, c(x), 16, Variant::A).unwrap(), 16, 1e-10);
            }
        }
    }

    #[test]
    fn rewrite_reducible_is_ordinary_scaling() {
        // nu = -mu: weights (0)_n vanish beyond n = 0.
        let p = first_rewrite(-0.3, 0.3, c(2.0), 8, Variant::A).unwrap();
        assert_pair(&p, 8, 1e-12);
        assert_relative_eq!(p.rhs.coeff(0).re, 1.0, epsilon = 1e-13);
        assert!(p.rhs.coeff(3).norm() < 1e-13);
    }

    #[test]
    fn miller() {
        for kind in [MillerKind::G1, MillerKind::G2] {
            let p = miller_identities(0.25, 3, c(1.5), 12, kind).unwrap();
            assert_pair(&p, 12, 1e-9);
        }
        let g2 = miller_identities(0.25, 0, c(1.5), 12, MillerKind::G2).unwrap();
        let ogf = ordinary_gf_by_recurrence(0.25, c(1.5), 12);
        assert!(g2.rhs.max_mixed_deviation(&ogf, 12) < 1e-12);
        let g1 = miller_identities(0.25, 0, c(1.5), 12, MillerKind::G1).unwrap();
        assert_eq!(g1.lhs, TruncatedSeries::one(12));
        assert!(g1.rhs.max_mixed_deviation(&TruncatedSeries::one(12), 12) < 1e-14);
    }

    #[test]
    fn alt() {
        let p = alt_gf(0.5, c(0.3), 10, AltKind::One).unwrap();
        let ogf = ordinary_gf_by_recurrence(0.5, c(0.3), 10);
        assert!(p.lhs.max_mixed_deviation(&ogf, 10) < 1e-14);
        assert_pair(&p, 10, 1e-12);
        assert_pair(&alt_gf(0.25, c(2.0), ORDER, AltKind::Two).unwrap(), ORDER, 1e-9);
        assert_pair(&alt_gf(7.0 / 6.0, c(0.3), ORDER, AltKind::One).unwrap(), ORDER, 1e-9);
    }

    #[test]
    fn extended_first() {
        let u = cx(0.7, 0.2);
        for v in [Variant::A, Variant::B] {
            assert_pair(&extended_first_gf(0.25, -1.0 / 12.0, u, c(2.0), 12, v).unwrap(), 12, 1e-8);
            assert_pair(&extended_first_gf(1.0 / 6.0, 0.4, cx(0.4, 0.0), c(0.6), 12, v).unwrap(), 12, 1e-8);
        }
    }

    #[test]
    fn extended_first_reduces_at_u_one() {
        let e = extended_first_gf(0.25, -1.0 / 12.0, c(1.0), c(2.0), 12, Variant::A).unwrap();
        let f = first_gf(0.25, -1.0 / 12.0, c(2.0), 12, Variant::A).unwrap();
        assert!(e.lhs.max_mixed_deviation(&f.lhs, 12) < 1e-9);
        assert!(e.rhs.max_mixed_deviation(&f.rhs, 12) < 1e-9);
    }

    #[test]
    fn extended_first_at_u_zero() {
        let e = extended_first_gf(0.25, 0.3, c(0.0), c(2.0), 10, Variant::A).unwrap();
        let ogf = ordinary_gf_by_recurrence(0.25, c(2.0), 10);
        assert!(e.lhs.max_mixed_deviation(&ogf, 10) < 1e-13);
        let r = r_series(c(2.0), 10).unwrap().pow_real(-0.5).unwrap();
        assert!(e.rhs.max_mixed_deviation(&r, 10) < 1e-12);
    }

    #[test]
    fn extended_rewrites() {
        for v in [Variant::A, Variant::B] {
            assert_pair(&extended_rewrite(-1.0 / 6.0, 0.25, c(0.5), c(2.0), 12, v).unwrap(), 12, 1e-8);
            let at_one = extended_rewrite(-0.25, 1.0 / 3.0, c(1.0), c(0.4), 12, v).unwrap();
            let base = first_rewrite(-0.25, 1.0 / 3.0, c(0.4), 12, v).unwrap();
            assert!(at_one.rhs.max_mixed_deviation(&base.rhs, 12) < 1e-9);
            assert!(at_one.lhs.max_mixed_deviation(&base.lhs, 12) < 1e-9);
        }
        let cyclic = extended_rewrite(0.0, 0.3, cx(0.7, 0.2), c(1.5), 12, Variant::A).unwrap();
        assert_pair(&cyclic, 12, 1e-8);
    }

    #[test]
    fn extended_miller_identities() {
        for kind in [ExtendedMillerKind::Plus, ExtendedMillerKind::Minus] {
            assert_pair(&extended_miller(1.0 / 6.0, 2, c(0.3), c(1.5), 12, kind).unwrap(), 12, 1e-9);
        }
        let plus = extended_miller(0.25, 3, c(1.0), c(1.5), 12, ExtendedMillerKind::Plus).unwrap();
        let g1 = miller_identities(0.25, 3, c(1.5), 12, MillerKind::G1).unwrap();
        assert!(plus.lhs.max_mixed_deviation(&g1.lhs, 12) < 1e-9);
        assert!(plus.rhs.max_mixed_deviation(&g1.rhs, 12) < 1e-9);
        let minus = extended_miller(0.25, 0, c(1.0), c(1.5), 12, ExtendedMillerKind::Minus).unwrap();
        let ogf = ordinary_gf_by_recurrence(0.25, c(1.5), 12);
        assert!(minus.rhs.max_mixed_deviation(&ogf, 12) < 1e-12);
    }

    #[test]
    fn lemma() {
        let (lambda, gamma) = (0.25, 0.3);
        let p = lemma_key_check(lambda, &[c(gamma), c(2.0 * lambda - gamma)], &[c(2.0 * lambda), c(lambda + 0.5)], c(0.6), c(1.5), 10).unwrap();
        assert_pair(&p, 10, 1e-8);
        let p = lemma_key_check(lambda, &[c(2.0 * lambda - gamma)], &[c(2.0 * lambda)], c(0.6), c(1.5), 10).unwrap();
        assert_pair(&p, 10, 1e-8);
        let e = extended_first_gf(lambda, gamma, c(0.6), c(1.5), 10, Variant::A).unwrap();
        assert!(p.lhs.max_mixed_deviation(&e.lhs, 10) < 1e-13);
        let zero = lemma_key_check(lambda, &[c(0.7)], &[c(1.3)], c(0.0), c(1.5), 10).unwrap();
        let ogf = ordinary_gf_by_recurrence(lambda, c(1.5), 10);
        assert!(zero.lhs.max_mixed_deviation(&ogf, 10) < 1e-15);
        assert_pair(&zero, 10, 1e-12);
    }

    #[test]
    fn second() {
        for v in [Variant::A, Variant::B] {
            assert_pair(&second_gf(0.5, -2.0, c(0.6), 12, v).unwrap(), 12, 1e-9);
            assert_pair(&second_gf(1.0 / 6.0, 0.5, c(0.4), 14, v).unwrap(), 14, 1e-8);
            assert_pair(&second_gf(0.25, 0.3, c(1.5), 14, v).unwrap(), 14, 1e-8);
        }
    }

    #[test]
    fn second_terminating_is_product_of_gegenbauers() {
        let p = second_gf(0.5, -2.0, c(0.6), 10, Variant::A).unwrap();
        let r = r_series(c(0.6), 10).unwrap();
        let t = TruncatedSeries::variable(10);
        let prod = &gegenbauer_of_series(0.5, 2, &(&r + &t)) * &gegenbauer_of_series(0.5, 2, &(&r - &t));
        let k = p.rhs.coeff(0) / prod.coeff(0);
        assert!(p.rhs.max_mixed_deviation(&prod.scale(k), 10) < 1e-12);
    }

    #[test]
    fn extended_second() {
        for v in [Variant::A, Variant::B] {
            assert_pair(&extended_second_gf(0.5, 0.3, c(1.0), c(0.6), 12, v).unwrap(), 12, 1e-8);
            assert_pair(&extended_second_gf(0.25, 0.25 + 1.0 / 3.0, c(0.4), c(1.5), 12, v).unwrap(), 12, 1e-8);
            let zero = extended_second_gf(0.25, 0.3, c(0.0), c(1.5), 10, v).unwrap();
            let ogf = ordinary_gf_by_recurrence(0.25, c(1.5), 10);
            assert!(zero.rhs.max_mixed_deviation(&ogf, 10) < 1e-12);
        }
    }

    #[test]
    fn second_rewrites() {
        for v in [Variant::A, Variant::B] {
            assert_pair(&second_rewrite(-1.0 / 6.0, 0.25, c(0.5), 12, v).unwrap(), 12, 1e-8);
            assert_pair(&second_rewrite(-0.2 + 2.0, 0.2, c(1.5), 12, v).unwrap(), 12, 1e-8);
        }
        let a = second_rewrite(-1.0 / 6.0, 0.25, c(0.5), 12, Variant::A).unwrap();
        let b = second_rewrite(-5.0 / 6.0, 0.25, c(0.5), 12, Variant::A).unwrap();
        assert!(a.rhs.max_mixed_deviation(&b.rhs, 12) < 1e-12);
    }

    #[test]
    fn algebraicity_examples() {
        assert_eq!(algebraicity(0.25, -1.0 / 12.0), Some(AlgebraicityClause::Quarter));
        assert_eq!(algebraicity(1.0 / 6.0, -1.0 / 12.0), Some(AlgebraicityClause::Sixth));
        assert_eq!(algebraicity(0.5, 0.3), None);
    }

    proptest! {
        #[test]
        fn algebraicity_is_shift_invariant(k in -3i32..4, m in -3i32..4, pick in 0usize..4) {
            let (lambda, gamma) = [(0.25, -1.0 / 12.0), (1.0 / 6.0, -1.0 / 12.0), (-0.25, 1.0 / 12.0), (1.0 / 6.0, 0.5)][pick];
            let base = algebraicity(lambda, gamma);
            prop_assert!(base.is_some());
            let shifted = algebraicity(lambda + k as f64, gamma + (k + m) as f64);
            prop_assert_eq!(base, shifted);
        }

        #[test]
        fn first_gf_variants_agree(lambda in 0.1f64..2.0, gamma in -1.5f64..1.5, x in 1.1f64..3.0) {
            let a = rhs_first_gf_a(lambda, gamma, c(x), 10).unwrap();
            let b = rhs_first_gf_b(lambda, gamma, c(x), 10).unwrap();
            prop_assert!(a.max_mixed_deviation(&b, 10) < 1e-8);
        }
    }
}
