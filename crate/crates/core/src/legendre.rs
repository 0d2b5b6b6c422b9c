//! Associated Legendre functions `P_nu^mu` and Ferrers functions.
//!
//! The hypergeometric definition
//! `P_nu^mu(z) = 2^mu / Gamma(1-mu) (z^2-1)^{-mu/2} 2F1(-nu-mu, 1+nu-mu; 1-mu; (1-z)/2)`
//! serves as the oracle. The Ferrers branch replaces `z^2 - 1` by `1 - z^2`.
//!
//! Closed forms are provided for the reducible (Gegenbauer), quasi-cyclic,
//! quasi-dihedral, octahedral and first tetrahedral cases. The minus-sign
//! brackets of the octahedral and tetrahedral functions vanish like `xi^2`;
//! they are evaluated through the conjugate product so no digits are lost.

use crate::error::{Error, Result};
use crate::gegenbauer::GegenbauerSpec;
use crate::hypergeo::{gamma_fn, gauss_2f1_of_series, gauss_2f1_pfaff, DEFAULT_TOLERANCE};
use crate::series::{principal_pow, Complex, TruncatedSeries};

/// Tolerance for deciding that a parameter lies on a lattice.
pub const MEMBERSHIP_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `P_nu^mu`, analytic off `(-inf, 1]`.
    Legendre,
    /// Ferrers function, analytic off `(-inf, -1] U [1, inf)`.
    Ferrers,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LegendreIndex {
    pub nu: f64,
    pub mu: f64,
    pub branch: Branch,
}

impl LegendreIndex {
    pub fn new(nu: f64, mu: f64, branch: Branch) -> Self {
        Self { nu, mu, branch }
    }

    pub fn legendre(nu: f64, mu: f64) -> Self {
        Self::new(nu, mu, Branch::Legendre)
    }

    pub fn ferrers(nu: f64, mu: f64) -> Self {
        Self::new(nu, mu, Branch::Ferrers)
    }

    /// The same function indexed by degree `-nu-1`.
    pub fn reflected(&self) -> Self {
        Self {
            nu: -self.nu - 1.0,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlgebraicCase {
    Reducible,
    QuasiCyclic,
    QuasiDihedral,
    Octahedral,
    TetrahedralA,
    TetrahedralB,
    Icosahedral,
    Generic,
}

/// All cases that match a parameter pair, in precedence order.
#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub matches: Vec<AlgebraicCase>,
}

impl Classification {
    /// The highest-precedence evaluable case; icosahedral pairs report
    /// `Generic` and carry the flag in [`Classification::is_icosahedral`].
    pub fn tag(&self) -> AlgebraicCase {
        self.matches
            .iter()
            .copied()
            .find(|c| *c != AlgebraicCase::Icosahedral)
            .unwrap_or(AlgebraicCase::Generic)
    }

    pub fn is_icosahedral(&self) -> bool {
        self.matches.contains(&AlgebraicCase::Icosahedral)
    }
}

/// `x` is congruent to `target` modulo the integers.
pub fn congruent(x: f64, target: f64) -> bool {
    let d = x - target;
    (d - d.round()).abs() < MEMBERSHIP_TOLERANCE
}

fn congruent_pm(x: f64, target: f64) -> bool {
    congruent(x, target) || congruent(x, -target)
}

fn is_non_negative_integer(x: f64) -> bool {
    x > -MEMBERSHIP_TOLERANCE && congruent(x, 0.0)
}

/// Distance from `x` to the nearest integer.
fn fold_unit(x: f64) -> f64 {
    (x - x.round()).abs()
}

fn icosahedral(nu: f64, mu: f64) -> bool {
    let m = fold_unit(mu);
    let l = (2.0 * nu + 1.0).rem_euclid(2.0);
    let l = l.min(2.0 - l);
    const PAIRS: [(f64, f64); 4] = [
        (1.0 / 3.0, 2.0 / 5.0),
        (1.0 / 5.0, 2.0 / 3.0),
        (2.0 / 5.0, 2.0 / 5.0),
        (1.0 / 5.0, 4.0 / 5.0),
    ];
    PAIRS
        .iter()
        .any(|(a, b)| (m - a).abs() < MEMBERSHIP_TOLERANCE && (l - b).abs() < MEMBERSHIP_TOLERANCE)
}

/// Classifies `(nu, mu)` by the case that makes `P_nu^mu` elementary or
/// algebraic. Invariant under `nu -> -nu-1` and integer shifts of the
/// lattice cases.
pub fn classify(nu: f64, mu: f64) -> Classification {
    let mut matches = Vec::new();
    if is_non_negative_integer(nu + mu) || is_non_negative_integer(mu - nu - 1.0) {
        matches.push(AlgebraicCase::Reducible);
    }
    if congruent(nu, 0.0) {
        matches.push(AlgebraicCase::QuasiCyclic);
    }
    if congruent(mu, 0.5) {
        matches.push(AlgebraicCase::QuasiDihedral);
    }
    if congruent_pm(nu, 1.0 / 6.0) && congruent_pm(mu, 0.25) {
        matches.push(AlgebraicCase::Octahedral);
    }
    if congruent_pm(nu, 0.25) && congruent_pm(mu, 1.0 / 3.0) {
        matches.push(AlgebraicCase::TetrahedralA);
    }
    if congruent_pm(nu, 1.0 / 6.0) && congruent_pm(mu, 1.0 / 3.0) {
        matches.push(AlgebraicCase::TetrahedralB);
    }
    if icosahedral(nu, mu) {
        matches.push(AlgebraicCase::Icosahedral);
    }
    if matches.is_empty() {
        matches.push(AlgebraicCase::Generic);
    }
    Classification { matches }
}

fn check_mu(mu: f64) -> Result<()> {
    if mu >= 1.0 - MEMBERSHIP_TOLERANCE && congruent(mu, 0.0) {
        return Err(Error::OrderIsPositiveInteger(mu));
    }
    Ok(())
}

fn check_argument(branch: Branch, z: Complex) -> Result<()> {
    if z.im != 0.0 {
        return Ok(());
    }
    let bad = match branch {
        Branch::Legendre => z.re <= 1.0,
        Branch::Ferrers => z.re.abs() >= 1.0,
    };
    if bad {
        return Err(Error::ArgumentOutOfDomain(format!(
            "z = {} lies on the {branch:?} cut",
            z.re
        )));
    }
    Ok(())
}

/// `(z^2-1)^{-mu/2}` or `(1-z^2)^{-mu/2}`, split into principal factors so
/// the cut of the product matches the function.
fn radical(branch: Branch, z: Complex, mu: f64) -> Complex {
    let e = Complex::new(-mu / 2.0, 0.0);
    let one = Complex::new(1.0, 0.0);
    match branch {
        Branch::Legendre => principal_pow(z + one, e) * principal_pow(z - one, e),
        Branch::Ferrers => principal_pow(one + z, e) * principal_pow(one - z, e),
    }
}

/// `2^mu / Gamma(1-mu)`.
pub fn normalization(mu: f64) -> Result<f64> {
    Ok(2f64.powf(mu) / gamma_fn(1.0 - mu)?)
}

/// `P_nu^mu(z)` or its Ferrers analogue from the hypergeometric definition.
///
/// Arguments with `(1-z)/2` beyond the convergence guard are reached through
/// the Pfaff transformation when that helps (real `z > 1`).
pub fn legendre_p_hypergeometric(idx: &LegendreIndex, z: Complex) -> Result<Complex> {
    check_mu(idx.mu)?;
    check_argument(idx.branch, z)?;
    let r = |x: f64| Complex::new(x, 0.0);
    let f = gauss_2f1_pfaff(
        r(-idx.nu - idx.mu),
        r(1.0 + idx.nu - idx.mu),
        r(1.0 - idx.mu),
        (1.0 - z) / 2.0,
        DEFAULT_TOLERANCE,
    )?;
    Ok(f * radical(idx.branch, z, idx.mu) * normalization(idx.mu)?)
}

/// Real-argument form of [`legendre_p_hypergeometric`].
pub fn legendre_p_real(idx: &LegendreIndex, z: f64) -> Result<f64> {
    Ok(legendre_p_hypergeometric(idx, Complex::new(z, 0.0))?.re)
}

/// `P_{-mu+N}^mu(z) = 2^mu/Gamma(1-mu) N!/(1-2mu)_N (z^2-1)^{-mu/2} C_N^{1/2-mu}(z)`.
pub fn reducible_case(mu: f64, n: usize, z: Complex, branch: Branch) -> Result<Complex> {
    if mu > 0.0 && congruent(2.0 * mu, 0.0) {
        return Err(Error::InvalidMu(mu));
    }
    check_argument(branch, z)?;
    let weight = (0..n).fold(1.0, |acc, k| acc * (k as f64 + 1.0) / (1.0 - 2.0 * mu + k as f64));
    let c = GegenbauerSpec::new(0.5 - mu, n).eval(z);
    Ok(c * radical(branch, z, mu) * (normalization(mu)? * weight))
}

/// `P_0^mu(coth xi)` (Legendre) or the Ferrers value at `tanh xi`; both equal
/// `e^{mu xi} / Gamma(1-mu)`.
pub fn cyclic_case(mu: f64, xi: f64, branch: Branch) -> Result<f64> {
    if branch == Branch::Legendre && xi <= 0.0 {
        return Err(Error::ArgumentOutOfDomain(format!("xi = {xi} must be positive")));
    }
    Ok((mu * xi).exp() / gamma_fn(1.0 - mu)?)
}

/// The quasi-cyclic value written in `z`: `[(z+1)/(z-1)]^{mu/2} / Gamma(1-mu)`,
/// with `1 - z` in place of `z - 1` on the Ferrers branch.
pub fn cyclic_case_z(mu: f64, z: f64, branch: Branch) -> Result<f64> {
    check_argument(branch, Complex::new(z, 0.0))?;
    let ratio = match branch {
        Branch::Legendre => (z + 1.0) / (z - 1.0),
        Branch::Ferrers => (1.0 + z) / (1.0 - z),
    };
    Ok(ratio.powf(mu / 2.0) / gamma_fn(1.0 - mu)?)
}

/// `P_nu^{1/2}(cosh xi) = sqrt(2/pi) cosh((nu+1/2) xi) / sqrt(sinh xi)`, and on
/// the Ferrers branch `sqrt(2/pi) cos((nu+1/2) theta) / sqrt(sin theta)` at
/// `cos theta`.
pub fn dihedral_case(nu: f64, arg: f64, branch: Branch) -> Result<f64> {
    let c = (2.0 / std::f64::consts::PI).sqrt();
    match branch {
        Branch::Legendre => {
            if arg <= 0.0 {
                return Err(Error::ArgumentOutOfDomain(format!("xi = {arg} must be positive")));
            }
            Ok(c * ((nu + 0.5) * arg).cosh() / arg.sinh().sqrt())
        }
        Branch::Ferrers => {
            if arg <= 0.0 || arg >= std::f64::consts::PI {
                return Err(Error::ArgumentOutOfDomain(format!("theta = {arg} outside (0, pi)")));
            }
            Ok(c * ((nu + 0.5) * arg).cos() / arg.sin().sqrt())
        }
    }
}

/// `A + B` or `B - A` for nonnegative `A`, `B`, with `B^2 - A^2 = diff`
/// supplied in closed form for the difference.
fn bracket(sign: Sign, a: f64, b: f64, diff: f64) -> f64 {
    match sign {
        Sign::Plus => a + b,
        Sign::Minus => diff / (a + b),
    }
}

/// `+-cosh(xi/3) + sqrt(sinh xi / (3 sinh(xi/3)))`, shared by `h` and `f`.
fn hyperbolic_bracket(sign: Sign, xi: f64) -> f64 {
    let (s, c) = ((xi / 3.0).sinh(), (xi / 3.0).cosh());
    let b = (1.0 + 4.0 / 3.0 * s * s).sqrt();
    bracket(sign, c, b, s * s / 3.0)
}

/// `h_+-(cosh xi)` for `xi > 0`.
pub fn octahedral_h(sign: Sign, xi: f64) -> f64 {
    (hyperbolic_bracket(sign, xi) / xi.sinh()).powf(0.25)
}

/// `k_+-(cos theta) = {(sin theta)^{-1} [cos(theta/3) +- sqrt(sin theta / (3 sin(theta/3)))]}^{1/4}`
/// for `theta` in `(0, pi)`.
pub fn octahedral_k(sign: Sign, theta: f64) -> f64 {
    let (s, c) = ((theta / 3.0).sin(), (theta / 3.0).cos());
    let b = (1.0 - 4.0 / 3.0 * s * s).sqrt();
    let inner = match sign {
        Sign::Plus => c + b,
        Sign::Minus => (s * s / 3.0) / (c + b),
    };
    (inner / theta.sin()).powf(0.25)
}

fn octahedral_normalization(sign_mu: Sign) -> Result<f64> {
    let s = sign_mu.value();
    Ok(3f64.powf(0.375 * (1.0 - s)) / gamma_fn(1.0 - s * 0.25)?)
}

/// `P_{-1/6}^{+-1/4}` at `cosh xi` (Legendre) or `cos theta` (Ferrers).
pub fn octahedral_p(sign_mu: Sign, arg: f64, branch: Branch) -> Result<f64> {
    let norm = octahedral_normalization(sign_mu)?;
    match branch {
        Branch::Legendre => {
            if arg <= 0.0 {
                return Err(Error::ArgumentOutOfDomain(format!("xi = {arg} must be positive")));
            }
            Ok(norm * octahedral_h(sign_mu, arg))
        }
        Branch::Ferrers => {
            if arg <= 0.0 || arg >= std::f64::consts::PI {
                return Err(Error::ArgumentOutOfDomain(format!("theta = {arg} outside (0, pi)")));
            }
            Ok(norm * octahedral_k(sign_mu, arg))
        }
    }
}

/// `f_+-(coth xi)` for `xi > 0`.
pub fn tetrahedral_f(sign: Sign, xi: f64) -> f64 {
    (xi.sinh() * hyperbolic_bracket(sign, xi)).powf(0.25)
}

/// `g_+-(tanh xi) = {(cosh xi)[+-sinh(xi/3) + sqrt(cosh xi / (3 cosh(xi/3)))]}^{1/4}`
/// for real `xi`.
pub fn tetrahedral_g(sign: Sign, xi: f64) -> f64 {
    let (s, c) = ((xi / 3.0).sinh(), (xi / 3.0).cosh());
    let b = (4.0 / 3.0 * c * c - 1.0).sqrt();
    let a = sign.value() * s;
    let inner = if a >= 0.0 { a + b } else { (c * c / 3.0) / (b - a) };
    (xi.cosh() * inner).powf(0.25)
}

/// `P_{-1/4}^{+-1/3}` at `coth xi` (Legendre, `xi > 0`) or `tanh xi`
/// (Ferrers, any real `xi`).
pub fn tetrahedral_p(sign_mu: Sign, xi: f64, branch: Branch) -> Result<f64> {
    let s = sign_mu.value();
    let norm = 2f64.powf(0.5 - 0.75 * s) * 3f64.powf(-0.375) / gamma_fn(1.0 - s / 3.0)?;
    let r3 = 3f64.sqrt();
    let (cp, cm) = ((r3 + s).sqrt(), (r3 - s).sqrt());
    match branch {
        Branch::Legendre => {
            if xi <= 0.0 {
                return Err(Error::ArgumentOutOfDomain(format!("xi = {xi} must be positive")));
            }
            Ok(norm * (cp * tetrahedral_f(Sign::Plus, xi) + s * cm * tetrahedral_f(Sign::Minus, xi)))
        }
        Branch::Ferrers => {
            Ok(norm * (s * cp * tetrahedral_g(Sign::Plus, xi) + cm * tetrahedral_g(Sign::Minus, xi)))
        }
    }
}

fn near(x: f64, target: f64) -> bool {
    (x - target).abs() < MEMBERSHIP_TOLERANCE
}

fn sign_of(x: f64) -> Sign {
    if x > 0.0 {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Evaluates `P_nu^mu(z)` at real `z` through whichever closed form covers
/// `(nu, mu)`, up to the degree reflection `nu -> -nu-1`.
///
/// Covered: `nu = -mu + N`, `nu = 0`, `mu = 1/2`, `(-1/6, +-1/4)` and
/// `(-1/4, +-1/3)`. Anything else is [`Error::NotClosedForm`].
pub fn closed_form(idx: &LegendreIndex, z: f64) -> Result<f64> {
    check_argument(idx.branch, Complex::new(z, 0.0))?;
    let (nu, mu, branch) = (idx.nu, idx.mu, idx.branch);
    let degree_is = |d: f64| near(nu, d) || near(nu, -d - 1.0);
    let as_angle = || match branch {
        Branch::Legendre => z.acosh(),
        Branch::Ferrers => z.acos(),
    };
    for degree in [nu, -nu - 1.0] {
        if is_non_negative_integer(degree + mu) && !(mu > 0.0 && congruent(2.0 * mu, 0.0)) {
            let n = (degree + mu).round() as usize;
            return Ok(reducible_case(mu, n, Complex::new(z, 0.0), branch)?.re);
        }
    }
    if degree_is(0.0) {
        return cyclic_case_z(mu, z, branch);
    }
    if near(mu, 0.5) {
        return dihedral_case(nu, as_angle(), branch);
    }
    if degree_is(-1.0 / 6.0) && near(mu.abs(), 0.25) {
        return octahedral_p(sign_of(mu), as_angle(), branch);
    }
    if degree_is(-0.25) && near(mu.abs(), 1.0 / 3.0) {
        let xi = match branch {
            Branch::Legendre => (1.0 / z).atanh(),
            Branch::Ferrers => z.atanh(),
        };
        return tetrahedral_p(sign_of(mu), xi, branch);
    }
    Err(Error::NotClosedForm { nu, mu })
}

/// `F_nu^mu(z) = (z^2-1)^{mu/2} P_nu^mu(z)`, the part of the Legendre function
/// that is analytic at `z = 1`, applied to a series with constant term 1.
pub fn mathcal_f(nu: f64, mu: f64, z: &TruncatedSeries) -> Result<TruncatedSeries> {
    check_mu(mu)?;
    let inner = z.add_constant(Complex::new(-1.0, 0.0)).scale_real(-0.5);
    if !inner.vanishes_at_origin() {
        return Err(Error::NonvanishingInner(inner.constant_term().norm()));
    }
    let f = gauss_2f1_of_series(-nu - mu, 1.0 + nu - mu, 1.0 - mu, &inner)?;
    Ok(f.scale_real(normalization(mu)?))
}

/// Scalar `F_nu^mu(z) = 2^mu/Gamma(1-mu) 2F1(-nu-mu, 1+nu-mu; 1-mu; (1-z)/2)`.
pub fn mathcal_f_scalar(nu: f64, mu: f64, z: Complex) -> Result<Complex> {
    check_mu(mu)?;
    let r = |x: f64| Complex::new(x, 0.0);
    let f = gauss_2f1_pfaff(r(-nu - mu), r(1.0 + nu - mu), r(1.0 - mu), (1.0 - z) / 2.0, DEFAULT_TOLERANCE)?;
    Ok(f * normalization(mu)?)
}
