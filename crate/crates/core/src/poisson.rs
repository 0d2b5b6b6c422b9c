//! Poisson kernel and companion for Gegenbauer polynomials, complete elliptic
//! integrals, and exponent-difference bookkeeping for Gauss equations.
//!
//! With `x = cos θ`, `y = cos φ` the kernel is
//!
//! ```text
//! Σ ((λ+n)/λ) (n!/(2λ)_n) C_n(x) C_n(y) t^n
//!   = (1-t²) / D^{λ+1} · 2F1(λ, λ+1; 2λ | z̃),   D = 1 - 2t cos(θ-φ) + t²
//! ```
//!
//! and the companion drops the factor `(λ+n)/λ`. Each has a second closed
//! form in the argument `z = [z̃/(2-z̃)]²`.

use std::collections::{BTreeSet, VecDeque};
use std::f64::consts::PI;

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::gegenbauer::{check_lambda, gegenbauer_recurrence};
use crate::hypergeo::{gamma_fn, gauss_2f1_real, pfq_of_series_extended};
use crate::series::extended::DdComplex;
use crate::series::{Complex, TruncatedSeries};

const AGM_MAX_STEPS: usize = 64;

/// Tolerance of the internal `z = [z̃/(2-z̃)]²` consistency assertion.
pub const ARGUMENT_RELATION_TOLERANCE: f64 = 1e-12;

fn check_parameter(m: f64) -> Result<()> {
    if !(0.0..1.0).contains(&m) || m.is_nan() {
        return Err(Error::OutOfRange(m));
    }
    Ok(())
}

/// Runs the AGM on `(1, sqrt(1-m))`, returning the mean and
/// `Σ 2^{n-1} c_n²`.
fn agm(m: f64) -> (f64, f64) {
    let mut a = 1.0;
    let mut b = (1.0 - m).sqrt();
    let mut weighted = 0.5 * m;
    let mut power = 0.5;
    for _ in 0..AGM_MAX_STEPS {
        if (a - b).abs() <= f64::EPSILON * a {
            break;
        }
        let c = 0.5 * (a - b);
        let next_a = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next_a;
        power *= 2.0;
        weighted += power * c * c;
    }
    (a, weighted)
}

/// Complete elliptic integral of the first kind in the parameter convention,
/// `K(m) = ∫_0^{π/2} (1 - m sin²θ)^{-1/2} dθ`.
pub fn elliptic_k(m: f64) -> Result<f64> {
    check_parameter(m)?;
    Ok(PI / (2.0 * agm(m).0))
}

/// Complete elliptic integral of the second kind,
/// `E(m) = ∫_0^{π/2} (1 - m sin²θ)^{1/2} dθ`.
pub fn elliptic_e(m: f64) -> Result<f64> {
    check_parameter(m)?;
    let (mean, weighted) = agm(m);
    Ok(PI / (2.0 * mean) * (1.0 - weighted))
}

/// Angles, parameter and expansion variable of a kernel evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelArgs {
    pub lambda: f64,
    pub theta: f64,
    pub phi: f64,
    pub t: f64,
}

impl KernelArgs {
    pub fn new(lambda: f64, theta: f64, phi: f64, t: f64) -> Result<Self> {
        check_lambda(lambda)?;
        for (name, angle) in [("theta", theta), ("phi", phi)] {
            if !(angle > 0.0 && angle < PI) {
                return Err(Error::ArgumentOutOfDomain(format!("{name} = {angle} is not in (0, pi)")));
            }
        }
        if !(t.abs() < 1.0) {
            return Err(Error::ArgumentOutOfDomain(format!("|t| = {} is not below 1", t.abs())));
        }
        Ok(Self { lambda, theta, phi, t })
    }

    pub fn x(&self) -> f64 {
        self.theta.cos()
    }

    pub fn y(&self) -> f64 {
        self.phi.cos()
    }

    /// The same point with `θ` and `φ` exchanged.
    pub fn swapped(&self) -> Self {
        Self { theta: self.phi, phi: self.theta, ..*self }
    }

    fn d_tilde(&self) -> f64 {
        1.0 - 2.0 * self.t * (self.theta - self.phi).cos() + self.t * self.t
    }

    fn d_z(&self) -> f64 {
        1.0 - 2.0 * self.t * self.x() * self.y() + self.t * self.t
    }
}

/// Which of the two closed forms to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelVariant {
    /// Argument `z̃`, denominator built from `cos(θ-φ)`.
    Tilde,
    /// Argument `z`, denominator built from `cos θ cos φ`.
    Z,
}

/// Kernel (with the `(λ+n)/λ` weight) or its companion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelKind {
    Kernel,
    Companion,
}

/// `(z̃, z)` for the given point. Panics in debug builds if the two fail the
/// relation `z = [z̃/(2-z̃)]²`.
pub fn kernel_arguments(args: &KernelArgs) -> (f64, f64) {
    let s = args.theta.sin() * args.phi.sin();
    let z_tilde = -4.0 * args.t * s / args.d_tilde();
    let half = -2.0 * args.t * s / args.d_z();
    let z = half * half;
    let related = (z_tilde / (2.0 - z_tilde)).powi(2);
    debug_assert!(
        (z - related).abs() <= ARGUMENT_RELATION_TOLERANCE * z.abs().max(1.0),
        "z = {z}, [z~/(2-z~)]^2 = {related}"
    );
    (z_tilde, z)
}

/// Gauss parameters `(a, b, c)` of the hypergeometric factor.
pub fn kernel_parameters(lambda: f64, kind: KernelKind, variant: KernelVariant) -> (f64, f64, f64) {
    match (kind, variant) {
        (KernelKind::Kernel, KernelVariant::Tilde) => (lambda, lambda + 1.0, 2.0 * lambda),
        (KernelKind::Kernel, KernelVariant::Z) => ((lambda + 1.0) / 2.0, (lambda + 2.0) / 2.0, lambda + 0.5),
        (KernelKind::Companion, KernelVariant::Tilde) => (lambda, lambda, 2.0 * lambda),
        (KernelKind::Companion, KernelVariant::Z) => (lambda / 2.0, (lambda + 1.0) / 2.0, lambda + 0.5),
    }
}

/// [`kernel_parameters`] without rounding. The composed series is sensitive to
/// the exact relations between the parameters: perturbing one by `1e-15`
/// moves the coefficient of `t^12` by about `1e-10`.
fn kernel_parameters_extended(lambda: f64, kind: KernelKind, variant: KernelVariant) -> (DdComplex, DdComplex, DdComplex) {
    let l = DdComplex::from(lambda);
    let k = |v: f64| DdComplex::from(v);
    match (kind, variant) {
        (KernelKind::Kernel, KernelVariant::Tilde) => (l, l + k(1.0), l.scale(2.0)),
        (KernelKind::Kernel, KernelVariant::Z) => ((l + k(1.0)).scale(0.5), (l + k(2.0)).scale(0.5), l + k(0.5)),
        (KernelKind::Companion, KernelVariant::Tilde) => (l, l, l.scale(2.0)),
        (KernelKind::Companion, KernelVariant::Z) => (l.scale(0.5), (l + k(1.0)).scale(0.5), l + k(0.5)),
    }
}

/// Kernel or companion through the chosen closed form.
pub fn closed_form_value(args: &KernelArgs, kind: KernelKind, variant: KernelVariant) -> Result<f64> {
    let (z_tilde, z) = kernel_arguments(args);
    let (a, b, c) = kernel_parameters(args.lambda, kind, variant);
    let (d, arg) = match variant {
        KernelVariant::Tilde => (args.d_tilde(), z_tilde),
        KernelVariant::Z => (args.d_z(), z),
    };
    let f = gauss_2f1_real(a, b, c, arg)?;
    Ok(match kind {
        KernelKind::Kernel => (1.0 - args.t * args.t) * d.powf(-(args.lambda + 1.0)) * f,
        KernelKind::Companion => d.powf(-args.lambda) * f,
    })
}

/// Poisson kernel for `{C_n^λ}` at the given point.
pub fn poisson_kernel(args: &KernelArgs, variant: KernelVariant) -> Result<f64> {
    closed_form_value(args, KernelKind::Kernel, variant)
}

/// Companion of the Poisson kernel (no `(λ+n)/λ` weight).
pub fn companion_kernel(args: &KernelArgs, variant: KernelVariant) -> Result<f64> {
    closed_form_value(args, KernelKind::Companion, variant)
}

/// Taylor series in `t` of a closed form, with `x = cos θ`, `y = cos φ` in
/// `[-1, 1]`.
pub fn kernel_series(
    lambda: f64,
    x: f64,
    y: f64,
    kind: KernelKind,
    variant: KernelVariant,
    order: usize,
) -> Result<TruncatedSeries> {
    check_lambda(lambda)?;
    for v in [x, y] {
        if !(-1.0..=1.0).contains(&v) {
            return Err(Error::ArgumentOutOfDomain(format!("cosine {v} is not in [-1, 1]")));
        }
    }
    let s = (1.0 - x * x).sqrt() * (1.0 - y * y).sqrt();
    let c = |v: f64| Complex::new(v, 0.0);
    let (d, arg) = match variant {
        KernelVariant::Tilde => {
            let d = TruncatedSeries::polynomial(&[c(1.0), c(-2.0 * (x * y + s)), c(1.0)], order);
            let num = TruncatedSeries::polynomial(&[c(0.0), c(-4.0 * s)], order);
            let arg = num.div(&d)?;
            (d, arg)
        }
        KernelVariant::Z => {
            let d = TruncatedSeries::polynomial(&[c(1.0), c(-2.0 * x * y), c(1.0)], order);
            let half = TruncatedSeries::polynomial(&[c(0.0), c(-2.0 * s)], order).div(&d)?;
            let arg = &half * &half;
            (d, arg)
        }
    };
    let (a, b, cc) = kernel_parameters_extended(lambda, kind, variant);
    let f = pfq_of_series_extended(&[a, b], &[cc], None, &arg)?;
    Ok(match kind {
        KernelKind::Kernel => {
            let one_minus_t2 = TruncatedSeries::polynomial(&[c(1.0), c(0.0), c(-1.0)], order);
            &(&one_minus_t2 * &d.pow_real(-(lambda + 1.0))?) * &f
        }
        KernelKind::Companion => &d.pow_real(-lambda)? * &f,
    })
}

/// Bilinear coefficients `w_n C_n(x) C_n(y)` for `n = 0..=n_max`.
pub fn bilinear_coefficients(lambda: f64, x: f64, y: f64, n_max: usize, kind: KernelKind) -> Result<Vec<f64>> {
    check_lambda(lambda)?;
    let cx = gegenbauer_recurrence(lambda, n_max, Complex::new(x, 0.0));
    let cy = gegenbauer_recurrence(lambda, n_max, Complex::new(y, 0.0));
    let mut weight = 1.0;
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        if n > 0 {
            weight *= n as f64 / (2.0 * lambda + n as f64 - 1.0);
        }
        let factor = match kind {
            KernelKind::Kernel => (lambda + n as f64) / lambda,
            KernelKind::Companion => 1.0,
        };
        out.push(factor * weight * cx[n].re * cy[n].re);
    }
    Ok(out)
}

/// A truncated bilinear sum with an estimate of the discarded tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialSum {
    pub value: f64,
    pub tail_bound: f64,
    /// `Σ |terms|`, the scale of the rounding error.
    pub absolute_sum: f64,
}

impl PartialSum {
    /// Acceptance radius: the tail bound plus a rounding allowance.
    pub fn tolerance(&self) -> f64 {
        self.tail_bound + 1e-13 * (1.0 + self.absolute_sum)
    }
}

/// `Σ_{n ≤ n_max} w_n C_n(x) C_n(y) t^n` for the point in `args`.
///
/// The tail is bounded by assuming the coefficients stay below four times
/// their largest magnitude over the last sixteen terms and decay with `|t|`.
pub fn bilinear_partial_sum(args: &KernelArgs, n_max: usize, kind: KernelKind) -> Result<PartialSum> {
    let coeffs = bilinear_coefficients(args.lambda, args.x(), args.y(), n_max, kind)?;
    let mut value = 0.0;
    let mut absolute_sum = 0.0;
    let mut power = 1.0;
    for c in &coeffs {
        value += c * power;
        absolute_sum += (c * power).abs();
        power *= args.t;
    }
    let envelope = coeffs[n_max.saturating_sub(15)..]
        .iter()
        .fold(0.0f64, |acc, c| acc.max(c.abs()));
    let r = args.t.abs();
    let tail_bound = 4.0 * envelope * r.powi(n_max as i32 + 1) / (1.0 - r);
    Ok(PartialSum { value, tail_bound, absolute_sum })
}

/// Deviations found by [`operator_relation_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorCheck {
    /// Companion closed form, mapped `c_n -> ((λ+n)/λ) c_n`, against the
    /// kernel closed form.
    pub closed_form: f64,
    /// Mapped bilinear companion coefficients against the kernel closed form.
    pub bilinear: f64,
}

impl OperatorCheck {
    pub fn max(&self) -> f64 {
        self.closed_form.max(self.bilinear)
    }
}

fn operator_map(lambda: f64, series: &TruncatedSeries) -> TruncatedSeries {
    let coeffs = series
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, c)| c * ((lambda + n as f64) / lambda))
        .collect();
    TruncatedSeries::from_coeffs(coeffs)
}

/// Applies `λ^{-1} t^{1-λ} d/dt ∘ t^λ` to the companion, coefficient by
/// coefficient, and compares with the kernel for `n ≤ order`. Closed-form
/// series use the `Z` variant.
pub fn operator_relation_check(lambda: f64, x: f64, y: f64, order: usize) -> Result<OperatorCheck> {
    let kernel = kernel_series(lambda, x, y, KernelKind::Kernel, KernelVariant::Z, order)?;
    let companion = kernel_series(lambda, x, y, KernelKind::Companion, KernelVariant::Z, order)?;
    let bilinear = TruncatedSeries::from_real_coeffs(&bilinear_coefficients(
        lambda,
        x,
        y,
        order,
        KernelKind::Companion,
    )?);
    Ok(OperatorCheck {
        closed_form: operator_map(lambda, &companion).max_mixed_deviation(&kernel, order),
        bilinear: operator_map(lambda, &bilinear).max_mixed_deviation(&kernel, order),
    })
}

/// `Γ(1/4)² / (2√π)`, which also equals `2K(1/2)`.
pub fn quarter_gamma_constant() -> f64 {
    let g = gamma_fn(0.25).expect("Gamma(1/4) is finite");
    g * g / (2.0 * PI.sqrt())
}

fn roach_rhs(w: f64) -> Result<f64> {
    let r = w.sqrt();
    let plus = 0.5 * (1.0 + r);
    let minus = 0.5 * (1.0 - r);
    let e_weight = 2.0 * r / (1.0 - w);
    Ok(e_weight * elliptic_e(plus)? - e_weight * elliptic_e(minus)?
        + elliptic_k(plus)? / (1.0 + r)
        + elliptic_k(minus)? / (1.0 - r))
}

/// Elliptic side of the `₂F₁(1/4, 5/4; 1/2 | w)` formula,
/// `(2√w/(1-w))[E(w₊) - E(w₋)] + K(w₊)/(1+√w) + K(w₋)/(1-√w)`
/// with `w± = (1 ± √w)/2`.
pub fn roach_formula(w: f64) -> Result<f64> {
    if !(w > 0.0 && w < 1.0) {
        return Err(Error::OutOfRange(w));
    }
    roach_rhs(w)
}

/// Hypergeometric side, `Γ(1/4)²/(2√π) · ₂F₁(1/4, 5/4; 1/2 | w)`.
pub fn roach_lhs(w: f64) -> Result<f64> {
    if !(w > 0.0 && w < 1.0) {
        return Err(Error::OutOfRange(w));
    }
    Ok(quarter_gamma_constant() * gauss_2f1_real(0.25, 1.25, 0.5, w)?)
}

/// Poisson kernel at `λ = 1/4` through complete elliptic integrals.
///
/// Needs `z̃ ≥ 0` (i.e. `t ≤ 0`) so that `√z̃` is real; otherwise returns
/// [`Error::DomainMismatch`] and the caller should use [`poisson_kernel`].
pub fn quarter_kernel_elliptic(args: &KernelArgs) -> Result<f64> {
    if (args.lambda - 0.25).abs() > 1e-12 {
        return Err(Error::InvalidLambda(args.lambda));
    }
    let (z_tilde, _) = kernel_arguments(args);
    if z_tilde < 0.0 {
        return Err(Error::DomainMismatch(format!(
            "z~ = {z_tilde} is negative; use the hypergeometric kernel"
        )));
    }
    if z_tilde >= 1.0 {
        return Err(Error::OutOfRange(z_tilde));
    }
    let f = roach_rhs(z_tilde)? / quarter_gamma_constant();
    Ok((1.0 - args.t * args.t) * args.d_tilde().powf(-1.25) * f)
}

fn abs(x: Rational64) -> Rational64 {
    if x < Rational64::from_integer(0) { -x } else { x }
}

/// Unordered triple of exponent differences, each taken up to sign.
///
/// Stored as absolute values in ascending order, so equality is equivalence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentDifferences([Rational64; 3]);

impl ExponentDifferences {
    pub fn new(d: [Rational64; 3]) -> Self {
        let mut v = d.map(abs);
        v.sort();
        Self(v)
    }

    pub fn values(&self) -> [Rational64; 3] {
        self.0
    }

    pub fn contains(&self, d: Rational64) -> bool {
        self.0.contains(&abs(d))
    }

    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(|d| *d == Rational64::from_integer(0))
    }

    fn without(&self, d: Rational64) -> Option<[Rational64; 2]> {
        let i = self.0.iter().position(|x| *x == d)?;
        let mut rest = self.0.to_vec();
        rest.remove(i);
        Some([rest[0], rest[1]])
    }

    /// Images under `{1/2, δ₁, δ₂} ∼ {δ₁, δ₁, 2δ₂}`, one per choice of which
    /// remaining entry is doubled.
    pub fn quadratic_step(&self) -> Result<Vec<Self>> {
        let half = Rational64::new(1, 2);
        let [d1, d2] = self
            .without(half)
            .ok_or_else(|| Error::RuleNotApplicable(format!("no 1/2 in {self}")))?;
        let two = Rational64::from_integer(2);
        let mut out = vec![Self::new([d1, d1, two * d2])];
        let other = Self::new([d2, d2, two * d1]);
        if other != out[0] {
            out.push(other);
        }
        Ok(out)
    }

    /// Image under `{1/3, 1/3, δ} ∼ {δ, δ, δ}`.
    pub fn cubic_step(&self) -> Result<Self> {
        let third = Rational64::new(1, 3);
        let err = || Error::RuleNotApplicable(format!("{self} lacks two entries 1/3"));
        let [a, b] = self.without(third).ok_or_else(err)?;
        let d = if a == third {
            b
        } else if b == third {
            a
        } else {
            return Err(err());
        };
        Ok(Self::new([d, d, d]))
    }

    /// Whether `{0, 0, 0}` is reachable by quadratic and cubic steps, which
    /// together generate the sextic `{1/2, 1/3, δ} ∼ {2δ, 2δ, 2δ}`.
    pub fn sextic_reachable(&self) -> bool {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([(*self, 0usize)]);
        while let Some((node, depth)) = queue.pop_front() {
            if node.is_trivial() {
                return true;
            }
            if depth == 4 || !seen.insert(node) {
                continue;
            }
            let mut next = node.quadratic_step().unwrap_or_default();
            next.extend(node.cubic_step());
            queue.extend(next.into_iter().map(|n| (n, depth + 1)));
        }
        false
    }
}

impl std::fmt::Display for ExponentDifferences {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let [a, b, c] = self.0;
        write!(f, "{{{a}, {b}, {c}}}")
    }
}

/// `(1-c, c-a-b, b-a)` up to sign and order.
pub fn exponent_differences(a: Rational64, b: Rational64, c: Rational64) -> ExponentDifferences {
    ExponentDifferences::new([Rational64::from_integer(1) - c, c - a - b, b - a])
}

/// Differences of the Gauss factor of a kernel closed form at rational `λ`.
pub fn kernel_differences(lambda: Rational64, kind: KernelKind, variant: KernelVariant) -> ExponentDifferences {
    let one = Rational64::from_integer(1);
    let two = Rational64::from_integer(2);
    let half = Rational64::new(1, 2);
    let (a, b, c) = match (kind, variant) {
        (KernelKind::Kernel, KernelVariant::Tilde) => (lambda, lambda + one, two * lambda),
        (KernelKind::Kernel, KernelVariant::Z) => ((lambda + one) / two, (lambda + two) / two, lambda + half),
        (KernelKind::Companion, KernelVariant::Tilde) => (lambda, lambda, two * lambda),
        (KernelKind::Companion, KernelVariant::Z) => (lambda / two, (lambda + one) / two, lambda + half),
    };
    exponent_differences(a, b, c)
}
