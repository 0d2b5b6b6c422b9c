//! Closed algebraic generating functions for `C_n^{1/4}` and `C_n^{1/6}`, and
//! the table of `e^xi` parametrizations they are built from.

use super::{c, linear, lhs_first_gf, r_series, IdentityPair};
use crate::error::{Error, Result};
use crate::series::{Complex, PuiseuxSeries, TruncatedSeries};

/// Identity for `sum (-1/12)_n/(1/2)_n C_n^{1/4}(x) t^n`, valid for `|x| > 1`:
/// `2^{-1/4} R^{1/12} [cosh(xi/3) + sqrt(sinh xi / (3 sinh(xi/3)))]^{1/4}`
/// with `e^xi = R^{-1}[1 - (x - sqrt(x^2-1)) t]`.
///
/// `sinh xi` and `sinh(xi/3)` both vanish at `t = 0`; their ratio is formed by
/// series division, which removes the common power of `t`.
pub fn octahedral_example(x: Complex, order: usize) -> Result<IdentityPair> {
    let lhs = lhs_first_gf(0.25, -1.0 / 12.0, x, order)?;
    let r = r_series(x, order)?;
    let root = (x * x - 1.0).sqrt();
    let e = linear(c(1.0), root - x, order).div(&r)?;
    let e_inv = e.recip()?;
    let e3 = e.pow_rational(1, 3)?;
    let e3_inv = e3.recip()?;
    let cosh3 = (&e3 + &e3_inv).scale_real(0.5);
    let sinh = &e - &e_inv;
    let sinh3 = (&e3 - &e3_inv).scale_real(3.0);
    let ratio = sinh.div(&sinh3)?;
    let bracket = &cosh3 + &ratio.pow_rational(1, 2)?;
    let rhs = (&r.pow_rational(1, 12)? * &bracket.pow_rational(1, 4)?).scale_real(2f64.powf(-0.25));
    Ok(IdentityPair::new(lhs, rhs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TetraBranch {
    /// Uses `sinh`, `f_+-` and `e^xi = t sqrt(x^2-1) / (1-R-xt)`; for `|x| > 1`.
    Hyperbolic,
    /// Uses `cosh`, `g_+-` and `e^xi = t sqrt(1-x^2) / (-1+R+xt)`; for `|x| < 1`.
    Circular,
}

/// Ramification used for the tetrahedral intermediates: `e^{xi/3}` carries
/// `t^{-1/3}`.
const TETRA_RAMIFICATION: u32 = 3;

/// Identity for `sum (-1/12)_n/(1/3)_n C_n^{1/6}(x) t^n`:
/// `2^{-7/12} 3^{-3/8} R^{1/12} (sinh xi)^{-1/3} [sqrt(sqrt3+1) f_+ + sqrt(sqrt3-1) f_-]`
/// on the hyperbolic branch, and the same with `cosh` and `g_+-` on the
/// circular branch.
///
/// Here `e^xi` behaves like `t^{-1}`, so the intermediates are Puiseux
/// series in `t^{1/3}`. The final product is checked to be an ordinary power
/// series; a surviving pole or fractional power is [`Error::UncancelledPole`].
pub fn tetrahedral_example(x: Complex, order: usize, branch: TetraBranch) -> Result<IdentityPair> {
    let lhs = lhs_first_gf(1.0 / 6.0, -1.0 / 12.0, x, order)?;
    let d = TETRA_RAMIFICATION;
    let lift = |s: &TruncatedSeries| PuiseuxSeries::from_series(s, d);
    let r = r_series(x, order)?;
    let xt = linear(c(0.0), x, order);
    let (root, denominator) = match branch {
        TetraBranch::Hyperbolic => ((x * x - 1.0).sqrt(), (-&(&r + &xt)).add_constant(c(1.0))),
        TetraBranch::Circular => ((1.0 - x * x).sqrt(), (&r + &xt).add_constant(c(-1.0))),
    };
    let numerator = linear(c(0.0), root, order);
    let e = lift(&numerator).div(&lift(&denominator))?;
    let e_inv = e.recip()?;
    let e3 = e.pow_rational(1, 3)?;
    let e3_inv = e3.recip()?;
    let sign = match branch {
        TetraBranch::Hyperbolic => -1.0,
        TetraBranch::Circular => 1.0,
    };
    // Hyperbolic: big = sinh xi, small = sinh(xi/3), odd = cosh(xi/3).
    // Circular:   big = cosh xi, small = cosh(xi/3), odd = sinh(xi/3).
    let big = e.add(&e_inv.scale_real(sign)).scale_real(0.5);
    let small = e3.add(&e3_inv.scale_real(sign)).scale_real(0.5);
    let odd = e3.add(&e3_inv.scale_real(-sign)).scale_real(0.5);
    let root_term = big.div(&small.scale_real(3.0))?.pow_rational(1, 2)?;
    let quartic = |bracket: PuiseuxSeries| big.mul(&bracket).pow_rational(1, 4);
    let plus = quartic(root_term.add(&odd))?;
    let minus = quartic(root_term.sub(&odd))?;
    let r3 = 3f64.sqrt();
    let combo = plus
        .scale_real((r3 + 1.0).sqrt())
        .add(&minus.scale_real((r3 - 1.0).sqrt()));
    let prefactor = big.pow_rational(-1, 3)?.mul(&lift(&r.pow_rational(1, 12)?));
    let scale = 2f64.powf(-7.0 / 12.0) * 3f64.powf(-0.375);
    let product = prefactor.mul(&combo).scale_real(scale);
    let report = order.min((product.precision().max(0) as usize) / d as usize);
    let rhs = product.into_power_series(report)?;
    Ok(IdentityPair::new(lhs, rhs))
}

/// Which Legendre argument a table row parametrizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TableForm {
    /// `z = (1 - xt) / R`.
    InvBraf,
    /// `z = 2 [R / (1 - xt)]^2 - 1`.
    SquaredBraf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TrigForm {
    Cosh,
    Cos,
    Coth,
    Tanh,
}

/// One row of the substitution table evaluated at a sample `(x, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubstitutionRow {
    pub row: u8,
    pub z_form: TableForm,
    pub trig: TrigForm,
    /// `e^xi`, `e^{i theta}`, or for rows 5 and 6 the half-angle
    /// `e^{xi/2}`, `e^{i theta/2}`.
    pub exp_xi: Complex,
    /// The Legendre argument computed directly from `(x, t)`.
    pub z: Complex,
}

impl SubstitutionRow {
    /// The Legendre argument rebuilt from [`SubstitutionRow::exp_xi`].
    pub fn reconstructed_z(&self) -> Complex {
        let e = match self.row {
            5 | 6 => self.exp_xi * self.exp_xi,
            _ => self.exp_xi,
        };
        let (p, m) = (e + e.inv(), e - e.inv());
        match self.trig {
            TrigForm::Cosh | TrigForm::Cos => p / 2.0,
            TrigForm::Coth => p / m,
            TrigForm::Tanh => m / p,
        }
    }

    /// `|reconstructed z - z|`, relative to `max(1, |z|)`.
    pub fn residual(&self) -> f64 {
        (self.reconstructed_z() - self.z).norm() / self.z.norm().max(1.0)
    }
}

/// Evaluates row `row` (1 to 8) of the `e^xi` table at real `x` and `t`.
///
/// Rows 1-4 parametrize `z = (1-xt)/R` by cosh, cos, coth, tanh; rows 5-8
/// parametrize `z = 2[R/(1-xt)]^2 - 1` the same way. Each row is valid on
/// one side of `|x| = 1`, and rows 3, 4, 7, 8 need `t != 0`.
pub fn substitution_table(x: f64, t: f64, row: u8) -> Result<SubstitutionRow> {
    let (z_form, trig, outside) = match row {
        1 => (TableForm::InvBraf, TrigForm::Cosh, true),
        2 => (TableForm::InvBraf, TrigForm::Cos, false),
        3 => (TableForm::InvBraf, TrigForm::Coth, true),
        4 => (TableForm::InvBraf, TrigForm::Tanh, false),
        5 => (TableForm::SquaredBraf, TrigForm::Cosh, false),
        6 => (TableForm::SquaredBraf, TrigForm::Cos, true),
        7 => (TableForm::SquaredBraf, TrigForm::Coth, false),
        8 => (TableForm::SquaredBraf, TrigForm::Tanh, true),
        _ => return Err(Error::DomainMismatch(format!("table has rows 1-8, not {row}"))),
    };
    if (x.abs() > 1.0) != outside || x.abs() == 1.0 {
        let side = if outside { "|x| > 1" } else { "|x| < 1" };
        return Err(Error::DomainMismatch(format!("row {row} needs {side}, got x = {x}")));
    }
    if matches!(trig, TrigForm::Coth | TrigForm::Tanh) && t == 0.0 {
        return Err(Error::DomainMismatch(format!("row {row} is singular at t = 0")));
    }
    let r = (1.0 - 2.0 * x * t + t * t).sqrt();
    let w = 1.0 - x * t;
    let s = (x * x - 1.0).abs().sqrt();
    let i = Complex::new(0.0, 1.0);
    let exp_xi = match row {
        1 => c((1.0 - (x - s) * t) / r),
        2 => (1.0 - (x - i * s) * t) / r,
        3 => c(t * s / (1.0 - r - x * t)),
        4 => c(t * s / (-1.0 + r + x * t)),
        5 => c(w / (r - t * s)),
        6 => w / (r - i * t * s),
        7 | 8 => c(r / (t * s)),
        _ => unreachable!(),
    };
    let z = match z_form {
        TableForm::InvBraf => c(w / r),
        TableForm::SquaredBraf => c(2.0 * (r / w).powi(2) - 1.0),
    };
    Ok(SubstitutionRow {
        row,
        z_form,
        trig,
        exp_xi,
        z,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn octahedral_matches() {
        for x in [1.3, 1.5, 2.0, 5.0] {
            let p = octahedral_example(c(x), 24).unwrap();
            assert!(p.deviation(20) <= 1e-8, "x={x}: {}", p.deviation(20));
            assert!((p.rhs.coeff(0) - 1.0).norm() <= 1e-12);
        }
    }

    #[test]
    fn tetrahedral_matches() {
        for x in [1.5, 2.0] {
            let p = tetrahedral_example(c(x), 24, TetraBranch::Hyperbolic).unwrap();
            assert!(p.deviation(16) <= 1e-8, "x={x}: {}", p.deviation(16));
        }
        for x in [0.3, 0.6, -0.7] {
            let p = tetrahedral_example(c(x), 24, TetraBranch::Circular).unwrap();
            assert!(p.deviation(16) <= 1e-8, "x={x}: {}", p.deviation(16));
            assert!(p.rhs.max_imag_residue(16) <= 1e-9);
        }
    }

    #[test]
    fn table_rows_reconstruct() {
        for row in 1..=8u8 {
            let x = if matches!(row, 1 | 3 | 6 | 8) { 2.0 } else { 0.5 };
            for t in [0.05, 0.1, -0.1] {
                let s = substitution_table(x, t, row).unwrap();
                assert!(s.residual() <= 1e-10, "row {row} t={t}: {}", s.residual());
            }
        }
    }

    #[test]
    fn table_examples() {
        let s = substitution_table(2.0, 0.1, 1).unwrap();
        let r = (1.0f64 - 0.4 + 0.01).sqrt();
        assert_relative_eq!(s.reconstructed_z().re, 0.8 / r, max_relative = 1e-12);
        let s = substitution_table(0.5, 0.1, 2).unwrap();
        assert_relative_eq!(s.exp_xi.norm(), 1.0, max_relative = 1e-12);
        for row in [1, 2] {
            let x = if row == 1 { 2.0 } else { 0.5 };
            let s = substitution_table(x, 0.0, row).unwrap();
            assert_relative_eq!(s.exp_xi.re, 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn table_domain_errors() {
        assert!(matches!(substitution_table(0.5, 0.1, 1), Err(Error::DomainMismatch(_))));
        assert!(matches!(substitution_table(2.0, 0.0, 3), Err(Error::DomainMismatch(_))));
        assert!(matches!(substitution_table(2.0, 0.1, 9), Err(Error::DomainMismatch(_))));
    }
}
