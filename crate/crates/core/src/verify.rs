//! Identity catalog, default sample grids and the report runner used by the
//! command-line verifier.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::brafman::{
    alt_gf, extended_first_gf, extended_miller, extended_rewrite, extended_second_gf, first_gf, first_rewrite,
    lemma_key_check, miller_identities, octahedral_example, second_gf, second_rewrite, substitution_table,
    tetrahedral_example, AltKind, ExtendedMillerKind, IdentityPair, MillerKind, TetraBranch, Variant,
};
use crate::error::{Error, Result};
use crate::gegenbauer::{ordinary_gf_by_power, ordinary_gf_by_recurrence};
use crate::hypergeo::gauss_2f1_real;
use crate::legendre::{closed_form, legendre_p_real, Branch, LegendreIndex};
use crate::poisson::{
    bilinear_partial_sum, closed_form_value, elliptic_e, elliptic_k, kernel_arguments, operator_relation_check,
    quarter_kernel_elliptic, roach_formula, roach_lhs, KernelArgs, KernelKind, KernelVariant,
};
use crate::series::{mixed_deviation, Complex};

/// One entry of the identity catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdentityInfo {
    pub id: &'static str,
    pub summary: &'static str,
    /// Whether samples compare power-series coefficients (as opposed to
    /// scalar values).
    pub series: bool,
}

const fn entry(id: &'static str, summary: &'static str, series: bool) -> IdentityInfo {
    IdentityInfo { id, summary, series }
}

/// Every verifiable identity, in report order.
pub const CATALOG: &[IdentityInfo] = &[
    entry("ogf", "sum C_n^l(x) t^n = R^{-2l}: recurrence vs binomial expansion", true),
    entry("gf1.a", "sum (g)_n(2l-g)_n/((2l)_n(l+1/2)_n) C_n t^n = R^{-g} 2F1(g,2l-g;l+1/2;(R-1+xt)/(2R))", true),
    entry("gf1.b", "first Brafman GF, quadratically transformed right side (1-xt)^{-g} 2F1(g/2,g/2+1/2;l+1/2;1-R^2/(1-xt)^2)", true),
    entry("gf1.rewrite.a", "first Brafman GF with l=1/2-m as a Legendre function of (1-xt)/R", true),
    entry("gf1.rewrite.b", "first Brafman GF with l=1/2-m via F_{-1/4}^m(2R^2/(1-xt)^2-1)", true),
    entry("miller.g1", "finite sum with weights (-N)_n/(2l)_n against R^N C_N((1-xt)/R)", true),
    entry("miller.g2", "weights (2l+N)_n/(2l)_n against R^{-2l-N} C_N((1-xt)/R)", true),
    entry("alt.1", "weights (l+1/2)_n/(2l)_n against R^{-1}((1+R-xt)/2)^{1/2-l}", true),
    entry("alt.2", "weights (l-1/2)_n/(2l)_n against ((1+R-xt)/2)^{1/2-l}", true),
    entry("octa.c14", "sum (-1/12)_n/(1/2)_n C_n^{1/4}(x) t^n, octahedral closed form, |x|>1", true),
    entry("tetra.c16.hyp", "sum (-1/12)_n/(1/3)_n C_n^{1/6}(x) t^n, tetrahedral closed form, |x|>1", true),
    entry("tetra.c16.circ", "sum (-1/12)_n/(1/3)_n C_n^{1/6}(x) t^n, tetrahedral closed form, |x|<1", true),
    entry("lemma.key", "sum pFq(-n,c;d;u) C_n(x) t^n = R^{-2l} sum (c)_n/(d)_n C_n((x-t)/R)(-tu/R)^n", true),
    entry("gf1x.a", "u-extended first Brafman GF, U^{g-2l} R^{-g} 2F1(g,2l-g;l+1/2;(UR-S)/(2UR))", true),
    entry("gf1x.b", "u-extended first Brafman GF, quadratically transformed right side", true),
    entry("gf1x.rewrite.a", "u-extended first GF as a Legendre function of S/(UR)", true),
    entry("gf1x.rewrite.b", "u-extended first GF via F_{-1/4}^m(2(UR/S)^2-1)", true),
    entry("millerx.plus", "u-extended weights 2F1(-n,2l+N;2l;u) against U^{-2l-N} R^N C_N(S/(UR))", true),
    entry("millerx.minus", "u-extended weights 2F1(-n,-N;2l;u) against U^N R^{-2l-N} C_N(S/(UR))", true),
    entry("gf2.a", "second Brafman GF, 2F1(g,2l-g;l+1/2;(1-R-t)/2) 2F1(g,2l-g;l+1/2;(1-R+t)/2)", true),
    entry("gf2.b", "second Brafman GF, (1-2xt)^{-g} times 2F1's of 1-1/(R+-t)^2", true),
    entry("gf2x.a", "u-extended second GF, R^{-2l} 2F1(...;(R-U+-ut)/(2R)) products", true),
    entry("gf2x.b", "u-extended second GF, quadratically transformed right side", true),
    entry("gf2.rewrite.a", "second GF with l=1/2-m as F_nu^m(R+t) F_nu^m(R-t)", true),
    entry("gf2.rewrite.b", "second GF with l=1/2-m via F_{-1/4}^m(2/(R-+t)^2-1)", true),
    entry("subst.table", "e^xi / e^{i theta} parametrizations of (1-xt)/R and 2R^2/(1-xt)^2-1", false),
    entry("appendix.closed", "closed-form P_nu^m and Ferrers functions vs the 2F1 definition", false),
    entry("elliptic", "(2/pi)K(m) = 2F1(1/2,1/2;1;m) and the Legendre relation for K, E", false),
    entry("roach.4.4", "G(1/4)^2/(2 sqrt pi) 2F1(1/4,5/4;1/2;w) as E and K at (1+-sqrt w)/2", false),
    entry("poisson.kernel", "Poisson kernel closed forms vs bilinear partial sums", false),
    entry("poisson.companion", "companion kernel closed forms vs bilinear partial sums", false),
    entry("poisson.operator", "t-derivative operator maps companion coefficients to kernel coefficients", true),
];

pub fn lookup(id: &str) -> Option<&'static IdentityInfo> {
    CATALOG.iter().find(|e| e.id == id)
}

/// Expands `all` and checks every id against the catalog, preserving catalog
/// order and dropping duplicates.
pub fn resolve_ids<S: AsRef<str>>(ids: &[S]) -> Result<Vec<&'static str>> {
    let mut wanted = Vec::new();
    for id in ids {
        let id = id.as_ref();
        if id == "all" {
            return Ok(CATALOG.iter().map(|e| e.id).collect());
        }
        wanted.push(lookup(id).ok_or_else(|| Error::UnknownIdentity(id.to_string()))?.id);
    }
    Ok(CATALOG.iter().map(|e| e.id).filter(|id| wanted.contains(id)).collect())
}

pub const HYPERBOLIC_X: [f64; 4] = [1.3, 1.5, 2.0, 5.0];
pub const CIRCULAR_X: [f64; 4] = [-0.7, 0.3, 0.6, 0.9];
pub const DEFAULT_U: [(f64, f64); 4] = [(0.0, 0.0), (0.4, 0.0), (1.0, 0.0), (0.7, 0.2)];

/// Reporting order, working order, tolerance and optional grid overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub order: usize,
    pub working_order: usize,
    pub tol: f64,
    pub x_grid: Option<Vec<Complex>>,
    pub u_grid: Option<Vec<Complex>>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            order: 16,
            working_order: 24,
            tol: 1e-8,
            x_grid: None,
            u_grid: None,
        }
    }
}

impl RunConfig {
    /// Order at which series are built; never below the reporting order.
    pub fn build_order(&self) -> usize {
        self.working_order.max(self.order)
    }

    fn xs(&self, side: Side) -> Vec<Complex> {
        if let Some(g) = &self.x_grid {
            return g.clone();
        }
        let pick = |v: &[f64]| v.iter().map(|&x| Complex::new(x, 0.0)).collect::<Vec<_>>();
        match side {
            Side::Both => pick(&[HYPERBOLIC_X.as_slice(), CIRCULAR_X.as_slice()].concat()),
            Side::Outside => pick(&HYPERBOLIC_X),
            Side::Inside => pick(&CIRCULAR_X),
        }
    }

    fn us(&self) -> Vec<Complex> {
        self.u_grid
            .clone()
            .unwrap_or_else(|| DEFAULT_U.iter().map(|&(re, im)| Complex::new(re, im)).collect())
    }
}

#[derive(Debug, Clone, Copy)]
enum Side {
    Both,
    Outside,
    Inside,
}

/// Result for one sample point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    pub point: BTreeMap<String, String>,
    /// `NaN` (serialized as `null`) when the evaluation failed.
    pub max_mixed_deviation: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

/// Result of verifying one identity over its grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub identity_id: String,
    pub params: BTreeMap<String, String>,
    pub order: usize,
    pub samples: Vec<Sample>,
    pub overall_pass: bool,
    pub runtime_ms: u64,
}

pub const CSV_HEADER: &str = "identity_id,order,point,max_mixed_deviation,pass,reason";

impl IdentityReport {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }

    /// One CSV row per sample, without the header.
    pub fn csv_rows(&self) -> Vec<String> {
        self.samples
            .iter()
            .map(|s| {
                let point = s.point.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";");
                let dev = if s.max_mixed_deviation.is_nan() {
                    String::new()
                } else {
                    format_g(s.max_mixed_deviation)
                };
                let reason = s.reason.as_deref().unwrap_or("").replace('"', "'");
                format!("{},{},\"{point}\",{dev},{},\"{reason}\"", self.identity_id, self.order, s.pass)
            })
            .collect()
    }

    /// Worst deviation over the samples, `NaN` if any sample failed to
    /// evaluate.
    pub fn worst_deviation(&self) -> f64 {
        self.samples.iter().map(|s| s.max_mixed_deviation).fold(0.0, |a, d| {
            if a.is_nan() || d.is_nan() {
                f64::NAN
            } else {
                a.max(d)
            }
        })
    }
}

/// `printf("%.15g")`-style formatting.
pub fn format_g(v: f64) -> String {
    format_g_digits(v, 15)
}

pub fn format_g_digits(v: f64, digits: usize) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return if v.is_nan() { "nan".into() } else if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs());
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{v:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `a`, `a+bi` or `a-bi` with [`format_g`] parts.
pub fn format_complex(z: Complex) -> String {
    if z.im == 0.0 {
        return format_g(z.re);
    }
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{}{sign}{}i", format_g(z.re), format_g(z.im.abs()))
}

trait Param {
    fn render(&self) -> String;
}

impl Param for f64 {
    fn render(&self) -> String {
        format_g(*self)
    }
}

impl Param for Complex {
    fn render(&self) -> String {
        format_complex(*self)
    }
}

impl Param for usize {
    fn render(&self) -> String {
        self.to_string()
    }
}

impl Param for &str {
    fn render(&self) -> String {
        (*self).to_string()
    }
}

#[derive(Debug, Clone, Default)]
struct Point(BTreeMap<String, String>);

impl Point {
    fn with(mut self, key: &str, value: impl Param) -> Self {
        self.0.insert(key.to_string(), value.render());
        self
    }
}

type Job = Box<dyn Fn(&RunConfig) -> Result<f64> + Send + Sync>;

struct Task {
    point: Point,
    job: Job,
}

fn task(point: Point, job: impl Fn(&RunConfig) -> Result<f64> + Send + Sync + 'static) -> Task {
    Task { point, job: Box::new(job) }
}

/// A task that compares the two sides of a series identity.
fn pair_task(point: Point, build: impl Fn(usize) -> Result<IdentityPair> + Send + Sync + 'static) -> Task {
    task(point, move |cfg| Ok(build(cfg.build_order())?.deviation(cfg.order)))
}

fn real_on_side(x: Complex, outside: bool) -> Result<f64> {
    let ok = x.im == 0.0 && x.re.abs() != 1.0 && (x.re.abs() > 1.0) == outside;
    if !ok {
        let side = if outside { "real |x| > 1" } else { "real |x| < 1" };
        return Err(Error::DomainMismatch(format!("needs {side}, got x = {}", format_complex(x))));
    }
    Ok(x.re)
}

const GF1_PARAMS: [(f64, f64); 6] = [
    (0.25, -1.0 / 12.0),
    (1.0 / 6.0, -1.0 / 12.0),
    (0.25, 0.25 + 1.0 / 3.0),
    (1.0 / 6.0, 1.0 / 6.0 + 0.25),
    (0.3, 0.7),
    (0.5, 0.3),
];
const GF1X_PARAMS: [(f64, f64); 3] = [(0.25, -1.0 / 12.0), (1.0 / 6.0, -1.0 / 12.0), (0.3, 0.7)];
const GF2_PARAMS: [(f64, f64); 4] = [
    (1.0 / 6.0, 1.0 / 6.0 + 1.0 / 3.0),
    (0.25, 0.25 + 1.0 / 3.0),
    (0.5, 0.3),
    (1.0 / 6.0, -1.0 / 12.0),
];
const REWRITE_PARAMS: [(f64, f64); 4] = [(-1.0 / 6.0, 0.25), (-0.25, 1.0 / 3.0), (0.0, 0.25), (1.8, 0.2)];
const REWRITE_X_PARAMS: [(f64, f64); 2] = [(-1.0 / 6.0, 0.25), (-0.25, 1.0 / 3.0)];
const POISSON_T: [f64; 3] = [0.15, 0.2, -0.2];
const POISSON_LAMBDAS: [f64; 2] = [0.25, 1.0 / 6.0];
const POISSON_ANGLES: (f64, f64) = (1.0, 1.7);
const POISSON_TERMS: usize = 48;

fn gf_tasks(cfg: &RunConfig, params: &[(f64, f64)], variant: Variant, second: bool) -> Vec<Task> {
    let mut out = Vec::new();
    for &(lambda, gamma) in params {
        for x in cfg.xs(Side::Both) {
            let p = Point::default().with("lambda", lambda).with("gamma", gamma).with("x", x);
            out.push(pair_task(p, move |n| {
                if second {
                    second_gf(lambda, gamma, x, n, variant)
                } else {
                    first_gf(lambda, gamma, x, n, variant)
                }
            }));
        }
    }
    out
}

fn gfx_tasks(cfg: &RunConfig, params: &[(f64, f64)], variant: Variant, second: bool) -> Vec<Task> {
    let mut out = Vec::new();
    for &(lambda, gamma) in params {
        for u in cfg.us() {
            for x in cfg.xs(Side::Both) {
                let p = Point::default()
                    .with("lambda", lambda)
                    .with("gamma", gamma)
                    .with("u", u)
                    .with("x", x);
                out.push(pair_task(p, move |n| {
                    if second {
                        extended_second_gf(lambda, gamma, u, x, n, variant)
                    } else {
                        extended_first_gf(lambda, gamma, u, x, n, variant)
                    }
                }));
            }
        }
    }
    out
}

fn rewrite_tasks(cfg: &RunConfig, variant: Variant, second: bool) -> Vec<Task> {
    let mut out = Vec::new();
    for &(nu, mu) in &REWRITE_PARAMS {
        for x in cfg.xs(Side::Both) {
            let p = Point::default().with("nu", nu).with("mu", mu).with("x", x);
            out.push(pair_task(p, move |n| {
                if second {
                    second_rewrite(nu, mu, x, n, variant)
                } else {
                    first_rewrite(nu, mu, x, n, variant)
                }
            }));
        }
    }
    out
}

fn rewrite_x_tasks(cfg: &RunConfig, variant: Variant) -> Vec<Task> {
    let mut out = Vec::new();
    for &(nu, mu) in &REWRITE_X_PARAMS {
        for u in cfg.us() {
            for x in cfg.xs(Side::Both) {
                let p = Point::default().with("nu", nu).with("mu", mu).with("u", u).with("x", x);
                out.push(pair_task(p, move |n| extended_rewrite(nu, mu, u, x, n, variant)));
            }
        }
    }
    out
}

fn ogf_tasks(cfg: &RunConfig) -> Vec<Task> {
    let mut out = Vec::new();
    for lambda in [1.0 / 6.0, 0.25, 0.5, 7.0 / 6.0] {
        for x in cfg.xs(Side::Both) {
            let p = Point::default().with("lambda", lambda).with("x", x);
            out.push(task(p, move |cfg| {
                let n = cfg.build_order();
                let a = ordinary_gf_by_recurrence(lambda, x, n);
                let b = ordinary_gf_by_power(lambda, x, n);
                Ok(a.max_mixed_deviation(&b, cfg.order))
            }));
        }
    }
    out
}

fn miller_tasks(cfg: &RunConfig, kind: MillerKind) -> Vec<Task> {
    let mut out = Vec::new();
    for lambda in [0.25, 1.0 / 6.0, 1.5] {
        for big_n in [0usize, 1, 3] {
            for x in cfg.xs(Side::Both) {
                let p = Point::default().with("lambda", lambda).with("N", big_n).with("x", x);
                out.push(pair_task(p, move |n| miller_identities(lambda, big_n, x, n, kind)));
            }
        }
    }
    out
}

fn millerx_tasks(cfg: &RunConfig, kind: ExtendedMillerKind) -> Vec<Task> {
    let mut out = Vec::new();
    for lambda in [0.25, 1.0 / 6.0] {
        for big_n in [0usize, 2] {
            for u in cfg.us() {
                for x in cfg.xs(Side::Both) {
                    let p = Point::default()
                        .with("lambda", lambda)
                        .with("N", big_n)
                        .with("u", u)
                        .with("x", x);
                    out.push(pair_task(p, move |n| extended_miller(lambda, big_n, u, x, n, kind)));
                }
            }
        }
    }
    out
}

fn alt_tasks(cfg: &RunConfig, kind: AltKind) -> Vec<Task> {
    let mut out = Vec::new();
    for lambda in [0.25, 1.0 / 6.0, 0.5, 7.0 / 6.0] {
        for x in cfg.xs(Side::Both) {
            let p = Point::default().with("lambda", lambda).with("x", x);
            out.push(pair_task(p, move |n| alt_gf(lambda, x, n, kind)));
        }
    }
    out
}

fn octa_tasks(cfg: &RunConfig) -> Vec<Task> {
    cfg.xs(Side::Outside)
        .into_iter()
        .map(|x| {
            pair_task(Point::default().with("x", x), move |n| {
                real_on_side(x, true)?;
                octahedral_example(x, n)
            })
        })
        .collect()
}

fn tetra_tasks(cfg: &RunConfig, branch: TetraBranch) -> Vec<Task> {
    let outside = branch == TetraBranch::Hyperbolic;
    let side = if outside { Side::Outside } else { Side::Inside };
    cfg.xs(side)
        .into_iter()
        .map(|x| {
            task(Point::default().with("x", x), move |cfg| {
                real_on_side(x, outside)?;
                let pair = tetrahedral_example(x, cfg.build_order(), branch)?;
                let residue = pair.rhs.max_imag_residue(cfg.order);
                if residue > 1e-9 {
                    return Err(Error::DomainMismatch(format!("imaginary residue {residue:e} exceeds 1e-9")));
                }
                Ok(pair.deviation(cfg.order))
            })
        })
        .collect()
}

fn lemma_tasks(cfg: &RunConfig) -> Vec<Task> {
    let lambda = 0.25;
    let c = |v: f64| Complex::new(v, 0.0);
    let sets: [(&str, Vec<Complex>, Vec<Complex>); 2] = [
        ("1F1", vec![c(2.0 * lambda + 1.0 / 12.0)], vec![c(2.0 * lambda)]),
        ("2F2", vec![c(0.3), c(2.0 * lambda - 0.3)], vec![c(2.0 * lambda), c(lambda + 0.5)]),
    ];
    let mut out = Vec::new();
    for (name, cs, ds) in sets {
        for u in cfg.us() {
            for x in cfg.xs(Side::Both) {
                let p = Point::default().with("lambda", lambda).with("weights", name).with("u", u).with("x", x);
                let (cs, ds) = (cs.clone(), ds.clone());
                out.push(pair_task(p, move |n| lemma_key_check(lambda, &cs, &ds, u, x, n)));
            }
        }
    }
    out
}

fn subst_tasks(cfg: &RunConfig) -> Vec<Task> {
    let mut out = Vec::new();
    for x in cfg.xs(Side::Both) {
        let rows: [u8; 4] = if x.re.abs() > 1.0 { [1, 3, 6, 8] } else { [2, 4, 5, 7] };
        for row in rows {
            for t in [0.05, 0.1] {
                let p = Point::default().with("x", x).with("row", row as usize).with("t", t);
                out.push(task(p, move |_| {
                    let xr = if x.im == 0.0 {
                        x.re
                    } else {
                        return Err(Error::DomainMismatch("the table needs real x".into()));
                    };
                    Ok(substitution_table(xr, t, row)?.residual())
                }));
            }
        }
    }
    out
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Ten-point argument grid suited to a closed-form family on one branch.
fn appendix_grid(nu: f64, branch: Branch) -> (&'static str, Vec<f64>) {
    let tetra = (nu + 0.25).abs() < 1e-9;
    match (tetra, branch) {
        (false, Branch::Legendre) => ("cosh(0.2..2)", linspace(0.2, 2.0, 10).iter().map(|v| v.cosh()).collect()),
        (false, Branch::Ferrers) => ("cos(0.3..2.6)", linspace(0.3, 2.6, 10).iter().map(|v| v.cos()).collect()),
        (true, Branch::Legendre) => ("coth(0.5..3)", linspace(0.5, 3.0, 10).iter().map(|v| 1.0 / v.tanh()).collect()),
        (true, Branch::Ferrers) => ("tanh(-1.4..1.5)", linspace(-1.4, 1.5, 10).iter().map(|v| v.tanh()).collect()),
    }
}

/// `(nu, mu)` pairs covered by the closed-form evaluators.
pub const APPENDIX_CASES: [(f64, f64); 12] = [
    (-1.0 / 6.0, 0.25),
    (-1.0 / 6.0, -0.25),
    (-0.25, 1.0 / 3.0),
    (-0.25, -1.0 / 3.0),
    (1.75, 0.25),
    (0.2, -0.2),
    (2.5, -0.5),
    (0.0, 1.0 / 3.0),
    (0.0, -0.4),
    (1.0 / 6.0, 0.5),
    (-0.3, 0.5),
    (1.4, 0.5),
];

fn appendix_tasks() -> Vec<Task> {
    let mut out = Vec::new();
    for (nu, mu) in APPENDIX_CASES {
        for branch in [Branch::Legendre, Branch::Ferrers] {
            let (name, grid) = appendix_grid(nu, branch);
            let branch_name = match branch {
                Branch::Legendre => "legendre",
                Branch::Ferrers => "ferrers",
            };
            let base = Point::default()
                .with("nu", nu)
                .with("mu", mu)
                .with("branch", branch_name)
                .with("grid", name);
            let g = grid.clone();
            out.push(task(base.clone().with("check", "closed_form"), move |_| {
                let idx = LegendreIndex::new(nu, mu, branch);
                g.iter().try_fold(0.0f64, |acc, &z| {
                    Ok(acc.max(relative(closed_form(&idx, z)?, legendre_p_real(&idx, z)?)))
                })
            }));
            out.push(task(base.with("check", "degree_symmetry"), move |_| {
                let idx = LegendreIndex::new(nu, mu, branch);
                grid.iter().try_fold(0.0f64, |acc, &z| {
                    Ok(acc.max(relative(legendre_p_real(&idx, z)?, legendre_p_real(&idx.reflected(), z)?)))
                })
            }));
        }
    }
    out
}

fn elliptic_tasks() -> Vec<Task> {
    let mut out = Vec::new();
    for m in [0.1, 0.3, 0.5] {
        out.push(task(Point::default().with("check", "gauss").with("m", m), move |_| {
            Ok(mixed_deviation(
                Complex::new(2.0 / PI * elliptic_k(m)?, 0.0),
                Complex::new(gauss_2f1_real(0.5, 0.5, 1.0, m)?, 0.0),
            ))
        }));
        out.push(task(Point::default().with("check", "legendre_relation").with("m", m), move |_| {
            let (k, kp) = (elliptic_k(m)?, elliptic_k(1.0 - m)?);
            let (e, ep) = (elliptic_e(m)?, elliptic_e(1.0 - m)?);
            Ok((e * kp + ep * k - k * kp - PI / 2.0).abs())
        }));
    }
    out
}

fn roach_tasks() -> Vec<Task> {
    [1e-6, 0.1, 0.25, 0.49]
        .into_iter()
        .map(|w| {
            task(Point::default().with("w", w), move |_| {
                Ok(mixed_deviation(Complex::new(roach_lhs(w)?, 0.0), Complex::new(roach_formula(w)?, 0.0)))
            })
        })
        .collect()
}

fn real_deviation(a: f64, b: f64) -> f64 {
    mixed_deviation(Complex::new(a, 0.0), Complex::new(b, 0.0))
}

fn poisson_tasks(kind: KernelKind) -> Vec<Task> {
    let (theta, phi) = POISSON_ANGLES;
    let mut out = Vec::new();
    for lambda in POISSON_LAMBDAS {
        for t in POISSON_T {
            let base = Point::default()
                .with("lambda", lambda)
                .with("theta", theta)
                .with("phi", phi)
                .with("t", t);
            for (variant, name) in [(KernelVariant::Tilde, "tilde"), (KernelVariant::Z, "z")] {
                let p = base.clone().with("check", "bilinear").with("variant", name);
                out.push(task(p, move |_| {
                    let args = KernelArgs::new(lambda, theta, phi, t)?;
                    let sum = bilinear_partial_sum(&args, POISSON_TERMS, kind)?;
                    let closed = closed_form_value(&args, kind, variant)?;
                    if (closed - sum.value).abs() > sum.tolerance() {
                        return Err(Error::NoConvergence(format!(
                            "closed form {closed} differs from the partial sum {} beyond the tail bound",
                            sum.value
                        )));
                    }
                    Ok(real_deviation(closed, sum.value))
                }));
            }
            out.push(task(base.clone().with("check", "variants"), move |_| {
                let args = KernelArgs::new(lambda, theta, phi, t)?;
                Ok(real_deviation(
                    closed_form_value(&args, kind, KernelVariant::Tilde)?,
                    closed_form_value(&args, kind, KernelVariant::Z)?,
                ))
            }));
            let quarter_applies = kind == KernelKind::Kernel && lambda == 0.25;
            if quarter_applies {
                let args = KernelArgs::new(lambda, theta, phi, t).expect("fixed grid is admissible");
                if kernel_arguments(&args).0 >= 0.0 {
                    out.push(task(base.with("check", "elliptic"), move |_| {
                        Ok(real_deviation(
                            quarter_kernel_elliptic(&args)?,
                            closed_form_value(&args, kind, KernelVariant::Tilde)?,
                        ))
                    }));
                }
            }
        }
    }
    out
}

fn operator_tasks() -> Vec<Task> {
    let (theta, phi) = POISSON_ANGLES;
    POISSON_LAMBDAS
        .into_iter()
        .map(|lambda| {
            let p = Point::default().with("lambda", lambda).with("theta", theta).with("phi", phi);
            task(p, move |cfg| {
                Ok(operator_relation_check(lambda, theta.cos(), phi.cos(), cfg.order)?.max())
            })
        })
        .collect()
}

fn tasks_for(id: &str, cfg: &RunConfig) -> Result<Vec<Task>> {
    use Variant::{A, B};
    Ok(match id {
        "ogf" => ogf_tasks(cfg),
        "gf1.a" => gf_tasks(cfg, &GF1_PARAMS, A, false),
        "gf1.b" => gf_tasks(cfg, &GF1_PARAMS, B, false),
        "gf1.rewrite.a" => rewrite_tasks(cfg, A, false),
        "gf1.rewrite.b" => rewrite_tasks(cfg, B, false),
        "miller.g1" => miller_tasks(cfg, MillerKind::G1),
        "miller.g2" => miller_tasks(cfg, MillerKind::G2),
        "alt.1" => alt_tasks(cfg, AltKind::One),
        "alt.2" => alt_tasks(cfg, AltKind::Two),
        "octa.c14" => octa_tasks(cfg),
        "tetra.c16.hyp" => tetra_tasks(cfg, TetraBranch::Hyperbolic),
        "tetra.c16.circ" => tetra_tasks(cfg, TetraBranch::Circular),
        "lemma.key" => lemma_tasks(cfg),
        "gf1x.a" => gfx_tasks(cfg, &GF1X_PARAMS, A, false),
        "gf1x.b" => gfx_tasks(cfg, &GF1X_PARAMS, B, false),
        "gf1x.rewrite.a" => rewrite_x_tasks(cfg, A),
        "gf1x.rewrite.b" => rewrite_x_tasks(cfg, B),
        "millerx.plus" => millerx_tasks(cfg, ExtendedMillerKind::Plus),
        "millerx.minus" => millerx_tasks(cfg, ExtendedMillerKind::Minus),
        "gf2.a" => gf_tasks(cfg, &GF2_PARAMS, A, true),
        "gf2.b" => gf_tasks(cfg, &GF2_PARAMS, B, true),
        "gf2x.a" => gfx_tasks(cfg, &GF2_PARAMS, A, true),
        "gf2x.b" => gfx_tasks(cfg, &GF2_PARAMS, B, true),
        "gf2.rewrite.a" => rewrite_tasks(cfg, A, true),
        "gf2.rewrite.b" => rewrite_tasks(cfg, B, true),
        "subst.table" => subst_tasks(cfg),
        "appendix.closed" => appendix_tasks(),
        "elliptic" => elliptic_tasks(),
        "roach.4.4" => roach_tasks(),
        "poisson.kernel" => poisson_tasks(KernelKind::Kernel),
        "poisson.companion" => poisson_tasks(KernelKind::Companion),
        "poisson.operator" => operator_tasks(),
        other => return Err(Error::UnknownIdentity(other.to_string())),
    })
}

/// Runs one identity over its grid. Evaluation errors become failed samples.
pub fn run_identity(id: &str, cfg: &RunConfig) -> Result<IdentityReport> {
    let info = lookup(id).ok_or_else(|| Error::UnknownIdentity(id.to_string()))?;
    let start = Instant::now();
    let tasks = tasks_for(id, cfg)?;
    let samples: Vec<Sample> = tasks
        .par_iter()
        .map(|t| match (t.job)(cfg) {
            Ok(d) => Sample {
                point: t.point.0.clone(),
                max_mixed_deviation: d,
                pass: d <= cfg.tol,
                reason: None,
            },
            Err(e) => Sample {
                point: t.point.0.clone(),
                max_mixed_deviation: f64::NAN,
                pass: false,
                reason: Some(e.to_string()),
            },
        })
        .collect();
    let mut params = BTreeMap::new();
    params.insert("tol".to_string(), format_g(cfg.tol));
    if info.series {
        params.insert("working_order".to_string(), cfg.build_order().to_string());
    }
    Ok(IdentityReport {
        identity_id: id.to_string(),
        params,
        order: if info.series { cfg.order } else { 0 },
        overall_pass: samples.iter().all(|s| s.pass),
        samples,
        runtime_ms: start.elapsed().as_millis() as u64,
    })
}

/// Runs several identities concurrently; reports come back in catalog order.
pub fn run_many<S: AsRef<str>>(ids: &[S], cfg: &RunConfig) -> Result<Vec<IdentityReport>> {
    let ids = resolve_ids(ids)?;
    ids.par_iter().map(|id| run_identity(id, cfg)).collect()
}
