//! Where the construction is guaranteed to work: positivity of `u`, sign of
//! `u'`, the curves that bound those regions, and the critical values
//! `a_c` (below which `u' < 0` fails somewhere) and `a_g(g)` (below which
//! the mixing coefficient is not positive).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::closed_forms::{coupling_bound, sombrero};
use crate::error::{Error, Result};
use crate::polynomials as poly;
use crate::scalar::Real;

/// Reference value of the critical `a`, used for warnings without
/// rerunning [`find_a_c`].
pub const CRITICAL_A: f64 = 0.664;

/// All region polynomials at one `(a, x)`. `beta` and `tilde_beta` include
/// their `sqrt(1+a)` factor. `c1`, `c2`, `a_poly`, `b_poly` are the `a = 2`
/// forms and depend on `x` only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionPolynomials<T> {
    pub alpha: T,
    pub beta: T,
    pub g1: T,
    pub g2: T,
    pub gamma: T,
    pub tilde_alpha: T,
    pub tilde_beta: T,
    pub tilde_gamma: T,
    pub c1: T,
    pub c2: T,
    pub a_poly: T,
    pub b_poly: T,
}

pub fn eval_region_polys<T: Real>(a: T, x: T) -> RegionPolynomials<T> {
    let r = (T::one() + a).sqrt();
    RegionPolynomials {
        alpha: poly::alpha(a, x),
        beta: r * poly::beta_reduced(a, x),
        g1: poly::g1(x),
        g2: poly::g2(a, x),
        gamma: poly::gamma(a, x),
        tilde_alpha: poly::tilde_alpha(a, x),
        tilde_beta: r * poly::tilde_beta_reduced(a, x),
        tilde_gamma: poly::tilde_gamma(a, x),
        c1: sombrero::c1(x),
        c2: sombrero::c2(x),
        a_poly: poly::a_sombrero(x),
        b_poly: sombrero::b(x),
    }
}

/// `u'(x)` for general `a`.
///
/// When `tilde_alpha` and `tilde_beta` share a sign, `tilde_gamma_+` has no
/// cancellation and `u' = tilde_gamma / (8 (x^2+a)^3 tilde_gamma_+)` is
/// used; this covers the neighbourhood of `x = 1`, where both are negative.
/// Otherwise `tilde_gamma_-` is a sum of like-signed terms and
/// `u' = tilde_gamma_- / (8 (x^2+a)^3 (x^2-1)^3)`.
pub fn eval_u_prime<T: Real>(a: T, x: T) -> T {
    let eight = T::lit(8.0);
    let q = x * x + a;
    let s = q.sqrt();
    let ta = poly::tilde_alpha(a, x);
    let tb = (T::one() + a).sqrt() * poly::tilde_beta_reduced(a, x);
    if ta * tb > T::zero() {
        poly::tilde_gamma(a, x) / (eight * q * q * q * (ta + eight * s * tb))
    } else {
        let d = x * x - T::one();
        (ta - eight * s * tb) / (eight * q * q * q * d * d * d)
    }
}

/// `a_g(g) = (1 + sqrt(1 + 4g^2)) / (2g^2)`.
pub fn find_a_g<T: Real>(g: T) -> T {
    coupling_bound(g)
}

fn to_rational(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite input")
}

fn rational_to_f64(v: &BigRational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// Relative residuals of the three polynomial identities at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityResiduals {
    /// `alpha^2 - 64(x^2+a) beta^2 = (x^2-1)^2 gamma`, relative to the size of the left terms.
    pub gamma_factorisation: f64,
    /// `tilde_alpha^2 - 64(x^2+a) tilde_beta^2 = (x^2-1)^3 tilde_gamma`, likewise.
    pub tilde_gamma_factorisation: f64,
    /// Coefficient-table `tilde_gamma` against the exact quotient
    /// `(tilde_alpha^2 - 64(x^2+a) tilde_beta^2) / (x^2-1)^3`, relative to the
    /// sum of absolute table terms. `0` at `x = 1`, where the quotient is undefined.
    pub tilde_gamma_table: f64,
}

/// Both identities in floating point, plus the coefficient table against the
/// factorisation evaluated exactly in rationals at the same `(a, x)`.
pub fn identity_residuals(a: f64, x: f64) -> IdentityResiduals {
    let q = x * x + a;
    let d = x * x - 1.0;

    let al = poly::alpha(a, x);
    let br = poly::beta_reduced(a, x);
    let left = al * al - 64.0 * q * (1.0 + a) * br * br;
    let scale = al * al + 64.0 * q * (1.0 + a) * br * br;
    let gamma_factorisation = (left - d * d * poly::gamma(a, x)).abs() / scale.max(f64::MIN_POSITIVE);

    let ta = poly::tilde_alpha(a, x);
    let tb = poly::tilde_beta_reduced(a, x);
    let left = ta * ta - 64.0 * q * (1.0 + a) * tb * tb;
    let scale = ta * ta + 64.0 * q * (1.0 + a) * tb * tb;
    let tilde_gamma_factorisation = (left - d * d * d * poly::tilde_gamma(a, x)).abs() / scale.max(f64::MIN_POSITIVE);

    let tilde_gamma_table = if x == 1.0 {
        0.0
    } else {
        let (ar, xr) = (to_rational(a), to_rational(x));
        let dr = xr.clone() * xr.clone() - BigRational::from_integer(BigInt::from(1));
        let exact = poly::tilde_gamma_product(ar, xr) / (dr.clone() * dr.clone() * dr);
        let t = x * x;
        let abs_terms: f64 = (0..7)
            .map(|l| {
                let c: Vec<f64> = poly::TILDE_GAMMA_COEFFS[l].iter().map(|&v| (v as f64).abs()).collect();
                poly::horner(&c, a) * t.powi(l as i32)
            })
            .sum();
        (poly::tilde_gamma(a, x) - rational_to_f64(&exact)).abs() / abs_terms.max(f64::MIN_POSITIVE)
    };

    IdentityResiduals {
        gamma_factorisation,
        tilde_gamma_factorisation,
        tilde_gamma_table,
    }
}

/// Largest residuals over a seeded random sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentitySweep {
    pub points: usize,
    pub max_gamma_factorisation: f64,
    pub max_tilde_gamma_factorisation: f64,
    pub max_tilde_gamma_table: f64,
}

/// [`identity_residuals`] at `points` random `(a, x)` in `(0, 5] x [0, 4]`.
pub fn identity_sweep(points: usize, seed: u64) -> IdentitySweep {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = IdentitySweep {
        points,
        max_gamma_factorisation: 0.0,
        max_tilde_gamma_factorisation: 0.0,
        max_tilde_gamma_table: 0.0,
    };
    for _ in 0..points {
        let a = 5.0 - rng.gen_range(0.0..5.0);
        let x = rng.gen_range(0.0..=4.0);
        let r = identity_residuals(a, x);
        out.max_gamma_factorisation = out.max_gamma_factorisation.max(r.gamma_factorisation);
        out.max_tilde_gamma_factorisation = out.max_tilde_gamma_factorisation.max(r.tilde_gamma_factorisation);
        out.max_tilde_gamma_table = out.max_tilde_gamma_table.max(r.tilde_gamma_table);
    }
    out
}

/// Exact check of both factorisations and the coefficient table at a
/// rational point.
pub fn identities_hold_exactly(a: &BigRational, x: &BigRational) -> bool {
    let one = BigRational::from_integer(BigInt::from(1));
    let d = x.clone() * x.clone() - one;
    let g_ok = poly::gamma_product(a.clone(), x.clone()) == d.clone() * d.clone() * poly::gamma(a.clone(), x.clone());
    let tg_ok = poly::tilde_gamma_product(a.clone(), x.clone())
        == d.clone() * d.clone() * d * poly::tilde_gamma(a.clone(), x.clone());
    g_ok && tg_ok
}

/// Outcome of the `a = 2` positivity argument on a set of nodes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositivityReport {
    pub nodes: usize,
    /// Nodes where `C1 sqrt(x^2+2) + C2 <= 0`.
    pub combination_failures: Vec<f64>,
    /// Nodes where `(4800x^2 + 1152) 8 sqrt3 > 1152 x sqrt(x^2+2)` fails.
    pub inequality_failures: Vec<f64>,
    /// Nodes where the `a = 2` closed form of `u'` is not negative.
    pub u_prime_failures: Vec<f64>,
    /// Largest relative gap between the `a = 2` and general `u'`.
    pub max_u_prime_mismatch: f64,
}

impl PositivityReport {
    pub fn passed(&self, mismatch_limit: f64) -> bool {
        self.combination_failures.is_empty()
            && self.inequality_failures.is_empty()
            && self.u_prime_failures.is_empty()
            && self.max_u_prime_mismatch <= mismatch_limit
    }
}

/// `count` evenly spaced nodes on `(0, x_max]`.
pub fn open_grid(x_max: f64, count: usize) -> Vec<f64> {
    (1..=count).map(|k| x_max * k as f64 / count as f64).collect()
}

pub fn verify_a2_positivity(nodes: &[f64]) -> PositivityReport {
    let s3 = 3f64.sqrt();
    let mut report = PositivityReport {
        nodes: nodes.len(),
        combination_failures: Vec::new(),
        inequality_failures: Vec::new(),
        u_prime_failures: Vec::new(),
        max_u_prime_mismatch: 0.0,
    };
    for &x in nodes {
        let s = (x * x + 2.0).sqrt();
        if !(sombrero::c1(x) * s + sombrero::c2(x) > 0.0) {
            report.combination_failures.push(x);
        }
        if !((4800.0 * x * x + 1152.0) * 8.0 * s3 > 1152.0 * x * s) {
            report.inequality_failures.push(x);
        }
        let special = sombrero::u_prime(x);
        if !(special < 0.0) {
            report.u_prime_failures.push(x);
        }
        let general = eval_u_prime(2.0, x);
        let rel = (special - general).abs() / special.abs().max(f64::MIN_POSITIVE);
        report.max_u_prime_mismatch = report.max_u_prime_mismatch.max(rel);
    }
    report
}

/// Location and value of `sup_x u'(a, x)` over `(0, x_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupSample {
    pub x: f64,
    pub value: f64,
}

/// Dense scan with `samples` nodes, then golden-section refinement on the
/// two intervals around the best node.
pub fn sup_u_prime(a: f64, x_max: f64, samples: usize) -> SupSample {
    let nodes = open_grid(x_max, samples);
    let f = |x: f64| eval_u_prime(a, x);
    let (k, best) =
        nodes.iter().map(|&x| f(x)).enumerate().fold(
            (0, f64::NEG_INFINITY),
            |acc, (k, v)| if v > acc.1 { (k, v) } else { acc },
        );
    let step = x_max / samples as f64;
    let mut lo = (nodes[k] - step).max(step * 1e-3);
    let mut hi = (nodes[k] + step).min(x_max);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - ratio * (hi - lo);
    let mut d = lo + ratio * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - ratio * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + ratio * (hi - lo);
            fd = f(d);
        }
    }
    let candidates = [(nodes[k], best), (c, fc), (d, fd)];
    let (x, value) = candidates
        .into_iter()
        .fold((nodes[k], best), |acc, (x, v)| if v > acc.1 { (x, v) } else { acc });
    SupSample { x, value }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalValue {
    pub a_c: f64,
    /// Final bracket; `u'` has a positive sup at `lo` and a negative one at `hi`.
    pub lo: f64,
    pub hi: f64,
    pub width: f64,
    pub bisections: usize,
}

/// Settings of [`find_a_c_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalSearch {
    pub lo: f64,
    pub hi: f64,
    pub x_max: f64,
    pub samples: usize,
    pub width: f64,
}

impl Default for CriticalSearch {
    fn default() -> Self {
        Self {
            lo: 0.3,
            hi: 1.0,
            x_max: 5.0,
            samples: 4000,
            width: 1e-4,
        }
    }
}

/// Smallest `a` with `u' < 0` on all of `(0, x_max]`, by bisection on the
/// sign of `sup_x u'`.
pub fn find_a_c() -> Result<CriticalValue> {
    find_a_c_with(&CriticalSearch::default())
}

pub fn find_a_c_with(cfg: &CriticalSearch) -> Result<CriticalValue> {
    let sup = |a: f64| sup_u_prime(a, cfg.x_max, cfg.samples).value;
    let (mut lo, mut hi) = (cfg.lo, cfg.hi);
    if !(sup(lo) > 0.0 && sup(hi) < 0.0) {
        return Err(Error::Bracket { lo, hi });
    }
    let mut bisections = 0;
    while hi - lo > cfg.width {
        let mid = 0.5 * (lo + hi);
        if sup(mid) < 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        bisections += 1;
    }
    Ok(CriticalValue {
        a_c: 0.5 * (lo + hi),
        lo,
        hi,
        width: hi - lo,
        bisections,
    })
}

/// Which plane a curve lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Plane {
    /// `(x, a)`.
    X,
    /// `(z, a)` with `z = x^2 / a`.
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CurveKind {
    Beta,
    Gamma,
    TildeAlpha,
    TildeBeta,
    TildeGamma,
}

impl CurveKind {
    pub const ALL: [CurveKind; 5] = [
        CurveKind::Beta,
        CurveKind::Gamma,
        CurveKind::TildeAlpha,
        CurveKind::TildeBeta,
        CurveKind::TildeGamma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Beta => "beta",
            Self::Gamma => "gamma",
            Self::TildeAlpha => "tilde_alpha",
            Self::TildeBeta => "tilde_beta",
            Self::TildeGamma => "tilde_gamma",
        }
    }

    pub fn plane(self) -> Plane {
        match self {
            Self::Beta | Self::Gamma => Plane::X,
            _ => Plane::Z,
        }
    }

    /// Upper end of the coordinate range that is searched for roots.
    pub fn coordinate_max(self) -> f64 {
        match self.plane() {
            Plane::X => 2.0,
            Plane::Z => 10.0,
        }
    }

    /// The polynomial whose zero set is the curve, as a function of the
    /// plane coordinate. Positive constant factors are dropped.
    pub fn eval(self, a: f64, c: f64) -> f64 {
        match self {
            Self::Beta => poly::beta_reduced(a, c),
            Self::Gamma => poly::gamma(a, c),
            Self::TildeAlpha => poly::tilde_alpha(a, (a * c).sqrt()),
            Self::TildeBeta => poly::tilde_beta_reduced(a, (a * c).sqrt()),
            Self::TildeGamma => poly::tilde_gamma(a, (a * c).sqrt()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Curve {
    pub kind: CurveKind,
    pub plane: Plane,
    /// Largest `a` at which a root was found.
    pub a_top: f64,
    /// `(a, coordinate)` pairs.
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootNotBracketed {
    pub kind: CurveKind,
    pub a: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionReport {
    pub curves: Vec<Curve>,
    pub a_c: CriticalValue,
    /// `(g, a_g(g))` over `g` in `[0.5, 5]`.
    pub a_g: Vec<(f64, f64)>,
    pub unbracketed: Vec<RootNotBracketed>,
    /// Points of the `gamma = 0` curve where `beta > 0`, contradicting the
    /// ordering of the two curves.
    pub ordering_violations: Vec<(f64, f64)>,
}

const SCAN_POINTS: usize = 2000;
const A_MIN: f64 = 1e-3;
const A_SCAN_MAX: f64 = 1.0;

/// All roots of `kind` in the coordinate at fixed `a`, by bisection
/// between sign changes of a uniform scan.
pub fn curve_roots(kind: CurveKind, a: f64) -> Vec<f64> {
    let nodes = open_grid(kind.coordinate_max(), SCAN_POINTS);
    let f = |c: f64| kind.eval(a, c);
    let mut roots = Vec::new();
    let mut prev = (nodes[0], f(nodes[0]));
    for &c in &nodes[1..] {
        let v = f(c);
        if v == 0.0 {
            roots.push(c);
        } else if prev.1 != 0.0 && (v > 0.0) != (prev.1 > 0.0) {
            let (mut lo, mut hi, flo) = (prev.0, c, prev.1);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if (f(mid) > 0.0) == (flo > 0.0) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        prev = (c, v);
    }
    roots
}

fn log_space(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let (l0, l1) = (lo.ln(), hi.ln());
    (0..count)
        .map(|k| (l0 + (l1 - l0) * k as f64 / (count - 1) as f64).exp())
        .collect()
}

/// Largest `a` in `[A_MIN, A_SCAN_MAX]` at which `kind` has a root, or `None`.
fn curve_a_top(kind: CurveKind) -> Option<f64> {
    let has = |a: f64| !curve_roots(kind, a).is_empty();
    let scan = log_space(A_MIN, A_SCAN_MAX, 200);
    let k = scan.iter().rposition(|&a| has(a))?;
    if k + 1 == scan.len() {
        return Some(scan[k]);
    }
    let (mut lo, mut hi) = (scan[k], scan[k + 1]);
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if has(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

/// Samples every curve at `resolution` values of `a`, log-spaced from
/// `1e-3` up to the top of the curve, and computes `a_c` and `a_g`.
pub fn trace_curves(resolution: usize) -> Result<RegionReport> {
    if resolution < 50 {
        return Err(Error::InvalidParameter {
            name: "resolution",
            value: resolution as f64,
            constraint: "at least 50 samples per curve",
        });
    }
    let mut curves = Vec::new();
    let mut unbracketed = Vec::new();
    let mut ordering_violations = Vec::new();
    for kind in CurveKind::ALL {
        let Some(a_top) = curve_a_top(kind) else {
            unbracketed.push(RootNotBracketed { kind, a: A_MIN });
            continue;
        };
        let mut points = Vec::new();
        for a in log_space(A_MIN, a_top, resolution) {
            let roots = curve_roots(kind, a);
            if roots.is_empty() {
                unbracketed.push(RootNotBracketed { kind, a });
            }
            for c in roots {
                if kind == CurveKind::Gamma && poly::beta_reduced(a, c) > 1e-12 {
                    ordering_violations.push((a, c));
                }
                points.push((a, c));
            }
        }
        curves.push(Curve {
            kind,
            plane: kind.plane(),
            a_top,
            points,
        });
    }
    let a_g = (0..resolution)
        .map(|k| {
            let g = 0.5 + 4.5 * k as f64 / (resolution - 1) as f64;
            (g, find_a_g(g))
        })
        .collect();
    Ok(RegionReport {
        curves,
        a_c: find_a_c()?,
        a_g,
        unbracketed,
        ordering_violations,
    })
}
