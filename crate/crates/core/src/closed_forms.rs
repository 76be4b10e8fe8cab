//! Closed-form pieces of the model `V = (g^2/2)(x^2-1)^2(x^2+a)`.
//!
//! The ground state is written as `psi = exp(-g S)` with `g S = g S0 + S1 + ...`;
//! `S0` and `S1` are the first two orders, `E0 = sqrt(1+a)` the leading
//! energy coefficient, and `u`, `ghat`, `w` the correction potentials under
//! which the trial function is an exact eigenfunction.
//!
//! Public evaluators take `x >= 0` only. The model is even, and reflecting
//! negative inputs is left to callers.

use crate::error::{Error, Result};
use crate::polynomials as poly;
use crate::scalar::Real;

/// Model parameters and the constants derived from them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialParams<T> {
    g: T,
    a: T,
    e0: T,
    gamma: T,
    a_g: T,
}

impl<T: Real> PotentialParams<T> {
    pub fn new(g: T, a: T) -> Result<Self> {
        if !(g.is_finite() && g > T::zero()) {
            return Err(Error::InvalidParameter {
                name: "g",
                value: g.as_f64(),
                constraint: "coupling must be finite and positive",
            });
        }
        if !(a.is_finite() && a > T::zero()) {
            return Err(Error::InvalidParameter {
                name: "a",
                value: a.as_f64(),
                constraint: "shape parameter must be finite and positive",
            });
        }
        let e0 = (T::one() + a).sqrt();
        let gamma = (g * a - e0) / (g * a + e0);
        Ok(Self {
            g,
            a,
            e0,
            gamma,
            a_g: coupling_bound(g),
        })
    }

    pub fn g(&self) -> T {
        self.g
    }

    pub fn a(&self) -> T {
        self.a
    }

    /// `E0 = sqrt(1+a)`.
    pub fn e0(&self) -> T {
        self.e0
    }

    /// Zeroth-order energy `g E0`; also the first entry of every energy sequence.
    pub fn leading_energy(&self) -> T {
        self.g * self.e0
    }

    /// Mixing coefficient `Gamma = (g a - sqrt(1+a)) / (g a + sqrt(1+a))`.
    pub fn gamma(&self) -> T {
        self.gamma
    }

    /// `a_g = (1 + sqrt(1+4g^2)) / (2g^2)`; `Gamma > 0` iff `a > a_g`.
    pub fn a_g(&self) -> T {
        self.a_g
    }

    /// Smallest coupling with `Gamma > 0` at this `a`: `sqrt(1+a)/a`.
    pub fn g_min(&self) -> T {
        self.e0 / self.a
    }

    pub fn ensure_positive_gamma(&self) -> Result<()> {
        if self.gamma > T::zero() {
            Ok(())
        } else {
            Err(Error::ConvergenceDomain {
                g: self.g.as_f64(),
                a: self.a.as_f64(),
                gamma: self.gamma.as_f64(),
                g_min: self.g_min().as_f64(),
                a_g: self.a_g.as_f64(),
            })
        }
    }
}

/// `a_g(g) = (1 + sqrt(1+4g^2)) / (2g^2)`.
pub fn coupling_bound<T: Real>(g: T) -> T {
    let two = T::lit(2.0);
    let g2 = g * g;
    (T::one() + (T::one() + two * two * g2).sqrt()) / (two * g2)
}

fn check_x<T: Real>(x: T) -> Result<()> {
    if x >= T::zero() {
        Ok(())
    } else {
        Err(Error::NegativeCoordinate(x.as_f64()))
    }
}

/// `V(x) = (g^2/2)(x^2-1)^2(x^2+a)`, for any real `x`.
pub fn eval_potential<T: Real>(p: &PotentialParams<T>, x: T) -> T {
    let x2 = x * x;
    let d = x2 - T::one();
    T::lit(0.5) * p.g * p.g * d * d * (x2 + p.a)
}

/// `S0(x)` for any real `x`, using
/// `S0 = x s (2x^2 + a - 4)/8 - a(a+4)/8 ln(x + s)`, `s = sqrt(x^2+a)`.
/// For `x < 0` the logarithm is rewritten as `ln a - ln(|x| + s)` to avoid
/// cancellation in `x + s`.
pub(crate) fn s0_any<T: Real>(p: &PotentialParams<T>, x: T) -> T {
    let a = p.a;
    let eight = T::lit(8.0);
    let s = (x * x + a).sqrt();
    let log_term = if x >= T::zero() {
        (x + s).ln()
    } else {
        a.ln() - (s - x).ln()
    };
    x * s * (T::lit(2.0) * x * x + a - T::lit(4.0)) / eight - a * (a + T::lit(4.0)) / eight * log_term
}

/// `S0(x)`.
pub fn eval_s0<T: Real>(p: &PotentialParams<T>, x: T) -> Result<T> {
    check_x(x)?;
    Ok(s0_any(p, x))
}

/// `S0(-x)`, the exponent of the mirrored branch.
pub fn eval_s0_reflected<T: Real>(p: &PotentialParams<T>, x: T) -> Result<T> {
    check_x(x)?;
    Ok(s0_any(p, -x))
}

/// `S0'(x) = (x^2-1) sqrt(x^2+a)`.
pub fn eval_s0_prime<T: Real>(p: &PotentialParams<T>, x: T) -> Result<T> {
    check_x(x)?;
    Ok((x * x - T::one()) * (x * x + p.a).sqrt())
}

/// `S1(x) = ln[(x+1)(x^2+a)^(1/4)] + (1/2) ln[(r s + a + x)/(r s + a - x)]`, `r = sqrt(1+a)`.
pub fn eval_s1<T: Real>(p: &PotentialParams<T>, x: T) -> Result<T> {
    check_x(x)?;
    Ok(s1_unchecked(p, x))
}

pub(crate) fn s1_unchecked<T: Real>(p: &PotentialParams<T>, x: T) -> T {
    let a = p.a;
    let s = (x * x + a).sqrt();
    let rs = p.e0 * s;
    (x + T::one()).ln() + T::lit(0.25) * (x * x + a).ln() + T::lit(0.5) * ((rs + a + x) / (rs + a - x)).ln()
}

/// How `S1'` treats the 0/0 point at `x = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SingularityHandling<T> {
    /// Use a second-order Taylor expansion about `x = 1` when `|x - 1| < width`.
    Series { width: T },
    /// Refuse inputs with `|x - 1| < guard`.
    Reject { guard: T },
}

impl<T: Real> Default for SingularityHandling<T> {
    fn default() -> Self {
        SingularityHandling::Series { width: T::lit(1e-4) }
    }
}

/// `S1'(x) = [x(3x^2+2a-1) - 2 sqrt(1+a) sqrt(x^2+a)] / [2(x^2-1)(x^2+a)]`,
/// with the removable singularity at `x = 1` handled by series.
pub fn eval_s1_prime<T: Real>(p: &PotentialParams<T>, x: T) -> Result<T> {
    eval_s1_prime_with(p, x, SingularityHandling::default())
}

pub fn eval_s1_prime_with<T: Real>(p: &PotentialParams<T>, x: T, handling: SingularityHandling<T>) -> Result<T> {
    check_x(x)?;
    let t = x - T::one();
    match handling {
        SingularityHandling::Series { width } if t.abs() < width => Ok(s1_prime_series(p, t)),
        SingularityHandling::Reject { guard } if t.abs() < guard => Err(Error::RemovableSingularity {
            x: x.as_f64(),
            guard: guard.as_f64(),
        }),
        _ => Ok(s1_prime_raw(p, x)),
    }
}

fn s1_prime_raw<T: Real>(p: &PotentialParams<T>, x: T) -> T {
    let a = p.a;
    let two = T::lit(2.0);
    let s = (x * x + a).sqrt();
    let num = x * (T::lit(3.0) * x * x + two * a - T::one()) - two * p.e0 * s;
    num / (two * (x * x - T::one()) * (x * x + a))
}

/// Quotient of the Taylor expansions of numerator and denominator about x = 1,
/// kept to second order in `t = x - 1`.
fn s1_prime_series<T: Real>(p: &PotentialParams<T>, t: T) -> T {
    let a = p.a;
    let one = T::one();
    let ap1 = a + one;
    // Numerator derivatives at x = 1 (value vanishes because E0 = S0''(1)/2).
    let n1 = T::lit(2.0) * a + T::lit(6.0);
    let n2 = T::lit(18.0) - T::lit(2.0) * a / ap1;
    let n3 = T::lit(18.0) + T::lit(6.0) * a / (ap1 * ap1);
    // Denominator 2(x^2-1)(x^2+a) derivatives at x = 1.
    let d1 = T::lit(4.0) * ap1;
    let d2 = T::lit(4.0) * (a + T::lit(5.0));
    let d3 = T::lit(48.0);
    let (c0, c1, c2) = (n1, n2 / T::lit(2.0), n3 / T::lit(6.0));
    let (e0, e1, e2) = (d1, d2 / T::lit(2.0), d3 / T::lit(6.0));
    let q0 = c0 / e0;
    let q1 = (c1 - q0 * e1) / e0;
    let q2 = (c2 - q0 * e2 - q1 * e1) / e0;
    q0 + t * (q1 + t * q2)
}

/// `u = (S1'^2 - S1'')/2` from its rational closed form.
///
/// With `beta > 0` the factorised quotient `gamma / (8 (x^2+a)^2 gamma_+)`
/// is used; it has no `(x^2-1)^2` cancellation. Otherwise
/// `(alpha - 8 sqrt(x^2+a) beta) / (8 (x^2-1)^2 (x^2+a)^2)` is a sum of
/// non-negative terms and is evaluated directly.
pub fn eval_u<T: Real>(p: &PotentialParams<T>, x: T) -> Result<T> {
    check_x(x)?;
    Ok(u_unchecked(p, x))
}

pub(crate) fn u_unchecked<T: Real>(p: &PotentialParams<T>, x: T) -> T {
    let a = p.a;
    let eight = T::lit(8.0);
    let s = (x * x + a).sqrt();
    let q = x * x + a;
    let alpha = poly::alpha(a, x);
    let beta = p.e0 * poly::beta_reduced(a, x);
    if beta > T::zero() {
        let gamma_plus = alpha + eight * s * beta;
        poly::gamma(a, x) / (eight * q * q * gamma_plus)
    } else {
        let d = x * x - T::one();
        (alpha - eight * s * beta) / (eight * d * d * q * q)
    }
}

/// `phi_-(x)/phi_+(x) = exp(g [S0(x) - S0(-x)])`.
pub(crate) fn mirror_ratio<T: Real>(p: &PotentialParams<T>, x: T) -> T {
    (p.g * (s0_any(p, x) - s0_any(p, -x))).exp()
}

fn ghat_inner<T: Real>(p: &PotentialParams<T>, x: T) -> T {
    let rho = mirror_ratio(p, x);
    p.leading_energy() * T::lit(2.0) * p.gamma * rho / (T::one() + p.gamma * rho)
}

/// `ghat(x) = g E0 2 Gamma phi_- / (phi_+ + Gamma phi_-)` on `[0, 1)`, zero for `x >= 1`.
pub fn eval_ghat<T: Real>(p: &PotentialParams<T>, x: T) -> Result<T> {
    check_x(x)?;
    p.ensure_positive_gamma()?;
    if x < T::one() {
        Ok(ghat_inner(p, x))
    } else {
        Ok(T::zero())
    }
}

/// Left limit `ghat(1-)`, the height of the jump at `x = 1`.
pub fn ghat_left_limit<T: Real>(p: &PotentialParams<T>) -> Result<T> {
    p.ensure_positive_gamma()?;
    Ok(ghat_inner(p, T::one()))
}

/// `w = u + ghat`.
pub fn eval_w<T: Real>(p: &PotentialParams<T>, x: T) -> Result<T> {
    Ok(eval_u(p, x)? + eval_ghat(p, x)?)
}

/// The `a = 2` specialisations. These are independent routes to the same
/// quantities and serve as cross-checks of the general forms.
pub mod sombrero {
    use crate::polynomials as poly;
    use crate::scalar::Real;

    /// `S0 = (x/4)(x^2-1) sqrt(x^2+2) - (3/2) ln(x + sqrt(x^2+2))`.
    pub fn s0<T: Real>(x: T) -> T {
        let s = (x * x + T::lit(2.0)).sqrt();
        x / T::lit(4.0) * (x * x - T::one()) * s - T::lit(1.5) * (x + s).ln()
    }

    /// `S1 = ln(x+1) + (1/4) ln(x^2+2) + (1/2) ln[(2+x+sqrt(3(x^2+2)))/(2-x+sqrt(3(x^2+2)))]`.
    pub fn s1<T: Real>(x: T) -> T {
        let two = T::lit(2.0);
        let r = (T::lit(3.0) * (x * x + two)).sqrt();
        (x + T::one()).ln() + T::lit(0.25) * (x * x + two).ln() + T::lit(0.5) * ((two + x + r) / (two - x + r)).ln()
    }

    /// `B = 8 sqrt(3) x (x^2+1) sqrt(x^2+2)`.
    pub fn b<T: Real>(x: T) -> T {
        T::lit(8.0) * T::lit(3.0).sqrt() * x * (x * x + T::one()) * (x * x + T::lit(2.0)).sqrt()
    }

    /// `u = (3/8) N(x) / [(x^2+2)^2 (A + B)]`.
    pub fn u<T: Real>(x: T) -> T {
        let q = x * x + T::lit(2.0);
        T::lit(0.375) * poly::u_numerator_sombrero(x) / (q * q * (poly::a_sombrero(x) + b(x)))
    }

    pub fn c1<T: Real>(x: T) -> T {
        poly::c1_sombrero(x)
    }

    pub fn c2<T: Real>(x: T) -> T {
        T::lit(8.0) * T::lit(3.0).sqrt() * poly::c2_sombrero_reduced(x)
    }

    /// `u' = -(3/8) (C1 s + C2) / [s (alpha + beta s)^2]` with `s = sqrt(x^2+2)`,
    /// `alpha = (x^2+2)^2 A`, `beta = 8 sqrt(3) x (x^2+1)(x^2+2)^2`.
    pub fn u_prime<T: Real>(x: T) -> T {
        let q = x * x + T::lit(2.0);
        let s = q.sqrt();
        let alpha = q * q * poly::a_sombrero(x);
        let beta = T::lit(8.0) * T::lit(3.0).sqrt() * x * (x * x + T::one()) * q * q;
        let d = alpha + beta * s;
        -T::lit(0.375) * (c1(x) * s + c2(x)) / (s * d * d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(g: f64, a: f64) -> PotentialParams<f64> {
        PotentialParams::new(g, a).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn construction_rejects_bad_parameters() {
        assert!(PotentialParams::new(0.0, 2.0).is_err());
        assert!(PotentialParams::new(1.0, -1.0).is_err());
        assert!(PotentialParams::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn derived_constants() {
        for &a in &[0.3, 1.0, 2.0, 7.5] {
            let q = p(1.3, a);
            assert!((q.e0() * q.e0() - 1.0 - a).abs() <= 4.0 * f64::EPSILON * (1.0 + a));
        }
        let q = p(1.0, 2.0);
        let s3 = 3f64.sqrt();
        assert!((q.gamma() - (2.0 - s3) / (2.0 + s3)).abs() < 1e-15);
        assert!((q.gamma() - 0.071797).abs() < 1e-6);
        assert!((p(1.0, 1.0).a_g() - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn gamma_sign_tracks_coupling_bound() {
        for &a in &[0.5, 1.0, 2.0, 4.0] {
            for &g in &[0.3, 0.8, 0.9, 1.5, 3.0] {
                let q = p(g, a);
                assert_eq!(q.gamma() > 0.0, g > (1.0 + a).sqrt() / a, "g={g} a={a}");
                assert_eq!(q.gamma() > 0.0, a > q.a_g(), "g={g} a={a}");
            }
        }
        assert!(matches!(
            p(1.0, 1.0).ensure_positive_gamma(),
            Err(Error::ConvergenceDomain { .. })
        ));
    }

    #[test]
    fn potential_values() {
        let q = p(1.0, 2.0);
        assert_eq!(eval_potential(&q, 1.0), 0.0);
        assert_eq!(eval_potential(&q, 0.0), 1.0);
        assert_eq!(eval_potential(&q, 2.0), 27.0);
        for &x in &[0.1f64, 0.7, 1.3, 2.9] {
            let expanded = (x.powi(6) - 3.0 * x * x + 2.0) / 2.0;
            assert!(rel(eval_potential(&q, x), expanded) < 1e-14);
            assert_eq!(eval_potential(&q, x), eval_potential(&q, -x));
        }
    }

    #[test]
    fn s0_spot_values() {
        let q = p(1.0, 2.0);
        let s3 = 3f64.sqrt();
        assert!((eval_s0(&q, 1.0).unwrap() + 1.5 * (1.0 + s3).ln()).abs() < 1e-14);
        assert!((eval_s0(&q, 1.0).unwrap() + 1.50758).abs() < 1e-5);
        assert!((eval_s0(&q, 0.0).unwrap() + 0.75 * 2f64.ln()).abs() < 1e-15);
        assert!((eval_s0(&q, 0.0).unwrap() + 0.51986).abs() < 1e-5);
    }

    #[test]
    fn s0_matches_literal_integral_form() {
        // (1/4) x s^3 - (a/8 + 1/2) x s - a (a/8 + 1/2) ln(x + s)
        for &a in &[0.4, 1.0, 2.0, 5.0] {
            let q = p(1.0, a);
            for &x in &[0.0, 0.3, 1.0, 2.2, 4.0] {
                let s = (x * x + a).sqrt();
                let lit = 0.25 * x * s.powi(3) - (a / 8.0 + 0.5) * x * s - a * (a / 8.0 + 0.5) * (x + s).ln();
                assert!((eval_s0(&q, x).unwrap() - lit).abs() < 1e-12 * (1.0 + lit.abs()));
            }
        }
    }

    #[test]
    fn s0_reflection_is_odd_plus_constant() {
        for &a in &[0.5, 2.0, 3.0] {
            let q = p(1.0, a);
            let s00 = eval_s0(&q, 0.0).unwrap();
            for &x in &[0.0, 0.25, 0.8, 1.0] {
                let lhs = eval_s0_reflected(&q, x).unwrap();
                let rhs = 2.0 * s00 - eval_s0(&q, x).unwrap();
                assert!((lhs - rhs).abs() < 1e-14, "a={a} x={x}");
            }
        }
    }

    #[test]
    fn s0_prime_matches_central_difference() {
        let q = p(1.0, 2.0);
        let h = 1e-5;
        for k in 0..1000 {
            let x = 4.0 * (k as f64 + 0.5) / 1000.0;
            let fd = (s0_any(&q, x + h) - s0_any(&q, x - h)) / (2.0 * h);
            let exact = eval_s0_prime(&q, x).unwrap();
            assert!((fd - exact).abs() <= 1e-6 * exact.abs().max(1e-2), "x={x}");
        }
    }

    #[test]
    fn s1_at_origin() {
        let q = p(1.0, 2.0);
        assert!((eval_s1(&q, 0.0).unwrap() - 0.25 * 2f64.ln()).abs() < 1e-15);
        assert!((eval_s1(&q, 0.0).unwrap() - 0.17329).abs() < 1e-5);
    }

    #[test]
    fn s1_prime_matches_central_difference() {
        let q = p(1.0, 2.0);
        let h = 1e-5;
        for k in 0..1000 {
            let x = 4.0 * (k as f64 + 0.5) / 1000.0;
            if (x - 1.0).abs() < 0.01 {
                continue;
            }
            let fd = (s1_unchecked(&q, x + h) - s1_unchecked(&q, x - h)) / (2.0 * h);
            let exact = eval_s1_prime(&q, x).unwrap();
            assert!((fd - exact).abs() <= 1e-6 * exact.abs().max(1e-2), "x={x}");
        }
    }

    #[test]
    fn s1_prime_series_is_continuous_across_one() {
        for &a in &[0.7, 2.0, 3.0] {
            let q = p(1.0, a);
            // Just outside the series band the raw quotient is still accurate.
            let outside = 1.0 + 1.5e-4;
            let inside = 1.0 + 0.99e-4;
            let raw = eval_s1_prime(&q, outside).unwrap();
            let series = s1_prime_series(&q, outside - 1.0);
            assert!(rel(series, raw) < 1e-9, "a={a}: {series} vs {raw}");
            let fd = (s1_unchecked(&q, 1.0 + 1e-5) - s1_unchecked(&q, 1.0 - 1e-5)) / 2e-5;
            assert!(rel(eval_s1_prime(&q, 1.0).unwrap(), fd) < 1e-8);
            assert!(eval_s1_prime(&q, inside).unwrap().is_finite());
        }
        // (2a + 6) / (4(a+1)) at a = 2.
        assert!((eval_s1_prime(&p(1.0, 2.0), 1.0).unwrap() - 10.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn s1_prime_reject_mode() {
        let q = p(1.0, 2.0);
        let mode = SingularityHandling::Reject { guard: 1e-3 };
        assert!(matches!(
            eval_s1_prime_with(&q, 1.0005, mode),
            Err(Error::RemovableSingularity { .. })
        ));
        assert!(eval_s1_prime_with(&q, 1.01, mode).is_ok());
    }

    #[test]
    fn u_at_origin() {
        let q = p(1.0, 2.0);
        assert_eq!(eval_u(&q, 0.0).unwrap(), 1.125);
        assert_eq!(sombrero::u(0.0), 1.125);
    }

    #[test]
    fn u_matches_finite_difference_definition() {
        // u = (S1'^2 - S1'')/2 with S1'' from a central difference of S1'.
        for &a in &[0.8, 2.0, 3.0] {
            let q = p(1.0, a);
            let h = 1e-5;
            for k in 0..400 {
                let x = 4.0 * (k as f64 + 0.5) / 400.0;
                if (x - 1.0).abs() < 0.01 {
                    continue;
                }
                let s1p = eval_s1_prime(&q, x).unwrap();
                let s1pp = (eval_s1_prime(&q, x + h).unwrap() - eval_s1_prime(&q, x - h).unwrap()) / (2.0 * h);
                let fd = 0.5 * (s1p * s1p - s1pp);
                let u = eval_u(&q, x).unwrap();
                assert!(rel(u, fd) < 1e-5, "a={a} x={x}: {u} vs {fd}");
            }
        }
    }

    #[test]
    fn sombrero_forms_agree_with_general_forms() {
        let q = p(1.0, 2.0);
        for k in 0..=2000 {
            let x = 4.0 * k as f64 / 2000.0;
            let u = eval_u(&q, x).unwrap();
            assert!(rel(u, sombrero::u(x)) < 1e-12, "u at x={x}");
            let s0 = eval_s0(&q, x).unwrap();
            assert!((s0 - sombrero::s0(x)).abs() < 1e-12 * (1.0 + s0.abs()), "S0 at x={x}");
            let s1 = eval_s1(&q, x).unwrap();
            assert!((s1 - sombrero::s1(x)).abs() < 1e-12 * (1.0 + s1.abs()), "S1 at x={x}");
        }
    }

    #[test]
    fn u_positive_and_vanishing_at_infinity() {
        for &a in &[0.1, 0.664, 1.0, 2.0, 3.0, 10.0] {
            let q = p(1.0, a);
            for k in 0..=5000 {
                let x = 10.0 * k as f64 / 5000.0;
                let u = eval_u(&q, x).unwrap();
                assert!(u > 0.0 && u.is_finite(), "a={a} x={x} u={u}");
            }
            assert!(eval_u(&q, 1e4).unwrap() < 1e-6);
        }
    }

    #[test]
    fn ghat_values_and_shape() {
        let q = p(1.0, 2.0);
        let expected = q.leading_energy() * 2.0 * q.gamma() / (1.0 + q.gamma());
        assert!((eval_ghat(&q, 0.0).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.232051).abs() < 1e-6);
        assert_eq!(eval_ghat(&q, 1.5).unwrap(), 0.0);
        let mut prev = f64::INFINITY;
        for k in 0..1000 {
            let x = k as f64 / 1000.0;
            let v = eval_ghat(&q, x).unwrap();
            assert!(v > 0.0 && v < prev, "x={x}");
            prev = v;
        }
        assert!(eval_ghat(&p(1.0, 1.0), 0.5).is_err());
    }

    #[test]
    fn w_values() {
        let q = p(1.0, 2.0);
        assert_eq!(eval_w(&q, 2.0).unwrap(), eval_u(&q, 2.0).unwrap());
        assert!((eval_w(&q, 0.0).unwrap() - 1.357051).abs() < 1e-6);
    }

    #[test]
    fn w_decreasing_inside_the_region() {
        for &(g, a) in &[(1.0, 1.8), (1.0, 2.0), (1.0, 3.0), (3.0, 2.0), (0.88, 2.0)] {
            let q = p(g, a);
            let mut prev = f64::INFINITY;
            for k in 0..=8000 {
                let x = 8.0 * k as f64 / 8000.0;
                let v = eval_w(&q, x).unwrap();
                assert!(v > 0.0 && v < prev, "g={g} a={a} x={x}");
                prev = v;
            }
        }
    }

    #[test]
    fn negative_coordinates_rejected() {
        let q = p(1.0, 2.0);
        assert!(matches!(eval_s0(&q, -0.1), Err(Error::NegativeCoordinate(_))));
        assert!(eval_s1(&q, -0.1).is_err());
        assert!(eval_u(&q, -0.1).is_err());
        assert!(eval_w(&q, -0.1).is_err());
    }

    #[test]
    fn single_precision_smoke() {
        let q = PotentialParams::<f32>::new(1.0, 2.0).unwrap();
        assert!((eval_u(&q, 0.0).unwrap() - 1.125).abs() < 1e-6);
        assert!((eval_s0(&q, 1.0).unwrap() + 1.50758).abs() < 1e-5);
    }
}
