//! Polynomial building blocks of the positivity analysis of `u` and `u'`.
//!
//! Every function here is a polynomial in `x` and `a` with small integer
//! coefficients, so they are generic over [`Field`] and can be evaluated
//! exactly over rationals. The two quantities that carry a `sqrt(1+a)`
//! factor (`beta` and `tilde_beta`) are returned *without* it; the suffix
//! `_reduced` marks those. Multiply by `sqrt(1+a)` to get the real value.

use crate::scalar::Field;

/// Evaluates `c[0] + c[1] t + c[2] t^2 + ...` by Horner's scheme.
pub fn horner<T: Field>(coeffs: &[T], t: T) -> T {
    coeffs
        .iter()
        .rev()
        .fold(T::zero(), |acc, c| acc * t.clone() + c.clone())
}

fn i<T: Field>(v: i64) -> T {
    T::int(v)
}

/// `alpha = 15x^6 + 6(3a-1)x^4 + (8a^2+12a+7)x^2 + 8a^2 + 2a`.
pub fn alpha<T: Field>(a: T, x: T) -> T {
    let a2 = a.clone() * a.clone();
    let coeffs = [
        i::<T>(8) * a2.clone() + i::<T>(2) * a.clone(),
        i::<T>(8) * a2 + i::<T>(12) * a.clone() + i(7),
        i::<T>(6) * (i::<T>(3) * a - i(1)),
        i(15),
    ];
    horner(&coeffs, x.clone() * x)
}

/// `d alpha / dx`.
pub fn alpha_prime<T: Field>(a: T, x: T) -> T {
    let a2 = a.clone() * a.clone();
    let coeffs = [
        i::<T>(2) * (i::<T>(8) * a2 + i::<T>(12) * a.clone() + i(7)),
        i::<T>(24) * (i::<T>(3) * a - i(1)),
        i(90),
    ];
    x.clone() * horner(&coeffs, x.clone() * x)
}

/// `beta / sqrt(1+a) = x (3x^2 + 2a - 1)`.
pub fn beta_reduced<T: Field>(a: T, x: T) -> T {
    x.clone() * (i::<T>(3) * x.clone() * x + i::<T>(2) * a - i(1))
}

/// `d/dx (beta / sqrt(1+a)) = 9x^2 + 2a - 1`.
pub fn beta_reduced_prime<T: Field>(a: T, x: T) -> T {
    i::<T>(9) * x.clone() * x + i::<T>(2) * a - i(1)
}

/// `g1 = 15x^4 + 18x^2 - 1`.
pub fn g1<T: Field>(x: T) -> T {
    horner(&[i(-1), i(18), i(15)], x.clone() * x)
}

/// `g2 = 4(141x^4 + 90x^2 + 1)a^2 + 32(9x^2 + 1)a^3 + 64a^4`, positive for `a > 0`.
pub fn g2<T: Field>(a: T, x: T) -> T {
    let t = x.clone() * x;
    let a_coeffs = [
        T::zero(),
        T::zero(),
        i::<T>(4) * horner(&[i(1), i(90), i(141)], t.clone()),
        i::<T>(32) * horner(&[i(1), i(9)], t),
        i(64),
    ];
    horner(&a_coeffs, a)
}

/// `gamma = g1 (15x^4 + 36 a x^2) + g2`, the reduced form of
/// `alpha^2 - 64 (x^2+a) beta^2 = (x^2-1)^2 gamma`.
pub fn gamma<T: Field>(a: T, x: T) -> T {
    let t = x.clone() * x.clone();
    g1(x.clone()) * (i::<T>(15) * t.clone() * t.clone() + i::<T>(36) * a.clone() * t) + g2(a, x)
}

/// Expanded `[x^4+(a-1)x^2-a] alpha' - [8x^3+4(a-1)x] alpha`.
pub fn tilde_alpha<T: Field>(a: T, x: T) -> T {
    let t = x.clone() * x.clone();
    // Each bracket is x times a polynomial in x^2.
    let c0 = horner(&[i(0), i(14), i(-42), i(-6), i(-30)], t.clone());
    let c1 = horner(&[i(-6), i(18), i(-162), i(-42)], t.clone());
    let c2 = horner(&[i(0), i(-144), i(-48)], t.clone());
    let c3 = horner(&[i(-48), i(-16)], t);
    x * horner(&[c0, c1, c2, c3], a)
}

/// Expanded `(x^2+a)(x^2-1) beta' - [7x^3 + (4a-3)x] beta`, divided by `sqrt(1+a)`.
pub fn tilde_beta_reduced<T: Field>(a: T, x: T) -> T {
    let t = x.clone() * x;
    let c0 = horner(&[i(0), i(-2), i(6), i(-12)], t.clone());
    let c1 = horner(&[i(1), i(-2), i(-15)], t.clone());
    let c2 = horner(&[i(-2), i(-6)], t);
    horner(&[c0, c1, c2], a)
}

/// Integer coefficients of the seven `Gamma~_lambda(a)` polynomials, lowest
/// power of `a` first. `tilde_gamma = sum_lambda Gamma~_lambda(a) x^(2 lambda)`.
pub const TILDE_GAMMA_COEFFS: [&[i64]; 7] = [
    &[0, 0, 0, 64, -192, 0, 256],
    &[0, 0, -228, 0, -1152, 1536],
    &[0, 168, 1068, -960, 3648],
    &[60, -504, 4500, 4992],
    &[-180, 8568, 4644],
    &[3060, 2520],
    &[900],
];

/// `Gamma~_lambda(a)` for `lambda` in `0..=6`.
pub fn tilde_gamma_coefficient<T: Field>(lambda: usize, a: T) -> T {
    let c: Vec<T> = TILDE_GAMMA_COEFFS[lambda].iter().map(|&v| i(v)).collect();
    horner(&c, a)
}

/// `tilde_gamma` assembled from the `Gamma~_lambda` table.
pub fn tilde_gamma<T: Field>(a: T, x: T) -> T {
    let coeffs: Vec<T> = (0..7).map(|l| tilde_gamma_coefficient(l, a.clone())).collect();
    horner(&coeffs, x.clone() * x)
}

/// Left side of the `u` factorisation with the `(1+a)` factor of `beta^2` restored:
/// `alpha^2 - 64 (x^2+a)(1+a) beta_reduced^2`.
pub fn gamma_product<T: Field>(a: T, x: T) -> T {
    let al = alpha(a.clone(), x.clone());
    let br = beta_reduced(a.clone(), x.clone());
    al.clone() * al - i::<T>(64) * (x.clone() * x + a.clone()) * (a + i(1)) * br.clone() * br
}

/// Left side of the `u'` factorisation:
/// `tilde_alpha^2 - 64 (x^2+a)(1+a) tilde_beta_reduced^2`.
pub fn tilde_gamma_product<T: Field>(a: T, x: T) -> T {
    let ta = tilde_alpha(a.clone(), x.clone());
    let tb = tilde_beta_reduced(a.clone(), x.clone());
    ta.clone() * ta - i::<T>(64) * (x.clone() * x + a.clone()) * (a + i(1)) * tb.clone() * tb
}

/// Polynomial part of `C1` for `a = 2` (odd in `x`).
pub fn c1_sombrero<T: Field>(x: T) -> T {
    let coeffs = [-1152, 2880, 34008, 77952, 83706, 49880, 16740, 3000, 250];
    let c: Vec<T> = coeffs.iter().map(|&v| i(v)).collect();
    x.clone() * horner(&c, x.clone() * x)
}

/// `C2 / (8 sqrt(3))` for `a = 2`.
pub fn c2_sombrero_reduced<T: Field>(x: T) -> T {
    let coeffs = [1152, 4800, 8904, 9672, 6322, 2236, 322];
    let c: Vec<T> = coeffs.iter().map(|&v| i(v)).collect();
    horner(&c, x.clone() * x)
}

/// `A = 5x^6 + 10x^4 + 21x^2 + 12` for `a = 2`.
pub fn a_sombrero<T: Field>(x: T) -> T {
    horner(&[i(12), i(21), i(10), i(5)], x.clone() * x)
}

/// Numerator polynomial `25x^8 + 150x^6 + 393x^4 + 408x^2 + 144` of `u` at `a = 2`.
pub fn u_numerator_sombrero<T: Field>(x: T) -> T {
    horner(&[i(144), i(408), i(393), i(150), i(25)], x.clone() * x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_origin() {
        for a in [0.25, 1.0, 2.0, 3.5] {
            assert_eq!(alpha(a, 0.0), 8.0 * a * a + 2.0 * a);
            assert_eq!(beta_reduced(a, 0.0), 0.0);
            assert_eq!(tilde_gamma(a, 0.0), a * a * a * (64.0 - 192.0 * a + 256.0 * a * a * a));
        }
        assert_eq!(alpha(2.0, 0.0), 36.0);
    }

    #[test]
    fn c1_at_one_is_coefficient_sum() {
        assert_eq!(c1_sombrero(1i64), 267_264);
        assert_eq!(c1_sombrero(0i64), 0);
        assert_eq!(c2_sombrero_reduced(0i64), 1152);
    }

    #[test]
    fn g1_root_matches_quadratic_formula() {
        let x0 = ((-9.0 + 96f64.sqrt()) / 15.0).sqrt();
        assert!(g1(x0).abs() < 1e-12);
        assert!((x0 - 0.230645).abs() < 1e-6);
    }

    #[test]
    fn g2_positive() {
        for &a in &[1e-3, 0.1, 1.0, 10.0] {
            for &x in &[0.0, 0.5, 1.0, 3.0] {
                assert!(g2(a, x) > 0.0);
            }
        }
    }
}
