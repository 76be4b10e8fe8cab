//! Reference ground state from a finite-difference discretisation of
//! `-psi''/2 + V psi = E psi` on `[-L, L]` with Dirichlet ends. Shares no
//! code with the trial function or the iteration.

use serde::Serialize;

use crate::closed_forms::{eval_potential, PotentialParams};
use crate::error::{Error, Result};

/// Largest tolerated gap between the coarse and fine energies.
pub const DISCRETISATION_LIMIT: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleConfig {
    /// Half-width `L` of the domain.
    pub half_width: f64,
    /// Number of intervals on `[-L, L]` at the coarse level; the fine level
    /// uses twice as many. The matrix size is `intervals - 1`.
    pub intervals: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            half_width: 6.0,
            intervals: 4000,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.half_width.is_finite() && self.half_width > 1.0) {
            return Err(Error::InvalidParameter {
                name: "half_width",
                value: self.half_width,
                constraint: "oracle half-width must be finite and exceed 1",
            });
        }
        if self.intervals < 500 || !self.intervals.is_multiple_of(2) {
            return Err(Error::InvalidParameter {
                name: "intervals",
                value: self.intervals as f64,
                constraint: "oracle interval count must be even and at least 500",
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    /// Richardson-extrapolated ground-state energy.
    pub energy: f64,
    pub coarse: f64,
    pub fine: f64,
    /// `|fine - coarse| / 3`, the size of the Richardson correction.
    pub error_estimate: f64,
    /// Fine-level nodes on `[-L, L]`, ends included.
    pub x: Vec<f64>,
    /// Fine-level eigenvector with `psi(0) = 1` and zero Dirichlet ends.
    pub psi: Vec<f64>,
}

impl OracleResult {
    /// `psi` at any `|x| <= L` by linear interpolation.
    pub fn psi_at(&self, x: f64) -> f64 {
        let (x0, x1) = (self.x[0], *self.x.last().unwrap());
        if x <= x0 || x >= x1 {
            return 0.0;
        }
        let h = (x1 - x0) / (self.x.len() - 1) as f64;
        let t = (x - x0) / h;
        let k = (t.floor() as usize).min(self.x.len() - 2);
        let f = t - k as f64;
        self.psi[k] * (1.0 - f) + self.psi[k + 1] * f
    }
}

/// Symmetric tridiagonal matrix with constant off-diagonal.
struct Tridiagonal {
    diag: Vec<f64>,
    off: f64,
}

impl Tridiagonal {
    /// Eigenvalues strictly below `lambda`, from the signs of the `LDL^T` pivots.
    fn count_below(&self, lambda: f64) -> usize {
        let b2 = self.off * self.off;
        let mut count = 0;
        let mut d = 1.0;
        for (i, &a) in self.diag.iter().enumerate() {
            d = a - lambda - if i == 0 { 0.0 } else { b2 / d };
            if d == 0.0 {
                d = -f64::EPSILON * (a.abs() + lambda.abs()).max(1.0);
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn smallest_eigenvalue(&self) -> f64 {
        let r = 2.0 * self.off.abs();
        let mut lo = self.diag.iter().fold(f64::INFINITY, |m, &a| m.min(a - r));
        let mut hi = self.diag.iter().fold(f64::NEG_INFINITY, |m, &a| m.max(a + r));
        while hi - lo > 1e-14 * hi.abs().max(1.0) {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) >= 1 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Solves `(T - sigma) y = rhs` by the Thomas algorithm.
    fn solve_shifted(&self, sigma: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        let b = self.off;
        let mut c = vec![0.0; n];
        let mut y = vec![0.0; n];
        let mut piv = self.diag[0] - sigma;
        c[0] = b / piv;
        y[0] = rhs[0] / piv;
        for i in 1..n {
            piv = self.diag[i] - sigma - b * c[i - 1];
            c[i] = b / piv;
            y[i] = (rhs[i] - b * y[i - 1]) / piv;
        }
        for i in (0..n - 1).rev() {
            y[i] -= c[i] * y[i + 1];
        }
        y
    }

    fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let sigma = lambda - 1e-10 * lambda.abs().max(1.0);
        let mut v = vec![1.0; self.diag.len()];
        for _ in 0..4 {
            v = self.solve_shifted(sigma, &v);
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter_mut().for_each(|x| *x /= norm);
        }
        v
    }
}

fn discretise(p: &PotentialParams<f64>, half_width: f64, intervals: usize) -> (Vec<f64>, Tridiagonal) {
    let h = 2.0 * half_width / intervals as f64;
    let x: Vec<f64> = (0..=intervals).map(|i| -half_width + h * i as f64).collect();
    let diag = x[1..intervals]
        .iter()
        .map(|&xi| 1.0 / (h * h) + eval_potential(p, xi))
        .collect();
    (
        x,
        Tridiagonal {
            diag,
            off: -0.5 / (h * h),
        },
    )
}

/// Lowest eigenvalue on one grid.
pub fn fd_ground_energy(p: &PotentialParams<f64>, half_width: f64, intervals: usize) -> f64 {
    discretise(p, half_width, intervals).1.smallest_eigenvalue()
}

pub fn oracle_ground_state(p: &PotentialParams<f64>, cfg: &OracleConfig) -> Result<OracleResult> {
    cfg.validate()?;
    let coarse = fd_ground_energy(p, cfg.half_width, cfg.intervals);
    let n = 2 * cfg.intervals;
    let (x, t) = discretise(p, cfg.half_width, n);
    let fine = t.smallest_eigenvalue();
    if (fine - coarse).abs() > DISCRETISATION_LIMIT {
        return Err(Error::Discretization {
            coarse,
            fine,
            limit: DISCRETISATION_LIMIT,
        });
    }
    let v = t.eigenvector(fine);
    let centre = v[n / 2 - 1];
    let mut psi = Vec::with_capacity(n + 1);
    psi.push(0.0);
    psi.extend(v.iter().map(|&y| y / centre));
    psi.push(0.0);
    Ok(OracleResult {
        energy: (4.0 * fine - coarse) / 3.0,
        coarse,
        fine,
        error_estimate: (fine - coarse).abs() / 3.0,
        x,
        psi,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum PeakStructure {
    /// One maximum, at the origin.
    SingleAtOrigin,
    /// Two mirror-image maxima at `+-x`, `x` within `[0.5, 1.5]`.
    DoubleNearUnit { x: f64 },
    /// Anything else; lists the positions of all maxima.
    Other { maxima: Vec<f64> },
}

/// Relative size below which dips between maxima, and maxima themselves,
/// are treated as rounding noise.
const PEAK_NOISE: f64 = 1e-6;

/// Local maxima of `|psi|` and their classification. Samples that only
/// cover `x >= 0` are mirrored first. Maxima separated by a dip smaller than
/// [`PEAK_NOISE`] of their height are merged at their midpoint.
pub fn peak_census(x: &[f64], psi: &[f64]) -> PeakStructure {
    let (xs, ys): (Vec<f64>, Vec<f64>) = if x.first().is_some_and(|&x0| x0 >= 0.0) {
        let mirrored = x
            .iter()
            .zip(psi)
            .skip(usize::from(x[0] == 0.0))
            .rev()
            .map(|(&a, &b)| (-a, b.abs()));
        mirrored.chain(x.iter().zip(psi).map(|(&a, &b)| (a, b.abs()))).unzip()
    } else {
        x.iter().zip(psi).map(|(&a, &b)| (a, b.abs())).unzip()
    };
    let top = ys.iter().copied().fold(0.0, f64::max);
    let raw: Vec<usize> = (1..ys.len().saturating_sub(1))
        .filter(|&k| ys[k] >= ys[k - 1] && ys[k] > ys[k + 1] && ys[k] > PEAK_NOISE * top)
        .collect();

    // Clusters of maxima joined by negligible dips: (first index, last index).
    let mut clusters: Vec<(usize, usize)> = Vec::new();
    for &k in &raw {
        if let Some(last) = clusters.last_mut() {
            let dip = ys[last.1..=k].iter().copied().fold(f64::INFINITY, f64::min);
            if dip >= (1.0 - PEAK_NOISE) * ys[last.1].min(ys[k]) {
                last.1 = k;
                continue;
            }
        }
        clusters.push((k, k));
    }
    let maxima: Vec<f64> = clusters.iter().map(|&(i, j)| 0.5 * (xs[i] + xs[j])).collect();
    let spacing = xs.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    match maxima.as_slice() {
        [m] if m.abs() <= spacing => PeakStructure::SingleAtOrigin,
        [l, r] if (l + r).abs() <= 2.0 * spacing && (0.5..=1.5).contains(&r.abs()) => PeakStructure::DoubleNearUnit {
            x: r.abs().max(l.abs()),
        },
        _ => PeakStructure::Other { maxima },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(g: f64, a: f64) -> PotentialParams<f64> {
        PotentialParams::new(g, a).unwrap()
    }

    #[test]
    fn harmonic_limit_energy() {
        // Plain harmonic oscillator: levels 0.5, 1.5, ...
        let n = 2000;
        let l = 8.0;
        let h = 2.0 * l / n as f64;
        let diag = (1..n)
            .map(|i| {
                let x = -l + h * i as f64;
                1.0 / (h * h) + 0.5 * x * x
            })
            .collect();
        let t = Tridiagonal {
            diag,
            off: -0.5 / (h * h),
        };
        let e = t.smallest_eigenvalue();
        assert!((e - 0.5).abs() < 1e-5, "{e}");
        assert_eq!(t.count_below(1.49), 1);
        assert_eq!(t.count_below(1.51), 2);
    }

    #[test]
    fn exact_state_at_unit_coupling() {
        let r = oracle_ground_state(&params(1.0, 2.0), &OracleConfig::default()).unwrap();
        assert!((r.energy - 1.0).abs() < 1e-4, "{}", r.energy);
        for (x, psi) in r.x.iter().zip(&r.psi) {
            assert!((psi - (-x.powi(4) / 4.0).exp()).abs() <= 1e-4, "x={x}");
        }
        let n = r.psi.len();
        for k in 0..n {
            assert!((r.psi[k] - r.psi[n - 1 - k]).abs() <= 1e-8);
        }
        assert_eq!(peak_census(&r.x, &r.psi), PeakStructure::SingleAtOrigin);
    }

    #[test]
    fn strong_coupling_has_two_peaks() {
        let r = oracle_ground_state(&params(3.0, 2.0), &OracleConfig::default()).unwrap();
        assert!((r.energy - 4.5589).abs() < 5e-4, "{}", r.energy);
        assert!(matches!(
            peak_census(&r.x, &r.psi),
            PeakStructure::DoubleNearUnit { .. }
        ));
    }

    #[test]
    fn census_mirrors_half_line_samples() {
        let x: Vec<f64> = (0..=100).map(|k| k as f64 * 0.03).collect();
        let single: Vec<f64> = x.iter().map(|x| (-x * x).exp()).collect();
        assert_eq!(peak_census(&x, &single), PeakStructure::SingleAtOrigin);
        let double: Vec<f64> = x.iter().map(|x| (-(x - 0.9) * (x - 0.9) * 4.0).exp()).collect();
        assert!(matches!(peak_census(&x, &double), PeakStructure::DoubleNearUnit { .. }));
    }

    #[test]
    fn config_validation() {
        let bad = OracleConfig {
            intervals: 100,
            ..OracleConfig::default()
        };
        assert!(oracle_ground_state(&params(1.0, 2.0), &bad).is_err());
    }

    #[test]
    fn interpolation_hits_nodes() {
        let r = oracle_ground_state(
            &params(1.0, 2.0),
            &OracleConfig {
                half_width: 6.0,
                intervals: 600,
            },
        )
        .unwrap();
        assert!((r.psi_at(0.0) - 1.0).abs() < 1e-12);
        assert_eq!(r.psi_at(7.0), 0.0);
    }
}
