//! The even trial function `phi` built from the first two orders of the
//! `exp(-g S)` expansion, sampled in log space.
//!
//! On `[0, 1)` it is `phi_+ + Gamma phi_-` with
//! `phi_+ = exp(-g S0(x) - S1(x))` and `phi_- = exp(-g S0(-x) - S1(x))`;
//! beyond `x = 1` it is `phi_+` scaled by `1 + Gamma phi_-(1)/phi_+(1)`, which
//! makes `phi` and `phi'` continuous. `Gamma` is fixed by `phi'(0) = 0`.

use crate::closed_forms::{s0_any, s1_unchecked, u_unchecked, PotentialParams};
use crate::error::Result;
use crate::grid::{Grid, LogGridFunction, PanelField};
use crate::scalar::Real;

#[derive(Debug, Clone)]
pub struct TrialFunction<T> {
    params: PotentialParams<T>,
    grid: Grid<T>,
    phi: LogGridFunction<T>,
    phi_plus: LogGridFunction<T>,
    phi_minus: LogGridFunction<T>,
    psi0: LogGridFunction<T>,
}

/// Samples the trial function on `grid`. Requires `Gamma > 0`.
///
/// All three of `phi`, `phi_+`, `phi_-` share one normalisation, chosen so
/// that `max ln phi = 0`. `psi0 = phi / phi(0)`.
pub fn build_trial<T: Real>(p: &PotentialParams<T>, grid: &Grid<T>) -> Result<TrialFunction<T>> {
    p.ensure_positive_gamma()?;
    let g = p.g();
    let gamma = p.gamma();
    let nodes = grid.nodes();
    let j = grid.junction();

    let mut lp = Vec::with_capacity(nodes.len());
    let mut lm = Vec::with_capacity(nodes.len());
    for &x in &nodes {
        let s1 = s1_unchecked(p, x);
        lp.push(-g * s0_any(p, x) - s1);
        lm.push(-g * s0_any(p, -x) - s1);
    }

    let outer = (T::one() + gamma * (lm[j] - lp[j]).exp()).ln();
    let mut lphi: Vec<T> = lp
        .iter()
        .zip(&lm)
        .enumerate()
        .map(|(k, (&lpk, &lmk))| {
            if k <= j {
                lpk + (gamma * (lmk - lpk).exp()).ln_1p()
            } else {
                lpk + outer
            }
        })
        .collect();

    let peak = lphi.iter().copied().fold(T::neg_infinity(), T::max);
    for v in lphi.iter_mut().chain(lp.iter_mut()).chain(lm.iter_mut()) {
        *v = *v - peak;
    }
    let phi = LogGridFunction::from_log(lphi);
    let psi0 = phi.shifted(-phi.log_mag[0]);

    Ok(TrialFunction {
        params: *p,
        grid: grid.clone(),
        phi,
        phi_plus: LogGridFunction::from_log(lp),
        phi_minus: LogGridFunction::from_log(lm),
        psi0,
    })
}

/// `ln[phi^2(z) / phi^2(y)]` for nodes `z`, `y`.
pub fn trial_log_ratio<T: Real>(t: &TrialFunction<T>, z: usize, y: usize) -> T {
    T::lit(2.0) * (t.phi.log_mag[z] - t.phi.log_mag[y])
}

impl<T: Real> TrialFunction<T> {
    pub fn params(&self) -> &PotentialParams<T> {
        &self.params
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn phi(&self) -> &LogGridFunction<T> {
        &self.phi
    }

    pub fn phi_plus(&self) -> &LogGridFunction<T> {
        &self.phi_plus
    }

    pub fn phi_minus(&self) -> &LogGridFunction<T> {
        &self.phi_minus
    }

    /// `psi0 = phi / phi(0)`, so `psi0(0) = 1`.
    pub fn psi0(&self) -> &LogGridFunction<T> {
        &self.psi0
    }

    /// `phi_-/phi_+` at node `k`.
    pub fn mirror_ratio(&self, k: usize) -> T {
        (self.phi_minus.log_mag[k] - self.phi_plus.log_mag[k]).exp()
    }

    /// `ghat` on the grid; the left panel carries the left limit at `x = 1`,
    /// the right panel is identically zero.
    pub fn ghat_field(&self) -> PanelField<T> {
        let p = &self.params;
        let scale = p.leading_energy() * T::lit(2.0) * p.gamma();
        let j = self.grid.junction();
        let left = (0..=j)
            .map(|k| {
                let rho = self.mirror_ratio(k);
                scale * rho / (T::one() + p.gamma() * rho)
            })
            .collect();
        let right = vec![T::zero(); self.grid.n_points() - j];
        PanelField { left, right }
    }

    /// `u` on the grid (continuous).
    pub fn u_nodes(&self) -> Vec<T> {
        self.grid
            .nodes()
            .into_iter()
            .map(|x| u_unchecked(&self.params, x))
            .collect()
    }

    /// `w = u + ghat` on the grid, with the jump at `x = 1` kept panel-wise.
    pub fn w_field(&self) -> PanelField<T> {
        let u = self.u_nodes();
        let ghat = self.ghat_field();
        let j = self.grid.junction();
        PanelField {
            left: ghat.left.iter().zip(&u).map(|(&a, &b)| a + b).collect(),
            right: ghat.right.iter().zip(&u[j..]).map(|(&a, &b)| a + b).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_forms::eval_s0;

    fn reference() -> TrialFunction<f64> {
        let p = PotentialParams::new(1.0, 2.0).unwrap();
        build_trial(&p, &Grid::two_panel(4.0, 2000).unwrap()).unwrap()
    }

    /// Fourth-order one-sided first derivative at node `k`, stepping in `dir`.
    fn one_sided(f: impl Fn(usize) -> f64, k: usize, dir: i64, h: f64) -> f64 {
        let at = |m: i64| f((k as i64 + dir * m) as usize);
        let d = -25.0 * at(0) + 48.0 * at(1) - 36.0 * at(2) + 16.0 * at(3) - 3.0 * at(4);
        d / (12.0 * h) * dir as f64
    }

    #[test]
    fn branches_coincide_at_origin() {
        let t = reference();
        assert!((t.mirror_ratio(0) - 1.0).abs() < 1e-15);
        assert_eq!(t.psi0().value(0), 1.0);
    }

    #[test]
    fn mirror_ratio_at_one() {
        let t = reference();
        let p = t.params();
        let j = t.grid().junction();
        let s = eval_s0(p, 1.0).unwrap() - eval_s0(p, 0.0).unwrap();
        assert!((t.mirror_ratio(j) - (2.0 * s).exp()).abs() < 1e-14);
        assert!((t.mirror_ratio(j) - 0.138701).abs() < 1e-6);
    }

    #[test]
    fn mirror_ratio_strictly_decreasing_on_unit_panel() {
        let t = reference();
        for k in 1..=t.grid().junction() {
            assert!(t.mirror_ratio(k) < t.mirror_ratio(k - 1), "k={k}");
        }
    }

    #[test]
    fn psi0_has_off_origin_peak() {
        let t = reference();
        let x = t.grid().node(t.psi0().argmax());
        assert!(x > 0.5 && x < 1.0, "peak at {x}");
        for g in [2.0, 3.0] {
            let p = PotentialParams::new(g, 2.0).unwrap();
            let t = build_trial(&p, &Grid::two_panel(4.0, 400).unwrap()).unwrap();
            let x = t.grid().node(t.psi0().argmax());
            assert!(x > 0.8 && x < 1.0, "g={g}: peak at {x}");
        }
    }

    #[test]
    fn phi_positive_and_flat_at_origin() {
        let t = reference();
        assert!(t.phi().sign.iter().all(|&s| s == 1));
        let h = t.grid().panels()[0].step();
        let f = |k: usize| t.phi().value(k);
        assert!(one_sided(f, 0, 1, h).abs() <= 1e-8 * f(0));
    }

    #[test]
    fn phi_is_c1_at_junction() {
        let t = reference();
        let j = t.grid().junction();
        let hl = t.grid().panels()[0].step();
        let hr = t.grid().panels()[1].step();
        let f = |k: usize| t.phi().value(k);
        let left = one_sided(f, j, -1, hl);
        let right = one_sided(f, j, 1, hr);
        assert!((left - right).abs() <= 1e-8 * left.abs(), "{left} vs {right}");
    }

    #[test]
    fn log_ratio_properties() {
        let p = PotentialParams::new(1.0, 2.0).unwrap();
        let t = build_trial(&p, &Grid::two_panel(5.0, 2000).unwrap()).unwrap();
        let g = t.grid();
        let idx = |x: f64| (0..g.n_points()).find(|&k| (g.node(k) - x).abs() < 1e-12).unwrap();
        let (z, y) = (idx(3.0), idx(2.0));
        assert_eq!(trial_log_ratio(&t, y, y), 0.0);
        assert!(trial_log_ratio(&t, z, y) < 0.0);
        // Beyond x = 1 phi is a scaled phi_+, so adjacent ratios follow from S0 and S1 alone.
        let p = t.params();
        for k in [y, y + 1, z - 1] {
            let (xz, xy) = (g.node(k + 1), g.node(k));
            let direct =
                (-2.0 * (s0_any(p, xz) - s0_any(p, xy)) - 2.0 * (s1_unchecked(p, xz) - s1_unchecked(p, xy))).exp();
            let got = trial_log_ratio(&t, k + 1, k).exp();
            assert!((got - direct).abs() <= 1e-12 * direct);
        }
    }

    #[test]
    fn rejects_non_positive_gamma() {
        let p = PotentialParams::new(1.0, 1.0).unwrap();
        assert!(build_trial(&p, &Grid::two_panel(4.0, 100).unwrap()).is_err());
    }
}
