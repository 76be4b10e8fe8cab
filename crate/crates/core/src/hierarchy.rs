//! The iteration `{f_n, E_n}` and the runtime checks of its monotone bounds.
//!
//! With `psi = phi f`, each step computes the energy defect
//! `curly_E_n = int w phi^2 f_{n-1} / int phi^2 f_{n-1}` and then
//! `f_n = 1 - 2 F[(w - curly_E_n) f_{n-1}]`, where `F` is the nested integral
//! taken from infinity (boundary condition I, `f_n(inf) = 1`) or from the
//! origin (boundary condition II, `f_n(0) = 1`). The energy estimate is
//! `E_n = g E0 - curly_E_n`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::closed_forms::PotentialParams;
use crate::error::{Error, Result};
use crate::grid::{Grid, PanelField};
use crate::quadrature::{integrate, nested_origin_balanced, nested_tail, QuadratureKind, QuadratureRule};
use crate::region::CRITICAL_A;
use crate::scalar::Real;
use crate::trial::{build_trial, TrialFunction};

/// Slack below which a hierarchy inequality is not counted as violated.
pub const HIERARCHY_SLACK: f64 = 1e-9;

/// Largest tolerated ratio of the truncated tail bound to the integral scale.
pub const TRUNCATION_LIMIT: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundaryCondition {
    /// `f_n(inf) = 1`; every `E_n` is an upper bound.
    I,
    /// `f_n(0) = 1`; odd `E_n` are upper, even `E_n` lower bounds.
    II,
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::I => "I",
            Self::II => "II",
        })
    }
}

impl FromStr for BoundaryCondition {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_uppercase().as_str() {
            "I" | "1" => Ok(Self::I),
            "II" | "2" => Ok(Self::II),
            other => Err(format!("unknown boundary condition {other:?}; expected I or II")),
        }
    }
}

/// Snapshot after iteration `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationState<T> {
    pub n: usize,
    pub f: Vec<T>,
    pub curly_e: T,
    pub energy: T,
}

/// Everything the hierarchy checks need: the defects `curly_E_1, curly_E_2, ...`
/// and the iterates `f_0, f_1, ...` on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Ledger<T> {
    pub bc: BoundaryCondition,
    /// `curly_e[i]` is `curly_E_{i+1}`.
    pub curly_e: Vec<T>,
    /// `f[n]` is `f_n`; `f[0]` is the seed.
    pub f: Vec<Vec<T>>,
}

impl<T: Real> Ledger<T> {
    pub fn new(bc: BoundaryCondition, f0: Vec<T>) -> Self {
        Self {
            bc,
            curly_e: Vec::new(),
            f: vec![f0],
        }
    }

    pub fn push(&mut self, state: &IterationState<T>) {
        self.curly_e.push(state.curly_e);
        self.f.push(state.f.clone());
    }

    pub fn iterations(&self) -> usize {
        self.curly_e.len()
    }

    fn e(&self, n: usize) -> f64 {
        self.curly_e[n - 1].as_f64()
    }
}

/// A hierarchy inequality that failed by more than [`HIERARCHY_SLACK`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub check: String,
    pub iteration: usize,
    pub node: Option<usize>,
    /// How far past the allowed side the quantity landed.
    pub excess: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum SolveWarning {
    /// `a` is below the critical value, so `u' < 0` (and with it the
    /// monotone bounds) is not guaranteed.
    BelowCriticalA { a: f64, a_c: f64 },
    /// `max_iter` reached before `|E_n - E_{n-1}| < tol`.
    NotConverged { iterations: usize, last_change: f64 },
}

impl fmt::Display for SolveWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::BelowCriticalA { a, a_c } => write!(
                f,
                "a = {a} is below the critical value a_c = {a_c}; u' < 0 and the monotone bounds are not guaranteed"
            ),
            Self::NotConverged {
                iterations,
                last_change,
            } => write!(
                f,
                "not converged after {iterations} iterations (last |E_n - E_n-1| = {last_change:e})"
            ),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport<T> {
    pub g: T,
    pub a: T,
    pub bc: BoundaryCondition,
    /// `E_0 = g E0, E_1, ..., E_iterations`.
    pub energies: Vec<T>,
    /// `curly_E_1, ..., curly_E_iterations`.
    pub curly_e: Vec<T>,
    pub iterations: usize,
    pub converged: bool,
    pub x: Vec<T>,
    pub f: Vec<T>,
    /// `psi_0 = phi / phi(0)`.
    pub psi0: Vec<T>,
    /// `psi_n = psi_0 f_n` for the final iterate.
    pub psi: Vec<T>,
    pub violations: Vec<Violation>,
    pub warnings: Vec<SolveWarning>,
    #[serde(skip)]
    pub ledger: Ledger<T>,
}

impl<T: Real> SolveReport<T> {
    pub fn final_energy(&self) -> T {
        *self.energies.last().expect("energies start with E_0")
    }

    /// `psi_n = psi_0 f_n` for any completed iteration `n`.
    pub fn psi_at(&self, n: usize) -> Option<Vec<T>> {
        self.ledger
            .f
            .get(n)
            .map(|f| f.iter().zip(&self.psi0).map(|(&a, &b)| a * b).collect())
    }
}

/// `curly_E_n = int w phi^2 f_prev / int phi^2 f_prev`.
pub fn energy_step<T: Real>(
    t: &TrialFunction<T>,
    rule: &QuadratureRule<T>,
    w: &PanelField<T>,
    f_prev: &[T],
) -> Result<T> {
    let phi2f: Vec<T> = t
        .phi()
        .log_mag
        .iter()
        .zip(f_prev)
        .map(|(&l, &f)| (T::lit(2.0) * l).exp() * f)
        .collect();
    let grid = t.grid();
    let den = integrate(rule, &PanelField::from_nodes(grid, &phi2f)?)?;
    if !(den > T::zero()) {
        return Err(Error::DegenerateDenominator(den.as_f64()));
    }
    let num = integrate(rule, &w.mul_nodes(grid, &phi2f))?;
    Ok(num / den)
}

/// Bound on the part of `int h phi^2` cut off at `x_max`, relative to the
/// integral itself. Both are measured in units of `phi^2` at its peak.
pub fn truncation_ratio<T: Real>(t: &TrialFunction<T>, rule: &QuadratureRule<T>, h: &PanelField<T>) -> Result<T> {
    let lphi = &t.phi().log_mag;
    let peak = lphi[t.phi().argmax()];
    let last = *lphi.last().expect("grid is non-empty");
    let bound = (T::lit(2.0) * (last - peak)).exp() * h.sup_abs();
    let weights: Vec<T> = lphi.iter().map(|&l| (T::lit(2.0) * (l - peak)).exp()).collect();
    let scale = integrate(rule, &h.map(|v| v.abs()).mul_nodes(t.grid(), &weights))?;
    Ok(if scale > T::zero() { bound / scale } else { T::zero() })
}

/// `f_n = 1 - 2 F[(w - curly_E_n) f_prev]` under `bc`.
pub fn f_step<T: Real>(
    t: &TrialFunction<T>,
    rule: &QuadratureRule<T>,
    w: &PanelField<T>,
    curly_e: T,
    f_prev: &[T],
    bc: BoundaryCondition,
    iteration: usize,
) -> Result<Vec<T>> {
    let grid = t.grid();
    let h = w.map(|v| v - curly_e).mul_nodes(grid, f_prev);
    let ratio = truncation_ratio(t, rule, &h)?;
    if ratio > T::lit(TRUNCATION_LIMIT) {
        return Err(Error::Truncation {
            bound: ratio.as_f64(),
            limit: TRUNCATION_LIMIT,
        });
    }
    let nested = match bc {
        BoundaryCondition::I => nested_tail(rule, t.phi(), &h)?,
        BoundaryCondition::II => nested_origin_balanced(rule, t.phi(), &h)?,
    };
    let two = T::lit(2.0);
    let f: Vec<T> = nested.iter().map(|&v| T::one() - two * v).collect();
    if let Some(node) = f.iter().position(|&v| !(v > T::zero())) {
        return Err(Error::PositivityLoss {
            iteration,
            node,
            x: grid.node(node).as_f64(),
            value: f[node].as_f64(),
        });
    }
    Ok(f)
}

/// Options for [`solve_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub bc: BoundaryCondition,
    pub max_iter: usize,
    /// Stop once `|E_n - E_{n-1}| < tol`; `0` runs all `max_iter` steps.
    pub tol: f64,
    pub quadrature: QuadratureKind,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            bc: BoundaryCondition::II,
            max_iter: 20,
            tol: 1e-6,
            quadrature: QuadratureKind::Simpson,
        }
    }
}

/// Runs the iteration from `f_0 = 1`.
pub fn solve<T: Real>(
    p: &PotentialParams<T>,
    grid: &Grid<T>,
    bc: BoundaryCondition,
    max_iter: usize,
    tol: f64,
) -> Result<SolveReport<T>> {
    let opts = SolveOptions {
        bc,
        max_iter,
        tol,
        ..SolveOptions::default()
    };
    solve_with(p, grid, &opts)
}

pub fn solve_with<T: Real>(p: &PotentialParams<T>, grid: &Grid<T>, opts: &SolveOptions) -> Result<SolveReport<T>> {
    let t = build_trial(p, grid)?;
    let rule = QuadratureRule::new(opts.quadrature, grid);
    let w = t.w_field();
    let ge0 = p.leading_energy();

    let mut ledger = Ledger::new(opts.bc, vec![T::one(); grid.n_points()]);
    let mut energies = vec![ge0];
    let mut converged = false;
    let mut last_change = f64::INFINITY;
    for n in 1..=opts.max_iter {
        let f_prev = ledger.f.last().expect("seeded");
        let curly_e = energy_step(&t, &rule, &w, f_prev)?;
        let f = f_step(&t, &rule, &w, curly_e, f_prev, opts.bc, n)?;
        let state = IterationState {
            n,
            f,
            curly_e,
            energy: ge0 - curly_e,
        };
        ledger.push(&state);
        last_change = (state.energy - energies[n - 1]).abs().as_f64();
        energies.push(state.energy);
        if n >= 2 && last_change < opts.tol {
            converged = true;
            break;
        }
    }

    let mut warnings = Vec::new();
    if p.a().as_f64() < CRITICAL_A {
        warnings.push(SolveWarning::BelowCriticalA {
            a: p.a().as_f64(),
            a_c: CRITICAL_A,
        });
    }
    if !converged {
        warnings.push(SolveWarning::NotConverged {
            iterations: ledger.iterations(),
            last_change,
        });
    }

    let psi0 = t.psi0().values();
    let f = ledger.f.last().expect("seeded").clone();
    let psi = f.iter().zip(&psi0).map(|(&a, &b)| a * b).collect();
    Ok(SolveReport {
        g: p.g(),
        a: p.a(),
        bc: opts.bc,
        curly_e: ledger.curly_e.clone(),
        iterations: ledger.iterations(),
        energies,
        converged,
        x: grid.nodes(),
        f,
        psi0,
        psi,
        violations: check_hierarchy(&ledger),
        warnings,
        ledger,
    })
}

fn record(out: &mut Vec<Violation>, check: &str, iteration: usize, node: Option<usize>, excess: f64) {
    if excess > HIERARCHY_SLACK {
        out.push(Violation {
            check: check.to_string(),
            iteration,
            node,
            excess,
        });
    }
}

/// Nodewise check that `f_{n+1} / f_n` falls (`sign = -1`) or rises (`sign = +1`).
fn ratio_slope<T: Real>(out: &mut Vec<Violation>, check: &str, n: usize, lo: &[T], hi: &[T], sign: f64) {
    let r: Vec<f64> = hi.iter().zip(lo).map(|(&a, &b)| (a / b).as_f64()).collect();
    for k in 0..r.len().saturating_sub(1) {
        record(out, check, n, Some(k), -sign * (r[k + 1] - r[k]));
    }
}

/// Every consequence of the hierarchy theorem that can be read off the ledger.
///
/// Condition I: `curly_E` strictly increasing, `1 < f_1 < f_2 < ...` nodewise,
/// each `f_n` decreasing in `x` and `(f_{n+1}/f_n)' < 0`.
/// Condition II: odd `curly_E` ascending, even `curly_E` descending, every even
/// above every odd, each `f_n` decreasing from `f_n(0) = 1`, and
/// `(f_{n+1}/f_n)'` negative for even `n`, positive for odd `n`.
///
/// Nothing is checked before two iterations have completed.
pub fn check_hierarchy<T: Real>(ledger: &Ledger<T>) -> Vec<Violation> {
    let mut out = Vec::new();
    let iters = ledger.iterations();
    if iters < 2 {
        return out;
    }
    let f = &ledger.f;
    for n in 1..=iters {
        for k in 0..f[n].len() - 1 {
            record(
                &mut out,
                "f_decreasing_in_x",
                n,
                Some(k),
                (f[n][k + 1] - f[n][k]).as_f64(),
            );
        }
    }
    match ledger.bc {
        BoundaryCondition::I => {
            for n in 1..iters {
                record(
                    &mut out,
                    "curly_e_increasing",
                    n + 1,
                    None,
                    ledger.e(n) - ledger.e(n + 1),
                );
            }
            for (k, &v) in f[1].iter().enumerate() {
                record(&mut out, "f1_at_least_one", 1, Some(k), 1.0 - v.as_f64());
            }
            for n in 1..iters {
                for k in 0..f[n].len() {
                    record(
                        &mut out,
                        "f_increasing_in_n",
                        n + 1,
                        Some(k),
                        (f[n][k] - f[n + 1][k]).as_f64(),
                    );
                }
            }
            for n in 0..iters {
                ratio_slope(&mut out, "ratio_slope_negative", n, &f[n], &f[n + 1], -1.0);
            }
        }
        BoundaryCondition::II => {
            let odd: Vec<usize> = (1..=iters).filter(|n| n % 2 == 1).collect();
            let even: Vec<usize> = (1..=iters).filter(|n| n % 2 == 0).collect();
            for w in odd.windows(2) {
                record(
                    &mut out,
                    "odd_curly_e_ascending",
                    w[1],
                    None,
                    ledger.e(w[0]) - ledger.e(w[1]),
                );
            }
            for w in even.windows(2) {
                record(
                    &mut out,
                    "even_curly_e_descending",
                    w[1],
                    None,
                    ledger.e(w[1]) - ledger.e(w[0]),
                );
            }
            for &m in &even {
                for &l in &odd {
                    record(&mut out, "even_above_odd", m.max(l), None, ledger.e(l) - ledger.e(m));
                }
            }
            for n in 1..=iters {
                for (k, &v) in f[n].iter().enumerate() {
                    record(&mut out, "f_at_most_one", n, Some(k), v.as_f64() - 1.0);
                }
            }
            for n in 0..iters {
                let (check, sign) = if n % 2 == 0 {
                    ("ratio_slope_negative", -1.0)
                } else {
                    ("ratio_slope_positive", 1.0)
                };
                ratio_slope(&mut out, check, n, &f[n], &f[n + 1], sign);
            }
        }
    }
    out
}

/// Condition II brackets the exact energy: `E_2 < E_4 < ... < E < ... < E_3 < E_1`.
/// `energies[n]` is `E_n`; `exact` is an independent estimate of `E`.
pub fn bracket_violations(energies: &[f64], exact: f64) -> Vec<Violation> {
    let mut out = Vec::new();
    for n in 1..energies.len() {
        let e = energies[n];
        if n % 2 == 0 {
            record(&mut out, "even_below_exact", n, None, e - exact);
            if n >= 4 {
                record(&mut out, "even_energy_ascending", n, None, energies[n - 2] - e);
            }
        } else {
            record(&mut out, "odd_above_exact", n, None, exact - e);
            if n >= 3 {
                record(&mut out, "odd_energy_descending", n, None, e - energies[n - 2]);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference(bc: BoundaryCondition, max_iter: usize) -> SolveReport<f64> {
        let p = PotentialParams::<f64>::new(1.0, 2.0).unwrap();
        let grid = Grid::two_panel(4.0, 400).unwrap();
        solve(&p, &grid, bc, max_iter, 0.0).unwrap()
    }

    #[test]
    fn bc_parsing() {
        assert_eq!("ii".parse::<BoundaryCondition>().unwrap(), BoundaryCondition::II);
        assert_eq!("I".parse::<BoundaryCondition>().unwrap(), BoundaryCondition::I);
        assert!("III".parse::<BoundaryCondition>().is_err());
        assert_eq!(BoundaryCondition::II.to_string(), "II");
    }

    #[test]
    fn constant_w_gives_constant_defect() {
        let p = PotentialParams::<f64>::new(1.0, 2.0).unwrap();
        let grid = Grid::two_panel(4.0, 40).unwrap();
        let t = build_trial(&p, &grid).unwrap();
        let rule = QuadratureRule::simpson(&grid);
        let w = PanelField::from_fn(&grid, |_, _| 0.37);
        let e = energy_step(&t, &rule, &w, &vec![1.0; grid.n_points()]).unwrap();
        assert!((e - 0.37).abs() < 1e-15);
    }

    #[test]
    fn first_energy_matches_table() {
        let r = reference(BoundaryCondition::II, 1);
        assert!((r.energies[0] - 3f64.sqrt()).abs() < 1e-15);
        assert!((r.energies[1] - 1.0163).abs() < 5e-5, "{}", r.energies[1]);
    }

    #[test]
    fn boundary_values_are_pinned() {
        let r1 = reference(BoundaryCondition::I, 3);
        let r2 = reference(BoundaryCondition::II, 3);
        for n in 1..=3 {
            assert_eq!(*r1.ledger.f[n].last().unwrap(), 1.0);
            assert_eq!(r2.ledger.f[n][0], 1.0);
            assert_eq!(r2.psi_at(n).unwrap()[0], 1.0);
        }
        assert!((r1.energies[2] - 1.0031).abs() < 5e-4, "{}", r1.energies[2]);
    }

    #[test]
    fn energy_list_includes_leading_row() {
        let r = reference(BoundaryCondition::I, 4);
        assert_eq!(r.energies.len(), r.iterations + 1);
        assert_eq!(r.curly_e.len(), r.iterations);
        assert!(!r.converged);
        assert!(r
            .warnings
            .iter()
            .any(|w| matches!(w, SolveWarning::NotConverged { .. })));
    }

    #[test]
    fn stops_on_tolerance() {
        let p = PotentialParams::<f64>::new(1.0, 2.0).unwrap();
        let grid = Grid::two_panel(4.0, 400).unwrap();
        let r = solve(&p, &grid, BoundaryCondition::II, 20, 1e-6).unwrap();
        assert!(r.converged && r.iterations < 20);
        let n = r.energies.len();
        assert!((r.energies[n - 1] - r.energies[n - 2]).abs() < 1e-6);
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn reference_runs_satisfy_hierarchy() {
        for bc in [BoundaryCondition::I, BoundaryCondition::II] {
            let r = reference(bc, 6);
            assert!(
                r.violations.is_empty(),
                "{bc}: {:?}",
                &r.violations[..r.violations.len().min(5)]
            );
        }
    }

    #[test]
    fn ties_within_slack_are_not_violations() {
        let f0 = vec![1.0, 1.0, 1.0];
        let mut ledger = Ledger::new(BoundaryCondition::I, f0);
        let f1 = vec![1.2, 1.1, 1.0];
        for e in [0.5, 0.5 + 1e-12] {
            ledger.push(&IterationState {
                n: 0,
                f: f1.clone(),
                curly_e: e,
                energy: 0.0,
            });
        }
        assert!(check_hierarchy(&ledger).is_empty());
        ledger.push(&IterationState {
            n: 3,
            f: f1,
            curly_e: 0.4,
            energy: 0.0,
        });
        let v = check_hierarchy(&ledger);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].check, "curly_e_increasing");
    }

    #[test]
    fn solve_is_deterministic() {
        let a = reference(BoundaryCondition::II, 4);
        let b = reference(BoundaryCondition::II, 4);
        assert_eq!(a.energies, b.energies);
        assert_eq!(a.f, b.f);
    }

    #[test]
    fn warns_below_critical_a() {
        // g large enough for Gamma > 0 at a = 0.5.
        let p = PotentialParams::<f64>::new(4.0, 0.5).unwrap();
        let grid = Grid::two_panel(3.0, 800).unwrap();
        let r = solve(&p, &grid, BoundaryCondition::II, 2, 0.0).unwrap();
        assert!(r
            .warnings
            .iter()
            .any(|w| matches!(w, SolveWarning::BelowCriticalA { .. })));
    }
}
