//! Composite quadrature on the two-panel grid and the nested integrals
//!
//! ```text
//! tail:   F(x) = int_x^X dy / phi^2(y) int_y^X h(z) phi^2(z) dz
//! origin: F(x) = int_0^x dy / phi^2(y) int_0^y h(z) phi^2(z) dz
//! ```
//!
//! `phi^2` spans hundreds of e-folds over the grid, so the inner integral is
//! never formed on its own. It is carried as `inner(y) / phi^2(y)` and
//! re-anchored at every node: moving from one node to the next multiplies the
//! running value by a neighbouring `phi^2` ratio and adds the local interval
//! contribution, whose weights are again neighbouring ratios. Every
//! exponential therefore involves nodes at most three steps apart. Interval
//! contributions never straddle `x = 1`, where the integrand may jump.

use crate::error::{Error, Result};
use crate::grid::{Grid, LogGridFunction, PanelField};
use crate::scalar::Real;

/// Largest exponent allowed in a folded `phi^2` ratio.
pub const OVERFLOW_GUARD: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QuadratureKind {
    /// Composite Simpson for totals, four-point cubic interval rule for running integrals.
    #[default]
    Simpson,
    /// Composite trapezoid for both.
    Trapezoid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<T> {
    kind: QuadratureKind,
    grid: Grid<T>,
    weights: PanelField<T>,
}

impl<T: Real> QuadratureRule<T> {
    pub fn new(kind: QuadratureKind, grid: &Grid<T>) -> Self {
        let panel_weights = |p: usize| {
            let panel = grid.panels()[p];
            let n = panel.intervals;
            let h = panel.step();
            (0..=n)
                .map(|k| match kind {
                    QuadratureKind::Simpson => {
                        let c = if k == 0 || k == n {
                            1.0
                        } else if k % 2 == 1 {
                            4.0
                        } else {
                            2.0
                        };
                        T::lit(c) * h / T::lit(3.0)
                    }
                    QuadratureKind::Trapezoid => {
                        if k == 0 || k == n {
                            h / T::lit(2.0)
                        } else {
                            h
                        }
                    }
                })
                .collect::<Vec<T>>()
        };
        Self {
            kind,
            grid: grid.clone(),
            weights: PanelField {
                left: panel_weights(0),
                right: panel_weights(1),
            },
        }
    }

    pub fn simpson(grid: &Grid<T>) -> Self {
        Self::new(QuadratureKind::Simpson, grid)
    }

    pub fn kind(&self) -> QuadratureKind {
        self.kind
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn weights(&self) -> &PanelField<T> {
        &self.weights
    }

    /// Weights `(node offset within panel, weight)` of the running-integral
    /// rule over interval `[x_j, x_{j+1}]` of a panel with `n` intervals.
    fn interval_weights(&self, j: usize, n: usize, h: T) -> ([(usize, T); 4], usize) {
        let c = |v: f64| T::lit(v) * h / T::lit(24.0);
        match self.kind {
            QuadratureKind::Trapezoid => {
                let half = h / T::lit(2.0);
                ([(j, half), (j + 1, half), (0, T::zero()), (0, T::zero())], 2)
            }
            QuadratureKind::Simpson => {
                let w = if j == 0 {
                    [(0, c(9.0)), (1, c(19.0)), (2, c(-5.0)), (3, c(1.0))]
                } else if j == n - 1 {
                    [(n, c(9.0)), (n - 1, c(19.0)), (n - 2, c(-5.0)), (n - 3, c(1.0))]
                } else {
                    [(j - 1, c(-1.0)), (j, c(13.0)), (j + 1, c(13.0)), (j + 2, c(-1.0))]
                };
                (w, 4)
            }
        }
    }
}

/// Total integral of panel-wise samples.
pub fn integrate<T: Real>(rule: &QuadratureRule<T>, values: &PanelField<T>) -> Result<T> {
    values.check(&rule.grid)?;
    let mut acc = T::zero();
    for p in 0..2 {
        for (w, v) in rule.weights.panel(p).iter().zip(values.panel(p)) {
            acc = acc + *w * *v;
        }
    }
    Ok(acc)
}

fn guard<T: Real>(exponent: T, node: usize) -> Result<T> {
    if exponent > T::lit(OVERFLOW_GUARD) {
        Err(Error::OverflowGuard {
            exponent: exponent.as_f64(),
            node,
        })
    } else {
        Ok(exponent)
    }
}

fn check_inputs<T: Real>(rule: &QuadratureRule<T>, phi: &LogGridFunction<T>, h: &PanelField<T>) -> Result<()> {
    h.check(&rule.grid)?;
    if phi.len() != rule.grid.n_points() {
        return Err(Error::GridMismatch {
            expected: rule.grid.n_points(),
            actual: phi.len(),
        });
    }
    Ok(())
}

/// `int_y^X h phi^2 dz / phi^2(y)` at every node `y`.
pub fn inner_tail<T: Real>(rule: &QuadratureRule<T>, phi: &LogGridFunction<T>, h: &PanelField<T>) -> Result<Vec<T>> {
    check_inputs(rule, phi, h)?;
    let grid = &rule.grid;
    let two = T::lit(2.0);
    let mut out = vec![T::zero(); grid.n_points()];
    let mut carry = T::zero();
    for p in [1usize, 0] {
        let panel = grid.panels()[p];
        let (n, step) = (panel.intervals, panel.step());
        let base = *grid.panel_range(p).start();
        let l = |k: usize| phi.log_mag[base + k];
        let hv = h.panel(p);
        out[base + n] = carry;
        for j in (0..n).rev() {
            let (w, m) = rule.interval_weights(j, n, step);
            let mut local = T::zero();
            for &(k, wk) in &w[..m] {
                local = local + wk * hv[k] * guard(two * (l(k) - l(j)), base + j)?.exp();
            }
            let shift = guard(two * (l(j + 1) - l(j)), base + j)?.exp();
            out[base + j] = out[base + j + 1] * shift + local;
        }
        carry = out[base];
    }
    Ok(out)
}

/// `int_0^y h phi^2 dz / phi^2(y)` at every node `y`.
pub fn inner_origin<T: Real>(rule: &QuadratureRule<T>, phi: &LogGridFunction<T>, h: &PanelField<T>) -> Result<Vec<T>> {
    check_inputs(rule, phi, h)?;
    let grid = &rule.grid;
    let two = T::lit(2.0);
    let mut out = vec![T::zero(); grid.n_points()];
    for p in 0..2 {
        let panel = grid.panels()[p];
        let (n, step) = (panel.intervals, panel.step());
        let base = *grid.panel_range(p).start();
        let l = |k: usize| phi.log_mag[base + k];
        let hv = h.panel(p);
        for j in 0..n {
            let (w, m) = rule.interval_weights(j, n, step);
            let mut local = T::zero();
            for &(k, wk) in &w[..m] {
                local = local + wk * hv[k] * guard(two * (l(k) - l(j + 1)), base + j + 1)?.exp();
            }
            let shift = guard(two * (l(j) - l(j + 1)), base + j + 1)?.exp();
            out[base + j + 1] = out[base + j] * shift + local;
        }
    }
    Ok(out)
}

/// Running integral of a continuous per-node function, from the origin
/// (`from_origin = true`) or from `X`.
pub fn running_integral<T: Real>(rule: &QuadratureRule<T>, values: &[T], from_origin: bool) -> Result<Vec<T>> {
    let grid = &rule.grid;
    if values.len() != grid.n_points() {
        return Err(Error::GridMismatch {
            expected: grid.n_points(),
            actual: values.len(),
        });
    }
    let mut out = vec![T::zero(); grid.n_points()];
    let order: [usize; 2] = if from_origin { [0, 1] } else { [1, 0] };
    for p in order {
        let panel = grid.panels()[p];
        let (n, step) = (panel.intervals, panel.step());
        let base = *grid.panel_range(p).start();
        let piece = |j: usize| {
            let (w, m) = rule.interval_weights(j, n, step);
            w[..m]
                .iter()
                .fold(T::zero(), |acc, &(k, wk)| acc + wk * values[base + k])
        };
        if from_origin {
            for j in 0..n {
                out[base + j + 1] = out[base + j] + piece(j);
            }
        } else {
            for j in (0..n).rev() {
                out[base + j] = out[base + j + 1] + piece(j);
            }
        }
    }
    Ok(out)
}

/// `F(x) = int_x^X dy / phi^2(y) int_y^X h phi^2 dz`.
pub fn nested_tail<T: Real>(rule: &QuadratureRule<T>, phi: &LogGridFunction<T>, h: &PanelField<T>) -> Result<Vec<T>> {
    let inner = inner_tail(rule, phi, h)?;
    running_integral(rule, &inner, false)
}

/// `F(x) = int_0^x dy / phi^2(y) int_0^y h phi^2 dz`.
pub fn nested_origin<T: Real>(rule: &QuadratureRule<T>, phi: &LogGridFunction<T>, h: &PanelField<T>) -> Result<Vec<T>> {
    let inner = inner_origin(rule, phi, h)?;
    running_integral(rule, &inner, true)
}

/// [`nested_origin`] for an integrand with `int_0^X h phi^2 = 0`.
///
/// Then `int_0^y h phi^2 = -int_y^X h phi^2`. Past the maximum of `phi` the
/// prefix form divides a cancelling sum by a vanishing `phi^2(y)`, so the
/// suffix form is used there instead.
pub fn nested_origin_balanced<T: Real>(
    rule: &QuadratureRule<T>,
    phi: &LogGridFunction<T>,
    h: &PanelField<T>,
) -> Result<Vec<T>> {
    let prefix = inner_origin(rule, phi, h)?;
    let suffix = inner_tail(rule, phi, h)?;
    let peak = phi.argmax();
    let inner: Vec<T> = prefix
        .iter()
        .zip(&suffix)
        .enumerate()
        .map(|(k, (&p, &s))| if k <= peak { p } else { -s })
        .collect();
    running_integral(rule, &inner, true)
}
