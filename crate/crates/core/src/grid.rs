//! Two-panel grid on `[0, x_max]` with `x = 1` on a node, and the sampled
//! function containers that live on it.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Uniform panel `[start, end]` split into `intervals` equal steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Panel<T> {
    pub start: T,
    pub end: T,
    pub intervals: usize,
}

impl<T: Real> Panel<T> {
    pub fn step(&self) -> T {
        (self.end - self.start) / T::from_count(self.intervals)
    }

    pub fn node(&self, k: usize) -> T {
        if k == self.intervals {
            self.end
        } else {
            self.start + self.step() * T::from_count(k)
        }
    }

    pub fn len(&self) -> T {
        self.end - self.start
    }
}

/// Grid made of the panels `[0, 1]` and `[1, x_max]`. The junction node
/// `x = 1` is shared: global index `junction()` is the last node of the left
/// panel and the first node of the right one.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    panels: [Panel<T>; 2],
}

impl<T: Real> Grid<T> {
    /// Both panels get `intervals_per_panel` steps, which must be even and at least 4.
    pub fn two_panel(x_max: T, intervals_per_panel: usize) -> Result<Self> {
        Self::with_intervals(x_max, intervals_per_panel, intervals_per_panel)
    }

    pub fn with_intervals(x_max: T, left: usize, right: usize) -> Result<Self> {
        if !(x_max.is_finite() && x_max > T::one()) {
            return Err(Error::Grid(format!("x_max = {x_max} must exceed 1")));
        }
        for n in [left, right] {
            if n < 4 || n % 2 != 0 {
                return Err(Error::Grid(format!(
                    "panel interval count {n} must be even and at least 4"
                )));
            }
        }
        Ok(Self {
            panels: [
                Panel {
                    start: T::zero(),
                    end: T::one(),
                    intervals: left,
                },
                Panel {
                    start: T::one(),
                    end: x_max,
                    intervals: right,
                },
            ],
        })
    }

    /// Rebuilds a grid from explicit node coordinates, checking that they
    /// form two uniform panels meeting at `x = 1`.
    pub fn from_nodes(nodes: &[T]) -> Result<Self> {
        if nodes.first() != Some(&T::zero()) {
            return Err(Error::Grid("first node must be 0".into()));
        }
        let j = nodes
            .iter()
            .position(|&x| x == T::one())
            .ok_or_else(|| Error::Grid("x = 1 is not a node".into()))?;
        let x_max = *nodes.last().unwrap();
        let grid = Self::with_intervals(x_max, j, nodes.len() - 1 - j)?;
        let tol = T::lit(1e-9);
        for (k, &x) in nodes.iter().enumerate() {
            let expected = grid.node(k);
            if (x - expected).abs() > tol * x_max {
                return Err(Error::Grid(format!(
                    "node {k} at {x} breaks uniform panel spacing (expected {expected})"
                )));
            }
        }
        Ok(grid)
    }

    pub fn panels(&self) -> &[Panel<T>; 2] {
        &self.panels
    }

    pub fn x_max(&self) -> T {
        self.panels[1].end
    }

    /// Global index of the node at `x = 1`.
    pub fn junction(&self) -> usize {
        self.panels[0].intervals
    }

    pub fn n_points(&self) -> usize {
        self.panels[0].intervals + self.panels[1].intervals + 1
    }

    /// Global index range covered by panel `p` (inclusive of both ends).
    pub fn panel_range(&self, p: usize) -> std::ops::RangeInclusive<usize> {
        match p {
            0 => 0..=self.junction(),
            _ => self.junction()..=self.n_points() - 1,
        }
    }

    pub fn node(&self, k: usize) -> T {
        let j = self.junction();
        if k <= j {
            self.panels[0].node(k)
        } else {
            self.panels[1].node(k - j)
        }
    }

    pub fn nodes(&self) -> Vec<T> {
        (0..self.n_points()).map(|k| self.node(k)).collect()
    }

    /// Same geometry with every panel refined by `factor`.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        Self::with_intervals(
            self.x_max(),
            self.panels[0].intervals * factor,
            self.panels[1].intervals * factor,
        )
    }
}

/// Samples of a function that may jump at `x = 1`: one vector per panel,
/// both including the junction node.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelField<T> {
    pub left: Vec<T>,
    pub right: Vec<T>,
}

impl<T: Real> PanelField<T> {
    /// Splits a continuous per-node sample vector into panels.
    pub fn from_nodes(grid: &Grid<T>, values: &[T]) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(Error::GridMismatch {
                expected: grid.n_points(),
                actual: values.len(),
            });
        }
        let j = grid.junction();
        Ok(Self {
            left: values[..=j].to_vec(),
            right: values[j..].to_vec(),
        })
    }

    pub fn from_fn(grid: &Grid<T>, mut f: impl FnMut(usize, T) -> T) -> Self {
        let j = grid.junction();
        let left = (0..=j).map(|k| f(k, grid.node(k))).collect();
        let right = (j..grid.n_points()).map(|k| f(k, grid.node(k))).collect();
        Self { left, right }
    }

    pub fn check(&self, grid: &Grid<T>) -> Result<()> {
        let [p0, p1] = grid.panels();
        for (v, p) in [(&self.left, p0), (&self.right, p1)] {
            if v.len() != p.intervals + 1 {
                return Err(Error::GridMismatch {
                    expected: p.intervals + 1,
                    actual: v.len(),
                });
            }
        }
        Ok(())
    }

    pub fn panel(&self, p: usize) -> &[T] {
        if p == 0 {
            &self.left
        } else {
            &self.right
        }
    }

    /// Pointwise product with a continuous per-node vector.
    pub fn mul_nodes(&self, grid: &Grid<T>, values: &[T]) -> Self {
        let j = grid.junction();
        Self {
            left: self.left.iter().zip(values).map(|(&a, &b)| a * b).collect(),
            right: self.right.iter().zip(&values[j..]).map(|(&a, &b)| a * b).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            left: self.left.iter().map(|&v| f(v)).collect(),
            right: self.right.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn sup_abs(&self) -> T {
        self.left
            .iter()
            .chain(&self.right)
            .fold(T::zero(), |m, v| m.max(v.abs()))
    }
}

/// Grid function stored as `(sign, ln|value|)` per node.
#[derive(Debug, Clone, PartialEq)]
pub struct LogGridFunction<T> {
    pub log_mag: Vec<T>,
    pub sign: Vec<i8>,
}

impl<T: Real> LogGridFunction<T> {
    /// Positive function from its logarithm.
    pub fn from_log(log_mag: Vec<T>) -> Self {
        let sign = vec![1; log_mag.len()];
        Self { log_mag, sign }
    }

    pub fn from_values(values: &[T]) -> Self {
        let log_mag = values
            .iter()
            .map(|v| {
                if *v == T::zero() {
                    T::neg_infinity()
                } else {
                    v.abs().ln()
                }
            })
            .collect();
        let sign = values
            .iter()
            .map(|v| {
                if *v > T::zero() {
                    1
                } else if *v < T::zero() {
                    -1
                } else {
                    0
                }
            })
            .collect();
        Self { log_mag, sign }
    }

    pub fn len(&self) -> usize {
        self.log_mag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_mag.is_empty()
    }

    pub fn value(&self, k: usize) -> T {
        match self.sign[k] {
            0 => T::zero(),
            s => T::from_i8(s).unwrap() * self.log_mag[k].exp(),
        }
    }

    pub fn values(&self) -> Vec<T> {
        (0..self.len()).map(|k| self.value(k)).collect()
    }

    /// `value(z) / value(y)` with a single exponential.
    pub fn ratio(&self, z: usize, y: usize) -> T {
        let s = self.sign[z] * self.sign[y];
        if s == 0 {
            return if self.sign[z] == 0 { T::zero() } else { T::nan() };
        }
        T::from_i8(s).unwrap() * (self.log_mag[z] - self.log_mag[y]).exp()
    }

    /// Index of the largest magnitude.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for k in 1..self.len() {
            if self.log_mag[k] > self.log_mag[best] {
                best = k;
            }
        }
        best
    }

    /// Adds `shift` to every log-magnitude (multiplies by `e^shift`).
    pub fn shifted(&self, shift: T) -> Self {
        Self {
            log_mag: self.log_mag.iter().map(|&l| l + shift).collect(),
            sign: self.sign.clone(),
        }
    }
}
