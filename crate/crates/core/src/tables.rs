//! Published energy tables and the runs that reproduce them.

use serde::Serialize;

use crate::closed_forms::PotentialParams;
use crate::error::Result;
use crate::grid::Grid;
use crate::hierarchy::{solve, BoundaryCondition, SolveReport};

/// Iterations per table row: `E_0` through `E_5`.
pub const TABLE_ITERATIONS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PublishedRow {
    pub table: u8,
    pub label: &'static str,
    pub g: f64,
    pub a: f64,
    pub bc: BoundaryCondition,
    /// `E_0 .. E_5` as printed.
    pub energies: [f64; 6],
}

const fn row(
    table: u8,
    label: &'static str,
    g: f64,
    a: f64,
    bc: BoundaryCondition,
    energies: [f64; 6],
) -> PublishedRow {
    PublishedRow {
        table,
        label,
        g,
        a,
        bc,
        energies,
    }
}

use BoundaryCondition::{I, II};

/// `g = 1`, `a = 2`, both boundary conditions.
pub const TABLE_1: [PublishedRow; 2] = [
    row(1, "I", 1.0, 2.0, I, [1.7321, 1.0163, 1.0031, 1.0005, 1.0001, 1.0000]),
    row(1, "II", 1.0, 2.0, II, [1.7321, 1.0163, 0.9981, 1.0002, 1.0000, 1.0000]),
];

/// `g = 1`, condition II, varying `a`.
pub const TABLE_2: [PublishedRow; 3] = [
    row(2, "1.8", 1.0, 1.8, II, [1.6733, 0.9558, 0.9418, 0.9432, 0.9431, 0.9431]),
    row(2, "2", 1.0, 2.0, II, [1.7321, 1.0163, 0.9981, 1.0002, 1.0000, 1.0000]),
    row(2, "3", 1.0, 3.0, II, [2.0000, 1.2974, 1.2602, 1.2659, 1.2651, 1.2652]),
];

/// `a = 2`, condition II, varying `g`.
pub const TABLE_3: [PublishedRow; 4] = [
    row(
        3,
        "0.88",
        0.88,
        2.0,
        II,
        [1.5242, 0.8633, 0.8517, 0.8528, 0.8527, 0.8527],
    ),
    row(3, "1", 1.0, 2.0, II, [1.7321, 1.0163, 0.9981, 1.0002, 1.0000, 1.0000]),
    row(3, "2", 2.0, 2.0, II, [3.4641, 2.6934, 2.6375, 2.6465, 2.6455, 2.6456]),
    row(3, "3", 3.0, 2.0, II, [5.1962, 4.5786, 4.5562, 4.5591, 4.5589, 4.5589]),
];

pub fn published_rows(table: u8) -> Option<&'static [PublishedRow]> {
    match table {
        1 => Some(&TABLE_1),
        2 => Some(&TABLE_2),
        3 => Some(&TABLE_3),
        _ => None,
    }
}

/// Grid used for every table cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TableSettings {
    pub x_max: f64,
    pub intervals_per_panel: usize,
}

impl Default for TableSettings {
    fn default() -> Self {
        Self {
            x_max: 4.0,
            intervals_per_panel: 2000,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    pub published: PublishedRow,
    pub computed: Vec<f64>,
    /// `computed - published`, per column.
    pub diffs: Vec<f64>,
    #[serde(skip)]
    pub report: SolveReport<f64>,
}

impl TableRow {
    pub fn max_abs_diff(&self) -> f64 {
        self.diffs.iter().fold(0.0, |m, d| m.max(d.abs()))
    }
}

pub fn run_row(published: &PublishedRow, settings: &TableSettings) -> Result<TableRow> {
    let p = PotentialParams::new(published.g, published.a)?;
    let grid = Grid::two_panel(settings.x_max, settings.intervals_per_panel)?;
    let report = solve(&p, &grid, published.bc, TABLE_ITERATIONS, 0.0)?;
    let computed = report.energies.clone();
    let diffs = computed.iter().zip(&published.energies).map(|(c, p)| c - p).collect();
    Ok(TableRow {
        published: *published,
        computed,
        diffs,
        report,
    })
}

pub fn run_table(table: u8, settings: &TableSettings) -> Result<Vec<TableRow>> {
    let rows = published_rows(table).ok_or(crate::error::Error::InvalidParameter {
        name: "table",
        value: table as f64,
        constraint: "table must be 1, 2 or 3",
    })?;
    rows.iter().map(|r| run_row(r, settings)).collect()
}

/// Rounds to `decimals` places, ties to even.
pub fn round_half_even(v: f64, decimals: i32) -> f64 {
    let scale = 10f64.powi(decimals);
    (v * scale).round_ties_even() / scale
}

/// Fixed-point text with ties-to-even rounding.
pub fn format_fixed(v: f64, decimals: i32) -> String {
    let r = round_half_even(v, decimals);
    // Avoid "-0.0000".
    let r = if r == 0.0 { 0.0 } else { r };
    format!("{:.*}", decimals.max(0) as usize, r)
}
