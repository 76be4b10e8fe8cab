use thiserror::Error;

/// Errors raised by the library. Numeric payloads are reported as `f64`
/// regardless of the scalar type the computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter {name} = {value}: {constraint}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    #[error("coordinate x = {0} is negative; only x >= 0 is accepted (the model is even in x)")]
    NegativeCoordinate(f64),

    #[error("x = {x} lies within {guard} of the removable singularity at x = 1 and series handling is disabled")]
    RemovableSingularity { x: f64, guard: f64 },

    #[error(
        "mixing coefficient Gamma = {gamma} is not positive: coupling g = {g} must exceed sqrt(1+a)/a = {g_min} (equivalently a > a_g = {a_g})"
    )]
    ConvergenceDomain {
        g: f64,
        a: f64,
        gamma: f64,
        g_min: f64,
        a_g: f64,
    },

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("grid mismatch: expected {expected} samples, got {actual}")]
    GridMismatch { expected: usize, actual: usize },

    #[error("folded exponent {exponent} at node {node} exceeds the overflow guard; refine the grid or reduce x_max")]
    OverflowGuard { exponent: f64, node: usize },

    #[error("truncation at x_max leaves a tail bound {bound:e} above {limit:e} of the integral scale")]
    Truncation { bound: f64, limit: f64 },

    #[error("normalisation integral {0} is not positive")]
    DegenerateDenominator(f64),

    #[error("iterate f_{iteration} lost positivity at node {node} (x = {x}, f = {value})")]
    PositivityLoss {
        iteration: usize,
        node: usize,
        x: f64,
        value: f64,
    },

    #[error("bisection bracket [{lo}, {hi}] does not change sign")]
    Bracket { lo: f64, hi: f64 },

    #[error("discretisation estimates {coarse} and {fine} differ by more than {limit}")]
    Discretization { coarse: f64, fine: f64, limit: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
