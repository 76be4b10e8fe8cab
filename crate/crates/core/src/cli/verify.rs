use serde::Serialize;

use super::config::{OutputFormat, RunConfig};
use super::output::{write_json, Csv};
use super::Outcome;
use crate::closed_forms::PotentialParams;
use crate::hierarchy::{bracket_violations, solve, BoundaryCondition};
use crate::oracle::{oracle_ground_state, OracleConfig};
use crate::region::{find_a_c, identity_sweep, open_grid, sup_u_prime, verify_a2_positivity};
use crate::tables::{run_table, TableSettings};

const SWEEP_POINTS: usize = 10_000;
const SWEEP_SEED: u64 = 0x5eed;
const IDENTITY_LIMIT: f64 = 1e-9;
const TABLE_ROUTE_LIMIT: f64 = 1e-8;
const U_PRIME_LIMIT: f64 = 1e-9;
const A_C_RANGE: (f64, f64) = (0.654, 0.674);
const A_C_WIDTH: f64 = 1e-3;
const ORACLE_AGREEMENT: f64 = 5e-4;
/// Inside `(0, a_c)`, where `u'` changes sign.
const OUTSIDE_A: f64 = 0.3;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Demonstration of a known failure; not counted in the summary.
    pub expected_failure: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: String) -> Self {
        Self {
            name: name.into(),
            passed,
            expected_failure: false,
            detail,
        }
    }

    fn status(&self) -> &'static str {
        match (self.expected_failure, self.passed) {
            (false, true) => "PASS",
            (false, false) => "FAIL",
            (true, false) => "XFAIL",
            (true, true) => "XPASS",
        }
    }
}

/// All verification checks, in a fixed order.
pub fn run_checks(settings: &TableSettings) -> Vec<Check> {
    let mut out = Vec::new();

    let s = identity_sweep(SWEEP_POINTS, SWEEP_SEED);
    out.push(Check::new(
        "identity_gamma_factorisation",
        s.max_gamma_factorisation <= IDENTITY_LIMIT,
        format!(
            "max relative residual {:.2e} over {} points",
            s.max_gamma_factorisation, s.points
        ),
    ));
    out.push(Check::new(
        "identity_tilde_gamma_factorisation",
        s.max_tilde_gamma_factorisation <= IDENTITY_LIMIT,
        format!(
            "max relative residual {:.2e} over {} points",
            s.max_tilde_gamma_factorisation, s.points
        ),
    ));
    out.push(Check::new(
        "identity_tilde_gamma_table",
        s.max_tilde_gamma_table <= TABLE_ROUTE_LIMIT,
        format!(
            "max relative residual {:.2e} over {} points",
            s.max_tilde_gamma_table, s.points
        ),
    ));

    let pos = verify_a2_positivity(&open_grid(10.0, SWEEP_POINTS));
    out.push(Check::new(
        "positivity_a2",
        pos.passed(U_PRIME_LIMIT),
        format!(
            "{} nodes; {} combination, {} inequality, {} u' failures; u' mismatch {:.2e}",
            pos.nodes,
            pos.combination_failures.len(),
            pos.inequality_failures.len(),
            pos.u_prime_failures.len(),
            pos.max_u_prime_mismatch
        ),
    ));

    match find_a_c() {
        Ok(ac) => out.push(Check::new(
            "critical_a",
            (A_C_RANGE.0..=A_C_RANGE.1).contains(&ac.a_c) && ac.width <= A_C_WIDTH,
            format!("a_c = {:.5}, width {:.1e}", ac.a_c, ac.width),
        )),
        Err(e) => out.push(Check::new("critical_a", false, e.to_string())),
    }

    for which in 1..=3u8 {
        let rows = match run_table(which, settings) {
            Ok(rows) => rows,
            Err(e) => {
                out.push(Check::new(format!("hierarchy_table{which}"), false, e.to_string()));
                continue;
            }
        };
        for r in &rows {
            let name = format!("hierarchy_table{which}_{}", r.published.label);
            let v = &r.report.violations;
            out.push(Check::new(name, v.is_empty(), format!("{} violations", v.len())));
            if r.published.bc != BoundaryCondition::II {
                continue;
            }
            let name = format!("bracket_table{which}_{}", r.published.label);
            let check = match PotentialParams::new(r.published.g, r.published.a)
                .and_then(|p| oracle_ground_state(&p, &OracleConfig::default()))
            {
                Ok(o) => {
                    let v = bracket_violations(&r.computed, o.energy);
                    Check::new(
                        name,
                        v.is_empty(),
                        format!("E = {:.6}; {} bracketing violations", o.energy, v.len()),
                    )
                }
                Err(e) => Check::new(name, false, e.to_string()),
            };
            out.push(check);
        }
    }

    out.push(oracle_agreement(settings));

    let sup = sup_u_prime(OUTSIDE_A, 5.0, 4000);
    out.push(Check {
        name: format!("u_prime_negative_a{OUTSIDE_A}"),
        passed: sup.value < 0.0,
        expected_failure: true,
        detail: format!("sup u' = {:.3e} at x = {:.4}; a is below a_c", sup.value, sup.x),
    });
    out
}

fn oracle_agreement(settings: &TableSettings) -> Check {
    let name = "oracle_vs_converged";
    let run = || -> crate::Result<(f64, f64)> {
        let p = PotentialParams::new(1.0, 2.0)?;
        let grid = crate::Grid::two_panel(settings.x_max, settings.intervals_per_panel)?;
        let r = solve(&p, &grid, BoundaryCondition::II, 20, 1e-6)?;
        Ok((
            r.final_energy(),
            oracle_ground_state(&p, &OracleConfig::default())?.energy,
        ))
    };
    match run() {
        Ok((e, o)) => Check::new(
            name,
            (e - o).abs() <= ORACLE_AGREEMENT,
            format!("hierarchy {e:.6}, oracle {o:.6}, gap {:.1e}", (e - o).abs()),
        ),
        Err(e) => Check::new(name, false, e.to_string()),
    }
}

#[derive(Serialize)]
struct VerifyBody<'a> {
    passed: usize,
    failed: usize,
    checks: &'a [Check],
}

pub fn verify(cfg: &RunConfig) -> Outcome {
    let settings = TableSettings {
        x_max: cfg.x_max,
        intervals_per_panel: cfg.n_points,
    };
    let checks = run_checks(&settings);
    for c in &checks {
        say!("{:<5} {:<40} {}", c.status(), c.name, c.detail);
    }
    let counted = checks.iter().filter(|c| !c.expected_failure);
    let passed = counted.clone().filter(|c| c.passed).count();
    let failed = counted.count() - passed;
    say!("{passed} passed, {failed} failed");

    match cfg.format {
        OutputFormat::Json => {
            let body = VerifyBody {
                passed,
                failed,
                checks: &checks,
            };
            write_json(&cfg.out.join("verify.json"), "verify", cfg, body)?;
        }
        OutputFormat::Csv => {
            let mut csv = Csv::new("verify", cfg, &["check", "status", "detail"]);
            for c in &checks {
                csv.row(&[
                    c.name.as_str(),
                    c.status(),
                    &format!("\"{}\"", c.detail.replace('"', "'")),
                ]);
            }
            csv.write(&cfg.out.join("verify.csv"))?;
        }
    }
    Ok(failed == 0)
}
