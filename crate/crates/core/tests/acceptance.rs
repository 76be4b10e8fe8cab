//! End-to-end acceptance criteria. Each criterion prints one PASS/FAIL line;
//! the test fails if any criterion does.

use std::time::{Duration, Instant};

use double_well::hierarchy::{bracket_violations, check_hierarchy};
use double_well::oracle::{oracle_ground_state, peak_census, OracleConfig, PeakStructure};
use double_well::region::{find_a_c, identity_sweep, open_grid, verify_a2_positivity};
use double_well::tables::{run_table, TableRow, TableSettings};
use double_well::{solve, BoundaryCondition, Grid, Params, Report};

const CELL_TOL: f64 = 5e-4;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn table(which: u8) -> Vec<TableRow> {
    run_table(which, &TableSettings::default()).expect("table run")
}

fn converged(g: f64, a: f64, bc: BoundaryCondition, x_max: f64, n: usize, tol: f64, max_iter: usize) -> Report {
    let p = Params::new(g, a).unwrap();
    let grid = Grid::two_panel(x_max, n).unwrap();
    solve(&p, &grid, bc, max_iter, tol).unwrap()
}

fn oracle_energy(g: f64, a: f64) -> f64 {
    oracle_ground_state(&Params::new(g, a).unwrap(), &OracleConfig::default())
        .unwrap()
        .energy
}

fn table_cells(which: u8) -> Outcome {
    let rows = table(which);
    let mut worst = (0.0f64, String::new());
    let mut bad = Vec::new();
    for r in &rows {
        for (col, d) in r.diffs.iter().enumerate() {
            if d.abs() > worst.0 {
                worst = (d.abs(), format!("{} E{col}", r.published.label));
            }
            if d.abs() > CELL_TOL {
                bad.push(format!(
                    "{} E{col}: {:.6} vs {:.4}",
                    r.published.label, r.computed[col], r.published.energies[col]
                ));
            }
        }
    }
    let detail = if bad.is_empty() {
        format!("{} rows, max |diff| {:.2e} at {}", rows.len(), worst.0, worst.1)
    } else {
        format!("{} cells outside {CELL_TOL:e}: {}", bad.len(), bad.join("; "))
    };
    outcome(bad.is_empty(), detail)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let cells = table_cells(1);
    let elapsed = start.elapsed();
    let fast = elapsed < Duration::from_secs(10);
    outcome(
        cells.passed && fast,
        format!("{}; runtime {:.2?}", cells.detail, elapsed),
    )
}

fn criterion_4() -> Outcome {
    let exact = |x: f64| (-x.powi(4) / 4.0).exp();
    let o = oracle_ground_state(&Params::new(1.0, 2.0).unwrap(), &OracleConfig::default()).unwrap();
    let e_gap = (o.energy - 1.0).abs();
    let psi_gap =
        o.x.iter()
            .zip(&o.psi)
            .fold(0.0f64, |m, (&x, &p)| m.max((p - exact(x)).abs()));

    let r = converged(1.0, 2.0, BoundaryCondition::II, 4.0, 2000, 1e-6, 20);
    let mut hier_gap = 0.0f64;
    for n in 4..=r.iterations {
        let psi = r.psi_at(n).unwrap();
        for (&x, &p) in r.x.iter().zip(&psi) {
            hier_gap = hier_gap.max((p - exact(x)).abs());
        }
    }
    outcome(
        e_gap <= 1e-4 && psi_gap <= 1e-4 && r.iterations >= 4 && hier_gap <= 2e-3,
        format!(
            "oracle |E-1| {e_gap:.1e}, oracle psi gap {psi_gap:.1e}, hierarchy psi gap (n = 4..{}) {hier_gap:.1e}",
            r.iterations
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut problems = Vec::new();
    let mut runs = 0;
    for which in 1..=3u8 {
        for r in table(which) {
            runs += 1;
            let v = check_hierarchy(&r.report.ledger);
            if !v.is_empty() {
                problems.push(format!(
                    "table {which} row {}: {} violations, first {}",
                    r.published.label,
                    v.len(),
                    v[0].check
                ));
            }
            if r.published.bc == BoundaryCondition::II {
                let e = oracle_energy(r.published.g, r.published.a);
                let b = bracket_violations(&r.computed, e);
                if !b.is_empty() {
                    problems.push(format!(
                        "table {which} row {}: bracketing fails ({})",
                        r.published.label, b[0].check
                    ));
                }
            }
        }
    }
    let detail = if problems.is_empty() {
        format!("{runs} runs, no violations beyond 1e-9")
    } else {
        problems.join("; ")
    };
    outcome(problems.is_empty(), detail)
}

fn criterion_6() -> Outcome {
    let s = identity_sweep(10_000, 20_240_601);
    outcome(
        s.max_gamma_factorisation <= 1e-9 && s.max_tilde_gamma_factorisation <= 1e-9 && s.max_tilde_gamma_table <= 1e-8,
        format!(
            "{} points: gamma {:.1e}, tilde gamma {:.1e}, table route {:.1e}",
            s.points, s.max_gamma_factorisation, s.max_tilde_gamma_factorisation, s.max_tilde_gamma_table
        ),
    )
}

fn criterion_7() -> Outcome {
    match find_a_c() {
        Ok(ac) => outcome(
            (0.654..=0.674).contains(&ac.a_c) && ac.width <= 1e-3,
            format!("a_c = {:.5}, bisection width {:.1e}", ac.a_c, ac.width),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn criterion_8() -> Outcome {
    let r = verify_a2_positivity(&open_grid(10.0, 10_000));
    outcome(
        r.passed(1e-9),
        format!(
            "{} nodes: {} combination, {} inequality, {} u' sign failures; max u' mismatch {:.1e}",
            r.nodes,
            r.combination_failures.len(),
            r.inequality_failures.len(),
            r.u_prime_failures.len(),
            r.max_u_prime_mismatch
        ),
    )
}

fn criterion_9() -> Outcome {
    let cases = [
        (1.0, 2.0, false),
        (1.0, 1.8, false),
        (0.88, 2.0, false),
        (1.0, 3.0, true),
        (3.0, 2.0, true),
    ];
    let mut notes = Vec::new();
    let mut ok = true;
    for (g, a, double) in cases {
        let o = oracle_ground_state(&Params::new(g, a).unwrap(), &OracleConfig::default()).unwrap();
        let r = converged(g, a, BoundaryCondition::II, 4.0, 2000, 1e-6, 20);
        for (src, peaks) in [
            ("oracle", peak_census(&o.x, &o.psi)),
            ("hierarchy", peak_census(&r.x, &r.psi)),
        ] {
            let good = match peaks {
                PeakStructure::SingleAtOrigin => !double,
                PeakStructure::DoubleNearUnit { .. } => double,
                PeakStructure::Other { .. } => false,
            };
            ok &= good;
            if !good {
                notes.push(format!("({g}, {a}) {src}: {peaks:?}"));
            }
        }
    }
    let detail = if ok {
        "5 parameter sets, oracle and hierarchy agree with the expected shapes".to_string()
    } else {
        notes.join("; ")
    };
    outcome(ok, detail)
}

fn criterion_10() -> Outcome {
    let sets = [
        (1.0, 2.0, BoundaryCondition::I),
        (1.0, 2.0, BoundaryCondition::II),
        (1.0, 1.8, BoundaryCondition::II),
        (1.0, 3.0, BoundaryCondition::II),
        (0.88, 2.0, BoundaryCondition::II),
        (2.0, 2.0, BoundaryCondition::II),
        (3.0, 2.0, BoundaryCondition::II),
    ];
    let e = |g, a, bc, x_max, n| converged(g, a, bc, x_max, n, 1e-12, 80).final_energy();
    let mut worst = (0.0f64, String::new());
    for (g, a, bc) in sets {
        let base = e(g, a, bc, 4.0, 2000);
        for (label, other) in [
            ("n doubled", e(g, a, bc, 4.0, 4000)),
            ("x_max 5", e(g, a, bc, 5.0, 2000)),
        ] {
            let d = (other - base).abs();
            if d > worst.0 {
                worst = (d, format!("({g}, {a}, {bc}) {label}"));
            }
        }
    }
    outcome(worst.0 <= 1e-6, format!("max change {:.1e} at {}", worst.0, worst.1))
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 10] = [
        ("table 1 reproduction", criterion_1),
        ("table 2 reproduction", || table_cells(2)),
        ("table 3 reproduction", || table_cells(3)),
        ("exact solution at g = 1, a = 2", criterion_4),
        ("hierarchy theorem and energy bracketing", criterion_5),
        ("polynomial identities", criterion_6),
        ("critical value a_c", criterion_7),
        ("positivity at a = 2", criterion_8),
        ("peak structure", criterion_9),
        ("grid robustness", criterion_10),
    ];
    let mut failed = Vec::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {status}: {name}: {}", k + 1, o.detail);
        if !o.passed {
            failed.push(k + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
