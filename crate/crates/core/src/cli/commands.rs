use serde::Serialize;

use super::config::{OutputFormat, RunConfig};
use super::output::{sci, write_json, Csv};
use super::Outcome;
use crate::hierarchy::{solve as run_solve, SolveWarning, Violation};
use crate::oracle::{oracle_ground_state, peak_census, OracleConfig, PeakStructure};
use crate::region::{trace_curves, CriticalValue, Plane, RootNotBracketed, CRITICAL_A};
use crate::tables::{format_fixed, run_table, PublishedRow, TableSettings};

fn fixed4(v: f64) -> String {
    format_fixed(v, 4)
}

#[derive(Serialize)]
struct ErrorEstimates {
    /// `|E_n - E_(n-1)|` at the last iteration.
    last_change: f64,
    /// Size of the Richardson correction in the reference energy.
    oracle: f64,
}

#[derive(Serialize)]
struct Wavefunctions<'a> {
    x: &'a [f64],
    psi0: &'a [f64],
    psi2: Option<Vec<f64>>,
    psi_final: &'a [f64],
    psi_oracle: Vec<f64>,
}

#[derive(Serialize)]
struct SolveBody<'a> {
    energies: &'a [f64],
    curly_e: &'a [f64],
    iterations: usize,
    converged: bool,
    oracle_energy: f64,
    error_estimates: ErrorEstimates,
    a_c: f64,
    violations: &'a [Violation],
    warnings: &'a [SolveWarning],
    wavefunctions: Wavefunctions<'a>,
}

pub fn solve(cfg: &RunConfig) -> Outcome {
    let (p, grid) = cfg.validate_for_solve()?;
    let report = run_solve(&p, &grid, cfg.bc, cfg.max_iter, cfg.tol)?;
    let oracle = oracle_ground_state(&p, &OracleConfig::default())?;

    let line: Vec<String> = report.energies.iter().map(|&e| fixed4(e)).collect();
    say!("{}", line.join(" "));
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    for v in &report.violations {
        eprintln!(
            "violation: {} at n = {}{} by {:e}",
            v.check,
            v.iteration,
            v.node.map(|k| format!(", node {k}")).unwrap_or_default(),
            v.excess
        );
    }

    let psi2 = report.psi_at(2);
    let psi_oracle: Vec<f64> = report.x.iter().map(|&x| oracle.psi_at(x)).collect();
    let last_change = match report.energies.as_slice() {
        [.., a, b] => (b - a).abs(),
        _ => f64::NAN,
    };

    match cfg.format {
        OutputFormat::Json => {
            let body = SolveBody {
                energies: &report.energies,
                curly_e: &report.curly_e,
                iterations: report.iterations,
                converged: report.converged,
                oracle_energy: oracle.energy,
                error_estimates: ErrorEstimates {
                    last_change,
                    oracle: oracle.error_estimate,
                },
                a_c: CRITICAL_A,
                violations: &report.violations,
                warnings: &report.warnings,
                wavefunctions: Wavefunctions {
                    x: &report.x,
                    psi0: &report.psi0,
                    psi2,
                    psi_final: &report.psi,
                    psi_oracle,
                },
            };
            write_json(&cfg.out.join("solve.json"), "solve", cfg, body)?;
        }
        OutputFormat::Csv => {
            let mut e = Csv::new("solve-energies", cfg, &["n", "energy", "energy_full", "curly_e"]);
            for (n, &en) in report.energies.iter().enumerate() {
                let ce = n.checked_sub(1).map(|i| sci(report.curly_e[i])).unwrap_or_default();
                e.row(&[n.to_string(), fixed4(en), sci(en), ce]);
            }
            e.write(&cfg.out.join("solve_energies.csv"))?;

            let mut w = Csv::new(
                "solve-wavefunctions",
                cfg,
                &["x", "psi0", "psi2", "psi_final", "psi_oracle"],
            );
            for k in 0..report.x.len() {
                let p2 = psi2.as_ref().map(|v| sci(v[k])).unwrap_or_default();
                w.row(&[
                    sci(report.x[k]),
                    sci(report.psi0[k]),
                    p2,
                    sci(report.psi[k]),
                    sci(psi_oracle[k]),
                ]);
            }
            w.write(&cfg.out.join("solve_wavefunctions.csv"))?;
        }
    }
    Ok(report.violations.is_empty())
}

#[derive(Serialize)]
struct TableJsonRow<'a> {
    published: &'a PublishedRow,
    computed: &'a [f64],
    diffs: &'a [f64],
    max_abs_diff: f64,
    violations: &'a [Violation],
}

#[derive(Serialize)]
struct TableBody<'a> {
    table: u8,
    settings: TableSettings,
    rows: Vec<TableJsonRow<'a>>,
}

pub fn table(cfg: &RunConfig, which: u8) -> Outcome {
    let settings = TableSettings {
        x_max: cfg.x_max,
        intervals_per_panel: cfg.n_points,
    };
    let rows = run_table(which, &settings)?;

    const HEADER: [&str; 11] = ["row", "g", "a", "bc", "E0", "E1", "E2", "E3", "E4", "E5", "max_diff"];
    say!("{}", HEADER.join("\t"));
    let mut csv = Csv::new("table", cfg, &HEADER);
    for r in &rows {
        let mut cells = vec![
            r.published.label.to_string(),
            r.published.g.to_string(),
            r.published.a.to_string(),
            r.published.bc.to_string(),
        ];
        cells.extend(r.computed.iter().map(|&e| fixed4(e)));
        cells.push(fixed4(r.max_abs_diff()));
        say!("{}", cells.join("\t"));
        csv.row(&cells);
    }

    match cfg.format {
        OutputFormat::Csv => csv.write(&cfg.out.join(format!("table{which}.csv")))?,
        OutputFormat::Json => {
            let body = TableBody {
                table: which,
                settings,
                rows: rows
                    .iter()
                    .map(|r| TableJsonRow {
                        published: &r.published,
                        computed: &r.computed,
                        diffs: &r.diffs,
                        max_abs_diff: r.max_abs_diff(),
                        violations: &r.report.violations,
                    })
                    .collect(),
            };
            write_json(&cfg.out.join(format!("table{which}.json")), "table", cfg, body)?;
        }
    }
    Ok(true)
}

#[derive(Serialize)]
struct CurveSummary {
    name: &'static str,
    plane: Plane,
    a_top: f64,
    rows: usize,
}

#[derive(Serialize)]
struct RegionBody<'a> {
    resolution: usize,
    a_c: &'a CriticalValue,
    a_g: &'a [(f64, f64)],
    curves: Vec<CurveSummary>,
    unbracketed: &'a [RootNotBracketed],
    ordering_violations: &'a [(f64, f64)],
}

pub fn region(cfg: &RunConfig, resolution: usize) -> Outcome {
    let report = trace_curves(resolution)?;
    for c in &report.curves {
        let coord = match c.plane {
            Plane::X => "x",
            Plane::Z => "z",
        };
        let mut csv = Csv::new(&format!("region-curve {}", c.kind.name()), cfg, &["a", coord]);
        for &(a, v) in &c.points {
            csv.row(&[sci(a), sci(v)]);
        }
        csv.write(&cfg.out.join(format!("curve_{}.csv", c.kind.name())))?;
    }
    let body = RegionBody {
        resolution,
        a_c: &report.a_c,
        a_g: &report.a_g,
        curves: report
            .curves
            .iter()
            .map(|c| CurveSummary {
                name: c.kind.name(),
                plane: c.plane,
                a_top: c.a_top,
                rows: c.points.len(),
            })
            .collect(),
        unbracketed: &report.unbracketed,
        ordering_violations: &report.ordering_violations,
    };
    write_json(&cfg.out.join("region.json"), "region", cfg, body)?;

    let ac = &report.a_c;
    say!(
        "a_c = {:.5} (bracket [{:.6}, {:.6}], width {:.1e})",
        ac.a_c,
        ac.lo,
        ac.hi,
        ac.width
    );
    for c in &report.curves {
        say!("{:<12} {} rows, a up to {:.4}", c.kind.name(), c.points.len(), c.a_top);
    }
    if !report.ordering_violations.is_empty() {
        eprintln!(
            "{} points where gamma lies outside beta",
            report.ordering_violations.len()
        );
    }
    Ok(report.ordering_violations.is_empty())
}

#[derive(Serialize)]
struct OracleBody<'a> {
    energy: f64,
    coarse: f64,
    fine: f64,
    error_estimates: f64,
    peaks: &'a PeakStructure,
    x: &'a [f64],
    psi: &'a [f64],
}

pub fn oracle(cfg: &RunConfig) -> Outcome {
    let p = cfg.params()?;
    let r = oracle_ground_state(&p, &OracleConfig::default())?;
    let peaks = peak_census(&r.x, &r.psi);
    say!("E = {:.10} +- {:.1e}", r.energy, r.error_estimate);
    match &peaks {
        PeakStructure::SingleAtOrigin => say!("single maximum at x = 0"),
        PeakStructure::DoubleNearUnit { x } => say!("double maximum at x = +-{x:.4}"),
        PeakStructure::Other { maxima } => say!("maxima at {maxima:?}"),
    }
    match cfg.format {
        OutputFormat::Csv => {
            let mut csv = Csv::new("oracle", cfg, &["x", "psi"]);
            for (&x, &y) in r.x.iter().zip(&r.psi) {
                csv.row(&[sci(x), sci(y)]);
            }
            csv.write(&cfg.out.join("oracle.csv"))?;
        }
        OutputFormat::Json => {
            let body = OracleBody {
                energy: r.energy,
                coarse: r.coarse,
                fine: r.fine,
                error_estimates: r.error_estimate,
                peaks: &peaks,
                x: &r.x,
                psi: &r.psi,
            };
            write_json(&cfg.out.join("oracle.json"), "oracle", cfg, body)?;
        }
    }
    Ok(true)
}
