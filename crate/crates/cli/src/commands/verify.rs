use std::io::Write;
use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;
use wavelock::oracle::{solve_auto, OracleOptions};
use wavelock::verifier::{operator_norm, Discretization, GridSpec, PowerOptions};
use wavelock::{compute_bound, ExtremalWeight, HalfPlanePoint, ProblemParams, RegimeKind, SCHEMA};

use crate::cli::{Format, GridLevel, VerifyArgs};
use crate::output::{open_output, text_number, write_json, Failure};

pub const ORACLE_GAP_TOL: f64 = 1e-2;
pub const ORACLE_POINTWISE_TOL: f64 = 2e-2;
/// Pointwise comparison window as fractions of `T`.
pub const ORACLE_WINDOW: [f64; 2] = [0.02, 0.9];
pub const ISOMETRY_TOL: f64 = 1e-3;
pub const OPERATOR_RANGE: [f64; 2] = [0.90, 1.02];

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub limit: String,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct OracleSummary {
    pub points: usize,
    pub t_max: f64,
    pub objective: f64,
    pub relative_gap: f64,
    pub pointwise_max_rel: f64,
    pub iterations: usize,
    pub residual_p: f64,
    pub residual_q: f64,
    pub constraints_inactive: bool,
}

#[derive(Debug, Serialize)]
pub struct OperatorSummary {
    pub grid: GridSpec,
    pub isometry_defect: f64,
    pub norm: f64,
    pub norm_over_bound: f64,
    pub iterations: usize,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub schema: &'static str,
    pub params: ProblemParams,
    pub regime: RegimeKind,
    pub bound: f64,
    pub oracle: OracleSummary,
    pub operator: Option<OperatorSummary>,
    pub checks: Vec<Check>,
    pub pass: bool,
    #[serde(rename = "wall_time_s")]
    pub elapsed: Option<f64>,
}

fn grid_spec(args: &VerifyArgs) -> GridSpec {
    let [coarse, medium, desk] = GridSpec::ladder();
    let mut g = match args.grid {
        GridLevel::Coarse => coarse,
        GridLevel::Medium => medium,
        GridLevel::Desk => desk,
    };
    if let Some(v) = args.half_width {
        g.half_width = v;
    }
    if let Some(v) = args.n_omega {
        g.n_omega = v;
    }
    if let Some(v) = args.n_x {
        g.n_x = v;
    }
    if let Some(v) = args.y_min {
        g.y_min = v;
    }
    if let Some(v) = args.y_max {
        g.y_max = v;
    }
    if let Some(v) = args.n_y {
        g.n_y = v;
    }
    g
}

pub fn verify(args: &VerifyArgs, timing: bool) -> Result<VerifyReport, Failure> {
    let started = Instant::now();
    let params = args.instance.params()?;
    let report = compute_bound(&params)?;
    let bound = report.bound;
    let weight = ExtremalWeight::from_report(&report, HalfPlanePoint::I, 0.0)?;
    let t_end = weight.peak();
    let mut checks = Vec::new();

    let (prob, sol) = solve_auto(&params, args.oracle_points, 1.0, &OracleOptions::default())?;
    let gap = (sol.objective - bound).abs() / bound;
    let mut pointwise: f64 = 0.0;
    for (&t, &v) in prob.t.iter().zip(&sol.v) {
        if t > ORACLE_WINDOW[0] * t_end && t < ORACLE_WINDOW[1] * t_end {
            let u = weight.distribution(t);
            pointwise = pointwise.max((v - u).abs() / u);
        }
    }
    checks.push(Check {
        name: "oracle_objective_gap",
        value: gap,
        limit: format!("<= {ORACLE_GAP_TOL}"),
        pass: gap <= ORACLE_GAP_TOL,
    });
    checks.push(Check {
        name: "oracle_pointwise",
        value: pointwise,
        limit: format!("<= {ORACLE_POINTWISE_TOL}"),
        pass: pointwise <= ORACLE_POINTWISE_TOL,
    });
    let oracle = OracleSummary {
        points: prob.len(),
        t_max: prob.t_max(),
        objective: sol.objective,
        relative_gap: gap,
        pointwise_max_rel: pointwise,
        iterations: sol.iterations,
        residual_p: sol.residual_p,
        residual_q: sol.residual_q,
        constraints_inactive: sol.constraints_inactive,
    };

    let operator = if args.skip_operator {
        None
    } else {
        let spec = grid_spec(args);
        let disc = Discretization::new(params.beta, spec)?;
        let probe = disc.vector(|w| Complex64::new(w * (-w).exp(), 0.0));
        let defect = disc.isometry_defect(&probe);
        let scale = args.corrupt_weight.unwrap_or(1.0);
        let field = disc.sample_weight(|z| weight.eval(z) * scale);
        let est = operator_norm(&disc, &field, None, &PowerOptions::default())?;
        let ratio = est.norm / bound;
        checks.push(Check {
            name: "isometry_defect",
            value: defect,
            limit: format!("<= {ISOMETRY_TOL}"),
            pass: defect <= ISOMETRY_TOL,
        });
        checks.push(Check {
            name: "operator_norm_over_bound",
            value: ratio,
            limit: format!("in [{}, {}]", OPERATOR_RANGE[0], OPERATOR_RANGE[1]),
            pass: ratio >= OPERATOR_RANGE[0] && ratio <= OPERATOR_RANGE[1],
        });
        Some(OperatorSummary {
            grid: spec,
            isometry_defect: defect,
            norm: est.norm,
            norm_over_bound: ratio,
            iterations: est.iterations,
        })
    };

    let pass = checks.iter().all(|c| c.pass);
    Ok(VerifyReport {
        schema: SCHEMA,
        params,
        regime: report.regime,
        bound,
        oracle,
        operator,
        checks,
        pass,
        elapsed: timing.then(|| started.elapsed().as_secs_f64()),
    })
}

pub fn run(args: &VerifyArgs, timing: bool) -> Result<(), Failure> {
    let report = verify(args, timing)?;
    match args.format {
        Format::Json => write_json(&report)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(open_output(None)?);
            w.write_record(["check", "value", "limit", "pass"])?;
            for c in &report.checks {
                w.write_record([c.name.to_string(), c.value.to_string(), c.limit.clone(), c.pass.to_string()])?;
            }
            w.flush()?;
        }
        Format::Text => {
            let mut out = open_output(None)?;
            writeln!(out, "regime       {}", report.regime)?;
            writeln!(out, "bound        {}", text_number(report.bound))?;
            writeln!(out, "oracle       {} (N = {})", text_number(report.oracle.objective), report.oracle.points)?;
            if let Some(op) = &report.operator {
                writeln!(out, "operator     {} ({} iterations)", text_number(op.norm), op.iterations)?;
            }
            for c in &report.checks {
                writeln!(
                    out,
                    "{:<4} {:<26} {} {}",
                    if c.pass { "ok" } else { "FAIL" },
                    c.name,
                    text_number(c.value),
                    c.limit
                )?;
            }
            out.flush()?;
        }
    }
    if report.pass {
        Ok(())
    } else {
        let failed: Vec<&str> = report.checks.iter().filter(|c| !c.pass).map(|c| c.name).collect();
        Err(Failure::Tolerance(format!("checks failed: {}", failed.join(", "))))
    }
}
