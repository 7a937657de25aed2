use std::io::Write;

use wavelock::{compute_bound, BoundReport};

use crate::cli::{BoundArgs, Format};
use crate::output::{csv_option, open_output, text_number, text_option, write_json, Failure};

pub fn run(args: &BoundArgs, timing: bool) -> Result<(), Failure> {
    let params = args.instance.params()?;
    let mut report = compute_bound(&params)?;
    if !timing {
        report.elapsed = None;
    }
    match args.format {
        Format::Json => write_json(&report),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(open_output(None)?);
            w.write_record(CSV_HEADER)?;
            w.write_record(csv_row(&report))?;
            w.flush()?;
            Ok(())
        }
        Format::Text => {
            let mut out = open_output(None)?;
            write!(out, "{}", text(&report))?;
            out.flush()?;
            Ok(())
        }
    }
}

pub const CSV_HEADER: [&str; 20] = [
    "schema", "beta", "p", "q", "A", "B", "regime", "boundary", "bound", "r1", "r2", "lambda1", "lambda2", "T",
    "amplitude", "cross_norm", "residual_p", "residual_q", "wall_time_s", "diagnostics",
];

pub fn csv_row(r: &BoundReport) -> Vec<String> {
    let p = &r.params;
    vec![
        r.schema.clone(),
        p.beta.to_string(),
        p.p.to_string(),
        p.q.to_string(),
        p.a.to_string(),
        p.b.to_string(),
        r.regime.to_string(),
        r.boundary.to_string(),
        r.bound.to_string(),
        csv_option(r.r1),
        csv_option(r.r2),
        r.lambda1.to_string(),
        r.lambda2.to_string(),
        csv_option(r.t_end),
        csv_option(r.amplitude),
        csv_option(r.cross_norm),
        csv_option(r.residual_p),
        csv_option(r.residual_q),
        csv_option(r.elapsed),
        r.diagnostics.join("; "),
    ]
}

pub fn text(r: &BoundReport) -> String {
    let p = &r.params;
    let mut s = String::new();
    let mut line = |k: &str, v: String| s.push_str(&format!("{k:<12} {v}\n"));
    line(
        "instance",
        format!(
            "beta={} p={} q={} A={} B={}",
            text_number(p.beta),
            text_number(p.p),
            text_number(p.q),
            text_number(p.a),
            text_number(p.b)
        ),
    );
    line("regime", format!("{}{}", r.regime, if r.boundary { " (boundary)" } else { "" }));
    line("bound", text_number(r.bound));
    line("r1", text_option(r.r1));
    line("r2", text_option(r.r2));
    line("lambda1", text_number(r.lambda1));
    line("lambda2", text_number(r.lambda2));
    line("T", text_option(r.t_end));
    line("amplitude", text_option(r.amplitude));
    line("cross_norm", text_option(r.cross_norm));
    line("residual_p", text_option(r.residual_p));
    line("residual_q", text_option(r.residual_q));
    if let Some(t) = r.elapsed {
        line("wall_time_s", text_number(t));
    }
    for d in &r.diagnostics {
        line("diagnostic", d.clone());
    }
    s
}
