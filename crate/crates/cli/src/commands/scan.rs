use rayon::prelude::*;
use serde::Serialize;
use wavelock::problem::ExponentConstants;
use wavelock::{compute_bound, ProblemParams};

use crate::cli::ScanArgs;
use crate::output::{open_output, Failure};

#[derive(Debug, Serialize)]
struct Row {
    index: usize,
    beta: f64,
    p: f64,
    q: f64,
    #[serde(rename = "A")]
    a: f64,
    #[serde(rename = "B")]
    b: f64,
    ratio: f64,
    regime: Option<String>,
    bound: Option<f64>,
    lambda1: Option<f64>,
    lambda2: Option<f64>,
    #[serde(rename = "T")]
    t_end: Option<f64>,
    r1: Option<f64>,
    r2: Option<f64>,
    /// `(4 pi sigma_p)^(-1/p)`, the limit of `r2` as `q` grows.
    r2_limit: f64,
    error: Option<String>,
}

fn row(index: usize, beta: f64, p: f64, q: f64, a: f64, ratio: f64) -> Row {
    let b = a * ratio;
    let sigma = ExponentConstants::new(p, beta).sigma;
    let mut r = Row {
        index,
        beta,
        p,
        q,
        a,
        b,
        ratio,
        regime: None,
        bound: None,
        lambda1: None,
        lambda2: None,
        t_end: None,
        r1: None,
        r2: None,
        r2_limit: (4.0 * std::f64::consts::PI * sigma).powf(-1.0 / p),
        error: None,
    };
    match ProblemParams::new(beta, p, q, a, b).and_then(|prm| compute_bound(&prm)) {
        Ok(rep) => {
            r.regime = Some(rep.regime.to_string());
            r.bound = Some(rep.bound);
            r.lambda1 = Some(rep.lambda1);
            r.lambda2 = Some(rep.lambda2);
            r.t_end = rep.t_end;
            r.r1 = rep.r1;
            r.r2 = rep.r2;
        }
        Err(e) => r.error = Some(e.to_string()),
    }
    r
}

pub fn run(args: &ScanArgs) -> Result<(), Failure> {
    let instances: Vec<(f64, f64)> = match (&args.q_sweep, args.q) {
        (Some(qs), _) => qs.iter().map(|&q| (q, args.ratio)).collect(),
        (None, Some(q)) => {
            if args.steps == 0 || !(args.ratio_min > 0.0) || args.ratio_max < args.ratio_min {
                return Err(Failure::Input("need steps >= 1 and 0 < ratio_min <= ratio_max".into()));
            }
            let n = args.steps;
            (0..n)
                .map(|k| {
                    let x = if n == 1 {
                        args.ratio_min
                    } else {
                        args.ratio_min + (args.ratio_max - args.ratio_min) * k as f64 / (n - 1) as f64
                    };
                    (q, x)
                })
                .collect()
        }
        (None, None) => return Err(Failure::Input("scan needs --q or --q-sweep".into())),
    };
    let rows: Vec<Row> = instances
        .par_iter()
        .enumerate()
        .map(|(i, &(q, ratio))| row(i, args.beta, args.p, q, args.a, ratio))
        .collect();
    let mut w = csv::Writer::from_writer(open_output(args.out.as_deref())?);
    for r in &rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
