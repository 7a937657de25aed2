use rayon::prelude::*;
use wavelock::{compute_bound, ExtremalWeight, HalfPlanePoint};

use crate::cli::GridArgs;
use crate::output::{open_output, Failure};

/// Extremal weight sampled on a uniform-x, log-y grid.
pub fn run(args: &GridArgs) -> Result<(), Failure> {
    let params = args.instance.params()?;
    if args.nx < 2 || args.ny < 2 || !(args.x_max > args.x_min) || !(args.y_min > 0.0 && args.y_max > args.y_min) {
        return Err(Failure::Input(
            "grid needs nx, ny >= 2, x_min < x_max and 0 < y_min < y_max".into(),
        ));
    }
    let report = compute_bound(&params)?;
    let center = HalfPlanePoint::new(args.center.0, args.center.1)?;
    let weight = ExtremalWeight::from_report(&report, center, args.phase)?;
    let (lo, hi) = (args.y_min.ln(), args.y_max.ln());
    let rows: Vec<Vec<[f64; 5]>> = (0..args.ny)
        .into_par_iter()
        .map(|l| {
            let y = (lo + (hi - lo) * l as f64 / (args.ny - 1) as f64).exp();
            (0..args.nx)
                .map(|j| {
                    let x = args.x_min + (args.x_max - args.x_min) * j as f64 / (args.nx - 1) as f64;
                    let f = weight.eval(HalfPlanePoint { x, y });
                    [x, y, f.norm(), f.re, f.im]
                })
                .collect()
        })
        .collect();
    let mut w = csv::Writer::from_writer(open_output(args.out.as_deref())?);
    w.write_record(["x", "y", "abs_F", "re_F", "im_F"])?;
    for row in rows.iter().flatten() {
        w.write_record(row.iter().map(|v| v.to_string()))?;
    }
    w.flush()?;
    Ok(())
}
