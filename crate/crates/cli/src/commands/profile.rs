use wavelock::weight::sample_profile;
use wavelock::{compute_bound, ExtremalWeight, HalfPlanePoint};

use crate::cli::ProfileArgs;
use crate::output::{open_output, Failure};

/// Rows `(d_k, x, y, |F|(d_k), t_k, u(t_k))` with `d_k = k / N` and
/// `t_k = T (k + 1) / N`. `(x, y)` is the point straight above the centre at
/// squared pseudo-hyperbolic distance `d_k`.
pub fn run(args: &ProfileArgs) -> Result<(), Failure> {
    let params = args.instance.params()?;
    if args.samples == 0 {
        return Err(Failure::Input("--samples must be positive".into()));
    }
    let report = compute_bound(&params)?;
    let center = HalfPlanePoint::new(args.center.0, args.center.1)?;
    let weight = ExtremalWeight::from_report(&report, center, 0.0)?;
    let peak = weight.peak();
    let n = args.samples;
    let mut w = csv::Writer::from_writer(open_output(args.out.as_deref())?);
    w.write_record(["d", "x", "y", "magnitude", "t", "u"])?;
    for (k, (d, m)) in sample_profile(&weight, n).into_iter().enumerate() {
        let t = peak * (k + 1) as f64 / n as f64;
        let r = d.sqrt();
        let y = center.y * (1.0 + r) / (1.0 - r);
        w.write_record([
            d.to_string(),
            center.x.to_string(),
            y.to_string(),
            m.to_string(),
            t.to_string(),
            weight.distribution(t).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
