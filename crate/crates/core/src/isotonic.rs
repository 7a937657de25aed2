//! Weighted isotonic regression by pool-adjacent-violators.

/// Least-squares projection of `values` onto nonincreasing sequences under
/// the weights `weights` (all positive).
pub fn nonincreasing(values: &[f64], weights: &[f64]) -> Vec<f64> {
    assert_eq!(values.len(), weights.len());
    // Blocks of (weighted mean, total weight, length).
    let mut blocks: Vec<(f64, f64, usize)> = Vec::with_capacity(values.len());
    for (&v, &w) in values.iter().zip(weights) {
        let mut cur = (v, w, 1usize);
        while let Some(&(m, tw, n)) = blocks.last() {
            if m >= cur.0 {
                break;
            }
            blocks.pop();
            let total = tw + cur.1;
            cur = ((m * tw + cur.0 * cur.1) / total, total, n + cur.2);
        }
        blocks.push(cur);
    }
    let mut out = Vec::with_capacity(values.len());
    for (m, _, n) in blocks {
        out.extend(std::iter::repeat(m).take(n));
    }
    out
}

/// Largest increase between consecutive entries, zero for nonincreasing input.
pub fn max_violation(values: &[f64]) -> f64 {
    values.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pools_violators() {
        let out = nonincreasing(&[3.0, 1.0, 2.0, 0.0], &[1.0; 4]);
        assert_eq!(out, vec![3.0, 1.5, 1.5, 0.0]);
        let out = nonincreasing(&[1.0, 2.0], &[3.0, 1.0]);
        assert_eq!(out, vec![1.25, 1.25]);
        assert_eq!(nonincreasing(&[], &[]), Vec::<f64>::new());
    }

    proptest! {
        #[test]
        fn output_is_nonincreasing_and_preserves_mass(
            data in prop::collection::vec((-10.0f64..10.0, 0.1f64..5.0), 1..60)
        ) {
            let (v, w): (Vec<f64>, Vec<f64>) = data.into_iter().unzip();
            let out = nonincreasing(&v, &w);
            prop_assert_eq!(max_violation(&out), 0.0);
            let before: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
            let after: f64 = out.iter().zip(&w).map(|(a, b)| a * b).sum();
            prop_assert!((before - after).abs() <= 1e-9 * (1.0 + before.abs()));
        }

        #[test]
        fn fixed_point_on_monotone_input(mut v in prop::collection::vec(-5.0f64..5.0, 1..40)) {
            v.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let out = nonincreasing(&v, &vec![1.0; v.len()]);
            prop_assert_eq!(out, v);
        }
    }
}
