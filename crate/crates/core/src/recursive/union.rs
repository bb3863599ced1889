use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnionDecision {
    pub reject: bool,
    /// `max_i (q_1 / q_i) stat_i`.
    pub u: f64,
    /// `psi q_1`, the threshold for `u`.
    pub threshold: f64,
    /// Members whose statistic exceeds `psi` times their critical value.
    pub rejecting: Vec<usize>,
}

/// Rejects iff some `stat_i > psi * cv_i`.
pub fn union_of_rejections(stats: &[f64], cvs: &[f64], psi: f64) -> Result<UnionDecision> {
    if stats.len() != cvs.len() {
        return Err(Error::invalid(format!(
            "{} statistics but {} critical values",
            stats.len(),
            cvs.len()
        )));
    }
    if stats.len() < 2 {
        return Err(Error::invalid("a union needs at least two tests"));
    }
    if cvs.iter().any(|c| !(c.is_finite() && *c > 0.0)) {
        return Err(Error::invalid("critical values must be finite and positive"));
    }
    if !(psi.is_finite() && psi > 0.0) {
        return Err(Error::invalid("psi must be positive"));
    }
    let rejecting: Vec<usize> = (0..stats.len())
        .filter(|&i| stats[i] > psi * cvs[i])
        .collect();
    let q1 = cvs[0];
    let u = stats
        .iter()
        .zip(cvs)
        .map(|(s, c)| q1 / c * s)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(UnionDecision {
        reject: !rejecting.is_empty(),
        u,
        threshold: psi * q1,
        rejecting,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_rules() {
        assert!(!union_of_rejections(&[1.0, 0.5], &[1.5, 1.0], 1.0).unwrap().reject);
        assert!(union_of_rejections(&[1.0, 1.2], &[1.5, 1.0], 1.0).unwrap().reject);
        assert!(union_of_rejections(&[1.0], &[1.5, 1.0], 1.0).is_err());
    }

    proptest::proptest! {
        #[test]
        fn rejection_grows_as_psi_falls(
            s in proptest::collection::vec(-3.0f64..5.0, 3),
            c in proptest::collection::vec(0.5f64..3.0, 3),
            a in 0.5f64..1.5, b in 0.5f64..1.5,
        ) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let r_hi = union_of_rejections(&s, &c, hi).unwrap();
            let r_lo = union_of_rejections(&s, &c, lo).unwrap();
            proptest::prop_assert!(!r_hi.reject || r_lo.reject);
            for i in &r_hi.rejecting {
                proptest::prop_assert!(r_lo.rejecting.contains(i));
            }
        }
    }
}
