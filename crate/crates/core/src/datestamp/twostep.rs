use super::models::{select_model_bic, DEFAULT_MIN_SEGMENT};
use super::stamp::{default_min_duration, psy_stamp, CvSequence, Episode};
use crate::error::Result;
use crate::ols::AdfConfig;
use crate::recursive::bsadf_sequence;
use crate::series::Series;

/// PSY dating with the rule critical values, then SSR/BIC refinement of each
/// episode on the subsample running from the midpoint after the previous
/// episode to the midpoint before the next one. An episode whose subsample
/// cannot be fitted keeps its PSY dates.
pub fn two_step_stamp(series: &Series, tau0: f64, cfg: AdfConfig) -> Result<Vec<Episode>> {
    let n = series.len();
    let bsadf = bsadf_sequence(series, tau0, cfg)?;
    let first = psy_stamp(&bsadf, &CvSequence::rule(&bsadf), default_min_duration(n, 1.0))?;
    let mut out = Vec::with_capacity(first.len());
    for (i, ep) in first.iter().enumerate() {
        let lo = match i {
            0 => 0,
            _ => (first[i - 1].collapse_index + ep.origin_index) / 2,
        };
        let hi = match first.get(i + 1) {
            Some(next) => (ep.collapse_index + next.origin_index) / 2,
            None => n,
        };
        let refined = series
            .window(lo, hi)
            .and_then(|sub| select_model_bic(&sub, DEFAULT_MIN_SEGMENT));
        match refined {
            Ok(sel) => {
                let e = sel.episode;
                let mut r = Episode::new(
                    e.origin_index + lo,
                    e.collapse_index + lo,
                    e.recovery_index.map(|x| x + lo),
                    n,
                );
                r.model = e.model;
                r.ongoing = e.collapse_index + lo == n && e.model == Some(1);
                out.push(r);
            }
            Err(_) => out.push(ep.clone()),
        }
    }
    Ok(out)
}
