use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("predicate is false at the upper end {0}")]
pub struct NoFeasiblePoint(pub i64);

/// Least `d` in `[lo, hi]` with `pred(d)`, for a predicate that is monotone
/// nondecreasing in `d`. `pred(hi)` is always evaluated first.
pub fn bisect_feasibility(
    mut pred: impl FnMut(i64) -> bool,
    lo: i64,
    hi: i64,
) -> Result<i64, NoFeasiblePoint> {
    if lo > hi || !pred(hi) {
        return Err(NoFeasiblePoint(hi));
    }
    let (mut lo, mut hi) = (lo, hi);
    // Invariant: pred(hi) holds and every d < lo fails.
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold() {
        assert_eq!(bisect_feasibility(|d| d >= 3, 0, 5), Ok(3));
        assert_eq!(bisect_feasibility(|_| true, 2, 9), Ok(2));
        assert_eq!(bisect_feasibility(|d| d == 7, 0, 7), Ok(7));
        assert_eq!(bisect_feasibility(|_| false, 0, 4), Err(NoFeasiblePoint(4)));
    }
}
