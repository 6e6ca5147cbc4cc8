use crate::numeric::log_grid;

/// Scan range for limit and monotonicity conditions on `f`.
pub(super) const LO: f64 = 1e-8;
pub(super) const HI: f64 = 1e8;
pub(super) const PER_DECADE: usize = 20;
pub(super) const SLACK: f64 = 1e-12;

/// Log grid on `[lo, hi]` with about [`PER_DECADE`] points per decade.
pub(super) fn scan(lo: f64, hi: f64) -> Vec<f64> {
    let decades = (hi / lo).log10().round().max(1.0) as usize;
    log_grid(lo, hi, decades * PER_DECADE + 1)
}

/// First index `k` with `v[k+1] < v[k]` beyond the slack.
pub(super) fn first_decrease(v: &[f64]) -> Option<usize> {
    (0..v.len().saturating_sub(1)).find(|&k| {
        let slack = SLACK * v[k].abs().max(v[k + 1].abs());
        !(v[k + 1] >= v[k] - slack)
    })
}

/// First index `k` with `v[k+1] > v[k]` beyond the slack.
pub(super) fn first_increase(v: &[f64]) -> Option<usize> {
    (0..v.len().saturating_sub(1)).find(|&k| {
        let slack = SLACK * v[k].abs().max(v[k + 1].abs());
        !(v[k + 1] <= v[k] + slack)
    })
}

/// First index where the slopes of `(t, v)` decrease, i.e. where convexity fails.
pub(super) fn first_concavity(t: &[f64], v: &[f64]) -> Option<usize> {
    let slopes: Vec<f64> = (0..t.len() - 1).map(|k| (v[k + 1] - v[k]) / (t[k + 1] - t[k])).collect();
    first_decrease(&slopes)
}

/// Formats the first violating pair of a monotonicity scan.
pub(super) fn pair_witness(name: &str, t: &[f64], v: &[f64], k: usize) -> String {
    format!(
        "{name}({:.4e}) = {:.6e}, {name}({:.4e}) = {:.6e}",
        t[k],
        v[k],
        t[k + 1],
        v[k + 1]
    )
}

/// Where a limit is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(super) enum End {
    Zero,
    Infinity,
}

/// The claimed limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(super) enum Limit {
    Zero,
    PlusInfinity,
}

/// Decade-trend rule: over the last two decades toward `end`, `q` moves monotonically toward
/// `limit` by a factor of at least 2 per decade. Returns a witness on failure.
pub(super) fn decade_trend(name: &str, q: impl Fn(f64) -> f64, end: End, limit: Limit) -> Option<String> {
    let ts: [f64; 3] = match end {
        End::Zero => [LO * 100.0, LO * 10.0, LO],
        End::Infinity => [HI / 100.0, HI / 10.0, HI],
    };
    let v = ts.map(&q);
    let ok = match limit {
        Limit::Zero => {
            v.iter().all(|&x| x == 0.0)
                || (v.iter().all(|x| x.is_finite())
                    && v[1].abs() <= 0.5 * v[0].abs()
                    && v[2].abs() <= 0.5 * v[1].abs()
                    && v[0].signum() * v[2].signum() >= 0.0)
        }
        Limit::PlusInfinity => v[0] > 0.0 && v[1] >= 2.0 * v[0] && v[2] >= 2.0 * v[1],
    };
    (!ok).then(|| {
        format!(
            "{name} at t = {:.0e}, {:.0e}, {:.0e}: {:.6e}, {:.6e}, {:.6e}",
            ts[0], ts[1], ts[2], v[0], v[1], v[2]
        )
    })
}
