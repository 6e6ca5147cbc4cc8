use rayon::prelude::*;

use super::{minimize, random_init, SolveOptions, SolveReport};
use crate::error::{Error, Result};
use crate::functionals::Functional;

/// Best-of-`n_starts` minimization from seeds `base_seed, base_seed + 1, …`.
///
/// Runs execute concurrently. The smallest `c` among converged runs wins, ties going to the
/// smaller seed, and the report carries the spread of the converged values.
pub fn multi_start(functional: &Functional, n_starts: usize, base_seed: u64, opts: &SolveOptions) -> Result<SolveReport> {
    if n_starts == 0 {
        return Err(Error::Parameter("multi_start needs at least one start".into()));
    }
    opts.validate()?;
    let runs: Vec<(u64, Result<SolveReport>)> = (0..n_starts as u64)
        .into_par_iter()
        .map(|i| {
            let seed = base_seed + i;
            let init = random_init(functional.grid(), seed, opts.modes, opts.nonnegative_start);
            let opts = SolveOptions { seed, ..opts.clone() };
            (seed, minimize(functional, &init, &opts))
        })
        .collect();
    let converged: Vec<&SolveReport> = runs
        .iter()
        .filter_map(|(_, r)| r.as_ref().ok().filter(|r| r.converged))
        .collect();
    let Some(best) = converged
        .iter()
        .min_by(|a, b| a.c_value.total_cmp(&b.c_value).then(a.seed.cmp(&b.seed)))
    else {
        // a violated hypothesis is more informative than the aggregate, and carries the trace
        if let Some(i) = runs.iter().position(|(_, r)| matches!(r, Err(Error::HypothesisViolation { .. }))) {
            return runs.into_iter().nth(i).expect("index in range").1;
        }
        let statuses = runs
            .iter()
            .map(|(seed, r)| match r {
                Ok(r) => format!("seed {seed}: {}", r.status.as_str()),
                Err(e) => format!("seed {seed}: {e}"),
            })
            .collect();
        return Err(Error::AllRunsFailed { statuses });
    };
    let hi = converged.iter().map(|r| r.c_value).fold(f64::NEG_INFINITY, f64::max);
    let mut report = (*best).clone();
    report.spread = Some(hi - best.c_value);
    Ok(report)
}
