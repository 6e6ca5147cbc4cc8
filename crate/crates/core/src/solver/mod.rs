//! Ground states by minimizing `Ψ(w) = max_t Φ(tw)` over the unit sphere of the ambient norm.
//!
//! Each iteration projects the current direction onto the Nehari set, takes the residual of
//! `Φ'` at the projected point, preconditions it, removes its `L²` component along the iterate
//! and backtracks on `Ψ` with an Armijo test. The iterate is renormalized after every step.
//! Because `Φ'(u)u = 0` on the Nehari set, `d/ds Ψ(u + sd)` at `s = 0` equals `Φ'(u)d`, so the
//! Armijo slope is the plain pairing of the residual with the direction.

mod init;
mod multistart;

use serde::Serialize;

pub use init::{random_init, sine_mode};
pub use multistart::multi_start;

use crate::error::{Error, Result};
use crate::fiber::nehari_root;
use crate::functionals::{Functional, Operator};
use crate::grid::{seminorm, DirichletLaplacian, Field};
use crate::numeric::median;
use crate::verify::{CheckReport, Status};

/// Backtracking line search parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Armijo {
    pub initial_step: f64,
    pub shrink: f64,
    pub slope_fraction: f64,
    pub max_backtracks: usize,
}

impl Default for Armijo {
    fn default() -> Self {
        Armijo {
            initial_step: 1.0,
            shrink: 0.5,
            slope_fraction: 1e-4,
            max_backtracks: 40,
        }
    }
}

/// Preconditioner applied to the residual.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Preconditioner {
    /// Inverse Laplacian for every family (see the crate README).
    #[default]
    Auto,
    None,
    InverseLaplacian,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveOptions {
    pub max_iterations: usize,
    /// Bound on the relative dual norm of the residual.
    pub residual_tolerance: f64,
    /// Relative tolerance of every Nehari projection.
    pub projection_tolerance: f64,
    pub armijo: Armijo,
    pub preconditioner: Preconditioner,
    pub seed: u64,
    pub nonnegative_start: bool,
    /// Sine modes per axis in [`random_init`].
    pub modes: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_iterations: 2000,
            residual_tolerance: 1e-7,
            projection_tolerance: 1e-12,
            armijo: Armijo::default(),
            preconditioner: Preconditioner::Auto,
            seed: 0,
            nonnegative_start: true,
            modes: 3,
        }
    }
}

impl SolveOptions {
    pub fn validate(&self) -> Result<()> {
        let a = &self.armijo;
        let ok = self.residual_tolerance > 0.0
            && self.projection_tolerance > 0.0
            && a.initial_step > 0.0
            && a.shrink > 0.0
            && a.shrink < 1.0
            && a.slope_fraction > 0.0
            && a.slope_fraction < 1.0
            && self.modes >= 1;
        if ok {
            Ok(())
        } else {
            Err(Error::Parameter(format!("invalid solver options {self:?}")))
        }
    }
}

/// How a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Converged,
    /// Backtracking found no decrease of `Ψ`.
    Stalled,
    MaxIterations,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Converged => "converged",
            SolveStatus::Stalled => "stalled",
            SolveStatus::MaxIterations => "max_iterations",
        }
    }
}

/// Result of a ground-state run. `c_value` is the best value found, not a certified infimum.
#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    #[serde(skip)]
    pub ground_state: Field,
    #[serde(rename = "c")]
    pub c_value: f64,
    /// `‖Φ'(u)‖_{H⁻¹} ‖∇u‖₂ / J₀(u)` at the reported state.
    #[serde(rename = "residual")]
    pub final_residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub status: SolveStatus,
    /// `t_w`, which is also the ambient norm of the projected iterate.
    pub t_history: Vec<f64>,
    pub energy_history: Vec<f64>,
    pub min_negative_part: f64,
    pub hypothesis_summary: CheckReport,
    pub seed: u64,
    /// `max c − min c` over the converged runs of a multi-start.
    pub spread: Option<f64>,
}

/// True iff the largest iterate norm is at most ten times the median.
pub fn boundedness_monitor(report: &SolveReport) -> bool {
    norms_bounded(&report.t_history)
}

fn norms_bounded(norms: &[f64]) -> bool {
    norms.is_empty() || norms.iter().cloned().fold(0.0, f64::max) <= 10.0 * median(norms)
}

/// A point of the sphere together with its Nehari projection.
struct Iterate {
    w: Field,
    t: f64,
    psi: f64,
}

fn project(functional: &Functional, v: &Field, tol: f64) -> Result<Iterate> {
    let norm = functional.ambient_norm(v)?;
    if !(norm > 0.0) {
        return Err(Error::DegenerateDirection);
    }
    let w = v.scaled(1.0 / norm);
    let profile = functional.fiber_profile(&w)?;
    let root = nehari_root(&profile, tol)?;
    Ok(Iterate {
        psi: profile.value(root.t),
        t: root.t,
        w,
    })
}

fn use_laplacian(choice: Preconditioner) -> bool {
    !matches!(choice, Preconditioner::None)
}

/// Minimizes `Ψ` from `init`. Hypothesis violations met by a projection abort the run.
pub fn minimize(functional: &Functional, init: &Field, opts: &SolveOptions) -> Result<SolveReport> {
    opts.validate()?;
    if !functional.grid().same_as(init.grid()) {
        return Err(Error::Contract("initial field does not live on the functional's grid".into()));
    }
    if init.is_zero() {
        return Err(Error::DegenerateDirection);
    }
    let laplacian = DirichletLaplacian::new(functional.grid());
    let precondition = use_laplacian(opts.preconditioner);
    let mut current = project(functional, init, opts.projection_tolerance)?;
    let mut t_history = vec![current.t];
    let mut energy_history = vec![current.psi];
    let mut step = opts.armijo.initial_step;
    let mut iterations = 0;
    let (status, residual) = loop {
        let u = current.w.scaled(current.t);
        let (r, j0) = functional.residual_parts(&u)?;
        let z = laplacian.solve(&r)?;
        let grad_norm = seminorm(&u, 2.0)?;
        let residual = r.dot(&z)?.max(0.0).sqrt() * grad_norm / j0.abs();
        if residual <= opts.residual_tolerance {
            break (SolveStatus::Converged, residual);
        }
        if iterations >= opts.max_iterations {
            break (SolveStatus::MaxIterations, residual);
        }
        let pr = if precondition { z.scaled(grad_norm * grad_norm / j0) } else { r.clone() };
        let beta = pr.dot(&u)? / u.dot(&u)?;
        let d = u.scaled(beta).add_scaled(-1.0, &pr)?;
        let slope = r.dot(&d)?;
        if !(slope < 0.0) {
            break (SolveStatus::Stalled, residual);
        }
        let mut s = step;
        let mut accepted = None;
        for _ in 0..=opts.armijo.max_backtracks {
            let trial = u.add_scaled(s, &d)?;
            if !trial.is_zero() {
                let next = project(functional, &trial, opts.projection_tolerance)?;
                let decrease = next.psi - current.psi;
                let armijo = decrease <= opts.armijo.slope_fraction * s * slope;
                // below roundoff the Armijo margin is unresolvable; accept any non-increase
                let roundoff = (s * slope).abs() <= 1e-14 * current.psi.abs() && decrease <= 0.0;
                if armijo || roundoff {
                    accepted = Some(next);
                    break;
                }
            }
            s *= opts.armijo.shrink;
        }
        match accepted {
            Some(next) => {
                current = next;
                iterations += 1;
                t_history.push(current.t);
                energy_history.push(current.psi);
                step = (2.0 * s).min(opts.armijo.initial_step);
            }
            None => break (SolveStatus::Stalled, residual),
        }
    };
    let ground_state = current.w.scaled(current.t);
    let c_value = functional.energy(&ground_state)?;
    let min_negative_part = ground_state.values().iter().cloned().fold(0.0, f64::min);
    let hypothesis_summary = summarize(functional, &ground_state, &t_history, c_value)?;
    Ok(SolveReport {
        ground_state,
        c_value,
        final_residual: residual,
        iterations,
        converged: status == SolveStatus::Converged,
        status,
        t_history,
        energy_history,
        min_negative_part,
        hypothesis_summary,
        seed: opts.seed,
        spread: None,
    })
}

fn summarize(functional: &Functional, u: &Field, norms: &[f64], c: f64) -> Result<CheckReport> {
    let mut report = CheckReport::new();
    let (lo, hi) = (median(norms), norms.iter().cloned().fold(0.0, f64::max));
    report.record(
        "r1.4",
        if norms_bounded(norms) { Status::SampledPass } else { Status::Fail },
        (!norms_bounded(norms)).then(|| format!("max norm {hi:.6e} > 10 x median {lo:.6e}")),
        "iterate norms bounded by ten times their median",
    );
    if let Operator::Kirchhoff(op) = functional.operator() {
        let m0 = op.m0();
        let bad = norms.iter().find(|&&t| op.m_value(t * t) < m0);
        report.record(
            "c22.M",
            if bad.is_none() { Status::SampledPass } else { Status::Fail },
            bad.map(|&t| format!("M({:.6e}) = {:.6e} < m0 = {m0:.6e}", t * t, op.m_value(t * t))),
            "m0 <= M(|u_k|^2) along the trace",
        );
    }
    if functional.grid().dim() == 1 {
        let abs = functional.energy(&u.abs())?;
        let ok = abs <= c + 1e-10 * c.abs().max(1.0);
        report.record(
            "tp.abs",
            if ok { Status::SampledPass } else { Status::Fail },
            (!ok).then(|| format!("Phi(|u|) = {abs:.12e} > Phi(u) = {c:.12e}")),
            "Phi(|u|) <= Phi(u) at the reported state",
        );
    }
    Ok(report)
}
