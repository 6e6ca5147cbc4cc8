//! The fiber map `γ_u(t) = Φ(tu)` and the Nehari projection.
//!
//! Under the structural hypotheses the slope `g(t) = γ_u'(t)` is positive for small `t`,
//! negative for large `t` and vanishes exactly once, at `t_u`. The point `t_u u` lies on the
//! Nehari set `{u ≠ 0 : Φ'(u)u = 0}` and maximizes `γ_u`.
//!
//! Projections run on the direction normalized in the ambient norm, so every family starts
//! from a bracket of comparable size. Results are reported in the units of the caller's `u`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::functionals::{FiberProfile, Functional};
use crate::grid::Field;
use crate::numeric::log_grid;

/// Default relative tolerance of the projection.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

const BRACKET_LO: f64 = 1e-6;
const BRACKET_LO_FLOOR: f64 = 1e-15;
const BRACKET_HI_CAP: f64 = 1e9;
const MAX_BISECTIONS: usize = 200;
/// Relative slack absorbed by the monotonicity certificates.
const MONOTONE_SLACK: f64 = 1e-12;

/// Samples of the fiber map on a scan grid.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ScanTrace {
    pub t: Vec<f64>,
    pub gamma: Vec<f64>,
    pub slope: Vec<f64>,
}

impl ScanTrace {
    /// Number of strict sign changes of the slope column (zeros are skipped).
    pub fn sign_changes(&self) -> usize {
        let signs: Vec<bool> = self.slope.iter().filter(|&&g| g != 0.0).map(|&g| g > 0.0).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }
}

/// Where the diagnostic scan samples `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScanSpec {
    /// `points` log-spaced values spanning `decades` on either side of the projection `t_u`.
    Relative { decades: f64, points: usize },
    /// `points` log-spaced values on `[lo, hi]`.
    Absolute { lo: f64, hi: f64, points: usize },
}

impl std::fmt::Display for ScanSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScanSpec::Relative { decades, points } => write!(f, "{points} points, t_u·10^±{decades}"),
            ScanSpec::Absolute { lo, hi, points } => write!(f, "{points} points on [{lo:e}, {hi:e}]"),
        }
    }
}

impl Default for ScanSpec {
    fn default() -> Self {
        ScanSpec::Relative {
            decades: 3.0,
            points: 200,
        }
    }
}

impl ScanSpec {
    fn grid(&self, center: f64) -> Result<Vec<f64>> {
        let (lo, hi, n) = match *self {
            ScanSpec::Relative { decades, points } => {
                let f = 10f64.powf(decades);
                (center / f, center * f, points)
            }
            ScanSpec::Absolute { lo, hi, points } => (lo, hi, points),
        };
        if !(lo > 0.0 && hi > lo && hi.is_finite() && n >= 2) {
            return Err(Error::Parameter(format!("invalid scan [{lo}, {hi}] with {n} points")));
        }
        Ok(log_grid(lo, hi, n))
    }
}

/// Record of one Nehari projection.
#[derive(Debug, Clone, Serialize)]
pub struct FiberDiagnostics {
    pub t_u: f64,
    /// `g(t_u)`.
    pub slope_at_root: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
    pub sign_changes_observed: usize,
    /// `t ↦ g(t)/t^{p−1}` decreasing on the scan grid.
    pub monotone_certificate: bool,
    /// `γ(t_u) ≥ γ(t)` on the scan grid.
    pub global_max_on_scan: bool,
    pub scan: ScanTrace,
}

/// Sampled evidence for the fiber geometry along one direction.
#[derive(Debug, Clone, Serialize)]
pub struct DirectionCertificate {
    /// `g(t)/t^{p−1}` strictly decreasing.
    pub decreasing_quotient: bool,
    /// `Φ(tu) − g(t)t/p` strictly increasing.
    pub increasing_gap: bool,
    /// Exactly one sign change of `g`.
    pub single_sign_change: bool,
    pub sign_changes: usize,
    /// First consecutive pair `(t_k, t_{k+1})` violating the quotient certificate.
    pub quotient_witness: Option<(f64, f64)>,
    pub gap_witness: Option<(f64, f64)>,
    /// Always true: a finite scan is evidence, not proof.
    pub sampled: bool,
    pub scan: ScanTrace,
}

impl DirectionCertificate {
    pub fn holds(&self) -> bool {
        self.decreasing_quotient && self.increasing_gap && self.single_sign_change
    }
}

/// Root of the normalized fiber: `t` in units of the normalized direction.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Root {
    pub t: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
}

fn check_direction(u: &Field) -> Result<()> {
    if u.is_zero() {
        Err(Error::DegenerateDirection)
    } else {
        Ok(())
    }
}

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!("fiber parameter must be positive, got {t}")))
    }
}

/// `γ_u(t) = Φ(tu)`.
pub fn fiber_value(functional: &Functional, u: &Field, t: f64) -> Result<f64> {
    check_direction(u)?;
    check_t(t)?;
    functional.energy(&u.scaled(t))
}

/// `g(t) = Φ'(tu)u`.
pub fn fiber_slope(functional: &Functional, u: &Field, t: f64) -> Result<f64> {
    check_direction(u)?;
    check_t(t)?;
    functional.pairing(&u.scaled(t), u)
}

fn trace(profile: &FiberProfile, ts: &[f64]) -> ScanTrace {
    ScanTrace {
        t: ts.to_vec(),
        gamma: ts.iter().map(|&t| profile.value(t)).collect(),
        slope: ts.iter().map(|&t| profile.slope(t)).collect(),
    }
}

/// Finds the root of `t ↦ Φ'(tw)(tw)` for a profile of `w`: bracketed bisection in `ln t`,
/// then a guarded Newton polish.
pub(crate) fn nehari_root(profile: &FiberProfile, tol: f64) -> Result<Root> {
    let h = |t: f64| profile.nehari_pairing(t);
    let converged = |t: f64, v: f64| v.abs() <= tol * profile.pairing_scale(t);
    let mut lo = BRACKET_LO;
    while h(lo) <= 0.0 {
        lo *= 0.1;
        if lo < BRACKET_LO_FLOOR {
            let ts = log_grid(BRACKET_LO_FLOOR, 1.0, 60);
            return Err(Error::HypothesisViolation {
                message: format!("fiber slope is not positive near t = 0 (checked down to t = {BRACKET_LO_FLOOR:e})"),
                trace: trace(profile, &ts),
            });
        }
    }
    let mut hi = 1.0f64.max(2.0 * lo);
    while h(hi) >= 0.0 {
        if hi >= BRACKET_HI_CAP {
            let ts = log_grid(lo, BRACKET_HI_CAP, 60);
            return Err(Error::HypothesisViolation {
                message: format!("fiber slope stays nonnegative up to t = {BRACKET_HI_CAP:e}"),
                trace: trace(profile, &ts),
            });
        }
        lo = lo.max(hi);
        hi *= 2.0;
    }
    let bracket = (lo, hi);
    let mut iterations = 0;
    let mut t = (lo * hi).sqrt();
    let mut v = h(t);
    while !converged(t, v) && iterations < MAX_BISECTIONS && hi - lo > 4.0 * f64::EPSILON * hi {
        if v > 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        t = (lo * hi).sqrt();
        v = h(t);
        iterations += 1;
    }
    // one guarded Newton step with a central-difference derivative
    let dt = 1e-6 * t;
    let d = (h(t + dt) - h(t - dt)) / (2.0 * dt);
    if d < 0.0 {
        let candidate = t - v / d;
        if candidate > lo && candidate < hi {
            let cv = h(candidate);
            if cv.abs() < v.abs() {
                t = candidate;
            }
        }
    }
    Ok(Root { t, bracket, iterations })
}

/// Projects `u` onto the Nehari set: returns `t_u` with `Φ'(t_u u)u ≈ 0`.
pub fn project_to_nehari(functional: &Functional, u: &Field, tol: f64) -> Result<(f64, FiberDiagnostics)> {
    project_with_scan(functional, u, tol, &ScanSpec::default())
}

/// [`project_to_nehari`] with an explicit diagnostic scan.
pub fn project_with_scan(
    functional: &Functional,
    u: &Field,
    tol: f64,
    scan: &ScanSpec,
) -> Result<(f64, FiberDiagnostics)> {
    check_direction(u)?;
    if !(tol > 0.0) {
        return Err(Error::Parameter(format!("projection tolerance must be positive, got {tol}")));
    }
    let norm = functional.ambient_norm(u)?;
    if norm == 0.0 {
        return Err(Error::DegenerateDirection);
    }
    let profile = functional.fiber_profile(&u.scaled(1.0 / norm))?;
    let root = nehari_root(&profile, tol).map_err(|e| rescale_violation(e, norm))?;
    let t_u = root.t / norm;
    let ts = scan.grid(t_u)?;
    let scaled: Vec<f64> = ts.iter().map(|&t| t * norm).collect();
    let mut samples = trace(&profile, &scaled);
    samples.t = ts;
    for g in &mut samples.slope {
        *g *= norm;
    }
    let peak = profile.value(root.t);
    let global_max_on_scan = samples
        .gamma
        .iter()
        .all(|&v| v <= peak + MONOTONE_SLACK * peak.abs().max(v.abs()));
    let p = functional.homogeneity_exponent();
    let monotone_certificate = quotient_violation(&profile, &scaled, p).is_none();
    let diag = FiberDiagnostics {
        t_u,
        slope_at_root: norm * profile.slope(root.t),
        bracket: (root.bracket.0 / norm, root.bracket.1 / norm),
        iterations: root.iterations,
        sign_changes_observed: samples.sign_changes(),
        monotone_certificate,
        global_max_on_scan,
        scan: samples,
    };
    Ok((t_u, diag))
}

fn rescale_violation(e: Error, norm: f64) -> Error {
    match e {
        Error::HypothesisViolation { message, mut trace } => {
            for t in &mut trace.t {
                *t /= norm;
            }
            for g in &mut trace.slope {
                *g *= norm;
            }
            Error::HypothesisViolation { message, trace }
        }
        other => other,
    }
}

/// Index `k` of the first pair `(k, k+1)` where `(J₀ − J)(tu)/t^p` fails to decrease.
fn quotient_violation(profile: &FiberProfile, ts: &[f64], p: f64) -> Option<usize> {
    let q: Vec<(f64, f64)> = ts
        .iter()
        .map(|&t| {
            let tp = t.powf(p);
            (profile.nehari_pairing(t) / tp, profile.pairing_scale(t) / tp)
        })
        .collect();
    (0..q.len().saturating_sub(1)).find(|&k| q[k + 1].0 > q[k].0 + MONOTONE_SLACK * q[k].1.max(q[k + 1].1))
}

/// Index of the first pair where `Φ(tu) − Φ'(tu)(tu)/p` fails to increase.
fn gap_violation(profile: &FiberProfile, ts: &[f64], p: f64) -> Option<usize> {
    let q: Vec<(f64, f64)> = ts
        .iter()
        .map(|&t| {
            let gap = profile.value(t) - profile.nehari_pairing(t) / p;
            let scale = profile.principal(t).abs()
                + profile.potential(t).abs()
                + profile.pairing_scale(t) / p;
            (gap, scale)
        })
        .collect();
    (0..q.len().saturating_sub(1)).find(|&k| q[k + 1].0 < q[k].0 - MONOTONE_SLACK * q[k].1.max(q[k + 1].1))
}

/// Samples the fiber geometry along `u`: the quotient and gap monotonicity certificates and the
/// single sign change of `g`.
///
/// A relative scan is centered at the projection `t_u`; if the projection itself fails the scan
/// is centered at the unit-norm multiple of `u` and the certificates report the failure.
pub fn certify_direction(functional: &Functional, u: &Field, scan: &ScanSpec) -> Result<DirectionCertificate> {
    check_direction(u)?;
    let norm = functional.ambient_norm(u)?;
    if norm == 0.0 {
        return Err(Error::DegenerateDirection);
    }
    let profile = functional.fiber_profile(&u.scaled(1.0 / norm))?;
    let center = match nehari_root(&profile, DEFAULT_TOLERANCE) {
        Ok(root) => root.t / norm,
        Err(Error::HypothesisViolation { .. }) => 1.0 / norm,
        Err(e) => return Err(e),
    };
    let ts = scan.grid(center)?;
    let scaled: Vec<f64> = ts.iter().map(|&t| t * norm).collect();
    let p = functional.homogeneity_exponent();
    let pair = |k: Option<usize>| k.map(|k| (ts[k], ts[k + 1]));
    let quotient_witness = pair(quotient_violation(&profile, &scaled, p));
    let gap_witness = pair(gap_violation(&profile, &scaled, p));
    let mut samples = trace(&profile, &scaled);
    samples.t = ts.clone();
    for g in &mut samples.slope {
        *g *= norm;
    }
    let sign_changes = samples.sign_changes();
    Ok(DirectionCertificate {
        decreasing_quotient: quotient_witness.is_none(),
        increasing_gap: gap_witness.is_none(),
        single_sign_change: sign_changes == 1,
        sign_changes,
        quotient_witness,
        gap_witness,
        sampled: true,
        scan: samples,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::functionals::{Nonlinearity, PowerTerm, QuasilinearOperator};
    use crate::grid::Grid;

    fn semilinear(n: usize) -> (Functional, Field) {
        let g = Grid::build(1, &[1.0], &[n]).unwrap().shared();
        let f = Functional::new(
            QuasilinearOperator::laplacian(2.0).unwrap().into(),
            Nonlinearity::pure_power(4.0).unwrap(),
            g.clone(),
        )
        .unwrap();
        let u = Field::from_fn(g, |x| (PI * x[0]).sin()).unwrap();
        (f, u)
    }

    #[test]
    fn closed_form_fiber() {
        let (f, u) = semilinear(99);
        let d = f.decompose(&u).unwrap();
        let (a, b) = (d.j0, d.j);
        for &t in &[0.5, 1.0, 2.0] {
            let gamma = fiber_value(&f, &u, t).unwrap();
            let exact = t * t / 2.0 * a - t.powi(4) / 4.0 * b;
            assert!((gamma - exact).abs() < 1e-12 * exact.abs().max(1.0));
        }
        let g1 = fiber_slope(&f, &u, 1.0).unwrap();
        assert!((g1 - (a - b)).abs() < 1e-12 * a);
        assert!(fiber_value(&f, &u, 1e-3).unwrap() > 0.0);
        assert!(fiber_value(&f, &u, 1e3).unwrap() < 0.0);
    }

    #[test]
    fn projection_matches_closed_form() {
        let (f, u) = semilinear(399);
        let (t, diag) = project_to_nehari(&f, &u, DEFAULT_TOLERANCE).unwrap();
        let d = f.decompose(&u).unwrap();
        let exact = (d.j0 / d.j).sqrt();
        assert!((t - exact).abs() <= 1e-10 * exact);
        let continuum = (PI * PI / 2.0 / 0.375f64).sqrt();
        assert!((t - continuum).abs() < 1e-3 * continuum);
        assert_eq!(diag.sign_changes_observed, 1);
        assert!(diag.monotone_certificate && diag.global_max_on_scan);
        assert!(diag.bracket.0 < t && t < diag.bracket.1);
    }

    #[test]
    fn projection_is_scale_covariant_and_idempotent() {
        let (f, u) = semilinear(99);
        let (t, _) = project_to_nehari(&f, &u, DEFAULT_TOLERANCE).unwrap();
        for s in [0.5, 2.0, 10.0] {
            let (ts, _) = project_to_nehari(&f, &u.scaled(s), DEFAULT_TOLERANCE).unwrap();
            assert!((ts - t / s).abs() <= 1e-8 * t / s);
        }
        let (t1, _) = project_to_nehari(&f, &u.scaled(t), DEFAULT_TOLERANCE).unwrap();
        assert!((t1 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn zero_direction_is_rejected() {
        let (f, u) = semilinear(20);
        let z = Field::zeros(u.grid().clone());
        assert!(matches!(fiber_value(&f, &z, 1.0), Err(Error::DegenerateDirection)));
        assert!(matches!(project_to_nehari(&f, &z, 1e-10), Err(Error::DegenerateDirection)));
        assert!(matches!(certify_direction(&f, &z, &ScanSpec::default()), Err(Error::DegenerateDirection)));
    }

    #[test]
    fn small_ball_quotient_stays_positive() {
        let (f, u) = semilinear(99);
        let ratios: Vec<f64> = (1..=4)
            .map(|k| {
                let eps = 10f64.powi(-k);
                let w = u.scaled(eps);
                fiber_slope(&f, &w, 1.0).unwrap() / f.ambient_norm(&w).unwrap().powf(f.small_ball_exponent())
            })
            .collect();
        assert!(ratios.iter().all(|&r| r > 0.5), "{ratios:?}");
    }

    #[test]
    fn linear_growth_violates_geometry() {
        let g = Grid::build(1, &[1.0], &[30]).unwrap().shared();
        // f(t) = t with the Laplacian: Φ(tu) = t²(‖u‖² − |u|²₂)/2 has no interior maximum.
        let f = Functional::new(
            QuasilinearOperator::laplacian(2.0).unwrap().into(),
            Nonlinearity::pure_power(2.0).unwrap(),
            g.clone(),
        )
        .unwrap();
        let u = Field::from_fn(g, |x| (PI * x[0]).sin()).unwrap();
        match project_to_nehari(&f, &u, 1e-10) {
            Err(Error::HypothesisViolation { trace, .. }) => assert!(!trace.t.is_empty()),
            other => panic!("expected a violation, got {other:?}"),
        }
    }

    #[test]
    fn sublinear_perturbation_breaks_the_quotient_certificate() {
        let g = Grid::build(1, &[1.0], &[60]).unwrap().shared();
        let f = Functional::new(
            QuasilinearOperator::laplacian(2.0).unwrap().into(),
            Nonlinearity::sum_of_powers(&[
                PowerTerm { coefficient: 1.0, exponent: 4.0 },
                PowerTerm { coefficient: 2.0, exponent: 1.5 },
            ])
            .unwrap(),
            g.clone(),
        )
        .unwrap();
        let u = Field::from_fn(g, |x| (PI * x[0]).sin()).unwrap();
        let cert = certify_direction(&f, &u, &ScanSpec::default()).unwrap();
        assert!(!cert.decreasing_quotient);
        let (a, b) = cert.quotient_witness.unwrap();
        assert!(a < b);
    }
}
