use super::sampling::{
    decade_trend, first_concavity, first_decrease, first_increase, pair_witness, scan, End, Limit, HI, LO, SLACK,
};
use super::{CheckReport, Status};
use crate::functionals::{KirchhoffOperator, Nonlinearity, QuasilinearOperator};
use crate::numeric::log_grid;

/// Range on which the coefficients `a` and `M` are sampled.
const COEF_LO: f64 = 1e-6;
const COEF_HI: f64 = 1e6;

fn check_f_shape(report: &mut CheckReport, f: &Nonlinearity) {
    let ts = scan(LO, HI);
    let odd = ts.iter().find(|&&t| f.value(-t) != -f.value(t));
    report.sampled(
        "f.odd",
        odd.map(|&t| format!("f({t:.4e}) = {:.6e}, f(-t) = {:.6e}", f.value(t), f.value(-t))),
        "f(-t) = -f(t) on the scan",
    );
    let negative = ts.iter().find(|&&t| f.value(t) < 0.0);
    report.sampled(
        "f.nonneg",
        negative.map(|&t| format!("f({t:.4e}) = {:.6e}", f.value(t))),
        "f >= 0 on (0, inf) on the scan",
    );
}

/// `t ↦ f(t)/t^{e−1}` increasing on the scan.
fn check_quotient_increasing(report: &mut CheckReport, id: &str, f: &Nonlinearity, e: f64) {
    let ts = scan(LO, HI);
    let v: Vec<f64> = ts.iter().map(|&t| f.value(t) / t.powf(e - 1.0)).collect();
    let name = format!("f/t^{}", e - 1.0);
    report.sampled(
        id,
        first_decrease(&v).map(|k| pair_witness(&name, &ts, &v, k)),
        format!("{name} increasing on [{LO:.0e}, {HI:.0e}]"),
    );
}

/// An exponent strictly between `alpha` and the critical exponent, used as the growth witness.
fn growth_witness_exponent(alpha: f64, critical: Option<f64>) -> f64 {
    match critical {
        Some(c) => 0.5 * (alpha + c),
        None => alpha + 1.0,
    }
}

fn check_growth_limits(
    report: &mut CheckReport,
    ids: [&str; 3],
    f: &Nonlinearity,
    small: f64,
    large: f64,
    alpha: f64,
    critical: Option<f64>,
) {
    let name = format!("f/t^{}", small - 1.0);
    report.sampled(
        ids[0],
        decade_trend(&name, |t| f.value(t) / t.powf(small - 1.0), End::Zero, Limit::Zero),
        format!("{name} -> 0 as t -> 0 (decade trend)"),
    );
    let name = format!("F/t^{large}");
    report.sampled(
        ids[1],
        decade_trend(&name, |t| f.primitive(t) / t.powf(large), End::Infinity, Limit::PlusInfinity),
        format!("{name} -> inf as t -> inf (decade trend)"),
    );
    let a = growth_witness_exponent(alpha, critical);
    let name = format!("f/t^{}", a - 1.0);
    report.sampled(
        ids[2],
        decade_trend(&name, |t| f.value(t) / t.powf(a - 1.0), End::Infinity, Limit::Zero),
        format!("{name} -> 0 as t -> inf (decade trend), exponent {a} inside ({alpha}, p*)"),
    );
}

fn fmt_critical(c: Option<f64>) -> String {
    c.map_or_else(|| "inf".to_string(), |c| format!("{c}"))
}

/// Audits the quasilinear family in dimension `dim` with growth exponent `alpha`.
pub fn check_quasilinear(op: &QuasilinearOperator, alpha: f64, f: &Nonlinearity, dim: usize) -> CheckReport {
    let (p, q) = (op.p(), op.q());
    let critical = (p < dim as f64).then(|| dim as f64 * p / (dim as f64 - p));
    let mut r = CheckReport::new();
    r.exact("c1.pq", p >= q && q > 1.0, || format!("p = {p}, q = {q}"), "p >= q > 1");
    r.exact(
        "c1.alpha",
        alpha > p && critical.is_none_or(|c| alpha < c),
        || format!("alpha = {alpha}, p = {p}, p* = {}", fmt_critical(critical)),
        format!("alpha in (p, p*) with p* = {}", fmt_critical(critical)),
    );

    let (k0, k1) = op.bound_constants(COEF_LO, COEF_HI, 241);
    let ok = k0 > 0.0 && k1.is_finite() && k0.is_finite();
    r.record(
        "c1.1",
        if ok { Status::SampledPass } else { Status::Fail },
        (!ok).then(|| format!("fitted k0 = {k0:.6e}, k1 = {k1:.6e}")),
        format!("best constants on [{COEF_LO:.0e}, {COEF_HI:.0e}]: k0 = {k0:.6e}, k1 = {k1:.6e}"),
    );

    let ts = scan(COEF_LO, COEF_HI);
    let a: Vec<f64> = ts.iter().map(|&t| op.a(t)).collect();
    r.sampled(
        "c1.2",
        first_increase(&a).map(|k| pair_witness("a", &ts, &a, k)),
        "a non-increasing",
    );

    let ts = scan(LO, HI);
    let flux: Vec<f64> = ts.iter().map(|&t| op.a(t.powf(p)) * t.powf(p)).collect();
    let gap: Vec<f64> = ts
        .iter()
        .zip(&flux)
        .map(|(&t, &fl)| op.primitive(t.powf(p)) - fl)
        .collect();
    let witness = first_concavity(&ts, &flux)
        .map(|k| pair_witness("a(t^p)t^p", &ts, &flux, k))
        .or_else(|| first_concavity(&ts, &gap).map(|k| pair_witness("A(t^p)-a(t^p)t^p", &ts, &gap, k)));
    r.sampled("c1.3", witness, "a(t^p)t^p and A(t^p) - a(t^p)t^p convex (slopes non-decreasing)");

    check_growth_limits(&mut r, ["c1.4", "c1.5", "c1.6"], f, q, p, alpha, critical);
    check_quotient_increasing(&mut r, "c1.7", f, p);

    let big_a: Vec<f64> = ts.iter().map(|&t| op.primitive(t.powf(p))).collect();
    r.sampled(
        "c1.conv",
        first_concavity(&ts, &big_a).map(|k| pair_witness("A(t^p)", &ts, &big_a, k)),
        "A(t^p) strictly convex (sampled)",
    );
    r.record(
        "c1.splus",
        Status::Assumed,
        None,
        "the (S+) property of the operator is functional-analytic and not sampled",
    );
    check_f_shape(&mut r, f);
    r
}

/// The constant `C` fitted on `[1e-6, 1]` for `M(t) ≤ M(1)t + C`.
pub fn kirchhoff_upper_constant(op: &KirchhoffOperator) -> f64 {
    let m1 = op.m_value(1.0);
    log_grid(COEF_LO, 1.0, 121)
        .into_iter()
        .map(|t| op.m_value(t) - m1 * t)
        .fold(0.0, f64::max)
}

/// Audits the Kirchhoff family; the growth window is `alpha ∈ (4, 6)`.
pub fn check_kirchhoff(op: &KirchhoffOperator, alpha: f64, f: &Nonlinearity) -> CheckReport {
    let mut r = CheckReport::new();
    r.exact(
        "c2.alpha",
        alpha > 4.0 && alpha < 6.0,
        || format!("alpha = {alpha}"),
        "alpha in (4, 6)",
    );
    let ts = scan(COEF_LO, COEF_HI);
    let m: Vec<f64> = ts.iter().map(|&t| op.m_value(t)).collect();
    let m0 = op.m0();
    let witness = if m0 > 0.0 {
        first_decrease(&m).map(|k| pair_witness("M", &ts, &m, k))
    } else {
        Some(format!("M(0) = {m0:.6e}"))
    };
    r.sampled("c2.1", witness, format!("M(0) = {m0:.6e} > 0 and M increasing"));

    let ratio: Vec<f64> = ts.iter().zip(&m).map(|(&t, &v)| v / t).collect();
    r.sampled(
        "c2.2",
        first_increase(&ratio).map(|k| pair_witness("M(t)/t", &ts, &ratio, k)),
        "M(t)/t decreasing",
    );

    check_growth_limits(&mut r, ["c2.3", "c2.4", "c2.5"], f, 2.0, 4.0, alpha, Some(6.0));
    check_quotient_increasing(&mut r, "c2.6", f, 4.0);

    let hat = ts.iter().zip(&m).find(|&(&t, &mv)| {
        let mh = op.m_primitive(t);
        !(mh - 0.5 * mv * t >= -SLACK * mh.abs())
    });
    r.sampled(
        "c2.hat",
        hat.map(|(&t, &mv)| format!("t = {t:.4e}: M^(t) = {:.6e} < M(t)t/2 = {:.6e}", op.m_primitive(t), 0.5 * mv * t)),
        "M^(t) >= M(t)t/2",
    );

    let c = kirchhoff_upper_constant(op);
    let m1 = op.m_value(1.0);
    let upper = ts.iter().zip(&m).filter(|&(&t, _)| t >= 1.0).find(|&(&t, &mv)| {
        let bound = m1 * t + c;
        !(mv <= bound + SLACK * bound.abs())
    });
    r.sampled(
        "c2.upper",
        upper.map(|(&t, &mv)| format!("t = {t:.4e}: M(t) = {mv:.6e} > M(1)t + C = {:.6e}", m1 * t + c)),
        format!("M(t) <= M(1)t + C with C = {c:.6e} fitted on [{COEF_LO:.0e}, 1]"),
    );
    check_f_shape(&mut r, f);
    r
}

/// Audits the anisotropic family with exponents `p_1 ≤ … ≤ p_d`.
pub fn check_anisotropic(exponents: &[f64], alpha: f64, f: &Nonlinearity, dim: usize) -> CheckReport {
    let mut r = CheckReport::new();
    let n = exponents.len();
    r.exact(
        "c3.order",
        n >= 1 && exponents.iter().all(|&p| p > 1.0) && exponents.windows(2).all(|w| w[0] <= w[1]),
        || format!("exponents {exponents:?}"),
        "1 < p_1 <= ... <= p_d",
    );
    r.exact(
        "c3.dim",
        n == dim,
        || format!("{n} exponents in dimension {dim}"),
        "one exponent per axis",
    );
    let sum: f64 = exponents.iter().map(|p| 1.0 / p).sum();
    let critical = (sum > 1.0).then(|| n as f64 / (sum - 1.0));
    r.exact(
        "c3.sum",
        sum > 1.0,
        || format!("sum 1/p_i = {sum:.6}"),
        format!("sum 1/p_i = {sum:.6} > 1"),
    );
    let pd = exponents.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let p1 = exponents.iter().cloned().fold(f64::INFINITY, f64::min);
    r.exact(
        "c3.pstar",
        critical.is_some_and(|c| pd < c),
        || format!("p_d = {pd}, p* = {}", fmt_critical(critical)),
        format!("p_d < p* = {}", fmt_critical(critical)),
    );
    r.exact(
        "c3.alpha",
        alpha > pd && critical.is_some_and(|c| alpha < c),
        || format!("alpha = {alpha}, p_d = {pd}, p* = {}", fmt_critical(critical)),
        "alpha in (p_d, p*)",
    );
    check_growth_limits(&mut r, ["c3.1", "c3.2", "c3.3"], f, p1, pd, alpha, critical);
    check_quotient_increasing(&mut r, "c3.4", f, pd);
    check_f_shape(&mut r, f);
    r
}
