use crate::error::{Error, Result};
use crate::numeric::{log_grid, pow_abs};

/// Offset added to `|∇u|^p` before evaluating singular flux weights.
pub const GRADIENT_REGULARIZATION: f64 = 1e-30;

/// A coefficient `a` given by samples `(t_k, a_k)`, interpolated linearly in log–log
/// coordinates and extended by the first and last power laws.
///
/// Each segment is an exact power law, so the primitive `A(t) = ∫₀ᵗ a` is available in closed
/// form and cached at the knots.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedCoefficient {
    log_t: Vec<f64>,
    log_a: Vec<f64>,
    slopes: Vec<f64>,
    cumulative: Vec<f64>,
}

fn power_segment_integral(a0: f64, t0: f64, slope: f64, t: f64) -> f64 {
    // ∫_{t0}^{t} a0 (s/t0)^slope ds
    if (slope + 1.0).abs() < 1e-14 {
        a0 * t0 * (t / t0).ln()
    } else {
        a0 * t0 / (slope + 1.0) * ((t / t0).powf(slope + 1.0) - 1.0)
    }
}

impl TabulatedCoefficient {
    pub fn new(t: &[f64], a: &[f64]) -> Result<Self> {
        if t.len() != a.len() || t.len() < 2 {
            return Err(Error::Parameter("a table needs at least two matching (t, a) samples".into()));
        }
        if t.iter().any(|&x| !(x > 0.0 && x.is_finite())) || a.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
            return Err(Error::Parameter("table knots and values must be positive and finite".into()));
        }
        if t.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Parameter("table knots must be strictly increasing".into()));
        }
        let log_t: Vec<f64> = t.iter().map(|x| x.ln()).collect();
        let log_a: Vec<f64> = a.iter().map(|x| x.ln()).collect();
        let slopes: Vec<f64> = (0..t.len() - 1)
            .map(|k| (log_a[k + 1] - log_a[k]) / (log_t[k + 1] - log_t[k]))
            .collect();
        if slopes[0] <= -1.0 {
            return Err(Error::Parameter(format!(
                "coefficient decays like t^{} at the origin, which is not integrable",
                slopes[0]
            )));
        }
        let mut cumulative = vec![a[0] * t[0] / (slopes[0] + 1.0)];
        for k in 0..slopes.len() {
            let next = cumulative[k] + power_segment_integral(a[k], t[k], slopes[k], t[k + 1]);
            cumulative.push(next);
        }
        Ok(TabulatedCoefficient {
            log_t,
            log_a,
            slopes,
            cumulative,
        })
    }

    /// Tabulates an analytic coefficient on a log grid.
    pub fn sample(a: impl Fn(f64) -> f64, lo: f64, hi: f64, points: usize) -> Result<Self> {
        let t = log_grid(lo, hi, points);
        let values: Vec<f64> = t.iter().map(|&x| a(x)).collect();
        Self::new(&t, &values)
    }

    fn segment(&self, t: f64) -> usize {
        let lt = t.ln();
        match self.log_t.binary_search_by(|x| x.total_cmp(&lt)) {
            Ok(k) => k.min(self.slopes.len() - 1),
            Err(0) => 0,
            Err(k) => (k - 1).min(self.slopes.len() - 1),
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return if self.slopes[0] < 0.0 {
                f64::INFINITY
            } else if self.slopes[0] == 0.0 {
                self.log_a[0].exp()
            } else {
                0.0
            };
        }
        let k = self.segment(t);
        (self.log_a[k] + self.slopes[k] * (t.ln() - self.log_t[k])).exp()
    }

    pub fn primitive(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let (t0, a0) = (self.log_t[0].exp(), self.log_a[0].exp());
        if t <= t0 {
            return a0 * t0 / (self.slopes[0] + 1.0) * (t / t0).powf(self.slopes[0] + 1.0);
        }
        let k = self.segment(t);
        let (tk, ak) = (self.log_t[k].exp(), self.log_a[k].exp());
        self.cumulative[k] + power_segment_integral(ak, tk, self.slopes[k], t)
    }
}

/// The coefficient `a` of the quasilinear operator `div(a(|∇u|^p)|∇u|^{p−2}∇u)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Coefficient {
    /// `a ≡ 1`: the `p`-Laplacian.
    One,
    /// `a(t) = 1 + t^{(q−p)/p}`: the sum of the `p`- and `q`-Laplacians.
    PPlusQ,
    Table(TabulatedCoefficient),
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuasilinearOperator {
    p: f64,
    q: f64,
    coefficient: Coefficient,
}

impl QuasilinearOperator {
    pub fn new(p: f64, q: f64, coefficient: Coefficient) -> Result<Self> {
        if !(q > 1.0 && p >= q && p.is_finite()) {
            return Err(Error::Parameter(format!("need p ≥ q > 1, got p = {p}, q = {q}")));
        }
        Ok(QuasilinearOperator { p, q, coefficient })
    }

    /// The `p`-Laplacian (`a ≡ 1`, `q = p`).
    pub fn laplacian(p: f64) -> Result<Self> {
        Self::new(p, p, Coefficient::One)
    }

    pub fn p_plus_q(p: f64, q: f64) -> Result<Self> {
        Self::new(p, q, Coefficient::PPlusQ)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn coefficient(&self) -> &Coefficient {
        &self.coefficient
    }

    /// `a(t)`.
    pub fn a(&self, t: f64) -> f64 {
        match &self.coefficient {
            Coefficient::One => 1.0,
            Coefficient::PPlusQ => 1.0 + pow_abs(t, (self.q - self.p) / self.p),
            Coefficient::Table(tab) => tab.value(t),
        }
    }

    /// `A(t) = ∫₀ᵗ a`.
    pub fn primitive(&self, t: f64) -> f64 {
        match &self.coefficient {
            Coefficient::One => t,
            Coefficient::PPlusQ => t + self.p / self.q * pow_abs(t, self.q / self.p),
            Coefficient::Table(tab) => tab.primitive(t),
        }
    }

    /// Energy density `A(|g|^p)/p` as a function of `|g|²`.
    #[inline]
    pub(crate) fn density(&self, r2: f64) -> f64 {
        match &self.coefficient {
            Coefficient::One if self.p == 2.0 => 0.5 * r2,
            Coefficient::One => pow_abs(r2.sqrt(), self.p) / self.p,
            Coefficient::PPlusQ => {
                let r = r2.sqrt();
                pow_abs(r, self.p) / self.p + pow_abs(r, self.q) / self.q
            }
            Coefficient::Table(tab) => tab.primitive(pow_abs(r2.sqrt(), self.p)) / self.p,
        }
    }

    /// Flux weight `a(s)s^{(p−2)/p}` with `s = |g|^p + ε`, so that the flux is `weight · g`.
    #[inline]
    pub(crate) fn flux_weight(&self, r2: f64) -> f64 {
        let (p, q) = (self.p, self.q);
        match &self.coefficient {
            Coefficient::One if p == 2.0 => 1.0,
            Coefficient::PPlusQ if p == 2.0 && q == 2.0 => 2.0,
            _ => {
                let s = pow_abs(r2.sqrt(), p) + GRADIENT_REGULARIZATION;
                match &self.coefficient {
                    Coefficient::One => s.powf((p - 2.0) / p),
                    Coefficient::PPlusQ => s.powf((p - 2.0) / p) + s.powf((q - 2.0) / p),
                    Coefficient::Table(tab) => tab.value(s) * s.powf((p - 2.0) / p),
                }
            }
        }
    }

    /// Best constants `k₀ ≤ a(t)/(1 + t^{(q−p)/p}) ≤ k₁` over a log grid on `[lo, hi]`.
    pub fn bound_constants(&self, lo: f64, hi: f64, points: usize) -> (f64, f64) {
        let e = (self.q - self.p) / self.p;
        log_grid(lo, hi, points)
            .into_iter()
            .map(|t| self.a(t) / (1.0 + t.powf(e)))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r), hi.max(r)))
    }
}

/// The Kirchhoff coefficient `M` and its primitive `M̂`.
#[derive(Debug, Clone, PartialEq)]
pub enum KirchhoffCoefficient {
    /// `M(t) = a t + b`.
    Affine { a: f64, b: f64 },
    /// `M(t) = m₀ + ln(1 + t)`.
    Log { m0: f64 },
    /// `M(t) = m₀ + Σ b_i t^{γ_i}`.
    PowerSum { m0: f64, terms: Vec<(f64, f64)> },
    /// `M(t) = eᵗ`; violates the hypothesis that `M(t)/t` decreases.
    Exponential,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KirchhoffOperator {
    m: KirchhoffCoefficient,
}

impl KirchhoffOperator {
    pub fn new(m: KirchhoffCoefficient) -> Result<Self> {
        match &m {
            KirchhoffCoefficient::Affine { a, b } => {
                if !(*a >= 0.0 && *b > 0.0 && a.is_finite() && b.is_finite()) {
                    return Err(Error::Parameter(format!("affine M needs a ≥ 0 and b > 0, got a = {a}, b = {b}")));
                }
            }
            KirchhoffCoefficient::Log { m0 } => {
                if !(*m0 > 0.0 && m0.is_finite()) {
                    return Err(Error::Parameter(format!("m0 must be positive, got {m0}")));
                }
            }
            KirchhoffCoefficient::PowerSum { m0, terms } => {
                if !(*m0 > 0.0 && m0.is_finite()) {
                    return Err(Error::Parameter(format!("m0 must be positive, got {m0}")));
                }
                if terms.is_empty() || terms.iter().all(|&(b, _)| b == 0.0) {
                    return Err(Error::Parameter("power-sum M needs at least one positive b_i".into()));
                }
                for &(b, g) in terms {
                    if !(b >= 0.0 && b.is_finite()) {
                        return Err(Error::Parameter(format!("b_i must be nonnegative, got {b}")));
                    }
                    if !(g > 0.0 && g <= 1.0) {
                        return Err(Error::Parameter(format!("γ_i must lie in (0, 1], got {g}")));
                    }
                }
            }
            KirchhoffCoefficient::Exponential => {}
        }
        Ok(KirchhoffOperator { m })
    }

    pub fn coefficient(&self) -> &KirchhoffCoefficient {
        &self.m
    }

    /// `M(0)`.
    pub fn m0(&self) -> f64 {
        self.m_value(0.0)
    }

    pub fn m_value(&self, t: f64) -> f64 {
        match &self.m {
            KirchhoffCoefficient::Affine { a, b } => a * t + b,
            KirchhoffCoefficient::Log { m0 } => m0 + t.ln_1p(),
            KirchhoffCoefficient::PowerSum { m0, terms } => {
                m0 + terms.iter().map(|&(b, g)| b * pow_abs(t, g)).sum::<f64>()
            }
            KirchhoffCoefficient::Exponential => t.exp(),
        }
    }

    /// `M̂(t) = ∫₀ᵗ M`.
    pub fn m_primitive(&self, t: f64) -> f64 {
        match &self.m {
            KirchhoffCoefficient::Affine { a, b } => 0.5 * a * t * t + b * t,
            KirchhoffCoefficient::Log { m0 } => {
                // (1+t)ln(1+t) − t, written to avoid cancellation for small t
                let l = t.ln_1p();
                let tail = if t < 1e-4 {
                    t * t / 2.0 - t * t * t / 6.0 + t.powi(4) / 12.0
                } else {
                    (1.0 + t) * l - t
                };
                m0 * t + tail
            }
            KirchhoffCoefficient::PowerSum { m0, terms } => {
                m0 * t + terms.iter().map(|&(b, g)| b * pow_abs(t, g + 1.0) / (g + 1.0)).sum::<f64>()
            }
            KirchhoffCoefficient::Exponential => t.exp_m1(),
        }
    }
}

/// The anisotropic operator `Σ_i ∂_i(|∂_i u|^{p_i−2} ∂_i u)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnisotropicOperator {
    exponents: Vec<f64>,
}

impl AnisotropicOperator {
    /// Exponents must exceed 1 and be sorted ascending.
    pub fn new(exponents: &[f64]) -> Result<Self> {
        if exponents.is_empty() || exponents.len() > 3 {
            return Err(Error::Parameter("need between one and three exponents".into()));
        }
        if let Some(p) = exponents.iter().find(|&&p| !(p > 1.0 && p.is_finite())) {
            return Err(Error::Parameter(format!("anisotropic exponents must exceed 1, got {p}")));
        }
        if exponents.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Parameter("anisotropic exponents must be sorted ascending".into()));
        }
        Ok(AnisotropicOperator {
            exponents: exponents.to_vec(),
        })
    }

    pub fn exponents(&self) -> &[f64] {
        &self.exponents
    }

    pub fn max_exponent(&self) -> f64 {
        *self.exponents.last().expect("non-empty")
    }

    pub fn harmonic_sum(&self) -> f64 {
        self.exponents.iter().map(|p| 1.0 / p).sum()
    }

    /// `p* = d / (Σ 1/p_i − 1)` when `Σ 1/p_i > 1`, otherwise `None` (every power is subcritical).
    pub fn critical_exponent(&self) -> Option<f64> {
        let s = self.harmonic_sum();
        (s > 1.0).then(|| self.exponents.len() as f64 / (s - 1.0))
    }
}
