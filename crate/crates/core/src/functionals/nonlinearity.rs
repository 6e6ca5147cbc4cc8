use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{odd_pow, pow_abs};

/// One odd power `c |t|^{α−2} t` of a nonlinearity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerTerm {
    pub coefficient: f64,
    pub exponent: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NonlinearityKind {
    PurePower,
    SumOfPowers,
}

/// `f(t) = Σ c_j |t|^{α_j−2} t` with primitive `F(t) = Σ (c_j/α_j) |t|^{α_j}`.
///
/// `f` is odd and, for the catalogue (nonnegative coefficients), nonnegative on `[0, ∞)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Nonlinearity {
    terms: Vec<PowerTerm>,
}

impl Nonlinearity {
    /// `f(t) = |t|^{α−2} t`.
    pub fn pure_power(alpha: f64) -> Result<Self> {
        Self::sum_of_powers(&[PowerTerm {
            coefficient: 1.0,
            exponent: alpha,
        }])
    }

    /// A sum of odd powers with nonnegative coefficients, at least one positive.
    pub fn sum_of_powers(terms: &[PowerTerm]) -> Result<Self> {
        let f = Self::signed(terms)?;
        if let Some(t) = f.terms.iter().find(|t| t.coefficient < 0.0) {
            return Err(Error::Parameter(format!(
                "coefficient {} of |t|^{} is negative",
                t.coefficient, t.exponent
            )));
        }
        if f.terms.iter().all(|t| t.coefficient == 0.0) {
            return Err(Error::Parameter("all coefficients vanish".into()));
        }
        Ok(f)
    }

    /// Sum of odd powers with coefficients of either sign. Such nonlinearities fall outside the
    /// catalogue and exist so that the hypothesis checks can be exercised on counterexamples.
    pub fn signed(terms: &[PowerTerm]) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Parameter("a nonlinearity needs at least one term".into()));
        }
        for t in terms {
            if !(t.exponent > 1.0 && t.exponent.is_finite()) {
                return Err(Error::Parameter(format!("exponent must exceed 1, got {}", t.exponent)));
            }
            if !t.coefficient.is_finite() {
                return Err(Error::Parameter(format!("coefficient {} is not finite", t.coefficient)));
            }
        }
        Ok(Nonlinearity { terms: terms.to_vec() })
    }

    pub fn terms(&self) -> &[PowerTerm] {
        &self.terms
    }

    pub fn kind(&self) -> NonlinearityKind {
        if self.terms.len() == 1 {
            NonlinearityKind::PurePower
        } else {
            NonlinearityKind::SumOfPowers
        }
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.iter().all(|t| t.coefficient >= 0.0)
    }

    /// Largest exponent carrying a nonzero coefficient.
    pub fn max_exponent(&self) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.coefficient != 0.0)
            .map(|t| t.exponent)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_exponent(&self) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.coefficient != 0.0)
            .map(|t| t.exponent)
            .fold(f64::INFINITY, f64::min)
    }

    #[inline]
    pub fn value(&self, t: f64) -> f64 {
        self.terms.iter().map(|term| term.coefficient * odd_pow(t, term.exponent)).sum()
    }

    /// `F(t) = ∫₀ᵗ f`.
    #[inline]
    pub fn primitive(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|term| term.coefficient / term.exponent * pow_abs(t, term.exponent))
            .sum()
    }

    /// `f(t) t = Σ c_j |t|^{α_j}`.
    #[inline]
    pub fn value_times_argument(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|term| term.coefficient * pow_abs(t, term.exponent))
            .sum()
    }
}
