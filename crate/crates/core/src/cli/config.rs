//! Flat `key = value` configuration with dotted section prefixes.
//!
//! `[section]` headers prefix the keys that follow them, so `[domain]` then `dim = 2` is the
//! same as `domain.dim = 2`. Comments start with `#` or `;`. Unknown and duplicate keys are
//! errors that carry the line number.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fiber::ScanSpec;
use crate::functionals::{
    AnisotropicOperator, Coefficient, Functional, KirchhoffCoefficient, KirchhoffOperator, Nonlinearity, Operator,
    PowerTerm, QuasilinearOperator,
};
use crate::grid::Grid;
use crate::solver::{Preconditioner, SolveOptions};

/// Every key the parser understands.
const KNOWN: &[&str] = &[
    "domain.dim",
    "domain.extents",
    "domain.resolution",
    "domain.ball_center",
    "domain.ball_radius",
    "family.kind",
    "family.a",
    "family.p",
    "family.q",
    "family.m",
    "family.m_a",
    "family.m_b",
    "family.m0",
    "family.m_terms",
    "family.exponents",
    "nonlinearity.alpha",
    "nonlinearity.terms",
    "nonlinearity.signed",
    "solver.max_iterations",
    "solver.residual_tolerance",
    "solver.projection_tolerance",
    "solver.initial_step",
    "solver.shrink",
    "solver.slope_fraction",
    "solver.max_backtracks",
    "solver.preconditioner",
    "solver.seed",
    "solver.nonnegative_start",
    "solver.modes",
    "solver.starts",
    "check.directions",
    "check.seed",
    "fiber.seed",
    "fiber.scan",
    "fiber.decades",
    "fiber.points",
    "fiber.lo",
    "fiber.hi",
    "oracle.dim",
    "oracle.radius",
    "oracle.tol",
    "output.dir",
    "output.prefix",
];

/// Key-value pairs with the line each came from.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    entries: BTreeMap<String, (String, usize)>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<RawConfig> {
        let mut entries = BTreeMap::new();
        let mut section = String::new();
        for (i, line) in text.lines().enumerate() {
            let n = i + 1;
            let line = line.split(['#', ';']).next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| Error::Parse(format!("line {n}: unterminated section header")))?;
                section = name.trim().to_string();
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {n}: expected `key = value`")))?;
            let key = key.trim();
            let key = if section.is_empty() { key.to_string() } else { format!("{section}.{key}") };
            if !KNOWN.contains(&key.as_str()) {
                return Err(Error::Parse(format!("line {n}: unknown key `{key}`")));
            }
            if let Some((_, first)) = entries.get(&key) {
                return Err(Error::Parse(format!("line {n}: key `{key}` already set on line {first}")));
            }
            entries.insert(key, (value.trim().to_string(), n));
        }
        Ok(RawConfig { entries })
    }

    /// Sets or replaces a value (line 0 marks a command-line override).
    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.entries.insert(key.to_string(), (value.into(), 0));
    }

    fn raw(&self, key: &str) -> Option<(&str, usize)> {
        self.entries.get(key).map(|(v, n)| (v.as_str(), *n))
    }

    fn fail(key: &str, line: usize, message: impl std::fmt::Display) -> Error {
        if line == 0 {
            Error::Parse(format!("command line: key `{key}`: {message}"))
        } else {
            Error::Parse(format!("line {line}: key `{key}`: {message}"))
        }
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.raw(key) {
            None => Ok(None),
            Some((v, n)) => v.parse().map(Some).map_err(|e| Self::fail(key, n, e)),
        }
    }

    fn or<T: FromStr>(&self, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.get(key)?.unwrap_or(default))
    }

    fn required<T: FromStr>(&self, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)?
            .ok_or_else(|| Error::Parse(format!("missing required key `{key}`")))
    }

    fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: std::fmt::Display,
    {
        match self.raw(key) {
            None => Ok(None),
            Some((v, n)) => v
                .split(',')
                .map(|s| s.trim().parse().map_err(|e| Self::fail(key, n, e)))
                .collect::<Result<Vec<T>>>()
                .map(Some),
        }
    }

    /// `c:e` pairs separated by commas.
    fn pairs(&self, key: &str) -> Result<Option<Vec<(f64, f64)>>> {
        let Some((v, n)) = self.raw(key) else {
            return Ok(None);
        };
        v.split(',')
            .map(|item| {
                let (a, b) = item
                    .split_once(':')
                    .ok_or_else(|| Self::fail(key, n, format!("expected `c:e`, got `{}`", item.trim())))?;
                let parse = |s: &str| s.trim().parse::<f64>().map_err(|e| Self::fail(key, n, e));
                Ok((parse(a)?, parse(b)?))
            })
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }

    /// Wraps a domain error with the line of `key`.
    fn context(&self, key: &str, e: Error) -> Error {
        let line = self.raw(key).map_or(0, |(_, n)| n);
        Self::fail(key, line, e)
    }
}

/// Per-axis list that may be given as one broadcast value.
fn per_axis<T: Clone>(values: Vec<T>, dim: usize, key: &str) -> Result<Vec<T>> {
    match values.len() {
        1 => Ok(vec![values[0].clone(); dim]),
        n if n == dim => Ok(values),
        n => Err(Error::Parse(format!("key `{key}`: expected 1 or {dim} values, got {n}"))),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DomainConfig {
    pub dim: usize,
    pub extents: Vec<f64>,
    pub resolution: Vec<usize>,
    pub ball: Option<(Vec<f64>, f64)>,
}

impl DomainConfig {
    pub fn grid(&self) -> Result<Arc<Grid>> {
        let grid = Grid::build(self.dim, &self.extents, &self.resolution)?;
        Ok(match &self.ball {
            Some((center, radius)) => grid.with_ball_mask(center, *radius)?,
            None => grid,
        }
        .shared())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    pub dim: usize,
    pub radius: f64,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub domain: DomainConfig,
    pub operator: Operator,
    pub nonlinearity: Nonlinearity,
    /// Growth exponent used by the hypothesis checks.
    pub alpha: f64,
    pub solver: SolveOptions,
    pub starts: usize,
    pub check_directions: usize,
    pub check_seed: u64,
    pub fiber_seed: u64,
    pub scan: ScanSpec,
    pub oracle: OracleConfig,
    pub out_dir: PathBuf,
    pub prefix: String,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig> {
        Self::from_raw(&RawConfig::parse(text)?)
    }

    pub fn from_raw(c: &RawConfig) -> Result<RunConfig> {
        let dim: usize = c.required("domain.dim")?;
        if !(1..=3).contains(&dim) {
            return Err(c.context("domain.dim", Error::config(None, format!("dimension must be 1, 2 or 3, got {dim}"))));
        }
        let extents = per_axis(c.list("domain.extents")?.unwrap_or(vec![1.0]), dim, "domain.extents")?;
        let resolution = per_axis(c.list("domain.resolution")?.unwrap_or(vec![64]), dim, "domain.resolution")?;
        let ball = match (c.list::<f64>("domain.ball_center")?, c.get::<f64>("domain.ball_radius")?) {
            (None, None) => None,
            (Some(center), Some(radius)) => Some((center, radius)),
            _ => return Err(Error::Parse("`domain.ball_center` and `domain.ball_radius` go together".into())),
        };
        let domain = DomainConfig {
            dim,
            extents,
            resolution,
            ball,
        };
        domain.grid().map_err(|e| c.context("domain.resolution", e))?;

        let kind: String = c.required("family.kind")?;
        let operator: Operator = match kind.as_str() {
            "quasilinear" => {
                let p = c.or("family.p", 2.0)?;
                let a: String = c.or("family.a", "one".to_string())?;
                let (coef, q) = match a.as_str() {
                    "one" => (Coefficient::One, c.or("family.q", p)?),
                    "p_plus_q" => (Coefficient::PPlusQ, c.or("family.q", 2.0)?),
                    other => return Err(c.context("family.a", Error::Parameter(format!("unknown coefficient `{other}`")))),
                };
                QuasilinearOperator::new(p, q, coef).map_err(|e| c.context("family.p", e))?.into()
            }
            "kirchhoff" => {
                let m: String = c.or("family.m", "affine".to_string())?;
                let coef = match m.as_str() {
                    "affine" => KirchhoffCoefficient::Affine {
                        a: c.or("family.m_a", 1.0)?,
                        b: c.or("family.m_b", 1.0)?,
                    },
                    "log" => KirchhoffCoefficient::Log { m0: c.or("family.m0", 1.0)? },
                    "power_sum" => KirchhoffCoefficient::PowerSum {
                        m0: c.or("family.m0", 1.0)?,
                        terms: c.pairs("family.m_terms")?.unwrap_or(vec![(1.0, 0.5)]),
                    },
                    "exponential" => KirchhoffCoefficient::Exponential,
                    other => return Err(c.context("family.m", Error::Parameter(format!("unknown coefficient `{other}`")))),
                };
                KirchhoffOperator::new(coef).map_err(|e| c.context("family.m", e))?.into()
            }
            "anisotropic" => {
                let p = c.list::<f64>("family.exponents")?.unwrap_or(vec![2.0]);
                let p = per_axis(p, dim, "family.exponents")?;
                AnisotropicOperator::new(&p).map_err(|e| c.context("family.exponents", e))?.into()
            }
            other => return Err(c.context("family.kind", Error::Parameter(format!("unknown family `{other}`")))),
        };

        let signed = c.or("nonlinearity.signed", false)?;
        let alpha_key: Option<f64> = c.get("nonlinearity.alpha")?;
        let nonlinearity = match (c.pairs("nonlinearity.terms")?, alpha_key) {
            (Some(terms), _) => {
                let terms: Vec<PowerTerm> = terms
                    .into_iter()
                    .map(|(coefficient, exponent)| PowerTerm { coefficient, exponent })
                    .collect();
                if signed {
                    Nonlinearity::signed(&terms)
                } else {
                    Nonlinearity::sum_of_powers(&terms)
                }
                .map_err(|e| c.context("nonlinearity.terms", e))?
            }
            (None, Some(alpha)) => Nonlinearity::pure_power(alpha).map_err(|e| c.context("nonlinearity.alpha", e))?,
            (None, None) => Nonlinearity::pure_power(4.0).expect("default exponent"),
        };
        let alpha = alpha_key.unwrap_or_else(|| nonlinearity.max_exponent());

        let d = SolveOptions::default();
        let solver = SolveOptions {
            max_iterations: c.or("solver.max_iterations", d.max_iterations)?,
            residual_tolerance: c.or("solver.residual_tolerance", d.residual_tolerance)?,
            projection_tolerance: c.or("solver.projection_tolerance", d.projection_tolerance)?,
            armijo: crate::solver::Armijo {
                initial_step: c.or("solver.initial_step", d.armijo.initial_step)?,
                shrink: c.or("solver.shrink", d.armijo.shrink)?,
                slope_fraction: c.or("solver.slope_fraction", d.armijo.slope_fraction)?,
                max_backtracks: c.or("solver.max_backtracks", d.armijo.max_backtracks)?,
            },
            preconditioner: match c.get::<String>("solver.preconditioner")?.as_deref() {
                None | Some("auto") => Preconditioner::Auto,
                Some("none") => Preconditioner::None,
                Some("inverse_laplacian") => Preconditioner::InverseLaplacian,
                Some(other) => {
                    return Err(c.context(
                        "solver.preconditioner",
                        Error::Parameter(format!("unknown preconditioner `{other}`")),
                    ))
                }
            },
            seed: c.or("solver.seed", d.seed)?,
            nonnegative_start: c.or("solver.nonnegative_start", d.nonnegative_start)?,
            modes: c.or("solver.modes", d.modes)?,
        };
        solver.validate().map_err(|e| c.context("solver.residual_tolerance", e))?;
        let starts: usize = c.or("solver.starts", 8)?;
        if starts == 0 {
            return Err(c.context("solver.starts", Error::Parameter("need at least one start".into())));
        }

        let scan = match c.or("fiber.scan", "relative".to_string())?.as_str() {
            "relative" => ScanSpec::Relative {
                decades: c.or("fiber.decades", 3.0)?,
                points: c.or("fiber.points", 200)?,
            },
            "absolute" => ScanSpec::Absolute {
                lo: c.required("fiber.lo")?,
                hi: c.required("fiber.hi")?,
                points: c.or("fiber.points", 200)?,
            },
            other => return Err(c.context("fiber.scan", Error::Parameter(format!("unknown scan `{other}`")))),
        };
        let check_directions: usize = c.or("check.directions", 20)?;
        if check_directions == 0 {
            return Err(c.context("check.directions", Error::Parameter("need at least one direction".into())));
        }

        Ok(RunConfig {
            domain,
            operator,
            nonlinearity,
            alpha,
            solver,
            starts,
            check_directions,
            check_seed: c.or("check.seed", 0)?,
            fiber_seed: c.or("fiber.seed", 7)?,
            scan,
            oracle: OracleConfig {
                dim: c.or("oracle.dim", dim)?,
                radius: c.or("oracle.radius", 1.0)?,
                tol: c.or("oracle.tol", 1e-9)?,
            },
            out_dir: PathBuf::from(c.or("output.dir", ".".to_string())?),
            prefix: c.or("output.prefix", "nehari".to_string())?,
        })
    }

    pub fn functional(&self) -> Result<Functional> {
        Functional::new(self.operator.clone(), self.nonlinearity.clone(), self.domain.grid()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_and_dotted_keys_agree() {
        let a = RunConfig::parse("domain.dim = 1\ndomain.resolution = 30\nfamily.kind = quasilinear\n").unwrap();
        let b = RunConfig::parse("[domain]\ndim=1 # one axis\nresolution=30\n[family]\nkind=quasilinear\n").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.alpha, 4.0);
        assert_eq!(a.starts, 8);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = RunConfig::parse("domain.dim = 2\nfamily.kind = quasilinear\nfamily.p = x\n").unwrap_err();
        assert!(e.to_string().contains("line 3"), "{e}");
        let e = RawConfig::parse("domain.dim = 2\n\ndomain.bogus = 1\n").unwrap_err();
        assert!(e.to_string().contains("line 3") && e.to_string().contains("domain.bogus"));
        let e = RawConfig::parse("domain.dim = 2\ndomain.dim = 3\n").unwrap_err();
        assert!(e.to_string().contains("line 1"));
        assert!(RunConfig::parse("family.kind = quasilinear\n").is_err());
    }

    #[test]
    fn families_and_nonlinearities() {
        let c = RunConfig::parse(
            "domain.dim=2\nfamily.kind=kirchhoff\nfamily.m=power_sum\nfamily.m_terms=1:0.5\nnonlinearity.alpha=5\n",
        )
        .unwrap();
        assert!(matches!(c.operator, Operator::Kirchhoff(_)));
        let c = RunConfig::parse(
            "domain.dim=2\nfamily.kind=anisotropic\nfamily.exponents=1.8,2.2\nnonlinearity.terms=1:4, 0.5:3\n",
        )
        .unwrap();
        assert_eq!(c.alpha, 4.0);
        assert!(RunConfig::parse("domain.dim=2\nfamily.kind=anisotropic\nfamily.exponents=2,2,2\n").is_err());
        let c = RunConfig::parse("domain.dim=1\nfamily.kind=quasilinear\nnonlinearity.signed=true\nnonlinearity.terms=1:4,-2:2\n")
            .unwrap();
        assert_eq!(c.nonlinearity.terms().len(), 2);
    }
}
