//! Pochhammer symbols and the Gauss hypergeometric series ₂F₁.

use serde::Serialize;

use crate::error::{HypError, Result};
use crate::scalar::Scalar;

/// Rising factorial (a)ₙ = a(a+1)…(a+n−1), with (a)₀ = 1.
pub fn pochhammer<T: Scalar>(a: &T, n: usize) -> T {
    let mut acc = T::one();
    let mut factor = a.clone();
    for _ in 0..n {
        acc = acc * factor.clone();
        factor = factor + T::one();
    }
    acc
}

/// Parameters (a, b; c) of ₂F₁(a, b; c; z).
#[derive(Debug, Clone, PartialEq)]
pub struct HypParams<T> {
    pub a: T,
    pub b: T,
    pub c: T,
}

impl<T: Scalar> HypParams<T> {
    pub fn new(a: T, b: T, c: T) -> Self {
        Self { a, b, c }
    }

    /// False iff c is zero or a negative integer.
    pub fn is_valid(&self) -> bool {
        !self.c.is_nonpositive_integer()
    }

    /// Degree of the polynomial when a or b is a nonpositive integer.
    pub fn terminating_degree(&self) -> Option<usize> {
        let deg = |p: &T| match p.as_integer() {
            Some(k) if k <= 0 => Some((-k) as usize),
            _ => None,
        };
        match (deg(&self.a), deg(&self.b)) {
            (Some(m), Some(n)) => Some(m.min(n)),
            (m, n) => m.or(n),
        }
    }
}

/// Stopping rule for series summation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesControl {
    pub max_terms: usize,
    pub rel_tol: f64,
    /// Successive terms that must each fall below `rel_tol·|sum|` before stopping.
    pub consecutive_small: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            max_terms: 5000,
            rel_tol: 1e-15,
            consecutive_small: 2,
        }
    }
}

impl SeriesControl {
    pub fn new(max_terms: usize, rel_tol: f64, consecutive_small: usize) -> Result<Self> {
        let ctl = Self {
            max_terms,
            rel_tol,
            consecutive_small,
        };
        ctl.validate()?;
        Ok(ctl)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_terms == 0 {
            return Err(HypError::InvalidParams("max_terms must be at least 1".into()));
        }
        if !(self.rel_tol > 0.0) {
            return Err(HypError::InvalidParams("rel_tol must be positive".into()));
        }
        if self.consecutive_small == 0 {
            return Err(HypError::InvalidParams(
                "consecutive_small must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesResult<T> {
    pub value: T,
    pub terms_used: usize,
    pub converged: bool,
    /// |tₙ/tₙ₋₁| for the last two terms summed; 0 when fewer than two terms.
    pub last_term_ratio: f64,
}

impl<T: Scalar> SeriesResult<T> {
    /// Turns a non-converged result into [`HypError::NotConverged`].
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(HypError::NotConverged {
                terms_used: self.terms_used,
                partial: self.value.to_f64(),
            })
        }
    }
}

/// Sums ₂F₁(a, b; c; z) = Σ (a)ₙ(b)ₙ/((c)ₙ n!) zⁿ.
///
/// When a or b is a nonpositive integer the series is a polynomial and is
/// summed completely for any z; otherwise |z| < 1 is required. Hitting
/// `max_terms` is not an error here: the partial sum comes back with
/// `converged == false` (see [`SeriesResult::require_converged`]).
pub fn gauss_2f1<T: Scalar>(p: &HypParams<T>, z: &T, ctl: &SeriesControl) -> Result<SeriesResult<T>> {
    ctl.validate()?;
    if !p.is_valid() {
        return Err(HypError::InvalidParams(format!(
            "c = {} is zero or a negative integer",
            p.c
        )));
    }

    if let Some(degree) = p.terminating_degree() {
        return Ok(sum_polynomial(p, z, degree));
    }

    if !(z.magnitude() < 1.0) {
        return Err(HypError::DomainError(format!(
            "|z| < 1 required for a non-terminating series, got z = {}",
            z
        )));
    }

    let mut sum = T::one();
    let mut term = T::one();
    let mut terms_used = 1;
    let mut small_run = 0;
    let mut last_ratio = 0.0;
    if z.is_zero() {
        return Ok(SeriesResult {
            value: sum,
            terms_used,
            converged: true,
            last_term_ratio: last_ratio,
        });
    }

    let mut n: i64 = 0;
    while terms_used < ctl.max_terms {
        let k = T::from_i64(n);
        let prev_mag = term.magnitude();
        term = term
            * (p.a.clone() + k.clone())
            * (p.b.clone() + k.clone())
            * z.clone()
            / ((p.c.clone() + k) * T::from_i64(n + 1));
        sum = sum + term.clone();
        terms_used += 1;
        n += 1;

        let mag = term.magnitude();
        if prev_mag > 0.0 {
            last_ratio = mag / prev_mag;
        }
        if mag == 0.0 || mag < ctl.rel_tol * sum.magnitude() {
            small_run += 1;
            if small_run >= ctl.consecutive_small {
                return Ok(SeriesResult {
                    value: sum,
                    terms_used,
                    converged: true,
                    last_term_ratio: last_ratio,
                });
            }
        } else {
            small_run = 0;
        }
    }

    Ok(SeriesResult {
        value: sum,
        terms_used,
        converged: false,
        last_term_ratio: last_ratio,
    })
}

fn sum_polynomial<T: Scalar>(p: &HypParams<T>, z: &T, degree: usize) -> SeriesResult<T> {
    let mut sum = T::one();
    let mut term = T::one();
    let mut last_ratio = 0.0;
    for n in 0..degree as i64 {
        let k = T::from_i64(n);
        let prev_mag = term.magnitude();
        term = term
            * (p.a.clone() + k.clone())
            * (p.b.clone() + k.clone())
            * z.clone()
            / ((p.c.clone() + k) * T::from_i64(n + 1));
        if prev_mag > 0.0 {
            last_ratio = term.magnitude() / prev_mag;
        }
        sum = sum + term.clone();
    }
    SeriesResult {
        value: sum,
        terms_used: degree + 1,
        converged: true,
        last_term_ratio: last_ratio,
    }
}

/// Below this argument [`hyp2f1`] switches to the Pfaff-transformed series.
pub const PFAFF_THRESHOLD: f64 = -0.5;

/// Float evaluation of ₂F₁ that requires convergence.
///
/// For z < −½ the Pfaff identity ₂F₁(a,b;c;z) = (1−z)^{−a}·₂F₁(a, c−b; c; z/(z−1))
/// is used, which moves the argument into (0, ½) where the series converges
/// quickly and without alternating cancellation.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64, ctl: &SeriesControl) -> Result<f64> {
    let p = HypParams::new(a, b, c);
    if z < PFAFF_THRESHOLD && z > -1.0 && p.is_valid() && p.terminating_degree().is_none() {
        let w = z / (z - 1.0);
        let inner = gauss_2f1(&HypParams::new(a, c - b, c), &w, ctl)?.require_converged()?;
        return Ok((-a * (-z).ln_1p()).exp() * inner.value);
    }
    gauss_2f1(&p, &z, ctl)?.require_converged().map(|r| r.value)
}
