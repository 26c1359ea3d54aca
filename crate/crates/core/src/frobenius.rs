//! Frobenius-method machinery for the ODE family
//!
//! ```text
//! x(1−x²)y″ + (p₀ + p₁x + p₂x²)y′ + (q₀ + q₁x)y = 0
//! ```
//!
//! which the three quadratic transformations reduce to after the change of
//! variables z = 4x/(1+x)², w = (1+x)^{2a}y. Substituting y = x^λ Σ cₙxⁿ gives
//! the indicial equation λ(λ + p₀ − 1) = 0 and the three-term recurrence
//!
//! ```text
//! cₙ(n+λ)(n+λ+p₀−1) = −cₙ₋₁[p₁(n−1+λ) + q₀]
//!                     + cₙ₋₂[(n−2+λ)(n−3+λ) − p₂(n−2+λ) − q₁]
//! ```
//!
//! The closed-form coefficient families are expressed through Pochhammer
//! symbols and checked against the recurrence in exact arithmetic.

use std::fmt;

use serde::Serialize;

use crate::error::{HypError, Result};
use crate::scalar::Scalar;
use crate::transforms::TransformCase;

/// Polynomial coefficients of one member of the ODE family.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeSpec<T> {
    pub p0: T,
    pub p1: T,
    pub p2: T,
    pub q0: T,
    pub q1: T,
}

impl<T: Scalar> OdeSpec<T> {
    /// Indicial polynomial λ(λ + p₀ − 1).
    pub fn indicial_poly(&self, lambda: &T) -> T {
        lambda.clone() * (lambda.clone() + self.p0.clone() - T::one())
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> OdeSpec<U> {
        OdeSpec {
            p0: f(&self.p0),
            p1: f(&self.p1),
            p2: f(&self.p2),
            q0: f(&self.q0),
            q1: f(&self.q1),
        }
    }
}

/// Builds the transformed ODE satisfied by (1+x)^{−2a}·₂F₁(a, b; c; 4x/(1+x)²).
pub fn ode_from_case<T: Scalar>(case: TransformCase, a: &T, b: &T) -> OdeSpec<T> {
    let int = |n: i64| T::from_i64(n);
    let (a, b) = (a.clone(), b.clone());
    match case {
        TransformCase::Gauss => OdeSpec {
            p0: int(2) * b.clone(),
            p1: T::zero(),
            p2: -(int(2) * (int(2) * a.clone() - b.clone() + int(1))),
            q0: T::zero(),
            q1: -(int(2) * a.clone() * (int(1) + int(2) * a - int(2) * b)),
        },
        TransformCase::PlusOne => OdeSpec {
            p0: int(2) * b.clone() + int(1),
            p1: int(2),
            p2: -(int(4) * a.clone() - int(2) * b.clone() + int(1)),
            q0: int(2) * a.clone(),
            q1: int(4) * a.clone() * (b - a),
        },
        TransformCase::MinusOne => OdeSpec {
            p0: int(2) * b.clone() - int(1),
            p1: int(-2),
            p2: -(int(4) * a.clone() - int(2) * b.clone() + int(3)),
            q0: -(int(2) * a.clone()),
            q1: -(int(4) * a.clone() * (a - b + int(1))),
        },
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndicialRoots<T> {
    /// Always 0.
    pub lambda1: T,
    /// 1 − p₀.
    pub lambda2: T,
}

impl<T: Scalar> IndicialRoots<T> {
    /// Integer difference λ₂ − λ₁ when the roots are resonant.
    pub fn integer_separation(&self) -> Option<i64> {
        (self.lambda2.clone() - self.lambda1.clone()).as_integer()
    }

    pub fn root(&self, branch: Branch) -> &T {
        match branch {
            Branch::Analytic => &self.lambda1,
            Branch::Singular => &self.lambda2,
        }
    }
}

pub fn indicial_roots<T: Scalar>(ode: &OdeSpec<T>) -> IndicialRoots<T> {
    IndicialRoots {
        lambda1: T::zero(),
        lambda2: T::one() - ode.p0.clone(),
    }
}

/// Frobenius exponent λ with coefficients c₀..c_N of y = x^λ Σ cₙxⁿ.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffSeq<T> {
    pub lambda: T,
    pub coeffs: Vec<T>,
}

impl<T: Scalar> CoeffSeq<T> {
    /// Wraps raw coefficients without checking c₀ ≠ 0.
    pub fn from_parts(lambda: T, coeffs: Vec<T>) -> Self {
        Self { lambda, coeffs }
    }

    pub fn c0(&self) -> &T {
        &self.coeffs[0]
    }

    /// Highest retained index N.
    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn to_f64(&self) -> CoeffSeq<f64> {
        CoeffSeq {
            lambda: self.lambda.to_f64(),
            coeffs: self.coeffs.iter().map(Scalar::to_f64).collect(),
        }
    }
}

/// Which indicial root a solution is built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// λ = 0
    Analytic,
    /// λ = 1 − p₀
    Singular,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Analytic => "analytic",
            Branch::Singular => "singular",
        })
    }
}

/// One of the six closed-form coefficient families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ClosedFormCase {
    pub case: TransformCase,
    pub branch: Branch,
}

impl ClosedFormCase {
    pub const ALL: [ClosedFormCase; 6] = [
        ClosedFormCase::new(TransformCase::Gauss, Branch::Analytic),
        ClosedFormCase::new(TransformCase::Gauss, Branch::Singular),
        ClosedFormCase::new(TransformCase::PlusOne, Branch::Analytic),
        ClosedFormCase::new(TransformCase::PlusOne, Branch::Singular),
        ClosedFormCase::new(TransformCase::MinusOne, Branch::Analytic),
        ClosedFormCase::new(TransformCase::MinusOne, Branch::Singular),
    ];

    pub const fn new(case: TransformCase, branch: Branch) -> Self {
        Self { case, branch }
    }

    /// Human-readable statement of the coefficient formulas.
    pub fn formula(&self) -> &'static str {
        use Branch::*;
        use TransformCase::*;
        match (self.case, self.branch) {
            (Gauss, Analytic) => {
                "lambda = 0; c[2n] = (a)_n (a-b+1/2)_n / (n! (b+1/2)_n) c0; c[2n+1] = 0"
            }
            (Gauss, Singular) => {
                "lambda = 1-2b; c[2n] = (a-b+1/2)_n (a-2b+1)_n / (n! (3/2-b)_n) c0; c[2n+1] = 0"
            }
            (PlusOne, Analytic) => {
                "lambda = 0; c[2n] = (a)_n (a-b+1/2)_n / (n! (b+1/2)_n) c0; \
                 c[2n+1] = (a+1)_n (a-b+1/2)_n / (n! (b+3/2)_n) c1; c1 = -2a/(2b+1) c0"
            }
            (PlusOne, Singular) => {
                "lambda = -2b; c[2n] = (a-2b)_n (a-b+1/2)_n / (n! (1/2-b)_n) c0; \
                 c[2n+1] = (a-2b+1)_n (a-b+1/2)_n / (n! (3/2-b)_n) c1; c1 = -2(a-2b)/(1-2b) c0"
            }
            (MinusOne, Analytic) => {
                "lambda = 0; c[2n] = (a)_n (a-b+3/2)_n / (n! (b-1/2)_n) c0; \
                 c[2n+1] = (a+1)_n (a-b+3/2)_n / (n! (b+1/2)_n) c1; c1 = +2a/(2b-1) c0"
            }
            (MinusOne, Singular) => {
                "lambda = 2-2b; c[2n] = (a-2b+2)_n (a-b+3/2)_n / (n! (3/2-b)_n) c0; \
                 c[2n+1] = (a-2b+3)_n (a-b+3/2)_n / (n! (5/2-b)_n) c1; c1 = +2(a-2b+2)/(3-2b) c0"
            }
        }
    }
}

impl fmt::Display for ClosedFormCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.case, self.branch)
    }
}

/// Runs the three-term recurrence from c₀ up to c_N.
///
/// `lambda` must be an indicial root. A double root, or any vanishing
/// denominator (n+λ)(n+λ+p₀−1) for 1 ≤ n ≤ N, is the logarithmic case and is
/// rejected with [`HypError::ResonantExponent`]. The larger of two roots that
/// differ by a positive integer is fine.
pub fn recurrence_coeffs<T: Scalar>(ode: &OdeSpec<T>, lambda: &T, n_max: usize, c0: &T) -> Result<CoeffSeq<T>> {
    if !ode.indicial_poly(lambda).is_negligible() {
        return Err(HypError::NotIndicialRoot {
            lambda: lambda.to_string(),
        });
    }
    if c0.is_negligible() {
        return Err(HypError::InvalidParams("c0 must be nonzero".into()));
    }
    let roots = indicial_roots(ode);
    if roots.integer_separation() == Some(0) {
        return Err(HypError::ResonantExponent(format!(
            "double indicial root {}",
            roots.lambda1
        )));
    }

    let int = |n: i64| T::from_i64(n);
    let mut coeffs = Vec::with_capacity(n_max + 1);
    coeffs.push(c0.clone());
    for n in 1..=n_max as i64 {
        let m = int(n) + lambda.clone();
        let denom = m.clone() * (m.clone() + ode.p0.clone() - T::one());
        if denom.is_negligible() {
            return Err(HypError::ResonantExponent(format!(
                "recurrence denominator vanishes at n = {n}"
            )));
        }
        let m1 = m.clone() - T::one();
        let mut rhs = -(coeffs[n as usize - 1].clone() * (ode.p1.clone() * m1 + ode.q0.clone()));
        if n >= 2 {
            let m2 = m.clone() - int(2);
            let m3 = m - int(3);
            let weight = m2.clone() * m3 - ode.p2.clone() * m2 - ode.q1.clone();
            rhs = rhs + coeffs[n as usize - 2].clone() * weight;
        }
        coeffs.push(rhs / denom);
    }
    Ok(CoeffSeq {
        lambda: lambda.clone(),
        coeffs,
    })
}

/// Parameters of c₂ₙ = (u)ₙ(v)ₙ/(n!(w)ₙ)·lead.
struct PochhammerRatio<T> {
    upper: [T; 2],
    lower: T,
    lead: T,
}

struct ClosedFormData<T> {
    lambda: T,
    even: PochhammerRatio<T>,
    odd: Option<PochhammerRatio<T>>,
}

fn closed_form_data<T: Scalar>(cf: ClosedFormCase, a: &T, b: &T) -> Result<ClosedFormData<T>> {
    use Branch::*;
    use TransformCase::*;
    let half = |n: i64| T::ratio(n, 2);
    let int = |n: i64| T::from_i64(n);
    let (a, b) = (a.clone(), b.clone());
    let amb = a.clone() - b.clone();
    let a2b = a.clone() - int(2) * b.clone();

    let safe_div = |num: T, den: T, what: &str| -> Result<T> {
        if den.is_negligible() {
            Err(HypError::PoleInCoefficients(format!("{what} vanishes")))
        } else {
            Ok(num / den)
        }
    };

    let data = match (cf.case, cf.branch) {
        (Gauss, Analytic) => ClosedFormData {
            lambda: T::zero(),
            even: PochhammerRatio {
                upper: [a.clone(), amb.clone() + half(1)],
                lower: b.clone() + half(1),
                lead: T::one(),
            },
            odd: None,
        },
        (Gauss, Singular) => ClosedFormData {
            lambda: int(1) - int(2) * b.clone(),
            even: PochhammerRatio {
                upper: [amb.clone() + half(1), a2b.clone() + int(1)],
                lower: half(3) - b.clone(),
                lead: T::one(),
            },
            odd: None,
        },
        (PlusOne, Analytic) => ClosedFormData {
            lambda: T::zero(),
            even: PochhammerRatio {
                upper: [a.clone(), amb.clone() + half(1)],
                lower: b.clone() + half(1),
                lead: T::one(),
            },
            odd: Some(PochhammerRatio {
                upper: [a.clone() + int(1), amb.clone() + half(1)],
                lower: b.clone() + half(3),
                lead: safe_div(-(int(2) * a.clone()), int(2) * b.clone() + int(1), "2b+1")?,
            }),
        },
        (PlusOne, Singular) => ClosedFormData {
            lambda: -(int(2) * b.clone()),
            even: PochhammerRatio {
                upper: [a2b.clone(), amb.clone() + half(1)],
                lower: half(1) - b.clone(),
                lead: T::one(),
            },
            odd: Some(PochhammerRatio {
                upper: [a2b.clone() + int(1), amb.clone() + half(1)],
                lower: half(3) - b.clone(),
                lead: safe_div(-(int(2) * a2b.clone()), int(1) - int(2) * b.clone(), "1-2b")?,
            }),
        },
        (MinusOne, Analytic) => ClosedFormData {
            lambda: T::zero(),
            even: PochhammerRatio {
                upper: [a.clone(), amb.clone() + half(3)],
                lower: b.clone() - half(1),
                lead: T::one(),
            },
            odd: Some(PochhammerRatio {
                upper: [a.clone() + int(1), amb.clone() + half(3)],
                lower: b.clone() + half(1),
                lead: safe_div(int(2) * a.clone(), int(2) * b.clone() - int(1), "2b-1")?,
            }),
        },
        (MinusOne, Singular) => ClosedFormData {
            lambda: int(2) - int(2) * b.clone(),
            even: PochhammerRatio {
                upper: [a2b.clone() + int(2), amb.clone() + half(3)],
                lower: half(3) - b.clone(),
                lead: T::one(),
            },
            odd: Some(PochhammerRatio {
                upper: [a2b.clone() + int(3), amb.clone() + half(3)],
                lower: half(5) - b.clone(),
                lead: safe_div(
                    int(2) * (a2b.clone() + int(2)),
                    int(3) - int(2) * b.clone(),
                    "3-2b",
                )?,
            }),
        },
    };
    Ok(data)
}

/// `count` successive values of (u)ₙ(v)ₙ/(n!(w)ₙ)·lead for n = 0, 1, ….
fn pochhammer_ratio_terms<T: Scalar>(r: &PochhammerRatio<T>, count: usize) -> Result<Vec<T>> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return Ok(out);
    }
    let mut term = r.lead.clone();
    out.push(term.clone());
    for k in 1..count as i64 {
        let prev = T::from_i64(k - 1);
        let lower = r.lower.clone() + prev.clone();
        if lower.is_negligible() {
            return Err(HypError::PoleInCoefficients(format!(
                "lower Pochhammer parameter {} hits zero at index {}",
                r.lower,
                k - 1
            )));
        }
        term = term
            * (r.upper[0].clone() + prev.clone())
            * (r.upper[1].clone() + prev)
            / (lower * T::from_i64(k));
        out.push(term.clone());
    }
    Ok(out)
}

/// Closed-form coefficients c₀..c_N (c₀ = 1) of the chosen family.
pub fn closed_form_coeffs<T: Scalar>(cf: ClosedFormCase, a: &T, b: &T, n_max: usize) -> Result<CoeffSeq<T>> {
    let data = closed_form_data(cf, a, b)?;
    let n_even = n_max / 2 + 1;
    let n_odd = n_max.div_ceil(2);
    let even = pochhammer_ratio_terms(&data.even, n_even)?;
    let odd = match &data.odd {
        Some(r) => pochhammer_ratio_terms(r, n_odd)?,
        None => vec![T::zero(); n_odd],
    };
    Ok(CoeffSeq {
        lambda: data.lambda,
        coeffs: interleave(&even, &odd),
    })
}

fn interleave<T: Clone>(even: &[T], odd: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(even.len() + odd.len());
    for i in 0..even.len().max(odd.len()) {
        if let Some(e) = even.get(i) {
            out.push(e.clone());
        }
        if let Some(o) = odd.get(i) {
            out.push(o.clone());
        }
    }
    out
}

/// Splits y = x^λ Σ cₙxⁿ into x^λ[E(x²) + x·O(x²)]; both parts keep λ.
pub fn split_even_odd<T: Scalar>(cs: &CoeffSeq<T>) -> (CoeffSeq<T>, CoeffSeq<T>) {
    let even = cs.coeffs.iter().step_by(2).cloned().collect();
    let odd = cs.coeffs.iter().skip(1).step_by(2).cloned().collect();
    (
        CoeffSeq::from_parts(cs.lambda.clone(), even),
        CoeffSeq::from_parts(cs.lambda.clone(), odd),
    )
}

/// Inverse of [`split_even_odd`].
pub fn join_even_odd<T: Scalar>(even: &CoeffSeq<T>, odd: &CoeffSeq<T>) -> CoeffSeq<T> {
    CoeffSeq::from_parts(even.lambda.clone(), interleave(&even.coeffs, &odd.coeffs))
}

/// x^e for real x, using integer powers when e is integral.
fn real_power(x: f64, exponent: f64) -> Result<f64> {
    match exponent.as_integer() {
        Some(k) => {
            if x == 0.0 && k < 0 {
                Err(HypError::DomainError(format!("x = 0 with negative exponent {k}")))
            } else {
                Ok(x.powi(k as i32))
            }
        }
        None if x > 0.0 => Ok(x.powf(exponent)),
        None => Err(HypError::DomainError(format!(
            "x = {x} must be positive for the fractional exponent {exponent}"
        ))),
    }
}

fn check_point(x: f64) -> Result<()> {
    if !(x.abs() < 1.0) {
        return Err(HypError::DomainError(format!("|x| < 1 required, got x = {x}")));
    }
    Ok(())
}

/// Evaluates x^λ Σ_{n≤N} cₙxⁿ in floating point.
pub fn series_eval<T: Scalar>(cs: &CoeffSeq<T>, x: f64) -> Result<f64> {
    check_point(x)?;
    let lambda = cs.lambda.to_f64();
    let prefactor = real_power(x, lambda)?;
    let poly = cs
        .coeffs
        .iter()
        .rev()
        .fold(0.0, |acc, c| acc * x + c.to_f64());
    Ok(prefactor * poly)
}

/// ODE residual together with the largest individual term that entered it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residual {
    pub value: f64,
    pub scale: f64,
}

impl Residual {
    /// |value|/scale, or |value| when every term vanished.
    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            self.value.abs() / self.scale
        } else {
            self.value.abs()
        }
    }
}

/// Plugs the truncated series into the ODE using term-wise derivatives of x^{λ+n}.
pub fn ode_residual<T: Scalar>(ode: &OdeSpec<T>, cs: &CoeffSeq<T>, x: f64) -> Result<Residual> {
    check_point(x)?;
    let ode = ode.map(Scalar::to_f64);
    let lambda = cs.lambda.to_f64();
    let integral_lambda = lambda.as_integer().is_some();
    if !integral_lambda && x <= 0.0 {
        return Err(HypError::DomainError(format!(
            "x = {x} must be positive for the fractional exponent {lambda}"
        )));
    }

    let mut terms: Vec<f64> = Vec::with_capacity(cs.coeffs.len() * 7);
    for (n, c) in cs.coeffs.iter().enumerate() {
        let c = c.to_f64();
        if c == 0.0 {
            continue;
        }
        let m = n as f64 + lambda;
        // c·m·(m−1)·x^{m−1}, c·m·x^{m−1}, ... ; skip a power whose factor is zero
        let pw = |shift: f64, factor: f64| -> Result<f64> {
            if factor == 0.0 {
                Ok(0.0)
            } else {
                Ok(factor * real_power(x, m + shift)?)
            }
        };
        let d2 = c * m * (m - 1.0);
        let d1 = c * m;
        terms.push(pw(-1.0, d2)?); // x·y″
        terms.push(pw(1.0, -d2)?); // −x³·y″
        terms.push(pw(-1.0, ode.p0 * d1)?);
        terms.push(pw(0.0, ode.p1 * d1)?);
        terms.push(pw(1.0, ode.p2 * d1)?);
        terms.push(pw(0.0, ode.q0 * c)?);
        terms.push(pw(1.0, ode.q1 * c)?);
    }
    let scale = terms.iter().fold(0.0f64, |acc, t| acc.max(t.abs()));
    let value = terms.iter().sum();
    Ok(Residual { value, scale })
}
