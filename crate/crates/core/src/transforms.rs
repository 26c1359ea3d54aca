//! The quadratic transformation of Gauss and its two contiguous companions:
//!
//! ```text
//! (1+x)^{−2a} ₂F₁(a, b; 2b;   z) = ₂F₁(a, a−b+½; b+½; x²)
//! (1+x)^{−2a} ₂F₁(a, b; 2b+1; z) = ₂F₁(a, a−b+½; b+½; x²) − 2ax/(2b+1)·₂F₁(a+1, a−b+½; b+3/2; x²)
//! (1+x)^{−2a} ₂F₁(a, b; 2b−1; z) = ₂F₁(a, a−b+3/2; b−½; x²) + 2ax/(2b−1)·₂F₁(a+1, a−b+3/2; b+½; x²)
//! ```
//!
//! with z = 4x/(1+x)², valid for |x| < 1 and |z| < 1.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{HypError, Result};
use crate::frobenius::{closed_form_coeffs, series_eval, Branch, ClosedFormCase};
use crate::scalar::Scalar;
use crate::series::{hyp2f1, SeriesControl};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TransformCase {
    /// c = 2b
    #[serde(rename = "gauss")]
    Gauss,
    /// c = 2b + 1
    #[serde(rename = "plus1")]
    PlusOne,
    /// c = 2b − 1
    #[serde(rename = "minus1")]
    MinusOne,
}

impl TransformCase {
    pub const ALL: [TransformCase; 3] = [TransformCase::Gauss, TransformCase::PlusOne, TransformCase::MinusOne];

    /// Offset of c from 2b.
    pub fn shift(self) -> i64 {
        match self {
            TransformCase::Gauss => 0,
            TransformCase::PlusOne => 1,
            TransformCase::MinusOne => -1,
        }
    }

    /// Lower parameter c of the left-hand ₂F₁.
    pub fn lhs_c<T: Scalar>(self, b: &T) -> T {
        T::from_i64(2) * b.clone() + T::from_i64(self.shift())
    }

    pub fn name(self) -> &'static str {
        match self {
            TransformCase::Gauss => "gauss",
            TransformCase::PlusOne => "plus1",
            TransformCase::MinusOne => "minus1",
        }
    }

    /// Every denominator parameter on either side of the identity.
    fn lower_params(self, b: f64) -> Vec<f64> {
        let c = self.lhs_c(&b);
        match self {
            TransformCase::Gauss => vec![c, b + 0.5],
            TransformCase::PlusOne => vec![c, b + 0.5, b + 1.5],
            TransformCase::MinusOne => vec![c, b - 0.5, b + 0.5],
        }
    }

    /// Distance of the closest denominator parameter to the set {0, −1, −2, …}.
    pub fn pole_distance(self, b: f64) -> f64 {
        self.lower_params(b)
            .into_iter()
            .map(distance_to_nonpositive_integers)
            .fold(f64::INFINITY, f64::min)
    }
}

impl fmt::Display for TransformCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TransformCase {
    type Err = HypError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gauss" => Ok(TransformCase::Gauss),
            "plus1" | "plus_one" | "plus-one" => Ok(TransformCase::PlusOne),
            "minus1" | "minus_one" | "minus-one" => Ok(TransformCase::MinusOne),
            _ => Err(HypError::Parse(format!(
                "unknown case {s:?} (expected gauss, plus1 or minus1)"
            ))),
        }
    }
}

fn distance_to_nonpositive_integers(v: f64) -> f64 {
    if v >= 0.0 {
        v
    } else {
        (v - v.round()).abs()
    }
}

/// z = 4x/(1+x)².
pub fn map_x_to_z<T: Scalar>(x: &T) -> Result<T> {
    let s = T::one() + x.clone();
    if s.is_zero() {
        return Err(HypError::DomainError("x = -1 is a pole of 4x/(1+x)^2".into()));
    }
    Ok(T::from_i64(4) * x.clone() / (s.clone() * s))
}

/// The root x of z = 4x/(1+x)² with |x| < 1, for z < 1.
pub fn map_z_to_x(z: f64) -> Result<f64> {
    if !(z < 1.0) {
        return Err(HypError::DomainError(format!("z < 1 required, got z = {z}")));
    }
    let s = (1.0 - z).sqrt();
    // z/(1+s)² is the same root without cancellation near z = 0
    Ok(z / ((1.0 + s) * (1.0 + s)))
}

/// Checks |x| < 1 and |4x/(1+x)²| < 1, returning z.
pub fn check_domain(x: f64) -> Result<f64> {
    if !(x.abs() < 1.0) {
        return Err(HypError::DomainError(format!("|x| < 1 violated: x = {x}")));
    }
    let z = map_x_to_z(&x)?;
    if !(z.abs() < 1.0) {
        return Err(HypError::DomainError(format!(
            "|4x/(1+x)^2| < 1 violated: x = {x} gives {z}"
        )));
    }
    Ok(z)
}

/// (1+x)^{−2a}·₂F₁(a, b; c; 4x/(1+x)²) with c chosen by `case`.
pub fn lhs_eval(case: TransformCase, a: f64, b: f64, x: f64, ctl: &SeriesControl) -> Result<f64> {
    let z = check_domain(x)?;
    let c = case.lhs_c(&b);
    let f = hyp2f1(a, b, c, z, ctl)?;
    let prefactor = (-2.0 * a * x.ln_1p()).exp();
    Ok(prefactor * f)
}

/// Right-hand side: ₂F₁ series in x² (plus the odd correction for the contiguous cases).
pub fn rhs_eval(case: TransformCase, a: f64, b: f64, x: f64, ctl: &SeriesControl) -> Result<f64> {
    if !(x.abs() < 1.0) {
        return Err(HypError::DomainError(format!("|x| < 1 violated: x = {x}")));
    }
    let v = x * x;
    match case {
        TransformCase::Gauss => hyp2f1(a, a - b + 0.5, b + 0.5, v, ctl),
        TransformCase::PlusOne => {
            let even = hyp2f1(a, a - b + 0.5, b + 0.5, v, ctl)?;
            let odd = hyp2f1(a + 1.0, a - b + 0.5, b + 1.5, v, ctl)?;
            Ok(even - 2.0 * a * x / (2.0 * b + 1.0) * odd)
        }
        TransformCase::MinusOne => {
            let even = hyp2f1(a, a - b + 1.5, b - 0.5, v, ctl)?;
            let odd = hyp2f1(a + 1.0, a - b + 1.5, b + 0.5, v, ctl)?;
            Ok(even + 2.0 * a * x / (2.0 * b - 1.0) * odd)
        }
    }
}

/// The even and odd parts E(x²), O(x²) with rhs = E + x·O.
pub fn rhs_parts(case: TransformCase, a: f64, b: f64, x: f64, ctl: &SeriesControl) -> Result<(f64, f64)> {
    let v = x * x;
    match case {
        TransformCase::Gauss => Ok((hyp2f1(a, a - b + 0.5, b + 0.5, v, ctl)?, 0.0)),
        TransformCase::PlusOne => Ok((
            hyp2f1(a, a - b + 0.5, b + 0.5, v, ctl)?,
            -2.0 * a / (2.0 * b + 1.0) * hyp2f1(a + 1.0, a - b + 0.5, b + 1.5, v, ctl)?,
        )),
        TransformCase::MinusOne => Ok((
            hyp2f1(a, a - b + 1.5, b - 0.5, v, ctl)?,
            2.0 * a / (2.0 * b - 1.0) * hyp2f1(a + 1.0, a - b + 1.5, b + 0.5, v, ctl)?,
        )),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridPoint {
    pub a: f64,
    pub b: f64,
    pub x: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    pub a: f64,
    pub b: f64,
    pub x: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub pass: bool,
}

/// A grid point that could not be evaluated.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Skipped {
    pub point: GridPoint,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub case: TransformCase,
    pub tol: f64,
    pub seed: Option<u64>,
    pub samples: Vec<Sample>,
    pub n_pass: usize,
    pub n_fail: usize,
    #[serde(skip)]
    pub skipped: Vec<Skipped>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.n_fail == 0
    }

    pub fn max_rel_err(&self) -> f64 {
        self.samples.iter().map(|s| s.rel_err).fold(0.0, f64::max)
    }

    /// max |lhs − rhs| / max(1, |rhs|)
    pub fn max_scaled_err(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.abs_err / s.rhs.abs().max(1.0))
            .fold(0.0, f64::max)
    }
}

fn evaluate_point(case: TransformCase, p: GridPoint, tol: f64, ctl: &SeriesControl) -> Result<Sample> {
    if case.lhs_c(&p.b).is_nonpositive_integer() {
        return Err(HypError::InvalidParams(format!(
            "c = {} is zero or a negative integer",
            case.lhs_c(&p.b)
        )));
    }
    let lhs = lhs_eval(case, p.a, p.b, p.x, ctl)?;
    let rhs = rhs_eval(case, p.a, p.b, p.x, ctl)?;
    let abs_err = (lhs - rhs).abs();
    let rel_err = if rhs != 0.0 { abs_err / rhs.abs() } else { abs_err };
    let pass = if rhs.abs() < tol {
        abs_err <= tol
    } else {
        rel_err <= tol
    };
    Ok(Sample {
        a: p.a,
        b: p.b,
        x: p.x,
        lhs,
        rhs,
        abs_err,
        rel_err,
        pass,
    })
}

/// Evaluates both sides at every grid point. Points that violate a bound or
/// sit on a pole are recorded in `skipped`; samples keep grid order.
pub fn check_identity(case: TransformCase, grid: &[GridPoint], tol: f64, ctl: &SeriesControl) -> IdentityReport {
    let outcomes: Vec<_> = grid
        .par_iter()
        .map(|p| evaluate_point(case, *p, tol, ctl))
        .collect();

    let mut samples = Vec::with_capacity(grid.len());
    let mut skipped = Vec::new();
    for (point, outcome) in grid.iter().zip(outcomes) {
        match outcome {
            Ok(s) => samples.push(s),
            Err(e) => skipped.push(Skipped {
                point: *point,
                reason: e.to_string(),
            }),
        }
    }
    let n_pass = samples.iter().filter(|s| s.pass).count();
    IdentityReport {
        case,
        tol,
        seed: None,
        n_fail: samples.len() - n_pass,
        n_pass,
        samples,
        skipped,
    }
}

/// Ranges for random grids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub param_range: (f64, f64),
    pub x_max: f64,
    pub pole_margin: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            param_range: (-3.0, 3.0),
            x_max: 0.6,
            pole_margin: 1e-2,
        }
    }
}

/// Draws `n` seeded points with a, b uniform in `param_range` and x uniform in
/// [−x_max, x_max], redrawing any point that violates a domain bound or lies
/// within `pole_margin` of a denominator pole.
pub fn random_grid(case: TransformCase, n: usize, seed: u64, spec: &GridSpec) -> Vec<GridPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = spec.param_range;
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let a = rng.gen_range(lo..hi);
        let b = rng.gen_range(lo..hi);
        let x = rng.gen_range(-spec.x_max..=spec.x_max);
        if check_domain(x).is_err() || case.pole_distance(b) < spec.pole_margin {
            continue;
        }
        out.push(GridPoint { a, b, x });
    }
    out
}

/// Least-squares weights A, B in lhs(x) ≈ A·y₁(x) + B·y₂(x).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConnectionConstants {
    #[serde(rename = "A")]
    pub coef_a: f64,
    #[serde(rename = "B")]
    pub coef_b: f64,
    /// Euclidean norm of the fit residual.
    pub residual: f64,
    /// Condition number of the column-scaled basis matrix.
    pub condition: f64,
}

/// Condition numbers above this are reported as [`HypError::IllConditioned`].
pub const MAX_CONDITION: f64 = 1e8;

/// Fits lhs_eval = A·y₁ + B·y₂ over `sample_xs`, where y₁ and y₂ are the
/// analytic and singular Frobenius solutions with c₀ = 1, summed to
/// `ctl.max_terms` coefficients.
pub fn fit_connection_constants(
    case: TransformCase,
    a: f64,
    b: f64,
    sample_xs: &[f64],
    ctl: &SeriesControl,
) -> Result<ConnectionConstants> {
    if sample_xs.len() < 2 {
        return Err(HypError::InvalidParams("at least two sample points are needed".into()));
    }
    if let Some(x) = sample_xs.iter().find(|x| !(**x > 0.0 && **x < 1.0)) {
        return Err(HypError::DomainError(format!("sample points must lie in (0, 1), got {x}")));
    }
    // p₀ = c for every case, so the second exponent is 1 − c
    let lambda2 = 1.0 - case.lhs_c(&b);
    if let Some(k) = lambda2.as_integer() {
        return Err(HypError::ResonantExponent(format!(
            "indicial roots 0 and {k} differ by an integer"
        )));
    }

    let n = ctl.max_terms;
    let y1 = closed_form_coeffs(ClosedFormCase::new(case, Branch::Analytic), &a, &b, n)?;
    let y2 = closed_form_coeffs(ClosedFormCase::new(case, Branch::Singular), &a, &b, n)?;

    let m = sample_xs.len();
    let mut basis = DMatrix::<f64>::zeros(m, 2);
    let mut target = DVector::<f64>::zeros(m);
    for (i, &x) in sample_xs.iter().enumerate() {
        basis[(i, 0)] = series_eval(&y1, x)?;
        basis[(i, 1)] = series_eval(&y2, x)?;
        target[i] = lhs_eval(case, a, b, x, ctl)?;
    }

    let norms = [basis.column(0).norm(), basis.column(1).norm()];
    if norms.iter().any(|n| !(*n > 0.0) || !n.is_finite()) {
        return Err(HypError::IllConditioned { condition: f64::INFINITY });
    }
    let mut scaled = basis.clone();
    for (j, norm) in norms.iter().enumerate() {
        scaled.column_mut(j).scale_mut(1.0 / norm);
    }
    let svd = scaled.svd(true, true);
    let (smax, smin) = (svd.singular_values.max(), svd.singular_values.min());
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(condition <= MAX_CONDITION) {
        return Err(HypError::IllConditioned { condition });
    }
    let sol = svd
        .solve(&target, 0.0)
        .map_err(|_| HypError::IllConditioned { condition })?;
    let coef_a = sol[0] / norms[0];
    let coef_b = sol[1] / norms[1];
    let residual = (&basis * DVector::from_vec(vec![coef_a, coef_b]) - &target).norm();
    Ok(ConnectionConstants {
        coef_a,
        coef_b,
        residual,
        condition,
    })
}

/// Seeded parameter draws for which both Frobenius solutions are well separated.
pub fn random_fit_params(case: TransformCase, n: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let a = rng.gen_range(-2.0..2.0);
        let b = rng.gen_range(-1.5..2.5);
        let lambda2 = 1.0 - case.lhs_c(&b);
        let frac = (lambda2 - lambda2.round()).abs();
        if frac < 0.1 || lambda2.abs() > 4.0 {
            continue;
        }
        // lower Pochhammer parameters of both closed-form families stay off the poles
        let lowers = [b + 0.5, b - 0.5, b + 1.5, 0.5 - b, 1.5 - b, 2.5 - b];
        if lowers.iter().any(|v| distance_to_nonpositive_integers(*v) < 0.05) {
            continue;
        }
        out.push((a, b));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn argument_maps() {
        assert_eq!(map_x_to_z(&0.0).unwrap(), 0.0);
        assert_eq!(map_x_to_z(&1.0).unwrap(), 1.0);
        assert_eq!(map_x_to_z(&Rational::ratio(1, 3)).unwrap(), Rational::ratio(3, 4));
        assert!(map_x_to_z(&-1.0).is_err());

        assert_eq!(map_z_to_x(0.0).unwrap(), 0.0);
        assert!((map_z_to_x(0.75).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((map_z_to_x(-8.0).unwrap() + 0.5).abs() < 1e-15);
        assert!(map_z_to_x(1.0).is_err());
        assert!(map_z_to_x(1.5).is_err());
    }

    #[test]
    fn domain_bounds() {
        assert!(check_domain(0.5).is_ok());
        assert!(check_domain(-0.1).is_ok());
        assert!(check_domain(-0.2).is_err()); // z = -0.8/0.64 = -1.25
        assert!(check_domain(1.0).is_err());
    }

    #[test]
    fn x_zero_gives_one() {
        let ctl = SeriesControl::default();
        for case in TransformCase::ALL {
            assert_eq!(lhs_eval(case, 0.7, 1.3, 0.0, &ctl).unwrap(), 1.0);
            assert_eq!(rhs_eval(case, 0.7, 1.3, 0.0, &ctl).unwrap(), 1.0);
        }
    }

    #[test]
    fn gauss_example() {
        let ctl = SeriesControl::default();
        let l = lhs_eval(TransformCase::Gauss, 0.5, 1.0, 0.2, &ctl).unwrap();
        let r = rhs_eval(TransformCase::Gauss, 0.5, 1.0, 0.2, &ctl).unwrap();
        assert!((l - r).abs() < 1e-10);
    }

    #[test]
    fn plus_one_elementary() {
        let ctl = SeriesControl::default();
        for x in [-0.15, 0.1, 0.3, 0.5] {
            let r = rhs_eval(TransformCase::PlusOne, 1.0, 0.5, x, &ctl).unwrap();
            assert!((r - 1.0 / (1.0 + x)).abs() < 1e-13);
            let l = lhs_eval(TransformCase::PlusOne, 1.0, 0.5, x, &ctl).unwrap();
            assert!((l - r).abs() < 1e-12);
        }
    }

    #[test]
    fn plus_one_against_long_sum() {
        // brute force: 10^4 terms of the z-series, no stopping rule
        let (a, b, x) = (1.0f64, 1.0f64, 0.1f64);
        let z = 4.0 * x / ((1.0 + x) * (1.0 + x));
        let c = 2.0 * b + 1.0;
        let (mut term, mut sum) = (1.0f64, 1.0f64);
        for n in 0..10_000 {
            let k = n as f64;
            term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
            sum += term;
        }
        let brute = (1.0 + x).powf(-2.0 * a) * sum;
        let l = lhs_eval(TransformCase::PlusOne, a, b, x, &SeriesControl::default()).unwrap();
        assert!((l - brute).abs() < 1e-14);
    }

    #[test]
    fn minus_one_with_zero_a() {
        let r = rhs_eval(TransformCase::MinusOne, 0.0, 1.0, 0.5, &SeriesControl::default()).unwrap();
        assert_eq!(r, 1.0);
    }

    #[test]
    fn check_identity_records_skips() {
        let grid = [
            GridPoint { a: 0.3, b: 0.7, x: 0.0 },
            GridPoint { a: 0.3, b: 0.7, x: -0.5 },
            GridPoint { a: 0.3, b: -1.0, x: 0.2 },
        ];
        let rep = check_identity(TransformCase::PlusOne, &grid, 1e-10, &SeriesControl::default());
        assert_eq!(rep.samples.len(), 1);
        assert_eq!(rep.samples[0].abs_err, 0.0);
        assert_eq!(rep.skipped.len(), 2);
        assert_eq!(rep.n_pass + rep.n_fail, rep.samples.len());
    }

    #[test]
    fn grid_respects_bounds() {
        for case in TransformCase::ALL {
            let g = random_grid(case, 50, 3, &GridSpec::default());
            assert_eq!(g.len(), 50);
            assert!(g.iter().all(|p| check_domain(p.x).is_ok() && case.pole_distance(p.b) >= 1e-2));
            assert_eq!(g, random_grid(case, 50, 3, &GridSpec::default()));
        }
    }

    #[test]
    fn fit_examples() {
        let xs = [0.1, 0.2, 0.3, 0.4];
        let ctl = SeriesControl::default();
        for (case, a, b) in [
            (TransformCase::PlusOne, 1.0, 0.75),
            (TransformCase::Gauss, 0.5, 0.25),
            (TransformCase::MinusOne, 1.0, 1.25),
        ] {
            let k = fit_connection_constants(case, a, b, &xs, &ctl).unwrap();
            assert!((k.coef_a - 1.0).abs() <= 1e-8, "{case}: {k:?}");
            assert!(k.coef_b.abs() <= 1e-8, "{case}: {k:?}");
        }
    }

    #[test]
    fn fit_rejects_degenerate_input() {
        let ctl = SeriesControl::default();
        assert!(fit_connection_constants(TransformCase::Gauss, 0.5, 0.25, &[0.2], &ctl).is_err());
        assert!(fit_connection_constants(TransformCase::Gauss, 0.5, 0.25, &[0.2, -0.1], &ctl).is_err());
        assert!(matches!(
            fit_connection_constants(TransformCase::MinusOne, 0.5, 1.0, &[0.1, 0.2], &ctl),
            Err(HypError::ResonantExponent(_))
        ));
        // λ₂ = -2e-10: the two columns coincide numerically
        let r = fit_connection_constants(TransformCase::PlusOne, 0.5, 1e-10, &[0.1, 0.2, 0.3], &ctl);
        assert!(matches!(r, Err(HypError::IllConditioned { .. })), "{r:?}");
    }

    #[test]
    fn case_parsing() {
        assert_eq!("gauss".parse::<TransformCase>().unwrap(), TransformCase::Gauss);
        assert_eq!("plus1".parse::<TransformCase>().unwrap(), TransformCase::PlusOne);
        assert_eq!("MINUS1".parse::<TransformCase>().unwrap(), TransformCase::MinusOne);
        assert!("plus2".parse::<TransformCase>().is_err());
    }
}
