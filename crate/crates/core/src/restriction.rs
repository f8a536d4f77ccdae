//! Extension thresholds, the extension operator `f ↦ (fμ)^‸`, and empirical
//! lower bounds on its `L^2(μ) → L^q` operator norm.
//!
//! Thresholds are generic over [`ExactScalar`]: with `BigRational` every
//! formula is evaluated exactly.

use std::fmt;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensembles::{surface_measure, SetDescriptor};
use crate::error::{Error, Result};
use crate::salem::{ClosedFormPrediction, SalemFit, MIN_FIELD_SIZES};
use crate::scalar::{ExactScalar, Exponent, Real};
use crate::spectral::{
    fourier_forward, fourier_inverse, lq_mu_norm, lq_norm, lp_average_norm, multiply_density,
    FFMeasure, GridFunction,
};
use crate::stats::linear_fit;

// ---------------------------------------------------------------------------
// Thresholds

/// A threshold `q` or the flag that the estimate does not apply.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Threshold<E> {
    Admissible(E),
    Inadmissible,
}

impl<E> Threshold<E> {
    pub fn value(&self) -> Option<&E> {
        match self {
            Threshold::Admissible(q) => Some(q),
            Threshold::Inadmissible => None,
        }
    }

    pub fn is_admissible(&self) -> bool {
        matches!(self, Threshold::Admissible(_))
    }

    pub fn into_option(self) -> Option<E> {
        match self {
            Threshold::Admissible(q) => Some(q),
            Threshold::Inadmissible => None,
        }
    }
}

fn invalid(msg: String) -> Error {
    Error::InvalidParameter(msg)
}

fn check_open_unit<E: ExactScalar>(name: &str, v: &E, d: usize) -> Result<()> {
    if *v > E::zero() && *v < E::from_int(d as i64) {
        Ok(())
    } else {
        Err(invalid(format!("{name} = {v} must lie in (0, {d})")))
    }
}

fn check_exponent<E: ExactScalar>(p: &Exponent<E>) -> Result<()> {
    match p {
        Exponent::Finite(v) if *v < E::one() => Err(Error::ExponentTooSmall {
            min: 1.0,
            got: v.to_f64(),
        }),
        _ => Ok(()),
    }
}

fn dim<E: ExactScalar>(d: usize) -> E {
    E::from_int(d as i64)
}

/// `q ≥ 2 + 4(d − α)/β_∞`, the threshold from uniform Fourier decay.
pub fn mocktao_threshold<E: ExactScalar>(d: usize, alpha: &E, beta_inf: &E) -> Result<E> {
    check_open_unit("alpha", alpha, d)?;
    check_open_unit("beta", beta_inf, d)?;
    Ok(E::from_int(2) + E::from_int(4) * (dim::<E>(d) - alpha.clone()) / beta_inf.clone())
}

/// `q ≥ 2 + (4p − 4)(d − α)/(pβ_p − 2α)`, admissible when `β_p ≥ 2d/p`.
/// At `p = ∞` this is [`mocktao_threshold`].
pub fn main_threshold<E: ExactScalar>(
    d: usize,
    alpha: &E,
    p_exp: &Exponent<E>,
    beta_p: &E,
) -> Result<Threshold<E>> {
    check_open_unit("alpha", alpha, d)?;
    check_open_unit("beta", beta_p, d)?;
    check_exponent(p_exp)?;
    let p = match p_exp {
        Exponent::Infinity => return mocktao_threshold(d, alpha, beta_p).map(Threshold::Admissible),
        Exponent::Finite(p) => p.clone(),
    };
    if p.clone() * beta_p.clone() < E::from_int(2 * d as i64) {
        return Ok(Threshold::Inadmissible);
    }
    let four = E::from_int(4);
    let num = (four.clone() * p.clone() - four) * (dim::<E>(d) - alpha.clone());
    let den = p * beta_p.clone() - E::from_int(2) * alpha.clone();
    Ok(Threshold::Admissible(E::from_int(2) + num / den))
}

/// `q ≥ 2 + (2p − 2)(d − α)/(αps − α)`, admissible when `s ≥ d/(pα)`.
pub fn salem_threshold<E: ExactScalar>(
    d: usize,
    alpha: &E,
    p_exp: &Exponent<E>,
    s: &E,
) -> Result<Threshold<E>> {
    check_open_unit("alpha", alpha, d)?;
    check_exponent(p_exp)?;
    if !(*s > E::zero() && *s <= E::one()) {
        return Err(invalid(format!("s = {s} must lie in (0, 1]")));
    }
    let two = E::from_int(2);
    let gap = dim::<E>(d) - alpha.clone();
    match p_exp {
        Exponent::Infinity => Ok(Threshold::Admissible(
            two.clone() + two * gap / (alpha.clone() * s.clone()),
        )),
        Exponent::Finite(p) => {
            if s.clone() * p.clone() * alpha.clone() < dim::<E>(d) {
                return Ok(Threshold::Inadmissible);
            }
            let num = (two.clone() * p.clone() - two.clone()) * gap;
            let den = alpha.clone() * p.clone() * s.clone() - alpha.clone();
            Ok(Threshold::Admissible(two + num / den))
        }
    }
}

/// `s > s_∞ + (1 − s_∞)/p`: when averaging beats uniform decay.
pub fn improvement_condition<E: ExactScalar>(p_exp: &Exponent<E>, s: &E, s_inf: &E) -> Result<bool> {
    check_exponent(p_exp)?;
    for (name, v) in [("s", s), ("s_inf", s_inf)] {
        if *v < E::zero() || *v > E::one() {
            return Err(invalid(format!("{name} = {v} must lie in [0, 1]")));
        }
    }
    let rhs = match p_exp {
        Exponent::Infinity => s_inf.clone(),
        Exponent::Finite(p) => s_inf.clone() + (E::one() - s_inf.clone()) / p.clone(),
    };
    Ok(*s > rhs)
}

/// `λ`, `q(λ) = 2p/(1 − λ + λp)` and `q₀` of the interpolation argument.
#[derive(Debug, Clone, PartialEq)]
pub struct InterpolationParams<E> {
    pub lambda: E,
    pub q_of_lambda: E,
    pub q0: E,
}

pub fn interpolation_params<E: ExactScalar>(
    d: usize,
    alpha: &E,
    p_exp: &Exponent<E>,
    beta_p: &E,
) -> Result<InterpolationParams<E>> {
    let q0 = main_threshold(d, alpha, p_exp, beta_p)?
        .into_option()
        .ok_or_else(|| invalid(format!("beta = {beta_p} is below 2d/p at p = {p_exp}")))?;
    let two = E::from_int(2);
    let gap = dim::<E>(d) - alpha.clone();
    let half_beta = beta_p.clone() / two.clone();
    let (lambda, q_of_lambda) = match p_exp {
        Exponent::Infinity => {
            let lambda = half_beta.clone() / (half_beta + gap);
            let q = two / lambda.clone();
            (lambda, q)
        }
        Exponent::Finite(p) => {
            let head = half_beta - dim::<E>(d) / p.clone();
            let lambda = head.clone() / (head + gap);
            let q = two * p.clone() / (E::one() - lambda.clone() + lambda.clone() * p.clone());
            (lambda, q)
        }
    };
    Ok(InterpolationParams {
        lambda,
        q_of_lambda,
        q0,
    })
}

/// Number of log-spaced grid points searched by [`optimize_p`].
pub const OPTIMIZE_GRID_POINTS: usize = 512;
pub const OPTIMIZE_GRID_MAX: f64 = 256.0;

#[derive(Debug, Clone, PartialEq)]
pub struct OptimalExponent<E> {
    pub p: Exponent<E>,
    pub s: E,
    pub q: E,
}

/// `2 · 128^{i/511}` for `i < 512`, exact dyadic rationals.
pub fn log_grid<E: ExactScalar>() -> Vec<E> {
    let lo = 2f64;
    let ratio = (OPTIMIZE_GRID_MAX / lo).ln();
    (0..OPTIMIZE_GRID_POINTS)
        .map(|i| {
            let t = i as f64 / (OPTIMIZE_GRID_POINTS - 1) as f64;
            let v = if i + 1 == OPTIMIZE_GRID_POINTS {
                OPTIMIZE_GRID_MAX
            } else {
                lo * (ratio * t).exp()
            };
            E::from_f64(v).expect("grid values are finite")
        })
        .collect()
}

/// Minimizes [`salem_threshold`] over the given exponents; ties go to the
/// smaller `p` and `∞` is tried last.
pub fn optimize_over<E: ExactScalar>(
    d: usize,
    alpha: &E,
    points: &[Exponent<E>],
    s_of_p: impl Fn(&Exponent<E>) -> Result<E>,
) -> Result<OptimalExponent<E>> {
    let mut sorted: Vec<Exponent<E>> = points.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    sorted.dedup();
    let mut best: Option<OptimalExponent<E>> = None;
    for p in sorted {
        let s = s_of_p(&p)?;
        if s <= E::zero() {
            continue;
        }
        let s = if s > E::one() { E::one() } else { s };
        if let Threshold::Admissible(q) = salem_threshold(d, alpha, &p, &s)? {
            if best.as_ref().map_or(true, |b| q < b.q) {
                best = Some(OptimalExponent { p, s, q });
            }
        }
    }
    best.ok_or(Error::NoAdmissibleExponent)
}

/// [`optimize_over`] on the dense grid plus `candidates` plus `∞`, keeping
/// only exponents in `[2, ∞]`.
pub fn optimize_p_with<E: ExactScalar>(
    d: usize,
    alpha: &E,
    candidates: &[E],
    s_of_p: impl Fn(&Exponent<E>) -> Result<E>,
) -> Result<OptimalExponent<E>> {
    let two = E::from_int(2);
    let points: Vec<Exponent<E>> = log_grid::<E>()
        .into_iter()
        .chain(candidates.iter().cloned())
        .filter(|p| *p >= two)
        .map(Exponent::Finite)
        .chain([Exponent::Infinity])
        .collect();
    optimize_over(d, alpha, &points, s_of_p)
}

/// Optimal averaging exponent and threshold for a family with a closed form.
pub fn optimize_p<E: ExactScalar>(pred: &ClosedFormPrediction) -> Result<OptimalExponent<E>> {
    pred.validate()?;
    optimize_p_with(
        pred.dimension(),
        &pred.alpha::<E>(),
        &pred.candidates::<E>(),
        |p| pred.s_at(p),
    )
}

/// The same search over measured exponents: each fit contributes its
/// averaging exponent and fitted `s`, clamped to `[0, 1]`.
pub fn optimize_p_fits(fits: &[SalemFit], d: usize, alpha: f64) -> Result<OptimalExponent<f64>> {
    let points: Vec<Exponent<f64>> = fits
        .iter()
        .map(|f| f.p_exp.clone())
        .filter(|p| p.as_f64() >= 2.0)
        .collect();
    optimize_over(d, &alpha, &points, |p| {
        fits.iter()
            .find(|f| &f.p_exp == p)
            .map(|f| f.fitted_s.clamp(0.0, 1.0))
            .ok_or(Error::NoAdmissibleExponent)
    })
}

/// Everything the exponent calculator reports for one family.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdReport<E> {
    pub d: usize,
    pub alpha: E,
    pub optimal_p: Exponent<E>,
    /// `s` at `optimal_p`.
    pub s: E,
    /// `s` at `p = ∞`.
    pub s_inf: E,
    pub q_main: Threshold<E>,
    /// `None` when there is no Fourier decay (`s_∞ = 0`).
    pub q_mocktao: Option<E>,
    pub q_corollary: Threshold<E>,
    pub improvement: bool,
    pub lambda: E,
    pub q_of_lambda: E,
    /// Below `2d/α` a Dirac witness makes the extension norm grow.
    pub q_failure: E,
}

/// Report at a fixed `(p, s)`, with `β_p = 2αs`.
pub fn threshold_report_at<E: ExactScalar>(
    d: usize,
    alpha: &E,
    p_exp: &Exponent<E>,
    s: &E,
    s_inf: &E,
) -> Result<ThresholdReport<E>> {
    let two = E::from_int(2);
    let beta = two.clone() * alpha.clone() * s.clone();
    let q_corollary = salem_threshold(d, alpha, p_exp, s)?;
    let q_main = main_threshold(d, alpha, p_exp, &beta)?;
    let beta_inf = two.clone() * alpha.clone() * s_inf.clone();
    let q_mocktao = if *s_inf > E::zero() {
        Some(mocktao_threshold(d, alpha, &beta_inf)?)
    } else {
        None
    };
    let interp = interpolation_params(d, alpha, p_exp, &beta)?;
    Ok(ThresholdReport {
        d,
        alpha: alpha.clone(),
        optimal_p: p_exp.clone(),
        s: s.clone(),
        s_inf: s_inf.clone(),
        q_main,
        q_mocktao,
        q_corollary,
        improvement: improvement_condition(p_exp, s, s_inf)?,
        lambda: interp.lambda,
        q_of_lambda: interp.q_of_lambda,
        q_failure: two * dim::<E>(d) / alpha.clone(),
    })
}

/// Report at the optimal averaging exponent of a family.
pub fn threshold_report<E: ExactScalar>(pred: &ClosedFormPrediction) -> Result<ThresholdReport<E>> {
    let opt = optimize_p::<E>(pred)?;
    let s_inf = pred.s_at::<E>(&Exponent::Infinity)?;
    threshold_report_at(pred.dimension(), &pred.alpha::<E>(), &opt.p, &opt.s, &s_inf)
}

// ---------------------------------------------------------------------------
// Extension operator

/// `(fμ)^‸`
pub fn extension_apply<T: Real>(f: &GridFunction<T>, mu: &FFMeasure<T>) -> Result<GridFunction<T>> {
    Ok(fourier_forward(&multiply_density(f, mu)?))
}

/// `‖(fμ)^‸‖_{L^q} / ‖f‖_{L^{q0}(μ)}` with counting measure on frequencies.
pub fn witness_ratio<T: Real>(
    f: &GridFunction<T>,
    mu: &FFMeasure<T>,
    q: &Exponent<T>,
    q0: &Exponent<T>,
) -> Result<T> {
    let den = lq_mu_norm(f, mu, q0)?;
    if den == T::zero() {
        return Err(Error::Degenerate("witness vanishes on the support of μ".into()));
    }
    Ok(lq_norm(&extension_apply(f, mu)?, q)? / den)
}

/// `E(·) − δ₀` for `E = supp μ`.
pub fn set_minus_origin<T: Real>(mu: &FFMeasure<T>) -> GridFunction<T> {
    let mut values: Vec<Complex<T>> = mu
        .weights()
        .iter()
        .map(|&w| if w > T::zero() { Complex::new(T::one(), T::zero()) } else { Complex::new(T::zero(), T::zero()) })
        .collect();
    values[0] = values[0] - Complex::new(T::one(), T::zero());
    GridFunction::new(*mu.space(), values).expect("finite values on the measure's space")
}

/// Both sides of `‖(fμ)^‸‖_{L^p} ≥ |F|^{d/p} ‖μ̂‖_p` for `f = E(·) − δ₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConverseWitness<T> {
    pub extension_norm: T,
    pub scaled_average: T,
    pub origin_in_support: bool,
}

pub fn converse_witness<T: Real>(mu: &FFMeasure<T>, p_exp: &Exponent<T>) -> Result<ConverseWitness<T>> {
    let f = set_minus_origin(mu);
    let extension_norm = lq_norm(&extension_apply(&f, mu)?, p_exp)?;
    let mhat = mu.transform();
    let avg = lp_average_norm(&mhat, p_exp)?;
    let size = T::from_usize_lossy(mu.space().size());
    let scale = match p_exp {
        Exponent::Infinity => T::one(),
        Exponent::Finite(p) => size.powf(T::one() / *p),
    };
    Ok(ConverseWitness {
        extension_norm,
        scaled_average: scale * avg,
        origin_in_support: mu.weights()[0] > T::zero(),
    })
}

/// Identifies the start that produced an extension-norm lower bound.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WitnessTag {
    Constant,
    /// Dirac mass at a flat index.
    Dirac(usize),
    SetMinusOrigin,
    Random(u64),
    /// Caller-supplied start, by position.
    Supplied(usize),
}

impl fmt::Display for WitnessTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessTag::Constant => f.write_str("constant"),
            WitnessTag::Dirac(i) => write!(f, "dirac:{i}"),
            WitnessTag::SetMinusOrigin => f.write_str("set-minus-origin"),
            WitnessTag::Random(s) => write!(f, "random:{s}"),
            WitnessTag::Supplied(i) => write!(f, "supplied:{i}"),
        }
    }
}

impl std::str::FromStr for WitnessTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            what: "witness tag".into(),
            input: s.into(),
        };
        let (head, tail) = s.split_once(':').unwrap_or((s, ""));
        match (head, tail) {
            ("constant", "") => Ok(WitnessTag::Constant),
            ("set-minus-origin", "") => Ok(WitnessTag::SetMinusOrigin),
            ("dirac", n) => n.parse().map(WitnessTag::Dirac).map_err(|_| bad()),
            ("random", n) => n.parse().map(WitnessTag::Random).map_err(|_| bad()),
            ("supplied", n) => n.parse().map(WitnessTag::Supplied).map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtensionConfig {
    pub seeds: Vec<u64>,
    pub max_iter: usize,
    /// Relative change of the ratio below which an ascent stops.
    pub tol: f64,
    pub max_diracs: usize,
}

impl Default for ExtensionConfig {
    fn default() -> Self {
        Self {
            seeds: (0..8).collect(),
            max_iter: 500,
            tol: 1e-8,
            max_diracs: 16,
        }
    }
}

impl ExtensionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iter == 0 {
            return Err(invalid("max_iter must be positive".into()));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(invalid(format!("tol = {} must be positive", self.tol)));
        }
        Ok(())
    }
}

/// Best ratio found by the multistart ascent, with the function attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionNormEstimate<T> {
    pub q: T,
    /// `witness_ratio(witness, μ, q, 2)`, recomputed from `witness`.
    pub lower_bound: T,
    pub witness_tag: WitnessTag,
    pub witness: GridFunction<T>,
    pub iterations: usize,
    pub converged: bool,
    /// Largest drop of the ratio between consecutive iterates, over all starts.
    pub max_decrease: T,
}

struct Ascent<T> {
    tag: WitnessTag,
    f: GridFunction<T>,
    ratio: T,
    iterations: usize,
    converged: bool,
    max_decrease: T,
}

fn starts<T: Real>(mu: &FFMeasure<T>, config: &ExtensionConfig, extra: &[GridFunction<T>]) -> Vec<(WitnessTag, GridFunction<T>)> {
    let space = *mu.space();
    let support = mu.support();
    let one = Complex::new(T::one(), T::zero());
    let mut out = vec![(WitnessTag::Constant, GridFunction::constant(space, one))];
    let n = support.len().min(config.max_diracs);
    for i in 0..n {
        let at = support[i * support.len() / n];
        let mut values = vec![Complex::new(T::zero(), T::zero()); space.size()];
        values[at] = one;
        out.push((WitnessTag::Dirac(at), GridFunction::new(space, values).expect("finite")));
    }
    out.push((WitnessTag::SetMinusOrigin, set_minus_origin(mu)));
    for &seed in &config.seeds {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..space.size())
            .map(|_| {
                let re: f64 = rng.gen_range(-1.0..1.0);
                let im: f64 = rng.gen_range(-1.0..1.0);
                Complex::new(T::lit(re), T::lit(im))
            })
            .collect();
        out.push((WitnessTag::Random(seed), GridFunction::new(space, values).expect("finite")));
    }
    for (i, f) in extra.iter().enumerate() {
        out.push((WitnessTag::Supplied(i), f.clone()));
    }
    out
}

/// Zeroes `f` off the support and scales it to unit `L^2(μ)` norm.
fn normalize<T: Real>(f: GridFunction<T>, mu: &FFMeasure<T>) -> Option<GridFunction<T>> {
    let zero = Complex::new(T::zero(), T::zero());
    let values: Vec<Complex<T>> = f
        .values()
        .iter()
        .zip(mu.weights())
        .map(|(&v, &w)| if w > T::zero() { v } else { zero })
        .collect();
    let restricted = GridFunction::new(*mu.space(), values).ok()?;
    let n = lq_mu_norm(&restricted, mu, &Exponent::Finite(T::lit(2.0))).ok()?;
    (n > T::zero() && n.is_finite()).then(|| restricted.scale(Complex::new(T::one() / n, T::zero())))
}

fn ascend<T: Real>(
    mu: &FFMeasure<T>,
    q: T,
    config: &ExtensionConfig,
    tag: WitnessTag,
    start: GridFunction<T>,
) -> Result<Option<Ascent<T>>> {
    let q_exp = Exponent::Finite(q);
    let Some(mut f) = normalize(start, mu) else {
        return Ok(None);
    };
    let mut g = extension_apply(&f, mu)?;
    let mut ratio = lq_norm(&g, &q_exp)?;
    let tol = T::lit(config.tol);
    let mut max_decrease = T::zero();
    let mut iterations = 0;
    let mut converged = false;
    while iterations < config.max_iter {
        iterations += 1;
        // duality map |g|^{q−2} g, computed on g / sup|g| to stay in range
        let top = g.norm_sup();
        if top == T::zero() {
            break;
        }
        let qm2 = q - T::lit(2.0);
        let h = g.map(move |v| {
            let u = v / top;
            let m = u.norm();
            if m == T::zero() {
                u
            } else {
                u * m.powf(qm2)
            }
        });
        let Some(next) = normalize(fourier_inverse(&h), mu) else {
            break;
        };
        let next_g = extension_apply(&next, mu)?;
        let next_ratio = lq_norm(&next_g, &q_exp)?;
        max_decrease = max_decrease.max(ratio - next_ratio);
        let change = (next_ratio - ratio).abs();
        let improved = next_ratio >= ratio;
        if improved {
            f = next;
            g = next_g;
            ratio = next_ratio;
        }
        if change <= tol * ratio || !improved {
            converged = true;
            break;
        }
    }
    Ok(Some(Ascent {
        tag,
        f,
        ratio,
        iterations,
        converged,
        max_decrease,
    }))
}

/// Multistart nonlinear power iteration for `sup ‖(fμ)^‸‖_q / ‖f‖_{L^2(μ)}`.
/// The result is a lower bound attained by the stored witness.
pub fn extension_norm_lower_bound<T: Real>(
    mu: &FFMeasure<T>,
    q: T,
    config: &ExtensionConfig,
) -> Result<ExtensionNormEstimate<T>> {
    extension_norm_lower_bound_with(mu, q, config, &[])
}

/// [`extension_norm_lower_bound`] with additional caller-supplied starts.
pub fn extension_norm_lower_bound_with<T: Real>(
    mu: &FFMeasure<T>,
    q: T,
    config: &ExtensionConfig,
    extra: &[GridFunction<T>],
) -> Result<ExtensionNormEstimate<T>> {
    config.validate()?;
    if !(q >= T::lit(2.0)) || !q.is_finite() {
        return Err(Error::ExponentTooSmall {
            min: 2.0,
            got: q.to_f64().unwrap_or(f64::NAN),
        });
    }
    for f in extra {
        if f.space() != mu.space() {
            return Err(Error::SpaceMismatch);
        }
    }
    let runs: Vec<Option<Ascent<T>>> = starts(mu, config, extra)
        .into_par_iter()
        .map(|(tag, f)| ascend(mu, q, config, tag, f))
        .collect::<Result<_>>()?;
    let mut max_decrease = T::zero();
    let mut best: Option<Ascent<T>> = None;
    for run in runs.into_iter().flatten() {
        max_decrease = max_decrease.max(run.max_decrease);
        if best.as_ref().map_or(true, |b| run.ratio > b.ratio) {
            best = Some(run);
        }
    }
    let best = best.ok_or_else(|| Error::Degenerate("no start is nonzero on the support".into()))?;
    let lower_bound = witness_ratio(&best.f, mu, &Exponent::Finite(q), &Exponent::Finite(T::lit(2.0)))?;
    Ok(ExtensionNormEstimate {
        q,
        lower_bound,
        witness_tag: best.tag,
        witness: best.f,
        iterations: best.iterations,
        converged: best.converged,
        max_decrease,
    })
}

// ---------------------------------------------------------------------------
// Growth sweeps

/// Regime predicted by the thresholds for a family at a given `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `q` is at or above the proven threshold.
    Bounded,
    /// `q < 2d/α`, where Dirac witnesses grow.
    Growing,
    Untested,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Bounded => "bounded",
            Regime::Growing => "growing",
            Regime::Untested => "untested",
        })
    }
}

/// `|slope|` up to this counts as bounded.
pub const BOUNDED_SLOPE: f64 = 0.15;
/// Slopes from this on count as growing.
pub const GROWING_SLOPE: f64 = 0.1;

pub fn predicted_regime(pred: &ClosedFormPrediction, q: f64) -> Regime {
    let d = pred.dimension() as f64;
    let alpha = pred.alpha::<f64>();
    if q < 2.0 * d / alpha {
        return Regime::Growing;
    }
    match optimize_p::<f64>(pred) {
        Ok(opt) if q >= opt.q - 1e-12 => Regime::Bounded,
        _ => Regime::Untested,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub p: u32,
    pub d: usize,
    pub lower_bound: f64,
    pub witness_tag: WitnessTag,
    pub converged: bool,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthSweep {
    pub descriptor: SetDescriptor,
    pub q: f64,
    pub rows: Vec<GrowthRow>,
    /// Slope of `log lower_bound` against `log p`.
    pub fitted_growth_exponent: f64,
    pub stderr: f64,
    pub regime: Regime,
}

impl GrowthSweep {
    pub fn field_sizes(&self) -> Vec<u32> {
        self.rows.iter().map(|r| r.p).collect()
    }

    pub fn norms(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.lower_bound).collect()
    }
}

/// One estimate per field size, in parallel, then a log–log slope.
pub fn growth_sweep(
    descriptor: &SetDescriptor,
    q: f64,
    field_sizes: &[u64],
    config: &ExtensionConfig,
    cap: usize,
) -> Result<GrowthSweep> {
    let mut sizes = field_sizes.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.len() < MIN_FIELD_SIZES {
        return Err(Error::TooFewFieldSizes {
            required: MIN_FIELD_SIZES,
            got: sizes.len(),
        });
    }
    config.validate()?;
    let rows: Vec<GrowthRow> = sizes
        .par_iter()
        .map(|&p| {
            let set = descriptor.build_with_cap(p, cap)?;
            let mu = surface_measure::<f64>(&set)?;
            let est = extension_norm_lower_bound(&mu, q, config)?;
            Ok(GrowthRow {
                p: p as u32,
                d: set.space().dimension(),
                lower_bound: est.lower_bound,
                witness_tag: est.witness_tag,
                converged: est.converged,
                iterations: est.iterations,
            })
        })
        .collect::<Result<_>>()?;
    let xs: Vec<f64> = rows.iter().map(|r| (r.p as f64).ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.lower_bound.ln()).collect();
    let fit = linear_fit(&xs, &ys)?;
    let regime = ClosedFormPrediction::for_descriptor(descriptor)
        .map(|pred| predicted_regime(&pred, q))
        .unwrap_or(Regime::Untested);
    Ok(GrowthSweep {
        descriptor: descriptor.clone(),
        q,
        rows,
        fitted_growth_exponent: fit.slope,
        stderr: fit.slope_stderr,
        regime,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::hamming_variety;
    use crate::field::VectorSpace;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::ratio(n, d)
    }

    #[test]
    fn mocktao_examples() {
        assert_eq!(mocktao_threshold(5, &q(4, 1), &q(2, 1)).unwrap(), q(4, 1));
        assert_eq!(mocktao_threshold(4, &q(2, 1), &q(1, 1)).unwrap(), q(10, 1));
        assert!(mocktao_threshold(4, &q(4, 1), &q(1, 1)).is_err());
        assert!(mocktao_threshold(4, &q(2, 1), &q(0, 1)).is_err());
        let near = mocktao_threshold(4, &(q(4, 1) - q(1, 1_000_000)), &q(1, 1)).unwrap();
        assert!(near - q(2, 1) < q(1, 10_000));
    }

    #[test]
    fn main_threshold_examples() {
        let inf = Exponent::Infinity;
        assert_eq!(
            main_threshold(4, &q(2, 1), &inf, &q(1, 1)).unwrap(),
            Threshold::Admissible(q(10, 1))
        );
        assert_eq!(
            main_threshold(6, &q(4, 1), &Exponent::Finite(q(4, 1)), &q(3, 1)).unwrap(),
            Threshold::Admissible(q(8, 1))
        );
        assert_eq!(
            main_threshold(6, &q(4, 1), &Exponent::Finite(q(4, 1)), &q(29, 10)).unwrap(),
            Threshold::Inadmissible
        );
    }

    #[test]
    fn salem_threshold_examples() {
        // q = 2p for Sidon sets
        for p in [4, 5, 9, 20] {
            let s = q(2, p);
            assert_eq!(
                salem_threshold(2, &q(1, 1), &Exponent::Finite(q(p, 1)), &s).unwrap(),
                Threshold::Admissible(q(2 * p, 1))
            );
        }
        assert_eq!(
            salem_threshold(4, &q(3, 1), &Exponent::Finite(q(6, 1)), &q(1, 2)).unwrap(),
            Threshold::Admissible(q(11, 3))
        );
        // boundary s = d/(pα) is admissible
        let t = salem_threshold(4, &q(2, 1), &Exponent::Finite(q(4, 1)), &q(1, 2)).unwrap();
        assert!(t.is_admissible());
        let t = salem_threshold(4, &q(2, 1), &Exponent::Finite(q(4, 1)), &q(49, 100)).unwrap();
        assert!(!t.is_admissible());
        assert!(salem_threshold(4, &q(2, 1), &Exponent::Finite(q(4, 1)), &q(0, 1)).is_err());
    }

    #[test]
    fn improvement_examples() {
        for p in [2, 3, 10, 1000] {
            assert!(!improvement_condition(&Exponent::Finite(q(p, 1)), &q(1, 2), &q(1, 2)).unwrap());
        }
        let p6 = Exponent::Finite(q(6, 1));
        assert!(improvement_condition(&p6, &q(1, 2), &q(1, 4)).unwrap());
        assert!(improvement_condition(&p6, &q(1, 2), &q(1, 3)).unwrap());
        assert!(!improvement_condition(&p6, &q(3, 8), &q(1, 4)).unwrap());
    }

    #[test]
    fn interpolation_examples() {
        let p = Exponent::Finite(q(4, 1));
        let ip = interpolation_params(6, &q(4, 1), &p, &q(3, 1)).unwrap();
        assert_eq!(ip.lambda, q(0, 1));
        assert_eq!(ip.q_of_lambda, q(8, 1));
        assert_eq!(ip.q0, q(8, 1));
        // β = 2d/p gives λ = 0 and q = 2p
        let ip = interpolation_params(3, &q(2, 1), &Exponent::Finite(q(5, 1)), &q(6, 5)).unwrap();
        assert_eq!(ip.lambda, q(0, 1));
        assert_eq!(ip.q_of_lambda, q(10, 1));
        let ip = interpolation_params(4, &q(3, 1), &Exponent::Infinity, &q(2, 1)).unwrap();
        assert_eq!(ip.q_of_lambda, ip.q0);
        assert!(interpolation_params(6, &q(4, 1), &p, &q(1, 1)).is_err());
    }

    #[test]
    fn optimize_known_families() {
        let cases: [(ClosedFormPrediction, Exponent<Q>, Q); 5] = [
            (ClosedFormPrediction::SphereProduct { k: 2, m: 2 }, Exponent::Finite(q(4, 1)), q(8, 1)),
            (ClosedFormPrediction::ZeroSphereProduct, Exponent::Finite(q(4, 1)), q(8, 1)),
            (ClosedFormPrediction::CutoffCylinder { n: 2, m: 1, k: 3 }, Exponent::Finite(q(6, 1)), q(11, 3)),
            (ClosedFormPrediction::Hamming { d: 4 }, Exponent::Finite(q(6, 1)), q(11, 3)),
            (ClosedFormPrediction::Sidon { d: 2 }, Exponent::Finite(q(4, 1)), q(8, 1)),
        ];
        for (pred, p, qq) in cases {
            let opt = optimize_p::<Q>(&pred).unwrap();
            assert_eq!(opt.p, p, "{pred:?}");
            assert_eq!(opt.q, qq, "{pred:?}");
        }
        let opt = optimize_p::<Q>(&ClosedFormPrediction::SphereProduct { k: 3, m: 1 }).unwrap();
        assert_eq!(opt.p, Exponent::Infinity);
        assert_eq!(opt.q, q(4, 1));
        assert!(matches!(
            optimize_p::<Q>(&ClosedFormPrediction::EmbeddedSidon { d: 3 }),
            Err(Error::NoAdmissibleExponent)
        ));
    }

    #[test]
    fn extension_apply_examples() {
        let s = VectorSpace::of(5, 2).unwrap();
        let one = GridFunction::constant(s, Complex::new(1.0, 0.0));
        let g = extension_apply(&one, &FFMeasure::<f64>::uniform(s)).unwrap();
        assert!((g.values()[0] - Complex::new(1.0, 0.0)).norm() < 1e-12);
        assert!(g.values()[1..].iter().all(|v| v.norm() < 1e-12));

        let set = hamming_variety(s, 2).unwrap();
        let mu = surface_measure::<f64>(&set).unwrap();
        let x0 = set.indices()[3];
        let mut vals = vec![Complex::new(0.0, 0.0); s.size()];
        vals[x0] = Complex::new(1.0, 0.0);
        let g = extension_apply(&GridFunction::new(s, vals).unwrap(), &mu).unwrap();
        assert!(g.values().iter().all(|v| (v.norm() - 0.25).abs() < 1e-12));

        let g = extension_apply(&one, &mu).unwrap();
        assert!(g.max_abs_diff(&mu.transform()).unwrap() < 1e-12);
    }

    #[test]
    fn witness_examples() {
        let s = VectorSpace::of(7, 2).unwrap();
        let set = hamming_variety(s, 1).unwrap();
        let mu = surface_measure::<f64>(&set).unwrap();
        let x0 = set.indices()[0];
        let mut vals = vec![Complex::new(0.0, 0.0); s.size()];
        vals[x0] = Complex::new(1.0, 0.0);
        let dirac = GridFunction::new(s, vals).unwrap();
        let two = Exponent::Finite(2.0);
        let r = witness_ratio(&dirac, &mu, &Exponent::Finite(3.0), &two).unwrap();
        let expect = (6f64).powf(-0.5) * 49f64.powf(1.0 / 3.0);
        assert!((r - expect).abs() < 1e-12);

        let full = FFMeasure::<f64>::uniform(s);
        let one = GridFunction::constant(s, Complex::new(1.0, 0.0));
        assert!((witness_ratio(&one, &full, &two, &two).unwrap() - 1.0).abs() < 1e-12);
        assert!(witness_ratio(&GridFunction::zeros(s), &mu, &two, &two).is_err());

        for p_exp in [2.0, 4.0, 7.5] {
            let c = converse_witness(&mu, &Exponent::Finite(p_exp)).unwrap();
            assert!(!c.origin_in_support);
            assert!(c.extension_norm >= c.scaled_average);
        }
    }

    #[test]
    fn lower_bound_examples() {
        let s = VectorSpace::of(5, 2).unwrap();
        let cfg = ExtensionConfig::default();
        let est = extension_norm_lower_bound(&FFMeasure::<f64>::uniform(s), 2.0, &cfg).unwrap();
        assert!((est.lower_bound - 1.0).abs() < 1e-6);

        let dirac = FFMeasure::<f64>::dirac(s, &s.zero()).unwrap();
        for q in [2.0, 3.0, 6.0] {
            let est = extension_norm_lower_bound(&dirac, q, &cfg).unwrap();
            assert!((est.lower_bound - 25f64.powf(1.0 / q)).abs() < 1e-9);
        }

        let mu = surface_measure::<f64>(&hamming_variety(s, 1).unwrap()).unwrap();
        let mut prev = f64::INFINITY;
        for q in [2.0, 3.0, 4.0, 6.0, 10.0] {
            let est = extension_norm_lower_bound(&mu, q, &cfg).unwrap();
            let again = witness_ratio(&est.witness, &mu, &Exponent::Finite(q), &Exponent::Finite(2.0)).unwrap();
            assert_eq!(est.lower_bound, again);
            assert!(est.max_decrease <= cfg.tol * est.lower_bound);
            assert!(est.lower_bound <= prev + 1e-9);
            prev = est.lower_bound;
        }
        assert!(extension_norm_lower_bound(&mu, 1.5, &cfg).is_err());
    }

    #[test]
    fn regimes_for_hamming_plane() {
        let h = ClosedFormPrediction::Hamming { d: 2 };
        assert_eq!(predicted_regime(&h, 6.0), Regime::Bounded);
        assert_eq!(predicted_regime(&h, 3.0), Regime::Growing);
        assert_eq!(predicted_regime(&h, 5.0), Regime::Untested);
    }

    #[test]
    fn witness_tags_round_trip() {
        for tag in [
            WitnessTag::Constant,
            WitnessTag::Dirac(17),
            WitnessTag::SetMinusOrigin,
            WitnessTag::Random(3),
            WitnessTag::Supplied(0),
        ] {
            assert_eq!(tag.to_string().parse::<WitnessTag>().unwrap(), tag);
        }
        assert!("dirac:x".parse::<WitnessTag>().is_err());
    }
}
