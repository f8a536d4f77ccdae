//! `‖μ̂‖_p` profiles, empirical `(p, s)`-Salem exponents, and the closed-form
//! exponents known for each set family.
//!
//! A set `E` is `(p, s)`-Salem when its surface measure satisfies
//! `‖μ̂‖_p ≲ |E|^{−s}` with a constant independent of the field. At desk
//! scale the constant is unknown, so exponents are estimated as the slope of
//! `−log ‖μ̂‖_p` against `log |E|` across several primes.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::ensembles::{surface_measure, PointSet, SetDescriptor};
use crate::error::{Error, Result};
use crate::field::{Point, VectorSpace};
use crate::scalar::{ExactScalar, Exponent, Real};
use crate::spectral::{lp_average_norm, FFMeasure, GridFunction};
use crate::stats::linear_fit;

/// Fits need at least this many field sizes.
pub const MIN_FIELD_SIZES: usize = 4;

/// Default primes for sweeps, filtered by the size cap per dimension.
pub const DEFAULT_FIELD_SIZES: [u64; 7] = [5, 7, 11, 13, 17, 19, 23];

// ---------------------------------------------------------------------------
// Closed forms

fn require(cond: bool, what: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(what.into()))
    }
}

fn require_exponent_at_least<E: ExactScalar>(p: &Exponent<E>, min: i64) -> Result<()> {
    match p {
        Exponent::Finite(v) if *v < E::from_int(min) => Err(Error::ExponentTooSmall {
            min: min as f64,
            got: v.to_f64(),
        }),
        _ => Ok(()),
    }
}

fn min<E: ExactScalar>(a: E, b: E) -> E {
    if b < a {
        b
    } else {
        a
    }
}

fn int<E: ExactScalar>(n: usize) -> E {
    E::from_int(n as i64)
}

/// `1/p`, zero at `p = ∞`.
fn reciprocal<E: ExactScalar>(p: &Exponent<E>) -> E {
    match p {
        Exponent::Finite(v) => E::one() / v.clone(),
        Exponent::Infinity => E::zero(),
    }
}

/// Products of spheres `(S_1^{k−1})^m`:
/// `min{(2k(m−1) + p(k−1)) / (2mp(k−1)), 1/2}`.
pub fn predict_sphere_product<E: ExactScalar>(k: usize, m: usize, p_exp: &Exponent<E>) -> Result<E> {
    require(k >= 2 && m >= 1, format!("sphere product needs k ≥ 2, m ≥ 1 (k = {k}, m = {m})"))?;
    require_exponent_at_least(p_exp, 2)?;
    let (k, m) = (int::<E>(k), int::<E>(m));
    let half = E::ratio(1, 2);
    // (2k(m−1) + p(k−1)) / (2mp(k−1)) = k(m−1)/(mp(k−1)) + 1/(2m)
    let branch = k.clone() * (m.clone() - E::one()) * reciprocal(p_exp)
        / (m.clone() * (k - E::one()))
        + E::one() / (E::from_int(2) * m);
    Ok(min(branch, half))
}

/// Hamming varieties: `min{1/(d−1) + 1/p, 1/2}`.
pub fn predict_hamming<E: ExactScalar>(d: usize, p_exp: &Exponent<E>) -> Result<E> {
    require(d >= 2, format!("Hamming variety needs d ≥ 2 (d = {d})"))?;
    require_exponent_at_least(p_exp, 1)?;
    let branch = E::one() / int::<E>(d - 1) + reciprocal(p_exp);
    Ok(min(branch, E::ratio(1, 2)))
}

/// Cutoff cylinders `(F^n \ F^m) × S_1^k`:
/// `min{(n/p + k/2)/(n+k), (n − m + m/p + (k+1)/p)/(n+k)}`.
pub fn predict_cutoff_cylinder<E: ExactScalar>(
    n: usize,
    m: usize,
    k: usize,
    p_exp: &Exponent<E>,
) -> Result<E> {
    require(
        n > m && m >= 1 && k > 2 * (n - m),
        format!("cutoff cylinder needs n > m ≥ 1 and k > 2(n − m) (n = {n}, m = {m}, k = {k})"),
    )?;
    require_exponent_at_least(p_exp, 1)?;
    let inv = reciprocal(p_exp);
    let (nn, mm, kk) = (int::<E>(n), int::<E>(m), int::<E>(k));
    let total = nn.clone() + kk.clone();
    let first = (nn.clone() * inv.clone() + kk.clone() / E::from_int(2)) / total.clone();
    let second = (nn - mm.clone() + mm * inv.clone() + (kk + E::one()) * inv) / total;
    Ok(min(first, second))
}

/// `S_0^2 × S_1^2 ⊆ F^6`: `min{1/8 + 1/p, 3/(4p) + 1/4}`.
pub fn predict_zero_sphere_product<E: ExactScalar>(p_exp: &Exponent<E>) -> Result<E> {
    require_exponent_at_least(p_exp, 1)?;
    let inv = reciprocal(p_exp);
    let first = E::ratio(1, 8) + inv.clone();
    let second = E::ratio(3, 4) * inv + E::ratio(1, 4);
    Ok(min(first, second))
}

/// Sidon sets of size `≈ p^{d/2}` are `(p, 2/p)`-Salem for `p ≥ 4`; with the
/// `L^2` identity this gives `min{2/p, 1/2}` on `[2, ∞]`. The same expression
/// bounds the exponent of a Sidon set embedded one dimension up from above.
pub fn predict_sidon<E: ExactScalar>(p_exp: &Exponent<E>) -> Result<E> {
    require_exponent_at_least(p_exp, 2)?;
    Ok(min(E::from_int(2) * reciprocal(p_exp), E::ratio(1, 2)))
}

/// A family with a closed-form Salem exponent `s(p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum ClosedFormPrediction {
    SphereProduct { k: usize, m: usize },
    ZeroSphereProduct,
    CutoffCylinder { n: usize, m: usize, k: usize },
    Hamming { d: usize },
    /// Sidon set of size `≈ p^{d/2}` in `F^d`.
    Sidon { d: usize },
    /// Sidon set of size `≈ p^{(d−1)/2}` in `F^{d−1}`, embedded in `F^d`.
    EmbeddedSidon { d: usize },
}

impl ClosedFormPrediction {
    pub fn for_descriptor(desc: &SetDescriptor) -> Option<Self> {
        match *desc {
            SetDescriptor::Sphere { k, r } if r != 0 => Some(Self::SphereProduct { k, m: 1 }),
            SetDescriptor::SphereProduct { k, m } => Some(Self::SphereProduct { k, m }),
            SetDescriptor::ZeroSphereProduct => Some(Self::ZeroSphereProduct),
            SetDescriptor::CutoffCylinder { n, m, k } => Some(Self::CutoffCylinder { n, m, k }),
            SetDescriptor::Hamming { d, .. } => Some(Self::Hamming { d }),
            SetDescriptor::SidonParabola => Some(Self::Sidon { d: 2 }),
            SetDescriptor::EmbeddedSidon => Some(Self::EmbeddedSidon { d: 3 }),
            _ => None,
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            Self::SphereProduct { .. } => "sphere-product",
            Self::ZeroSphereProduct => "zero-sphere-product",
            Self::CutoffCylinder { .. } => "cutoff-cylinder",
            Self::Hamming { .. } => "hamming",
            Self::Sidon { .. } => "sidon",
            Self::EmbeddedSidon { .. } => "embedded-sidon",
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.s_at::<f64>(&Exponent::Infinity).map(|_| ())?;
        require(self.dimension() >= 1, "dimension must be positive")
    }

    /// Ambient dimension `d`.
    pub fn dimension(&self) -> usize {
        match *self {
            Self::SphereProduct { k, m } => k * m,
            Self::ZeroSphereProduct => 6,
            Self::CutoffCylinder { n, k, .. } => n + k + 1,
            Self::Hamming { d } | Self::Sidon { d } | Self::EmbeddedSidon { d } => d,
        }
    }

    /// Size exponent `α` with `|E| ≈ p^α`.
    pub fn alpha<E: ExactScalar>(&self) -> E {
        match *self {
            Self::SphereProduct { k, m } => int(m * (k - 1)),
            Self::ZeroSphereProduct => E::from_int(4),
            Self::CutoffCylinder { n, k, .. } => int(n + k),
            Self::Hamming { d } => int(d - 1),
            Self::Sidon { d } => E::ratio(d as i64, 2),
            Self::EmbeddedSidon { d } => E::ratio(d as i64 - 1, 2),
        }
    }

    /// Optimal `s` at averaging exponent `p`.
    pub fn s_at<E: ExactScalar>(&self, p_exp: &Exponent<E>) -> Result<E> {
        match *self {
            Self::SphereProduct { k, m } => predict_sphere_product(k, m, p_exp),
            Self::ZeroSphereProduct => predict_zero_sphere_product(p_exp),
            Self::CutoffCylinder { n, m, k } => predict_cutoff_cylinder(n, m, k, p_exp),
            Self::Hamming { d } => predict_hamming(d, p_exp),
            Self::Sidon { .. } | Self::EmbeddedSidon { .. } => predict_sidon(p_exp),
        }
    }

    /// Smallest `p` at which [`Self::s_at`] is defined.
    pub fn min_exponent(&self) -> i64 {
        match self {
            Self::SphereProduct { .. } | Self::Sidon { .. } | Self::EmbeddedSidon { .. } => 2,
            _ => 1,
        }
    }

    /// Phase transitions of the min-formula and admissibility boundaries
    /// `s(p) = d/(pα)`, where the optimal averaging exponent can sit.
    pub fn candidates<E: ExactScalar>(&self) -> Vec<E> {
        let r = |a: usize, b: usize| E::ratio(a as i64, b as i64);
        match *self {
            Self::SphereProduct { k, .. } => vec![r(2 * k, k - 1)],
            Self::ZeroSphereProduct => vec![E::from_int(2), E::from_int(4)],
            Self::CutoffCylinder { n, m, k } => {
                let num = 2 * (k + 1 + m - n);
                let den = k + 2 * m - 2 * n;
                vec![r(num, den), r(2 * (k + 1), k)]
            }
            Self::Hamming { d } => {
                let mut c = vec![r(2 * d, d - 1)];
                if d > 3 {
                    c.push(r(2 * (d - 1), d - 3));
                }
                c
            }
            Self::Sidon { .. } | Self::EmbeddedSidon { .. } => vec![E::from_int(4)],
        }
    }
}

// ---------------------------------------------------------------------------
// Profiles and fits

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileEntry<T> {
    pub p_exp: Exponent<T>,
    pub norm: T,
}

/// `‖μ̂‖_p` over a grid of exponents, from a single transform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralProfile<T> {
    pub descriptor: Option<SetDescriptor>,
    pub field_size: u32,
    pub dimension: usize,
    /// Support size of the measure, `|E|` for surface measures.
    pub set_size: usize,
    pub entries: Vec<ProfileEntry<T>>,
}

impl<T: Real> SpectralProfile<T> {
    pub fn norm_at(&self, p_exp: &Exponent<T>) -> Option<T> {
        self.entries
            .iter()
            .find(|e| &e.p_exp == p_exp)
            .map(|e| e.norm)
    }
}

/// Norms of `μ̂` for every exponent of `p_grid`.
pub fn profile<T: Real>(mu: &FFMeasure<T>, p_grid: &[Exponent<T>]) -> Result<SpectralProfile<T>> {
    let mhat = mu.transform();
    profile_transform(&mhat, mu.support().len(), p_grid)
}

/// [`profile`] from an already computed transform.
pub fn profile_transform<T: Real>(
    mhat: &GridFunction<T>,
    set_size: usize,
    p_grid: &[Exponent<T>],
) -> Result<SpectralProfile<T>> {
    let entries = p_grid
        .iter()
        .map(|p| {
            Ok(ProfileEntry {
                p_exp: p.clone(),
                norm: lp_average_norm(mhat, p)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(SpectralProfile {
        descriptor: None,
        field_size: mhat.space().p(),
        dimension: mhat.space().dimension(),
        set_size,
        entries,
    })
}

/// Builds the family at `p`, then profiles its surface measure.
pub fn profile_set<T: Real>(
    descriptor: &SetDescriptor,
    p: u64,
    p_grid: &[Exponent<T>],
    cap: usize,
) -> Result<SpectralProfile<T>> {
    let set = descriptor.build_with_cap(p, cap)?;
    let mu = surface_measure::<T>(&set)?;
    let mut prof = profile(&mu, p_grid)?;
    prof.descriptor = Some(descriptor.clone());
    Ok(prof)
}

/// One profile per field size, sorted by field size. Field sizes run one
/// after another; each transform parallelizes internally.
pub fn salem_sweep<T: Real>(
    descriptor: &SetDescriptor,
    p_grid: &[Exponent<T>],
    field_sizes: &[u64],
    cap: usize,
) -> Result<Vec<SpectralProfile<T>>> {
    let mut sizes = field_sizes.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    sizes
        .iter()
        .map(|&p| profile_set(descriptor, p, p_grid, cap))
        .collect()
}

/// Least-squares Salem exponent for one averaging exponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SalemFit {
    pub descriptor: Option<SetDescriptor>,
    pub p_exp: Exponent<f64>,
    pub fitted_s: f64,
    pub stderr: f64,
    pub intercept: f64,
    pub field_sizes: Vec<u32>,
    pub predicted_s: Option<f64>,
}

/// Fits `−log ‖μ̂‖_p ≈ c + s log |E|` across `profiles`.
pub fn fit_profiles<T: Real>(profiles: &[SpectralProfile<T>], p_exp: &Exponent<T>) -> Result<SalemFit> {
    if profiles.len() < MIN_FIELD_SIZES {
        return Err(Error::TooFewFieldSizes {
            required: MIN_FIELD_SIZES,
            got: profiles.len(),
        });
    }
    let mut sorted: Vec<&SpectralProfile<T>> = profiles.iter().collect();
    sorted.sort_by_key(|p| p.field_size);
    let mut xs = Vec::with_capacity(sorted.len());
    let mut ys = Vec::with_capacity(sorted.len());
    for prof in &sorted {
        let norm = prof
            .norm_at(p_exp)
            .ok_or_else(|| Error::InvalidParameter(format!("exponent {p_exp} not profiled")))?
            .to_f64()
            .unwrap_or(f64::NAN);
        // transforms of the full space are round-off, not decay
        if !(norm > T::unit_tolerance().to_f64().unwrap_or(0.0)) {
            return Err(Error::Degenerate(format!(
                "‖μ̂‖_{p_exp} vanishes at p = {}",
                prof.field_size
            )));
        }
        if prof.set_size < 2 {
            return Err(Error::Degenerate("set of size one".into()));
        }
        xs.push((prof.set_size as f64).ln());
        ys.push(-norm.ln());
    }
    let fit = linear_fit(&xs, &ys)?;
    let descriptor = sorted[0].descriptor.clone();
    let p64 = p_exp.map(|v| v.to_f64().unwrap_or(f64::NAN));
    let predicted_s = descriptor
        .as_ref()
        .and_then(ClosedFormPrediction::for_descriptor)
        .and_then(|c| c.s_at::<f64>(&p64).ok());
    Ok(SalemFit {
        descriptor,
        p_exp: p64,
        fitted_s: fit.slope,
        stderr: fit.slope_stderr,
        intercept: fit.intercept,
        field_sizes: sorted.iter().map(|p| p.field_size).collect(),
        predicted_s,
    })
}

/// Builds the family at every field size and fits the exponent at `p_exp`.
pub fn fit_salem_exponent<T: Real>(
    descriptor: &SetDescriptor,
    p_exp: &Exponent<T>,
    field_sizes: &[u64],
    cap: usize,
) -> Result<SalemFit> {
    let mut distinct = field_sizes.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < MIN_FIELD_SIZES {
        return Err(Error::TooFewFieldSizes {
            required: MIN_FIELD_SIZES,
            got: distinct.len(),
        });
    }
    let profiles = salem_sweep(descriptor, std::slice::from_ref(p_exp), &distinct, cap)?;
    fit_profiles(&profiles, p_exp)
}

// ---------------------------------------------------------------------------
// Hamming varieties

/// Value of `μ̂_j(m)` for the surface measure on `H_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct HammingTransformValue<T> {
    pub value: Complex<T>,
    /// Number of zero coordinates of `m`.
    pub zero_count: usize,
    /// `true` when `value` comes from the closed form (`zero_count ≥ 1`).
    pub closed_form: bool,
    /// Measured `C = |μ̂_j(m)| · p^{(d−1)/2}` when `zero_count = 0`.
    pub decay_constant: Option<T>,
}

/// `(1/|H_j|) Σ_{x ∈ H_j} χ(−m·x)`, enumerating `x_1..x_{d−1} ∈ F*` and
/// solving for `x_d`.
pub fn hamming_character_sum<T: Real>(space: &VectorSpace, j: u32, m: &Point) -> Result<Complex<T>> {
    let field = space.field();
    let p = field.modulus();
    let j = j % p;
    if j == 0 {
        return Err(Error::InvalidParameter("Hamming variety needs j ≠ 0".into()));
    }
    let d = space.dimension();
    if m.dimension() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: m.dimension(),
        });
    }
    let table = crate::field::CharacterTable::<T>::new(field);
    let mc = m.coords();
    let mut x = vec![1u32; d - 1];
    let mut re = Vec::new();
    let mut im = Vec::new();
    loop {
        let prod = x.iter().fold(1, |acc, &c| field.mul(acc, c));
        let last = field.mul(j, field.inv(prod)?);
        let mut t = field.mul(mc[d - 1], last);
        for (a, b) in mc.iter().zip(&x) {
            t = field.add(t, field.mul(*a, *b));
        }
        let v = table.chi(field.neg(t));
        re.push(v.re);
        im.push(v.im);
        // odometer over F*^{d−1}
        let mut i = 0;
        loop {
            if i == d - 1 {
                let count = T::from_usize_lossy(re.len());
                let s = Complex::new(
                    crate::spectral::compensated_sum(re.into_iter()),
                    crate::spectral::compensated_sum(im.into_iter()),
                );
                return Ok(s / count);
            }
            x[i] += 1;
            if x[i] < p {
                break;
            }
            x[i] = 1;
            i += 1;
        }
    }
}

/// `μ̂_j(m) = (−1)^{d−ℓ}(p−1)^{−(d−ℓ)}` when `m` has `ℓ ≥ 1` zero coordinates;
/// otherwise the direct character sum together with its decay constant.
pub fn hamming_exact_transform<T: Real>(
    space: &VectorSpace,
    j: u32,
    m: &Point,
) -> Result<HammingTransformValue<T>> {
    if j % space.p() == 0 {
        return Err(Error::InvalidParameter("Hamming variety needs j ≠ 0".into()));
    }
    let d = space.dimension();
    if m.dimension() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: m.dimension(),
        });
    }
    let zero_count = m.zero_count();
    if zero_count >= 1 {
        let e = (d - zero_count) as i32;
        let sign = if e % 2 == 0 { T::one() } else { -T::one() };
        let mag = T::from_usize_lossy(space.p() as usize - 1).powi(-e);
        return Ok(HammingTransformValue {
            value: Complex::new(sign * mag, T::zero()),
            zero_count,
            closed_form: true,
            decay_constant: None,
        });
    }
    let value = hamming_character_sum::<T>(space, j, m)?;
    let scale = T::from_usize_lossy(space.p() as usize).powf(T::lit((d as f64 - 1.0) / 2.0));
    Ok(HammingTransformValue {
        value,
        zero_count,
        closed_form: false,
        decay_constant: Some(value.norm() * scale),
    })
}

// ---------------------------------------------------------------------------
// Universal bounds

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniversalSalemReport<T> {
    pub p_exp: Exponent<T>,
    pub norm: T,
    /// `|E|^{−1/p}`
    pub bound: T,
    pub ratio: T,
    pub passed: bool,
}

/// Every set is `(p, 1/p)`-Salem for `p ∈ [2, ∞]`: checks
/// `‖μ̂‖_p ≤ |E|^{−1/p}` up to a relative `1e-9`.
pub fn check_universal_salem<T: Real>(set: &PointSet, p_exp: &Exponent<T>) -> Result<UniversalSalemReport<T>> {
    let mhat = surface_measure::<T>(set)?.transform();
    check_universal_salem_transform(&mhat, set.cardinality(), p_exp)
}

pub fn check_universal_salem_transform<T: Real>(
    mhat: &GridFunction<T>,
    set_size: usize,
    p_exp: &Exponent<T>,
) -> Result<UniversalSalemReport<T>> {
    p_exp.require_at_least(2.0)?;
    let norm = lp_average_norm(mhat, p_exp)?;
    let bound = match p_exp {
        Exponent::Infinity => T::one(),
        Exponent::Finite(p) => T::from_usize_lossy(set_size).powf(-T::one() / *p),
    };
    let ratio = norm / bound;
    Ok(UniversalSalemReport {
        p_exp: p_exp.clone(),
        norm,
        bound,
        ratio,
        passed: ratio <= T::one() + T::lit(1e-9),
    })
}

/// `s_∞ = −log ‖μ̂‖_∞ / log |E|` at a single field size.
pub fn measured_sup_exponent<T: Real>(mhat: &GridFunction<T>, set_size: usize) -> Result<T> {
    let sup = lp_average_norm(mhat, &Exponent::Infinity)?;
    if set_size < 2 {
        return Err(Error::Degenerate("set of size one".into()));
    }
    if sup == T::zero() {
        return Err(Error::Degenerate("‖μ̂‖_∞ vanishes".into()));
    }
    Ok(-sup.ln() / T::from_usize_lossy(set_size).ln())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterpolatedRow<T> {
    pub p_exp: Exponent<T>,
    pub norm: T,
    /// `|E|^{−(s_∞ + (1 − 2s_∞)/p)}`
    pub bound: T,
    /// `norm / bound`
    pub constant: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterpolatedSalemReport<T> {
    pub s_inf: T,
    pub rows: Vec<InterpolatedRow<T>>,
    pub max_constant: T,
}

/// Interpolation between `L^2` and `L^∞`: every set is
/// `(p, s_∞ + (1 − 2s_∞)/p)`-Salem. Reports the constant at each exponent.
pub fn check_interpolated_salem<T: Real>(
    set: &PointSet,
    s_inf: T,
    p_grid: &[Exponent<T>],
) -> Result<InterpolatedSalemReport<T>> {
    let mhat = surface_measure::<T>(set)?.transform();
    check_interpolated_salem_transform(&mhat, set.cardinality(), s_inf, p_grid)
}

pub fn check_interpolated_salem_transform<T: Real>(
    mhat: &GridFunction<T>,
    set_size: usize,
    s_inf: T,
    p_grid: &[Exponent<T>],
) -> Result<InterpolatedSalemReport<T>> {
    let size = T::from_usize_lossy(set_size);
    let two = T::lit(2.0);
    let mut rows = Vec::with_capacity(p_grid.len());
    for p in p_grid {
        p.require_at_least(2.0)?;
        let s = match p {
            Exponent::Infinity => s_inf,
            Exponent::Finite(p) => s_inf + (T::one() - two * s_inf) / *p,
        };
        let norm = lp_average_norm(mhat, p)?;
        let bound = size.powf(-s);
        rows.push(InterpolatedRow {
            p_exp: p.clone(),
            norm,
            bound,
            constant: norm / bound,
        });
    }
    let max_constant = rows.iter().map(|r| r.constant).fold(T::zero(), T::max);
    Ok(InterpolatedSalemReport {
        s_inf,
        rows,
        max_constant,
    })
}
