//! Dense functions on `F_p^d`, probability measures, Fourier transforms,
//! convolution and the norms used throughout the crate.
//!
//! Conventions: `f̂(ξ) = Σ_x f(x) χ(−ξ·x)` and `f^∨(ξ) = Σ_x f(x) χ(ξ·x)`,
//! both unnormalized, so `(f̂)^∨ = p^d f`.

use num_complex::Complex;
use rayon::prelude::*;

use crate::dft::{DftPlan, Direction, Kernel};
use crate::error::{Error, Result};
use crate::field::{Point, PointIndex, VectorSpace};
use crate::scalar::{Exponent, Real};

/// A complex-valued function on `F_p^d`, stored densely in index order.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction<T> {
    space: VectorSpace,
    values: Vec<Complex<T>>,
}

impl<T: Real> GridFunction<T> {
    /// Rejects wrong lengths and non-finite entries.
    pub fn new(space: VectorSpace, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != space.size() {
            return Err(Error::LengthMismatch {
                expected: space.size(),
                actual: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { space, values })
    }

    pub fn zeros(space: VectorSpace) -> Self {
        Self {
            space,
            values: vec![Complex::new(T::zero(), T::zero()); space.size()],
        }
    }

    pub fn constant(space: VectorSpace, c: Complex<T>) -> Self {
        Self {
            space,
            values: vec![c; space.size()],
        }
    }

    /// Indicator of a single point.
    pub fn delta(space: VectorSpace, at: &Point) -> Result<Self> {
        let i = space.encode(at)?;
        let mut f = Self::zeros(space);
        f.values[i.0] = Complex::new(T::one(), T::zero());
        Ok(f)
    }

    pub fn from_fn(space: VectorSpace, mut f: impl FnMut(&Point) -> Complex<T>) -> Result<Self> {
        let values = space.points().map(|x| f(&x)).collect();
        Self::new(space, values)
    }

    pub fn from_real(space: VectorSpace, values: &[T]) -> Result<Self> {
        Self::new(
            space,
            values.iter().map(|&v| Complex::new(v, T::zero())).collect(),
        )
    }

    pub fn space(&self) -> &VectorSpace {
        &self.space
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex<T>> {
        self.values
    }

    pub fn at(&self, i: PointIndex) -> Complex<T> {
        self.values[i.0]
    }

    pub fn at_point(&self, x: &Point) -> Result<Complex<T>> {
        Ok(self.values[self.space.encode(x)?.0])
    }

    /// `‖f‖_1 = Σ |f(x)|`
    pub fn norm_l1(&self) -> T {
        self.values.iter().map(|v| v.norm()).sum()
    }

    pub fn norm_l2(&self) -> T {
        self.values.iter().map(|v| v.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn norm_sup(&self) -> T {
        self.values.iter().map(|v| v.norm()).fold(T::zero(), T::max)
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self {
            space: self.space,
            values: self.values.iter().map(|&v| v * c).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T> + Sync + Send) -> Self {
        Self {
            space: self.space,
            values: self.values.par_iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise combination of two functions on the same space.
    pub fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>,
    ) -> Result<Self> {
        same_space(&self.space, &other.space)?;
        Ok(Self {
            space: self.space,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// Largest pointwise distance to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        same_space(&self.space, &other.space)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max))
    }
}

fn same_space(a: &VectorSpace, b: &VectorSpace) -> Result<()> {
    if a != b {
        return Err(Error::SpaceMismatch);
    }
    Ok(())
}

/// A probability measure on `F_p^d`: nonnegative weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct FFMeasure<T> {
    space: VectorSpace,
    weights: Vec<T>,
}

impl<T: Real> FFMeasure<T> {
    pub fn new(space: VectorSpace, weights: Vec<T>) -> Result<Self> {
        if weights.len() != space.size() {
            return Err(Error::LengthMismatch {
                expected: space.size(),
                actual: weights.len(),
            });
        }
        if let Some(i) = weights.iter().position(|w| !w.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        if let Some(i) = weights.iter().position(|&w| w < T::zero()) {
            return Err(Error::InvalidMeasure(format!("negative weight at index {i}")));
        }
        let total = compensated_sum(weights.iter().copied());
        if (total - T::one()).abs() > T::unit_tolerance() {
            return Err(Error::InvalidMeasure(format!("weights sum to {total}")));
        }
        Ok(Self { space, weights })
    }

    /// The Dirac mass at `x`.
    pub fn dirac(space: VectorSpace, x: &Point) -> Result<Self> {
        let i = space.encode(x)?;
        let mut weights = vec![T::zero(); space.size()];
        weights[i.0] = T::one();
        Self::new(space, weights)
    }

    pub fn uniform(space: VectorSpace) -> Self {
        let w = T::one() / T::from_usize_lossy(space.size());
        Self {
            space,
            weights: vec![w; space.size()],
        }
    }

    pub fn space(&self) -> &VectorSpace {
        &self.space
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn weight(&self, i: PointIndex) -> T {
        self.weights[i.0]
    }

    /// Indices with positive weight, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > T::zero())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn max_weight(&self) -> T {
        self.weights.iter().copied().fold(T::zero(), T::max)
    }

    /// `Σ μ(x)²`
    pub fn energy(&self) -> T {
        compensated_sum(self.weights.iter().map(|&w| w * w))
    }

    pub fn to_grid_function(&self) -> GridFunction<T> {
        GridFunction {
            space: self.space,
            values: self
                .weights
                .iter()
                .map(|&w| Complex::new(w, T::zero()))
                .collect(),
        }
    }

    /// `μ̂`
    pub fn transform(&self) -> GridFunction<T> {
        fourier_forward(&self.to_grid_function())
    }
}

/// Neumaier-compensated sequential sum.
pub(crate) fn compensated_sum<T: Real>(iter: impl Iterator<Item = T>) -> T {
    let mut sum = T::zero();
    let mut comp = T::zero();
    for x in iter {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp = comp + ((sum - t) + x);
        } else {
            comp = comp + ((x - t) + sum);
        }
        sum = t;
    }
    sum + comp
}

fn compensated_complex_sum<T: Real>(iter: impl Iterator<Item = Complex<T>>) -> Complex<T> {
    let (re, im): (Vec<T>, Vec<T>) = iter.map(|z| (z.re, z.im)).unzip();
    Complex::new(
        compensated_sum(re.into_iter()),
        compensated_sum(im.into_iter()),
    )
}

/// Applies `plan` to a copy of `f`.
pub fn transform_with<T: Real>(
    plan: &DftPlan<T>,
    f: &GridFunction<T>,
    dir: Direction,
) -> Result<GridFunction<T>> {
    if plan.modulus() != f.space.p() as usize {
        return Err(Error::SpaceMismatch);
    }
    let mut values = f.values.clone();
    plan.transform(&mut values, f.space.dimension(), dir);
    Ok(GridFunction {
        space: f.space,
        values,
    })
}

fn plan_for<T: Real>(space: &VectorSpace, kernel: Kernel) -> DftPlan<T> {
    DftPlan::with_kernel(space.field(), kernel)
}

/// `f̂(ξ) = Σ_x f(x) χ(−ξ·x)`
pub fn fourier_forward<T: Real>(f: &GridFunction<T>) -> GridFunction<T> {
    transform_with(&plan_for(&f.space, Kernel::Auto), f, Direction::Forward)
        .expect("plan built for this space")
}

/// `f^∨(ξ) = Σ_x f(x) χ(ξ·x)`
pub fn fourier_inverse<T: Real>(f: &GridFunction<T>) -> GridFunction<T> {
    transform_with(&plan_for(&f.space, Kernel::Auto), f, Direction::Inverse)
        .expect("plan built for this space")
}

/// The defining double sum `Σ_x f(x) χ(∓ξ·x)`, O(p^{2d}). Reference only.
pub fn fourier_direct<T: Real>(f: &GridFunction<T>, dir: Direction) -> GridFunction<T> {
    let space = f.space;
    let table = crate::field::CharacterTable::<T>::new(space.field());
    let field = space.field();
    let d = space.dimension();
    let coords: Vec<Vec<u32>> = space.points().map(|x| x.coords().to_vec()).collect();
    let values = (0..space.size())
        .into_par_iter()
        .map(|xi| {
            compensated_complex_sum(coords.iter().enumerate().map(|(x, cx)| {
                let mut t = space.dot_coords(&coords[xi][..d], cx);
                if dir == Direction::Forward {
                    t = field.neg(t);
                }
                f.values[x] * table.chi(t)
            }))
        })
        .collect();
    GridFunction { space, values }
}

/// `(f * g)(x) = Σ_y f(y) g(x − y)`, evaluated from the definition.
pub fn convolve<T: Real>(f: &GridFunction<T>, g: &GridFunction<T>) -> Result<GridFunction<T>> {
    same_space(&f.space, &g.space)?;
    let space = f.space;
    let support: Vec<(usize, Complex<T>)> = f
        .values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.re != T::zero() || v.im != T::zero())
        .map(|(i, &v)| (i, v))
        .collect();
    let neg: Vec<usize> = support.iter().map(|&(y, _)| space.neg_index(y)).collect();
    let values = (0..space.size())
        .into_par_iter()
        .map(|x| {
            support
                .iter()
                .zip(&neg)
                .fold(Complex::new(T::zero(), T::zero()), |acc, (&(_, fy), &ny)| {
                    acc + fy * g.values[space.add_indices(x, ny)]
                })
        })
        .collect();
    Ok(GridFunction { space, values })
}

/// Convolution through the transform: `(f̂ ĝ)^∨ / p^d`.
pub fn convolve_spectral<T: Real>(
    f: &GridFunction<T>,
    g: &GridFunction<T>,
) -> Result<GridFunction<T>> {
    same_space(&f.space, &g.space)?;
    let plan = plan_for(&f.space, Kernel::Auto);
    let fh = transform_with(&plan, f, Direction::Forward)?;
    let gh = transform_with(&plan, g, Direction::Forward)?;
    let prod = fh.zip_with(&gh, |a, b| a * b)?;
    let n = T::from_usize_lossy(f.space.size());
    Ok(transform_with(&plan, &prod, Direction::Inverse)?.scale(Complex::new(T::one() / n, T::zero())))
}

/// Both sides of Parseval's identity:
/// `(Σ_ξ f̂(ξ) conj(ĝ(ξ)), p^d Σ_x f(x) conj(g(x)))`.
pub fn parseval<T: Real>(
    f: &GridFunction<T>,
    g: &GridFunction<T>,
) -> Result<(Complex<T>, Complex<T>)> {
    parseval_with(&plan_for(&f.space, Kernel::Auto), f, g)
}

/// [`parseval`] with an explicit plan.
pub fn parseval_with<T: Real>(
    plan: &DftPlan<T>,
    f: &GridFunction<T>,
    g: &GridFunction<T>,
) -> Result<(Complex<T>, Complex<T>)> {
    same_space(&f.space, &g.space)?;
    let fh = transform_with(plan, f, Direction::Forward)?;
    let gh = transform_with(plan, g, Direction::Forward)?;
    let lhs = compensated_complex_sum(fh.values.iter().zip(&gh.values).map(|(a, b)| a * b.conj()));
    let inner = compensated_complex_sum(f.values.iter().zip(&g.values).map(|(a, b)| a * b.conj()));
    let n = T::from_usize_lossy(f.space.size());
    Ok((lhs, inner * n))
}

/// Scaled power sum `(Σ |v|^q)^{1/q}` with the largest entry factored out.
fn scaled_power_sum<T: Real>(mags: impl Iterator<Item = T> + Clone, q: T) -> (T, T) {
    let top = mags.clone().fold(T::zero(), T::max);
    if top == T::zero() {
        return (T::zero(), T::zero());
    }
    (top, compensated_sum(mags.map(|m| (m / top).powf(q))))
}

/// `‖μ̂‖_p = (p^{−d} Σ_{ξ≠0} |μ̂(ξ)|^p)^{1/p}`, or `sup_{ξ≠0} |μ̂(ξ)|` at `p = ∞`.
///
/// The zero frequency is masked out, never subtracted.
pub fn lp_average_norm<T: Real>(mhat: &GridFunction<T>, p_exp: &Exponent<T>) -> Result<T> {
    p_exp.require_at_least(1.0)?;
    let nonzero = mhat.values.iter().skip(1).map(|v| v.norm());
    match p_exp {
        Exponent::Infinity => Ok(nonzero.fold(T::zero(), T::max)),
        Exponent::Finite(p) => {
            let (top, sum) = scaled_power_sum(nonzero, *p);
            if top == T::zero() {
                return Ok(T::zero());
            }
            let n = T::from_usize_lossy(mhat.space.size());
            Ok(top * (sum / n).powf(T::one() / *p))
        }
    }
}

/// `(fμ)(x) = f(x) μ(x)`
pub fn multiply_density<T: Real>(
    f: &GridFunction<T>,
    mu: &FFMeasure<T>,
) -> Result<GridFunction<T>> {
    same_space(&f.space, &mu.space)?;
    Ok(GridFunction {
        space: f.space,
        values: f
            .values
            .iter()
            .zip(&mu.weights)
            .map(|(&v, &w)| v * w)
            .collect(),
    })
}

/// Counting norm `(Σ_x |g(x)|^q)^{1/q}`.
pub fn lq_norm<T: Real>(g: &GridFunction<T>, q: &Exponent<T>) -> Result<T> {
    q.require_at_least(1.0)?;
    let mags = g.values.iter().map(|v| v.norm());
    match q {
        Exponent::Infinity => Ok(mags.fold(T::zero(), T::max)),
        Exponent::Finite(q) => {
            let (top, sum) = scaled_power_sum(mags, *q);
            if top == T::zero() {
                return Ok(T::zero());
            }
            Ok(top * sum.powf(T::one() / *q))
        }
    }
}

/// `(Σ_x |f(x)|^q μ(x))^{1/q}`; at `q = ∞` the sup over the support of `μ`.
pub fn lq_mu_norm<T: Real>(f: &GridFunction<T>, mu: &FFMeasure<T>, q: &Exponent<T>) -> Result<T> {
    same_space(&f.space, &mu.space)?;
    q.require_at_least(1.0)?;
    let supported = f
        .values
        .iter()
        .zip(&mu.weights)
        .filter(|(_, &w)| w > T::zero());
    match q {
        Exponent::Infinity => Ok(supported.map(|(v, _)| v.norm()).fold(T::zero(), T::max)),
        Exponent::Finite(q) => {
            let top = supported.clone().map(|(v, _)| v.norm()).fold(T::zero(), T::max);
            if top == T::zero() {
                return Ok(T::zero());
            }
            let sum = compensated_sum(supported.map(|(v, &w)| (v.norm() / top).powf(*q) * w));
            Ok(top * sum.powf(T::one() / *q))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(space: VectorSpace, seed: u64) -> GridFunction<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..space.size())
            .map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        GridFunction::new(space, values).unwrap()
    }

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    #[test]
    fn construction_checks() {
        let s = VectorSpace::of(3, 2).unwrap();
        assert!(GridFunction::<f64>::new(s, vec![c(0.0); 8]).is_err());
        let mut v = vec![c(0.0); 9];
        v[4] = Complex::new(f64::NAN, 0.0);
        assert_eq!(GridFunction::new(s, v), Err(Error::NonFinite(4)));
        assert!(FFMeasure::<f64>::new(s, vec![0.5; 9]).is_err());
        let mut w = vec![0.0; 9];
        w[0] = 1.5;
        w[1] = -0.5;
        assert!(FFMeasure::new(s, w).is_err());
    }

    #[test]
    fn transform_examples() {
        let s = VectorSpace::of(5, 2).unwrap();
        let delta = GridFunction::<f64>::delta(s, &s.zero()).unwrap();
        let dh = fourier_forward(&delta);
        assert!(dh.values().iter().all(|v| (v - c(1.0)).norm() < 1e-12));

        let one = GridFunction::constant(s, c(1.0));
        let oh = fourier_forward(&one);
        assert!((oh.values()[0] - c(25.0)).norm() < 1e-10);
        assert!(oh.values()[1..].iter().all(|v| v.norm() < 1e-10));

        let s3 = VectorSpace::of(3, 1).unwrap();
        let f = GridFunction::<f64>::delta(s3, &s3.point(&[1]).unwrap()).unwrap();
        let fh = fourier_forward(&f);
        let theta = -std::f64::consts::TAU / 3.0;
        assert!((fh.values()[1] - Complex::new(theta.cos(), theta.sin())).norm() < 1e-12);
    }

    #[test]
    fn row_column_matches_definition() {
        for (p, d) in [(2u64, 3usize), (3, 3), (5, 2), (7, 2), (11, 1)] {
            let s = VectorSpace::of(p, d).unwrap();
            let f = random(s, p * 10 + d as u64);
            let tol = 1e-9 * f.norm_l1();
            for dir in [Direction::Forward, Direction::Inverse] {
                let fast = transform_with(&DftPlan::new(s.field()), &f, dir).unwrap();
                let slow = fourier_direct(&f, dir);
                assert!(fast.max_abs_diff(&slow).unwrap() <= tol);
            }
        }
    }

    #[test]
    fn inversion_examples() {
        let s = VectorSpace::of(5, 2).unwrap();
        let f = random(s, 42);
        let back = fourier_inverse(&fourier_forward(&f)).scale(c(1.0 / 25.0));
        assert!(back.max_abs_diff(&f).unwrap() < 1e-10);

        let delta = GridFunction::<f64>::delta(s, &s.zero()).unwrap();
        let back = fourier_inverse(&fourier_forward(&delta));
        assert!(back.max_abs_diff(&delta.scale(c(25.0))).unwrap() < 1e-10);
    }

    #[test]
    fn even_real_functions_have_equal_transforms() {
        let s = VectorSpace::of(7, 2).unwrap();
        let base = random(s, 3);
        let even = GridFunction::from_fn(s, |x| {
            let i = s.encode(x).unwrap().0;
            c(base.values()[i].re + base.values()[s.neg_index(i)].re)
        })
        .unwrap();
        let a = fourier_forward(&even);
        let b = fourier_inverse(&even);
        assert!(a.max_abs_diff(&b).unwrap() < 1e-10);
    }

    #[test]
    fn convolution_examples() {
        let s = VectorSpace::of(5, 2).unwrap();
        let a = s.point(&[1, 3]).unwrap();
        let b = s.point(&[4, 4]).unwrap();
        let da = GridFunction::<f64>::delta(s, &a).unwrap();
        let db = GridFunction::<f64>::delta(s, &b).unwrap();
        let sum = s.point(&[5, 7]).unwrap();
        let expect = GridFunction::delta(s, &sum).unwrap();
        assert!(convolve(&da, &db).unwrap().max_abs_diff(&expect).unwrap() < 1e-15);

        let f = random(s, 5);
        let d0 = GridFunction::delta(s, &s.zero()).unwrap();
        assert!(convolve(&f, &d0).unwrap().max_abs_diff(&f).unwrap() < 1e-15);

        let other = VectorSpace::of(7, 2).unwrap();
        assert_eq!(
            convolve(&f, &GridFunction::zeros(other)),
            Err(Error::SpaceMismatch)
        );
    }

    #[test]
    fn convolution_law_on_f7() {
        let s = VectorSpace::of(7, 1).unwrap();
        let (f, g) = (random(s, 1), random(s, 2));
        let lhs = fourier_forward(&convolve(&f, &g).unwrap());
        let rhs = fourier_forward(&f).zip_with(&fourier_forward(&g), |a, b| a * b).unwrap();
        assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-10);
        let spectral = convolve_spectral(&f, &g).unwrap();
        assert!(spectral.max_abs_diff(&convolve(&f, &g).unwrap()).unwrap() < 1e-12);
    }

    #[test]
    fn parseval_examples() {
        let s = VectorSpace::of(11, 2).unwrap();
        let d0 = GridFunction::<f64>::delta(s, &s.zero()).unwrap();
        let (l, r) = parseval(&d0, &d0).unwrap();
        assert!((l - c(121.0)).norm() < 1e-10 && (r - c(121.0)).norm() < 1e-10);

        let x = GridFunction::delta(s, &s.point(&[1, 0]).unwrap()).unwrap();
        let (_, r) = parseval(&d0, &x).unwrap();
        assert_eq!(r, c(0.0));

        let (f, g) = (random(s, 7), random(s, 8));
        let (l, r) = parseval(&f, &g).unwrap();
        assert!((l - r).norm() <= 1e-9 * 121.0 * f.norm_l2() * g.norm_l2());
    }

    #[test]
    fn lp_average_norm_examples() {
        let s = VectorSpace::of(5, 2).unwrap();
        let uniform = FFMeasure::<f64>::uniform(s).transform();
        for p in [1.0, 2.0, 7.5] {
            assert!(lp_average_norm(&uniform, &Exponent::Finite(p)).unwrap() < 1e-12);
        }
        let dirac = FFMeasure::<f64>::dirac(s, &s.zero()).unwrap().transform();
        for p in [1.0, 2.0, 3.0, 10.0] {
            let got = lp_average_norm(&dirac, &Exponent::Finite(p)).unwrap();
            assert!((got - (24.0f64 / 25.0).powf(1.0 / p)).abs() < 1e-12);
        }
        assert!((lp_average_norm(&dirac, &Exponent::Infinity).unwrap() - 1.0).abs() < 1e-12);
        assert!(lp_average_norm(&dirac, &Exponent::Finite(0.5)).is_err());
    }

    #[test]
    fn multiply_density_examples() {
        let s = VectorSpace::of(3, 2).unwrap();
        let mut w = vec![0.0; 9];
        w[1] = 0.5;
        w[5] = 0.5;
        let mu = FFMeasure::new(s, w).unwrap();
        let one = GridFunction::constant(s, c(1.0));
        assert_eq!(multiply_density(&one, &mu).unwrap(), mu.to_grid_function());
        let zero = GridFunction::zeros(s);
        assert_eq!(multiply_density(&zero, &mu).unwrap(), zero);
        let x0 = s.decode(PointIndex(5)).unwrap();
        let dx = GridFunction::delta(s, &x0).unwrap();
        assert_eq!(multiply_density(&dx, &mu).unwrap(), dx.scale(c(0.5)));
    }

    #[test]
    fn lq_norm_examples() {
        let s = VectorSpace::of(7, 2).unwrap();
        let d0 = GridFunction::<f64>::delta(s, &s.zero()).unwrap();
        let one = GridFunction::constant(s, c(1.0));
        for q in [1.0, 2.0, 3.5] {
            assert!((lq_norm(&d0, &Exponent::Finite(q)).unwrap() - 1.0).abs() < 1e-15);
            let expect = 49f64.powf(1.0 / q);
            assert!((lq_norm(&one, &Exponent::Finite(q)).unwrap() - expect).abs() < 1e-12);
        }
        assert_eq!(lq_norm(&d0, &Exponent::Infinity).unwrap(), 1.0);
        let mu = FFMeasure::uniform(s);
        assert!((lq_mu_norm(&one, &mu, &Exponent::Finite(2.0)).unwrap() - 1.0).abs() < 1e-12);
        assert!(lq_norm(&one, &Exponent::Finite(0.9)).is_err());
    }

    #[test]
    fn measures_obey_the_sup_bound() {
        let s = VectorSpace::of(7, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let raw: Vec<f64> = (0..s.size()).map(|_| rng.gen::<f64>()).collect();
        let total: f64 = raw.iter().sum();
        let mu = FFMeasure::new(s, raw.iter().map(|w| w / total).collect()).unwrap();
        let mh = mu.transform();
        assert!((mh.values()[0] - c(1.0)).norm() < 1e-12);
        assert!(mh.values().iter().all(|v| v.norm() <= 1.0 + 1e-12));
    }
}
