//! Point sets in `F_p^d`: spheres, products, Hamming varieties, Sidon sets,
//! cutoff cylinders, random sets, and their surface measures.

use std::fmt;

use bitvec::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Point, PointIndex, PrimeField, VectorSpace};
use crate::scalar::Real;
use crate::spectral::FFMeasure;

/// Largest set accepted by [`is_sidon`].
pub const SIDON_CHECK_CAP: usize = 10_000;

/// A subset of `F_p^d` stored as a membership bitmap.
#[derive(Clone, PartialEq, Eq)]
pub struct PointSet {
    space: VectorSpace,
    members: BitVec,
    cardinality: usize,
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PointSet")
            .field("space", &self.space.to_string())
            .field("cardinality", &self.cardinality)
            .finish()
    }
}

impl PointSet {
    pub fn empty(space: VectorSpace) -> Self {
        Self {
            space,
            members: bitvec![0; space.size()],
            cardinality: 0,
        }
    }

    pub fn full(space: VectorSpace) -> Self {
        Self {
            space,
            members: bitvec![1; space.size()],
            cardinality: space.size(),
        }
    }

    /// All points whose coordinates satisfy `keep`.
    pub fn from_predicate(space: VectorSpace, mut keep: impl FnMut(&[u32]) -> bool) -> Self {
        let mut members = bitvec![0; space.size()];
        let mut coords = vec![0u32; space.dimension()];
        let p = space.p();
        let mut count = 0;
        for i in 0..space.size() {
            if keep(&coords) {
                members.set(i, true);
                count += 1;
            }
            // little-endian odometer
            for c in coords.iter_mut() {
                *c += 1;
                if *c < p {
                    break;
                }
                *c = 0;
            }
        }
        Self {
            space,
            members,
            cardinality: count,
        }
    }

    pub fn from_indices(space: VectorSpace, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut set = Self::empty(space);
        for i in indices {
            set.insert(i)?;
        }
        Ok(set)
    }

    pub fn from_points(space: VectorSpace, points: &[Point]) -> Result<Self> {
        let mut set = Self::empty(space);
        for x in points {
            set.insert(space.encode(x)?.0)?;
        }
        Ok(set)
    }

    fn insert(&mut self, i: usize) -> Result<()> {
        if i >= self.space.size() {
            return Err(Error::IndexOutOfRange {
                index: i,
                size: self.space.size(),
            });
        }
        if !self.members[i] {
            self.members.set(i, true);
            self.cardinality += 1;
        }
        Ok(())
    }

    pub fn space(&self) -> &VectorSpace {
        &self.space
    }

    pub fn cardinality(&self) -> usize {
        self.cardinality
    }

    pub fn is_empty(&self) -> bool {
        self.cardinality == 0
    }

    pub fn contains_index(&self, i: usize) -> bool {
        i < self.members.len() && self.members[i]
    }

    pub fn contains(&self, x: &Point) -> bool {
        self.space
            .encode(x)
            .map(|i| self.members[i.0])
            .unwrap_or(false)
    }

    /// Member indices in ascending order.
    pub fn indices(&self) -> Vec<usize> {
        self.members.iter_ones().collect()
    }

    pub fn points(&self) -> Vec<Point> {
        self.members
            .iter_ones()
            .map(|i| self.space.decode(PointIndex(i)).expect("member index in range"))
            .collect()
    }

    /// `log|E| / log p`
    pub fn alpha(&self) -> f64 {
        (self.cardinality as f64).ln() / (self.space.p() as f64).ln()
    }
}

fn sum_of_squares(field: &PrimeField, coords: &[u32]) -> u32 {
    coords.iter().fold(0, |acc, &c| field.add(acc, field.mul(c, c)))
}

/// `{x ∈ F_p^k : x·x = r}`
pub fn sphere(space: VectorSpace, r: u32) -> Result<PointSet> {
    let field = space.field();
    field.require_odd()?;
    if space.dimension() < 2 {
        return Err(Error::InvalidParameter("sphere needs k ≥ 2".into()));
    }
    let r = r % field.modulus();
    Ok(PointSet::from_predicate(space, |x| sum_of_squares(&field, x) == r))
}

/// `A × B ⊆ F_p^{a+b}`; the coordinates of `A` come first.
pub fn product(a: &PointSet, b: &PointSet) -> Result<PointSet> {
    if a.space.field() != b.space.field() {
        return Err(Error::InvalidParameter("product of sets over different fields".into()));
    }
    let space = a.space.with_dimension(a.space.dimension() + b.space.dimension())?;
    let stride = a.space.size();
    let mut out = PointSet::empty(space);
    for j in b.members.iter_ones() {
        for i in a.members.iter_ones() {
            out.members.set(i + stride * j, true);
        }
    }
    out.cardinality = a.cardinality * b.cardinality;
    Ok(out)
}

/// `H_j = {x : ∏ x_k = j}`, `j ≠ 0`.
pub fn hamming_variety(space: VectorSpace, j: u32) -> Result<PointSet> {
    let field = space.field();
    let j = j % field.modulus();
    if j == 0 {
        return Err(Error::InvalidParameter("Hamming variety needs j ≠ 0".into()));
    }
    if space.dimension() < 2 {
        return Err(Error::InvalidParameter("Hamming variety needs d ≥ 2".into()));
    }
    Ok(PointSet::from_predicate(space, |x| {
        x.iter().fold(1, |acc, &c| field.mul(acc, c)) == j
    }))
}

/// The parabola `{(t, t²)}` in `F_p^2`.
pub fn sidon_parabola(space: VectorSpace) -> Result<PointSet> {
    let field = space.field();
    field.require_odd()?;
    if space.dimension() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: space.dimension(),
        });
    }
    let p = field.modulus() as usize;
    PointSet::from_indices(
        space,
        (0..field.modulus()).map(|t| t as usize + p * field.mul(t, t) as usize),
    )
}

/// Randomized greedy Sidon set: candidates are visited in a seeded shuffle
/// and kept when no new pairwise sum collides with an existing one.
pub fn sidon_greedy(space: VectorSpace, target_size: usize, seed: u64) -> Result<PointSet> {
    if target_size == 0 {
        return Err(Error::InvalidParameter("target size must be at least 1".into()));
    }
    let mut order: Vec<usize> = (0..space.size()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut sums = bitvec![0; space.size()];
    let mut chosen: Vec<usize> = Vec::new();
    let mut fresh = Vec::new();
    for &x in &order {
        if chosen.len() >= target_size {
            break;
        }
        fresh.clear();
        fresh.push(space.add_indices(x, x));
        fresh.extend(chosen.iter().map(|&a| space.add_indices(x, a)));
        let clash = fresh.iter().any(|&s| sums[s]) || {
            let mut sorted = fresh.clone();
            sorted.sort_unstable();
            sorted.windows(2).any(|w| w[0] == w[1])
        };
        if !clash {
            for &s in &fresh {
                sums.set(s, true);
            }
            chosen.push(x);
        }
    }
    PointSet::from_indices(space, chosen)
}

/// `a + b = c + d` forces `{a, b} = {c, d}` for all members.
pub fn is_sidon(set: &PointSet) -> Result<bool> {
    if set.cardinality > SIDON_CHECK_CAP {
        return Err(Error::SetTooLarge {
            size: set.cardinality,
            cap: SIDON_CHECK_CAP,
        });
    }
    let space = set.space;
    let members = set.indices();
    let mut seen = bitvec![0; space.size()];
    for (i, &a) in members.iter().enumerate() {
        for &b in &members[i..] {
            let s = space.add_indices(a, b);
            if seen[s] {
                return Ok(false);
            }
            seen.set(s, true);
        }
    }
    Ok(true)
}

/// `(F^n \ F^m) × S_1^k ⊆ F^{n+k+1}`, with `F^m` the first `m` coordinates
/// of `F^n` and the rest zero.
pub fn cutoff_cylinder(space: VectorSpace, n: usize, m: usize, k: usize) -> Result<PointSet> {
    if !(n > m && m >= 1) {
        return Err(Error::InvalidParameter(format!(
            "cutoff cylinder needs n > m ≥ 1, got n = {n}, m = {m}"
        )));
    }
    if k <= 2 * (n - m) {
        return Err(Error::InvalidParameter(format!(
            "cutoff cylinder needs k > 2(n − m), got k = {k}"
        )));
    }
    if space.dimension() != n + k + 1 {
        return Err(Error::DimensionMismatch {
            expected: n + k + 1,
            actual: space.dimension(),
        });
    }
    let field = space.field();
    field.require_odd()?;
    Ok(PointSet::from_predicate(space, |x| {
        x[m..n].iter().any(|&c| c != 0) && sum_of_squares(&field, &x[n..]) == 1
    }))
}

/// Appends a zero coordinate: `E ⊆ F^{d−1}` becomes a subset of `F^d`.
pub fn embed(set: &PointSet) -> Result<PointSet> {
    let space = set.space.with_dimension(set.space.dimension() + 1)?;
    let mut members = set.members.clone();
    members.resize(space.size(), false);
    Ok(PointSet {
        space,
        members,
        cardinality: set.cardinality,
    })
}

/// Independent Bernoulli(`density`) membership; resampled until nonempty.
pub fn random_set(space: VectorSpace, density: f64, seed: u64) -> Result<PointSet> {
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "density must lie in (0, 1], got {density}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let set = PointSet::from_predicate(space, |_| rng.gen::<f64>() < density);
        if !set.is_empty() {
            return Ok(set);
        }
    }
}

/// The uniform probability measure `E(x)/|E|`.
pub fn surface_measure<T: Real>(set: &PointSet) -> Result<FFMeasure<T>> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let w = T::one() / T::from_usize_lossy(set.cardinality);
    let weights = set
        .members
        .iter()
        .map(|b| if *b { w } else { T::zero() })
        .collect();
    FFMeasure::new(set.space, weights)
}

/// Set family plus parameters, independent of the field size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "kebab-case")]
pub enum SetDescriptor {
    /// `S_r^{k−1} ⊆ F^k`
    Sphere { k: usize, r: u32 },
    /// `(S_1^{k−1})^m ⊆ F^{km}`
    SphereProduct { k: usize, m: usize },
    /// `S_0^2 × S_1^2 ⊆ F^6`
    ZeroSphereProduct,
    Hamming { d: usize, j: u32 },
    SidonParabola,
    SidonGreedy { d: usize, target: usize, seed: u64 },
    /// The parabola of `F^2` embedded in `F^3`.
    EmbeddedSidon,
    CutoffCylinder { n: usize, m: usize, k: usize },
    FullSpace { d: usize },
    Random { d: usize, density: f64, seed: u64 },
    /// `{0}`
    Origin { d: usize },
}

impl SetDescriptor {
    pub fn family_name(&self) -> &'static str {
        match self {
            Self::Sphere { .. } => "sphere",
            Self::SphereProduct { .. } => "sphere-product",
            Self::ZeroSphereProduct => "zero-sphere-product",
            Self::Hamming { .. } => "hamming",
            Self::SidonParabola => "sidon-parabola",
            Self::SidonGreedy { .. } => "sidon-greedy",
            Self::EmbeddedSidon => "embedded-sidon",
            Self::CutoffCylinder { .. } => "cutoff-cylinder",
            Self::FullSpace { .. } => "full-space",
            Self::Random { .. } => "random",
            Self::Origin { .. } => "origin",
        }
    }

    /// Parameters as compact `key=value` pairs joined by `;`.
    pub fn params_string(&self) -> String {
        let value = serde_json::to_value(self).unwrap_or_default();
        match value.get("params").and_then(|v| v.as_object()) {
            Some(map) => map
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(";"),
            None => String::new(),
        }
    }

    pub fn dimension(&self) -> usize {
        match *self {
            Self::Sphere { k, .. } => k,
            Self::SphereProduct { k, m } => k * m,
            Self::ZeroSphereProduct => 6,
            Self::Hamming { d, .. } => d,
            Self::SidonParabola => 2,
            Self::SidonGreedy { d, .. } => d,
            Self::EmbeddedSidon => 3,
            Self::CutoffCylinder { n, k, .. } => n + k + 1,
            Self::FullSpace { d } | Self::Random { d, .. } | Self::Origin { d } => d,
        }
    }

    /// Greedy Sidon sets carry no optimality guarantee.
    pub fn is_heuristic(&self) -> bool {
        matches!(self, Self::SidonGreedy { .. } | Self::Random { .. })
    }

    /// Builds the instance over `F_p` with the default size cap.
    pub fn build(&self, p: u64) -> Result<PointSet> {
        self.build_with_cap(p, crate::field::DEFAULT_MAX_POINTS)
    }

    pub fn build_with_cap(&self, p: u64, cap: usize) -> Result<PointSet> {
        self.build_inner(p, cap).map_err(|e| Error::Family {
            family: self.family_name().to_string(),
            p: p as u32,
            source: Box::new(e),
        })
    }

    fn build_inner(&self, p: u64, cap: usize) -> Result<PointSet> {
        let field = PrimeField::new(p)?;
        let space = |d: usize| VectorSpace::with_cap(field, d, cap);
        match *self {
            Self::Sphere { k, r } => sphere(space(k)?, r),
            Self::SphereProduct { k, m } => {
                if m == 0 {
                    return Err(Error::InvalidParameter("m must be at least 1".into()));
                }
                // checks the final size before materializing anything
                space(k * m)?;
                let base = sphere(space(k)?, 1)?;
                let mut acc = base.clone();
                for _ in 1..m {
                    acc = product(&acc, &base)?;
                }
                Ok(acc)
            }
            Self::ZeroSphereProduct => {
                space(6)?;
                product(&sphere(space(3)?, 0)?, &sphere(space(3)?, 1)?)
            }
            Self::Hamming { d, j } => hamming_variety(space(d)?, j),
            Self::SidonParabola => sidon_parabola(space(2)?),
            Self::SidonGreedy { d, target, seed } => sidon_greedy(space(d)?, target, seed),
            Self::EmbeddedSidon => {
                space(3)?;
                embed(&sidon_parabola(space(2)?)?)
            }
            Self::CutoffCylinder { n, m, k } => cutoff_cylinder(space(n + k + 1)?, n, m, k),
            Self::FullSpace { d } => Ok(PointSet::full(space(d)?)),
            Self::Random { d, density, seed } => random_set(space(d)?, density, seed),
            Self::Origin { d } => {
                let s = space(d)?;
                PointSet::from_indices(s, [0])
            }
        }
    }
}

impl fmt::Display for SetDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params = self.params_string();
        if params.is_empty() {
            f.write_str(self.family_name())
        } else {
            write!(f, "{}[{}]", self.family_name(), params)
        }
    }
}
