//! Prime fields, the vector spaces `F_p^d`, their canonical flat indexing and
//! the additive character `χ(t) = exp(2πi t / p)`.

use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest supported modulus (exclusive).
pub const MAX_MODULUS: u64 = 1 << 31;

/// Default cap on `p^d`.
pub const DEFAULT_MAX_POINTS: usize = 1 << 24;

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut k = 3u64;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 2;
    }
    true
}

/// The prime field `F_p`, `p < 2^31`. Residues are `u32` values in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    modulus: u32,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= MAX_MODULUS || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { modulus: p as u32 })
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Fails for `p = 2`.
    pub fn require_odd(&self) -> Result<()> {
        if self.modulus == 2 {
            Err(Error::EvenCharacteristic)
        } else {
            Ok(())
        }
    }

    #[inline]
    pub fn reduce(&self, a: i64) -> u32 {
        a.rem_euclid(self.modulus as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (s % self.modulus as u64) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.modulus as u64) as u32
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let m = self.modulus as u64;
        let mut base = a as u64 % m;
        let mut acc = 1 % m;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            e >>= 1;
        }
        acc as u32
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a % self.modulus == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, self.modulus as u64 - 2))
    }

    /// Smallest generator of the multiplicative group.
    pub fn primitive_root(&self) -> u32 {
        let p = self.modulus;
        if p == 2 {
            return 1;
        }
        let order = (p - 1) as u64;
        let mut factors = Vec::new();
        let mut n = order;
        let mut k = 2u64;
        while k * k <= n {
            if n % k == 0 {
                factors.push(k);
                while n % k == 0 {
                    n /= k;
                }
            }
            k += 1;
        }
        if n > 1 {
            factors.push(n);
        }
        (2..p)
            .find(|&g| factors.iter().all(|&q| self.pow(g, order / q) != 1))
            .expect("every prime field has a primitive root")
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.modulus)
    }
}

/// Flat index of a point: `Σ coords[i] · p^i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PointIndex(pub usize);

/// A point of `F_p^d` with every coordinate reduced into `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point(Vec<u32>);

impl Point {
    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    /// Number of zero coordinates.
    pub fn zero_count(&self) -> usize {
        self.0.iter().filter(|&&c| c == 0).count()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// The space `F_p^d` together with its size cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VectorSpace {
    field: PrimeField,
    dimension: usize,
    size: usize,
    max_points: usize,
}

impl VectorSpace {
    pub fn new(field: PrimeField, dimension: usize) -> Result<Self> {
        Self::with_cap(field, dimension, DEFAULT_MAX_POINTS)
    }

    pub fn with_cap(field: PrimeField, dimension: usize, max_points: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::ZeroDimension);
        }
        let p = field.modulus();
        let too_large = || Error::SpaceTooLarge {
            p,
            d: dimension,
            cap: max_points,
        };
        let mut size = 1usize;
        for _ in 0..dimension {
            size = size.checked_mul(p as usize).ok_or_else(too_large)?;
            if size > max_points {
                return Err(too_large());
            }
        }
        Ok(Self {
            field,
            dimension,
            size,
            max_points,
        })
    }

    /// Shorthand for `VectorSpace::new(PrimeField::new(p)?, d)`.
    pub fn of(p: u64, d: usize) -> Result<Self> {
        Self::new(PrimeField::new(p)?, d)
    }

    /// Same field and cap, different dimension.
    pub fn with_dimension(&self, dimension: usize) -> Result<Self> {
        Self::with_cap(self.field, dimension, self.max_points)
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.field.modulus()
    }

    #[inline]
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Number of points, `p^d`.
    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn max_points(&self) -> usize {
        self.max_points
    }

    /// Builds a point, reducing each coordinate mod p.
    pub fn point(&self, coords: &[i64]) -> Result<Point> {
        self.check_dim(coords.len())?;
        Ok(Point(coords.iter().map(|&c| self.field.reduce(c)).collect()))
    }

    pub fn zero(&self) -> Point {
        Point(vec![0; self.dimension])
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                actual: len,
            });
        }
        Ok(())
    }

    pub fn encode(&self, x: &Point) -> Result<PointIndex> {
        self.check_dim(x.dimension())?;
        let p = self.p() as usize;
        let mut idx = 0usize;
        for &c in x.coords().iter().rev() {
            idx = idx * p + c as usize;
        }
        Ok(PointIndex(idx))
    }

    pub fn decode(&self, i: PointIndex) -> Result<Point> {
        if i.0 >= self.size {
            return Err(Error::IndexOutOfRange {
                index: i.0,
                size: self.size,
            });
        }
        let mut coords = vec![0; self.dimension];
        self.decode_into(i.0, &mut coords);
        Ok(Point(coords))
    }

    /// Writes the coordinates of `index` into `out` without allocating.
    #[inline]
    pub fn decode_into(&self, mut index: usize, out: &mut [u32]) {
        let p = self.p() as usize;
        for c in out.iter_mut() {
            *c = (index % p) as u32;
            index /= p;
        }
    }

    pub fn dot(&self, x: &Point, y: &Point) -> Result<u32> {
        self.check_dim(x.dimension())?;
        self.check_dim(y.dimension())?;
        Ok(self.dot_coords(x.coords(), y.coords()))
    }

    #[inline]
    pub fn dot_coords(&self, x: &[u32], y: &[u32]) -> u32 {
        let p = self.p() as u64;
        let s = x
            .iter()
            .zip(y)
            .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % p);
        s as u32
    }

    /// Iterates over all points in index order.
    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.size).map(move |i| {
            let mut coords = vec![0; self.dimension];
            self.decode_into(i, &mut coords);
            Point(coords)
        })
    }

    /// Index of `x + y`.
    #[inline]
    pub fn add_indices(&self, x: usize, y: usize) -> usize {
        let p = self.p() as usize;
        let (mut a, mut b, mut out, mut scale) = (x, y, 0usize, 1usize);
        for _ in 0..self.dimension {
            let s = (a % p + b % p) % p;
            out += s * scale;
            scale *= p;
            a /= p;
            b /= p;
        }
        out
    }

    /// Index of `-x`.
    #[inline]
    pub fn neg_index(&self, x: usize) -> usize {
        let p = self.p() as usize;
        let (mut a, mut out, mut scale) = (x, 0usize, 1usize);
        for _ in 0..self.dimension {
            out += ((p - a % p) % p) * scale;
            scale *= p;
            a /= p;
        }
        out
    }
}

impl fmt::Display for VectorSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.p(), self.dimension)
    }
}

/// Precomputed values of the additive character `χ(t) = exp(2πi t/p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacterTable<T> {
    values: Vec<Complex<T>>,
}

impl<T: Real> CharacterTable<T> {
    pub fn new(field: PrimeField) -> Self {
        let p = field.modulus() as usize;
        let values = (0..p)
            .map(|t| {
                let theta = std::f64::consts::TAU * t as f64 / p as f64;
                Complex::new(T::lit(theta.cos()), T::lit(theta.sin()))
            })
            .collect();
        Self { values }
    }

    /// A corrupted table with the phase of `χ(t)` reversed for one residue.
    /// Only meant for mutation checks of the identity suites.
    pub fn with_conjugated_entry(mut self, t: u32) -> Self {
        let i = t as usize % self.values.len();
        self.values[i] = self.values[i].conj();
        self
    }

    #[inline]
    pub fn chi(&self, t: u32) -> Complex<T> {
        self.values[t as usize]
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn modulus(&self) -> u32 {
        self.values.len() as u32
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn rejects_composites() {
        assert_eq!(PrimeField::new(1), Err(Error::NotPrime(1)));
        assert_eq!(PrimeField::new(9), Err(Error::NotPrime(9)));
        assert!(PrimeField::new(2_147_483_647).is_ok());
        assert!(PrimeField::new(2_147_483_659).is_err());
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(field(5).inv(2), Ok(3));
        assert_eq!(field(3).neg(1), 2);
        assert_eq!(field(7).pow(3, 6), 1);
        assert_eq!(field(7).inv(0), Err(Error::ZeroInverse));
        assert_eq!(field(7).sub(2, 5), 4);
    }

    #[test]
    fn inverses_for_every_unit() {
        for p in [2u64, 3, 5, 7, 11, 13, 101, 65_537] {
            let f = field(p);
            for a in 1..(p.min(2000)) as u32 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1, "p={p} a={a}");
            }
        }
    }

    #[test]
    fn primitive_roots_generate() {
        for p in [3u64, 5, 7, 11, 13, 67, 101] {
            let f = field(p);
            let g = f.primitive_root();
            let mut seen = std::collections::HashSet::new();
            let mut x = 1;
            for _ in 0..p - 1 {
                seen.insert(x);
                x = f.mul(x, g);
            }
            assert_eq!(seen.len() as u64, p - 1);
        }
    }

    #[test]
    fn dot_examples() {
        let s = VectorSpace::of(3, 2).unwrap();
        let a = s.point(&[1, 2]).unwrap();
        let b = s.point(&[2, 2]).unwrap();
        assert_eq!(s.dot(&a, &b), Ok(0));
        assert_eq!(s.dot(&a, &s.zero()), Ok(0));
        let s5 = VectorSpace::of(5, 3).unwrap();
        let x = s5.point(&[1, 2, 3]).unwrap();
        let y = s5.point(&[4, 4, 4]).unwrap();
        assert_eq!(s5.dot(&x, &y), Ok(4));
        assert!(s.dot(&a, &x).is_err());
    }

    #[test]
    fn points_are_reduced() {
        let s = VectorSpace::of(5, 2).unwrap();
        assert_eq!(s.point(&[-1, 7]).unwrap().coords(), &[4, 2]);
        assert!(s.point(&[1]).is_err());
    }

    #[test]
    fn encode_examples() {
        let s = VectorSpace::of(3, 2).unwrap();
        assert_eq!(s.encode(&s.point(&[0, 0]).unwrap()), Ok(PointIndex(0)));
        assert_eq!(s.encode(&s.point(&[1, 2]).unwrap()), Ok(PointIndex(7)));
        assert!(s.decode(PointIndex(9)).is_err());
    }

    #[test]
    fn index_bijection_exhaustive() {
        for p in [2u64, 3, 5, 7, 11, 13, 17, 31, 47, 101, 313] {
            for d in 1..=6 {
                let Ok(s) = VectorSpace::with_cap(field(p), d, 100_000) else {
                    continue;
                };
                for (i, x) in s.points().enumerate() {
                    assert_eq!(s.encode(&x).unwrap(), PointIndex(i));
                    assert_eq!(s.decode(PointIndex(i)).unwrap(), x);
                }
            }
        }
    }

    #[test]
    fn index_arithmetic_matches_coordinates() {
        let s = VectorSpace::of(5, 3).unwrap();
        let f = s.field();
        for i in (0..s.size()).step_by(7) {
            for j in (0..s.size()).step_by(11) {
                let x = s.decode(PointIndex(i)).unwrap();
                let y = s.decode(PointIndex(j)).unwrap();
                let sum: Vec<i64> = x
                    .coords()
                    .iter()
                    .zip(y.coords())
                    .map(|(&a, &b)| f.add(a, b) as i64)
                    .collect();
                assert_eq!(s.add_indices(i, j), s.encode(&s.point(&sum).unwrap()).unwrap().0);
            }
            assert_eq!(s.add_indices(i, s.neg_index(i)), 0);
        }
    }

    #[test]
    fn size_cap() {
        assert!(VectorSpace::of(17, 6).is_err());
        assert!(VectorSpace::with_cap(field(17), 6, 1 << 25).is_ok());
        assert_eq!(VectorSpace::of(3, 0), Err(Error::ZeroDimension));
        assert!(VectorSpace::of(2_147_483_629, 3).is_err());
    }

    #[test]
    fn character_examples() {
        let t3 = CharacterTable::<f64>::new(field(3));
        assert_eq!(t3.chi(0), Complex::new(1.0, 0.0));
        let s = t3.chi(1) + t3.chi(2);
        assert!((s - Complex::new(-1.0, 0.0)).norm() < 1e-12);
        for p in [2u64, 5, 7, 101] {
            let t = CharacterTable::<f64>::new(field(p));
            let total: Complex<f64> = t.values().iter().sum();
            assert!(total.norm() < 1e-12, "p={p}");
        }
    }

    #[test]
    fn character_is_additive() {
        let f = field(13);
        let t = CharacterTable::<f64>::new(f);
        for a in 0..13 {
            for b in 0..13 {
                let lhs = t.chi(f.add(a, b));
                assert!((lhs - t.chi(a) * t.chi(b)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn character_orthogonality_over_space() {
        for (p, d) in [(3u64, 2usize), (5, 2), (7, 3)] {
            let s = VectorSpace::of(p, d).unwrap();
            let t = CharacterTable::<f64>::new(s.field());
            for xi in s.points().skip(1) {
                let total: Complex<f64> = s.points().map(|x| t.chi(s.dot(&xi, &x).unwrap())).sum();
                assert!(total.norm() <= 1e-9 * s.size() as f64);
            }
        }
    }
}
