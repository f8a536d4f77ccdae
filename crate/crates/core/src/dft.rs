//! Multidimensional DFT over `F_p^d` by row–column decomposition.
//!
//! Every axis pass applies a length-`p` transform to all lines parallel to
//! that axis. Lines are gathered into a contiguous scratch buffer, transformed
//! independently and scattered back, so results do not depend on how rayon
//! schedules the lines.

use num_complex::Complex;
use rayon::prelude::*;

use crate::field::{CharacterTable, PrimeField};
use crate::scalar::Real;

/// Naive kernels are used up to and including this modulus under [`Kernel::Auto`].
pub const NAIVE_MAX_MODULUS: u32 = 64;

/// Per-axis kernel selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Kernel {
    /// O(p²) character sums.
    Naive,
    /// Rader's algorithm: a cyclic convolution of length `p − 1` evaluated
    /// with zero-padded power-of-two FFTs.
    Rader,
    /// Naive for `p ≤ 64`, Rader above.
    #[default]
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `Σ f(x) χ(−ξ·x)`
    Forward,
    /// `Σ f(x) χ(ξ·x)`
    Inverse,
}

/// Iterative radix-2 FFT of a fixed power-of-two length.
#[derive(Debug, Clone)]
struct Radix2<T> {
    len: usize,
    /// `exp(-2πi k / len)` for `k < len / 2`.
    twiddles: Vec<Complex<T>>,
}

impl<T: Real> Radix2<T> {
    fn new(len: usize) -> Self {
        debug_assert!(len.is_power_of_two());
        let twiddles = (0..len / 2)
            .map(|k| {
                let theta = -std::f64::consts::TAU * k as f64 / len as f64;
                Complex::new(T::lit(theta.cos()), T::lit(theta.sin()))
            })
            .collect();
        Self { len, twiddles }
    }

    /// In-place transform; `inverse` uses conjugate twiddles and no scaling.
    fn run(&self, buf: &mut [Complex<T>], inverse: bool) {
        let n = self.len;
        let bits = n.trailing_zeros();
        if bits == 0 {
            return;
        }
        for i in 0..n {
            let j = i.reverse_bits() >> (usize::BITS - bits);
            if i < j {
                buf.swap(i, j);
            }
        }
        let mut half = 1;
        while half < n {
            let stride = n / (2 * half);
            for start in (0..n).step_by(2 * half) {
                for k in 0..half {
                    let mut w = self.twiddles[k * stride];
                    if inverse {
                        w = w.conj();
                    }
                    let a = buf[start + k];
                    let b = buf[start + k + half] * w;
                    buf[start + k] = a + b;
                    buf[start + k + half] = a - b;
                }
            }
            half *= 2;
        }
    }
}

/// Precomputed data for one direction of Rader's algorithm.
#[derive(Debug, Clone)]
struct RaderPlan<T> {
    p: usize,
    /// `g^r mod p`, `r < p − 1`.
    gather: Vec<usize>,
    /// `g^{−q} mod p`, `q < p − 1`.
    scatter: Vec<usize>,
    fft: Radix2<T>,
    /// FFT of the zero-padded kernel `b_r = w(g^{−r})`, pre-scaled by `1/M`.
    kernel_spectrum: Vec<Complex<T>>,
}

impl<T: Real> RaderPlan<T> {
    fn new(field: PrimeField, twiddle: &[Complex<T>]) -> Self {
        let p = field.modulus() as usize;
        let n = p - 1;
        let g = field.primitive_root();
        let g_inv = field.inv(g).expect("primitive root is a unit");
        let mut gather = Vec::with_capacity(n);
        let mut scatter = Vec::with_capacity(n);
        let (mut a, mut b) = (1u32, 1u32);
        for _ in 0..n {
            gather.push(a as usize);
            scatter.push(b as usize);
            a = field.mul(a, g);
            b = field.mul(b, g_inv);
        }
        let m = (2 * n - 1).next_power_of_two();
        let fft = Radix2::new(m);
        let scale = T::one() / T::from_usize_lossy(m);
        let mut kernel_spectrum = vec![Complex::new(T::zero(), T::zero()); m];
        for r in 0..n {
            kernel_spectrum[r] = twiddle[scatter[r]] * scale;
        }
        fft.run(&mut kernel_spectrum, false);
        Self {
            p,
            gather,
            scatter,
            fft,
            kernel_spectrum,
        }
    }

    fn run(&self, line: &mut [Complex<T>], work: &mut Vec<Complex<T>>) {
        let n = self.p - 1;
        let m = self.fft.len;
        work.clear();
        work.resize(m, Complex::new(T::zero(), T::zero()));
        let x0 = line[0];
        let mut total = x0;
        for r in 0..n {
            let v = line[self.gather[r]];
            work[r] = v;
            total = total + v;
        }
        self.fft.run(work, false);
        for (w, k) in work.iter_mut().zip(&self.kernel_spectrum) {
            *w = *w * *k;
        }
        self.fft.run(work, true);
        line[0] = total;
        for q in 0..n {
            let c = if q + n < 2 * n - 1 {
                work[q] + work[q + n]
            } else {
                work[q]
            };
            line[self.scatter[q]] = x0 + c;
        }
    }
}

#[derive(Debug, Clone)]
enum AxisKernel<T> {
    Naive,
    Rader {
        forward: RaderPlan<T>,
        inverse: RaderPlan<T>,
    },
}

/// Reusable transform plan for one space.
#[derive(Debug, Clone)]
pub struct DftPlan<T> {
    p: usize,
    /// `χ(t)`
    positive: Vec<Complex<T>>,
    /// `χ(−t)`
    negative: Vec<Complex<T>>,
    kernel: AxisKernel<T>,
}

impl<T: Real> DftPlan<T> {
    pub fn new(field: PrimeField) -> Self {
        Self::with_kernel(field, Kernel::Auto)
    }

    pub fn with_kernel(field: PrimeField, kernel: Kernel) -> Self {
        let table = CharacterTable::<T>::new(field);
        let use_rader = match kernel {
            Kernel::Naive => false,
            Kernel::Rader => field.modulus() > 2,
            Kernel::Auto => field.modulus() > NAIVE_MAX_MODULUS,
        };
        let mut plan = Self::from_table(&table);
        if use_rader {
            plan.kernel = AxisKernel::Rader {
                forward: RaderPlan::new(field, &plan.negative),
                inverse: RaderPlan::new(field, &plan.positive),
            };
        }
        plan
    }

    /// A naive-kernel plan built from an arbitrary character table.
    pub fn from_table(table: &CharacterTable<T>) -> Self {
        let positive = table.values().to_vec();
        let p = positive.len();
        let negative = (0..p).map(|t| positive[(p - t) % p]).collect();
        Self {
            p,
            positive,
            negative,
            kernel: AxisKernel::Naive,
        }
    }

    pub fn modulus(&self) -> usize {
        self.p
    }

    pub fn uses_fast_kernel(&self) -> bool {
        matches!(self.kernel, AxisKernel::Rader { .. })
    }

    fn naive_line(&self, line: &mut [Complex<T>], out: &mut Vec<Complex<T>>, dir: Direction) {
        let table = match dir {
            Direction::Forward => &self.negative,
            Direction::Inverse => &self.positive,
        };
        let p = self.p;
        out.clear();
        for k in 0..p {
            let mut acc = Complex::new(T::zero(), T::zero());
            let mut idx = 0usize;
            for &v in line.iter() {
                acc = acc + v * table[idx];
                idx += k;
                if idx >= p {
                    idx -= p;
                }
            }
            out.push(acc);
        }
        line.copy_from_slice(out);
    }

    /// Transforms one line of length `p` in place.
    pub fn transform_line(&self, line: &mut [Complex<T>], dir: Direction) {
        let mut work = Vec::new();
        self.line_with(line, &mut work, dir);
    }

    fn line_with(&self, line: &mut [Complex<T>], work: &mut Vec<Complex<T>>, dir: Direction) {
        match (&self.kernel, dir) {
            (AxisKernel::Naive, _) => self.naive_line(line, work, dir),
            (AxisKernel::Rader { forward, .. }, Direction::Forward) => forward.run(line, work),
            (AxisKernel::Rader { inverse, .. }, Direction::Inverse) => inverse.run(line, work),
        }
    }

    /// Transforms a dense array of `p^dimension` values in place.
    pub fn transform(&self, data: &mut [Complex<T>], dimension: usize, dir: Direction) {
        let p = self.p;
        let total = data.len();
        debug_assert_eq!(total, p.pow(dimension as u32));
        let mut scratch = vec![Complex::new(T::zero(), T::zero()); total];
        let mut stride = 1usize;
        for _ in 0..dimension {
            let block = stride * p;
            // line l = outer * stride + inner holds data[outer*block + k*stride + inner]
            {
                let src = &*data;
                scratch
                    .par_chunks_mut(p)
                    .enumerate()
                    .for_each(|(l, line)| {
                        let (outer, inner) = (l / stride, l % stride);
                        let base = outer * block + inner;
                        for (k, v) in line.iter_mut().enumerate() {
                            *v = src[base + k * stride];
                        }
                    });
            }
            scratch.par_chunks_mut(p).for_each_init(Vec::new, |work, line| {
                self.line_with(line, work, dir)
            });
            {
                let src = &scratch;
                data.par_iter_mut().enumerate().for_each(|(idx, v)| {
                    let outer = idx / block;
                    let rem = idx % block;
                    let (k, inner) = (rem / stride, rem % stride);
                    *v = src[(outer * stride + inner) * p + k];
                });
            }
            stride = block;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn pseudo_random_line(p: usize, seed: u64) -> Vec<Complex<f64>> {
        let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (0..p)
            .map(|_| {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let a = (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let b = (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
                Complex::new(a, b)
            })
            .collect()
    }

    fn direct(line: &[Complex<f64>], sign: f64) -> Vec<Complex<f64>> {
        let p = line.len();
        (0..p)
            .map(|k| {
                line.iter()
                    .enumerate()
                    .map(|(n, &v)| {
                        let theta = sign * std::f64::consts::TAU * ((k * n) % p) as f64 / p as f64;
                        v * Complex::new(theta.cos(), theta.sin())
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn radix2_matches_direct() {
        for len in [1usize, 2, 4, 8, 64] {
            let x = pseudo_random_line(len, len as u64);
            let mut y = x.clone();
            Radix2::<f64>::new(len).run(&mut y, false);
            let expect = direct(&x, -1.0);
            for (a, b) in y.iter().zip(&expect) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn naive_kernel_matches_definition() {
        for p in [2u64, 3, 5, 7, 13] {
            let plan = DftPlan::<f64>::with_kernel(field(p), Kernel::Naive);
            let x = pseudo_random_line(p as usize, p);
            for (dir, sign) in [(Direction::Forward, -1.0), (Direction::Inverse, 1.0)] {
                let mut y = x.clone();
                plan.transform_line(&mut y, dir);
                for (a, b) in y.iter().zip(&direct(&x, sign)) {
                    assert!((a - b).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn rader_matches_naive() {
        for p in [3u64, 5, 7, 11, 13, 17, 31, 67, 101, 257] {
            let naive = DftPlan::<f64>::with_kernel(field(p), Kernel::Naive);
            let rader = DftPlan::<f64>::with_kernel(field(p), Kernel::Rader);
            assert!(rader.uses_fast_kernel());
            for seed in 0..3 {
                let x = pseudo_random_line(p as usize, seed);
                let scale: f64 = x.iter().map(|v| v.norm()).sum();
                for dir in [Direction::Forward, Direction::Inverse] {
                    let (mut a, mut b) = (x.clone(), x.clone());
                    naive.transform_line(&mut a, dir);
                    rader.transform_line(&mut b, dir);
                    for (u, v) in a.iter().zip(&b) {
                        assert!((u - v).norm() <= 1e-10 * scale, "p={p}");
                    }
                }
            }
        }
    }

    #[test]
    fn auto_kernel_threshold() {
        assert!(!DftPlan::<f64>::new(field(61)).uses_fast_kernel());
        assert!(DftPlan::<f64>::new(field(67)).uses_fast_kernel());
        assert!(!DftPlan::<f64>::with_kernel(field(2), Kernel::Rader).uses_fast_kernel());
    }

    #[test]
    fn single_precision_kernels_agree() {
        let p = 67u64;
        let naive = DftPlan::<f32>::with_kernel(field(p), Kernel::Naive);
        let rader = DftPlan::<f32>::with_kernel(field(p), Kernel::Rader);
        let x: Vec<Complex<f32>> = pseudo_random_line(p as usize, 9)
            .into_iter()
            .map(|v| Complex::new(v.re as f32, v.im as f32))
            .collect();
        let (mut a, mut b) = (x.clone(), x);
        naive.transform_line(&mut a, Direction::Forward);
        rader.transform_line(&mut b, Direction::Forward);
        for (u, v) in a.iter().zip(&b) {
            assert!((u - v).norm() < 1e-4);
        }
    }
}
