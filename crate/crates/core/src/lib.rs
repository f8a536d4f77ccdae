//! Fourier analysis over `F_p^d`: exact and fast transforms, point-set
//! families, `(p, s)`-Salem exponents, extension thresholds and empirical
//! extension-operator norms.
//!
//! Dense numerics are generic over [`Real`] (`f32`, `f64`); threshold
//! formulas are generic over [`ExactScalar`] and exact with [`Exact`].

pub mod dft;
pub mod ensembles;
pub mod error;
pub mod field;
pub mod restriction;
pub mod salem;
pub mod scalar;
pub mod spectral;
pub mod stats;

pub use num_complex::Complex;
pub use num_rational::BigRational;

pub use dft::{DftPlan, Direction, Kernel};
pub use ensembles::{PointSet, SetDescriptor};
pub use error::{Error, Result};
pub use field::{CharacterTable, Point, PointIndex, PrimeField, VectorSpace};
pub use restriction::{
    ExtensionConfig, ExtensionNormEstimate, GrowthSweep, Regime, Threshold, ThresholdReport,
    WitnessTag,
};
pub use salem::{ClosedFormPrediction, SalemFit, SpectralProfile};
pub use scalar::{parse_rational, ExactScalar, Exponent, Real};
pub use spectral::{FFMeasure, GridFunction};

/// Exact rational scalar for thresholds.
pub type Exact = BigRational;

pub type GridFunction64 = GridFunction<f64>;
pub type GridFunction32 = GridFunction<f32>;
pub type FFMeasure64 = FFMeasure<f64>;
pub type FFMeasure32 = FFMeasure<f32>;
pub type DftPlan64 = DftPlan<f64>;
pub type SpectralProfile64 = SpectralProfile<f64>;
pub type ThresholdReportExact = ThresholdReport<Exact>;
