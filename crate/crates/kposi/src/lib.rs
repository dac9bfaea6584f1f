//! Analysis toolkit for discrete-time k-positive linear systems.
//!
//! A discrete-time linear system maps the set of vectors with at most `k-1`
//! sign variations to itself exactly when its matrix is sign-regular of
//! order `k`. This crate provides the pieces needed to work with such
//! systems numerically:
//!
//! * dense matrices, minors, and multiplicative compounds ([`matrix`],
//!   [`index`], [`compound`]);
//! * sign-variation counts `s^-`/`s^+` and the cones they define
//!   ([`signvar`]);
//! * SR_k / SSR_k classification and variation-diminishing-property checks
//!   ([`classify`]);
//! * spectral splitting of nonsingular SSR_k matrices and the exponential
//!   separation it induces ([`spectral`]);
//! * trajectory and exterior-product (parallelotope volume) simulation with
//!   Perron-limit predictions ([`dynamics`]);
//! * reproducible test-matrix generators and named fixtures
//!   ([`generators`]).
//!
//! All numerics are generic over the scalar type via [`Scalar`]; `f64` is
//! the working type of the CLI and the concrete aliases below.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

pub mod classify;
pub mod cli;
pub mod compound;
pub mod dynamics;
mod eigen;
pub mod error;
pub mod generators;
pub mod index;
pub mod io;
pub mod matrix;
pub mod selftest;
pub mod signvar;
pub mod spectral;
pub mod tol;

pub use error::{Error, Result};

/// Scalar type the numerics are generic over: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Display + Debug + Default + 'static
{
}

impl<T> Scalar for T where
    T: Float + FromPrimitive + ToPrimitive + Sum + Display + Debug + Default + 'static
{
}

/// Converts an `f64` constant (tolerance, literal) into the working scalar.
pub(crate) fn scalar<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("f64 constant must be representable in the scalar type")
}

pub type Matrix64 = matrix::Matrix<f64>;
pub type Matrix32 = matrix::Matrix<f32>;
pub type Compound64 = compound::CompoundMatrix<f64>;
