//! Reconstruction of dynamic permeability and tortuosity functions of
//! porous media from a finite set of frequency samples.
//!
//! Both functions are Stieltjes functions of `s = -iω`. A regularized
//! multipoint Padé approximant turns the samples into a discrete positive
//! measure (poles and residues), from which the moments, the effective
//! parameters K₀, α∞ and Λ, and time-domain relaxation kernels follow.
//! The Johnson–Koplik–Dashen model serves as the closed-form reference.

pub mod cli;
pub mod data;
pub mod effective;
pub mod error;
pub mod jkd;
pub mod kernels;
pub mod moments;
pub mod pade;
pub mod parallel;
pub mod sampling;

pub use data::{DataSet, FrequencySample, Target};
pub use error::{Error, Result};
pub use moments::MomentVector;
pub use parallel::Execution;
