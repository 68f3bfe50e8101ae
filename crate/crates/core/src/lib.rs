//! Sparse recovery with low density frames.
//!
//! This crate implements `(d_v, d_c)`-regular binary low density frames and
//! the SuPrEM decoders: Gaussian sum-product message passing combined with
//! per-coordinate EM updates of Gaussian-scale-mixture hyperpriors. It also
//! ships the supporting pieces needed to reproduce the distortion and
//! exact-recovery experiments: least-squares refinement of a selected
//! support, a genie baseline, signal generation, metrics and a deterministic
//! Monte-Carlo sweep harness.
//!
//! The modules follow the pipeline:
//!
//! - [`frame`]: frame construction (progressive edge growth), validation,
//!   matvec kernels, text serialization;
//! - [`gaussian`]: the message algebra and per-node update kernels;
//! - [`schedule`]: flooding, serial and probabilistic message schedules;
//! - [`decoder`]: SuPrEM I/II, EM hyperprior updates, stopping rules and
//!   the reweighted restart wrapper;
//! - [`refine`]: top-`L` thresholding, LSQR least squares on a support,
//!   genie decoding;
//! - [`bench`]: instance generation, distortion metrics, sweep plans and
//!   CSV reporting.

pub mod bench;
pub mod decoder;
pub mod error;
pub mod frame;
pub mod gaussian;
pub mod refine;
pub mod rng;
pub mod schedule;
pub mod select;

pub use error::{Error, Result};
