//! lpvc: a small predictive video coding toolkit.
//!
//! The codec couples a pluggable frame predictor with a block-transform
//! residual coder in a closed loop: the encoder predicts each frame from
//! previously *reconstructed* frames, codes the prediction residual, and
//! feeds the reconstruction back into the prediction context, so encoder
//! and decoder states never drift apart.
//!
//! Three predictors are provided:
//! - frame difference (`fd`): the previous decoded frame, unchanged;
//! - block motion compensation (`bmc`): exhaustive half-pel search over
//!   16x16 blocks, motion vectors coded as side information;
//! - learned frame prediction (`lfp`): a convolutional residual network
//!   that maps the last K decoded frames to the next one, with no side
//!   information at all.
//!
//! The crate also contains the training apparatus for the learned
//! predictor (patch-sequence extraction, l1/l2 and adversarial training)
//! and rate-distortion evaluation tools (PSNR, RD curves, Bjontegaard
//! delta PSNR).

pub mod codec;
pub mod error;
pub mod frame;
pub mod media_io;
pub mod metrics;
pub mod nn;
pub mod pipeline;
pub mod predict;
pub mod training;

pub use error::{Error, Result};
pub use frame::{Frame, VideoSeq};
