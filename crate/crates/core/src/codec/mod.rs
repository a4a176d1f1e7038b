//! Built-in still-image / residual intra codec: 8x8 DCT, uniform
//! quantization, zigzag run-level entropy coding over exp-Golomb bits.

pub mod bits;
pub mod dct;
pub mod plane;
pub mod quant;
pub mod zigzag;

pub use bits::{BitReader, BitWriter};
pub use plane::{decode_plane, decode_plane_bits, encode_plane, CodedPlane, PlaneKind};
pub use quant::QuantParams;
