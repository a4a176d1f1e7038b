//! Block-transform coding of one plane: 8x8 DCT, uniform quantization,
//! zigzag run-level entropy coding.
//!
//! The same plane coder serves two roles in the video pipeline: intra
//! planes (pixel values, level-shifted by -128 around zero before the
//! transform) and prediction residual planes (values in [-255, 255]).
//! The encoder computes its reconstruction by running the decoder's own
//! block routine, so the closed prediction loop sees exactly what the
//! decoder will see.

use crate::codec::bits::{BitReader, BitWriter};
use crate::codec::dct::{dct8_forward, dct8_inverse};
use crate::codec::quant::{dequantize, quantize, QuantParams};
use crate::codec::zigzag::{zigzag_scan, zigzag_unscan};
use crate::error::{Error, Result};

/// Run value that marks end-of-block instead of a (run, level) pair.
const EOB_RUN: u32 = 63;

/// What kind of values a coded plane holds, fixing the level shift and
/// the clamp range applied on reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaneKind {
    /// Pixel values in [0, 255]; shifted by -128 before the transform.
    Intra,
    /// Prediction residuals in [-255, 255]; no shift.
    Residual,
}

impl PlaneKind {
    fn shift(self) -> f64 {
        match self {
            PlaneKind::Intra => 128.0,
            PlaneKind::Residual => 0.0,
        }
    }

    fn clamp_range(self) -> (i16, i16) {
        match self {
            PlaneKind::Intra => (0, 255),
            PlaneKind::Residual => (-255, 255),
        }
    }
}

/// Entropy-coded plane plus everything needed to decode it standalone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodedPlane {
    pub payload: Vec<u8>,
    /// Exact number of coded bits (the payload tail is zero padding).
    pub bit_len: u64,
    pub qp: u8,
    pub width: usize,
    pub height: usize,
    pub kind: PlaneKind,
}

/// Encode a plane and return the coded form together with the decoder's
/// reconstruction of it.
pub fn encode_plane(
    plane: &[i16],
    width: usize,
    height: usize,
    q: QuantParams,
    kind: PlaneKind,
) -> Result<(CodedPlane, Vec<i16>)> {
    if plane.len() != width * height || width == 0 || height == 0 {
        return Err(Error::Shape(format!(
            "plane of {} values does not match {width}x{height}",
            plane.len()
        )));
    }
    let bw = width.div_ceil(8);
    let bh = height.div_ceil(8);
    let mut writer = BitWriter::new();
    let mut recon = vec![0i16; width * height];

    for by in 0..bh {
        for bx in 0..bw {
            let mut block = [0.0f64; 64];
            for y in 0..8 {
                // Edge replication pads partial blocks.
                let sy = (by * 8 + y).min(height - 1);
                for x in 0..8 {
                    let sx = (bx * 8 + x).min(width - 1);
                    block[y * 8 + x] = plane[sy * width + sx] as f64 - kind.shift();
                }
            }
            let levels = quantize(&dct8_forward(&block), q);
            let scanned = zigzag_scan(&levels);
            write_block_levels(&mut writer, &scanned);

            // Reconstruction via the exact decoder routine.
            let rec = reconstruct_block(&scanned, q, kind);
            for y in 0..8 {
                let py = by * 8 + y;
                if py >= height {
                    break;
                }
                for x in 0..8 {
                    let px = bx * 8 + x;
                    if px >= width {
                        break;
                    }
                    recon[py * width + px] = rec[y * 8 + x];
                }
            }
        }
    }

    let bit_len = writer.bit_len();
    let coded = CodedPlane { payload: writer.into_bytes(), bit_len, qp: q.qp(), width, height, kind };
    Ok((coded, recon))
}

/// Decode a plane coded by [`encode_plane`].
pub fn decode_plane(coded: &CodedPlane) -> Result<Vec<i16>> {
    let q = QuantParams::new(coded.qp)?;
    let mut reader = BitReader::new(&coded.payload);
    decode_plane_bits(&mut reader, coded.width, coded.height, q, coded.kind)
}

/// Decode one plane from an open bit reader (the video pipeline packs
/// motion vectors and residual into one payload).
pub fn decode_plane_bits(
    reader: &mut BitReader<'_>,
    width: usize,
    height: usize,
    q: QuantParams,
    kind: PlaneKind,
) -> Result<Vec<i16>> {
    let bw = width.div_ceil(8);
    let bh = height.div_ceil(8);
    let mut plane = vec![0i16; width * height];
    for by in 0..bh {
        for bx in 0..bw {
            let scanned = read_block_levels(reader)?;
            let rec = reconstruct_block(&scanned, q, kind);
            for y in 0..8 {
                let py = by * 8 + y;
                if py >= height {
                    break;
                }
                for x in 0..8 {
                    let px = bx * 8 + x;
                    if px >= width {
                        break;
                    }
                    plane[py * width + px] = rec[y * 8 + x];
                }
            }
        }
    }
    Ok(plane)
}

/// Shared dequantize -> inverse transform -> round -> clamp path.
fn reconstruct_block(scanned: &[i32; 64], q: QuantParams, kind: PlaneKind) -> [i16; 64] {
    let coefs = dequantize(&zigzag_unscan(scanned), q);
    let pixels = dct8_inverse(&coefs);
    let (lo, hi) = kind.clamp_range();
    let mut out = [0i16; 64];
    for (o, &p) in out.iter_mut().zip(&pixels) {
        // f64::round ties away from zero, which is the coded convention.
        *o = ((p + kind.shift()).round() as i32).clamp(lo as i32, hi as i32) as i16;
    }
    out
}

/// Run-level code one block of scanned levels.
///
/// Grammar: `(ue(run), se(level))*` then `ue(63)` as end-of-block, the
/// EOB being omitted when all 64 coefficients have been emitted. A run
/// of 63 zeros followed by a nonzero final coefficient would collide
/// with the EOB codeword; that block is escaped as (62, level 0) plus
/// (0, level), so zero levels are legal on the wire.
fn write_block_levels(writer: &mut BitWriter, scanned: &[i32; 64]) {
    let mut pos = 0usize;
    while pos < 64 {
        let run = scanned[pos..].iter().take_while(|&&v| v == 0).count();
        if pos + run == 64 {
            writer.write_ue(EOB_RUN);
            return;
        }
        let run = if run as u32 == EOB_RUN {
            writer.write_ue(62);
            writer.write_se(0);
            pos += 63;
            0
        } else {
            run
        };
        writer.write_ue(run as u32);
        writer.write_se(scanned[pos + run]);
        pos += run + 1;
    }
}

fn read_block_levels(reader: &mut BitReader<'_>) -> Result<[i32; 64]> {
    let mut scanned = [0i32; 64];
    let mut pos = 0usize;
    while pos < 64 {
        let run = reader.read_ue()?;
        if run == EOB_RUN {
            return Ok(scanned);
        }
        if run as usize > 63 - pos {
            return Err(Error::Bitstream(format!(
                "run {run} overflows block at coefficient {pos}"
            )));
        }
        pos += run as usize;
        scanned[pos] = reader.read_se()?;
        pos += 1;
    }
    Ok(scanned)
}
