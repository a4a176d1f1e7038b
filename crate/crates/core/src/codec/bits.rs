//! MSB-first bit writer/reader with exponential-Golomb codes.

use crate::error::{Error, Result};

/// Accumulates bits MSB-first; the final byte is zero-padded.
#[derive(Debug, Default, Clone)]
pub struct BitWriter {
    bytes: Vec<u8>,
    /// Bits already used in the trailing byte (0 means byte-aligned).
    used: u8,
    nbits: u64,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn write_bit(&mut self, bit: bool) {
        if self.used == 0 {
            self.bytes.push(0);
        }
        if bit {
            let last = self.bytes.last_mut().unwrap();
            *last |= 1 << (7 - self.used);
        }
        self.used = (self.used + 1) % 8;
        self.nbits += 1;
    }

    /// Write the low `n` bits of `value`, most significant first.
    pub fn write_bits(&mut self, value: u64, n: u32) {
        debug_assert!(n <= 64);
        for i in (0..n).rev() {
            self.write_bit((value >> i) & 1 == 1);
        }
    }

    /// Unsigned exponential-Golomb code.
    pub fn write_ue(&mut self, v: u32) {
        let code = v as u64 + 1;
        let len = 64 - code.leading_zeros();
        self.write_bits(0, len - 1);
        self.write_bits(code, len);
    }

    /// Signed exponential-Golomb code: k>0 -> 2k-1, k<=0 -> -2k.
    pub fn write_se(&mut self, k: i32) {
        let mapped = if k > 0 { 2 * k as u32 - 1 } else { (-2 * (k as i64)) as u32 };
        self.write_ue(mapped);
    }

    /// Bits written so far (excludes final padding).
    pub fn bit_len(&self) -> u64 {
        self.nbits
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }
}

/// Reads bits MSB-first from a byte slice; running past the end is an error.
#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    bytes: &'a [u8],
    pos: u64,
}

impl<'a> BitReader<'a> {
    pub fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    pub fn read_bit(&mut self) -> Result<bool> {
        let byte = (self.pos / 8) as usize;
        if byte >= self.bytes.len() {
            return Err(Error::Bitstream("bitstream exhausted".into()));
        }
        let bit = (self.bytes[byte] >> (7 - (self.pos % 8))) & 1;
        self.pos += 1;
        Ok(bit == 1)
    }

    pub fn read_bits(&mut self, n: u32) -> Result<u64> {
        let mut v = 0u64;
        for _ in 0..n {
            v = (v << 1) | self.read_bit()? as u64;
        }
        Ok(v)
    }

    pub fn read_ue(&mut self) -> Result<u32> {
        let mut zeros = 0u32;
        while !self.read_bit()? {
            zeros += 1;
            if zeros > 31 {
                return Err(Error::Bitstream("exp-golomb prefix too long".into()));
            }
        }
        let rest = self.read_bits(zeros)?;
        Ok((((1u64 << zeros) | rest) - 1) as u32)
    }

    pub fn read_se(&mut self) -> Result<i32> {
        let v = self.read_ue()? as i64;
        Ok(if v % 2 == 1 { ((v + 1) / 2) as i32 } else { (-(v / 2)) as i32 })
    }

    /// Bits consumed so far.
    pub fn bit_pos(&self) -> u64 {
        self.pos
    }
}
