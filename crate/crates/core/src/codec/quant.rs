//! Uniform scalar quantization driven by an integer QP.

use crate::error::{Error, Result};

/// Quantization parameter in [0, 51]; the step size follows the usual
/// `2^((qp-4)/6)` law (~12% per QP), lower-bounded at 0.5.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuantParams {
    qp: u8,
}

impl QuantParams {
    pub fn new(qp: u8) -> Result<Self> {
        if qp > 51 {
            return Err(Error::InvalidInput(format!("qp must be in [0,51], got {qp}")));
        }
        Ok(Self { qp })
    }

    pub fn qp(&self) -> u8 {
        self.qp
    }

    pub fn step(&self) -> f64 {
        (2.0f64).powf((self.qp as f64 - 4.0) / 6.0).max(0.5)
    }
}

/// `round(c / step)`, half away from zero.
pub fn quantize(coefs: &[f64; 64], q: QuantParams) -> [i32; 64] {
    let step = q.step();
    let mut out = [0i32; 64];
    for (o, &c) in out.iter_mut().zip(coefs) {
        *o = (c / step).round() as i32;
    }
    out
}

/// `level * step`.
pub fn dequantize(levels: &[i32; 64], q: QuantParams) -> [f64; 64] {
    let step = q.step();
    let mut out = [0.0f64; 64];
    for (o, &l) in out.iter_mut().zip(levels) {
        *o = l as f64 * step;
    }
    out
}
