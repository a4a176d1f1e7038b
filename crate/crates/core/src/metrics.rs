//! Fidelity and rate-distortion metrics.
//!
//! PSNR per frame and per sequence, RD curves with CSV interchange, and
//! Bjontegaard delta PSNR (cubic fit of PSNR over log10 bitrate,
//! averaged difference over the overlapping rate range).

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::frame::{Frame, VideoSeq};

/// PSNR reported for a lossless frame, keeping sequence means finite.
pub const PSNR_CAP_DB: f64 = 99.0;

/// Mean squared error between two equally sized frames.
pub fn mse(a: &Frame, b: &Frame) -> Result<f64> {
    if !a.same_dims(b) {
        return Err(Error::Shape(format!(
            "psnr operands differ: {}x{} vs {}x{}",
            a.width(),
            a.height(),
            b.width(),
            b.height()
        )));
    }
    let sum: u64 = a
        .samples()
        .iter()
        .zip(b.samples())
        .map(|(&x, &y)| {
            let d = x as i64 - y as i64;
            (d * d) as u64
        })
        .sum();
    Ok(sum as f64 / a.samples().len() as f64)
}

/// Peak signal-to-noise ratio in dB; identical frames return [`PSNR_CAP_DB`].
pub fn psnr(a: &Frame, b: &Frame) -> Result<f64> {
    let mse = mse(a, b)?;
    if mse == 0.0 {
        Ok(PSNR_CAP_DB)
    } else {
        Ok(10.0 * (255.0f64 * 255.0 / mse).log10())
    }
}

/// Per-frame PSNR list and the mean over frames `skip..`.
///
/// `skip` excludes lead-in frames (intra-coded or without prediction
/// context) from the mean; the per-frame list always covers the whole
/// sequence.
pub fn sequence_psnr(decoded: &VideoSeq, original: &VideoSeq, skip: usize) -> Result<(Vec<f64>, f64)> {
    if decoded.len() != original.len() {
        return Err(Error::Shape(format!(
            "sequence lengths differ: {} vs {}",
            decoded.len(),
            original.len()
        )));
    }
    if skip >= decoded.len() {
        return Err(Error::InvalidInput(format!(
            "skip {skip} leaves no frames out of {}",
            decoded.len()
        )));
    }
    let per_frame: Vec<f64> = decoded
        .frames()
        .iter()
        .zip(original.frames())
        .map(|(d, o)| psnr(d, o))
        .collect::<Result<_>>()?;
    let included = &per_frame[skip..];
    let mean = included.iter().sum::<f64>() / included.len() as f64;
    Ok((per_frame, mean))
}

/// One sample of a rate-distortion curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RdPoint {
    pub bitrate_kbps: f64,
    pub psnr_db: f64,
}

/// A rate-distortion curve: at least four points, strictly increasing
/// bitrate (the Bjontegaard fit works in log bitrate, so rates must be
/// positive).
#[derive(Debug, Clone, PartialEq)]
pub struct RdCurve {
    points: Vec<RdPoint>,
}

impl RdCurve {
    pub fn new(points: Vec<RdPoint>) -> Result<Self> {
        if points.len() < 4 {
            return Err(Error::InvalidInput(format!(
                "RD curve needs at least 4 points for a cubic fit, got {}",
                points.len()
            )));
        }
        for pair in points.windows(2) {
            if pair[1].bitrate_kbps <= pair[0].bitrate_kbps {
                return Err(Error::InvalidInput(
                    "RD curve bitrates must be strictly increasing".into(),
                ));
            }
        }
        if points[0].bitrate_kbps <= 0.0 {
            return Err(Error::InvalidInput("RD curve bitrates must be positive".into()));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[RdPoint] {
        &self.points
    }

    fn log_rates(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.bitrate_kbps.log10()).collect()
    }

    /// Write as CSV with the `bitrate_kbps,psnr_db` header.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = String::from("bitrate_kbps,psnr_db\n");
        for p in &self.points {
            out.push_str(&format!("{},{}\n", p.bitrate_kbps, p.psnr_db));
        }
        fs::write(path, out)?;
        Ok(())
    }

    /// Read back a CSV produced by [`RdCurve::write_csv`] (or by an
    /// external encoder wrapped in the same two-column format).
    pub fn read_csv(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h.trim() == "bitrate_kbps,psnr_db" => {}
            other => {
                return Err(Error::Parse(format!(
                    "expected header 'bitrate_kbps,psnr_db', got {other:?}"
                )))
            }
        }
        let mut points = Vec::new();
        for (i, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (r, p) = line
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("RD CSV line {} lacks a comma", i + 2)))?;
            let bitrate_kbps: f64 = r
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad bitrate on RD CSV line {}", i + 2)))?;
            let psnr_db: f64 = p
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad PSNR on RD CSV line {}", i + 2)))?;
            points.push(RdPoint { bitrate_kbps, psnr_db });
        }
        Self::new(points)
    }
}

/// Cubic polynomial in a centered variable, `p(t) = sum c_k (t - t0)^k`.
#[derive(Debug, Clone, Copy)]
struct CenteredCubic {
    center: f64,
    coeffs: [f64; 4],
}

impl CenteredCubic {
    /// Least-squares fit of `ys` over `xs` (4 or more samples).
    fn fit(xs: &[f64], ys: &[f64]) -> Self {
        debug_assert!(xs.len() >= 4 && xs.len() == ys.len());
        let center = xs.iter().sum::<f64>() / xs.len() as f64;
        // Normal equations for the degree-3 Vandermonde system; centering
        // keeps the system well conditioned for the rate ranges seen here.
        let mut ata = [[0.0f64; 4]; 4];
        let mut atb = [0.0f64; 4];
        for (&x, &y) in xs.iter().zip(ys) {
            let t = x - center;
            let pows = [1.0, t, t * t, t * t * t];
            for i in 0..4 {
                atb[i] += pows[i] * y;
                for j in 0..4 {
                    ata[i][j] += pows[i] * pows[j];
                }
            }
        }
        let coeffs = solve4(ata, atb);
        Self { center, coeffs }
    }

    fn eval(&self, x: f64) -> f64 {
        let t = x - self.center;
        ((self.coeffs[3] * t + self.coeffs[2]) * t + self.coeffs[1]) * t + self.coeffs[0]
    }

    /// Analytic integral over `[lo, hi]`.
    fn integrate(&self, lo: f64, hi: f64) -> f64 {
        let anti = |x: f64| {
            let t = x - self.center;
            let t2 = t * t;
            self.coeffs[0] * t
                + self.coeffs[1] * t2 / 2.0
                + self.coeffs[2] * t2 * t / 3.0
                + self.coeffs[3] * t2 * t2 / 4.0
        };
        anti(hi) - anti(lo)
    }
}

/// Gaussian elimination with partial pivoting on a 4x4 system.
fn solve4(mut a: [[f64; 4]; 4], mut b: [f64; 4]) -> [f64; 4] {
    for col in 0..4 {
        let pivot = (col..4)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..4 {
            let f = a[row][col] / a[col][col];
            for k in col..4 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0f64; 4];
    for row in (0..4).rev() {
        let mut acc = b[row];
        for k in row + 1..4 {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    x
}

/// Bjontegaard delta PSNR of `test` against `anchor`, in dB.
///
/// Each curve gets its own least-squares cubic fit of PSNR over log10
/// bitrate; the difference of the fits is integrated analytically over
/// the intersection of the two log-rate ranges and divided by the
/// interval width. Positive means `test` outperforms `anchor`.
pub fn bd_psnr(test: &RdCurve, anchor: &RdCurve) -> Result<f64> {
    let lt = test.log_rates();
    let la = anchor.log_rates();
    let lo = lt[0].max(la[0]);
    let hi = lt[lt.len() - 1].min(la[la.len() - 1]);
    if lo >= hi {
        return Err(Error::InvalidInput(
            "RD curves have no overlapping bitrate range".into(),
        ));
    }
    let ys_t: Vec<f64> = test.points().iter().map(|p| p.psnr_db).collect();
    let ys_a: Vec<f64> = anchor.points().iter().map(|p| p.psnr_db).collect();
    let fit_t = CenteredCubic::fit(&lt, &ys_t);
    let fit_a = CenteredCubic::fit(&la, &ys_a);
    Ok((fit_t.integrate(lo, hi) - fit_a.integrate(lo, hi)) / (hi - lo))
}
