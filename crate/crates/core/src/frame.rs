//! Grayscale frame and video sequence types.

use crate::error::{Error, Result};

/// One 8-bit grayscale image plane, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    width: usize,
    height: usize,
    samples: Vec<u8>,
}

impl Frame {
    pub fn new(width: usize, height: usize, samples: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidInput(format!(
                "frame dimensions must be positive, got {width}x{height}"
            )));
        }
        if samples.len() != width * height {
            return Err(Error::Shape(format!(
                "frame {width}x{height} needs {} samples, got {}",
                width * height,
                samples.len()
            )));
        }
        Ok(Self { width, height, samples })
    }

    /// Frame filled with a constant value.
    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    /// Sample at (x, y); coordinates must be in bounds.
    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        debug_assert!(x < self.width && y < self.height);
        self.samples[y * self.width + x]
    }

    /// Sample at (x, y) with edge replication outside the frame.
    #[inline]
    pub fn get_clamped(&self, x: isize, y: isize) -> u8 {
        let cx = x.clamp(0, self.width as isize - 1) as usize;
        let cy = y.clamp(0, self.height as isize - 1) as usize;
        self.samples[cy * self.width + cx]
    }

    pub fn same_dims(&self, other: &Frame) -> bool {
        self.width == other.width && self.height == other.height
    }
}

/// An ordered list of equally sized frames plus a frame rate.
///
/// The frame rate is metadata only; it enters the toolkit exclusively
/// through the kbps computation of rate-distortion sweeps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VideoSeq {
    frames: Vec<Frame>,
    fps_num: u32,
    fps_den: u32,
}

impl VideoSeq {
    pub fn new(frames: Vec<Frame>, fps_num: u32, fps_den: u32) -> Result<Self> {
        if frames.is_empty() {
            return Err(Error::InvalidInput("video sequence has no frames".into()));
        }
        if fps_num == 0 || fps_den == 0 {
            return Err(Error::InvalidInput(format!(
                "frame rate must be positive, got {fps_num}:{fps_den}"
            )));
        }
        let (w, h) = (frames[0].width(), frames[0].height());
        if let Some(bad) = frames.iter().find(|f| f.width() != w || f.height() != h) {
            return Err(Error::Shape(format!(
                "all frames must be {w}x{h}, found {}x{}",
                bad.width(),
                bad.height()
            )));
        }
        Ok(Self { frames, fps_num, fps_den })
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn frame(&self, i: usize) -> &Frame {
        &self.frames[i]
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn width(&self) -> usize {
        self.frames[0].width()
    }

    pub fn height(&self) -> usize {
        self.frames[0].height()
    }

    pub fn fps_num(&self) -> u32 {
        self.fps_num
    }

    pub fn fps_den(&self) -> u32 {
        self.fps_den
    }

    pub fn fps(&self) -> f64 {
        self.fps_num as f64 / self.fps_den as f64
    }
}
