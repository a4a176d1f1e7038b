//! Reading and writing video sequences and single frames.
//!
//! Supported containers:
//! - Y4M (`YUV4MPEG2`): self-describing dimensions and frame rate. Only
//!   the luma plane is consumed; chroma planes are skipped with a
//!   warning on stderr. Writing always emits `Cmono`.
//! - raw: bare concatenated 8-bit luma planes; dimensions must be
//!   supplied by the caller.
//! - PGM (binary `P5`, maxval 255) for single frames.
//!
//! All formats roundtrip bit-exactly.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::frame::{Frame, VideoSeq};

/// Video container format selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VideoFormat {
    Y4m,
    /// Raw luma planes; width/height are not stored in the file.
    Raw { width: usize, height: usize },
}

/// Chroma layout of a Y4M stream. Only the luma plane is kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Y4mColorspace {
    C420,
    C422,
    C444,
    Mono,
}

impl Y4mColorspace {
    fn parse(tag: &str) -> Result<Self> {
        if tag == "mono" {
            Ok(Y4mColorspace::Mono)
        } else if tag.starts_with("420") {
            Ok(Y4mColorspace::C420)
        } else if tag.starts_with("422") {
            Ok(Y4mColorspace::C422)
        } else if tag.starts_with("444") {
            Ok(Y4mColorspace::C444)
        } else {
            Err(Error::Parse(format!("unsupported Y4M colorspace C{tag}")))
        }
    }

    /// Bytes of chroma payload that follow the luma plane of one frame.
    fn chroma_bytes(self, w: usize, h: usize) -> usize {
        let (cw, ch) = match self {
            Y4mColorspace::Mono => return 0,
            Y4mColorspace::C420 => (w.div_ceil(2), h.div_ceil(2)),
            Y4mColorspace::C422 => (w.div_ceil(2), h),
            Y4mColorspace::C444 => (w, h),
        };
        2 * cw * ch
    }
}

/// Read a video sequence from `path` in the given format.
pub fn read_video(path: &Path, format: VideoFormat) -> Result<VideoSeq> {
    let bytes = fs::read(path)?;
    match format {
        VideoFormat::Y4m => parse_y4m(&bytes),
        VideoFormat::Raw { width, height } => parse_raw(&bytes, width, height),
    }
}

/// Write a video sequence to `path`.
///
/// For `Raw`, the configured dimensions must match the sequence.
pub fn write_video(seq: &VideoSeq, path: &Path, format: VideoFormat) -> Result<()> {
    let mut out: Vec<u8> = Vec::new();
    match format {
        VideoFormat::Y4m => {
            write!(
                out,
                "YUV4MPEG2 W{} H{} F{}:{} Cmono\n",
                seq.width(),
                seq.height(),
                seq.fps_num(),
                seq.fps_den()
            )?;
            for frame in seq.frames() {
                out.extend_from_slice(b"FRAME\n");
                out.extend_from_slice(frame.samples());
            }
        }
        VideoFormat::Raw { width, height } => {
            if width != seq.width() || height != seq.height() {
                return Err(Error::Shape(format!(
                    "raw format dims {width}x{height} do not match sequence {}x{}",
                    seq.width(),
                    seq.height()
                )));
            }
            for frame in seq.frames() {
                out.extend_from_slice(frame.samples());
            }
        }
    }
    fs::write(path, out)?;
    Ok(())
}

fn parse_raw(bytes: &[u8], width: usize, height: usize) -> Result<VideoSeq> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidInput("raw video dims must be positive".into()));
    }
    let plane = width * height;
    if bytes.is_empty() || bytes.len() % plane != 0 {
        return Err(Error::Parse(format!(
            "raw file of {} bytes is not a whole number of {width}x{height} frames",
            bytes.len()
        )));
    }
    let frames = bytes
        .chunks_exact(plane)
        .map(|c| Frame::new(width, height, c.to_vec()))
        .collect::<Result<Vec<_>>>()?;
    VideoSeq::new(frames, 30, 1)
}

fn parse_y4m(bytes: &[u8]) -> Result<VideoSeq> {
    let header_end = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| Error::Parse("Y4M stream has no header line".into()))?;
    let header = std::str::from_utf8(&bytes[..header_end])
        .map_err(|_| Error::Parse("Y4M header is not ASCII".into()))?;

    let mut fields = header.split(' ');
    if fields.next() != Some("YUV4MPEG2") {
        return Err(Error::Parse("missing YUV4MPEG2 signature".into()));
    }

    let mut width = 0usize;
    let mut height = 0usize;
    let mut fps = (30u32, 1u32);
    // Default colorspace when no C tag is present.
    let mut colorspace = Y4mColorspace::C420;
    for field in fields {
        let (tag, value) = match field.split_at_checked(1) {
            Some(parts) => parts,
            None => continue,
        };
        match tag {
            "W" => {
                width = value
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad Y4M width {value:?}")))?
            }
            "H" => {
                height = value
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad Y4M height {value:?}")))?
            }
            "F" => {
                let (n, d) = value
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("bad Y4M frame rate {value:?}")))?;
                let n = n.parse().map_err(|_| Error::Parse(format!("bad Y4M frame rate {value:?}")))?;
                let d = d.parse().map_err(|_| Error::Parse(format!("bad Y4M frame rate {value:?}")))?;
                fps = (n, d);
            }
            "C" => colorspace = Y4mColorspace::parse(value)?,
            // Interlacing, aspect ratio and X extensions are irrelevant here.
            "I" | "A" | "X" => {}
            _ => {}
        }
    }
    if width == 0 || height == 0 {
        return Err(Error::Parse("Y4M header is missing W or H".into()));
    }

    let luma = width * height;
    let chroma = colorspace.chroma_bytes(width, height);
    if chroma > 0 {
        eprintln!("warning: Y4M chroma planes are discarded, keeping luma only");
    }

    let mut frames = Vec::new();
    let mut pos = header_end + 1;
    while pos < bytes.len() {
        let line_end = bytes[pos..]
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| Error::Parse("unterminated FRAME marker".into()))?;
        let marker = &bytes[pos..pos + line_end];
        if !marker.starts_with(b"FRAME") {
            return Err(Error::Parse("expected FRAME marker".into()));
        }
        pos += line_end + 1;
        if bytes.len() < pos + luma + chroma {
            return Err(Error::Parse(format!(
                "truncated Y4M payload at frame {}",
                frames.len()
            )));
        }
        frames.push(Frame::new(width, height, bytes[pos..pos + luma].to_vec())?);
        pos += luma + chroma;
    }
    if frames.is_empty() {
        return Err(Error::Parse("Y4M stream contains no frames".into()));
    }
    VideoSeq::new(frames, fps.0, fps.1)
}

/// Write a single frame as binary PGM (P5, maxval 255).
pub fn write_pgm(frame: &Frame, path: &Path) -> Result<()> {
    let mut out = Vec::with_capacity(frame.samples().len() + 32);
    write!(out, "P5\n{} {}\n255\n", frame.width(), frame.height())?;
    out.extend_from_slice(frame.samples());
    fs::write(path, out)?;
    Ok(())
}

/// Read a binary PGM (P5) frame. Comments are tolerated in the header;
/// maxval must be 255.
pub fn read_pgm(path: &Path) -> Result<Frame> {
    let bytes = fs::read(path)?;
    parse_pgm(&bytes)
}

fn parse_pgm(bytes: &[u8]) -> Result<Frame> {
    let mut pos = 0usize;

    // Next whitespace-delimited header token, skipping `#` comments.
    let mut next_token = |bytes: &[u8]| -> Result<String> {
        loop {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos < bytes.len() && bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
                continue;
            }
            break;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(Error::Parse("truncated PGM header".into()));
        }
        Ok(String::from_utf8_lossy(&bytes[start..pos]).into_owned())
    };

    let magic = next_token(&bytes)?;
    if magic != "P5" {
        return Err(Error::Parse(format!("unsupported PNM type {magic:?}, only P5 is accepted")));
    }
    let width: usize = next_token(&bytes)?
        .parse()
        .map_err(|_| Error::Parse("bad PGM width".into()))?;
    let height: usize = next_token(&bytes)?
        .parse()
        .map_err(|_| Error::Parse("bad PGM height".into()))?;
    let maxval: usize = next_token(&bytes)?
        .parse()
        .map_err(|_| Error::Parse("bad PGM maxval".into()))?;
    if maxval != 255 {
        return Err(Error::Parse(format!("PGM maxval must be 255, got {maxval}")));
    }
    // Exactly one whitespace byte separates the header from the raster.
    pos += 1;
    if bytes.len() < pos + width * height {
        return Err(Error::Parse("truncated PGM raster".into()));
    }
    Frame::new(width, height, bytes[pos..pos + width * height].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn random_seq(seed: u64, n: usize, w: usize, h: usize) -> VideoSeq {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let frames = (0..n)
            .map(|_| {
                let samples = (0..w * h).map(|_| rng.gen()).collect();
                Frame::new(w, h, samples).unwrap()
            })
            .collect();
        VideoSeq::new(frames, 30, 1).unwrap()
    }

    #[test]
    fn raw_two_frames_from_32_bytes() {
        let seq = parse_raw(&[7u8; 32], 4, 4).unwrap();
        assert_eq!(seq.len(), 2);
        assert_eq!(seq.width(), 4);
    }

    #[test]
    fn raw_truncated_payload_rejected() {
        let err = parse_raw(&[0u8; 33], 4, 4).unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
    }

    #[test]
    fn y4m_header_parse() {
        let mut data = b"YUV4MPEG2 W16 H16 F30:1\n".to_vec();
        for _ in 0..2 {
            data.extend_from_slice(b"FRAME\n");
            data.extend_from_slice(&[9u8; 16 * 16]); // luma
            data.extend_from_slice(&[128u8; 16 * 16 / 2]); // default C420 chroma
        }
        let seq = parse_y4m(&data).unwrap();
        assert_eq!((seq.width(), seq.height(), seq.len()), (16, 16, 2));
        assert_eq!(seq.fps_num(), 30);
        assert_eq!(seq.fps_den(), 1);
        assert!(seq.frames()[0].samples().iter().all(|&v| v == 9));
    }

    #[test]
    fn y4m_malformed_header_rejected() {
        assert!(parse_y4m(b"JUNK W4 H4 F30:1\nFRAME\n").is_err());
        assert!(parse_y4m(b"YUV4MPEG2 W0 H4 F30:1\n").is_err());
        assert!(parse_y4m(b"YUV4MPEG2 W4 F30:1\n").is_err());
    }

    #[test]
    fn y4m_truncated_frame_rejected() {
        let mut data = b"YUV4MPEG2 W4 H4 F25:1 Cmono\n".to_vec();
        data.extend_from_slice(b"FRAME\n");
        data.extend_from_slice(&[0u8; 15]);
        assert!(matches!(parse_y4m(&data), Err(Error::Parse(_))));
    }

    #[test]
    fn y4m_roundtrip_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("seq.y4m");
        let seq = random_seq(11, 3, 8, 8);
        write_video(&seq, &path, VideoFormat::Y4m).unwrap();
        let back = read_video(&path, VideoFormat::Y4m).unwrap();
        assert_eq!(seq, back);
    }

    #[test]
    fn raw_roundtrip_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("seq.raw");
        let seq = random_seq(12, 2, 8, 8);
        let fmt = VideoFormat::Raw { width: 8, height: 8 };
        write_video(&seq, &path, fmt).unwrap();
        let back = read_video(&path, fmt).unwrap();
        assert_eq!(seq, back);
    }

    #[test]
    fn unwritable_path_errors() {
        let seq = random_seq(13, 1, 4, 4);
        let err = write_video(&seq, Path::new("/nonexistent-dir/v.y4m"), VideoFormat::Y4m);
        assert!(matches!(err, Err(Error::Io(_))));
    }

    #[test]
    fn pgm_roundtrip_48x48() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.pgm");
        let frame = random_seq(14, 1, 48, 48).frames()[0].clone();
        write_pgm(&frame, &path).unwrap();
        assert_eq!(read_pgm(&path).unwrap(), frame);
    }

    #[test]
    fn pgm_rejects_other_types_and_maxval() {
        assert!(parse_pgm(b"P2\n2 2\n255\n1 2 3 4").is_err());
        assert!(parse_pgm(b"P6\n2 2\n255\nxxxxxxxxxxxx").is_err());
        let mut high = b"P5\n2 2\n65535\n".to_vec();
        high.extend_from_slice(&[0u8; 8]);
        assert!(parse_pgm(&high).is_err());
    }

    #[test]
    fn pgm_header_comments_tolerated() {
        // Hand-built fixture with comment lines interleaved in the header.
        let mut data = b"P5\n# made by hand\n3 # width then height\n2\n# maxval next\n255\n".to_vec();
        data.extend_from_slice(&[10, 20, 30, 40, 50, 60]);
        let frame = parse_pgm(&data).unwrap();
        assert_eq!((frame.width(), frame.height()), (3, 2));
        assert_eq!(frame.samples(), &[10, 20, 30, 40, 50, 60]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn any_sequence_roundtrips_in_all_formats(
            seed in 0u64..1000,
            n in 1usize..4,
            w in 1usize..12,
            h in 1usize..12,
        ) {
            let dir = tempfile::tempdir().unwrap();
            let seq = random_seq(seed, n, w, h);
            for (name, fmt) in [("a.y4m", VideoFormat::Y4m), ("a.raw", VideoFormat::Raw { width: w, height: h })] {
                let path = dir.path().join(name);
                write_video(&seq, &path, fmt).unwrap();
                prop_assert_eq!(&read_video(&path, fmt).unwrap(), &seq);
            }
        }
    }
}
