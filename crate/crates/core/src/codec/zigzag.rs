//! Standard JPEG zigzag scan for 8x8 blocks.

/// Scan position -> row-major block index.
pub const ZIGZAG: [usize; 64] = [
    0, 1, 8, 16, 9, 2, 3, 10, 17, 24, 32, 25, 18, 11, 4, 5, 12, 19, 26, 33, 40, 48, 41, 34, 27,
    20, 13, 6, 7, 14, 21, 28, 35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51, 58,
    59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63,
];

/// Reorder a row-major block into scan order.
pub fn zigzag_scan(block: &[i32; 64]) -> [i32; 64] {
    let mut out = [0i32; 64];
    for (scan, &idx) in ZIGZAG.iter().enumerate() {
        out[scan] = block[idx];
    }
    out
}

/// Exact inverse of [`zigzag_scan`].
pub fn zigzag_unscan(scanned: &[i32; 64]) -> [i32; 64] {
    let mut out = [0i32; 64];
    for (scan, &idx) in ZIGZAG.iter().enumerate() {
        out[idx] = scanned[scan];
    }
    out
}
