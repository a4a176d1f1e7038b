//! Orthonormal 8x8 DCT (type II forward, type III inverse), separable.

use std::sync::OnceLock;

const N: usize = 8;

/// Basis matrix: `BASIS[u][x] = a(u) cos((2x+1) u pi / 16)` with
/// `a(0) = sqrt(1/8)`, `a(u>0) = 1/2`, so rows are orthonormal.
fn basis() -> &'static [[f64; N]; N] {
    static BASIS: OnceLock<[[f64; N]; N]> = OnceLock::new();
    BASIS.get_or_init(|| {
        let mut m = [[0.0; N]; N];
        for (u, row) in m.iter_mut().enumerate() {
            let a = if u == 0 { (1.0 / N as f64).sqrt() } else { (2.0 / N as f64).sqrt() };
            for (x, v) in row.iter_mut().enumerate() {
                *v = a * ((2 * x + 1) as f64 * u as f64 * std::f64::consts::PI / (2.0 * N as f64)).cos();
            }
        }
        m
    })
}

/// Forward 2-D DCT of a row-major 8x8 block. Rows are transformed first,
/// then columns; the order is fixed so results are reproducible.
pub fn dct8_forward(block: &[f64; 64]) -> [f64; 64] {
    let c = basis();
    let mut tmp = [0.0f64; 64];
    for y in 0..N {
        for u in 0..N {
            let mut acc = 0.0;
            for x in 0..N {
                acc += c[u][x] * block[y * N + x];
            }
            tmp[y * N + u] = acc;
        }
    }
    let mut out = [0.0f64; 64];
    for u in 0..N {
        for v in 0..N {
            let mut acc = 0.0;
            for y in 0..N {
                acc += c[v][y] * tmp[y * N + u];
            }
            out[v * N + u] = acc;
        }
    }
    out
}

/// Inverse 2-D DCT; exact inverse of [`dct8_forward`] up to roundoff.
pub fn dct8_inverse(coefs: &[f64; 64]) -> [f64; 64] {
    let c = basis();
    let mut tmp = [0.0f64; 64];
    for v in 0..N {
        for x in 0..N {
            let mut acc = 0.0;
            for u in 0..N {
                acc += c[u][x] * coefs[v * N + u];
            }
            tmp[v * N + x] = acc;
        }
    }
    let mut out = [0.0f64; 64];
    for x in 0..N {
        for y in 0..N {
            let mut acc = 0.0;
            for v in 0..N {
                acc += c[v][y] * tmp[v * N + x];
            }
            out[y * N + x] = acc;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn random_block(seed: u64) -> [f64; 64] {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut b = [0.0; 64];
        for v in &mut b {
            *v = rng.gen_range(-255.0..=255.0);
        }
        b
    }

    #[test]
    fn constant_block_concentrates_in_dc() {
        let block = [128.0; 64];
        let coefs = dct8_forward(&block);
        assert!((coefs[0] - 1024.0).abs() < 1e-9, "DC {}", coefs[0]);
        for (i, &c) in coefs.iter().enumerate().skip(1) {
            assert!(c.abs() < 1e-9, "AC[{i}] = {c}");
        }
    }

    #[test]
    fn inverse_of_forward_is_identity() {
        let block = random_block(1);
        let back = dct8_inverse(&dct8_forward(&block));
        for (a, b) in block.iter().zip(&back) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn energy_preserved_and_matches_projection_oracle() {
        let block = random_block(2);
        let coefs = dct8_forward(&block);

        let ex: f64 = block.iter().map(|v| v * v).sum();
        let ec: f64 = coefs.iter().map(|v| v * v).sum();
        assert!((ex - ec).abs() < 1e-9 * ex.max(1.0), "{ex} vs {ec}");

        // Direct O(N^4) projection onto each 2-D basis function.
        let a = |u: usize| if u == 0 { (1.0f64 / 8.0).sqrt() } else { 0.5 };
        for u in 0..8 {
            for v in 0..8 {
                let mut acc = 0.0;
                for y in 0..8 {
                    for x in 0..8 {
                        acc += block[y * 8 + x]
                            * a(u) * ((2 * x + 1) as f64 * u as f64 * std::f64::consts::PI / 16.0).cos()
                            * a(v) * ((2 * y + 1) as f64 * v as f64 * std::f64::consts::PI / 16.0).cos();
                    }
                }
                let got = coefs[v * 8 + u];
                assert!((got - acc).abs() < 1e-12 * acc.abs().max(1.0), "({u},{v}): {got} vs {acc}");
            }
        }
    }
}
