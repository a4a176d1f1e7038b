//! Layer primitives with forward and backward passes: 2-D convolution
//! (cross-correlation), pointwise activations and 2x2 average pooling.

use crate::error::{Error, Result};
use crate::nn::tensor::Tensor;

/// 2-D convolution of a (C, H, W) input with an (O, C, kh, kw) kernel
/// and an (O,) bias, zero padding on all sides.
pub fn conv2d(input: &Tensor, kernel: &Tensor, bias: &Tensor, padding: usize) -> Result<Tensor> {
    let (c, h, w) = expect_3d(input)?;
    let [o, kc, kh, kw] = expect_4d(kernel)?;
    if kc != c {
        return Err(Error::Shape(format!(
            "kernel expects {kc} input channels, input has {c}"
        )));
    }
    if bias.shape() != [o] {
        return Err(Error::Shape(format!("bias shape {:?} != [{o}]", bias.shape())));
    }
    if kh % 2 == 0 || kw % 2 == 0 {
        return Err(Error::InvalidInput("kernel spatial dims must be odd".into()));
    }
    let oh = (h + 2 * padding).checked_sub(kh - 1).filter(|&v| v > 0).ok_or_else(|| {
        Error::Shape(format!("input {h}x{w} too small for {kh}x{kw} kernel with padding {padding}"))
    })?;
    let ow = (w + 2 * padding).checked_sub(kw - 1).filter(|&v| v > 0).ok_or_else(|| {
        Error::Shape(format!("input {h}x{w} too small for {kh}x{kw} kernel with padding {padding}"))
    })?;

    let x = input.data();
    let k = kernel.data();
    let mut out = Tensor::zeros(&[o, oh, ow]);
    let od = out.data_mut();
    for oc in 0..o {
        let b = bias.data()[oc];
        for oy in 0..oh {
            for ox in 0..ow {
                let mut acc = b;
                for ic in 0..c {
                    for ky in 0..kh {
                        let iy = oy + ky;
                        if iy < padding || iy >= h + padding {
                            continue;
                        }
                        let iy = iy - padding;
                        let krow = ((oc * c + ic) * kh + ky) * kw;
                        let xrow = (ic * h + iy) * w;
                        for kx in 0..kw {
                            let ix = ox + kx;
                            if ix < padding || ix >= w + padding {
                                continue;
                            }
                            acc += k[krow + kx] * x[xrow + ix - padding];
                        }
                    }
                }
                od[(oc * oh + oy) * ow + ox] = acc;
            }
        }
    }
    out.debug_assert_finite();
    Ok(out)
}

/// Gradients of [`conv2d`] w.r.t. input, kernel and bias.
pub fn conv2d_backward(
    input: &Tensor,
    kernel: &Tensor,
    padding: usize,
    grad_out: &Tensor,
) -> (Tensor, Tensor, Tensor) {
    let (c, h, w) = expect_3d(input).expect("conv2d_backward on validated shapes");
    let [o, _, kh, kw] = expect_4d(kernel).expect("conv2d_backward on validated shapes");
    let (go_c, oh, ow) = expect_3d(grad_out).expect("conv2d_backward on validated shapes");
    debug_assert_eq!(go_c, o);

    let x = input.data();
    let k = kernel.data();
    let g = grad_out.data();

    let mut d_bias = Tensor::zeros(&[o]);
    for oc in 0..o {
        d_bias.data_mut()[oc] = g[oc * oh * ow..(oc + 1) * oh * ow].iter().sum();
    }

    let mut d_kernel = Tensor::zeros(kernel.shape());
    {
        let dk = d_kernel.data_mut();
        for oc in 0..o {
            for ic in 0..c {
                for ky in 0..kh {
                    for kx in 0..kw {
                        let mut acc = 0.0;
                        for oy in 0..oh {
                            let iy = oy + ky;
                            if iy < padding || iy >= h + padding {
                                continue;
                            }
                            let iy = iy - padding;
                            let grow = (oc * oh + oy) * ow;
                            let xrow = (ic * h + iy) * w;
                            for ox in 0..ow {
                                let ix = ox + kx;
                                if ix < padding || ix >= w + padding {
                                    continue;
                                }
                                acc += g[grow + ox] * x[xrow + ix - padding];
                            }
                        }
                        dk[((oc * c + ic) * kh + ky) * kw + kx] = acc;
                    }
                }
            }
        }
    }

    let mut d_input = Tensor::zeros(input.shape());
    {
        let dx = d_input.data_mut();
        for oc in 0..o {
            for oy in 0..oh {
                for ox in 0..ow {
                    let gv = g[(oc * oh + oy) * ow + ox];
                    if gv == 0.0 {
                        continue;
                    }
                    for ic in 0..c {
                        for ky in 0..kh {
                            let iy = oy + ky;
                            if iy < padding || iy >= h + padding {
                                continue;
                            }
                            let iy = iy - padding;
                            let krow = ((oc * c + ic) * kh + ky) * kw;
                            let xrow = (ic * h + iy) * w;
                            for kx in 0..kw {
                                let ix = ox + kx;
                                if ix < padding || ix >= w + padding {
                                    continue;
                                }
                                dx[xrow + ix - padding] += gv * k[krow + kx];
                            }
                        }
                    }
                }
            }
        }
    }
    (d_input, d_kernel, d_bias)
}

/// Pointwise nonlinearity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Relu,
    /// Slope 0.2 on the negative side.
    LeakyRelu,
    Sigmoid,
}

pub const LEAKY_SLOPE: f64 = 0.2;

pub fn activation(x: &Tensor, kind: Activation) -> Tensor {
    let mut out = x.clone();
    for v in out.data_mut() {
        *v = match kind {
            Activation::Relu => v.max(0.0),
            Activation::LeakyRelu => {
                if *v >= 0.0 {
                    *v
                } else {
                    LEAKY_SLOPE * *v
                }
            }
            Activation::Sigmoid => 1.0 / (1.0 + (-*v).exp()),
        };
    }
    out.debug_assert_finite();
    out
}

/// Backward pass; `x` is the forward *input*. relu'(0) is taken as 0.
pub fn activation_backward(x: &Tensor, kind: Activation, grad_out: &Tensor) -> Tensor {
    debug_assert_eq!(x.shape(), grad_out.shape());
    let mut out = grad_out.clone();
    for (g, &v) in out.data_mut().iter_mut().zip(x.data()) {
        *g *= match kind {
            Activation::Relu => {
                if v > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::LeakyRelu => {
                if v > 0.0 {
                    1.0
                } else {
                    LEAKY_SLOPE
                }
            }
            Activation::Sigmoid => {
                let s = 1.0 / (1.0 + (-v).exp());
                s * (1.0 - s)
            }
        };
    }
    out
}

/// 2x2 average pooling with stride 2; odd trailing rows/columns are
/// dropped (floor output size).
pub fn avg_pool2(x: &Tensor) -> Result<Tensor> {
    let (c, h, w) = expect_3d(x)?;
    let (oh, ow) = (h / 2, w / 2);
    if oh == 0 || ow == 0 {
        return Err(Error::Shape(format!("input {h}x{w} too small for 2x2 pooling")));
    }
    let xd = x.data();
    let mut out = Tensor::zeros(&[c, oh, ow]);
    let od = out.data_mut();
    for ic in 0..c {
        for oy in 0..oh {
            for ox in 0..ow {
                let base = (ic * h + 2 * oy) * w + 2 * ox;
                od[(ic * oh + oy) * ow + ox] =
                    (xd[base] + xd[base + 1] + xd[base + w] + xd[base + w + 1]) / 4.0;
            }
        }
    }
    Ok(out)
}

/// Backward of [`avg_pool2`]: each output gradient spreads evenly over
/// its 2x2 source window; dropped rows/columns receive zero.
pub fn avg_pool2_backward(input_shape: &[usize], grad_out: &Tensor) -> Tensor {
    let (c, h, w) = (input_shape[0], input_shape[1], input_shape[2]);
    let (oh, ow) = (h / 2, w / 2);
    let g = grad_out.data();
    let mut out = Tensor::zeros(input_shape);
    let od = out.data_mut();
    for ic in 0..c {
        for oy in 0..oh {
            for ox in 0..ow {
                let gv = g[(ic * oh + oy) * ow + ox] / 4.0;
                let base = (ic * h + 2 * oy) * w + 2 * ox;
                od[base] += gv;
                od[base + 1] += gv;
                od[base + w] += gv;
                od[base + w + 1] += gv;
            }
        }
    }
    out
}

fn expect_3d(t: &Tensor) -> Result<(usize, usize, usize)> {
    match t.shape() {
        [c, h, w] => Ok((*c, *h, *w)),
        other => Err(Error::Shape(format!("expected 3-D tensor, got {other:?}"))),
    }
}

fn expect_4d(t: &Tensor) -> Result<[usize; 4]> {
    match t.shape() {
        [o, c, kh, kw] => Ok([*o, *c, *kh, *kw]),
        other => Err(Error::Shape(format!("expected 4-D tensor, got {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn random_tensor(seed: u64, shape: &[usize]) -> Tensor {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let len = shape.iter().product();
        Tensor::from_vec(shape, (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
    }

    #[test]
    fn identity_kernel_preserves_input() {
        let x = random_tensor(1, &[1, 5, 5]);
        let mut k = Tensor::zeros(&[1, 1, 3, 3]);
        k.data_mut()[4] = 1.0; // center tap
        let b = Tensor::zeros(&[1]);
        let y = conv2d(&x, &k, &b, 1).unwrap();
        assert_eq!(y.shape(), x.shape());
        for (a, b) in x.data().iter().zip(y.data()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn all_ones_2x2_input_sums_to_four_everywhere() {
        let x = Tensor::from_vec(&[1, 2, 2], vec![1.0; 4]).unwrap();
        let k = Tensor::from_vec(&[1, 1, 3, 3], vec![1.0; 9]).unwrap();
        let b = Tensor::zeros(&[1]);
        let y = conv2d(&x, &k, &b, 1).unwrap();
        assert_eq!(y.shape(), &[1, 2, 2]);
        assert!(y.data().iter().all(|&v| (v - 4.0).abs() < 1e-15));
    }

    #[test]
    fn conv_matches_sliding_window_oracle() {
        let x = random_tensor(2, &[2, 5, 5]);
        let k = random_tensor(3, &[3, 2, 3, 3]);
        let b = random_tensor(4, &[3]);
        let y = conv2d(&x, &k, &b, 1).unwrap();

        // Naive quadruple loop with explicit zero padding.
        let get = |t: &Tensor, c: usize, yy: isize, xx: isize| -> f64 {
            if yy < 0 || yy >= 5 || xx < 0 || xx >= 5 {
                0.0
            } else {
                t.data()[(c * 5 + yy as usize) * 5 + xx as usize]
            }
        };
        for oc in 0..3 {
            for oy in 0..5isize {
                for ox in 0..5isize {
                    let mut acc = b.data()[oc];
                    for ic in 0..2 {
                        for ky in 0..3isize {
                            for kx in 0..3isize {
                                acc += k.data()[((oc * 2 + ic) * 3 + ky as usize) * 3 + kx as usize]
                                    * get(&x, ic, oy + ky - 1, ox + kx - 1);
                            }
                        }
                    }
                    let got = y.data()[(oc * 5 + oy as usize) * 5 + ox as usize];
                    assert!((got - acc).abs() < 1e-12, "({oc},{oy},{ox}): {got} vs {acc}");
                }
            }
        }
    }

    #[test]
    fn conv_rejects_channel_mismatch() {
        let x = random_tensor(5, &[2, 4, 4]);
        let k = random_tensor(6, &[1, 3, 3, 3]);
        let b = Tensor::zeros(&[1]);
        assert!(conv2d(&x, &k, &b, 1).is_err());
    }

    #[test]
    fn activations_at_reference_points() {
        let x = Tensor::from_vec(&[4], vec![-2.0, 3.0, 0.0, -0.5]).unwrap();
        let relu = activation(&x, Activation::Relu);
        assert_eq!(relu.data(), &[0.0, 3.0, 0.0, 0.0]);
        let leaky = activation(&x, Activation::LeakyRelu);
        assert!((leaky.data()[0] + 0.4).abs() < 1e-15);
        assert_eq!(leaky.data()[1], 3.0);
        let sig = activation(&Tensor::from_vec(&[1], vec![0.0]).unwrap(), Activation::Sigmoid);
        assert_eq!(sig.data()[0], 0.5);
    }

    #[test]
    fn avg_pool_mean_and_floor() {
        let x = Tensor::from_vec(&[1, 2, 2], vec![1.0, 3.0, 5.0, 7.0]).unwrap();
        let y = avg_pool2(&x).unwrap();
        assert_eq!(y.shape(), &[1, 1, 1]);
        assert_eq!(y.data()[0], 4.0);

        let x = random_tensor(7, &[1, 15, 15]);
        assert_eq!(avg_pool2(&x).unwrap().shape(), &[1, 7, 7]);
    }

    #[test]
    fn avg_pool_matches_direct_mean_oracle() {
        let x = random_tensor(8, &[2, 6, 7]);
        let y = avg_pool2(&x).unwrap();
        for c in 0..2 {
            for oy in 0..3 {
                for ox in 0..3 {
                    let mut acc = 0.0;
                    for dy in 0..2 {
                        for dx in 0..2 {
                            acc += x.data()[(c * 6 + 2 * oy + dy) * 7 + 2 * ox + dx];
                        }
                    }
                    let got = y.data()[(c * 3 + oy) * 3 + ox];
                    assert!((got - acc / 4.0).abs() < 1e-15);
                }
            }
        }
    }

    /// Central finite differences against the analytic backward passes.
    #[test]
    fn conv_backward_matches_finite_differences() {
        let x = random_tensor(9, &[2, 4, 4]);
        let k = random_tensor(10, &[2, 2, 3, 3]);
        let b = random_tensor(11, &[2]);
        // Scalar loss: weighted sum of outputs with fixed weights.
        let wts = random_tensor(12, &[2, 4, 4]);
        let loss = |x: &Tensor, k: &Tensor, b: &Tensor| -> f64 {
            conv2d(x, k, b, 1)
                .unwrap()
                .data()
                .iter()
                .zip(wts.data())
                .map(|(a, w)| a * w)
                .sum()
        };
        let (dx, dk, db) = conv2d_backward(&x, &k, 1, &wts);

        let h = 1e-6;
        let check = |analytic: &Tensor, mut perturb: Box<dyn FnMut(usize, f64) -> f64>| {
            for i in (0..analytic.len()).step_by(7) {
                let fp = perturb(i, h);
                let fm = perturb(i, -h);
                let num = (fp - fm) / (2.0 * h);
                let a = analytic.data()[i];
                assert!(
                    (a - num).abs() < 1e-6 * a.abs().max(num.abs()).max(1.0),
                    "coord {i}: analytic {a} vs numeric {num}"
                );
            }
        };
        let (xc, kc, bc) = (x.clone(), k.clone(), b.clone());
        check(
            &dx,
            Box::new(move |i, d| {
                let mut t = xc.clone();
                t.data_mut()[i] += d;
                loss(&t, &kc, &bc)
            }),
        );
        let (xc, kc, bc) = (x.clone(), k.clone(), b.clone());
        check(
            &dk,
            Box::new(move |i, d| {
                let mut t = kc.clone();
                t.data_mut()[i] += d;
                loss(&xc, &t, &bc)
            }),
        );
        let (xc, kc, bc) = (x, k, b);
        check(
            &db,
            Box::new(move |i, d| {
                let mut t = bc.clone();
                t.data_mut()[i] += d;
                loss(&xc, &kc, &t)
            }),
        );
    }
}
