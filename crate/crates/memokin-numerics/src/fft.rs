//! Thin wrappers around rustfft: forward/inverse transforms, periodic
//! spectral symbol application on uniform grids, and axis-wise transforms
//! for flattened tensor grids.

pub use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

/// In-place forward FFT (unnormalized, e^{-iωx} convention).
pub fn fft(buf: &mut [Complex<f64>]) {
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(buf.len()).process(buf);
}

/// In-place inverse FFT, normalized by 1/n.
pub fn ifft(buf: &mut [Complex<f64>]) {
    let n = buf.len();
    let mut planner = FftPlanner::new();
    planner.plan_fft_inverse(n).process(buf);
    let scale = 1.0 / n as f64;
    for v in buf.iter_mut() {
        *v *= scale;
    }
}

/// Signed angular frequency of bin `k` for `n` samples with spacing `h`:
/// ω_k = 2πk̃/(n·h) with k̃ the signed alias of k.
#[inline]
pub fn angular_frequency(k: usize, n: usize, h: f64) -> f64 {
    let signed = if k <= n / 2 { k as isize } else { k as isize - n as isize };
    2.0 * std::f64::consts::PI * signed as f64 / (n as f64 * h)
}

/// Apply a complex Fourier-multiplier `symbol(ω)` to a real periodic signal
/// sampled uniformly with spacing `h`; returns the real part of the result.
///
/// The caller must pick a symbol with the conjugate symmetry
/// symbol(−ω) = conj(symbol(ω)) for the output to be genuinely real
/// (e.g. (iω)^m for derivatives, |ω|^{1/2} for the quarter fractional
/// Laplacian's square root symbol).
pub fn apply_symbol<F: Fn(f64) -> Complex<f64>>(samples: &[f64], h: f64, symbol: F) -> Vec<f64> {
    let n = samples.len();
    let mut buf: Vec<Complex<f64>> = samples.iter().map(|&x| Complex::new(x, 0.0)).collect();
    fft(&mut buf);
    for (k, v) in buf.iter_mut().enumerate() {
        *v *= symbol(angular_frequency(k, n, h));
    }
    ifft(&mut buf);
    buf.into_iter().map(|c| c.re).collect()
}

/// m-th spectral derivative of a real periodic signal (symbol (iω)^m).
pub fn spectral_derivative(samples: &[f64], h: f64, m: u32) -> Vec<f64> {
    apply_symbol(samples, h, |w| Complex::new(0.0, w).powu(m))
}

/// FFT along one axis of a row-major flattened tensor of the given shape.
///
/// Lines along `axis` are gathered into a contiguous scratch buffer,
/// transformed, and scattered back; `inverse` applies the normalized
/// inverse transform instead.
pub fn fft_along_axis(data: &mut [Complex<f64>], shape: &[usize], axis: usize, inverse: bool) {
    let total: usize = shape.iter().product();
    assert_eq!(data.len(), total, "data length must match shape product");
    assert!(axis < shape.len());
    let n = shape[axis];
    let stride: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();
    let block = n * stride;

    let mut planner = FftPlanner::new();
    let plan = if inverse { planner.plan_fft_inverse(n) } else { planner.plan_fft_forward(n) };
    let mut line = vec![Complex::new(0.0, 0.0); n];
    let scale = 1.0 / n as f64;

    for o in 0..outer {
        for s in 0..stride {
            let base = o * block + s;
            for i in 0..n {
                line[i] = data[base + i * stride];
            }
            plan.process(&mut line);
            if inverse {
                for v in line.iter_mut() {
                    *v *= scale;
                }
            }
            for i in 0..n {
                data[base + i * stride] = line[i];
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectral_derivative_of_sine_is_cosine() {
        let n = 128;
        let h = 2.0 * std::f64::consts::PI / n as f64;
        let xs: Vec<f64> = (0..n).map(|i| i as f64 * h).collect();
        let samples: Vec<f64> = xs.iter().map(|x| (3.0 * x).sin()).collect();
        let d = spectral_derivative(&samples, h, 1);
        for (x, v) in xs.iter().zip(&d) {
            assert!((v - 3.0 * (3.0 * x).cos()).abs() < 1e-10, "x={x}");
        }
    }

    #[test]
    fn half_symbol_matches_cosine_eigenvalue() {
        // |ω|^{1/2} applied to cos(kx) must give k^{1/2}·cos(kx).
        let n = 256;
        let h = 2.0 * std::f64::consts::PI / n as f64;
        let k = 5.0;
        let samples: Vec<f64> = (0..n).map(|i| (k * i as f64 * h).cos()).collect();
        let out = apply_symbol(&samples, h, |w| Complex::new(w.abs().sqrt(), 0.0));
        for (i, v) in out.iter().enumerate() {
            let expect = k.sqrt() * (k * i as f64 * h).cos();
            assert!((v - expect).abs() < 1e-10, "i={i}");
        }
    }

    #[test]
    fn axis_transform_matches_direct_on_each_line() {
        let shape = [3usize, 4, 5];
        let total: usize = shape.iter().product();
        let mut data: Vec<Complex<f64>> =
            (0..total).map(|i| Complex::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos())).collect();
        let mut reference = data.clone();

        fft_along_axis(&mut data, &shape, 1, false);

        // Direct check: transform each axis-1 line of the reference copy.
        let stride = shape[2];
        let block = shape[1] * stride;
        for o in 0..shape[0] {
            for s in 0..stride {
                let mut line: Vec<Complex<f64>> =
                    (0..shape[1]).map(|i| reference[o * block + s + i * stride]).collect();
                fft(&mut line);
                for (i, v) in line.iter().enumerate() {
                    reference[o * block + s + i * stride] = *v;
                }
            }
        }
        for (a, b) in data.iter().zip(&reference) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn roundtrip_fft_ifft_identity() {
        let mut buf: Vec<Complex<f64>> =
            (0..64).map(|i| Complex::new((i as f64).sin(), (i as f64 * 0.5).cos())).collect();
        let orig = buf.clone();
        fft(&mut buf);
        ifft(&mut buf);
        for (a, b) in buf.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
