//! Memory kernel synthesis through the autocorrelation factorization.
//!
//! The primitive factorizes as `P = -(q1 reversed) * q1`, i.e.
//! `P(t) = -integral q1(u) q1(u+t) du`, where `q1` is built from the
//! projected profile `proj(t)` (the hyperplane projection of `sigma2`):
//!
//! * odd  `n = 2m+3`: `q1(s) = (a_n / sqrt(c)) proj^{(m)}(c s)`
//! * even `n = 2m+4`: additionally apply `(-Delta)^{1/4}` in `s`
//!
//! with `a_n = sqrt(pi |S^{n-1}|) / (2 pi)^{n/2}`. Everything is carried
//! out on one periodic grid: spectral differentiation, the fractional
//! factor, and the correlation by FFT. For odd `n` all supports fit inside
//! the period, making the computation exact up to sampling error, and the
//! synthesized samples honor the support bound `|t| >= 2 rho / c` as exact
//! zeros. For even `n` the fractional factor produces algebraic tails and
//! the periodization contributes `O((support/period)^{n-2})`, so the
//! period is padded wide and cross-route tolerances are looser.

use crate::table::{KernelTable, MediumParams, TimeGrid};
use crate::KernelError;
use memokin_formfactor::ProjectedProfile;
use memokin_numerics::fft::{fft, ifft, Complex};
use memokin_numerics::spline::{CubicSpline, SplineBc};
use memokin_numerics::sphere::unit_sphere_area;

/// Samples across the projected profile when tabulating it.
const PROJECTION_SAMPLES: usize = 2048;

/// Synthesize the kernel table through the autocorrelation route.
pub fn synthesize_p_autocorrelation(
    params: &MediumParams,
    grid: &TimeGrid,
) -> Result<KernelTable, KernelError> {
    params.validate()?;
    let n = params.n;
    let c = params.c;
    let odd = n % 2 == 1;
    let m = if odd { (n - 3) / 2 } else { (n - 4) / 2 };
    let support = params.retarded_support();

    // Period half-width: odd kernels are exactly compact, so a modest pad
    // suffices; even kernels have algebraic tails from the fractional
    // factor and get a wide pad.
    let half_period = if odd {
        (2.5 * support).max(0.55 * grid.t_end().min(2.0 * support) + support)
    } else {
        (12.0 * support).max(1.2 * grid.t_end() + 2.0 * support)
    };
    let mut fft_len: usize = 1024;
    while (2.0 * half_period / fft_len as f64) > support / 512.0 {
        fft_len *= 2;
        if fft_len > (1 << 22) {
            return Err(KernelError::QuadratureNotConverged {
                what: "autocorrelation grid sizing",
                delta: fft_len as f64,
                tol: (1 << 22) as f64,
            });
        }
    }
    let h = 2.0 * half_period / fft_len as f64;

    // Sample proj(c s) with the origin at index zero, negatives wrapped.
    let proj = ProjectedProfile::new(&params.sigma2, n, PROJECTION_SAMPLES);
    let mut buf: Vec<Complex<f64>> = (0..fft_len)
        .map(|i| {
            let s = if i <= fft_len / 2 { i as f64 } else { i as f64 - fft_len as f64 } * h;
            Complex::new(proj.value(c * s), 0.0)
        })
        .collect();
    fft(&mut buf);

    // q1 spectrum: scale * (i omega)^m [* |omega|^{1/2} for even n] applied
    // to the spectrum of proj(c .). The derivative theorem converts the
    // m-th s-derivative of the sampled composition into proj^{(m)}(c s)
    // times c^m, hence the compensating c^{-m}.
    let a_n = (std::f64::consts::PI * unit_sphere_area(n)).sqrt()
        / (2.0 * std::f64::consts::PI).powf(n as f64 / 2.0);
    let scale = if odd {
        (a_n / c.sqrt()) * c.powi(-(m as i32))
    } else {
        (a_n / c.sqrt()) * c.powf(-(m as f64) - 0.5)
    };
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut q_spec = buf;
    for (k, v) in q_spec.iter_mut().enumerate() {
        let signed = if k <= fft_len / 2 { k as f64 } else { k as f64 - fft_len as f64 };
        let omega = two_pi * signed / (fft_len as f64 * h);
        let mut factor = Complex::new(0.0, omega).powu(m as u32);
        if !odd {
            factor *= Complex::new(omega.abs().sqrt(), 0.0);
        }
        *v *= factor * scale;
    }

    // Correlations by FFT: P(lag) = -h * ifft(|Q|^2),
    // p(lag) = -h * ifft(conj(Q) . (i omega Q)).
    let mut p_big_spec: Vec<Complex<f64>> =
        q_spec.iter().map(|q| Complex::new(q.norm_sqr(), 0.0)).collect();
    let mut p_spec: Vec<Complex<f64>> = q_spec
        .iter()
        .enumerate()
        .map(|(k, q)| {
            let signed = if k <= fft_len / 2 { k as f64 } else { k as f64 - fft_len as f64 };
            let omega = two_pi * signed / (fft_len as f64 * h);
            q.conj() * Complex::new(0.0, omega) * q
        })
        .collect();
    ifft(&mut p_big_spec);
    ifft(&mut p_spec);

    // Resample the lag arrays onto the requested grid through splines.
    let usable = fft_len / 2;
    let lag_count = (((grid.t_end() / h).ceil() as usize) + 8).min(usable);
    let big_p_lags: Vec<f64> = (0..=lag_count).map(|l| -h * p_big_spec[l].re).collect();
    let p_lags: Vec<f64> = (0..=lag_count).map(|l| -h * p_spec[l].re).collect();
    let big_p_spline =
        CubicSpline::new(0.0, h, big_p_lags, SplineBc::Clamped(0.0), SplineBc::Natural)?;
    let p_spline = CubicSpline::new(0.0, h, p_lags, SplineBc::Natural, SplineBc::Natural)?;

    let bound = 2.0 * support;
    let times = grid.times();
    let mut p_samples: Vec<f64> = times
        .iter()
        .map(|&t| if odd && t >= bound { 0.0 } else { p_spline.value(t) })
        .collect();
    // p(0) = 0 exactly: the correlation derivative at zero lag is the
    // integral of (q^2)'/2 over the whole line.
    p_samples[0] = 0.0;
    let big_p_samples: Vec<f64> = times
        .iter()
        .map(|&t| if odd && t >= bound { 0.0 } else { big_p_spline.value(t) })
        .collect();

    Ok(KernelTable::assemble(
        grid.dt,
        p_samples,
        big_p_samples,
        crate::table::DEFAULT_TOL_TAIL,
        if odd { Some(bound) } else { None },
        Some((n as f64 - 2.0).max(1.5)),
    ))
}
