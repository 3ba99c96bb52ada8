//! Medium parameters, time grids, and the synthesized kernel tables.

use crate::KernelError;
use memokin_formfactor::RadialProfile;
use memokin_numerics::quad::trapezoid;
use memokin_numerics::spline::{CubicSpline, SplineBc};

/// Parameters of the ambient medium the memory kernel is synthesized from:
/// dimension `n >= 3`, wave speed `c > 0`, and the nonnegative radial
/// coupling profile.
#[derive(Debug, Clone, Copy)]
pub struct MediumParams {
    pub n: usize,
    pub c: f64,
    pub sigma2: RadialProfile,
}

impl MediumParams {
    pub fn validate(&self) -> Result<(), KernelError> {
        if self.n < 3 {
            return Err(KernelError::UnsupportedDimension { n: self.n });
        }
        assert!(self.c > 0.0, "wave speed must be positive");
        Ok(())
    }

    /// Half-width of the support of the projected profile in retarded time,
    /// `rho / c`; the kernel's exact support bound is twice this for odd
    /// `n`.
    pub fn retarded_support(&self) -> f64 {
        self.sigma2.support_radius() / self.c
    }
}

/// A uniform time grid `t_i = i * dt`, `i = 0..=steps`.
#[derive(Debug, Clone, Copy)]
pub struct TimeGrid {
    pub dt: f64,
    pub steps: usize,
}

impl TimeGrid {
    pub fn new(dt: f64, steps: usize) -> Self {
        assert!(dt > 0.0 && steps >= 2);
        TimeGrid { dt, steps }
    }

    pub fn t_end(&self) -> f64 {
        self.dt * self.steps as f64
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.steps).map(|i| i as f64 * self.dt).collect()
    }
}

/// The synthesized memory kernel on a uniform time grid: the force kernel
/// `p`, its primitive `P(t) = -integral_t^inf p` (even in `t`; `p` extends
/// oddly, `p(-t) = -p(t)`), the coupling strength `kappa = -P(0) > 0`, and
/// the effective window beyond which the `L1` tail of `P` is below
/// `tol_tail`.
#[derive(Debug, Clone)]
pub struct KernelTable {
    pub dt: f64,
    pub p_samples: Vec<f64>,
    /// Samples of the primitive `P` (capital P in the usual notation).
    pub big_p_samples: Vec<f64>,
    pub kappa: f64,
    /// Effective support time: the `L1` tail of `P` beyond `window` is
    /// below `tol_tail * ||P||_L1`.
    pub window: f64,
    pub tol_tail: f64,
    /// Exact support bound `2 rho / c` when the medium dimension is odd
    /// (samples beyond it are identically zero); `None` for even
    /// dimensions, where `P` only decays.
    pub exact_support: Option<f64>,
    p_spline: CubicSpline,
    big_p_spline: CubicSpline,
}

/// Default tail tolerance for the effective window.
pub const DEFAULT_TOL_TAIL: f64 = 1e-6;

impl KernelTable {
    /// Assemble a table from synthesized samples, computing `kappa` and the
    /// window and building the interpolating splines.
    pub fn assemble(
        dt: f64,
        p_samples: Vec<f64>,
        big_p_samples: Vec<f64>,
        tol_tail: f64,
        exact_support: Option<f64>,
        tail_decay_power: Option<f64>,
    ) -> Self {
        assert_eq!(p_samples.len(), big_p_samples.len());
        assert!(p_samples.len() >= 3);
        let kappa = -big_p_samples[0];

        // |P| tail integrals from each grid point to the end, plus a
        // power-law estimate of the mass beyond the grid for kernels
        // without compact support.
        let n_samples = big_p_samples.len();
        let t_end = dt * (n_samples - 1) as f64;
        let beyond_grid = match (exact_support, tail_decay_power) {
            (Some(_), _) => 0.0,
            (None, Some(alpha)) if alpha > 1.0 => {
                big_p_samples[n_samples - 1].abs() * t_end / (alpha - 1.0)
            }
            _ => 0.0,
        };
        let mut suffix = vec![0.0; n_samples];
        suffix[n_samples - 1] = beyond_grid;
        for i in (0..n_samples - 1).rev() {
            suffix[i] = suffix[i + 1]
                + 0.5 * dt * (big_p_samples[i].abs() + big_p_samples[i + 1].abs());
        }
        let l1 = suffix[0];
        let mut window = t_end;
        for (i, &s) in suffix.iter().enumerate() {
            if s < tol_tail * l1 {
                window = dt * i as f64;
                break;
            }
        }
        if let Some(bound) = exact_support {
            window = window.min(bound).min(t_end);
        }

        // p'(0) is a free interior slope (natural end); P'(0) = p(0) = 0.
        let p_spline = CubicSpline::new(0.0, dt, p_samples.clone(), SplineBc::Natural, SplineBc::Natural)
            .expect("p spline");
        let big_p_spline =
            CubicSpline::new(0.0, dt, big_p_samples.clone(), SplineBc::Clamped(0.0), SplineBc::Natural)
                .expect("P spline");

        KernelTable {
            dt,
            p_samples,
            big_p_samples,
            kappa,
            window,
            tol_tail,
            exact_support,
            p_spline,
            big_p_spline,
        }
    }

    pub fn len(&self) -> usize {
        self.p_samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p_samples.is_empty()
    }

    pub fn t_end(&self) -> f64 {
        self.dt * (self.len() - 1) as f64
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|i| i as f64 * self.dt).collect()
    }

    /// Interpolated `p(t)` for `t >= 0`; odd extension for `t < 0`; zero
    /// beyond the exact support bound when one exists.
    pub fn p_at(&self, t: f64) -> f64 {
        let sign = if t < 0.0 { -1.0 } else { 1.0 };
        let t = t.abs();
        if t > self.t_end() {
            return 0.0;
        }
        if let Some(bound) = self.exact_support {
            if t >= bound {
                return 0.0;
            }
        }
        sign * self.p_spline.value(t)
    }

    /// Interpolated `P(t)` (even in `t`), zero beyond the exact support.
    pub fn big_p_at(&self, t: f64) -> f64 {
        let t = t.abs();
        if t > self.t_end() {
            return 0.0;
        }
        if let Some(bound) = self.exact_support {
            if t >= bound {
                return 0.0;
            }
        }
        self.big_p_spline.value(t)
    }

    /// `||P||_{L1(R)} = 2 * integral_0^inf |P|` by the even symmetry
    /// (grid part only; the beyond-grid tail is below `tol_tail` by
    /// construction of the window).
    pub fn big_p_l1(&self) -> f64 {
        let abs: Vec<f64> = self.big_p_samples.iter().map(|v| v.abs()).collect();
        2.0 * trapezoid(&abs, self.dt)
    }

    /// Cumulative `integral_0^{t_i} |p|`, one entry per sample.
    pub fn p_l1_prefix(&self) -> Vec<f64> {
        memokin_numerics::quad::cumulative_trapezoid(
            &self.p_samples.iter().map(|v| v.abs()).collect::<Vec<_>>(),
            self.dt,
        )
    }

    /// `||p||_{L1(0, t_end)}`.
    pub fn p_l1(&self) -> f64 {
        let abs: Vec<f64> = self.p_samples.iter().map(|v| v.abs()).collect();
        trapezoid(&abs, self.dt)
    }
}
