//! Invariant audit for synthesized kernel tables.
//!
//! `validate_kernel` re-derives every structural invariant a table is
//! supposed to satisfy and reports each one as pass/fail instead of
//! erroring, so callers can log the full picture of a corrupted table.

use crate::spectrum::table_spectrum;
use crate::table::KernelTable;

/// Outcome of one invariant check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    /// Stable identifier of the invariant.
    pub name: &'static str,
    /// Whether the invariant held.
    pub passed: bool,
    /// Human-readable measurement backing the verdict.
    pub detail: String,
}

/// Aggregated audit over all table invariants.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    /// One entry per invariant, in a fixed order.
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    /// True when every check passed.
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Look up a check by name.
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Audit a synthesized table against its structural invariants.
pub fn validate_kernel(table: &KernelTable) -> ValidationReport {
    let mut checks = Vec::new();
    let dt = table.dt;
    let n_samples = table.p_samples.len();

    // p(0) = 0 exactly: the kernel is the derivative of an even function.
    checks.push(CheckResult {
        name: "p_zero_at_origin",
        passed: table.p_samples[0] == 0.0,
        detail: format!("p(0) = {:e}", table.p_samples[0]),
    });

    // Odd extension: the accessor must report p(-t) = -p(t).
    let odd_ok = (1..n_samples.min(32)).all(|i| {
        let t = i as f64 * dt;
        table.p_at(-t) == -table.p_at(t)
    });
    checks.push(CheckResult {
        name: "p_odd_extension",
        passed: odd_ok,
        detail: "p(-t) == -p(t) on sampled times".to_string(),
    });

    // P' = p: central differences of P against p, with the O(dt^2)
    // truncation constant estimated from third differences of P.
    let mut max_err = 0.0f64;
    let mut max_d3 = 0.0f64;
    for i in 1..n_samples - 1 {
        let fd = (table.big_p_samples[i + 1] - table.big_p_samples[i - 1]) / (2.0 * dt);
        max_err = max_err.max((fd - table.p_samples[i]).abs());
        if i + 2 < n_samples {
            let d3 = table.big_p_samples[i + 2] - 3.0 * table.big_p_samples[i + 1]
                + 3.0 * table.big_p_samples[i]
                - table.big_p_samples[i - 1];
            max_d3 = max_d3.max(d3.abs());
        }
    }
    let fd_bound = max_d3 / (3.0 * dt) + 1e-12 / dt;
    checks.push(CheckResult {
        name: "primitive_derivative_matches",
        passed: max_err <= fd_bound,
        detail: format!("max |dP/dt - p| = {max_err:e}, allowed {fd_bound:e}"),
    });

    // kappa = -P(0) > 0.
    let kappa_ok = table.kappa > 0.0 && table.kappa == -table.big_p_samples[0];
    checks.push(CheckResult {
        name: "kappa_positive",
        passed: kappa_ok,
        detail: format!("kappa = {:e}", table.kappa),
    });

    // Tail beyond the window is below tol_tail relative to the L1 mass.
    let l1 = table.big_p_l1();
    let window_idx = ((table.window / dt).round() as usize).min(n_samples - 1);
    let mut tail = 0.0;
    for i in window_idx..n_samples - 1 {
        tail += 0.5 * dt * (table.big_p_samples[i].abs() + table.big_p_samples[i + 1].abs());
    }
    let tail_ok = tail <= table.tol_tail * l1 + 1e-300;
    checks.push(CheckResult {
        name: "tail_below_tolerance",
        passed: tail_ok,
        detail: format!("tail mass {tail:e} vs budget {:e}", table.tol_tail * l1),
    });

    // Compact support: when an exact bound is recorded, samples beyond it
    // must vanish identically.
    if let Some(bound) = table.exact_support {
        let support_ok = (0..n_samples).all(|i| {
            let t = i as f64 * dt;
            t < bound || (table.p_samples[i] == 0.0 && table.big_p_samples[i] == 0.0)
        });
        checks.push(CheckResult {
            name: "compact_support_exact",
            passed: support_ok,
            detail: format!("samples vanish beyond t = {bound}"),
        });
    }

    // Spectral sign: the cosine transform of the tabulated primitive must
    // be nonpositive up to truncation slack. Exactly supported tables are
    // spectrally accurate; windowed tables carry O(tol_tail) tail error.
    let omega_max = std::f64::consts::PI / (4.0 * dt);
    let omegas: Vec<f64> = (0..65).map(|i| omega_max * i as f64 / 64.0).collect();
    let spec = table_spectrum(table, &omegas);
    let scale = spec.p_hat.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    let slack = if table.exact_support.is_some() { 1e-10 } else { 10.0 * table.tol_tail };
    let worst = spec.p_hat.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v));
    checks.push(CheckResult {
        name: "spectrum_nonpositive",
        passed: worst <= slack * scale,
        detail: format!("max transform value {worst:e}, allowed {:e}", slack * scale),
    });

    ValidationReport { checks }
}
