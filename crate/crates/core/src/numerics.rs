//! Shared numeric kernels: log-Gamma, Gamma-type integrals, bracketed
//! root finding and Sturm-sequence eigenvalues of symmetric tridiagonal
//! matrices.
//!
//! Everything here is deterministic: identical inputs give bit-identical
//! outputs, so results embedded in reports reproduce exactly.

use crate::error::{Error, Result};

/// Iteration budgets and stopping tolerances used by the solvers in this
/// crate, collected in one place.
#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    /// Maximum iterations for [`find_root`] callers in this crate.
    pub root_budget: usize,
    /// Maximum bisection steps per eigenvalue in [`kth_eigenvalue`].
    pub eigen_budget: usize,
    /// Relative interval-width stop for eigenvalue bisection, measured
    /// against the magnitude of the converging interval endpoints.
    pub eigen_rel_width: f64,
    /// Coefficient pruning threshold for canonical polynomial forms,
    /// relative to the largest coefficient magnitude.
    pub coeff_prune_rel: f64,
}

/// Crate-wide defaults.
pub const SOLVER_CONFIG: SolverConfig = SolverConfig {
    root_budget: 200,
    eigen_budget: 260,
    eigen_rel_width: 1e-13,
    coeff_prune_rel: 1e-13,
};

const LN_TWO_PI: f64 = 1.837_877_066_409_345_3;

// Stirling-series coefficients B_{2n} / (2n (2n-1)) as exact rationals.
const STIRLING: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
];

/// Natural log of the Gamma function for x > 0.
///
/// Arguments below 10 are shifted up with ln Gamma(x) = ln Gamma(x+1) - ln x
/// and the asymptotic Stirling series is applied at the shifted point; the
/// truncation error of the seven-term series is below 1e-16 there.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0 && x.is_finite(), "ln_gamma requires x > 0, got {x}");
    let mut shift = 0.0;
    let mut y = x;
    while y < 10.0 {
        shift += y.ln();
        y += 1.0;
    }
    let t = 1.0 / (y * y);
    let mut series = STIRLING[6];
    for c in STIRLING[..6].iter().rev() {
        series = c + series * t;
    }
    (y - 0.5) * y.ln() - y + 0.5 * LN_TWO_PI + series / y - shift
}

/// Integral of r^s e^{-beta r} over (0, inf): Gamma(s+1) / beta^{s+1}.
///
/// Evaluated in log space so large s or extreme beta cannot overflow.
pub fn gamma_integral(s: f64, beta: f64) -> Result<f64> {
    if !(s > -1.0) || !s.is_finite() {
        return Err(Error::Domain(format!("gamma_integral requires s > -1, got {s}")));
    }
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::Domain(format!("gamma_integral requires beta > 0, got {beta}")));
    }
    Ok((ln_gamma(s + 1.0) - (s + 1.0) * beta.ln()).exp())
}

/// A certified sign-change interval for a defect function.
#[derive(Debug, Clone, Copy)]
pub struct Bracket {
    lo: f64,
    hi: f64,
    f_lo: f64,
    f_hi: f64,
}

impl Bracket {
    /// Certify that `defect` changes sign (or vanishes) on [lo, hi].
    pub fn new(lo: f64, hi: f64, defect: impl Fn(f64) -> f64) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::Domain(format!("bracket requires lo < hi, got [{lo}, {hi}]")));
        }
        let f_lo = defect(lo);
        let f_hi = defect(hi);
        if f_lo * f_hi > 0.0 || f_lo.is_nan() || f_hi.is_nan() {
            return Err(Error::NoRootBracketed);
        }
        Ok(Bracket { lo, hi, f_lo, f_hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }
}

/// Bracketed root finding: bisection safeguarded by inverse quadratic
/// interpolation and secant steps (Brent's scheme).
///
/// Stops when the interval shrinks below `tol` (plus rounding slack) or
/// the defect hits zero exactly; errors with `NonConvergence` once the
/// budget is spent.
pub fn find_root(defect: impl Fn(f64) -> f64, bracket: Bracket, tol: f64, budget: usize) -> Result<f64> {
    let mut a = bracket.lo;
    let mut b = bracket.hi;
    let mut fa = bracket.f_lo;
    let mut fb = bracket.f_hi;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }

    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;

    for _ in 0..budget {
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // interpolation step: secant, or inverse quadratic when distinct
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * xm * s, 1.0 - s)
            } else {
                let q = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0)),
                    (q - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = defect(b);
    }
    Err(Error::NonConvergence { budget })
}

/// Number of eigenvalues of the symmetric tridiagonal matrix
/// (diag, off) strictly below `x`, via the Sturm sequence of the
/// shifted LDL^T factorization.
///
/// Pivots are floored at a LAPACK-style `pivmin` so division by a
/// vanishing pivot cannot derail the count.
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let n = diag.len();
    debug_assert!(n == 0 || off.len() == n - 1);
    if n == 0 {
        return 0;
    }
    let b_max_sq = off.iter().fold(0.0f64, |m, &b| m.max(b * b));
    let pivmin = (f64::MIN_POSITIVE * b_max_sq).max(f64::MIN_POSITIVE);

    let mut count = 0;
    let mut d = diag[0] - x;
    if d < 0.0 {
        count += 1;
    }
    for i in 1..n {
        if d.abs() < pivmin {
            d = if d < 0.0 { -pivmin } else { pivmin };
        }
        d = (diag[i] - x) - off[i - 1] * off[i - 1] / d;
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// The k-th smallest eigenvalue (k = 0 for the lowest) of a symmetric
/// tridiagonal matrix, by bisection on the Sturm count.
pub fn kth_eigenvalue(diag: &[f64], off: &[f64], k: usize) -> Result<f64> {
    let n = diag.len();
    if k >= n {
        return Err(Error::IndexOutOfSpectrum { index: k, dim: n });
    }
    // Gershgorin bounds
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 }
            + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let span = hi - lo;
    lo -= 1e-12 * span.abs() + f64::MIN_POSITIVE;
    hi += 1e-12 * span.abs() + f64::MIN_POSITIVE;
    bisect_eigenvalue(diag, off, k, lo, hi)
}

/// Bisection core shared with warm-started callers: requires
/// count(lo) <= k < count(hi).
pub(crate) fn bisect_eigenvalue(diag: &[f64], off: &[f64], k: usize, mut lo: f64, mut hi: f64) -> Result<f64> {
    let cfg = SOLVER_CONFIG;
    for _ in 0..cfg.eigen_budget {
        let width = hi - lo;
        if width <= cfg.eigen_rel_width * lo.abs().max(hi.abs()) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // interval at rounding resolution
        }
        if sturm_count(diag, off, mid) <= k {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
