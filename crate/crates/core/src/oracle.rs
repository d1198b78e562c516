//! Independent numerical verification of the analytic spectrum.
//!
//! The second-order radial problem (the factorized Hamiltonian minus its
//! constant offset) is discretized with three-point central differences
//! on a uniform grid with Dirichlet walls, and single eigenvalues are
//! extracted by Sturm bisection. Nothing here touches the closed-form
//! energy expressions: the self-consistent solver closes the loop purely
//! through the defect eps_n(E) + M^2 - E^2 = 0.
//!
//! # Accuracy
//!
//! The eigenfunctions behave like r^lambda at the origin, so for
//! non-integer lambda the plain scheme converges at the fractional rate
//! h^(2 lambda - 1) rather than h^2. [`fd_eigenvalue_extrapolated`]
//! removes the known error terms h^(2l-1), h^(2l), h^(2l+1), h^(2l+2)
//! and h^2 by Richardson extrapolation over successively halved
//! spacings, which restores ~1e-7 relative accuracy at the default grid
//! for lambda down to ~0.85. The raw per-grid values are exposed by
//! [`fd_eigenvalue`] so convergence order is directly testable.

use crate::error::{Error, Result};
use crate::numerics::{bisect_eigenvalue, find_root, kth_eigenvalue, sturm_count, Bracket};
use crate::spectral::{Branch, Couplings};

/// Uniform radial grid: N interior nodes r_i = i h, i = 1..N, with
/// spacing h = r_max/(N+1) and Dirichlet boundaries at 0 and r_max.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    r_max: f64,
    points: usize,
}

impl RadialGrid {
    pub const MIN_POINTS: usize = 100;

    pub fn new(r_max: f64, points: usize) -> Result<Self> {
        if !(r_max > 0.0) || !r_max.is_finite() {
            return Err(Error::Domain(format!("r_max must be positive, got {r_max}")));
        }
        if points < Self::MIN_POINTS {
            return Err(Error::Domain(format!(
                "grid needs at least {} points, got {points}",
                Self::MIN_POINTS
            )));
        }
        Ok(RadialGrid { r_max, points })
    }

    /// Default box and resolution for the (lambda, n, q) state:
    /// r_max = 40 (lambda+n+1)^2 / q clamped to [50, 400], 8000 points.
    pub fn default_for(lambda: f64, n_r: u32, q: f64) -> Self {
        let extent = lambda + f64::from(n_r) + 1.0;
        let r_max = (40.0 * extent * extent / q).clamp(50.0, 400.0);
        RadialGrid { r_max, points: 8000 }
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        self.r_max / (self.points as f64 + 1.0)
    }

    /// Grid with exactly halved spacing over the same box
    /// (N -> 2N + 1 keeps h/2 exact).
    pub fn halved(&self) -> Self {
        RadialGrid { r_max: self.r_max, points: 2 * self.points + 1 }
    }
}

/// Symmetric tridiagonal discretization of -d^2/dr^2 + l(l-1)/r^2 - 2q/r.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteOperator {
    diagonal: Vec<f64>,
    off_diagonal: f64,
}

impl DiscreteOperator {
    pub fn assemble(lambda: f64, q: f64, grid: &RadialGrid) -> Self {
        let h = grid.spacing();
        let inv_h2 = 1.0 / (h * h);
        let centrifugal = lambda * (lambda - 1.0);
        let diagonal = (1..=grid.points)
            .map(|i| {
                let r = i as f64 * h;
                2.0 * inv_h2 + centrifugal / (r * r) - 2.0 * q / r
            })
            .collect();
        DiscreteOperator { diagonal, off_diagonal: -inv_h2 }
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn off_diagonal(&self) -> f64 {
        self.off_diagonal
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    fn off_vec(&self) -> Vec<f64> {
        vec![self.off_diagonal; self.dim().saturating_sub(1)]
    }
}

/// Outer classical turning point of l(l-1)/r^2 - 2q/r at the asymptotic
/// level energy -q^2/(l+n)^2.
fn turning_point(lambda: f64, q: f64, n_r: u32) -> f64 {
    let nl = lambda + f64::from(n_r);
    let eps = -q * q / (nl * nl);
    let arg = q * q + eps * lambda * (lambda - 1.0);
    if arg <= 0.0 {
        2.0 * nl * nl / q
    } else {
        (q + arg.sqrt()) / (-eps)
    }
}

fn validate_fd_inputs(lambda: f64, q: f64, n_r: u32, grid: &RadialGrid) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!("lambda must be positive, got {lambda}")));
    }
    if !(q > 0.0) || !q.is_finite() {
        return Err(Error::Domain(format!("coulomb strength q must be positive, got {q}")));
    }
    let turning = turning_point(lambda, q, n_r);
    let limit = 0.6 * grid.r_max;
    if turning > limit {
        return Err(Error::GridTooSmall { turning_point: turning, limit });
    }
    Ok(())
}

/// (n+1)-th smallest eigenvalue of the discrete operator on the given
/// grid, by Sturm bisection. Converges to -q^2/(lambda+n)^2 as h -> 0,
/// at order h^2 for integer lambda and h^(2 lambda - 1) otherwise.
pub fn fd_eigenvalue(lambda: f64, q: f64, n_r: u32, grid: &RadialGrid) -> Result<f64> {
    validate_fd_inputs(lambda, q, n_r, grid)?;
    let op = DiscreteOperator::assemble(lambda, q, grid);
    kth_eigenvalue(op.diagonal(), &op.off_vec(), n_r as usize)
}

/// Error-term exponents of the scheme for leading power lambda: the
/// origin-induced family 2l-1+k and the smooth h^2 term, deduplicated
/// and capped below 3.9 (next neglected order).
fn indicial_exponents(lambda: f64) -> Vec<f64> {
    let base = 2.0 * lambda - 1.0;
    let mut candidates = vec![base, base + 1.0, base + 2.0, base + 3.0, 2.0];
    candidates.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut ps: Vec<f64> = Vec::new();
    for p in candidates {
        if p <= 0.02 || p > 3.9 {
            continue;
        }
        if ps.iter().any(|p0| (p - p0).abs() < 0.05) {
            continue;
        }
        ps.push(p);
    }
    ps
}

/// Solve a small dense linear system by Gaussian elimination with
/// partial pivoting. Used for the extrapolation weights only.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[pivot][col] == 0.0 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        let pivot_row = a[col].clone();
        for row in col + 1..n {
            let factor = a[row][col] / pivot_row[col];
            for (v, p) in a[row].iter_mut().zip(&pivot_row).skip(col) {
                *v -= factor * p;
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
        if !x[row].is_finite() {
            return None;
        }
    }
    Some(x)
}

/// Richardson-extrapolated eigenvalue over successively halved spacings,
/// one grid per error exponent plus one. The first grid is solved from
/// Gershgorin bounds; finer grids warm-start from the previous value.
pub fn fd_eigenvalue_extrapolated(lambda: f64, q: f64, n_r: u32, base: &RadialGrid) -> Result<f64> {
    validate_fd_inputs(lambda, q, n_r, base)?;
    let ps = indicial_exponents(lambda);
    let m = ps.len();
    let mut grid = *base;
    let mut values = Vec::with_capacity(m + 1);
    let mut previous: Option<f64> = None;
    for _ in 0..=m {
        let op = DiscreteOperator::assemble(lambda, q, &grid);
        let off = op.off_vec();
        let k = n_r as usize;
        let eig = match previous {
            Some(prev) => {
                let width = 0.08 * prev.abs() + 1e-9;
                let (lo, hi) = (prev - width, prev + width);
                if sturm_count(op.diagonal(), &off, lo) <= k && sturm_count(op.diagonal(), &off, hi) > k
                {
                    bisect_eigenvalue(op.diagonal(), &off, k, lo, hi)?
                } else {
                    kth_eigenvalue(op.diagonal(), &off, k)?
                }
            }
            None => kth_eigenvalue(op.diagonal(), &off, k)?,
        };
        values.push(eig);
        previous = Some(eig);
        grid = grid.halved();
    }

    // values[k] = eps + sum_j coef_j 2^{-k p_j}
    let mut matrix = Vec::with_capacity(m + 1);
    for k in 0..=m {
        let mut row = Vec::with_capacity(m + 1);
        row.push(1.0);
        for p in &ps {
            row.push(2.0f64.powf(-(k as f64) * p));
        }
        matrix.push(row);
    }
    match solve_dense(matrix, values.clone()) {
        Some(x) => Ok(x[0]),
        // degenerate exponent system: fall back to plain h^2 Richardson
        // on the two finest grids
        None => {
            let last = values[m];
            let prev = values[m - 1];
            Ok((4.0 * last - prev) / 3.0)
        }
    }
}

/// Probe magnitudes (in units of the mass) for the defect scan: linear
/// steps across the window, then a geometric approach to the mass shell
/// where weak-coupling roots accumulate.
fn defect_probe_ladder() -> Vec<f64> {
    let mut probes: Vec<f64> = (1..=9).map(|j| 0.1 * f64::from(j)).collect();
    for j in 0..=13 {
        probes.push(1.0 - 0.05 * 0.5f64.powi(j));
    }
    probes
}

/// Energy of level (n_r, branch) from the discretized operator alone:
/// the root of D(E) = eps_n(lambda, E a1 + M a2) + M^2 - E^2 over the
/// branch's half of the bound-state window. Bracketing uses sign changes
/// of the defect only; probes where the Coulomb strength is not positive
/// or the state does not fit the grid are skipped as undefined.
pub fn self_consistent_energy(
    couplings: &Couplings,
    lambda: f64,
    n_r: u32,
    branch: Branch,
    grid: &RadialGrid,
) -> Result<f64> {
    let m = couplings.mass();
    let defect = |e: f64| -> Result<f64> {
        let q = couplings.coulomb_strength(e);
        if !(q > 0.0) {
            return Err(Error::UnboundState { q });
        }
        Ok(fd_eigenvalue_extrapolated(lambda, q, n_r, grid)? + m * m - e * e)
    };

    let mut bracket: Option<(f64, f64)> = None;
    let mut last_defined: Option<(f64, f64)> = None;
    let mut any_defined = false;
    let mut grid_error: Option<Error> = None;
    let mut unbound_error: Option<Error> = None;
    for magnitude in defect_probe_ladder() {
        let e = branch.sign() * m * magnitude;
        match defect(e) {
            Ok(d) => {
                any_defined = true;
                if let Some((e_prev, d_prev)) = last_defined {
                    if d_prev * d <= 0.0 {
                        bracket = Some(if e_prev < e { (e_prev, e) } else { (e, e_prev) });
                        break;
                    }
                }
                last_defined = Some((e, d));
            }
            Err(err) => {
                match err {
                    Error::GridTooSmall { .. } => grid_error = Some(err),
                    _ => unbound_error = Some(err),
                }
                last_defined = None;
            }
        }
    }
    let (lo, hi) = match bracket {
        Some(b) => b,
        None => {
            return Err(if let Some(err) = grid_error {
                err
            } else if !any_defined {
                unbound_error.unwrap_or(Error::NoRootBracketed)
            } else {
                Error::NoRootBracketed
            })
        }
    };

    let defect_value = |e: f64| defect(e).unwrap_or(f64::NAN);
    let certified = Bracket::new(lo, hi, defect_value)?;
    find_root(defect_value, certified, 1e-7 * m, 80)
}
