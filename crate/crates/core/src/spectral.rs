//! Couplings, quantum numbers and the closed-form scalar quantities of
//! the bound-state problem: the effective orbital parameter lambda, the
//! transformed interaction components k-hat, the diagnostic a^2, and the
//! level energies through both the explicit formula and the implicit
//! (self-referential) form solved by bracketed root finding.
//!
//! Natural units throughout: hbar = c = 1, energies in units of the mass.

use crate::error::{Error, Result};
use crate::numerics::{find_root, Bracket, SOLVER_CONFIG};

/// Strengths of the interaction: vector Coulomb -a1/r, Lorentz scalar
/// Coulomb -a2/r (added to the mass term), and the particle mass.
///
/// Signs of a1, a2 are unrestricted here; whether a channel binds is
/// decided per (kappa, a1, a2) when the channel is built.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Couplings {
    a1: f64,
    a2: f64,
    mass: f64,
}

impl Couplings {
    pub fn new(a1: f64, a2: f64, mass: f64) -> Result<Self> {
        if !a1.is_finite() || !a2.is_finite() {
            return Err(Error::Domain(format!("couplings must be finite, got a1={a1}, a2={a2}")));
        }
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::Domain(format!("mass must be positive, got {mass}")));
        }
        Ok(Couplings { a1, a2, mass })
    }

    pub fn a1(&self) -> f64 {
        self.a1
    }

    pub fn a2(&self) -> f64 {
        self.a2
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// The combination q = E a1 + M a2 that sets the Coulomb strength of
    /// the second-order radial problem at energy E.
    pub fn coulomb_strength(&self, energy: f64) -> f64 {
        energy * self.a1 + self.mass * self.a2
    }
}

/// Which root of the energy quadratic: `Plus` is the particle spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(&self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Branch::Plus => write!(f, "plus"),
            Branch::Minus => write!(f, "minus"),
        }
    }
}

/// A radial channel: the integer Dirac quantum number kappa and the
/// effective orbital parameter lambda = +sqrt(kappa^2 - a1^2 + a2^2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Channel {
    kappa: i32,
    lambda: f64,
}

impl Channel {
    pub fn new(kappa: i32, couplings: &Couplings) -> Result<Self> {
        let lambda = effective_lambda(kappa, couplings)?;
        Ok(Channel { kappa, lambda })
    }

    pub fn kappa(&self) -> i32 {
        self.kappa
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn abs_kappa(&self) -> f64 {
        f64::from(self.kappa.abs())
    }
}

/// lambda = +sqrt(kappa^2 - a1^2 + a2^2), the positive root only.
///
/// A non-positive radicand means the coupling is supercritical for this
/// kappa and no real channel exists.
pub fn effective_lambda(kappa: i32, couplings: &Couplings) -> Result<f64> {
    if kappa == 0 {
        return Err(Error::Domain("kappa must be a nonzero integer".into()));
    }
    let k2 = f64::from(kappa) * f64::from(kappa);
    let discriminant = k2 - couplings.a1 * couplings.a1 + couplings.a2 * couplings.a2;
    if discriminant <= 0.0 {
        return Err(Error::NonBindingChannel { discriminant });
    }
    Ok(discriminant.sqrt())
}

/// Components of the interaction vector after the similarity transform
/// that diagonalizes the 1/r matrix, together with the free transform
/// parameters (c, d) they were built with.
///
/// `ksq` is k^2 = M^2 - E^2. The fields satisfy
/// k3 * lambda = E a1 + M a2 and -kminus*kplus = M^2 a^2 / lambda^2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KHat {
    pub k3: f64,
    pub kminus: f64,
    pub kplus: f64,
    pub ksq: f64,
    pub c: f64,
    pub d: f64,
}

/// Build the transformed interaction components at energy E.
pub fn k_hat(
    energy: f64,
    couplings: &Couplings,
    lambda: f64,
    kappa: i32,
    c: f64,
    d: f64,
) -> Result<KHat> {
    if c * d == 0.0 || !c.is_finite() || !d.is_finite() {
        return Err(Error::DegenerateTransform {
            reason: format!("similarity parameters must be nonzero finite, got c={c}, d={d}"),
        });
    }
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("lambda must be positive, got {lambda}")));
    }
    let m = couplings.mass;
    let (a1, a2) = (couplings.a1, couplings.a2);
    let t = f64::from(kappa.abs()) + lambda;
    let denom = 2.0 * lambda * t;
    let kminus = d / c * (t * t * (m + energy) - (a1 - a2) * (a1 - a2) * (m - energy)) / denom;
    let kplus = c / d * (t * t * (m - energy) - (a1 + a2) * (a1 + a2) * (m + energy)) / denom;
    Ok(KHat {
        k3: couplings.coulomb_strength(energy) / lambda,
        kminus,
        kplus,
        ksq: m * m - energy * energy,
        c,
        d,
    })
}

/// The SUSY-breaking diagnostic a^2 = [(E a1 + M a2)^2 - (M^2-E^2) lambda^2] / M^2.
///
/// Vanishes exactly on the plus-branch ground state; positive for every
/// excited level.
pub fn a_squared(energy: f64, couplings: &Couplings, lambda: f64) -> f64 {
    let q = couplings.coulomb_strength(energy);
    let m = couplings.mass;
    (q * q - (m * m - energy * energy) * lambda * lambda) / (m * m)
}

/// One bound-state solution with its consistency diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyLevel {
    pub n_r: u32,
    pub branch: Branch,
    pub energy: f64,
    pub nhat: f64,
    pub gamma: f64,
    pub a_sq: f64,
}

/// Ground-state energy from the a^2 = 0 condition:
///
///   E0/M = +- sqrt(1 - (a1^2+a2^2)/(l^2+a1^2) + a1^2 a2^2/(l^2+a1^2)^2)
///          - a1 a2/(l^2+a1^2)
pub fn ground_state_energy(couplings: &Couplings, lambda: f64, branch: Branch) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("lambda must be positive, got {lambda}")));
    }
    let (a1, a2, m) = (couplings.a1, couplings.a2, couplings.mass);
    let denom = lambda * lambda + a1 * a1;
    let disc = 1.0 - (a1 * a1 + a2 * a2) / denom + (a1 * a1 * a2 * a2) / (denom * denom);
    if disc < 0.0 {
        return Err(Error::NoBoundState {
            reason: format!("negative discriminant {disc:.6e} at lambda={lambda}"),
        });
    }
    Ok(m * (branch.sign() * disc.sqrt() - a1 * a2 / denom))
}

/// Level energy in closed form at effective principal quantum number nhat:
///
///   E/M = -a1 a2/(nhat^2+a1^2) +- sqrt(a1^2 a2^2/(nhat^2+a1^2)^2
///         + (nhat^2-a2^2)/(nhat^2+a1^2))
pub fn level_energy_closed(couplings: &Couplings, nhat: f64, branch: Branch) -> Result<f64> {
    if !(nhat > 0.0) {
        return Err(Error::Domain(format!("nhat must be positive, got {nhat}")));
    }
    let (a1, a2, m) = (couplings.a1, couplings.a2, couplings.mass);
    let denom = nhat * nhat + a1 * a1;
    let disc = (a1 * a1 * a2 * a2) / (denom * denom) + (nhat * nhat - a2 * a2) / denom;
    if disc < 0.0 {
        return Err(Error::NoBoundState {
            reason: format!("negative discriminant {disc:.6e} at nhat={nhat}"),
        });
    }
    Ok(m * (-a1 * a2 / denom + branch.sign() * disc.sqrt()))
}

/// Residual of the energy quadratic
/// g(E) = E^2 (nhat^2+a1^2) + 2 E M a1 a2 + M^2 a2^2 - M^2 nhat^2,
/// which every returned level energy must satisfy.
pub fn energy_quadratic(couplings: &Couplings, nhat: f64, energy: f64) -> f64 {
    let (a1, a2, m) = (couplings.a1, couplings.a2, couplings.mass);
    energy * energy * (nhat * nhat + a1 * a1) + 2.0 * energy * m * a1 * a2 + m * m * a2 * a2
        - m * m * nhat * nhat
}

/// Magnitude scale of the quadratic's terms, for relative residuals.
pub fn energy_quadratic_scale(couplings: &Couplings, nhat: f64, energy: f64) -> f64 {
    let (a1, a2, m) = (couplings.a1, couplings.a2, couplings.mass);
    (energy * energy * (nhat * nhat + a1 * a1))
        .max((2.0 * energy * m * a1 * a2).abs())
        .max(m * m * a2 * a2)
        .max(m * m * nhat * nhat)
}

/// Solve the implicit spectrum condition E = M / sqrt(1 + gamma(E)^2/nhat^2)
/// for the level (n_r, branch) by bracketed root finding on the equivalent
/// quadratic defect g(E) over the bound-state window (-M, M).
///
/// The two roots of g straddle the parabola vertex E_v = -M a1 a2/(nhat^2+a1^2),
/// so the plus branch is bracketed on [E_v, M] and the minus branch on
/// [-M, E_v]; g(+-M) = M^2 (a1 +- a2)^2 >= 0 certifies the sign change
/// whenever the level exists. A vanishing g at the mass-shell edge (free
/// limit) returns E = +-M directly.
pub fn level_energy_implicit(
    couplings: &Couplings,
    lambda: f64,
    n_r: u32,
    branch: Branch,
) -> Result<EnergyLevel> {
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("lambda must be positive, got {lambda}")));
    }
    let m = couplings.mass;
    let (a1, a2) = (couplings.a1, couplings.a2);
    let nhat = lambda + f64::from(n_r);
    let defect = |e: f64| energy_quadratic(couplings, nhat, e);

    let vertex = -m * a1 * a2 / (nhat * nhat + a1 * a1);
    let edge = branch.sign() * m;
    let f_vertex = defect(vertex);
    let f_edge = defect(edge);

    let energy = if f_vertex > 0.0 {
        return Err(Error::NoBoundState {
            reason: format!("no real root of the energy quadratic at nhat={nhat}"),
        });
    } else if f_edge == 0.0 {
        // free limit: root sits exactly on the mass shell
        edge
    } else if f_vertex == 0.0 {
        vertex
    } else {
        let (lo, hi) = match branch {
            Branch::Plus => (vertex, edge),
            Branch::Minus => (edge, vertex),
        };
        let bracket = Bracket::new(lo, hi, defect).map_err(|e| match e {
            Error::NoRootBracketed => Error::NoBoundState {
                reason: format!("no root of the energy quadratic in ({lo}, {hi})"),
            },
            other => other,
        })?;
        find_root(defect, bracket, 4.0 * f64::EPSILON * m, SOLVER_CONFIG.root_budget)?
    };

    if energy == 0.0 {
        return Err(Error::NoBoundState {
            reason: "root at E = 0: gamma diagnostic undefined".into(),
        });
    }
    Ok(EnergyLevel {
        n_r,
        branch,
        energy,
        nhat,
        gamma: a1 + m * a2 / energy,
        a_sq: a_squared(energy, couplings, lambda),
    })
}
