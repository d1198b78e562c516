//! Exact symbolic algebra of the radial eigenfunctions.
//!
//! The whole bound-state family lives in the closure of one function
//! class: r^power e^{-rate r} times a polynomial. That class is closed
//! under the factorization operators A+/A- (first derivative, 1/r, and a
//! constant), under d^2/dr^2, and under the parameter-shift realization
//! of the ladder operators, so every identity the construction rests on
//! (annihilation, shape invariance, intertwining, the commutator) can be
//! checked coefficientwise instead of on sampled grids.

use crate::error::{Error, Result};
use crate::numerics::{gamma_integral, SOLVER_CONFIG};
use crate::spectral::{Couplings, KHat};

/// r^power e^{-rate r} (c0 + c1 r + ... + cm r^m), in canonical form:
/// no trailing zero coefficients, leading zeros absorbed into `power`,
/// coefficients below `coeff_prune_rel` of the largest pruned away.
///
/// The empty coefficient list represents the zero function. `power > 0`
/// and `rate > 0` are required of physical states (regularity at the
/// origin, normalizability at infinity); intermediate values produced
/// while assembling operator residuals may carry any power.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyExpFunction {
    power: f64,
    rate: f64,
    coeffs: Vec<f64>,
}

fn canonicalize(mut power: f64, rate: f64, mut coeffs: Vec<f64>) -> PolyExpFunction {
    let max = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if max == 0.0 || !max.is_finite() {
        return PolyExpFunction { power: 1.0, rate: 1.0, coeffs: Vec::new() };
    }
    let threshold = SOLVER_CONFIG.coeff_prune_rel * max;
    for c in &mut coeffs {
        if c.abs() < threshold {
            *c = 0.0;
        }
    }
    while coeffs.last() == Some(&0.0) {
        coeffs.pop();
    }
    while coeffs.first() == Some(&0.0) {
        coeffs.remove(0);
        power += 1.0;
    }
    if coeffs.is_empty() {
        return PolyExpFunction { power: 1.0, rate: 1.0, coeffs };
    }
    PolyExpFunction { power, rate, coeffs }
}

impl PolyExpFunction {
    /// Canonical constructor; `rate > 0` is required, `power` is free so
    /// that operator intermediates remain representable.
    pub fn new(power: f64, rate: f64, coeffs: Vec<f64>) -> Result<Self> {
        if !(rate > 0.0) || !rate.is_finite() {
            return Err(Error::Domain(format!("rate must be positive, got {rate}")));
        }
        if !power.is_finite() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Domain("power and coefficients must be finite".into()));
        }
        Ok(canonicalize(power, rate, coeffs))
    }

    /// The zero function.
    pub fn zero() -> Self {
        PolyExpFunction { power: 1.0, rate: 1.0, coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Polynomial degree; `None` for the zero function.
    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()))
    }

    /// Point evaluation for r >= 0 (r = 0 uses the power's limit).
    pub fn eval(&self, r: f64) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        if r == 0.0 {
            return if self.power > 0.0 {
                0.0
            } else if self.power == 0.0 {
                self.coeffs[0]
            } else {
                f64::INFINITY * self.coeffs[0].signum()
            };
        }
        let mut poly = 0.0;
        for c in self.coeffs.iter().rev() {
            poly = c + poly * r;
        }
        poly * r.powf(self.power) * (-self.rate * r).exp()
    }

    pub fn scale(&self, alpha: f64) -> Self {
        if alpha == 0.0 || self.is_zero() {
            return Self::zero();
        }
        canonicalize(self.power, self.rate, self.coeffs.iter().map(|c| alpha * c).collect())
    }

    /// Multiply by r^k.
    pub fn shift_power(&self, k: i32) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        PolyExpFunction {
            power: self.power + f64::from(k),
            rate: self.rate,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Sum of two members of the class. Defined when the decay rates
    /// agree and the leading powers differ by an integer, which is the
    /// case for every combination this crate forms (derivatives, 1/r
    /// multiples, basis mixes at a fixed level).
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let rate_scale = self.rate.max(other.rate);
        if (self.rate - other.rate).abs() > 1e-12 * rate_scale {
            return Err(Error::Domain(format!(
                "cannot add PolyExp terms with different rates {} and {}",
                self.rate, other.rate
            )));
        }
        let offset = other.power - self.power;
        let k = offset.round();
        if (offset - k).abs() > 1e-9 {
            return Err(Error::Domain(format!(
                "cannot add PolyExp terms with non-integer power offset {offset}"
            )));
        }
        let (base, lowered, raised, shift) = if k >= 0.0 {
            (self.power, &self.coeffs, &other.coeffs, k as usize)
        } else {
            (other.power, &other.coeffs, &self.coeffs, (-k) as usize)
        };
        let len = lowered.len().max(raised.len() + shift);
        let mut sum = vec![0.0; len];
        for (j, c) in lowered.iter().enumerate() {
            sum[j] += c;
        }
        for (j, c) in raised.iter().enumerate() {
            sum[j + shift] += c;
        }
        Ok(canonicalize(base, self.rate, sum))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    /// Exact derivative: d/dr [r^p e^{-br} P(r)] stays in the class with
    /// power p-1.
    pub fn derivative(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let m = self.coeffs.len();
        let mut out = vec![0.0; m + 1];
        for (j, slot) in out.iter_mut().enumerate() {
            let keep = if j < m { (self.power + j as f64) * self.coeffs[j] } else { 0.0 };
            let decay = if j > 0 { self.rate * self.coeffs[j - 1] } else { 0.0 };
            *slot = keep - decay;
        }
        canonicalize(self.power - 1.0, self.rate, out)
    }
}

/// Largest aligned coefficient difference between `a` and `b`, relative
/// to the larger coefficient scale of the two. Infinity when the terms
/// are not comparable (different rates or fractional power offset).
pub fn coeffwise_residual(a: &PolyExpFunction, b: &PolyExpFunction) -> f64 {
    let scale = a.max_abs_coeff().max(b.max_abs_coeff());
    if scale == 0.0 {
        return 0.0;
    }
    match a.sub(b) {
        Ok(diff) => diff.max_abs_coeff() / scale,
        Err(_) => f64::INFINITY,
    }
}

/// Which partner of the factorized pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialVariant {
    Minus,
    Plus,
}

/// One of the two partner potentials
///   V_-(r) = l(l-1)/r^2 - 2q/r + q^2/l^2,
///   V_+(r) = l(l+1)/r^2 - 2q/r + q^2/l^2,
/// with q the Coulomb strength E a1 + M a2 of the level under study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartnerPotential {
    pub variant: PotentialVariant,
    pub lambda: f64,
    pub q: f64,
}

impl PartnerPotential {
    /// The r-independent offset q^2/lambda^2 both partners share.
    pub fn constant(&self) -> f64 {
        self.q * self.q / (self.lambda * self.lambda)
    }

    pub fn eval(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::OriginSingularity { r });
        }
        let l = self.lambda;
        let centrifugal = match self.variant {
            PotentialVariant::Minus => l * (l - 1.0),
            PotentialVariant::Plus => l * (l + 1.0),
        };
        Ok(centrifugal / (r * r) - 2.0 * self.q / r + self.constant())
    }
}

pub fn v_minus(r: f64, lambda: f64, q: f64) -> Result<f64> {
    PartnerPotential { variant: PotentialVariant::Minus, lambda, q }.eval(r)
}

pub fn v_plus(r: f64, lambda: f64, q: f64) -> Result<f64> {
    PartnerPotential { variant: PotentialVariant::Plus, lambda, q }.eval(r)
}

/// Shape-invariance remainder at argument lambda:
/// R(lambda) = q^2/(lambda-1)^2 - q^2/lambda^2, the constant by which the
/// plus partner at lambda-1 exceeds the minus partner at lambda.
pub fn remainder_r(lambda: f64, q: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("lambda must be positive, got {lambda}")));
    }
    let shifted = lambda - 1.0;
    if shifted == 0.0 {
        return Err(Error::PoleAtOne);
    }
    Ok(q * q / (shifted * shifted) - q * q / (lambda * lambda))
}

/// Literal sum of remainders R(lambda+1) + ... + R(lambda+n); telescopes
/// to q^2/lambda^2 - q^2/(lambda+n)^2.
pub fn remainder_sum(lambda: f64, q: f64, n: u32) -> Result<f64> {
    let mut sum = 0.0;
    for i in 1..=n {
        sum += remainder_r(lambda + f64::from(i), q)?;
    }
    Ok(sum)
}

fn apply_factorization(
    f: &PolyExpFunction,
    lambda: f64,
    q: f64,
    derivative_sign: f64,
) -> Result<PolyExpFunction> {
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("operator parameter lambda must be positive, got {lambda}")));
    }
    if f.is_zero() {
        return Ok(PolyExpFunction::zero());
    }
    let shift = q / lambda;
    let m = f.coeffs.len();
    let mut out = vec![0.0; m + 1];
    for (j, slot) in out.iter_mut().enumerate() {
        let cj = if j < m { f.coeffs[j] } else { 0.0 };
        let cjm1 = if j > 0 { f.coeffs[j - 1] } else { 0.0 };
        let deriv = (f.power + j as f64) * cj - f.rate * cjm1;
        *slot = derivative_sign * deriv + lambda * cj - shift * cjm1;
    }
    let result = canonicalize(f.power - 1.0, f.rate, out);
    if !result.is_zero() && result.power <= 0.0 {
        return Err(Error::IrregularResult { power: result.power });
    }
    Ok(result)
}

/// A+ = +d/dr + lambda/r - q/lambda, exactly at coefficient level.
///
/// The operator parameter lambda need not match the function's leading
/// power; the ladder recursion deliberately applies A+ at a lower shift.
pub fn apply_a_plus(f: &PolyExpFunction, lambda: f64, q: f64) -> Result<PolyExpFunction> {
    apply_factorization(f, lambda, q, 1.0)
}

/// A- = -d/dr + lambda/r - q/lambda, exactly at coefficient level.
pub fn apply_a_minus(f: &PolyExpFunction, lambda: f64, q: f64) -> Result<PolyExpFunction> {
    apply_factorization(f, lambda, q, -1.0)
}

/// The state annihilated by A-: r^lambda e^{-q r / lambda}, unnormalized.
pub fn ground_state_f(lambda: f64, q: f64) -> Result<PolyExpFunction> {
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("lambda must be positive, got {lambda}")));
    }
    if !(q > 0.0) {
        return Err(Error::UnboundState { q });
    }
    Ok(PolyExpFunction { power: lambda, rate: q / lambda, coeffs: vec![1.0] })
}

/// Guard on the ladder recursion depth.
pub const MAX_LADDER_DEPTH: u32 = 64;

/// n-th lower-component eigenfunction by the parameter-shift ladder:
///
///   F_n(lambda) = A+(lambda) F_{n-1}(lambda + 1),
///   F_0(lambda + n) = ground_state_f(lambda + n, q),
///
/// all operators carrying the same q = E_n a1 + M a2 evaluated at the
/// target level's energy. The result has leading power lambda, decay
/// rate q/(lambda+n) and polynomial degree exactly n.
pub fn excited_state_f(n: u32, lambda: f64, q: f64) -> Result<PolyExpFunction> {
    if n > MAX_LADDER_DEPTH {
        return Err(Error::DepthLimit { n, limit: MAX_LADDER_DEPTH });
    }
    let mut f = ground_state_f(lambda + f64::from(n), q)?;
    for i in (0..n).rev() {
        f = apply_a_plus(&f, lambda + f64::from(i), q)?;
    }
    Ok(f)
}

/// Upper component in the transformed basis from the intertwining
/// relation A- F = -k_plus G: G = -(1/k_plus) A- F. The state
/// annihilated by A- maps to the zero function.
pub fn upper_component_hatted(
    f: &PolyExpFunction,
    lambda: f64,
    q: f64,
    khat: &KHat,
) -> Result<PolyExpFunction> {
    let lowered = apply_a_minus(f, lambda, q)?;
    if lowered.is_zero() {
        return Ok(PolyExpFunction::zero());
    }
    if khat.kplus == 0.0 {
        return Err(Error::DegenerateKPlus);
    }
    Ok(lowered.scale(-1.0 / khat.kplus))
}

/// 2x2 similarity transform that diagonalizes the 1/r interaction
/// matrix:
///
///   S = [ c,                    d (a1-a2)/(lambda+|kappa|) ]
///       [ c (a1+a2)/(lambda+|kappa|), d                    ]
pub fn similarity_s(
    c: f64,
    d: f64,
    couplings: &Couplings,
    lambda: f64,
    kappa: i32,
) -> Result<[[f64; 2]; 2]> {
    if c * d == 0.0 || !c.is_finite() || !d.is_finite() {
        return Err(Error::DegenerateTransform {
            reason: format!("similarity parameters must be nonzero finite, got c={c}, d={d}"),
        });
    }
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("lambda must be positive, got {lambda}")));
    }
    let t = lambda + f64::from(kappa.abs());
    let (a1, a2) = (couplings.a1(), couplings.a2());
    let s = [[c, d * (a1 - a2) / t], [c * (a1 + a2) / t, d]];
    let det = c * d * (1.0 - (a1 * a1 - a2 * a2) / (t * t));
    if det == 0.0 || !det.is_finite() {
        return Err(Error::DegenerateTransform {
            reason: format!("det S = {det} for c={c}, d={d}, lambda={lambda}, kappa={kappa}"),
        });
    }
    Ok(s)
}

/// Which radial basis a spinor pair lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinorBasis {
    /// After the similarity transform (the factorized problem).
    Hatted,
    /// The original (upper, lower) = (G, F) components.
    Physical,
}

/// Lower/upper radial pair, either hatted (F-hat, G-hat) or physical
/// (F, G). The upper component is the zero function for the state
/// annihilated by A-.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorRadialPair {
    pub lower: PolyExpFunction,
    pub upper: PolyExpFunction,
    pub basis: SpinorBasis,
    /// (c, d) used to reach the physical basis, when applicable.
    pub s_params: Option<(f64, f64)>,
}

impl SpinorRadialPair {
    pub fn hatted(lower: PolyExpFunction, upper: PolyExpFunction) -> Self {
        SpinorRadialPair { lower, upper, basis: SpinorBasis::Hatted, s_params: None }
    }
}

/// Apply (G, F) = S (G-hat, F-hat) componentwise. Both mixes are sums of
/// class members with equal rate and integer power offset, so each
/// physical component is again a single canonical PolyExp.
pub fn to_physical(pair: &SpinorRadialPair, s: &[[f64; 2]; 2]) -> Result<SpinorRadialPair> {
    if pair.basis != SpinorBasis::Hatted {
        return Err(Error::Domain("to_physical expects a hatted-basis pair".into()));
    }
    let upper = pair.upper.scale(s[0][0]).add(&pair.lower.scale(s[0][1]))?;
    let lower = pair.upper.scale(s[1][0]).add(&pair.lower.scale(s[1][1]))?;
    Ok(SpinorRadialPair {
        lower,
        upper,
        basis: SpinorBasis::Physical,
        s_params: Some((s[0][0], s[1][1])),
    })
}

/// Unit-normalize in L2(0, inf): the squared norm of
/// r^p e^{-br} sum c_j r^j is sum_{j,k} c_j c_k Gamma(2p+j+k+1)/(2b)^{2p+j+k+1},
/// evaluated in closed form. Returns the scaled function and the norm.
pub fn normalize(f: &PolyExpFunction) -> Result<(PolyExpFunction, f64)> {
    if f.is_zero() {
        return Err(Error::Domain("cannot normalize the zero function".into()));
    }
    if f.power <= -0.5 {
        return Err(Error::DivergentNorm { power: f.power });
    }
    let two_beta = 2.0 * f.rate;
    let mut norm_sq = 0.0;
    for (j, cj) in f.coeffs.iter().enumerate() {
        for (k, ck) in f.coeffs.iter().enumerate() {
            if *cj == 0.0 || *ck == 0.0 {
                continue;
            }
            norm_sq += cj * ck * gamma_integral(2.0 * f.power + (j + k) as f64, two_beta)?;
        }
    }
    if !(norm_sq > 0.0) || !norm_sq.is_finite() {
        return Err(Error::Domain(format!("norm^2 = {norm_sq} is not positive finite")));
    }
    let norm = norm_sq.sqrt();
    Ok((f.scale(1.0 / norm), norm))
}

/// Squared L2 norm without normalizing (used for joint-component modes).
pub fn norm_squared(f: &PolyExpFunction) -> Result<f64> {
    if f.is_zero() {
        return Ok(0.0);
    }
    if f.power <= -0.5 {
        return Err(Error::DivergentNorm { power: f.power });
    }
    let two_beta = 2.0 * f.rate;
    let mut norm_sq = 0.0;
    for (j, cj) in f.coeffs.iter().enumerate() {
        for (k, ck) in f.coeffs.iter().enumerate() {
            if *cj == 0.0 || *ck == 0.0 {
                continue;
            }
            norm_sq += cj * ck * gamma_integral(2.0 * f.power + (j + k) as f64, two_beta)?;
        }
    }
    Ok(norm_sq)
}

/// Apply the factorized Hamiltonian -d^2/dr^2 + V_-(r; lambda, q)
/// symbolically. Representation-level helper for eigen-equation checks;
/// the singular low-power pieces cancel for genuine eigenfunctions.
pub fn hamiltonian_minus_apply(f: &PolyExpFunction, lambda: f64, q: f64) -> Result<PolyExpFunction> {
    let kinetic = f.derivative().derivative().scale(-1.0);
    let centrifugal = f.shift_power(-2).scale(lambda * (lambda - 1.0));
    let coulomb = f.shift_power(-1).scale(-2.0 * q);
    let offset = f.scale(q * q / (lambda * lambda));
    kinetic.add(&centrifugal)?.add(&coulomb)?.add(&offset)
}

/// Coefficientwise residual of the eigenvalue equation
/// (-d^2/dr^2 + V_-(.; lambda, q)) f = eigenvalue * f, measured against
/// the largest coefficient of the constituent terms so that exact
/// cancellations (e.g. the zero eigenvalue of the annihilated state) do
/// not degenerate the scale. Infinity when the terms do not combine.
pub fn eigen_equation_residual(f: &PolyExpFunction, lambda: f64, q: f64, eigenvalue: f64) -> f64 {
    let kinetic = f.derivative().derivative().scale(-1.0);
    let centrifugal = f.shift_power(-2).scale(lambda * (lambda - 1.0));
    let coulomb = f.shift_power(-1).scale(-2.0 * q);
    let offset = f.scale(q * q / (lambda * lambda));
    let expected = f.scale(eigenvalue);
    let scale = kinetic
        .max_abs_coeff()
        .max(centrifugal.max_abs_coeff())
        .max(coulomb.max_abs_coeff())
        .max(offset.max_abs_coeff())
        .max(expected.max_abs_coeff());
    if scale == 0.0 {
        return 0.0;
    }
    let residual = kinetic
        .add(&centrifugal)
        .and_then(|s| s.add(&coulomb))
        .and_then(|s| s.add(&offset))
        .and_then(|s| s.sub(&expected));
    match residual {
        Ok(res) => res.max_abs_coeff() / scale,
        Err(_) => f64::INFINITY,
    }
}

/// Residual of the ladder commutator identity at coordinate lambda.
///
/// With the parameter-shift realization, both operator orderings land on
/// the same instantiated function: the raise-then-lower path applies
/// A-(lambda-1) A+(lambda-1), the lower-then-raise path A+(lambda) A-(lambda),
/// and the difference must equal R(lambda) f. Returns the largest
/// relative coefficient deviation, or infinity where the identity is
/// not evaluable (lambda at the remainder pole or an operator domain
/// violation).
pub fn ladder_commutator_residual(f: &PolyExpFunction, lambda: f64, q: f64) -> f64 {
    let r_val = match remainder_r(lambda, q) {
        Ok(v) => v,
        Err(_) => return f64::INFINITY,
    };
    let raised = match apply_a_plus(f, lambda - 1.0, q) {
        Ok(v) => v,
        Err(_) => return f64::INFINITY,
    };
    let fwd = match apply_a_minus(&raised, lambda - 1.0, q) {
        Ok(v) => v,
        Err(_) => return f64::INFINITY,
    };
    let lowered = match apply_a_minus(f, lambda, q) {
        Ok(v) => v,
        Err(_) => return f64::INFINITY,
    };
    let bwd = match apply_a_plus(&lowered, lambda, q) {
        Ok(v) => v,
        Err(_) => return f64::INFINITY,
    };
    let expected = f.scale(r_val);
    let commutator = match fwd.sub(&bwd) {
        Ok(v) => v,
        Err(_) => return f64::INFINITY,
    };
    let scale = fwd
        .max_abs_coeff()
        .max(bwd.max_abs_coeff())
        .max(expected.max_abs_coeff());
    if scale == 0.0 {
        return 0.0;
    }
    match commutator.sub(&expected) {
        Ok(diff) => diff.max_abs_coeff() / scale,
        Err(_) => f64::INFINITY,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{k_hat, level_energy_implicit, Branch};

    #[test]
    fn ground_state_shape() {
        let f = ground_state_f(1.0, 0.8).unwrap();
        assert_eq!(f.power(), 1.0);
        assert_eq!(f.rate(), 0.8);
        assert_eq!(f.coeffs(), &[1.0]);

        let lambda = 0.75f64.sqrt();
        let f = ground_state_f(lambda, 0.5 * lambda).unwrap();
        assert_eq!(f.power(), lambda);
        assert!((f.rate() - 0.5).abs() < 1e-16);
    }

    #[test]
    fn ground_state_rejects_nonpositive_q() {
        assert!(matches!(ground_state_f(1.0, 0.0), Err(Error::UnboundState { .. })));
        assert!(matches!(ground_state_f(1.0, -0.3), Err(Error::UnboundState { .. })));
    }

    #[test]
    fn annihilation_is_exact() {
        for &(lambda, q) in &[(1.0, 0.8), (0.75f64.sqrt(), 0.433), (2.7, 1.9)] {
            let f = ground_state_f(lambda, q).unwrap();
            let g = apply_a_minus(&f, lambda, q).unwrap();
            assert!(g.is_zero(), "lambda={lambda} q={q}: {g:?}");
        }
    }

    #[test]
    fn a_plus_on_shifted_ground_state_matches_printed_form() {
        // A+(l) r^{l+1} e^{-qr/(l+1)} = (2l+1) [r^l - q/(l(l+1)) r^{l+1}] e^{-qr/(l+1)}
        let (lambda, q) = (1.0, 0.8);
        let base = ground_state_f(lambda + 1.0, q).unwrap();
        let f1 = apply_a_plus(&base, lambda, q).unwrap();
        assert_eq!(f1.degree(), Some(1));
        assert_eq!(f1.power(), 1.0);
        assert_eq!(f1.rate(), 0.4);
        let want0 = 2.0 * lambda + 1.0;
        let want1 = -q * (2.0 * lambda + 1.0) / (lambda * (lambda + 1.0));
        assert!((f1.coeffs()[0] - want0).abs() < 1e-14);
        assert!((f1.coeffs()[1] - want1).abs() < 1e-14);
    }

    #[test]
    fn first_excited_printed_structure() {
        // n=1, lambda=1, q=0.8: proportional to (r - 0.4 r^2) e^{-0.4 r},
        // interior zero at lambda(lambda+1)/q = 2.5.
        let f = excited_state_f(1, 1.0, 0.8).unwrap();
        assert_eq!(f.degree(), Some(1));
        assert_eq!(f.power(), 1.0);
        assert_eq!(f.rate(), 0.4);
        let zero_at = -f.coeffs()[0] / f.coeffs()[1];
        assert!((zero_at - 2.5).abs() < 1e-13);
    }

    #[test]
    fn excited_state_base_case_and_depth_guard() {
        let f = excited_state_f(0, 1.3, 0.6).unwrap();
        assert_eq!(f, ground_state_f(1.3, 0.6).unwrap());
        assert!(matches!(excited_state_f(65, 1.0, 0.8), Err(Error::DepthLimit { .. })));
    }

    #[test]
    fn excited_state_solves_eigen_equation() {
        // H_-(lambda) F_n = [q^2/lambda^2 - q^2/(lambda+n)^2] F_n at
        // coefficient level, checked through the exact second derivative.
        for &(lambda, q) in &[(1.0, 0.8), (0.866_025_403_784_438_6, 0.433), (1.7, 1.1)] {
            for n in 0..=5u32 {
                let f = excited_state_f(n, lambda, q).unwrap();
                assert_eq!(f.degree(), Some(n as usize));
                let nl = lambda + f64::from(n);
                let eig = q * q / (lambda * lambda) - q * q / (nl * nl);
                let res = eigen_equation_residual(&f, lambda, q, eig);
                assert!(res < 1e-10, "lambda={lambda} q={q} n={n}: residual {res:e}");
            }
        }
    }

    #[test]
    fn partner_potentials_pointwise() {
        // lambda=1 kills the centrifugal term of the minus partner
        let v = v_minus(2.0, 1.0, 0.8).unwrap();
        assert!((v - (-1.6 / 2.0 + 0.64)).abs() < 1e-15);
        let v = v_plus(1.0, 1.0, 0.8).unwrap();
        assert!((v - 1.04).abs() < 1e-15);
        assert!(matches!(v_minus(0.0, 1.0, 0.8), Err(Error::OriginSingularity { .. })));
        assert!(matches!(v_plus(-1.0, 1.0, 0.8), Err(Error::OriginSingularity { .. })));
    }

    #[test]
    fn shape_invariance_pointwise() {
        // V_+(r, l) - V_-(r, l+1) = R(l+1) for all r
        for &(lambda, q) in &[(1.0, 0.8), (0.6, 1.3), (3.2, 0.4)] {
            let r_of_shift = remainder_r(lambda + 1.0, q).unwrap();
            for &r in &[1e-3, 0.7, 5.0, 42.0] {
                let plus = v_plus(r, lambda, q).unwrap();
                let lhs = plus - v_minus(r, lambda + 1.0, q).unwrap();
                assert!(
                    (lhs - r_of_shift).abs() < 1e-12 * plus.abs().max(1.0),
                    "lambda={lambda} q={q} r={r}"
                );
            }
        }
    }

    #[test]
    fn remainder_examples() {
        assert!((remainder_r(2.0, 0.8).unwrap() - 0.48).abs() < 1e-15);
        assert!(remainder_r(1e9, 0.8).unwrap() < 1e-15);
        assert!(matches!(remainder_r(1.0, 0.5), Err(Error::PoleAtOne)));
    }

    #[test]
    fn remainder_sum_telescopes() {
        for &(lambda, q, n) in &[(1.0, 0.8, 4u32), (0.73, 1.1, 6), (2.4, 0.3, 3)] {
            let sum = remainder_sum(lambda, q, n).unwrap();
            let nl = lambda + f64::from(n);
            let want = q * q / (lambda * lambda) - q * q / (nl * nl);
            assert!(((sum - want) / want).abs() < 1e-13, "lambda={lambda} n={n}");
        }
    }

    #[test]
    fn factorization_eigenvalue_from_double_application() {
        // A+(l) A-(l) F_n = [q^2/l^2 - q^2/(l+n)^2] F_n
        let (lambda, q) = (1.0, 16.0 / 17.0);
        let f = excited_state_f(1, lambda, q).unwrap();
        let down = apply_a_minus(&f, lambda, q).unwrap();
        let both = apply_a_plus(&down, lambda, q).unwrap();
        let eig = q * q / (lambda * lambda) - q * q / ((lambda + 1.0) * (lambda + 1.0));
        assert!(coeffwise_residual(&both, &f.scale(eig)) < 1e-12);
    }

    #[test]
    fn upper_component_ground_state_is_zero() {
        let cpl = Couplings::new(0.5, 0.5, 1.0).unwrap();
        let level = level_energy_implicit(&cpl, 1.0, 0, Branch::Plus).unwrap();
        let q = cpl.coulomb_strength(level.energy);
        let kh = k_hat(level.energy, &cpl, 1.0, -1, 1.0, 1.0).unwrap();
        let f0 = ground_state_f(1.0, q).unwrap();
        let g = upper_component_hatted(&f0, 1.0, q, &kh).unwrap();
        assert!(g.is_zero());
    }

    #[test]
    fn upper_component_intertwines_and_is_linear() {
        let cpl = Couplings::new(0.5, 0.5, 1.0).unwrap();
        let level = level_energy_implicit(&cpl, 1.0, 1, Branch::Plus).unwrap();
        let q = cpl.coulomb_strength(level.energy);
        let kh = k_hat(level.energy, &cpl, 1.0, -1, 1.0, 1.0).unwrap();
        let f = excited_state_f(1, 1.0, q).unwrap();
        let g = upper_component_hatted(&f, 1.0, q, &kh).unwrap();
        assert_eq!(g.degree(), Some(0));
        assert!((g.power() - 2.0).abs() < 1e-12);

        // A+ G = kminus F, coefficientwise
        let back = apply_a_plus(&g, 1.0, q).unwrap();
        let res = coeffwise_residual(&back, &f.scale(kh.kminus));
        assert!(res < 1e-9, "intertwining residual {res:e}");

        // linearity under input scaling
        let g3 = upper_component_hatted(&f.scale(3.0), 1.0, q, &kh).unwrap();
        assert!(coeffwise_residual(&g3, &g.scale(3.0)) < 1e-14);
    }

    #[test]
    fn upper_component_rejects_zero_kplus() {
        let cpl = Couplings::new(0.5, 0.5, 1.0).unwrap();
        let mut kh = k_hat(0.88, &cpl, 1.0, -1, 1.0, 1.0).unwrap();
        kh.kplus = 0.0;
        let f = excited_state_f(1, 1.0, 0.94).unwrap();
        assert!(matches!(
            upper_component_hatted(&f, 1.0, 0.94, &kh),
            Err(Error::DegenerateKPlus)
        ));
    }

    #[test]
    fn similarity_matrix_entries_and_diagonalization() {
        let cpl = Couplings::new(0.5, 0.5, 1.0).unwrap();
        let s = similarity_s(1.0, 1.0, &cpl, 1.0, -1).unwrap();
        assert_eq!(s[0][1], 0.0);
        assert_eq!(s[1][0], 0.5);

        // zero couplings: no mixing
        let free = Couplings::new(0.0, 0.0, 1.0).unwrap();
        let s = similarity_s(2.0, 0.7, &free, 1.0, 1).unwrap();
        assert_eq!(s, [[2.0, 0.0], [0.0, 0.7]]);

        // S^{-1} Lambda S = lambda rho3 with Lambda the 1/r interaction matrix
        for &(a1, a2, kap, c, d) in &[
            (0.5, 0.2, 2, 1.3, 0.7),
            (0.9, 0.1, -3, 2.0, 0.5),
            (0.3, 0.8, 1, 1.0, 2.0),
        ] {
            let cpl = Couplings::new(a1, a2, 1.0).unwrap();
            let lambda = crate::spectral::effective_lambda(kap, &cpl).unwrap();
            let ak = f64::from(kap.abs());
            let s = similarity_s(c, d, &cpl, lambda, kap).unwrap();
            let l = [[ak, a2 - a1], [a1 + a2, -ak]];
            // S^-1 (L S)
            let ls = [
                [
                    l[0][0] * s[0][0] + l[0][1] * s[1][0],
                    l[0][0] * s[0][1] + l[0][1] * s[1][1],
                ],
                [
                    l[1][0] * s[0][0] + l[1][1] * s[1][0],
                    l[1][0] * s[0][1] + l[1][1] * s[1][1],
                ],
            ];
            let det = s[0][0] * s[1][1] - s[0][1] * s[1][0];
            let inv = [[s[1][1] / det, -s[0][1] / det], [-s[1][0] / det, s[0][0] / det]];
            let diag = [
                [
                    inv[0][0] * ls[0][0] + inv[0][1] * ls[1][0],
                    inv[0][0] * ls[0][1] + inv[0][1] * ls[1][1],
                ],
                [
                    inv[1][0] * ls[0][0] + inv[1][1] * ls[1][0],
                    inv[1][0] * ls[0][1] + inv[1][1] * ls[1][1],
                ],
            ];
            for (i, row) in diag.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    let want = if i == j { lambda * (1.0 - 2.0 * i as f64) } else { 0.0 };
                    assert!(
                        (v - want).abs() < 1e-13,
                        "a1={a1} a2={a2} kap={kap}: entry ({i},{j}) = {v}, want {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn similarity_rejects_degenerate() {
        let cpl = Couplings::new(0.5, 0.5, 1.0).unwrap();
        assert!(matches!(
            similarity_s(0.0, 1.0, &cpl, 1.0, -1),
            Err(Error::DegenerateTransform { .. })
        ));
    }

    #[test]
    fn to_physical_mixes_components() {
        let cpl = Couplings::new(0.5, 0.5, 1.0).unwrap();
        let level = level_energy_implicit(&cpl, 1.0, 1, Branch::Plus).unwrap();
        let q = cpl.coulomb_strength(level.energy);
        let kh = k_hat(level.energy, &cpl, 1.0, -1, 1.0, 1.0).unwrap();
        let f = excited_state_f(1, 1.0, q).unwrap();
        let g = upper_component_hatted(&f, 1.0, q, &kh).unwrap();
        let s = similarity_s(1.0, 1.0, &cpl, 1.0, -1).unwrap();
        let pair = SpinorRadialPair::hatted(f.clone(), g.clone());
        let phys = to_physical(&pair, &s).unwrap();
        assert_eq!(phys.basis, SpinorBasis::Physical);
        // a1 = a2 zeroes S[0][1]: physical upper is c * G-hat
        assert!(coeffwise_residual(&phys.upper, &g.scale(1.0)) < 1e-14);
        // physical lower mixes both
        let want = g.scale(0.5).add(&f).unwrap();
        assert!(coeffwise_residual(&phys.lower, &want) < 1e-14);
    }

    #[test]
    fn normalize_closed_form_values() {
        let f = PolyExpFunction::new(1.0, 0.8, vec![1.0]).unwrap();
        let (unit, norm) = normalize(&f).unwrap();
        assert!((norm * norm - 0.488_281_25).abs() < 1e-15);
        let (_, renorm) = normalize(&unit).unwrap();
        assert!((renorm - 1.0).abs() < 1e-14);

        let f = PolyExpFunction::new(0.5, 1.0, vec![1.0]).unwrap();
        let (_, norm) = normalize(&f).unwrap();
        assert!((norm * norm - 0.25).abs() < 1e-15);
    }

    #[test]
    fn normalize_is_homogeneous() {
        let f = PolyExpFunction::new(1.3, 0.6, vec![1.0, -0.4, 0.02]).unwrap();
        let (unit, norm) = normalize(&f).unwrap();
        let (unit3, norm3) = normalize(&f.scale(3.0)).unwrap();
        assert!(((norm3 - 3.0 * norm) / norm3).abs() < 1e-14);
        assert!(coeffwise_residual(&unit, &unit3) < 1e-14);
    }

    #[test]
    fn normalize_rejects_divergent_and_zero() {
        let f = PolyExpFunction { power: -0.5, rate: 1.0, coeffs: vec![1.0] };
        assert!(matches!(normalize(&f), Err(Error::DivergentNorm { .. })));
        assert!(normalize(&PolyExpFunction::zero()).is_err());
    }

    #[test]
    fn commutator_identity_on_family_members() {
        // [B-, B+] f = R(lambda) f with the parameter-shift realization
        for &(lambda, q) in &[(2.0, 0.8), (1.866_025_403_784_438_6, 0.433), (3.4, 1.2)] {
            let f0 = ground_state_f(lambda, q).unwrap();
            assert!(ladder_commutator_residual(&f0, lambda, q) < 1e-10);
            let f1 = apply_a_plus(&ground_state_f(lambda + 1.0, q).unwrap(), lambda, q).unwrap();
            assert!(ladder_commutator_residual(&f1, lambda, q) < 1e-10);
        }
    }

    #[test]
    fn commutator_pole_reports_infinity() {
        let f = ground_state_f(1.0, 0.8).unwrap();
        assert!(ladder_commutator_residual(&f, 1.0, 0.8).is_infinite());
    }

    #[test]
    fn canonical_form_lifts_and_prunes() {
        let f = PolyExpFunction::new(0.5, 1.0, vec![0.0, 2.0, 1e-16, 0.0]).unwrap();
        assert_eq!(f.power(), 1.5);
        assert_eq!(f.coeffs(), &[2.0]);
        assert!(PolyExpFunction::new(1.0, 1.0, vec![0.0]).unwrap().is_zero());
    }

    #[test]
    fn add_aligns_integer_power_offsets() {
        let a = PolyExpFunction::new(1.0, 0.5, vec![1.0]).unwrap();
        let b = PolyExpFunction::new(3.0, 0.5, vec![2.0]).unwrap();
        let sum = a.add(&b).unwrap();
        assert_eq!(sum.power(), 1.0);
        assert_eq!(sum.coeffs(), &[1.0, 0.0, 2.0]);
        let c = PolyExpFunction::new(1.5, 0.5, vec![1.0]).unwrap();
        assert!(a.add(&c).is_err());
        let d = PolyExpFunction::new(1.0, 0.7, vec![1.0]).unwrap();
        assert!(a.add(&d).is_err());
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let f = PolyExpFunction::new(1.7, 0.9, vec![0.3, -1.1, 0.25]).unwrap();
        let df = f.derivative();
        for &r in &[0.4, 1.3, 6.0] {
            let h = 1e-6;
            let fd = (f.eval(r + h) - f.eval(r - h)) / (2.0 * h);
            assert!((df.eval(r) - fd).abs() < 1e-7 * fd.abs().max(1.0), "r={r}");
        }
    }
}
