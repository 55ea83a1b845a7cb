//! Model closures for the constrained-control HJB family.
//!
//! Each model describes wealth dynamics `dX = μ(θ)dt + σ(θ)dW` with the
//! control capped at `θ ≤ 1`. Under the Riccati substitution
//! `φ = −(1/ω)·∂ₓₓV/∂ₓV` (shifted by the drift correction for
//! [`Variant::QuadraticDrift`]), the HJB equation collapses to a quasilinear
//! conservation-form PDE for the local risk aversion φ:
//!
//! ```text
//!     ∂ₜφ + ∂ₓₓ A(φ) + ∂ₓ B(φ) = 0,
//! ```
//!
//! where the closures `A` and `B` absorb the pointwise-optimal control. The
//! control bound makes both closures piecewise, split at φ = 1 (the level at
//! which the unconstrained optimum `θ = θ̂(φ)` hits the cap):
//!
//! * [`Variant::Simple`]      — `μ = ωθ`, `σ = θ`:
//!   `A = φ/2` (φ≤1), `1 − 1/(2φ)` (φ>1);
//!   `B = −(ω/2)(1−φ)²` (φ≤1), `0` (φ>1).
//! * [`Variant::QuadraticDrift`] — `μ = ωθ − θ²/2`, `σ = θ`: same `A`,
//!   `B̃ = B + A` (the drift correction shifts the flux by the diffusion
//!   closure).
//! * [`Variant::General`]     — `μ = β + ωθ`, `σ² = 2(α² + θᵐ/m)`, `m > 1`:
//!   `A = (α² + 1/m)φ` (φ≤1), `1 − ((m−1)/m)·φ^{−1/(m−1)} + α²φ` (φ>1);
//!   `B = (β+ω)φ − ω(α²+1/m)φ² − ω(m−1)/m` (φ≤1),
//!   `βφ − ωα²φ² + ((m−1)/m)·ω·(φ^{(m−2)/(m−1)} − 1)` (φ>1).
//!
//! Both closures are C¹ across the junction for every variant. `General` with
//! `α = β = 0, m = 2` reduces exactly to `Simple`.
//!
//! Traveling-wave analysis works on the phase line of `z = A(v)`: a wave
//! `φ(x,t) = v(x + c(T−t))` satisfies `−c·v + (A(v))′ + B(v) = K₀`, so the
//! orbit obeys `z′ = F(z) = G(A⁻¹(z))` with the chord defect
//! `G(v) = K₀ + c·v − B(v)`. [`PhaseLine`] bundles `(G, F)` for a given
//! `(c, K₀)` pair.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::newton_bisect;

/// Upper bound on the control; the closures hard-code the cap `θ ≤ 1`.
pub const THETA_BOUND: f64 = 1.0;

/// Relative accuracy of the numeric branch of [`ModelParams::invert_a`].
pub const INVERT_A_TOL: f64 = 1e-12;

/// Which side of the φ = 1 junction a closure formula belongs to.
///
/// Evaluation at exactly φ = 1 uses [`ClosureBranch::AtOrBelowOne`]; the
/// branch-forced entry points exist so continuity across the junction can be
/// checked from both sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureBranch {
    AtOrBelowOne,
    AboveOne,
}

/// Model family selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Linear drift `ωθ`, volatility `θ`.
    Simple,
    /// Drift `ωθ − θ²/2`, volatility `θ`; closures act on the shifted
    /// risk-aversion variable `φ̃ = −(1/ω)(∂ₓₓV/∂ₓV − 1)`.
    QuadraticDrift,
    /// Drift `β + ωθ`, squared volatility `2(α² + θᵐ/m)` with `m > 1`.
    General,
}

/// Validated model parameters.
///
/// `alpha`, `beta`, `m` only participate for [`Variant::General`]; the named
/// constructors keep the other variants from carrying stray values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub variant: Variant,
    /// Risk-premium scale ω > 0.
    pub omega: f64,
    /// Control-independent volatility floor (General only), α ≥ 0.
    pub alpha: f64,
    /// Control-independent drift (General only).
    pub beta: f64,
    /// Volatility-growth exponent (General only), m > 1.
    pub m: f64,
}

impl ModelParams {
    pub fn simple(omega: f64) -> Result<Self> {
        Self::validated(Variant::Simple, omega, 0.0, 0.0, 2.0)
    }

    pub fn quadratic_drift(omega: f64) -> Result<Self> {
        Self::validated(Variant::QuadraticDrift, omega, 0.0, 0.0, 2.0)
    }

    pub fn general(omega: f64, alpha: f64, beta: f64, m: f64) -> Result<Self> {
        Self::validated(Variant::General, omega, alpha, beta, m)
    }

    fn validated(variant: Variant, omega: f64, alpha: f64, beta: f64, m: f64) -> Result<Self> {
        if !omega.is_finite() || omega <= 0.0 {
            return Err(Error::domain(format!(
                "omega must be positive, got {omega}"
            )));
        }
        if variant == Variant::General {
            if !alpha.is_finite() || alpha < 0.0 {
                return Err(Error::domain(format!("alpha must be >= 0, got {alpha}")));
            }
            if !beta.is_finite() {
                return Err(Error::domain(format!("beta must be finite, got {beta}")));
            }
            if !m.is_finite() || m <= 1.0 {
                return Err(Error::domain(format!("m must exceed 1, got {m}")));
            }
        }
        Ok(Self {
            variant,
            omega,
            alpha,
            beta,
            m,
        })
    }

    fn check_phi(&self, phi: f64) -> Result<()> {
        if !phi.is_finite() || phi <= 0.0 {
            return Err(Error::domain(format!("phi must be positive, got {phi}")));
        }
        Ok(())
    }

    /// Branch of the closure formulas used at `phi` (junction goes below).
    fn branch_of(phi: f64) -> ClosureBranch {
        if phi <= 1.0 {
            ClosureBranch::AtOrBelowOne
        } else {
            ClosureBranch::AboveOne
        }
    }

    // Unchecked evaluation for hot paths (PDE kernel, root scans, Monte
    // Carlo) where φ > 0 is guaranteed by construction upstream.
    pub(crate) fn a_raw(&self, phi: f64) -> f64 {
        self.a_on(Self::branch_of(phi), phi)
    }
    pub(crate) fn a_prime_raw(&self, phi: f64) -> f64 {
        self.a_prime_on(Self::branch_of(phi), phi)
    }
    pub(crate) fn b_raw(&self, phi: f64) -> f64 {
        self.b_on(Self::branch_of(phi), phi)
    }
    pub(crate) fn b_prime_raw(&self, phi: f64) -> f64 {
        self.b_prime_on(Self::branch_of(phi), phi)
    }
    pub(crate) fn theta_star_raw(&self, phi: f64) -> f64 {
        match self.variant {
            Variant::Simple | Variant::QuadraticDrift => {
                if phi <= 1.0 {
                    THETA_BOUND
                } else {
                    1.0 / phi
                }
            }
            Variant::General => {
                if phi <= 1.0 {
                    THETA_BOUND
                } else {
                    phi.powf(-1.0 / (self.m - 1.0))
                }
            }
        }
    }

    // ───────────────────────── diffusion closure A ─────────────────────────

    /// Diffusion closure `A(φ)`; strictly increasing in φ.
    pub fn a(&self, phi: f64) -> Result<f64> {
        self.check_phi(phi)?;
        Ok(self.a_on(Self::branch_of(phi), phi))
    }

    /// `A` evaluated with a forced branch formula (continuity checks).
    pub fn a_on(&self, branch: ClosureBranch, phi: f64) -> f64 {
        match (self.variant, branch) {
            (Variant::Simple | Variant::QuadraticDrift, ClosureBranch::AtOrBelowOne) => 0.5 * phi,
            (Variant::Simple | Variant::QuadraticDrift, ClosureBranch::AboveOne) => 1.0 - 0.5 / phi,
            (Variant::General, ClosureBranch::AtOrBelowOne) => {
                (self.alpha * self.alpha + 1.0 / self.m) * phi
            }
            (Variant::General, ClosureBranch::AboveOne) => {
                let m = self.m;
                1.0 - (m - 1.0) / m * phi.powf(-1.0 / (m - 1.0)) + self.alpha * self.alpha * phi
            }
        }
    }

    /// `A′(φ)`; strictly positive, so `A` is invertible on its range.
    pub fn a_prime(&self, phi: f64) -> Result<f64> {
        self.check_phi(phi)?;
        Ok(self.a_prime_on(Self::branch_of(phi), phi))
    }

    /// `A′` with a forced branch formula.
    pub fn a_prime_on(&self, branch: ClosureBranch, phi: f64) -> f64 {
        match (self.variant, branch) {
            (Variant::Simple | Variant::QuadraticDrift, ClosureBranch::AtOrBelowOne) => 0.5,
            (Variant::Simple | Variant::QuadraticDrift, ClosureBranch::AboveOne) => {
                0.5 / (phi * phi)
            }
            (Variant::General, ClosureBranch::AtOrBelowOne) => {
                self.alpha * self.alpha + 1.0 / self.m
            }
            (Variant::General, ClosureBranch::AboveOne) => {
                let m = self.m;
                phi.powf(-m / (m - 1.0)) / m + self.alpha * self.alpha
            }
        }
    }

    /// Range `(0, sup A)` of the diffusion closure over φ ∈ (0, ∞).
    ///
    /// The supremum is 1 for `Simple`/`QuadraticDrift` and for `General` with
    /// `α = 0`; it is +∞ once `α > 0`.
    pub fn a_range(&self) -> (f64, f64) {
        let sup = match self.variant {
            Variant::Simple | Variant::QuadraticDrift => 1.0,
            Variant::General => {
                if self.alpha > 0.0 {
                    f64::INFINITY
                } else {
                    1.0
                }
            }
        };
        (0.0, sup)
    }

    /// Inverse of the diffusion closure, `A⁻¹(z)`.
    ///
    /// Closed form everywhere except the `General` φ > 1 branch, which is
    /// solved by a bracketed bisection+Newton hybrid on a geometrically grown
    /// bracket, to [`INVERT_A_TOL`] relative accuracy.
    pub fn invert_a(&self, z: f64) -> Result<f64> {
        let (lo, hi) = self.a_range();
        if !z.is_finite() || z <= lo || z >= hi {
            return Err(Error::domain(format!(
                "z = {z} outside the open range ({lo}, {hi}) of A"
            )));
        }
        match self.variant {
            Variant::Simple | Variant::QuadraticDrift => {
                Ok(if z <= 0.5 { 2.0 * z } else { 0.5 / (1.0 - z) })
            }
            Variant::General => {
                let a_junction = self.alpha * self.alpha + 1.0 / self.m;
                if z <= a_junction {
                    return Ok(z / a_junction);
                }
                let mut hi = 2.0;
                let mut grow = 0;
                while self.a_on(ClosureBranch::AboveOne, hi) < z {
                    hi *= 2.0;
                    grow += 1;
                    if grow > 200 {
                        return Err(Error::numeric(format!(
                            "invert_a bracket growth failed for z = {z}"
                        )));
                    }
                }
                newton_bisect(
                    |p| self.a_on(ClosureBranch::AboveOne, p) - z,
                    |p| self.a_prime_on(ClosureBranch::AboveOne, p),
                    1.0,
                    hi,
                    INVERT_A_TOL,
                )
            }
        }
    }

    // ─────────────────────────── flux closure B ────────────────────────────

    /// Flux closure `B(φ)` (`B̃ = B + A` for [`Variant::QuadraticDrift`]).
    pub fn b(&self, phi: f64) -> Result<f64> {
        self.check_phi(phi)?;
        Ok(self.b_on(Self::branch_of(phi), phi))
    }

    /// `B` with a forced branch formula.
    pub fn b_on(&self, branch: ClosureBranch, phi: f64) -> f64 {
        match (self.variant, branch) {
            (Variant::Simple, ClosureBranch::AtOrBelowOne) => {
                let d = 1.0 - phi;
                -0.5 * self.omega * d * d
            }
            (Variant::Simple, ClosureBranch::AboveOne) => 0.0,
            (Variant::QuadraticDrift, br) => {
                let simple = match br {
                    ClosureBranch::AtOrBelowOne => {
                        let d = 1.0 - phi;
                        -0.5 * self.omega * d * d
                    }
                    ClosureBranch::AboveOne => 0.0,
                };
                simple + self.a_on(br, phi)
            }
            (Variant::General, ClosureBranch::AtOrBelowOne) => {
                let (w, m) = (self.omega, self.m);
                let a2 = self.alpha * self.alpha;
                (self.beta + w) * phi - w * (a2 + 1.0 / m) * phi * phi - w * (m - 1.0) / m
            }
            (Variant::General, ClosureBranch::AboveOne) => {
                let (w, m) = (self.omega, self.m);
                let a2 = self.alpha * self.alpha;
                self.beta * phi - w * a2 * phi * phi
                    + (m - 1.0) / m * w * (phi.powf((m - 2.0) / (m - 1.0)) - 1.0)
            }
        }
    }

    /// `B′(φ)`.
    pub fn b_prime(&self, phi: f64) -> Result<f64> {
        self.check_phi(phi)?;
        Ok(self.b_prime_on(Self::branch_of(phi), phi))
    }

    /// `B′` with a forced branch formula.
    pub fn b_prime_on(&self, branch: ClosureBranch, phi: f64) -> f64 {
        match (self.variant, branch) {
            (Variant::Simple, ClosureBranch::AtOrBelowOne) => self.omega * (1.0 - phi),
            (Variant::Simple, ClosureBranch::AboveOne) => 0.0,
            (Variant::QuadraticDrift, br) => {
                let simple = match br {
                    ClosureBranch::AtOrBelowOne => self.omega * (1.0 - phi),
                    ClosureBranch::AboveOne => 0.0,
                };
                simple + self.a_prime_on(br, phi)
            }
            (Variant::General, ClosureBranch::AtOrBelowOne) => {
                let (w, m) = (self.omega, self.m);
                let a2 = self.alpha * self.alpha;
                self.beta + w - 2.0 * w * (a2 + 1.0 / m) * phi
            }
            (Variant::General, ClosureBranch::AboveOne) => {
                let (w, m) = (self.omega, self.m);
                let a2 = self.alpha * self.alpha;
                self.beta - 2.0 * w * a2 * phi + w * (m - 2.0) / m * phi.powf(-1.0 / (m - 1.0))
            }
        }
    }

    // ─────────────────────────── optimal control ───────────────────────────

    /// Pointwise-optimal control `θ*(φ)`, capped at [`THETA_BOUND`].
    ///
    /// `min(1, 1/φ)` for `Simple`/`QuadraticDrift`, `min(1, φ^{−1/(m−1)})`
    /// for `General`; continuous and non-increasing in φ.
    pub fn theta_star(&self, phi: f64) -> Result<f64> {
        self.check_phi(phi)?;
        Ok(match self.variant {
            Variant::Simple | Variant::QuadraticDrift => {
                if phi <= 1.0 {
                    THETA_BOUND
                } else {
                    1.0 / phi
                }
            }
            Variant::General => {
                if phi <= 1.0 {
                    THETA_BOUND
                } else {
                    phi.powf(-1.0 / (self.m - 1.0))
                }
            }
        })
    }
}

// ════════════════════════════ phase-line pair ════════════════════════════

/// The pair `(G, F)` induced by a wave speed `c` and integration constant
/// `K₀`:
///
/// * `G(v) = K₀ + c·v − B(v)` — chord defect in φ-space; wave limits are its
///   roots, and `sign G′` at a root decides whether the phase-line
///   equilibrium repels (`G′>0`, the ξ→−∞ end) or attracts (`G′<0`, ξ→+∞).
/// * `F(z) = G(A⁻¹(z))` — the orbit right-hand side `z′ = F(z)` in the
///   transformed variable `z = A(v)`.
#[derive(Debug, Clone, Copy)]
pub struct PhaseLine<'p> {
    pub params: &'p ModelParams,
    pub c: f64,
    pub k0: f64,
}

impl<'p> PhaseLine<'p> {
    pub fn new(params: &'p ModelParams, c: f64, k0: f64) -> Self {
        Self { params, c, k0 }
    }

    /// `G(v) = K₀ + c·v − B(v)`, v > 0.
    pub fn g(&self, v: f64) -> Result<f64> {
        Ok(self.k0 + self.c * v - self.params.b(v)?)
    }

    /// `G′(v) = c − B′(v)`.
    pub fn g_prime(&self, v: f64) -> Result<f64> {
        Ok(self.c - self.params.b_prime(v)?)
    }

    /// `F(z) = G(A⁻¹(z))`, z in the open range of `A`.
    pub fn f(&self, z: f64) -> Result<f64> {
        let v = self.params.invert_a(z)?;
        self.g(v)
    }

    /// `F′(z) = G′(v)/A′(v)` at `v = A⁻¹(z)`.
    pub fn f_prime(&self, z: f64) -> Result<f64> {
        let v = self.params.invert_a(z)?;
        Ok(self.g_prime(v)? / self.params.a_prime(v)?)
    }
}
