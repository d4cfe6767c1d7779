//! The forward map u(φ), its quarter period, Newton inversion u ↦ φ, and the
//! full real-line frame of derived functions.
//!
//! The integrand F(1/6, 5/6; 1/2; κ²sin²θ) equals cos(2ψ/3)/cos ψ with
//! sin ψ = κ sin θ (DLMF 15.4.12), so it is analytic, π-periodic, and pinned
//! to [1/2, 1/λ] on the real line. That makes u strictly increasing with
//! dφ/du ∈ [λ, 2] globally, and the inversion a safeguarded Newton iteration
//! with guaranteed bracket.

use crate::error::{Error, Result};

/// Quadrature and root-finding tolerances used by the real-line pipeline.
///
/// `quad_rel` is the relative agreement required between successive
/// panel-halving refinements; `newton_rel` bounds |u(φ) − u| relative to
/// max(1, |u|) at acceptance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub quad_rel: f64,
    pub newton_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            quad_rel: 1e-14,
            newton_rel: 1e-13,
        }
    }
}

/// |c| at and below which tan φ and its square are flagged undefined.
const TN_POLE_THRESHOLD: f64 = 1e-12;

/// Panel cap for the adaptive quadrature; unreachable for this analytic
/// integrand but bounds the work in any case.
const MAX_PANELS: usize = 1 << 14;

/// Newton iteration cap; exceeding it signals an implementation bug, not a
/// domain limit (the map is a global diffeomorphism of ℝ).
const MAX_NEWTON_ITERS: usize = 60;

/// The parameter triple (κ, λ, Λ): modulus, complementary modulus, and the
/// constant Λ = 1 − 2λ² = κ² − λ² entering the ∇ differential equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Modulus {
    kappa: f64,
    lambda: f64,
    big_lambda: f64,
}

impl Modulus {
    /// Requires 0 < κ < 1.
    pub fn new(kappa: f64) -> Result<Modulus> {
        if !(kappa > 0.0 && kappa < 1.0) {
            return Err(Error::Domain {
                value: kappa,
                domain: "(0, 1)",
            });
        }
        let lambda = (1.0 - kappa * kappa).sqrt();
        // 2κ² − 1 equals 1 − 2λ² with a single rounding.
        Ok(Modulus {
            kappa,
            lambda,
            big_lambda: 2.0 * kappa * kappa - 1.0,
        })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// λ = √(1 − κ²).
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Λ = 1 − 2λ²; zero exactly when κ² = 1/2.
    pub fn big_lambda(&self) -> f64 {
        self.big_lambda
    }
}

/// One real evaluation point: the argument u, the angles φ and ψ, and every
/// derived function of the frame. `tn` and `t_sq` are `None` where cos φ
/// vanishes (φ ≡ π/2 mod π).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub u: f64,
    pub phi: f64,
    pub psi: f64,
    /// sin φ
    pub s: f64,
    /// cos φ
    pub c: f64,
    /// cos ψ
    pub d: f64,
    /// δ = dφ/du = d/∂
    pub delta: f64,
    /// ∂ = cos(2ψ/3)
    pub p: f64,
    /// σ = sin(2ψ/3)
    pub sigma: f64,
    /// ∇ = ∂²
    pub nabla: f64,
    /// S = s²
    pub s_sq: f64,
    /// C = c²
    pub c_sq: f64,
    /// D = d²
    pub d_sq: f64,
    /// t = s/c = tan φ, absent at poles of tan
    pub tn: Option<f64>,
    /// T = t², absent at poles of tan
    pub t_sq: Option<f64>,
}

/// ψ(φ): the principal branch of arcsin(κ sin φ). |κ sin φ| ≤ κ < 1 keeps
/// the result inside [−arcsin κ, arcsin κ], which is also the continuous
/// branch through ψ(0) = 0 on all of ℝ.
pub fn psi_of_phi(m: &Modulus, phi: f64) -> f64 {
    (m.kappa * phi.sin()).asin()
}

/// du/dφ at θ: F(1/6, 5/6; 1/2; κ²sin²θ) = cos(2ψ/3)/cos ψ = ∂/d.
fn integrand(m: &Modulus, theta: f64) -> f64 {
    let psi = psi_of_phi(m, theta);
    (2.0 * psi / 3.0).cos() / psi.cos()
}

/// 15-point Gauss-Legendre nodes and weights on [−1, 1].
const GL15: [(f64, f64); 15] = [
    (-0.98799251802048542849, 0.030753241996117268355),
    (-0.93727339240070590431, 0.070366047488108124709),
    (-0.84820658341042721620, 0.10715922046717193501),
    (-0.72441773136017004742, 0.13957067792615431445),
    (-0.57097217260853884754, 0.16626920581699393355),
    (-0.39415134707756336990, 0.18616100001556221103),
    (-0.20119409399743452230, 0.19843148532711157646),
    (0.0, 0.20257824192556127288),
    (0.20119409399743452230, 0.19843148532711157646),
    (0.39415134707756336990, 0.18616100001556221103),
    (0.57097217260853884754, 0.16626920581699393355),
    (0.72441773136017004742, 0.13957067792615431445),
    (0.84820658341042721620, 0.10715922046717193501),
    (0.93727339240070590431, 0.070366047488108124709),
    (0.98799251802048542849, 0.030753241996117268355),
];

fn gl15_panel(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in GL15 {
        acc += w * f(mid + half * x);
    }
    acc * half
}

/// Composite Gauss-Legendre with panel halving until two successive
/// refinements agree to `rel_tol`. The integrands here are entire, so the
/// composite rule converges superexponentially and the cap is never reached
/// in practice; the last refinement is returned in any case.
fn adaptive_gl(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let mut panels = 1usize;
    let mut estimate = gl15_panel(&f, a, b);
    while panels < MAX_PANELS {
        panels *= 2;
        let width = (b - a) / panels as f64;
        let mut acc = 0.0;
        for i in 0..panels {
            acc += gl15_panel(&f, a + i as f64 * width, a + (i + 1) as f64 * width);
        }
        let converged = (acc - estimate).abs() <= rel_tol * acc.abs().max(f64::MIN_POSITIVE);
        estimate = acc;
        if converged {
            break;
        }
    }
    estimate
}

/// u(φ) = ∫₀^φ F(1/6, 5/6; 1/2; κ²sin²θ) dθ with default tolerances.
pub fn forward_u(m: &Modulus, phi: f64) -> f64 {
    forward_u_with(m, phi, &Tolerances::default())
}

/// u(φ) at explicit tolerances. Odd in φ by construction; |φ| is reduced by
/// the integrand's π-periodicity (u(r + nπ) = u(r) + n·2K₆) so panel counts
/// stay bounded for large arguments.
pub fn forward_u_with(m: &Modulus, phi: f64, tol: &Tolerances) -> f64 {
    let a = phi.abs();
    let n = (a / std::f64::consts::PI).floor();
    let r = a - n * std::f64::consts::PI;
    let mut u = adaptive_gl(|th| integrand(m, th), 0.0, r, tol.quad_rel);
    if n > 0.0 {
        u += n * adaptive_gl(|th| integrand(m, th), 0.0, std::f64::consts::PI, tol.quad_rel);
    }
    if phi < 0.0 {
        -u
    } else {
        u
    }
}

/// K₆(κ) = u(π/2), the quarter period: 2K₆ is the real translation step of
/// d, ∂, δ, ∇ and the antiperiod of s, c, σ.
pub fn quarter_period(m: &Modulus) -> f64 {
    forward_u(m, std::f64::consts::FRAC_PI_2)
}

pub fn quarter_period_with(m: &Modulus, tol: &Tolerances) -> f64 {
    forward_u_with(m, std::f64::consts::FRAC_PI_2, tol)
}

/// φ(u): the global inverse of the strictly increasing forward map, with
/// default tolerances.
pub fn invert_phi(m: &Modulus, u: f64) -> Result<f64> {
    invert_phi_with(m, u, &Tolerances::default())
}

/// φ(u) at explicit tolerances: safeguarded Newton, accepted when
/// |u(φ) − u| ≤ newton_rel · max(1, |u|). Odd in u by construction.
pub fn invert_phi_with(m: &Modulus, u: f64, tol: &Tolerances) -> Result<f64> {
    // Non-finite u would poison the Newton bracket (clamp panics on NaN
    // bounds); reject it as a domain error instead.
    if !u.is_finite() {
        return Err(Error::Domain { value: u, domain: "finite u" });
    }
    if u == 0.0 {
        return Ok(0.0);
    }
    let phi = invert_positive(m, u.abs(), tol)?;
    Ok(if u < 0.0 { -phi } else { phi })
}

/// Newton for u > 0. The slope du/dφ lies in [1/2, 1/λ], so
/// [uλ/2, 2u/λ] brackets the root from the start; the doubling loop is a
/// safety net and the bisection fallback keeps every iterate inside the
/// bracket.
fn invert_positive(m: &Modulus, u: f64, tol: &Tolerances) -> Result<f64> {
    let residual = |phi: f64| forward_u_with(m, phi, tol) - u;
    let mut lo = 0.5 * u * m.lambda;
    let mut hi = 2.0 * u / m.lambda;
    for _ in 0..64 {
        if residual(hi) >= 0.0 {
            break;
        }
        hi *= 2.0;
    }
    let accept = tol.newton_rel * u.max(1.0);
    let mut phi = u.clamp(lo, hi);
    for _ in 0..MAX_NEWTON_ITERS {
        let g = residual(phi);
        if g.abs() <= accept {
            return Ok(phi);
        }
        if g < 0.0 {
            lo = phi;
        } else {
            hi = phi;
        }
        let next = phi - g / integrand(m, phi);
        phi = if next <= lo || next >= hi {
            0.5 * (lo + hi)
        } else {
            next
        };
    }
    Err(Error::NoConvergence {
        context: "Newton inversion of the forward map",
    })
}

/// Frame assembly from a known amplitude φ. Kept crate-internal: φ and u
/// must correspond, which [`frame_at`] guarantees.
pub(crate) fn frame_from_phi(m: &Modulus, u: f64, phi: f64) -> Frame {
    let psi = psi_of_phi(m, phi);
    let s = phi.sin();
    let c = phi.cos();
    let d = psi.cos();
    let p = (2.0 * psi / 3.0).cos();
    let sigma = (2.0 * psi / 3.0).sin();
    let (tn, t_sq) = if c.abs() > TN_POLE_THRESHOLD {
        let t = s / c;
        (Some(t), Some(t * t))
    } else {
        (None, None)
    };
    Frame {
        u,
        phi,
        psi,
        s,
        c,
        d,
        delta: d / p,
        p,
        sigma,
        nabla: p * p,
        s_sq: s * s,
        c_sq: c * c,
        d_sq: d * d,
        tn,
        t_sq,
    }
}

/// The full frame at real u, with default tolerances.
pub fn frame_at(m: &Modulus, u: f64) -> Result<Frame> {
    frame_at_with(m, u, &Tolerances::default())
}

/// The full frame at real u: invert to φ, then evaluate every derived
/// function in closed trigonometric form.
pub fn frame_at_with(m: &Modulus, u: f64, tol: &Tolerances) -> Result<Frame> {
    let phi = invert_phi_with(m, u, tol)?;
    Ok(frame_from_phi(m, u, phi))
}
