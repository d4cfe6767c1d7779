//! Every identity and differential equation of the function family as a
//! named numerical residual, plus the finite-difference cross-check that
//! separates "identity is wrong" from "derivative is wrong".
//!
//! Residuals are absolute, not relative: each identity is a polynomial
//! relation among quantities bounded on the real line (frame components lie
//! in [−2, 2] and δ ∈ [λ, 2]), so an absolute threshold is meaningful.
//! Derivatives come from the analytic flow field; finite differences are a
//! cross-check only.

use crate::amplitude::{frame_at, frame_at_with, quarter_period_with, Frame, Modulus, Tolerances};
use crate::error::Result;
use crate::flow::{flow_derivative, FlowState};
use std::collections::BTreeMap;

/// Components smaller than this are excluded from relative FD comparison.
const FD_MAGNITUDE_FLOOR: f64 = 1e-6;

/// Slack applied to the analytic nonvanishing bounds.
const NONVANISHING_SLACK: f64 = 1e-12;

/// The thirteen residual names, in report order. R13 is absent from a
/// point's map where tan φ is at a pole.
pub const RESIDUAL_NAMES: [&str; 13] = [
    "R01_delta_partial_d",
    "R02_triplication_ratio",
    "R03_d_delta_ode",
    "R04_d_sextic_ode",
    "R05_d_ode",
    "R06_c_ode",
    "R07_s_ode",
    "R08_S_ode",
    "R09_C_ode",
    "R10_D_ode",
    "R11_partial_ode",
    "R12_nabla_ode",
    "R13_T_ode",
];

/// Values and first derivatives of every frame function at one real point.
/// The derived derivatives satisfy S′ = 2ss′, C′ = 2cc′, D′ = 2dd′,
/// ∇′ = 2∂∂′, δ′ = (d′∂ − d∂′)/∂², t′ = (1 + t²)δ, T′ = 2tt′ exactly as
/// computed.
#[derive(Debug, Clone, Copy)]
pub struct DerivativeBundle {
    pub frame: Frame,
    pub s_prime: f64,
    pub c_prime: f64,
    pub d_prime: f64,
    pub p_prime: f64,
    pub sigma_prime: f64,
    pub delta_prime: f64,
    pub nabla_prime: f64,
    pub s_sq_prime: f64,
    pub c_sq_prime: f64,
    pub d_sq_prime: f64,
    pub tn_prime: Option<f64>,
    pub t_sq_prime: Option<f64>,
}

/// Frame values and analytic derivatives at real u, default tolerances.
pub fn analytic_derivatives(m: &Modulus, u: f64) -> Result<DerivativeBundle> {
    analytic_derivatives_with(m, u, &Tolerances::default())
}

/// Frame values and analytic derivatives at real u: the flow vector field
/// evaluated on the real-line frame, then chain rules for the derived
/// functions.
pub fn analytic_derivatives_with(
    m: &Modulus,
    u: f64,
    tol: &Tolerances,
) -> Result<DerivativeBundle> {
    let frame = frame_at_with(m, u, tol)?;
    bundle_from_frame(m, frame)
}

fn bundle_from_frame(m: &Modulus, frame: Frame) -> Result<DerivativeBundle> {
    let t = flow_derivative(&FlowState::from_frame(&frame), m)?;
    let (s_prime, c_prime, d_prime, p_prime, sigma_prime) =
        (t.s.re, t.c.re, t.d.re, t.p.re, t.sigma.re);
    let tn_prime = frame.tn.map(|t| (1.0 + t * t) * frame.delta);
    Ok(DerivativeBundle {
        frame,
        s_prime,
        c_prime,
        d_prime,
        p_prime,
        sigma_prime,
        delta_prime: (d_prime * frame.p - frame.d * p_prime) / (frame.p * frame.p),
        nabla_prime: 2.0 * frame.p * p_prime,
        s_sq_prime: 2.0 * frame.s * s_prime,
        c_sq_prime: 2.0 * frame.c * c_prime,
        d_sq_prime: 2.0 * frame.d * d_prime,
        tn_prime,
        t_sq_prime: frame.tn.and_then(|t| tn_prime.map(|tp| 2.0 * t * tp)),
    })
}

/// The thirteen identity residuals at one point, keyed by
/// [`RESIDUAL_NAMES`]. R13 is omitted (not zeroed) at tan-poles.
pub fn identity_residuals(m: &Modulus, u: f64) -> Result<BTreeMap<&'static str, f64>> {
    identity_residuals_with(m, u, &Tolerances::default())
}

pub fn identity_residuals_with(
    m: &Modulus,
    u: f64,
    tol: &Tolerances,
) -> Result<BTreeMap<&'static str, f64>> {
    Ok(residuals_from_bundle(m, &analytic_derivatives_with(m, u, tol)?))
}

fn residuals_from_bundle(m: &Modulus, b: &DerivativeBundle) -> BTreeMap<&'static str, f64> {
    let f = &b.frame;
    let (k2, l2, big_l) = (
        m.kappa() * m.kappa(),
        m.lambda() * m.lambda(),
        m.big_lambda(),
    );
    let (s_sq, c_sq, d_sq) = (f.s_sq, f.c_sq, f.d_sq);
    let (d, p, delta, nabla) = (f.d, f.p, f.delta, f.nabla);
    let (dp, cp, sp, pp) = (b.d_prime, b.c_prime, b.s_prime, b.p_prime);
    let quad = (1.0 - d_sq) * (d_sq - l2);

    let mut out = BTreeMap::new();
    out.insert(RESIDUAL_NAMES[0], (delta * p - d).abs());
    out.insert(
        RESIDUAL_NAMES[1],
        (delta.powi(3) - 2.0 * d_sq * delta.powi(3) - 3.0 * d * delta * delta + 4.0 * d.powi(3))
            .abs(),
    );
    out.insert(
        RESIDUAL_NAMES[2],
        (d_sq * dp * dp - delta * delta * quad).abs(),
    );
    out.insert(
        RESIDUAL_NAMES[3],
        ((2.0 * d_sq - 1.0).powi(2) * dp.powi(6) - quad * (4.0 * quad - 3.0 * dp * dp).powi(2))
            .abs(),
    );
    out.insert(RESIDUAL_NAMES[4], (nabla * dp * dp - quad).abs());
    out.insert(
        RESIDUAL_NAMES[5],
        (nabla * cp * cp - (1.0 - c_sq) * (l2 + k2 * c_sq)).abs(),
    );
    out.insert(
        RESIDUAL_NAMES[6],
        (nabla * sp * sp - (1.0 - s_sq) * (1.0 - k2 * s_sq)).abs(),
    );
    out.insert(
        RESIDUAL_NAMES[7],
        (nabla * b.s_sq_prime * b.s_sq_prime - 4.0 * s_sq * (1.0 - s_sq) * (1.0 - k2 * s_sq))
            .abs(),
    );
    out.insert(
        RESIDUAL_NAMES[8],
        (nabla * b.c_sq_prime * b.c_sq_prime - 4.0 * c_sq * (1.0 - c_sq) * (l2 + k2 * c_sq))
            .abs(),
    );
    out.insert(
        RESIDUAL_NAMES[9],
        (nabla * b.d_sq_prime * b.d_sq_prime - 4.0 * d_sq * quad).abs(),
    );
    out.insert(
        RESIDUAL_NAMES[10],
        (9.0 * nabla * pp * pp - 2.0 * (1.0 - nabla) * (4.0 * p.powi(3) - 3.0 * p + big_l)).abs(),
    );
    let lhs12 = 9.0 / 8.0 * b.nabla_prime * b.nabla_prime + big_l * (nabla - 1.0);
    out.insert(
        RESIDUAL_NAMES[11],
        (lhs12 * lhs12 - nabla * (nabla - 1.0).powi(2) * (4.0 * nabla - 3.0).powi(2)).abs(),
    );
    if let (Some(t_sq), Some(t_sq_prime)) = (f.t_sq, b.t_sq_prime) {
        out.insert(
            RESIDUAL_NAMES[12],
            (nabla * t_sq_prime * t_sq_prime
                - 4.0 * t_sq * (1.0 + t_sq) * (1.0 + l2 * t_sq))
                .abs(),
        );
    }
    out
}

/// Max residual of each identity over an equispaced u-grid on
/// [−2K₆, 2K₆], with the location of each maximum and the R13 skip count.
#[derive(Debug, Clone)]
pub struct ResidualReport {
    pub kappa: f64,
    pub entries: BTreeMap<&'static str, f64>,
    pub argmax_u: BTreeMap<&'static str, f64>,
    pub grid: String,
    pub tol: f64,
    pub pass: bool,
    pub r13_skipped: usize,
}

/// Run the full identity suite for one modulus: `u_count` equispaced points
/// on [−2K₆, 2K₆], pass iff every max residual is ≤ tol.
pub fn residual_report(m: &Modulus, u_count: usize, tol: f64) -> Result<ResidualReport> {
    residual_report_with(m, u_count, tol, &Tolerances::default())
}

pub fn residual_report_with(
    m: &Modulus,
    u_count: usize,
    tol: f64,
    pipeline: &Tolerances,
) -> Result<ResidualReport> {
    let k6 = quarter_period_with(m, pipeline);
    let mut entries: BTreeMap<&'static str, f64> = BTreeMap::new();
    let mut argmax_u: BTreeMap<&'static str, f64> = BTreeMap::new();
    let mut r13_skipped = 0usize;
    for i in 0..u_count {
        let u = -2.0 * k6 + 4.0 * k6 * i as f64 / (u_count - 1) as f64;
        let residuals = identity_residuals_with(m, u, pipeline)?;
        if !residuals.contains_key(RESIDUAL_NAMES[12]) {
            r13_skipped += 1;
        }
        for (name, value) in residuals {
            let current = entries.entry(name).or_insert(-1.0);
            if value > *current {
                *current = value;
                argmax_u.insert(name, u);
            }
        }
    }
    let pass = entries.values().all(|&v| v <= tol);
    Ok(ResidualReport {
        kappa: m.kappa(),
        entries,
        argmax_u,
        grid: format!("{u_count} equispaced u in [-2K6, 2K6], K6 = {k6:.16e}"),
        tol,
        pass,
        r13_skipped,
    })
}

/// q(z) = z(z−1)²(4z−3)² and its derivative by the product rule; the
/// quintic whose positivity on (3/4, 1) ∪ (1, ∞) underlies the
/// nonvanishing results. q(0) = 0 and q′(0) = 9 exactly.
pub fn quintic_q(z: f64) -> (f64, f64) {
    let a = z - 1.0;
    let b = 4.0 * z - 3.0;
    let q = z * a * a * b * b;
    let qprime = a * a * b * b + z * 2.0 * a * b * b + z * a * a * 8.0 * b;
    (q, qprime)
}

/// Max relative discrepancy between the analytic derivative bundle and
/// central differences with step h, over components of magnitude above
/// 1e−6. tan-pole components are skipped when flagged at any of the three
/// evaluation points.
pub fn fd_crosscheck(m: &Modulus, u: f64, h: f64) -> Result<f64> {
    let tol = Tolerances::default();
    let bundle = analytic_derivatives_with(m, u, &tol)?;
    let plus = frame_at_with(m, u + h, &tol)?;
    let minus = frame_at_with(m, u - h, &tol)?;
    let two_h = 2.0 * h;

    let mut worst = 0.0_f64;
    let mut check = |analytic: f64, fwd: f64, bwd: f64| {
        if analytic.abs() > FD_MAGNITUDE_FLOOR {
            let fd = (fwd - bwd) / two_h;
            worst = worst.max((fd - analytic).abs() / analytic.abs());
        }
    };
    check(bundle.s_prime, plus.s, minus.s);
    check(bundle.c_prime, plus.c, minus.c);
    check(bundle.d_prime, plus.d, minus.d);
    check(bundle.p_prime, plus.p, minus.p);
    check(bundle.sigma_prime, plus.sigma, minus.sigma);
    check(bundle.delta_prime, plus.delta, minus.delta);
    check(bundle.nabla_prime, plus.nabla, minus.nabla);
    check(bundle.s_sq_prime, plus.s_sq, minus.s_sq);
    check(bundle.c_sq_prime, plus.c_sq, minus.c_sq);
    check(bundle.d_sq_prime, plus.d_sq, minus.d_sq);
    if let (Some(tp), Some(a), Some(b)) = (bundle.tn_prime, plus.tn, minus.tn) {
        check(tp, a, b);
    }
    if let (Some(tp), Some(a), Some(b)) = (bundle.t_sq_prime, plus.t_sq, minus.t_sq) {
        check(tp, a, b);
    }
    Ok(worst)
}

/// Minima of ∂ and d over a real grid against their analytic lower bounds
/// cos((2/3)·arcsin κ) and λ.
#[derive(Debug, Clone, Copy)]
pub struct NonvanishingScan {
    pub min_p: f64,
    pub min_d: f64,
    pub p_bound: f64,
    pub d_bound: f64,
    pub pass: bool,
}

/// Scan p and d over the grid; consistent with the fact that neither has
/// zeros on the real line.
pub fn nonvanishing_scan(m: &Modulus, u_grid: &[f64]) -> Result<NonvanishingScan> {
    let mut min_p = f64::INFINITY;
    let mut min_d = f64::INFINITY;
    for &u in u_grid {
        let f = frame_at(m, u)?;
        min_p = min_p.min(f.p);
        min_d = min_d.min(f.d);
    }
    let p_bound = (2.0 / 3.0 * m.kappa().asin()).cos();
    let d_bound = m.lambda();
    Ok(NonvanishingScan {
        min_p,
        min_d,
        p_bound,
        d_bound,
        pass: min_p >= p_bound - NONVANISHING_SLACK && min_d >= d_bound - NONVANISHING_SLACK,
    })
}

/// Max residuals of the real translation laws under u ↦ u + 2K₆ over a
/// grid: d, ∂, δ, ∇ invariant; s, c, σ negated.
pub fn real_period_check(m: &Modulus, u_grid: &[f64]) -> Result<BTreeMap<&'static str, f64>> {
    let step = 2.0 * crate::amplitude::quarter_period(m);
    let mut out: BTreeMap<&'static str, f64> = BTreeMap::new();
    let mut record = |name: &'static str, v: f64| {
        let e = out.entry(name).or_insert(0.0);
        if v > *e {
            *e = v;
        }
    };
    for &u in u_grid {
        let a = frame_at(m, u)?;
        let b = frame_at(m, u + step)?;
        record("s_negated", (b.s + a.s).abs());
        record("c_negated", (b.c + a.c).abs());
        record("sigma_negated", (b.sigma + a.sigma).abs());
        record("d_invariant", (b.d - a.d).abs());
        record("p_invariant", (b.p - a.p).abs());
        record("delta_invariant", (b.delta - a.delta).abs());
        record("nabla_invariant", (b.nabla - a.nabla).abs());
    }
    Ok(out)
}

/// Max parity residuals over a grid: s, σ, ψ, φ, tn odd; c, d, ∂, δ, ∇
/// even.
pub fn parity_residuals(m: &Modulus, u_grid: &[f64]) -> Result<BTreeMap<&'static str, f64>> {
    let mut out: BTreeMap<&'static str, f64> = BTreeMap::new();
    let mut record = |name: &'static str, v: f64| {
        let e = out.entry(name).or_insert(0.0);
        if v > *e {
            *e = v;
        }
    };
    for &u in u_grid {
        let plus = frame_at(m, u)?;
        let minus = frame_at(m, -u)?;
        record("s_odd", (plus.s + minus.s).abs());
        record("sigma_odd", (plus.sigma + minus.sigma).abs());
        record("phi_odd", (plus.phi + minus.phi).abs());
        record("psi_odd", (plus.psi + minus.psi).abs());
        record("c_even", (plus.c - minus.c).abs());
        record("d_even", (plus.d - minus.d).abs());
        record("p_even", (plus.p - minus.p).abs());
        record("delta_even", (plus.delta - minus.delta).abs());
        record("nabla_even", (plus.nabla - minus.nabla).abs());
        if let (Some(a), Some(b)) = (plus.tn, minus.tn) {
            record("tn_odd", (a + b).abs());
        }
    }
    Ok(out)
}
