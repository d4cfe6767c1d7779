//! Holomorphic continuation of the frame along paths in the complex u-plane,
//! plus the classical Jacobi baseline evolved by the same machinery.
//!
//! Off the real axis the frame is the solution of the first-order system
//!
//! ```text
//! s′ = cd/∂,  c′ = −sd/∂,  d′ = −κ²sc/∂,  ∂′ = −(2/3)κcσ/∂,  σ′ = (2/3)κc,
//! ```
//!
//! whose right-hand side is rational in the state, so continuation needs no
//! branch tracking and the flow map is holomorphic wherever ∂ ≠ 0. The
//! quadratic relations and the triplication relation 2d² − 1 = 4∂³ − 3∂ are
//! first integrals and serve as integration-quality monitors. The integrator
//! is an embedded Dormand-Prince 5(4) pair with PI step-size control
//! (Dormand & Prince 1980; Hairer, Nørsett & Wanner, Solving ODEs I).

use crate::amplitude::{Frame, Modulus};
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Continuation aborts when |∂| falls to this threshold: δ = d/∂ and three
/// of the five derivative components blow up on the zero set of ∂.
pub const SINGULARITY_THRESHOLD: f64 = 1e-8;

/// A step shorter than this fraction of the segment length means the
/// solution is blowing up at finite u.
const STEP_UNDERFLOW_FRACTION: f64 = 1e-13;

/// Combined cap on accepted plus rejected steps per segment.
const MAX_STEP_ATTEMPTS: usize = 2_000_000;

const SAFETY: f64 = 0.9;
const PI_ALPHA: f64 = 0.7 / 5.0;
const PI_BETA: f64 = 0.4 / 5.0;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 5.0;

/// The signature-6 state (s, c, d, ∂, σ) at a point u of the complex plane.
/// σ is carried explicitly to avoid the sign ambiguity of √(1 − ∂²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowState {
    pub u: Complex64,
    pub s: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    pub p: Complex64,
    pub sigma: Complex64,
}

impl FlowState {
    /// The germ at u = 0 from which every continuation starts.
    pub fn origin() -> FlowState {
        FlowState {
            u: Complex64::ZERO,
            s: Complex64::ZERO,
            c: Complex64::ONE,
            d: Complex64::ONE,
            p: Complex64::ONE,
            sigma: Complex64::ZERO,
        }
    }

    /// Seed from a real-line frame.
    pub fn from_frame(f: &Frame) -> FlowState {
        FlowState {
            u: Complex64::new(f.u, 0.0),
            s: Complex64::new(f.s, 0.0),
            c: Complex64::new(f.c, 0.0),
            d: Complex64::new(f.d, 0.0),
            p: Complex64::new(f.p, 0.0),
            sigma: Complex64::new(f.sigma, 0.0),
        }
    }

    /// δ = d/∂ at this state.
    pub fn delta(&self) -> Complex64 {
        self.d / self.p
    }

    fn to_array(self) -> [Complex64; 5] {
        [self.s, self.c, self.d, self.p, self.sigma]
    }

    fn from_array(u: Complex64, y: [Complex64; 5]) -> FlowState {
        FlowState {
            u,
            s: y[0],
            c: y[1],
            d: y[2],
            p: y[3],
            sigma: y[4],
        }
    }
}

/// Tangent (s′, c′, d′, ∂′, σ′) of the signature-6 flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowTangent {
    pub s: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    pub p: Complex64,
    pub sigma: Complex64,
}

/// The classical Jacobi state (sn, cn, dn) with modulus k and complementary
/// modulus l, evolved from the origin germ sn(0) = 0, cn(0) = dn(0) = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalState {
    pub u: Complex64,
    pub sn: Complex64,
    pub cn: Complex64,
    pub dn: Complex64,
    pub k: f64,
    pub l: f64,
}

impl ClassicalState {
    /// The origin germ for modulus k ∈ (0, 1).
    pub fn origin(k: f64) -> Result<ClassicalState> {
        if !(k > 0.0 && k < 1.0) {
            return Err(Error::Domain {
                value: k,
                domain: "(0, 1)",
            });
        }
        Ok(ClassicalState {
            u: Complex64::ZERO,
            sn: Complex64::ZERO,
            cn: Complex64::ONE,
            dn: Complex64::ONE,
            k,
            l: (1.0 - k * k).sqrt(),
        })
    }

    fn to_array(self) -> [Complex64; 3] {
        [self.sn, self.cn, self.dn]
    }

    /// The state at u with components y, carrying the modulus over.
    fn advanced(&self, u: Complex64, y: [Complex64; 3]) -> ClassicalState {
        ClassicalState {
            u,
            sn: y[0],
            cn: y[1],
            dn: y[2],
            k: self.k,
            l: self.l,
        }
    }
}

/// Tangent (sn′, cn′, dn′) of the classical flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalTangent {
    pub sn: Complex64,
    pub cn: Complex64,
    pub dn: Complex64,
}

fn sig6_field(kappa: f64, y: &[Complex64; 5]) -> Result<[Complex64; 5]> {
    let [s, c, d, p, sigma] = *y;
    let abs_p = p.norm();
    if abs_p <= SINGULARITY_THRESHOLD {
        // Position is unknown here; the integrator fills it in.
        return Err(Error::Singularity {
            u: Complex64::ZERO,
            abs_p,
        });
    }
    let tk = 2.0 / 3.0 * kappa;
    Ok([
        c * d / p,
        -s * d / p,
        -(kappa * kappa) * s * c / p,
        -tk * c * sigma / p,
        tk * c,
    ])
}

fn classical_field(k: f64, y: &[Complex64; 3]) -> [Complex64; 3] {
    let [sn, cn, dn] = *y;
    [cn * dn, -sn * dn, -(k * k) * sn * cn]
}

/// (s′, c′, d′, ∂′, σ′) = (cd/∂, −sd/∂, −κ²sc/∂, −(2/3)κcσ/∂, (2/3)κc).
pub fn flow_derivative(state: &FlowState, m: &Modulus) -> Result<FlowTangent> {
    let y = sig6_field(m.kappa(), &state.to_array()).map_err(|e| place_error(e, state.u))?;
    Ok(FlowTangent {
        s: y[0],
        c: y[1],
        d: y[2],
        p: y[3],
        sigma: y[4],
    })
}

/// (sn′, cn′, dn′) = (cn·dn, −sn·dn, −k²·sn·cn).
pub fn classical_derivative(state: &ClassicalState) -> ClassicalTangent {
    let y = classical_field(state.k, &state.to_array());
    ClassicalTangent {
        sn: y[0],
        cn: y[1],
        dn: y[2],
    }
}

fn sig6_drift(kappa: f64, y: &[Complex64; 5]) -> f64 {
    let [s, c, d, p, sigma] = *y;
    let one = Complex64::ONE;
    let r1 = (c * c + s * s - one).norm();
    let r2 = (d * d + kappa * kappa * s * s - one).norm();
    let r3 = (p * p + sigma * sigma - one).norm();
    let r4 = (2.0 * d * d - one - (4.0 * p * p * p - 3.0 * p)).norm();
    r1.max(r2).max(r3).max(r4)
}

fn classical_drift(k: f64, y: &[Complex64; 3]) -> f64 {
    let [sn, cn, dn] = *y;
    let one = Complex64::ONE;
    let r1 = (cn * cn + sn * sn - one).norm();
    let r2 = (dn * dn + k * k * sn * sn - one).norm();
    r1.max(r2)
}

/// Max violation of the four first integrals c² + s² = 1, d² + κ²s² = 1,
/// ∂² + σ² = 1, 2d² − 1 = 4∂³ − 3∂.
pub fn quadratic_invariant_drift(state: &FlowState, m: &Modulus) -> f64 {
    sig6_drift(m.kappa(), &state.to_array())
}

/// Max violation of cn² + sn² = 1 and dn² + k²sn² = 1.
pub fn classical_invariant_drift(state: &ClassicalState) -> f64 {
    classical_drift(state.k, &state.to_array())
}

fn place_error(e: Error, u: Complex64) -> Error {
    match e {
        Error::Singularity { abs_p, .. } => Error::Singularity { u, abs_p },
        other => other,
    }
}

struct CoreRun<const N: usize> {
    y: [Complex64; N],
    steps: usize,
    min_guard: f64,
    max_drift: f64,
}

/// One straight segment z0 → z1 of the autonomous system dy/dτ = e·f(y),
/// τ ∈ [0, |z1 − z0|], e the unit direction. Dormand-Prince 5(4) with the
/// Hairer scaled error norm (atol = rtol = tol) and PI step control; the
/// final step is clamped so the endpoint is hit exactly.
fn integrate_core<const N: usize>(
    y0: [Complex64; N],
    z0: Complex64,
    z1: Complex64,
    tol: f64,
    field: &impl Fn(&[Complex64; N]) -> Result<[Complex64; N]>,
    drift: &impl Fn(&[Complex64; N]) -> f64,
    guard: &impl Fn(&[Complex64; N]) -> f64,
) -> Result<CoreRun<N>> {
    let mut run = CoreRun {
        y: y0,
        steps: 0,
        min_guard: guard(&y0),
        max_drift: drift(&y0),
    };
    if z1 == z0 {
        return Ok(run);
    }
    let length = (z1 - z0).norm();
    let dir = (z1 - z0) / length;
    let position = |tau: f64| z0 + dir * tau;

    let mut tau = 0.0;
    let mut h = 1e-3_f64.min(length / 10.0);
    let mut err_prev = 1e-4_f64;
    let eval = |y: &[Complex64; N], tau: f64| field(y).map_err(|e| place_error(e, position(tau)));

    let combine = |y: &[Complex64; N], hc: Complex64, terms: &[(f64, &[Complex64; N])]| {
        let mut out = *y;
        for (i, slot) in out.iter_mut().enumerate() {
            let mut acc = Complex64::ZERO;
            for (a, k) in terms {
                acc += *a * k[i];
            }
            *slot += hc * acc;
        }
        out
    };

    for _attempt in 0..MAX_STEP_ATTEMPTS {
        let last = h >= length - tau;
        let step = if last { length - tau } else { h };
        let hc = dir * step;
        let y = &run.y;

        let k1 = eval(y, tau)?;
        let k2 = eval(&combine(y, hc, &[(1.0 / 5.0, &k1)]), tau)?;
        let k3 = eval(
            &combine(y, hc, &[(3.0 / 40.0, &k1), (9.0 / 40.0, &k2)]),
            tau,
        )?;
        let k4 = eval(
            &combine(
                y,
                hc,
                &[(44.0 / 45.0, &k1), (-56.0 / 15.0, &k2), (32.0 / 9.0, &k3)],
            ),
            tau,
        )?;
        let k5 = eval(
            &combine(
                y,
                hc,
                &[
                    (19372.0 / 6561.0, &k1),
                    (-25360.0 / 2187.0, &k2),
                    (64448.0 / 6561.0, &k3),
                    (-212.0 / 729.0, &k4),
                ],
            ),
            tau,
        )?;
        let k6 = eval(
            &combine(
                y,
                hc,
                &[
                    (9017.0 / 3168.0, &k1),
                    (-355.0 / 33.0, &k2),
                    (46732.0 / 5247.0, &k3),
                    (49.0 / 176.0, &k4),
                    (-5103.0 / 18656.0, &k5),
                ],
            ),
            tau,
        )?;
        let y_new = combine(
            y,
            hc,
            &[
                (35.0 / 384.0, &k1),
                (500.0 / 1113.0, &k3),
                (125.0 / 192.0, &k4),
                (-2187.0 / 6784.0, &k5),
                (11.0 / 84.0, &k6),
            ],
        );
        let k7 = eval(&y_new, tau + step)?;
        let zero = [Complex64::ZERO; N];
        let err_vec = combine(
            &zero,
            hc,
            &[
                (71.0 / 57600.0, &k1),
                (-71.0 / 16695.0, &k3),
                (71.0 / 1920.0, &k4),
                (-17253.0 / 339200.0, &k5),
                (22.0 / 525.0, &k6),
                (-1.0 / 40.0, &k7),
            ],
        );

        let mut err_sq = 0.0;
        for i in 0..N {
            let sc = tol + tol * run.y[i].norm().max(y_new[i].norm());
            let e = err_vec[i].norm() / sc;
            err_sq += e * e;
        }
        let mut err = (err_sq / N as f64).sqrt();
        if !err.is_finite() {
            err = f64::INFINITY;
        }

        if err <= 1.0 {
            tau = if last { length } else { tau + step };
            run.y = y_new;
            run.steps += 1;
            run.min_guard = run.min_guard.min(guard(&run.y));
            run.max_drift = run.max_drift.max(drift(&run.y));
            if last {
                return Ok(run);
            }
            let fac = (SAFETY * err.max(1e-10).powf(-PI_ALPHA) * err_prev.powf(PI_BETA))
                .clamp(FAC_MIN, FAC_MAX);
            err_prev = err.max(1e-4);
            h = step * fac;
        } else {
            h = step * (SAFETY * err.powf(-PI_ALPHA)).clamp(FAC_MIN, 1.0);
        }
        if h < STEP_UNDERFLOW_FRACTION * length {
            return Err(Error::StepUnderflow { u: position(tau) });
        }
    }
    Err(Error::NoConvergence {
        context: "integrator step budget exhausted",
    })
}

/// Per-segment statistics alongside the final state. `min_abs_p` is the
/// closest approach of |∂| to zero over accepted states (∞ for the
/// classical system, which has no finite singular set).
#[derive(Debug, Clone, Copy)]
pub struct SegmentRun<S> {
    pub state: S,
    pub steps: usize,
    pub min_abs_p: f64,
    pub max_drift: f64,
}

/// Signature-6 continuation along the straight segment state.u → z_target.
pub fn integrate_segment(
    state: &FlowState,
    m: &Modulus,
    z_target: Complex64,
    tol: f64,
) -> Result<FlowState> {
    Ok(integrate_segment_traced(state, m, z_target, tol)?.state)
}

/// As [`integrate_segment`], keeping step count, min |∂|, and invariant
/// drift.
pub fn integrate_segment_traced(
    state: &FlowState,
    m: &Modulus,
    z_target: Complex64,
    tol: f64,
) -> Result<SegmentRun<FlowState>> {
    let kappa = m.kappa();
    let run = integrate_core(
        state.to_array(),
        state.u,
        z_target,
        tol,
        &|y| sig6_field(kappa, y),
        &|y| sig6_drift(kappa, y),
        &|y| y[3].norm(),
    )?;
    Ok(SegmentRun {
        state: FlowState::from_array(z_target, run.y),
        steps: run.steps,
        min_abs_p: run.min_guard,
        max_drift: run.max_drift,
    })
}

/// Classical continuation along the straight segment state.u → z_target.
pub fn classical_integrate_segment(
    state: &ClassicalState,
    z_target: Complex64,
    tol: f64,
) -> Result<ClassicalState> {
    Ok(classical_integrate_segment_traced(state, z_target, tol)?.state)
}

/// As [`classical_integrate_segment`], keeping statistics.
pub fn classical_integrate_segment_traced(
    state: &ClassicalState,
    z_target: Complex64,
    tol: f64,
) -> Result<SegmentRun<ClassicalState>> {
    let k = state.k;
    let run = integrate_core(
        state.to_array(),
        state.u,
        z_target,
        tol,
        &|y| Ok(classical_field(k, y)),
        &|y| classical_drift(k, y),
        &|_| f64::INFINITY,
    )?;
    Ok(SegmentRun {
        state: state.advanced(z_target, run.y),
        steps: run.steps,
        min_abs_p: run.min_guard,
        max_drift: run.max_drift,
    })
}

/// A polyline in the u-plane: at least two waypoints, consecutive waypoints
/// distinct.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSpec {
    waypoints: Vec<Complex64>,
}

impl PathSpec {
    pub fn new(waypoints: Vec<Complex64>) -> Result<PathSpec> {
        if waypoints.len() < 2 {
            return Err(Error::Domain {
                value: waypoints.len() as f64,
                domain: "path with at least 2 waypoints",
            });
        }
        for pair in waypoints.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::Domain {
                    value: pair[0].norm(),
                    domain: "path with distinct consecutive waypoints",
                });
            }
        }
        Ok(PathSpec { waypoints })
    }

    pub fn waypoints(&self) -> &[Complex64] {
        &self.waypoints
    }

    /// Total polyline length.
    pub fn length(&self) -> f64 {
        self.waypoints
            .windows(2)
            .map(|w| (w[1] - w[0]).norm())
            .sum()
    }
}

/// Path integration result: the state at every waypoint plus aggregate
/// statistics over all segments.
#[derive(Debug, Clone)]
pub struct PathTrace<S> {
    pub states: Vec<S>,
    pub steps: usize,
    pub min_abs_p: f64,
    pub max_drift: f64,
}

impl<S> PathTrace<S> {
    pub fn final_state(&self) -> &S {
        self.states.last().expect("trace holds >= 1 state")
    }
}

/// Fold of [`integrate_segment`] over the path's segments. If state0 does
/// not already sit at the first waypoint, a bridging segment state0.u →
/// waypoints[0] is integrated first; `states[i]` is then the state at
/// `waypoints[i]`.
pub fn integrate_path(
    state0: &FlowState,
    m: &Modulus,
    path: &PathSpec,
    tol: f64,
) -> Result<PathTrace<FlowState>> {
    let mut trace = PathTrace {
        states: Vec::with_capacity(path.waypoints.len()),
        steps: 0,
        min_abs_p: f64::INFINITY,
        max_drift: 0.0,
    };
    let mut current = *state0;
    for (i, &w) in path.waypoints.iter().enumerate() {
        if i > 0 || current.u != w {
            let run = integrate_segment_traced(&current, m, w, tol)?;
            current = run.state;
            trace.steps += run.steps;
            trace.min_abs_p = trace.min_abs_p.min(run.min_abs_p);
            trace.max_drift = trace.max_drift.max(run.max_drift);
        } else {
            trace.min_abs_p = trace.min_abs_p.min(current.p.norm());
            trace.max_drift = trace
                .max_drift
                .max(quadratic_invariant_drift(&current, m));
        }
        trace.states.push(current);
    }
    Ok(trace)
}

/// Classical analogue of [`integrate_path`].
pub fn classical_integrate_path(
    state0: &ClassicalState,
    path: &PathSpec,
    tol: f64,
) -> Result<PathTrace<ClassicalState>> {
    let mut trace = PathTrace {
        states: Vec::with_capacity(path.waypoints.len()),
        steps: 0,
        min_abs_p: f64::INFINITY,
        max_drift: 0.0,
    };
    let mut current = *state0;
    for (i, &w) in path.waypoints.iter().enumerate() {
        if i > 0 || current.u != w {
            let run = classical_integrate_segment_traced(&current, w, tol)?;
            current = run.state;
            trace.steps += run.steps;
            trace.max_drift = trace.max_drift.max(run.max_drift);
        } else {
            trace.max_drift = trace.max_drift.max(classical_invariant_drift(&current));
        }
        trace.states.push(current);
    }
    Ok(trace)
}

fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        if (an - bn).abs() <= f64::EPSILON * an {
            return 0.5 * (an + bn);
        }
        a = an;
        b = bn;
    }
    0.5 * (a + b)
}

/// Classical quarter periods K = π/(2·AGM(1, l)) and K′ = π/(2·AGM(1, k))
/// (DLMF 19.8.5), the baseline against which signature-6 monodromy runs are
/// compared.
pub fn classical_quarter_periods(k: f64) -> Result<(f64, f64)> {
    if !(k > 0.0 && k < 1.0) {
        return Err(Error::Domain {
            value: k,
            domain: "(0, 1)",
        });
    }
    let l = (1.0 - k * k).sqrt();
    let half_pi = std::f64::consts::FRAC_PI_2;
    Ok((half_pi / agm(1.0, l), half_pi / agm(1.0, k)))
}

/// Which ODE system a continuation run evolves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemKind {
    Sig6,
    Classical,
}

/// Outcome of one candidate-translation run: integrate base → base + τ and
/// compare the endpoint state against the start.
///
/// `return_residual` is the max componentwise |final − initial|. When τ is
/// real and an integer multiple n of the real translation step (2K₆
/// respectively 2K), `law_residual` compares against the known law instead
/// (s, c, σ and sn, cn pick up (−1)ⁿ; d, ∂ and dn are invariant) and
/// `law_half_periods` records n. `delta_return` is the δ = d/∂ probe
/// (signature-6 only). `min_abs_p` is ∞ for the classical system.
#[derive(Debug, Clone)]
pub struct MonodromyReport {
    pub system: SystemKind,
    pub path: PathSpec,
    pub return_residual: f64,
    pub law_residual: Option<f64>,
    pub law_half_periods: Option<i64>,
    pub delta_return: Option<f64>,
    pub min_abs_p: f64,
    pub steps: usize,
    pub invariant_drift: f64,
}

/// One candidate of a scan with its outcome; failures (singularity, step
/// underflow) are recorded per candidate so one bad τ does not void the
/// rest of the table.
#[derive(Debug, Clone)]
pub struct ScanEntry {
    pub tau: Complex64,
    pub outcome: Result<MonodromyReport>,
}

fn detect_half_periods(tau: Complex64, real_step: f64) -> Option<i64> {
    if tau.im.abs() > 1e-9 {
        return None;
    }
    let n = (tau.re / real_step).round();
    if n != 0.0 && (tau.re - n * real_step).abs() <= 1e-8 {
        Some(n as i64)
    } else {
        None
    }
}

fn sign_for(n: i64) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// For each candidate translation τ, continue the state from `base_u` to
/// `base_u + τ` and report residuals. The base state is itself produced by
/// continuation from the origin germ; a failure there aborts the scan,
/// per-candidate failures do not.
pub fn monodromy_scan(
    m: &Modulus,
    system: SystemKind,
    base_u: Complex64,
    candidates: &[Complex64],
    tol: f64,
) -> Result<Vec<ScanEntry>> {
    match system {
        SystemKind::Sig6 => scan_sig6(m, base_u, candidates, tol),
        SystemKind::Classical => scan_classical(m.kappa(), base_u, candidates, tol),
    }
}

fn scan_sig6(
    m: &Modulus,
    base_u: Complex64,
    candidates: &[Complex64],
    tol: f64,
) -> Result<Vec<ScanEntry>> {
    let base = integrate_segment(&FlowState::origin(), m, base_u, tol)?;
    let two_k6 = 2.0 * crate::amplitude::quarter_period(m);
    let entries = candidates
        .iter()
        .map(|&tau| {
            let outcome = (|| {
                let path = PathSpec::new(vec![base_u, base_u + tau])?;
                let run = integrate_segment_traced(&base, m, base_u + tau, tol)?;
                let f = run.state;
                let return_residual = (f.s - base.s)
                    .norm()
                    .max((f.c - base.c).norm())
                    .max((f.d - base.d).norm())
                    .max((f.p - base.p).norm())
                    .max((f.sigma - base.sigma).norm());
                let law = detect_half_periods(tau, two_k6).map(|n| {
                    let sgn = sign_for(n);
                    let r = (f.s - sgn * base.s)
                        .norm()
                        .max((f.c - sgn * base.c).norm())
                        .max((f.sigma - sgn * base.sigma).norm())
                        .max((f.d - base.d).norm())
                        .max((f.p - base.p).norm());
                    (n, r)
                });
                Ok(MonodromyReport {
                    system: SystemKind::Sig6,
                    path,
                    return_residual,
                    law_residual: law.map(|(_, r)| r),
                    law_half_periods: law.map(|(n, _)| n),
                    delta_return: Some((f.delta() - base.delta()).norm()),
                    min_abs_p: run.min_abs_p,
                    steps: run.steps,
                    invariant_drift: run.max_drift,
                })
            })();
            ScanEntry { tau, outcome }
        })
        .collect();
    Ok(entries)
}

fn scan_classical(
    k: f64,
    base_u: Complex64,
    candidates: &[Complex64],
    tol: f64,
) -> Result<Vec<ScanEntry>> {
    let base = classical_integrate_segment(&ClassicalState::origin(k)?, base_u, tol)?;
    let (big_k, _) = classical_quarter_periods(k)?;
    let two_k = 2.0 * big_k;
    let entries = candidates
        .iter()
        .map(|&tau| {
            let outcome = (|| {
                let path = PathSpec::new(vec![base_u, base_u + tau])?;
                let run = classical_integrate_segment_traced(&base, base_u + tau, tol)?;
                let f = run.state;
                let return_residual = (f.sn - base.sn)
                    .norm()
                    .max((f.cn - base.cn).norm())
                    .max((f.dn - base.dn).norm());
                let law = detect_half_periods(tau, two_k).map(|n| {
                    let sgn = sign_for(n);
                    let r = (f.sn - sgn * base.sn)
                        .norm()
                        .max((f.cn - sgn * base.cn).norm())
                        .max((f.dn - base.dn).norm());
                    (n, r)
                });
                Ok(MonodromyReport {
                    system: SystemKind::Classical,
                    path,
                    return_residual,
                    law_residual: law.map(|(_, r)| r),
                    law_half_periods: law.map(|(n, _)| n),
                    delta_return: None,
                    min_abs_p: f64::INFINITY,
                    steps: run.steps,
                    invariant_drift: run.max_drift,
                })
            })();
            ScanEntry { tau, outcome }
        })
        .collect();
    Ok(entries)
}
