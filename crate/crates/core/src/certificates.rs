//! Interval certificates for the two analytic inequalities, and the angle
//! curve table.
//!
//! Kifli: f(x, y) = 3 − 2sin(x + π/6) − 2sin(y + π/6) − 2cos(x + y + π/3)
//! on [π/3, 2π/3]², with ∂f/∂y = −4 sin(x/2 − π/6) sin(y + x/2).
//! In shifted variables u = x − π/3, v = y − π/3 the derivative is
//! −4 sin(u/2) cos(v + u/2).
//!
//! Clover: with t = x − π/3 ∈ [0, π/3] and t' = π/3 − t,
//! φ(x) = atan(b/a) + acos(√(a² + b²)/2) is evaluated as
//! φ̂(t) = atan(b/a) + asin(√k), k = (√3/2)·sin t,
//! using a² + b² = 4 − 2√3·sin t. The two forms agree on the domain, but the
//! second avoids acos near 1, where interval enclosures blow up.
//! angle = π − φ̂(t') − φ̂(t) and angle' = g(t') − g(t) with
//! g = φ̂' = (3 − √3 sin t)/(4 − 2√3 sin t) + (√3/2)cos t / (2√(k(1 − k))).

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;

/// Tolerance on the domain [π/3, 2π/3] for float arguments.
pub const DOMAIN_SLACK: f64 = 1e-12;
pub const KIFLI_DEPTH_CAP: usize = 24;
pub const CLOVER_DEPTH_CAP: usize = 40;
/// Enclosures required to pin boundary values.
pub const ENDPOINT_WIDTH: f64 = 1e-10;
const MIDDLE_PIECES: usize = 256;

fn third_pi() -> Interval {
    Interval::around(FRAC_PI_3)
}

fn sixth_pi() -> Interval {
    Interval::around(FRAC_PI_6)
}

fn half_pi() -> Interval {
    Interval::around(FRAC_PI_2)
}

fn two() -> Interval {
    Interval::point(2.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

fn check_domain(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && (FRAC_PI_3 - DOMAIN_SLACK..=2.0 * FRAC_PI_3 + DOMAIN_SLACK).contains(&x) {
        Ok(())
    } else {
        Err(Error::OutOfDomain(format!("{name} = {x} is outside [π/3, 2π/3]")))
    }
}

fn check_domain_iv(name: &str, x: &Interval) -> Result<()> {
    check_domain(name, x.lo)?;
    check_domain(name, x.hi)
}

// ---------------------------------------------------------------------------
// kifli

pub fn kifli_dist_sq(x: f64, y: f64) -> Result<f64> {
    check_domain("x", x)?;
    check_domain("y", y)?;
    Ok(3.0 - 2.0 * (x + FRAC_PI_6).sin() - 2.0 * (y + FRAC_PI_6).sin() - 2.0 * (x + y + FRAC_PI_3).cos())
}

pub fn kifli_dist_sq_dy(x: f64, y: f64) -> Result<f64> {
    check_domain("x", x)?;
    check_domain("y", y)?;
    Ok(-4.0 * (x / 2.0 - FRAC_PI_6).sin() * (y + x / 2.0).sin())
}

pub fn kifli_dist_sq_interval(x: Interval, y: Interval) -> Result<Interval> {
    check_domain_iv("x", &x)?;
    check_domain_iv("y", &y)?;
    let s = sixth_pi();
    Ok(Interval::point(3.0)
        - two() * (x + s).sin()
        - two() * (y + s).sin()
        - two() * (x + y + third_pi()).cos())
}

pub fn kifli_dist_sq_dy_interval(x: Interval, y: Interval) -> Result<Interval> {
    check_domain_iv("x", &x)?;
    check_domain_iv("y", &y)?;
    let half_x = x * Interval::point(0.5);
    Ok(Interval::point(-4.0) * (half_x - sixth_pi()).sin() * (y + half_x).sin())
}

/// Halving is exact away from subnormals.
fn halve(u: Interval) -> Interval {
    Interval::new(u.lo * 0.5, u.hi * 0.5)
}

/// −4 sin(u/2) cos(v + u/2) with u = x − π/3, v = y − π/3.
fn kifli_dy_shifted(u: Interval, v: Interval) -> Interval {
    let h = halve(u);
    Interval::point(-4.0) * h.sin() * (v + h).cos()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCheck {
    pub y: f64,
    pub enclosure: Interval,
    pub contains_one: bool,
    pub width: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KifliCertificate {
    pub grid: usize,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// Boxes where the interval derivative is strictly negative.
    pub boxes_strict: usize,
    /// Boxes on the vanishing set, decided by where the two factors' arguments lie.
    pub boxes_by_containment: usize,
    pub max_depth: usize,
    pub smallest_box: f64,
    /// Hull of f over grid cells not touching x = π/3 or y = π/3.
    pub interior_max: Interval,
    pub interior_max_below_one: bool,
    pub boundary: Vec<BoundaryCheck>,
    pub boundary_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offending_box: Option<[Interval; 2]>,
}

fn split_points(len_hi: f64, pieces: usize) -> Vec<f64> {
    let mut pts: Vec<f64> = (0..=pieces).map(|i| len_hi * i as f64 / pieces as f64).collect();
    pts[pieces] = len_hi;
    pts
}

/// The factor arguments stay where sin(u/2) ≥ 0 and cos(v + u/2) ≥ 0. Their
/// zeros (u = 0, or u = v = π/3) lie outside the open domain.
fn kifli_containment(u: &Interval, v: &Interval) -> bool {
    let h = halve(*u);
    let w = *v + h;
    // box edges overshoot π/3 by rounding; the true arguments are bounded by π/2
    h.lo >= 0.0 && h.hi <= Interval::pi().lo && v.lo >= 0.0 && w.hi <= half_pi().hi + 1e-15
}

pub fn certify_kifli(grid: usize) -> Result<KifliCertificate> {
    if grid < 8 {
        return Err(Error::OutOfDomain(format!("kifli grid must be ≥ 8, got {grid}")));
    }
    let edges = split_points(third_pi().hi, grid);
    let vanishing_w = half_pi().lo;
    let mut stack: Vec<(Interval, Interval, usize)> = Vec::new();
    for i in 0..grid {
        for j in 0..grid {
            stack.push((Interval::new(edges[i], edges[i + 1]), Interval::new(edges[j], edges[j + 1]), 0));
        }
    }
    let (mut strict, mut contained, mut max_depth) = (0, 0, 0);
    let mut smallest = f64::INFINITY;
    let mut offending = None;
    while let Some((u, v, depth)) = stack.pop() {
        max_depth = max_depth.max(depth);
        smallest = smallest.min(u.width().max(v.width()));
        if kifli_dy_shifted(u, v).hi < 0.0 {
            strict += 1;
            continue;
        }
        let touches = u.lo <= 0.0 || (v + halve(u)).hi >= vanishing_w;
        if depth < KIFLI_DEPTH_CAP {
            let (a, b) = if u.width() >= v.width() {
                let m = u.mid();
                ((Interval::new(u.lo, m), v), (Interval::new(m, u.hi), v))
            } else {
                let m = v.mid();
                ((u, Interval::new(v.lo, m)), (u, Interval::new(m, v.hi)))
            };
            stack.push((a.0, a.1, depth + 1));
            stack.push((b.0, b.1, depth + 1));
        } else if touches && kifli_containment(&u, &v) {
            contained += 1;
        } else {
            offending = Some([u + third_pi(), v + third_pi()]);
            break;
        }
    }

    // f decreases in both variables away from the edges, so each cell's
    // lower-left corner bounds it
    let mut interior: Option<Interval> = None;
    for i in 1..grid {
        for j in 1..grid {
            let x = third_pi() + Interval::point(edges[i]);
            let y = third_pi() + Interval::point(edges[j]);
            let f = kifli_dist_sq_interval(clamp_domain(x), clamp_domain(y))?;
            interior = Some(interior.map_or(f, |acc| acc.hull(&f)));
        }
    }
    let interior = interior.expect("grid ≥ 8");

    let boundary: Vec<BoundaryCheck> = edges
        .iter()
        .map(|&v| {
            let y = clamp_domain(third_pi() + Interval::point(v));
            let e = kifli_dist_sq_interval(third_pi(), y).expect("in domain");
            BoundaryCheck {
                y: y.mid(),
                enclosure: e,
                contains_one: e.contains(1.0),
                width: e.width(),
            }
        })
        .collect();
    let boundary_ok = boundary.iter().all(|b| b.contains_one && b.width <= ENDPOINT_WIDTH);
    let below = interior.hi < 1.0;
    let (verdict, detail) = if let Some(b) = offending {
        (Verdict::Inconclusive, Some(format!("derivative sign undecided on box {b:?}")))
    } else if !boundary_ok {
        (Verdict::Fail, Some("boundary enclosure misses 1 or is too wide".into()))
    } else if !below {
        (Verdict::Fail, Some("interior enclosure reaches 1".into()))
    } else {
        (Verdict::Pass, None)
    };
    Ok(KifliCertificate {
        grid,
        verdict,
        detail,
        boxes_strict: strict,
        boxes_by_containment: contained,
        max_depth,
        smallest_box: smallest,
        interior_max: interior,
        interior_max_below_one: below,
        boundary,
        boundary_ok,
        offending_box: offending,
    })
}

/// Clips an enclosure of a point known to lie in [π/3, 2π/3].
fn clamp_domain(x: Interval) -> Interval {
    let lo = third_pi().lo;
    let hi = (third_pi() * two()).hi;
    x.intersect(&Interval::new(lo, hi)).expect("point in domain")
}

// ---------------------------------------------------------------------------
// clover

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CloverValues {
    pub a: f64,
    pub b: f64,
    pub phi: f64,
    pub angle: f64,
}

fn clover_ab(x: f64) -> (f64, f64) {
    let s3 = 3f64.sqrt();
    (-0.5 - s3 * (x + FRAC_PI_3).sin(), s3 / 2.0 + s3 * (x + FRAC_PI_3).cos())
}

fn phi_literal(x: f64) -> f64 {
    let (a, b) = clover_ab(x);
    (b / a).atan() + ((a * a + b * b).sqrt() / 2.0).min(1.0).acos()
}

/// a, b, φ and the angle by the literal formulas, in floating point.
pub fn clover_functions(x: f64) -> Result<CloverValues> {
    check_domain("x", x)?;
    let (a, b) = clover_ab(x);
    let phi = phi_literal(x);
    Ok(CloverValues {
        a,
        b,
        phi,
        angle: PI - phi_literal(PI - x) - phi,
    })
}

fn phi_hat_f(t: f64) -> f64 {
    let s3 = 3f64.sqrt();
    let th = t + 2.0 * FRAC_PI_3;
    let a = -0.5 - s3 * th.sin();
    let b = s3 / 2.0 + s3 * th.cos();
    let k = (s3 / 2.0 * t.sin()).max(0.0);
    (b / a).atan() + k.sqrt().asin()
}

fn g_f(t: f64) -> f64 {
    let s3 = 3f64.sqrt();
    let st = t.sin();
    let k = s3 / 2.0 * st;
    (3.0 - s3 * st) / (4.0 - 2.0 * s3 * st) + s3 / 2.0 * t.cos() / (2.0 * (k * (1.0 - k)).sqrt())
}

/// Angle at x = π/3 + t, given t' = π/3 − t separately so that symmetric
/// pairs evaluate identically.
pub fn clover_angle_pair_f(t: f64, tp: f64) -> f64 {
    PI - phi_hat_f(tp) - phi_hat_f(t)
}

/// Stable float angle at x.
pub fn clover_angle(x: f64) -> Result<f64> {
    check_domain("x", x)?;
    let t = (x - FRAC_PI_3).clamp(0.0, FRAC_PI_3);
    Ok(clover_angle_pair_f(t, FRAC_PI_3 - t))
}

/// d angle / dx at x in the open domain.
pub fn clover_angle_deriv(x: f64) -> Result<f64> {
    check_domain("x", x)?;
    let t = x - FRAC_PI_3;
    Ok(g_f(FRAC_PI_3 - t) - g_f(t))
}

/// φ(t + π/3) for t ⊂ [0, π/3].
pub fn clover_phi_hat(t: Interval) -> Interval {
    let s3 = Interval::sqrt3();
    let th = t + third_pi() * two();
    let a = Interval::point(-0.5) - s3 * th.sin();
    let b = s3 * Interval::point(0.5) + s3 * th.cos();
    let k = s3 * Interval::point(0.5) * t.sin();
    let k = Interval::new(k.lo.max(0.0), k.hi.max(0.0));
    (b / a).atan() + k.sqrt().asin()
}

fn clover_g(t: Interval) -> Interval {
    let s3 = Interval::sqrt3();
    let st = t.sin();
    let k = s3 * Interval::point(0.5) * st;
    let k = Interval::new(k.lo.max(0.0), k.hi.max(0.0));
    let first = (Interval::point(3.0) - s3 * st) / (Interval::point(4.0) - two() * s3 * st);
    let kk = k * (Interval::point(1.0) - k);
    let root = (Interval::new(kk.lo.max(0.0), kk.hi.max(0.0))).sqrt() * two();
    let root = Interval::new(root.lo.max(0.0), root.hi);
    first + s3 * Interval::point(0.5) * t.cos() * root.recip_nonneg()
}

pub fn clover_angle_pair(t: Interval, tp: Interval) -> Interval {
    Interval::pi() - clover_phi_hat(tp) - clover_phi_hat(t)
}

fn complement(t: Interval) -> Interval {
    let tp = third_pi() - t;
    Interval::new(tp.lo.max(0.0), tp.hi.max(0.0))
}

/// Enclosure of the angle at x = π/3 + t.
pub fn clover_angle_t(t: Interval) -> Interval {
    clover_angle_pair(t, complement(t))
}

/// Enclosure of d angle / dx at x = π/3 + t.
pub fn clover_angle_deriv_t(t: Interval) -> Interval {
    clover_g(complement(t)) - clover_g(t)
}

/// Enclosure of the angle at an x enclosure inside the domain.
pub fn clover_angle_interval(x: Interval) -> Result<Interval> {
    check_domain_iv("x", &x)?;
    let t = x - third_pi();
    let t = Interval::new(t.lo.max(0.0), t.hi.min(third_pi().hi).max(0.0));
    Ok(clover_angle_t(t))
}

/// Angle enclosures at x = π/3 (t = 0) and x = 2π/3 (t' = 0).
pub fn clover_endpoints() -> (Interval, Interval) {
    let zero = Interval::point(0.0);
    (clover_angle_pair(zero, third_pi()), clover_angle_pair(third_pi(), zero))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepReport {
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CloverCertificate {
    pub epsilon: f64,
    pub delta: f64,
    pub grid: usize,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed_step: Option<String>,
    pub endpoint_left: Interval,
    pub endpoint_right: Interval,
    pub endpoints_ok: bool,
    pub step1: StepReport,
    pub angle_at_left_eps: Option<Interval>,
    pub angle_at_right_eps: Option<Interval>,
    pub step2: StepReport,
    /// Upper bound on |angle'| over the middle segment.
    pub derivative_bound: Option<f64>,
    pub max_grid_gap: Option<f64>,
    pub grid_max: Option<Interval>,
    pub step3: StepReport,
    pub auto_tuned: bool,
}

/// Sign of angle' within ε of both endpoints by bisection. With s the
/// distance to the nearer endpoint, the left side needs g(π/3 − s) − g(s) < 0
/// and the right side needs −angle' = g(π/3 − s) − g(s) < 0, so one sweep
/// covers both.
fn endpoint_sign(eps: f64) -> (Verdict, String) {
    let mut stack = vec![(Interval::new(0.0, eps), 0usize)];
    let mut boxes = 0;
    while let Some((s, depth)) = stack.pop() {
        // s is the distance to the nearby endpoint; the far parameter is π/3 − s
        let d = clover_g(complement(s)) - clover_g(s);
        if d.hi < 0.0 {
            boxes += 1;
            continue;
        }
        if d.lo >= 0.0 && s.lo > 0.0 {
            return (Verdict::Fail, format!("derivative has the wrong sign on {s:?}"));
        }
        if depth >= CLOVER_DEPTH_CAP {
            return (Verdict::Inconclusive, format!("derivative sign undecided on {s:?}"));
        }
        let m = s.mid();
        stack.push((Interval::new(s.lo, m), depth + 1));
        stack.push((Interval::new(m, s.hi), depth + 1));
    }
    (Verdict::Pass, format!("{boxes} boxes"))
}

/// Runs the three steps: derivative sign near both endpoints, the margin δ at
/// distance ε from them, and a grid with spacing fine enough for the
/// derivative bound over the middle segment.
pub fn certify_clover(eps: f64, delta: f64, grid: usize) -> Result<CloverCertificate> {
    if !(eps > 0.0 && eps < FRAC_PI_6) {
        return Err(Error::OutOfDomain(format!("ε must lie in (0, π/6), got {eps}")));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::OutOfDomain(format!("δ must be positive, got {delta}")));
    }
    if grid < 2 {
        return Err(Error::OutOfDomain(format!("grid must be ≥ 2, got {grid}")));
    }
    let (left, right) = clover_endpoints();
    let pinned = |e: &Interval| e.overlaps(&third_pi()) && e.width() <= ENDPOINT_WIDTH;
    let endpoints_ok = pinned(&left) && pinned(&right);
    let mut cert = CloverCertificate {
        epsilon: eps,
        delta,
        grid,
        verdict: Verdict::Pass,
        failed_step: None,
        endpoint_left: left,
        endpoint_right: right,
        endpoints_ok,
        step1: StepReport {
            ok: false,
            detail: String::new(),
        },
        angle_at_left_eps: None,
        angle_at_right_eps: None,
        step2: StepReport {
            ok: false,
            detail: "not run".into(),
        },
        derivative_bound: None,
        max_grid_gap: None,
        grid_max: None,
        step3: StepReport {
            ok: false,
            detail: "not run".into(),
        },
        auto_tuned: false,
    };
    let stop = |cert: &mut CloverCertificate, v: Verdict, step: &str| {
        cert.verdict = v;
        cert.failed_step = Some(step.to_string());
    };
    if !endpoints_ok {
        stop(&mut cert, Verdict::Fail, "endpoints");
        return Ok(cert);
    }

    let (v1, d1) = endpoint_sign(eps);
    cert.step1 = StepReport {
        ok: v1 == Verdict::Pass,
        detail: d1,
    };
    if !cert.step1.ok {
        stop(&mut cert, v1, "step 1: derivative sign near the endpoints");
        return Ok(cert);
    }

    let threshold = (third_pi() - Interval::point(delta)).lo;
    let e = Interval::point(eps);
    let at_left = clover_angle_t(e);
    let at_right = clover_angle_pair(complement(e), e);
    cert.angle_at_left_eps = Some(at_left);
    cert.angle_at_right_eps = Some(at_right);
    let ok2 = at_left.hi <= threshold && at_right.hi <= threshold;
    cert.step2 = StepReport {
        ok: ok2,
        detail: format!("need angle ≤ π/3 − δ ≥ {threshold:.12}"),
    };
    if !ok2 {
        let v = if at_left.lo > threshold || at_right.lo > threshold { Verdict::Fail } else { Verdict::Inconclusive };
        stop(&mut cert, v, "step 2: margin δ at distance ε from the endpoints");
        return Ok(cert);
    }

    // derivative bound over [ε, π/3 − ε]
    let end = complement(e).hi;
    let pieces = split_points(end - eps, MIDDLE_PIECES);
    let mut m: f64 = 0.0;
    for w in pieces.windows(2) {
        let s = Interval::new(eps + w[0], (eps + w[1]).min(end));
        let s = Interval::new(s.lo, s.hi.max(s.lo));
        m = m.max(clover_angle_deriv_t(s).abs_max());
    }
    let m = m.next_up();
    cert.derivative_bound = Some(m);
    let length = end - eps;
    let needed = (m * length / delta).ceil() as usize;
    let mut pts: Vec<f64> = (0..grid).map(|i| eps + length * i as f64 / (grid - 1) as f64).collect();
    pts[grid - 1] = end;
    let gap = pts
        .windows(2)
        .map(|w| (Interval::point(w[1]) - Interval::point(w[0])).hi)
        .fold(0.0, f64::max);
    cert.max_grid_gap = Some(gap);
    if grid < needed || (Interval::point(m) * Interval::point(gap / 2.0)).hi >= delta {
        cert.step3 = StepReport {
            ok: false,
            detail: format!("grid of {grid} points is too coarse; M·L/δ needs {needed}"),
        };
        stop(&mut cert, Verdict::Fail, "step 3: grid spacing against the derivative bound");
        return Ok(cert);
    }
    let mut hull: Option<Interval> = None;
    let mut bad = None;
    for &t in &pts {
        let a = clover_angle_t(Interval::point(t));
        hull = Some(hull.map_or(a, |h| h.hull(&a)));
        if a.hi > threshold && bad.is_none() {
            bad = Some((t, a));
        }
    }
    cert.grid_max = hull;
    match bad {
        None => {
            cert.step3 = StepReport {
                ok: true,
                detail: format!("M = {m:.6}, gap = {gap:.3e}, M·gap/2 < δ"),
            };
        }
        Some((t, a)) => {
            cert.step3 = StepReport {
                ok: false,
                detail: format!("angle at x = π/3 + {t} is {a:?}"),
            };
            let v = if a.lo > threshold { Verdict::Fail } else { Verdict::Inconclusive };
            stop(&mut cert, v, "step 3: grid values below π/3 − δ");
        }
    }
    Ok(cert)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CloverTuning {
    pub epsilon: f64,
    pub delta: f64,
    pub grid: usize,
}

/// Float sweep over ε proposing (ε, δ, grid), cheapest grid first. δ is half
/// the float margin at distance ε; the grid doubles the float estimate of
/// M·L/δ.
pub fn tune_clover() -> Vec<CloverTuning> {
    let mut out: Vec<CloverTuning> = [0.45, 0.4, 0.3, 0.2, 0.1, 0.05, 0.02]
        .iter()
        .map(|&eps| {
            let margin = FRAC_PI_3 - clover_angle_pair_f(eps, FRAC_PI_3 - eps).max(clover_angle_pair_f(FRAC_PI_3 - eps, eps));
            let delta = margin / 2.0;
            let length = FRAC_PI_3 - 2.0 * eps;
            let m = (0..=2000)
                .map(|i| {
                    let t = eps + length * i as f64 / 2000.0;
                    (g_f(FRAC_PI_3 - t) - g_f(t)).abs()
                })
                .fold(0.0, f64::max);
            let grid = ((2.0 * m * length / delta).ceil() as usize + 2).max(16);
            CloverTuning { epsilon: eps, delta, grid }
        })
        .filter(|c| c.delta > 0.0)
        .collect();
    out.sort_by_key(|c| c.grid);
    out
}

/// Certificate with auto-tuned parameters: the first proposal that passes,
/// or the last attempt.
pub fn certify_clover_auto() -> Result<CloverCertificate> {
    let mut last = None;
    for c in tune_clover() {
        let mut cert = certify_clover(c.epsilon, c.delta, c.grid)?;
        cert.auto_tuned = true;
        if cert.verdict == Verdict::Pass {
            return Ok(cert);
        }
        last = Some(cert);
    }
    last.ok_or_else(|| Error::Degenerate("no tuning candidates".into()))
}

/// Rows (x, angle) on [π/3, 2π/3]. Row i and row samples − 1 − i use the
/// same pair of φ evaluations, so the table is symmetric to rounding.
pub fn emit_angle_plot(samples: usize) -> Result<Vec<(f64, f64)>> {
    if samples < 2 {
        return Err(Error::OutOfDomain(format!("need at least 2 samples, got {samples}")));
    }
    let last = samples - 1;
    let h = FRAC_PI_3 / last as f64;
    Ok((0..samples)
        .map(|i| {
            let (t, tp) = (i as f64 * h, (last - i) as f64 * h);
            let (t, tp) = if i == last { (FRAC_PI_3, 0.0) } else if i == 0 { (0.0, FRAC_PI_3) } else { (t, tp) };
            (FRAC_PI_3 + t, clover_angle_pair_f(t, tp))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kifli_values() {
        assert!((kifli_dist_sq(FRAC_PI_3, FRAC_PI_3).unwrap() - 1.0).abs() < 1e-14);
        let mid = kifli_dist_sq(FRAC_PI_2, FRAC_PI_2).unwrap();
        assert!((mid - (4.0 - 2.0 * 3f64.sqrt())).abs() < 1e-14);
        for y in [1.1, 1.5, 2.0] {
            assert!(kifli_dist_sq_dy(FRAC_PI_3, y).unwrap().abs() < 1e-15);
        }
        assert!(matches!(kifli_dist_sq(0.5, 1.5), Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn kifli_symmetric() {
        for (x, y) in [(1.1, 1.9), (1.3, 1.5), (2.0, 1.05)] {
            let a = kifli_dist_sq_interval(Interval::point(x), Interval::point(y)).unwrap();
            let b = kifli_dist_sq_interval(Interval::point(y), Interval::point(x)).unwrap();
            assert!(a.overlaps(&b));
        }
    }

    #[test]
    fn kifli_certificate_passes() {
        let c = certify_kifli(16).unwrap();
        assert_eq!(c.verdict, Verdict::Pass, "{:?}", c.detail);
        assert!(c.boxes_by_containment > 0);
        assert!(c.interior_max.hi < 1.0);
        assert!(matches!(certify_kifli(4), Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn clover_endpoint_values() {
        let v = clover_functions(2.0 * FRAC_PI_3).unwrap();
        assert!((v.a + 0.5).abs() < 1e-15 && (v.b + 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((v.phi - 2.0 * FRAC_PI_3).abs() < 1e-7);
        assert!((clover_angle(FRAC_PI_3).unwrap() - FRAC_PI_3).abs() < 1e-12);
        let (l, r) = clover_endpoints();
        assert!(l.contains(FRAC_PI_3) && r.contains(FRAC_PI_3));
        assert!(l.width() <= ENDPOINT_WIDTH && r.width() <= ENDPOINT_WIDTH);
    }

    #[test]
    fn stable_form_matches_literal() {
        for i in 1..100 {
            let x = FRAC_PI_3 + FRAC_PI_3 * i as f64 / 100.0;
            let lit = clover_functions(x).unwrap().angle;
            let st = clover_angle(x).unwrap();
            assert!((lit - st).abs() < 1e-7, "{x}: {lit} vs {st}");
            let e = clover_angle_interval(Interval::around(x)).unwrap();
            assert!(e.contains(st) || (e.lo - st).abs() < 1e-12 || (e.hi - st).abs() < 1e-12);
        }
    }

    #[test]
    fn angle_at_half_pi() {
        // high-precision reference 0.836137479506260483832...
        let v = clover_angle(FRAC_PI_2).unwrap();
        assert!((v - 0.836_137_479_506_260_5).abs() < 1e-12);
    }

    #[test]
    fn clover_derivative_matches_differences() {
        for i in 1..50 {
            let x = FRAC_PI_3 + 0.02 + (FRAC_PI_3 - 0.04) * i as f64 / 50.0;
            let h = 1e-6;
            let fd = (clover_angle(x + h).unwrap() - clover_angle(x - h).unwrap()) / (2.0 * h);
            assert!((fd - clover_angle_deriv(x).unwrap()).abs() < 1e-5);
        }
    }

    #[test]
    fn huge_delta_is_rejected() {
        let c = certify_clover(0.1, 1.0, 100).unwrap();
        assert_ne!(c.verdict, Verdict::Pass);
        assert_eq!(c.failed_step.as_deref(), Some("step 2: margin δ at distance ε from the endpoints"));
    }

    #[test]
    fn auto_tuned_clover_passes() {
        let c = certify_clover_auto().unwrap();
        assert_eq!(c.verdict, Verdict::Pass, "{c:#?}");
        assert!(c.auto_tuned);
    }

    #[test]
    fn plot_endpoints() {
        let rows = emit_angle_plot(2).unwrap();
        assert_eq!(rows.len(), 2);
        assert!((rows[0].0 - FRAC_PI_3).abs() < 1e-15 && (rows[1].0 - 2.0 * FRAC_PI_3).abs() < 1e-15);
        assert!((rows[0].1 - FRAC_PI_3).abs() < 1e-12 && (rows[1].1 - FRAC_PI_3).abs() < 1e-12);
        let rows = emit_angle_plot(101).unwrap();
        let (imin, _) = rows.iter().enumerate().min_by(|a, b| a.1 .1.total_cmp(&b.1 .1)).unwrap();
        assert_eq!(imin, 50);
    }
}
