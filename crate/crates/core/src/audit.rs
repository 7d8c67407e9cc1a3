//! Structural audits of a penny graph.
//!
//! Every check produces a [`CheckResult`]; a violation always carries a
//! [`Witness`] that can be fed back through [`Witness::reproduces`].
//! Angle conditions on unit paths are decided exactly where an exact
//! equivalent exists (chord lengths, parallel edges); the remaining float
//! angle sums only select which exact test to run near equality.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{dist_sq, dist_sq_float, orientation, orientation_float, Approx, Point};
use crate::graph::{Mode, PennyGraph};

/// Float tolerance for angle sums.
pub const ANGLE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Violation,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    ShortFaceSide { face: usize, u: usize, v: usize },
    ShortChord { a: usize, b: usize, c: usize },
    ChordNotEdge { a: usize, b: usize, c: usize },
    AngleSumBelowPi { a: usize, b: usize, c: usize, d: usize },
    RhombusWithoutEdge { a: usize, b: usize, c: usize, d: usize },
    DegreeAboveFive { v: usize, degree: usize },
    ThreeTriangles { v: usize, around: [usize; 4] },
    HullContains { path: [usize; 4], inside: usize },
    NoCommonNeighbor { u: usize, v: usize },
    BrokenMobiusLoop { triangle: [usize; 3], ring: Vec<usize> },
    NotInKernel { v: usize },
    BrokenApricot { kernel: [usize; 4], ring: Vec<usize> },
    ApricotPairShareNeighbor { kernel: [usize; 4], pair: [usize; 2], common: usize },
    ApricotPairBothFive { kernel: [usize; 4], pair: [usize; 2] },
    KernelsOverlap { first: [usize; 4], second: [usize; 4], shared: usize },
    ApricotVertexInKernel { kernel: [usize; 4], vertex: usize, other: [usize; 4] },
    UnclassifiedEdge { a: usize, b: usize },
    Kifli { a: usize, b1: usize, b2: usize },
    Clover { a: usize, b: [usize; 4] },
    NoUnpopularNeighbor { a: usize },
    TypeIIINeighborPopular { a: usize, b: usize, c: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub status: Status,
    /// Number of configurations examined.
    pub checked: usize,
    pub witnesses: Vec<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckResult {
    fn from_witnesses(checked: usize, witnesses: Vec<Witness>) -> Self {
        CheckResult {
            status: if witnesses.is_empty() {
                Status::Pass
            } else {
                Status::Violation
            },
            checked,
            witnesses,
            note: None,
        }
    }

    fn skipped(note: &str) -> Self {
        CheckResult {
            status: Status::Skipped,
            checked: 0,
            witnesses: Vec::new(),
            note: Some(note.to_string()),
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Violation
    }
}

pub type AuditSection = BTreeMap<String, CheckResult>;

/// Four degree-5 vertices with edges LU, UR, RD, DL, LR, and the ring of
/// their ten remaining neighbours (L1, L2, U1, U2, U3, R1, R2, D1, D2, D3,
/// clockwise). The ring is empty when it cannot be traced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelRecord {
    pub l: usize,
    pub u: usize,
    pub r: usize,
    pub d: usize,
    pub apricot_cycle: Vec<usize>,
}

impl KernelRecord {
    pub fn vertices(&self) -> [usize; 4] {
        [self.l, self.u, self.r, self.d]
    }

    fn sorted(&self) -> [usize; 4] {
        let mut v = self.vertices();
        v.sort_unstable();
        v
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices().contains(&v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeType {
    TypeI,
    TypeII,
    TypeIII,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Popularity {
    Popular,
    Unpopular,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeTypeHistogram {
    pub type_i: usize,
    pub type_ii: usize,
    pub type_iii: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditCounts {
    pub vertices: usize,
    pub edges: usize,
    pub max_degree: usize,
    pub degree_five: usize,
    pub degree_four: usize,
    pub kernels: usize,
    pub apricots: usize,
    pub popular: usize,
    pub edge_types: EdgeTypeHistogram,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tn2Witness {
    pub vertex: usize,
    pub witness: usize,
    /// "apricot" when the witness comes from the vertex's apricot role.
    pub via: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Occurrence {
    pub pattern: String,
    pub witness: Witness,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub mode: Mode,
    pub general_position: bool,
    pub collinear_triples: usize,
    pub hypotheses_met: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub checks: AuditSection,
    pub kernels: Vec<KernelRecord>,
    pub tn2_witnesses: Vec<Tn2Witness>,
    pub counts: AuditCounts,
}

impl AuditReport {
    pub fn violations(&self) -> usize {
        self.checks.values().map(|c| c.witnesses.len()).sum()
    }

    pub fn all_passed(&self) -> bool {
        self.checks.values().all(CheckResult::passed)
    }
}

/// Precomputed kernel membership and popularity, shared by the audits.
pub struct Context<'g> {
    pub g: &'g PennyGraph,
    pub kernels: Vec<KernelRecord>,
    in_kernel: Vec<bool>,
    in_apricot: Vec<bool>,
    /// (kernel index, ring position) of apricot vertices
    apricot_role: HashMap<usize, (usize, usize)>,
}

impl<'g> Context<'g> {
    pub fn new(g: &'g PennyGraph) -> Self {
        let kernels = enumerate_kernels(g);
        let mut in_kernel = vec![false; g.n()];
        let mut in_apricot = vec![false; g.n()];
        let mut apricot_role = HashMap::new();
        for (k, rec) in kernels.iter().enumerate() {
            for v in rec.vertices() {
                in_kernel[v] = true;
                in_apricot[v] = true;
            }
            for (pos, &v) in rec.apricot_cycle.iter().enumerate() {
                in_apricot[v] = true;
                apricot_role.entry(v).or_insert((k, pos));
            }
        }
        Context {
            g,
            kernels,
            in_kernel,
            in_apricot,
            apricot_role,
        }
    }

    pub fn in_kernel(&self, v: usize) -> bool {
        self.in_kernel[v]
    }

    /// In a kernel or on the ring around one.
    pub fn in_apricot(&self, v: usize) -> bool {
        self.in_apricot[v]
    }

    pub fn popular(&self, v: usize) -> bool {
        classify_popularity(self.g, v) == Popularity::Popular
    }
}

pub fn classify_popularity(g: &PennyGraph, v: usize) -> Popularity {
    if g.degree(v) != 5 {
        return Popularity::Unpopular;
    }
    let nbrs = g.neighbors(v);
    let low = nbrs.iter().any(|&w| g.degree(w) <= 3);
    let fours = nbrs.iter().filter(|&&w| g.degree(w) == 4).count();
    if low || fours >= 2 {
        Popularity::Unpopular
    } else {
        Popularity::Popular
    }
}

fn hypotheses(g: &PennyGraph) -> (bool, usize) {
    let gp = g.general_position();
    (g.mode() == Mode::Exact && gp.holds(), gp.collinear_triples.len())
}

/// Full audit: every section plus counts.
pub fn audit(g: &PennyGraph) -> AuditReport {
    let (hyp, triples) = hypotheses(g);
    let ctx = Context::new(g);
    let mut checks = audit_basic(g);
    checks.extend(audit_deg5_with(&ctx));
    checks.extend(kernel_checks(&ctx));
    let (forbidden, _) = forbidden_patterns_with(&ctx);
    checks.extend(forbidden);
    let (tn2, witnesses) = tn2_with(&ctx);
    checks.extend(tn2);

    let mut notes = Vec::new();
    if g.mode() == Mode::Declared {
        notes.push("declared mode: metric checks skipped; results exercise detectors only".into());
    }
    if triples > 0 {
        notes.push(format!(
            "hypotheses unmet: general position fails ({triples} collinear triples)"
        ));
    }

    let mut hist = EdgeTypeHistogram::default();
    for a in 0..g.n() {
        for &b in g.neighbors(a) {
            match classify_with(&ctx, a, b) {
                Ok(EdgeType::TypeI) => hist.type_i += 1,
                Ok(EdgeType::TypeII) => hist.type_ii += 1,
                Ok(EdgeType::TypeIII) => hist.type_iii += 1,
                Err(_) => {}
            }
        }
    }
    let counts = AuditCounts {
        vertices: g.n(),
        edges: g.e(),
        max_degree: g.max_degree(),
        degree_five: (0..g.n()).filter(|&v| g.degree(v) == 5).count(),
        degree_four: (0..g.n()).filter(|&v| g.degree(v) == 4).count(),
        kernels: ctx.kernels.len(),
        apricots: ctx.kernels.iter().filter(|k| k.apricot_cycle.len() == 10).count(),
        popular: (0..g.n()).filter(|&v| ctx.popular(v)).count(),
        edge_types: hist,
    };
    AuditReport {
        mode: g.mode(),
        general_position: triples == 0,
        collinear_triples: triples,
        hypotheses_met: hyp,
        notes,
        checks,
        kernels: ctx.kernels.clone(),
        tn2_witnesses: witnesses,
        counts,
    }
}

// ---------------------------------------------------------------------------
// basic checks

pub fn audit_basic(g: &PennyGraph) -> AuditSection {
    let mut s = AuditSection::new();
    s.insert("max_degree".into(), check_max_degree(g));
    s.insert("three_triangles".into(), check_three_triangles(g));
    match g.points() {
        Some(pts) => {
            s.insert("faces_unit".into(), check_faces_unit(g, pts));
            s.insert("path_chord".into(), check_path_chords(g, pts));
            s.insert("path_angle_sum".into(), check_angle_sums(g, pts));
            s.insert("path_hull".into(), check_path_hulls(g, pts));
        }
        None => {
            let note = "declared mode: unit lengths are asserted, not measured";
            for key in ["faces_unit", "path_chord", "path_angle_sum", "path_hull"] {
                s.insert(key.into(), CheckResult::skipped(note));
            }
        }
    }
    s
}

fn check_max_degree(g: &PennyGraph) -> CheckResult {
    let w = (0..g.n())
        .filter(|&v| g.degree(v) > 5)
        .map(|v| Witness::DegreeAboveFive { v, degree: g.degree(v) })
        .collect();
    CheckResult::from_witnesses(g.n(), w)
}

fn triangle_faces_at(g: &PennyGraph, v: usize) -> Vec<bool> {
    let rot = g.rotation(v);
    rot.iter()
        .map(|&u| {
            g.dart_face(u, v)
                .map(|f| g.faces()[f].is_triangle())
                .unwrap_or(false)
        })
        .collect()
}

fn three_triangles_at(g: &PennyGraph, v: usize) -> Option<[usize; 4]> {
    let d = g.degree(v);
    if d < 3 {
        return None;
    }
    let rot = g.rotation(v);
    let tri = triangle_faces_at(g, v);
    (0..d)
        .find(|&i| tri[i] && tri[(i + 1) % d] && tri[(i + 2) % d])
        .map(|i| [rot[i], rot[(i + 1) % d], rot[(i + 2) % d], rot[(i + 3) % d]])
}

fn check_three_triangles(g: &PennyGraph) -> CheckResult {
    let w = (0..g.n())
        .filter_map(|v| three_triangles_at(g, v).map(|around| Witness::ThreeTriangles { v, around }))
        .collect();
    CheckResult::from_witnesses(g.n(), w)
}

fn check_faces_unit(g: &PennyGraph, pts: &[Point]) -> CheckResult {
    let mut w = Vec::new();
    let mut checked = 0;
    for (id, f) in g.faces().iter().enumerate() {
        if !(f.is_triangle() || f.is_quadrilateral()) {
            continue;
        }
        checked += 1;
        for i in 0..f.len() {
            let (u, v) = (f.walk[i], f.walk[(i + 1) % f.len()]);
            if &dist_sq(&pts[u], &pts[v]) != g.d_min_sq() {
                w.push(Witness::ShortFaceSide { face: id, u, v });
            }
        }
    }
    CheckResult::from_witnesses(checked, w)
}

/// Compares dist_sq(a, c) with d_min exactly, screening with floats first.
fn chord_cmp(g: &PennyGraph, pts: &[Point], a: usize, c: usize) -> std::cmp::Ordering {
    let (lo, hi) = dist_sq_float(&g.approx()[a], &g.approx()[c]);
    let (dm, err) = g.d_min_sq().to_f64_bounded();
    if lo > dm + err {
        return std::cmp::Ordering::Greater;
    }
    if hi < dm - err {
        return std::cmp::Ordering::Less;
    }
    dist_sq(&pts[a], &pts[c]).cmp(g.d_min_sq())
}

fn check_path_chords(g: &PennyGraph, pts: &[Point]) -> CheckResult {
    let mut w = Vec::new();
    let mut checked = 0;
    for b in 0..g.n() {
        let nb = g.neighbors(b);
        for (i, &a) in nb.iter().enumerate() {
            for &c in &nb[i + 1..] {
                checked += 1;
                match chord_cmp(g, pts, a, c) {
                    std::cmp::Ordering::Less => w.push(Witness::ShortChord { a, b, c }),
                    std::cmp::Ordering::Equal if !g.has_edge(a, c) => {
                        w.push(Witness::ChordNotEdge { a, b, c })
                    }
                    _ => {}
                }
            }
        }
    }
    CheckResult::from_witnesses(checked, w)
}

/// Clockwise angle from ray b→a to ray b→c, in [0, 2π).
pub fn clockwise_angle(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    let ta = (a[1] - b[1]).atan2(a[0] - b[0]);
    let tc = (c[1] - b[1]).atan2(c[0] - b[0]);
    (ta - tc).rem_euclid(std::f64::consts::TAU)
}

/// Exact side of ∠ABC + ∠BCD relative to π near equality: the sum falls
/// below π exactly when (A − B) × (D − C) > 0, and equals π when the two
/// vectors coincide (rhombus).
fn angle_sum_exact(pts: &[Point], a: usize, b: usize, c: usize, d: usize) -> std::cmp::Ordering {
    let u = pts[a].sub(&pts[b]);
    let v = pts[d].sub(&pts[c]);
    let o = orientation(&Point::origin(), &u, &v);
    match o {
        1 => std::cmp::Ordering::Less,
        -1 => std::cmp::Ordering::Greater,
        _ => {
            if u == v {
                std::cmp::Ordering::Equal
            } else {
                std::cmp::Ordering::Greater
            }
        }
    }
}

fn angle_sum_violation(g: &PennyGraph, pts: &[Point], a: usize, b: usize, c: usize, d: usize) -> Option<Witness> {
    let sum = clockwise_angle(g.coords(a), g.coords(b), g.coords(c))
        + clockwise_angle(g.coords(b), g.coords(c), g.coords(d));
    let pi = std::f64::consts::PI;
    if sum > pi + ANGLE_TOL {
        return None;
    }
    let side = if sum < pi - ANGLE_TOL {
        std::cmp::Ordering::Less
    } else {
        angle_sum_exact(pts, a, b, c, d)
    };
    match side {
        std::cmp::Ordering::Less => Some(Witness::AngleSumBelowPi { a, b, c, d }),
        std::cmp::Ordering::Equal if !g.has_edge(a, d) => {
            Some(Witness::RhombusWithoutEdge { a, b, c, d })
        }
        _ => None,
    }
}

fn check_angle_sums(g: &PennyGraph, pts: &[Point]) -> CheckResult {
    let mut w = Vec::new();
    let mut checked = 0;
    for &(x, y) in g.edges() {
        for (b, c) in [(x, y), (y, x)] {
            for &a in g.neighbors(b) {
                if a == c {
                    continue;
                }
                for &d in g.neighbors(c) {
                    if d == b || d == a {
                        continue;
                    }
                    checked += 1;
                    if let Some(v) = angle_sum_violation(g, pts, a, b, c, d) {
                        w.push(v);
                    }
                }
            }
        }
    }
    CheckResult::from_witnesses(checked, w)
}

/// All simple paths with three edges, each listed once (first < last).
pub fn three_edge_paths(g: &PennyGraph) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for &(x, y) in g.edges() {
        for (b, c) in [(x, y), (y, x)] {
            for &a in g.neighbors(b) {
                if a == c {
                    continue;
                }
                for &d in g.neighbors(c) {
                    if d != b && d != a && a < d {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    out
}

fn filtered_orient(g: &PennyGraph, pts: &[Point], i: usize, j: usize, k: usize) -> i8 {
    let ap = g.approx();
    orientation_float(&ap[i], &ap[j], &ap[k]).unwrap_or_else(|| orientation(&pts[i], &pts[j], &pts[k]))
}

fn hull_contains(g: &PennyGraph, pts: &[Point], path: &[usize; 4], c: usize) -> bool {
    let ap = g.approx();
    let p = ap[c];
    let slack = |a: &Approx| a.err * 4.0 + 1e-12;
    let (mut xlo, mut xhi, mut ylo, mut yhi) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &v in path {
        let a = ap[v];
        xlo = xlo.min(a.x - slack(&a));
        xhi = xhi.max(a.x + slack(&a));
        ylo = ylo.min(a.y - slack(&a));
        yhi = yhi.max(a.y + slack(&a));
    }
    if p.x < xlo - slack(&p) || p.x > xhi + slack(&p) || p.y < ylo - slack(&p) || p.y > yhi + slack(&p) {
        return false;
    }
    let in_tri = |i: usize, j: usize, k: usize| {
        let o = filtered_orient(g, pts, i, j, k);
        if o == 0 {
            return false;
        }
        let o1 = filtered_orient(g, pts, i, j, c);
        let o2 = filtered_orient(g, pts, j, k, c);
        let o3 = filtered_orient(g, pts, k, i, c);
        let neg = o1 < 0 || o2 < 0 || o3 < 0;
        let pos = o1 > 0 || o2 > 0 || o3 > 0;
        !(neg && pos)
    };
    let [a, b, cc, d] = *path;
    in_tri(a, b, cc) || in_tri(a, b, d) || in_tri(a, cc, d) || in_tri(b, cc, d)
}

fn check_path_hulls(g: &PennyGraph, pts: &[Point]) -> CheckResult {
    let paths = three_edge_paths(g);
    if paths.is_empty() {
        return CheckResult::from_witnesses(0, Vec::new());
    }
    let unit = g.d_min_sq().to_f64().sqrt();
    let cell = unit.max(1e-300);
    let key = |a: &Approx| ((a.x / cell).floor() as i64, (a.y / cell).floor() as i64);
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, a) in g.approx().iter().enumerate() {
        grid.entry(key(a)).or_default().push(i);
    }
    let mut w = Vec::new();
    for path in &paths {
        let (cx, cy) = key(&g.approx()[path[0]]);
        // the hull lies within 3 units of the first vertex
        for dx in -4..=4 {
            for dy in -4..=4 {
                let Some(bucket) = grid.get(&(cx + dx, cy + dy)) else {
                    continue;
                };
                for &c in bucket {
                    if !path.contains(&c) && hull_contains(g, pts, path, c) {
                        w.push(Witness::HullContains { path: *path, inside: c });
                    }
                }
            }
        }
    }
    CheckResult::from_witnesses(paths.len(), w)
}

// ---------------------------------------------------------------------------
// degree-5 structure

pub fn audit_deg5(g: &PennyGraph) -> AuditSection {
    audit_deg5_with(&Context::new(g))
}

fn audit_deg5_with(ctx: &Context) -> AuditSection {
    let g = ctx.g;
    let mut s = AuditSection::new();

    let mut w = Vec::new();
    let mut checked = 0;
    for &(u, v) in g.edges() {
        if g.degree(u) == 5 && g.degree(v) == 5 {
            checked += 1;
            if g.common_neighbors(u, v).is_empty() {
                w.push(Witness::NoCommonNeighbor { u, v });
            }
        }
    }
    s.insert("deg5_common_neighbor".into(), CheckResult::from_witnesses(checked, w));

    let mut w = Vec::new();
    let mut checked = 0;
    for tri in deg5_triangles(g) {
        if !mobius_applies(g, tri) {
            continue;
        }
        checked += 1;
        if let Some(bad) = mobius_violation(g, tri) {
            w.push(bad);
        }
    }
    s.insert("mobius_loop".into(), CheckResult::from_witnesses(checked, w));

    let mut w = Vec::new();
    let mut checked = 0;
    for v in 0..g.n() {
        if g.degree(v) == 5 && g.neighbors(v).iter().all(|&x| g.degree(x) == 5) {
            checked += 1;
            if !ctx.in_kernel(v) {
                w.push(Witness::NotInKernel { v });
            }
        }
    }
    s.insert("five_in_core".into(), CheckResult::from_witnesses(checked, w));
    s
}

fn deg5_triangles(g: &PennyGraph) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for &(u, v) in g.edges() {
        if g.degree(u) != 5 || g.degree(v) != 5 {
            continue;
        }
        for w in g.common_neighbors(u, v) {
            if w > v && g.degree(w) == 5 {
                out.push([u, v, w]);
            }
        }
    }
    out
}

/// No two triangle vertices share a neighbour other than the third.
fn mobius_applies(g: &PennyGraph, [x, y, z]: [usize; 3]) -> bool {
    g.common_neighbors(x, y).iter().all(|&w| w == z)
        && g.common_neighbors(y, z).iter().all(|&w| w == x)
        && g.common_neighbors(x, z).iter().all(|&w| w == y)
}

fn ring_is_cycle(g: &PennyGraph, ring: &[usize], len: usize) -> bool {
    if ring.len() != len {
        return false;
    }
    let distinct: BTreeSet<_> = ring.iter().collect();
    distinct.len() == len && (0..len).all(|i| g.has_edge(ring[i], ring[(i + 1) % len]))
}

fn mobius_violation(g: &PennyGraph, tri: [usize; 3]) -> Option<Witness> {
    let ring = outer_ring(g, &tri, tri[0]).map(|(r, _)| r).unwrap_or_default();
    if ring_is_cycle(g, &ring, 9) {
        None
    } else {
        Some(Witness::BrokenMobiusLoop { triangle: tri, ring })
    }
}

/// Walks the boundary of a small cluster of vertices through the rotation
/// system, collecting at each cluster vertex the clockwise run of its
/// non-cluster neighbours. Returns the ring and the cluster vertices in
/// visiting order, or `None` when some vertex's outside neighbours are not
/// contiguous or the walk does not close.
pub fn outer_ring(g: &PennyGraph, cluster: &[usize], start: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    let inside = |w: usize| cluster.contains(&w);
    let mut ring = Vec::new();
    let mut order = Vec::new();
    let mut v = start;
    loop {
        if order.contains(&v) || order.len() > cluster.len() {
            return None;
        }
        order.push(v);
        let rot = g.rotation(v);
        let d = rot.len();
        // positions where a cluster vertex is followed by an outside one
        let starts: Vec<usize> = (0..d)
            .filter(|&i| inside(rot[i]) && !inside(rot[(i + 1) % d]))
            .collect();
        if starts.len() != 1 {
            return None;
        }
        let mut j = (starts[0] + 1) % d;
        while !inside(rot[j]) {
            ring.push(rot[j]);
            j = (j + 1) % d;
        }
        v = rot[j];
        if v == start {
            break;
        }
    }
    if order.len() != cluster.len() {
        return None;
    }
    Some((ring, order))
}

// ---------------------------------------------------------------------------
// kernels and apricots

fn enumerate_kernels(g: &PennyGraph) -> Vec<KernelRecord> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &(a, b) in g.edges() {
        if g.degree(a) != 5 || g.degree(b) != 5 {
            continue;
        }
        let apex: Vec<usize> = g
            .common_neighbors(a, b)
            .into_iter()
            .filter(|&w| g.degree(w) == 5)
            .collect();
        for i in 0..apex.len() {
            for j in i + 1..apex.len() {
                let (c, d) = (apex[i], apex[j]);
                let mut key = [a, b, c, d];
                key.sort_unstable();
                if !seen.insert(key) {
                    continue;
                }
                out.push(label_kernel(g, a, b, c, d));
            }
        }
    }
    out.sort_by_key(KernelRecord::sorted);
    out
}

/// L is the smaller diagonal vertex; U is the apex that follows L's outer
/// neighbours clockwise.
fn label_kernel(g: &PennyGraph, a: usize, b: usize, c: usize, d: usize) -> KernelRecord {
    let (l, r) = (a.min(b), a.max(b));
    let cluster = [l, c, r, d];
    match outer_ring(g, &cluster, l) {
        Some((ring, order)) if order.len() == 4 && (order[1] == c || order[1] == d) && order[2] == r => {
            let u = order[1];
            let dd = if u == c { d } else { c };
            KernelRecord {
                l,
                u,
                r,
                d: dd,
                apricot_cycle: ring,
            }
        }
        _ => KernelRecord {
            l,
            u: c.min(d),
            r,
            d: c.max(d),
            apricot_cycle: Vec::new(),
        },
    }
}

/// Ring positions of the four pairs L2/U1, U3/R1, R2/D1, D3/L1.
pub const APRICOT_PAIRS: [(usize, usize); 4] = [(1, 2), (4, 5), (6, 7), (9, 0)];
/// Ring positions of L1, L2, U1, U3, R1, R2, D1, D3.
pub const APRICOT_NON_KERNEL: [usize; 8] = [0, 1, 2, 4, 5, 6, 7, 9];

pub fn find_kernels_and_apricots(g: &PennyGraph) -> (Vec<KernelRecord>, AuditSection) {
    let ctx = Context::new(g);
    let section = kernel_checks(&ctx);
    (ctx.kernels, section)
}

fn kernel_checks(ctx: &Context) -> AuditSection {
    let g = ctx.g;
    let kernels = &ctx.kernels;
    let mut s = AuditSection::new();

    let mut ring_w = Vec::new();
    let mut pair_w = Vec::new();
    for k in kernels {
        let ring = &k.apricot_cycle;
        if !ring_is_cycle(g, ring, 10) {
            ring_w.push(Witness::BrokenApricot {
                kernel: k.vertices(),
                ring: ring.clone(),
            });
            continue;
        }
        for &(i, j) in &APRICOT_PAIRS {
            let (p, q) = (ring[i], ring[j]);
            if let Some(&common) = g.common_neighbors(p, q).first() {
                pair_w.push(Witness::ApricotPairShareNeighbor {
                    kernel: k.vertices(),
                    pair: [p, q],
                    common,
                });
            }
            if g.degree(p) >= 5 && g.degree(q) >= 5 {
                pair_w.push(Witness::ApricotPairBothFive {
                    kernel: k.vertices(),
                    pair: [p, q],
                });
            }
        }
    }
    s.insert("apricot_cycle".into(), CheckResult::from_witnesses(kernels.len(), ring_w));
    s.insert("apricot_pairs".into(), CheckResult::from_witnesses(kernels.len() * 4, pair_w));

    let mut w = Vec::new();
    for i in 0..kernels.len() {
        for j in i + 1..kernels.len() {
            if let Some(&shared) = kernels[i]
                .sorted()
                .iter()
                .find(|&&v| kernels[j].contains(v))
            {
                w.push(Witness::KernelsOverlap {
                    first: kernels[i].vertices(),
                    second: kernels[j].vertices(),
                    shared,
                });
            }
        }
    }
    let pairs = kernels.len() * kernels.len().saturating_sub(1) / 2;
    s.insert("kernel_disjoint".into(), CheckResult::from_witnesses(pairs, w));

    let mut w = Vec::new();
    for (i, k) in kernels.iter().enumerate() {
        if k.apricot_cycle.len() != 10 {
            continue;
        }
        for &pos in &APRICOT_NON_KERNEL {
            let v = k.apricot_cycle[pos];
            for (j, other) in kernels.iter().enumerate() {
                if i != j && other.contains(v) {
                    w.push(Witness::ApricotVertexInKernel {
                        kernel: k.vertices(),
                        vertex: v,
                        other: other.vertices(),
                    });
                }
            }
        }
    }
    s.insert("apricot_kernel_separation".into(), CheckResult::from_witnesses(kernels.len(), w));
    s
}

// ---------------------------------------------------------------------------
// edge types

pub fn classify_edge_type(g: &PennyGraph, a: usize, b: usize) -> Result<EdgeType> {
    classify_with(&Context::new(g), a, b)
}

/// Cyclic adjacency of b's clockwise neighbours: bit i says whether the
/// i-th and (i+1)-th neighbours are adjacent.
fn neighbour_links(g: &PennyGraph, b: usize) -> Vec<bool> {
    let rot = g.rotation(b);
    let d = rot.len();
    (0..d).map(|i| g.has_edge(rot[i], rot[(i + 1) % d])).collect()
}

fn is_type_i(links: &[bool], ia: usize) -> bool {
    let at = |k: usize| links[(ia + k) % 5];
    // A lonely; the other four split into two adjacent pairs
    !at(4) && !at(0) && at(1) && !at(2) && at(3)
}

/// Index of the middle of the adjacent triple when the five neighbours split
/// into a pair and a triple with nobody lonely.
fn triple_middle(links: &[bool]) -> Option<usize> {
    if links.iter().filter(|&&x| x).count() != 3 {
        return None;
    }
    let lonely = (0..5).any(|i| !links[(i + 4) % 5] && !links[i]);
    if lonely {
        return None;
    }
    let mids: Vec<usize> = (0..5).filter(|&i| links[(i + 4) % 5] && links[i]).collect();
    (mids.len() == 1).then(|| mids[0])
}

fn is_type_ii(links: &[bool], ia: usize) -> bool {
    triple_middle(links).is_some_and(|m| ia == (m + 1) % 5 || ia == (m + 4) % 5)
}

fn is_type_iii(links: &[bool], ia: usize) -> bool {
    triple_middle(links) == Some(ia)
}

fn classify_with(ctx: &Context, a: usize, b: usize) -> Result<EdgeType> {
    let g = ctx.g;
    let undefined = |why: &str| Err(Error::ClassificationUndefined(format!("edge ({a}, {b}): {why}")));
    if !g.has_edge(a, b) {
        return undefined("not an edge");
    }
    if g.degree(a) != 4 {
        return undefined("first endpoint does not have degree 4");
    }
    if ctx.in_apricot(a) {
        return undefined("first endpoint belongs to an apricot");
    }
    if !ctx.popular(b) {
        return undefined("second endpoint is not popular");
    }
    let links = neighbour_links(g, b);
    let ia = g.rotation(b).iter().position(|&x| x == a).expect("neighbour in rotation");
    let matches: Vec<EdgeType> = [
        (is_type_i(&links, ia), EdgeType::TypeI),
        (is_type_ii(&links, ia), EdgeType::TypeII),
        (is_type_iii(&links, ia), EdgeType::TypeIII),
    ]
    .into_iter()
    .filter_map(|(hit, t)| hit.then_some(t))
    .collect();
    match matches.as_slice() {
        [t] => Ok(*t),
        [] => undefined("no edge type matches the neighbourhood"),
        _ => undefined("several edge types match"),
    }
}

/// Type III neighbours C3 and C5 of the popular endpoint (both sides of the
/// degree-4 vertex in the triple).
fn type_iii_sides(g: &PennyGraph, a: usize, b: usize) -> [usize; 2] {
    let rot = g.rotation(b);
    let ia = rot.iter().position(|&x| x == a).expect("neighbour");
    [rot[(ia + 4) % 5], rot[(ia + 1) % 5]]
}

// ---------------------------------------------------------------------------
// forbidden patterns

pub fn find_forbidden_patterns(g: &PennyGraph) -> Vec<Occurrence> {
    forbidden_patterns_with(&Context::new(g)).1
}

fn eligible_degree_four(ctx: &Context) -> Vec<usize> {
    (0..ctx.g.n())
        .filter(|&a| ctx.g.degree(a) == 4 && !ctx.in_apricot(a))
        .collect()
}

fn kifli_at(ctx: &Context, a: usize) -> Vec<Witness> {
    let g = ctx.g;
    let rot = g.rotation(a);
    let mut out = Vec::new();
    for i in 0..4 {
        let (b1, b2) = (rot[i], rot[(i + 1) % 4]);
        let t1 = classify_with(ctx, a, b1);
        let t2 = classify_with(ctx, a, b2);
        if t1 == Ok(EdgeType::TypeI)
            && t2 == Ok(EdgeType::TypeI)
            && g.common_neighbors(b1, b2).iter().all(|&w| w == a)
        {
            out.push(Witness::Kifli { a, b1, b2 });
        }
    }
    out
}

fn clover_at(ctx: &Context, a: usize) -> Option<Witness> {
    let g = ctx.g;
    let rot = g.rotation(a);
    if !rot.iter().all(|&b| classify_with(ctx, a, b) == Ok(EdgeType::TypeII)) {
        return None;
    }
    for s in 0..2 {
        let b = [rot[s], rot[(s + 1) % 4], rot[(s + 2) % 4], rot[(s + 3) % 4]];
        if !(g.has_edge(b[0], b[1]) && g.has_edge(b[2], b[3])) {
            continue;
        }
        let only_a = |x: usize, y: usize| g.common_neighbors(x, y).iter().all(|&w| w == a);
        if only_a(b[0], b[3]) && only_a(b[1], b[2]) {
            return Some(Witness::Clover { a, b });
        }
    }
    None
}

fn forbidden_patterns_with(ctx: &Context) -> (AuditSection, Vec<Occurrence>) {
    let g = ctx.g;
    let eligible = eligible_degree_four(ctx);
    let mut kifli = Vec::new();
    let mut clover = Vec::new();
    let mut unclassified = Vec::new();
    let mut edges_checked = 0;
    for &a in &eligible {
        kifli.extend(kifli_at(ctx, a));
        clover.extend(clover_at(ctx, a));
        for &b in g.neighbors(a) {
            if ctx.popular(b) {
                edges_checked += 1;
                if classify_with(ctx, a, b).is_err() {
                    unclassified.push(Witness::UnclassifiedEdge { a, b });
                }
            }
        }
    }
    let occurrences = kifli
        .iter()
        .map(|w| Occurrence {
            pattern: "kifli".into(),
            witness: w.clone(),
        })
        .chain(clover.iter().map(|w| Occurrence {
            pattern: "clover".into(),
            witness: w.clone(),
        }))
        .collect();
    let mut s = AuditSection::new();
    s.insert("no_kifli".into(), CheckResult::from_witnesses(eligible.len(), kifli));
    s.insert("no_clover".into(), CheckResult::from_witnesses(eligible.len(), clover));
    s.insert("edge_type_total".into(), CheckResult::from_witnesses(edges_checked, unclassified));
    (s, occurrences)
}

// ---------------------------------------------------------------------------
// unpopular neighbours of degree-4 vertices

/// Witness prescribed by the apricot role of a degree-4 vertex, indexed by
/// ring position (L1, L2, U1, U2, U3, R1, R2, D1, D2, D3).
const APRICOT_WITNESS: [usize; 10] = [1, 0, 1, 2, 5, 6, 5, 6, 7, 0];

pub fn check_theorem_tn2(g: &PennyGraph) -> (AuditSection, Vec<Tn2Witness>) {
    tn2_with(&Context::new(g))
}

fn valid_tn2_witness(ctx: &Context, w: usize) -> bool {
    classify_popularity(ctx.g, w) == Popularity::Unpopular && !ctx.in_kernel(w)
}

fn tn2_for(ctx: &Context, a: usize) -> Option<Tn2Witness> {
    let g = ctx.g;
    if let Some(&(k, pos)) = ctx.apricot_role.get(&a) {
        let ring = &ctx.kernels[k].apricot_cycle;
        let w = ring[APRICOT_WITNESS[pos]];
        if g.has_edge(a, w) && valid_tn2_witness(ctx, w) {
            return Some(Tn2Witness {
                vertex: a,
                witness: w,
                via: "apricot".into(),
            });
        }
    }
    g.neighbors(a)
        .iter()
        .copied()
        .find(|&w| valid_tn2_witness(ctx, w))
        .map(|w| Tn2Witness {
            vertex: a,
            witness: w,
            via: "search".into(),
        })
}

fn tn2_with(ctx: &Context) -> (AuditSection, Vec<Tn2Witness>) {
    let g = ctx.g;
    let mut found = Vec::new();
    let mut missing = Vec::new();
    let mut checked = 0;
    for a in 0..g.n() {
        if g.degree(a) != 4 {
            continue;
        }
        checked += 1;
        match tn2_for(ctx, a) {
            Some(w) => found.push(w),
            None => missing.push(Witness::NoUnpopularNeighbor { a }),
        }
    }
    let mut t3 = Vec::new();
    let mut t3_checked = 0;
    for a in eligible_degree_four(ctx) {
        for &b in g.neighbors(a) {
            if classify_with(ctx, a, b) == Ok(EdgeType::TypeIII) {
                t3_checked += 1;
                for c in type_iii_sides(g, a, b) {
                    if classify_popularity(g, c) == Popularity::Popular {
                        t3.push(Witness::TypeIIINeighborPopular { a, b, c });
                    }
                }
            }
        }
    }
    let mut s = AuditSection::new();
    s.insert("tn2_witness".into(), CheckResult::from_witnesses(checked, missing));
    s.insert("type_iii_unpopular".into(), CheckResult::from_witnesses(t3_checked, t3));
    (s, found)
}

// ---------------------------------------------------------------------------

impl Witness {
    /// Re-evaluates the predicate that produced this witness.
    pub fn reproduces(&self, g: &PennyGraph) -> bool {
        let pts = g.points();
        match *self {
            Witness::ShortFaceSide { u, v, .. } => {
                pts.is_some_and(|p| &dist_sq(&p[u], &p[v]) != g.d_min_sq())
            }
            Witness::ShortChord { a, c, .. } => {
                pts.is_some_and(|p| &dist_sq(&p[a], &p[c]) < g.d_min_sq())
            }
            Witness::ChordNotEdge { a, c, .. } => {
                pts.is_some_and(|p| &dist_sq(&p[a], &p[c]) == g.d_min_sq()) && !g.has_edge(a, c)
            }
            Witness::AngleSumBelowPi { a, b, c, d } | Witness::RhombusWithoutEdge { a, b, c, d } => {
                pts.is_some_and(|p| angle_sum_violation(g, p, a, b, c, d).as_ref() == Some(self))
            }
            Witness::DegreeAboveFive { v, .. } => g.degree(v) > 5,
            Witness::ThreeTriangles { v, around } => three_triangles_at(g, v) == Some(around),
            Witness::HullContains { path, inside } => {
                pts.is_some_and(|p| hull_contains(g, p, &path, inside))
            }
            Witness::NoCommonNeighbor { u, v } => {
                g.has_edge(u, v) && g.degree(u) == 5 && g.degree(v) == 5 && g.common_neighbors(u, v).is_empty()
            }
            Witness::BrokenMobiusLoop { triangle, .. } => {
                mobius_applies(g, triangle) && mobius_violation(g, triangle).is_some()
            }
            Witness::NotInKernel { v } => {
                let ctx = Context::new(g);
                g.degree(v) == 5 && !ctx.in_kernel(v)
            }
            Witness::BrokenApricot { kernel, .. } => {
                let ctx = Context::new(g);
                ctx.kernels
                    .iter()
                    .any(|k| k.vertices() == kernel && !ring_is_cycle(g, &k.apricot_cycle, 10))
            }
            Witness::ApricotPairShareNeighbor { pair, common, .. } => {
                g.has_edge(pair[0], common) && g.has_edge(pair[1], common)
            }
            Witness::ApricotPairBothFive { pair, .. } => g.degree(pair[0]) >= 5 && g.degree(pair[1]) >= 5,
            Witness::KernelsOverlap { first, second, shared } => {
                let ctx = Context::new(g);
                let has = |q: [usize; 4]| ctx.kernels.iter().any(|k| k.vertices() == q);
                has(first) && has(second) && first.contains(&shared) && second.contains(&shared)
            }
            Witness::ApricotVertexInKernel { vertex, other, .. } => {
                let ctx = Context::new(g);
                ctx.kernels.iter().any(|k| k.vertices() == other && k.contains(vertex))
            }
            Witness::UnclassifiedEdge { a, b } => classify_edge_type(g, a, b).is_err(),
            Witness::Kifli { a, .. } => {
                let ctx = Context::new(g);
                kifli_at(&ctx, a).contains(self)
            }
            Witness::Clover { a, .. } => {
                let ctx = Context::new(g);
                clover_at(&ctx, a).as_ref() == Some(self)
            }
            Witness::NoUnpopularNeighbor { a } => {
                let ctx = Context::new(g);
                g.degree(a) == 4 && tn2_for(&ctx, a).is_none()
            }
            Witness::TypeIIINeighborPopular { a, b, c } => {
                classify_edge_type(g, a, b) == Ok(EdgeType::TypeIII)
                    && type_iii_sides(g, a, b).contains(&c)
                    && classify_popularity(g, c) == Popularity::Popular
            }
        }
    }
}
