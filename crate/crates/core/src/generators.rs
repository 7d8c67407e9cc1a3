//! Instance generators. Every generator is a pure function of its spec.
//!
//! `random` and `densified` instances grow point sets by exact unit steps in
//! Q[√3] (equilateral apexes, rhombus completions and rational unit vectors),
//! so the minimum distance is exactly 1 and edges survive. Every accepted
//! point keeps all distances ≥ 1 and creates no collinear triple.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{dist_sq, dist_sq_float, orientation, Approx, Point};
use crate::graph::{build_penny_graph, check_general_position};
use crate::scalar::Scalar;

pub use crate::fixtures::{load_fixture, Fixture, FIXTURE_NAMES};

pub const PERTURB_RETRY_CAP: usize = 20;
/// Perturbations are multiples of magnitude / PERTURB_STEPS.
pub const PERTURB_STEPS: i64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceKind {
    HexLattice,
    Perturbed,
    Random,
    Uniform,
    Fixture,
    Densified,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub kind: InstanceKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Rational written as "p/q".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub magnitude: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default)]
    pub note: String,
}

impl InstanceSpec {
    fn bare(kind: InstanceKind, note: &str) -> Self {
        InstanceSpec {
            kind,
            k: None,
            n: None,
            seed: None,
            magnitude: None,
            iterations: None,
            name: None,
            note: note.to_string(),
        }
    }

    pub fn hex(k: usize) -> Self {
        InstanceSpec {
            k: Some(k),
            ..Self::bare(InstanceKind::HexLattice, "hexagonal piece of the triangular lattice")
        }
    }

    pub fn perturbed(k: usize, magnitude: &BigRational, seed: u64) -> Self {
        InstanceSpec {
            k: Some(k),
            magnitude: Some(magnitude.to_string()),
            seed: Some(seed),
            ..Self::bare(InstanceKind::Perturbed, "lattice piece with rational perturbations")
        }
    }

    pub fn random(n: usize, seed: u64) -> Self {
        InstanceSpec {
            n: Some(n),
            seed: Some(seed),
            ..Self::bare(InstanceKind::Random, "exact unit-step growth")
        }
    }

    pub fn uniform(n: usize, seed: u64) -> Self {
        InstanceSpec {
            n: Some(n),
            seed: Some(seed),
            ..Self::bare(InstanceKind::Uniform, "uniform rational points in a square")
        }
    }

    pub fn densified(n: usize, iterations: usize, seed: u64) -> Self {
        InstanceSpec {
            n: Some(n),
            iterations: Some(iterations),
            seed: Some(seed),
            ..Self::bare(InstanceKind::Densified, "simulated annealing over unit-step moves")
        }
    }

    pub fn fixture(name: &str) -> Self {
        InstanceSpec {
            name: Some(name.to_string()),
            ..Self::bare(InstanceKind::Fixture, "declared-mode configuration")
        }
    }
}

fn need<T: Copy>(v: Option<T>, field: &str) -> Result<T> {
    v.ok_or_else(|| Error::InvalidInput(format!("instance spec is missing `{field}`")))
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidInput(format!("not a rational: {s:?}"));
    let (p, q) = s.split_once('/').unwrap_or((s, "1"));
    let p: BigInt = p.trim().parse().map_err(|_| bad())?;
    let q: BigInt = q.trim().parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

/// Regenerates the exact-mode points of a spec.
pub fn generate(spec: &InstanceSpec) -> Result<Vec<Point>> {
    match spec.kind {
        InstanceKind::HexLattice => Ok(gen_hex_lattice(need(spec.k, "k")?)),
        InstanceKind::Perturbed => {
            let m = parse_rational(spec.magnitude.as_deref().ok_or_else(|| {
                Error::InvalidInput("instance spec is missing `magnitude`".into())
            })?)?;
            gen_perturbed(need(spec.k, "k")?, &m, need(spec.seed, "seed")?)
        }
        InstanceKind::Random => gen_random(need(spec.n, "n")?, need(spec.seed, "seed")?),
        InstanceKind::Uniform => gen_uniform(need(spec.n, "n")?, need(spec.seed, "seed")?),
        InstanceKind::Densified => densify_search(
            need(spec.n, "n")?,
            need(spec.iterations, "iterations")?,
            need(spec.seed, "seed")?,
        )
        .map(|r| r.points),
        InstanceKind::Fixture => Err(Error::InvalidInput(
            "fixtures are declared-mode instances; use load_fixture".into(),
        )),
    }
}

/// Lattice point i·(1, 0) + j·(1/2, √3/2).
pub fn lattice_point(i: i64, j: i64) -> Point {
    Point::new(Scalar::from_parts(2 * i + j, 2, 0, 1), Scalar::from_parts(0, 1, j, 2))
}

/// Centred hexagon with k rings: 3k² + 3k + 1 points.
pub fn gen_hex_lattice(k: usize) -> Vec<Point> {
    let k = k as i64;
    let mut out = Vec::new();
    for j in -k..=k {
        for i in -k..=k {
            if (i + j).abs() <= k {
                out.push(lattice_point(i, j));
            }
        }
    }
    out
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Lattice piece with every coordinate moved by a rational in
/// [−magnitude, magnitude]. Resampled until general position holds.
pub fn gen_perturbed(k: usize, magnitude: &BigRational, seed: u64) -> Result<Vec<Point>> {
    if !magnitude.is_positive() || magnitude >= &rational(1, 100) {
        return Err(Error::OutOfDomain(format!(
            "perturbation magnitude must lie in (0, 1/100), got {magnitude}"
        )));
    }
    let base = gen_hex_lattice(k);
    let mut rng = rng_for(seed);
    let step = magnitude / BigRational::from_integer(PERTURB_STEPS.into());
    for _ in 0..PERTURB_RETRY_CAP {
        let mut jitter = || {
            let r: i64 = rng.gen_range(-PERTURB_STEPS..=PERTURB_STEPS);
            Scalar::from_rational(&step * BigRational::from_integer(r.into()))
        };
        let pts: Vec<Point> = base
            .iter()
            .map(|p| Point::new(&p.x + &jitter(), &p.y + &jitter()))
            .collect();
        if check_general_position(&pts).holds() && distinct(&pts) {
            return Ok(pts);
        }
    }
    Err(Error::RetryCapExceeded(PERTURB_RETRY_CAP))
}

fn distinct(pts: &[Point]) -> bool {
    let mut seen = std::collections::HashSet::new();
    pts.iter().all(|p| seen.insert((p.x.clone(), p.y.clone())))
}

/// n points with coordinates in multiples of 1/1000 inside a square of side
/// about 2√n, in general position.
pub fn gen_uniform(n: usize, seed: u64) -> Result<Vec<Point>> {
    if n < 2 {
        return Err(Error::Degenerate("need at least two points".into()));
    }
    let side = (2.0 * (n as f64).sqrt()).ceil() as i64 + 1;
    let mut rng = rng_for(seed);
    for _ in 0..PERTURB_RETRY_CAP {
        let pts: Vec<Point> = (0..n)
            .map(|_| {
                let x = rng.gen_range(0..=side * 1000);
                let y = rng.gen_range(0..=side * 1000);
                Point::new(Scalar::from_parts(x, 1000, 0, 1), Scalar::from_parts(y, 1000, 0, 1))
            })
            .collect();
        if distinct(&pts) && check_general_position(&pts).holds() {
            return Ok(pts);
        }
    }
    Err(Error::RetryCapExceeded(PERTURB_RETRY_CAP))
}

// ---------------------------------------------------------------------------
// unit-step growth

/// cos and sin of k·30°.
fn rot30(k: usize) -> (Scalar, Scalar) {
    let table = [
        (Scalar::from_int(1), Scalar::zero()),
        (Scalar::from_parts(0, 1, 1, 2), Scalar::from_parts(1, 2, 0, 1)),
        (Scalar::from_parts(1, 2, 0, 1), Scalar::from_parts(0, 1, 1, 2)),
    ];
    let (c, s) = table[k % 3].clone();
    // rotate the base quadrant by (k / 3)·90°
    match (k / 3) % 4 {
        0 => (c, s),
        1 => (-s, c),
        2 => (-c, -s),
        _ => (s, -c),
    }
}

fn rotate(v: &Point, c: &Scalar, s: &Scalar) -> Point {
    Point::new(&(c * &v.x) - &(s * &v.y), &(s * &v.x) + &(c * &v.y))
}

/// Rational unit vectors from small Pythagorean triples.
const PYTHAGOREAN: [(i64, i64, i64); 6] = [(1, 0, 1), (3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25), (20, 21, 29)];

/// Point set under construction, with alive flags so that annealing can
/// remove and restore points without reindexing.
#[derive(Clone)]
pub struct Grower {
    pts: Vec<Point>,
    approx: Vec<Approx>,
    alive: Vec<bool>,
    nbrs: Vec<Vec<usize>>,
    grid: HashMap<(i64, i64), Vec<usize>>,
    edges: usize,
    count: usize,
}

fn cell(a: &Approx) -> (i64, i64) {
    (a.x.floor() as i64, a.y.floor() as i64)
}

impl Default for Grower {
    fn default() -> Self {
        Self::new()
    }
}

impl Grower {
    pub fn new() -> Self {
        Grower {
            pts: Vec::new(),
            approx: Vec::new(),
            alive: Vec::new(),
            nbrs: Vec::new(),
            grid: HashMap::new(),
            edges: 0,
            count: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn edges(&self) -> usize {
        self.edges
    }

    pub fn alive(&self) -> Vec<usize> {
        (0..self.pts.len()).filter(|&i| self.alive[i]).collect()
    }

    pub fn points(&self) -> Vec<Point> {
        self.alive().into_iter().map(|i| self.pts[i].clone()).collect()
    }

    /// Unit neighbours of `p` if every alive point is at distance ≥ 1,
    /// `None` otherwise.
    fn unit_neighbours(&self, p: &Point, a: &Approx) -> Option<Vec<usize>> {
        let one = Scalar::one();
        let (cx, cy) = cell(a);
        let mut out = Vec::new();
        for dx in -1..=1 {
            for dy in -1..=1 {
                let Some(bucket) = self.grid.get(&(cx + dx, cy + dy)) else {
                    continue;
                };
                for &w in bucket {
                    let (lo, hi) = dist_sq_float(a, &self.approx[w]);
                    if lo > 1.0 {
                        continue;
                    }
                    if hi < 1.0 {
                        return None;
                    }
                    match dist_sq(p, &self.pts[w]).cmp(&one) {
                        std::cmp::Ordering::Less => return None,
                        std::cmp::Ordering::Equal => out.push(w),
                        std::cmp::Ordering::Greater => {}
                    }
                }
            }
        }
        Some(out)
    }

    /// Whether `p` is collinear with two alive points: directions from `p`
    /// are sorted modulo π and near-parallel neighbours are decided exactly.
    fn makes_collinear(&self, p: &Point, a: &Approx) -> bool {
        let pi = std::f64::consts::PI;
        let mut dirs: Vec<(f64, usize)> = self
            .alive()
            .into_iter()
            .map(|w| {
                let b = &self.approx[w];
                ((b.y - a.y).atan2(b.x - a.x).rem_euclid(pi), w)
            })
            .collect();
        if dirs.len() < 2 {
            return false;
        }
        dirs.sort_by(|x, y| x.0.total_cmp(&y.0));
        const NEAR: f64 = 1e-9;
        let m = dirs.len();
        // a run of near-equal angles may straddle 0 ≡ π
        for i in 0..m {
            let (t, w) = dirs[i];
            let mut j = (i + 1) % m;
            while j != i {
                let (u, x) = dirs[j];
                let gap = if j > i { u - t } else { u + pi - t };
                if gap > NEAR {
                    break;
                }
                if orientation(p, &self.pts[w], &self.pts[x]) == 0 {
                    return true;
                }
                j = (j + 1) % m;
            }
        }
        false
    }

    /// Number of unit edges `p` would add, or `None` if it cannot be inserted.
    pub fn score(&self, p: &Point) -> Option<usize> {
        let a = p.approx();
        let units = self.unit_neighbours(p, &a)?;
        (!self.makes_collinear(p, &a)).then_some(units.len())
    }

    /// Inserts `p` if it keeps distances ≥ 1 and general position.
    pub fn insert(&mut self, p: Point) -> Option<usize> {
        let a = p.approx();
        let units = self.unit_neighbours(&p, &a)?;
        if self.makes_collinear(&p, &a) {
            return None;
        }
        let v = self.pts.len();
        self.grid.entry(cell(&a)).or_default().push(v);
        self.pts.push(p);
        self.approx.push(a);
        self.alive.push(true);
        for &w in &units {
            self.nbrs[w].push(v);
        }
        self.edges += units.len();
        self.nbrs.push(units);
        self.count += 1;
        Some(v)
    }

    pub fn remove(&mut self, v: usize) -> Point {
        assert!(self.alive[v]);
        self.alive[v] = false;
        self.count -= 1;
        if let Some(b) = self.grid.get_mut(&cell(&self.approx[v])) {
            b.retain(|&w| w != v);
        }
        let nb = std::mem::take(&mut self.nbrs[v]);
        self.edges -= nb.len();
        for w in nb {
            self.nbrs[w].retain(|&x| x != v);
        }
        self.pts[v].clone()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.nbrs[v].len()
    }

    /// A candidate unit-step point next to a random alive vertex.
    pub fn propose(&self, rng: &mut ChaCha8Rng) -> Option<Point> {
        let alive = self.alive();
        let &p = alive.choose(rng)?;
        let nb = &self.nbrs[p];
        let base = &self.pts[p];
        let roll: f64 = rng.gen();
        if roll < 0.45 && !nb.is_empty() {
            let q = &self.pts[*nb.choose(rng)?];
            let (c, s) = rot30(if rng.gen() { 2 } else { 10 });
            return Some(base.add(&rotate(&q.sub(base), &c, &s)));
        }
        if roll < 0.8 && nb.len() >= 2 {
            let pair: Vec<&usize> = nb.choose_multiple(rng, 2).collect();
            return Some(self.pts[*pair[0]].add(&self.pts[*pair[1]]).sub(base));
        }
        let (a, b, c) = *PYTHAGOREAN.choose(rng)?;
        let u = Point::new(Scalar::from_parts(a, c, 0, 1), Scalar::from_parts(b, c, 0, 1));
        let (cs, sn) = rot30(rng.gen_range(0..12));
        Some(base.add(&rotate(&u, &cs, &sn)))
    }

    fn seeded() -> Self {
        let mut g = Grower::new();
        g.insert(Point::new(Scalar::zero(), Scalar::zero()));
        g.insert(Point::new(Scalar::one(), Scalar::zero()));
        g
    }
}

/// Grows n points by exact unit steps.
pub fn gen_random(n: usize, seed: u64) -> Result<Vec<Point>> {
    Ok(grow(n, seed)?.points())
}

fn grow(n: usize, seed: u64) -> Result<Grower> {
    if n < 2 {
        return Err(Error::Degenerate("need at least two points".into()));
    }
    let mut rng = rng_for(seed);
    let mut g = Grower::seeded();
    let cap = 400 * n;
    let mut tries = 0;
    while g.len() < n {
        tries += 1;
        if tries > cap {
            return Err(Error::RetryCapExceeded(cap));
        }
        if let Some(p) = g.propose(&mut rng) {
            g.insert(p);
        }
    }
    Ok(g)
}

// ---------------------------------------------------------------------------
// annealing

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TracePoint {
    pub iteration: usize,
    pub edges: usize,
    pub best_edges: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DensifyResult {
    #[serde(skip)]
    pub points: Vec<Point>,
    pub n: usize,
    pub edges: usize,
    /// e/n in lowest terms.
    pub density: (i64, i64),
    pub density_f64: f64,
    /// 37n/16: edge count of the best known construction, up to lower-order terms.
    pub reference_37_16: f64,
    pub upper_43_18: f64,
    pub bound_holds: bool,
    pub trace: Vec<TracePoint>,
}

pub const ANNEAL_T0: f64 = 0.8;
pub const ANNEAL_T1: f64 = 0.02;
/// Victim selection: lowest degree among this many random alive vertices.
pub const ANNEAL_TOURNAMENT: usize = 3;
const PROPOSALS_PER_STEP: usize = 24;

/// Simulated annealing over point sets of fixed size. A step removes a
/// low-degree vertex and re-inserts a unit-step point elsewhere; the move
/// is accepted with probability min(1, exp(Δe / T)), T decaying
/// geometrically from `ANNEAL_T0` to `ANNEAL_T1`.
pub fn densify_search(n: usize, iterations: usize, seed: u64) -> Result<DensifyResult> {
    if n < 3 {
        return Err(Error::OutOfDomain(format!("densify needs n ≥ 3, got {n}")));
    }
    let mut g = grow(n, seed)?;
    let mut rng = rng_for(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut best = g.points();
    let mut best_edges = g.edges();
    let mut trace = vec![TracePoint {
        iteration: 0,
        edges: g.edges(),
        best_edges,
    }];
    let every = (iterations / 50).max(1);
    for it in 1..=iterations {
        let t = ANNEAL_T0 * (ANNEAL_T1 / ANNEAL_T0).powf(it as f64 / iterations.max(1) as f64);
        let alive = g.alive();
        let victim = (0..ANNEAL_TOURNAMENT)
            .filter_map(|_| alive.choose(&mut rng).copied())
            .min_by_key(|&v| g.degree(v))
            .expect("non-empty");
        let before = g.edges();
        let old = g.remove(victim);
        // best of several proposals
        let mut pick: Option<(usize, Point)> = None;
        for _ in 0..PROPOSALS_PER_STEP {
            let Some(p) = g.propose(&mut rng) else { continue };
            if let Some(s) = g.score(&p) {
                if pick.as_ref().is_none_or(|(b, _)| s > *b) {
                    pick = Some((s, p));
                }
            }
        }
        let placed = pick.and_then(|(_, p)| g.insert(p));
        let accept = match placed {
            None => false,
            Some(_) => {
                let delta = g.edges() as f64 - before as f64;
                delta >= 0.0 || rng.gen::<f64>() < (delta / t).exp()
            }
        };
        if !accept {
            if let Some(v) = placed {
                g.remove(v);
            }
            g.insert(old).expect("restoring a removed point keeps the invariants");
        }
        if g.edges() > best_edges {
            best_edges = g.edges();
            best = g.points();
        }
        if it % every == 0 || it == iterations {
            trace.push(TracePoint {
                iteration: it,
                edges: g.edges(),
                best_edges,
            });
        }
    }
    let graph = build_penny_graph(best.clone())?;
    let e = graph.e();
    debug_assert_eq!(e, best_edges);
    let density = BigRational::new((e as i64).into(), (n as i64).into());
    let bound_holds = density <= rational(43, 18);
    assert!(bound_holds, "density {density} exceeds 43/18");
    Ok(DensifyResult {
        points: best,
        n,
        edges: e,
        density: (to_i64(density.numer()), to_i64(density.denom())),
        density_f64: e as f64 / n as f64,
        reference_37_16: 37.0 * n as f64 / 16.0,
        upper_43_18: 43.0 * n as f64 / 18.0,
        bound_holds,
        trace,
    })
}

fn to_i64(x: &BigInt) -> i64 {
    i64::try_from(x).expect("small integer")
}
