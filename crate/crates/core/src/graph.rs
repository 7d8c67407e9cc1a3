//! Penny graphs: minimum-distance graphs of planar point sets, together with
//! their plane embedding (clockwise rotation system and face walks).

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    clockwise_key, cmp_clockwise, dist_sq, dist_sq_float, orientation_filtered, segments_cross,
    segments_cross_float, signed_area2, Approx, Point,
};
use crate::scalar::Scalar;

/// Above this many points construction switches from filtered all-pairs
/// comparison to grid bucketing.
pub const ALL_PAIRS_LIMIT: usize = 2000;

/// Tolerance for float geometry in declared mode.
pub const DECLARED_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Coordinates in Q[√3]; edges derived from exact distances.
    Exact,
    /// Approximate coordinates with an asserted edge list.
    Declared,
}

/// A directed boundary walk of one face.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub walk: Vec<usize>,
    pub outer: bool,
    pub component: usize,
}

impl Face {
    pub fn len(&self) -> usize {
        self.walk.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walk.is_empty()
    }

    pub fn is_triangle(&self) -> bool {
        !self.outer && self.walk.len() == 3
    }

    pub fn is_quadrilateral(&self) -> bool {
        !self.outer && self.walk.len() == 4
    }
}

#[derive(Clone, Debug)]
pub struct PennyGraph {
    mode: Mode,
    points: Option<Vec<Point>>,
    approx: Vec<Approx>,
    d_min_sq: Scalar,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    rotation: Vec<Vec<usize>>,
    faces: Vec<Face>,
    dart_face: HashMap<(usize, usize), usize>,
    component: Vec<usize>,
    n_components: usize,
}

/// Collinear triples of a point set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralPositionReport {
    pub collinear_triples: Vec<[usize; 3]>,
}

impl GeneralPositionReport {
    pub fn holds(&self) -> bool {
        self.collinear_triples.is_empty()
    }
}

/// Per-face summary returned by [`enumerate_faces`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceSummary {
    pub index: usize,
    pub vertex_count: usize,
    pub triangle: bool,
    pub quadrilateral: bool,
    pub outer: bool,
}

pub fn build_penny_graph(points: Vec<Point>) -> Result<PennyGraph> {
    if points.len() < 2 {
        return Err(Error::Degenerate(format!(
            "need at least 2 points, got {}",
            points.len()
        )));
    }
    let approx: Vec<Approx> = points.iter().map(Point::approx).collect();
    let (d_min_sq, edges) = if points.len() <= ALL_PAIRS_LIMIT {
        min_distance_edges_filtered(&points, &approx)?
    } else {
        min_distance_edges_grid(&points, &approx)?
    };
    PennyGraph::assemble(Mode::Exact, Some(points), approx, d_min_sq, edges)
}

/// Exact all-pairs construction without any float filtering. Used as the
/// reference the accelerated paths are tested against.
pub fn min_distance_edges_bruteforce(points: &[Point]) -> Result<(Scalar, Vec<(usize, usize)>)> {
    let mut best: Option<Scalar> = None;
    let mut edges = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d = dist_sq(&points[i], &points[j]);
            if d.is_zero() {
                return Err(Error::CoincidentPoints(i, j));
            }
            match best.as_ref().map(|b| d.cmp(b)) {
                None | Some(std::cmp::Ordering::Less) => {
                    best = Some(d);
                    edges.clear();
                    edges.push((i, j));
                }
                Some(std::cmp::Ordering::Equal) => edges.push((i, j)),
                Some(std::cmp::Ordering::Greater) => {}
            }
        }
    }
    let best = best.ok_or_else(|| Error::Degenerate("need at least 2 points".into()))?;
    Ok((best, edges))
}

/// All pairs are screened in floating point with rigorous error bounds;
/// only pairs that could attain the minimum are compared exactly.
pub fn min_distance_edges_filtered(
    points: &[Point],
    approx: &[Approx],
) -> Result<(Scalar, Vec<(usize, usize)>)> {
    let n = points.len();
    let mut bounds = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
    let mut min_hi = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            let (lo, hi) = dist_sq_float(&approx[i], &approx[j]);
            min_hi = min_hi.min(hi);
            bounds.push((lo, i, j));
        }
    }
    let candidates: Vec<(usize, usize)> = bounds
        .into_iter()
        .filter(|&(lo, _, _)| lo <= min_hi)
        .map(|(_, i, j)| (i, j))
        .collect();
    exact_min_among(points, &candidates)
}

/// Grid-bucketed construction: a float closest-pair sweep gives an upper
/// bound on the minimum distance, which sets the cell width; every pair in
/// neighbouring cells is screened and confirmed exactly.
pub fn min_distance_edges_grid(
    points: &[Point],
    approx: &[Approx],
) -> Result<(Scalar, Vec<(usize, usize)>)> {
    let n = points.len();
    if n < 2 {
        return Err(Error::Degenerate("need at least 2 points".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| approx[a].x.total_cmp(&approx[b].x));
    let mut best_hi = f64::INFINITY;
    for (k, &i) in order.iter().enumerate() {
        for &j in &order[k + 1..] {
            let dx = approx[j].x - approx[i].x;
            if dx * dx > best_hi * (1.0 + 1e-9) + 1e-300 {
                break;
            }
            best_hi = best_hi.min(dist_sq_float(&approx[i], &approx[j]).1);
        }
    }
    let width = best_hi.sqrt() * (1.0 + 1e-6) + 1e-12;
    let cell = |a: &Approx| ((a.x / width).floor() as i64, (a.y / width).floor() as i64);
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, a) in approx.iter().enumerate() {
        grid.entry(cell(a)).or_default().push(i);
    }
    let mut candidates = Vec::new();
    for (i, a) in approx.iter().enumerate() {
        let (cx, cy) = cell(a);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(bucket) = grid.get(&(cx + dx, cy + dy)) {
                    for &j in bucket {
                        if j > i && dist_sq_float(a, &approx[j]).0 <= best_hi {
                            candidates.push((i, j));
                        }
                    }
                }
            }
        }
    }
    candidates.sort_unstable();
    exact_min_among(points, &candidates)
}

fn exact_min_among(points: &[Point], candidates: &[(usize, usize)]) -> Result<(Scalar, Vec<(usize, usize)>)> {
    let mut best: Option<Scalar> = None;
    let mut edges = Vec::new();
    for &(i, j) in candidates {
        let d = dist_sq(&points[i], &points[j]);
        if d.is_zero() {
            return Err(Error::CoincidentPoints(i, j));
        }
        match best.as_ref().map(|b| d.cmp(b)) {
            None | Some(std::cmp::Ordering::Less) => {
                best = Some(d);
                edges.clear();
                edges.push((i, j));
            }
            Some(std::cmp::Ordering::Equal) => edges.push((i, j)),
            Some(std::cmp::Ordering::Greater) => {}
        }
    }
    let best = best.ok_or_else(|| Error::Degenerate("no candidate pairs".into()))?;
    edges.sort_unstable();
    Ok((best, edges))
}

/// Every collinear triple, decided exactly (float-filtered).
pub fn check_general_position(points: &[Point]) -> GeneralPositionReport {
    let approx: Vec<Approx> = points.iter().map(Point::approx).collect();
    let mut triples = Vec::new();
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let o = orientation_filtered(
                    (&points[i], &approx[i]),
                    (&points[j], &approx[j]),
                    (&points[k], &approx[k]),
                );
                if o == 0 {
                    triples.push([i, j, k]);
                }
            }
        }
    }
    GeneralPositionReport {
        collinear_triples: triples,
    }
}

pub fn enumerate_faces(g: &PennyGraph) -> Vec<FaceSummary> {
    g.faces
        .iter()
        .enumerate()
        .map(|(index, f)| FaceSummary {
            index,
            vertex_count: f.len(),
            triangle: f.is_triangle(),
            quadrilateral: f.is_quadrilateral(),
            outer: f.outer,
        })
        .collect()
}

impl PennyGraph {
    /// Declared-mode graph: the edge list is taken as the set of unit pairs,
    /// coordinates only fix the embedding. The drawing must be plane.
    pub fn declared(coords: Vec<[f64; 2]>, edges: Vec<(usize, usize)>) -> Result<PennyGraph> {
        let n = coords.len();
        if n == 0 {
            return Err(Error::Degenerate("no points".into()));
        }
        let mut seen = HashSet::new();
        let mut norm = Vec::with_capacity(edges.len());
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(Error::InvalidInput(format!("edge ({u}, {v}) out of range")));
            }
            if u == v {
                return Err(Error::InvalidInput(format!("self loop at {u}")));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(Error::InvalidInput(format!("duplicate edge {e:?}")));
            }
            norm.push(e);
        }
        for i in 0..n {
            for j in i + 1..n {
                if coords[i] == coords[j] {
                    return Err(Error::CoincidentPoints(i, j));
                }
            }
        }
        norm.sort_unstable();
        for a in 0..norm.len() {
            for b in a + 1..norm.len() {
                let (p, q) = norm[a];
                let (r, s) = norm[b];
                if segments_cross_float(coords[p], coords[q], coords[r], coords[s], DECLARED_TOL) {
                    return Err(Error::NotPlane(norm[a], norm[b]));
                }
            }
        }
        let approx = coords
            .iter()
            .map(|c| Approx {
                x: c[0],
                y: c[1],
                err: 0.0,
            })
            .collect();
        PennyGraph::assemble(Mode::Declared, None, approx, Scalar::one(), norm)
    }

    fn assemble(
        mode: Mode,
        points: Option<Vec<Point>>,
        approx: Vec<Approx>,
        d_min_sq: Scalar,
        edges: Vec<(usize, usize)>,
    ) -> Result<PennyGraph> {
        let n = approx.len();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut rotation = adj.clone();
        for l in adj.iter_mut() {
            l.sort_unstable();
        }
        for (v, rot) in rotation.iter_mut().enumerate() {
            match &points {
                Some(pts) => rot.sort_by(|&a, &b| {
                    cmp_clockwise(&pts[a].sub(&pts[v]), &pts[b].sub(&pts[v]))
                }),
                None => {
                    let key = |w: usize| clockwise_key(approx[w].x - approx[v].x, approx[w].y - approx[v].y);
                    rot.sort_by(|&a, &b| key(a).total_cmp(&key(b)))
                }
            }
        }
        let (component, n_components) = components(&adj);
        let mut g = PennyGraph {
            mode,
            points,
            approx,
            d_min_sq,
            edges,
            adj,
            rotation,
            faces: Vec::new(),
            dart_face: HashMap::new(),
            component,
            n_components,
        };
        g.trace_faces();
        Ok(g)
    }

    /// Standard face tracing on the clockwise rotation system: after the dart
    /// u→v the walk continues along v→w, w the clockwise successor of u at v.
    /// Bounded faces come out counterclockwise; the outer face of each
    /// component is the one with the smallest signed area.
    fn trace_faces(&mut self) {
        let mut faces: Vec<Face> = Vec::new();
        let mut dart_face = HashMap::new();
        for &(a, b) in &self.edges {
            for (u0, v0) in [(a, b), (b, a)] {
                if dart_face.contains_key(&(u0, v0)) {
                    continue;
                }
                let id = faces.len();
                let mut walk = Vec::new();
                let (mut u, mut v) = (u0, v0);
                loop {
                    dart_face.insert((u, v), id);
                    walk.push(u);
                    let w = self.rotation_successor(v, u);
                    u = v;
                    v = w;
                    if (u, v) == (u0, v0) {
                        break;
                    }
                }
                faces.push(Face {
                    component: self.component[u0],
                    walk,
                    outer: false,
                });
            }
        }
        // outer face per component
        let mut outer: HashMap<usize, (usize, AreaKey)> = HashMap::new();
        for (id, f) in faces.iter().enumerate() {
            let area = self.area_key(&f.walk);
            match outer.get(&f.component) {
                Some((_, best)) if !area.less_than(best) => {}
                _ => {
                    outer.insert(f.component, (id, area));
                }
            }
        }
        for (id, _) in outer.values() {
            faces[*id].outer = true;
        }
        self.faces = faces;
        self.dart_face = dart_face;
    }

    fn area_key(&self, walk: &[usize]) -> AreaKey {
        match &self.points {
            Some(pts) => {
                let poly: Vec<&Point> = walk.iter().map(|&i| &pts[i]).collect();
                AreaKey::Exact(signed_area2(&poly))
            }
            None => {
                let mut acc = 0.0;
                for i in 0..walk.len() {
                    let p = self.approx[walk[i]];
                    let q = self.approx[walk[(i + 1) % walk.len()]];
                    acc += p.x * q.y - q.x * p.y;
                }
                AreaKey::Float(acc)
            }
        }
    }

    /// Neighbour following `u` clockwise around `v`.
    pub fn rotation_successor(&self, v: usize, u: usize) -> usize {
        let rot = &self.rotation[v];
        let i = rot.iter().position(|&x| x == u).expect("dart endpoint in rotation");
        rot[(i + 1) % rot.len()]
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn n(&self) -> usize {
        self.approx.len()
    }

    pub fn e(&self) -> usize {
        self.edges.len()
    }

    pub fn points(&self) -> Option<&[Point]> {
        self.points.as_deref()
    }

    pub fn approx(&self) -> &[Approx] {
        &self.approx
    }

    pub fn coords(&self, v: usize) -> [f64; 2] {
        [self.approx[v].x, self.approx[v].y]
    }

    pub fn d_min_sq(&self) -> &Scalar {
        &self.d_min_sq
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Neighbours in increasing index order.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// Neighbours in clockwise order.
    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn common_neighbors(&self, u: usize, v: usize) -> Vec<usize> {
        self.adj[u]
            .iter()
            .copied()
            .filter(|&w| self.has_edge(v, w))
            .collect()
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    /// Face containing the dart u→v.
    pub fn dart_face(&self, u: usize, v: usize) -> Option<usize> {
        self.dart_face.get(&(u, v)).copied()
    }

    pub fn component_of(&self, v: usize) -> usize {
        self.component[v]
    }

    pub fn n_components(&self) -> usize {
        self.n_components
    }

    /// Euler's formula v − e + f = 2 for every connected component, counting
    /// each component's own outer face.
    pub fn euler_holds(&self) -> bool {
        let mut v = vec![0i64; self.n_components];
        let mut e = vec![0i64; self.n_components];
        let mut f = vec![0i64; self.n_components];
        for c in &self.component {
            v[*c] += 1;
        }
        for &(a, _) in &self.edges {
            e[self.component[a]] += 1;
        }
        for face in &self.faces {
            f[face.component] += 1;
        }
        (0..self.n_components).all(|c| {
            // an isolated vertex has no darts; its single face is implicit
            let faces = if e[c] == 0 { 1 } else { f[c] };
            v[c] - e[c] + faces == 2
        })
    }

    /// First pair of edges whose segments cross, if any.
    pub fn find_crossing(&self) -> Option<((usize, usize), (usize, usize))> {
        for a in 0..self.edges.len() {
            for b in a + 1..self.edges.len() {
                let (p, q) = self.edges[a];
                let (r, s) = self.edges[b];
                let crosses = match &self.points {
                    Some(pts) => {
                        // cheap rejection on float bounding boxes first
                        let (ap, aq, ar, as_) = (self.approx[p], self.approx[q], self.approx[r], self.approx[s]);
                        let slack = 1e-6;
                        if ap.x.max(aq.x) + slack < ar.x.min(as_.x)
                            || ar.x.max(as_.x) + slack < ap.x.min(aq.x)
                            || ap.y.max(aq.y) + slack < ar.y.min(as_.y)
                            || ar.y.max(as_.y) + slack < ap.y.min(aq.y)
                        {
                            false
                        } else {
                            segments_cross(&pts[p], &pts[q], &pts[r], &pts[s])
                        }
                    }
                    None => segments_cross_float(
                        self.coords(p),
                        self.coords(q),
                        self.coords(r),
                        self.coords(s),
                        DECLARED_TOL,
                    ),
                };
                if crosses {
                    return Some((self.edges[a], self.edges[b]));
                }
            }
        }
        None
    }

    /// General position of the underlying points; declared graphs are
    /// checked in floating point with [`DECLARED_TOL`].
    pub fn general_position(&self) -> GeneralPositionReport {
        match &self.points {
            Some(pts) => check_general_position(pts),
            None => {
                let mut triples = Vec::new();
                let n = self.n();
                for i in 0..n {
                    for j in i + 1..n {
                        for k in j + 1..n {
                            let (p, q, r) = (self.approx[i], self.approx[j], self.approx[k]);
                            let det = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
                            if det.abs() <= DECLARED_TOL {
                                triples.push([i, j, k]);
                            }
                        }
                    }
                }
                GeneralPositionReport {
                    collinear_triples: triples,
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
enum AreaKey {
    Exact(Scalar),
    Float(f64),
}

impl AreaKey {
    fn less_than(&self, other: &AreaKey) -> bool {
        match (self, other) {
            (AreaKey::Exact(a), AreaKey::Exact(b)) => a < b,
            (AreaKey::Float(a), AreaKey::Float(b)) => a < b,
            _ => unreachable!("mixed area keys"),
        }
    }
}

fn components(adj: &[Vec<usize>]) -> (Vec<usize>, usize) {
    let n = adj.len();
    let mut comp = vec![usize::MAX; n];
    let mut count = 0;
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        comp[s] = count;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if comp[w] == usize::MAX {
                    comp[w] = count;
                    stack.push(w);
                }
            }
        }
        count += 1;
    }
    (comp, count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn lattice(i: i64, j: i64) -> Point {
        Point::new(Scalar::from_parts(2 * i + j, 2, 0, 1), Scalar::from_parts(0, 1, j, 2))
    }

    fn hex7() -> Vec<Point> {
        vec![
            lattice(0, 0),
            lattice(1, 0),
            lattice(0, 1),
            lattice(-1, 1),
            lattice(-1, 0),
            lattice(0, -1),
            lattice(1, -1),
        ]
    }

    fn triangle() -> Vec<Point> {
        vec![lattice(0, 0), lattice(1, 0), lattice(0, 1)]
    }

    fn square() -> Vec<Point> {
        let p = |x, y| Point::new(Scalar::from_int(x), Scalar::from_int(y));
        vec![p(0, 0), p(1, 0), p(1, 1), p(0, 1)]
    }

    #[test]
    fn triangle_graph() {
        let g = build_penny_graph(triangle()).unwrap();
        assert_eq!(g.e(), 3);
        assert_eq!(g.d_min_sq(), &Scalar::one());
        let faces = enumerate_faces(&g);
        assert_eq!(faces.len(), 2);
        assert_eq!(faces.iter().filter(|f| f.triangle).count(), 1);
        assert_eq!(faces.iter().filter(|f| f.outer).count(), 1);
        assert!(g.euler_holds());
    }

    #[test]
    fn square_graph_skips_diagonals() {
        let g = build_penny_graph(square()).unwrap();
        assert_eq!(g.e(), 4);
        let faces = enumerate_faces(&g);
        assert_eq!(faces.len(), 2);
        assert_eq!(faces.iter().filter(|f| f.quadrilateral).count(), 1);
        assert!(check_general_position(&square()).holds());
    }

    #[test]
    fn hexagon_piece() {
        let g = build_penny_graph(hex7()).unwrap();
        assert_eq!(g.e(), 12);
        let faces = enumerate_faces(&g);
        assert_eq!(faces.len(), 7);
        assert_eq!(faces.iter().filter(|f| f.triangle).count(), 6);
        assert!(g.euler_holds());
        let gp = check_general_position(&hex7());
        assert_eq!(gp.collinear_triples.len(), 3);
        for t in &gp.collinear_triples {
            assert!(t.contains(&0));
        }
    }

    #[test]
    fn rotation_is_clockwise() {
        let g = build_penny_graph(hex7()).unwrap();
        // lattice(1,0) at angle 0, then clockwise: (1,-1) at -60°, (0,-1) at -120°, ...
        assert_eq!(g.rotation(0), &[1, 6, 5, 4, 3, 2]);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            build_penny_graph(vec![lattice(0, 0)]),
            Err(Error::Degenerate(_))
        ));
        assert!(matches!(
            build_penny_graph(vec![lattice(0, 0), lattice(1, 0), lattice(0, 0)]),
            Err(Error::CoincidentPoints(0, 2))
        ));
    }

    #[test]
    fn disconnected_components_satisfy_euler() {
        let mut pts = triangle();
        let far = |i, j| {
            let p = lattice(i, j);
            Point::new(&p.x + &Scalar::from_int(10), p.y)
        };
        pts.push(far(0, 0));
        pts.push(far(1, 0));
        pts.push(Point::new(Scalar::from_int(-20), Scalar::from_int(3)));
        let g = build_penny_graph(pts).unwrap();
        assert_eq!(g.n_components(), 3);
        assert_eq!(g.e(), 4);
        assert!(g.euler_holds());
        assert_eq!(g.faces().iter().filter(|f| f.outer).count(), 2);
    }

    #[test]
    fn declared_graph_rejects_crossings() {
        let coords = vec![[0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]];
        let err = PennyGraph::declared(coords.clone(), vec![(0, 1), (2, 3)]).unwrap_err();
        assert!(matches!(err, Error::NotPlane(..)));
        let g = PennyGraph::declared(coords, vec![(0, 2), (2, 1), (1, 3), (3, 0)]).unwrap();
        assert_eq!(g.faces().len(), 2);
        assert!(g.euler_holds());
    }

    #[test]
    fn grid_and_filtered_agree_with_bruteforce_on_hexagon() {
        let pts = hex7();
        let approx: Vec<Approx> = pts.iter().map(Point::approx).collect();
        let brute = min_distance_edges_bruteforce(&pts).unwrap();
        assert_eq!(min_distance_edges_filtered(&pts, &approx).unwrap(), brute);
        assert_eq!(min_distance_edges_grid(&pts, &approx).unwrap(), brute);
    }
}
