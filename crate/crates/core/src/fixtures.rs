//! Declared-mode configurations with a known combinatorial answer.
//!
//! Coordinates are schematic: edges are asserted, not measured. Vertices
//! that need a particular degree are padded with short pendant leaves placed
//! in the widest free angular gap.

use crate::error::{Error, Result};
use crate::graph::PennyGraph;

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub coords: Vec<[f64; 2]>,
    pub edges: Vec<(usize, usize)>,
    /// Named vertices, for tests and reports.
    pub labels: Vec<(&'static str, usize)>,
}

impl Fixture {
    pub fn graph(&self) -> Result<PennyGraph> {
        PennyGraph::declared(self.coords.clone(), self.edges.clone())
    }

    pub fn vertex(&self, label: &str) -> usize {
        self.labels
            .iter()
            .find(|(l, _)| *l == label)
            .map(|&(_, v)| v)
            .unwrap_or_else(|| panic!("fixture {} has no vertex {label}", self.name))
    }
}

pub const FIXTURE_NAMES: &[&str] = &[
    "apricot",
    "apricot_u2",
    "mobius_loop",
    "mobius_broken",
    "type1",
    "type2",
    "type3",
    "kifli",
    "kifli_shared",
    "clover",
    "clover_shared",
    "overlapping_kernels",
    "deg5_no_common",
    "deg5_common",
];

pub fn load_fixture(name: &str) -> Result<Fixture> {
    let f = match name {
        "apricot" => apricot(false),
        "apricot_u2" => apricot(true),
        "mobius_loop" => mobius(false),
        "mobius_broken" => mobius(true),
        "type1" => edge_type(&[false, true, false, true, false]),
        "type2" => edge_type(&[true, true, false, true, false]),
        "type3" => edge_type(&[true, false, true, false, true]),
        "kifli" => kifli(false),
        "kifli_shared" => kifli(true),
        "clover" => clover(false),
        "clover_shared" => clover(true),
        "overlapping_kernels" => overlapping_kernels(),
        "deg5_no_common" => adjacent_fives(false),
        "deg5_common" => adjacent_fives(true),
        _ => return Err(Error::UnknownFixture(name.to_string())),
    };
    Ok(f.finish(name))
}

#[derive(Default)]
struct Builder {
    coords: Vec<[f64; 2]>,
    edges: Vec<(usize, usize)>,
    labels: Vec<(&'static str, usize)>,
}

fn polar(r: f64, deg: f64) -> [f64; 2] {
    let t = deg.to_radians();
    [r * t.cos(), r * t.sin()]
}

fn offset(p: [f64; 2], r: f64, deg: f64) -> [f64; 2] {
    let d = polar(r, deg);
    [p[0] + d[0], p[1] + d[1]]
}

impl Builder {
    fn add(&mut self, p: [f64; 2]) -> usize {
        self.coords.push(p);
        self.coords.len() - 1
    }

    fn named(&mut self, label: &'static str, p: [f64; 2]) -> usize {
        let v = self.add(p);
        self.labels.push((label, v));
        v
    }

    fn edge(&mut self, a: usize, b: usize) {
        self.edges.push((a, b));
    }

    fn cycle(&mut self, vs: &[usize]) {
        for i in 0..vs.len() {
            self.edge(vs[i], vs[(i + 1) % vs.len()]);
        }
    }

    fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// Adds leaves at `v` until it has the target degree.
    fn pad(&mut self, v: usize, target: usize, len: f64) {
        while self.degree(v) < target {
            let p = self.coords[v];
            let mut dirs: Vec<f64> = self
                .edges
                .iter()
                .filter_map(|&(a, b)| {
                    let w = if a == v { b } else if b == v { a } else { return None };
                    let q = self.coords[w];
                    Some((q[1] - p[1]).atan2(q[0] - p[0]).to_degrees().rem_euclid(360.0))
                })
                .collect();
            let dir = if dirs.is_empty() {
                90.0
            } else {
                dirs.sort_by(f64::total_cmp);
                let mut best = (dirs[0] + 360.0 - dirs[dirs.len() - 1], dirs[dirs.len() - 1]);
                for w in dirs.windows(2) {
                    if w[1] - w[0] > best.0 {
                        best = (w[1] - w[0], w[0]);
                    }
                }
                best.1 + best.0 / 2.0
            };
            let leaf = self.add(offset(p, len, dir));
            self.edge(v, leaf);
        }
    }

    fn finish(self, name: &str) -> Fixture {
        Fixture {
            name: name.to_string(),
            coords: self.coords,
            edges: self.edges,
            labels: self.labels,
        }
    }
}

const H: f64 = 0.866_025_403_784_438_6;

/// Kernel L, U, R, D with its ring of ten, labelled clockwise from L1.
fn apricot(u2_degree_four: bool) -> Builder {
    let mut b = Builder::default();
    let l = b.named("L", [-0.5, 0.0]);
    let u = b.named("U", [0.0, H]);
    let r = b.named("R", [0.5, 0.0]);
    let d = b.named("D", [0.0, -H]);
    b.cycle(&[l, u, r, d]);
    b.edge(l, r);
    let names = ["L1", "L2", "U1", "U2", "U3", "R1", "R2", "D1", "D2", "D3"];
    let angles = [200.0, 160.0, 125.0, 90.0, 55.0, 20.0, -20.0, -55.0, -90.0, -125.0];
    let ring: Vec<usize> = names
        .iter()
        .zip(angles)
        .map(|(&n, a)| b.named(n, polar(1.8, a)))
        .collect();
    b.cycle(&ring);
    let owner = [l, l, u, u, u, r, r, d, d, d];
    for (i, &o) in owner.iter().enumerate() {
        b.edge(o, ring[i]);
    }
    if u2_degree_four {
        b.pad(ring[3], 4, 0.3);
    }
    b
}

/// Degree-5 triangle X, Y, Z with nine outer neighbours on a cycle.
fn mobius(broken: bool) -> Builder {
    let mut b = Builder::default();
    let x = b.named("X", polar(0.577, 90.0));
    let y = b.named("Y", polar(0.577, -30.0));
    let z = b.named("Z", polar(0.577, 210.0));
    b.cycle(&[x, y, z]);
    let angles = [130.0, 90.0, 50.0, 10.0, -30.0, -70.0, -110.0, -150.0, 170.0];
    let ring: Vec<usize> = angles.iter().map(|&a| b.add(polar(1.8, a))).collect();
    for (i, &v) in ring.iter().enumerate() {
        b.edge([x, y, z][i / 3], v);
    }
    for i in 0..9 {
        if broken && i == 2 {
            continue;
        }
        b.edge(ring[i], ring[(i + 1) % 9]);
    }
    b
}

/// Popular B at the origin with A and C2..C5 clockwise at 72° spacing;
/// `links[i]` joins the i-th and (i+1)-th neighbour.
fn edge_type(links: &[bool; 5]) -> Builder {
    let mut b = Builder::default();
    let center = b.named("B", [0.0, 0.0]);
    let names = ["A", "C2", "C3", "C4", "C5"];
    let spokes: Vec<usize> = names
        .iter()
        .enumerate()
        .map(|(i, &n)| b.named(n, polar(1.0, 90.0 - 72.0 * i as f64)))
        .collect();
    for &s in &spokes {
        b.edge(center, s);
    }
    for i in 0..5 {
        if links[i] {
            b.edge(spokes[i], spokes[(i + 1) % 5]);
        }
    }
    b.pad(spokes[0], 4, 0.25);
    for &s in &spokes[1..] {
        b.pad(s, 5, 0.25);
    }
    b
}

/// Degree-4 A with two consecutive Type I neighbours B1, B2. With `shared`,
/// B1 and B2 get a common neighbour S besides A.
fn kifli(shared: bool) -> Builder {
    let mut b = Builder::default();
    let a = b.named("A", [0.0, 0.0]);
    let b1 = b.named("B1", polar(1.0, 135.0));
    let b2 = b.named("B2", polar(1.0, 45.0));
    let b3 = b.named("B3", polar(1.0, -45.0));
    let b4 = b.named("B4", polar(1.0, -135.0));
    for &v in &[b1, b2, b3, b4] {
        b.edge(a, v);
    }
    let s = shared.then(|| b.named("S", [0.0, 1.1]));
    // spokes clockwise starting after the direction of A
    let spokes = |b: &mut Builder, center: usize, angles: [f64; 4], shared_at: usize| {
        let p = b.coords[center];
        let c: Vec<usize> = angles
            .iter()
            .enumerate()
            .map(|(i, &t)| match s {
                Some(s) if i == shared_at => s,
                _ => b.add(offset(p, 0.6, t)),
            })
            .collect();
        for &x in &c {
            b.edge(center, x);
        }
        b.edge(c[0], c[1]);
        b.edge(c[2], c[3]);
        c
    };
    let c1 = spokes(&mut b, b1, [243.0, 171.0, 99.0, 27.0], 3);
    let c2 = spokes(&mut b, b2, [153.0, 81.0, 9.0, -63.0], 0);
    for &c in c1.iter().chain(&c2) {
        b.pad(c, 5, 0.1);
    }
    b
}

/// Degree-4 A whose four neighbours are all Type II: B1B2 and B3B4 are edges,
/// C3 caps B1B2 from above and C3' caps B3B4 from below.
fn clover(shared: bool) -> Builder {
    let mut b = Builder::default();
    let a = b.named("A", [0.0, 0.0]);
    let b1 = b.named("B1", [-0.5, H]);
    let b2 = b.named("B2", [0.5, H]);
    let b3 = b.named("B3", [0.5, -H]);
    let b4 = b.named("B4", [-0.5, -H]);
    let top = b.named("C3", [0.0, 2.0 * H]);
    let bottom = b.named("C3'", [0.0, -2.0 * H]);
    for &v in &[b1, b2, b3, b4] {
        b.edge(a, v);
    }
    b.edge(b1, b2);
    b.edge(b3, b4);
    for (&v, cap) in [b1, b2, b3, b4].iter().zip([top, top, bottom, bottom]) {
        b.edge(v, cap);
    }
    // outer pair at each B, placed in the free sector away from A
    let outer = |b: &mut Builder, v: usize, t1: f64, t2: f64| {
        let p = b.coords[v];
        let x = b.add(offset(p, 0.6, t1));
        let y = b.add(offset(p, 0.6, t2));
        b.edge(v, x);
        b.edge(v, y);
        b.edge(x, y);
        (x, y)
    };
    let mut pads = vec![top, bottom];
    if shared {
        let w = b.named("W", [-1.0, 0.0]);
        b.edge(b1, w);
        b.edge(b4, w);
        let x1 = b.add(offset(b.coords[b1], 0.6, 150.0));
        b.edge(b1, x1);
        b.edge(x1, w);
        let x4 = b.add(offset(b.coords[b4], 0.6, 210.0));
        b.edge(b4, x4);
        b.edge(x4, w);
        pads.extend([w, x1, x4]);
    } else {
        let (x, y) = outer(&mut b, b1, 150.0, 220.0);
        let (x4, y4) = outer(&mut b, b4, 140.0, 210.0);
        pads.extend([x, y, x4, y4]);
    }
    let (x2, y2) = outer(&mut b, b2, 30.0, -40.0);
    let (x3, y3) = outer(&mut b, b3, 40.0, -30.0);
    pads.extend([x2, y2, x3, y3]);
    for v in pads {
        b.pad(v, 5, 0.1);
    }
    b
}

/// Two kernels sharing R, which is also the top vertex of the second.
fn overlapping_kernels() -> Builder {
    let mut b = Builder::default();
    let l = b.named("L", [-0.5, 0.0]);
    let u = b.named("U", [0.0, H]);
    let r = b.named("R", [0.5, 0.0]);
    let d = b.named("D", [0.0, -H]);
    b.cycle(&[l, u, r, d]);
    b.edge(l, r);
    let l2 = b.named("L'", [1.0, H]);
    let r2 = b.named("R'", [1.0, -H]);
    let d2 = b.named("D'", [1.5, 0.0]);
    b.cycle(&[r, l2, d2, r2]);
    b.edge(l2, r2);
    for v in [l, u, d, l2, r2, d2] {
        b.pad(v, 5, 0.3);
    }
    b
}

/// Adjacent degree-5 U and V; with `common`, they share a neighbour W.
fn adjacent_fives(common: bool) -> Builder {
    let mut b = Builder::default();
    let u = b.named("U", [0.0, 0.0]);
    let v = b.named("V", [1.0, 0.0]);
    b.edge(u, v);
    if common {
        let w = b.named("W", [0.5, H]);
        b.edge(u, w);
        b.edge(v, w);
    }
    b.pad(u, 5, 0.4);
    b.pad(v, 5, 0.4);
    b
}
