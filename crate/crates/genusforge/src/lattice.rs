//! Lattice polygons: Newton polygons, Pick counts, Minkowski sums, mixed
//! areas, and exhaustive enumeration of small convex lattice polygons.  All
//! computations are exact over 64/128-bit integers.

use num_rational::Ratio;

use crate::bivar::BivariatePoly;
use crate::error::{Error, Result};

/// A point of Z².
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub fn new(x: i64, y: i64) -> LatticePoint {
        LatticePoint { x, y }
    }
}

fn cross(o: LatticePoint, a: LatticePoint, b: LatticePoint) -> i128 {
    let (ax, ay) = ((a.x - o.x) as i128, (a.y - o.y) as i128);
    let (bx, by) = ((b.x - o.x) as i128, (b.y - o.y) as i128);
    ax * by - ay * bx
}

/// Convex body spanned by a point set; segments and points are legal only as
/// `mixed_area` operands, so they get their own variants rather than being
/// smuggled into `LatticePolygon`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Hull {
    Point(LatticePoint),
    Segment(LatticePoint, LatticePoint),
    Polygon(LatticePolygon),
}

impl Hull {
    pub fn of(points: &[LatticePoint]) -> Result<Hull> {
        let verts = convex_hull(points)?;
        Ok(match verts.len() {
            0 => return Err(Error::DegeneratePolygon),
            1 => Hull::Point(verts[0]),
            2 => Hull::Segment(verts[0], verts[1]),
            _ => Hull::Polygon(LatticePolygon::from_hull_vertices(verts)),
        })
    }

    pub fn vertices(&self) -> Vec<LatticePoint> {
        match self {
            Hull::Point(p) => vec![*p],
            Hull::Segment(a, b) => vec![*a, *b],
            Hull::Polygon(p) => p.vertices.clone(),
        }
    }

    /// Twice the Euclidean area (0 for points and segments).
    pub fn twice_area(&self) -> i128 {
        match self {
            Hull::Polygon(p) => p.twice_area(),
            _ => 0,
        }
    }
}

/// Strictly convex lattice polygon; vertices stored counterclockwise starting
/// from the lexicographically least vertex.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LatticePolygon {
    vertices: Vec<LatticePoint>,
}

/// Monotone-chain convex hull; returns extreme vertices in counterclockwise
/// order starting from the lexicographically least point.  Collinear interior
/// boundary points are dropped.
fn convex_hull(points: &[LatticePoint]) -> Result<Vec<LatticePoint>> {
    let mut pts: Vec<LatticePoint> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.is_empty() {
        return Err(Error::DegeneratePolygon);
    }
    if pts.len() == 1 {
        return Ok(pts);
    }
    let mut lower: Vec<LatticePoint> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<LatticePoint> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() == 2 && lower[0] == lower[1] {
        lower.pop();
    }
    Ok(lower)
}

impl LatticePolygon {
    /// Builds from an arbitrary vertex list (any order); fails unless the
    /// convex hull has positive area and every input point is a hull vertex.
    pub fn new(vertices: &[LatticePoint]) -> Result<LatticePolygon> {
        let hull = convex_hull(vertices)?;
        if hull.len() < 3 {
            return Err(Error::DegeneratePolygon);
        }
        let mut sorted_in: Vec<LatticePoint> = vertices.to_vec();
        sorted_in.sort();
        sorted_in.dedup();
        let mut sorted_hull = hull.clone();
        sorted_hull.sort();
        if sorted_in != sorted_hull {
            return Err(Error::NotConvex);
        }
        Ok(LatticePolygon::from_hull_vertices(hull))
    }

    fn from_hull_vertices(verts: Vec<LatticePoint>) -> LatticePolygon {
        // convex_hull already starts at the lexicographic minimum.
        debug_assert!(verts.iter().min() == verts.first());
        LatticePolygon { vertices: verts }
    }

    /// Convex hull of an arbitrary point set; error if the hull is degenerate.
    pub fn hull_of(points: &[LatticePoint]) -> Result<LatticePolygon> {
        let hull = convex_hull(points)?;
        if hull.len() < 3 {
            return Err(Error::DegeneratePolygon);
        }
        Ok(LatticePolygon::from_hull_vertices(hull))
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Directed edges in counterclockwise order.
    pub fn edges(&self) -> Vec<(LatticePoint, LatticePoint)> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| (self.vertices[i], self.vertices[(i + 1) % n]))
            .collect()
    }

    /// Twice the Euclidean area (shoelace; positive for our orientation).
    pub fn twice_area(&self) -> i128 {
        let n = self.vertices.len();
        let mut s: i128 = 0;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            s += a.x as i128 * b.y as i128 - b.x as i128 * a.y as i128;
        }
        debug_assert!(s > 0);
        s
    }

    /// Number of lattice points on the boundary: Σ gcd over edges.
    pub fn boundary_points(&self) -> u64 {
        self.edges()
            .iter()
            .map(|(a, b)| num_integer::gcd((b.x - a.x).unsigned_abs(), (b.y - a.y).unsigned_abs()))
            .sum()
    }

    /// True if p lies in the closed polygon.
    pub fn contains(&self, p: LatticePoint) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| cross(self.vertices[i], self.vertices[(i + 1) % n], p) >= 0)
    }

    /// True if p lies strictly inside.
    pub fn contains_strictly(&self, p: LatticePoint) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| cross(self.vertices[i], self.vertices[(i + 1) % n], p) > 0)
    }

    /// Interior lattice points via a bounding-box scan.
    pub fn interior_points(&self) -> Vec<LatticePoint> {
        let xs = self.vertices.iter().map(|v| v.x);
        let ys = self.vertices.iter().map(|v| v.y);
        let (x0, x1) = (xs.clone().min().unwrap(), xs.max().unwrap());
        let (y0, y1) = (ys.clone().min().unwrap(), ys.max().unwrap());
        let mut out = Vec::new();
        for x in x0 + 1..x1 {
            for y in y0 + 1..y1 {
                let p = LatticePoint::new(x, y);
                if self.contains_strictly(p) {
                    out.push(p);
                }
            }
        }
        out
    }

    /// Minkowski sum by the classical edge-vector merge: both edge cycles are
    /// interleaved in angular order, which is exact and O(v₁ + v₂).
    pub fn minkowski_sum(&self, other: &Hull) -> LatticePolygon {
        let mut edges = hull_edge_cycle(&Hull::Polygon(self.clone()));
        edges.extend(hull_edge_cycle(other));
        edges.sort_by(|&u, &v| compare_angle(u, v));
        let mut merged: Vec<(i64, i64)> = Vec::new();
        for e in edges {
            if let Some(last) = merged.last_mut() {
                if compare_angle(*last, e) == std::cmp::Ordering::Equal {
                    last.0 += e.0;
                    last.1 += e.1;
                    continue;
                }
            }
            merged.push(e);
        }
        // The walk must start at the bottom-most (then left-most) vertex: the
        // support point in that direction is additive under Minkowski sums,
        // and the angular order from (1,0) lists edges exactly as the
        // counterclockwise cycle from that vertex.
        let a0 = bottom_left(self.vertices());
        let b0 = bottom_left(&other.vertices());
        let start = LatticePoint::new(a0.x + b0.x, a0.y + b0.y);
        let mut verts = Vec::with_capacity(merged.len());
        let mut cur = start;
        for (dx, dy) in merged {
            verts.push(cur);
            cur = LatticePoint::new(cur.x + dx, cur.y + dy);
        }
        debug_assert_eq!(cur, start);
        LatticePolygon::hull_of(&verts).expect("Minkowski sum of a polygon is a polygon")
    }
}

fn bottom_left(pts: &[LatticePoint]) -> LatticePoint {
    *pts.iter().min_by_key(|p| (p.y, p.x)).unwrap()
}

/// Counterclockwise edge vectors of a hull; a segment contributes both
/// directions, a point contributes none.
fn hull_edge_cycle(h: &Hull) -> Vec<(i64, i64)> {
    match h {
        Hull::Point(_) => Vec::new(),
        Hull::Segment(a, b) => vec![(b.x - a.x, b.y - a.y), (a.x - b.x, a.y - b.y)],
        Hull::Polygon(p) => p
            .edges()
            .iter()
            .map(|(a, b)| (b.x - a.x, b.y - a.y))
            .collect(),
    }
}

/// Angular order on nonzero vectors starting at direction (1, 0) going
/// counterclockwise; parallel same-direction vectors compare equal.
fn compare_angle(a: (i64, i64), b: (i64, i64)) -> std::cmp::Ordering {
    fn half(v: (i64, i64)) -> u8 {
        // 0 for angle in [0, π), 1 for [π, 2π).
        if v.1 > 0 || (v.1 == 0 && v.0 > 0) {
            0
        } else {
            1
        }
    }
    half(a).cmp(&half(b)).then_with(|| {
        let c = (a.0 as i128) * (b.1 as i128) - (a.1 as i128) * (b.0 as i128);
        c.cmp(&0).reverse()
    })
}

/// Pick data for a polygon: interior points, boundary points, twice the area.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PickData {
    pub interior: u64,
    pub boundary: u64,
    pub twice_area: i128,
}

/// Counts interior/boundary lattice points and checks Pick's identity
/// A2 = 2I + B − 2 as an internal consistency assertion.
pub fn pick_data(poly: &LatticePolygon) -> PickData {
    let interior = poly.interior_points().len() as u64;
    let boundary = poly.boundary_points();
    let twice_area = poly.twice_area();
    debug_assert_eq!(twice_area, 2 * interior as i128 + boundary as i128 - 2);
    PickData {
        interior,
        boundary,
        twice_area,
    }
}

/// Newton polygon of a bivariate polynomial: convex hull of its support.
/// Errors if the support is degenerate (empty, a point, or collinear).
pub fn newton_polygon(f: &BivariatePoly) -> Result<LatticePolygon> {
    let pts: Vec<LatticePoint> = f
        .support()
        .into_iter()
        .map(|(i, j)| LatticePoint::new(i as i64, j as i64))
        .collect();
    LatticePolygon::hull_of(&pts)
}

/// True iff every boundary lattice point that is not a vertex lies on a
/// coordinate axis (first or second coordinate zero).
pub fn boundary_condition(poly: &LatticePolygon) -> bool {
    for (a, b) in poly.edges() {
        let (dx, dy) = (b.x - a.x, b.y - a.y);
        let g = num_integer::gcd(dx.unsigned_abs(), dy.unsigned_abs()) as i64;
        let (sx, sy) = (dx / g, dy / g);
        for t in 1..g {
            let p = LatticePoint::new(a.x + sx * t, a.y + sy * t);
            if p.x != 0 && p.y != 0 {
                return false;
            }
        }
    }
    true
}

/// Mixed area Area(P₁ ⊕ P₂) − Area(P₁) − Area(P₂); symmetric, nonnegative,
/// and an integer for lattice bodies, though returned as an exact rational
/// since areas themselves are half-integers.
pub fn mixed_area(a: &Hull, b: &Hull) -> Ratio<i128> {
    let sum_a2: i128 = match (a, b) {
        // A point only translates: the areas cancel exactly.
        (Hull::Point(_), _) | (_, Hull::Point(_)) => return Ratio::from_integer(0),
        (Hull::Segment(s0, s1), Hull::Segment(t0, t1)) => {
            // Sum is the parallelogram spanned by the two segment vectors.
            let u = ((s1.x - s0.x) as i128, (s1.y - s0.y) as i128);
            let v = ((t1.x - t0.x) as i128, (t1.y - t0.y) as i128);
            2 * (u.0 * v.1 - u.1 * v.0).abs()
        }
        (Hull::Polygon(p), other) | (other, Hull::Polygon(p)) => {
            p.minkowski_sum(other).twice_area()
        }
    };
    let diff = sum_a2 - a.twice_area() - b.twice_area();
    debug_assert!(diff >= 0);
    Ratio::new(diff, 2)
}

/// Area/vertex inequality for convex lattice polygons: with v vertices,
/// A2 · 8192 ≥ 2v³ (exact integer comparison).
pub fn arnold_check(poly: &LatticePolygon) -> bool {
    let v = poly.num_vertices() as i128;
    poly.twice_area() * 8192 >= 2 * v * v * v
}

/// Enumerates, up to translation, every strictly convex lattice polygon with
/// at most `max_v` vertices fitting in [0, bound]², invoking `visit` once per
/// polygon (translated to touch both axes).
pub fn enumerate_convex_polygons<F: FnMut(&LatticePolygon)>(bound: i64, max_v: usize, visit: F) {
    enumerate_convex_polygons_chunk(bound, max_v, 0, 1, visit);
}

/// Deterministic work-chunked variant of `enumerate_convex_polygons`: only
/// walks whose initial edge has index ≡ chunk (mod chunks) in the fixed
/// angular ordering are explored, so the chunks partition the enumeration and
/// can run independently with any order-independent reduction.
pub fn enumerate_convex_polygons_chunk<F: FnMut(&LatticePolygon)>(
    bound: i64,
    max_v: usize,
    chunk: usize,
    chunks: usize,
    mut visit: F,
) {
    assert!(chunks > 0 && chunk < chunks);
    if bound <= 0 || max_v < 3 {
        return;
    }
    // Candidate edge vectors (not only primitive ones: an edge may have any
    // lattice length), in angular order from direction (1,0).
    let mut dirs: Vec<(i64, i64)> = Vec::new();
    for dx in -bound..=bound {
        for dy in -bound..=bound {
            if (dx, dy) != (0, 0) {
                dirs.push((dx, dy));
            }
        }
    }
    dirs.sort_by(|&u, &v| compare_angle(u, v));
    // next_angle[i]: first index after the equal-angle run containing i.
    let mut next_angle = vec![0usize; dirs.len()];
    {
        let mut i = dirs.len();
        let mut run_end = dirs.len();
        while i > 0 {
            i -= 1;
            if i + 1 < dirs.len() && compare_angle(dirs[i], dirs[i + 1]) != std::cmp::Ordering::Equal
            {
                run_end = i + 1;
            }
            next_angle[i] = run_end;
        }
    }
    let mut walk = Walk {
        dirs: &dirs,
        next_angle: &next_angle,
        bound,
        max_v,
        path: Vec::new(),
        visit: &mut visit,
    };
    for first in (chunk..dirs.len()).step_by(chunks) {
        walk.dfs(first, Extent::ORIGIN);
    }
}

#[derive(Clone, Copy)]
struct Extent {
    x: i64,
    y: i64,
    xmin: i64,
    xmax: i64,
    ymin: i64,
    ymax: i64,
}

impl Extent {
    const ORIGIN: Extent = Extent {
        x: 0,
        y: 0,
        xmin: 0,
        xmax: 0,
        ymin: 0,
        ymax: 0,
    };

    fn step(self, d: (i64, i64)) -> Extent {
        let (x, y) = (self.x + d.0, self.y + d.1);
        Extent {
            x,
            y,
            xmin: self.xmin.min(x),
            xmax: self.xmax.max(x),
            ymin: self.ymin.min(y),
            ymax: self.ymax.max(y),
        }
    }

    fn fits(&self, bound: i64) -> bool {
        self.xmax - self.xmin <= bound && self.ymax - self.ymin <= bound
    }
}

/// Depth-first walk over edge cycles in strictly increasing angular order.
/// Monotone angles force convexity, and every convex polygon arises from
/// exactly one such cycle (started at its bottom-most, then left-most
/// vertex), so the enumeration is duplicate-free.
struct Walk<'a, F: FnMut(&LatticePolygon)> {
    dirs: &'a [(i64, i64)],
    next_angle: &'a [usize],
    bound: i64,
    max_v: usize,
    path: Vec<(i64, i64)>,
    visit: &'a mut F,
}

impl<F: FnMut(&LatticePolygon)> Walk<'_, F> {
    fn dfs(&mut self, idx: usize, ext: Extent) {
        let d = self.dirs[idx];
        let ext = ext.step(d);
        if !ext.fits(self.bound) {
            return;
        }
        self.path.push(d);
        if self.path.len() >= 3 && (ext.x, ext.y) == (0, 0) {
            // Closure needs angular span > π, and afterwards the unused span
            // is < π, so a walk closes at most once: emit and stop extending.
            self.emit(ext);
        } else if self.path.len() < self.max_v {
            for next in self.next_angle[idx]..self.dirs.len() {
                self.dfs(next, ext);
            }
        }
        self.path.pop();
    }

    fn emit(&mut self, ext: Extent) {
        let (mut x, mut y) = (-ext.xmin, -ext.ymin);
        let mut verts = Vec::with_capacity(self.path.len());
        for &(dx, dy) in &self.path {
            verts.push(LatticePoint::new(x, y));
            x += dx;
            y += dy;
        }
        let poly =
            LatticePolygon::hull_of(&verts).expect("increasing-angle cycles are strictly convex");
        debug_assert_eq!(poly.num_vertices(), verts.len());
        (self.visit)(&poly);
    }
}

/// Minimum number of interior lattice points over all strictly convex lattice
/// v-gons with vertices in [0, bound]², with one minimizing witness.
pub fn min_interior_vgon(v: usize, bound: i64) -> Result<(u64, LatticePolygon)> {
    if !(3..=8).contains(&v) {
        return Err(Error::OutOfRange {
            what: "vertex count",
            got: v as u64,
            lo: 3,
            hi: 8,
        });
    }
    if !(1..=8).contains(&bound) {
        return Err(Error::OutOfRange {
            what: "coordinate bound",
            got: bound.max(0) as u64,
            lo: 1,
            hi: 8,
        });
    }
    let mut best: Option<(u64, LatticePolygon)> = None;
    enumerate_convex_polygons(bound, v, |poly| {
        if poly.num_vertices() != v {
            return;
        }
        let i = pick_data(poly).interior;
        if best.as_ref().map_or(true, |(b, _)| i < *b) {
            best = Some((i, poly.clone()));
        }
    });
    best.ok_or(Error::NoSuchPolygon { v, bound })
}
