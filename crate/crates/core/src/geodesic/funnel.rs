//! Face strips: construction from a graph path, planar unfolding, the funnel
//! algorithm and rerouting around vertices.

use std::collections::HashSet;

use crate::mesh::{ConvexMesh, SurfacePoint};
use crate::{Vec2, Vec3};

const NO_VERTEX: u32 = u32::MAX;

fn cross(a: &Vec2, b: &Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

fn corner_of(mesh: &ConvexMesh, f: u32, v: u32) -> Option<usize> {
    mesh.triangle(f).iter().position(|&x| x == v)
}

/// Walks the fan of `v` from face `a` to face `b` (both excluded from the
/// result) in direction `dir` (+1 counter-clockwise, -1 clockwise).
fn fan_walk(mesh: &ConvexMesh, v: u32, a: u32, b: u32, dir: i64) -> Option<Vec<u32>> {
    let fan = mesh.fan(v);
    let n = fan.len() as i64;
    let ia = fan.iter().position(|&f| f == a)? as i64;
    let mut out = Vec::new();
    let mut i = ia;
    for _ in 0..n {
        i = (i + dir).rem_euclid(n);
        let f = fan[i as usize];
        if f == b {
            return Some(out);
        }
        out.push(f);
    }
    None
}

/// Removes immediate back-and-forth visits `A B A -> A` and repeats.
pub(crate) fn collapse(strip: &[u32]) -> Vec<u32> {
    let mut out: Vec<u32> = Vec::with_capacity(strip.len());
    for &f in strip {
        if out.last() == Some(&f) {
            continue;
        }
        if out.len() >= 2 && out[out.len() - 2] == f {
            out.pop();
            continue;
        }
        out.push(f);
    }
    out
}

/// Face strip visited by a Steiner-graph path. At vertex nodes the strip
/// goes around the side with the smaller angle, which is where the taut
/// path will cut through.
pub(crate) fn strip_from_graph(mesh: &ConvexMesh, nodes: &[u32], faces: &[u32], vertex_of: impl Fn(u32) -> Option<u32>) -> Vec<u32> {
    let mut strip = vec![faces[0]];
    for i in 1..faces.len() {
        let (a, b) = (*strip.last().unwrap(), faces[i]);
        if a == b {
            continue;
        }
        if mesh.shared_edge(a, b).is_some() {
            strip.push(b);
            continue;
        }
        if let Some(v) = vertex_of(nodes[i]) {
            let angle = |run: &[u32]| -> f64 {
                run.iter().map(|&f| mesh.corner_angle(f, corner_of(mesh, f, v).unwrap_or(0))).sum()
            };
            let ccw = fan_walk(mesh, v, a, b, 1);
            let cw = fan_walk(mesh, v, a, b, -1);
            let run = match (ccw, cw) {
                (Some(x), Some(y)) => {
                    if angle(&x) <= angle(&y) {
                        x
                    } else {
                        y
                    }
                }
                (Some(x), None) | (None, Some(x)) => x,
                (None, None) => Vec::new(),
            };
            strip.extend(run);
        }
        strip.push(b);
    }
    collapse(&strip)
}

/// Drops leading (trailing) faces while the next (previous) face also
/// contains the start (end) point.
pub(crate) fn trim(mut strip: Vec<u32>, p: &[SurfacePoint], q: &[SurfacePoint]) -> Vec<u32> {
    let start = strip.iter().rposition(|&f| face_contains_any(f, p)).unwrap_or(0);
    strip.drain(..start);
    let end = strip.iter().position(|&f| face_contains_any(f, q)).unwrap_or(strip.len() - 1);
    strip.truncate(end + 1);
    strip
}

fn face_contains_any(f: u32, locs: &[SurfacePoint]) -> bool {
    locs.iter().any(|l| l.face == f)
}

/// Planar coordinates of the strip faces, each in the vertex order of its
/// triangle. Consecutive faces share bit-identical copies of their common
/// vertices.
fn unfold(mesh: &ConvexMesh, strip: &[u32]) -> Vec<[Vec2; 3]> {
    let mut out: Vec<[Vec2; 3]> = Vec::with_capacity(strip.len());
    let first = strip[0];
    let [a, b, c] = mesh.face_vertices(first);
    let e1 = (b - a).normalize();
    let e2 = mesh.face_normal(first).cross(&e1);
    let to2 = |x: Vec3| Vec2::new((x - a).dot(&e1), (x - a).dot(&e2));
    out.push([to2(a), to2(b), to2(c)]);
    for i in 1..strip.len() {
        let (f, g) = (strip[i - 1], strip[i]);
        let tf = mesh.triangle(f);
        let tg = mesh.triangle(g);
        let prev = out[i - 1];
        let pos_in_f = |v: u32| prev[tf.iter().position(|&x| x == v).expect("shared vertex")];
        // the vertex of g not on the shared edge, and g's ccw edge s0 -> s1 opposite it
        let k = (0..3).find(|&k| !tf.contains(&tg[k])).expect("adjacent faces");
        let (w, s0, s1) = (tg[k], tg[(k + 1) % 3], tg[(k + 2) % 3]);
        let (p0, p1) = (pos_in_f(s0), pos_in_f(s1));
        let (x0, x1, xw) = (mesh.vertex(s0), mesh.vertex(s1), mesh.vertex(w));
        let axis = x1 - x0;
        let len = axis.norm();
        let along = (xw - x0).dot(&axis) / len;
        let off = (xw - x0).cross(&axis).norm() / len;
        let d = (p1 - p0) / (p1 - p0).norm();
        let perp = Vec2::new(-d.y, d.x);
        let pw = p0 + d * along + perp * off;
        let mut tri = [Vec2::zeros(); 3];
        tri[k] = pw;
        tri[(k + 1) % 3] = p0;
        tri[(k + 2) % 3] = p1;
        out.push(tri);
    }
    out
}

fn point2(tri: &[Vec2; 3], bary: &[f64; 3]) -> Vec2 {
    tri[0] * bary[0] + tri[1] * bary[1] + tri[2] * bary[2]
}

/// Portal between consecutive strip faces, seen from the earlier face.
#[derive(Debug, Clone, Copy)]
struct Portal {
    left: Vec2,
    right: Vec2,
    left_id: u32,
    right_id: u32,
}

#[derive(Debug, Clone, Copy)]
struct Corner {
    point: Vec2,
    portal: usize,
    vertex: u32,
}

/// Simple stupid funnel algorithm over `portals`, whose first and last
/// entries are the degenerate start and end portals.
fn funnel(portals: &[Portal]) -> Vec<Corner> {
    let n = portals.len();
    let mut corners = vec![Corner { point: portals[0].left, portal: 0, vertex: NO_VERTEX }];
    let (mut apex, mut left, mut right) = (portals[0].left, portals[0].left, portals[0].right);
    let (mut left_i, mut right_i) = (0usize, 0usize);
    let mut i = 1;
    while i < n {
        let (l, r) = (portals[i].left, portals[i].right);
        if cross(&(right - apex), &(r - apex)) >= 0.0 {
            if apex == right || cross(&(left - apex), &(r - apex)) < 0.0 {
                right = r;
                right_i = i;
            } else {
                corners.push(Corner { point: left, portal: left_i, vertex: portals[left_i].left_id });
                apex = left;
                right = apex;
                right_i = left_i;
                i = left_i + 1;
                continue;
            }
        }
        if cross(&(left - apex), &(l - apex)) <= 0.0 {
            if apex == left || cross(&(right - apex), &(l - apex)) > 0.0 {
                left = l;
                left_i = i;
            } else {
                corners.push(Corner { point: right, portal: right_i, vertex: portals[right_i].right_id });
                apex = right;
                left = apex;
                left_i = right_i;
                i = right_i + 1;
                continue;
            }
        }
        i += 1;
    }
    corners.push(Corner { point: portals[n - 1].left, portal: n - 1, vertex: NO_VERTEX });
    corners
}

/// A taut path inside a fixed strip.
#[derive(Debug, Clone)]
pub(crate) struct StripPath {
    pub points: Vec<Vec3>,
    pub locations: Vec<SurfacePoint>,
    pub segment_faces: Vec<u32>,
    pub crossed: Vec<Option<u32>>,
    /// Mesh vertices where the taut path bends.
    pub bends: Vec<u32>,
    pub length: f64,
}

/// Shortest path from `p` to `q` inside the strip.
pub(crate) fn straighten(mesh: &ConvexMesh, strip: &[u32], p: &[SurfacePoint], q: &[SurfacePoint]) -> Option<StripPath> {
    let m = strip.len();
    let tris = unfold(mesh, strip);
    let p_loc = *p.iter().find(|l| l.face == strip[0])?;
    let q_loc = *q.iter().find(|l| l.face == strip[m - 1])?;
    let p2 = point2(&tris[0], &p_loc.bary);
    let q2 = point2(&tris[m - 1], &q_loc.bary);

    let mut portals = Vec::with_capacity(m + 1);
    portals.push(Portal { left: p2, right: p2, left_id: NO_VERTEX, right_id: NO_VERTEX });
    let mut portal_edges = Vec::with_capacity(m.saturating_sub(1));
    for i in 0..m - 1 {
        let (f, g) = (strip[i], strip[i + 1]);
        let e = mesh.shared_edge(f, g)?;
        let tf = mesh.triangle(f);
        let k = mesh.face_edges(f).iter().position(|&x| x == e)?;
        let (r, l) = (k, (k + 1) % 3);
        portals.push(Portal { left: tris[i][l], right: tris[i][r], left_id: tf[l], right_id: tf[r] });
        portal_edges.push(e);
    }
    portals.push(Portal { left: q2, right: q2, left_id: NO_VERTEX, right_id: NO_VERTEX });

    let corners = funnel(&portals);
    let bends: Vec<u32> = corners
        .iter()
        .filter(|c| c.vertex != NO_VERTEX)
        .map(|c| c.vertex)
        .collect();

    let pos = |x: &SurfacePoint| mesh.position(x);
    let mut points = vec![pos(&p_loc)];
    let mut locations = vec![p_loc];
    let mut segment_faces = vec![];
    let mut crossed = vec![None];
    let mut seg = 0usize;
    for j in 1..portals.len() - 1 {
        while corners[seg + 1].portal < j {
            seg += 1;
        }
        let portal = &portals[j];
        let tau = if corners[seg + 1].portal == j {
            if corners[seg + 1].vertex == portal.left_id {
                1.0
            } else {
                0.0
            }
        } else {
            let (a, b) = (corners[seg].point, corners[seg + 1].point);
            let d = b - a;
            let den = cross(&(portal.left - portal.right), &d);
            if den.abs() < f64::MIN_POSITIVE {
                0.5
            } else {
                (cross(&(a - portal.right), &d) / den).clamp(0.0, 1.0)
            }
        };
        let (xr, xl) = (mesh.vertex(portal.right_id), mesh.vertex(portal.left_id));
        let x = xr.lerp(&xl, tau);
        let g = strip[j];
        let tg = mesh.triangle(g);
        let mut bary = [0.0; 3];
        bary[tg.iter().position(|&v| v == portal.right_id)?] = 1.0 - tau;
        bary[tg.iter().position(|&v| v == portal.left_id)?] = tau;
        segment_faces.push(strip[j - 1]);
        points.push(x);
        locations.push(SurfacePoint::new(g, bary));
        crossed.push(Some(portal_edges[j - 1]));
    }
    segment_faces.push(strip[m - 1]);
    points.push(pos(&q_loc));
    locations.push(q_loc);
    crossed.push(None);

    // drop repeated samples (the path touching a vertex shared by several portals)
    let mut k = 1;
    while k < points.len() {
        if points[k] == points[k - 1] && points.len() > 2 {
            let keep_last = k == points.len() - 1;
            if keep_last {
                points.remove(k - 1);
                locations.remove(k - 1);
                crossed.remove(k - 1);
                segment_faces.remove(k - 1);
            } else {
                points.remove(k);
                locations.remove(k);
                crossed.remove(k);
                segment_faces.remove(k - 1);
            }
        } else {
            k += 1;
        }
    }
    let length = points.windows(2).map(|w| (w[1] - w[0]).norm()).sum();
    Some(StripPath { points, locations, segment_faces, crossed, bends, length })
}

/// Replaces the run of strip faces around `v` by the faces on the other
/// side of `v`. Returns `None` when the run cannot be flipped.
pub(crate) fn reroute(mesh: &ConvexMesh, strip: &[u32], v: u32) -> Option<Vec<u32>> {
    let has_v = |f: u32| mesh.triangle(f).contains(&v);
    let idx = strip.iter().position(|&f| has_v(f))?;
    let (mut lo, mut hi) = (idx, idx);
    while hi + 1 < strip.len() && has_v(strip[hi + 1]) {
        hi += 1;
    }
    while lo > 0 && has_v(strip[lo - 1]) {
        lo -= 1;
    }
    if lo == hi {
        return None;
    }
    let fan = mesh.fan(v);
    let n = fan.len() as i64;
    let a = fan.iter().position(|&f| f == strip[lo])? as i64;
    let b = fan.iter().position(|&f| f == strip[lo + 1])? as i64;
    let dir = if (b - a).rem_euclid(n) == 1 { 1 } else { -1 };
    if strip[lo] == strip[hi] {
        return None;
    }
    let other = fan_walk(mesh, v, strip[lo], strip[hi], -dir)?;
    let mut out = strip[..=lo].to_vec();
    out.extend(other);
    out.extend_from_slice(&strip[hi..]);
    Some(collapse(&out))
}

/// Straightens within the strip, rerouting around every vertex the taut
/// path catches on, until the path is free of bends or the budget runs out.
pub(crate) fn relax(
    mesh: &ConvexMesh,
    mut strip: Vec<u32>,
    p: &[SurfacePoint],
    q: &[SurfacePoint],
    budget: usize,
) -> Option<(StripPath, usize)> {
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut fallback: Option<StripPath> = None;
    let mut reroutes = 0;
    for _ in 0..budget {
        strip = trim(strip, p, q);
        if !seen.insert(strip.clone()) {
            break;
        }
        let path = straighten(mesh, &strip, p, q)?;
        let Some(&v) = path.bends.first() else {
            return Some((path, reroutes));
        };
        let next = reroute(mesh, &strip, v);
        if fallback.as_ref().is_none_or(|b| path.length < b.length) {
            fallback = Some(path);
        }
        match next {
            Some(next) => {
                strip = next;
                reroutes += 1;
            }
            None => break,
        }
    }
    fallback.map(|b| (b, reroutes))
}
