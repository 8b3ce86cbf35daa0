//! Shared boundary arcs, circle graphs, supporting surfaces, and exact
//! arithmetic certificates.
//!
//! Boundary spheres are scanned on Hopf-fiber-aligned grids (interior fibers
//! plus the two axis fibers, which carry the shared circles of all packings
//! in the example corpus). Matched runs along fibers become `SharedArc`s;
//! arcs whose image collapses to a point (e.g. domain arcs mapping onto a
//! pencil pole) are kept for coverage accounting but never create graph
//! edges. Fully shared circles route to two-ball spheres; the remaining
//! circles form the colored circle graph whose reduction and assembly yield
//! supporting surfaces. `dream_certificate` and `uniqueness_count_check`
//! perform the exact rational feasibility arithmetic.

use crate::characteristics::{cp1_chordal, hopf_rotate, Cp1Rep, HopfCircle, HopfDisc};
use crate::embedding::{domain_norm, BallEmbedding, DomainPoint, Packing};
use crate::projective::ProjectivePoint;
use crate::{Error, Result};
use num_rational::Ratio;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Minimum image arc length (chordal units) for an arc to support a graph
/// edge. Arcs below this are point contacts (collapsed images).
pub const MIN_EDGE_IMAGE_LENGTH: f64 = 0.01;

// ---------------------------------------------------------------------------
// Shared arcs
// ---------------------------------------------------------------------------

/// A matched run along one Hopf fiber of ball `balls.0` whose image lies on
/// the boundary of ball `balls.1` as well.
#[derive(Clone, Debug)]
pub struct SharedArc {
    pub balls: (usize, usize),
    /// The fiber of ball `balls.0` carrying the arc.
    pub circle: HopfCircle,
    /// Preimage of an arc midpoint in ball `balls.1` (a point of the partner
    /// fiber).
    pub partner_base: DomainPoint,
    /// Start angle and angular extent of the run on the fiber.
    pub t_start: f64,
    pub t_len: f64,
    /// Domain samples of ball `balls.0` along the arc.
    pub samples: Vec<DomainPoint>,
    /// Max boundary residual of the partner-ball preimages over the run.
    pub match_quality: f64,
    /// Chordal polyline length of the image arc.
    pub image_length: f64,
    /// Characteristic directions of the two boundaries aligned within
    /// 1e-3 radians at the arc midpoint.
    pub tangency: bool,
    /// The run covers the entire fiber.
    pub full: bool,
}

impl SharedArc {
    /// Whether this arc can support a circle-graph edge.
    pub fn edge_worthy(&self) -> bool {
        self.image_length >= MIN_EDGE_IMAGE_LENGTH
    }
}

fn fiber_base(r: f64, u: f64, chi: f64) -> DomainPoint {
    let a = r * u.sqrt();
    let b = r * (1.0 - u).sqrt();
    [a * chi.cos(), a * chi.sin(), b, 0.0]
}

/// Image tangent of the Hopf fiber through x under `emb`, in the given
/// affine chart, as a real 4-vector. None if the fiber image is collapsed
/// at x.
fn fiber_image_tangent(emb: &BallEmbedding, x: &DomainPoint, chart: usize) -> Option<[f64; 4]> {
    let h = 1e-4;
    let others: Vec<usize> = (0..3).filter(|&c| c != chart).collect();
    let coords = |t: f64| -> [f64; 4] {
        let rep = emb.eval(&hopf_rotate(x, t));
        let za = rep[others[0]] / rep[chart];
        let zb = rep[others[1]] / rep[chart];
        [za.re, za.im, zb.re, zb.im]
    };
    let p = coords(h);
    let m = coords(-h);
    let v = [
        (p[0] - m[0]) / (2.0 * h),
        (p[1] - m[1]) / (2.0 * h),
        (p[2] - m[2]) / (2.0 * h),
        (p[3] - m[3]) / (2.0 * h),
    ];
    if domain_norm(&v) < 1e-9 {
        None
    } else {
        Some(v)
    }
}

fn tangency_at(
    emb_i: &BallEmbedding,
    x: &DomainPoint,
    emb_j: &BallEmbedding,
    y: &DomainPoint,
) -> bool {
    // single shared chart, from the common image point
    let rep0 = emb_i.eval(x);
    let chart = (0..3)
        .max_by(|&a, &b| rep0[a].norm().partial_cmp(&rep0[b].norm()).unwrap())
        .unwrap();
    let (vi, vj) = match (
        fiber_image_tangent(emb_i, x, chart),
        fiber_image_tangent(emb_j, y, chart),
    ) {
        (Some(a), Some(b)) => (a, b),
        _ => return false,
    };
    // unsigned line alignment: the two balls may traverse the shared circle
    // with opposite Hopf orientations
    let dot: f64 = vi.iter().zip(vj.iter()).map(|(a, b)| a * b).sum();
    let cosang = (dot.abs() / (domain_norm(&vi) * domain_norm(&vj))).clamp(0.0, 1.0);
    cosang.acos() < 1e-3
}

/// Boundary residual of point `p` with respect to ball j: the domain
/// distance of its preimage from the boundary sphere, if a preimage exists.
fn boundary_residual(ball: &BallEmbedding, p: &ProjectivePoint) -> Option<(f64, DomainPoint)> {
    let y = ball.preimage(p)?;
    Some(((domain_norm(&y) - ball.radius).abs(), y))
}

/// Scan all ball boundaries on Hopf-fiber-aligned grids and detect the arcs
/// shared pairwise between them.
///
/// `resolution` is the number of samples per fiber (≥ 360). `eps_match`
/// defaults to 3× the fiber sampling density of the scanned ball; a value
/// below 1× the density is an undersampling error.
pub fn detect_shared_arcs(
    p: &Packing,
    resolution: usize,
    eps_match: Option<f64>,
) -> Result<Vec<SharedArc>> {
    if resolution < 360 {
        return Err(Error::Resolution(format!(
            "fiber resolution must be ≥ 360, got {resolution}"
        )));
    }
    let m_u = 16usize;
    let m_chi = 16usize;
    let mut tasks: Vec<(usize, DomainPoint)> = Vec::new();
    for (i, ball) in p.balls.iter().enumerate() {
        let r = ball.radius;
        tasks.push((i, fiber_base(r, 0.0, 0.0)));
        tasks.push((i, fiber_base(r, 1.0, 0.0)));
        for ku in 1..m_u {
            let u = ku as f64 / m_u as f64;
            for kc in 0..m_chi {
                let chi = 2.0 * PI * kc as f64 / m_chi as f64;
                tasks.push((i, fiber_base(r, u, chi)));
            }
        }
    }

    let arcs: Vec<Vec<SharedArc>> = tasks
        .par_iter()
        .map(|&(i, base)| -> Result<Vec<SharedArc>> {
            let ball = &p.balls[i];
            let r = ball.radius;
            let spacing = 2.0 * PI * r / resolution as f64;
            let eps = eps_match.unwrap_or(3.0 * spacing);
            if eps < spacing {
                return Err(Error::Resolution(format!(
                    "ε_match = {eps:.3e} is below the fiber sampling density {spacing:.3e}"
                )));
            }
            let mut out = Vec::new();
            // fiber samples and their images
            let ts: Vec<f64> = (0..resolution)
                .map(|s| 2.0 * PI * s as f64 / resolution as f64)
                .collect();
            let xs: Vec<DomainPoint> = ts.iter().map(|&t| hopf_rotate(&base, t)).collect();
            let imgs: Vec<ProjectivePoint> = xs.iter().map(|x| ball.point(x)).collect();
            for (j, other) in p.balls.iter().enumerate() {
                if j == i {
                    continue;
                }
                let matches: Vec<Option<(f64, DomainPoint)>> = imgs
                    .iter()
                    .map(|img| {
                        boundary_residual(other, img).filter(|(res, _)| *res < eps)
                    })
                    .collect();
                // cyclic runs of matched samples
                let matched: Vec<bool> = matches.iter().map(|m| m.is_some()).collect();
                if matched.iter().all(|&b| b) {
                    out.extend(make_arc(
                        ball, other, i, j, &base, &ts, &xs, &imgs, &matches, 0, resolution,
                        true, eps,
                    ));
                    continue;
                }
                if matched.iter().all(|&b| !b) {
                    continue;
                }
                // rotate so a run never wraps: start after an unmatched sample
                let start0 = (0..resolution)
                    .find(|&s| !matched[s])
                    .unwrap();
                let mut s = 0usize;
                while s < resolution {
                    let idx = (start0 + s) % resolution;
                    if !matched[idx] {
                        s += 1;
                        continue;
                    }
                    let run_start = s;
                    while s < resolution && matched[(start0 + s) % resolution] {
                        s += 1;
                    }
                    let run_len = s - run_start;
                    if run_len >= 3 {
                        out.extend(make_arc(
                            ball,
                            other,
                            i,
                            j,
                            &base,
                            &ts,
                            &xs,
                            &imgs,
                            &matches,
                            (start0 + run_start) % resolution,
                            run_len,
                            false,
                            eps,
                        ));
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(arcs.into_iter().flatten().collect())
}

#[allow(clippy::too_many_arguments)]
fn make_arc(
    ball: &BallEmbedding,
    other: &BallEmbedding,
    i: usize,
    j: usize,
    base: &DomainPoint,
    ts: &[f64],
    xs: &[DomainPoint],
    imgs: &[ProjectivePoint],
    matches: &[Option<(f64, DomainPoint)>],
    start: usize,
    len: usize,
    full: bool,
    eps: f64,
) -> Option<SharedArc> {
    let res = ts.len();
    let idxs: Vec<usize> = (0..len).map(|k| (start + k) % res).collect();
    let samples: Vec<DomainPoint> = idxs.iter().map(|&s| xs[s]).collect();
    let mut quality: f64 = 0.0;
    let mut residuals: Vec<f64> = Vec::with_capacity(len);
    for &s in &idxs {
        if let Some((r, _)) = &matches[s] {
            quality = quality.max(*r);
            residuals.push(*r);
        }
    }
    // Genuine shared arcs lie on both boundaries, so interior residuals sit
    // far below ε; near-parallel fibers at distance ~ε match everywhere with
    // residual ~ε and must be rejected.
    residuals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = residuals[residuals.len() / 2];
    if median > 0.1 * eps {
        return None;
    }
    let mut image_length = 0.0;
    for w in idxs.windows(2) {
        image_length += imgs[w[0]].chordal_distance(&imgs[w[1]]);
    }
    if full {
        image_length += imgs[idxs[len - 1]].chordal_distance(&imgs[idxs[0]]);
    }
    let mid = idxs[len / 2];
    let partner_base = matches[mid].as_ref().map(|(_, y)| *y).unwrap_or([0.0; 4]);
    let tangency = tangency_at(ball, &xs[mid], other, &partner_base);
    Some(SharedArc {
        balls: (i, j),
        circle: HopfCircle {
            ball_index: i,
            base: *base,
        },
        partner_base,
        t_start: ts[start],
        t_len: 2.0 * PI * len as f64 / res as f64,
        samples,
        match_quality: quality,
        image_length,
        tangency,
        full,
    })
}

// ---------------------------------------------------------------------------
// Circle graph
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Color {
    Black,
    Red,
}

#[derive(Clone, Debug)]
pub struct CircleVertex {
    pub circle: HopfCircle,
    pub color: Color,
    /// Stable label surviving graph reduction.
    pub label: usize,
}

#[derive(Clone, Debug)]
pub struct CircleGraph {
    pub vertices: Vec<CircleVertex>,
    /// Edges as unordered index pairs into `vertices`.
    pub edges: Vec<(usize, usize)>,
    /// Fully shared circles routed to two-ball spheres: (ball i, ball j,
    /// circle of ball i).
    pub spheres: Vec<(usize, usize, HopfCircle)>,
}

fn circle_key(c: &HopfCircle) -> (usize, Cp1Rep) {
    (c.ball_index, c.projection())
}

fn same_circle(a: &(usize, Cp1Rep), b: &(usize, Cp1Rep)) -> bool {
    a.0 == b.0 && cp1_chordal(&a.1, &b.1) < 2e-2
}

/// Build the colored circle graph from detected arcs.
///
/// Circles fully shared between exactly two balls are routed to the
/// `spheres` list. A remaining vertex is black iff its circle is covered by
/// the union of its arcs, with point-contact gaps bridged by image
/// proximity (a gap sample whose image coincides with a covered sample's
/// image — e.g. at collapsed poles — counts as covered).
pub fn build_circle_graph(arcs: &[SharedArc], p: &Packing) -> CircleGraph {
    // Cluster circles carrying arcs.
    let mut keys: Vec<(usize, Cp1Rep)> = Vec::new();
    let mut reps: Vec<HopfCircle> = Vec::new();
    let mut arc_ids: Vec<Vec<usize>> = Vec::new();
    let cluster_of = |c: &HopfCircle, keys: &mut Vec<(usize, Cp1Rep)>, reps: &mut Vec<HopfCircle>, arc_ids: &mut Vec<Vec<usize>>| -> usize {
        let k = circle_key(c);
        for (ci, key) in keys.iter().enumerate() {
            if same_circle(key, &k) {
                return ci;
            }
        }
        keys.push(k);
        reps.push(c.clone());
        arc_ids.push(Vec::new());
        keys.len() - 1
    };
    for (ai, arc) in arcs.iter().enumerate() {
        let ci = cluster_of(&arc.circle, &mut keys, &mut reps, &mut arc_ids);
        arc_ids[ci].push(ai);
    }

    // Route fully shared circles with a single partner ball.
    let mut routed = vec![false; reps.len()];
    let mut spheres: Vec<(usize, usize, HopfCircle)> = Vec::new();
    for ci in 0..reps.len() {
        let full_partners: Vec<usize> = arc_ids[ci]
            .iter()
            .filter(|&&ai| arcs[ai].full)
            .map(|&ai| arcs[ai].balls.1)
            .collect();
        if full_partners.is_empty() {
            continue;
        }
        let all_partners: std::collections::BTreeSet<usize> = arc_ids[ci]
            .iter()
            .filter(|&&ai| arcs[ai].edge_worthy() || arcs[ai].full)
            .map(|&ai| arcs[ai].balls.1)
            .collect();
        if all_partners.len() == 1 {
            routed[ci] = true;
            let i = reps[ci].ball_index;
            let j = full_partners[0];
            if !spheres
                .iter()
                .any(|(a, b, _)| (*a, *b) == (j, i) || (*a, *b) == (i, j))
            {
                spheres.push((i, j, reps[ci].clone()));
            }
        }
    }

    // Vertices and edges.
    let mut vertex_of_cluster: Vec<Option<usize>> = vec![None; reps.len()];
    let mut vertices: Vec<CircleVertex> = Vec::new();
    for ci in 0..reps.len() {
        if routed[ci] {
            continue;
        }
        vertex_of_cluster[ci] = Some(vertices.len());
        vertices.push(CircleVertex {
            circle: reps[ci].clone(),
            color: Color::Red,
            label: vertices.len(),
        });
    }
    let find_cluster = |c: &HopfCircle| -> Option<usize> {
        let k = circle_key(c);
        keys.iter().position(|key| same_circle(key, &k))
    };
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for arc in arcs {
        if !arc.edge_worthy() || arc.full {
            continue;
        }
        let ca = match find_cluster(&arc.circle).and_then(|c| vertex_of_cluster[c]) {
            Some(v) => v,
            None => continue,
        };
        let partner = HopfCircle {
            ball_index: arc.balls.1,
            base: arc.partner_base,
        };
        let cb = match find_cluster(&partner).and_then(|c| vertex_of_cluster[c]) {
            Some(v) => v,
            None => continue,
        };
        if ca == cb {
            continue;
        }
        let e = (ca.min(cb), ca.max(cb));
        if !edges.contains(&e) {
            edges.push(e);
        }
    }
    edges.sort_unstable();

    // Coloring: coverage of each vertex circle by the union of its arcs.
    for (ci, vopt) in vertex_of_cluster.iter().enumerate() {
        let Some(vi) = *vopt else { continue };
        let circle = &reps[ci];
        let ball = &p.balls[circle.ball_index];
        let res = 720usize;
        let mut covered = vec![false; res];
        for &ai in &arc_ids[ci] {
            let arc = &arcs[ai];
            // mark samples inside [t_start, t_start + t_len]
            for (s, c) in covered.iter_mut().enumerate() {
                let t = 2.0 * PI * s as f64 / res as f64;
                let rel = (t - arc.t_start).rem_euclid(2.0 * PI);
                if rel <= arc.t_len + 1e-9 {
                    *c = true;
                }
            }
        }
        if covered.iter().all(|&c| c) {
            vertices[vi].color = Color::Black;
            continue;
        }
        if covered.iter().all(|&c| !c) {
            continue; // stays red
        }
        // bridge gaps by image proximity to covered samples
        let imgs: Vec<ProjectivePoint> = (0..res)
            .map(|s| ball.point(&circle.point(2.0 * PI * s as f64 / res as f64)))
            .collect();
        let mut total_len = 0.0;
        for s in 0..res {
            total_len += imgs[s].chordal_distance(&imgs[(s + 1) % res]);
        }
        let eps_img = 3.0 * total_len / res as f64 + 1e-9;
        let all_covered = (0..res).all(|s| {
            covered[s]
                || (0..res).any(|t| covered[t] && imgs[s].chordal_distance(&imgs[t]) < eps_img)
        });
        if all_covered {
            vertices[vi].color = Color::Black;
        }
    }

    CircleGraph {
        vertices,
        edges,
        spheres,
    }
}

// ---------------------------------------------------------------------------
// Graph reduction
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct ErasureRecord {
    pub erased_label: usize,
    pub recolored: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct ReductionLog {
    pub erasures: Vec<ErasureRecord>,
    /// Whether lowest-index and highest-index erasure orders leave the same
    /// surviving vertex set (recorded, not asserted).
    pub order_robust: bool,
}

fn reduce_with<FSel>(g: &CircleGraph, select: FSel) -> (CircleGraph, Vec<ErasureRecord>)
where
    FSel: Fn(&[CircleVertex]) -> Option<usize>,
{
    let mut vertices = g.vertices.clone();
    let mut edges = g.edges.clone();
    let mut log = Vec::new();
    for _ in 0..g.vertices.len() {
        let Some(vi) = select(&vertices) else { break };
        let erased_label = vertices[vi].label;
        let mut recolored = Vec::new();
        let neighbors: Vec<usize> = edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == vi {
                    Some(b)
                } else if b == vi {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        for nb in neighbors {
            if vertices[nb].color == Color::Black {
                vertices[nb].color = Color::Red;
                recolored.push(vertices[nb].label);
            }
        }
        edges.retain(|&(a, b)| a != vi && b != vi);
        // remove vertex, remapping edge indices
        vertices.remove(vi);
        for e in &mut edges {
            if e.0 > vi {
                e.0 -= 1;
            }
            if e.1 > vi {
                e.1 -= 1;
            }
        }
        log.push(ErasureRecord {
            erased_label,
            recolored,
        });
    }
    (
        CircleGraph {
            vertices,
            edges,
            spheres: g.spheres.clone(),
        },
        log,
    )
}

/// Repeatedly erase the lowest-labeled red vertex, recoloring its neighbors
/// red, until no red vertex remains. Also runs the highest-label order and
/// records whether the surviving set agrees.
pub fn reduce_graph(g: &CircleGraph) -> (CircleGraph, ReductionLog) {
    let lowest = |vs: &[CircleVertex]| -> Option<usize> {
        vs.iter()
            .enumerate()
            .filter(|(_, v)| v.color == Color::Red)
            .min_by_key(|(_, v)| v.label)
            .map(|(i, _)| i)
    };
    let highest = |vs: &[CircleVertex]| -> Option<usize> {
        vs.iter()
            .enumerate()
            .filter(|(_, v)| v.color == Color::Red)
            .max_by_key(|(_, v)| v.label)
            .map(|(i, _)| i)
    };
    let (out, erasures) = reduce_with(g, lowest);
    let (alt, _) = reduce_with(g, highest);
    let survivors: std::collections::BTreeSet<usize> =
        out.vertices.iter().map(|v| v.label).collect();
    let alt_survivors: std::collections::BTreeSet<usize> =
        alt.vertices.iter().map(|v| v.label).collect();
    (
        out,
        ReductionLog {
            erasures,
            order_robust: survivors == alt_survivors,
        },
    )
}

// ---------------------------------------------------------------------------
// Supporting surfaces
// ---------------------------------------------------------------------------

/// A closed surface assembled from Hopf discs of the packing's balls.
#[derive(Clone, Debug)]
pub struct SupportingSurface {
    pub discs: Vec<HopfDisc>,
    /// Number of discs contributed by each ball of the packing.
    pub multiplicities: Vec<usize>,
    /// Total symplectic area Σ π rᵢ² (domain-exact).
    pub area: f64,
    /// area/π as an exact rational, when every r² is recognizably rational.
    pub area_over_pi: Option<Ratio<i64>>,
    /// Surface degree d = area/π when integral.
    pub degree: Option<i64>,
}

/// Recover a small-denominator rational from a float (continued fractions).
pub fn rational_approx(x: f64, tol: f64, max_den: i64) -> Option<Ratio<i64>> {
    let mut a = x;
    let (mut p0, mut q0, mut p1, mut q1) = (1i64, 0i64, a.floor() as i64, 1i64);
    for _ in 0..64 {
        let approx = p1 as f64 / q1 as f64;
        if (approx - x).abs() < tol {
            return Some(Ratio::new(p1, q1));
        }
        let frac = a - a.floor();
        if frac.abs() < 1e-15 {
            break;
        }
        a = 1.0 / frac;
        let ai = a.floor() as i64;
        let p2 = ai.checked_mul(p1)?.checked_add(p0)?;
        let q2 = ai.checked_mul(q1)?.checked_add(q0)?;
        if q2 > max_den {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    None
}

fn surface_from_discs(discs: Vec<HopfDisc>, n_balls: usize) -> SupportingSurface {
    let mut multiplicities = vec![0usize; n_balls];
    let mut area = 0.0;
    let mut area_over_pi = Some(Ratio::new(0i64, 1i64));
    for d in &discs {
        let bi = d.circle.ball_index;
        if bi < n_balls {
            multiplicities[bi] += 1;
        }
        let r2 = d.circle.radius().powi(2);
        area += PI * r2;
        area_over_pi = match (area_over_pi, rational_approx(r2, 1e-9, 1_000_000)) {
            (Some(acc), Some(q)) => Some(acc + q),
            _ => None,
        };
    }
    let degree = area_over_pi.and_then(|q| {
        if q.is_integer() {
            Some(q.to_integer())
        } else {
            None
        }
    });
    SupportingSurface {
        discs,
        multiplicities,
        area,
        area_over_pi,
        degree,
    }
}

/// Assemble one supporting surface per connected component of an all-black
/// circle graph.
pub fn assemble_surfaces(g: &CircleGraph, p: &Packing) -> Result<Vec<SupportingSurface>> {
    if g.vertices.iter().any(|v| v.color == Color::Red) {
        return Err(Error::Geometry(
            "assemble_surfaces requires an all-black graph (run reduce_graph first)".into(),
        ));
    }
    let n = g.vertices.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    for &(a, b) in &g.edges {
        let ra = find(&mut parent, a);
        let rb = find(&mut parent, b);
        parent[ra] = rb;
    }
    let mut comps: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for v in 0..n {
        let r = find(&mut parent, v);
        comps.entry(r).or_default().push(v);
    }
    let mut out = Vec::new();
    for (_, members) in comps {
        let discs: Vec<HopfDisc> = members
            .iter()
            .map(|&v| HopfDisc {
                circle: g.vertices[v].circle.clone(),
            })
            .collect();
        out.push(surface_from_discs(discs, p.balls.len()));
    }
    Ok(out)
}

/// The two-ball sphere spanned by a fully shared Hopf circle: two Hopf
/// discs glued along the circle, of total area π(rᵢ² + rⱼ²).
pub fn two_ball_sphere(
    p: &Packing,
    i: usize,
    j: usize,
    c: &HopfCircle,
) -> Result<SupportingSurface> {
    let bi = &p.balls[i];
    let bj = &p.balls[j];
    // verify full sharing
    let mut partner = None;
    for s in 0..360 {
        let t = 2.0 * PI * s as f64 / 360.0;
        let img = bi.point(&c.point(t));
        match boundary_residual(bj, &img) {
            Some((res, y)) if res < 1e-6 => {
                if partner.is_none() {
                    partner = Some(y);
                }
            }
            _ => {
                return Err(Error::Geometry(format!(
                    "routing error: circle is not fully shared between balls {i} and {j}"
                )))
            }
        }
    }
    let partner_base = partner.unwrap();
    let discs = vec![
        HopfDisc { circle: c.clone() },
        HopfDisc {
            circle: HopfCircle {
                ball_index: j,
                base: partner_base,
            },
        },
    ];
    Ok(surface_from_discs(discs, p.balls.len()))
}

// ---------------------------------------------------------------------------
// Dream certificates and intersection counting
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DreamRecord {
    /// Surface degree (area/π).
    pub d: i64,
    /// Disc multiset (k₁ ≥ … ≥ k_n ≥ 1).
    pub multiset: Vec<i64>,
    /// δ = Σ kᵢ(kᵢ−1)/2.
    pub delta: i64,
}

#[derive(Clone, Debug)]
pub struct DreamCertificate {
    pub n: usize,
    pub r2: Ratio<i64>,
    pub records: Vec<DreamRecord>,
}

fn partitions_into(m: i64, parts: usize, max_part: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if parts == 0 {
        if m == 0 {
            out.push(cur.clone());
        }
        return;
    }
    let lo = 1i64;
    let hi = max_part.min(m - (parts as i64 - 1));
    for k in (lo..=hi).rev() {
        cur.push(k);
        partitions_into(m - k, parts - 1, k, cur, out);
        cur.pop();
    }
}

/// Enumerate feasible supporting-surface records for n equal balls of
/// squared radius r² (exact rational, in units of π): degrees d ≤ d_max
/// with m = Σ kᵢ discs satisfying m·r² = d and the adjunction bound
/// δ = Σ kᵢ(kᵢ−1)/2 ≤ (d−1)(d−2)/2, each ball contributing kᵢ ≥ 1 discs.
pub fn dream_certificate(n: usize, r2: Ratio<i64>, d_max: i64) -> Result<DreamCertificate> {
    if d_max < 1 {
        return Err(Error::Parameter(format!(
            "d_max must be ≥ 1, got {d_max}"
        )));
    }
    if n < 2 {
        return Err(Error::Parameter("need at least two balls".into()));
    }
    if *r2.numer() <= 0 {
        return Err(Error::Parameter("r² must be positive".into()));
    }
    let mut records = Vec::new();
    for d in 1..=d_max {
        let m_rat = Ratio::from_integer(d) / r2;
        if !m_rat.is_integer() {
            continue;
        }
        let m = m_rat.to_integer();
        if m < n as i64 {
            continue;
        }
        let adjunction = (d - 1) * (d - 2) / 2;
        let mut parts = Vec::new();
        partitions_into(m, n, m, &mut Vec::new(), &mut parts);
        for multiset in parts {
            let delta: i64 = multiset.iter().map(|k| k * (k - 1) / 2).sum();
            if delta <= adjunction {
                records.push(DreamRecord { d, multiset, delta });
            }
        }
    }
    Ok(DreamCertificate { n, r2, records })
}

#[derive(Clone, Debug)]
pub struct PairCheck {
    pub surfaces: (usize, usize),
    /// Homological product d·d′.
    pub product: i64,
    /// Center intersection count Σ kᵢ·kᵢ′.
    pub count: i64,
    pub flagged: bool,
}

#[derive(Clone, Debug)]
pub struct CountCheckReport {
    pub pairs: Vec<PairCheck>,
    pub any_flagged: bool,
}

/// For each pair of distinct surfaces, compare the homological intersection
/// product d·d′ with the ball-center count Σ kᵢ·kᵢ′; flag disagreements.
pub fn uniqueness_count_check(surfaces: &[SupportingSurface]) -> CountCheckReport {
    let mut pairs = Vec::new();
    for a in 0..surfaces.len() {
        for b in (a + 1)..surfaces.len() {
            let (sa, sb) = (&surfaces[a], &surfaces[b]);
            let (Some(da), Some(db)) = (sa.degree, sb.degree) else {
                continue;
            };
            let count: i64 = sa
                .multiplicities
                .iter()
                .zip(sb.multiplicities.iter())
                .map(|(&x, &y)| (x * y) as i64)
                .sum();
            let product = da * db;
            pairs.push(PairCheck {
                surfaces: (a, b),
                product,
                count,
                flagged: product != count,
            });
        }
    }
    CountCheckReport {
        any_flagged: pairs.iter().any(|p| p.flagged),
        pairs,
    }
}
