//! Characteristic foliations on embedded ball boundaries.
//!
//! The boundary sphere S³(r) of a domain ball carries the quaternionic
//! tangent frame {i·x, j·x, k·x}. Pushing the frame forward through a ball
//! embedding and restricting the ambient symplectic form gives a 3×3
//! antisymmetric Gram matrix whose kernel is the characteristic direction of
//! the image boundary. Orientation is fixed so that the component along the
//! pushforward of i·x (the Hopf direction) is positive.
//!
//! On top of the pointwise direction field this module provides:
//! * fixed-step RK4 tracing of characteristics with first-return detection,
//! * Hopf circles and discs (with image-area quadrature),
//! * detection of fully sampled (saturated) Hopf circles inside a compact
//!   boundary sample set, and
//! * construction of a "digging" Hamiltonian that strictly decreases along
//!   the Hopf flow on the sample set away from its saturated circles while
//!   vanishing to high order on the circles themselves.

use crate::embedding::{domain_norm, domain_to_c2, BallEmbedding, DomainPoint, SingularLocus};
use crate::projective::C;
use crate::quadrature::gauss_legendre;
use crate::{sampling, Error, Result};
use std::f64::consts::PI;

// ---------------------------------------------------------------------------
// Quaternionic frame and characteristic direction
// ---------------------------------------------------------------------------

/// Tangent frame {i·x, j·x, k·x} of S³(|x|) at x, viewing x ∈ ℝ⁴ ≅ ℂ²
/// as (x0 + i·x1, x2 + i·x3).
pub fn boundary_frame(x: &DomainPoint) -> Result<[DomainPoint; 3]> {
    if domain_norm(x) < 1e-12 {
        return Err(Error::DegenerateFrame("frame base point at origin".into()));
    }
    let ix = [-x[1], x[0], -x[3], x[2]];
    let jx = [-x[2], x[3], x[0], -x[1]];
    let kx = [-x[3], -x[2], x[1], x[0]];
    Ok([ix, jx, kx])
}

/// Rotate x by the Hopf flow: x ↦ e^{it}·x (complex scalar action on ℂ²).
pub fn hopf_rotate(x: &DomainPoint, t: f64) -> DomainPoint {
    let (c, s) = (t.cos(), t.sin());
    [
        x[0] * c - x[1] * s,
        x[0] * s + x[1] * c,
        x[2] * c - x[3] * s,
        x[2] * s + x[3] * c,
    ]
}

fn reproject(x: &DomainPoint, r: f64) -> DomainPoint {
    let n = domain_norm(x);
    [x[0] * r / n, x[1] * r / n, x[2] * r / n, x[3] * r / n]
}

fn push(cols: &[[C; 3]; 4], v: &DomainPoint) -> [C; 3] {
    let mut out = [C::new(0.0, 0.0); 3];
    for k in 0..4 {
        for c in 0..3 {
            out[c] += cols[k][c] * v[k];
        }
    }
    out
}

/// Characteristic direction of the image boundary at a boundary point x,
/// as a unit domain vector together with its (metric-normalized) image.
#[derive(Clone, Debug)]
pub struct CharDirection {
    /// Unit (Euclidean) tangent vector of S³(r) spanning the preimage of the
    /// characteristic line, oriented positively along the Hopf direction.
    pub domain: DomainPoint,
    /// Pushforward of `domain`, normalized in the ambient Kähler metric.
    pub image: [C; 3],
    /// Kernel coefficients in the frame {i·x, j·x, k·x}.
    pub coeffs: [f64; 3],
}

/// Compute the characteristic direction of ∂(image) at x ∈ S³(r).
///
/// The restriction of the ambient form to the pushed-forward frame is the
/// antisymmetric matrix [[0,a,b],[-a,0,c],[-b,-c,0]]; its kernel is spanned
/// by (c,-b,a). Errors with `DegenerateFrame` if the restricted form has
/// rank < 2 (kernel coefficients numerically zero).
pub fn characteristic_direction(emb: &BallEmbedding, x: &DomainPoint) -> Result<CharDirection> {
    let frame = boundary_frame(x)?;
    let rep = emb.eval(x);
    let cols = emb.differential(x, 1e-6);
    let xs: Vec<[C; 3]> = frame.iter().map(|v| push(&cols, v)).collect();
    let a = emb.ambient_form(&rep, &xs[0], &xs[1])?;
    let b = emb.ambient_form(&rep, &xs[0], &xs[2])?;
    let c = emb.ambient_form(&rep, &xs[1], &xs[2])?;
    let mut k = [c, -b, a];
    let kn = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
    if kn < 1e-10 {
        return Err(Error::DegenerateFrame(format!(
            "restricted form has rank < 2 at |x| = {} (|kernel| = {kn:.3e})",
            domain_norm(x)
        )));
    }
    if k[0] < 0.0 {
        for v in &mut k {
            *v = -*v;
        }
    }
    let mut d = [0.0; 4];
    for (ci, fv) in k.iter().zip(frame.iter()) {
        for j in 0..4 {
            d[j] += ci * fv[j];
        }
    }
    let dn = domain_norm(&d);
    for v in &mut d {
        *v /= dn;
    }
    let mut img = push(&cols, &d);
    let i_img = [
        img[0] * C::new(0.0, 1.0),
        img[1] * C::new(0.0, 1.0),
        img[2] * C::new(0.0, 1.0),
    ];
    let g = emb.ambient_form(&rep, &img, &i_img)?;
    if g > 0.0 {
        let s = g.sqrt();
        for v in &mut img {
            *v /= s;
        }
    }
    Ok(CharDirection {
        domain: d,
        image: img,
        coeffs: k,
    })
}

// ---------------------------------------------------------------------------
// Tracing
// ---------------------------------------------------------------------------

/// Result of tracing a characteristic from a boundary start point.
#[derive(Clone, Debug)]
pub struct TraceReport {
    /// Polyline of domain boundary points along the trace.
    pub points: Vec<DomainPoint>,
    /// Distance from the refined first-return point back to the start,
    /// or distance of the final point if no return was detected.
    pub return_distance: f64,
    /// Arc-length parameter of the first return, if detected.
    pub period: Option<f64>,
    /// Whether a first return through the transverse section was found.
    pub closed: bool,
    /// True if the trace was stopped near a declared singular point or a
    /// vanishing-clearance region of the embedding.
    pub truncated: bool,
    /// Number of full RK4 steps taken.
    pub steps: usize,
}

fn near_singular(emb: &BallEmbedding, x: &DomainPoint) -> bool {
    const SAFETY: f64 = 1e-4;
    if emb.clearance(x) < SAFETY {
        return true;
    }
    for s in &emb.singular_set {
        if let SingularLocus::Point(p) = s {
            let d = [x[0] - p[0], x[1] - p[1], x[2] - p[2], x[3] - p[3]];
            if domain_norm(&d) < SAFETY {
                return true;
            }
        }
    }
    false
}

fn rk4_step(
    emb: &BallEmbedding,
    x: &DomainPoint,
    h: f64,
    r: f64,
) -> Result<DomainPoint> {
    let f = |p: &DomainPoint| -> Result<DomainPoint> {
        Ok(characteristic_direction(emb, p)?.domain)
    };
    let add = |p: &DomainPoint, v: &DomainPoint, s: f64| -> DomainPoint {
        [p[0] + s * v[0], p[1] + s * v[1], p[2] + s * v[2], p[3] + s * v[3]]
    };
    let k1 = f(x)?;
    let k2 = f(&reproject(&add(x, &k1, 0.5 * h), r))?;
    let k3 = f(&reproject(&add(x, &k2, 0.5 * h), r))?;
    let k4 = f(&reproject(&add(x, &k3, h), r))?;
    let mut y = *x;
    for j in 0..4 {
        y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    Ok(reproject(&y, r))
}

/// Trace the characteristic through `start` with fixed-step RK4 and
/// reprojection onto |x| = r after every stage.
///
/// First return is detected through the affine hyperplane at `start`
/// orthogonal to the initial direction, and refined by bisecting the final
/// RK4 step, so the reported return distance reflects the accumulated
/// integration error rather than polyline interpolation error.
pub fn trace_characteristic(
    emb: &BallEmbedding,
    start: &DomainPoint,
    step: f64,
    max_steps: usize,
) -> Result<TraceReport> {
    let r = emb.radius;
    if (domain_norm(start) - r).abs() > 1e-9 * r.max(1.0) {
        return Err(Error::Domain(format!(
            "trace start must lie on the boundary sphere |x| = {r}, got |x| = {}",
            domain_norm(start)
        )));
    }
    if step <= 0.0 {
        return Err(Error::Parameter("trace step must be positive".into()));
    }
    let start = reproject(start, r);
    let d0 = characteristic_direction(emb, &start)?.domain;
    let section = |p: &DomainPoint| -> f64 {
        (p[0] - start[0]) * d0[0]
            + (p[1] - start[1]) * d0[1]
            + (p[2] - start[2]) * d0[2]
            + (p[3] - start[3]) * d0[3]
    };
    let dist_to_start = |p: &DomainPoint| -> f64 {
        let d = [p[0] - start[0], p[1] - start[1], p[2] - start[2], p[3] - start[3]];
        domain_norm(&d)
    };

    let mut points = vec![start];
    let mut x = start;
    let mut truncated = false;
    let mut steps = 0usize;
    let min_steps = ((4.0 * step).max(10.0 * step) / step) as usize; // guard against immediate re-detection

    for k in 0..max_steps {
        if near_singular(emb, &x) {
            truncated = true;
            break;
        }
        let y = rk4_step(emb, &x, step, r)?;
        steps = k + 1;
        let crossed = section(&x) < 0.0 && section(&y) >= 0.0;
        let close = dist_to_start(&y) < 1.5 * step || dist_to_start(&x) < 1.5 * step;
        if k + 1 > min_steps && crossed && close {
            // Refine the crossing time within [0, step] by bisection on the
            // actual flow restarted from x.
            let mut lo = 0.0f64;
            let mut hi = step;
            let mut p_hi = y;
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                let pm = rk4_step(emb, &x, mid, r)?;
                if section(&pm) >= 0.0 {
                    hi = mid;
                    p_hi = pm;
                } else {
                    lo = mid;
                }
                if hi - lo < 1e-15 {
                    break;
                }
            }
            points.push(p_hi);
            return Ok(TraceReport {
                return_distance: dist_to_start(&p_hi),
                period: Some(k as f64 * step + hi),
                closed: true,
                truncated,
                steps,
                points,
            });
        }
        x = y;
        points.push(x);
    }
    Ok(TraceReport {
        return_distance: dist_to_start(&x),
        period: None,
        closed: false,
        truncated,
        steps,
        points,
    })
}

// ---------------------------------------------------------------------------
// Hopf circles and discs
// ---------------------------------------------------------------------------

/// Normalized ℂ² representative, used as a point of the Hopf base CP¹.
pub type Cp1Rep = [C; 2];

/// Chordal distance between Hopf base points (Lagrange-identity form).
pub fn cp1_chordal(a: &Cp1Rep, b: &Cp1Rep) -> f64 {
    let cross = (a[0] * b[1] - a[1] * b[0]).norm();
    let na = (a[0].norm_sqr() + a[1].norm_sqr()).sqrt();
    let nb = (b[0].norm_sqr() + b[1].norm_sqr()).sqrt();
    (cross / (na * nb)).min(1.0)
}

/// A saturated Hopf circle {e^{it}·base} on the boundary sphere of one ball.
#[derive(Clone, Debug)]
pub struct HopfCircle {
    pub ball_index: usize,
    pub base: DomainPoint,
}

impl HopfCircle {
    pub fn radius(&self) -> f64 {
        domain_norm(&self.base)
    }

    pub fn point(&self, t: f64) -> DomainPoint {
        hopf_rotate(&self.base, t)
    }

    /// Hopf projection of the circle, as a unit ℂ² representative.
    pub fn projection(&self) -> Cp1Rep {
        let z = domain_to_c2(&self.base);
        let n = (z[0].norm_sqr() + z[1].norm_sqr()).sqrt();
        [z[0] / n, z[1] / n]
    }
}

/// The flat holomorphic disc spanning a Hopf circle: the intersection of the
/// complex line ℂ·base with the closed domain ball.
#[derive(Clone, Debug)]
pub struct HopfDisc {
    pub circle: HopfCircle,
}

impl HopfDisc {
    /// Exact symplectic area of the domain disc.
    pub fn domain_area(&self) -> f64 {
        let r = self.circle.radius();
        PI * r * r
    }

    /// Area of the image of the disc under `emb`, by tensor-product
    /// quadrature of the pulled-back ambient form in polar coordinates.
    pub fn image_area(&self, emb: &BallEmbedding) -> Result<f64> {
        let r = self.circle.radius();
        let z = domain_to_c2(&self.circle.base);
        let u = [z[0] / r, z[1] / r];
        let (nodes, weights) = gauss_legendre(48);
        let n_theta = 256usize;
        let dtheta = 2.0 * PI / n_theta as f64;
        let mut area = 0.0;
        for it in 0..n_theta {
            let theta = (it as f64 + 0.5) * dtheta;
            let e = C::new(0.0, theta).exp();
            for (nk, wk) in nodes.iter().zip(weights.iter()) {
                let rho = 0.5 * r * (nk + 1.0);
                let w_rho = 0.5 * r * wk;
                let lam = e * rho;
                let p = [lam * u[0], lam * u[1]];
                let x = [p[0].re, p[0].im, p[1].re, p[1].im];
                // ∂ρ = e^{iθ}u, ∂θ = iλu as real tangent vectors.
                let drho = [
                    (e * u[0]).re,
                    (e * u[0]).im,
                    (e * u[1]).re,
                    (e * u[1]).im,
                ];
                let ilam = lam * C::new(0.0, 1.0);
                let dth = [
                    (ilam * u[0]).re,
                    (ilam * u[0]).im,
                    (ilam * u[1]).re,
                    (ilam * u[1]).im,
                ];
                let rep = emb.eval(&x);
                let cols = emb.differential(&x, 1e-6);
                let a = push(&cols, &drho);
                let b = push(&cols, &dth);
                area += emb.ambient_form(&rep, &a, &b)? * w_rho * dtheta;
            }
        }
        Ok(area)
    }
}

// ---------------------------------------------------------------------------
// Compact boundary sample sets and saturated-circle detection
// ---------------------------------------------------------------------------

/// A finite sample of a compact subset K of one ball's boundary sphere.
#[derive(Clone, Debug)]
pub struct CompactBoundarySet {
    pub ball_index: usize,
    pub radius: f64,
    pub samples: Vec<DomainPoint>,
    /// Certified angular resolution of the sampling along Hopf fibers, in
    /// degrees. Must be ≤ 1°.
    pub resolution_deg: f64,
    /// Chordal clustering tolerance on the Hopf projection.
    pub projection_tol: f64,
}

impl CompactBoundarySet {
    pub fn new(ball_index: usize, radius: f64, resolution_deg: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::Parameter("boundary set radius must be positive".into()));
        }
        if !(resolution_deg > 0.0) || resolution_deg > 1.0 + 1e-12 {
            return Err(Error::Resolution(format!(
                "fiber sampling resolution must be in (0°, 1°], got {resolution_deg}°"
            )));
        }
        Ok(Self {
            ball_index,
            radius,
            samples: Vec::new(),
            resolution_deg,
            projection_tol: 1e-3,
        })
    }

    pub fn push(&mut self, x: DomainPoint) -> Result<()> {
        if (domain_norm(&x) - self.radius).abs() > 1e-9 * self.radius.max(1.0) {
            return Err(Error::Domain(format!(
                "sample off the boundary sphere: |x| = {}, r = {}",
                domain_norm(&x),
                self.radius
            )));
        }
        self.samples.push(x);
        Ok(())
    }

    /// Add a full Hopf fiber through `base`, sampled at `n` equispaced angles.
    pub fn add_circle(&mut self, base: &DomainPoint, n: usize) -> Result<()> {
        self.add_arc(base, 0.0, 2.0 * PI * (n as f64 - 1.0) / n as f64, n)
    }

    /// Add the fiber arc {e^{it}·base : t ∈ [t0, t1]} sampled at `n` points.
    pub fn add_arc(&mut self, base: &DomainPoint, t0: f64, t1: f64, n: usize) -> Result<()> {
        let b = reproject(base, self.radius);
        for k in 0..n {
            let t = if n == 1 {
                t0
            } else {
                t0 + (t1 - t0) * k as f64 / (n as f64 - 1.0)
            };
            self.push(hopf_rotate(&b, t))?;
        }
        Ok(())
    }

    fn projection_of(&self, x: &DomainPoint) -> Cp1Rep {
        let z = domain_to_c2(x);
        let n = (z[0].norm_sqr() + z[1].norm_sqr()).sqrt();
        [z[0] / n, z[1] / n]
    }
}

/// Detect the Hopf circles entirely contained in the sampled set K.
///
/// Samples are clustered by Hopf projection (chordal tolerance
/// `projection_tol`); a cluster yields a circle iff its fiber angles cover
/// S¹ with no gap exceeding the certified sampling resolution.
pub fn contained_circles(k: &CompactBoundarySet) -> Result<Vec<HopfCircle>> {
    let res_rad = k.resolution_deg.to_radians();
    // cluster reps, first-sample ℂ² value, and fiber angles
    let mut reps: Vec<Cp1Rep> = Vec::new();
    let mut firsts: Vec<[C; 2]> = Vec::new();
    let mut bases: Vec<DomainPoint> = Vec::new();
    let mut angles: Vec<Vec<f64>> = Vec::new();
    for x in &k.samples {
        let p = k.projection_of(x);
        let mut found = None;
        for (ci, rep) in reps.iter().enumerate() {
            if cp1_chordal(rep, &p) < k.projection_tol {
                found = Some(ci);
                break;
            }
        }
        let z = domain_to_c2(x);
        match found {
            Some(ci) => {
                let h = z[0] * firsts[ci][0].conj() + z[1] * firsts[ci][1].conj();
                angles[ci].push(h.arg());
            }
            None => {
                reps.push(p);
                firsts.push(z);
                bases.push(*x);
                angles.push(vec![0.0]);
            }
        }
    }
    let mut out = Vec::new();
    for (ci, mut ang) in angles.into_iter().enumerate() {
        if ang.len() < 3 {
            continue;
        }
        ang.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut max_gap = ang[0] + 2.0 * PI - ang[ang.len() - 1];
        for w in ang.windows(2) {
            max_gap = max_gap.max(w[1] - w[0]);
        }
        if max_gap <= res_rad + 1e-9 {
            out.push(HopfCircle {
                ball_index: k.ball_index,
                base: bases[ci],
            });
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Digging Hamiltonian
// ---------------------------------------------------------------------------

/// Quintic smoothstep: S(0)=S'(0)=S''(0)=0, S(1)=1, S'(1)=S''(1)=0.
fn smoothstep(u: f64) -> f64 {
    let u = u.clamp(0.0, 1.0);
    u * u * u * (10.0 - 15.0 * u + 6.0 * u * u)
}

/// One chart patch of the digging Hamiltonian's Hopf-base cover.
#[derive(Clone, Debug)]
pub struct DiggingPatch {
    /// Unit ℂ² representative of the patch center on CP¹.
    pub center: Cp1Rep,
    /// Chart index (0 or 1): the component of the center with the largest
    /// modulus, used as the phase reference of the local section.
    pub chart: usize,
    /// Start angle of the smoothstep rise interval (in the chart phase).
    pub rise_start: f64,
    /// Length of the rise interval; the fall occupies the complement.
    pub rise_len: f64,
}

impl DiggingPatch {
    /// Periodic profile: rises smoothly from 0 to 1 across the padded
    /// sample-angle arc, falls back inside the empty gap.
    fn profile(&self, t: f64) -> f64 {
        let s = (t - self.rise_start).rem_euclid(2.0 * PI);
        if s <= self.rise_len {
            smoothstep(s / self.rise_len)
        } else {
            1.0 - smoothstep((s - self.rise_len) / (2.0 * PI - self.rise_len))
        }
    }
}

/// Report of the verification sweep run by `build_digging_hamiltonian`.
#[derive(Clone, Debug)]
pub struct SweepReport {
    /// min over K∖𝒞 samples of −dH(iN) (positive ⇔ strictly decreasing).
    pub margin: f64,
    /// max finite-difference gradient norm over on-circle samples.
    pub max_circle_gradient: f64,
    pub checked_decreasing: usize,
    pub checked_circle: usize,
}

/// A Hamiltonian H on S³(r) built from a partition of unity over a chordal
/// ball cover of the Hopf projection of K∖𝒞, with per-patch fiber-angle
/// profiles; a cutoff vanishing to third order on the projections of the
/// saturated circles 𝒞 makes H flat along 𝒞.
#[derive(Clone, Debug)]
pub struct DiggingHamiltonian {
    pub ball_index: usize,
    pub radius: f64,
    /// Chordal radius of the cover patches (bump support radius).
    pub delta: f64,
    /// Chordal radius of the circle cutoff.
    pub cutoff_radius: f64,
    pub patches: Vec<DiggingPatch>,
    pub circle_projections: Vec<Cp1Rep>,
    pub circles: Vec<HopfCircle>,
    pub sweep: SweepReport,
}

impl DiggingHamiltonian {
    pub fn eval(&self, x: &DomainPoint) -> f64 {
        let z = domain_to_c2(x);
        let n = (z[0].norm_sqr() + z[1].norm_sqr()).sqrt();
        let proj = [z[0] / n, z[1] / n];
        let cutoff = if self.circle_projections.is_empty() {
            1.0
        } else {
            let dmin = self
                .circle_projections
                .iter()
                .map(|c| cp1_chordal(c, &proj))
                .fold(f64::INFINITY, f64::min);
            smoothstep(dmin / self.cutoff_radius)
        };
        if cutoff == 0.0 {
            return 0.0;
        }
        let mut sum = 0.0;
        for p in &self.patches {
            let d = cp1_chordal(&p.center, &proj);
            if d >= self.delta {
                continue;
            }
            let weight = smoothstep(1.0 - d / self.delta);
            let t = z[p.chart].arg();
            sum -= weight * p.profile(t);
        }
        cutoff * sum
    }

    /// Central finite difference of H along the Hopf flow direction iN
    /// (unit-speed: the Hopf velocity at radius r has norm r).
    pub fn hopf_derivative(&self, x: &DomainPoint) -> f64 {
        let eps = 1e-5;
        let hp = self.eval(&hopf_rotate(x, eps));
        let hm = self.eval(&hopf_rotate(x, -eps));
        (hp - hm) / (2.0 * eps * self.radius)
    }

    /// Finite-difference gradient norm of H restricted to the sphere.
    pub fn gradient_norm(&self, x: &DomainPoint) -> f64 {
        let eps = 1e-5;
        let r = self.radius;
        let mut g2 = 0.0;
        for j in 0..4 {
            let mut xp = *x;
            xp[j] += eps;
            let mut xm = *x;
            xm[j] -= eps;
            let d = (self.eval(&reproject(&xp, r)) - self.eval(&reproject(&xm, r))) / (2.0 * eps);
            g2 += d * d;
        }
        g2.sqrt()
    }
}

/// Build a digging Hamiltonian for K and verify it by a sweep over the
/// samples: strictly negative Hopf derivative on K∖𝒞 (margin reported) and
/// numerically vanishing gradient on the saturated circles 𝒞.
pub fn build_digging_hamiltonian(k: &CompactBoundarySet) -> Result<DiggingHamiltonian> {
    let circles = contained_circles(k)?;
    let circle_projections: Vec<Cp1Rep> = circles.iter().map(|c| c.projection()).collect();
    let circle_projs = circle_projections.clone();
    let proj_tol = k.projection_tol;
    let on_circle = move |x: &DomainPoint| -> bool {
        let p = {
            let z = domain_to_c2(x);
            let n = (z[0].norm_sqr() + z[1].norm_sqr()).sqrt();
            [z[0] / n, z[1] / n]
        };
        circle_projs
            .iter()
            .any(|c| cp1_chordal(c, &p) < proj_tol)
    };

    let delta = 0.2f64;
    // Greedy cover of the off-circle sample projections: centers at pairwise
    // chordal distance ≥ δ/2, so every projection has a bump weight ≥ S(1/2).
    let mut centers: Vec<Cp1Rep> = Vec::new();
    for x in &k.samples {
        if on_circle(x) {
            continue;
        }
        let p = k.projection_of(x);
        if centers.iter().all(|c| cp1_chordal(c, &p) >= 0.5 * delta) {
            centers.push(p);
        }
    }

    let mut patches = Vec::new();
    for center in centers {
        let chart = if center[0].norm() >= center[1].norm() { 0 } else { 1 };
        // Local-section injectivity: the chart component must stay bounded
        // away from zero on the whole patch.
        let mut angs: Vec<f64> = Vec::new();
        for x in &k.samples {
            if on_circle(x) {
                continue;
            }
            let p = k.projection_of(x);
            if cp1_chordal(&center, &p) < delta {
                if p[chart].norm() < 0.3 {
                    return Err(Error::Geometry(
                        "digging patch section is not injective: chart component vanishes on patch"
                            .into(),
                    ));
                }
                let z = domain_to_c2(x);
                angs.push(z[chart].arg());
            }
        }
        if angs.is_empty() {
            continue;
        }
        angs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut gap = angs[0] + 2.0 * PI - angs[angs.len() - 1];
        let mut gap_end = angs[0];
        for w in angs.windows(2) {
            if w[1] - w[0] > gap {
                gap = w[1] - w[0];
                gap_end = w[1];
            }
        }
        if gap < 1e-3 {
            return Err(Error::Geometry(
                "patch fiber angles are saturated but no circle was declared".into(),
            ));
        }
        let pad = (0.3f64).min(0.25 * gap);
        patches.push(DiggingPatch {
            center,
            chart,
            rise_start: gap_end - pad,
            rise_len: (2.0 * PI - gap) + 2.0 * pad,
        });
    }

    let mut h = DiggingHamiltonian {
        ball_index: k.ball_index,
        radius: k.radius,
        delta,
        cutoff_radius: 0.2,
        patches,
        circle_projections,
        circles,
        sweep: SweepReport {
            margin: f64::INFINITY,
            max_circle_gradient: 0.0,
            checked_decreasing: 0,
            checked_circle: 0,
        },
    };

    let mut margin = f64::INFINITY;
    let mut max_grad = 0.0f64;
    let mut n_dec = 0usize;
    let mut n_circ = 0usize;
    for x in &k.samples {
        if on_circle(x) {
            max_grad = max_grad.max(h.gradient_norm(x));
            n_circ += 1;
        } else {
            let g = h.hopf_derivative(x);
            margin = margin.min(-g);
            n_dec += 1;
        }
    }
    if n_dec > 0 && margin <= 0.0 {
        return Err(Error::Geometry(format!(
            "digging construction invalid: Hopf derivative not strictly negative (margin {margin:.3e})"
        )));
    }
    if n_circ > 0 && max_grad >= 1e-6 {
        return Err(Error::Geometry(format!(
            "digging construction invalid: gradient on saturated circles is {max_grad:.3e}"
        )));
    }
    h.sweep = SweepReport {
        margin: if n_dec > 0 { margin } else { 0.0 },
        max_circle_gradient: max_grad,
        checked_decreasing: n_dec,
        checked_circle: n_circ,
    };
    Ok(h)
}

/// Derivative of H along the oriented characteristic direction at x.
pub fn digging_derivative(
    h: &DiggingHamiltonian,
    emb: &BallEmbedding,
    x: &DomainPoint,
) -> Result<f64> {
    let d = characteristic_direction(emb, x)?.domain;
    let eps = 1e-5;
    let r = emb.radius;
    let xp = reproject(
        &[x[0] + eps * d[0], x[1] + eps * d[1], x[2] + eps * d[2], x[3] + eps * d[3]],
        r,
    );
    let xm = reproject(
        &[x[0] - eps * d[0], x[1] - eps * d[1], x[2] - eps * d[2], x[3] - eps * d[3]],
        r,
    );
    Ok((h.eval(&xp) - h.eval(&xm)) / (2.0 * eps))
}

/// Sign (−1, 0, +1) of dH along the oriented characteristic at x; values
/// below the finite-difference noise floor report 0.
pub fn digging_sign(h: &DiggingHamiltonian, emb: &BallEmbedding, x: &DomainPoint) -> Result<i8> {
    let g = digging_derivative(h, emb, x)?;
    if g.abs() < 1e-9 {
        Ok(0)
    } else {
        Ok(if g > 0.0 { 1 } else { -1 })
    }
}

// ---------------------------------------------------------------------------
// Randomized boundary-set builders (shared with the acceptance suite)
// ---------------------------------------------------------------------------

fn random_boundary_point(seed: u64, index: u64, r: f64) -> DomainPoint {
    let s = sampling::sphere3(seed, index);
    [r * s[0], r * s[1], r * s[2], r * s[3]]
}

/// K = a single non-saturated fiber arc.
pub fn kset_arc(seed: u64, r: f64) -> Result<CompactBoundarySet> {
    let mut k = CompactBoundarySet::new(0, r, 1.0)?;
    let base = random_boundary_point(seed, 1, r);
    let t0 = 2.0 * PI * sampling::uniform(seed, 2, 0);
    k.add_arc(&base, t0, t0 + 1.5, 180)?;
    Ok(k)
}

/// K = one saturated circle.
pub fn kset_circle(seed: u64, r: f64) -> Result<CompactBoundarySet> {
    let mut k = CompactBoundarySet::new(0, r, 1.0)?;
    let base = random_boundary_point(seed, 1, r);
    k.add_circle(&base, 720)?;
    Ok(k)
}

/// K = a saturated circle together with a disjoint 2-parameter patch of
/// partial fibers.
pub fn kset_circle_patch(seed: u64, r: f64) -> Result<CompactBoundarySet> {
    let mut k = CompactBoundarySet::new(0, r, 1.0)?;
    let base = random_boundary_point(seed, 1, r);
    k.add_circle(&base, 720)?;
    // Patch around a base point far from the circle's Hopf projection.
    let mut other = random_boundary_point(seed, 2, r);
    let bp = HopfCircle { ball_index: 0, base }.projection();
    for idx in 3..40 {
        let op = HopfCircle { ball_index: 0, base: other }.projection();
        if cp1_chordal(&bp, &op) > 0.6 {
            break;
        }
        other = random_boundary_point(seed, idx, r);
    }
    let t0 = 2.0 * PI * sampling::uniform(seed, 50, 0);
    for j in 0..8 {
        // small perturbations of the base within the patch
        let mut p = other;
        for d in 0..4 {
            p[d] += 0.02 * (sampling::uniform(seed, 100 + j, d as u64) - 0.5);
        }
        let p = reproject(&p, r);
        k.add_arc(&p, t0, t0 + 2.0, 60)?;
    }
    Ok(k)
}

/// K = two disjoint saturated circles.
pub fn kset_two_circles(seed: u64, r: f64) -> Result<CompactBoundarySet> {
    let mut k = CompactBoundarySet::new(0, r, 1.0)?;
    let b1 = random_boundary_point(seed, 1, r);
    let mut b2 = random_boundary_point(seed, 2, r);
    let p1 = HopfCircle { ball_index: 0, base: b1 }.projection();
    for idx in 3..40 {
        let p2 = HopfCircle { ball_index: 0, base: b2 }.projection();
        if cp1_chordal(&p1, &p2) > 0.4 {
            break;
        }
        b2 = random_boundary_point(seed, idx, r);
    }
    k.add_circle(&b1, 720)?;
    k.add_circle(&b2, 720)?;
    Ok(k)
}

/// K = an annulus patch of partial fibers over an arc of Hopf base points
/// on a torus |z₂| = const.
pub fn kset_annulus(seed: u64, r: f64) -> Result<CompactBoundarySet> {
    let mut k = CompactBoundarySet::new(0, r, 1.0)?;
    let c = r * (0.3 + 0.4 * sampling::uniform(seed, 1, 0));
    let a = (r * r - c * c).sqrt();
    let phi0 = 2.0 * PI * sampling::uniform(seed, 2, 0);
    let psi0 = 2.0 * PI * sampling::uniform(seed, 3, 0);
    for i in 0..24 {
        let phi = phi0 + 0.8 * i as f64 / 23.0;
        for j in 0..40 {
            let psi = psi0 + 2.0 * j as f64 / 39.0;
            let z1 = C::new(0.0, phi + psi).exp() * a;
            let z2 = C::new(0.0, psi).exp() * c;
            k.push([z1.re, z1.im, z2.re, z2.im])?;
        }
    }
    Ok(k)
}

/// Round boundary sphere S³(r) embedded by the identity into ℂ².
pub fn round_sphere_embedding(r: f64) -> Result<BallEmbedding> {
    crate::models::ball_in_ellipsoid(
        r,
        &crate::models::Ellipsoid::new(vec![PI * r * r, PI * r * r])?,
    )
}
