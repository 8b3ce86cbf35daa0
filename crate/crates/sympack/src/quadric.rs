//! The quadric Q = {z₀²+z₁²+z₂² = 0} ⊂ CP², the disc fibration of CP²∖ℝP²
//! over Q with fibers [x + w·x̄] of area π/2, the equal-area lune partition of
//! Q, and the ball packings built on it: the full 4-ball packing (radius
//! 1/√2) and the regular 5-ball packing (radius √(2/5)).
//!
//! Bundle chart used throughout: a lune is parameterized by square
//! coordinates (x, y) ∈ [−1,1]² with longitude φ = (π/n)(x+1) + 2πj/n and
//! latitude y = (1−|t|²)/(1+|t|²); the fiber carries the area coordinate
//! A ∈ [0, π/2) (Fubini–Study area of the sub-disc) and the gauge-fixed angle
//! θ_w. In these coordinates the ambient form restricted to the bundle is
//!     ω̃ = (1−2A/π)·τ + (1/2π)·dA∧(dθ_w + γ),
//! with τ = (π/2n)dx∧dy and connection γ = −(2π/n)(1−y)dx. The fibered
//! symplectomorphism onto the ellipsoid ℰ(2π/n, π/2) is
//!     Ξ(x,y,A,θ_w) = (σ√(1−2A/π)e^{iψ}, √(A/π)e^{i(θ_w+h̃)}),
//! where (σ, ψ) is the polar form of R·(square-to-disc)(x,y) with R = √(2/n)
//! and h̃ = (π/n)(xy − 2x) solves dh̃ = γ + 2σ²dψ. A ball embedding is the
//! inverse of Ξ followed by (t, w) ↦ [u(t) + w·ū(t)].

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use crate::embedding::{Ambient, BallEmbedding, DomainPoint, Packing, SingularLocus};
use crate::models::{ball_in_ellipsoid, Ellipsoid};
use crate::projective::{fubini_study_rep, herm, norm_sqr, ProjectivePoint, C};
use crate::quadrature::gl_adaptive;
use crate::{Error, Result};

/// A point of the quadric with its pencil parameter (None = t at infinity)
/// and the canonical unit-norm representative used as fiber gauge.
#[derive(Clone, Debug)]
pub struct QuadricPoint {
    pub p: ProjectivePoint,
    pub t: Option<C>,
}

/// Bilinear quadric value q(z) = z₀² + z₁² + z₂² of a representative.
pub fn q_value(h: &[C; 3]) -> C {
    h[0] * h[0] + h[1] * h[1] + h[2] * h[2]
}

fn conj3(h: &[C; 3]) -> [C; 3] {
    [h[0].conj(), h[1].conj(), h[2].conj()]
}

/// Rational parameterization [s:t] ↦ [s²−t² : i(s²+t²) : 2st], taken at
/// [1:t] (or [0:1] for t = ∞) and normalized to unit norm. The returned
/// representative is the fiber gauge: w-coordinates are taken in the basis
/// (rep, conj rep) of this exact representative.
pub fn quadric_param(t: Option<C>) -> QuadricPoint {
    let v: [C; 3] = match t {
        Some(t) if t.norm_sqr() <= 1e30 => {
            let t2 = t * t;
            [
                C::new(1.0, 0.0) - t2,
                C::new(0.0, 1.0) * (C::new(1.0, 0.0) + t2),
                2.0 * t,
            ]
        }
        _ => [C::new(-1.0, 0.0), C::new(0.0, 1.0), C::new(0.0, 0.0)],
    };
    let n = norm_sqr(&v).sqrt();
    let mut rep = [v[0] / n, v[1] / n, v[2] / n];
    // one Newton projection step on q to pin |q| < 1e−12 after rounding
    let q = q_value(&rep);
    let lam = -q / (2.0 * norm_sqr(&rep));
    let c = conj3(&rep);
    for i in 0..3 {
        rep[i] += lam * c[i];
    }
    let t = match t {
        Some(t) if t.norm_sqr() <= 1e30 => Some(t),
        _ => None,
    };
    QuadricPoint {
        p: ProjectivePoint { h: rep },
        t,
    }
}

impl QuadricPoint {
    pub fn rep(&self) -> [C; 3] {
        self.p.h
    }

    pub fn q_residual(&self) -> f64 {
        q_value(&self.p.h).norm() / norm_sqr(&self.p.h)
    }
}

/// Pencil parameter of a quadric cone point: t = x₂/(x₀ − i·x₁), recovered
/// through the homogeneous branch (s², t², st) for stability near the poles.
pub fn pencil_parameter(x: &[C; 3]) -> Option<C> {
    let i = C::new(0.0, 1.0);
    let s2 = (x[0] - i * x[1]) / 2.0; // = s²·(scale)
    let t2 = -(x[0] + i * x[1]) / 2.0; // = t²·(scale)
    let st = x[2] / 2.0;
    // affine parameter t/s, from whichever ratio is numerically dominant
    let aff = if s2.norm() >= t2.norm() {
        if s2.norm() == 0.0 {
            return None;
        }
        st / s2
    } else {
        if st.norm_sqr() <= 1e-30 * t2.norm_sqr() {
            return None; // s ≈ 0: the point at infinity
        }
        t2 / st
    };
    if aff.is_finite() && aff.norm_sqr() <= 1e30 {
        Some(aff)
    } else {
        None
    }
}

/// Fiber coordinates of a point of CP²∖ℝP²: base point on Q, raw fiber
/// coordinate w (|w| < 1) in the gauge of the base's canonical
/// representative, and the area-normalized radius s ∈ [0, 1) with
/// area(|w'| ≤ |w|) = (π/2)s².
#[derive(Clone, Debug)]
pub struct FiberCoordinates {
    pub base: QuadricPoint,
    pub w: C,
    pub s: f64,
}

/// Both roots λ± of q(z + λ·z̄) = 0 for a unit-norm representative; λ₊ is the
/// contracting root (|λ₊| ≤ 1 ≤ |λ₋|, strict off ℝP²).
pub fn projection_roots(z: &[C; 3]) -> (C, C) {
    let n2 = norm_sqr(z);
    let q = q_value(z);
    let d = (n2 * n2 - q.norm_sqr()).max(0.0).sqrt();
    let s = n2 + d;
    let lam_plus = -q / s;
    let lam_minus = if q.norm() > 0.0 {
        -C::new(s, 0.0) / q.conj()
    } else {
        C::new(f64::INFINITY, 0.0)
    };
    (lam_plus, lam_minus)
}

/// Decompose z = x + w·x̄ with x on the quadric cone and |w| < 1, returning w
/// in the gauge of the canonical representative of the base point. The
/// normalized radius s comes from the quadrature-backed fiber profile.
pub fn project_to_quadric(z: &ProjectivePoint) -> Result<FiberCoordinates> {
    let (base, w) = project_to_quadric_raw(z)?;
    let profile = fiber_area_profile(&base);
    let s = (2.0 * profile.area(w.norm().min(1.0)) / PI).max(0.0).sqrt();
    Ok(FiberCoordinates { base, w, s })
}

/// The projection without the quadrature-backed s-coordinate (the fast path
/// used inside packing membership chains).
pub fn project_to_quadric_raw(z: &ProjectivePoint) -> Result<(QuadricPoint, C)> {
    let zn = z.normalize();
    let n2 = norm_sqr(&zn.h);
    let q = q_value(&zn.h);
    let d2 = n2 * n2 - q.norm_sqr();
    if d2.max(0.0).sqrt() / n2 < 1e-9 {
        return Err(Error::Domain(format!(
            "point is within ~1e-9 of the real locus RP^2 (|q| = {:.3e} of |z|^2)",
            q.norm()
        )));
    }
    let (lam, _) = projection_roots(&zn.h);
    let zc = conj3(&zn.h);
    let mut x = [C::new(0.0, 0.0); 3];
    for i in 0..3 {
        x[i] = zn.h[i] + lam * zc[i];
    }
    // one Newton step pins q(x) to rounding level
    let qx = q_value(&x);
    let lam2 = -qx / (2.0 * norm_sqr(&x));
    let xc = conj3(&x);
    for i in 0..3 {
        x[i] += lam2 * xc[i];
    }
    let t = pencil_parameter(&x);
    let base = quadric_param(t);
    // linear solve z = α·rep + w·conj(rep) in hermitian inner products
    let rep = base.rep();
    let repc = conj3(&rep);
    let a = herm(&zn.h, &rep); // ⟨z, rep⟩
    let b = herm(&zn.h, &repc); // ⟨z, conj rep⟩
    let qr = q_value(&rep); // ⟨rep, conj rep⟩, ~1e−15
    let det = C::new(1.0, 0.0) - qr * qr.conj();
    let alpha = (a - qr.conj() * b) / det;
    let w_raw = (b - qr * a) / det;
    if alpha.norm() < 1e-12 {
        return Err(Error::Geometry(
            "degenerate fiber decomposition: base coefficient vanished".into(),
        ));
    }
    let w = w_raw / alpha;
    if w.norm() >= 1.0 + 1e-9 {
        return Err(Error::Geometry(format!(
            "fiber coordinate |w| = {} escaped the unit disc (internal inconsistency)",
            w.norm()
        )));
    }
    Ok((base, w))
}

/// Monotone fiber-area profile ρ ↦ area{|w| ≤ ρ} of the disc fiber over a
/// base point, computed by 1-D quadrature of the ambient area form.
#[derive(Clone)]
pub struct FiberAreaProfile {
    rep: [C; 3],
    total: f64,
}

fn fiber_density(rep: &[C; 3], w: C) -> f64 {
    // ω(∂_Re w, ∂_Im w) at the representative x + w·x̄
    let xc = conj3(rep);
    let mut v = *rep;
    for i in 0..3 {
        v[i] += w * xc[i];
    }
    let ix = [
        C::new(0.0, 1.0) * xc[0],
        C::new(0.0, 1.0) * xc[1],
        C::new(0.0, 1.0) * xc[2],
    ];
    fubini_study_rep(&v, &xc, &ix).expect("nonzero representative")
}

impl FiberAreaProfile {
    /// Area of the sub-disc |w| ≤ ρ, by Gauss–Legendre quadrature of the
    /// radial density (averaged over four fiber angles as a cross-check of
    /// circular symmetry).
    pub fn area(&self, rho: f64) -> f64 {
        if rho <= 0.0 {
            return 0.0;
        }
        let rep = self.rep;
        gl_adaptive(
            &|r: f64| {
                let mut d = 0.0;
                for k in 0..4 {
                    let w = C::from_polar(r, 0.5 * PI * k as f64 + 0.1);
                    d += fiber_density(&rep, w);
                }
                2.0 * PI * r * d / 4.0
            },
            0.0,
            rho.min(1.0),
            32,
            1e-12,
        )
    }

    /// Total fiber area (ρ → 1 limit).
    pub fn total(&self) -> f64 {
        self.total
    }

    /// Invert the normalized radius: the ρ with area(ρ) = (π/2)s², by
    /// bisection to 1e−10.
    pub fn rho_of_s(&self, s: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&s) {
            return Err(Error::Parameter(format!(
                "normalized fiber radius s must lie in [0,1), got {s}"
            )));
        }
        let target = 0.5 * PI * s * s;
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if self.area(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-10 {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

fn profile_cache() -> &'static Mutex<HashMap<[i64; 6], f64>> {
    static CACHE: OnceLock<Mutex<HashMap<[i64; 6], f64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Fiber-area profile over `x`, with the total cached per (quantized) base
/// point across the run.
pub fn fiber_area_profile(x: &QuadricPoint) -> FiberAreaProfile {
    let rep = x.rep();
    let key: [i64; 6] = [
        (rep[0].re * 1e9).round() as i64,
        (rep[0].im * 1e9).round() as i64,
        (rep[1].re * 1e9).round() as i64,
        (rep[1].im * 1e9).round() as i64,
        (rep[2].re * 1e9).round() as i64,
        (rep[2].im * 1e9).round() as i64,
    ];
    if let Some(&total) = profile_cache().lock().unwrap().get(&key) {
        return FiberAreaProfile { rep, total };
    }
    let mut profile = FiberAreaProfile { rep, total: 0.0 };
    profile.total = profile.area(1.0);
    profile_cache().lock().unwrap().insert(key, profile.total);
    profile
}

/// Fubini–Study area density of Q in the pencil parameter t (the pullback of
/// the area form along quadric_param is density(t)·dRe(t)∧dIm(t)).
pub fn quadric_density(t: C) -> f64 {
    let t2 = t * t;
    let u = [
        C::new(1.0, 0.0) - t2,
        C::new(0.0, 1.0) * (C::new(1.0, 0.0) + t2),
        2.0 * t,
    ];
    let du = [-2.0 * t, C::new(0.0, 2.0) * t, C::new(2.0, 0.0)];
    let idu = [
        C::new(0.0, 1.0) * du[0],
        C::new(0.0, 1.0) * du[1],
        C::new(0.0, 1.0) * du[2],
    ];
    fubini_study_rep(&u, &du, &idu).expect("nonzero representative")
}

/// Total Fubini–Study area of Q by adaptive quadrature (latitude substitution
/// y = (1−ρ²)/(1+ρ²), angle-averaged density).
pub fn quadric_area() -> f64 {
    lune_area_between(0.0, 2.0 * PI)
}

fn lune_area_between(phi0: f64, phi1: f64) -> f64 {
    // area = ∫∫ density(ρe^{iφ}) ρ dρ dφ with ρdρ = dy/(1+y)² (up to sign)
    gl_adaptive(
        &|phi: f64| {
            gl_adaptive(
                &|y: f64| {
                    let rho = ((1.0 - y) / (1.0 + y)).sqrt();
                    let t = C::from_polar(rho, phi);
                    quadric_density(t) / ((1.0 + y) * (1.0 + y))
                },
                -1.0 + 1e-12,
                1.0 - 1e-12,
                32,
                1e-10,
            )
        },
        phi0,
        phi1,
        16,
        1e-9,
    )
}

/// The equal-area partition of Q into n lunes between the poles t = 0, ∞,
/// with meridian boundaries at longitudes 2πj/n.
#[derive(Clone, Debug)]
pub struct LunePartition {
    pub n: usize,
}

impl LunePartition {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Parameter("partition needs at least 2 lunes".into()));
        }
        Ok(LunePartition { n })
    }

    /// Index of the lune containing longitude arg(t); poles belong to every
    /// boundary and report lune 0.
    pub fn lune_of(&self, t: Option<C>) -> usize {
        match t {
            None => 0,
            Some(t) if t.norm_sqr() == 0.0 => 0,
            Some(t) => {
                let phi = t.arg().rem_euclid(2.0 * PI);
                ((phi * self.n as f64 / (2.0 * PI)).floor() as usize).min(self.n - 1)
            }
        }
    }

    /// Area of lune j by quadrature (each should be 2π/n).
    pub fn area(&self, j: usize) -> f64 {
        let phi0 = 2.0 * PI * j as f64 / self.n as f64;
        let phi1 = 2.0 * PI * (j + 1) as f64 / self.n as f64;
        lune_area_between(phi0, phi1)
    }

    /// Sampled meridian boundary between lunes j−1 and j.
    pub fn boundary_meridian(&self, j: usize, samples: usize) -> Vec<QuadricPoint> {
        let phi = 2.0 * PI * j as f64 / self.n as f64;
        (0..samples)
            .map(|k| {
                // latitude sweep pole-to-pole
                let y = -1.0 + 2.0 * (k as f64 + 0.5) / samples as f64;
                let rho = ((1.0 - y) / (1.0 + y)).sqrt();
                quadric_param(Some(C::from_polar(rho, phi)))
            })
            .collect()
    }
}

// ---------------------------------------------------------------------------
// square <-> disc (the concentric area-preserving map, two branches)
// ---------------------------------------------------------------------------

/// Area-preserving map [−1,1]² → unit disc (concentric construction).
pub fn square_to_disc(x: f64, y: f64) -> (f64, f64) {
    if x == 0.0 && y == 0.0 {
        return (0.0, 0.0);
    }
    if x.abs() >= y.abs() {
        let b = 0.25 * PI * (y / x);
        (x * b.cos(), x * b.sin())
    } else {
        let b = 0.25 * PI * (x / y);
        (y * b.sin(), y * b.cos())
    }
}

/// Inverse of [`square_to_disc`].
pub fn disc_to_square(u: f64, v: f64) -> (f64, f64) {
    if u == 0.0 && v == 0.0 {
        return (0.0, 0.0);
    }
    let r = (u * u + v * v).sqrt();
    if u.abs() >= v.abs() {
        let x = u.signum() * r;
        let b = (v / u).atan();
        (x, (4.0 * b / PI) * x)
    } else {
        let y = v.signum() * r;
        let b = (u / v).atan();
        ((4.0 * b / PI) * y, y)
    }
}

// ---------------------------------------------------------------------------
// bundle chart <-> ellipsoid (the fibered symplectomorphism Ξ) and packings
// ---------------------------------------------------------------------------

/// Bundle-chart point of lune j: square coordinates (x, y), fiber area A and
/// gauge-fixed fiber angle θ_w.
#[derive(Clone, Copy, Debug)]
pub struct BundleCoords {
    pub x: f64,
    pub y: f64,
    pub area: f64,
    pub theta_w: f64,
}

fn h_tilde(n: usize, x: f64, y: f64) -> f64 {
    (PI / n as f64) * (x * y - 2.0 * x)
}

/// Ξ: bundle chart → ℰ(2π/n, π/2) ⊂ ℂ², as four reals.
pub fn xi_forward(n: usize, bc: &BundleCoords) -> [f64; 4] {
    let r_disc = (2.0 / n as f64).sqrt();
    let (u, v) = square_to_disc(bc.x, bc.y);
    let sigma = r_disc * (u * u + v * v).sqrt();
    let psi = v.atan2(u);
    let z1 = C::from_polar(sigma * (1.0 - 2.0 * bc.area / PI).max(0.0).sqrt(), psi);
    let z2 = C::from_polar(
        (bc.area / PI).max(0.0).sqrt(),
        bc.theta_w + h_tilde(n, bc.x, bc.y),
    );
    [z1.re, z1.im, z2.re, z2.im]
}

/// Ξ⁻¹: ℂ² domain point → bundle chart of lune j (the lune index only shifts
/// the longitude downstream, not the chart values).
pub fn xi_inverse(n: usize, zd: &DomainPoint) -> BundleCoords {
    let z1 = C::new(zd[0], zd[1]);
    let z2 = C::new(zd[2], zd[3]);
    let q2 = z2.norm_sqr(); // = A/π
    let area = PI * q2;
    let s2 = (1.0 - 2.0 * q2).max(0.0);
    let r_disc = (2.0 / n as f64).sqrt();
    let rad = if s2 > 0.0 {
        (z1.norm() / s2.sqrt() / r_disc).min(1.0)
    } else {
        1.0
    };
    let psi = if z1.norm_sqr() > 0.0 { z1.arg() } else { 0.0 };
    let (x, y) = disc_to_square(rad * psi.cos(), rad * psi.sin());
    let theta_w = if q2 > 0.0 { z2.arg() } else { 0.0 } - h_tilde(n, x, y);
    BundleCoords { x, y, area, theta_w }
}

/// The target 2-form ω̃ in bundle-chart coordinates (x, y, A, θ_w), as the
/// matrix ω̃(eᵢ, eⱼ).
pub fn bundle_form_matrix(n: usize, bc: &BundleCoords) -> [[f64; 4]; 4] {
    let nf = n as f64;
    let tau = (1.0 - 2.0 * bc.area / PI) * PI / (2.0 * nf);
    let gamma_x = -(2.0 * PI / nf) * (1.0 - bc.y);
    let mut m = [[0.0; 4]; 4];
    m[0][1] = tau; // (x, y)
    m[2][3] = 1.0 / (2.0 * PI); // (A, θ_w)
    m[0][2] = -gamma_x / (2.0 * PI); // (x, A): −(1/2π)γ(e_x), from (1/2π)dA∧γ
    for i in 0..4 {
        for j in 0..i {
            m[i][j] = -m[j][i];
        }
    }
    m
}

/// Ambient point over lune j at bundle-chart coordinates: [u(t) + w·ū(t)]
/// with t = ρ(y)·e^{iφ(x,j)} and w gauge-fixed to the canonical quadric
/// representative.
pub fn bundle_point(n: usize, j: usize, bc: &BundleCoords) -> [C; 3] {
    let nf = n as f64;
    let rho2 = ((1.0 - bc.y) / (1.0 + bc.y).max(1e-300)).max(0.0);
    let phi = (PI / nf) * (bc.x + 1.0) + 2.0 * PI * j as f64 / nf;
    let t = if rho2 <= 1e30 {
        Some(C::from_polar(rho2.sqrt(), phi))
    } else {
        None
    };
    let base = quadric_param(t);
    let rep = base.rep();
    let repc = conj3(&rep);
    // invert the fiber-area coordinate A = π|w|²/(1+|w|²) in closed form
    // (validated against the quadrature profile in the tests)
    let a = bc.area.clamp(0.0, 0.5 * PI - 1e-15);
    let rho_w = (a / (PI - a)).sqrt();
    let w = C::from_polar(rho_w, bc.theta_w);
    let mut v = rep;
    for i in 0..3 {
        v[i] += w * repc[i];
    }
    v
}

/// One ball of the n-lune bundle packing: B(r) → CP² over lune j.
pub fn bundle_ball(n: usize, j: usize, r: f64) -> Result<BallEmbedding> {
    let nf = n as f64;
    let r_disc = (2.0 / nf).sqrt();
    if r > r_disc + 1e-12 {
        return Err(Error::Capacity(format!(
            "ball radius {r} exceeds the lune chart radius {r_disc}"
        )));
    }
    let forward = move |zd: &DomainPoint| -> [C; 3] {
        let bc = xi_inverse(n, zd);
        bundle_point(n, j, &bc)
    };
    let inverse = move |p: &ProjectivePoint| -> Option<DomainPoint> {
        let (base, w) = project_to_quadric_raw(p).ok()?;
        let (rho_t2, phi) = match base.t {
            None => (f64::INFINITY, 0.0),
            Some(t) => (t.norm_sqr(), t.arg().rem_euclid(2.0 * PI)),
        };
        let (x, y);
        if rho_t2 < 1e-28 {
            x = 0.0;
            y = 1.0;
        } else if rho_t2 > 1e28 {
            x = 0.0;
            y = -1.0;
        } else {
            let mut phi_loc = phi - 2.0 * PI * j as f64 / nf;
            phi_loc = phi_loc.rem_euclid(2.0 * PI);
            let tol = 1e-12;
            if phi_loc > 2.0 * PI / nf + tol {
                if phi_loc > 2.0 * PI - tol {
                    phi_loc = 0.0;
                } else {
                    return None; // longitude outside this lune
                }
            }
            x = (nf * phi_loc / PI - 1.0).clamp(-1.0, 1.0);
            y = (1.0 - rho_t2) / (1.0 + rho_t2);
        }
        let rw2 = w.norm_sqr();
        let area = PI * rw2 / (1.0 + rw2);
        let theta_w = if rw2 > 0.0 { w.arg() } else { 0.0 };
        let bc = BundleCoords { x, y, area, theta_w };
        Some(xi_forward(n, &bc))
    };
    let clearance = move |zd: &DomainPoint| -> f64 {
        let bc = xi_inverse(n, zd);
        // seams of the square-to-disc chart plus the steep locus 2A → π
        // (where the Z₁ factor √(1−2A/π) degenerates); the latitude term is
        // down-weighted because derivatives of ρ(y) grow like (1−|y|)⁻¹ near
        // the pole fibers, so finite-difference oracles need extra margin
        let s2 = 1.0 - 2.0 * (zd[2] * zd[2] + zd[3] * zd[3]);
        (1.0 - bc.x.abs())
            .min((1.0 - bc.y.abs()) / 10.0)
            .min((bc.x.abs() - bc.y.abs()).abs())
            .min(s2)
    };
    Ok(BallEmbedding::new(
        format!("bundle-ball n={n} lune={j} r={r:.6}"),
        r,
        Ambient::FubiniStudy,
        Arc::new(forward),
    )
    .with_inverse(Arc::new(inverse))
    .with_clearance(Arc::new(clearance))
    .with_singular(vec![
        SingularLocus::Point([0.0, r_disc, 0.0, 0.0]), // pole fiber t = 0
        SingularLocus::Point([0.0, -r_disc, 0.0, 0.0]), // pole fiber t = ∞
        SingularLocus::Curve(
            "square-to-disc diagonal seams and the fiber axis Z1 = 0 (boundary-regular, \
             non-smooth loci of the composite chart)"
                .into(),
        ),
    ]))
}

/// Membership of an ambient point in the closed region over lune j (the full
/// disc bundle above the lune).
pub fn region_contains(n: usize, j: usize, p: &ProjectivePoint) -> bool {
    match project_to_quadric_raw(p) {
        Ok((base, _)) => LunePartition { n }.lune_of(base.t) == j,
        Err(_) => false,
    }
}

/// The full packing of CP² by 4 balls of radius 1/√2 over the 4-lune
/// partition.
pub fn full4_packing() -> Result<Packing> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let balls = (0..4).map(|j| bundle_ball(4, j, r)).collect::<Result<Vec<_>>>()?;
    let mut p = Packing::new("full4", balls);
    p.construction_flags.push(
        "construction choice: equal-area lune partition of the quadric with meridian \
         boundaries; square-to-disc concentric map"
            .into(),
    );
    Ok(p)
}

/// The regular maximal packing of CP² by 5 balls of radius √(2/5) over the
/// 5-lune partition, routed through the ellipsoid inclusion
/// B(√(2/5)) ⊂ ℰ(2π/5, π/2).
pub fn regular5_packing() -> Result<Packing> {
    let r = (2.0f64 / 5.0).sqrt();
    let e = Ellipsoid::new(vec![2.0 * PI / 5.0, PI / 2.0])?;
    // capacity gate: the ball must fit the model ellipsoid
    let _inclusion = ball_in_ellipsoid(r, &e)?;
    let balls = (0..5).map(|j| bundle_ball(5, j, r)).collect::<Result<Vec<_>>>()?;
    let mut p = Packing::new("regular5", balls);
    p.construction_flags.push(
        "construction choice: equal-area lune partition of the quadric with meridian \
         boundaries; square-to-disc concentric map"
            .into(),
    );
    Ok(p)
}
