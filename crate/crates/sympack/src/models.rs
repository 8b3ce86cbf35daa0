//! Standard ellipsoids and the trivial disc bundle over an ellipsoid with its
//! explicit symplectomorphism onto an ellipsoid.
//!
//! Conventions (all in true area units, ω_std = Σ dxᵢ∧dyᵢ = Σ ½d(ρᵢ²)∧dθᵢ):
//! the bundle form is ω = π*τ + d(r²α) with r the fiber radial coordinate;
//! the connection restricts to (1/(2k))dθ on fibers and satisfies dα = −π*τ,
//! so fibers have area π/k and the trivialized total space ℰ_a × 𝔻 maps onto
//! the ellipsoid ℰ(a, π/k) by Φ(z, w) = (√(1−|w|²)·z, (1/√k)·e^{ih(z)}·w),
//! where dh = β := 2k·[α − (1/(2k))dθ + Σ(ρᵢ²/2)dθᵢ] is a base 1-form.

use std::sync::Arc;

use num_complex::Complex64;

use crate::embedding::{Ambient, BallEmbedding, DomainPoint};
use crate::projective::C;
use crate::quadrature::{gauss_legendre, gl_panel};
use crate::sampling::SampleCloud;
use crate::{Error, Result};

/// Open ellipsoid Σ π|zᵢ|²/aᵢ < 1 with capacities aᵢ in area units.
#[derive(Clone, Debug)]
pub struct Ellipsoid {
    pub capacities: Vec<f64>,
}

impl Ellipsoid {
    pub fn new(capacities: Vec<f64>) -> Result<Self> {
        if capacities.is_empty() || capacities.iter().any(|&a| a <= 0.0) {
            return Err(Error::Parameter("capacities must be positive".into()));
        }
        Ok(Ellipsoid { capacities })
    }

    pub fn dim(&self) -> usize {
        self.capacities.len()
    }

    /// Defining functional Σ π|zᵢ|²/aᵢ (inside iff < 1).
    pub fn level(&self, z: &[C]) -> f64 {
        z.iter()
            .zip(&self.capacities)
            .map(|(zi, &a)| std::f64::consts::PI * zi.norm_sqr() / a)
            .sum()
    }

    pub fn contains(&self, z: &[C], tol: f64) -> bool {
        self.level(z) < 1.0 + tol
    }

    /// Symplectic volume Π aᵢ / n!.
    pub fn volume(&self) -> f64 {
        let fact: f64 = (1..=self.dim()).map(|i| i as f64).product();
        self.capacities.iter().product::<f64>() / fact
    }
}

/// Tangent vector of the trivialized bundle ℰ_a × 𝔻: base part and fiber part.
#[derive(Clone, Debug)]
pub struct BundleVector {
    pub dz: Vec<C>,
    pub dw: C,
}

type AlphaFn = dyn Fn(&[C], C, &BundleVector) -> f64 + Send + Sync;

/// Trivial disc bundle over an ellipsoid base with connection 1-form α.
pub struct DiscBundleModel {
    pub base: Ellipsoid,
    pub k: u32,
    alpha: Arc<AlphaFn>,
}

/// dθ at u evaluated on the real tangent vector X (complex increment).
fn dtheta(u: C, x: C) -> f64 {
    (u.conj() * x).im / u.norm_sqr()
}

impl DiscBundleModel {
    pub fn new(base: Ellipsoid, k: u32, alpha: Arc<AlphaFn>) -> Result<Self> {
        if k == 0 {
            return Err(Error::Parameter("Chern multiplier k must be positive".into()));
        }
        Ok(DiscBundleModel { base, k, alpha })
    }

    /// The canonical connection (1/(2k))dθ − Σ(ρᵢ²/2)dθᵢ, which satisfies the
    /// fiber-restriction and curvature constraints exactly and has β ≡ 0.
    pub fn canonical(base: Ellipsoid, k: u32) -> Result<Self> {
        let kf = k as f64;
        Self::new(
            base,
            k,
            Arc::new(move |z: &[C], w: C, v: &BundleVector| {
                let fiber = if w.norm_sqr() > 0.0 {
                    dtheta(w, v.dw) / (2.0 * kf)
                } else {
                    0.0
                };
                let base_part: f64 = z
                    .iter()
                    .zip(&v.dz)
                    .map(|(zi, dzi)| 0.5 * (zi.conj() * dzi).im)
                    .sum();
                fiber - base_part
            }),
        )
    }

    pub fn alpha(&self, z: &[C], w: C, v: &BundleVector) -> f64 {
        (self.alpha)(z, w, v)
    }

    /// β = 2k·[α − (1/(2k))dθ + Σ(ρᵢ²/2)dθᵢ], a 1-form on the base.
    pub fn beta(&self, z: &[C], v_dz: &[C]) -> f64 {
        // evaluate at a fixed fiber point with zero fiber velocity; β has no
        // fiber component and no fiber dependence for a valid model
        let w = C::new(0.5, 0.0);
        let v = BundleVector {
            dz: v_dz.to_vec(),
            dw: C::new(0.0, 0.0),
        };
        let a = self.alpha(z, w, &v);
        let correction: f64 = z
            .iter()
            .zip(v_dz)
            .map(|(zi, dzi)| 0.5 * (zi.conj() * dzi).im)
            .sum();
        2.0 * self.k as f64 * (a + correction)
    }

    /// Numerical check of the model invariants at quasi-random points:
    /// returns (max fiber-restriction defect, max curvature defect).
    pub fn invariant_defects(&self, seed: u64, samples: usize) -> (f64, f64) {
        let n = self.base.dim();
        assert_eq!(n, 1, "invariant check implemented for 1-D bases");
        let cloud = SampleCloud::boxed(seed, samples, &[-0.6, -0.6, -0.6, -0.6], &[0.6, 0.6, 0.6, 0.6]);
        let kf = self.k as f64;
        let mut fiber_defect = 0.0f64;
        let mut curv_defect = 0.0f64;
        let h = 1e-5;
        for p in &cloud.points {
            let z = [C::new(p[0], p[1])];
            let w = C::new(p[2], p[3]);
            if w.norm() < 0.05 || w.norm() > 0.95 {
                continue;
            }
            // fiber restriction: α on a fiber velocity equals (1/(2k))dθ
            let dw = C::new(-w.im, w.re); // i·w, the angular direction
            let v = BundleVector { dz: vec![C::new(0.0, 0.0)], dw };
            let got = self.alpha(&z, w, &v);
            let want = dtheta(w, dw) / (2.0 * kf);
            fiber_defect = fiber_defect.max((got - want).abs());
            // curvature: dα(e_a, e_b) = −ω_std(base) on base directions,
            // 0 on mixed and fiber-fiber pairs; FD exterior derivative
            let dirs: [BundleVector; 4] = [
                BundleVector { dz: vec![C::new(1.0, 0.0)], dw: C::new(0.0, 0.0) },
                BundleVector { dz: vec![C::new(0.0, 1.0)], dw: C::new(0.0, 0.0) },
                BundleVector { dz: vec![C::new(0.0, 0.0)], dw: C::new(1.0, 0.0) },
                BundleVector { dz: vec![C::new(0.0, 0.0)], dw: C::new(0.0, 1.0) },
            ];
            let shift = |a: usize, s: f64| -> ([C; 1], C) {
                let mut zz = z;
                let mut ww = w;
                match a {
                    0 => zz[0] += s,
                    1 => zz[0] += C::new(0.0, s),
                    2 => ww += s,
                    _ => ww += C::new(0.0, s),
                }
                (zz, ww)
            };
            for a in 0..4 {
                for b in (a + 1)..4 {
                    // dα(e_a,e_b) = ∂_a α(e_b) − ∂_b α(e_a)
                    let (zp, wp) = shift(a, h);
                    let (zm, wm) = shift(a, -h);
                    let da = (self.alpha(&zp, wp, &dirs[b]) - self.alpha(&zm, wm, &dirs[b])) / (2.0 * h);
                    let (zp, wp) = shift(b, h);
                    let (zm, wm) = shift(b, -h);
                    let db = (self.alpha(&zp, wp, &dirs[a]) - self.alpha(&zm, wm, &dirs[a])) / (2.0 * h);
                    let d_alpha = da - db;
                    let want = if (a, b) == (0, 1) { -1.0 } else { 0.0 };
                    curv_defect = curv_defect.max((d_alpha - want).abs());
                }
            }
        }
        (fiber_defect, curv_defect)
    }
}

/// The potential h with dh = β, integrated radially from the base origin.
pub struct PotentialH {
    eval: Arc<dyn Fn(&[C]) -> f64 + Send + Sync>,
    pub loop_residual: f64,
    pub path_steps: usize,
}

impl PotentialH {
    pub fn value(&self, z: &[C]) -> f64 {
        (self.eval)(z)
    }
}

/// Integrate β along the radial segment 0 → z with composite Gauss–Legendre,
/// doubling panels until the change is below 1e-9.
fn integrate_beta_radial(model: &DiscBundleModel, z: &[C]) -> f64 {
    let dz: Vec<C> = z.to_vec();
    let f = |t: f64| -> f64 {
        let zt: Vec<C> = z.iter().map(|c| c * t).collect();
        model.beta(&zt, &dz)
    };
    let (nodes, weights) = gauss_legendre(64);
    let mut panels = 1usize;
    let mut prev = gl_panel(&f, 0.0, 1.0, &nodes, &weights);
    for _ in 0..12 {
        panels *= 2;
        let h = 1.0 / panels as f64;
        let cur: f64 = (0..panels)
            .map(|i| gl_panel(&f, i as f64 * h, (i + 1) as f64 * h, &nodes, &weights))
            .sum();
        if (cur - prev).abs() < 1e-9 {
            return cur;
        }
        prev = cur;
    }
    prev
}

/// Solve dh = β by radial path integration; verifies closedness of β with
/// random triangle loops (residual must stay below 1e-6).
pub fn solve_h(model: &DiscBundleModel) -> Result<PotentialH> {
    let n = model.base.dim();
    // closedness: ∮ β over random triangle loops (0 → p → q → 0 homotoped:
    // actually triangle p→q→r→p via radial decomposition: ∮ = h-path mismatch)
    let mut residual = 0.0f64;
    for trial in 0..100u64 {
        let corner = |salt: u64| -> Vec<C> {
            (0..n)
                .map(|d| {
                    C::new(
                        0.6 * (crate::sampling::uniform(1234, trial, salt * 2 + d as u64 * 31) - 0.5),
                        0.6 * (crate::sampling::uniform(1234, trial, salt * 2 + 1 + d as u64 * 31) - 0.5),
                    )
                })
                .collect()
        };
        let (p, q) = (corner(1), corner(5));
        // ∫ over segment p→q of β, compared with radial potentials:
        // closed β ⟹ ∫_{p→q} β = I(q) − I(p)
        let seg = {
            let dz: Vec<C> = q.iter().zip(&p).map(|(a, b)| a - b).collect();
            let f = |t: f64| -> f64 {
                let zt: Vec<C> = p.iter().zip(&q).map(|(a, b)| a + (b - a) * t).collect();
                model.beta(&zt, &dz)
            };
            let (nodes, weights) = gauss_legendre(64);
            gl_panel(&f, 0.0, 1.0, &nodes, &weights)
        };
        let diff = integrate_beta_radial(model, &q) - integrate_beta_radial(model, &p);
        residual = residual.max((seg - diff).abs());
    }
    if residual > 1e-6 {
        return Err(Error::Geometry(format!(
            "connection 1-form is not closed-compatible: loop residual {residual:.3e}"
        )));
    }
    // capture what the evaluator needs
    let base = model.base.clone();
    let k = model.k;
    let alpha = model.alpha.clone();
    let eval = move |z: &[C]| -> f64 {
        let m = DiscBundleModel {
            base: base.clone(),
            k,
            alpha: alpha.clone(),
        };
        integrate_beta_radial(&m, z)
    };
    Ok(PotentialH {
        eval: Arc::new(eval),
        loop_residual: residual,
        path_steps: 64,
    })
}

/// The explicit symplectomorphism Φ(z, w) = (√(1−|w|²)·z, (1/√k)·e^{ih(z)}·w)
/// from ℰ_a × 𝔻 onto the ellipsoid ℰ(a, π/k).
pub fn phi_map(model: &DiscBundleModel, h: &PotentialH, z: &[C], w: C) -> Result<Vec<C>> {
    if w.norm_sqr() >= 1.0 {
        return Err(Error::Domain("fiber coordinate must satisfy |w| < 1".into()));
    }
    if !model.base.contains(z, 0.0) {
        return Err(Error::Domain("base point outside the base ellipsoid".into()));
    }
    let s = (1.0 - w.norm_sqr()).sqrt();
    let phase = C::from_polar(1.0, h.value(z));
    let mut out: Vec<C> = z.iter().map(|zi| zi * s).collect();
    out.push(phase * w / (model.k as f64).sqrt());
    Ok(out)
}

/// ω_model = π*τ + d(r²α) for the canonical connection over a 1-D base, in
/// coordinates (Re z, Im z, Re w, Im w):
///   (1−|w|²) da∧db − (c dc + d dd)∧(a db − b da) + (1/k) dc∧dd.
pub fn omega_model_canonical(k: u32, p: &DomainPoint, u: &DomainPoint, v: &DomainPoint) -> f64 {
    let (a, b, c, d) = (p[0], p[1], p[2], p[3]);
    let wedge = |f: &DomainPoint, g: &DomainPoint, i: usize, j: usize| f[i] * g[j] - f[j] * g[i];
    let rho2 = c * c + d * d;
    // (c dc + d dd)∧(a db − b da)
    let dr2 = |x: &DomainPoint| c * x[2] + d * x[3];
    let ang = |x: &DomainPoint| a * x[1] - b * x[0];
    (1.0 - rho2) * wedge(u, v, 0, 1) - (dr2(u) * ang(v) - dr2(v) * ang(u))
        + wedge(u, v, 2, 3) / k as f64
}

/// Identity inclusion of the closed ball B(R) into the ellipsoid E(a, b).
pub fn ball_in_ellipsoid(radius: f64, e: &Ellipsoid) -> Result<BallEmbedding> {
    if e.dim() != 2 {
        return Err(Error::Parameter("ball_in_ellipsoid expects a 2-D ellipsoid".into()));
    }
    let cap = std::f64::consts::PI * radius * radius;
    let min_cap = e.capacities.iter().cloned().fold(f64::INFINITY, f64::min);
    if cap > min_cap + 1e-12 {
        return Err(Error::Capacity(format!(
            "ball capacity {cap:.6} exceeds min ellipsoid capacity {min_cap:.6}"
        )));
    }
    Ok(BallEmbedding::new(
        format!("ball-in-ellipsoid r={radius:.6}"),
        radius,
        Ambient::StandardC2,
        Arc::new(|x: &DomainPoint| {
            [
                Complex64::new(x[0], x[1]),
                Complex64::new(x[2], x[3]),
                Complex64::new(1.0, 0.0),
            ]
        }),
    )
    .with_jacobian(Arc::new(|_x: &DomainPoint| {
        let z = Complex64::new(0.0, 0.0);
        [
            [Complex64::new(1.0, 0.0), z, z],
            [Complex64::new(0.0, 1.0), z, z],
            [z, Complex64::new(1.0, 0.0), z],
            [z, Complex64::new(0.0, 1.0), z],
        ]
    })))
}
