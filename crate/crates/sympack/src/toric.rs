//! Moment-map machinery on CP²: the Delzant triangle, integral corner
//! triangles, exact action-angle ball embeddings and the 2- and 3-ball corner
//! packings (plus the full one-ball packing as the identity corner at r = 1).
//!
//! Action coordinates are μᵢ = |zᵢ|²/2, so ω = Σ dμᵢ∧dθᵢ, the ambient
//! Delzant triangle is {μ ≥ 0, μ₁+μ₂ ≤ 1/2} and a ball of radius r sits over
//! a corner triangle with leg r²/2.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::embedding::{Ambient, BallEmbedding, DomainPoint, Packing, SingularLocus};
use crate::projective::{norm_sqr, ProjectivePoint, C};
use crate::{Error, Result};

/// 2×2 integer matrix, row-major.
pub type IMat = [[i64; 2]; 2];

pub const IDENTITY: IMat = [[1, 0], [0, 1]];
/// Corner (1/2, 0): columns are the primitive edge directions (−1,0), (−1,1).
pub const CORNER_RIGHT: IMat = [[-1, -1], [0, 1]];
/// Corner (0, 1/2): columns are the primitive edge directions (0,−1), (1,−1).
pub const CORNER_TOP: IMat = [[0, 1], [-1, -1]];

fn det(a: &IMat) -> i64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

fn inv(a: &IMat) -> IMat {
    let d = det(a);
    debug_assert!(d.abs() == 1);
    [
        [a[1][1] / d, -a[0][1] / d],
        [-a[1][0] / d, a[0][0] / d],
    ]
}

fn mat_vec(a: &IMat, v: [f64; 2]) -> [f64; 2] {
    [
        a[0][0] as f64 * v[0] + a[0][1] as f64 * v[1],
        a[1][0] as f64 * v[0] + a[1][1] as f64 * v[1],
    ]
}

/// A corner triangle of the Delzant triangle: vertex + A·(standard leg
/// simplex of size `leg`).
#[derive(Clone, Debug)]
pub struct MomentTriangle {
    pub vertex: [f64; 2],
    pub a: IMat,
    pub leg: f64,
}

impl MomentTriangle {
    pub fn new(vertex: [f64; 2], a: IMat, leg: f64) -> Result<Self> {
        if leg <= 0.0 {
            return Err(Error::Parameter("degenerate triangle: leg must be positive".into()));
        }
        if det(&a).abs() != 1 {
            return Err(Error::Parameter("corner matrix must be in GL(2,Z)".into()));
        }
        let tri = MomentTriangle { vertex, a, leg };
        for v in tri.vertices() {
            let eps = 1e-12;
            if v[0] < -eps || v[1] < -eps || v[0] + v[1] > 0.5 + eps {
                return Err(Error::Containment(format!(
                    "triangle vertex ({}, {}) escapes the ambient Delzant triangle",
                    v[0], v[1]
                )));
            }
        }
        Ok(tri)
    }

    /// The three vertices: vertex, vertex + leg·col₁, vertex + leg·col₂.
    pub fn vertices(&self) -> [[f64; 2]; 3] {
        let c1 = mat_vec(&self.a, [self.leg, 0.0]);
        let c2 = mat_vec(&self.a, [0.0, self.leg]);
        [
            self.vertex,
            [self.vertex[0] + c1[0], self.vertex[1] + c1[1]],
            [self.vertex[0] + c2[0], self.vertex[1] + c2[1]],
        ]
    }

    pub fn radius(&self) -> f64 {
        (2.0 * self.leg).sqrt()
    }
}

/// Exact interior-disjointness of two triangles by the separating-axis test
/// in rational arithmetic on the (exactly represented) f64 vertices.
pub fn triangles_interior_disjoint(t1: &MomentTriangle, t2: &MomentTriangle) -> bool {
    let rat = |x: f64| BigRational::from_float(x).expect("finite vertex");
    let v1: Vec<[BigRational; 2]> = t1.vertices().iter().map(|v| [rat(v[0]), rat(v[1])]).collect();
    let v2: Vec<[BigRational; 2]> = t2.vertices().iter().map(|v| [rat(v[0]), rat(v[1])]).collect();
    let zero = BigRational::from_integer(BigInt::from(0));
    // candidate axes: normals of all edges of both triangles
    let mut axes = Vec::new();
    for vs in [&v1, &v2] {
        for i in 0..3 {
            let j = (i + 1) % 3;
            let ex = &vs[j][0] - &vs[i][0];
            let ey = &vs[j][1] - &vs[i][1];
            if ex != zero || ey != zero {
                axes.push([-ey, ex]);
            }
        }
    }
    for axis in &axes {
        let proj = |vs: &[[BigRational; 2]]| -> (BigRational, BigRational) {
            let ps: Vec<BigRational> = vs
                .iter()
                .map(|v| &v[0] * &axis[0] + &v[1] * &axis[1])
                .collect();
            let mut min = ps[0].clone();
            let mut max = ps[0].clone();
            for p in &ps[1..] {
                if p < &min {
                    min = p.clone();
                }
                if p > &max {
                    max = p.clone();
                }
            }
            (min, max)
        };
        let (min1, max1) = proj(&v1);
        let (min2, max2) = proj(&v2);
        if max1 <= min2 || max2 <= min1 {
            return true; // separated (touching allowed): interiors disjoint
        }
    }
    false
}

/// The standard affine-chart ball: z ↦ [z₁ : z₂ : √(1−|z|²)], an exact
/// symplectomorphism of B(r) into CP² for r ≤ 1.
pub fn standard_chart_ball(r: f64) -> Result<BallEmbedding> {
    if r <= 0.0 {
        return Err(Error::Parameter("radius must be positive".into()));
    }
    if r > 1.0 {
        return Err(Error::Capacity(format!(
            "radius {r} exceeds 1: chart ball capacity πr² would exceed the line class"
        )));
    }
    let map = Arc::new(|x: &DomainPoint| -> [C; 3] {
        let n2 = x.iter().map(|v| v * v).sum::<f64>();
        [
            C::new(x[0], x[1]),
            C::new(x[2], x[3]),
            C::new((1.0 - n2).max(0.0).sqrt(), 0.0),
        ]
    });
    let jac = Arc::new(|x: &DomainPoint| -> [[C; 3]; 4] {
        let n2 = x.iter().map(|v| v * v).sum::<f64>();
        let s = (1.0 - n2).max(1e-300).sqrt();
        let zero = C::new(0.0, 0.0);
        [
            [C::new(1.0, 0.0), zero, C::new(-x[0] / s, 0.0)],
            [C::new(0.0, 1.0), zero, C::new(-x[1] / s, 0.0)],
            [zero, C::new(1.0, 0.0), C::new(-x[2] / s, 0.0)],
            [zero, C::new(0.0, 1.0), C::new(-x[3] / s, 0.0)],
        ]
    });
    let inverse = Arc::new(|p: &ProjectivePoint| -> Option<DomainPoint> {
        let n2 = norm_sqr(&p.h);
        let h2 = p.h[2];
        if h2.norm_sqr() / n2 < 1e-30 {
            return None; // on the line at infinity
        }
        let phase = h2.conj() / h2.norm();
        let scale = phase / n2.sqrt();
        let z1 = p.h[0] * scale;
        let z2 = p.h[1] * scale;
        Some([z1.re, z1.im, z2.re, z2.im])
    });
    let singular = if (r - 1.0).abs() < 1e-15 {
        vec![SingularLocus::Curve(
            "boundary sphere |z| = 1 collapses Hopf fibers onto the line at infinity".into(),
        )]
    } else {
        Vec::new()
    };
    Ok(BallEmbedding::new(
        format!("chart-ball r={r:.6}"),
        r,
        Ambient::FubiniStudy,
        map,
    )
    .with_jacobian(jac)
    .with_inverse(inverse)
    .with_singular(singular))
}

/// Action-angle ball embedding over a corner triangle: μ ↦ A·μ + vertex,
/// θ ↦ A^{-T}·θ, realized through the standard chart. Exact on the dense
/// torus; the homogeneous representative extends continuously in CP² across
/// the axes.
pub fn toric_ball(tri: &MomentTriangle) -> Result<BallEmbedding> {
    let r = tri.radius();
    let a = tri.a;
    let vertex = tri.vertex;
    let a_inv = inv(&a);
    let leg = tri.leg;

    // forward: domain (z₁, z₂) → action-angle → ambient chart rep
    let forward = move |x: &DomainPoint| -> [C; 3] {
        let mu = [
            0.5 * (x[0] * x[0] + x[1] * x[1]),
            0.5 * (x[2] * x[2] + x[3] * x[3]),
        ];
        let th = [x[1].atan2(x[0]), x[3].atan2(x[2])];
        let mu_img = [
            mat_vec(&a, mu)[0] + vertex[0],
            mat_vec(&a, mu)[1] + vertex[1],
        ];
        // θ' = A^{-T} θ, i.e. θ'_i = Σ_j (A^{-1})_{ji} θ_j
        let th_img = [
            a_inv[0][0] as f64 * th[0] + a_inv[1][0] as f64 * th[1],
            a_inv[0][1] as f64 * th[0] + a_inv[1][1] as f64 * th[1],
        ];
        let r1 = (2.0 * mu_img[0]).max(0.0).sqrt();
        let r2 = (2.0 * mu_img[1]).max(0.0).sqrt();
        let r3 = (1.0 - 2.0 * (mu_img[0] + mu_img[1])).max(0.0).sqrt();
        [
            C::from_polar(r1, th_img[0]),
            C::from_polar(r2, th_img[1]),
            C::new(r3, 0.0),
        ]
    };

    // analytic Jacobian through the polar chain rule (valid off the axes;
    // central differences of the representative are wrong across axes, so the
    // clearance function below keeps sweeps away from them)
    let jac = move |x: &DomainPoint| -> [[C; 3]; 4] {
        let mu = [
            0.5 * (x[0] * x[0] + x[1] * x[1]),
            0.5 * (x[2] * x[2] + x[3] * x[3]),
        ];
        let th = [x[1].atan2(x[0]), x[3].atan2(x[2])];
        let mu_img = [
            mat_vec(&a, mu)[0] + vertex[0],
            mat_vec(&a, mu)[1] + vertex[1],
        ];
        let th_img = [
            a_inv[0][0] as f64 * th[0] + a_inv[1][0] as f64 * th[1],
            a_inv[0][1] as f64 * th[0] + a_inv[1][1] as f64 * th[1],
        ];
        let r_img = [
            (2.0 * mu_img[0]).max(1e-300).sqrt(),
            (2.0 * mu_img[1]).max(1e-300).sqrt(),
        ];
        let r3 = (1.0 - 2.0 * (mu_img[0] + mu_img[1])).max(1e-300).sqrt();
        // dμ_j and dθ_j as functions of the 4 real coordinates
        let mut dmu = [[0.0f64; 4]; 2]; // dmu[j][k] = ∂μ_j/∂x_k
        let mut dth = [[0.0f64; 4]; 2];
        for j in 0..2 {
            let (re, im) = (x[2 * j], x[2 * j + 1]);
            let rho2 = (re * re + im * im).max(1e-300);
            dmu[j][2 * j] = re;
            dmu[j][2 * j + 1] = im;
            dth[j][2 * j] = -im / rho2;
            dth[j][2 * j + 1] = re / rho2;
        }
        let mut cols = [[C::new(0.0, 0.0); 3]; 4];
        for (k, col) in cols.iter_mut().enumerate() {
            let dmu_img = [
                a[0][0] as f64 * dmu[0][k] + a[0][1] as f64 * dmu[1][k],
                a[1][0] as f64 * dmu[0][k] + a[1][1] as f64 * dmu[1][k],
            ];
            let dth_img = [
                a_inv[0][0] as f64 * dth[0][k] + a_inv[1][0] as f64 * dth[1][k],
                a_inv[0][1] as f64 * dth[0][k] + a_inv[1][1] as f64 * dth[1][k],
            ];
            for i in 0..2 {
                // d(r e^{iθ}) = e^{iθ}(dr + i r dθ), dr = dμ/r
                let e = C::from_polar(1.0, th_img[i]);
                col[i] = e * C::new(dmu_img[i] / r_img[i], r_img[i] * dth_img[i]);
            }
            col[2] = C::new(-(dmu_img[0] + dmu_img[1]) / r3, 0.0);
        }
        cols
    };

    // inverse: ambient point → action-angle → domain point. Angles are read
    // relative to the chart coordinate h₂ when possible, otherwise relative
    // to the largest component; the A^T transform cancels the common shift
    // exactly for the coordinates whose radius does not vanish.
    let inverse = move |p: &ProjectivePoint| -> Option<DomainPoint> {
        let n2 = norm_sqr(&p.h);
        let mu_img = [
            p.h[0].norm_sqr() / (2.0 * n2),
            p.h[1].norm_sqr() / (2.0 * n2),
        ];
        let rel = [
            mu_img[0] - vertex[0],
            mu_img[1] - vertex[1],
        ];
        let mu = [
            a_inv[0][0] as f64 * rel[0] + a_inv[0][1] as f64 * rel[1],
            a_inv[1][0] as f64 * rel[0] + a_inv[1][1] as f64 * rel[1],
        ];
        if mu[0] < -1e-9 || mu[1] < -1e-9 || mu[0] + mu[1] > 2.0 * leg {
            // outside twice the triangle: report nothing rather than a bogus
            // huge radius (the SAT-disjoint triangles make this safe)
            return None;
        }
        let reference = if p.h[2].norm_sqr() / n2 > 1e-20 {
            p.h[2]
        } else {
            // on the line at infinity: pick the largest component; the
            // common-phase shift cancels in θ = A^T θ' for the coordinates
            // whose image radius is nonzero (their exponent sums vanish)
            if p.h[0].norm() >= p.h[1].norm() {
                p.h[0]
            } else {
                p.h[1]
            }
        };
        let th_img = [
            (p.h[0] * reference.conj()).arg(),
            (p.h[1] * reference.conj()).arg(),
        ];
        let th = [
            a[0][0] as f64 * th_img[0] + a[1][0] as f64 * th_img[1],
            a[0][1] as f64 * th_img[0] + a[1][1] as f64 * th_img[1],
        ];
        let r1 = (2.0 * mu[0].max(0.0)).sqrt();
        let r2 = (2.0 * mu[1].max(0.0)).sqrt();
        let z1 = C::from_polar(r1, th[0]);
        let z2 = C::from_polar(r2, th[1]);
        Some([z1.re, z1.im, z2.re, z2.im])
    };

    // distance to the coordinate axes of the domain (where the polar chain
    // rule and the homogeneous representative are singular)
    let clearance = |x: &DomainPoint| -> f64 {
        let r1 = (x[0] * x[0] + x[1] * x[1]).sqrt();
        let r2 = (x[2] * x[2] + x[3] * x[3]).sqrt();
        r1.min(r2)
    };

    Ok(BallEmbedding::new(
        format!(
            "toric-ball corner=({},{}) leg={:.6}",
            tri.vertex[0], tri.vertex[1], tri.leg
        ),
        r,
        Ambient::FubiniStudy,
        Arc::new(forward),
    )
    .with_jacobian(Arc::new(jac))
    .with_inverse(Arc::new(inverse))
    .with_clearance(Arc::new(clearance))
    .with_singular(vec![SingularLocus::Curve(
        "toric axes (polar-coordinate loci); projective image extends continuously".into(),
    )]))
}

/// Corner-packing selector.
#[derive(Clone, Copy, Debug)]
pub enum KarshonSpec {
    /// Two balls with r₁ ∈ (0, 1) and r₂ = √(1 − r₁²).
    TwoBalls { r1: f64 },
    /// Three balls of radius 1/√2.
    ThreeBalls,
}

/// The corner triangles of a packing (used by the SVG export too).
pub fn karshon_triangles(spec: KarshonSpec) -> Result<Vec<MomentTriangle>> {
    match spec {
        KarshonSpec::TwoBalls { r1 } => {
            if !(r1 > 0.0 && r1 < 1.0) {
                return Err(Error::Parameter(format!(
                    "r1 must lie in (0, 1), got {r1}"
                )));
            }
            let leg1 = r1 * r1 / 2.0;
            let leg2 = (1.0 - r1 * r1) / 2.0;
            Ok(vec![
                MomentTriangle::new([0.0, 0.0], IDENTITY, leg1)?,
                MomentTriangle::new([0.5, 0.0], CORNER_RIGHT, leg2)?,
            ])
        }
        KarshonSpec::ThreeBalls => Ok(vec![
            MomentTriangle::new([0.0, 0.0], IDENTITY, 0.25)?,
            MomentTriangle::new([0.5, 0.0], CORNER_RIGHT, 0.25)?,
            MomentTriangle::new([0.0, 0.5], CORNER_TOP, 0.25)?,
        ]),
    }
}

/// The 2- or 3-ball corner packing.
pub fn karshon_packing(spec: KarshonSpec) -> Result<Packing> {
    let triangles = karshon_triangles(spec)?;
    for i in 0..triangles.len() {
        for j in (i + 1)..triangles.len() {
            if !triangles_interior_disjoint(&triangles[i], &triangles[j]) {
                return Err(Error::Geometry(format!(
                    "corner triangles {i} and {j} overlap"
                )));
            }
        }
    }
    let balls = triangles
        .iter()
        .map(toric_ball)
        .collect::<Result<Vec<_>>>()?;
    let label = match spec {
        KarshonSpec::TwoBalls { r1 } => format!("karshon2 r1={r1:.6}"),
        KarshonSpec::ThreeBalls => "karshon3".to_string(),
    };
    Ok(Packing::new(label, balls))
}

/// The full one-ball packing: the chart ball at radius 1.
pub fn full1_packing() -> Result<Packing> {
    Ok(Packing::new("full1", vec![standard_chart_ball(1.0)?]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::{mc_volume, pullback_defect, DiffMode, CP2_VOLUME};
    use crate::sampling::SampleCloud;

    #[test]
    fn chart_ball_basics() {
        let b = standard_chart_ball(0.9).unwrap();
        // origin ↦ [0:0:1]
        let p = b.point(&[0.0; 4]).normalize();
        assert!(p.h[0].norm() < 1e-15 && p.h[1].norm() < 1e-15);
        assert!((p.h[2].re - 1.0).abs() < 1e-15);
        assert!(standard_chart_ball(1.2).is_err());
    }

    #[test]
    fn chart_ball_analytic_defect() {
        let b = standard_chart_ball(0.9).unwrap();
        let cloud = SampleCloud::ball(42, 10_000, 0.9, 0.0);
        let d = pullback_defect(&b, &cloud, DiffMode::Analytic, 0.0).unwrap();
        assert!(d.max_abs < 1e-10, "analytic defect {}", d.max_abs);
        let d = pullback_defect(&b, &cloud, DiffMode::FiniteDifference, 1e-5).unwrap();
        assert!(d.max_abs < 1e-6, "fd defect {}", d.max_abs);
    }

    #[test]
    fn chart_ball_inverse_round_trip() {
        let b = standard_chart_ball(0.9).unwrap();
        let cloud = SampleCloud::ball(7, 500, 0.9, 0.0);
        for x in &cloud.points {
            let p = b.point(x);
            let y = b.preimage(&p).unwrap();
            let d: f64 = x.iter().zip(&y).map(|(a, c)| (a - c).abs()).fold(0.0, f64::max);
            assert!(d < 1e-12, "round trip error {d}");
        }
    }

    #[test]
    fn full_ball_volume_is_everything() {
        let b = standard_chart_ball(1.0).unwrap();
        let v = mc_volume(|p| b.contains_image(p, 0.0), 200_000, 42).unwrap();
        assert!(
            (v.estimate - CP2_VOLUME).abs() < 3.0 * v.stderr + 1e-3,
            "volume {} vs {}",
            v.estimate,
            CP2_VOLUME
        );
    }

    #[test]
    fn corner_matrices_are_valid() {
        // containment invariant holds for all three corners at leg 1/4
        for (v, a) in [
            ([0.0, 0.0], IDENTITY),
            ([0.5, 0.0], CORNER_RIGHT),
            ([0.0, 0.5], CORNER_TOP),
        ] {
            let tri = MomentTriangle::new(v, a, 0.25).unwrap();
            assert_eq!(det(&tri.a).abs(), 1);
        }
        // the identity at a non-origin corner escapes: containment error
        assert!(MomentTriangle::new([0.5, 0.0], IDENTITY, 0.25).is_err());
        assert!(MomentTriangle::new([0.0, 0.0], IDENTITY, 0.0).is_err());
    }

    #[test]
    fn toric_ball_defect_at_corner() {
        let tri = MomentTriangle::new([0.0, 0.0], IDENTITY, 0.25).unwrap();
        let b = toric_ball(&tri).unwrap();
        assert!((b.radius - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        let cloud = SampleCloud::ball(42, 10_000, b.radius, 0.0);
        let d = pullback_defect(&b, &cloud, DiffMode::Analytic, 0.0).unwrap();
        assert!(d.max_abs < 1e-8, "toric defect {}", d.max_abs);
    }

    #[test]
    fn toric_ball_defect_nontrivial_corner() {
        let tri = MomentTriangle::new([0.5, 0.0], CORNER_RIGHT, 0.25).unwrap();
        let b = toric_ball(&tri).unwrap();
        let cloud = SampleCloud::ball(43, 10_000, b.radius, 0.0);
        let d = pullback_defect(&b, &cloud, DiffMode::Analytic, 0.0).unwrap();
        assert!(d.max_abs < 1e-8, "toric defect {}", d.max_abs);
    }

    #[test]
    fn toric_ball_moment_image_is_the_triangle() {
        let tri = MomentTriangle::new([0.5, 0.0], CORNER_RIGHT, 0.2).unwrap();
        let b = toric_ball(&tri).unwrap();
        let cloud = SampleCloud::ball(9, 3000, b.radius, 0.0);
        for x in &cloud.points {
            let p = b.point(x);
            let n2 = norm_sqr(&p.h);
            let mu = [p.h[0].norm_sqr() / (2.0 * n2), p.h[1].norm_sqr() / (2.0 * n2)];
            // inside the image simplex (up to rounding)
            let rel = [mu[0] - 0.5, mu[1]];
            let a_inv = inv(&CORNER_RIGHT);
            let pre = [
                a_inv[0][0] as f64 * rel[0] + a_inv[0][1] as f64 * rel[1],
                a_inv[1][0] as f64 * rel[0] + a_inv[1][1] as f64 * rel[1],
            ];
            assert!(pre[0] > -1e-12 && pre[1] > -1e-12 && pre[0] + pre[1] < 0.2 + 1e-12);
        }
    }

    #[test]
    fn toric_ball_inverse_round_trip() {
        for (v, a) in [
            ([0.5, 0.0], CORNER_RIGHT),
            ([0.0, 0.5], CORNER_TOP),
        ] {
            let tri = MomentTriangle::new(v, a, 0.25).unwrap();
            let b = toric_ball(&tri).unwrap();
            let cloud = SampleCloud::ball(11, 500, b.radius, 0.0);
            for x in &cloud.points {
                let p = b.point(x);
                let y = b.preimage(&p).unwrap();
                let d: f64 = x.iter().zip(&y).map(|(s, t)| (s - t).abs()).fold(0.0, f64::max);
                assert!(d < 1e-9, "round trip error {d} at {x:?}");
            }
        }
    }

    #[test]
    fn karshon_two_and_three_ball_fill_fractions() {
        let p = karshon_packing(KarshonSpec::TwoBalls { r1: 0.8 }).unwrap();
        let (f, se) = p.fill_fraction_mc(200_000, 42).unwrap();
        let expected = 0.8f64.powi(4) + 0.6f64.powi(4);
        assert!((f - expected).abs() < 3.0 * se + 2e-3, "fill {f} vs {expected}");

        let p = karshon_packing(KarshonSpec::ThreeBalls).unwrap();
        let (f, se) = p.fill_fraction_mc(200_000, 42).unwrap();
        assert!((f - 0.75).abs() < 3.0 * se + 2e-3, "fill {f}");
    }

    #[test]
    fn karshon_disjointness() {
        let p = karshon_packing(KarshonSpec::ThreeBalls).unwrap();
        assert_eq!(p.disjointness_violations(3000, 42), 0);
        let p = karshon_packing(KarshonSpec::TwoBalls { r1: 0.6 }).unwrap();
        assert_eq!(p.disjointness_violations(3000, 42), 0);
    }

    #[test]
    fn karshon_rejects_bad_radius() {
        assert!(karshon_packing(KarshonSpec::TwoBalls { r1: 1.0 }).is_err());
        assert!(karshon_packing(KarshonSpec::TwoBalls { r1: 0.0 }).is_err());
    }

    #[test]
    fn triangle_sat_disjointness() {
        let t = karshon_triangles(KarshonSpec::ThreeBalls).unwrap();
        assert!(triangles_interior_disjoint(&t[0], &t[1]));
        assert!(triangles_interior_disjoint(&t[0], &t[2]));
        assert!(triangles_interior_disjoint(&t[1], &t[2]));
        // overlapping pair: two identity corners with big legs
        let a = MomentTriangle::new([0.0, 0.0], IDENTITY, 0.3).unwrap();
        let b = MomentTriangle::new([0.0, 0.0], IDENTITY, 0.2).unwrap();
        assert!(!triangles_interior_disjoint(&a, &b));
    }

    #[test]
    fn equivalent_corners_have_equal_volume() {
        // AGL(2,Z) invariance: same leg at different corners, same MC volume
        let t1 = MomentTriangle::new([0.0, 0.0], IDENTITY, 0.2).unwrap();
        let t2 = MomentTriangle::new([0.5, 0.0], CORNER_RIGHT, 0.2).unwrap();
        let b1 = toric_ball(&t1).unwrap();
        let b2 = toric_ball(&t2).unwrap();
        let v1 = mc_volume(|p| b1.contains_image(p, 0.0), 150_000, 5).unwrap();
        let v2 = mc_volume(|p| b2.contains_image(p, 0.0), 150_000, 5).unwrap();
        assert!((v1.estimate - v2.estimate).abs() < 3.0 * (v1.stderr + v2.stderr) + 1e-3);
    }
}
