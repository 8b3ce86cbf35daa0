//! CP² with the Fubini–Study form normalized so a projective line has area π.

use num_complex::Complex64;

use crate::{Error, Result};

pub type C = Complex64;

/// Hermitian product ⟨a, b⟩ = Σ aᵢ·conj(bᵢ).
pub fn herm(a: &[C; 3], b: &[C; 3]) -> C {
    a[0] * b[0].conj() + a[1] * b[1].conj() + a[2] * b[2].conj()
}

pub fn norm_sqr(a: &[C; 3]) -> f64 {
    a[0].norm_sqr() + a[1].norm_sqr() + a[2].norm_sqr()
}

/// A point of CP² in homogeneous coordinates (any nonzero representative).
#[derive(Clone, Copy, Debug)]
pub struct ProjectivePoint {
    pub h: [C; 3],
}

impl ProjectivePoint {
    pub fn new(h0: C, h1: C, h2: C) -> Result<Self> {
        let h = [h0, h1, h2];
        if norm_sqr(&h) == 0.0 {
            return Err(Error::ZeroHomogeneous);
        }
        Ok(ProjectivePoint { h })
    }

    pub fn from_rep(h: [C; 3]) -> Result<Self> {
        Self::new(h[0], h[1], h[2])
    }

    /// Canonical representative: unit norm, first nonzero coordinate with
    /// zero phase.
    pub fn normalize(&self) -> Self {
        let n = norm_sqr(&self.h).sqrt();
        let mut h = [self.h[0] / n, self.h[1] / n, self.h[2] / n];
        let lead = h
            .iter()
            .find(|c| c.norm() > 1e-14)
            .copied()
            .unwrap_or(C::new(1.0, 0.0));
        let phase = lead.conj() / lead.norm();
        for c in &mut h {
            *c *= phase;
        }
        ProjectivePoint { h }
    }

    /// Chordal (Fubini–Study sine) distance in [0, 1]:
    /// √(1 − |⟨Z,W⟩|²/(|Z|²|W|²)).
    pub fn chordal_distance(&self, other: &ProjectivePoint) -> f64 {
        // √(1 − |⟨z,w⟩|²/(|z|²|w|²)) computed via the Lagrange identity
        // Σ_{i<j} |zᵢwⱼ − zⱼwᵢ|² = |z|²|w|² − |⟨z,w⟩|², which stays accurate
        // for nearly identical points
        let (z, w) = (&self.h, &other.h);
        let mut cross = 0.0;
        for i in 0..3 {
            for j in (i + 1)..3 {
                cross += (z[i] * w[j] - z[j] * w[i]).norm_sqr();
            }
        }
        (cross / (norm_sqr(z) * norm_sqr(w))).min(1.0).sqrt()
    }
}

/// A tangent vector of CP² as an ambient representative in ℂ³ modulo the
/// base line (the base-line component is projected out on evaluation).
#[derive(Clone, Copy, Debug)]
pub struct TangentVector {
    pub base: ProjectivePoint,
    pub v: [C; 3],
}

fn project_out(z: &[C; 3], x: &[C; 3], n2: f64) -> [C; 3] {
    let c = herm(x, z) / n2;
    [x[0] - c * z[0], x[1] - c * z[1], x[2] - c * z[2]]
}

/// ω_FS evaluated at the point with representative `z` on ambient tangent
/// representatives `x`, `y`. Scale-invariant in all three arguments; the
/// components of x, y along z are projected out, so any smooth lift of a
/// curve of representatives is a valid input.
pub fn fubini_study_rep(z: &[C; 3], x: &[C; 3], y: &[C; 3]) -> Result<f64> {
    let n2 = norm_sqr(z);
    if n2 == 0.0 {
        return Err(Error::ZeroHomogeneous);
    }
    let xp = project_out(z, x, n2);
    let yp = project_out(z, y, n2);
    Ok(herm(&yp, &xp).im / n2)
}

/// ω_FS(v, w) for tangent vectors based at the same point.
pub fn fubini_study(p: &ProjectivePoint, v: &TangentVector, w: &TangentVector) -> Result<f64> {
    fubini_study_rep(&p.h, &v.v, &w.v)
}

/// ω_standard on ℂ² (= Σ dxᵢ∧dyᵢ) on real tangent vectors given as complex
/// pairs: ω(X, Y) = Im Σ conj(Xᵢ)·Yᵢ.
pub fn omega_std_c2(x: &[C; 2], y: &[C; 2]) -> f64 {
    (x[0].conj() * y[0] + x[1].conj() * y[1]).im
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::adaptive_simpson;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn zero_vector_rejected() {
        assert!(ProjectivePoint::new(c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn normalize_is_canonical() {
        let p = ProjectivePoint::new(c(0.0, 0.0), c(0.0, 2.0), c(3.0, -1.0)).unwrap();
        let n = p.normalize();
        assert!((norm_sqr(&n.h) - 1.0).abs() < 1e-14);
        // first nonzero coordinate has zero phase
        assert!(n.h[1].im.abs() < 1e-14 && n.h[1].re > 0.0);
        // same projective point
        assert!(p.chordal_distance(&n) < 1e-12);
    }

    #[test]
    fn form_is_antisymmetric_and_kills_diagonal() {
        let z = [c(1.0, 0.2), c(-0.3, 0.7), c(0.1, -0.4)];
        let x = [c(0.5, -1.0), c(0.2, 0.3), c(-0.7, 0.1)];
        let y = [c(-0.1, 0.9), c(1.2, -0.2), c(0.4, 0.6)];
        let a = fubini_study_rep(&z, &x, &y).unwrap();
        let b = fubini_study_rep(&z, &y, &x).unwrap();
        assert!((a + b).abs() < 1e-15);
        assert!(fubini_study_rep(&z, &x, &x).unwrap().abs() < 1e-15);
    }

    #[test]
    fn form_is_scale_invariant() {
        let z = [c(1.0, 0.2), c(-0.3, 0.7), c(0.1, -0.4)];
        let x = [c(0.5, -1.0), c(0.2, 0.3), c(-0.7, 0.1)];
        let y = [c(-0.1, 0.9), c(1.2, -0.2), c(0.4, 0.6)];
        let a = fubini_study_rep(&z, &x, &y).unwrap();
        let s = c(2.0, -3.0);
        let zs = [z[0] * s, z[1] * s, z[2] * s];
        // tangent reps of the rescaled lift: s·x is a lift of the same vector
        let xs = [x[0] * s, x[1] * s, x[2] * s];
        let ys = [y[0] * s, y[1] * s, y[2] * s];
        let b = fubini_study_rep(&zs, &xs, &ys).unwrap();
        assert!((a - b).abs() < 1e-13, "{a} vs {b}");
    }

    #[test]
    fn fiber_directions_evaluate_to_zero() {
        // i·z is tangent to the Hopf fiber; projecting out z must kill it
        let z = [c(1.0, 0.2), c(-0.3, 0.7), c(0.1, -0.4)];
        let iz = [z[0] * c(0.0, 1.0), z[1] * c(0.0, 1.0), z[2] * c(0.0, 1.0)];
        let y = [c(-0.1, 0.9), c(1.2, -0.2), c(0.4, 0.6)];
        assert!(fubini_study_rep(&z, &iz, &y).unwrap().abs() < 1e-15);
    }

    /// Oracle: the line {h2 = 0} has area π. Covered by the two unit-disc
    /// charts t ↦ [1:t:0] and t ↦ [t:1:0], each of area π/2 by symmetry;
    /// integrate the first numerically in polar coordinates.
    #[test]
    fn line_area_is_pi() {
        let density = |re: f64, im: f64| -> f64 {
            let z = [c(1.0, 0.0), c(re, im), c(0.0, 0.0)];
            let x = [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)];
            let y = [c(0.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)];
            fubini_study_rep(&z, &x, &y).unwrap()
        };
        let radial = |rho: f64| -> f64 {
            let ang =
                adaptive_simpson(&|t: f64| density(rho * t.cos(), rho * t.sin()), 0.0, std::f64::consts::TAU, 1e-9);
            rho * ang
        };
        let half = adaptive_simpson(&radial, 0.0, 1.0, 1e-8);
        let area = 2.0 * half;
        assert!(
            (area - std::f64::consts::PI).abs() < 1e-6,
            "line area {area}"
        );
    }

    #[test]
    fn chart_independence() {
        // evaluate ω on the same tangent pair through two different lifts
        // (differing by a chart rescaling z → z/h0 vs z → z/h2)
        for i in 0..100u64 {
            let z = crate::sampling::cp2_rep(77, i);
            if z[0].norm() < 0.1 || z[2].norm() < 0.1 {
                continue;
            }
            let x = crate::sampling::cp2_rep(78, i);
            let y = crate::sampling::cp2_rep(79, i);
            let a = fubini_study_rep(&z, &x, &y).unwrap();
            // lift through chart 0: rep w = z/z0; tangent transforms with the
            // same scalar plus a multiple of z, which is projected out
            let s = z[0].inv();
            let zs = [z[0] * s, z[1] * s, z[2] * s];
            let xs = [x[0] * s, x[1] * s, x[2] * s];
            let ys = [y[0] * s, y[1] * s, y[2] * s];
            let b = fubini_study_rep(&zs, &xs, &ys).unwrap();
            assert!((a - b).abs() < 1e-12, "sample {i}: {a} vs {b}");
        }
    }
}
