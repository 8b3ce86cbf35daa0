//! Ball embeddings, packings, pullback-defect sweeps and Monte-Carlo volume.

use std::sync::Arc;

use rayon::prelude::*;

use crate::projective::{fubini_study_rep, omega_std_c2, ProjectivePoint, C};
use crate::sampling::{self, SampleCloud};
use crate::{Error, Result};

/// Target space of an embedding: CP² with ω_FS, or ℂ² with the standard form
/// (used by model-space inclusions and the round sphere at radius 1, where
/// the chart ball degenerates).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ambient {
    FubiniStudy,
    StandardC2,
}

/// A point of the domain ball B(r) ⊂ ℂ², as (Re z₁, Im z₁, Re z₂, Im z₂).
pub type DomainPoint = [f64; 4];

pub fn domain_norm(x: &DomainPoint) -> f64 {
    (x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]).sqrt()
}

pub fn domain_to_c2(x: &DomainPoint) -> [C; 2] {
    [C::new(x[0], x[1]), C::new(x[2], x[3])]
}

type MapFn = dyn Fn(&DomainPoint) -> [C; 3] + Send + Sync;
type JacFn = dyn Fn(&DomainPoint) -> [[C; 3]; 4] + Send + Sync;
type ClearanceFn = dyn Fn(&DomainPoint) -> f64 + Send + Sync;
type InverseFn = dyn Fn(&ProjectivePoint) -> Option<DomainPoint> + Send + Sync;

/// A declared singular locus of the closed-ball extension, on the boundary
/// sphere |x| = r (or a curve for composite constructions).
#[derive(Clone, Debug)]
pub enum SingularLocus {
    Point(DomainPoint),
    Curve(String),
}

/// A symplectic ball embedding B(r) → CP² (or ℂ²).
///
/// `map` returns a homogeneous representative (for `Ambient::StandardC2` the
/// first two components are the image and the third is ignored). The
/// representative need not vary continuously across torus axes — only the
/// projective point does — so differential sweeps stay away from the
/// declared singular loci via `clearance`.
#[derive(Clone)]
pub struct BallEmbedding {
    pub name: String,
    pub radius: f64,
    pub ambient: Ambient,
    map: Arc<MapFn>,
    jacobian: Option<Arc<JacFn>>,
    pub singular_set: Vec<SingularLocus>,
    clearance: Option<Arc<ClearanceFn>>,
    inverse: Option<Arc<InverseFn>>,
    /// Preferred affine chart of the image (0, 1 or 2).
    pub chart_hint: usize,
}

impl BallEmbedding {
    pub fn new(
        name: impl Into<String>,
        radius: f64,
        ambient: Ambient,
        map: Arc<MapFn>,
    ) -> Self {
        BallEmbedding {
            name: name.into(),
            radius,
            ambient,
            map,
            jacobian: None,
            singular_set: Vec::new(),
            clearance: None,
            inverse: None,
            chart_hint: 2,
        }
    }

    pub fn with_jacobian(mut self, j: Arc<JacFn>) -> Self {
        self.jacobian = Some(j);
        self
    }

    pub fn with_clearance(mut self, c: Arc<ClearanceFn>) -> Self {
        self.clearance = Some(c);
        self
    }

    pub fn with_inverse(mut self, inv: Arc<InverseFn>) -> Self {
        self.inverse = Some(inv);
        self
    }

    pub fn with_singular(mut self, s: Vec<SingularLocus>) -> Self {
        self.singular_set = s;
        self
    }

    pub fn with_chart_hint(mut self, c: usize) -> Self {
        self.chart_hint = c;
        self
    }

    /// Raw homogeneous representative of the image.
    pub fn eval(&self, x: &DomainPoint) -> [C; 3] {
        (self.map)(x)
    }

    /// Image as a projective point (panics on a zero representative, which a
    /// valid construction never produces).
    pub fn point(&self, x: &DomainPoint) -> ProjectivePoint {
        ProjectivePoint::from_rep(self.eval(x)).expect("embedding produced zero representative")
    }

    pub fn has_jacobian(&self) -> bool {
        self.jacobian.is_some()
    }

    pub fn has_inverse(&self) -> bool {
        self.inverse.is_some()
    }

    /// Distance proxy from a domain point to the declared singular loci
    /// (infinite when nothing is declared).
    pub fn clearance(&self, x: &DomainPoint) -> f64 {
        match &self.clearance {
            Some(c) => c(x),
            None => f64::INFINITY,
        }
    }

    /// Domain preimage of an ambient point, when the construction provides a
    /// closed-form inverse chain. Returns points slightly outside the closed
    /// ball too (with |x| > r), which boundary-matching uses.
    pub fn preimage(&self, p: &ProjectivePoint) -> Option<DomainPoint> {
        self.inverse.as_ref().and_then(|inv| inv(p))
    }

    /// Open-ball membership of an ambient point, via the inverse chain.
    pub fn contains_image(&self, p: &ProjectivePoint, tol: f64) -> bool {
        match self.preimage(p) {
            Some(x) => domain_norm(&x) < self.radius - tol,
            None => false,
        }
    }

    /// Analytic differential if available, otherwise central differences with
    /// step `fd_step`. Columns are the pushforwards of ∂/∂x_k, as ambient
    /// representatives.
    pub fn differential(&self, x: &DomainPoint, fd_step: f64) -> [[C; 3]; 4] {
        match &self.jacobian {
            Some(j) => j(x),
            None => self.differential_fd(x, fd_step),
        }
    }

    pub fn differential_fd(&self, x: &DomainPoint, h: f64) -> [[C; 3]; 4] {
        let mut cols = [[C::new(0.0, 0.0); 3]; 4];
        for (k, col) in cols.iter_mut().enumerate() {
            let mut xp = *x;
            let mut xm = *x;
            xp[k] += h;
            xm[k] -= h;
            let (fp, fm) = ((self.map)(&xp), (self.map)(&xm));
            for i in 0..3 {
                col[i] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        cols
    }

    /// ω_ambient on two pushforward representatives at the image of x.
    pub fn ambient_form(&self, z: &[C; 3], a: &[C; 3], b: &[C; 3]) -> Result<f64> {
        match self.ambient {
            Ambient::FubiniStudy => fubini_study_rep(z, a, b),
            Ambient::StandardC2 => Ok(omega_std_c2(&[a[0], a[1]], &[b[0], b[1]])),
        }
    }
}

/// Differentiation mode of a defect sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiffMode {
    Analytic,
    FiniteDifference,
}

/// Result of a pullback-defect sweep.
#[derive(Clone, Debug)]
pub struct FormDefect {
    pub max_abs: f64,
    pub argmax_sample: usize,
    pub samples: usize,
    /// Samples where map evaluation produced non-finite values.
    pub failed_samples: Vec<usize>,
    /// Max discrepancy of the Richardson spot-check (FD mode, ~1% of samples).
    pub richardson_max: f64,
}

const OMEGA_STD_PAIRS: [(usize, usize, f64); 6] = [
    (0, 1, 1.0),
    (0, 2, 0.0),
    (0, 3, 0.0),
    (1, 2, 0.0),
    (1, 3, 0.0),
    (2, 3, 1.0),
];

fn defect_at(emb: &BallEmbedding, x: &DomainPoint, mode: DiffMode, h: f64) -> Option<f64> {
    let z = emb.eval(x);
    if !z.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
        return None;
    }
    let cols = match mode {
        DiffMode::Analytic => emb.differential(x, h),
        DiffMode::FiniteDifference => emb.differential_fd(x, h),
    };
    let mut worst = 0.0f64;
    for &(a, b, target) in &OMEGA_STD_PAIRS {
        let v = emb.ambient_form(&z, &cols[a], &cols[b]).ok()?;
        if !v.is_finite() {
            return None;
        }
        worst = worst.max((v - target).abs());
    }
    Some(worst)
}

/// Sweep (pullback of ω_ambient) − ω_standard over the sample cloud on the
/// fixed coordinate basis of the domain, returning the max absolute entry.
/// Samples within 1e-3 clearance of a declared singular locus are skipped;
/// failed evaluations are recorded, not fatal.
pub fn pullback_defect(
    emb: &BallEmbedding,
    cloud: &SampleCloud,
    mode: DiffMode,
    fd_step: f64,
) -> Result<FormDefect> {
    if mode == DiffMode::FiniteDifference && fd_step <= 0.0 {
        return Err(Error::Parameter("fd_step must be positive".into()));
    }
    if mode == DiffMode::Analytic && !emb.has_jacobian() {
        return Err(Error::Parameter(format!(
            "embedding '{}' has no analytic Jacobian",
            emb.name
        )));
    }
    let results: Vec<(usize, Option<f64>, f64)> = cloud
        .points
        .par_iter()
        .enumerate()
        .map(|(i, x)| {
            if emb.clearance(x) < 1e-3 {
                return (i, Some(0.0), 0.0);
            }
            let d = defect_at(emb, x, mode, fd_step);
            // Richardson spot-check on ~1% of samples in FD mode
            let rich = if mode == DiffMode::FiniteDifference && i % 100 == 0 {
                match (d, defect_at(emb, x, mode, fd_step * 0.5)) {
                    (Some(a), Some(b)) => (a - b).abs(),
                    _ => 0.0,
                }
            } else {
                0.0
            };
            (i, d, rich)
        })
        .collect();

    let mut max_abs = 0.0f64;
    let mut argmax = 0usize;
    let mut failed = Vec::new();
    let mut richardson_max = 0.0f64;
    for (i, d, rich) in results {
        match d {
            Some(v) => {
                if v > max_abs {
                    max_abs = v;
                    argmax = i;
                }
            }
            None => failed.push(i),
        }
        richardson_max = richardson_max.max(rich);
    }
    Ok(FormDefect {
        max_abs,
        argmax_sample: argmax,
        samples: cloud.points.len(),
        failed_samples: failed,
        richardson_max,
    })
}

/// Total symplectic volume of CP² under the line-area-π normalization.
pub const CP2_VOLUME: f64 = std::f64::consts::PI * std::f64::consts::PI / 2.0;

/// Monte-Carlo volume estimate of a region of CP².
#[derive(Clone, Copy, Debug)]
pub struct McVolume {
    pub estimate: f64,
    pub stderr: f64,
    pub inside: usize,
    pub samples: usize,
    /// Samples where the membership predicate panicked (counted as outside).
    pub predicate_failures: usize,
}

/// Unbiased Monte-Carlo estimate of ∫_region ω²/2 with Fubini–Study-uniform
/// sampling; deterministic given the seed. Predicate panics count the sample
/// as outside and are tallied.
pub fn mc_volume<F>(region: F, n: usize, seed: u64) -> Result<McVolume>
where
    F: Fn(&ProjectivePoint) -> bool + Sync,
{
    if n < 1000 {
        return Err(Error::Parameter("mc_volume needs n >= 1000".into()));
    }
    let region = &region;
    let (inside, failures) = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let p = ProjectivePoint {
                h: sampling::cp2_rep(seed, i),
            };
            match std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| region(&p))) {
                Ok(true) => (1usize, 0usize),
                Ok(false) => (0, 0),
                Err(_) => (0, 1),
            }
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let p_hat = inside as f64 / n as f64;
    Ok(McVolume {
        estimate: CP2_VOLUME * p_hat,
        stderr: CP2_VOLUME * (p_hat * (1.0 - p_hat) / n as f64).sqrt(),
        inside,
        samples: n,
        predicate_failures: failures,
    })
}

/// An ordered list of ball embeddings with the line-area-π normalization.
#[derive(Clone)]
pub struct Packing {
    pub label: String,
    pub balls: Vec<BallEmbedding>,
    pub normalization: &'static str,
    /// Construction choices worth surfacing in reports.
    pub construction_flags: Vec<String>,
}

impl Packing {
    pub fn new(label: impl Into<String>, balls: Vec<BallEmbedding>) -> Self {
        Packing {
            label: label.into(),
            balls,
            normalization: "line-area-pi",
            construction_flags: Vec::new(),
        }
    }

    /// Union membership via the balls' inverse chains.
    pub fn contains(&self, p: &ProjectivePoint, tol: f64) -> bool {
        self.balls.iter().any(|b| b.contains_image(p, tol))
    }

    /// MC estimate of the packing's total image volume.
    pub fn volume_mc(&self, n: usize, seed: u64) -> Result<McVolume> {
        mc_volume(|p| self.contains(p, 0.0), n, seed)
    }

    /// Fill fraction estimate (volume / vol CP²) with its standard error.
    pub fn fill_fraction_mc(&self, n: usize, seed: u64) -> Result<(f64, f64)> {
        let v = self.volume_mc(n, seed)?;
        Ok((v.estimate / CP2_VOLUME, v.stderr / CP2_VOLUME))
    }

    /// Count of interior cross-ball membership violations: interior samples
    /// of ball i whose image lies in the open interior of ball j (margin
    /// 1e-6, so boundary tangency does not trip it). Falls back to pairwise
    /// image-coincidence matching when a ball has no inverse chain.
    pub fn disjointness_violations(&self, samples_per_ball: usize, seed: u64) -> usize {
        let mut total = 0usize;
        for i in 0..self.balls.len() {
            let bi = &self.balls[i];
            let cloud = SampleCloud::ball(seed ^ (i as u64) << 32, samples_per_ball, bi.radius, 1e-6);
            for j in 0..self.balls.len() {
                if i == j {
                    continue;
                }
                let bj = &self.balls[j];
                if bj.has_inverse() {
                    total += cloud
                        .points
                        .par_iter()
                        .filter(|x| {
                            if bi.clearance(x) < 1e-6 {
                                return false;
                            }
                            let p = bi.point(x);
                            bj.contains_image(&p, 1e-6)
                        })
                        .count();
                } else if j > i {
                    // coincidence fallback: identical image points across balls
                    let other = SampleCloud::ball(seed ^ (j as u64) << 32, samples_per_ball, bj.radius, 1e-6);
                    let pts_j: Vec<ProjectivePoint> =
                        other.points.iter().map(|x| bj.point(x)).collect();
                    total += cloud
                        .points
                        .par_iter()
                        .filter(|x| {
                            let p = bi.point(x);
                            pts_j.iter().any(|q| p.chordal_distance(q) < 1e-9)
                        })
                        .count();
                }
            }
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity_ball(r: f64) -> BallEmbedding {
        BallEmbedding::new(
            "identity",
            r,
            Ambient::StandardC2,
            Arc::new(|x: &DomainPoint| {
                [
                    C::new(x[0], x[1]),
                    C::new(x[2], x[3]),
                    C::new(1.0, 0.0),
                ]
            }),
        )
        .with_jacobian(Arc::new(|_x: &DomainPoint| {
            let z = C::new(0.0, 0.0);
            [
                [C::new(1.0, 0.0), z, z],
                [C::new(0.0, 1.0), z, z],
                [z, C::new(1.0, 0.0), z],
                [z, C::new(0.0, 1.0), z],
            ]
        }))
    }

    #[test]
    fn identity_map_has_zero_defect() {
        let emb = identity_ball(1.0);
        let cloud = SampleCloud::ball(42, 2000, 1.0, 0.0);
        let d = pullback_defect(&emb, &cloud, DiffMode::Analytic, 0.0).unwrap();
        assert_eq!(d.max_abs, 0.0);
        assert!(d.failed_samples.is_empty());
        // finite differences of a linear map are exact to rounding
        let d = pullback_defect(&emb, &cloud, DiffMode::FiniteDifference, 1e-5).unwrap();
        assert!(d.max_abs < 1e-10);
    }

    #[test]
    fn defect_sweep_is_reproducible() {
        let emb = identity_ball(0.7);
        let a = pullback_defect(
            &emb,
            &SampleCloud::ball(7, 1000, 0.7, 0.0),
            DiffMode::FiniteDifference,
            1e-5,
        )
        .unwrap();
        let b = pullback_defect(
            &emb,
            &SampleCloud::ball(7, 1000, 0.7, 0.0),
            DiffMode::FiniteDifference,
            1e-5,
        )
        .unwrap();
        assert_eq!(a.max_abs, b.max_abs);
        assert_eq!(a.argmax_sample, b.argmax_sample);
    }

    #[test]
    fn mc_volume_total_and_empty() {
        let v = mc_volume(|_| true, 100_000, 42).unwrap();
        assert_eq!(v.estimate, CP2_VOLUME);
        assert_eq!(v.stderr, 0.0);
        let v = mc_volume(|_| false, 1000, 42).unwrap();
        assert_eq!(v.estimate, 0.0);
    }

    #[test]
    fn mc_volume_needs_enough_samples() {
        assert!(mc_volume(|_| true, 10, 42).is_err());
    }

    #[test]
    fn mc_volume_tallies_panics() {
        // silence the per-sample panic messages for this test
        let prev = std::panic::take_hook();
        std::panic::set_hook(Box::new(|_| {}));
        let v = mc_volume(
            |p| {
                if p.h[0].re > 0.0 {
                    panic!("boom")
                } else {
                    true
                }
            },
            1000,
            42,
        )
        .unwrap();
        std::panic::set_hook(prev);
        assert!(v.predicate_failures > 0);
        assert!(v.inside + v.predicate_failures <= 1000);
    }

    #[test]
    fn mc_volume_monotone_on_nested_regions() {
        // chart-disc regions of increasing size
        let reg = |rad: f64| {
            move |p: &ProjectivePoint| {
                let n = crate::projective::norm_sqr(&p.h);
                (p.h[0].norm_sqr() + p.h[1].norm_sqr()) / n < rad
            }
        };
        let a = mc_volume(reg(0.3), 50_000, 1).unwrap();
        let b = mc_volume(reg(0.6), 50_000, 1).unwrap();
        assert!(a.estimate <= b.estimate + 3.0 * (a.stderr + b.stderr));
    }
}
