//! Deterministic counter-based sampling.
//!
//! Two generators back all sweeps:
//! - hashed i.i.d. uniforms (`uniform`, `gaussian`) for Monte-Carlo volume
//!   estimates, where independence makes the reported standard error valid;
//! - a digit-scrambled Halton sequence (`Halton`) for defect/containment
//!   sweeps, where low discrepancy gives better sup-norm coverage.
//!
//! Both are pure functions of (seed, index), so sweeps are order-independent
//! and parallelize without any shared state.

pub const DEFAULT_SEED: u64 = 42;

/// Counter-based hash: two rounds of the splitmix64 finalizer over a
/// (seed, index, dim) tuple.
pub fn mix(seed: u64, index: u64, dim: u64) -> u64 {
    let mut z = seed
        ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ dim.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    for _ in 0..2 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
    }
    z
}

/// Uniform sample in [0, 1).
pub fn uniform(seed: u64, index: u64, dim: u64) -> f64 {
    (mix(seed, index, dim) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform sample in (0, 1] (safe as a log argument).
fn uniform_open(seed: u64, index: u64, dim: u64) -> f64 {
    ((mix(seed, index, dim) >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Standard gaussian via Box–Muller; consumes uniform dims (2d, 2d+1).
pub fn gaussian(seed: u64, index: u64, dim: u64) -> f64 {
    let u1 = uniform_open(seed, index, 2 * dim);
    let u2 = uniform(seed, index, 2 * dim + 1);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Uniform point on the unit sphere S³ ⊂ ℝ⁴ (4 normalized gaussians).
pub fn sphere3(seed: u64, index: u64) -> [f64; 4] {
    let g = [
        gaussian(seed, index, 0),
        gaussian(seed, index, 1),
        gaussian(seed, index, 2),
        gaussian(seed, index, 3),
    ];
    let n = (g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3])
        .sqrt()
        .max(1e-300);
    [g[0] / n, g[1] / n, g[2] / n, g[3] / n]
}

/// Uniform point in the open ball B(r) ⊂ ℝ⁴.
pub fn ball4(seed: u64, index: u64, r: f64) -> [f64; 4] {
    let s = sphere3(seed, index);
    let rho = r * uniform(seed, index, 8).powf(0.25);
    [s[0] * rho, s[1] * rho, s[2] * rho, s[3] * rho]
}

/// Fubini–Study-uniform homogeneous representative on CP² (6 gaussians on S⁵).
pub fn cp2_rep(seed: u64, index: u64) -> [num_complex::Complex64; 3] {
    let g: Vec<f64> = (0..6).map(|d| gaussian(seed, index, 10 + d)).collect();
    let n = g.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
    [
        num_complex::Complex64::new(g[0] / n, g[1] / n),
        num_complex::Complex64::new(g[2] / n, g[3] / n),
        num_complex::Complex64::new(g[4] / n, g[5] / n),
    ]
}

const HALTON_BASES: [u64; 6] = [2, 3, 5, 7, 11, 13];

/// Digit-scrambled Halton sequence. One digit permutation per base, derived
/// from the seed with a Fisher–Yates shuffle and pinned so that digit 0 maps
/// to 0 (keeps the radical inverse convergent).
pub struct Halton {
    perms: Vec<Vec<u64>>,
}

impl Halton {
    pub fn new(seed: u64, dims: usize) -> Self {
        assert!(dims <= HALTON_BASES.len(), "at most 6 Halton dimensions");
        let perms = HALTON_BASES[..dims]
            .iter()
            .map(|&b| {
                let mut p: Vec<u64> = (0..b).collect();
                for i in (1..b as usize).rev() {
                    let j = 1 + (mix(seed, b, i as u64) % i as u64) as usize;
                    p.swap(i, j);
                }
                // pin 0 → 0 so trailing zero digits contribute nothing
                let z = p.iter().position(|&x| x == 0).unwrap();
                p.swap(0, z);
                p
            })
            .collect();
        Halton { perms }
    }

    /// The index-th point of the sequence, components in [0, 1).
    pub fn point(&self, index: u64) -> Vec<f64> {
        self.perms
            .iter()
            .zip(HALTON_BASES.iter())
            .map(|(perm, &b)| {
                let mut n = index + 1; // skip the all-zeros point
                let mut inv = 0.0f64;
                let mut scale = 1.0 / b as f64;
                while n > 0 {
                    inv += perm[(n % b) as usize] as f64 * scale;
                    scale /= b as f64;
                    n /= b;
                }
                inv
            })
            .collect()
    }
}

/// A reproducible batch of domain sample points in ℝ⁴.
#[derive(Clone, Debug)]
pub struct SampleCloud {
    pub seed: u64,
    pub points: Vec<[f64; 4]>,
}

impl SampleCloud {
    /// Low-discrepancy samples in the ball B(r_eff), r_eff = r·(1 − margin).
    /// Uses Hopf coordinates on S³ (uniform area) and the r·u^{1/4} radial law.
    pub fn ball(seed: u64, count: usize, r: f64, margin: f64) -> Self {
        let h = Halton::new(seed, 4);
        let r_eff = r * (1.0 - margin);
        let points = (0..count as u64)
            .map(|i| {
                let u = h.point(i);
                let rho = r_eff * u[0].powf(0.25);
                let eta = u[3];
                let (a, b) = (std::f64::consts::TAU * u[1], std::f64::consts::TAU * u[2]);
                let (s1, s2) = (eta.sqrt(), (1.0 - eta).sqrt());
                [
                    rho * s1 * a.cos(),
                    rho * s1 * a.sin(),
                    rho * s2 * b.cos(),
                    rho * s2 * b.sin(),
                ]
            })
            .collect();
        SampleCloud { seed, points }
    }

    /// Low-discrepancy samples in the box Π [lo_i, hi_i) (first `dims` coords;
    /// remaining coordinates are zero).
    pub fn boxed(seed: u64, count: usize, lo: &[f64], hi: &[f64]) -> Self {
        let dims = lo.len();
        assert_eq!(dims, hi.len());
        assert!(dims <= 4);
        let h = Halton::new(seed, dims);
        let points = (0..count as u64)
            .map(|i| {
                let u = h.point(i);
                let mut p = [0.0; 4];
                for d in 0..dims {
                    p[d] = lo[d] + (hi[d] - lo[d]) * u[d];
                }
                p
            })
            .collect();
        SampleCloud { seed, points }
    }
}
